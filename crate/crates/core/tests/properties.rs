use p2mu_core::hz::{g_alpha_roots, second_zero};
use p2mu_core::p2space::GramBasis;
use p2mu_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn disk_point() -> impl Strategy<Value = C64> {
    (0.0..0.95f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn unimodular() -> impl Strategy<Value = C64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| C64::from_polar(1.0, t))
}

fn mixed_measure(atom: C64, w: f64, alpha: u32) -> ComplexMeasure {
    let m = ComplexMeasure::arclength();
    let b = ComplexMeasure::bergman(alpha);
    let d = ComplexMeasure::dirac(atom, c(w, 0.0)).unwrap();
    m.add(&b).add(&d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moments_are_linear_and_conjugate_symmetric(
        atom in disk_point(), w in 0.1..2.0f64, alpha in 0u32..6,
        s in -2.0..2.0f64, j in 0usize..12, k in 0usize..12,
    ) {
        let mu = mixed_measure(atom, w, alpha);
        let nu = ComplexMeasure::bergman(alpha + 1);
        let combo = mu.add(&nu.scale(c(s, 0.0)));
        let lhs = combo.moment(j, k).unwrap();
        let rhs = mu.moment(j, k).unwrap() + s * nu.moment(j, k).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-13);
        let jk = mu.moment(j, k).unwrap();
        let kj = mu.moment(k, j).unwrap();
        prop_assert!((jk - kj.conj()).norm() < 1e-13);
    }

    #[test]
    fn reflection_is_an_involution(zeta in unimodular(), x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let lam = c(x, y);
        let back = reflect_tangent(zeta, reflect_tangent(zeta, lam).unwrap()).unwrap();
        prop_assert!((back - lam).norm() < 1e-14 * (1.0 + lam.norm()));
    }

    #[test]
    fn stolz_regions_are_nested(zeta in unimodular(), rho in 0.05..0.9f64, extra in 0.01..0.09f64, lam in disk_point()) {
        let small = StolzRegion::new(zeta, rho).unwrap();
        let big = StolzRegion::new(zeta, rho + extra).unwrap();
        if stolz_contains(&small, lam) {
            prop_assert!(stolz_contains(&big, lam));
        }
    }

    #[test]
    fn reflected_region_stays_outside_near_zeta(zeta in unimodular(), r in 0.1..0.9f64, d in 0.0..0.1f64, t in -1.5..1.5f64) {
        let s = StolzRegion::new(zeta, r).unwrap();
        let lam = zeta + d * zeta * C64::from_polar(1.0, t);
        if stolz_contains(&s.reflected(), lam) {
            prop_assert!(lam.norm() >= 1.0 - 1e-15);
        }
    }

    #[test]
    fn point_evaluation_grows_with_degree(atom in disk_point(), w in 0.1..2.0f64, lam in disk_point()) {
        let mu = mixed_measure(atom, w, 3);
        let top = gram(&mu, 16).unwrap();
        let mut prev = 0.0;
        for n in 0..=16 {
            let k = point_eval_norm(&top.truncate(n).unwrap(), lam);
            prop_assert!(k >= prev * (1.0 - 1e-10));
            prev = k;
        }
    }

    #[test]
    fn roots_reconstruct_the_numerator(r in 0.05..0.99f64, t in 0.0..std::f64::consts::TAU, alpha in 0u32..8) {
        let a = C64::from_polar(r, t);
        let p = HZParams { a, alpha, c: 0.3 };
        let roots = g_alpha_roots(&p).unwrap();
        prop_assert_eq!(roots.len(), alpha as usize + 2);
        let lead = (-a.conj()).powu(alpha + 2);
        let num = p.numerator();
        for i in 0..20 {
            let z = C64::from_polar(0.1 + 0.045 * i as f64, 1.3 * i as f64);
            let prod: C64 = roots.iter().map(|q| z - q).product::<C64>() * lead;
            prop_assert!((prod - num.eval(z)).norm() < 1e-10 * (1.0 + num.eval(z).norm()));
        }
        prop_assert_eq!(
            interior_zero_exists(&p),
            g_alpha_zeros(&p).unwrap().len() > 1
        );
    }
}

#[test]
fn vitali_selection_on_random_disks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let disks: Vec<Disk> = (0..200)
            .map(|_| {
                let center = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                Disk::new(center, rng.random_range(0.001..0.2)).unwrap()
            })
            .collect();
        let kept = vitali_3r_select(&disks).unwrap();
        for (i, a) in kept.iter().enumerate() {
            for b in &kept[i + 1..] {
                assert!(a.disjoint(b));
            }
        }
        for d in &disks {
            assert!(kept.iter().any(|k| !k.disjoint(d) && k.radius >= d.radius));
            assert!(kept.iter().any(|k| d.inside(&k.dilate(3.0))));
        }
    }
}

#[test]
fn pseudo_inverse_attains_the_supremum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mu = mixed_measure(c(0.3, 0.2), 0.7, 2);
    let n = 6;
    let gb = gram(&mu, n).unwrap();
    for lam in [c(0.5, 0.1), c(-0.8, 0.3), c(1.05, 0.0)] {
        let k2 = point_eval_norm(&gb, lam).powi(2);
        let ratio = |p: &[C64]| {
            let v: C64 = p.iter().enumerate().map(|(i, x)| x * lam.powu(i as u32)).sum();
            v.norm_sqr() / gb.norm_sq(p).unwrap()
        };
        let mut best = 0.0f64;
        for _ in 0..10_000 {
            let p: Vec<C64> = (0..=n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            best = best.max(ratio(&p));
        }
        assert!(best <= k2 * (1.0 + 1e-10), "random ratio {best} above k^2 = {k2}");
        // p(lam) = v^* p with v_k = conj(lam)^k, maximized by p = G^{-1} v.
        let ginv = gb.g.clone().try_inverse().unwrap();
        let e = nalgebra::DVector::from_fn(n + 1, |i, _| lam.conj().powu(i as u32));
        let star: Vec<C64> = (ginv * e).iter().copied().collect();
        let attained = ratio(&star);
        assert!(attained <= k2 * (1.0 + 1e-6) && attained >= k2 / (1.0 + 1e-6));
    }
}

#[test]
fn distances_shrink_with_the_span() {
    let mu = mixed_measure(c(0.2, -0.4), 0.5, 4);
    let gb: GramBasis = gram(&mu, 20).unwrap();
    let f: Vec<C64> = (0..=20).map(|k| c(0.8f64.powi(k), 0.0)).collect();
    let h = Poly::linear_root(c(0.3, 0.3));
    let mut prev = f64::INFINITY;
    for n in 1..=20 {
        let d = distance_to_cyclic(&gb, &f, &h, n).unwrap().distance;
        assert!(d <= prev + 1e-10);
        prev = d;
    }
}

#[test]
fn wandering_dimension_is_stable_for_mixed_measures() {
    let mu = mixed_measure(c(0.1, 0.6), 1.0, 2);
    for n in [1, 5, 10, 15] {
        let gb = gram(&mu, n).unwrap();
        assert_eq!(wandering_dim(&gb, c(0.4, -0.2), 1e-8).unwrap().dim, 1);
    }
}

#[test]
fn second_zero_is_a_root() {
    let p = HZParams::default();
    let z1 = second_zero(&p).unwrap();
    assert!(g_alpha_eval(&p, z1).unwrap().norm() < 1e-12);
}

#[test]
fn lens_principal_value_on_the_chord_is_the_mean_of_both_sides() {
    let omega = p2mu_core::geometry::lens_harmonic_measure(0.3).unwrap();
    for im in [0.4, -0.7, 0.05] {
        let z = c(0.3, im);
        let pv = cauchy_pv(&omega, z).unwrap().value;
        let h = c(1e-6, 0.0);
        let mean = 0.5 * (cauchy_pv(&omega, z + h).unwrap().value + cauchy_pv(&omega, z - h).unwrap().value);
        assert!((pv - mean).norm() < 1e-5, "im={im}: pv {pv} mean {mean}");
        for eps in [1e-3, 1e-4, 1e-5] {
            assert!(cauchy_eps(&omega, z, eps).unwrap().value.is_finite(), "eps={eps}");
        }
    }
}
