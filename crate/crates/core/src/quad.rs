//! Quadrature rules: Gauss-Legendre nodes, globally adaptive Gauss-Kronrod
//! (7/15) for complex integrands, and the doubling trapezoid rule for
//! periodic integrands.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::C64;

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: C64,
    pub error: f64,
}

impl Integral {
    pub fn zero() -> Self {
        Self {
            value: C64::new(0.0, 0.0),
            error: 0.0,
        }
    }
}

impl std::ops::Add for Integral {
    type Output = Integral;

    fn add(self, rhs: Integral) -> Integral {
        Integral {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

// Kronrod 15-point abscissae and weights, Gauss 7-point weights (QUADPACK).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> Integral {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kronrod += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    Integral {
        value: kronrod * h,
        error: ((kronrod - gauss) * h).norm(),
    }
}

struct Segment {
    a: f64,
    b: f64,
    est: Integral,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-10,
            max_segments: 2000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`, started
/// from `initial` equal panels. Bisects the worst panel until the summed
/// error estimate meets `max(abs, rel * |I|)` or the budget is exhausted.
pub fn integrate<F: FnMut(f64) -> C64>(
    mut f: F,
    a: f64,
    b: f64,
    initial: usize,
    tol: Tolerance,
) -> Integral {
    if a == b {
        return Integral::zero();
    }
    let initial = initial.max(1);
    let mut heap = BinaryHeap::with_capacity(tol.max_segments + initial);
    let step = (b - a) / initial as f64;
    for i in 0..initial {
        let lo = a + step * i as f64;
        let hi = if i + 1 == initial { b } else { lo + step };
        heap.push(Segment {
            a: lo,
            b: hi,
            est: gk15(&mut f, lo, hi),
        });
    }
    loop {
        let (value, error) = heap.iter().fold((C64::new(0.0, 0.0), 0.0), |acc, s| {
            (acc.0 + s.est.value, acc.1 + s.est.error)
        });
        if error <= tol.abs.max(tol.rel * value.norm()) || heap.len() >= tol.max_segments {
            return Integral { value, error };
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            heap.push(worst);
            let (value, error) = heap.iter().fold((C64::new(0.0, 0.0), 0.0), |acc, s| {
                (acc.0 + s.est.value, acc.1 + s.est.error)
            });
            return Integral { value, error };
        }
        heap.push(Segment {
            a: worst.a,
            b: mid,
            est: gk15(&mut f, worst.a, mid),
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            est: gk15(&mut f, mid, worst.b),
        });
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    initial: usize,
    tol: Tolerance,
) -> (f64, f64) {
    let r = integrate(|x| C64::new(f(x), 0.0), a, b, initial, tol);
    (r.value.re, r.error)
}

/// `int_0^{2 pi} f(theta) d theta` for a smooth periodic `f` by the trapezoid
/// rule, doubling the node count from 64 until successive values agree to
/// `tol` (absolute) or 2^20 nodes are reached.
pub fn integrate_periodic<F: FnMut(f64) -> C64>(mut f: F, tol: f64) -> Integral {
    let mut n = 64usize;
    let mut sum: C64 = (0..n).map(|i| f(2.0 * PI * i as f64 / n as f64)).sum();
    let mut prev = sum * (2.0 * PI / n as f64);
    loop {
        // Odd nodes of the refined grid.
        let extra: C64 = (0..n)
            .map(|i| f(2.0 * PI * (2 * i + 1) as f64 / (2 * n) as f64))
            .sum();
        sum += extra;
        n *= 2;
        let cur = sum * (2.0 * PI / n as f64);
        let diff = (cur - prev).norm();
        if diff <= tol || n >= 1 << 20 {
            return Integral {
                value: cur,
                error: diff,
            };
        }
        prev = cur;
    }
}
