use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::ComplexMeasure;
use crate::C64;

/// Relative rank tolerance: eigenvalues below `RANK_TOL * trace` are dropped.
pub const RANK_TOL: f64 = 1e-12;
/// Relative tolerance on negative eigenvalues before the Gram matrix is
/// declared indefinite.
pub const INDEFINITE_TOL: f64 = 1e-10;

/// Moment matrix `G[j][k] = <z^k, z^j>` of the monomials of degree at most
/// `n`, with its Hermitian eigendecomposition.
///
/// `coords` maps a coefficient vector `p` to `y = L^{1/2} V^* p` over the
/// retained eigenpairs, so that `||p||^2 = p^* G p = |y|^2`.
#[derive(Debug, Clone)]
pub struct GramBasis {
    pub n: usize,
    pub g: DMatrix<C64>,
    pub eigenvalues: Vec<f64>,
    pub rank: usize,
    pub rank_tol: f64,
    eigvecs: DMatrix<C64>,
    retained: Vec<usize>,
    coords: DMatrix<C64>,
}

impl GramBasis {
    pub fn from_matrix(g: DMatrix<C64>) -> Result<Self> {
        let size = g.nrows();
        if size == 0 || g.ncols() != size {
            return Err(Error::Domain("Gram matrix must be square and nonempty".into()));
        }
        let herm = (&g + g.adjoint()) * C64::new(0.5, 0.0);
        let trace: f64 = (0..size).map(|i| herm[(i, i)].re).sum();
        let eig = SymmetricEigen::new(herm.clone());
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -INDEFINITE_TOL * trace.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "Gram matrix is indefinite: eigenvalue {min:e} against trace {trace:e}"
            )));
        }
        let rank_tol = RANK_TOL * trace;
        let retained: Vec<usize> = (0..size).filter(|&i| eigenvalues[i] > rank_tol).collect();
        let mut coords = DMatrix::zeros(retained.len(), size);
        for (row, &i) in retained.iter().enumerate() {
            let s = eigenvalues[i].sqrt();
            for col in 0..size {
                coords[(row, col)] = eig.eigenvectors[(col, i)].conj() * s;
            }
        }
        Ok(Self {
            n: size - 1,
            g: herm,
            rank: retained.len(),
            eigenvalues,
            rank_tol,
            eigvecs: eig.eigenvectors,
            retained,
            coords,
        })
    }

    /// Leading `(m+1) x (m+1)` block, refactored.
    pub fn truncate(&self, m: usize) -> Result<Self> {
        if m > self.n {
            return Err(Error::DegreeCap { requested: m, max: self.n });
        }
        Self::from_matrix(self.g.view((0, 0), (m + 1, m + 1)).into_owned())
    }

    /// `L^{1/2} V^*` restricted to the retained eigenpairs.
    pub fn coords(&self) -> &DMatrix<C64> {
        &self.coords
    }

    /// Euclidean image of a coefficient vector (padded with zeros).
    pub fn embed(&self, p: &[C64]) -> Result<DVector<C64>> {
        if p.len() > self.n + 1 && p[self.n + 1..].iter().any(|c| *c != C64::new(0.0, 0.0)) {
            return Err(Error::DegreeCap {
                requested: p.len() - 1,
                max: self.n,
            });
        }
        let mut v = DVector::zeros(self.n + 1);
        for (i, c) in p.iter().take(self.n + 1).enumerate() {
            v[i] = *c;
        }
        Ok(&self.coords * v)
    }

    /// `p^* G p`.
    pub fn norm_sq(&self, p: &[C64]) -> Result<f64> {
        Ok(self.embed(p)?.norm_squared())
    }

    /// `<p, q> = q^* G p`.
    pub fn inner(&self, p: &[C64], q: &[C64]) -> Result<C64> {
        Ok(self.embed(q)?.dotc(&self.embed(p)?))
    }

    /// `v^* G^+ v` for a vector `v`.
    pub fn pinv_form(&self, v: &DVector<C64>) -> f64 {
        self.retained
            .iter()
            .map(|&i| self.eigvecs.column(i).dotc(v).norm_sqr() / self.eigenvalues[i])
            .sum()
    }
}

/// Moment matrix of `mu` up to degree `n`.
pub fn gram(mu: &ComplexMeasure, n: usize) -> Result<GramBasis> {
    let size = n + 1;
    let flat = mu.moment_matrix(n)?;
    GramBasis::from_matrix(DMatrix::from_row_slice(size, size, &flat))
}

/// `k_n(lam) = sup |p(lam)| / ||p||` over polynomials of degree at most `n`
/// in the column space of `G`: `sqrt(v^* G^+ v)` with `v_k = conj(lam)^k`.
pub fn point_eval_norm(gb: &GramBasis, lam: C64) -> f64 {
    let mut v = DVector::zeros(gb.n + 1);
    let mut acc = C64::new(1.0, 0.0);
    let lc = lam.conj();
    for k in 0..=gb.n {
        v[k] = acc;
        acc *= lc;
    }
    gb.pinv_form(&v).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BpeClass {
    Bounded,
    Divergent,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpeResult {
    pub class: BpeClass,
    /// `(n, k_n(lam))`.
    pub sequence: Vec<(usize, f64)>,
}

/// Power-law exponent of `k_n` in `n` treated as divergence.
pub const DIVERGENCE_SLOPE: f64 = 0.25;

/// Classify `lam` from `k_n(lam)` over increasing degrees: bounded when the
/// relative increments over the last three entries are all below
/// `growth_tol`, divergent when the log-log slope over them is at least
/// [`DIVERGENCE_SLOPE`].
pub fn bpe_classify(mu: &ComplexMeasure, lam: C64, n_list: &[usize], growth_tol: f64) -> Result<BpeResult> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("n_list must be nonempty and strictly increasing".into()));
    }
    let top = gram(mu, *n_list.last().expect("nonempty"))?;
    let mut sequence = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let gb = if n == top.n { top.clone() } else { top.truncate(n)? };
        sequence.push((n, point_eval_norm(&gb, lam)));
    }
    let tail = &sequence[sequence.len().saturating_sub(3)..];
    let class = if tail.len() < 3 {
        BpeClass::Undetermined
    } else if tail
        .windows(2)
        .all(|w| (w[1].1 - w[0].1).abs() <= growth_tol * w[0].1.abs())
    {
        BpeClass::Bounded
    } else {
        let x: Vec<f64> = tail.iter().map(|t| (t.0 as f64).ln()).collect();
        let y: Vec<f64> = tail.iter().map(|t| t.1.ln()).collect();
        let xm = x.iter().sum::<f64>() / 3.0;
        let ym = y.iter().sum::<f64>() / 3.0;
        let num: f64 = x.iter().zip(&y).map(|(a, b)| (a - xm) * (b - ym)).sum();
        let den: f64 = x.iter().map(|a| (a - xm) * (a - xm)).sum();
        if num / den >= DIVERGENCE_SLOPE {
            BpeClass::Divergent
        } else {
            BpeClass::Undetermined
        }
    };
    Ok(BpeResult { class, sequence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::bergman_moment;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gram_examples() {
        let gm = gram(&ComplexMeasure::arclength(), 6).unwrap();
        assert_eq!(gm.g, DMatrix::identity(7, 7));
        let ga = gram(&ComplexMeasure::bergman(5), 6).unwrap();
        for j in 0..7 {
            assert!((ga.g[(j, j)].re - bergman_moment(5, j)).abs() < 1e-16);
        }
        let d1 = gram(&ComplexMeasure::dirac(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), 4).unwrap();
        assert_eq!(d1.g, DMatrix::from_element(5, 5, c(1.0, 0.0)));
        assert_eq!(d1.rank, 1);
    }

    #[test]
    fn point_evaluations() {
        let m = ComplexMeasure::arclength();
        let g = gram(&m, 10).unwrap();
        assert!((point_eval_norm(&g, c(0.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((point_eval_norm(&g, c(1.0, 0.0)) - 11f64.sqrt()).abs() < 1e-13);
        let d1 = gram(&ComplexMeasure::dirac(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), 4).unwrap();
        assert!((point_eval_norm(&d1, c(1.0, 0.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classification() {
        let m = ComplexMeasure::arclength();
        let ns = [10, 20, 30, 40];
        let b = bpe_classify(&m, c(0.5, 0.0), &ns, 1e-6).unwrap();
        assert_eq!(b.class, BpeClass::Bounded);
        assert!((b.sequence[3].1.powi(2) - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(bpe_classify(&m, c(1.0, 0.0), &ns, 1e-6).unwrap().class, BpeClass::Divergent);
        assert_eq!(bpe_classify(&m, c(1.1, 0.0), &ns, 1e-6).unwrap().class, BpeClass::Divergent);
        assert!(bpe_classify(&m, c(0.5, 0.0), &[3, 2], 1e-6).is_err());
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let g = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(GramBasis::from_matrix(g), Err(Error::Numerical(_))));
    }
}
