use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::gram::GramBasis;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::C64;

/// Relative singular-value cutoff when extracting an orthonormal basis.
pub const SPAN_TOL: f64 = 1e-12;
/// Condition number above which least-squares solves carry a warning.
pub const COND_WARN: f64 = 1e10;

/// `M_n = {p : deg p <= n, p(a) = 0}` with the spanning set
/// `(z - a) z^j`, `0 <= j < n`, and an `L^2(mu)`-orthonormal basis.
#[derive(Debug, Clone)]
pub struct SubspaceTruncation {
    pub a: C64,
    pub n: usize,
    /// Coefficient vectors of `(z - a) z^j`, each of length `n + 1`.
    pub basis_coeffs: Vec<Vec<C64>>,
    /// Coefficient vectors of an orthonormal basis of the numerical span.
    pub orthonormal: Vec<Vec<C64>>,
    pub rank: usize,
    /// True when `|a| >= 1`; the construction is meant for `a` in the disk.
    pub degenerate_a: bool,
}

/// Orthonormal basis of the span of `cols` (coefficient vectors of length
/// `n + 1`): Euclidean basis `Q` of `W B` and coefficient matrix `C` with `W C = Q`.
struct Span {
    q: DMatrix<C64>,
    coeffs: DMatrix<C64>,
}

fn orthonormal_span(gb: &GramBasis, cols: &[Vec<C64>]) -> Span {
    let size = gb.n + 1;
    if cols.is_empty() {
        return Span {
            q: DMatrix::zeros(gb.rank, 0),
            coeffs: DMatrix::zeros(size, 0),
        };
    }
    let b = DMatrix::from_fn(size, cols.len(), |i, j| cols[j].get(i).copied().unwrap_or_default());
    let y = gb.coords() * &b;
    let rows = y.nrows();
    let svd = y.svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > SPAN_TOL * smax)
        .collect();
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let mut q = DMatrix::zeros(rows, keep.len());
    let mut coeffs = DMatrix::zeros(size, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        q.set_column(c, &u.column(i));
        let v = vt.row(i).adjoint();
        let col = &b * v / C64::new(svd.singular_values[i], 0.0);
        coeffs.set_column(c, &col);
    }
    Span { q, coeffs }
}

fn shifted(h: &Poly, j: usize, size: usize) -> Vec<C64> {
    h.shift(j).padded(size)
}

pub fn subspace_basis(gb: &GramBasis, a: C64) -> Result<SubspaceTruncation> {
    let n = gb.n;
    let size = n + 1;
    let h = Poly::linear_root(a);
    let basis_coeffs: Vec<Vec<C64>> = (0..n).map(|j| shifted(&h, j, size)).collect();
    let span = orthonormal_span(gb, &basis_coeffs);
    let orthonormal = (0..span.coeffs.ncols())
        .map(|c| span.coeffs.column(c).iter().copied().collect())
        .collect();
    Ok(SubspaceTruncation {
        a,
        n,
        basis_coeffs,
        orthonormal,
        rank: span.coeffs.ncols(),
        degenerate_a: a.norm() >= 1.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WanderingRecord {
    pub n: usize,
    pub dim: usize,
    /// Singular values of `(I - P_{zM}) Q_M`, descending.
    pub singular_values: Vec<f64>,
    /// Unit-norm coefficient vector spanning `M_n ⊖ z M_{n-1}` when `dim = 1`.
    pub wandering_vector: Option<Vec<C64>>,
    pub degenerate_a: bool,
}

/// `dim(M_n ⊖ z M_{n-1})`, counted as singular values of the component of an
/// orthonormal basis of `M_n` orthogonal to `z M_{n-1}` above `svtol`.
pub fn wandering_dim(gb: &GramBasis, a: C64, svtol: f64) -> Result<WanderingRecord> {
    let n = gb.n;
    if n == 0 {
        return Err(Error::Domain("wandering subspace needs degree n >= 1".into()));
    }
    let size = n + 1;
    let h = Poly::linear_root(a);
    let m_cols: Vec<Vec<C64>> = (0..n).map(|j| shifted(&h, j, size)).collect();
    let z_cols: Vec<Vec<C64>> = (1..n).map(|j| shifted(&h, j, size)).collect();
    let m = orthonormal_span(gb, &m_cols);
    let z = orthonormal_span(gb, &z_cols);
    let overlap = z.q.adjoint() * &m.q;
    let x = &m.q - &z.q * &overlap;
    let svd = x.svd(true, true);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let dim = singular_values.iter().filter(|&&s| s > svtol).count();
    let wandering_vector = if dim == 1 {
        let top = order[0];
        let s = svd.singular_values[top];
        let v: DVector<C64> = svd.v_t.as_ref().expect("requested").row(top).adjoint();
        // Element Q_M v of M minus its projection Q_Z (Q_Z^* Q_M v) onto zM.
        let coeffs = &m.coeffs * &v - &z.coeffs * (&overlap * &v);
        Some(coeffs.iter().map(|c| c / s).collect())
    } else {
        None
    };
    Ok(WanderingRecord {
        n,
        dim,
        singular_values,
        wandering_vector,
        degenerate_a: a.norm() >= 1.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub distance: f64,
    /// Number of spanning vectors `h z^j`.
    pub span_size: usize,
    /// Condition number of the spanning set in `L^2(mu)`.
    pub condition: f64,
    pub warning: Option<String>,
}

/// `L^2(mu)` distance from `f` to `span{h z^j : deg(h z^j) <= span_degree}`,
/// by a truncated-SVD least-squares solve in the factor coordinates.
pub fn distance_to_cyclic(gb: &GramBasis, f: &[C64], h: &Poly, span_degree: usize) -> Result<DistanceRecord> {
    if span_degree > gb.n {
        return Err(Error::DegreeCap {
            requested: span_degree,
            max: gb.n,
        });
    }
    if h.is_zero() {
        return Err(Error::Domain("generator must be nonzero".into()));
    }
    let size = gb.n + 1;
    let yf = gb.embed(f)?;
    let cols: Vec<Vec<C64>> = (0..)
        .take_while(|j| h.degree() + j <= span_degree)
        .map(|j| shifted(h, j, size))
        .collect();
    if cols.is_empty() {
        return Ok(DistanceRecord {
            distance: yf.norm(),
            span_size: 0,
            condition: 1.0,
            warning: None,
        });
    }
    let b = DMatrix::from_fn(size, cols.len(), |i, j| cols[j][i]);
    let a = gb.coords() * b;
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = smax / smin;
    let sol = svd
        .solve(&yf, SPAN_TOL * smax)
        .map_err(|e| Error::Numerical(format!("least squares: {e}")))?;
    let resid = &yf - &a * sol;
    let warning = (condition > COND_WARN).then(|| {
        format!("spanning set condition number {condition:.3e}; solved with truncated SVD")
    });
    Ok(DistanceRecord {
        distance: resid.norm(),
        span_size: cols.len(),
        condition,
        warning,
    })
}
