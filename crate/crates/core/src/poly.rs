//! Polynomials in `z` and in `(z, conj(z))`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::C64;

/// Analytic polynomial `sum_k c_k z^k`, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = C64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// `z - a`.
    pub fn linear_root(a: C64) -> Self {
        Self::new(vec![-a, C64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Coefficient vector padded with zeros to length `len`.
    pub fn padded(&self, len: usize) -> Vec<C64> {
        let mut v = self.coeffs.clone();
        v.resize(len.max(v.len()), C64::new(0.0, 0.0));
        v
    }

    pub fn to_bipoly(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.add_term(k as u32, 0, c);
        }
        out
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if *c == C64::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let a = self.padded(n);
        let b = rhs.padded(n);
        Poly::new(a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }
}

/// Polynomial `sum c_{jk} z^j conj(z)^k`, kept sparse and in canonical order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), C64>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    /// `c z^j conj(z)^k`.
    pub fn term(j: u32, k: u32, c: C64) -> Self {
        let mut p = Self::zero();
        p.add_term(j, k, c);
        p
    }

    pub fn add_term(&mut self, j: u32, k: u32, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry((j, k)).or_insert(C64::new(0.0, 0.0));
        *entry += c;
        if *entry == C64::new(0.0, 0.0) {
            self.terms.remove(&(j, k));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, C64)> + '_ {
        self.terms.iter().map(|(&(j, k), &c)| (j, k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial is the constant 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)) == Some(&C64::new(1.0, 0.0))
    }

    /// Largest power of `z` or of `conj(z)` appearing.
    pub fn max_index(&self) -> usize {
        self.terms
            .keys()
            .map(|&(j, k)| j.max(k) as usize)
            .max()
            .unwrap_or(0)
    }

    /// True when `p(z)` is real for every `z`, i.e. `c_{jk} = conj(c_{kj})`.
    pub fn is_real_valued(&self) -> bool {
        self.terms.iter().all(|(&(j, k), &c)| {
            let mirror = self.terms.get(&(k, j)).copied().unwrap_or_default();
            (c - mirror.conj()).norm() == 0.0
        })
    }

    pub fn eval(&self, z: C64) -> C64 {
        if self.terms.is_empty() {
            return C64::new(0.0, 0.0);
        }
        let zb = z.conj();
        let max = self.max_index();
        let zp = powers(z, max);
        let zbp = powers(zb, max);
        self.terms
            .iter()
            .map(|(&(j, k), &c)| c * zp[j as usize] * zbp[k as usize])
            .sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero();
        for (j, k, c) in self.terms() {
            out.add_term(j, k, c * s);
        }
        out
    }

    /// Sum of coefficient moduli; bounds `|p(z)|` on the closed unit disk.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;

    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (j1, k1, c1) in self.terms() {
            for (j2, k2, c2) in rhs.terms() {
                out.add_term(j1 + j2, k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;

    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (j, k, c) in rhs.terms() {
            out.add_term(j, k, c);
        }
        out
    }
}

/// `[1, z, z^2, ..., z^n]`.
pub fn powers(z: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = C64::new(1.0, 0.0);
    for _ in 0..=n {
        out.push(acc);
        acc *= z;
    }
    out
}

// Wire form: list of `[j, k, [re, im]]`.
impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(u32, u32, [f64; 2])> = self
            .terms()
            .map(|(j, k, c)| (j, k, [c.re, c.im]))
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<(u32, u32, [f64; 2])> = Vec::deserialize(d)?;
        let mut p = BiPoly::zero();
        for (j, k, [re, im]) in v {
            p.add_term(j, k, C64::new(re, im));
        }
        Ok(p)
    }
}
