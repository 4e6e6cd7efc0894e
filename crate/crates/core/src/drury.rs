//! Polynomials in the Drury-Arveson space `H²_d` with exact monomial norms.
//!
//! The monomials are orthogonal with `‖z^α‖² = α!/|α|!`, the reciprocal of a
//! multinomial coefficient. For `|α| ≤ 30` the multinomial fits in a `u128`,
//! so each weight is computed exactly and rounded once.
//!
//! Coordinates are 0-based: `z_0, …, z_{d−1}`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianSpectrum};

/// Largest total degree with exact weights.
pub const DEGREE_CAP: usize = 30;

/// `|α|! / α!`, exact.
pub fn multinomial(alpha: &[u32]) -> Result<u128> {
    let total: usize = alpha.iter().map(|&a| a as usize).sum();
    if total > DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: total,
            cap: DEGREE_CAP,
        });
    }
    // product of binomials C(a_0 + … + a_i, a_i), each step exact
    let mut acc: u128 = 1;
    let mut running: u128 = 0;
    for &a in alpha {
        for j in 1..=u128::from(a) {
            running += 1;
            acc = acc * running / j;
        }
    }
    Ok(acc)
}

/// `‖z^α‖²`.
pub fn monomial_norm_sq(alpha: &[u32]) -> Result<f64> {
    Ok(1.0 / multinomial(alpha)? as f64)
}

/// A polynomial in `d` variables as a sparse map from multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl MonomialPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(vec![0; dim], Complex64::new(1.0, 0.0)).expect("degree 0")
    }

    /// `c·z^α`.
    pub fn monomial(alpha: Vec<u32>, coeff: Complex64) -> Result<Self> {
        let degree: usize = alpha.iter().map(|&a| a as usize).sum();
        if degree > DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree,
                cap: DEGREE_CAP,
            });
        }
        let mut p = Self::zero(alpha.len());
        p.add_term(alpha, coeff);
        Ok(p)
    }

    /// The coordinate function `z_i`.
    pub fn coordinate(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: i + 1,
            });
        }
        let mut alpha = vec![0; dim];
        alpha[i] = 1;
        Self::monomial(alpha, Complex64::new(1.0, 0.0))
    }

    fn add_term(&mut self, alpha: Vec<u32>, coeff: Complex64) {
        if coeff == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry(alpha).or_insert(Complex64::new(0.0, 0.0));
        *slot += coeff;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Complex64> {
        &self.terms
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|a| a.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * s);
        }
        out
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    /// `⟨p, q⟩ = Σ_α p_α q̄_α ‖z^α‖²`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_dim(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, c) in &self.terms {
            if let Some(d) = other.terms.get(a) {
                acc += c * d.conj() * monomial_norm_sq(a)?;
            }
        }
        Ok(acc)
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let degree = self.degree() + other.degree();
        if degree > DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree,
                cap: DEGREE_CAP,
            });
        }
        let mut out = Self::zero(self.dim);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), c * d);
            }
        }
        Ok(out)
    }
}

fn check_coord(p: &MonomialPoly, i: usize) -> Result<()> {
    if i >= p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            got: i + 1,
        });
    }
    Ok(())
}

/// Exact weighted sum `Σ |c_α|² α!/|α|!`.
pub fn da_norm_sq(p: &MonomialPoly) -> Result<f64> {
    p.terms
        .iter()
        .map(|(a, c)| Ok(c.norm_sqr() * monomial_norm_sq(a)?))
        .sum()
}

/// Multiplication by `z_i`.
pub fn coord_mult(p: &MonomialPoly, i: usize) -> Result<MonomialPoly> {
    check_coord(p, i)?;
    if p.degree() + 1 > DEGREE_CAP && !p.terms.is_empty() {
        return Err(Error::DegreeCap {
            degree: p.degree() + 1,
            cap: DEGREE_CAP,
        });
    }
    let mut out = MonomialPoly::zero(p.dim);
    for (a, c) in &p.terms {
        let mut b = a.clone();
        b[i] += 1;
        out.add_term(b, *c);
    }
    Ok(out)
}

/// The adjoint of [`coord_mult`]: `z^α ↦ (α_i/|α|) z^{α−e_i}`.
pub fn coord_adjoint(p: &MonomialPoly, i: usize) -> Result<MonomialPoly> {
    check_coord(p, i)?;
    let mut out = MonomialPoly::zero(p.dim);
    for (a, c) in &p.terms {
        if a[i] == 0 {
            continue;
        }
        let total: u32 = a.iter().sum();
        let mut b = a.clone();
        b[i] -= 1;
        out.add_term(b, c * (f64::from(a[i]) / f64::from(total)));
    }
    Ok(out)
}

/// Adjoint of multiplication by `φ`, assembled from coordinate adjoints.
pub fn mult_adjoint(phi: &MonomialPoly, p: &MonomialPoly) -> Result<MonomialPoly> {
    phi.same_dim(p)?;
    let mut out = MonomialPoly::zero(p.dim);
    for (beta, c) in &phi.terms {
        let mut q = p.clone();
        for (i, &k) in beta.iter().enumerate() {
            for _ in 0..k {
                q = coord_adjoint(&q, i)?;
            }
        }
        out = out.add(&q.scale(c.conj()))?;
    }
    Ok(out)
}

/// Partial sums for `f₁(z₁, z₂) = z₂ g(z₁)` with `g = Σ c_k z₁^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CounterexampleGrowth {
    pub n: usize,
    /// `Σ_{k≤N} |c_k|²/(k+1) = ‖z₂ P_N g‖²`, bounded when `f₁ ∈ H²₂`.
    pub f1_norm_sq: f64,
    /// `Σ_{k≤N} |c_k|² = ‖P_N g‖²`, unbounded when `1 ∉ Dom h`.
    pub g_norm_sq: f64,
}

/// Both partial sums for `N = coeffs.len() − 1`.
///
/// Weights are `‖z₂ z₁^k‖² = 1/(k+1)` and `‖z₁^k‖² = 1`, valid for every
/// `k` and matching [`da_norm_sq`] exactly within its cap.
pub fn counterexample_growth(coeffs: &[Complex64]) -> CounterexampleGrowth {
    let (mut f1, mut g) = (0.0, 0.0);
    for (k, c) in coeffs.iter().enumerate() {
        f1 += c.norm_sqr() / (k as f64 + 1.0);
        g += c.norm_sqr();
    }
    CounterexampleGrowth {
        n: coeffs.len().saturating_sub(1),
        f1_norm_sq: f1,
        g_norm_sq: g,
    }
}

/// All multi-indices in `dim` variables with total degree `≤ cap`, graded.
pub fn multi_indices(dim: usize, cap: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, dim: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a);
            rec(prefix, dim, left - a, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    for total in 0..=cap as u32 {
        rec(&mut Vec::new(), dim, total, &mut out);
    }
    out
}

/// `λ_min` of `M_φ* M_φ − M_φ M_φ*` on polynomials of degree `≤ cap`.
///
/// The form `‖φ f‖² − ‖M_φ* f‖²` is exact on this subspace: `φ f` lives in
/// degree `≤ cap + deg φ` and `M_φ* f` in degree `≤ cap`.
pub fn hyponormality_gap(phi: &MonomialPoly, cap: usize) -> Result<f64> {
    let padded = cap + phi.degree();
    if padded > DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: padded,
            cap: DEGREE_CAP,
        });
    }
    let basis: Vec<MonomialPoly> = multi_indices(phi.dim, cap)
        .into_iter()
        .map(|a| {
            let w = monomial_norm_sq(&a)?;
            MonomialPoly::monomial(a, Complex64::new(1.0 / w.sqrt(), 0.0))
        })
        .collect::<Result<_>>()?;
    let fwd: Vec<MonomialPoly> = basis.iter().map(|e| phi.mul(e)).collect::<Result<_>>()?;
    let back: Vec<MonomialPoly> = basis
        .iter()
        .map(|e| mult_adjoint(phi, e))
        .collect::<Result<_>>()?;
    let n = basis.len();
    let mut gap = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            gap[(r, c)] = fwd[c].inner(&fwd[r])? - back[c].inner(&back[r])?;
        }
    }
    Ok(HermitianSpectrum::new(&gap).min())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn z2_z1n(n: u32) -> MonomialPoly {
        MonomialPoly::monomial(vec![n, 1], c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn basic_norms() {
        assert_eq!(da_norm_sq(&MonomialPoly::one(2)).unwrap(), 1.0);
        assert_eq!(
            da_norm_sq(&MonomialPoly::coordinate(2, 1).unwrap()).unwrap(),
            1.0
        );
        assert_eq!(da_norm_sq(&z2_z1n(3)).unwrap(), 0.25);
    }

    #[test]
    fn z2_z1n_is_harmonic_weight() {
        for n in 0..30 {
            assert_eq!(
                da_norm_sq(&z2_z1n(n)).unwrap(),
                1.0 / f64::from(n + 1),
                "n = {n}"
            );
        }
        assert!(matches!(
            da_norm_sq(&MonomialPoly {
                dim: 2,
                terms: [(vec![30, 1], c(1.0, 0.0))].into()
            }),
            Err(Error::DegreeCap {
                degree: 31,
                cap: 30
            })
        ));
    }

    #[test]
    fn multinomial_brute_force() {
        fn fact(n: u32) -> u128 {
            (1..=u128::from(n)).product()
        }
        for alpha in multi_indices(3, 12) {
            let total: u32 = alpha.iter().sum();
            let want = fact(total) / alpha.iter().map(|&a| fact(a)).product::<u128>();
            assert_eq!(multinomial(&alpha).unwrap(), want);
        }
        assert_eq!(multinomial(&[15, 15]).unwrap(), 155_117_520);
    }

    #[test]
    fn coordinate_ops() {
        let z1z2 = MonomialPoly::monomial(vec![1, 1], c(1.0, 0.0)).unwrap();
        let adj = coord_adjoint(&z1z2, 0).unwrap();
        assert_eq!(
            adj,
            MonomialPoly::monomial(vec![0, 1], c(0.5, 0.0)).unwrap()
        );
        assert_eq!(
            coord_adjoint(&MonomialPoly::one(2), 1).unwrap(),
            MonomialPoly::zero(2)
        );
        let z1 = MonomialPoly::coordinate(2, 0).unwrap();
        assert_eq!(
            coord_mult(&z1, 0).unwrap(),
            MonomialPoly::monomial(vec![2, 0], c(1.0, 0.0)).unwrap()
        );
        assert!(coord_mult(&z1, 2).is_err());
    }

    #[test]
    fn counterexample_sums() {
        let cs: Vec<Complex64> = (0..4)
            .map(|k| c(1.0 / (k as f64 + 1.0).sqrt(), 0.0))
            .collect();
        let g = counterexample_growth(&cs);
        assert!((g.f1_norm_sq - (1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0)).abs() < 1e-15);
        assert!((g.g_norm_sq - (1.0 + 0.5 + 1.0 / 3.0 + 0.25)).abs() < 1e-15);
        let mut delta = vec![c(0.0, 0.0); 50];
        delta[0] = c(1.0, 0.0);
        let g = counterexample_growth(&delta);
        assert_eq!((g.f1_norm_sq, g.g_norm_sq), (1.0, 1.0));
    }

    #[test]
    fn counterexample_weights_match_exact_norms() {
        let cs: Vec<Complex64> = (0..30).map(|k| c(0.3, -(k as f64))).collect();
        let g = counterexample_growth(&cs);
        let mut f1 = MonomialPoly::zero(2);
        for (k, ck) in cs.iter().enumerate() {
            f1 = f1
                .add(&MonomialPoly::monomial(vec![k as u32, 1], *ck).unwrap())
                .unwrap();
        }
        let exact = da_norm_sq(&f1).unwrap();
        assert!((g.f1_norm_sq - exact).abs() <= 1e-14 * exact);
    }

    #[test]
    fn multi_index_count() {
        // C(cap + d, d)
        assert_eq!(multi_indices(2, 4).len(), 15);
        assert_eq!(multi_indices(3, 3).len(), 20);
    }

    #[test]
    fn gap_of_constant_is_zero() {
        let p = MonomialPoly::one(2).scale(c(0.7, -1.1));
        assert!(hyponormality_gap(&p, 4).unwrap().abs() < 1e-12);
    }

    #[test]
    fn gap_of_coordinate_matches_diagonal_formula() {
        let z1 = MonomialPoly::coordinate(2, 0).unwrap();
        let gap = hyponormality_gap(&z1, 4).unwrap();
        let brute = multi_indices(2, 4)
            .iter()
            .map(|a| {
                let t = f64::from(a[0] + a[1]);
                let first = (f64::from(a[0]) + 1.0) / (t + 1.0);
                let second = if t == 0.0 { 0.0 } else { f64::from(a[0]) / t };
                first - second
            })
            .fold(f64::INFINITY, f64::min);
        assert!((gap - brute).abs() < 1e-12);
        assert!(gap >= -1e-12);
    }

    #[test]
    fn gap_padding_cap() {
        let z1 = MonomialPoly::coordinate(2, 0).unwrap();
        assert!(matches!(
            hyponormality_gap(&z1, 30),
            Err(Error::DegreeCap { degree: 31, .. })
        ));
    }
}
