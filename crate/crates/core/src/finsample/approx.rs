//! Best approximation in Dom T* by kernel functions, and growth bounds.

use num_complex::Complex64;

use super::{FinSampleSpace, SampledMultiplier, FACTOR_FLOOR};
use crate::error::{Error, Result};
use crate::kernels::PointSet;
use crate::linalg::{CMatrix, CVector, PivotedCholesky};

/// Best approximation of `f` by `Σ c_j k_{x_j}` over a subset of the sample,
/// in the Dom T* norm.
#[derive(Clone, Debug)]
pub struct HbApprox {
    pub subset: Vec<usize>,
    pub coefficients: Vec<Complex64>,
    /// `‖f‖²_B − vᴴ G⁻¹ v`; may dip below zero by rounding.
    pub error_sq: f64,
}

impl FinSampleSpace {
    /// Least squares in the Gram matrix of the chosen kernels inside Dom T*.
    ///
    /// The data are the values of `f` and `T*f` on the sample together with
    /// `‖f‖² + ‖T*f‖²`; the pairing `⟨f, k_x⟩_B = f(x) + h(x)(T*f)(x)` makes
    /// this computable without any other knowledge of `f`.
    pub fn hb_best_approx(
        &self,
        h: &SampledMultiplier,
        f_values: &[Complex64],
        tstar_f_values: &[Complex64],
        norm_sq_f_b: f64,
        subset: &[usize],
    ) -> Result<HbApprox> {
        self.check_len(h.len())?;
        self.check_len(f_values.len())?;
        self.check_len(tstar_f_values.len())?;
        if let Some(&bad) = subset.iter().find(|&&i| i >= self.len()) {
            return Err(Error::Invalid(format!("subset index {bad} out of range")));
        }
        if subset.is_empty() {
            return Ok(HbApprox {
                subset: Vec::new(),
                coefficients: Vec::new(),
                error_sq: norm_sq_f_b,
            });
        }
        let m = subset.len();
        let hv = &h.values;
        let g = CMatrix::from_fn(m, m, |a, b| {
            let (i, j) = (subset[a], subset[b]);
            (Complex64::new(1.0, 0.0) + hv[i] * hv[j].conj()) * self.k[(i, j)]
        });
        let v = CVector::from_iterator(
            m,
            subset
                .iter()
                .map(|&i| f_values[i] + hv[i] * tstar_f_values[i]),
        );
        let gf = PivotedCholesky::new(&g, FACTOR_FLOOR)?;
        let coeffs = gf.solve_vec(&v);
        let captured = v.dotc(&coeffs).re;
        Ok(HbApprox {
            subset: subset.to_vec(),
            coefficients: coeffs.iter().copied().collect(),
            error_sq: norm_sq_f_b - captured,
        })
    }
}

/// Minimal growth constants `C(x) = (1 − |x|) log⁺|h(x)|` along a sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthCertificate {
    pub per_point: Vec<f64>,
    pub max: f64,
    /// Whether `C(x)` never decreases along the sequence.
    pub nondecreasing: bool,
}

/// `log|h|` for each value, for callers that have values rather than logs.
pub fn log_modulus(values: &[Complex64]) -> Vec<f64> {
    values.iter().map(|z| z.norm().ln()).collect()
}

/// Any function `g` with `|g(z)| ≤ exp(C/(1−|z|))` extending `h` must have
/// `C ≥ max C(x)`. Takes `log|h(x)|` so that values such as
/// `exp((1−|y|)^{-2})` do not overflow.
pub fn growth_certificate(pts: &PointSet, log_abs_h: &[f64]) -> Result<GrowthCertificate> {
    if pts.dim() > 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: pts.dim(),
        });
    }
    if log_abs_h.len() != pts.len() {
        return Err(Error::DimensionMismatch {
            expected: pts.len(),
            got: log_abs_h.len(),
        });
    }
    let per_point: Vec<f64> = pts
        .points()
        .iter()
        .zip(log_abs_h)
        .map(|(p, &l)| (1.0 - p.z().norm()) * l.max(0.0))
        .collect();
    let max = per_point.iter().copied().fold(0.0, f64::max);
    let nondecreasing = per_point.windows(2).all(|w| w[1] >= w[0]);
    Ok(GrowthCertificate {
        per_point,
        max,
        nondecreasing,
    })
}
