//! The Hardy space of the disk through Taylor coefficients and boundary grids.
//!
//! A [`DiskFunction`] keeps both representations: exact values on the `M`-th
//! roots of unity, and Taylor coefficients `c_0..c_N` with `N ≤ M/4`. Interior
//! evaluation and norms use the coefficients; boundary algebra (moduli,
//! products, quotients) uses the grid.

mod coeff;
mod constructive;
mod outer;

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use coeff::{
    dom_t_star_kernel_z, global_dom_t_star_kernel, polynomial_density_decay, tstar_solve,
    DensityPoint, TStarSolution,
};
pub use constructive::{constructive_hb_approx, ConstructiveApprox, UnitStep};
pub use outer::{approximate_unit, outer_from_modulus, pythagorean_mate, SmirnovSymbol, LOG_CLAMP};

/// Relative ℓ² mass of negative frequencies above which a boundary grid is
/// declared too coarse for the function it carries.
pub const GRID_RESIDUAL_CAP: f64 = 1e-6;

fn plan(m: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(m)
    } else {
        planner.plan_fft_forward(m)
    }
}

/// Fourier coefficients `ĉ_k = M⁻¹ Σ_j v_j ζ_j^{-k}`, indices mod `M`.
pub(crate) fn fourier(values: &[Complex64]) -> Vec<Complex64> {
    let m = values.len();
    let mut buf = values.to_vec();
    plan(m, false).process(&mut buf);
    let scale = 1.0 / m as f64;
    buf.iter_mut().for_each(|z| *z *= scale);
    buf
}

/// Values `Σ_k c_k ζ_j^k` on the `m`-point grid; `coeffs.len() ≤ m`.
pub(crate) fn synthesize(coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[..coeffs.len()].copy_from_slice(coeffs);
    plan(m, true).process(&mut buf);
    buf
}

pub(crate) fn root_of_unity(j: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64)
}

fn check_grid_size(m: usize) -> Result<()> {
    if m < 4 || !m.is_power_of_two() {
        return Err(Error::BadGridSize(m));
    }
    Ok(())
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A function on the closed disk held as coefficients and boundary values.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskFunction {
    coeffs: Vec<Complex64>,
    grid: Vec<Complex64>,
}

impl DiskFunction {
    /// The polynomial `Σ c_k z^k` on an `M`-point grid (`M ≥ 4·deg`).
    pub fn from_coeffs(coeffs: Vec<Complex64>, grid_size: usize) -> Result<Self> {
        check_grid_size(grid_size)?;
        if coeffs.is_empty() {
            return Err(Error::Invalid("empty coefficient vector".into()));
        }
        if 4 * (coeffs.len() - 1) > grid_size {
            return Err(Error::BadGridSize(grid_size));
        }
        if let Some(k) = coeffs.iter().position(|z| !finite(*z)) {
            return Err(Error::Invalid(format!("coefficient {k} is not finite")));
        }
        let grid = synthesize(&coeffs, grid_size);
        Ok(Self { coeffs, grid })
    }

    /// Boundary values on the roots of unity. Coefficients `0..M/4` are kept;
    /// fails if the values carry more than [`GRID_RESIDUAL_CAP`] relative
    /// mass at negative frequencies (i.e. are not boundary values of an
    /// analytic function resolved by this grid).
    pub fn from_boundary(values: Vec<Complex64>) -> Result<Self> {
        let m = values.len();
        check_grid_size(m)?;
        if let Some(j) = values.iter().position(|z| !finite(*z)) {
            return Err(Error::Invalid(format!("grid value {j} is not finite")));
        }
        let hat = fourier(&values);
        let total: f64 = hat.iter().map(|z| z.norm_sqr()).sum();
        let negative: f64 = hat[m / 2 + 1..].iter().map(|z| z.norm_sqr()).sum();
        let residual = if total > 0.0 {
            (negative / total).sqrt()
        } else {
            0.0
        };
        if residual > GRID_RESIDUAL_CAP {
            return Err(Error::GridTooCoarse {
                grid_size: m,
                residual,
            });
        }
        Ok(Self {
            coeffs: hat[..=m / 4].to_vec(),
            grid: values,
        })
    }

    pub fn constant(value: Complex64, grid_size: usize) -> Result<Self> {
        Self::from_coeffs(vec![value], grid_size)
    }

    /// The Szegő kernel `k_w(z) = 1/(1 − w̄ z)`, truncated at degree `M/4`.
    pub fn szego_kernel(w: Complex64, grid_size: usize) -> Result<Self> {
        check_grid_size(grid_size)?;
        if !(w.norm() < 1.0) {
            return Err(Error::OutsideBall {
                index: 0,
                norm_sq: w.norm_sqr(),
            });
        }
        let wc = w.conj();
        let mut coeffs = Vec::with_capacity(grid_size / 4 + 1);
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..=grid_size / 4 {
            coeffs.push(p);
            p *= wc;
        }
        Self::from_coeffs(coeffs, grid_size)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn grid(&self) -> &[Complex64] {
        &self.grid
    }

    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    /// Highest stored coefficient index.
    pub fn degree_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation of the coefficient series.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// `Σ |c_k|²`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max_j |f(ζ_j)|`.
    pub fn grid_sup(&self) -> f64 {
        self.grid.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Pointwise product on the grid.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.grid_size() != other.grid_size() {
            return Err(Error::DimensionMismatch {
                expected: self.grid_size(),
                got: other.grid_size(),
            });
        }
        Self::from_boundary(
            self.grid
                .iter()
                .zip(&other.grid)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }

    /// Max deviation between the stored grid and the grid synthesized from
    /// the stored coefficients.
    pub fn round_trip_residual(&self) -> f64 {
        synthesize(&self.coeffs, self.grid_size())
            .iter()
            .zip(&self.grid)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&DiskFunctionJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<DiskFunctionJson>(s)?.build()
    }
}

/// Serialized form `{"coeffs": [[re, im], ...], "grid_size": M}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskFunctionJson {
    pub coeffs: Vec<[f64; 2]>,
    pub grid_size: usize,
}

impl From<&DiskFunction> for DiskFunctionJson {
    fn from(f: &DiskFunction) -> Self {
        Self {
            coeffs: f.coeffs.iter().map(|z| [z.re, z.im]).collect(),
            grid_size: f.grid_size(),
        }
    }
}

impl DiskFunctionJson {
    pub fn build(&self) -> Result<DiskFunction> {
        DiskFunction::from_coeffs(
            self.coeffs
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
            self.grid_size,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn polynomial_round_trip() {
        let coeffs = vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 3.0), c(0.25, -0.25)];
        let f = DiskFunction::from_coeffs(coeffs.clone(), 16).unwrap();
        let g = DiskFunction::from_boundary(f.grid().to_vec()).unwrap();
        for (k, want) in coeffs.iter().enumerate() {
            assert!((g.coeffs()[k] - want).norm() < 1e-10);
        }
        assert!(g.coeffs()[4].norm() < 1e-10);
        assert!(f.round_trip_residual() < 1e-13);
    }

    #[test]
    fn grid_values_match_direct_sum() {
        let f = DiskFunction::from_coeffs(vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)], 8).unwrap();
        for j in 0..8 {
            let z = root_of_unity(j, 8);
            let want = c(1.0, 0.0) + z * 2.0 + z * z * c(0.0, 1.0);
            assert!((f.grid()[j] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn norm_and_eval() {
        let f = DiskFunction::from_coeffs(vec![c(1.0, 0.0), c(0.0, 2.0)], 8).unwrap();
        assert_eq!(f.norm_sq(), 5.0);
        assert_eq!(f.eval(c(0.5, 0.0)), c(1.0, 1.0));
    }

    #[test]
    fn bad_sizes() {
        assert!(matches!(
            DiskFunction::from_coeffs(vec![c(1.0, 0.0)], 6),
            Err(Error::BadGridSize(6))
        ));
        assert!(matches!(
            DiskFunction::from_coeffs(vec![c(1.0, 0.0); 4], 8),
            Err(Error::BadGridSize(8))
        ));
    }

    #[test]
    fn conjugate_boundary_values_rejected() {
        // z̄ on the circle has all its mass at frequency −1
        let m = 64;
        let vals = (0..m).map(|j| root_of_unity(j, m).conj()).collect();
        assert!(matches!(
            DiskFunction::from_boundary(vals),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn szego_kernel_values() {
        let k = DiskFunction::szego_kernel(c(0.5, 0.0), 256).unwrap();
        assert!((k.eval(c(0.5, 0.0)) - c(4.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!((k.norm_sq() - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let f = DiskFunction::from_coeffs(vec![c(1.0, 0.0), c(0.0, -1.0)], 8).unwrap();
        let s = f.to_json().unwrap();
        assert_eq!(s, r#"{"coeffs":[[1.0,0.0],[0.0,-1.0]],"grid_size":8}"#);
        assert_eq!(DiskFunction::from_json(&s).unwrap(), f);
        assert!(DiskFunction::from_json(r#"{"coeffs":[[1,0]],"grid_size":8,"x":1}"#).is_err());
    }
}
