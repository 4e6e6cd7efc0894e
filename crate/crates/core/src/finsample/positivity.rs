//! Pick, multiplier-norm, corona and containment tests.
//!
//! Each test is a positivity statement about a Hadamard product with `K`.
//! Norm-type quantities (multiplier norms, corona constants) are singular
//! values of multipliers written in the orthonormal frame `K = X Xᴴ`; the
//! PSD verdicts are eigenvalue tests on the Hadamard products themselves.

use num_complex::Complex64;

use super::{FinSampleSpace, RepresentingPair, SampledMultiplier};
use crate::error::{Error, Result};
use crate::linalg::{self, psd_check, singular_values, CMatrix, HermitianSpectrum, PsdVerdict};

/// Result of a successful corona certification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoronaCertificate {
    /// Largest pointwise violation of `a u + b v = 1`.
    pub max_residual: f64,
    /// Multiplier norm of the row `(u, v)` on the sample.
    pub row_norm: f64,
}

impl FinSampleSpace {
    /// Pick matrix `[(1 − w_i w̄_j) K[i,j]]`.
    pub fn pick_matrix(&self, targets: &[Complex64]) -> Result<CMatrix> {
        self.check_len(targets.len())?;
        let n = self.len();
        Ok(linalg::hermitian_part(&CMatrix::from_fn(n, n, |i, j| {
            (Complex64::new(1.0, 0.0) - targets[i] * targets[j].conj()) * self.k[(i, j)]
        })))
    }

    /// Whether a contractive multiplier can interpolate `x_i ↦ w_i`.
    pub fn pick_feasible(&self, targets: &[Complex64]) -> Result<PsdVerdict> {
        Ok(psd_check(
            &self.pick_matrix(targets)?,
            self.tol.psd_tau,
            None,
        ))
    }

    /// The row `[C_1 … C_m]` of frame multipliers.
    fn frame_row(&self, ms: &[&SampledMultiplier]) -> Result<CMatrix> {
        let n = self.len();
        let mut row = CMatrix::zeros(n, n * ms.len());
        for (i, m) in ms.iter().enumerate() {
            self.check_len(m.len())?;
            row.view_mut((0, i * n), (n, n))
                .copy_from(&self.frame_multiplier(m)?);
        }
        Ok(row)
    }

    /// Multiplier norm of `φ` on the restricted space: the smallest `c` with
    /// `(c² − φ_i φ̄_j) K[i,j] ⪰ 0`, i.e. `σ_max` of the frame multiplier.
    pub fn multiplier_norm(&self, phi: &SampledMultiplier) -> Result<f64> {
        let sv = singular_values(&self.frame_multiplier(phi)?);
        Ok(sv.last().copied().unwrap_or(0.0))
    }

    /// PSD test of `K − D_a K D_aᴴ − D_b K D_bᴴ` against `τ λ_max(K)`.
    pub fn column_contractive(&self, pair: &RepresentingPair) -> Result<PsdVerdict> {
        self.check_len(pair.a.len())?;
        let m = &self.k
            - linalg::diag_congruence(&pair.a.values, &self.k)
            - linalg::diag_congruence(&pair.b.values, &self.k);
        let scale = HermitianSpectrum::new(&self.k).max();
        Ok(psd_check(&m, self.tol.psd_tau, Some(scale)))
    }

    /// Largest `c` with `(a_i ā_j + b_i b̄_j − c²) K[i,j] ⪰ 0`.
    pub fn corona_constant(&self, pair: &RepresentingPair) -> Result<f64> {
        let sv = singular_values(&self.frame_row(&[&pair.a, &pair.b])?);
        Ok(sv.first().copied().unwrap_or(0.0))
    }

    /// Checks `a u + b v = 1` on the sample (absolute tolerance from
    /// [`super::Tolerances::identity`]) and reports the row norm of `(u, v)`.
    pub fn corona_certify(
        &self,
        pair: &RepresentingPair,
        u: &SampledMultiplier,
        v: &SampledMultiplier,
    ) -> Result<CoronaCertificate> {
        for m in [&pair.a, &pair.b, u, v] {
            self.check_len(m.len())?;
        }
        let mut max_residual: f64 = 0.0;
        for i in 0..self.len() {
            let r = (pair.a.values[i] * u.values[i] + pair.b.values[i] * v.values[i]
                - Complex64::new(1.0, 0.0))
            .norm();
            if !(r <= self.tol.identity) {
                return Err(Error::IdentityViolated {
                    index: i,
                    residual: r,
                });
            }
            max_residual = max_residual.max(r);
        }
        let sv = singular_values(&self.frame_row(&[u, v])?);
        Ok(CoronaCertificate {
            max_residual,
            row_norm: sv.last().copied().unwrap_or(0.0),
        })
    }
}

/// Contractive containment of the space with kernel `m1` in that with kernel
/// `m2`: PSD test of `m2 − m1`, relative to the larger of the two spectra.
pub fn containment_test(m1: &CMatrix, m2: &CMatrix, tau: f64) -> Result<PsdVerdict> {
    if m1.shape() != m2.shape() {
        return Err(Error::DimensionMismatch {
            expected: m2.nrows(),
            got: m1.nrows(),
        });
    }
    let scale = HermitianSpectrum::new(m1)
        .max()
        .max(HermitianSpectrum::new(m2).max())
        .max(0.0);
    Ok(psd_check(&(m2 - m1), tau, Some(scale)))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{pair_space, z_on};
    use super::*;
    use crate::kernels::{CnpKernel, PointSet};
    use crate::linalg::{c, PSD_TAU};

    #[test]
    fn pick_zero_targets_feasible() {
        let s = pair_space();
        assert!(s.pick_feasible(&[c(0.0, 0.0); 2]).unwrap().psd);
    }

    #[test]
    fn pick_boundary_case_is_all_ones() {
        let s = pair_space();
        let t = [c(0.0, 0.0), c(0.5, 0.0)];
        let m = s.pick_matrix(&t).unwrap();
        for z in m.iter() {
            assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        }
        let v = s.pick_feasible(&t).unwrap();
        assert!(v.psd);
        assert!(v.min_eigenvalue.abs() < 1e-15);
    }

    #[test]
    fn pick_infeasible_target() {
        let s = pair_space();
        let t = [c(0.0, 0.0), c(2.0, 0.0)];
        let m = s.pick_matrix(&t).unwrap();
        assert!((m[(1, 1)] - c(-4.0, 0.0)).norm() < 1e-14);
        assert!(!s.pick_feasible(&t).unwrap().psd);
    }

    #[test]
    fn multiplier_norm_values() {
        let s = pair_space();
        let cst = c(0.6, -0.8) * 1.5;
        let m = s
            .multiplier_norm(&SampledMultiplier::constant(2, cst))
            .unwrap();
        assert!((m - 1.5).abs() < 1e-13);
        assert!((s.multiplier_norm(&z_on(&s)).unwrap() - 1.0).abs() < 1e-12);

        let single = FinSampleSpace::new(
            &CnpKernel::Szego,
            PointSet::disk(&[c(0.5, 0.0)], "half").unwrap(),
        )
        .unwrap();
        assert!((single.multiplier_norm(&z_on(&single)).unwrap() - 0.5).abs() < 1e-15);
    }

    fn constant_pair(a: Complex64, b: Complex64) -> RepresentingPair {
        RepresentingPair::new(
            SampledMultiplier::constant(2, a),
            SampledMultiplier::constant(2, b),
        )
        .unwrap()
    }

    #[test]
    fn column_contractive_cases() {
        let s = pair_space();
        assert!(
            s.column_contractive(&constant_pair(c(1.0, 0.0), c(0.0, 0.0)))
                .unwrap()
                .psd
        );
        assert!(
            !s.column_contractive(&constant_pair(c(1.0, 0.0), c(1.0, 0.0)))
                .unwrap()
                .psd
        );

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let h = z_on(&s);
        let pair = RepresentingPair::for_symbol(
            &h,
            SampledMultiplier::constant(2, c(r, 0.0)),
            SampledMultiplier::new("b", h.values.iter().map(|z| z * r).collect()).unwrap(),
        )
        .unwrap();
        let v = s.column_contractive(&pair).unwrap();
        assert!(v.psd, "min eigenvalue {}", v.min_eigenvalue);
    }

    #[test]
    fn corona_constants() {
        let s = pair_space();
        assert_eq!(
            s.corona_constant(&constant_pair(c(1.0, 0.0), c(0.0, 0.0)))
                .unwrap(),
            1.0
        );
        let c0 = c(0.0, -0.4);
        let v = s.corona_constant(&constant_pair(c0, c(0.0, 0.0))).unwrap();
        assert!((v - 0.4).abs() < 1e-14);
    }

    #[test]
    fn frame_norms_agree_with_pencil() {
        let pts = PointSet::fejer_radial(12, 4).unwrap();
        let s = FinSampleSpace::new(&CnpKernel::Szego, pts).unwrap();
        let phi = SampledMultiplier::sample("φ", s.points(), |p| p.z() * p.z() - 0.3).unwrap();
        let top = *linalg::pencil_eigenvalues(
            &linalg::diag_congruence(&phi.values, s.gram()),
            s.factor(),
        )
        .last()
        .unwrap();
        assert!((s.multiplier_norm(&phi).unwrap() - top.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn corona_certify_trivial_and_violation() {
        let s = pair_space();
        let pair = constant_pair(c(1.0, 0.0), c(0.0, 0.0));
        let one = SampledMultiplier::constant(2, c(1.0, 0.0));
        let zero = SampledMultiplier::constant(2, c(0.0, 0.0));
        let cert = s.corona_certify(&pair, &one, &zero).unwrap();
        assert!((cert.row_norm - 1.0).abs() < 1e-14);
        // any v is allowed when b ≡ 0; the row norm can only grow
        let big = SampledMultiplier::new("v", vec![c(3.0, 0.0), c(-1.0, 2.0)]).unwrap();
        assert!(s.corona_certify(&pair, &one, &big).unwrap().row_norm >= 1.0);
        assert!(matches!(
            s.corona_certify(&pair, &zero, &zero),
            Err(Error::IdentityViolated { index: 0, .. })
        ));
    }

    #[test]
    fn containment_examples() {
        let s = pair_space();
        let k = s.gram().clone();
        assert!(containment_test(&k, &k, PSD_TAU).unwrap().psd);

        let phi0: f64 = 0.8;
        let m1 = &k * c(phi0 * phi0 / 2.0, 0.0);
        let m2 = &k * c(0.5, 0.0);
        assert!(containment_test(&m1, &m2, PSD_TAU).unwrap().psd);

        let kts = s.dom_t_star_kernel(&z_on(&s)).unwrap().kernel;
        let v = containment_test(&k, &kts, PSD_TAU).unwrap();
        assert!(!v.psd);
        assert!((k[(1, 1)].re - kts[(1, 1)].re - (4.0 / 3.0 - 7.0 / 6.0)).abs() < 1e-12);
    }
}
