//! The ambient space restricted to a finite sample.
//!
//! On a sample `Y = {x_1, …, x_n}` the restricted space `H_Y` consists of
//! vectors `f = (f(x_1), …, f(x_n))` with inner product `⟨f, g⟩ = gᴴ K⁻¹ f`.
//! The kernel function `k_x` is the column `K e_x`, so `⟨k_y, k_x⟩ = K[x, y]`,
//! and multiplication by a symbol `h` acts as the diagonal matrix `D_h`.
//!
//! Everything here is sample-intrinsic: the Dom T* kernel computed on `Y` is
//! that of `H_Y`, which differs from the restriction of the global one (see
//! [`crate::hardy::global_dom_t_star_kernel`] for the global cross-check).

mod approx;
mod domains;
mod positivity;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{self, CnpKernel, KernelMatrixOptions, Point, PointSet};
use crate::linalg::{self, CMatrix, CVector, HermitianSpectrum, PivotedCholesky};

pub use approx::{growth_certificate, log_modulus, GrowthCertificate, HbApprox};
pub use domains::{DomTStarKernel, GraphKernels};
pub use positivity::{containment_test, CoronaCertificate};

/// Numerical tolerances used throughout the sample engine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative PSD tolerance τ.
    pub psd_tau: f64,
    /// Absolute tolerance for pointwise identities on O(1) quantities.
    pub identity: f64,
    /// Relative Frobenius tolerance for cross-method agreement.
    pub cross_method: f64,
    /// Condition-number cap for kernel matrices.
    pub cond_cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd_tau: linalg::PSD_TAU,
            identity: 1e-10,
            cross_method: 1e-8,
            cond_cap: linalg::COND_CAP,
        }
    }
}

/// Relative pivot floor for factoring matrices that already passed the
/// condition check.
const FACTOR_FLOOR: f64 = 1e-15;

/// A finite sample with its Gram matrix, factored once.
#[derive(Clone, Debug)]
pub struct FinSampleSpace {
    kernel_name: String,
    pts: PointSet,
    k: CMatrix,
    chol: PivotedCholesky,
    cond_estimate: f64,
    tol: Tolerances,
}

impl FinSampleSpace {
    pub fn new(kernel: &CnpKernel, pts: PointSet) -> Result<Self> {
        Self::with_tolerances(kernel, pts, Tolerances::default())
    }

    pub fn with_tolerances(kernel: &CnpKernel, pts: PointSet, tol: Tolerances) -> Result<Self> {
        let opts = KernelMatrixOptions {
            tau: tol.psd_tau,
            cond_cap: tol.cond_cap,
        };
        let k = kernels::kernel_matrix_with(kernel, &pts, &opts)?;
        let mut space = Self::from_gram(kernel.name(), pts, k, tol)?;
        if matches!(kernel, CnpKernel::Szego) && space.pts.dim() == 1 {
            space.chol = PivotedCholesky::szego(&space.pts.disk_coords(), FACTOR_FLOOR)?;
        }
        Ok(space)
    }

    /// Wraps an externally computed Hermitian positive definite Gram matrix.
    pub fn from_gram(
        kernel_name: impl Into<String>,
        pts: PointSet,
        k: CMatrix,
        tol: Tolerances,
    ) -> Result<Self> {
        if k.nrows() != pts.len() || k.ncols() != pts.len() {
            return Err(Error::DimensionMismatch {
                expected: pts.len(),
                got: k.nrows(),
            });
        }
        let k = linalg::hermitian_part(&k);
        let spec = HermitianSpectrum::new(&k);
        if spec.min() < -tol.psd_tau * spec.max() {
            return Err(Error::NonPositive {
                min_eigenvalue: spec.min(),
                max_eigenvalue: spec.max(),
            });
        }
        let cond_estimate = spec.condition();
        if !(cond_estimate <= tol.cond_cap) {
            return Err(Error::IllConditioned {
                estimate: cond_estimate,
                cap: tol.cond_cap,
            });
        }
        let chol = PivotedCholesky::new(&k, FACTOR_FLOOR)?;
        Ok(Self {
            kernel_name: kernel_name.into(),
            pts,
            k,
            chol,
            cond_estimate,
            tol,
        })
    }

    pub fn kernel_name(&self) -> &str {
        &self.kernel_name
    }

    pub fn points(&self) -> &PointSet {
        &self.pts
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// The Gram matrix `K`.
    pub fn gram(&self) -> &CMatrix {
        &self.k
    }

    pub fn factor(&self) -> &PivotedCholesky {
        &self.chol
    }

    pub fn cond_estimate(&self) -> f64 {
        self.cond_estimate
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// The kernel function `k_x = K e_x` of sample point `index`.
    pub fn kernel_column(&self, index: usize) -> CVector {
        self.k.column(index).into_owned()
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }

    /// `⟨f, g⟩_H = gᴴ K⁻¹ f`, via two triangular solves.
    pub fn h_inner(&self, f: &CVector, g: &CVector) -> Result<Complex64> {
        self.check_len(f.len())?;
        self.check_len(g.len())?;
        let wf = self
            .chol
            .forward(&CMatrix::from_column_slice(f.len(), 1, f.as_slice()));
        let wg = self
            .chol
            .forward(&CMatrix::from_column_slice(g.len(), 1, g.as_slice()));
        Ok((wg.adjoint() * wf)[(0, 0)])
    }

    /// Matrix of `T* = K D_hᴴ K⁻¹` acting on function vectors.
    pub fn adjoint_matrix(&self, h: &SampledMultiplier) -> Result<CMatrix> {
        self.check_len(h.len())?;
        let dk = CMatrix::from_fn(self.len(), self.len(), |i, j| h.values[i] * self.k[(i, j)]);
        // (K⁻¹ D K)ᴴ = K D̄ K⁻¹ since K is Hermitian.
        Ok(self.chol.solve(&dk).adjoint())
    }
}

impl FinSampleSpace {
    /// Matrix of multiplication by `h` in the orthonormal frame of `H_Y`:
    /// with `K = X Xᴴ`, `f ↦ X⁻¹ f` is unitary onto `ℂⁿ` and `D_h` becomes
    /// `X⁻¹ D_h X`. Its adjoint is the frame matrix of `T*`.
    pub fn frame_multiplier(&self, h: &SampledMultiplier) -> Result<CMatrix> {
        self.check_len(h.len())?;
        Ok(self.chol.frame_multiplier(&h.values))
    }

    /// Frame coordinates `X⁻¹ k_x` of the kernel function at `x`; their
    /// Euclidean norm is `‖k_x‖ = √K[x,x]`.
    pub fn frame_kernel(&self, index: usize) -> CVector {
        self.chol.frame_column(index)
    }
}

/// Values of a symbol on the sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledMultiplier {
    pub name: String,
    pub values: Vec<Complex64>,
}

impl SampledMultiplier {
    pub fn new(name: impl Into<String>, values: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = values
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::Invalid(format!("symbol value {i} is not finite")));
        }
        Ok(Self {
            name: name.into(),
            values,
        })
    }

    pub fn constant(n: usize, value: Complex64) -> Self {
        Self {
            name: format!("const({value})"),
            values: vec![value; n],
        }
    }

    /// Samples `f` on every point.
    pub fn sample(
        name: impl Into<String>,
        pts: &PointSet,
        f: impl Fn(&Point) -> Complex64,
    ) -> Result<Self> {
        Self::new(name, pts.points().iter().map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// A pair of multipliers `(a, b)` with `b = a·h`.
#[derive(Clone, Debug)]
pub struct RepresentingPair {
    pub a: SampledMultiplier,
    pub b: SampledMultiplier,
    contractive: Option<bool>,
}

impl RepresentingPair {
    /// A pair with no symbol attached (as used for corona problems).
    pub fn new(a: SampledMultiplier, b: SampledMultiplier) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        Ok(Self {
            a,
            b,
            contractive: None,
        })
    }

    /// A pair checked against `h`: `b_i = a_i h_i` to 1e-12 relative where
    /// `a_i ≠ 0`, and `b_i = 0` where `a_i = 0`.
    pub fn for_symbol(
        h: &SampledMultiplier,
        a: SampledMultiplier,
        b: SampledMultiplier,
    ) -> Result<Self> {
        let pair = Self::new(a, b)?;
        if h.len() != pair.a.len() {
            return Err(Error::DimensionMismatch {
                expected: pair.a.len(),
                got: h.len(),
            });
        }
        for (i, ((a, b), h)) in pair
            .a
            .values
            .iter()
            .zip(&pair.b.values)
            .zip(&h.values)
            .enumerate()
        {
            let residual = if *a == Complex64::new(0.0, 0.0) {
                b.norm()
            } else {
                (b - a * h).norm() / b.norm().max((a * h).norm()).max(f64::MIN_POSITIVE)
            };
            if residual > 1e-12 {
                return Err(Error::NotRepresenting { index: i, residual });
            }
        }
        Ok(pair)
    }

    /// Records whether `K − D_a K D_aᴴ − D_b K D_bᴴ ⪰ −τ λ_max(K)` on `space`.
    pub fn check_contractive(&mut self, space: &FinSampleSpace) -> Result<bool> {
        let ok = space.column_contractive(self)?.psd;
        self.contractive = Some(ok);
        Ok(ok)
    }

    pub fn contractive(&self) -> Option<bool> {
        self.contractive
    }

    /// `b/a` where `a ≠ 0`.
    pub fn symbol(&self) -> Vec<Option<Complex64>> {
        self.a
            .values
            .iter()
            .zip(&self.b.values)
            .map(|(a, b)| (a.norm() > 0.0).then(|| b / a))
            .collect()
    }
}
