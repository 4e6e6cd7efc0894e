//! Kernel-span approximation in Dom T* by the approximate-unit recipe.
//!
//! Given `f ∈ Dom T*` and `ε`:
//!
//! 1. kernel combinations `g₁ ≈ f` and `g₂ ≈ T*f` within `ε` in `H`;
//! 2. an approximate unit `a_n` with `‖g_i − M_{a_n}* g_i‖ < ε`;
//! 3. `M`, the multiplier norm of the column `(a_n, a_n h)`;
//! 4. `g ≈ f` within `ε/M`;
//!
//! and output `M_{a_n}* g`, again a kernel combination, whose Dom T* distance
//! to `f` is below `6ε`. The achieved distance is computed exactly from the
//! Gram matrix `(1 + h_i h̄_j) K[i,j]` of the kernel functions in Dom T*.

use num_complex::Complex64;

use super::outer::unit_factor;
use super::{DiskFunction, SmirnovSymbol};
use crate::error::{Error, Result};
use crate::finsample::FinSampleSpace;
use crate::linalg::{CMatrix, CVector};

/// Largest approximate-unit index tried, as a power of two.
const MAX_UNIT_DOUBLINGS: u32 = 30;

/// Errors `‖g_i − M_{a_n}* g_i‖` for one candidate `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitStep {
    pub n: f64,
    pub g1_error: f64,
    pub g2_error: f64,
}

#[derive(Clone, Debug)]
pub struct ConstructiveApprox {
    pub eps: f64,
    pub g1_error: f64,
    pub g2_error: f64,
    pub unit_steps: Vec<UnitStep>,
    /// The `n` finally used.
    pub n: f64,
    pub column_norm: f64,
    pub g_error: f64,
    /// Coefficients of the output on the kernel functions of the sample.
    pub coefficients: Vec<Complex64>,
    /// Exact Dom T* distance between `f` and the output.
    pub achieved_error: f64,
    pub bound: f64,
}

struct KernelFit {
    coeffs: CVector,
    error: f64,
}

/// Best `H²` approximation of `f` from the kernel functions of `space`.
fn kernel_fit(space: &FinSampleSpace, f: &DiskFunction) -> KernelFit {
    let v = CVector::from_iterator(
        space.len(),
        space.points().points().iter().map(|p| f.eval(p.z())),
    );
    let coeffs = space.factor().solve_vec(&v);
    let err_sq = f.norm_sq() - v.dotc(&coeffs).re;
    KernelFit {
        coeffs,
        error: err_sq.max(0.0).sqrt(),
    }
}

/// `‖Σ d_j k_{x_j}‖` in `H`.
fn combo_norm(k: &CMatrix, d: &CVector) -> f64 {
    d.dotc(&(k * d)).re.max(0.0).sqrt()
}

pub fn constructive_hb_approx(
    symbol: &SmirnovSymbol,
    f: &DiskFunction,
    tstar_f: &DiskFunction,
    eps: f64,
    space: &FinSampleSpace,
) -> Result<ConstructiveApprox> {
    if !(eps > 0.0) {
        return Err(Error::Invalid(format!("eps = {eps} must be positive")));
    }
    if space.kernel_name() != "szego" || space.points().dim() != 1 {
        return Err(Error::Invalid(
            "the recipe runs on a Szegő sample of the disk".into(),
        ));
    }
    let k = space.gram();
    let zs = space.points().disk_coords();

    let g1 = kernel_fit(space, f);
    if !(g1.error < eps) {
        return Err(Error::NotAchieved {
            stage: "g1",
            detail: format!(
                "best kernel approximation of f has H-error {:.3e} ≥ {eps:e}",
                g1.error
            ),
        });
    }
    let g2 = kernel_fit(space, tstar_f);
    if !(g2.error < eps) {
        return Err(Error::NotAchieved {
            stage: "g2",
            detail: format!(
                "best kernel approximation of T*f has H-error {:.3e} ≥ {eps:e}",
                g2.error
            ),
        });
    }

    // M_a* k_x = conj(a(x)) k_x, so g − M_a* g has coefficients c_j (1 − conj a(x_j)).
    let shrink = |c: &CVector, a_vals: &[Complex64]| {
        CVector::from_iterator(
            c.len(),
            c.iter().zip(a_vals).map(|(c, a)| c * (1.0 - a.conj())),
        )
    };
    let mut unit_steps = Vec::new();
    let mut chosen = None;
    for p in 0..=MAX_UNIT_DOUBLINGS {
        let n = f64::from(1u32 << p);
        let u = unit_factor(&symbol.a, n)?;
        let a_n = symbol.a.mul(&u)?;
        let a_vals: Vec<Complex64> = zs.iter().map(|z| a_n.eval(*z)).collect();
        let step = UnitStep {
            n,
            g1_error: combo_norm(k, &shrink(&g1.coeffs, &a_vals)),
            g2_error: combo_norm(k, &shrink(&g2.coeffs, &a_vals)),
        };
        unit_steps.push(step);
        if step.g1_error < eps && step.g2_error < eps {
            chosen = Some((n, u, a_vals));
            break;
        }
    }
    let Some((n, u, a_vals)) = chosen else {
        return Err(Error::NotAchieved {
            stage: "approximate-unit",
            detail: format!("no n ≤ 2^{MAX_UNIT_DOUBLINGS} brings M_a* g_i within {eps:e}"),
        });
    };

    // |a_n|² + |a_n h|² = |u_n|²(|a|² + |b|²) on the circle
    let column_norm = u
        .grid()
        .iter()
        .zip(symbol.a.grid().iter().zip(symbol.b.grid()))
        .map(|(u, (a, b))| u.norm() * (a.norm_sqr() + b.norm_sqr()).sqrt())
        .fold(0.0, f64::max);

    let g = kernel_fit(space, f);
    if !(g.error < eps / column_norm) {
        return Err(Error::NotAchieved {
            stage: "g",
            detail: format!(
                "best kernel approximation of f has H-error {:.3e} ≥ eps/M = {:.3e}",
                g.error,
                eps / column_norm
            ),
        });
    }

    let out = CVector::from_iterator(
        g.coeffs.len(),
        g.coeffs.iter().zip(&a_vals).map(|(c, a)| c * a.conj()),
    );
    let h_vals: Vec<Complex64> = zs.iter().map(|z| symbol.h_at(*z)).collect();
    let nn = space.len();
    let gram_b = CMatrix::from_fn(nn, nn, |i, j| {
        (1.0 + h_vals[i] * h_vals[j].conj()) * k[(i, j)]
    });
    let pairing = CVector::from_iterator(
        nn,
        (0..nn).map(|i| f.eval(zs[i]) + h_vals[i] * tstar_f.eval(zs[i])),
    );
    let norm_sq_b = f.norm_sq() + tstar_f.norm_sq();
    let err_sq = norm_sq_b - 2.0 * out.dotc(&pairing).re + out.dotc(&(&gram_b * &out)).re;
    let achieved_error = err_sq.max(0.0).sqrt();
    let bound = 6.0 * eps;
    if !(achieved_error <= bound) {
        return Err(Error::NotAchieved {
            stage: "bound",
            detail: format!("achieved Dom T* error {achieved_error:.3e} exceeds 6·eps = {bound:e}"),
        });
    }
    Ok(ConstructiveApprox {
        eps,
        g1_error: g1.error,
        g2_error: g2.error,
        unit_steps,
        n,
        column_norm,
        g_error: g.error,
        coefficients: out.iter().copied().collect(),
        achieved_error,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{pythagorean_mate, root_of_unity};
    use super::*;
    use crate::kernels::{CnpKernel, PointSet};
    use crate::linalg::c;

    fn shift_symbol(m: usize) -> SmirnovSymbol {
        pythagorean_mate(&(0..m).map(|j| root_of_unity(j, m)).collect::<Vec<_>>()).unwrap()
    }

    fn space(zs: &[Complex64]) -> FinSampleSpace {
        FinSampleSpace::new(&CnpKernel::Szego, PointSet::disk(zs, "t").unwrap()).unwrap()
    }

    #[test]
    fn kernel_target_is_reproduced() {
        let s = shift_symbol(256);
        let f = DiskFunction::szego_kernel(c(0.5, 0.0), 256).unwrap();
        let tf =
            DiskFunction::from_coeffs(f.coeffs().iter().map(|z| z * 0.5).collect(), 256).unwrap();
        let sp = space(&[c(0.0, 0.0), c(0.5, 0.0)]);
        let r = constructive_hb_approx(&s, &f, &tf, 1e-3, &sp).unwrap();
        assert!(r.achieved_error < 1e-7, "{}", r.achieved_error);
    }

    #[test]
    fn constant_target() {
        let s = shift_symbol(256);
        let f = DiskFunction::constant(c(1.0, 0.0), 256).unwrap();
        let tf = DiskFunction::constant(c(0.0, 0.0), 256).unwrap();
        let sp = space(&[c(0.0, 0.0), c(0.3, 0.1)]);
        let r = constructive_hb_approx(&s, &f, &tf, 0.01, &sp).unwrap();
        assert!(r.achieved_error < 1e-7);
        // a ≡ 1/√2 needs n = 2, and then |u_n| = √2 everywhere
        assert_eq!(r.n, 2.0);
        assert!((r.column_norm - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn identity_target_on_fejer_sample() {
        let s = shift_symbol(1024);
        let f = DiskFunction::from_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0)], 1024).unwrap();
        let tf = DiskFunction::constant(c(1.0, 0.0), 1024).unwrap();
        let sp =
            FinSampleSpace::new(&CnpKernel::Szego, PointSet::fejer_radial(50, 4).unwrap()).unwrap();
        let r = constructive_hb_approx(&s, &f, &tf, 0.1, &sp).unwrap();
        assert!(r.achieved_error <= 0.6);
    }

    #[test]
    fn too_few_points() {
        let s = shift_symbol(256);
        let f = DiskFunction::from_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0)], 256).unwrap();
        let tf = DiskFunction::constant(c(1.0, 0.0), 256).unwrap();
        let sp = space(&[c(0.0, 0.0)]);
        assert!(matches!(
            constructive_hb_approx(&s, &f, &tf, 0.1, &sp),
            Err(Error::NotAchieved { stage: "g1", .. })
        ));
    }
}
