//! Coefficient-space computations: `T*` through Toeplitz adjoints, polynomial
//! approximation in the graph norm, and the global Dom T* kernel.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DiskFunction, SmirnovSymbol};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, PivotedCholesky};

/// Relative floor for the diagonal `ā_0` of the Toeplitz adjoint.
const PIVOT_FLOOR: f64 = 1e-12;

/// `g ≈ T*f` and the relative residual of `M_a* g = M_b* f` on `0..N`.
#[derive(Clone, Debug)]
pub struct TStarSolution {
    pub g: DiskFunction,
    pub residual: f64,
}

/// `(M_φ* f)_k = Σ_j φ̄_j f_{k+j}` for `k ≤ n`, with `f` cut at degree `n`.
fn toeplitz_adjoint_apply(phi: &[Complex64], f: &[Complex64], n: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|k| {
            (k..=n)
                .filter(|&m| m < f.len() && m - k < phi.len())
                .map(|m| phi[m - k].conj() * f[m])
                .sum()
        })
        .collect()
}

/// Solves `M_a* g = M_b* f` for `g` of degree `≤ n`.
///
/// Both sides preserve polynomials of degree `≤ n` and `M_a*` is upper
/// triangular there with diagonal `ā(0)`, so the truncated system is square
/// and back substitution gives its exact solution. For an outer `a` this is
/// `T*f` whenever `T*f` is itself a polynomial of degree `≤ n`.
pub fn tstar_solve(symbol: &SmirnovSymbol, f: &DiskFunction, n: usize) -> Result<TStarSolution> {
    let a = symbol.a.coeffs();
    let b = symbol.b.coeffs();
    if n >= a.len() || n >= b.len() {
        return Err(Error::DegreeCap {
            degree: n,
            cap: a.len().min(b.len()) - 1,
        });
    }
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = a[0].conj();
    if !(pivot.norm() > PIVOT_FLOOR * scale) {
        return Err(Error::RankDeficient {
            pivot: pivot.norm(),
        });
    }
    let rhs = toeplitz_adjoint_apply(b, f.coeffs(), n);
    let mut g = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in (0..=n).rev() {
        let acc: Complex64 = (k + 1..=n).map(|m| a[m - k].conj() * g[m]).sum();
        g[k] = (rhs[k] - acc) / pivot;
    }
    let lhs = toeplitz_adjoint_apply(a, &g, n);
    let num: f64 = lhs.iter().zip(&rhs).map(|(l, r)| (l - r).norm_sqr()).sum();
    let den: f64 = rhs.iter().map(|r| r.norm_sqr()).sum();
    let residual = if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    };
    let grid_size = f.grid_size().max((4 * n).next_power_of_two()).max(4);
    Ok(TStarSolution {
        g: DiskFunction::from_coeffs(g, grid_size)?,
        residual,
    })
}

/// One entry of a polynomial-density sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityPoint {
    pub degree: usize,
    /// `min_p ‖p − f‖² + ‖T*p − T*f‖²` over polynomials of this degree.
    pub error_sq: f64,
}

/// Best graph-norm approximation of `f` by polynomials of each degree.
///
/// `T*` on polynomials comes from [`tstar_solve`]; `f` and `T*f` are used to
/// their common truncation.
pub fn polynomial_density_decay(
    symbol: &SmirnovSymbol,
    f: &DiskFunction,
    tstar_f: &DiskFunction,
    degrees: &[usize],
) -> Result<Vec<DensityPoint>> {
    let Some(&top) = degrees.iter().max() else {
        return Ok(Vec::new());
    };
    let len = f.coeffs().len().min(tstar_f.coeffs().len());
    if top >= len {
        return Err(Error::DegreeCap {
            degree: top,
            cap: len - 1,
        });
    }
    // column m = T* z^m, supported on degrees ≤ m
    let mut tmat = CMatrix::zeros(top + 1, top + 1);
    for m in 0..=top {
        let mut e = vec![Complex64::new(0.0, 0.0); m + 1];
        e[m] = Complex64::new(1.0, 0.0);
        let basis = DiskFunction::from_coeffs(e, (4 * m).next_power_of_two().max(4))?;
        let col = tstar_solve(symbol, &basis, m)?.g;
        for (k, v) in col.coeffs().iter().enumerate() {
            tmat[(k, m)] = *v;
        }
    }
    let fc = &f.coeffs()[..len];
    let tc = &tstar_f.coeffs()[..len];
    degrees
        .iter()
        .map(|&d| {
            let t = tmat.view((0, 0), (d + 1, d + 1)).into_owned();
            let gram = CMatrix::identity(d + 1, d + 1) + t.adjoint() * &t;
            let fv = CVector::from_column_slice(&fc[..=d]);
            let tv = CVector::from_column_slice(&tc[..=d]);
            let rhs = &fv + t.adjoint() * &tv;
            let chol = PivotedCholesky::new(&gram, 1e-14)
                .map_err(|_| Error::RankDeficient { pivot: 0.0 })?;
            let p = chol.solve_vec(&rhs);
            let tp = &t * &p;
            let head = (&fv - &p).norm_squared() + (&tv - &tp).norm_squared();
            let tail: f64 = fc[d + 1..]
                .iter()
                .chain(&tc[d + 1..])
                .map(|z| z.norm_sqr())
                .sum();
            Ok(DensityPoint {
                degree: d,
                error_sq: head + tail,
            })
        })
        .collect()
}

/// `(1 − x ȳ/2)/(1 − x ȳ)`, the Dom T* kernel of `h = z` on the Hardy space.
pub fn dom_t_star_kernel_z(x: Complex64, y: Complex64) -> Complex64 {
    let w = x * y.conj();
    (Complex64::new(1.0, 0.0) - w * 0.5) / (Complex64::new(1.0, 0.0) - w)
}

/// Dom T* kernel of multiplication by the polynomial `h` on the Hardy space,
/// by graph projection with the domain cut to degree `n`.
///
/// The graph `{(p, hp) : deg p ≤ n}` sits in `P_L ⊕ P_L` with
/// `L = n + deg h`. Projecting `Jᴴ(k_y, 0) = (0, −k_y)` onto the orthogonal
/// complement and applying `J` gives `P_{G(T*)}(k_y, 0)`, whose first
/// component is `k^{T*}_y`.
pub fn global_dom_t_star_kernel(
    h: &[Complex64],
    x: Complex64,
    y: Complex64,
    n: usize,
) -> Result<Complex64> {
    if h.is_empty() {
        return Err(Error::Invalid("empty symbol".into()));
    }
    if !(x.norm() < 1.0 && y.norm() < 1.0) {
        return Err(Error::OutsideBall {
            index: 0,
            norm_sq: x.norm_sqr().max(y.norm_sqr()),
        });
    }
    let l = n + h.len();
    let mut basis = DMatrix::<Complex64>::zeros(2 * l, n + 1);
    for k in 0..=n {
        basis[(k, k)] = Complex64::new(1.0, 0.0);
        for (j, hj) in h.iter().enumerate() {
            basis[(l + k + j, k)] = *hj;
        }
    }
    let q = basis.qr().q();
    let mut rhs = CVector::zeros(2 * l);
    let mut p = Complex64::new(1.0, 0.0);
    for k in 0..l {
        rhs[l + k] = -p;
        p *= y.conj();
    }
    let resid = &rhs - &q * (q.adjoint() * &rhs);
    let mut value = Complex64::new(0.0, 0.0);
    let mut xp = Complex64::new(1.0, 0.0);
    for k in 0..l {
        value -= resid[l + k] * xp;
        xp *= x;
    }
    Ok(value)
}
