//! Outer functions from boundary moduli, Pythagorean mates, approximate units.

use num_complex::Complex64;

use super::{fourier, root_of_unity, synthesize, DiskFunction};
use crate::error::{Error, Result};

/// Finite log-moduli below this are clamped before transforming.
pub const LOG_CLAMP: f64 = -40.0;

/// Mean of the nearest usable neighbours of `j` on both sides.
fn neighbour_fill<T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>>(
    values: &[T],
    usable: &[bool],
    j: usize,
) -> Option<T> {
    let m = values.len();
    let left = (1..m).map(|s| (j + m - s) % m).find(|&i| usable[i])?;
    let right = (1..m).map(|s| (j + s) % m).find(|&i| usable[i])?;
    Some((values[left] + values[right]) * 0.5)
}

/// The outer function `a` with `log|a(ζ_j)| = log_mod[j]` and `a(0) > 0`.
///
/// Entries equal to `−∞` are boundary zeros. Each is factored out exactly as
/// `(1 − ζ̄_j z)`; the remaining log-modulus is finite and is completed to an
/// analytic logarithm by dropping negative frequencies and doubling positive
/// ones. Other finite values below [`LOG_CLAMP`] are clamped.
pub fn outer_from_modulus(log_mod: &[f64]) -> Result<DiskFunction> {
    let m = log_mod.len();
    super::check_grid_size(m)?;
    if let Some(j) = log_mod
        .iter()
        .position(|v| v.is_nan() || *v == f64::INFINITY)
    {
        return Err(Error::Invalid(format!("log-modulus {j} is {}", log_mod[j])));
    }
    let zeros: Vec<usize> = (0..m)
        .filter(|&j| log_mod[j] == f64::NEG_INFINITY)
        .collect();
    if zeros.len() == m {
        return Err(Error::Invalid("log-modulus is -inf everywhere".into()));
    }
    let usable: Vec<bool> = log_mod.iter().map(|v| v.is_finite()).collect();

    // v = u − Σ log|ζ − ζ_j| off the zeros
    let mut v: Vec<f64> = (0..m)
        .map(|i| {
            if !usable[i] {
                return 0.0;
            }
            let zi = root_of_unity(i, m);
            zeros.iter().fold(log_mod[i].max(LOG_CLAMP), |acc, &j| {
                acc - (zi - root_of_unity(j, m)).norm().ln()
            })
        })
        .collect();
    for &j in &zeros {
        v[j] = neighbour_fill(&v, &usable, j).expect("some entry is finite");
    }

    let hat = fourier(
        &v.iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect::<Vec<_>>(),
    );
    let mut completed = vec![Complex64::new(0.0, 0.0); m];
    completed[0] = Complex64::new(hat[0].re, 0.0);
    for n in 1..m / 2 {
        completed[n] = hat[n] * 2.0;
    }
    completed[m / 2] = Complex64::new(hat[m / 2].re, 0.0);
    let log_a = synthesize(&completed, m);

    let mut grid: Vec<Complex64> = log_a.iter().map(|z| z.exp()).collect();
    for &j in &zeros {
        let zj = root_of_unity(j, m).conj();
        for (i, g) in grid.iter_mut().enumerate() {
            *g *= if i == j {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0) - zj * root_of_unity(i, m)
            };
        }
    }
    DiskFunction::from_boundary(grid)
}

/// An outer `a` and `b = a·h`, describing `h = b/a`.
#[derive(Clone, Debug)]
pub struct SmirnovSymbol {
    pub a: DiskFunction,
    pub b: DiskFunction,
}

impl SmirnovSymbol {
    pub fn new(a: DiskFunction, b: DiskFunction) -> Result<Self> {
        if a.grid_size() != b.grid_size() {
            return Err(Error::DimensionMismatch {
                expected: a.grid_size(),
                got: b.grid_size(),
            });
        }
        Ok(Self { a, b })
    }

    /// `b(z)/a(z)` at an interior point.
    pub fn h_at(&self, z: Complex64) -> Complex64 {
        self.b.eval(z) / self.a.eval(z)
    }

    /// `max_j ||a|² + |b|² − 1|` on the grid.
    pub fn pythagorean_residual(&self) -> f64 {
        self.a
            .grid()
            .iter()
            .zip(self.b.grid())
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max_j √(|a|² + |b|²)`, the multiplier norm of the column `(a, b)`.
    pub fn column_sup(&self) -> f64 {
        self.a
            .grid()
            .iter()
            .zip(self.b.grid())
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
            .fold(0.0, f64::max)
    }
}

/// The Pythagorean pair of boundary values `h` on an `M`-point grid:
/// `|a|² = 1/(1 + |h|²)`, `b = a·h`.
///
/// Non-finite entries of `h` are poles. There `a` vanishes and `b` is taken
/// from its neighbours, rescaled to unit modulus.
pub fn pythagorean_mate(h: &[Complex64]) -> Result<SmirnovSymbol> {
    let log_mod: Vec<f64> = h
        .iter()
        .map(|z| {
            if super::finite(*z) {
                -0.5 * z.norm_sqr().ln_1p()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let a = outer_from_modulus(&log_mod)?;
    let usable: Vec<bool> = h.iter().map(|z| super::finite(*z)).collect();
    let mut bv: Vec<Complex64> = a
        .grid()
        .iter()
        .zip(h)
        .zip(&usable)
        .map(|((a, h), &ok)| if ok { a * h } else { Complex64::new(0.0, 0.0) })
        .collect();
    for j in (0..h.len()).filter(|&j| !usable[j]) {
        let guess = neighbour_fill(&bv, &usable, j).expect("some entry is finite");
        let target = (1.0 - a.grid()[j].norm_sqr()).max(0.0).sqrt();
        bv[j] = if guess.norm() > 0.0 {
            guess * (target / guess.norm())
        } else {
            Complex64::new(target, 0.0)
        };
    }
    SmirnovSymbol::new(a, DiskFunction::from_boundary(bv)?)
}

/// The outer factor `u_n` with `|u_n| = min(n, 1/|a|)` on the grid.
pub(crate) fn unit_factor(a: &DiskFunction, n: f64) -> Result<DiskFunction> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Invalid(format!(
            "approximate unit index {n} must be positive"
        )));
    }
    let cap = n.ln();
    let log_mod: Vec<f64> = a.grid().iter().map(|z| cap.min(-z.norm().ln())).collect();
    outer_from_modulus(&log_mod)
}

/// `a_n = a·u_n` with `|a_n| = min(n|a|, 1)` on the grid.
pub fn approximate_unit(a: &DiskFunction, n: f64) -> Result<DiskFunction> {
    if a.grid().iter().all(|z| z.norm() == 0.0) {
        return Err(Error::Invalid(
            "approximate unit of the zero function".into(),
        ));
    }
    a.mul(&unit_factor(a, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn one_minus_z_over_two(m: usize) -> Vec<f64> {
        (0..m)
            .map(|j| ((c(1.0, 0.0) - root_of_unity(j, m)).norm() / 2.0).ln())
            .collect()
    }

    #[test]
    fn trivial_outer_functions() {
        let a = outer_from_modulus(&[0.0; 64]).unwrap();
        assert!((a.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(a.coeffs()[1..].iter().all(|z| z.norm() < 1e-15));
        let a = outer_from_modulus(&[0.3f64.ln(); 64]).unwrap();
        assert!((a.coeffs()[0] - c(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn outer_with_boundary_zero() {
        let m = 4096;
        let a = outer_from_modulus(&one_minus_z_over_two(m)).unwrap();
        // spectral oracle: direct DFT of the exact boundary values
        let exact: Vec<Complex64> = (0..m)
            .map(|j| (c(1.0, 0.0) - root_of_unity(j, m)) * 0.5)
            .collect();
        let hat = fourier(&exact);
        for (k, (got, want)) in a.coeffs().iter().zip(&hat).enumerate() {
            assert!((got - want).norm() < 1e-8, "coefficient {k}");
        }
        assert!((a.coeffs()[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((a.coeffs()[1] - c(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn modulus_matches_on_grid() {
        let m = 256;
        let lm: Vec<f64> = (0..m)
            .map(|j| (2.0 + root_of_unity(j, m).re).ln() * 0.5)
            .collect();
        let a = outer_from_modulus(&lm).unwrap();
        for (g, l) in a.grid().iter().zip(&lm) {
            assert!((g.norm() - l.exp()).abs() < 1e-12);
        }
        assert!(a.eval(c(0.0, 0.0)).re > 0.0);
    }

    #[test]
    fn rejects_nan_and_plus_infinity() {
        let mut lm = vec![0.0; 16];
        lm[3] = f64::NAN;
        assert!(outer_from_modulus(&lm).is_err());
        lm[3] = f64::INFINITY;
        assert!(outer_from_modulus(&lm).is_err());
        assert!(outer_from_modulus(&[f64::NEG_INFINITY; 16]).is_err());
    }

    #[test]
    fn mates_of_constants() {
        let s = pythagorean_mate(&[c(0.0, 0.0); 64]).unwrap();
        assert!((s.a.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(s.b.norm_sq() < 1e-30);
        let beta = c(3.0, -4.0);
        let s = pythagorean_mate(&[beta; 64]).unwrap();
        let r = 1.0 / 26f64.sqrt();
        assert!((s.a.coeffs()[0] - c(r, 0.0)).norm() < 1e-14);
        assert!((s.b.coeffs()[0] - beta * r).norm() < 1e-14);
    }

    #[test]
    fn mate_of_cauchy_symbol() {
        let m = 4096;
        let h: Vec<Complex64> = (0..m)
            .map(|j| 1.0 / (c(1.0, 0.0) - root_of_unity(j, m)))
            .collect();
        assert!(!super::super::finite(h[0]));
        let s = pythagorean_mate(&h).unwrap();
        assert!(s.pythagorean_residual() < 1e-8);
        for j in 0..m {
            let t = std::f64::consts::TAU * j as f64 / m as f64;
            let want = (2.0 - 2.0 * t.cos()) / (3.0 - 2.0 * t.cos());
            assert!(
                (s.a.grid()[j].norm_sqr() - want).abs() < 1e-8,
                "grid point {j}"
            );
        }
        // b = a·h inside the disk
        let x = c(0.3, -0.2);
        assert!((s.h_at(x) - 1.0 / (c(1.0, 0.0) - x)).norm() < 1e-8);
    }

    #[test]
    fn approximate_unit_cases() {
        let one = DiskFunction::constant(c(1.0, 0.0), 64).unwrap();
        let u = approximate_unit(&one, 3.0).unwrap();
        assert!((u.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-15);
        let half = DiskFunction::constant(c(0.5, 0.0), 64).unwrap();
        let u = approximate_unit(&half, 4.0).unwrap();
        assert!((u.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn approximate_unit_of_one_minus_z() {
        // the kink of min(n|a|, 1) aliases past the grid cap on 4096 points
        let m = 16384;
        let a = outer_from_modulus(&one_minus_z_over_two(m)).unwrap();
        let a10 = approximate_unit(&a, 10.0).unwrap();
        for (j, g) in a10.grid().iter().enumerate() {
            let want = (10.0 * a.grid()[j].norm()).min(1.0);
            assert!((g.norm() - want).abs() < 1e-10);
        }
        assert!(a10.grid_sup() <= 1.0 + 1e-8);
        assert!((a10.eval(c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 0.2);

        let probe = c(0.5, 0.3);
        let mut last = 0.0;
        for n in [2.0, 4.0, 8.0, 16.0] {
            let v = approximate_unit(&a, n).unwrap().eval(probe).norm();
            assert!(v > last && v <= 1.0 + 1e-8, "n = {n}: {v}");
            last = v;
        }
    }
}
