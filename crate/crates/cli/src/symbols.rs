//! Symbols referenced from configs: a table of named closed forms, complex
//! constants, and explicit value tables.

use std::f64::consts::PI;

use cnplab::{PointSet, SampledMultiplier};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub struct NamedSymbol {
    pub name: &'static str,
    pub summary: &'static str,
    eval: fn(&[Complex64]) -> Complex64,
    /// `log|h|`, for symbols whose values overflow.
    log_modulus: Option<fn(&[Complex64]) -> f64>,
}

fn radius(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub const SYMBOLS: &[NamedSymbol] = &[
    NamedSymbol {
        name: "zero",
        summary: "h = 0",
        eval: |_| Complex64::new(0.0, 0.0),
        log_modulus: None,
    },
    NamedSymbol {
        name: "one",
        summary: "h = 1",
        eval: |_| Complex64::new(1.0, 0.0),
        log_modulus: None,
    },
    NamedSymbol {
        name: "z",
        summary: "first coordinate z_1",
        eval: |z| z[0],
        log_modulus: None,
    },
    NamedSymbol {
        name: "z2",
        summary: "second coordinate z_2",
        eval: |z| {
            z.get(1)
                .copied()
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        },
        log_modulus: None,
    },
    NamedSymbol {
        name: "one_over_1mz",
        summary: "1/(1 - z_1), a pole at 1",
        eval: |z| {
            let d = 1.0 - z[0];
            if d.norm() == 0.0 {
                Complex64::new(f64::INFINITY, 0.0)
            } else {
                1.0 / d
            }
        },
        log_modulus: None,
    },
    NamedSymbol {
        name: "one_minus_z_half",
        summary: "(1 - z_1)/2",
        eval: |z| (1.0 - z[0]) * 0.5,
        log_modulus: None,
    },
    NamedSymbol {
        name: "exp_inv_sq",
        summary: "exp((1 - |z|)^-2), growth faster than any exp(C/(1-|z|))",
        eval: |z| Complex64::new((1.0 - radius(z)).powi(-2).exp(), 0.0),
        log_modulus: Some(|z| (1.0 - radius(z)).powi(-2)),
    },
];

pub fn lookup(name: &str) -> CliResult<&'static NamedSymbol> {
    SYMBOLS
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| CliError::Config(format!("unknown symbol `{name}`; see `cnplab list`")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantSymbol {
    pub constant: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSymbol {
    pub table: Vec<[f64; 2]>,
}

/// `"z"`, `{"constant": [re, im]}` or `{"table": [[re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolSpec {
    Named(String),
    Constant(ConstantSymbol),
    Table(TableSymbol),
}

fn cx([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

impl SymbolSpec {
    pub fn label(&self) -> String {
        match self {
            Self::Named(n) => n.clone(),
            Self::Constant(c) => format!("constant({}, {})", c.constant[0], c.constant[1]),
            Self::Table(t) => format!("table({})", t.table.len()),
        }
    }

    fn values_at(&self, coords: &[Vec<Complex64>]) -> CliResult<Vec<Complex64>> {
        match self {
            Self::Named(n) => {
                let s = lookup(n)?;
                Ok(coords.iter().map(|c| (s.eval)(c)).collect())
            }
            Self::Constant(c) => Ok(vec![cx(c.constant); coords.len()]),
            Self::Table(t) => {
                if t.table.len() != coords.len() {
                    return Err(CliError::Config(format!(
                        "symbol table has {} values for {} points",
                        t.table.len(),
                        coords.len()
                    )));
                }
                Ok(t.table.iter().copied().map(cx).collect())
            }
        }
    }

    /// Values on the sample.
    pub fn sample(&self, pts: &PointSet) -> CliResult<SampledMultiplier> {
        let coords: Vec<Vec<Complex64>> =
            pts.points().iter().map(|p| p.coords().to_vec()).collect();
        let values = self.values_at(&coords)?;
        Ok(SampledMultiplier::new(self.label(), values)?)
    }

    /// `log|h|` on the sample.
    pub fn log_modulus(&self, pts: &PointSet) -> CliResult<Vec<f64>> {
        if let Self::Named(n) = self {
            if let Some(lm) = lookup(n)?.log_modulus {
                return Ok(pts.points().iter().map(|p| lm(p.coords())).collect());
            }
        }
        Ok(self
            .sample(pts)?
            .values
            .iter()
            .map(|z| z.norm().ln())
            .collect())
    }

    /// Boundary values on the `m` roots of unity; non-finite values mark poles.
    pub fn boundary(&self, m: usize) -> CliResult<Vec<Complex64>> {
        let coords: Vec<Vec<Complex64>> = (0..m)
            .map(|j| vec![Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)])
            .collect();
        self.values_at(&coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let specs: Vec<SymbolSpec> =
            serde_json::from_str(r#"["z", {"constant": [0.5, 0]}, {"table": [[1, 0], [0, 1]]}]"#)
                .unwrap();
        assert!(matches!(specs[0], SymbolSpec::Named(_)));
        assert!(matches!(specs[1], SymbolSpec::Constant(_)));
        assert!(matches!(specs[2], SymbolSpec::Table(_)));
        assert!(serde_json::from_str::<SymbolSpec>(r#"{"constant": [1, 0], "x": 1}"#).is_err());
    }

    #[test]
    fn pole_on_the_grid() {
        let b = SymbolSpec::Named("one_over_1mz".into())
            .boundary(8)
            .unwrap();
        assert!(!b[0].re.is_finite());
        assert!((b[4] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn growth_symbol_does_not_overflow() {
        let pts = PointSet::disk(&[Complex64::new(0.99, 0.0)], "p").unwrap();
        let l = SymbolSpec::Named("exp_inv_sq".into())
            .log_modulus(&pts)
            .unwrap();
        assert!((l[0] - 1e4).abs() < 1e-6);
    }
}
