//! Experiment configuration files.

use std::path::{Path, PathBuf};

use cnplab::kernels::{kernel_from_name, BallSampleOptions, PointJson};
use cnplab::{CnpKernel, Point, PointSet, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::symbols::SymbolSpec;

/// One experiment. Fields that an experiment does not read are ignored by
/// it, but unknown keys are rejected.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<String>,
    /// Ball dimension for `drury-arveson`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
    /// Required whenever `generator` is set; `--seed` overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolSpec>,
    /// `(a, b)` for corona and column-contractivity checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[SymbolSpec; 2]>,
    /// Prefix lengths for refinement sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nested: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Taylor coefficients of the approximation target.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<[f64; 2]>>,
    /// Truncation orders for the counterexample partial sums.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<TermSpec>>,
    /// Degree cap for the hyponormality probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Generator {
    /// Nested radial rings on the disk.
    Fejer {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        per_ring: Option<usize>,
    },
    /// Seeded separated sample of the ball.
    Ball {
        n: usize,
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_radius: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_separation: Option<f64>,
    },
}

/// A monomial `coeff · z^alpha`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub alpha: Vec<u32>,
    pub coeff: [f64; 2],
}

/// Expected values turned into assertions.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accept: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dom_t_star: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<Vec<f64>>,
    /// Absolute tolerance, scaled by `max(1, |expected|)`. Default `1e-12`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl Expect {
    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(1e-12)
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }

    pub fn expect(&self) -> Expect {
        self.expect.clone().unwrap_or_default()
    }

    pub fn kernel(&self) -> CliResult<CnpKernel> {
        let name = self.kernel.as_deref().unwrap_or("szego");
        Ok(kernel_from_name(name, self.dim)?)
    }

    pub fn symbol(&self) -> CliResult<&SymbolSpec> {
        self.symbol
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("`{}` needs a \"symbol\"", self.experiment)))
    }

    pub fn pair(&self) -> CliResult<&[SymbolSpec; 2]> {
        self.pair
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("`{}` needs a \"pair\"", self.experiment)))
    }

    /// The point set, from `points` or `generator` (exactly one).
    pub fn point_set(&self) -> CliResult<PointSet> {
        match (&self.points, &self.generator) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "give either \"points\" or \"generator\", not both".into(),
            )),
            (None, None) => Err(CliError::Config(format!(
                "`{}` needs \"points\" or \"generator\"",
                self.experiment
            ))),
            (Some(pts), None) => {
                let pts = pts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        p.to_point()
                            .map_err(|e| CliError::Config(format!("point {i}: {e}")))
                    })
                    .collect::<CliResult<Vec<Point>>>()?;
                Ok(PointSet::new(pts, "config")?)
            }
            (None, Some(generator)) => {
                let seed = self.seed.ok_or_else(|| {
                    CliError::Config("generated point sets need a \"seed\"".into())
                })?;
                match generator {
                    Generator::Fejer { n, per_ring } => {
                        Ok(PointSet::fejer_radial(*n, per_ring.unwrap_or(4))?)
                    }
                    Generator::Ball {
                        n,
                        dim,
                        max_radius,
                        min_separation,
                    } => {
                        let mut opts = BallSampleOptions::default();
                        if let Some(r) = max_radius {
                            opts.max_radius = *r;
                        }
                        if let Some(s) = min_separation {
                            opts.min_separation = *s;
                        }
                        Ok(PointSet::ball_sample(*n, *dim, seed, &opts)?)
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_field_rejected() {
        let err =
            ExperimentConfig::from_json(r#"{"experiment": "mate", "colour": 1}"#).unwrap_err();
        assert!(err.to_string().contains("colour"));
    }

    #[test]
    fn generator_needs_seed() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment": "multnorm", "generator": {"kind": "fejer", "n": 5}}"#,
        )
        .unwrap();
        assert!(matches!(cfg.point_set(), Err(CliError::Config(_))));
        let cfg = ExperimentConfig {
            seed: Some(1),
            ..cfg
        };
        assert_eq!(cfg.point_set().unwrap().len(), 5);
    }

    #[test]
    fn explicit_points() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment": "cnp-check", "kernel": "drury-arveson", "dim": 2,
                "points": [[[0, 0], [0, 0]], [[0.5, 0], [0, 0.1]]]}"#,
        )
        .unwrap();
        assert_eq!(cfg.point_set().unwrap().dim(), 2);
        assert!(matches!(cfg.kernel().unwrap(), CnpKernel::DruryArveson(2)));
    }
}
