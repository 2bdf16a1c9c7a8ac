//! JSON experiment configuration.
//!
//! Deserialization is strict: unknown fields are rejected and every domain
//! invariant is validated before any computation starts. Errors carry a dotted
//! field path such as `iteration.operators[1].r`.

use std::path::{Path, PathBuf};

use fixpoint_core::classes::{KSequence, PsiSpec, DEFAULT_HORIZON};
use fixpoint_core::sampling::{DEFAULT_RADIUS, DEFAULT_SAMPLES, DEFAULT_SEED};
use fixpoint_core::scheme::{IterationConfig, ScheduleSpec, DEFAULT_N_MAX};
use fixpoint_core::{Error as CoreError, NormTag, OperatorSpec, Point};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const SEED_ENV: &str = "FIXPOINT_SEED";

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub norm_p: Option<f64>,
    /// Output path used when none is given on the command line.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub iteration: Option<IterationSection>,
    #[serde(default)]
    pub classify: Option<ClassifySection>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorCfg {
    Scaling {
        c: f64,
        dim: usize,
    },
    TowardPoint {
        center: Vec<f64>,
        r: f64,
    },
    Affine {
        matrix: Vec<Vec<f64>>,
        offset: Vec<f64>,
    },
    Clamp {
        lo: f64,
        hi: f64,
        dim: usize,
    },
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSchedule {
    Zero,
}

/// `{"a": .., "b": .., "q": ..}` or the string `"zero"`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ScheduleCfg {
    Zero(ZeroSchedule),
    Params(ScheduleParams),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleParams {
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IterationSection {
    pub p: usize,
    pub operators: Vec<OperatorCfg>,
    pub alpha: ScheduleCfg,
    pub betas: Vec<ScheduleCfg>,
    pub x1: Vec<f64>,
    #[serde(default)]
    pub xstar: Option<Vec<f64>>,
    #[serde(default)]
    pub n_max: Option<u64>,
    #[serde(default)]
    pub tol: Option<f64>,
    /// The diagnostic constant `M`.
    #[serde(default)]
    pub dn_scale: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct KCfg {
    pub c: f64,
    #[serde(default = "one")]
    pub s: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PsiCfg {
    pub lambda: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckCfg {
    LipschitzEstimate {
        #[serde(default)]
        n: Option<u64>,
    },
    UniformLipschitz {
        lipschitz: f64,
        #[serde(default)]
        n_max: Option<u64>,
    },
    AsymptoticPseudocontractive {
        k: KCfg,
        #[serde(default)]
        n_max: Option<u64>,
    },
    StarCondition {
        xstar: Vec<f64>,
        k: KCfg,
        psi: PsiCfg,
        #[serde(default)]
        n_max: Option<u64>,
    },
    UniqueFixedPoint {
        xstar: Vec<f64>,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySection {
    pub operator: OperatorCfg,
    #[serde(default)]
    pub n_max: Option<u64>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub radius: Option<f64>,
    pub checks: Vec<CheckCfg>,
}

/// A classify section with every value converted to its domain type.
#[derive(Debug, Clone)]
pub struct ClassifyPlan {
    pub operator: OperatorSpec,
    pub n_max: u64,
    pub samples: usize,
    pub radius: f64,
    pub checks: Vec<CheckPlan>,
}

#[derive(Debug, Clone)]
pub enum CheckPlan {
    LipschitzEstimate {
        n: u64,
    },
    UniformLipschitz {
        lipschitz: f64,
        n_max: u64,
    },
    AsymptoticPseudocontractive {
        k: KSequence,
        n_max: u64,
    },
    StarCondition {
        xstar: Point,
        k: KSequence,
        psi: PsiSpec,
        n_max: u64,
    },
    UniqueFixedPoint {
        xstar: Point,
    },
}

impl CheckPlan {
    pub fn name(&self) -> &'static str {
        match self {
            CheckPlan::LipschitzEstimate { .. } => "lipschitz_estimate",
            CheckPlan::UniformLipschitz { .. } => "uniform_lipschitz",
            CheckPlan::AsymptoticPseudocontractive { .. } => "asymptotic_pseudocontractive",
            CheckPlan::StarCondition { .. } => "star_condition",
            CheckPlan::UniqueFixedPoint { .. } => "unique_fixed_point",
        }
    }
}

fn invalid(field: impl Into<String>, err: CoreError) -> CliError {
    match err {
        CoreError::Config {
            field: sub,
            message,
        } => CliError::Invalid {
            field: format!("{}.{sub}", field.into()),
            message,
        },
        other => CliError::Invalid {
            field: field.into(),
            message: other.to_string(),
        },
    }
}

pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ExperimentConfig =
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
            field: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(CliError::Invalid {
            field: "schema_version".into(),
            message: format!(
                "unsupported version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            ),
        });
    }
    cfg.norm()?;
    if let Some(it) = &cfg.iteration {
        it.to_core(cfg.norm()?)?;
    }
    if let Some(c) = &cfg.classify {
        c.to_plan()?;
    }
    Ok(cfg)
}

/// Reads `FIXPOINT_SEED`, if set.
pub fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Argument(format!("{SEED_ENV} is not a u64: {v:?}"))),
        Err(_) => Ok(None),
    }
}

impl ExperimentConfig {
    pub fn norm(&self) -> Result<NormTag> {
        match self.norm_p {
            None => Ok(NormTag::EUCLIDEAN),
            Some(p) => NormTag::new(p).map_err(|e| invalid("norm_p", e)),
        }
    }

    /// Environment override first, then the config, then the built-in default.
    pub fn effective_seed(&self, env_override: Option<u64>) -> u64 {
        env_override.or(self.seed).unwrap_or(DEFAULT_SEED)
    }

    pub fn iteration_config(&self) -> Result<IterationConfig> {
        let section = self.iteration.as_ref().ok_or_else(|| CliError::Invalid {
            field: "iteration".into(),
            message: "section is required for this command".into(),
        })?;
        section.to_core(self.norm()?)
    }

    pub fn classify_plan(&self) -> Result<ClassifyPlan> {
        let section = self.classify.as_ref().ok_or_else(|| CliError::Invalid {
            field: "classify".into(),
            message: "section is required for this command".into(),
        })?;
        section.to_plan()
    }
}

fn point(field: &str, coords: &[f64]) -> Result<Point> {
    Point::new(coords.to_vec()).map_err(|e| invalid(field, e))
}

impl OperatorCfg {
    pub fn to_core(&self, field: &str) -> Result<OperatorSpec> {
        let spec = match self {
            OperatorCfg::Scaling { c, dim } => OperatorSpec::scaling(*c, *dim),
            OperatorCfg::TowardPoint { center, r } => {
                OperatorSpec::toward_point(point(&format!("{field}.center"), center)?, *r)
            }
            OperatorCfg::Affine { matrix, offset } => {
                OperatorSpec::affine(matrix.clone(), point(&format!("{field}.offset"), offset)?)
            }
            OperatorCfg::Clamp { lo, hi, dim } => OperatorSpec::clamp(*lo, *hi, *dim),
        };
        spec.map_err(|e| invalid(field, e))
    }
}

impl ScheduleCfg {
    fn to_core(&self, field: &str) -> Result<ScheduleSpec> {
        match self {
            ScheduleCfg::Zero(_) => Ok(ScheduleSpec::ZERO),
            ScheduleCfg::Params(p) => {
                ScheduleSpec::new(p.a, p.b, p.q).map_err(|e| invalid(field, e))
            }
        }
    }
}

impl IterationSection {
    pub fn to_core(&self, norm: NormTag) -> Result<IterationConfig> {
        let operators = self
            .operators
            .iter()
            .enumerate()
            .map(|(i, o)| o.to_core(&format!("iteration.operators[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let alpha = self.alpha.to_core("iteration.alpha")?;
        let betas = self
            .betas
            .iter()
            .enumerate()
            .map(|(i, b)| b.to_core(&format!("iteration.betas[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let x1 = point("iteration.x1", &self.x1)?;
        let wrap = |e| invalid("iteration", e);
        let mut cfg = IterationConfig::new(self.p, operators, alpha, betas, x1)
            .map_err(wrap)?
            .with_norm(norm)
            .with_n_max(self.n_max.unwrap_or(DEFAULT_N_MAX))
            .map_err(wrap)?
            .with_tol(self.tol.unwrap_or(0.0))
            .map_err(wrap)?
            .with_dn_scale(self.dn_scale.unwrap_or(1.0))
            .map_err(wrap)?;
        if let Some(xs) = &self.xstar {
            cfg = cfg
                .with_xstar(point("iteration.xstar", xs)?)
                .map_err(wrap)?;
        }
        Ok(cfg)
    }
}

fn k_seq(field: &str, k: &KCfg) -> Result<KSequence> {
    KSequence::new(k.c, k.s).map_err(|e| invalid(field, e))
}

fn horizon(field: &str, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(CliError::Invalid {
            field: field.into(),
            message: "horizon must be >= 1".into(),
        });
    }
    Ok(n)
}

impl ClassifySection {
    pub fn to_plan(&self) -> Result<ClassifyPlan> {
        let operator = self.operator.to_core("classify.operator")?;
        let dim = operator.dim();
        let n_max = horizon("classify.n_max", self.n_max.unwrap_or(DEFAULT_HORIZON))?;
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(CliError::Invalid {
                field: "classify.samples".into(),
                message: "at least one sample is required".into(),
            });
        }
        let radius = self.radius.unwrap_or(DEFAULT_RADIUS);
        if !(radius.is_finite() && radius > 0.0) {
            return Err(CliError::Invalid {
                field: "classify.radius".into(),
                message: "radius must be finite and > 0".into(),
            });
        }
        let fixed = |field: String, xs: &[f64]| -> Result<Point> {
            let p = point(&field, xs)?;
            if p.dim() != dim {
                return Err(CliError::Invalid {
                    field,
                    message: format!(
                        "dimension {} does not match operator dimension {dim}",
                        p.dim()
                    ),
                });
            }
            Ok(p)
        };
        let mut checks = Vec::with_capacity(self.checks.len());
        for (i, c) in self.checks.iter().enumerate() {
            let f = |name: &str| format!("classify.checks[{i}].{name}");
            let plan = match c {
                CheckCfg::LipschitzEstimate { n } => CheckPlan::LipschitzEstimate {
                    n: horizon(&f("n"), n.unwrap_or(1))?,
                },
                CheckCfg::UniformLipschitz {
                    lipschitz,
                    n_max: h,
                } => {
                    if !(lipschitz.is_finite() && *lipschitz > 0.0) {
                        return Err(CliError::Invalid {
                            field: f("lipschitz"),
                            message: "L must be > 0".into(),
                        });
                    }
                    CheckPlan::UniformLipschitz {
                        lipschitz: *lipschitz,
                        n_max: horizon(&f("n_max"), h.unwrap_or(n_max))?,
                    }
                }
                CheckCfg::AsymptoticPseudocontractive { k, n_max: h } => {
                    CheckPlan::AsymptoticPseudocontractive {
                        k: k_seq(&f("k"), k)?,
                        n_max: horizon(&f("n_max"), h.unwrap_or(n_max))?,
                    }
                }
                CheckCfg::StarCondition {
                    xstar,
                    k,
                    psi,
                    n_max: h,
                } => CheckPlan::StarCondition {
                    xstar: fixed(f("xstar"), xstar)?,
                    k: k_seq(&f("k"), k)?,
                    psi: PsiSpec::new(psi.lambda, psi.m).map_err(|e| invalid(f("psi"), e))?,
                    n_max: horizon(&f("n_max"), h.unwrap_or(n_max))?,
                },
                CheckCfg::UniqueFixedPoint { xstar } => CheckPlan::UniqueFixedPoint {
                    xstar: fixed(f("xstar"), xstar)?,
                },
            };
            checks.push(plan);
        }
        if checks.is_empty() {
            return Err(CliError::Invalid {
                field: "classify.checks".into(),
                message: "select at least one check".into(),
            });
        }
        Ok(ClassifyPlan {
            operator,
            n_max,
            samples,
            radius,
            checks,
        })
    }
}
