use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::numerics::Scheme;
use crate::schrodinger::Method;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    BornFree,
    BornHarmonic,
    #[serde(rename = "colehopf-1d")]
    Colehopf1d,
    #[serde(rename = "colehopf-3d")]
    Colehopf3d,
    BurgersDirectVsCh,
    SdeEstimators,
    ComplexIncrements,
    Variational,
    GaIdentities,
    FpConsistency,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::BornFree,
        ExperimentKind::BornHarmonic,
        ExperimentKind::Colehopf1d,
        ExperimentKind::Colehopf3d,
        ExperimentKind::BurgersDirectVsCh,
        ExperimentKind::SdeEstimators,
        ExperimentKind::ComplexIncrements,
        ExperimentKind::Variational,
        ExperimentKind::GaIdentities,
        ExperimentKind::FpConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::BornFree => "born-free",
            ExperimentKind::BornHarmonic => "born-harmonic",
            ExperimentKind::Colehopf1d => "colehopf-1d",
            ExperimentKind::Colehopf3d => "colehopf-3d",
            ExperimentKind::BurgersDirectVsCh => "burgers-direct-vs-ch",
            ExperimentKind::SdeEstimators => "sde-estimators",
            ExperimentKind::ComplexIncrements => "complex-increments",
            ExperimentKind::Variational => "variational",
            ExperimentKind::GaIdentities => "ga-identities",
            ExperimentKind::FpConsistency => "fp-consistency",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A run description. Unknown keys are rejected, and keys that the chosen
/// experiment does not use are rejected by [`ExperimentConfig::resolved`].
/// Omitted keys take per-experiment defaults; the resolved config is what
/// `manifest.json` echoes, and it re-runs to identical results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Diffusion coefficient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Period of the domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    /// Grid points per axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    /// Initial standard deviation of a Gaussian packet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    /// Harmonic stiffness `K` in `U = (K/2) x^2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stiffness: Option<f64>,
    /// Real viscosity of the Burgers front.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viscosity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_every: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_paths: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    /// Independent draws (increments, noise sums or random fields).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// `(b, b^)` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[f64; 2]>>,
    /// Drift-family parameters of the variational sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thetas: Option<Vec<f64>>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            seed: None,
            output_dir: None,
            b: None,
            length: None,
            points: None,
            dt: None,
            t_final: None,
            width: None,
            stiffness: None,
            viscosity: None,
            method: None,
            scheme: None,
            record_every: None,
            n_paths: None,
            n_steps: None,
            samples: None,
            pairs: None,
            thetas: None,
        }
    }

    /// Parses JSON text strictly.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Parameters and defaults of one experiment.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let mut c = Self::new(kind);
        c.seed = Some(DEFAULT_SEED);
        c.output_dir = Some(PathBuf::from("runs").join(kind.name()));
        match kind {
            ExperimentKind::BornFree => {
                c.b = Some(1.0);
                c.length = Some(20.0);
                c.points = Some(512);
                c.dt = Some(1e-3);
                c.t_final = Some(1.0);
                c.width = Some(1.0);
                c.method = Some(Method::SplitStep);
                c.scheme = Some(Scheme::Spectral);
                c.record_every = Some(10);
            }
            ExperimentKind::BornHarmonic => {
                c.b = Some(1.0);
                c.length = Some(20.0);
                c.points = Some(256);
                c.dt = Some(1e-3);
                c.t_final = Some(10.0);
                c.stiffness = Some(1.0);
                c.method = Some(Method::SplitStep);
                c.scheme = Some(Scheme::Spectral);
                c.record_every = Some(100);
            }
            ExperimentKind::Colehopf1d => {
                c.b = Some(1.0);
                c.length = Some(20.0);
                c.points = Some(512);
                c.dt = Some(1e-3);
                c.t_final = Some(2.0);
                c.viscosity = Some(0.25);
                c.scheme = Some(Scheme::Central2);
            }
            ExperimentKind::Colehopf3d => {
                c.b = Some(1.0);
                c.points = Some(16);
                c.samples = Some(20);
            }
            ExperimentKind::BurgersDirectVsCh => {
                c.b = Some(1.0);
                c.points = Some(512);
                c.dt = Some(1e-4);
                c.t_final = Some(1.0);
            }
            ExperimentKind::SdeEstimators => {
                c.b = Some(1.0);
                c.n_paths = Some(100_000);
                c.n_steps = Some(1000);
                c.dt = Some(1e-3);
            }
            ExperimentKind::ComplexIncrements => {
                c.samples = Some(1_000_000);
                c.dt = Some(1e-3);
                c.pairs = Some(vec![[1.0, 1.0], [1.0, 0.5], [0.5, 2.0]]);
            }
            ExperimentKind::Variational => {
                c.b = Some(1.0);
                c.n_paths = Some(20_000);
                c.n_steps = Some(500);
                c.t_final = Some(1.0);
                c.points = Some(64);
                c.samples = Some(100_000);
                c.thetas = Some(vec![-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0]);
            }
            ExperimentKind::GaIdentities => {
                c.points = Some(16);
                c.samples = Some(200);
            }
            ExperimentKind::FpConsistency => {
                c.b = Some(1.0);
                c.length = Some(12.0);
                c.points = Some(240);
                c.t_final = Some(2.0);
            }
        }
        c
    }

    /// Fills defaults, rejecting keys the experiment does not use and
    /// out-of-range values.
    pub fn resolved(&self) -> Result<Self> {
        let defaults = to_map(&Self::defaults(self.experiment))?;
        let given = to_map(self)?;
        let mut merged = defaults.clone();
        for (key, value) in given {
            if !defaults.contains_key(&key) {
                return Err(Error::Config(format!(
                    "key `{key}` is not used by experiment {}",
                    self.experiment
                )));
            }
            merged.insert(key, value);
        }
        let out: Self = serde_json::from_value(Value::Object(merged))
            .map_err(|e| Error::Config(e.to_string()))?;
        out.validate()?;
        Ok(out)
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: Option<f64>| -> Result<()> {
            match v {
                Some(x) if !(x.is_finite() && x > 0.0) => Err(Error::Config(format!(
                    "`{name}` must be positive and finite, got {x}"
                ))),
                _ => Ok(()),
            }
        };
        positive("b", self.b)?;
        positive("length", self.length)?;
        positive("dt", self.dt)?;
        positive("t_final", self.t_final)?;
        positive("width", self.width)?;
        positive("stiffness", self.stiffness)?;
        positive("viscosity", self.viscosity)?;
        let at_least = |name: &str, v: Option<usize>, min: usize| -> Result<()> {
            match v {
                Some(x) if x < min => Err(Error::Config(format!(
                    "`{name}` must be at least {min}, got {x}"
                ))),
                _ => Ok(()),
            }
        };
        at_least("points", self.points, 8)?;
        at_least("record_every", self.record_every, 1)?;
        at_least("n_paths", self.n_paths, 100)?;
        at_least("n_steps", self.n_steps, 2)?;
        at_least("samples", self.samples, 1)?;
        if let Some(pairs) = &self.pairs {
            if pairs.is_empty() {
                return Err(Error::Config("`pairs` must not be empty".into()));
            }
            for [b, b_hat] in pairs {
                if !(b.is_finite()
                    && b_hat.is_finite()
                    && *b >= 0.0
                    && *b_hat >= 0.0
                    && b * b + b_hat * b_hat > 0.0)
                {
                    return Err(Error::Config(format!("bad (b, b^) pair ({b}, {b_hat})")));
                }
            }
        }
        if let Some(thetas) = &self.thetas {
            if thetas.len() < 3 || thetas.iter().any(|t| !t.is_finite()) {
                return Err(Error::Config(
                    "`thetas` needs at least three finite values".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("runs").join(self.experiment.name()))
    }

    // Accessors for resolved configs; every key an experiment reads is
    // present after `resolved`.
    pub(crate) fn get<T: Clone>(&self, v: &Option<T>) -> T {
        v.clone().expect("config was resolved before use")
    }
}

fn to_map(c: &ExperimentConfig) -> Result<Map<String, Value>> {
    match serde_json::to_value(c)? {
        Value::Object(m) => Ok(m),
        _ => Err(Error::Config("config must be a JSON object".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(ExperimentKind::from_name(k.name()), Some(k));
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
    }

    #[test]
    fn unknown_and_unused_keys_are_rejected() {
        let err =
            ExperimentConfig::from_json(r#"{"experiment": "born-free", "pointz": 3}"#).unwrap_err();
        assert!(err.to_string().contains("pointz"));
        let c =
            ExperimentConfig::from_json(r#"{"experiment": "born-free", "n_paths": 1000}"#).unwrap();
        let err = c.resolved().unwrap_err();
        assert!(err.to_string().contains("n_paths"));
    }

    #[test]
    fn resolution_fills_defaults_and_keeps_overrides() {
        let c =
            ExperimentConfig::from_json(r#"{"experiment": "born-free", "points": 256}"#).unwrap();
        let r = c.resolved().unwrap();
        assert_eq!(r.points, Some(256));
        assert_eq!(r.dt, Some(1e-3));
        assert_eq!(r.seed, Some(DEFAULT_SEED));
        assert_eq!(r.resolved().unwrap(), r);
        let bad = ExperimentConfig::from_json(r#"{"experiment": "born-free", "dt": -1}"#).unwrap();
        assert!(bad.resolved().is_err());
    }
}
