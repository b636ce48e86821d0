//! Reproducible verification runs behind the command-line tool.
//!
//! Each experiment reads a strictly validated [`ExperimentConfig`], writes
//! plot-ready CSV tables into its output directory and returns a [`Summary`]
//! with one [`Check`] per measured quantity. Everything written is a pure
//! function of the resolved config, so a re-run with the same seed produces
//! byte-identical files (wall-clock timings go to `timing.json`, which is
//! excluded from that contract).

mod born;
mod colehopf;
mod config;
mod fp;
mod ga;
mod output;
mod stochastic;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use config::{ExperimentConfig, ExperimentKind, DEFAULT_SEED};
pub use output::Output;

use crate::error::Result;

/// The numbered acceptance criteria the checks feed into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    BornRule,
    HarmonicStationarity,
    ColeHopfEquivalence,
    LinearizationCancellation,
    GeometricAlgebra,
    SdeEstimators,
    ComplexIncrements,
    FokkerPlanckConsistency,
    VariationalPrinciple,
    Determinism,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Criterion::BornRule,
        Criterion::HarmonicStationarity,
        Criterion::ColeHopfEquivalence,
        Criterion::LinearizationCancellation,
        Criterion::GeometricAlgebra,
        Criterion::SdeEstimators,
        Criterion::ComplexIncrements,
        Criterion::FokkerPlanckConsistency,
        Criterion::VariationalPrinciple,
        Criterion::Determinism,
    ];

    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap_or(0) + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::BornRule => "born-rule",
            Criterion::HarmonicStationarity => "harmonic-stationarity",
            Criterion::ColeHopfEquivalence => "cole-hopf-equivalence",
            Criterion::LinearizationCancellation => "linearization-cancellation",
            Criterion::GeometricAlgebra => "geometric-algebra",
            Criterion::SdeEstimators => "sde-estimators",
            Criterion::ComplexIncrements => "complex-increments",
            Criterion::FokkerPlanckConsistency => "fokker-planck-consistency",
            Criterion::VariationalPrinciple => "variational-principle",
            Criterion::Determinism => "determinism",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    AtMost,
    AtLeast,
}

/// One measured quantity against its threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub criterion: Criterion,
    pub name: String,
    /// `None` when the quantity is not reproducible (wall-clock time).
    pub measured: Option<f64>,
    pub threshold: f64,
    pub comparison: Comparison,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    pub fn at_most(
        criterion: Criterion,
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
    ) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured: Some(measured),
            threshold,
            comparison: Comparison::AtMost,
            // NaN never passes.
            pass: measured <= threshold,
            note: None,
        }
    }

    pub fn at_least(
        criterion: Criterion,
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
    ) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured: Some(measured),
            threshold,
            comparison: Comparison::AtLeast,
            pass: measured >= threshold,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Human-readable one-liner.
    pub fn describe(&self) -> String {
        let op = match self.comparison {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        let measured = self
            .measured
            .map_or_else(|| "n/a".to_string(), |m| format!("{m:.3e}"));
        format!(
            "[{}] {}: {} = {} (need {} {:.3e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion.name(),
            self.name,
            measured,
            op,
            self.threshold
        )
    }
}

/// Machine-readable verdict of one run, written as `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Extra measured diagnostics that have no threshold.
    pub diagnostics: serde_json::Map<String, serde_json::Value>,
    /// Files written next to the summary, in creation order.
    pub outputs: Vec<String>,
}

impl Summary {
    pub fn criteria(&self) -> Vec<Criterion> {
        let mut c: Vec<Criterion> = self.checks.iter().map(|c| c.criterion).collect();
        c.sort();
        c.dedup();
        c
    }
}

/// What an experiment hands back before the summary is assembled.
pub(crate) struct Outcome {
    pub checks: Vec<Check>,
    pub diagnostics: serde_json::Map<String, serde_json::Value>,
    /// Wall-clock timings in seconds.
    pub timings: Vec<(String, f64)>,
}

impl Outcome {
    pub fn new() -> Self {
        Self {
            checks: Vec::new(),
            diagnostics: serde_json::Map::new(),
            timings: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn diagnostic(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.diagnostics.insert(key.to_string(), v);
    }
}

/// Short description for `list`.
pub fn synopsis(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::BornFree => {
            "Born rule for a free Gaussian packet, with grid-refinement order"
        }
        ExperimentKind::BornHarmonic => {
            "Born rule and norm conservation for the harmonic ground state"
        }
        ExperimentKind::Colehopf1d => {
            "real-viscosity Burgers: traveling front, heat route, real Cole-Hopf chain"
        }
        ExperimentKind::Colehopf3d => {
            "vector Cole-Hopf: linearization cancellation and lambda roots in 3-D"
        }
        ExperimentKind::BurgersDirectVsCh => {
            "complex-viscosity Burgers: direct solver versus the Schrodinger route"
        }
        ExperimentKind::SdeEstimators => {
            "Nelson drift, diffusion, osmotic and current velocity estimators (OU)"
        }
        ExperimentKind::ComplexIncrements => "moments of the complex noise increment dZ",
        ExperimentKind::Variational => {
            "drift-family sweep of the stochastic action and noise-square cancellation"
        }
        ExperimentKind::GaIdentities => "Cl(3) product axioms and stretched-gradient identities",
        ExperimentKind::FpConsistency => {
            "Fokker-Planck mass, sum/difference split and complex form"
        }
    }
}

/// Long description for `describe`: what is exercised and at which thresholds.
pub fn description(kind: ExperimentKind) -> String {
    let body = match kind {
        ExperimentKind::BornFree => {
            "Exercises the Born-rule theorem: the density transported by the continuity equation with the \
             current velocity extracted from psi stays equal to |psi|^2. A free Gaussian packet is evolved by \
             split-step Fourier; rho is advanced with a second-order finite-volume scheme.\n\
             Thresholds: max_t |rho - |psi|^2|_inf / |rho|_inf <= 1e-2 at N = 512; observed order >= 1.5 when \
             N doubles at fixed dt; single-threaded runtime of the N run <= 60 s (recorded in timing.json)."
        }
        ExperimentKind::BornHarmonic => {
            "Exercises the Born-rule theorem on a stationary state: the harmonic-oscillator ground state only \
             rotates in phase, so the current velocity vanishes and rho must stay put. Also runs the conjugate \
             drive (G = psi*, U = V*), which must give the same density.\n\
             Thresholds: Born discrepancy <= 1e-6 over T = 10; |norm - 1| <= 1e-8; conjugate-drive density \
             difference <= 1e-12."
        }
        ExperimentKind::Colehopf1d => {
            "Exercises the Cole-Hopf linearization of the real Burgers equation a_t + a a_x = nu a_xx: the \
             direct solver against the analytic tanh front, the heat-equation route against a boosted periodic \
             heat solution, and the real transform chain (Burgers residual, heat residual and the \
             product-rule identity) on a manufactured negative-viscosity solution.\n\
             Thresholds: front error <= 1e-2 within 4 length units of the front; heat-route and direct errors \
             <= 1e-6; real-chain residuals <= 1e-6."
        }
        ExperimentKind::Colehopf3d => {
            "Exercises the vector Cole-Hopf theorem with the isotropic complex stretch C(grad) = -i b^2 grad: \
             the nonlinear terms cancel identically for any positive F, and the stretch coefficient is a root \
             of lambda^2 + i b^2 lambda = 0. A separable 3-D flow must equal three 1-D flows.\n\
             Thresholds: linearization residual <= 1e-10 for 20 random smooth positive F (spectral); lambda \
             roots -i b^2 and +i b^2 exact; separable 3-D versus 1-D <= 1e-10."
        }
        ExperimentKind::BurgersDirectVsCh => {
            "Exercises the complex-viscosity Burgers equation V_t + V V_x = (i b^2 / 2) V_xx and its \
             linearization by the Schrodinger equation: the direct integrating-factor RK4 solver and the \
             Cole-Hopf route are compared until the first node of F.\n\
             Thresholds: direct versus Cole-Hopf L_inf <= 1e-2 at N = 512 before node formation; Cole-Hopf \
             route versus the exact solution <= 1e-8."
        }
        ExperimentKind::SdeEstimators => {
            "Exercises the forward/backward mean-derivative definitions of the drifts and the osmotic and \
             current velocities, on the stationary Ornstein-Uhlenbeck process a = -x, b = 1 started from its \
             invariant law. A separate backward ensemble checks the backward estimator.\n\
             Thresholds: drifts and b recovered within 5 standard errors (n_paths = 1e5, dt = 1e-3); u = -x and \
             v = 0 within 5 standard errors."
        }
        ExperimentKind::ComplexIncrements => {
            "Exercises the complex increment dZ = (b dW + i b^ dW^) / (sqrt 2 sigma): its mean, square and \
             modulus square for three (b, b^) pairs.\n\
             Thresholds: |E dZ| <= 3/sqrt(n); |E dZ dZ*/dt - 1| <= 3/sqrt(n); \
             |E dZ^2 - ((b^2 - b^^2)/(b^2 + b^^2)) dt| <= 3 dt/sqrt(n)."
        }
        ExperimentKind::Variational => {
            "Exercises the stochastic variational principle: S_1 = E sum[(dX)^2/dt - b^2] over the drift family \
             a_theta = theta phi is smallest at the theta whose Burgers geodesic residual is smallest, and the \
             complex noise square E (sum dZ)^2 vanishes by independence of the two Brownian motions.\n\
             Thresholds: paired S_1 excess over the geodesic theta >= -3 standard errors at every sweep point; \
             |E (sum dZ)^2 / T| <= 3/sqrt(n) in real and imaginary parts."
        }
        ExperimentKind::GaIdentities => {
            "Exercises the Cl(3) geometric algebra and the stretched-gradient identities: commutation with \
             d/dt and with the Laplacian, symmetry of the stretched directional derivative, and the \
             componentwise advection identity.\n\
             Thresholds: product axioms exact on rational multivectors; all four identity residuals <= 1e-10 \
             on trigonometric-polynomial fields."
        }
        ExperimentKind::FpConsistency => {
            "Exercises the forward and backward Fokker-Planck equations and their complex combination: mass \
             conservation of the finite-volume stepper, the split into continuity and osmotic parts on an \
             analytic solution, and the complex Fokker-Planck residual on the analytic free packet.\n\
             Thresholds: |mass - 1| <= 1e-8 with rho >= 0; sum/difference residuals <= 1e-4 at sampling step \
             1e-3, shrinking at order >= 1.5 when the step halves; osmotic and split residuals <= 1e-8; complex \
             Fokker-Planck residual <= 1e-3."
        }
    };
    format!("{}: {}\n\n{}", kind.name(), synopsis(kind), body)
}

/// Runs a resolved configuration, writing `manifest.json`, the experiment's
/// CSV tables, `summary.json` and `timing.json` into `cfg.output_dir`.
pub fn run(cfg: &ExperimentConfig) -> Result<Summary> {
    let cfg = cfg.resolved()?;
    let dir = cfg.output_dir();
    fs::create_dir_all(&dir)?;
    let mut out = Output::new(&dir);
    out.json("manifest.json", &cfg)?;
    let outcome = match cfg.experiment {
        ExperimentKind::BornFree => born::free(&cfg, &mut out)?,
        ExperimentKind::BornHarmonic => born::harmonic(&cfg, &mut out)?,
        ExperimentKind::Colehopf1d => colehopf::one_dimensional(&cfg, &mut out)?,
        ExperimentKind::Colehopf3d => colehopf::three_dimensional(&cfg, &mut out)?,
        ExperimentKind::BurgersDirectVsCh => colehopf::direct_vs_colehopf(&cfg, &mut out)?,
        ExperimentKind::SdeEstimators => stochastic::estimators(&cfg, &mut out)?,
        ExperimentKind::ComplexIncrements => stochastic::increments(&cfg, &mut out)?,
        ExperimentKind::Variational => stochastic::variational(&cfg, &mut out)?,
        ExperimentKind::GaIdentities => ga::identities(&cfg, &mut out)?,
        ExperimentKind::FpConsistency => fp::consistency(&cfg, &mut out)?,
    };
    let timings: serde_json::Map<String, serde_json::Value> = outcome
        .timings
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::from(*v)))
        .collect();
    write_json(&dir.join("timing.json"), &timings)?;
    let mut outputs = out.into_files();
    outputs.push("summary.json".to_string());
    let summary = Summary {
        experiment: cfg.experiment,
        seed: cfg.seed(),
        passed: outcome.checks.iter().all(|c| c.pass),
        checks: outcome.checks,
        diagnostics: outcome.diagnostics,
        outputs,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}

pub(crate) fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
