use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::MultivectorField;
use crate::numerics::{curl, GridSpec, ScalarField, Scheme};

/// Largest curl accepted for vector data.
pub const IRROTATIONAL_TOLERANCE: f64 = 1e-8;

/// Whether the data is prescribed at `t = 0` or at `t = T`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeDirection {
    #[default]
    InitialValue,
    FinalValue,
}

/// `a_t + (a·∇)a = nu ∇²a - ∇U` on a periodic grid.
///
/// Real `nu > 0` is the backward-drift equation, real `nu < 0` the
/// forward-drift one (posed at the final time), imaginary `nu` the complex
/// velocity equation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BurgersProblem {
    viscosity: Complex64,
    data: MultivectorField,
    direction: TimeDirection,
    potential: Option<ScalarField>,
    t_final: f64,
}

impl BurgersProblem {
    pub fn new(
        viscosity: Complex64,
        data: MultivectorField,
        direction: TimeDirection,
        potential: Option<ScalarField>,
        t_final: f64,
    ) -> Result<Self> {
        if !(viscosity.re.is_finite() && viscosity.im.is_finite()) {
            return Err(Error::InvalidParameter("viscosity must be finite".into()));
        }
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "t_final must be positive, got {t_final}"
            )));
        }
        let grid = data.grid().clone();
        grid.ensure_periodic()?;
        match direction {
            TimeDirection::InitialValue if viscosity.re < 0.0 => {
                return Err(Error::IllPosedDirection(format!(
                    "negative viscosity {viscosity} needs final-value data"
                )))
            }
            TimeDirection::FinalValue if viscosity.re > 0.0 => {
                return Err(Error::IllPosedDirection(format!(
                    "positive viscosity {viscosity} needs initial-value data"
                )))
            }
            _ => {}
        }
        if let Some(u) = &potential {
            grid.ensure_same_space(u.grid())?;
            if !u.is_real() {
                return Err(Error::InvalidParameter(
                    "potential must be real-valued".into(),
                ));
            }
        }
        if grid.dim() == 3 {
            let c = curl(&data, Scheme::Spectral)?.max_abs();
            if c > IRROTATIONAL_TOLERANCE {
                return Err(Error::NotIrrotational(c));
            }
        }
        Ok(Self {
            viscosity,
            data,
            direction,
            potential,
            t_final,
        })
    }

    /// 1-D problem with scalar data.
    pub fn scalar(
        viscosity: Complex64,
        a: ScalarField,
        direction: TimeDirection,
        t_final: f64,
    ) -> Result<Self> {
        if a.grid().dim() != 1 {
            return Err(Error::InvalidParameter(
                "scalar Burgers data must be 1-D".into(),
            ));
        }
        let data = MultivectorField::from_vector_components(&[a])?;
        Self::new(viscosity, data, direction, None, t_final)
    }

    pub fn with_potential(self, potential: ScalarField) -> Result<Self> {
        Self::new(
            self.viscosity,
            self.data,
            self.direction,
            Some(potential),
            self.t_final,
        )
    }

    pub fn viscosity(&self) -> Complex64 {
        self.viscosity
    }

    pub fn data(&self) -> &MultivectorField {
        &self.data
    }

    pub fn direction(&self) -> TimeDirection {
        self.direction
    }

    pub fn potential(&self) -> Option<&ScalarField> {
        self.potential.as_ref()
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn grid(&self) -> &GridSpec {
        self.data.grid()
    }

    /// The initial-value problem actually integrated.
    ///
    /// Final-value data is handled in reflected time: `w(tau) = -a(T - tau)`
    /// satisfies the same equation with `nu -> -nu` and unchanged forcing.
    pub(crate) fn integrable_form(&self) -> (Complex64, Vec<ScalarField>) {
        let comps = self.data.vector_components();
        match self.direction {
            TimeDirection::InitialValue => (self.viscosity, comps),
            TimeDirection::FinalValue => (
                -self.viscosity,
                comps
                    .iter()
                    .map(|c| c.map(|v| -v).expect("finite data"))
                    .collect(),
            ),
        }
    }
}

/// Solver output in physical-time order, plus node-truncation metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BurgersSolution {
    pub series: crate::series::VectorSeries,
    /// Time at which the linearizing field developed a near-zero node, if any;
    /// the series stops at the last sample before it.
    pub node_time: Option<f64>,
    pub node_indices: Vec<usize>,
}

impl BurgersSolution {
    /// Component `axis` as a scalar series.
    pub fn component(&self, axis: usize) -> crate::series::FieldSeries {
        self.series.component(axis)
    }
}

/// Reassembles integrated samples `(tau, w)` into physical-time order.
pub(crate) fn to_physical(
    direction: TimeDirection,
    t_final: f64,
    samples: Vec<(f64, Vec<ScalarField>)>,
) -> Result<crate::series::VectorSeries> {
    let mut out = crate::series::VectorSeries::new();
    match direction {
        TimeDirection::InitialValue => {
            for (t, comps) in samples {
                out.push(t, MultivectorField::from_vector_components(&comps)?)?;
            }
        }
        TimeDirection::FinalValue => {
            for (tau, comps) in samples.into_iter().rev() {
                let neg: Vec<ScalarField> =
                    comps.iter().map(|c| c.map(|v| -v)).collect::<Result<_>>()?;
                out.push(
                    t_final - tau,
                    MultivectorField::from_vector_components(&neg)?,
                )?;
            }
        }
    }
    Ok(out)
}
