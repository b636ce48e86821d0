use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::multivector::{vector_slot, Multivector};
use crate::error::{Error, Result};
use crate::numerics::{GridSpec, Norms, ScalarField};

/// One multivector per grid node; typically a vector field `v_j e_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultivectorField {
    grid: GridSpec,
    values: Vec<Multivector>,
}

impl MultivectorField {
    pub fn new(grid: GridSpec, values: Vec<Multivector>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} multivectors for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(index) = values.iter().position(|m| !m.is_finite()) {
            return Err(Error::NonFinite {
                context: "multivector field".into(),
                index,
            });
        }
        Ok(Self { grid, values })
    }

    /// Vector field from one scalar component per axis (`components.len() == dim`).
    pub fn from_vector_components(components: &[ScalarField]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("no vector components".into()))?;
        let grid = first.grid().clone();
        if components.len() != grid.dim() {
            return Err(Error::InvalidParameter(format!(
                "{} components for a {}-D grid",
                components.len(),
                grid.dim()
            )));
        }
        for c in components {
            grid.ensure_same_space(c.grid())?;
        }
        let values = (0..grid.len())
            .map(|i| {
                let mut m = Multivector::zero();
                for (axis, comp) in components.iter().enumerate() {
                    m.c[vector_slot(axis)] = comp.values()[i];
                }
                m
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![Multivector::zero(); grid.len()],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Multivector] {
        &self.values
    }

    /// Coefficient of blade `slot` at every node.
    pub fn component(&self, slot: usize) -> ScalarField {
        let values: Vec<Complex64> = self.values.iter().map(|m| m.c[slot]).collect();
        ScalarField::new(self.grid.clone(), values).expect("finite by construction")
    }

    /// The `e_{axis+1}` coefficient.
    pub fn vector_component(&self, axis: usize) -> ScalarField {
        self.component(vector_slot(axis))
    }

    pub fn vector_components(&self) -> Vec<ScalarField> {
        (0..self.grid.dim())
            .map(|a| self.vector_component(a))
            .collect()
    }

    pub fn map(&self, f: impl Fn(&Multivector) -> Multivector) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(f).collect())
    }

    pub fn zip_with(
        &self,
        other: &MultivectorField,
        f: impl Fn(&Multivector, &Multivector) -> Multivector,
    ) -> Result<Self> {
        self.grid.ensure_same_space(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(a, b))
            .collect();
        Self::new(self.grid.clone(), values)
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|m| m.conj()).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|m| m.max_abs()).fold(0.0, f64::max)
    }

    /// Norms of `self - other`, using the largest coefficient modulus per node.
    pub fn residual_norm(&self, other: &MultivectorField) -> Result<Norms> {
        let diff = self.zip_with(other, |a, b| *a - *b)?;
        Ok(diff.norms())
    }

    /// Norms using the largest coefficient modulus per node.
    pub fn norms(&self) -> Norms {
        let per_node: Vec<Complex64> = self
            .values
            .iter()
            .map(|m| Complex64::new(m.max_abs(), 0.0))
            .collect();
        Norms::of_values(&per_node, self.grid.cell_volume())
    }
}
