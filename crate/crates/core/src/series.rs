//! Time series of fields sampled at increasing times.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::MultivectorField;
use crate::numerics::{GridSpec, ScalarField};

/// Scalar fields on a common grid at strictly increasing times.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldSeries {
    times: Vec<f64>,
    fields: Vec<ScalarField>,
}

/// Vector/multivector fields on a common grid at strictly increasing times.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VectorSeries {
    times: Vec<f64>,
    fields: Vec<MultivectorField>,
}

macro_rules! impl_series {
    ($series:ident, $field:ty) => {
        impl $series {
            pub fn new() -> Self {
                Self::default()
            }

            pub fn push(&mut self, t: f64, field: $field) -> Result<()> {
                if let Some(first) = self.fields.first() {
                    first.grid().ensure_same_space(field.grid())?;
                }
                if let Some(&last) = self.times.last() {
                    if !(t > last) {
                        return Err(Error::InvalidParameter(format!(
                            "series times must increase: {t} after {last}"
                        )));
                    }
                }
                self.times.push(t);
                self.fields.push(field);
                Ok(())
            }

            pub fn from_parts(times: Vec<f64>, fields: Vec<$field>) -> Result<Self> {
                if times.len() != fields.len() {
                    return Err(Error::InvalidParameter(format!(
                        "{} times for {} fields",
                        times.len(),
                        fields.len()
                    )));
                }
                let mut s = Self::new();
                for (t, f) in times.into_iter().zip(fields) {
                    s.push(t, f)?;
                }
                Ok(s)
            }

            pub fn times(&self) -> &[f64] {
                &self.times
            }

            pub fn fields(&self) -> &[$field] {
                &self.fields
            }

            pub fn len(&self) -> usize {
                self.times.len()
            }

            pub fn is_empty(&self) -> bool {
                self.times.is_empty()
            }

            pub fn grid(&self) -> Option<&GridSpec> {
                self.fields.first().map(|f| f.grid())
            }

            pub fn last(&self) -> Option<(f64, &$field)> {
                self.fields.last().map(|f| (*self.times.last().unwrap(), f))
            }

            pub fn iter(&self) -> impl Iterator<Item = (f64, &$field)> {
                self.times.iter().copied().zip(self.fields.iter())
            }

            /// Keeps samples with `t <= t_max`.
            pub fn truncate_after(&mut self, t_max: f64) {
                let keep = self.times.iter().take_while(|&&t| t <= t_max).count();
                self.times.truncate(keep);
                self.fields.truncate(keep);
            }

            pub fn map<E>(&self, mut f: E) -> Result<Self>
            where
                E: FnMut(f64, &$field) -> Result<$field>,
            {
                let mut out = Self::new();
                for (t, x) in self.iter() {
                    out.push(t, f(t, x)?)?;
                }
                Ok(out)
            }
        }
    };
}

impl_series!(FieldSeries, ScalarField);
impl_series!(VectorSeries, MultivectorField);

impl VectorSeries {
    /// The `e_{axis+1}` coefficient as a scalar series.
    pub fn component(&self, axis: usize) -> FieldSeries {
        FieldSeries {
            times: self.times.clone(),
            fields: self
                .fields
                .iter()
                .map(|f| f.vector_component(axis))
                .collect(),
        }
    }
}

impl FieldSeries {
    /// Centered time derivative at interior sample `k` (non-uniform spacing allowed).
    pub fn time_derivative(&self, k: usize) -> Result<ScalarField> {
        if k == 0 || k + 1 >= self.len() {
            return Err(Error::TooFewSamples {
                got: self.len(),
                required: 3,
            });
        }
        let (tm, t0, tp) = (self.times[k - 1], self.times[k], self.times[k + 1]);
        let (hm, hp) = (t0 - tm, tp - t0);
        // Second-order three-point formula on a non-uniform stencil.
        let cm = -hp / (hm * (hm + hp));
        let c0 = (hp - hm) / (hm * hp);
        let cp = hm / (hp * (hm + hp));
        let (fm, f0, fp) = (&self.fields[k - 1], &self.fields[k], &self.fields[k + 1]);
        let values = fm
            .values()
            .iter()
            .zip(f0.values())
            .zip(fp.values())
            .map(|((a, b), c)| a * cm + b * c0 + c * cp)
            .collect();
        ScalarField::new(f0.grid().clone(), values)
    }
}
