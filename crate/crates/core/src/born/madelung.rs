use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::burgers::EPS_FLOOR;
use crate::error::{Error, Result};
use crate::numerics::{integrate, ScalarField};

/// `psi = sqrt(rho) e^{-i S}` on a periodic line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Madelung {
    pub rho: ScalarField,
    /// Unwrapped phase function `S`, continuous along the grid from `S(x_0) = -arg psi(x_0)`.
    pub phase: ScalarField,
    /// Net number of `2 pi` turns of `arg psi` around the period.
    pub winding: i64,
}

fn wrap(d: f64) -> f64 {
    let mut d = d % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

/// Density and unwrapped phase of a nodeless 1-D wavefunction.
pub fn madelung_decompose(psi: &ScalarField) -> Result<Madelung> {
    let grid = psi.grid();
    if grid.dim() != 1 {
        return Err(Error::Unsupported("phase unwrapping is 1-D only".into()));
    }
    let floor = EPS_FLOOR * psi.max_abs();
    if let Some(node) = psi
        .values()
        .iter()
        .position(|v| !(v.norm() >= floor) || floor == 0.0)
    {
        return Err(Error::PhaseAmbiguous(node));
    }
    let args: Vec<f64> = psi.values().iter().map(|v| v.arg()).collect();
    let mut theta = Vec::with_capacity(args.len());
    theta.push(args[0]);
    for i in 1..args.len() {
        let prev = theta[i - 1];
        theta.push(prev + wrap(args[i] - args[i - 1]));
    }
    let closing = theta[args.len() - 1] + wrap(args[0] - args[args.len() - 1]);
    let winding = ((closing - theta[0]) / (2.0 * PI)).round() as i64;
    let phase =
        ScalarField::from_real(grid.clone(), &theta.iter().map(|t| -t).collect::<Vec<_>>())?;
    Ok(Madelung {
        rho: psi.abs_sq(),
        phase,
        winding,
    })
}

/// `sqrt(rho) e^{-i S}`.
pub fn madelung_reconstruct(m: &Madelung) -> Result<ScalarField> {
    m.rho.zip_with(&m.phase, |r, s| {
        Complex64::from_polar(r.re.max(0.0).sqrt(), -s.re)
    })
}

/// `q = |h|^2 ∫|F|^2` and the renormalized `F' = F h / sqrt(q)`.
pub fn normalization_branch_check(f: &ScalarField, h: Complex64) -> Result<(f64, ScalarField)> {
    let q = h.norm_sqr() * integrate(&f.abs_sq()).re;
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Degenerate(format!(
            "cannot normalize a field with q = {q}"
        )));
    }
    Ok((q, f.scale(h / q.sqrt())?))
}
