//! Runge-Kutta validator for the linear propagation pair.

use num_complex::Complex64;

use crate::coeffs::CoherenceCoefficients;
use crate::error::{Error, Result};
use crate::medium::MediumConfig;
use crate::propagation::FieldPair;

const BASE_STEPS: usize = 64;
const MAX_REFINEMENTS: u32 = 20;

/// Fields sampled on the 65-point base grid, however fine the accepted step.
#[derive(Debug, Clone)]
pub struct OdeTrajectory {
    pub samples: Vec<FieldPair>,
    /// Step size of the accepted refinement.
    pub step: f64,
    /// Number of halvings from the 64-step base grid.
    pub refinements: u32,
}

/// Integrates d(Wp, Ws)/dZ = M (Wp, Ws) with classic fixed-step RK4,
/// halving the step until two successive refinements agree to `tol` in
/// absolute max-norm on the base grid.
///
/// The system matrix is assembled here from the raw coefficients, not taken
/// from the closed-form kernel, so the two routes stay independent.
pub fn integrate_propagation(
    coeffs: &CoherenceCoefficients,
    medium: &MediumConfig,
    omega_p0: Complex64,
    z_max: f64,
    tol: f64,
) -> Result<OdeTrajectory> {
    if !(tol > 1e-14 && tol < 1e-4) {
        return Err(Error::BadTolerance(tol));
    }
    if !z_max.is_finite() || z_max < 0.0 {
        return Err(Error::BadDistance(z_max));
    }
    let start = (omega_p0, Complex64::new(0.0, 0.0));
    if z_max == 0.0 {
        return Ok(OdeTrajectory {
            samples: vec![FieldPair {
                omega_p: start.0,
                omega_s: start.1,
                z_eff: 0.0,
            }],
            step: 0.0,
            refinements: 0,
        });
    }

    let i = Complex64::i();
    let m11 = i * medium.beta21 * coeffs.a1;
    let m12 = i * medium.beta21 * coeffs.b1;
    let m21 = i * medium.beta31 * coeffs.a2;
    let m22 = i * medium.beta31 * coeffs.b2;
    let deriv = |(wp, ws): (Complex64, Complex64)| (m11 * wp + m12 * ws, m21 * wp + m22 * ws);

    let mut previous: Option<Vec<(Complex64, Complex64)>> = None;
    let mut residual = f64::INFINITY;
    for refinement in 0..=MAX_REFINEMENTS {
        let steps = BASE_STEPS << refinement;
        let stride = 1usize << refinement;
        let h = z_max / steps as f64;
        let mut state = start;
        let mut base = Vec::with_capacity(BASE_STEPS + 1);
        base.push(state);
        for k in 0..steps {
            let k1 = deriv(state);
            let k2 = deriv((state.0 + 0.5 * h * k1.0, state.1 + 0.5 * h * k1.1));
            let k3 = deriv((state.0 + 0.5 * h * k2.0, state.1 + 0.5 * h * k2.1));
            let k4 = deriv((state.0 + h * k3.0, state.1 + h * k3.1));
            state = (
                state.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                state.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            );
            if (k + 1) % stride == 0 {
                base.push(state);
            }
        }
        if let Some(coarse) = &previous {
            residual = coarse
                .iter()
                .zip(&base)
                .map(|(c, f)| (c.0 - f.0).norm().max((c.1 - f.1).norm()))
                .fold(0.0, f64::max);
            if residual < tol {
                let samples = base
                    .iter()
                    .enumerate()
                    .map(|(k, &(omega_p, omega_s))| FieldPair {
                        omega_p,
                        omega_s,
                        z_eff: z_max * k as f64 / BASE_STEPS as f64,
                    })
                    .collect();
                return Ok(OdeTrajectory {
                    samples,
                    step: h,
                    refinements: refinement,
                });
            }
        }
        previous = Some(base);
    }
    Err(Error::NoConvergence {
        tol,
        refinements: MAX_REFINEMENTS,
        residual,
    })
}
