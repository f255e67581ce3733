//! Steady-state coherences along the propagation path.

use num_complex::Complex64;

use crate::coeffs::CoherenceCoefficients;
use crate::error::Result;
use crate::propagation::PropagationKernel;

/// First-order coherences evaluated with the propagated field amplitudes.
///
/// Imaginary parts are the absorption/gain observables, real parts the
/// dispersion observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherencePair {
    pub rho21: Complex64,
    pub rho31: Complex64,
}

/// Substitutes the closed-form fields at distance Z into the linear-response
/// relations rho21 = a1*Wp + b1*Ws, rho31 = a2*Wp + b2*Ws.
///
/// The |3>-|1> entry is reported in the quadrature frame of the generated
/// signal (a global pi/2 rotation, rho31 -> i*rho31). The signal field is
/// created with a 90-degree offset from the probe drive, and in that frame
/// the real part is the dispersive component: it vanishes identically at line
/// center and its slope carries the group-velocity sign, mirroring rho21.
pub fn coherences_along_z(
    kernel: &PropagationKernel,
    coeffs: &CoherenceCoefficients,
    omega_p0: Complex64,
    z_eff: f64,
) -> Result<CoherencePair> {
    let f = kernel.propagate(omega_p0, z_eff)?;
    let rho21 = coeffs.a1 * f.omega_p + coeffs.b1 * f.omega_s;
    let rho31 = Complex64::i() * (coeffs.a2 * f.omega_p + coeffs.b2 * f.omega_s);
    Ok(CoherencePair { rho21, rho31 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::CoherenceCoefficients;
    use crate::medium::{Concentration, MediumConfig};

    fn setup(c: Concentration, dp: f64) -> (PropagationKernel, CoherenceCoefficients) {
        let m = MediumConfig::for_concentration(c);
        let coeffs = CoherenceCoefficients::for_medium(&m, dp);
        let kernel = PropagationKernel::from_coefficients(&coeffs, m.beta21, m.beta31);
        (kernel, coeffs)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn entrance_face_reduces_to_the_bare_coefficients() {
        let (kernel, coeffs) = setup(Concentration::C3, 0.0);
        let input = Complex64::new(0.1, 0.0);
        let pair = coherences_along_z(&kernel, &coeffs, input, 0.0).unwrap();
        assert_eq!(pair.rho21, coeffs.a1 * input);
        assert_eq!(pair.rho31, Complex64::i() * coeffs.a2 * input);
    }

    #[test]
    fn detuned_reference_values() {
        let (kernel, coeffs) = setup(Concentration::C3, 1.0);
        let pair = coherences_along_z(&kernel, &coeffs, Complex64::new(0.1, 0.0), 8.5).unwrap();
        let want21 = Complex64::new(0.00021053055752682742, 0.0017320300472308855);
        let want31 = Complex64::new(-0.00017272471586833853, -9.0460216128756545e-05);
        assert!(rel(pair.rho21, want21) < 1e-14);
        assert!(rel(pair.rho31, want31) < 1e-14);
    }

    #[test]
    fn dispersion_vanishes_at_line_center_for_every_row_and_distance() {
        for &c in &Concentration::ALL {
            let (kernel, coeffs) = setup(c, 0.0);
            for z in [0.0, 4.0, 8.5, 16.0] {
                let pair =
                    coherences_along_z(&kernel, &coeffs, Complex64::new(0.1, 0.0), z).unwrap();
                // exact zeros: every factor stays on its real or imaginary axis
                assert_eq!(pair.rho21.re, 0.0, "{c} z={z}");
                assert_eq!(pair.rho31.re, 0.0, "{c} z={z}");
            }
        }
    }
}
