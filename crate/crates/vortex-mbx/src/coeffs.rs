//! First-order coherence coefficients of the driven ladder system.
//!
//! In the weak-probe regime the off-diagonal elements are linear in the two
//! weak fields: rho21 = a1*Wp + b1*Ws and rho31 = a2*Wp + b2*Ws, with
//! coefficients set by the detuning, the coherence decays and the control
//! field. Everything downstream (propagation, spectra, maps) is built from
//! these four numbers.

use num_complex::Complex64;

use crate::medium::{DecayRates, MediumConfig};

/// Common denominator xi = (i*dp + gamma21)(i*dp + gamma31) + |omega_c|^2/4.
///
/// Never vanishes for real detuning and strictly positive decays: its
/// imaginary part dp*(gamma21+gamma31) only vanishes at dp = 0, where the real
/// part is gamma21*gamma31 + |omega_c|^2/4 > 0.
pub fn xi(delta_p: f64, rates: &DecayRates, omega_c: f64) -> Complex64 {
    let i_dp = Complex64::new(0.0, delta_p);
    (i_dp + rates.gamma21) * (i_dp + rates.gamma31) + omega_c * omega_c / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceCoefficients {
    pub xi: Complex64,
    pub a1: Complex64,
    pub b1: Complex64,
    pub a2: Complex64,
    pub b2: Complex64,
}

/// Evaluates the four linear-response coefficients at one detuning.
///
/// The control field is real here, so b1 and a2 coincide.
pub fn coherence_coefficients(
    delta_p: f64,
    rates: &DecayRates,
    omega_c: f64,
) -> CoherenceCoefficients {
    let i = Complex64::i();
    let x = xi(delta_p, rates, omega_c);
    let i_dp = Complex64::new(0.0, delta_p);
    CoherenceCoefficients {
        xi: x,
        a1: i * (rates.gamma31 + i_dp) / (2.0 * x),
        b1: -omega_c / (4.0 * x),
        a2: -omega_c / (4.0 * x),
        b2: i * (rates.gamma21 + i_dp) / (2.0 * x),
    }
}

impl CoherenceCoefficients {
    pub fn for_medium(medium: &MediumConfig, delta_p: f64) -> Self {
        coherence_coefficients(delta_p, &medium.decay, medium.omega_c)
    }
}
