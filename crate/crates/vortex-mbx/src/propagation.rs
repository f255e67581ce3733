//! Closed-form propagation of the probe/signal pair along the crystal.
//!
//! Both envelopes obey a constant-coefficient linear system in the effective
//! distance Z:
//!
//! ```text
//! dWp/dZ = a1*Wp + b1*Ws        a1 = i*beta21*A1coef   b1 = i*beta21*B1coef
//! dWs/dZ = a2*Wp + b2*Ws        a2 = i*beta31*A2coef   b2 = i*beta31*B2coef
//! ```
//!
//! whose exponential is written out with `a = sqrt((a1-b2)^2 + 4*a2*b1)`:
//!
//! ```text
//! Wp(Z) = [cosh(aZ/2) + (a1-b2)/a * sinh(aZ/2)] * exp((a1+b2)Z/2) * Wp(0)
//! Ws(Z) = 2*a2/a * sinh(aZ/2) * exp((a1+b2)Z/2) * Wp(0)
//! ```
//!
//! The factor 2 in Ws is forced by the boundary slope dWs/dZ(0) = a2*Wp(0);
//! both expressions are even under a -> -a, so the square-root branch is
//! irrelevant (a property the test battery asserts rather than assumes).

use num_complex::Complex64;

use crate::coeffs::CoherenceCoefficients;
use crate::error::{Error, Result};
use crate::medium::MediumConfig;

/// Below this |a| the kernel is flagged degenerate and sinh(aZ/2)/a is
/// evaluated by series.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// sinh(x)/x switches to its Taylor series below this |x|; at the crossover
/// both evaluations agree to full precision.
const SINHC_SERIES_THRESHOLD: f64 = 1e-6;

/// Constant coefficients of the propagation system plus the split
/// `a = sqrt((a1-b2)^2 + 4*a2*b1)` on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationKernel {
    pub a1: Complex64,
    pub b1: Complex64,
    pub a2: Complex64,
    pub b2: Complex64,
    pub a: Complex64,
    /// Set when |a| < [`DEGENERACY_THRESHOLD`]; the series path then covers
    /// the 0/0 limit sinh(aZ/2)/a -> Z/2.
    pub degenerate: bool,
}

impl PropagationKernel {
    pub fn from_coefficients(coeffs: &CoherenceCoefficients, beta21: f64, beta31: f64) -> Self {
        let i = Complex64::i();
        let a1 = i * beta21 * coeffs.a1;
        let b1 = i * beta21 * coeffs.b1;
        let a2 = i * beta31 * coeffs.a2;
        let b2 = i * beta31 * coeffs.b2;
        let d = a1 - b2;
        let a = (d * d + 4.0 * a2 * b1).sqrt();
        PropagationKernel {
            a1,
            b1,
            a2,
            b2,
            a,
            degenerate: a.norm() < DEGENERACY_THRESHOLD,
        }
    }

    pub fn for_medium(medium: &MediumConfig, delta_p: f64) -> Self {
        let coeffs = CoherenceCoefficients::for_medium(medium, delta_p);
        Self::from_coefficients(&coeffs, medium.beta21, medium.beta31)
    }

    /// Evolves the boundary pair (Wp(0), Ws(0) = 0) to effective distance Z.
    ///
    /// Exact at Z = 0 and linear in the input amplitude, which may carry an
    /// arbitrary phase (vortex input).
    pub fn propagate(&self, omega_p0: Complex64, z_eff: f64) -> Result<FieldPair> {
        if !z_eff.is_finite() || z_eff < 0.0 {
            return Err(Error::BadDistance(z_eff));
        }
        let half_z = 0.5 * z_eff;
        if self.a2 == Complex64::ZERO && self.b1 == Complex64::ZERO {
            // decoupled limit: cosh + sinh cancels catastrophically under
            // deep attenuation, so evaluate the plain exponential it equals
            return Ok(FieldPair {
                omega_p: (self.a1 * z_eff).exp() * omega_p0,
                omega_s: Complex64::ZERO,
                z_eff,
            });
        }
        let x = self.a * half_z;
        let shc = sinhc(x); // sinh(aZ/2) / (aZ/2)
        let envelope = ((self.a1 + self.b2) * half_z).exp();
        let omega_p = (x.cosh() + (self.a1 - self.b2) * half_z * shc) * envelope * omega_p0;
        let omega_s = 2.0 * self.a2 * half_z * shc * envelope * omega_p0;
        Ok(FieldPair {
            omega_p,
            omega_s,
            z_eff,
        })
    }
}

/// Probe and signal amplitudes at one effective distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPair {
    pub omega_p: Complex64,
    pub omega_s: Complex64,
    pub z_eff: f64,
}

/// sinh(x)/x, with the removable singularity filled by series.
pub(crate) fn sinhc(x: Complex64) -> Complex64 {
    if x.norm() < SINHC_SERIES_THRESHOLD {
        sinhc_series(x)
    } else {
        sinhc_general(x)
    }
}

pub(crate) fn sinhc_series(x: Complex64) -> Complex64 {
    let x2 = x * x;
    1.0 + x2 / 6.0 + x2 * x2 / 120.0
}

pub(crate) fn sinhc_general(x: Complex64) -> Complex64 {
    x.sinh() / x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::coherence_coefficients;
    use crate::medium::{Concentration, DecayRates};
    use proptest::prelude::*;

    fn kernel_for(c: Concentration, delta_p: f64) -> PropagationKernel {
        PropagationKernel::for_medium(&MediumConfig::for_concentration(c), delta_p)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn split_satisfies_its_defining_identity() {
        for &c in &Concentration::ALL {
            for dp in [0.0, -1.0, 3.0] {
                let k = kernel_for(c, dp);
                let lhs = k.a * k.a;
                let rhs = (k.a1 - k.b2) * (k.a1 - k.b2) + 4.0 * k.a2 * k.b1;
                assert!(rel(lhs, rhs) < 1e-12, "{c} dp={dp}");
            }
        }
    }

    #[test]
    fn control_off_decouples_the_signal() {
        let rates = DecayRates::default();
        let coeffs = coherence_coefficients(1.3, &rates, 0.0);
        let k = PropagationKernel::from_coefficients(&coeffs, 8.0, 8.0 / 3.0);
        assert_eq!(k.b1, Complex64::new(0.0, 0.0));
        assert_eq!(k.a2, Complex64::new(0.0, 0.0));
        let d = k.a1 - k.b2;
        assert!(rel(k.a * k.a, d * d) < 1e-14);
    }

    #[test]
    fn detuned_kernel_reference_values() {
        let k = kernel_for(Concentration::C15, 3.0);
        let tol = 1e-14;
        assert!(rel(k.a1, Complex64::new(-0.054957841873939407, -0.11567223477675162)) < tol);
        assert!(rel(k.b1, Complex64::new(-0.050185316661967953, -0.41001403712827811)) < tol);
        assert!(rel(k.a2, Complex64::new(-0.016728438887322651, -0.13667134570942602)) < tol);
        assert!(rel(k.b2, Complex64::new(-0.045117583704926086, -0.035277325535912764)) < tol);
        assert!(rel(k.a, Complex64::new(0.058778556397001601, 0.48022080576350296)) < tol);
    }

    #[test]
    fn zero_distance_returns_the_boundary_pair_exactly() {
        let k = kernel_for(Concentration::C3, 0.7);
        let input = Complex64::new(5.0, -0.25);
        let f = k.propagate(input, 0.0).unwrap();
        assert_eq!(f.omega_p, input);
        assert_eq!(f.omega_s, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn control_off_is_pure_exponential_decay() {
        let rates = DecayRates::default();
        let coeffs = coherence_coefficients(0.4, &rates, 0.0);
        let k = PropagationKernel::from_coefficients(&coeffs, 8.0, 8.0 / 3.0);
        let f = k.propagate(Complex64::new(1.0, 0.0), 2.0).unwrap();
        assert_eq!(f.omega_s, Complex64::new(0.0, 0.0));
        assert!(rel(f.omega_p, (k.a1 * 2.0).exp()) < 1e-12);
    }

    #[test]
    fn resonant_reference_propagation() {
        let k = kernel_for(Concentration::C3, 0.0);
        let f = k.propagate(Complex64::new(5.0, 0.0), 8.5).unwrap();
        assert!(rel(f.omega_p, Complex64::new(0.71121512453257907, 0.0)) < 1e-14);
        assert!(rel(f.omega_s, Complex64::new(0.0, -2.3863806788624702)) < 1e-14);
        // at line center the probe stays real and the signal stays in quadrature
        assert_eq!(f.omega_p.im, 0.0);
        assert_eq!(f.omega_s.re, 0.0);
    }

    #[test]
    fn negative_or_non_finite_distance_is_rejected() {
        let k = kernel_for(Concentration::C3, 0.0);
        assert!(k.propagate(Complex64::new(1.0, 0.0), -0.5).is_err());
        assert!(k.propagate(Complex64::new(1.0, 0.0), f64::NAN).is_err());
    }

    #[test]
    fn series_and_general_sinhc_agree_at_the_crossover() {
        // |a| ten times the degeneracy threshold, longest supported path
        for phase in [0.0, 0.3, 1.2, 2.9] {
            let a = Complex64::from_polar(10.0 * DEGENERACY_THRESHOLD, phase);
            let x = a * 10.0; // Z/2 = 10
            let general = sinhc_general(x);
            let series = sinhc_series(x);
            assert!(rel(series, general) < 1e-8);
        }
    }

    #[test]
    fn degenerate_flag_tracks_the_threshold() {
        let mut k = kernel_for(Concentration::C3, 0.0);
        assert!(!k.degenerate);
        k.a = Complex64::from_polar(0.5 * DEGENERACY_THRESHOLD, 0.2);
        let rebuilt = PropagationKernel {
            degenerate: k.a.norm() < DEGENERACY_THRESHOLD,
            ..k
        };
        assert!(rebuilt.degenerate);
    }

    proptest! {
        #[test]
        fn branch_flip_is_unobservable(
            dp in -6.0f64..6.0,
            oc in 0.5f64..35.0,
            re in -4.0f64..4.0,
            im in -4.0f64..4.0,
            z in 0.0f64..20.0,
        ) {
            let coeffs = coherence_coefficients(dp, &DecayRates::default(), oc);
            let k = PropagationKernel::from_coefficients(&coeffs, 8.0, 8.0 / 3.0);
            let flipped = PropagationKernel { a: -k.a, ..k };
            let input = Complex64::new(re, im);
            let f = k.propagate(input, z).unwrap();
            let g = flipped.propagate(input, z).unwrap();
            let scale = f.omega_p.norm().max(f.omega_s.norm()).max(1e-300);
            prop_assert!((f.omega_p - g.omega_p).norm() / scale < 1e-12);
            prop_assert!((f.omega_s - g.omega_s).norm() / scale < 1e-12);
        }

        #[test]
        fn outputs_are_linear_in_the_input(
            dp in -6.0f64..6.0,
            cre in -3.0f64..3.0,
            cim in -3.0f64..3.0,
            z in 0.0f64..20.0,
        ) {
            let k = kernel_for(Concentration::C15, dp);
            let c = Complex64::new(cre, cim);
            let base = Complex64::new(1.25, -0.5);
            let f = k.propagate(base, z).unwrap();
            let g = k.propagate(c * base, z).unwrap();
            let scale = g.omega_p.norm().max(g.omega_s.norm()).max(1e-300);
            prop_assert!((c * f.omega_p - g.omega_p).norm() / scale.max(1e-12) < 1e-12);
            prop_assert!((c * f.omega_s - g.omega_s).norm() / scale.max(1e-12) < 1e-12);
        }
    }
}
