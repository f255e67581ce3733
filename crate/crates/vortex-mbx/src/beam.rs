//! Vortex probe input profile on the entrance face.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Probe beam entering the crystal: a Laguerre-Gaussian donut
/// `E_p (r/w)^|l| exp(-r^2/w^2) exp(i*l*phi)` carrying topological charge `ell`.
///
/// The profile is applied at the entrance face only; each transverse point
/// then propagates independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSpec {
    /// Peak strength E_p.
    pub e_p: f64,
    /// Beam waist w; the transverse grid is measured in units of it.
    pub waist: f64,
    /// Topological charge, any sign including 0.
    pub ell: i32,
    /// Probe detuning.
    pub delta_p: f64,
}

impl ProbeSpec {
    pub fn new(e_p: f64, waist: f64, ell: i32, delta_p: f64) -> Result<Self> {
        let spec = ProbeSpec {
            e_p,
            waist,
            ell,
            delta_p,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("e_p", self.e_p), ("delta_p", self.delta_p)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        if !self.waist.is_finite() {
            return Err(Error::NonFinite {
                name: "waist",
                value: self.waist,
            });
        }
        if self.waist <= 0.0 {
            return Err(Error::NonPositive {
                name: "waist",
                value: self.waist,
            });
        }
        Ok(())
    }

    /// Complex amplitude at normalized transverse position (x/w, y/w).
    ///
    /// Exactly zero on the axis for `ell != 0`: the dark core wins over the
    /// undefined azimuth.
    pub fn lg_profile(&self, x_over_w: f64, y_over_w: f64) -> Complex64 {
        let r = x_over_w.hypot(y_over_w);
        if self.ell != 0 && r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let phi = y_over_w.atan2(x_over_w);
        let radial = self.e_p * r.powi(self.ell.abs()) * (-r * r).exp();
        radial * Complex64::from_polar(1.0, self.ell as f64 * phi)
    }

    /// Radius of peak intensity in waist units: sqrt(|ell|/2).
    pub fn ring_radius(&self) -> f64 {
        (self.ell.abs() as f64 / 2.0).sqrt()
    }
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec {
            e_p: 5.0,
            waist: 1.0,
            ell: 1,
            delta_p: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_peak_sits_on_axis() {
        let p = ProbeSpec::new(5.0, 1.0, 0, 0.0).unwrap();
        assert_eq!(p.lg_profile(0.0, 0.0), Complex64::new(5.0, 0.0));
    }

    #[test]
    fn vortex_core_is_exactly_dark() {
        for ell in [-2, -1, 1, 2] {
            let p = ProbeSpec::new(5.0, 1.0, ell, 0.0).unwrap();
            assert_eq!(p.lg_profile(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn on_axis_reference_amplitude() {
        let p = ProbeSpec::new(1.0, 1.0, 2, 0.0).unwrap();
        let v = p.lg_profile(1.0, 0.0);
        assert!((v.re - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn phase_advances_ell_times_the_azimuth() {
        let p = ProbeSpec::new(2.0, 1.0, 2, 0.0).unwrap();
        let v = p.lg_profile(1.0, 1.0); // phi = pi/4, so arg = pi/2
        assert!((v.arg() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let n = ProbeSpec::new(2.0, 1.0, -2, 0.0).unwrap();
        let w = n.lg_profile(1.0, 1.0);
        assert!((w.arg() + std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((v.norm() - w.norm()).abs() < 1e-15);
    }

    #[test]
    fn ring_radius_grows_with_charge() {
        let radii: Vec<f64> = [0, 1, 2]
            .iter()
            .map(|&l| ProbeSpec::new(1.0, 1.0, l, 0.0).unwrap().ring_radius())
            .collect();
        assert_eq!(radii[0], 0.0);
        assert!((radii[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(radii[2], 1.0);
    }

    #[test]
    fn bad_waist_is_rejected_by_name() {
        let err = ProbeSpec::new(5.0, -1.0, 1, 0.0).unwrap_err();
        assert!(err.to_string().contains("waist"));
    }
}
