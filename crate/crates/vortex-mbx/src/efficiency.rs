//! Conversion efficiency of the generated signal.

use num_complex::Complex64;

use crate::beam::ProbeSpec;
use crate::error::{Error, Result};
use crate::medium::MediumConfig;
use crate::propagation::PropagationKernel;

/// eta = |mu21 * Ws(Z) / (mu31 * Wp(0))|^2, evaluated from the closed-form
/// fields.
///
/// Scale-invariant in the input amplitude and independent of the topological
/// charge; exactly zero at Z = 0.
pub fn conversion_efficiency(medium: &MediumConfig, probe: &ProbeSpec, z_eff: f64) -> Result<f64> {
    if probe.e_p == 0.0 {
        return Err(Error::ZeroProbeInput);
    }
    let kernel = PropagationKernel::for_medium(medium, probe.delta_p);
    let input = Complex64::new(probe.e_p, 0.0);
    let f = kernel.propagate(input, z_eff)?;
    let ratio = medium.mu21 / medium.mu31;
    let amp = ratio * f.omega_s / input;
    Ok(amp.norm_sqr())
}

/// The two legacy closed-form variants of the efficiency.
///
/// Both circulate alongside this model but are mutually inconsistent with
/// [`conversion_efficiency`] (mismatched dipole powers and denominators that
/// go negative); they are retained verbatim for diagnostic comparison and are
/// never asserted against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrintedForm {
    /// Ratio of sinh^2 to a quadratic denominator, times the mean envelope.
    General,
    /// Line-center shortcut assuming gamma21/gamma31 = beta21/beta31 = 3.
    Resonant,
}

/// Literal evaluation of the printed variant at line center; complex
/// intermediates are collapsed to the real part.
pub fn efficiency_as_printed(medium: &MediumConfig, z_eff: f64, variant: PrintedForm) -> f64 {
    let mu = (medium.mu21 / medium.mu31).powi(2);
    let oc2 = medium.omega_c * medium.omega_c;
    let g21 = medium.decay.gamma21;
    let g31 = medium.decay.gamma31;
    match variant {
        PrintedForm::General => {
            let k = PropagationKernel::for_medium(medium, 0.0);
            let num = medium.beta31.powi(2) * oc2 * mu * mu * (k.a * z_eff / 2.0).sinh().powi(2);
            let den = 4.0
                * Complex64::from(medium.beta21 * g31 + medium.beta31 * g21).powi(2)
                - 12.0 * medium.beta31.powi(2) * oc2;
            let s = k.a1 + k.b2;
            let envelope = (s * z_eff + s.conj() * z_eff).exp();
            (num / den * envelope).re
        }
        PrintedForm::Resonant => {
            let arg = Complex64::new(0.0, medium.beta21 * medium.omega_c * z_eff)
                / (8.0 * g21 * g21 + 6.0 * oc2);
            let decay = (-2.0 * medium.beta21 * g21 * z_eff / 3.0).exp();
            (3.0 * mu * mu * arg.sinh().powi(2) * decay).re
        }
    }
}
