//! Sum-frequency conversion of a weak vortex probe in a control-driven
//! three-level ladder medium: closed-form field propagation, first-order
//! coherences, efficiency and dispersion sweeps, transverse field maps, and
//! the numerical oracles that certify every closed form.

pub mod beam;
pub mod coeffs;
pub mod coherence;
pub mod efficiency;
pub mod error;
pub mod maps;
pub mod medium;
pub mod oracle;
pub mod propagation;
pub mod sweeps;
pub mod validate;

pub use num_complex::Complex64;

pub use beam::ProbeSpec;
pub use coeffs::{coherence_coefficients, xi, CoherenceCoefficients};
pub use coherence::{coherences_along_z, CoherencePair};
pub use efficiency::{conversion_efficiency, efficiency_as_printed, PrintedForm};
pub use error::{Error, Result};
pub use maps::{
    absorption_map_stats, compute_field_map, winding_number, FieldMap, GridSpec, MapObservable,
    MapStats,
};
pub use medium::{Concentration, DecayRates, MediumConfig};
pub use oracle::{integrate_propagation, steady_state_rho, DensityMatrix, OdeTrajectory};
pub use propagation::{FieldPair, PropagationKernel};
pub use sweeps::{
    classify_dispersion, find_optimum, run_sweep, Beam, DispersionClass, DispersionRegime,
    HeldConstant, Optimum, SpectrumCell, SpectrumRow, SweepAxis, SweepSpec,
};
pub use validate::{
    closed_form_vs_ode, full_report, invariant_battery, perturbative_convergence,
    printed_form_audit, BatteryReport, FullReport, PrintedAudit,
};
