//! Doping-level parameter sets and relaxation rates for the erbium-doped crystal.
//!
//! All rates and Rabi frequencies are dimensionless, in units of the |3>-|1>
//! coherence decay (gamma31 = 1). Dipole moments are relative units; the
//! mu21/mu31 pair only ever enters through its ratio.

use crate::error::{Error, Result};

/// Relaxation rates of the three-level ladder.
///
/// The coherence decays gamma21/gamma31/gamma32 drive the closed forms; the
/// microscopic rates additionally fix the population relaxation used by the
/// steady-state solver. The 3 -> 1 spontaneous channel is negligible for this
/// medium and fixed to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRates {
    /// |2>-|1> coherence decay.
    pub gamma21: f64,
    /// |3>-|1> coherence decay (the unit of every other rate).
    pub gamma31: f64,
    /// |3>-|2> coherence decay; only the steady-state solver uses it.
    pub gamma32: f64,
    /// Spontaneous decay 2 -> 1.
    pub spont21: f64,
    /// Spontaneous decay 3 -> 2.
    pub spont32: f64,
    /// Non-radiative relaxation 2 -> 1.
    pub nonrad2: f64,
    /// Non-radiative relaxation 3 -> 2.
    pub nonrad3: f64,
}

impl DecayRates {
    /// Builds the coherence decays from microscopic channels:
    /// gamma21 = (spont21 + nonrad2)/2, gamma31 = gamma32 = (spont32 + nonrad3)/2.
    pub fn from_microscopic(
        spont21: f64,
        nonrad2: f64,
        spont32: f64,
        nonrad3: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("spont21", spont21),
            ("nonrad2", nonrad2),
            ("spont32", spont32),
            ("nonrad3", nonrad3),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
            if value < 0.0 {
                return Err(Error::Negative { name, value });
            }
        }
        let rates = Self {
            gamma21: 0.5 * (spont21 + nonrad2),
            gamma31: 0.5 * (spont32 + nonrad3),
            gamma32: 0.5 * (spont32 + nonrad3),
            spont21,
            spont32,
            nonrad2,
            nonrad3,
        };
        rates.validate()?;
        Ok(rates)
    }

    /// Takes the coherence decays as given and back-fills a purely radiative
    /// microscopic split (spont21 = 2*gamma21, spont32 = 2*gamma32).
    pub fn from_effective(gamma21: f64, gamma31: f64, gamma32: f64) -> Result<Self> {
        let rates = Self {
            gamma21,
            gamma31,
            gamma32,
            spont21: 2.0 * gamma21,
            spont32: 2.0 * gamma32,
            nonrad2: 0.0,
            nonrad3: 0.0,
        };
        rates.validate()?;
        Ok(rates)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("gamma21", self.gamma21),
            ("gamma31", self.gamma31),
            ("gamma32", self.gamma32),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
            if value <= 0.0 {
                return Err(Error::NonPositive { name, value });
            }
        }
        Ok(())
    }

    /// Total population relaxation out of |2> (into |1>).
    pub fn r2(&self) -> f64 {
        self.spont21 + self.nonrad2
    }

    /// Total population relaxation out of |3> (into |2>).
    pub fn r3(&self) -> f64 {
        self.spont32 + self.nonrad3
    }
}

impl Default for DecayRates {
    /// gamma21 = 3, gamma31 = gamma32 = 1, the normalization every figure uses.
    fn default() -> Self {
        Self::from_microscopic(6.0, 0.0, 2.0, 0.0).expect("default rates are valid")
    }
}

/// The five doping levels with tabulated parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Concentration {
    C0_5,
    C3,
    C15,
    C33,
    C100,
}

impl Concentration {
    pub const ALL: [Concentration; 5] = [
        Concentration::C0_5,
        Concentration::C3,
        Concentration::C15,
        Concentration::C33,
        Concentration::C100,
    ];

    pub fn percent(self) -> f64 {
        match self {
            Concentration::C0_5 => 0.5,
            Concentration::C3 => 3.0,
            Concentration::C15 => 15.0,
            Concentration::C33 => 33.0,
            Concentration::C100 => 100.0,
        }
    }

    /// Accepts only the tabulated labels; anything else is a configuration error.
    pub fn from_percent(percent: f64) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.percent() == percent)
            .ok_or(Error::UnknownConcentration(percent))
    }

    pub fn label(self) -> &'static str {
        match self {
            Concentration::C0_5 => "0.5",
            Concentration::C3 => "3",
            Concentration::C15 => "15",
            Concentration::C33 => "33",
            Concentration::C100 => "100",
        }
    }
}

impl std::fmt::Display for Concentration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}%", self.label())
    }
}

/// One doping row: control-field strength, dipole moments, propagation
/// constants and relaxation rates.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumConfig {
    pub concentration: Concentration,
    /// Control Rabi frequency.
    pub omega_c: f64,
    /// Probe-transition dipole moment (relative units).
    pub mu21: f64,
    /// Signal-transition dipole moment (relative units).
    pub mu31: f64,
    /// |2>-|3> dipole moment from the doping table; informational only.
    pub mu23: f64,
    /// Probe propagation constant.
    pub beta21: f64,
    /// Signal propagation constant.
    pub beta31: f64,
    /// Level lifetime of |2> in microseconds; informational only.
    pub tau2: f64,
    /// Level lifetime of |3> in microseconds; informational only.
    pub tau3: f64,
    pub decay: DecayRates,
    /// True when no measured mu21/mu31 pair exists for this doping level and
    /// the 33% ratio is substituted.
    pub mu_defaulted: bool,
}

/// (omega_c, mu21, mu31, mu23, tau2, tau3, mu_defaulted) per doping level.
const TABLE: [(Concentration, f64, f64, f64, f64, f64, f64, bool); 5] = [
    (Concentration::C0_5, 25.35, 3.25, 1.59, 1.69, 1.00, 2.15, false),
    (Concentration::C3, 27.60, 3.81, 1.72, 1.84, 1.38, 1.61, false),
    (Concentration::C15, 20.40, 2.82, 1.27, 1.36, 1.38, 0.15, false),
    (Concentration::C33, 17.85, 2.47, 1.11, 1.19, 0.31, 0.08, false),
    (Concentration::C100, 17.10, 2.47, 1.11, 1.14, 0.04, 0.01, true),
];

impl MediumConfig {
    /// The tabulated parameter set for one doping level, with beta21 = 8,
    /// beta31 = 8/3 and the default decay rates.
    pub fn for_concentration(concentration: Concentration) -> Self {
        let row = TABLE
            .iter()
            .find(|row| row.0 == concentration)
            .expect("every concentration is tabulated");
        MediumConfig {
            concentration,
            omega_c: row.1,
            mu21: row.2,
            mu31: row.3,
            mu23: row.4,
            beta21: 8.0,
            beta31: 8.0 / 3.0,
            tau2: row.5,
            tau3: row.6,
            decay: DecayRates::default(),
            mu_defaulted: row.7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("omega_c", self.omega_c),
            ("mu21", self.mu21),
            ("mu31", self.mu31),
            ("mu23", self.mu23),
            ("beta21", self.beta21),
            ("beta31", self.beta31),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
            if value <= 0.0 {
                return Err(Error::NonPositive { name, value });
            }
        }
        self.decay.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_rates_match_figure_normalization() {
        let d = DecayRates::default();
        assert_eq!(d.gamma21, 3.0);
        assert_eq!(d.gamma31, 1.0);
        assert_eq!(d.gamma32, 1.0);
        assert_eq!(d.r2(), 6.0);
        assert_eq!(d.r3(), 2.0);
    }

    #[test]
    fn microscopic_construction_halves_channel_sums() {
        let d = DecayRates::from_microscopic(5.0, 1.0, 3.0, 0.5).unwrap();
        assert_eq!(d.gamma21, 3.0);
        assert_eq!(d.gamma31, 1.75);
        assert_eq!(d.gamma32, 1.75);
    }

    #[test]
    fn invalid_rates_are_rejected_by_name() {
        let err = DecayRates::from_microscopic(-1.0, 0.0, 2.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("spont21"));
        let err = DecayRates::from_effective(0.0, 1.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("gamma21"));
    }

    #[test]
    fn table_rows_match_reference_data() {
        let rows: Vec<_> = Concentration::ALL
            .iter()
            .map(|&c| MediumConfig::for_concentration(c))
            .collect();
        assert_eq!(rows[0].omega_c, 25.35);
        assert_eq!(rows[1].omega_c, 27.60);
        assert_eq!(rows[2].omega_c, 20.40);
        assert_eq!(rows[3].omega_c, 17.85);
        assert_eq!(rows[4].omega_c, 17.10);
        assert_eq!((rows[1].mu21, rows[1].mu31), (3.81, 1.72));
        assert_eq!((rows[2].mu23, rows[2].tau2, rows[2].tau3), (1.36, 1.38, 0.15));
        assert_eq!(rows[0].beta21, 8.0);
        assert_eq!(rows[0].beta31, 8.0 / 3.0);
    }

    #[test]
    fn only_the_full_doping_level_defaults_its_dipole_pair() {
        for &c in &Concentration::ALL {
            let m = MediumConfig::for_concentration(c);
            assert_eq!(m.mu_defaulted, c == Concentration::C100);
        }
        let full = MediumConfig::for_concentration(Concentration::C100);
        let thirty_three = MediumConfig::for_concentration(Concentration::C33);
        assert_eq!(full.mu21, thirty_three.mu21);
        assert_eq!(full.mu31, thirty_three.mu31);
    }

    #[test]
    fn unknown_labels_are_rejected() {
        assert!(Concentration::from_percent(7.0).is_err());
        assert_eq!(
            Concentration::from_percent(0.5).unwrap(),
            Concentration::C0_5
        );
    }
}
