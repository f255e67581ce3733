//! Run configuration: a JSON file merged with dotted `--set` overrides, then
//! validated down to the library's domain types. Unknown keys are rejected so
//! typos in physics parameters cannot pass silently.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use vortex_mbx::{
    Concentration, DecayRates, GridSpec, HeldConstant, MediumConfig, ProbeSpec, SweepAxis,
    SweepSpec,
};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub medium: MediumBlock,
    pub probe: ProbeBlock,
    pub grid: GridBlock,
    pub sweep: SweepBlock,
    pub output: OutputBlock,
}

/// Concentration row selection plus optional per-field overrides. Unset
/// fields fall back to the built-in row for that doping level.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct MediumBlock {
    pub concentration: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu21: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu31: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu23: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta21: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta31: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma21: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma31: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma32: Option<f64>,
}

impl Default for MediumBlock {
    fn default() -> Self {
        MediumBlock {
            concentration: 3.0,
            omega_c: None,
            mu21: None,
            mu31: None,
            mu23: None,
            beta21: None,
            beta31: None,
            gamma21: None,
            gamma31: None,
            gamma32: None,
        }
    }
}

impl MediumBlock {
    pub fn resolve(&self) -> Result<MediumConfig, CliError> {
        let row = Concentration::from_percent(self.concentration)?;
        let mut m = MediumConfig::for_concentration(row);
        if let Some(v) = self.omega_c {
            m.omega_c = v;
        }
        if let Some(v) = self.mu21 {
            m.mu21 = v;
        }
        if let Some(v) = self.mu31 {
            m.mu31 = v;
        }
        if let Some(v) = self.mu23 {
            m.mu23 = v;
        }
        if let Some(v) = self.beta21 {
            m.beta21 = v;
        }
        if let Some(v) = self.beta31 {
            m.beta31 = v;
        }
        if self.gamma21.is_some() || self.gamma31.is_some() || self.gamma32.is_some() {
            m.decay = DecayRates::from_effective(
                self.gamma21.unwrap_or(m.decay.gamma21),
                self.gamma31.unwrap_or(m.decay.gamma31),
                self.gamma32.unwrap_or(m.decay.gamma32),
            )?;
        }
        m.validate()?;
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeBlock {
    pub e_p: f64,
    pub waist: f64,
    pub ell: i32,
    pub delta_p: f64,
}

impl Default for ProbeBlock {
    fn default() -> Self {
        ProbeBlock {
            e_p: 5.0,
            waist: 1.0,
            ell: 1,
            delta_p: 0.0,
        }
    }
}

impl ProbeBlock {
    pub fn resolve(&self) -> Result<ProbeSpec, CliError> {
        Ok(ProbeSpec::new(self.e_p, self.waist, self.ell, self.delta_p)?)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridBlock {
    pub nx: usize,
    pub ny: usize,
    pub half_extent: f64,
}

impl Default for GridBlock {
    fn default() -> Self {
        GridBlock {
            nx: 201,
            ny: 201,
            half_extent: 3.0,
        }
    }
}

impl GridBlock {
    pub fn resolve(&self) -> Result<GridSpec, CliError> {
        Ok(GridSpec::new(self.nx, self.ny, self.half_extent)?)
    }
}

/// Axis window for `spectra` plus the held-constant values shared by every
/// sweep-like command (`efficiency` and `fieldmap` read z_eff and the scalar
/// entrance amplitude from here).
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepBlock {
    pub axis: String,
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
    pub concentrations: Vec<f64>,
    pub z_eff: f64,
    pub delta_p: f64,
    pub omega_p0: f64,
    pub ell: i32,
}

impl Default for SweepBlock {
    fn default() -> Self {
        SweepBlock {
            axis: "delta_p".to_string(),
            start: -10.0,
            stop: 10.0,
            samples: 801,
            concentrations: vec![0.5, 3.0, 15.0, 33.0, 100.0],
            z_eff: 8.5,
            delta_p: 0.0,
            omega_p0: 0.1,
            ell: 1,
        }
    }
}

impl SweepBlock {
    pub fn resolve(&self) -> Result<SweepSpec, CliError> {
        let axis = SweepAxis::from_label(&self.axis).ok_or_else(|| {
            CliError::Config(format!(
                "sweep.axis must be \"z_eff\" or \"delta_p\", got {:?}",
                self.axis
            ))
        })?;
        let concentrations = self
            .concentrations
            .iter()
            .map(|&p| Ok(Concentration::from_percent(p)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        let spec = SweepSpec {
            axis,
            start: self.start,
            stop: self.stop,
            samples: self.samples,
            concentrations,
            fixed: HeldConstant {
                z_eff: self.z_eff,
                delta_p: self.delta_p,
                omega_p0: self.omega_p0,
                ell: self.ell,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Pgm,
    Both,
}

impl OutputFormat {
    pub fn wants_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn wants_rasters(self) -> bool {
        matches!(self, OutputFormat::Pgm | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock {
            dir: PathBuf::from("out"),
            format: OutputFormat::Both,
        }
    }
}

/// Everything a subcommand needs, fully validated.
#[derive(Debug)]
pub struct Resolved {
    pub medium: MediumConfig,
    pub probe: ProbeSpec,
    pub grid: GridSpec,
    pub sweep: SweepSpec,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        Ok(Resolved {
            medium: self.medium.resolve()?,
            probe: self.probe.resolve()?,
            grid: self.grid.resolve()?,
            sweep: self.sweep.resolve()?,
            out_dir: self.output.dir.clone(),
            format: self.output.format,
        })
    }
}

/// Reads the JSON file (or starts from `{}`), applies `--set` overrides in
/// order, then deserializes strictly.
pub fn load_config(path: Option<&Path>, sets: &[String]) -> Result<RunConfig, CliError> {
    let mut root: Value = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(Default::default()),
    };
    for spec in sets {
        apply_set(&mut root, spec)?;
    }
    serde_json::from_value(root).map_err(|e| CliError::Config(e.to_string()))
}

/// `key.path=value` with the value parsed as a JSON literal when possible and
/// kept as a bare string otherwise, so `--set sweep.axis=z_eff` works without
/// shell-hostile quoting.
fn apply_set(root: &mut Value, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {spec:?}")))?;
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(CliError::Config(format!("--set key {key:?} is malformed")));
    }
    let value: Value =
        serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let mut parts = key.split('.').peekable();
    while let Some(part) = parts.next() {
        let map = node.as_object_mut().ok_or_else(|| {
            CliError::Config(format!("--set {key}: {part:?} does not address an object"))
        })?;
        if parts.peek().is_none() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("split produces at least one part")
}
