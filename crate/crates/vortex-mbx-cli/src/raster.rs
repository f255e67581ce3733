//! Netpbm heatmaps of complex field maps. Binary PGM for single-channel
//! layers, binary PPM with a blue-white-red ramp for signed layers.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;

use vortex_mbx::FieldMap;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colormap {
    Grayscale,
    Diverging,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Linear,
    SymmetricAboutZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    Pgm,
    Ppm,
}

impl RasterFormat {
    pub fn extension(self) -> &'static str {
        match self {
            RasterFormat::Pgm => "pgm",
            RasterFormat::Ppm => "ppm",
        }
    }
}

/// Scalarization of the complex samples before color mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Intensity,
    Phase,
    Real,
    Imag,
}

impl Layer {
    pub fn label(self) -> &'static str {
        match self {
            Layer::Intensity => "intensity",
            Layer::Phase => "phase",
            Layer::Real => "re",
            Layer::Imag => "im",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeatmapStyle {
    pub colormap: Colormap,
    pub normalization: Normalization,
    pub format: RasterFormat,
    pub layer: Layer,
}

impl HeatmapStyle {
    pub fn intensity() -> Self {
        HeatmapStyle {
            colormap: Colormap::Grayscale,
            normalization: Normalization::Linear,
            format: RasterFormat::Pgm,
            layer: Layer::Intensity,
        }
    }

    pub fn phase() -> Self {
        HeatmapStyle {
            layer: Layer::Phase,
            ..Self::intensity()
        }
    }

    /// Signed Re/Im maps: zero renders as the white midpoint.
    pub fn signed(layer: Layer) -> Self {
        HeatmapStyle {
            colormap: Colormap::Diverging,
            normalization: Normalization::SymmetricAboutZero,
            format: RasterFormat::Ppm,
            layer,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.colormap == Colormap::Diverging {
            if self.normalization != Normalization::SymmetricAboutZero {
                return Err(CliError::Config(
                    "diverging colormap requires symmetric-about-zero normalization".into(),
                ));
            }
            if self.format != RasterFormat::Ppm {
                return Err(CliError::Config(
                    "diverging colormap requires the three-channel PPM format".into(),
                ));
            }
        }
        Ok(())
    }
}

/// atan2 hands back (-pi, pi]; fold the closed end so the scale is [-pi, pi)
/// and the two ends of the color wheel never collide.
fn wrap_phase(p: f64) -> f64 {
    if p >= PI {
        p - TAU
    } else {
        p
    }
}

fn byte(unit: f64) -> u8 {
    (unit.clamp(0.0, 1.0) * 255.0).round() as u8
}

fn diverging_rgb(unit: f64) -> [u8; 3] {
    let t = unit.clamp(0.0, 1.0);
    if t <= 0.5 {
        let u = byte(2.0 * t);
        [u, u, 255]
    } else {
        let u = byte(2.0 - 2.0 * t);
        [255, u, u]
    }
}

/// Maps the chosen layer onto [0, 1]: phase on the fixed cyclic scale,
/// intensity relative to the map maximum, signed layers per the style's
/// normalization. A zero-dynamic-range layer renders as uniform mid-gray
/// with a warning on the error stream.
pub fn render_heatmap(map: &FieldMap, style: &HeatmapStyle, path: &Path) -> Result<(), CliError> {
    style.validate()?;
    let g = &map.grid;
    assert!(!map.values.is_empty(), "field maps are never empty");

    let scalar: Vec<f64> = map
        .values
        .iter()
        .map(|v| match style.layer {
            Layer::Intensity => v.norm_sqr(),
            Layer::Phase => wrap_phase(v.arg()),
            Layer::Real => v.re,
            Layer::Imag => v.im,
        })
        .collect();
    let lo = scalar.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = scalar.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let constant = lo == hi;
    if constant {
        eprintln!(
            "warning: {}: {} layer has zero dynamic range; rendering uniform mid-gray",
            path.display(),
            style.layer.label()
        );
    }
    let unit = |s: f64| -> f64 {
        if constant {
            return 0.5;
        }
        match (style.layer, style.normalization) {
            (Layer::Phase, _) => (s + PI) / TAU,
            (Layer::Intensity, _) => s / hi,
            (_, Normalization::SymmetricAboutZero) => {
                let span = lo.abs().max(hi.abs());
                0.5 + s / (2.0 * span)
            }
            (_, Normalization::Linear) => (s - lo) / (hi - lo),
        }
    };

    let channels = match style.format {
        RasterFormat::Pgm => 1,
        RasterFormat::Ppm => 3,
    };
    let magic = match style.format {
        RasterFormat::Pgm => "P5",
        RasterFormat::Ppm => "P6",
    };
    let mut buf = Vec::with_capacity(32 + g.nx * g.ny * channels);
    buf.extend_from_slice(format!("{magic}\n{} {}\n255\n", g.nx, g.ny).as_bytes());
    // raster rows run top-down while the grid's y axis points up
    for k in 0..g.ny {
        let j = g.ny - 1 - k;
        for i in 0..g.nx {
            let u = unit(scalar[j * g.nx + i]);
            match style.format {
                RasterFormat::Pgm => buf.push(byte(u)),
                RasterFormat::Ppm => buf.extend_from_slice(&diverging_pixel(style.colormap, u)),
            }
        }
    }
    fs::write(path, buf).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn diverging_pixel(colormap: Colormap, unit: f64) -> [u8; 3] {
    match colormap {
        Colormap::Grayscale => {
            let b = byte(unit);
            [b, b, b]
        }
        Colormap::Diverging => diverging_rgb(unit),
    }
}
