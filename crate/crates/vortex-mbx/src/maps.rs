//! Transverse maps of the propagated fields and their coherences, plus
//! topological-charge extraction from the sampled phase.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::beam::ProbeSpec;
use crate::coeffs::coherence_coefficients;
use crate::coherence::coherences_along_z;
use crate::error::{Error, Result};
use crate::medium::MediumConfig;
use crate::propagation::PropagationKernel;

const CIRCLE_SAMPLES: usize = 256;
const MIN_CIRCLE_MODULUS: f64 = 1e-12;

/// Sampling lattice over the transverse plane, centered on the beam axis.
/// Coordinates are in waist units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    /// Largest |x| = |y| sampled.
    pub half_extent: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nx: 201,
            ny: 201,
            half_extent: 3.0,
        }
    }
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, half_extent: f64) -> Result<Self> {
        let g = GridSpec {
            nx,
            ny,
            half_extent,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 16 || self.ny < 16 {
            return Err(Error::GridTooCoarse {
                nx: self.nx,
                ny: self.ny,
            });
        }
        if !self.half_extent.is_finite() {
            return Err(Error::NonFinite {
                name: "half_extent",
                value: self.half_extent,
            });
        }
        if self.half_extent <= 0.0 {
            return Err(Error::NonPositive {
                name: "half_extent",
                value: self.half_extent,
            });
        }
        Ok(())
    }

    /// x coordinate of column i; runs -half_extent..=half_extent.
    pub fn x(&self, i: usize) -> f64 {
        -self.half_extent + 2.0 * self.half_extent * i as f64 / (self.nx - 1) as f64
    }

    /// y coordinate of row j.
    pub fn y(&self, j: usize) -> f64 {
        -self.half_extent + 2.0 * self.half_extent * j as f64 / (self.ny - 1) as f64
    }
}

/// Which complex field a map holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapObservable {
    SignalAmplitude,
    ProbeAmplitude,
    Rho21,
    Rho31,
}

impl MapObservable {
    pub fn is_coherence(self) -> bool {
        matches!(self, MapObservable::Rho21 | MapObservable::Rho31)
    }

    pub fn label(self) -> &'static str {
        match self {
            MapObservable::SignalAmplitude => "signal_amplitude",
            MapObservable::ProbeAmplitude => "probe_amplitude",
            MapObservable::Rho21 => "rho21",
            MapObservable::Rho31 => "rho31",
        }
    }
}

/// Complex samples over a [`GridSpec`], row-major with x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    pub grid: GridSpec,
    pub observable: MapObservable,
    pub values: Vec<Complex64>,
}

impl FieldMap {
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.grid.nx + i]
    }
}

/// Evaluates the chosen observable at every grid point: the entrance-face
/// profile propagates independently at each transverse position (no
/// diffraction coupling).
pub fn compute_field_map(
    medium: &MediumConfig,
    probe: &ProbeSpec,
    z_eff: f64,
    grid: &GridSpec,
    observable: MapObservable,
) -> Result<FieldMap> {
    medium.validate()?;
    probe.validate()?;
    grid.validate()?;
    let kernel = PropagationKernel::for_medium(medium, probe.delta_p);
    let coeffs = coherence_coefficients(probe.delta_p, &medium.decay, medium.omega_c);
    let rows: Result<Vec<Vec<Complex64>>> = (0..grid.ny)
        .into_par_iter()
        .map(|j| {
            let y = grid.y(j);
            (0..grid.nx)
                .map(|i| {
                    let input = probe.lg_profile(grid.x(i), y);
                    let v = match observable {
                        MapObservable::ProbeAmplitude => kernel.propagate(input, z_eff)?.omega_p,
                        MapObservable::SignalAmplitude => kernel.propagate(input, z_eff)?.omega_s,
                        MapObservable::Rho21 => {
                            coherences_along_z(&kernel, &coeffs, input, z_eff)?.rho21
                        }
                        MapObservable::Rho31 => {
                            coherences_along_z(&kernel, &coeffs, input, z_eff)?.rho31
                        }
                    };
                    if !v.re.is_finite() || !v.im.is_finite() {
                        return Err(Error::NonFiniteResult("field map sample"));
                    }
                    Ok(v)
                })
                .collect()
        })
        .collect();
    Ok(FieldMap {
        grid: *grid,
        observable,
        values: rows?.into_iter().flatten().collect(),
    })
}

fn bilinear(map: &FieldMap, x: f64, y: f64) -> Complex64 {
    let g = &map.grid;
    let fx = (x + g.half_extent) / (2.0 * g.half_extent) * (g.nx - 1) as f64;
    let fy = (y + g.half_extent) / (2.0 * g.half_extent) * (g.ny - 1) as f64;
    let i0 = (fx.floor() as usize).min(g.nx - 2);
    let j0 = (fy.floor() as usize).min(g.ny - 2);
    let tx = fx - i0 as f64;
    let ty = fy - j0 as f64;
    map.at(i0, j0) * ((1.0 - tx) * (1.0 - ty))
        + map.at(i0 + 1, j0) * (tx * (1.0 - ty))
        + map.at(i0, j0 + 1) * ((1.0 - tx) * ty)
        + map.at(i0 + 1, j0 + 1) * (tx * ty)
}

/// Sign changes around a closed (or open) sequence, ignoring exact zeros.
fn sign_flips(values: impl IntoIterator<Item = f64>, closed: bool) -> usize {
    let signs: Vec<i8> = values
        .into_iter()
        .filter_map(|v| {
            if v > 0.0 {
                Some(1)
            } else if v < 0.0 {
                Some(-1)
            } else {
                None
            }
        })
        .collect();
    if signs.is_empty() {
        return 0;
    }
    let mut flips = signs.windows(2).filter(|w| w[0] != w[1]).count();
    if closed && signs[signs.len() - 1] != signs[0] {
        flips += 1;
    }
    flips
}

/// Counts phase windings of the field on a circle of the given radius:
/// 256 bilinear samples, phase-difference unwrapping, total / 2 pi.
///
/// The radius must stay strictly inside the grid and the field must be
/// bounded away from zero on the whole circle.
pub fn winding_number(map: &FieldMap, radius_over_w: f64) -> Result<i32> {
    let he = map.grid.half_extent;
    if !(radius_over_w > 0.0 && radius_over_w < he) {
        return Err(Error::CircleOutsideGrid {
            radius: radius_over_w,
            half_extent: he,
        });
    }
    let samples: Vec<Complex64> = (0..CIRCLE_SAMPLES)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / CIRCLE_SAMPLES as f64;
            bilinear(map, radius_over_w * th.cos(), radius_over_w * th.sin())
        })
        .collect();
    let min_modulus = samples.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if min_modulus <= MIN_CIRCLE_MODULUS {
        return Err(Error::SingularCircle {
            radius: radius_over_w,
            min_modulus,
        });
    }
    let mut total = 0.0;
    for k in 0..CIRCLE_SAMPLES {
        let a = samples[k].arg();
        let b = samples[(k + 1) % CIRCLE_SAMPLES].arg();
        let mut d = b - a;
        // wrap into (-pi, pi]
        d -= std::f64::consts::TAU * (d / std::f64::consts::TAU).round();
        total += d;
    }
    Ok((total / std::f64::consts::TAU).round() as i32)
}

/// Structure summary of an absorption/gain map (the Im part of a coherence).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapStats {
    pub im_min: f64,
    pub im_max: f64,
    /// Sign changes of Im along the horizontal center cut.
    pub axis_sign_changes: usize,
    /// Sign changes of Im around the circle through the strongest response.
    /// Unlike the straight cut this grows with the vortex charge (2|l|).
    pub ring_sign_changes: usize,
    /// Radius of that circle (location of max |Im|).
    pub ring_radius: f64,
}

pub fn absorption_map_stats(map: &FieldMap) -> Result<MapStats> {
    if !map.observable.is_coherence() {
        return Err(Error::NotACoherenceMap(map.observable.label()));
    }
    let g = &map.grid;
    let mut im_min = f64::INFINITY;
    let mut im_max = f64::NEG_INFINITY;
    let mut peak = (0usize, 0usize, f64::NEG_INFINITY);
    for j in 0..g.ny {
        for i in 0..g.nx {
            let im = map.at(i, j).im;
            im_min = im_min.min(im);
            im_max = im_max.max(im);
            if im.abs() > peak.2 {
                peak = (i, j, im.abs());
            }
        }
    }
    let mid = (g.ny - 1) / 2;
    let axis_sign_changes = sign_flips((0..g.nx).map(|i| map.at(i, mid).im), false);
    let ring_radius = g.x(peak.0).hypot(g.y(peak.1));
    let ring_sign_changes = if ring_radius == 0.0 {
        0
    } else {
        sign_flips(
            (0..CIRCLE_SAMPLES).map(|k| {
                let th = std::f64::consts::TAU * k as f64 / CIRCLE_SAMPLES as f64;
                bilinear(map, ring_radius * th.cos(), ring_radius * th.sin()).im
            }),
            true,
        )
    };
    Ok(MapStats {
        im_min,
        im_max,
        axis_sign_changes,
        ring_sign_changes,
        ring_radius,
    })
}
