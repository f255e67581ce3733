//! The five subcommands. Artifact-producing commands take a fully resolved
//! config and an already-created output directory.

use std::path::Path;

use vortex_mbx::{
    absorption_map_stats, classify_dispersion, compute_field_map, find_optimum, full_report,
    run_sweep, winding_number, Beam, Concentration, FieldMap, MapObservable, MediumConfig,
    SpectrumRow, SweepAxis, SweepSpec,
};

use crate::config::Resolved;
use crate::csvio::{fmt_float, write_csv};
use crate::error::CliError;
use crate::raster::{render_heatmap, HeatmapStyle, Layer};

/// Built-in per-concentration parameters, plus the relative dipole pair the
/// propagation model actually uses (the 100% row reuses the 33% pair, since
/// no measured value is tabulated for it).
pub fn print_table() {
    println!("conc%   mu23(1e-32 Cm)  tau2(us)  tau3(us)  omega_c   mu21   mu31");
    for &c in &Concentration::ALL {
        let m = MediumConfig::for_concentration(c);
        println!(
            "{:>5}   {:>14.2}  {:>8.2}  {:>8.2}  {:>7.2}  {:>5.2}  {:>5.2}{}",
            m.concentration.label(),
            m.mu23,
            m.tau2,
            m.tau3,
            m.omega_c,
            m.mu21,
            m.mu31,
            if m.mu_defaulted { "  (dipole pair reused from 33%)" } else { "" },
        );
    }
}

/// Runs the full oracle suite; a mismatch is exit code 3, not a panic.
pub fn validate() -> Result<(), CliError> {
    let report = full_report(1000, 42)?;
    for line in report.lines() {
        println!("{line}");
    }
    if report.passed() {
        println!("validation: all oracle checks passed");
        Ok(())
    } else {
        Err(CliError::OracleMismatch)
    }
}

fn medium_summary(r: &Resolved) -> String {
    format!(
        "medium {}%: omega_c {:.2}, gamma21 {}, gamma31 {}, Z {}, probe ell {}",
        r.medium.concentration.label(),
        r.medium.omega_c,
        r.medium.decay.gamma21,
        r.medium.decay.gamma31,
        r.sweep.fixed.z_eff,
        r.probe.ell,
    )
}

fn eta_header(axis: SweepAxis, concentrations: &[Concentration]) -> Vec<String> {
    let mut header = vec![axis.label().to_string()];
    header.extend(
        concentrations
            .iter()
            .map(|c| format!("eta_c{}", c.label())),
    );
    header
}

fn eta_rows(rows: &[SpectrumRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|row| {
            let mut out = vec![fmt_float(row.axis_value)];
            out.extend(row.cells.iter().map(|cell| fmt_float(cell.eta)));
            out
        })
        .collect()
}

/// Conversion-efficiency responses against distance and against detuning,
/// plus the per-medium distance optimum.
pub fn efficiency(r: &Resolved, out: &Path) -> Result<(), CliError> {
    println!("{}", medium_summary(r));
    let conc = r.sweep.concentrations.clone();

    let z_spec = SweepSpec {
        axis: SweepAxis::ZEff,
        start: 0.0,
        stop: 20.0,
        samples: 401,
        concentrations: conc.clone(),
        fixed: r.sweep.fixed,
    };
    let z_rows = run_sweep(&z_spec)?;
    write_csv(
        &out.join("efficiency_vs_z.csv"),
        &eta_header(SweepAxis::ZEff, &conc),
        &eta_rows(&z_rows),
    )?;

    let d_spec = SweepSpec {
        axis: SweepAxis::DeltaP,
        start: -10.0,
        stop: 10.0,
        samples: 401,
        concentrations: conc.clone(),
        fixed: r.sweep.fixed,
    };
    let d_rows = run_sweep(&d_spec)?;
    write_csv(
        &out.join("efficiency_vs_delta.csv"),
        &eta_header(SweepAxis::DeltaP, &conc),
        &eta_rows(&d_rows),
    )?;

    let mut rows = Vec::new();
    for &c in &conc {
        let opt = find_optimum(&z_spec, c)?;
        println!(
            "optimum for {}%: Z = {:.4}, eta = {:.6}{}",
            c.label(),
            opt.axis_value,
            opt.eta,
            if opt.on_boundary { " (window boundary)" } else { "" },
        );
        rows.push(vec![
            c.label().to_string(),
            fmt_float(opt.axis_value),
            fmt_float(opt.eta),
            opt.on_boundary.to_string(),
        ]);
    }
    write_csv(
        &out.join("optima.csv"),
        &["concentration", "z_star", "eta_star", "on_boundary"].map(String::from),
        &rows,
    )?;
    Ok(())
}

/// Detuning (or distance) spectra of the efficiency and both coherences, and
/// the dispersion-regime table at the held distance.
pub fn spectra(r: &Resolved, out: &Path) -> Result<(), CliError> {
    println!("{}", medium_summary(r));
    let rows = run_sweep(&r.sweep)?;

    let mut header = vec![r.sweep.axis.label().to_string()];
    for c in &r.sweep.concentrations {
        for prefix in ["eta", "im_rho21", "re_rho21", "im_rho31", "re_rho31"] {
            header.push(format!("{prefix}_c{}", c.label()));
        }
    }
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let mut out = vec![fmt_float(row.axis_value)];
            for cell in &row.cells {
                out.push(fmt_float(cell.eta));
                out.push(fmt_float(cell.im_rho21));
                out.push(fmt_float(cell.re_rho21));
                out.push(fmt_float(cell.im_rho31));
                out.push(fmt_float(cell.re_rho31));
            }
            out
        })
        .collect();
    write_csv(&out.join("spectra.csv"), &header, &csv_rows)?;

    let mut disp_rows = Vec::new();
    for &c in &r.sweep.concentrations {
        for beam in [Beam::Probe, Beam::Signal] {
            let regime = classify_dispersion(c, beam, r.sweep.fixed.z_eff)?;
            println!(
                "dispersion {}% {}: slope {:+.6e} -> {}",
                c.label(),
                beam.label(),
                regime.slope,
                regime.class.label(),
            );
            disp_rows.push(vec![
                c.label().to_string(),
                beam.label().to_string(),
                fmt_float(regime.slope),
                regime.class.label().to_string(),
                fmt_float(regime.threshold),
            ]);
        }
    }
    write_csv(
        &out.join("dispersion.csv"),
        &["concentration", "beam", "slope", "classification", "threshold"].map(String::from),
        &disp_rows,
    )?;
    Ok(())
}

fn write_map_csv(map: &FieldMap, path: &Path) -> Result<(), CliError> {
    let g = &map.grid;
    let mut rows = Vec::with_capacity(g.nx * g.ny);
    for j in 0..g.ny {
        for i in 0..g.nx {
            let v = map.at(i, j);
            rows.push(vec![
                fmt_float(g.x(i)),
                fmt_float(g.y(j)),
                fmt_float(v.re),
                fmt_float(v.im),
            ]);
        }
    }
    write_csv(
        path,
        &["x_over_w", "y_over_w", "re", "im"].map(String::from),
        &rows,
    )
}

/// Transverse maps of all four observables at the held distance: CSVs,
/// intensity/phase rasters for the field amplitudes, signed Re/Im rasters
/// for the coherences, plus the measured winding number of the signal.
pub fn fieldmap(r: &Resolved, out: &Path) -> Result<(), CliError> {
    println!("{}", medium_summary(r));
    let z = r.sweep.fixed.z_eff;
    for observable in [
        MapObservable::SignalAmplitude,
        MapObservable::ProbeAmplitude,
        MapObservable::Rho21,
        MapObservable::Rho31,
    ] {
        let map = compute_field_map(&r.medium, &r.probe, z, &r.grid, observable)?;
        let label = observable.label();
        if r.format.wants_csv() {
            write_map_csv(&map, &out.join(format!("fieldmap_{label}.csv")))?;
        }
        if r.format.wants_rasters() {
            if observable.is_coherence() {
                for layer in [Layer::Real, Layer::Imag] {
                    let style = HeatmapStyle::signed(layer);
                    let name = format!("{label}_{}.{}", layer.label(), style.format.extension());
                    render_heatmap(&map, &style, &out.join(name))?;
                }
            } else {
                for style in [HeatmapStyle::intensity(), HeatmapStyle::phase()] {
                    let name = format!(
                        "{label}_{}.{}",
                        style.layer.label(),
                        style.format.extension()
                    );
                    render_heatmap(&map, &style, &out.join(name))?;
                }
            }
        }
        if observable == MapObservable::SignalAmplitude {
            let radius = 0.5 * r.grid.half_extent;
            match winding_number(&map, radius) {
                Ok(w) => println!("signal winding number on r/w = {radius}: {w}"),
                Err(e) => println!("signal winding number unavailable: {e}"),
            }
        }
        if observable.is_coherence() {
            let stats = absorption_map_stats(&map)?;
            println!(
                "{label}: Im range [{:.6e}, {:.6e}], ring sign changes {}, ring radius {:.3}",
                stats.im_min, stats.im_max, stats.ring_sign_changes, stats.ring_radius,
            );
        }
    }
    Ok(())
}
