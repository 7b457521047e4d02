//! One runner per subcommand. Each reads its task section, writes tables
//! through [`RunOutput`] and records summary values for the manifest.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use nhspec_core::continuum::ContinuumModel;
use nhspec_core::diagnostics::{center_of_mass, envelope_fit, ipr, pinning_position};
use nhspec_core::edge::{edge_state, SemiInfinite};
use nhspec_core::lattice::compare_spectra;
use nhspec_core::numeric::{eig_complex_dense_with, EigConfig, EigenDecomposition};
use nhspec_core::topology::{continuum_curve, lattice_curve, winding_number, SpectralCurve, DEFAULT_SAMPLES};
use nhspec_core::{
    Boundary, Complex64, Error as CoreError, LatticeModel, Provenance, Sampling, Spectrum, SpectrumEntry,
    WaveField,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Bc, Model, ModelSection, RunConfig, SweepTask};
use crate::error::{CliError, CliResult};
use crate::output::{num, Cell, RunOutput, Table};

pub const SPECTRUM_HEADER: &[&str] = &["index", "re_energy", "im_energy", "provenance"];
pub const STATE_HEADER: &[&str] = &["position", "re_psi", "im_psi", "abs_psi"];
pub const WINDING_HEADER: &[&str] = &["base_re", "base_im", "winding", "interior"];
pub const SWEEP_HEADER: &[&str] = &[
    "gamma",
    "center",
    "size",
    "max_mismatch",
    "max_abs_imag",
    "pinning_position",
    "envelope_rate_error",
    "winding",
];

/// Base energies closer than this to the curve are flagged in `winding.csv`.
pub const ON_CURVE_DISTANCE: f64 = 1e-6;

pub struct Run<'a> {
    pub config: &'a RunConfig,
    pub points: usize,
    pub seed: u64,
    pub max_n: usize,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn missing(task: &str) -> CliError {
    invalid(format!("config has no `{task}` section"))
}

impl Run<'_> {
    fn model(&self) -> CliResult<Model> {
        let model = self.config.model.build(self.config.bc)?;
        if let Model::Lattice(m) = &model {
            self.check_sites(m.sites)?;
        }
        Ok(model)
    }

    fn check_sites(&self, sites: usize) -> CliResult<()> {
        if sites > self.max_n {
            return Err(invalid(format!(
                "lattice of {sites} sites exceeds the matrix-size cap {} (set NHSPEC_MAX_N to raise it)",
                self.max_n
            )));
        }
        Ok(())
    }

    fn eig(&self, model: &LatticeModel, want_vectors: bool) -> CliResult<EigenDecomposition> {
        Ok(eig_complex_dense_with(
            &model.build_hamiltonian()?,
            &EigConfig {
                want_vectors,
                max_dim: self.max_n,
            },
        )?)
    }
}

fn spectrum_table(spectrum: &Spectrum) -> Table {
    let mut t = Table::new(SPECTRUM_HEADER);
    for e in &spectrum.entries {
        t.push(vec![
            Cell::Int(e.index),
            Cell::Float(e.energy.re),
            Cell::Float(e.energy.im),
            Cell::Text(e.provenance.as_str().into()),
        ]);
    }
    t
}

fn state_table(wf: &WaveField) -> Table {
    let mut t = Table::new(STATE_HEADER);
    for (x, a) in wf.positions.iter().zip(&wf.amplitudes) {
        t.push(vec![Cell::Float(*x), Cell::Float(a.re), Cell::Float(a.im), Cell::Float(a.norm())]);
    }
    t
}

pub fn run_spectrum(run: &Run, out: &mut RunOutput) -> CliResult<()> {
    let task = run.config.spectrum.clone().unwrap_or_default();
    match run.model()? {
        Model::Continuum(m) => {
            let (lo, hi) = match run.config.bc {
                Bc::Obc => (task.n_min.unwrap_or(1), task.n_max.unwrap_or(50)),
                Bc::Pbc => (task.n_min.unwrap_or(-25), task.n_max.unwrap_or(25)),
            };
            if lo > hi {
                return Err(invalid(format!("spectrum.n_min {lo} exceeds n_max {hi}")));
            }
            let entries = (lo..=hi)
                .map(|n| {
                    let energy = match run.config.bc {
                        Bc::Obc => Complex64::new(m.obc_energy(n)?, 0.0),
                        Bc::Pbc => m.pbc_energy(n)?,
                    };
                    Ok(SpectrumEntry {
                        index: n,
                        energy,
                        provenance: Provenance::Analytic,
                    })
                })
                .collect::<Result<Vec<_>, CoreError>>()?;
            let analytic = Spectrum::from_entries(entries);
            out.table("spectrum_analytic", &spectrum_table(&analytic))?;
            // The continuum model has no discretized numeric route.
            out.table("spectrum_numeric", &Table::new(SPECTRUM_HEADER))?;
            out.set("max_mismatch", Value::Null);
            out.set("max_abs_imag_analytic", num(analytic.max_abs_imag()));
        }
        Model::Lattice(m) => {
            if task.n_min.is_some() || task.n_max.is_some() {
                return Err(invalid("spectrum.n_min/n_max apply to continuum models only"));
            }
            let analytic = m.analytic_energies();
            let numeric = Spectrum::numeric(run.eig(&m, false)?.eigenvalues);
            out.table("spectrum_analytic", &spectrum_table(&analytic))?;
            out.table("spectrum_numeric", &spectrum_table(&numeric))?;
            out.set("max_mismatch", num(compare_spectra(&analytic, &numeric)?));
            out.set("max_abs_imag_numeric", num(numeric.max_abs_imag()));
            if m.boundary == Boundary::Open {
                let herm = m.hermitized_spectrum()?;
                out.set("hermitized_mismatch", num(compare_spectra(&analytic, &herm)?));
            }
        }
    }
    Ok(())
}

fn envelope_json(wf: &WaveField) -> Value {
    match envelope_fit(wf) {
        Ok(f) => json!({
            "center": num(f.center),
            "rate": num(f.rate),
            "rms_residual": num(f.rms_residual),
            "samples": f.samples,
            "anti_gaussian": f.anti_gaussian,
        }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn state_diagnostics(n: i64, wf: &WaveField, energy: Complex64, residual: f64) -> CliResult<Value> {
    Ok(json!({
        "index": n,
        "energy": [num(energy.re), num(energy.im)],
        "pinning_position": num(pinning_position(wf)),
        "center_of_mass": num(center_of_mass(wf)),
        "ipr": num(ipr(wf)?),
        "envelope": envelope_json(wf),
        "residual": num(residual),
    }))
}

/// Eigenvector whose eigenvalue is nearest `energy`, phase-aligned to
/// `reference` at its largest component.
fn numeric_overlay(eig: &EigenDecomposition, reference: &WaveField, energy: Complex64) -> CliResult<(WaveField, Complex64, f64)> {
    let vectors = eig.eigenvectors.as_ref().expect("vectors requested");
    let (i, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, l)| (i, (l - energy).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty spectrum");
    let moduli = reference.moduli();
    let p = (0..moduli.len()).fold(0, |best, j| if moduli[j] > moduli[best] { j } else { best });
    let v = &vectors[i];
    let phase = if v[p].norm() > 0.0 {
        let r = reference.amplitudes[p] / v[p];
        r / r.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let wf = WaveField::normalized(
        reference.positions.clone(),
        v.iter().map(|a| a * phase).collect(),
        Sampling::Sites,
        reference.norm_convention,
    )?;
    let distance = wf
        .amplitudes
        .iter()
        .zip(&reference.amplitudes)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((wf, eig.eigenvalues[i], distance))
}

pub fn run_states(run: &Run, out: &mut RunOutput) -> CliResult<()> {
    let task = run.config.states.as_ref().ok_or_else(|| missing("states"))?;
    let mut seen = BTreeSet::new();
    if let Some(d) = task.indices.iter().find(|n| !seen.insert(**n)) {
        return Err(invalid(format!("states.indices lists {d} twice")));
    }
    let model = run.model()?;
    let mut diagnostics = Vec::new();
    match model {
        Model::Continuum(m) => {
            for &n in &task.indices {
                let (wf, energy) = match run.config.bc {
                    Bc::Obc => (m.obc_state(n, run.points)?, Complex64::new(m.obc_energy(n)?, 0.0)),
                    Bc::Pbc => (m.pbc_state(n, run.points)?, m.pbc_energy(n)?),
                };
                let residual = m.residual_norm(&wf, energy)?;
                out.table(&format!("state_{n}"), &state_table(&wf))?;
                diagnostics.push(state_diagnostics(n, &wf, energy, residual)?);
            }
        }
        Model::Lattice(m) => {
            for &n in &task.indices {
                if n < 1 || n > m.sites as i64 {
                    return Err(invalid(format!("state index {n} outside 1..={}", m.sites)));
                }
            }
            let eig = if task.indices.is_empty() {
                None
            } else {
                Some(run.eig(&m, true)?)
            };
            for &n in &task.indices {
                let (wf, energy) = m.analytic_state(n)?;
                let residual = m.lattice_residual(&wf, energy)?;
                out.table(&format!("state_{n}"), &state_table(&wf))?;
                let mut d = state_diagnostics(n, &wf, energy, residual)?;
                let (numeric, lambda, distance) = numeric_overlay(eig.as_ref().expect("computed"), &wf, energy)?;
                out.table(&format!("state_{n}_numeric"), &state_table(&numeric))?;
                d["numeric_overlay"] = json!({
                    "energy": [num(lambda.re), num(lambda.im)],
                    "energy_distance": num((lambda - energy).norm()),
                    "state_distance": num(distance),
                });
                diagnostics.push(d);
            }
        }
    }
    out.set("diagnostics", Value::Array(diagnostics));
    Ok(())
}

fn pbc_curve(model: &Model) -> CliResult<SpectralCurve> {
    Ok(match model {
        Model::Continuum(m) => continuum_curve(m)?,
        Model::Lattice(m) => lattice_curve(&m.with_boundary(Boundary::Periodic))?,
    })
}

pub fn run_winding(run: &Run, out: &mut RunOutput) -> CliResult<()> {
    let task = run.config.winding.as_ref().ok_or_else(|| missing("winding"))?;
    let bases = match (&task.bases, &task.scan) {
        (Some(b), None) => b.clone(),
        (None, Some(s)) => s.bases(),
        _ => return Err(invalid("winding needs exactly one of `bases` or `scan`")),
    };
    let model = run.model()?;
    let mut curve = pbc_curve(&model)?;
    if let Some(c) = task.cutoff {
        if curve.closed {
            return Err(invalid("winding.cutoff applies to the open continuum curve only"));
        }
        if c <= 0.0 {
            return Err(invalid(format!("winding.cutoff must be positive, got {c}")));
        }
        curve = curve.with_cutoff(c);
    }

    let mut table = Table::new(WINDING_HEADER);
    let mut flagged = 0usize;
    for [re, im] in bases {
        let base = Complex64::new(re, im);
        let (winding, interior) = if curve.distance_to(base, task.samples) <= ON_CURVE_DISTANCE {
            flagged += 1;
            (f64::NAN, "on_curve")
        } else {
            let report = winding_number(&curve, base, task.samples)?;
            (report.winding, if report.interior { "true" } else { "false" })
        };
        table.push(vec![Cell::Float(re), Cell::Float(im), Cell::Float(winding), Cell::Text(interior.into())]);
    }
    out.table("winding", &table)?;
    out.set("samples", json!(task.samples));
    out.set("k_range", json!([curve.k_min, curve.k_max]));
    out.set("on_curve_rows", json!(flagged));
    Ok(())
}

pub fn run_edge(run: &Run, out: &mut RunOutput) -> CliResult<()> {
    let task = run.config.edge.as_ref().ok_or_else(|| missing("edge"))?;
    let (gamma, x0, length) = match run.config.model {
        ModelSection::Continuum {
            gamma,
            x0,
            length,
            order,
        } => {
            if order != 1 {
                return Err(CoreError::UnsupportedOrder(order).into());
            }
            (gamma, x0, length)
        }
        ModelSection::Lattice { .. } => return Err(invalid("edge modes need a continuum model")),
    };
    if x0 != 0.0 {
        return Err(invalid(format!("edge modes put the wall at x0 = 0, got x0 = {x0}")));
    }
    let geometry = SemiInfinite::with_x_max(
        task.gamma2.unwrap_or(gamma),
        length,
        task.x_max.unwrap_or(2.0 * length),
    )?;
    let base = Complex64::new(task.base[0], task.base[1]);
    let state = edge_state(base, &geometry, run.points)?;
    let wf = &state.wave;
    let residual = geometry.model().residual_norm(wf, base)?;
    out.table("edge_state", &state_table(wf))?;
    let max = wf.max_abs();
    let report = json!({
        "base": [num(base.re), num(base.im)],
        "gamma2": num(geometry.gamma),
        "length": num(geometry.length),
        "x_max": num(geometry.x_max),
        "k": num(state.decomposition.k),
        "gamma1": num(state.decomposition.gamma1),
        "boundary_value": num(wf.amplitudes[0].norm() / max),
        "tail_value": num(wf.amplitudes[wf.len() - 1].norm() / max),
        "decay_position": state.decay_position(1e-6).map_or(Value::Null, num),
        "residual_norm": num(residual),
        "pinning_position": num(pinning_position(wf)),
        "ipr": num(ipr(wf)?),
        "interior": true,
    });
    out.json_file("edge_report.json", &report)?;
    out.set("edge_report", report);
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct SweepPoint {
    gamma: f64,
    center: f64,
    size: f64,
}

impl SweepPoint {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.gamma
            .total_cmp(&other.gamma)
            .then(self.center.total_cmp(&other.center))
            .then(self.size.total_cmp(&other.size))
    }
}

/// Summary scalars of one sweep point; `NaN` where a quantity is undefined.
type SweepRow = [f64; 5];

fn sweep_points(run: &Run, task: &SweepTask) -> CliResult<Vec<SweepPoint>> {
    let (gamma, center, size) = match run.config.model {
        ModelSection::Continuum { gamma, x0, length, .. } => (gamma, x0, length),
        ModelSection::Lattice { gamma, j0, sites, .. } => (gamma, j0, sites as f64),
    };
    let gammas = task.gamma.clone().unwrap_or_else(|| vec![gamma]);
    let centers = task.center.clone().unwrap_or_else(|| vec![center]);
    let sizes = task.size.clone().unwrap_or_else(|| vec![size]);
    let total = gammas.len() * centers.len() * sizes.len();
    if total > task.cap {
        return Err(invalid(format!("sweep has {total} points, above the cap {}", task.cap)));
    }
    if let ModelSection::Lattice { .. } = run.config.model {
        for &s in &sizes {
            if s.fract() != 0.0 || s < 2.0 {
                return Err(invalid(format!("sweep size {s} is not a lattice size")));
            }
            run.check_sites(s as usize)?;
            if task.state < 1 || task.state > s as i64 {
                return Err(invalid(format!("sweep.state {} outside 1..={s}", task.state)));
            }
        }
    }
    let mut points = Vec::with_capacity(total);
    for &g in &gammas {
        for &c in &centers {
            for &s in &sizes {
                points.push(SweepPoint {
                    gamma: g,
                    center: c,
                    size: s,
                });
            }
        }
    }
    Ok(points)
}

fn rate_error(wf: &WaveField, gamma: f64) -> f64 {
    match envelope_fit(wf) {
        Ok(f) if gamma != 0.0 => ((f.rate - gamma) / gamma).abs(),
        Ok(f) => f.rate.abs(),
        Err(_) => f64::NAN,
    }
}

fn winding_or_nan(curve: CliResult<SpectralCurve>, base: Complex64) -> f64 {
    curve
        .ok()
        .and_then(|c| winding_number(&c, base, DEFAULT_SAMPLES).ok())
        .map_or(f64::NAN, |r| r.winding)
}

fn evaluate_point(run: &Run, task: &SweepTask, p: SweepPoint) -> CliResult<SweepRow> {
    let base = Complex64::new(task.reference_base[0], task.reference_base[1]);
    let bc = run.config.bc;
    match run.config.model {
        ModelSection::Continuum { order, .. } => {
            let m = ContinuumModel::with_order(p.gamma, p.center, p.size, order)?;
            let wf = match bc {
                Bc::Obc => m.obc_state(task.state, run.points)?,
                Bc::Pbc => m.pbc_state(task.state, run.points)?,
            };
            let winding = winding_or_nan(pbc_curve(&Model::Continuum(m)), base);
            Ok([f64::NAN, f64::NAN, pinning_position(&wf), rate_error(&wf, p.gamma), winding])
        }
        ModelSection::Lattice { t, .. } => {
            let m = LatticeModel::new(t, p.gamma, p.center, p.size as usize, bc.boundary())?;
            let numeric = Spectrum::numeric(run.eig(&m, false)?.eigenvalues);
            let mismatch = compare_spectra(&m.analytic_energies(), &numeric)?;
            let (wf, _) = m.analytic_state(task.state)?;
            let winding = winding_or_nan(pbc_curve(&Model::Lattice(m)), base);
            Ok([mismatch, numeric.max_abs_imag(), pinning_position(&wf), rate_error(&wf, p.gamma), winding])
        }
    }
}

pub fn run_sweep(run: &Run, out: &mut RunOutput) -> CliResult<()> {
    let task = run.config.sweep.as_ref().ok_or_else(|| missing("sweep"))?;
    let mut points = sweep_points(run, task)?;
    // Evaluation order is shuffled; output order is not.
    points.shuffle(&mut ChaCha8Rng::seed_from_u64(run.seed));
    let mut results: Vec<(SweepPoint, CliResult<SweepRow>)> = points
        .into_par_iter()
        .map(|p| (p, evaluate_point(run, task, p)))
        .collect();
    results.sort_by(|a, b| a.0.key_cmp(&b.0));

    let mut table = Table::new(SWEEP_HEADER);
    for (p, row) in results {
        let row = row?;
        let mut cells = vec![Cell::Float(p.gamma), Cell::Float(p.center), Cell::Float(p.size)];
        cells.extend(row.iter().map(|v| Cell::Float(*v)));
        table.push(cells);
    }
    out.set("sweep_points", json!(table.rows.len()));
    out.table("sweep", &table)?;
    Ok(())
}
