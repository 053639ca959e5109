//! Library side of the `diracosc` command: configuration, evaluation and
//! deterministic CSV/JSON rendering.

pub mod config;
pub mod error;
pub mod fig1;
pub mod table;

use std::fs;
use std::path::{Path, PathBuf};

use diracosc_core::oracle::compare_branch1;
use diracosc_core::spectrum::{build_spectrum, default_energy_cutoff, first_levels, Branch};
use diracosc_core::statmech::linspace;
use diracosc_core::wavefunction::{annihilation_residual, GroundState};
use diracosc_core::{OscillatorParams, WeightedGrid};
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{OutputFormat, RunConfig, Task};
pub use error::{CliError, CliResult, ErrorRecord};
pub use table::Table;

/// A note attached to a run that does not change its table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub kind: &'static str,
    pub message: String,
}

fn note(kind: &'static str, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        kind,
        message: message.into(),
    }
}

/// What a run computed, before rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub results: Value,
    pub diagnostics: Vec<Diagnostic>,
    /// Extra artifacts (name, contents) written next to the main output.
    pub files: Vec<(String, String)>,
}

/// The rendered main output plus the paths of any files written.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub primary: String,
    pub written: Vec<PathBuf>,
    pub diagnostics: Vec<Diagnostic>,
}

fn table_value(t: &Table) -> Value {
    serde_json::to_value(t).expect("tables serialize")
}

fn temperatures(grid: &config::TemperatureGrid) -> CliResult<Vec<f64>> {
    if !(grid.t_min > 0.0 && grid.t_max >= grid.t_min && grid.t_steps > 0) {
        return Err(CliError::Usage(format!(
            "need 0 < t_min <= t_max and t_steps > 0, got {} .. {} in {} steps",
            grid.t_min, grid.t_max, grid.t_steps
        )));
    }
    Ok(linspace(grid.t_min, grid.t_max, grid.t_steps))
}

fn spectrum(params: &OscillatorParams, branch: Branch, n_max: Option<usize>, e_cut: Option<f64>) -> CliResult<Report> {
    let s = match (n_max, e_cut) {
        (Some(n), _) => first_levels(branch, params, n)?,
        (None, Some(e)) => build_spectrum(branch, params, e)?,
        (None, None) => build_spectrum(branch, params, default_energy_cutoff(params)?)?,
    };
    let mut table = Table::new(["n", "E_n"]);
    for (n, e) in s.levels.iter().enumerate() {
        table.push_values(&[n as f64, *e]);
    }
    let diagnostics = vec![note(
        "spectrum",
        format!("{} levels, n_max = {}, e_cut = {}", s.len(), s.n_max, s.e_cut),
    )];
    Ok(Report {
        results: json!({ "n_max": s.n_max, "e_cut": s.e_cut, "table": table_value(&table) }),
        table,
        diagnostics,
        files: Vec::new(),
    })
}

fn partition(
    params: &OscillatorParams,
    options: &config::PartitionOptions,
    grid: &config::TemperatureGrid,
) -> CliResult<Report> {
    let temps = temperatures(grid)?;
    let e_cut = fig1::curve_cutoff(params, options)?;
    let source = fig1::partition_source(params, options, e_cut)?;
    let mut table = Table::new(["T", "beta", "Z", "ln_Z"]);
    for t in temps {
        let eval = source.evaluate(t)?;
        table.push(vec![
            Some(t),
            Some(params.m() / t),
            Some(eval.z),
            eval.ln_z.is_finite().then_some(eval.ln_z),
        ]);
    }
    let diagnostics = vec![note(
        "partition",
        format!("method {:?}, e_cut = {e_cut}", options.method),
    )];
    Ok(Report {
        results: json!({ "table": table_value(&table) }),
        table,
        diagnostics,
        files: Vec::new(),
    })
}

fn thermo(
    params: &OscillatorParams,
    options: &config::PartitionOptions,
    grid: &config::TemperatureGrid,
) -> CliResult<Report> {
    temperatures(grid)?;
    // the curve helper works in T/m
    let scaled = config::TemperatureGrid {
        t_min: grid.t_min / params.m(),
        t_max: grid.t_max / params.m(),
        t_steps: grid.t_steps,
    };
    let curve = fig1::curve(params, params.alpha(), options, &scaled)?;
    let mut table = Table::new(["T", "F", "U", "S", "C_V"]);
    for (x, point) in curve.t_over_m.iter().zip(&curve.points) {
        let t = x * params.m();
        table.push(match point {
            Some(p) => vec![Some(t), Some(p.f), Some(p.u), Some(p.s), Some(p.c_v)],
            None => vec![Some(t), None, None, None, None],
        });
    }
    let diagnostics = curve
        .failures
        .iter()
        .map(|(t, msg)| note("breakdown", format!("T = {t}: {msg}")))
        .collect();
    Ok(Report {
        results: json!({ "table": table_value(&table) }),
        table,
        diagnostics,
        files: Vec::new(),
    })
}

fn oracle(params: &OscillatorParams, grid_points: usize, levels: usize, p_cut: Option<f64>) -> CliResult<Report> {
    let p_cut = match p_cut {
        Some(p) => p,
        None if params.alpha() > 0.0 => params.p_bound()?.min(20.0),
        None => 20.0,
    };
    let report = compare_branch1(params, grid_points, p_cut, levels)?;
    let mut table = Table::new(["n", "analytic", "numeric", "rel_err"]);
    for n in 0..levels {
        table.push_values(&[n as f64, report.analytic[n], report.numeric[n], report.rel_err[n]]);
    }
    let mut diagnostics = vec![note("oracle", format!("max_rel_err = {}", report.max_rel_err))];
    if params.gamma() != 1.0 {
        diagnostics.push(note("oracle", "the discretized operator always uses gamma = 1"));
    }
    Ok(Report {
        results: serde_json::to_value(&report).expect("report serializes"),
        table,
        diagnostics,
        files: Vec::new(),
    })
}

fn wavefunction(params: &OscillatorParams, branch: Branch, grid_points: usize) -> CliResult<Report> {
    let grid = WeightedGrid::for_params(params, grid_points)?;
    let state = GroundState::normalized(branch, params, &grid)?;
    let psi = state.samples(grid.points())?;
    let residual = annihilation_residual(branch, params, &grid)?;
    let mut table = Table::new(["p", "psi"]);
    for (p, v) in grid.points().iter().zip(&psi) {
        table.push_values(&[*p, *v]);
    }
    let diagnostics = vec![note(
        "wavefunction",
        format!("ln C = {}, annihilation residual = {residual}", state.ln_normalization),
    )];
    Ok(Report {
        results: json!({
            "ln_normalization": state.ln_normalization,
            "annihilation_residual": residual,
            "table": table_value(&table),
        }),
        table,
        diagnostics,
        files: Vec::new(),
    })
}

fn fig1_bundle(
    params: &OscillatorParams,
    alphas: &[f64],
    options: &config::PartitionOptions,
    grid: &config::TemperatureGrid,
    reference: bool,
    svg: bool,
) -> CliResult<Report> {
    temperatures(grid)?;
    if alphas.is_empty() {
        return Err(CliError::Usage("fig1 needs at least one alpha".into()));
    }
    let mut all: Vec<f64> = Vec::new();
    if reference {
        all.push(0.0);
    }
    all.extend_from_slice(alphas);
    let curves = all
        .iter()
        .map(|&a| fig1::curve(params, a, options, grid))
        .collect::<CliResult<Vec<_>>>()?;

    let mut files = Vec::new();
    let mut index = Table::new(["alpha", "points", "gaps"]);
    let mut diagnostics = Vec::new();
    for c in &curves {
        for q in fig1::Quantity::ALL {
            files.push((format!("{}.csv", fig1::file_stem(q, c.alpha)), c.table(q).to_csv()));
        }
        index.push_values(&[c.alpha, c.points.len() as f64, c.gaps() as f64]);
        for (t, msg) in &c.failures {
            diagnostics.push(note("breakdown", format!("alpha = {}, T = {t}: {msg}", c.alpha)));
        }
    }
    if svg {
        for q in fig1::Quantity::ALL {
            files.push((format!("fig1_{}.svg", q.label()), fig1::svg(q, &curves)));
        }
    }
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    Ok(Report {
        results: json!({ "files": names, "table": table_value(&index) }),
        table: index,
        diagnostics,
        files,
    })
}

/// Computes a run without touching the filesystem.
pub fn execute(config: &RunConfig) -> CliResult<Report> {
    let p = &config.params;
    match &config.task {
        Task::Spectrum { branch, n_max, e_cut } => spectrum(p, (*branch).into(), *n_max, *e_cut),
        Task::Partition { options, temperatures } => partition(p, options, temperatures),
        Task::Thermo { options, temperatures } => thermo(p, options, temperatures),
        Task::Oracle {
            grid_points,
            levels,
            p_cut,
        } => oracle(p, *grid_points, *levels, *p_cut),
        Task::Wavefunction { branch, grid_points } => wavefunction(p, (*branch).into(), *grid_points),
        Task::Fig1 {
            alphas,
            options,
            temperatures,
            reference,
            svg,
        } => fig1_bundle(p, alphas, options, temperatures, *reference, *svg),
    }
}

/// The main output in the configured format.
pub fn render(config: &RunConfig, report: &Report) -> String {
    match config.output_format {
        OutputFormat::Csv => report.table.to_csv(),
        OutputFormat::Json => {
            let doc = json!({
                "config": config,
                "results": report.results,
                "diagnostics": report.diagnostics,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json document serializes");
            s.push('\n');
            s
        }
    }
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Executes, renders, and writes. For `fig1` the output path names a
/// directory that receives the per-curve files; otherwise it is the file the
/// main output goes to.
pub fn run(config: &RunConfig) -> CliResult<Artifact> {
    let report = execute(config)?;
    let primary = render(config, &report);
    let mut written = Vec::new();
    if let Task::Fig1 { .. } = config.task {
        let dir = config.output_path.clone().unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        for (name, contents) in &report.files {
            let path = dir.join(name);
            write(&path, contents)?;
            written.push(path);
        }
    } else if let Some(path) = &config.output_path {
        write(path, &primary)?;
        written.push(path.clone());
    }
    Ok(Artifact {
        primary,
        written,
        diagnostics: report.diagnostics,
    })
}

/// Reads a JSON run configuration.
pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}
