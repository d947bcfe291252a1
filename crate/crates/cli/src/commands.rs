//! Subcommand bodies. Each returns the echo of its resolved parameters and
//! input files, the module output, diagnostics, and an optional CSV table.

use std::f64::consts::TAU;
use std::path::Path;

use opa_core::opa::{opa_solve_with, profile_csv};
use opa_core::rudin::hardy_rudin_with;
use opa_core::zerofree::TraceEntry;
use opa_core::{
    convergence_profile, dirichlet_rudin, equilibrium_measure, neighborhood, rudin, steer, zerofree, AlphaWeight, BoundarySet, CoeffSeries,
    Complex64, Error, Profile, Solver, Space, Tolerances, ZeroFreeOptions,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::config::{self, Config};
use crate::error::CliError;
use crate::selftest;

/// Interior probe radii and angle count for `opa converge`.
const DISC_PROBE_RADII: [f64; 2] = [0.5, 0.9];
const DISC_PROBE_ANGLES: usize = 16;

#[derive(Debug, Default)]
pub struct Outcome {
    pub parameters: Value,
    pub files: Map<String, Value>,
    pub outputs: Value,
    pub diagnostics: Value,
    pub csv: Option<String>,
    /// Error to report after the artifact is written.
    pub failure: Option<CliError>,
}

pub fn value<T: Serialize + ?Sized>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

/// Reads a JSON input file, echoes it into `files` under `key`, and decodes it.
fn read_input<T: DeserializeOwned>(files: &mut Map<String, Value>, key: &str, path: &Path) -> Result<T, CliError> {
    let bad = |message: String| CliError::Input { path: path.to_path_buf(), message };
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let decoded = T::deserialize(&raw).map_err(|e| bad(e.to_string()))?;
    files.insert(key.to_string(), json!({ "path": path.display().to_string(), "content": raw }));
    Ok(decoded)
}

pub fn execute(command: &Command, cfg: &Config) -> Result<Outcome, CliError> {
    match command {
        Command::Opa(OpaCommand::Solve(a)) => opa_solve_cmd(a),
        Command::Opa(OpaCommand::Converge(a)) => opa_converge_cmd(a, cfg),
        Command::Rudin(RudinCommand::Build(a)) => rudin_build_cmd(a, cfg),
        Command::Rudin(RudinCommand::Capacity(a)) => rudin_capacity_cmd(a, cfg),
        Command::Zerofree(ZerofreeCommand::Approx(a)) => zerofree_cmd(a, cfg),
        Command::Steer(a) => steer_cmd(a),
        Command::Selftest => Ok(selftest::run()),
    }
}

fn opa_solve_cmd(a: &SolveArgs) -> Result<Outcome, CliError> {
    let mut files = Map::new();
    let f: CoeffSeries = read_input(&mut files, "f", &a.f)?;
    let w = AlphaWeight::new(a.alpha)?;
    let solver = Solver::from(a.solver);
    let r = opa_solve_with(&f, a.n, w, solver)?;
    Ok(Outcome {
        parameters: json!({ "n": a.n, "alpha": a.alpha, "solver": solver }),
        files,
        outputs: value(&r),
        diagnostics: json!({ "gram_size": a.n + 1, "condition_estimate": r.condition_estimate }),
        ..Outcome::default()
    })
}

fn disc_probes() -> Vec<Complex64> {
    DISC_PROBE_RADII
        .iter()
        .flat_map(|&r| (0..DISC_PROBE_ANGLES).map(move |j| Complex64::from_polar(r, TAU * j as f64 / DISC_PROBE_ANGLES as f64)))
        .collect()
}

fn opa_converge_cmd(a: &ConvergeArgs, cfg: &Config) -> Result<Outcome, CliError> {
    let mut files = Map::new();
    let f: CoeffSeries = read_input(&mut files, "f", &a.f)?;
    let w = AlphaWeight::new(a.alpha)?;
    let grid = a.grid.or(cfg.converge_grid).unwrap_or(config::CONVERGE_GRID);
    if grid < 8 {
        return Err(Error::InvalidParameter(format!("grid {grid} must be at least 8")).into());
    }
    // Density chosen so the full circle is sampled at exactly `grid` points.
    let probes = BoundarySet::full_circle((grid as f64 - 0.5) / TAU)?;
    let rows = convergence_profile(&f, a.n_max, w, &probes, &disc_probes())?;
    Ok(Outcome {
        parameters: json!({ "n_max": a.n_max, "alpha": a.alpha, "grid": grid, "disc_probe_radii": DISC_PROBE_RADII, "disc_probe_angles": DISC_PROBE_ANGLES }),
        files,
        outputs: json!({ "rows": value(&rows) }),
        diagnostics: json!({ "circle_samples": probes.grid().len() }),
        csv: Some(profile_csv(&rows)),
        failure: None,
    })
}

fn rudin_build_cmd(a: &BuildArgs, cfg: &Config) -> Result<Outcome, CliError> {
    let mut files = Map::new();
    let e: BoundarySet = read_input(&mut files, "set", &a.set)?;
    let u = match (&a.u, a.width) {
        (Some(p), _) => read_input(&mut files, "u", p)?,
        (None, Some(wd)) => neighborhood(&e, wd)?,
        (None, None) => unreachable!("clap requires --width or --u"),
    };
    let space = Space::from(a.space);
    let levels = a.levels.or(cfg.rudin_levels).unwrap_or(config::RUDIN_LEVELS);
    let grid_log2 = a.grid_log2.or(cfg.rudin_grid_log2);
    let profile = Profile::from(a.profile);
    let out_degree = a.output_degree.or(cfg.rudin_output_degree).unwrap_or(config::RUDIN_OUTPUT_DEGREE);
    let rf = match space {
        Space::Hardy => {
            let peak = a.peak.ok_or_else(|| Error::InvalidParameter("the Hardy construction needs --peak".into()))?;
            hardy_rudin_with(&e, &u, a.eps, peak, rudin::HardyOptions { profile, grid_log2 })?
        }
        Space::Dirichlet => dirichlet_rudin(&e, &u, a.eps, levels)?,
    };
    let cut = |s: &CoeffSeries| s.truncate(out_degree.min(s.truncation_degree()));
    Ok(Outcome {
        parameters: json!({
            "eps": a.eps, "peak": a.peak, "width": a.width, "space": space, "levels": levels,
            "profile": profile, "grid_log2": grid_log2, "output_degree": out_degree,
        }),
        files,
        outputs: json!({
            "h": value(&cut(&rf.h)),
            "completion": value(&cut(&rf.completion)),
            "peak_set": value(&rf.peak_set),
            "neighborhood": value(&rf.neighborhood),
            "peak": rf.peak,
            "certified": value(&rf.certified),
        }),
        diagnostics: json!({
            "h_degree": rf.h.truncation_degree(),
            "completion_degree": rf.completion.truncation_degree(),
            "circle_grid": rf.certified.circle_grid,
        }),
        ..Outcome::default()
    })
}

fn rudin_capacity_cmd(a: &CapacityArgs, cfg: &Config) -> Result<Outcome, CliError> {
    let mut files = Map::new();
    let set: BoundarySet = read_input(&mut files, "set", &a.set)?;
    let nodes = a.nodes.or(cfg.capacity_nodes).unwrap_or(config::CAPACITY_NODES);
    let iterations = a.iterations.or(cfg.capacity_iterations).unwrap_or(config::CAPACITY_ITERATIONS);
    let m = equilibrium_measure(&set, nodes, iterations)?;
    let mut csv = String::from("node,weight\n");
    for (t, w) in m.nodes.iter().zip(&m.weights) {
        csv.push_str(&format!("{t:.16e},{w:.16e}\n"));
    }
    let arc_formula = match set.arcs() {
        [arc] if set.points().is_empty() => Some(rudin::arc_capacity(arc.length())),
        _ => None,
    };
    Ok(Outcome {
        parameters: json!({ "nodes_per_arc": nodes, "iterations": iterations }),
        files,
        outputs: value(&m),
        diagnostics: json!({ "arc_formula": arc_formula, "total_length": set.total_length() }),
        csv: Some(csv),
        failure: None,
    })
}

fn trace_csv(trace: &[TraceEntry]) -> String {
    let mut out = String::from("dilation,level,degree,second_dilation,space_error,boundary_error,zero_free\n");
    for t in trace {
        let zf = t.zero_free.map_or(String::new(), |b| b.to_string());
        out.push_str(&format!(
            "{:.16e},{},{},{:.16e},{:.16e},{:.16e},{zf}\n",
            t.dilation, t.level, t.degree, t.second_dilation, t.space_error, t.boundary_error
        ));
    }
    out
}

fn zerofree_cmd(a: &ApproxArgs, cfg: &Config) -> Result<Outcome, CliError> {
    let mut files = Map::new();
    let g: CoeffSeries = read_input(&mut files, "g", &a.g)?;
    let e: BoundarySet = read_input(&mut files, "set", &a.set)?;
    let space = Space::from(a.space);
    let defaults = ZeroFreeOptions::default();
    let opts = ZeroFreeOptions {
        peak: cfg.zerofree_peak.unwrap_or(defaults.peak),
        max_level: cfg.zerofree_max_level.unwrap_or(defaults.max_level),
        max_degree: cfg.zerofree_max_degree.unwrap_or(defaults.max_degree),
    };
    let r = zerofree::simultaneous_zero_free_with(&g, &e, &a.targets, Tolerances::uniform(a.eps), space, opts)?;
    Ok(Outcome {
        parameters: json!({ "targets": value(&a.targets), "eps": a.eps, "space": space, "options": value(&opts) }),
        files,
        outputs: value(&r),
        diagnostics: json!({ "degree": r.p.degree(), "attempts": r.trace.len() }),
        csv: Some(trace_csv(&r.trace)),
        failure: None,
    })
}

fn steer_cmd(a: &SteerArgs) -> Result<Outcome, CliError> {
    let mut files = Map::new();
    let f: CoeffSeries = read_input(&mut files, "f", &a.f)?;
    let g: CoeffSeries = read_input(&mut files, "g", &a.g)?;
    let e: BoundarySet = read_input(&mut files, "set", &a.set)?;
    let space = Space::from(a.space);
    let r = steer(&f, &g, &e, a.eps, space)?;
    Ok(Outcome {
        parameters: json!({ "eps": a.eps, "space": space }),
        files,
        outputs: value(&r),
        diagnostics: json!({ "m": r.m, "degree_P": r.f_structured.p.degree(), "attempts": r.trace.len() }),
        csv: Some(trace_csv(&r.trace)),
        failure: None,
    })
}
