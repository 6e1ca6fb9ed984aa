//! Subcommand implementations. Each returns the artifact text; writing it
//! out is the caller's job.

use std::fmt::Write as _;

use isochron_core::expansion::coupled_expansion;
use isochron_core::potential::classify_system;
use isochron_core::quadrature::{
    assemble_table, crossing_of_energy, divergence_probe, energy_grid, period_numeric_with, validate_energies, PeriodTable,
};
use isochron_core::simulate::integrate_return;
use isochron_core::verdict::{probe_target, verdict_report};
use isochron_core::{OrbitRun, Topology};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{AnalysisConfig, OutputFormat, SimulateStart};
use crate::error::CliError;
use crate::format;

pub const TOOL: &str = "isochron";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Table,
    Expand,
    Diverge,
    Simulate,
    Verdict,
}

impl Command {
    pub fn label(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Table => "table",
            Command::Expand => "expand",
            Command::Diverge => "diverge",
            Command::Simulate => "simulate",
            Command::Verdict => "verdict",
        }
    }

    fn default_format(self) -> OutputFormat {
        match self {
            Command::Table => OutputFormat::Csv,
            _ => OutputFormat::Json,
        }
    }
}

/// Primary artifact plus optional side files (trajectory dumps).
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub primary: String,
    pub extra: Vec<(std::path::PathBuf, String)>,
}

pub fn config_hash(cfg: &AnalysisConfig) -> String {
    hex::encode(Sha256::digest(cfg.canonical().to_string().as_bytes()))
}

pub fn meta(cfg: &AnalysisConfig, cmd: Command) -> Value {
    json!({"tool": TOOL, "version": VERSION, "command": cmd.label(), "config_sha256": config_hash(cfg)})
}

fn with_meta(mut body: Value, cfg: &AnalysisConfig, cmd: Command) -> String {
    if let Some(map) = body.as_object_mut() {
        map.insert("meta".into(), meta(cfg, cmd));
    }
    let mut text = serde_json::to_string_pretty(&body).expect("JSON values serialize");
    text.push('\n');
    text
}

pub fn run(cmd: Command, cfg: &AnalysisConfig) -> Result<Artifacts, CliError> {
    let fmt = cfg.format.unwrap_or(cmd.default_format());
    if fmt == OutputFormat::Csv && !matches!(cmd, Command::Table | Command::Simulate) {
        return Err(CliError::Config {
            field: "output.format".into(),
            message: format!("csv output is available for table and simulate, not {}", cmd.label()),
        });
    }
    let primary = match cmd {
        Command::Classify => {
            let case = classify_system(&cfg.system);
            let mut body = format::center_case(&cfg.system, &case);
            body.as_object_mut().expect("object").insert("system".into(), format::system(&cfg.system));
            with_meta(body, cfg, cmd)
        }
        Command::Table => {
            let table = table(cfg)?;
            match fmt {
                OutputFormat::Csv => table_csv(&table, cfg),
                OutputFormat::Json => with_meta(format::table(&table), cfg, cmd),
            }
        }
        Command::Expand => {
            let exp = coupled_expansion(&cfg.system, cfg.order).map_err(|e| CliError::analysis("expansion", e))?;
            let mut body = format::expansion(&exp);
            body.as_object_mut().expect("object").insert("case".into(), json!(classify_system(&cfg.system).label()));
            with_meta(body, cfg, cmd)
        }
        Command::Diverge => {
            let (v, side) = match cfg.probe {
                Some(t) => (if t.plus { cfg.system.v_plus.clone() } else { cfg.system.v_minus.clone() }, t.side),
                None => probe_target(&cfg.system).ok_or_else(|| CliError::Analysis {
                    kind: "not_degenerate",
                    message: "no divergent side; set diverge.potential and diverge.side to probe one explicitly".into(),
                })?,
            };
            let fit = divergence_probe(&v, side, &cfg.rho_grid).map_err(|e| CliError::analysis("quadrature", e))?;
            let mut body = format::divergence(&fit);
            let map = body.as_object_mut().expect("object");
            map.insert("side".into(), json!(side.label()));
            map.insert("potential".into(), format::potential(&v));
            map.insert("relative_mismatch".into(), format::float(fit.relative_mismatch()));
            with_meta(body, cfg, cmd)
        }
        Command::Simulate => {
            let run = simulate(cfg)?;
            let mut extra = Vec::new();
            if let Some(path) = &cfg.simulate.trajectory_path {
                extra.push((path.clone(), trajectory_csv(&run)));
                let mut events_path = path.clone().into_os_string();
                events_path.push(".events.jsonl");
                extra.push((events_path.into(), events_jsonl(&run)));
            }
            let primary = match fmt {
                OutputFormat::Csv => trajectory_csv(&run),
                OutputFormat::Json => with_meta(format::orbit(&run), cfg, cmd),
            };
            return Ok(Artifacts { primary, extra });
        }
        Command::Verdict => {
            let report = verdict_report(&cfg.system, cfg.order);
            with_meta(format::verdict(&report), cfg, cmd)
        }
    };
    Ok(Artifacts { primary, extra: Vec::new() })
}

/// Rows are computed on the worker pool and assembled in energy order.
pub fn table(cfg: &AnalysisConfig) -> Result<PeriodTable, CliError> {
    let e = &cfg.energies;
    let energies = energy_grid(e.min, e.max, e.count, e.log).map_err(|err| CliError::Config {
        field: "energies".into(),
        message: err.to_string(),
    })?;
    validate_energies(&cfg.system, &energies).map_err(|err| CliError::Config { field: "energies".into(), message: err.to_string() })?;
    let tol = cfg.tolerances.quadrature_abs;
    let rows = energies
        .par_iter()
        .map(|&h| period_numeric_with(&cfg.system, h, tol))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|err| CliError::analysis("quadrature", err))?;
    Ok(assemble_table(&cfg.system, rows, tol))
}

pub const CSV_HEADER: &str = "h,T_total,T_minus,T_plus,cross_1,cross_2,non_closed";

/// `#` comment lines carry the metadata, then the header and one row per energy.
pub fn table_csv(table: &PeriodTable, cfg: &AnalysisConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# tool: {TOOL} {VERSION}");
    let _ = writeln!(out, "# config_sha256: {}", config_hash(cfg));
    let _ = writeln!(out, "# case: {}", table.case);
    let _ = writeln!(out, "# quadrature_abs: {}", format::float_text(table.quadrature_abs_tol));
    let _ = writeln!(out, "# turning_point_rel: {}", format::float_text(table.turning_point_rel_tol));
    let _ = writeln!(out, "{CSV_HEADER}");
    for r in &table.rows {
        let f = format::float_text;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            f(r.h),
            f(r.t_total),
            f(r.t_minus),
            f(r.t_plus),
            f(r.cross_1),
            f(r.cross_2),
            r.non_closed
        );
    }
    out
}

pub fn simulate(cfg: &AnalysisConfig) -> Result<OrbitRun, CliError> {
    let start = match cfg.simulate.start {
        SimulateStart::Point(p) => p,
        SimulateStart::Energy(h) => {
            let c = crossing_of_energy(&cfg.system, h).map_err(|e| CliError::analysis("quadrature", e))?;
            match cfg.system.topology {
                Topology::VerticalSwitch => [0.0, c],
                _ => [c, 0.0],
            }
        }
    };
    integrate_return(&cfg.system, start, &cfg.simulate_options()).map_err(|e| CliError::analysis("simulate", e))
}

pub fn trajectory_csv(run: &OrbitRun) -> String {
    let mut out = String::from("t,x,y,side\n");
    for s in &run.states {
        let f = format::float_text;
        let _ = writeln!(out, "{},{},{},{}", f(s.t), f(s.state[0]), f(s.state[1]), s.region.label());
    }
    out
}

pub fn events_jsonl(run: &OrbitRun) -> String {
    let mut out = String::new();
    for e in &run.events {
        let mut m = Map::new();
        m.insert("t".into(), format::float(e.t));
        m.insert("position".into(), json!([format::float(e.state[0]), format::float(e.state[1])]));
        m.insert("side_from".into(), json!(e.from.label()));
        m.insert("side_to".into(), json!(e.to.label()));
        out.push_str(&Value::Object(m).to_string());
        out.push('\n');
    }
    out
}
