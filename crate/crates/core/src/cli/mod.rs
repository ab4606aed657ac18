//! The `qleak` command: argument handling, the five commands, and output.
//!
//! Every command renders into a [`Table`] and then into CSV or JSON, so the
//! same configuration always produces the same bytes.

mod args;
mod config;
mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::thread;

use clap::Parser;

use crate::charge_model::{self, oracle_report, EnergyScales};
use crate::error::{Error, Result};
use crate::leakage::{closed_form_leakage, map_v, reconcile, LeakageReport, VConvention};
use crate::mathieu::{self, fourier_coeffs, series_a1, series_b1, MathieuProblem, Parity};
use crate::qubit_dynamics::{
    ideal_evolve, oracle_real_evolve, overlap_fidelity, series_real_evolve, QubitState,
};

pub use args::{Cli, CliCommand};
pub use config::{Command, OutputFormat, RunConfig, Settings, Spacing, SweepRange};
pub use format::{fmt_fixed, fmt_sig, Cell, Table, NA, SIGNIFICANT_DIGITS};

/// Ratios reproduced by `qleak table`.
pub const TABLE_RATIOS: [f64; 3] = [0.02, 0.01, 0.005];
/// Decimal places for the fidelity columns of `qleak table`.
pub const TABLE_FIDELITY_DECIMALS: usize = 10;

pub const SWEEP_HEADER: &str = "ratio,v_eq16,v_numeric,v_pert,L_closed_eq16,L_closed_numeric,L_closed_pert,L_oracle,F_numeric,F_oracle,max_discrepancy";

const TABLE_COLUMNS: [&str; 10] = [
    "ratio",
    "convention",
    "mapping",
    "v",
    "F_closed",
    "L_closed",
    "F_leading",
    "L_oracle",
    "F_oracle",
    "closest",
];

const MATHIEU_COLUMNS: [&str; 8] = [
    "kind",
    "order",
    "q",
    "truncation",
    "char_value",
    "series",
    "difference",
    "residual",
];

const ORACLE_COLUMNS: [&str; 7] = [
    "ratio",
    "truncation",
    "L_oracle",
    "F_oracle",
    "leak_weight_ground",
    "leak_weight_excited",
    "in_design_window",
];

const EVOLVE_COLUMNS: [&str; 33] = [
    "time",
    "theta",
    "ratio",
    "convention",
    "v",
    "ideal_c0_re",
    "ideal_c0_im",
    "ideal_c1_re",
    "ideal_c1_im",
    "series_m1_re",
    "series_m1_im",
    "series_0_re",
    "series_0_im",
    "series_1_re",
    "series_1_im",
    "series_2_re",
    "series_2_im",
    "oracle_m1_re",
    "oracle_m1_im",
    "oracle_0_re",
    "oracle_0_im",
    "oracle_1_re",
    "oracle_1_im",
    "oracle_2_re",
    "oracle_2_im",
    "series_norm",
    "oracle_norm",
    "series_leaked",
    "oracle_leaked",
    "fidelity_series",
    "fidelity_oracle",
    "F_closed",
    "L_closed",
];

/// Rendered result of one command plus side notes for standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    pub notes: Vec<String>,
}

fn render(table: &Table, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json(),
    }
}

fn mapping_label(c: VConvention) -> &'static str {
    match c {
        VConvention::Eq16 => "stated",
        VConvention::Numeric => "inferred",
        VConvention::PertMatched => "derived",
    }
}

fn charge_truncation(cfg: &RunConfig) -> usize {
    cfg.truncation.unwrap_or(charge_model::DEFAULT_TRUNCATION)
}

const NUMERIC_NOTE: &str =
    "note: v = E_J/E_ch (numeric) is inferred from the published fidelity digits, not a stated mapping";

/// Fidelity at the three published ratios under the chosen convention, with
/// the oracle alongside.
pub fn cmd_table(cfg: &RunConfig) -> Result<Output> {
    let mut table = Table::new(&TABLE_COLUMNS);
    let mut notes = Vec::new();
    for ratio in TABLE_RATIOS {
        let rep = reconcile(ratio, charge_truncation(cfg))?;
        let est = rep.estimate(cfg.convention);
        if let Err(msg) = &rep.oracle {
            notes.push(format!("ratio {ratio}: oracle failed: {msg}"));
        }
        table.push(vec![
            Cell::sig(ratio),
            Cell::Text(cfg.convention.tag()),
            Cell::Text(mapping_label(cfg.convention)),
            Cell::sig(est.v),
            Cell::Num(fmt_fixed(est.closed_fidelity, TABLE_FIDELITY_DECIMALS)),
            Cell::sig(est.closed_leakage),
            Cell::Num(fmt_fixed(1.0 - est.leading_leakage, TABLE_FIDELITY_DECIMALS)),
            Cell::opt(rep.oracle_leakage()),
            Cell::opt(rep.oracle_fidelity()),
            rep.closest.map_or(Cell::Na, |c| Cell::Text(c.tag())),
        ]);
    }
    if cfg.convention.is_inferred() {
        notes.push(NUMERIC_NOTE.to_string());
    }
    Ok(Output {
        body: render(&table, cfg.format),
        notes,
    })
}

/// One sweep row; oracle failures become `NA`.
pub fn sweep_row(report: &LeakageReport) -> Vec<Cell> {
    let e = |c| report.estimate(c);
    use VConvention::*;
    vec![
        Cell::sig(report.ratio),
        Cell::sig(e(Eq16).v),
        Cell::sig(e(Numeric).v),
        Cell::sig(e(PertMatched).v),
        Cell::sig(e(Eq16).closed_leakage),
        Cell::sig(e(Numeric).closed_leakage),
        Cell::sig(e(PertMatched).closed_leakage),
        Cell::opt(report.oracle_leakage()),
        Cell::sig(e(Numeric).closed_fidelity),
        Cell::opt(report.oracle_fidelity()),
        Cell::opt(report.max_discrepancy()),
    ]
}

/// Reports for every ratio, computed in parallel and returned in input order.
pub fn sweep_reports(ratios: &[f64], truncation: usize) -> Result<Vec<LeakageReport>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(ratios.len().max(1));
    let chunk = ratios.len().div_ceil(workers).max(1);
    let chunks: Vec<Result<Vec<LeakageReport>>> = thread::scope(|scope| {
        let handles: Vec<_> = ratios
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|&r| reconcile(r, truncation))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(ratios.len());
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Output> {
    let range = cfg
        .sweep
        .ok_or_else(|| Error::domain("sweep needs --lo, --hi and --steps"))?;
    let header: Vec<&'static str> = SWEEP_HEADER.split(',').collect();
    let mut table = Table::new(&header);
    let reports = sweep_reports(&range.ratios(), charge_truncation(cfg))?;
    let mut notes = vec![NUMERIC_NOTE.to_string()];
    for rep in &reports {
        if let Err(msg) = &rep.oracle {
            notes.push(format!("ratio {}: oracle failed: {msg}", rep.ratio));
        }
        table.push(sweep_row(rep));
    }
    Ok(Output {
        body: render(&table, cfg.format),
        notes,
    })
}

pub fn cmd_mathieu(cfg: &RunConfig) -> Result<Output> {
    let (kind, order, q) = match (cfg.kind, cfg.order, cfg.q) {
        (Some(k), Some(o), Some(q)) => (k, o, q),
        _ => return Err(Error::domain("mathieu needs --kind, --order and --q")),
    };
    let problem = match cfg.truncation {
        Some(m) => MathieuProblem::with_truncation(kind, order, q, m)?,
        None => MathieuProblem::new(kind, order, q)?,
    };
    let sol = fourier_coeffs(&problem)?;
    let series = (order == 1).then(|| match kind {
        Parity::Even => series_a1(q),
        Parity::Odd => series_b1(q),
    });
    let mut notes = Vec::new();
    if series.is_some() && !mathieu::series_is_reliable(q) {
        notes.push(format!(
            "warning: |q| = {} exceeds {}; the order-one series is not reliable here",
            q.abs(),
            mathieu::SERIES_MAX_Q
        ));
    }
    let mut table = Table::new(&MATHIEU_COLUMNS);
    table.push(vec![
        Cell::Text(kind.label()),
        Cell::int(order),
        Cell::sig(q),
        Cell::int(sol.problem.truncation() as i64),
        Cell::sig(sol.char_value),
        Cell::opt(series),
        Cell::opt(series.map(|s| sol.char_value - s)),
        Cell::sig(sol.residual),
    ]);
    Ok(Output {
        body: render(&table, cfg.format),
        notes,
    })
}

pub fn cmd_oracle(cfg: &RunConfig) -> Result<Output> {
    let ratio = cfg.ratio.ok_or_else(|| Error::domain("oracle needs --ratio"))?;
    let scales = EnergyScales::from_ratio(ratio)?;
    let rep = oracle_report(scales, charge_truncation(cfg))?;
    let mut table = Table::new(&ORACLE_COLUMNS);
    table.push(vec![
        Cell::sig(ratio),
        Cell::int(rep.truncation as i64),
        Cell::sig(rep.leakage),
        Cell::sig(rep.fidelity()),
        Cell::sig(rep.leak_weights[0]),
        Cell::sig(rep.leak_weights[1]),
        Cell::Text(if scales.in_design_window() { "true" } else { "false" }),
    ]);
    Ok(Output {
        body: render(&table, cfg.format),
        notes: Vec::new(),
    })
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<Output> {
    let (theta, time, ratio) = match (cfg.theta, cfg.time, cfg.ratio) {
        (Some(a), Some(t), Some(r)) => (a, t, r),
        _ => return Err(Error::domain("evolve needs --theta, --time and --ratio")),
    };
    let scales = EnergyScales::from_ratio(ratio)?;
    let v = map_v(&scales, cfg.convention);
    let beta = QubitState::from_angle(theta);
    let ideal = ideal_evolve(&beta, time, scales.josephson());
    let series = series_real_evolve(&beta, time, v, scales.charging());
    let h = charge_model::build_hamiltonian(
        scales,
        charge_model::DEGENERACY_OFFSET,
        charge_truncation(cfg),
    )?;
    let mut notes = Vec::new();
    let oracle = charge_model::diagonalize(&h)
        .and_then(|spec| oracle_real_evolve(&beta, time, &spec))
        .map_err(|e| notes.push(format!("oracle route unavailable: {e}")))
        .ok();

    let amp = |st: Option<&crate::qubit_dynamics::ExtendedState>, n: i64| -> [Cell; 2] {
        match st.and_then(|s| s.amplitude(n)) {
            Some(a) => [Cell::sig(a.re), Cell::sig(a.im)],
            None => [Cell::Na, Cell::Na],
        }
    };
    let mut row = vec![
        Cell::sig(time),
        Cell::sig(theta),
        Cell::sig(ratio),
        Cell::Text(cfg.convention.tag()),
        Cell::sig(v),
        Cell::sig(ideal.c0().re),
        Cell::sig(ideal.c0().im),
        Cell::sig(ideal.c1().re),
        Cell::sig(ideal.c1().im),
    ];
    for n in -1..=2 {
        row.extend(amp(Some(&series), n));
    }
    for n in -1..=2 {
        row.extend(amp(oracle.as_ref(), n));
    }
    let fid_oracle = oracle
        .as_ref()
        .map(|o| overlap_fidelity(&ideal, o))
        .transpose()?;
    row.extend([
        Cell::sig(series.norm_sqr()),
        Cell::opt(oracle.as_ref().map(|o| o.norm_sqr())),
        Cell::sig(series.leaked_probability()),
        Cell::opt(oracle.as_ref().map(|o| o.leaked_probability())),
        Cell::sig(overlap_fidelity(&ideal, &series)?),
        Cell::opt(fid_oracle),
        Cell::sig(1.0 - closed_form_leakage(v)),
        Cell::sig(closed_form_leakage(v)),
    ]);
    let mut table = Table::new(&EVOLVE_COLUMNS);
    table.push(row);
    if cfg.convention.is_inferred() {
        notes.push(NUMERIC_NOTE.to_string());
    }
    Ok(Output {
        body: render(&table, cfg.format),
        notes,
    })
}

/// Dispatch on [`RunConfig::command`].
pub fn run(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    match cfg.command {
        Command::Table => cmd_table(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::Mathieu => cmd_mathieu(cfg),
        Command::Oracle => cmd_oracle(cfg),
        Command::Evolve => cmd_evolve(cfg),
    }
}

/// Merge the optional config file with the flags.
pub fn config_from_cli(cli: &Cli) -> Result<RunConfig> {
    let (command, flags) = cli.command.to_settings();
    let mut settings = match &cli.config {
        Some(path) => Settings::read(path)?,
        None => Settings::new(),
    };
    settings.overlay(&flags);
    RunConfig::from_settings(command, &settings)
}

fn write_body(cfg: &RunConfig, body: &str, stdout: &mut dyn Write) -> Result<()> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, body).map_err(io_err(path)),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

/// One-line error report: `qleak: error[<kind>]: <message>`.
pub fn error_line(kind: &str, message: &str) -> String {
    let flat: Vec<&str> = message.split_whitespace().collect();
    format!("qleak: error[{kind}]: {}", flat.join(" "))
}

/// Entry point shared by the binary and the tests. Returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(
                stderr,
                "{}",
                error_line("usage", first.trim_start_matches("error: "))
            );
            return 2;
        }
    };
    let result = config_from_cli(&cli).and_then(|cfg| {
        let out = run(&cfg)?;
        write_body(&cfg, &out.body, stdout)?;
        Ok(out.notes)
    });
    match result {
        Ok(notes) => {
            for n in notes {
                let _ = writeln!(stderr, "{n}");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_line(e.kind(), &e.to_string()));
            1
        }
    }
}
