//! Command-line front end: level tables, figure-data scans, radial profile
//! samples, and the acceptance checklist.
//!
//! Output is deterministic: fixed column order, fixed significant-digit
//! formatting, no timestamps. Exit codes: 0 ok, 1 validation failure,
//! 2 no bound state, 3 unknown molecule, 64 usage.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use rovib::constants::INVCM_TO_EV;
use rovib::potential::{matched_coefficients, pekeris_coefficients, CentrifugalCoeffs, CoeffSource};
use rovib::registry::{default_registry, fit_variants, PotentialParams};
use rovib::spectrum::{
    nr_energy, nr_n_max, s_wave_coeffs, scan_depth, scan_vibrational, solve_level_relativistic,
    transition, EnergyLevel, Regime,
};
use rovib::validate::run_all;
use rovib::wavefn::{radial_state, radial_value};
use rovib::{Error, ExecMode};

#[derive(Parser)]
#[command(
    name = "rovib",
    version,
    about = "Ro-vibrational spectra of diatomic molecules in a deformed hyperbolic well"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format: csv or json-lines.
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Write the table to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Significant digits for energies (default: 6 for tables, 10 for scan
    /// and profile data).
    #[arg(long, global = true)]
    precision: Option<usize>,

    /// Execution mode for the data-parallel paths: parallel or sequential.
    #[arg(long, global = true, default_value = "parallel")]
    exec: String,
}

#[derive(Subcommand)]
enum Command {
    /// Bound levels over n and l ranges for one molecule.
    Levels {
        #[arg(long)]
        molecule: String,
        /// nr (non-relativistic) or kg (relativistic; energies above rest mass).
        #[arg(long, default_value = "nr")]
        regime: String,
        /// Vibrational range, inclusive: "0..5" or a single index.
        #[arg(long, default_value = "0..5")]
        n: String,
        /// Rotational range, inclusive: "0..2" or a single index.
        #[arg(long, default_value = "0..2")]
        l: String,
        /// Centrifugal coefficient set for l > 0: paper, matched, or both.
        #[arg(long, default_value = "matched")]
        coeffs: String,
    },
    /// Ground-state energy across the four fitted shape-parameter rows.
    Table2,
    /// s-wave excitation ladder of the shallow well.
    Table3,
    /// Ro-vibrational grid (n = 0..5, l = 0..2) for both molecules.
    Table4 {
        /// Restrict to one molecule.
        #[arg(long)]
        molecule: Option<String>,
        #[arg(long, default_value = "both")]
        coeffs: String,
    },
    /// Vibrational spectrum E(n) as figure data.
    ScanN {
        #[arg(long)]
        molecule: String,
        /// Top vibrational index; truncated at the bound spectrum with a warning.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value = "0")]
        l: u32,
    },
    /// Ground-level energy against well depth.
    ScanDe {
        #[arg(long)]
        molecule: String,
        /// Sweep start, cm^-1.
        #[arg(long, default_value = "50")]
        de_min: f64,
        /// Sweep end, cm^-1.
        #[arg(long, default_value = "150")]
        de_max: f64,
        #[arg(long, default_value = "21")]
        de_steps: usize,
    },
    /// Radial profile samples for one state.
    Wavefunction {
        #[arg(long)]
        molecule: String,
        #[arg(long, default_value = "0")]
        n: u32,
        #[arg(long, default_value = "0")]
        l: u32,
        #[arg(long, default_value = "nr")]
        regime: String,
        /// Centrifugal coefficient set for l > 0: paper or matched.
        #[arg(long, default_value = "matched")]
        coeffs: String,
        /// Sample range start in angstrom (default 0.01 r_e).
        #[arg(long)]
        r_min: Option<f64>,
        /// Sample range end in angstrom (default 10 r_e).
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value = "400")]
        samples: usize,
    },
    /// Run the acceptance checklist; nonzero exit if any check fails.
    Validate {
        /// Skip the finite-difference comparisons (golden tables only).
        #[arg(long)]
        skip_oracle: bool,
    },
}

/// Failure carrying its process exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 64, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NoBoundState(_) => 2,
            Error::UnknownMolecule(_) => 3,
            Error::RejectedInput(_) | Error::Parse { .. } | Error::MissingField { .. } => 64,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(64)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// One table cell; numbers are kept as preformatted literals so both output
/// formats stay byte-deterministic.
enum Cell {
    Num(String),
    Text(String),
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn render(table: &Table, format: &str) -> Result<String, Failure> {
    let mut out = String::new();
    match format {
        "csv" => {
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let line: Vec<String> = row
                    .iter()
                    .map(|c| match c {
                        Cell::Num(s) => s.clone(),
                        Cell::Text(s) => csv_quote(s),
                    })
                    .collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        "json-lines" => {
            for row in &table.rows {
                let fields: Vec<String> = table
                    .columns
                    .iter()
                    .zip(row.iter())
                    .map(|(name, cell)| match cell {
                        Cell::Num(s) => format!("{}:{}", json_quote(name), s),
                        Cell::Text(s) => format!("{}:{}", json_quote(name), json_quote(s)),
                    })
                    .collect();
                out.push('{');
                out.push_str(&fields.join(","));
                out.push_str("}\n");
            }
        }
        other => return Err(usage(format!("unknown format '{other}' (expected csv|json-lines)"))),
    }
    Ok(out)
}

/// Fixed significant-digit decimal formatting, trailing zeros trimmed.
fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sig = sig.max(1);
    let mag = x.abs().log10().floor() as i64;
    if !(-7..12).contains(&mag) {
        return format!("{:.*e}", sig - 1, x);
    }
    let decimals = (sig as i64 - 1 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn cm(ev: f64) -> f64 {
    ev / INVCM_TO_EV
}

/// Inclusive "a..b" or single-index range.
fn parse_range(text: &str, what: &str) -> Result<(u32, u32), Failure> {
    let parse_one = |s: &str| -> Result<u32, Failure> {
        s.trim()
            .parse::<u32>()
            .map_err(|_| usage(format!("{what} range: cannot parse '{s}'")))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let v = parse_one(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(usage(format!("{what} range '{text}' is empty")));
    }
    Ok((lo, hi))
}

/// Coefficient sets to evaluate for one l, with their provenance labels.
fn coeff_sets(
    params: &PotentialParams,
    l: u32,
    choice: &str,
) -> Result<Vec<(CentrifugalCoeffs, String)>, Failure> {
    if l == 0 {
        return Ok(vec![(s_wave_coeffs(), "-".to_string())]);
    }
    let matched = || -> Result<(CentrifugalCoeffs, String), Failure> {
        let c = matched_coefficients(
            params.alpha,
            params.molecule.re_angstrom,
            params.q,
            params.branch,
        )?;
        Ok((c, CoeffSource::DerivativeMatched.to_string()))
    };
    let printed = || {
        let c = pekeris_coefficients(params.alpha, params.molecule.re_angstrom, params.branch);
        (c, CoeffSource::ClosedForm.to_string())
    };
    match choice {
        "matched" => Ok(vec![matched()?]),
        "paper" => Ok(vec![printed()]),
        "both" => Ok(vec![matched()?, printed()]),
        other => Err(usage(format!(
            "unknown coefficient choice '{other}' (expected paper|matched|both)"
        ))),
    }
}

fn solve_level(
    params: &PotentialParams,
    n: u32,
    l: u32,
    coeffs: &CentrifugalCoeffs,
    regime: Regime,
) -> Result<EnergyLevel, Error> {
    match regime {
        Regime::NonRelativistic => nr_energy(params, n, l, coeffs),
        Regime::Relativistic => solve_level_relativistic(params, n, l, coeffs),
    }
}

fn level_row(lev: &EnergyLevel, coeff_label: &str, sig: usize) -> Vec<Cell> {
    vec![
        Cell::Num(lev.n.to_string()),
        Cell::Num(lev.l.to_string()),
        Cell::Num(format_sig(cm(lev.value), sig)),
        Cell::Text(lev.regime.to_string()),
        Cell::Text(coeff_label.to_string()),
        Cell::Num(format!("{:.3e}", lev.residual)),
    ]
}

const LEVEL_COLUMNS: &[&str] = &["n", "l", "energy_cm1", "regime", "coeffs", "residual"];

fn run(cli: Cli) -> Result<u8, Failure> {
    let reg = default_registry()?;
    let mode = ExecMode::from_label(&cli.exec)?;
    let table_sig = cli.precision.unwrap_or(6);
    let data_sig = cli.precision.unwrap_or(10);

    let (table, code) = match &cli.command {
        Command::Levels { molecule, regime, n, l, coeffs } => {
            let p = reg.get(molecule)?;
            let regime = Regime::from_label(regime)?;
            let (n_lo, n_hi) = parse_range(n, "n")?;
            let (l_lo, l_hi) = parse_range(l, "l")?;
            let mut rows = Vec::new();
            for l in l_lo..=l_hi {
                for (c, label) in coeff_sets(p, l, coeffs)? {
                    for n in n_lo..=n_hi {
                        let lev = solve_level(p, n, l, &c, regime)?;
                        rows.push(level_row(&lev, &label, table_sig));
                    }
                }
            }
            (Table { columns: LEVEL_COLUMNS, rows }, 0)
        }
        Command::Table2 => {
            let base = reg.get("H2")?;
            let c = s_wave_coeffs();
            let mut rows = Vec::new();
            for (i, p) in fit_variants(base).iter().enumerate() {
                let lev = nr_energy(p, 0, 0, &c)?;
                rows.push(vec![
                    Cell::Num((i + 1).to_string()),
                    Cell::Num(format_sig(p.sigma, table_sig)),
                    Cell::Num(format_sig(p.delta, table_sig)),
                    Cell::Num(format_sig(p.alpha, table_sig)),
                    Cell::Num(format_sig(cm(lev.value), table_sig)),
                ]);
            }
            (
                Table {
                    columns: &["variant", "sigma", "delta", "alpha", "energy_cm1"],
                    rows,
                },
                0,
            )
        }
        Command::Table3 => {
            let p = reg.get("Ar2")?;
            let mut rows = Vec::new();
            for n in 1..=7u32 {
                let de = transition(p, n)?;
                rows.push(vec![
                    Cell::Num(n.to_string()),
                    Cell::Num(format_sig(cm(de), table_sig)),
                ]);
            }
            (Table { columns: &["n", "transition_cm1"], rows }, 0)
        }
        Command::Table4 { molecule, coeffs } => {
            let names: Vec<&str> = match molecule {
                Some(m) => {
                    reg.get(m)?;
                    vec![m.as_str()]
                }
                None => vec!["Ar2", "H2"],
            };
            let mut rows = Vec::new();
            for name in names {
                let p = reg.get(name)?;
                for l in 0..=2u32 {
                    for (c, label) in coeff_sets(p, l, coeffs)? {
                        for n in 0..=5u32 {
                            let lev = nr_energy(p, n, l, &c)?;
                            let mut row = vec![Cell::Text(name.to_string())];
                            row.extend(level_row(&lev, &label, table_sig));
                            rows.push(row);
                        }
                    }
                }
            }
            (
                Table {
                    columns: &["molecule", "n", "l", "energy_cm1", "regime", "coeffs", "residual"],
                    rows,
                },
                0,
            )
        }
        Command::ScanN { molecule, n, l } => {
            let p = reg.get(molecule)?;
            let coeffs = coeff_sets(p, *l, "matched")?.remove(0).0;
            let mut levels = scan_vibrational(p, *l, &coeffs)?;
            if let Some(top) = n {
                let n_max = nr_n_max(p)?;
                if (*top as f64) > n_max.max(0.0).floor() {
                    eprintln!(
                        "warning: requested n = {top} exceeds the bound spectrum (n_max = {n_max:.3}); truncating"
                    );
                } else {
                    levels.truncate(*top as usize + 1);
                }
            }
            let rows = levels
                .iter()
                .map(|lev| {
                    vec![
                        Cell::Num(lev.n.to_string()),
                        Cell::Num(format_sig(cm(lev.value), data_sig)),
                    ]
                })
                .collect();
            (Table { columns: &["n", "energy_cm1"], rows }, 0)
        }
        Command::ScanDe { molecule, de_min, de_max, de_steps } => {
            let p = reg.get(molecule)?;
            let c = s_wave_coeffs();
            let sweep = scan_depth(p, 0, 0, &c, *de_min, *de_max, *de_steps)?;
            let rows = sweep
                .iter()
                .map(|(de, lev)| {
                    vec![
                        Cell::Num(format_sig(*de, data_sig)),
                        Cell::Num(format_sig(cm(lev.value), data_sig)),
                    ]
                })
                .collect();
            (Table { columns: &["de_cm1", "energy_cm1"], rows }, 0)
        }
        Command::Wavefunction { molecule, n, l, regime, coeffs, r_min, r_max, samples } => {
            let p = reg.get(molecule)?;
            let regime = Regime::from_label(regime)?;
            if *samples < 2 {
                return Err(usage(format!("need at least 2 samples, got {samples}")));
            }
            let set = coeff_sets(p, *l, coeffs)?;
            if set.len() != 1 {
                return Err(usage("wavefunction takes a single coefficient set"));
            }
            let c = &set[0].0;
            let re = p.molecule.re_angstrom;
            let lo = r_min.unwrap_or(0.01 * re);
            let hi = r_max.unwrap_or(10.0 * re);
            if !(lo > 0.0) || !(hi > lo) {
                return Err(usage(format!("bad radial range [{lo}, {hi}]")));
            }
            let lev = solve_level(p, *n, *l, c, regime)?;
            let state = radial_state(p, &lev, c)?;
            let mut rows = Vec::with_capacity(*samples);
            for i in 0..*samples {
                let r = lo + (hi - lo) * i as f64 / (*samples as f64 - 1.0);
                let v = radial_value(&state, p, r)?;
                rows.push(vec![
                    Cell::Num(format_sig(r, data_sig)),
                    Cell::Num(format!("{v:.10e}")),
                ]);
            }
            (Table { columns: &["r_angstrom", "radial"], rows }, 0)
        }
        Command::Validate { skip_oracle } => {
            let results = run_all(&reg, *skip_oracle, mode);
            let failed = results.iter().filter(|r| !r.passed).count();
            let rows = results
                .iter()
                .map(|r| {
                    vec![
                        Cell::Num(format!("{:02}", r.id)),
                        Cell::Text(r.label.to_string()),
                        Cell::Text(if r.passed { "pass" } else { "fail" }.to_string()),
                        Cell::Text(r.detail.clone()),
                    ]
                })
                .collect();
            (
                Table { columns: &["check", "label", "status", "detail"], rows },
                if failed > 0 { 1 } else { 0 },
            )
        }
    };

    let rendered = render(&table, &cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        })?,
        None => print!("{rendered}"),
    }
    Ok(code)
}
