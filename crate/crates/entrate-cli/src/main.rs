//! Command line front end: majorization checks, exchange-rate bounds,
//! catalyst verification and search, conversion probabilities, and Renyi
//! entropies, all driven by JSON problem files.
//!
//! Exit codes are a stable contract: 0 for feasible or successful
//! computation, 1 for a well-posed but infeasible transformation, 2 for
//! input errors. Results go to stdout, diagnostics to stderr.

use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use entrate::entropy::{renyi, RenyiOrder};
use entrate::majorization::{majorizes, MajorizationVerdict};
use entrate::oracle::{naive_majorizes, naive_tensor_power, DenseSpectrum};
use entrate::rates::{
    catalyst_search_2level, catalyst_verify, max_conversion_probability, rate_report_capped,
    CatalystChoice, CatalystReport, RateReport,
};
use entrate::rational::{format_rational, format_real};
use entrate::spectrum::{GroupedSpectrum, SchmidtSpectrum};

const DEFAULT_M_MAX: u32 = 64;
const DEFAULT_Q_GRID: u32 = 100;
const DEFAULT_COPIES_MAX: u32 = 16;

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid problem file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Domain(#[from] entrate::Error),
}

type Result<T> = std::result::Result<T, CliError>;

/// JSON problem description: exact spectra as strings, an optional
/// catalyst, and optional search budgets (overridden by flags).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    source: SchmidtSpectrum,
    target: SchmidtSpectrum,
    #[serde(default)]
    catalyst: Option<CatalystSpec>,
    #[serde(default)]
    budgets: Option<BudgetSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalystSpec {
    spectrum: SchmidtSpectrum,
    copies: u32,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BudgetSpec {
    m_max: Option<u32>,
    n_cap: Option<u32>,
    q_grid: Option<u32>,
    copies_max: Option<u32>,
}

impl ProblemFile {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let file: ProblemFile =
            serde_json::from_str(&text).map_err(|e| CliError::Malformed(e.to_string()))?;
        if let Some(budgets) = &file.budgets {
            if budgets.m_max == Some(0) || budgets.n_cap == Some(0) {
                return Err(CliError::Malformed(
                    "budgets m_max and n_cap must be positive".into(),
                ));
            }
        }
        if let Some(catalyst) = &file.catalyst {
            if catalyst.copies == 0 {
                return Err(CliError::Malformed(
                    "catalyst copies must be positive".into(),
                ));
            }
        }
        Ok(file)
    }

    fn budget(&self, pick: impl Fn(&BudgetSpec) -> Option<u32>) -> Option<u32> {
        self.budgets.as_ref().and_then(pick)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Machine-readable report (also the default when stdout is piped).
    Json,
    /// Human-readable key/value lines (the default on a terminal).
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "entrate",
    version,
    about = "Deterministic LOCC transformation toolkit for bipartite entangled states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; defaults to table on a terminal, json when piped.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether m source copies transform into n target copies.
    Check {
        /// Problem file (JSON).
        file: PathBuf,
        /// Source copies.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        /// Target copies.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Re-run the decision through the naive dense oracle (guarded
        /// against exponential sizes) and fail loudly on disagreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Bound the deterministic exchange rate from both sides.
    Rate {
        /// Problem file (JSON).
        file: PathBuf,
        /// Largest source power to scan (default 64).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m_max: Option<u32>,
        /// Fixed per-power target-copy ceiling (default: entropy-derived).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n_cap: Option<u32>,
    },
    /// Verify the supplied catalyst, or search a bounded two-level grid.
    Catalyst {
        /// Problem file (JSON).
        file: PathBuf,
        /// Source copies.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        /// Target copies.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Number of grid points for the catalyst parameter (default 100;
        /// 0 disables the search).
        #[arg(long)]
        q_grid: Option<u32>,
        /// Largest catalyst copy count to try (default 16; 0 disables the
        /// search).
        #[arg(long)]
        copies_max: Option<u32>,
    },
    /// Exact best success probability for the k-copy probabilistic
    /// transformation.
    Pmax {
        /// Problem file (JSON).
        file: PathBuf,
        /// Copies of both source and target.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Renyi entropies of both spectra and their ratio at one order.
    Renyi {
        /// Problem file (JSON).
        file: PathBuf,
        /// Entropy order: "0", "1", "inf", or a positive decimal.
        #[arg(long)]
        tau: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.unwrap_or_else(|| {
        if std::io::stdout().is_terminal() {
            Format::Table
        } else {
            Format::Json
        }
    });
    match run(cli.command, format) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, format: Format) -> Result<ExitCode> {
    match command {
        Command::Check { file, m, n, oracle } => cmd_check(&file, m, n, oracle, format),
        Command::Rate { file, m_max, n_cap } => cmd_rate(&file, m_max, n_cap, format),
        Command::Catalyst {
            file,
            m,
            n,
            q_grid,
            copies_max,
        } => cmd_catalyst(&file, m, n, q_grid, copies_max, format),
        Command::Pmax { file, k } => cmd_pmax(&file, k),
        Command::Renyi { file, tau } => cmd_renyi(&file, &tau, format),
    }
}

fn exit_feasible(feasible: bool) -> ExitCode {
    if feasible {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn cmd_check(path: &Path, m: u32, n: u32, oracle: bool, format: Format) -> Result<ExitCode> {
    let problem = ProblemFile::load(path)?;
    let source = problem.source.to_grouped();
    let target = problem.target.to_grouped();
    let sm = source.power(m)?;
    let tn = target.power(n)?;
    let verdict = majorizes(&sm, &tn);
    if oracle {
        cross_check(&source, &target, m, n, &sm, &tn, &verdict)?;
    }
    print_verdict(&verdict, format);
    Ok(exit_feasible(verdict.holds))
}

/// Replays the powering and the decision through the naive dense oracle.
/// Size guards turn astronomically large instances into input errors; any
/// disagreement on an instance both paths can handle is a defect, so it
/// panics rather than returning.
fn cross_check(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    m: u32,
    n: u32,
    sm: &GroupedSpectrum,
    tn: &GroupedSpectrum,
    verdict: &MajorizationVerdict,
) -> Result<()> {
    let na = naive_tensor_power(&DenseSpectrum::from_grouped(source)?, m)?;
    let nb = naive_tensor_power(&DenseSpectrum::from_grouped(target)?, n)?;
    assert_eq!(
        DenseSpectrum::from_grouped(sm)?.probs(),
        na.probs(),
        "oracle disagreement: grouped source power differs from naive expansion"
    );
    assert_eq!(
        DenseSpectrum::from_grouped(tn)?.probs(),
        nb.probs(),
        "oracle disagreement: grouped target power differs from naive expansion"
    );
    assert_eq!(
        verdict.holds,
        naive_majorizes(&na, &nb),
        "oracle disagreement: majorization verdicts differ"
    );
    Ok(())
}

fn print_verdict(verdict: &MajorizationVerdict, format: Format) {
    match format {
        Format::Json => print_json(verdict),
        Format::Table => {
            println!("feasible: {}", if verdict.holds { "yes" } else { "no" });
            if let Some(w) = &verdict.witness {
                println!("first violated prefix length: {}", w.prefix_length);
                println!(
                    "source prefix sum: {}",
                    format_rational(&w.source_prefix_sum)
                );
                println!(
                    "target prefix sum: {}",
                    format_rational(&w.target_prefix_sum)
                );
            }
        }
    }
}

fn cmd_rate(
    path: &Path,
    m_max: Option<u32>,
    n_cap: Option<u32>,
    format: Format,
) -> Result<ExitCode> {
    let problem = ProblemFile::load(path)?;
    let m_max = m_max
        .or(problem.budget(|b| b.m_max))
        .unwrap_or(DEFAULT_M_MAX);
    let n_cap = n_cap.or(problem.budget(|b| b.n_cap));
    let report = rate_report_capped(
        &problem.source.to_grouped(),
        &problem.target.to_grouped(),
        m_max,
        n_cap,
    )?;
    match format {
        Format::Json => print_json(&report),
        Format::Table => print_rate_table(&report),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_rate_table(report: &RateReport) {
    println!("lower bound: {}", format_rational(&report.lower_bound));
    match &report.lower_witness {
        Some(w) => println!("  attained at m = {} with f(m) = {}", w.m, w.f_m),
        None => println!("  no feasible power within budget"),
    }
    if let Some(t) = report.threshold_m {
        println!("  first guaranteed-feasible power: m = {t}");
    }
    println!(
        "upper bound: {} (order {})",
        format_real(report.upper_bound),
        report.upper_order
    );
    println!("asymptotic Shannon ratio: {}", format_real(report.asymptotic));
    if let Some(cf) = report.closed_form {
        println!("closed form (uniform target): {}", format_real(cf));
    }
    let n_cap = report
        .budget
        .n_cap
        .map_or_else(|| "default".to_string(), |c| c.to_string());
    println!("budget: m_max = {}, n_cap = {}", report.budget.m_max, n_cap);
}

fn cmd_catalyst(
    path: &Path,
    m: u32,
    n: u32,
    q_grid: Option<u32>,
    copies_max: Option<u32>,
    format: Format,
) -> Result<ExitCode> {
    let problem = ProblemFile::load(path)?;
    let sm = problem.source.to_grouped().power(m)?;
    let tn = problem.target.to_grouped().power(n)?;
    let report = match &problem.catalyst {
        Some(spec) => {
            let feasible = catalyst_verify(&sm, &tn, &spec.spectrum.to_grouped(), spec.copies);
            CatalystReport {
                plain_feasible: majorizes(&sm, &tn).holds,
                catalyst_feasible: feasible,
                catalyst: Some(CatalystChoice {
                    spectrum: spec.spectrum.clone(),
                    copies: spec.copies,
                }),
                search_space: None,
            }
        }
        None => {
            let q_grid = q_grid
                .or(problem.budget(|b| b.q_grid))
                .unwrap_or(DEFAULT_Q_GRID);
            let copies_max = copies_max
                .or(problem.budget(|b| b.copies_max))
                .unwrap_or(DEFAULT_COPIES_MAX);
            catalyst_search_2level(&sm, &tn, q_grid, copies_max)
        }
    };
    match format {
        Format::Json => print_json(&report),
        Format::Table => print_catalyst_table(&report),
    }
    Ok(exit_feasible(report.catalyst_feasible))
}

fn print_catalyst_table(report: &CatalystReport) {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    println!("plain feasible: {}", yes_no(report.plain_feasible));
    println!("catalyst feasible: {}", yes_no(report.catalyst_feasible));
    match &report.catalyst {
        Some(choice) => println!(
            "catalyst: ({}) x {}",
            choice.spectrum, choice.copies
        ),
        None => println!("catalyst: none"),
    }
    if let Some(space) = &report.search_space {
        println!("searched: {space}");
    }
}

fn cmd_pmax(path: &Path, k: u32) -> Result<ExitCode> {
    let problem = ProblemFile::load(path)?;
    let p = max_conversion_probability(
        &problem.source.to_grouped().power(k)?,
        &problem.target.to_grouped().power(k)?,
    );
    // Always the bare reduced rational: it is already exact and
    // machine-readable in both output modes.
    println!("{}", format_rational(&p));
    Ok(ExitCode::SUCCESS)
}

/// Entropies of both spectra at one order, plus their ratio.
#[derive(Debug, Serialize)]
struct RenyiOutput {
    tau: RenyiOrder,
    #[serde(with = "entrate::rational::serde_real")]
    source_entropy: f64,
    #[serde(with = "entrate::rational::serde_real")]
    target_entropy: f64,
    #[serde(with = "entrate::rational::serde_real")]
    ratio: f64,
}

fn cmd_renyi(path: &Path, tau: &str, format: Format) -> Result<ExitCode> {
    let order: RenyiOrder = tau.parse().map_err(CliError::Domain)?;
    let problem = ProblemFile::load(path)?;
    let source_entropy = renyi(&problem.source.to_grouped(), order);
    let target_entropy = renyi(&problem.target.to_grouped(), order);
    let out = RenyiOutput {
        tau: order,
        source_entropy,
        target_entropy,
        ratio: source_entropy / target_entropy,
    };
    match format {
        Format::Json => print_json(&out),
        Format::Table => {
            println!("tau: {}", out.tau);
            println!("source entropy: {}", format_real(out.source_entropy));
            println!("target entropy: {}", format_real(out.target_entropy));
            println!("ratio: {}", format_real(out.ratio));
        }
    }
    Ok(ExitCode::SUCCESS)
}
