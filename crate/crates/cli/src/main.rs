use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use twsolve_core::algebraic::PrecisionPolicy;
use twsolve_core::linear_forms::{family_bound_detail, reduction_setup, FamilyConstants};
use twsolve_core::pipeline::{self, paper, PipelineReport, RunConfig};
use twsolve_core::search::{enumerate_solutions, EquationFamily, Form, Kind};
use twsolve_core::sequences::SequenceId;
use twsolve_core::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_REDUCTION: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "twsolve", version, about = "Solve T_n = (b ± 1) b^l ± 1 for Padovan, Perrin and Narayana numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound, reduce, search and verify one equation.
    Solve(FamilyArgs),
    /// Certified upper bound on n from linear forms in logarithms.
    Bound(FamilyArgs),
    /// Continued-fraction reduction of the bound.
    Reduce(FamilyArgs),
    /// Exhaustive search up to n-max (default: the family's cutoff).
    Search(FamilyArgs),
    /// Run every equation over the base range.
    All(RangeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqArg {
    Padovan,
    Perrin,
    Narayana,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Thabit,
    Williams,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    First,
    Second,
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long, default_value_t = 2)]
    b_min: u64,
    #[arg(long, default_value_t = 10)]
    b_max: u64,
    /// Search bound on n, overriding the family cutoff.
    #[arg(long)]
    n_max: Option<u64>,
    /// Largest working precision in bits.
    #[arg(long, default_value_t = twsolve_core::algebraic::DEFAULT_CAP_BITS)]
    precision_cap: u32,
    /// Compare solutions with the published tables for 2 <= b <= 10.
    #[arg(long)]
    check_paper: bool,
    /// Write JSON here instead of stdout; a text summary goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    sequence: SeqArg,
    #[arg(long, value_enum)]
    form: FormArg,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[command(flatten)]
    range: RangeArgs,
}

impl FamilyArgs {
    fn family(&self) -> EquationFamily {
        let seq = match self.sequence {
            SeqArg::Padovan => SequenceId::Padovan,
            SeqArg::Perrin => SequenceId::Perrin,
            SeqArg::Narayana => SequenceId::Narayana,
        };
        let form = match self.form {
            FormArg::Thabit => Form::Thabit,
            FormArg::Williams => Form::Williams,
        };
        let kind = match self.kind {
            KindArg::First => Kind::First,
            KindArg::Second => Kind::Second,
        };
        EquationFamily::new(seq, form, kind)
    }
}

impl RangeArgs {
    fn config(&self) -> Result<RunConfig, Error> {
        if self.precision_cap < 64 {
            return Err(Error::Config(format!(
                "precision cap {} is below 64 bits",
                self.precision_cap
            )));
        }
        let config = RunConfig {
            b_min: self.b_min,
            b_max: self.b_max,
            n_max: self.n_max,
            policy: PrecisionPolicy::with_cap(self.precision_cap),
        };
        config.validate()?;
        if config.b_max > paper::TABLE_B_MAX {
            eprintln!(
                "warning: no published tables beyond b = {}; bounds are recomputed for the larger bases",
                paper::TABLE_B_MAX
            );
        }
        Ok(config)
    }

    fn emit(&self, payload: &impl Serialize, summary: &str) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(payload)?;
        match &self.out {
            Some(path) => {
                fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
                print!("{summary}");
            }
            None => println!("{text}"),
        }
        Ok(())
    }
}

/// Exit status for a finished set of reports.
fn report_status(reports: &[PipelineReport], check_paper: bool) -> u8 {
    if reports.iter().any(PipelineReport::has_failures) {
        return EXIT_REDUCTION;
    }
    if check_paper {
        let mut status = 0;
        for r in reports {
            let c = r.check_paper();
            if !c.matches() {
                eprintln!("mismatch {}: missing {:?}, extra {:?}", c.family, c.missing, c.extra);
                status = EXIT_MISMATCH;
            }
        }
        return status;
    }
    0
}

fn solve(args: &FamilyArgs) -> anyhow::Result<u8> {
    let config = args.range.config()?;
    let report = pipeline::run_family(args.family(), &config)?;
    args.range.emit(&report, &report.summary())?;
    Ok(report_status(std::slice::from_ref(&report), args.range.check_paper))
}

fn all(args: &RangeArgs) -> anyhow::Result<u8> {
    let config = args.config()?;
    let reports = pipeline::run_all(&config)?;
    let summary: String = reports.iter().map(PipelineReport::summary).collect();
    args.emit(&reports, &summary)?;
    Ok(report_status(&reports, args.check_paper))
}

fn bound(args: &FamilyArgs) -> anyhow::Result<u8> {
    let config = args.range.config()?;
    let family = args.family();
    let mut rows = Vec::new();
    let mut summary = String::new();
    for b in config.b_min..=config.b_max {
        let d = family_bound_detail(family, b, config.policy.start_bits)?;
        summary += &format!("b={b:<3} n < {}  (S <= {})\n", d.n_bound, d.s_value.hi_decimal(3));
        rows.push(json!({
            "b": b,
            "family_bound": d.n_bound.to_string(),
            "matveev_constant_hi": d.matveev_constant.hi_decimal(3),
            "s_hi": d.s_value.hi_decimal(3),
        }));
    }
    let payload = json!({ "family": family, "equation": family.equation(), "per_b": rows });
    args.range.emit(&payload, &summary)?;
    Ok(0)
}

fn reduce(args: &FamilyArgs) -> anyhow::Result<u8> {
    let config = args.range.config()?;
    let family = args.family();
    let m = (config.b_min..=config.b_max)
        .map(|b| family_bound_detail(family, b, config.policy.start_bits).map(|d| d.n_bound))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .expect("nonempty range");
    let mut rows = Vec::new();
    let mut summary = format!("M = {m}\n");
    let mut status = 0;
    for b in config.b_min..=config.b_max {
        let setup = reduction_setup(family, b, config.policy.start_bits)?;
        match pipeline::reduce(&setup, &m, config.policy) {
            Ok(o) => {
                summary += &format!("b={b:<3} {:?} k={} n <= {}\n", o.method, o.convergent_index, o.new_bound);
                rows.push(json!({ "b": b, "reduction": pipeline::ReductionRecord::from(&o) }));
            }
            Err(e) => {
                status = EXIT_REDUCTION;
                summary += &format!("b={b:<3} failed: {e}\n");
                rows.push(json!({ "b": b, "reduction": null, "reduction_error": e.to_string() }));
            }
        }
    }
    let payload = json!({ "family": family, "matveev_bound": m.to_string(), "per_b": rows });
    args.range.emit(&payload, &summary)?;
    Ok(status)
}

fn search(args: &FamilyArgs) -> anyhow::Result<u8> {
    let config = args.range.config()?;
    let family = args.family();
    let n_max = match config.n_max {
        Some(n) => n,
        None => FamilyConstants::new(family.sequence, config.policy.start_bits)?.search_cutoff,
    };
    let found = enumerate_solutions(family, config.b_min, config.b_max, n_max)?;
    let records: Vec<_> = found.iter().map(pipeline::SolutionRecord::from).collect();
    let summary: String = found
        .iter()
        .map(|s| format!("({}, {}, {})  {}\n", s.n, s.b, s.l, s.value))
        .collect();
    let payload = json!({ "family": family, "n_max": n_max, "solutions": records });
    args.range.emit(&payload, &summary)?;
    if args.range.check_paper {
        let c = paper::compare(family, config.b_min, config.b_max, &found);
        if !c.matches() {
            eprintln!("mismatch {}: missing {:?}, extra {:?}", c.family, c.missing, c.extra);
            return Ok(EXIT_MISMATCH);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Bound(a) => bound(a),
        Command::Reduce(a) => reduce(a),
        Command::Search(a) => search(a),
        Command::All(a) => all(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Config(_)) => ExitCode::from(EXIT_CONFIG),
                Some(_) => ExitCode::from(EXIT_REDUCTION),
                None => ExitCode::FAILURE,
            }
        }
    }
}
