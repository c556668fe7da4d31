//! `koornwinder` command-line front end.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use koornwinder::report::{
    family_list, operator_section, pearson_derive, pearson_verify, polynomials, raw_section, report_all,
    weight_section, Format, PairFile, Report, Run, RunConfig,
};
use koornwinder::pearson::raw_system;
use koornwinder::quadrature::orthocheck;

#[derive(Parser, Debug)]
#[command(name = "koornwinder", version, about = "Koornwinder polynomials, Pearson equations and their operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// JSON file with any of the flag keys; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    family: Option<String>,
    /// Parameter as name=value, value an integer or p/q. Repeatable.
    #[arg(long = "param", global = true, num_args = 1.., value_name = "K=V")]
    params: Vec<String>,
    #[arg(long, global = true)]
    nmax: Option<usize>,
    /// Working precision in decimal digits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long = "tol", global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Registered families.
    Family {
        #[command(subcommand)]
        action: FamilyAction,
    },
    /// Coefficient tables of P(n,m) for n <= nmax.
    Build,
    /// Derive or verify Pearson pairs.
    Pearson {
        #[command(subcommand)]
        action: PearsonAction,
    },
    /// Operator classification.
    Operator {
        #[command(subcommand)]
        action: OperatorAction,
    },
    /// Numeric orthogonality check.
    Orthocheck,
    /// Full report.
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyAction {
    List,
}

#[derive(Subcommand, Debug)]
enum PearsonAction {
    Derive,
    Verify {
        /// Pair file: {"form": "gradient", "matrix": [..4], "rhs": [..2]}
        /// or {"form": "divergence", "phi": [..3], "psi": [..2]}.
        #[arg(long)]
        pair: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum OperatorAction {
    Classify,
}

#[derive(Subcommand, Debug)]
enum ReportAction {
    All,
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "json" => Ok(Format::Json),
        "markdown" | "md" => Ok(Format::Markdown),
        _ => Err(format!("unknown format '{s}' (json or markdown)")),
    }
}

fn config(opts: &Opts) -> anyhow::Result<RunConfig> {
    let mut cfg = match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(f) = &opts.family {
        cfg.family = f.clone();
    }
    let mut given = BTreeMap::new();
    for kv in &opts.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| anyhow!("--param expects name=value, got '{kv}'"))?;
        given.insert(k.trim().to_string(), v.trim().to_string());
    }
    cfg.params.extend(given);
    if let Some(n) = opts.nmax {
        cfg.nmax = n;
    }
    if let Some(p) = opts.precision {
        cfg.precision = p;
    }
    if let Some(t) = opts.tol {
        cfg.tolerance = t;
    }
    if let Some(o) = &opts.out {
        cfg.out = Some(o.clone());
    }
    if let Some(f) = opts.format {
        cfg.format = f;
    }
    Ok(cfg)
}

fn emit(text: &str, out: Option<&str>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {path}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn family_list_text(format: Format) -> String {
    let list = family_list();
    match format {
        Format::Json => serde_json::to_string_pretty(&list).expect("serializable") + "\n",
        Format::Markdown => {
            let mut s = String::from("| family | weight | defaults |\n|---|---|---|\n");
            for f in list {
                let d: Vec<String> = f.defaults.iter().map(|(k, v)| format!("{k}={v}")).collect();
                s += &format!("| {} | `{}` | {} |\n", f.name, f.weight, d.join(", "));
            }
            s
        }
    }
}

fn section_report(run: &Run, command: &Command) -> anyhow::Result<Report> {
    let sys = run.family.system(&run.params)?;
    let mut rep = Report::new(run);
    let sec = &mut rep.sections;
    match command {
        Command::Build => {
            sec.weight = Some(weight_section(run.family, &sys));
            sec.polynomials = Some(polynomials(&sys, run.nmax)?);
        }
        Command::Pearson { action: PearsonAction::Derive } => {
            sec.weight = Some(weight_section(run.family, &sys));
            sec.raw_system = Some(raw_section(&raw_system(&sys)?));
            sec.pearson = Some(pearson_derive(run.family, &run.params, &sys, run.precision)?);
        }
        Command::Pearson { action: PearsonAction::Verify { pair } } => {
            let text = fs::read_to_string(pair).with_context(|| format!("cannot read pair file {}", pair.display()))?;
            let file: PairFile =
                serde_json::from_str(&text).with_context(|| format!("invalid pair file {}", pair.display()))?;
            sec.verify = Some(pearson_verify(run.family, &run.params, &sys, &file)?);
        }
        Command::Operator { .. } => {
            sec.operator = Some(operator_section(run.family, &run.params, &sys, run.nmax)?.0);
        }
        Command::Orthocheck => {
            sec.orthocheck = Some(orthocheck(&sys, run.nmax.max(1), run.precision, run.tolerance)?);
        }
        Command::Report { .. } => return Ok(report_all(run)?),
        Command::Family { .. } => unreachable!("handled before resolving a run"),
    }
    Ok(rep)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = config(&cli.opts)?;
    if let Command::Family { action: FamilyAction::List } = cli.command {
        return emit(&family_list_text(cfg.format), cfg.out.as_deref());
    }
    let run = cfg.resolve()?;
    let rep = section_report(&run, &cli.command)?;
    emit(&rep.render(cfg.format), cfg.out.as_deref())
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: usage: {}", one_line(first.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e.downcast_ref::<koornwinder::Error>() {
                Some(koornwinder::Error::Config(_))
                | Some(koornwinder::Error::InvalidParameter(_))
                | Some(koornwinder::Error::UnknownFamily(_))
                | Some(koornwinder::Error::Parse(_)) => "config",
                Some(_) => "compute",
                None => "io",
            };
            eprintln!("error: {kind}: {}", one_line(&format!("{e:#}")));
            ExitCode::from(1)
        }
    }
}
