use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use h1lab::abelian::FinAbGroup;
use h1lab::lemma_lab::{CampaignConfig, Lemma, Sampler};
use h1lab::matgroup::{GModule, DEFAULT_CAP};
use h1lab_cli::commands::{cmd_bench, cmd_fuzz, cmd_h1, cmd_summand, cmd_sweep, parse, GroupInput, H1Options, SubgroupInput};
use h1lab_cli::report::RunReport;
use h1lab_cli::reproduce::{cmd_reproduce, ReproduceOptions};
use h1lab_cli::CliError;

#[derive(Parser)]
#[command(name = "h1lab", version, about = "First cohomology of finite matrix groups and divisibility checks for finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every step of the computation for the matrix-group family at p.
    Reproduce {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Lift the p <= 7 resource guard.
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        out: Output,
    },
    /// H^1 (and with --cyc the locally trivial part) of a matrix group.
    H1 {
        /// JSON group spec file, or one of H2, G2, N, G3 (with --p).
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: Option<u64>,
        /// JSON module file; defaults to the natural module.
        #[arg(long)]
        module: Option<PathBuf>,
        #[arg(long)]
        cyc: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether a subgroup of a finite abelian group is a direct summand.
    Summand {
        /// JSON file `{"invariant_factors": [...]}`.
        #[arg(long)]
        group: PathBuf,
        /// JSON file `{"generators": [[...], ...]}`.
        #[arg(long)]
        subgroup: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Seeded campaign checking one of the divisibility lemmas.
    Fuzz {
        /// JSON campaign config; overrides the individual flags.
        #[arg(long)]
        config: Option<PathBuf>,
        /// 2.2, 2.3 or 3.1
        #[arg(long)]
        lemma: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        max_order: u64,
        #[arg(long, default_value_t = 12)]
        n: u64,
        /// S1 or S2
        #[arg(long, default_value = "S2")]
        sampler: String,
        #[command(flatten)]
        out: Output,
    },
    /// Exhaustive sweep over all groups, subgroups and homomorphisms.
    Sweep {
        #[arg(long, default_value_t = 32)]
        max_order: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Time each stage of the reproduction run.
    Bench {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn read(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{what}: {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(RunReport, Option<PathBuf>), CliError> {
    match cli.command {
        Command::Reproduce { p, cap, allow_large, out } => Ok((
            cmd_reproduce(ReproduceOptions {
                p,
                cap,
                allow_large,
                timings: out.timings,
            })?,
            out.json,
        )),
        Command::H1 {
            group,
            p,
            module,
            cyc,
            cap,
            allow_large,
            out,
        } => {
            let text = fs::read_to_string(&group).ok();
            let group = GroupInput::from_arg(&group, text.as_deref(), p)?;
            let module: Option<GModule> = match module {
                Some(path) => Some(parse(&read(&path, "module")?, "module")?),
                None => None,
            };
            let opts = H1Options {
                cyc,
                cap,
                allow_large,
                timings: out.timings,
            };
            Ok((cmd_h1(&group, module.as_ref(), &opts)?, out.json))
        }
        Command::Summand { group, subgroup, out } => {
            let b: FinAbGroup = parse(&read(&group, "group")?, "group")?;
            let s: SubgroupInput = parse(&read(&subgroup, "subgroup")?, "subgroup")?;
            Ok((cmd_summand(&b, &s, out.timings)?, out.json))
        }
        Command::Fuzz {
            config,
            lemma,
            trials,
            seed,
            max_order,
            n,
            sampler,
            out,
        } => {
            let config: CampaignConfig = match config {
                Some(path) => parse(&read(&path, "config")?, "config")?,
                None => {
                    let lemma = lemma.ok_or_else(|| CliError::Input("lemma: required without --config".into()))?;
                    let lemma: Lemma = parse(&format!("\"{lemma}\""), "lemma")?;
                    let sampler: Sampler = parse(&format!("\"{sampler}\""), "sampler")?;
                    CampaignConfig {
                        lemma,
                        trials,
                        seed,
                        max_order,
                        n,
                        sampler,
                    }
                }
            };
            Ok((cmd_fuzz(&config, out.timings)?, out.json))
        }
        Command::Sweep { max_order, out } => Ok((cmd_sweep(max_order, out.timings)?, out.json)),
        Command::Bench { p, cap, allow_large, json } => Ok((cmd_bench(p, cap, allow_large)?, json)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, json)) => {
            let text = report.to_json();
            match json.as_deref() {
                Some(p) if p == Path::new("-") => print!("{text}"),
                Some(p) => {
                    if let Err(e) = fs::write(p, &text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                    print!("{}", report.summary());
                }
                None => print!("{}", report.summary()),
            }
            if let Some(t) = &report.timings_ms {
                for (stage, ms) in t {
                    println!("{ms:>10.1} ms  {stage}");
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
