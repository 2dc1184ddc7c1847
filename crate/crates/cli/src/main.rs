use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use malle_cli::config::{Caps, Format, RunConfig};
use malle_cli::report::{to_csv, CountMode, EulerKind, Family, Level, Payload, Report};
use malle_cli::{commands, exit, selftest, CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "malle", version, about = "Exponents, tuple counts and Euler products for the G_n counterexample family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Worker threads for the parallel sums (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format; CSV only for count and predict sweeps.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = Caps::default().elements, global = true)]
    element_cap: u64,
    #[arg(long, default_value_t = Caps::default().tuples, global = true)]
    tuple_cap: u64,
    #[arg(long, default_value_t = Caps::default().sieve_limit, global = true)]
    sieve_cap: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Naive exponent, alpha and the counterexample verdict for G_n.
    Counterexample {
        #[arg(long)]
        n: usize,
        /// Skip the enumeration cross-checks (any n).
        #[arg(long)]
        closed_form: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Exact hom/epi/tuple counts with conductor at most X.
    Count {
        #[arg(long)]
        n: usize,
        /// One or more bounds, as decimal integers.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<String>,
        #[arg(long, value_enum, default_value = "hom")]
        mode: CountMode,
        /// Tuple stream file, one tuple per line ("index:v" pairs).
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Main term of the hom count, with the truncated constant.
    Predict {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<String>,
        #[arg(long)]
        prime_bound: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Truncated Euler products: c0, the mass constant, or its tame part.
    Euler {
        #[arg(long, value_enum)]
        kind: EulerKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prime_bound: u64,
        #[arg(long, value_enum, default_value = "gn")]
        family: Family,
        /// Which identification of Z/3 with H (1 or 2).
        #[arg(long, default_value_t = 1)]
        identification: u32,
        /// Evaluate the mass constant for even |G| anyway; the report is stamped.
        #[arg(long)]
        allow_even: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the exact-identity suite.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
        #[command(flatten)]
        common: Common,
    },
    /// Describe a family member or a group loaded from a JSON descriptor.
    Group {
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        from: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

type Job = Box<dyn FnOnce(&RunConfig) -> CliResult<Payload>>;

fn base_config(name: &str, common: &Common) -> RunConfig {
    let mut cfg = RunConfig::new(name);
    cfg.threads = common.threads;
    cfg.format = common.format;
    cfg.output_path = common.out.as_ref().map(|p| p.display().to_string());
    cfg.caps = Caps { elements: common.element_cap, tuples: common.tuple_cap, sieve_limit: common.sieve_cap };
    cfg
}

fn run(command: Command) -> CliResult<(Report, Option<PathBuf>)> {
    let start = Instant::now();
    let (cfg, out, payload): (RunConfig, Option<PathBuf>, Job) =
        match command {
            Command::Counterexample { n, closed_form, common } => {
                let mut cfg = base_config("counterexample", &common);
                cfg.n = Some(n);
                (cfg, common.out, Box::new(move |c| commands::counterexample(c, closed_form)))
            }
            Command::Count { n, x, mode, dump, common } => {
                let mut cfg = base_config("count", &common);
                cfg.n = Some(n);
                cfg.x = x;
                (cfg, common.out, Box::new(move |c| commands::count(c, mode, dump.as_deref())))
            }
            Command::Predict { n, x, prime_bound, common } => {
                let mut cfg = base_config("predict", &common);
                cfg.n = Some(n);
                cfg.x = x;
                cfg.prime_bound = Some(prime_bound);
                (cfg, common.out, Box::new(commands::predict))
            }
            Command::Euler { kind, n, prime_bound, family, identification, allow_even, common } => {
                let mut cfg = base_config("euler", &common);
                cfg.n = Some(n);
                cfg.prime_bound = Some(prime_bound);
                cfg.identification = identification;
                (cfg, common.out, Box::new(move |c| commands::euler(c, kind, family, allow_even)))
            }
            Command::Selftest { level, common } => {
                let cfg = base_config("selftest", &common);
                (cfg, common.out, Box::new(move |_| Ok(Payload::Selftest(selftest::selftest(level)))))
            }
            Command::Group { family, n, from, common } => {
                let mut cfg = base_config("group", &common);
                cfg.n = n;
                (cfg, common.out, Box::new(move |c| commands::group(c, family, from.as_deref())))
            }
        };
    cfg.validate()?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let payload = payload(&cfg)?;
    Ok((Report::new(cfg, payload, start.elapsed().as_secs_f64()), out))
}

fn render(report: &Report) -> CliResult<String> {
    match report.config.format {
        Format::Json => Ok(report.to_json()? + "\n"),
        Format::Csv => to_csv(&report.payload)
            .ok_or_else(|| CliError::Usage(format!("{} has no CSV form; use --format json", report.config.command))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli.command).and_then(|(report, out)| {
        let text = render(&report)?;
        match out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(report)
    });
    match outcome {
        Ok(report) => match &report.payload {
            Payload::Selftest(s) if !s.passed => {
                for c in s.checks.iter().filter(|c| !c.passed) {
                    eprintln!("FAILED: {}: {}", c.name, c.detail);
                }
                ExitCode::from(exit::SELFTEST_FAILED)
            }
            _ => ExitCode::from(exit::SUCCESS),
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
