mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use ghwlab::code::{build_code, DEFAULT_CODEWORD_BUDGET};
use ghwlab::defining::{ClassRequest, DefiningSet, TracePattern};
use ghwlab::enumerate::gaussian_binomial;
use ghwlab::ghw::{
    code_report, verify_hierarchy, Limits, Method, Status, VerifyOptions, DEFAULT_WORK_BUDGET,
};
use ghwlab::sweep::{run_sweep, SweepCeilings, DEFAULT_SWEEP_WORK};
use ghwlab::Error;

use output::Format;

const EXIT_DISAGREE: u8 = 2;
const EXIT_PARAM: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "ghwlab",
    version,
    about = "Weight hierarchies of trace codes from defining sets",
    disable_help_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,

    /// Worker threads for the exhaustive searches.
    #[arg(long, env = "GHWLAB_THREADS", global = true)]
    threads: Option<usize>,

    /// Codeword enumeration cap (q^dim).
    #[arg(long, default_value_t = DEFAULT_CODEWORD_BUDGET, global = true)]
    budget: u128,

    /// Run oracle searches above the default work cap of 10^7 tests.
    #[arg(long, global = true)]
    force: bool,

    /// Omit timings and timestamps from JSON output.
    #[arg(long, global = true)]
    deterministic: bool,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print help.
    #[arg(long, action = ArgAction::Help, global = true)]
    help: Option<bool>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Code parameters and weight distribution.
    Code(ClassArgs),
    /// Weight hierarchy by the selected methods.
    Ghw {
        #[command(flatten)]
        class: ClassArgs,
        /// Comma-separated subset of support,dual,formula.
        #[arg(long, default_value = "support,dual,formula")]
        methods: String,
        /// Also run the exhaustive inequality checks.
        #[arg(long)]
        lemmas: bool,
    },
    /// All three methods plus inequality checks; nonzero exit on disagreement.
    Verify(ClassArgs),
    /// Verify every valid parameter tuple under the ceilings.
    Sweep {
        #[arg(long, default_value_t = 3)]
        max_q: u32,
        /// Cap on the flattened ambient dimension (m, m+k or 2m).
        #[arg(long, default_value_t = 8)]
        max_ambient: usize,
        /// Per-method work cap for each point (ignored with --force).
        #[arg(long, default_value_t = DEFAULT_SWEEP_WORK)]
        max_work: u128,
        #[arg(long)]
        lemmas: bool,
    },
    /// Print the defining set.
    Defset(ClassArgs),
}

#[derive(Args, Debug)]
struct ClassArgs {
    #[arg(long = "class", value_parser = clap::value_parser!(u8).range(1..=3))]
    class: u8,
    #[arg(short = 'q', default_value_t = 2)]
    q: u32,
    #[arg(short = 'm')]
    m: usize,
    #[arg(short = 'k')]
    k: Option<usize>,
    #[arg(short = 's')]
    s: Option<usize>,
    #[arg(short = 'l')]
    l: Option<usize>,
    /// Number of extra removed cosets (class 1).
    #[arg(short = 'h')]
    h: Option<usize>,
    /// theta_1..theta_h as comma-separated digit strings (class 1).
    #[arg(long, value_delimiter = ',')]
    thetas: Option<Vec<String>>,
    /// Trace pattern of the butterfly set (class 3).
    #[arg(long, default_value = "01")]
    pattern: String,
}

impl ClassArgs {
    fn request(&self) -> Result<ClassRequest, Error> {
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| Error::Parameter(format!("class {} requires -{flag}", self.class)))
        };
        Ok(match self.class {
            1 => ClassRequest::Class1 {
                q: self.q,
                m: self.m,
                k: need(self.k, "k")?,
                h: need(self.h, "h")?,
                thetas: self.thetas.clone(),
            },
            2 => ClassRequest::Class2 {
                q: self.q,
                m: self.m,
                s: need(self.s, "s")?,
                k: need(self.k, "k")?,
                l: need(self.l, "l")?,
            },
            _ => {
                if self.q != 2 {
                    return Err(Error::Parameter(format!(
                        "class 3 is binary; got -q {}",
                        self.q
                    )));
                }
                ClassRequest::Class3 {
                    m: self.m,
                    pattern: TracePattern::parse(&self.pattern)?,
                }
            }
        })
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Inconsistent(_) => EXIT_DISAGREE,
        _ => EXIT_PARAM,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_for(e))
}

fn print_estimate(set: &DefiningSet) -> Result<(), Error> {
    let code = build_code(set)?;
    let n = set.ambient().dim();
    let q = set.ambient().q();
    let per_r: Vec<u128> = (1..=code.code_dim())
        .map(|r| gaussian_binomial(n, r, q))
        .collect();
    let total = per_r.iter().fold(0u128, |acc, c| {
        acc.saturating_add(c.saturating_mul(set.len() as u128))
    });
    let strata = per_r
        .iter()
        .enumerate()
        .map(|(i, c)| format!("[{n},{}]_{q}={c}", i + 1))
        .collect::<Vec<_>>()
        .join(" ");
    eprintln!(
        "estimate: {strata}; x |D|={} -> {total} membership tests (cap {})",
        set.len(),
        DEFAULT_WORK_BUDGET
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_PARAM),
            };
        }
    };
    if cli.budget == 0 {
        return fail(&Error::Parameter("--budget must be at least 1".into()));
    }
    if cli.threads == Some(0) {
        return fail(&Error::Parameter("--threads must be at least 1".into()));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return fail(&Error::Parameter(format!("thread pool: {e}"))),
    };
    pool.install(|| run(&cli))
}

fn run(cli: &Cli) -> ExitCode {
    let limits = Limits {
        codeword_budget: cli.budget,
        work_budget: (!cli.force).then_some(DEFAULT_WORK_BUDGET),
    };
    let writer = output::Writer::new(cli.format, cli.out.clone());
    let result = match &cli.command {
        Command::Code(args) => args
            .request()
            .and_then(|r| r.build())
            .and_then(|set| code_report(&set, limits.codeword_budget))
            .and_then(|report| writer.code(&report).map(|_| 0)),
        Command::Defset(args) => args
            .request()
            .and_then(|r| r.build())
            .and_then(|set| writer.defset(&set.export()).map(|_| 0)),
        Command::Ghw {
            class,
            methods,
            lemmas,
        } => parse_methods(methods).and_then(|methods| {
            hierarchy(
                class,
                VerifyOptions {
                    methods,
                    lemma_checks: *lemmas,
                    limits,
                    deterministic: cli.deterministic,
                },
                &writer,
            )
        }),
        Command::Verify(class) => hierarchy(
            class,
            VerifyOptions {
                methods: Method::ALL.to_vec(),
                lemma_checks: true,
                limits,
                deterministic: cli.deterministic,
            },
            &writer,
        ),
        Command::Sweep {
            max_q,
            max_ambient,
            max_work,
            lemmas,
        } => {
            let opts = VerifyOptions {
                methods: Method::ALL.to_vec(),
                lemma_checks: *lemmas,
                limits,
                deterministic: cli.deterministic,
            };
            let ceilings = SweepCeilings {
                max_q: *max_q,
                max_ambient: *max_ambient,
                max_work: *max_work,
            };
            run_sweep(&ceilings, &opts).and_then(|report| {
                writer.sweep(&report)?;
                Ok(if report.failed() { EXIT_DISAGREE } else { 0 })
            })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(&e),
    }
}

fn parse_methods(list: &str) -> Result<Vec<Method>, Error> {
    let mut methods = Vec::new();
    for m in list.split(',').filter(|s| !s.trim().is_empty()) {
        let m = Method::parse(m)?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if methods.is_empty() {
        return Err(Error::Parameter(
            "--methods must name at least one method".into(),
        ));
    }
    Ok(methods)
}

fn hierarchy(args: &ClassArgs, opts: VerifyOptions, writer: &output::Writer) -> Result<u8, Error> {
    let set = args.request()?.build()?;
    if opts.methods.iter().any(|m| *m != Method::Formula) {
        print_estimate(&set)?;
    }
    let report = verify_hierarchy(&set, &opts)?;
    writer.hierarchy(&report)?;
    for r in &report.refused {
        eprintln!("refused: {r} (rerun with --force)");
    }
    Ok(match report.status {
        Status::Passed => 0,
        Status::Failed => EXIT_DISAGREE,
        Status::Incomplete => EXIT_BUDGET,
    })
}
