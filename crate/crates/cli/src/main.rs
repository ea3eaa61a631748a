use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use z2z4q8::code::{check_hadamard, is_hadamard, kernel_by_swappers, rank_by_span_group, CodeGroup, RankKernelReport};
use z2z4q8::construct::{
    build_from_plan, build_with_dial, construct_for, existing_parameters, parse_dial, planned_cases, Construction,
    ConstructionPlan,
};
use z2z4q8::fixtures::{mixed_family, quaternionic_family};
use z2z4q8::io::{export_binary, read_generators, write_generators};
use z2z4q8::structure::{measure, standardize, verify_duplication, verify_table3, Shape};
use z2z4q8::Error;

#[derive(Parser)]
#[command(name = "z2z4q8", version, about = "Hadamard Z2Z4Q8-codes: construct, classify, measure, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Gens,
    Binary,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code with the given rank and kernel dimension, or from an explicit shape and dial.
    Construct {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        shape: Option<Shape>,
        #[arg(long)]
        tau: Option<usize>,
        /// Comma-separated component indices that get the ab-like value.
        #[arg(long)]
        dial: Option<String>,
        /// Plan file with key=value lines.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long = "out")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "gens")]
        format: Format,
    },
    /// Print the shape and structural parameters of a generator file.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print the kernel dimension and rank of a generator file.
    Measure {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run every consistency check on a generator file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Write the code as generators or as its sorted binary codewords.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "binary")]
        format: Format,
    },
    /// List the allowable (k, r) pairs at length 2^m.
    Table {
        #[arg(long)]
        m: usize,
    },
    /// Write the worked example codes into a directory.
    SeedCorpus {
        #[arg(long = "out")]
        out: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotAllowable { .. } => 2,
            Error::Infeasible(_) | Error::Existence(_) => 3,
            Error::Parse(_) | Error::SpaceMismatch(..) | Error::LengthMismatch(..) => 4,
            Error::NotHadamard(_) => 5,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 64, message: message.into() }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 1, message: format!("{}: {e}", path.display()) }
}

fn load(path: &Path) -> Result<CodeGroup, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let (space, generators) = read_generators(&text)?;
    Ok(CodeGroup::closure(space, &generators)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(group: &CodeGroup, format: Format, comments: &[String]) -> Result<String, Failure> {
    Ok(match format {
        Format::Gens => {
            let mut text: String = comments.iter().map(|c| format!("# {c}\n")).collect();
            text.push_str(&write_generators(group.space(), group.generators()));
            text
        }
        Format::Binary => export_binary(&check_hadamard(group)?),
    })
}

fn construction_report(built: &Construction) -> Vec<String> {
    let m = &built.measurement;
    let dial: Vec<String> = built.plan.dial.iter().map(ToString::to_string).collect();
    vec![
        m.report.summary_line(),
        format!("k={} r={} case={}", m.k, m.r, m.case),
        format!("plan shape={} tau={} dial={}", built.plan.shape, built.plan.tau, dial.join(",")),
    ]
}

#[allow(clippy::too_many_arguments)]
fn construct(
    m: Option<usize>,
    k: Option<usize>,
    r: Option<usize>,
    shape: Option<Shape>,
    tau: Option<usize>,
    dial: Option<String>,
    plan: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), Failure> {
    let built = if let Some(path) = plan {
        let text = fs::read_to_string(&path).map_err(|e| io_failure(&path, e))?;
        build_from_plan(&text.parse::<ConstructionPlan>()?)?
    } else if let Some(shape) = shape {
        let m = m.ok_or_else(|| usage("--shape needs --m"))?;
        let tau = tau.ok_or_else(|| usage("--shape needs --tau"))?;
        let dial = parse_dial(dial.as_deref().unwrap_or(""))?;
        let built = build_with_dial(m, shape, tau, dial)?;
        if let (Some(k), Some(r)) = (k, r) {
            if (built.measurement.k, built.measurement.r) != (k, r) {
                return Err(Error::Infeasible(format!(
                    "dial gives k={} r={}, not k={k} r={r}",
                    built.measurement.k, built.measurement.r
                ))
                .into());
            }
        }
        built
    } else {
        match (m, k, r) {
            (Some(m), Some(k), Some(r)) => construct_for(m, k, r)?,
            _ => return Err(usage("construct needs --m, --k and --r, or --shape, or --plan")),
        }
    };
    let report = construction_report(&built);
    let text = render(&built.group, format, &report)?;
    if out.is_some() {
        for line in &report {
            println!("{line}");
        }
    }
    emit(out.as_deref(), &text)
}

fn verify(input: &Path) -> Result<(), Failure> {
    let group = load(input)?;
    let code = group.gray_code()?;
    if let Err(failure) = is_hadamard(&code) {
        println!("hadamard=fail {failure}");
        return Err(Error::NotHadamard(failure).into());
    }
    println!("hadamard=pass");
    let mut ok = true;
    let mut line = |name: &str, result: Result<(), String>| {
        match result {
            Ok(()) => println!("{name}=pass"),
            Err(e) => {
                ok = false;
                println!("{name}=fail {e}");
            }
        }
    };
    let report = standardize(&group)?;
    line("table", verify_table3(&report, group.space()));
    line("duplication", verify_duplication(&report));
    let oracle = RankKernelReport::compute(&group)?;
    let swappers = kernel_by_swappers(&group);
    line(
        "kernel",
        (swappers.dimension() == oracle.k && kernel_matches(&group, &swappers)?)
            .then_some(())
            .ok_or_else(|| "swapper kernel differs from the codeword kernel".to_string()),
    );
    line(
        "rank",
        (rank_by_span_group(&group)? == oracle.r)
            .then_some(())
            .ok_or_else(|| "span group rank differs from elimination".to_string()),
    );
    let measured = measure(&group)?;
    line(
        "case",
        ((measured.k, measured.r) == (oracle.k, oracle.r) && measured.prediction.admits(oracle.k, oracle.r))
            .then_some(())
            .ok_or_else(|| format!("case {} predicts {}", measured.case, measured.prediction)),
    );
    if ok {
        Ok(())
    } else {
        Err(Failure { code: 1, message: "verification failed".into() })
    }
}

fn kernel_matches(group: &CodeGroup, swappers: &z2z4q8::code::Kernel) -> Result<bool, Failure> {
    let code = group.gray_code()?;
    Ok(z2z4q8::code::kernel_bruteforce(&code).words() == swappers.words())
}

fn table(m: usize) -> Result<(), Failure> {
    let mut rows: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (shape, _, tau) in existing_parameters(m) {
        for case in planned_cases(m, shape, tau)? {
            rows.entry((case.k, case.r))
                .or_default()
                .push(format!("{shape}/tau={tau}/{}", case.case));
        }
    }
    println!("m={m} n={}", 1usize << m);
    for ((k, r), sources) in rows {
        println!("k={k} r={r} via={}", sources.join(","));
    }
    Ok(())
}

fn seed_corpus(out: &Path) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    for example in quaternionic_family().into_iter().chain(mixed_family()) {
        let mut text = format!("# expect k={} r={}\n", example.k, example.r);
        text.push_str(&write_generators(example.space, &example.generators));
        let path = out.join(format!("{}.gens", example.name));
        fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct { m, k, r, shape, tau, dial, plan, out, format } => {
            construct(m, k, r, shape, tau, dial, plan, out, format)
        }
        Command::Classify { input } => {
            let group = load(&input)?;
            check_hadamard(&group)?;
            println!("{}", standardize(&group)?.summary_line());
            Ok(())
        }
        Command::Measure { input } => {
            let group = load(&input)?;
            check_hadamard(&group)?;
            let m = measure(&group)?;
            println!("k={} r={}", m.k, m.r);
            println!("case={} prediction={}", m.case, m.prediction);
            Ok(())
        }
        Command::Verify { input } => verify(&input),
        Command::Export { input, out, format } => {
            let group = load(&input)?;
            emit(out.as_deref(), &render(&group, format, &[])?)
        }
        Command::Table { m } => table(m),
        Command::SeedCorpus { out } => seed_corpus(&out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
