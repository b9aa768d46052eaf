use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bouquet_covers::census::{CensusQuery, DEFAULT_BUDGET, DEFAULT_DMAX};
use bouquet_covers::cover::to_json_value;
use bouquet_covers::verify::{run_all, VerifyConfig};
use bouquet_covers::{
    build_cover, criterion, enumerate_covers, find_prime_normal_cover, from_json, lift_check,
    min_nonlift_degree, parse_family, parse_word, to_dot, CoverGraph, Error, FamilySpec, FreeWord,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "bouquet",
    version,
    about = "Lift words in free groups to finite covers of a bouquet of circles"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for census and verify (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a word lifts to a closed loop, by criterion and by traversal.
    Lift {
        #[command(flatten)]
        word: WordArgs,
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// Find a p-sheeted normal cover the word lifts to.
    FindCover {
        #[command(flatten)]
        word: WordArgs,
        /// A prime.
        #[arg(short)]
        p: u64,
        /// Generator pair the construction uses, as "u,v".
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
    },
    /// List covers of a given degree.
    Census {
        /// Rank of the free group.
        #[arg(short)]
        n: usize,
        /// Number of sheets.
        #[arg(short)]
        d: usize,
        /// Only connected covers, one per subgroup.
        #[arg(long)]
        connected: bool,
        /// Only normal covers.
        #[arg(long)]
        normal: bool,
        /// One cover per isomorphism class.
        #[arg(long)]
        up_to_iso: bool,
        /// Search budget.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Smallest degree of a connected cover the word fails to lift to.
    Rmin {
        #[command(flatten)]
        word: WordArgs,
        /// Largest degree to search.
        #[arg(long, default_value_t = DEFAULT_DMAX)]
        dmax: usize,
        /// Search budget.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Run the property suites.
    Verify {
        /// Smaller corpora.
        #[arg(long)]
        quick: bool,
    },
    /// Print a cover as JSON, cycle notation, or DOT.
    Export {
        /// Rank of the free group.
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        cover: CoverArgs,
    },
}

#[derive(Args)]
struct WordArgs {
    /// Rank of the free group.
    #[arg(short)]
    n: usize,
    /// Word such as "a1^2 a2^-1"; "-" reads it from stdin.
    #[arg(short, allow_hyphen_values = true)]
    w: String,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CoverArgs {
    /// Family such as "M:1,2^3@7" or "L:1,2".
    #[arg(short = 'f')]
    family: Option<String>,
    /// Cover as a JSON file.
    #[arg(short = 'F')]
    file: Option<PathBuf>,
}

fn parse_pair(text: &str) -> Result<(usize, usize), String> {
    let (u, v) = text.split_once(',').ok_or("expected \"u,v\"")?;
    let u = u.trim().parse().map_err(|e| format!("{e}"))?;
    let v = v.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((u, v))
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 4,
            Error::Inconsistent(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((out, code)) => {
            let mut stdout = io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush());
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Lift { word, cover } => lift(cli.format, word, cover),
        Command::FindCover { word, p, pair } => find_cover(cli.format, word, *p, *pair),
        Command::Census {
            n,
            d,
            connected,
            normal,
            up_to_iso,
            budget,
        } => census(
            cli.format,
            CensusQuery {
                rank: *n,
                degree: *d,
                require_connected: *connected,
                require_normal: *normal,
                up_to_iso: *up_to_iso,
                budget: *budget,
            },
        ),
        Command::Rmin { word, dmax, budget } => rmin(cli.format, word, *dmax, *budget),
        Command::Verify { quick } => verify(cli.format, *quick),
        Command::Export { n, cover } => export(cli.format, *n, cover),
    }
}

fn read_word(args: &WordArgs) -> Result<FreeWord, Failure> {
    let text = if args.w == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| usage(format!("reading stdin: {e}")))?;
        let line = buf.strip_suffix('\n').unwrap_or(&buf);
        line.strip_suffix('\r').unwrap_or(line).to_string()
    } else {
        args.w.clone()
    };
    Ok(parse_word(&text, args.n)?)
}

fn read_cover(rank: usize, args: &CoverArgs) -> Result<(CoverGraph, Option<FamilySpec>), Failure> {
    if let Some(text) = &args.family {
        let spec = parse_family(text, rank)?;
        return Ok((build_cover(&spec), Some(spec)));
    }
    let path = args
        .file
        .as_ref()
        .ok_or_else(|| usage("one of -f or -F is required"))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let cover = from_json(&text)?;
    if cover.rank() != rank {
        return Err(Error::RankMismatch {
            expected: rank,
            found: cover.rank(),
        }
        .into());
    }
    Ok((cover, None))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn lines(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().map(|v| v + "\n").collect()
}

fn lift(format: Format, word: &WordArgs, cover: &CoverArgs) -> Outcome {
    let w = read_word(word)?;
    let (c, spec) = read_cover(word.n, cover)?;
    let report = lift_check(&w, &c, c.base())?;
    let by_criterion = spec.as_ref().map(|s| criterion(&w, s)).transpose()?;
    if by_criterion.is_some_and(|b| b != report.closed) {
        let dump = json!({
            "word": w.to_string(),
            "family": spec.map(|s| s.to_string()),
            "cover": to_json_value(&c),
            "criterion": by_criterion,
            "traversal": report,
        });
        return Err(Failure {
            code: 3,
            message: format!("criterion and traversal disagree; please report this:\n{dump}"),
        });
    }
    let out = match format {
        Format::Json => lines([json!({
            "word": w.to_string(),
            "family": spec.map(|s| s.to_string()),
            "lifts": report.closed,
            "criterion": by_criterion,
            "traversal": report.closed,
            "start_sheet": report.start_sheet,
            "end_sheet": report.end_sheet,
        })
        .to_string()]),
        Format::Text => {
            let crit = by_criterion.map_or("n/a", yes_no);
            format!(
                "lifts: {} (criterion: {crit}, traversal: {}, sheet {} -> {})\n",
                yes_no(report.closed),
                yes_no(report.closed),
                report.start_sheet,
                report.end_sheet
            )
        }
        Format::Dot => to_dot(&c),
    };
    Ok((out, if report.closed { 0 } else { 1 }))
}

fn find_cover(format: Format, word: &WordArgs, p: u64, pair: Option<(usize, usize)>) -> Outcome {
    let w = read_word(word)?;
    let found = find_prime_normal_cover(&w, p, pair)?;
    let out = match format {
        Format::Json => lines([json!({
            "word": w.to_string(),
            "p": p,
            "pair": [found.pair.0, found.pair.1],
            "family": found.spec.to_string(),
            "spec": found.spec,
            "rationale": found.rationale,
            "cover": to_json_value(&found.cover),
            "lifts": true,
        })
        .to_string()]),
        Format::Text => format!("family: {}\nlifts: yes\n", found.spec),
        Format::Dot => to_dot(&found.cover),
    };
    Ok((out, 0))
}

fn cycles(c: &CoverGraph) -> String {
    c.perms()
        .iter()
        .enumerate()
        .map(|(i, p)| format!("a{}={p}", i + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn census(format: Format, q: CensusQuery) -> Outcome {
    let covers = enumerate_covers(&q)?;
    let out = match format {
        Format::Json => {
            let summary =
                json!({ "summary": { "n": q.rank, "degree": q.degree, "count": covers.len() } });
            lines(
                covers
                    .iter()
                    .map(|c| to_json_value(c).to_string())
                    .chain([summary.to_string()]),
            )
        }
        Format::Text => lines(
            covers
                .iter()
                .map(cycles)
                .chain([format!("{} covers", covers.len())]),
        ),
        Format::Dot => covers.iter().map(to_dot).collect(),
    };
    Ok((out, 0))
}

fn rmin(format: Format, word: &WordArgs, dmax: usize, budget: u64) -> Outcome {
    let w = read_word(word)?;
    let found = min_nonlift_degree(&w, dmax, budget)?;
    let out = match format {
        Format::Json => lines([json!({
            "word": w.to_string(),
            "r": found.r,
            "witness": found.witness.as_ref().map(to_json_value),
        })
        .to_string()]),
        Format::Text => match (&found.r, &found.witness) {
            (Some(r), Some(c)) => format!("r = {r}\nwitness: {}\n", cycles(c)),
            _ => "r = none (the word lifts to every cover)\n".to_string(),
        },
        Format::Dot => match &found.witness {
            Some(c) => to_dot(c),
            None => return Err(usage("the identity has no witness cover to draw")),
        },
    };
    Ok((out, 0))
}

fn verify(format: Format, quick: bool) -> Outcome {
    let reports = run_all(&VerifyConfig { quick });
    let ok = reports.iter().all(|r| r.passed());
    let out = match format {
        Format::Json => lines(reports.iter().map(|r| {
            let mut v = serde_json::to_value(r).expect("report serializes");
            v["passed"] = Value::Bool(r.passed());
            v.to_string()
        })),
        Format::Text | Format::Dot => {
            let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut s = String::new();
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                s += &format!(
                    "{status}  {:<width$}  {:>12} checked  {} violations\n",
                    r.name, r.checked, r.violations
                );
                if let Some(v) = &r.first_violation {
                    s += &format!("      first violation: {v}\n");
                }
            }
            s
        }
    };
    Ok((out, if ok { 0 } else { 3 }))
}

fn export(format: Format, n: usize, cover: &CoverArgs) -> Outcome {
    let (c, _) = read_cover(n, cover)?;
    let out = match format {
        Format::Json => lines([to_json_value(&c).to_string()]),
        Format::Text => lines([format!(
            "degree {} base {}: {}",
            c.degree(),
            c.base(),
            cycles(&c)
        )]),
        Format::Dot => to_dot(&c),
    };
    Ok((out, 0))
}
