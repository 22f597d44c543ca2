use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use matchdist::exact::switch_set;
use matchdist::{
    bottleneck, candidate_lines, format_number, horizontal_cost, matching_distance_with, parse_module, parse_number,
    restrict_module, scan, vertical_cost, write_csv, CandidateOptions, DistanceResult, Error, ExactLine, ExactModule,
    Extended, GridSpec, Line, Point, Rational, SwitchPolicy,
};
use serde::Serialize;

/// Exact matching distance between two-parameter persistence modules.
#[derive(Parser)]
#[command(name = "matchdist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact matching distance, printed as a fraction and a float.
    Dist {
        a: PathBuf,
        b: PathBuf,
        /// Print a JSON result document.
        #[arg(long)]
        json: bool,
        /// Use every switch-point formula instead of the pruned set.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Bottleneck distance between the restrictions to one line.
    Bottleneck {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        line: LineArgs,
    },
    /// Barcode of a module restricted to one line.
    Restrict {
        a: PathBuf,
        #[command(flatten)]
        line: LineArgs,
    },
    /// Switch points of a pair of modules.
    Switchpoints {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        exhaustive: bool,
    },
    /// Candidate lines as `m1 m2 b1 b2`.
    Lines {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        exhaustive: bool,
    },
    /// Limit cost of lines through `x = x0` turning vertical.
    Vcost {
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "x", allow_hyphen_values = true)]
        x0: String,
    },
    /// Limit cost of lines through `y = y0` turning horizontal.
    Hcost {
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "y", allow_hyphen_values = true)]
        y0: String,
    },
    /// Floating-point grid sweep over line angle and offset, as CSV.
    Scan {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 100)]
        theta_steps: usize,
        #[arg(long, default_value_t = 100)]
        offset_steps: usize,
        /// Offset interval `low,high`; derived from the modules when absent.
        #[arg(long, allow_hyphen_values = true)]
        offset_range: Option<String>,
        /// Write the CSV here and print only the maximum.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LineArgs {
    /// Line through two points, `x1,y1,x2,y2`.
    #[arg(long, allow_hyphen_values = true)]
    through: Option<String>,
    /// Line with direction `(m1, m2)` through `(b1, b2)`, `m1,m2,b1,b2`.
    #[arg(long, allow_hyphen_values = true)]
    line: Option<String>,
}

enum Failure {
    Usage(String),
    Io(String),
    Parse(String),
    InvalidLine(String),
    BothTrivial,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Parse(_) => 2,
            Failure::InvalidLine(_) => 3,
            Failure::BothTrivial => 4,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BothTrivial => Failure::BothTrivial,
            Error::NonPositiveDirection => Failure::InvalidLine(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_module(path: &Path) -> Result<ExactModule, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parse_module(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn number(text: &str, what: &str) -> Result<Rational, Failure> {
    parse_number(text.trim()).ok_or_else(|| Failure::Usage(format!("invalid {what} `{text}`")))
}

fn numbers(text: &str, count: usize) -> Option<Vec<Rational>> {
    let vals: Option<Vec<Rational>> = text.split(',').map(|t| parse_number(t.trim())).collect();
    vals.filter(|v| v.len() == count)
}

fn line_from(args: &LineArgs) -> Result<ExactLine, Failure> {
    let (spec, text) = match (&args.through, &args.line) {
        (Some(t), _) => ("--through", t),
        (None, Some(l)) => ("--line", l),
        (None, None) => return Err(Failure::Usage("a line is required".into())),
    };
    let v = numbers(text, 4)
        .ok_or_else(|| Failure::InvalidLine(format!("{spec} expects four comma-separated numbers, got `{text}`")))?;
    let line = if spec == "--through" {
        let (p, q) = (Point::new(v[0].clone(), v[1].clone()), Point::new(v[2].clone(), v[3].clone()));
        matchdist::line_through(&p, &q)
    } else {
        Line::normalize((v[0].clone(), v[1].clone()), &Point::new(v[2].clone(), v[3].clone())).ok()
    };
    line.ok_or_else(|| Failure::InvalidLine(format!("{spec} {text} does not give a line of positive slope")))
}

fn options(exhaustive: bool) -> CandidateOptions<Rational> {
    let policy = if exhaustive { SwitchPolicy::Exhaustive } else { SwitchPolicy::Pruned };
    CandidateOptions { policy, ..CandidateOptions::default() }
}

fn render(v: &Extended<Rational>) -> String {
    match v {
        Extended::Finite(x) => format_number(x),
        Extended::Infinite => "inf".into(),
    }
}

fn float(v: &Extended<Rational>) -> Option<f64> {
    v.is_finite().then(|| v.as_f64())
}

fn value_line(v: &Extended<Rational>) -> String {
    format!("{} {}", render(v), v.as_f64())
}

#[derive(Serialize)]
struct LineDoc {
    m1: String,
    m2: String,
    b1: String,
    b2: String,
}

impl LineDoc {
    fn new(l: &ExactLine) -> Self {
        LineDoc { m1: format_number(l.m1()), m2: format_number(l.m2()), b1: format_number(l.b1()), b2: format_number(l.b2()) }
    }
}

#[derive(Serialize)]
struct RealizerDoc {
    s: String,
    t: String,
    delta: u8,
}

#[derive(Serialize)]
struct WitnessDoc {
    pairs: Vec<(usize, usize)>,
    unmatched_left: Vec<usize>,
    unmatched_right: Vec<usize>,
    bottleneck: String,
    realizer: Option<RealizerDoc>,
}

#[derive(Serialize)]
struct ResultDocument {
    value: String,
    value_float: Option<f64>,
    witness_line: Option<LineDoc>,
    witness: Option<WitnessDoc>,
    candidate_count: usize,
    elapsed_ms: f64,
}

impl ResultDocument {
    fn new(r: &DistanceResult<Rational>, elapsed_ms: f64) -> Self {
        ResultDocument {
            value: render(&r.value),
            value_float: float(&r.value),
            witness_line: r.witness_line.as_ref().map(LineDoc::new),
            witness: r.witness.as_ref().map(|w| WitnessDoc {
                pairs: w.pairs.clone(),
                unmatched_left: w.unmatched_left.clone(),
                unmatched_right: w.unmatched_right.clone(),
                bottleneck: render(&w.cost),
                realizer: w.realizer.as_ref().map(|r| RealizerDoc {
                    s: format_number(&r.s),
                    t: format_number(&r.t),
                    delta: r.delta,
                }),
            }),
            candidate_count: r.candidate_count,
            elapsed_ms,
        }
    }
}

fn dist(a: &Path, b: &Path, json: bool, exhaustive: bool, out: &mut impl Write) -> Outcome {
    let (m, n) = (read_module(a)?, read_module(b)?);
    let start = Instant::now();
    let r = matching_distance_with(&m, &n, &options(exhaustive));
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if json {
        let doc = ResultDocument::new(&r, elapsed_ms);
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).map_err(|e| Failure::Io(e.to_string()))?)?;
        return Ok(());
    }
    writeln!(out, "{}", value_line(&r.value))?;
    if let Some(l) = &r.witness_line {
        writeln!(out, "witness line: {l}")?;
    }
    if let Some(real) = r.witness.as_ref().and_then(|w| w.realizer.as_ref()) {
        writeln!(out, "realizer: s={} t={} delta={}", format_number(&real.s), format_number(&real.t), real.delta)?;
    }
    writeln!(out, "candidates: {}", r.candidate_count)?;
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    match cli.command {
        Command::Dist { a, b, json, exhaustive } => dist(&a, &b, json, exhaustive, out),
        Command::Bottleneck { a, b, line } => {
            let (m, n) = (read_module(&a)?, read_module(&b)?);
            let l = line_from(&line)?;
            let w = bottleneck(&restrict_module(&m, &l), &restrict_module(&n, &l));
            writeln!(out, "{}", render(&w.cost))?;
            writeln!(out, "weight {}", format_number(&l.weight()))?;
            writeln!(out, "weighted {}", render(&w.cost.scale(&l.weight())))?;
            Ok(())
        }
        Command::Restrict { a, line } => {
            let m = read_module(&a)?;
            let l = line_from(&line)?;
            for bar in restrict_module(&m, &l).bars() {
                writeln!(out, "[{}, {})", format_number(&bar.birth), render(&bar.death))?;
            }
            Ok(())
        }
        Command::Switchpoints { a, b, exhaustive } => {
            let (m, n) = (read_module(&a)?, read_module(&b)?);
            let policy = options(exhaustive).policy;
            let set = switch_set(&m, &n, policy);
            for p in &set.proper {
                writeln!(out, "({}, {})", format_number(&p.x), format_number(&p.y))?;
            }
            for d in &set.at_infinity {
                writeln!(out, "{d}")?;
            }
            Ok(())
        }
        Command::Lines { a, b, exhaustive } => {
            let (m, n) = (read_module(&a)?, read_module(&b)?);
            let set = candidate_lines(&m, &n, &options(exhaustive))?;
            for i in 0..set.len() {
                let l = set.line(i);
                let f = [l.m1(), l.m2(), l.b1(), l.b2()].map(format_number);
                writeln!(out, "{}", f.join(" "))?;
            }
            Ok(())
        }
        Command::Vcost { a, b, x0 } => {
            let (m, n) = (read_module(&a)?, read_module(&b)?);
            let x0 = number(&x0, "--x")?;
            writeln!(out, "{}", value_line(&vertical_cost(&m, &n, &x0)?))?;
            Ok(())
        }
        Command::Hcost { a, b, y0 } => {
            let (m, n) = (read_module(&a)?, read_module(&b)?);
            let y0 = number(&y0, "--y")?;
            writeln!(out, "{}", value_line(&horizontal_cost(&m, &n, &y0)?))?;
            Ok(())
        }
        Command::Scan { a, b, theta_steps, offset_steps, offset_range, out: path } => {
            let (m, n) = (read_module(&a)?, read_module(&b)?);
            if theta_steps < 2 || offset_steps < 2 {
                return Err(Failure::Usage("grid steps must be at least 2".into()));
            }
            let mut spec = GridSpec::new(theta_steps, offset_steps);
            if let Some(r) = offset_range {
                let v: Vec<f64> = r.split(',').filter_map(|t| t.trim().parse().ok()).collect();
                match v[..] {
                    [lo, hi] if lo < hi => spec = spec.with_range(lo, hi),
                    _ => return Err(Failure::Usage(format!("invalid --offset-range `{r}`"))),
                }
            }
            let s = scan(&m, &n, &spec);
            match path {
                Some(p) => {
                    let file = File::create(&p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
                    write_csv(&s.rows, BufWriter::new(file))?;
                    writeln!(out, "max {} at theta={} offset={}", s.max, s.argmax.0, s.argmax.1)?;
                }
                None => write_csv(&s.rows, &mut *out)?,
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let message = match &f {
                Failure::Usage(m) | Failure::Io(m) | Failure::Parse(m) | Failure::InvalidLine(m) => m.clone(),
                Failure::BothTrivial => "both modules are trivial".into(),
            };
            eprintln!("error: {message}");
            ExitCode::from(f.code())
        }
    }
}
