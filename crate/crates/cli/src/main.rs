use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use klyachko::check::{check_ideal, random_ideals, CheckReport};
use klyachko::diagram::{compute_diagram, sum_diagram, KlyachkoDiagram};
use klyachko::hilbert::hilbert_report;
use klyachko::monomial::MonomialIdeal;
use klyachko::reconstruction::{
    box_degrees, h1_scan_box, local_cohomology_h1, reconstruct_generators, SearchBox,
};
use klyachko::render::{render_ascii, render_svg};
use klyachko::{Error, Fan, MultiDegree};

/// Klyachko diagrams of monomial ideals on smooth complete toric varieties.
#[derive(Parser)]
#[command(name = "klyachko", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the diagram of an ideal.
    Diagram {
        #[command(flatten)]
        io: Io,
        /// Also print ASCII panels (rank-2 lattices only).
        #[arg(long)]
        render: bool,
        /// Write SVG panels to this file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Minimal generators of the saturation, from a diagram or an ideal.
    Saturate {
        #[command(flatten)]
        io: Io,
        /// Degree box to scan, e.g. `0..6` or `-9..3,0..4`.
        #[arg(long = "box", allow_hyphen_values = true)]
        search_box: Option<String>,
    },
    /// Hilbert function of R/I^sat and the constancy verdict.
    Hilbert {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        degrees: String,
    },
    /// Graded pieces of the first local cohomology H^1_B(I).
    H1 {
        #[command(flatten)]
        io: Io,
        /// Degrees to report. Without it, the default box is scanned and
        /// only nonzero pieces are listed.
        #[arg(long, allow_hyphen_values = true)]
        degrees: Option<String>,
    },
    /// Diagram of I + J from two ideals or diagrams.
    Sum {
        #[command(flatten)]
        io: Io,
    },
    /// Cross-check the diagram pipelines against the direct oracles.
    Check {
        #[command(flatten)]
        io: Io,
        /// Diagram to test in place of the computed one.
        #[arg(long)]
        diagram: Option<PathBuf>,
        /// Number of seeded random ideals to check.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Half-width of the membership window.
        #[arg(long)]
        window: Option<i64>,
    },
    /// Draw the diagram of an ideal or a diagram file.
    Render {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        svg: bool,
        /// Half-width of the drawn window.
        #[arg(long)]
        window: Option<i64>,
    },
}

#[derive(Args)]
struct Io {
    /// Catalog name (`P2`, `H3`, `P1xP1`, ...) or fan JSON file. Without it,
    /// the first positional argument is the fan.
    #[arg(long)]
    fan: Option<String>,
    /// Output file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    inputs: Vec<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchBoxTooSmall { .. }
            | Error::Overflow
            | Error::Unbounded
            | Error::Infinite(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Run<T> = Result<T, Failure>;

fn load_fan(source: &str) -> Run<Fan> {
    let path = Path::new(source);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| input_error(format!("{source}: {e}")))?;
        return Ok(Fan::from_json(&text)?);
    }
    Fan::catalog(source).ok_or_else(|| input_error(format!("unknown fan {source:?}")))
}

/// The fan and the remaining positional inputs.
fn resolve(io: &Io) -> Run<(Fan, Vec<String>)> {
    let mut inputs = io.inputs.clone();
    let source = match &io.fan {
        Some(f) => f.clone(),
        None if !inputs.is_empty() => inputs.remove(0),
        None => return Err(input_error("no fan given")),
    };
    Ok((load_fan(&source)?, inputs))
}

fn read_json(path: &str) -> Run<(String, Value)> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}")))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| input_error(format!("{path}: {e}")))?;
    Ok((text, value))
}

enum Input {
    Ideal(MonomialIdeal),
    Diagram(KlyachkoDiagram),
}

fn read_input(fan: &Fan, path: &str) -> Run<Input> {
    let (text, value) = read_json(path)?;
    if value.get("gens").is_some() {
        Ok(Input::Ideal(MonomialIdeal::from_json(
            &text,
            fan.num_rays(),
        )?))
    } else if value.get("cones").is_some() {
        Ok(Input::Diagram(KlyachkoDiagram::from_json_str(fan, &text)?))
    } else {
        Err(input_error(format!(
            "{path}: expected an ideal (\"gens\") or a diagram (\"cones\")"
        )))
    }
}

fn read_ideal(fan: &Fan, path: &str) -> Run<MonomialIdeal> {
    match read_input(fan, path)? {
        Input::Ideal(i) => Ok(i),
        Input::Diagram(_) => Err(input_error(format!("{path}: expected an ideal"))),
    }
}

fn to_diagram(fan: &Fan, input: Input) -> Run<KlyachkoDiagram> {
    match input {
        Input::Ideal(i) => Ok(compute_diagram(&i, fan)?),
        Input::Diagram(d) => Ok(d),
    }
}

fn one_input<'a>(inputs: &'a [String], what: &str) -> Run<&'a str> {
    match inputs {
        [only] => Ok(only),
        _ => Err(input_error(format!("expected exactly one {what} file"))),
    }
}

/// `a..b` per coordinate, comma separated.
fn parse_ranges(spec: &str, ell: usize) -> Run<Vec<(i64, i64)>> {
    let ranges = spec
        .split(',')
        .map(|part| {
            let (a, b) = part
                .trim()
                .split_once("..")
                .ok_or_else(|| input_error(format!("bad range {part:?}, expected a..b")))?;
            let a: i64 = a
                .trim()
                .parse()
                .map_err(|_| input_error(format!("bad range {part:?}")))?;
            let b: i64 = b
                .trim()
                .parse()
                .map_err(|_| input_error(format!("bad range {part:?}")))?;
            Ok((a, b))
        })
        .collect::<Run<Vec<_>>>()?;
    if ranges.len() != ell {
        return Err(input_error(format!(
            "{} ranges given, the class group has rank {ell}",
            ranges.len()
        )));
    }
    Ok(ranges)
}

fn degree_list(spec: &str, fan: &Fan) -> Run<Vec<MultiDegree>> {
    let ranges = parse_ranges(spec, fan.grading().ell)?;
    let mut out: Vec<MultiDegree> = box_degrees(&ranges);
    out.sort();
    Ok(out)
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).unwrap();
    s.push('\n');
    s
}

fn emit(io: &Io, text: &str) -> Run<()> {
    match &io.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(|x| x.to_string()).collect()
}

fn run(cli: Cli) -> Run<()> {
    match cli.command {
        Command::Diagram { io, render, svg } => {
            let (fan, inputs) = resolve(&io)?;
            let ideal = read_ideal(&fan, one_input(&inputs, "ideal")?)?;
            let diag = compute_diagram(&ideal, &fan)?;
            let mut text = diag.to_json_string();
            text.push('\n');
            if render {
                text.push_str(&render_ascii(&diag, None)?);
            }
            if let Some(path) = svg {
                fs::write(&path, render_svg(&diag, None)?)
                    .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            }
            emit(&io, &text)
        }
        Command::Saturate { io, search_box } => {
            let (fan, inputs) = resolve(&io)?;
            let input = read_input(&fan, one_input(&inputs, "ideal or diagram")?)?;
            let diag = to_diagram(&fan, input)?;
            let search = match search_box {
                Some(spec) => SearchBox::Explicit(parse_ranges(&spec, fan.grading().ell)?),
                None => SearchBox::Default,
            };
            let r = reconstruct_generators(&diag, &search)?;
            let out = json!({
                "gens": r.ideal.gens().iter().map(|g| g.0.clone()).collect::<Vec<_>>(),
                "monomials": strings(r.ideal.gens()),
                "pre_minimal": strings(&r.pre_minimal),
                "search_box": r.search_box,
            });
            emit(&io, &pretty(&out))
        }
        Command::Hilbert { io, degrees } => {
            let (fan, inputs) = resolve(&io)?;
            let ideal = read_ideal(&fan, one_input(&inputs, "ideal")?)?;
            let report = hilbert_report(&ideal, &fan, &degree_list(&degrees, &fan)?)?;
            emit(&io, &pretty(&serde_json::to_value(&report).unwrap()))
        }
        Command::H1 { io, degrees } => {
            let (fan, inputs) = resolve(&io)?;
            let ideal = read_ideal(&fan, one_input(&inputs, "ideal")?)?;
            let diag = compute_diagram(&ideal, &fan)?;
            let (list, scanned) = match &degrees {
                Some(spec) => (degree_list(spec, &fan)?, None),
                None => {
                    let bx = h1_scan_box(&ideal, &diag);
                    let mut list = box_degrees(&bx);
                    list.sort();
                    (list, Some(bx))
                }
            };
            let mut pieces = Vec::new();
            for a in list {
                let piece = local_cohomology_h1(&ideal, &diag, &fan.grading().lift(&a))?;
                if scanned.is_some() && piece.dim() == 0 {
                    continue;
                }
                pieces.push(json!({
                    "degree": a,
                    "dim": piece.dim(),
                    "basis": strings(&piece.monomials(&fan)),
                }));
            }
            let mut out = json!({ "pieces": pieces });
            if let Some(bx) = scanned {
                out["scanned_box"] = json!(bx);
                out["note"] = json!("only degrees inside scanned_box were examined");
            }
            emit(&io, &pretty(&out))
        }
        Command::Sum { io } => {
            let (fan, inputs) = resolve(&io)?;
            let [a, b] = inputs.as_slice() else {
                return Err(input_error("sum takes exactly two ideal or diagram files"));
            };
            let da = to_diagram(&fan, read_input(&fan, a)?)?;
            let db = to_diagram(&fan, read_input(&fan, b)?)?;
            let mut text = sum_diagram(&da, &db)?.to_json_string();
            text.push('\n');
            emit(&io, &text)
        }
        Command::Check {
            io,
            diagram,
            random,
            seed,
            window,
        } => {
            let (fan, inputs) = resolve(&io)?;
            let mut ideals = Vec::new();
            for path in &inputs {
                ideals.push(read_ideal(&fan, path)?);
            }
            if let Some(n) = random {
                ideals.extend(random_ideals(seed, fan.num_rays(), n));
            }
            if ideals.is_empty() {
                return Err(input_error("check needs an ideal file or --random N"));
            }
            let given = match &diagram {
                Some(path) => {
                    if ideals.len() != 1 {
                        return Err(input_error("--diagram needs exactly one ideal"));
                    }
                    let path = path.to_string_lossy();
                    let (text, _) = read_json(&path)?;
                    Some(KlyachkoDiagram::from_json_str(&fan, &text)?)
                }
                None => None,
            };
            let reports: Vec<CheckReport> = ideals
                .iter()
                .map(|i| check_ideal(i, &fan, given.as_ref(), window))
                .collect::<Result<_, _>>()?;
            let passed = reports.iter().all(CheckReport::passed);
            let out = json!({ "passed": passed, "reports": reports });
            emit(&io, &pretty(&out))?;
            if passed {
                Ok(())
            } else {
                let first = reports.iter().flat_map(|r| r.failures()).next().unwrap();
                Err(Failure {
                    code: 4,
                    message: format!(
                        "check failed: {}: {}",
                        first.name,
                        first.witness.clone().unwrap_or_default()
                    ),
                })
            }
        }
        Command::Render { io, svg, window } => {
            let (fan, inputs) = resolve(&io)?;
            let input = read_input(&fan, one_input(&inputs, "ideal or diagram")?)?;
            let diag = to_diagram(&fan, input)?;
            let text = if svg {
                render_svg(&diag, window)?
            } else {
                render_ascii(&diag, window)?
            };
            emit(&io, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
