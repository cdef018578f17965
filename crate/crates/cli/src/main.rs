use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use amplituhedron::combinatorics::window_lists_even;
use amplituhedron::crossing::crossing_number;
use amplituhedron::io::ContextJson;
use amplituhedron::membership::membership_m2;
use amplituhedron::scalar::{format_scalar, int, Scalar, Sign};
use amplituhedron::twistor::TwistorContext;
use amplituhedron::verify::{sample_case, twistor_windows, GridCell};
use amplituhedron::winding::{mu_ray_winding, winding_number, RayDirection, WindingResult};
use amplituhedron::{crossing_formula, parse_grid, verify_theorems, winding_formula, Error, VerifyOptions, DEFAULT_MAX_N};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "amplituhedron", version, about = "Exact twistor, winding and crossing computations")]
struct Cli {
    /// Accept contexts with n above the default limit.
    #[arg(long, global = true)]
    allow_large_n: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a point Y = C𝒵 with C positive and 𝒵 Vandermonde.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Twistor coordinates of every window as CSV.
    Twistor {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Winding number for even m.
    Winding {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RayMode::Random)]
        mode: RayMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Crossing number for odd m.
    Crossing {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership verdict (decided for m = 2 only).
    Membership {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the winding and crossing theorems over a grid.
    Verify {
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long, default_value_t = 25)]
        seeds: u64,
        /// Keep one identity equation in this many; 1 is exhaustive.
        #[arg(long, default_value_t = 5)]
        identity_stride: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG of the projected points, the polygon and the origin for m = 2.
    Render {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RayMode {
    Random,
    Mu,
}

enum Failure {
    Lib(Error),
    Io(String),
    TooLarge(usize),
    VerifyFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Parse(_)) => 2,
            Failure::Lib(Error::Positivity(_)) => 3,
            Failure::Lib(Error::WindingUndefined(_)) => 4,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(e) => e.clone(),
            Failure::TooLarge(n) => {
                format!("n={n} exceeds {DEFAULT_MAX_N}; pass --allow-large-n to proceed")
            }
            Failure::VerifyFailed => "verification failed; see first_failure in the report".into(),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn check_n(n: usize, allow: bool) -> Outcome<()> {
    if n > DEFAULT_MAX_N && !allow {
        return Err(Failure::TooLarge(n));
    }
    Ok(())
}

fn load(path: &Path, allow_large_n: bool) -> Outcome<TwistorContext> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let raw: ContextJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    check_n(raw.n, allow_large_n)?;
    Ok(raw.to_context()?)
}

/// Writes through a temporary file in the target directory, then renames.
fn emit(out: Option<&Path>, body: &str) -> Outcome<()> {
    let Some(path) = out else {
        print!("{body}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Io(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct WindingOut {
    magnitude: u64,
    signed_sum: i64,
    hits: Vec<amplituhedron::winding::Hit>,
    ray: RayDirection,
}

impl From<WindingResult> for WindingOut {
    fn from(w: WindingResult) -> Self {
        WindingOut { magnitude: w.magnitude, signed_sum: w.signed_sum, hits: w.hits, ray: w.ray_used }
    }
}

#[derive(Serialize)]
struct CrossingOut {
    count: usize,
    cells: Vec<amplituhedron::Cell>,
    simplices: Vec<amplituhedron::IndexList>,
    degenerate: bool,
}

#[derive(Serialize)]
struct UnprovenOut {
    verdict: amplituhedron::Verdict,
    quantity: &'static str,
    value: u64,
    formula: u64,
}

fn twistor_csv(ctx: &TwistorContext) -> Outcome<String> {
    let mut out = String::from("window,value,sign\n");
    for w in twistor_windows(ctx.n(), ctx.m())? {
        let v = ctx.twistor(w.as_slice())?;
        let sign = Sign::of(&v).as_i8();
        writeln!(out, "\"{w}\",{},{sign}", format_scalar(&v)).expect("string write");
    }
    Ok(out)
}

fn membership(ctx: &TwistorContext) -> Outcome<String> {
    if ctx.m() == 2 {
        return Ok(json(&membership_m2(ctx)?));
    }
    let (quantity, value, formula) = if ctx.m() % 2 == 0 {
        ("winding", winding_number(ctx, 0)?.magnitude, winding_formula(ctx.k(), ctx.m())?)
    } else {
        ("crossing", crossing_number(ctx)?.count as u64, crossing_formula(ctx.k(), ctx.m())?)
    };
    Ok(json(&UnprovenOut { verdict: amplituhedron::Verdict::Unproven, quantity, value, formula }))
}

/// Plane coordinates of π_Y(𝒵_i): with e_a, e_b the first pair of unit
/// vectors completing Y to a basis, x ↦ (⟨Y, x, e_b⟩, ⟨Y, e_a, x⟩) scaled
/// by sign det(Y; e_a; e_b) keeps the orientation of V_Y.
fn plane_points(ctx: &TwistorContext) -> Outcome<Vec<(f64, f64)>> {
    let d = ctx.k() + 2;
    let unit = |a: usize| -> Vec<Scalar> { (0..d).map(|j| int((j == a) as i64)).collect() };
    for a in 0..d {
        for b in a + 1..d {
            let (ea, eb) = (unit(a), unit(b));
            let det = ctx.twistor_of_vectors(&[&ea, &eb]);
            let s = Sign::of(&det).as_i8();
            if s == 0 {
                continue;
            }
            let f = |x: Scalar| x.to_f64().unwrap_or(f64::NAN) * s as f64;
            return Ok((1..=ctx.n())
                .map(|i| {
                    let z = ctx.z.row(i);
                    (f(ctx.twistor_of_vectors(&[z, &eb])), f(ctx.twistor_of_vectors(&[&ea, z])))
                })
                .collect());
        }
    }
    Err(Error::Internal("Y has no complement among unit vectors".into()).into())
}

fn render(ctx: &TwistorContext) -> Outcome<String> {
    if ctx.m() != 2 {
        return Err(Error::Contract(format!("render draws m = 2 contexts, got m={}", ctx.m())).into());
    }
    let pts = plane_points(ctx)?;
    let extent = pts
        .iter()
        .flat_map(|&(x, y)| [x.abs(), y.abs()])
        .fold(1e-9, f64::max);
    let (size, margin) = (400.0, 30.0);
    let scale = (size / 2.0 - margin) / extent;
    let map = |(x, y): (f64, f64)| (size / 2.0 + x * scale, size / 2.0 - y * scale);
    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#).unwrap();
    writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
    for w in window_lists_even(ctx.n(), 2)? {
        let (a, b) = (map(pts[w.as_slice()[0] - 1]), map(pts[w.as_slice()[1] - 1]));
        writeln!(
            svg,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#3060c0" stroke-width="1.5"/>"##,
            a.0, a.1, b.0, b.1
        )
        .unwrap();
    }
    for (i, &p) in pts.iter().enumerate() {
        let (x, y) = map(p);
        writeln!(svg, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="#3060c0"/>"##).unwrap();
        writeln!(svg, r#"<text x="{:.3}" y="{:.3}" font-size="12">{}</text>"#, x + 5.0, y - 5.0, i + 1).unwrap();
    }
    let (ox, oy) = map((0.0, 0.0));
    writeln!(svg, r##"<circle cx="{ox:.3}" cy="{oy:.3}" r="4" fill="#c03030"/>"##).unwrap();
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn run(cli: Cli) -> Outcome<()> {
    let allow = cli.allow_large_n;
    match cli.command {
        Command::Sample { n, k, m, seed, out } => {
            check_n(n, allow)?;
            if m == 0 || k == 0 || n < k + m {
                return Err(Error::Contract(format!("need k, m >= 1 and n >= k+m, got n={n}, k={k}, m={m}")).into());
            }
            let ctx = sample_case(GridCell { n, k, m }, seed)?.ctx;
            emit(out.as_deref(), &json(&ContextJson::from_context(&ctx)))
        }
        Command::Twistor { input, out } => {
            let ctx = load(&input, allow)?;
            emit(out.as_deref(), &twistor_csv(&ctx)?)
        }
        Command::Winding { input, mode, seed, out } => {
            let ctx = load(&input, allow)?;
            let w = match mode {
                RayMode::Random => winding_number(&ctx, seed)?,
                RayMode::Mu => mu_ray_winding(&ctx)?,
            };
            emit(out.as_deref(), &json(&WindingOut::from(w)))
        }
        Command::Crossing { input, out } => {
            let ctx = load(&input, allow)?;
            let r = crossing_number(&ctx)?;
            let body = CrossingOut { count: r.count, cells: r.cells_hit, simplices: r.simplices_hit, degenerate: r.degenerate };
            emit(out.as_deref(), &json(&body))
        }
        Command::Membership { input, out } => {
            let ctx = load(&input, allow)?;
            emit(out.as_deref(), &membership(&ctx)?)
        }
        Command::Verify { grid, seeds, identity_stride, out } => {
            let cells = parse_grid(&grid)?;
            if let Some(c) = cells.iter().find(|c| c.n > DEFAULT_MAX_N) {
                check_n(c.n, allow)?;
            }
            let report = verify_theorems(&cells, seeds, VerifyOptions { identity_stride })?;
            emit(out.as_deref(), &json(&report))?;
            eprintln!(
                "verify: {}/{} cases pass ({} winding, {} crossing)",
                report.summary.passed, report.summary.total, report.summary.winding_cases, report.summary.crossing_cases
            );
            if report.all_pass() {
                Ok(())
            } else {
                Err(Failure::VerifyFailed)
            }
        }
        Command::Render { input, out } => {
            let ctx = load(&input, allow)?;
            emit(out.as_deref(), &render(&ctx)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
