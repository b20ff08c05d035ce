//! `skein`: command-line front end for skein-core.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use skein_core::curves::{enumerate_lambda, StatedDiagram};
use skein_core::matrices::{all_matrices, verify_matrix_identities, LabeledMatrix, SurfaceMatrices};
use skein_core::qtrace::TraceContext;
use skein_core::{suite, HalfPowerLaurent, TorusElement, TriangulatedSurface};

/// Largest accepted `--bound`; the number of diagrams grows like `(N+1)^dim`.
const MAX_BOUND: i64 = 6;
/// Random words per randomized bigon property in `verify`.
const BIGON_WORDS: usize = 200;

#[derive(Parser)]
#[command(name = "skein", version, about = "Quantum traces and skein algebra checks on triangulated surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a surface file and print its invariants.
    Check { file: PathBuf },
    /// Print a combinatorial matrix or verify the matrix identities.
    Matrices {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: Option<Which>,
        #[arg(long)]
        verify: bool,
    },
    /// Trace of the named curves (comma separated) of the file.
    Trace {
        file: PathBuf,
        #[arg(long)]
        curve: String,
        #[arg(long, value_enum)]
        coords: Coords,
        /// Also print the specialization at q = 1.
        #[arg(long)]
        q1: bool,
    },
    /// List the basis monoid vectors with entries at most N.
    Basis {
        file: PathBuf,
        #[arg(long)]
        bound: i64,
    },
    /// Run the verification suite.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "Q")]
    Q,
    #[value(name = "P")]
    P,
    #[value(name = "Pplus")]
    Pplus,
    #[value(name = "H")]
    H,
    #[value(name = "Hbar")]
    Hbar,
    #[value(name = "K")]
    K,
    #[value(name = "sigma")]
    Sigma,
    #[value(name = "Qbar")]
    Qbar,
    #[value(name = "Qstar")]
    Qstar,
    #[value(name = "Pbar")]
    Pbar,
    #[value(name = "Pplusbar")]
    Pplusbar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coords {
    Shear,
    Extended,
    Length,
}

/// Failure modes mapped to exit codes.
enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// A check did not hold: exit 1.
    Verification,
}

impl From<skein_core::Error> for Failure {
    fn from(e: skein_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (out, code) = match run(cli.command) {
        Ok(out) => (out, 0),
        Err(Failure::Verification) => (String::new(), 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            (String::new(), 2)
        }
    };
    print!("{}", out);
    ExitCode::from(code)
}

/// Commands print their own report before returning `Failure::Verification`.
fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Check { file } => check(&file),
        Command::Matrices { file, which, verify } => matrices(&file, which, verify),
        Command::Trace { file, curve, coords, q1 } => trace(&file, &curve, coords, q1),
        Command::Basis { file, bound } => basis(&file, bound),
        Command::Verify { file, bound, seed, jobs } => verify(&file, bound, seed, jobs),
    }
}

fn read(file: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {}", file.display(), e)))
}

fn load(file: &Path) -> Result<(TriangulatedSurface, String), Failure> {
    let text = read(file)?;
    let s = TriangulatedSurface::parse(&text).map_err(|e| Failure::Usage(format!("{}: {}", file.display(), e)))?;
    Ok((s, text))
}

fn check_bound(bound: i64) -> Result<(), Failure> {
    if (0..=MAX_BOUND).contains(&bound) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--bound must lie in 0..={}", MAX_BOUND)))
    }
}

fn check(file: &Path) -> Outcome {
    let (s, _) = load(file)?;
    let mut out = format!(
        "chi={} r={} boundary_punctures={} interior_punctures={}\n",
        s.euler_characteristic(),
        s.rank_r(),
        s.n_boundary_punctures(),
        s.n_interior_punctures()
    );
    let _ = writeln!(out, "triangles={} edges={} boundary_edges={}", s.n_triangles(), s.n_edges(), s.boundary_edges().len());
    if s.has_boundary() {
        let q = s.complete_quasitriangulation()?;
        let edges: Vec<&str> = q.quasi_edges.iter().map(|e| s.edge_name(*e)).collect();
        let _ = writeln!(out, "quasi_edges={} monogons={}", edges.join(","), q.monogons.len());
        for m in &q.monogons {
            let _ = writeln!(out, "monogon ev={} bv={}", s.edge_name(m.ev), s.edge_name(m.bv));
        }
    }
    Ok(out)
}

fn select(m: &SurfaceMatrices, which: Which) -> Result<&LabeledMatrix, Failure> {
    let quasi = || m.quasi.as_ref().ok_or_else(|| Failure::Usage("vertex matrices need a boundary puncture".into()));
    Ok(match which {
        Which::Q => &m.q,
        Which::Qbar => &m.qbar,
        Which::Qstar => &m.qstar,
        Which::P => &quasi()?.p,
        Which::Pplus => &quasi()?.pplus,
        Which::Pbar => &quasi()?.pbar,
        Which::Pplusbar => &quasi()?.pplus_bar,
        Which::H => &quasi()?.h,
        Which::Hbar => &quasi()?.hbar,
        Which::K => &quasi()?.k,
        Which::Sigma => &quasi()?.sigma,
    })
}

fn matrices(file: &Path, which: Option<Which>, verify: bool) -> Outcome {
    let (s, _) = load(file)?;
    if which.is_none() && !verify {
        return Err(Failure::Usage("give --which or --verify".into()));
    }
    let mut out = String::new();
    if let Some(w) = which {
        out.push_str(&select(&all_matrices(&s)?, w)?.render(&s));
    }
    if verify {
        let results = verify_matrix_identities(&s)?;
        for r in &results {
            let _ = writeln!(out, "{}", r.line());
        }
        if !results.iter().all(|r| r.passed()) {
            print!("{}", out);
            return Err(Failure::Verification);
        }
    }
    Ok(out)
}

/// Length coordinates are defined on generators: match the diagram against each
/// generator diagram through the (injective) extended trace.
fn length_trace(ctx: &TraceContext, d: &StatedDiagram) -> Result<TorusElement, Failure> {
    let v = ctx.matrices.quasi.as_ref().ok_or_else(|| Failure::Usage("length coordinates need a boundary puncture".into()))?;
    let target = ctx.extended_trace(d)?;
    for l in v.data.e_bar_p(&ctx.surface) {
        let (g, pre) = skein_core::curves::generator_diagram(&ctx.surface, &v.data, l)?;
        if ctx.extended_trace(&g)? == target {
            return Ok(ctx.length_monomial(&[l])?.scale(&HalfPowerLaurent::q_half_pow(-pre)));
        }
    }
    Err(Failure::Usage("length coordinates are available only for generator diagrams".into()))
}

fn trace(file: &Path, curve: &str, coords: Coords, q1: bool) -> Outcome {
    let (s, text) = load(file)?;
    let all = StatedDiagram::parse(&text, &s).map_err(|e| Failure::Usage(format!("{}: {}", file.display(), e)))?;
    let names: Vec<&str> = curve.split(',').map(str::trim).collect();
    let d = all.select(&names)?;
    let ctx = TraceContext::new(&s)?;
    let u = match coords {
        Coords::Shear => ctx.shear_trace(&d)?,
        Coords::Extended => ctx.extended_trace_y(&d)?,
        Coords::Length => length_trace(&ctx, &d)?,
    };
    let mut out = format!("{}\n", u);
    if q1 {
        let _ = writeln!(out, "at q=1:\n{}", u.render_q1());
    }
    Ok(out)
}

fn basis(file: &Path, bound: i64) -> Outcome {
    let (s, _) = load(file)?;
    check_bound(bound)?;
    let labels: Vec<String> = (0..s.n_edges())
        .map(|e| s.edge_name(e).to_string())
        .chain(s.boundary_edges().into_iter().map(|e| format!("hat({})", s.edge_name(e))))
        .collect();
    let vs = enumerate_lambda(&s, bound);
    let mut out = format!("labels {}\n", labels.join(" "));
    for v in &vs {
        let entries: Vec<String> = v.to_vec().iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", entries.join(" "));
    }
    let _ = writeln!(out, "count={}", vs.len());
    Ok(out)
}

fn verify(file: &Path, bound: i64, seed: u64, jobs: usize) -> Outcome {
    let (s, _) = load(file)?;
    check_bound(bound)?;
    if jobs == 0 {
        return Err(Failure::Usage("--jobs must be positive".into()));
    }
    let mut checks = suite::surface_checks(&s, bound, jobs);
    checks.extend(suite::bigon_checks(seed, BIGON_WORDS));
    let ok = checks.iter().all(suite::Check::passed);
    let mut out = suite::render(&checks);
    let _ = writeln!(out, "RESULT {}", if ok { "PASS" } else { "FAIL" });
    if ok {
        Ok(out)
    } else {
        print!("{}", out);
        Err(Failure::Verification)
    }
}
