//! Acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use skein_core::fixtures;
use skein_core::qtrace::TraceContext;
use skein_core::suite::{self, Check};
use skein_core::TriangulatedSurface;

const BOUND: i64 = 3;
const LAMBDA_BOUND: i64 = 4;
const MAX_CROSSINGS: i64 = 10;
const SEED: u64 = 20240601;
const WORDS: usize = 200;
const TIME_LIMIT: Duration = Duration::from_secs(60);

fn per_surface(f: impl Fn(&str, &TriangulatedSurface, &TraceContext) -> Vec<Check>) -> Vec<Check> {
    let mut out = Vec::new();
    for (name, s) in fixtures::bundled_surfaces() {
        match TraceContext::new(&s) {
            Ok(ctx) => out.extend(f(name, &s, &ctx).into_iter().map(|mut c| {
                c.name = format!("{}/{}", name, c.name);
                c
            })),
            Err(e) => {
                let mut c = Check::new(format!("{}/trace_context", name));
                c.record(false, || e.to_string());
                out.push(c);
            }
        }
    }
    out
}

type Criterion = Box<dyn Fn() -> Vec<Check>>;

const FIRST_IDENTITIES: [&str; 5] = ["HPplus=2I", "HbarPplusbar=2I", "Pplusbar*sigma=2K", "sigma=HbarK", "K_restrict=Pplusbar"];

fn main() -> ExitCode {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("matrix identities", Box::new(|| {
            per_surface(|_, s, _| vec![suite::matrix_identities_named(s, "matrix_identities", Some(&FIRST_IDENTITIES))])
        })),
        ("psi compatibility and Pbar diamond", Box::new(|| {
            per_surface(|_, s, ctx| {
                vec![suite::matrix_identities_named(s, "pbar_diamond", Some(&["KQstarKt=Pbardiamond"])), suite::psi_compatibility(ctx)]
            })
        })),
        ("q-commutation", Box::new(|| per_surface(|_, _, ctx| vec![suite::commutation(ctx)]))),
        ("top terms", Box::new(|| per_surface(|_, _, ctx| vec![suite::top_terms(ctx, BOUND, 1)]))),
        ("naive = shear = extended", Box::new(|| per_surface(|_, _, ctx| vec![suite::oracle(ctx, BOUND, MAX_CROSSINGS, 1)]))),
        ("Kauffman relation", Box::new(|| vec![suite::kauffman_torus(), suite::kauffman_quadrilateral()])),
        ("bad arcs", Box::new(|| per_surface(|_, _, ctx| vec![suite::bad_arcs(ctx)]))),
        ("reflection invariance", Box::new(|| per_surface(|_, _, ctx| vec![suite::reflection(ctx, BOUND, 1)]))),
        ("Lambda round trip and rank", Box::new(|| {
            per_surface(|_, s, _| vec![suite::lambda_round_trip(s, LAMBDA_BOUND, 1), suite::rank_witnesses(s)])
        })),
        ("bigon counit", Box::new(|| suite::bigon_checks(SEED, WORDS))),
    ];

    let mut all_ok = true;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let checks = run();
        let elapsed = start.elapsed();
        let ok = !checks.is_empty() && checks.iter().all(Check::passed) && elapsed < TIME_LIMIT;
        all_ok &= ok;
        let items: usize = checks.iter().map(|c| c.checked).sum();
        println!(
            "criterion {:>2} {:<36} {} items={} time={:.1}s",
            i + 1,
            title,
            if ok { "PASS" } else { "FAIL" },
            items,
            elapsed.as_secs_f64()
        );
        for c in checks.iter().filter(|c| !c.passed()) {
            println!("  {}", c);
        }
        if elapsed >= TIME_LIMIT {
            println!("  exceeded {}s", TIME_LIMIT.as_secs());
        }
    }
    if all_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
