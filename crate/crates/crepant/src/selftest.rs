//! Built-in health checks: embedded regressions over the worked examples
//! plus small deterministic property sweeps. `CREPANT_SELFTEST_FAULT` can
//! name a check (`kodaira-table`, `extremal-table`) to corrupt its expected
//! data, proving the harness actually detects failures.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::kodaira::{classify, FiberType, OrderTriple};
use crate::mwflop::verify_extremal_table;
use crate::poly::{squarefree_decompose, Order, Rat, RatPoly};
use crate::report::{load_job, run_resolve, TorsionJson};
use crate::weierstrass::WeierstrassChart;

fn injected_fault() -> Option<String> {
    std::env::var("CREPANT_SELFTEST_FAULT").ok()
}

type Check = (&'static str, fn() -> Result<(), String>);

const CHECKS: &[Check] = &[
    ("kodaira-table-totality", check_kodaira_table),
    ("extremal-table-consistency", check_extremal_table),
    ("minimalize-regression", check_minimalize),
    ("transverse-regression", check_transverse),
    ("tangent-regression", check_tangent),
    ("generic-rank-regression", check_generic_rank),
    ("poly-roundtrip-sweep", check_poly_roundtrip),
    ("order-additivity-sweep", check_order_additivity),
    ("squarefree-recompose-sweep", check_squarefree),
];

/// Run every check, appending one line per check to the transcript.
/// Returns true when all pass. The output depends on nothing but the
/// crate itself (and the fault-injection variable), so repeated runs —
/// with any `--seed` — are bytewise identical.
pub fn run_selftest(transcript: &mut String) -> bool {
    let mut ok = true;
    for (name, check) in CHECKS {
        match check() {
            Ok(()) => {
                let _ = writeln!(transcript, "check {name} ... ok");
            }
            Err(detail) => {
                let _ = writeln!(transcript, "check {name} ... FAILED: {detail}");
                ok = false;
            }
        }
    }
    let _ = writeln!(
        transcript,
        "selftest: {}",
        if ok { "all checks passed" } else { "FAILURES above" }
    );
    ok
}

/// The classifier must be total on finite triples and match a pinned
/// sample of the table. The injected fault corrupts one expected row.
fn check_kodaira_table() -> Result<(), String> {
    for a in 0..=8u32 {
        for b in 0..=12u32 {
            for d in 0..=24u32 {
                let t = OrderTriple::finite(a, b, d);
                if !t.is_consistent() {
                    continue;
                }
                // Totality: consistent triples never panic and always
                // classify (possibly as a malformed-triple error).
                let _ = classify(t);
            }
        }
    }
    let mut expected = vec![
        (OrderTriple::finite(0, 0, 0), FiberType::I(0)),
        (OrderTriple::finite(0, 0, 5), FiberType::I(5)),
        (OrderTriple::finite(1, 1, 2), FiberType::II),
        (OrderTriple::finite(1, 2, 3), FiberType::III),
        (OrderTriple::finite(2, 2, 4), FiberType::IV),
        (OrderTriple::finite(2, 3, 6), FiberType::IStar(0)),
        (OrderTriple::finite(2, 3, 9), FiberType::IStar(3)),
        (OrderTriple::finite(3, 4, 8), FiberType::IVStar),
        (OrderTriple::finite(3, 5, 9), FiberType::IIIStar),
        (OrderTriple::finite(4, 5, 10), FiberType::IIStar),
        (OrderTriple::finite(4, 6, 12), FiberType::NonKodaira),
    ];
    if injected_fault().as_deref() == Some("kodaira-table") {
        // Deliberate corruption: (2, 3, 6) is I0*, not I1.
        expected[5].1 = FiberType::I(1);
    }
    for (t, want) in expected {
        let got = classify(t)
            .map_err(|e| format!("classify{t} errored: {e}"))?
            .fiber_type;
        if got != want {
            return Err(format!("classify{t} = {got}, expected {want}"));
        }
    }
    Ok(())
}

/// Every shipped extremal configuration must re-verify (sum of fiber
/// contributions 8, torsion order matching its label) and the row count
/// must be the shipped sixteen.
fn check_extremal_table() -> Result<(), String> {
    let rows = verify_extremal_table()?;
    let expected = if injected_fault().as_deref() == Some("extremal-table") {
        17
    } else {
        16
    };
    if rows != expected {
        return Err(format!("{rows} rows verified, expected {expected}"));
    }
    Ok(())
}

fn poly(vars: &[&str], text: &str) -> RatPoly {
    RatPoly::parse(text, vars).expect("selftest polynomial parses")
}

fn check_minimalize() -> Result<(), String> {
    let chart = WeierstrassChart::new("base", poly(&["s", "t"], "s^4"), poly(&["s", "t"], "s^6"))
        .map_err(|e| e.to_string())?;
    let (minimal, k) = chart.minimalize_along(&poly(&["s", "t"], "s"), "s");
    if k != 1 {
        return Err(format!("twist exponent {k}, expected 1"));
    }
    if minimal.f().to_string() != "1" || minimal.g().to_string() != "1" {
        return Err(format!(
            "minimal model ({}, {}), expected (1, 1)",
            minimal.f(),
            minimal.g()
        ));
    }
    Ok(())
}

fn resolve_report(job_text: &str) -> Result<crate::report::Report, String> {
    let job = load_job(job_text).map_err(|e| e.to_string())?;
    run_resolve(&job).map_err(|e| e.to_string())
}

/// Transverse collision f = s^2 t^2, g = s^3 t^3: one crepant blow-up,
/// two half-Kodaira I0* fibers, Mordell-Weil rank 0 with full 2-torsion.
fn check_transverse() -> Result<(), String> {
    let report = resolve_report(
        r#"{"variables":["s","t"],"f":"s^2*t^2","g":"s^3*t^3","points":[[0,0]],"divisors":["s","t"]}"#,
    )?;
    let p = &report.points[0];
    if p.status.as_deref() != Some("resolved") || p.depth != Some(1) {
        return Err(format!("status {:?}, depth {:?}", p.status, p.depth));
    }
    let surface = &p.surfaces.as_ref().unwrap()[0];
    let types: Vec<&str> = surface
        .places
        .iter()
        .map(|pl| pl.fiber.fiber_type.as_str())
        .collect();
    if types != ["I0*", "I0*"] {
        return Err(format!("fiber types {types:?}, expected two I0*"));
    }
    let mw = p.mordell_weil.as_ref().ok_or("missing Mordell-Weil data")?;
    let torsion_ok = matches!(&mw.torsion, TorsionJson::Known { order: 4, .. });
    if mw.rank != 0 || !torsion_ok || mw.census.total != Some(14) {
        return Err(format!(
            "rank {}, torsion {:?}, census total {:?}",
            mw.rank, mw.torsion, mw.census.total
        ));
    }
    Ok(())
}

/// Tangent collision f = (s - t^2)^2 (s + t^2)^2 (and cubes for g): two
/// rounds, the first exceptional surface non-rational and isotrivial,
/// both rounds crepant.
fn check_tangent() -> Result<(), String> {
    let report = resolve_report(
        r#"{"variables":["s","t"],"f":"(s - t^2)^2*(s + t^2)^2","g":"(s - t^2)^3*(s + t^2)^3","points":[[0,0]]}"#,
    )?;
    let p = &report.points[0];
    if p.status.as_deref() != Some("resolved") || p.depth != Some(2) {
        return Err(format!("status {:?}, depth {:?}", p.status, p.depth));
    }
    let surfaces = p.surfaces.as_ref().unwrap();
    if surfaces[0].rational || !surfaces[0].isotrivial {
        return Err("first exceptional surface should be isotrivial and non-rational".into());
    }
    let ledger = p.ledger.as_ref().unwrap();
    if !ledger.crepant {
        return Err("resolution should be crepant".into());
    }
    Ok(())
}

/// Generic isolated point f = s^4, g = t^6: twelve I1 fibers, rank 8,
/// infinitely many flop candidates.
fn check_generic_rank() -> Result<(), String> {
    let report = resolve_report(
        r#"{"variables":["s","t"],"f":"s^4","g":"t^6","points":[[0,0]]}"#,
    )?;
    let p = &report.points[0];
    let mw = p.mordell_weil.as_ref().ok_or("missing Mordell-Weil data")?;
    if mw.rank != 8 {
        return Err(format!("rank {}, expected 8", mw.rank));
    }
    if mw.dichotomy != "InfiniteFlopCandidates" {
        return Err(format!("dichotomy {}, expected infinite", mw.dichotomy));
    }
    let surface = &p.surfaces.as_ref().unwrap()[0];
    let twelve_i1 = surface
        .places
        .iter()
        .map(|pl| (pl.fiber.fiber_type.as_str(), pl.points))
        .fold(0u32, |acc, (ty, pts)| if ty == "I1" { acc + pts } else { acc });
    if twelve_i1 != 12 {
        return Err(format!("{twelve_i1} I1 points, expected 12"));
    }
    Ok(())
}

const SWEEP_POLYS: &[&str] = &[
    "0",
    "1",
    "-2/3",
    "s",
    "t",
    "s + t",
    "s - t^2",
    "s^2*t^2",
    "s^3*t^3 + s*t",
    "(s + t)^2*(s - t)",
    "4*s^3 + 27*t^2",
    "s^4 - 2*s^2*t^2 + t^4",
    "1/2*s^5 + 3*t - 7",
];

fn check_poly_roundtrip() -> Result<(), String> {
    let vars = ["s", "t"];
    for text in SWEEP_POLYS {
        let p = poly(&vars, text);
        let reparsed = RatPoly::parse(&p.to_string(), &vars)
            .map_err(|e| format!("`{p}` failed to re-parse: {e}"))?;
        if reparsed != p {
            return Err(format!("`{text}` printed as `{p}` re-parsed differently"));
        }
    }
    Ok(())
}

fn check_order_additivity() -> Result<(), String> {
    let vars = ["s", "t"];
    let origin = [Rat::zero(), Rat::zero()];
    for a in SWEEP_POLYS {
        for b in SWEEP_POLYS {
            let (p, q) = (poly(&vars, a), poly(&vars, b));
            let product = &p * &q;
            let want = match (p.ord_at_point(&origin), q.ord_at_point(&origin)) {
                (Order::Finite(m), Order::Finite(n)) => Order::Finite(m + n),
                _ => Order::Infinite,
            };
            if product.ord_at_point(&origin) != want {
                return Err(format!(
                    "ord(({a})*({b})) = {} at the origin, expected {want}",
                    product.ord_at_point(&origin)
                ));
            }
        }
    }
    Ok(())
}

fn check_squarefree() -> Result<(), String> {
    let vars = ["s", "t"];
    for text in SWEEP_POLYS {
        let p = poly(&vars, text);
        if p.is_zero() || p.is_constant() {
            continue;
        }
        let (content, classes) = squarefree_decompose(&p);
        let mut rebuilt = RatPoly::constant(&vars, content);
        for (factor, mult) in &classes {
            rebuilt = &rebuilt * &factor.pow(*mult);
        }
        if rebuilt != p {
            return Err(format!("squarefree classes of `{text}` do not recompose"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_without_injected_faults() {
        // The test environment must not carry the fault variable.
        assert!(injected_fault().is_none(), "unset CREPANT_SELFTEST_FAULT");
        let mut transcript = String::new();
        assert!(run_selftest(&mut transcript), "{transcript}");
        assert_eq!(transcript.matches("... ok").count(), CHECKS.len());
        assert!(transcript.ends_with("all checks passed\n"));
    }

    #[test]
    fn transcripts_are_identical_across_runs() {
        let mut first = String::new();
        let mut second = String::new();
        run_selftest(&mut first);
        run_selftest(&mut second);
        assert_eq!(first, second);
    }
}
