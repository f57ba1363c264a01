//! Acceptance criteria, run sequentially with their time limits.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::io::Write;
use std::time::{Duration, Instant};

use semicat::orbits::{union_find_profile, PermutationGroup, DEFAULT_TUPLE_LIMIT};
use semicat::verify::{run_one, SuiteOutcome};

struct Criterion {
    name: &'static str,
    suite: &'static str,
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { name: "isomorphism theorem completeness", suite: "iso-theorem", limit: Some(Duration::from_secs(120)) },
    Criterion { name: "isomorphism calculus coherence", suite: "calculus", limit: Some(Duration::from_secs(30)) },
    Criterion { name: "idempotent formula", suite: "idempotents", limit: None },
    Criterion { name: "orthodoxy equivalence", suite: "orthodoxy", limit: Some(Duration::from_secs(60)) },
    Criterion { name: "spanning-forest normalization", suite: "normalization", limit: None },
    Criterion { name: "orbit counting", suite: "orbits", limit: Some(Duration::from_secs(60)) },
    Criterion { name: "strong semilattice soundness", suite: "sss-soundness", limit: None },
    Criterion { name: "automorphism purity", suite: "purity", limit: None },
    Criterion { name: "psi-system and pivoted harnesses", suite: "psi-system", limit: None },
    Criterion { name: "rectangular band extension", suite: "rb-extension", limit: None },
    Criterion { name: "counterexample family agreement", suite: "counterexample", limit: None },
];

fn report(line: &str) {
    // written straight to stderr so it shows regardless of output capture
    let mut err = std::io::stderr().lock();
    writeln!(err, "{line}").expect("stderr");
}

/// Bell numbers quoted for the symmetric group, confirmed by union-find.
fn bell_values_by_union_find() -> bool {
    let counts = union_find_profile(&PermutationGroup::symmetric(4), 3, DEFAULT_TUPLE_LIMIT).expect("small").counts;
    counts[1] == 2u32.into() && counts[2] == 5u32.into()
}

fn main() {
    let mut failures = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let outcome: SuiteOutcome = run_one(c.suite).expect("known suite");
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let mut ok = outcome.passed && in_time;
        if c.suite == "orbits" {
            ok &= bell_values_by_union_find();
        }
        let limit = c.limit.map_or_else(|| "no limit".to_string(), |l| format!("limit {}s", l.as_secs()));
        report(&format!(
            "{} {:<36} {:>8.2}s ({limit}) instances={} checks={} failed={}",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            elapsed.as_secs_f64(),
            outcome.instances,
            outcome.checks,
            outcome.failed,
        ));
        for note in &outcome.notes {
            report(&format!("     note: {note}"));
        }
        for f in &outcome.failures {
            report(&format!("     witness: {f}"));
        }
        if !in_time {
            report("     exceeded the time limit");
        }
        failures += usize::from(!ok);
    }
    report(&format!("{} of {} criteria passed", CRITERIA.len() - failures, CRITERIA.len()));
    if failures > 0 {
        std::process::exit(1);
    }
}
