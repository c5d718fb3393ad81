//! End-to-end acceptance gate.
//!
//! Runs the default verification suite once and maps every advertised
//! guarantee of the crate onto its named checks, printing one line per
//! criterion. A criterion passes only if all of its checks passed at
//! their registered tolerances; the test fails if any criterion fails,
//! listing the offenders.

use statgeom_core::verify::{run_suite, CheckOutcome, VerifyConfig};

struct Criterion {
    /// Ordinal used in the printed report.
    number: usize,
    /// What the criterion guarantees.
    title: &'static str,
    /// Suite checks that must all pass for the criterion to hold.
    checks: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "relative entropy decomposes along Donald's identity",
        checks: &["donald identity"],
    },
    Criterion {
        number: 2,
        title: "Gibbs variational principle, equality at the perturbed state",
        checks: &["gibbs variational principle"],
    },
    Criterion {
        number: 3,
        title: "Peierls-Bogoliubov and Golden-Thompson bounds",
        checks: &["cumulant bounds"],
    },
    Criterion {
        number: 4,
        title: "free-energy shift identity under perturbation",
        checks: &["free energy shift identity"],
    },
    Criterion {
        number: 5,
        title: "cumulant chain rule and perturbation involution",
        checks: &["cumulant chain rule", "perturbation inversion"],
    },
    Criterion {
        number: 6,
        title: "modular-operator oracle agrees with the density shortcut",
        checks: &["modular vector oracle"],
    },
    Criterion {
        number: 7,
        title: "scalar shifts move the cumulant linearly",
        checks: &["cumulant scalar shift"],
    },
    Criterion {
        number: 8,
        title: "Young-function axioms for the gauges and the decomposition",
        checks: &["young function axioms"],
    },
    Criterion {
        number: 9,
        title: "Luxemburg norm as Minkowski gauge, with qubit closed forms",
        checks: &["luxemburg norm lemmas"],
    },
    Criterion {
        number: 10,
        title: "gauge equivalence with constant 2/log 2, pointwise sandwich",
        checks: &["norm equivalence", "young sandwich"],
    },
    Criterion {
        number: 11,
        title: "cosh lower bounds on the uncentered gauge",
        checks: &["cosh entropy bounds"],
    },
    Criterion {
        number: 12,
        title: "Hoelder inequality with factor 2",
        checks: &["hoelder inequality"],
    },
    Criterion {
        number: 13,
        title: "Luxemburg-Amemiya dual norm equivalence",
        checks: &["dual norm equivalence"],
    },
    Criterion {
        number: 14,
        title: "centered-cumulant conjugate equals a relative entropy",
        checks: &["cumulant conjugate oracle"],
    },
    Criterion {
        number: 15,
        title: "decomposition functional is twice the conjugate at half scale",
        checks: &["psi phi conjugacy", "psi classical oracle"],
    },
    Criterion {
        number: 16,
        title: "dual unit ball via decompositions, converse factor 8",
        checks: &["dual unit ball decomposition"],
    },
    Criterion {
        number: 17,
        title: "Gateaux derivative of the cumulant matches central differences",
        checks: &["gateaux derivative"],
    },
    Criterion {
        number: 18,
        title: "atlas round trips, affine transitions, dual parallel transport",
        checks: &[
            "chart round trip",
            "chart transition consistency",
            "transport duality",
        ],
    },
    Criterion {
        number: 19,
        title: "norm continuity of cumulants and state expectations",
        checks: &["cumulant continuity", "cosh domination of expectations"],
    },
    Criterion {
        number: 20,
        title: "commutative shapes reduce to the classical scalar theory",
        checks: &["commutative scalar reduction"],
    },
];

#[test]
fn acceptance() {
    let report = run_suite(&VerifyConfig::default_suite()).unwrap();
    let lookup = |name: &str| -> &CheckOutcome {
        report
            .checks
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("suite is missing check '{name}'"))
    };

    let mut failures = Vec::new();
    for criterion in CRITERIA {
        let passed = criterion.checks.iter().all(|n| lookup(n).passed);
        let worst = criterion
            .checks
            .iter()
            .map(|n| lookup(n).max_violation)
            .fold(0.0f64, f64::max);
        println!(
            "{}  {:>2}  {:<62} worst violation {:9.3e}",
            if passed { "pass" } else { "FAIL" },
            criterion.number,
            criterion.title,
            worst,
        );
        if !passed {
            failures.push(criterion.number);
        }
    }

    // The suite must stay a superset of the acceptance surface.
    assert!(report.checks.len() >= 25, "suite lost checks");
    assert!(
        failures.is_empty(),
        "acceptance criteria failed: {failures:?}"
    );
}
