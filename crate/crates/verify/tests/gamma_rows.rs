//! The eight semilinear case sizes, with the verified row outcomes frozen.
//!
//! Seven of the eight sizes agree with the written case list in full. At
//! |V| = 2^6 the (|C|=7, |H/C|=6) subgroup (order 42, not nilpotent) has a
//! regular orbit of size 42 on the 63 nonzero elements — not an orbit of
//! size 21 — so that single row is reported as a finding with witnesses.

use orbitcheck_verify::gamma::{gamma_case_report, gamma_cases, CASE_SIZES};
use orbitcheck_verify::report::Verdict;

#[test]
fn seven_of_eight_sizes_agree() {
    for (p, n) in CASE_SIZES {
        let q = p.pow(n);
        let report = gamma_case_report(p, n).unwrap();
        if q == 64 {
            assert_eq!(report.verdict, Verdict::Fail, "Γ(64) carries the finding");
            let findings: Vec<_> = report
                .witnesses
                .iter()
                .filter(|w| w.kind == "finding")
                .collect();
            assert_eq!(findings.len(), 1);
            assert!(findings[0].description.contains("|C|=7, |H/C|=6"));
            assert_eq!(findings[0].data["class0_max_orbit"], "42");
            assert_eq!(findings[0].data["class0_regular"], "true");
            assert_eq!(findings[0].data["class0_nilpotent"], "false");
            assert!(!findings[0].data["class0_generators"].is_empty());
        } else {
            assert_eq!(report.verdict, Verdict::Pass, "Γ({q})");
        }
    }
}

#[test]
fn gamma64_computed_rows() {
    let cases = gamma_cases(2, 6).unwrap();
    // (9, 6): the written orbit size 27 is correct.
    let nine_six: Vec<_> = cases
        .iter()
        .filter(|c| c.c_order == 9 && c.quotient_order == 6)
        .collect();
    assert_eq!(nine_six.len(), 1);
    assert!(!nine_six[0].nilpotent);
    assert_eq!(nine_six[0].max_orbit, 27);
    // (7, 6): order 42 with a regular orbit.
    let seven_six: Vec<_> = cases
        .iter()
        .filter(|c| c.c_order == 7 && c.quotient_order == 6)
        .collect();
    assert_eq!(seven_six.len(), 1);
    assert!(!seven_six[0].nilpotent);
    assert_eq!(seven_six[0].max_orbit, 42);
    assert!(seven_six[0].has_regular_orbit);
}

#[test]
fn full_semilinear_groups_are_transitive_on_nonzero() {
    for (p, n) in CASE_SIZES {
        let q = p.pow(n);
        let cases = gamma_cases(p, n).unwrap();
        let full = cases
            .iter()
            .find(|c| (c.c_order * c.quotient_order) as u128 == ((q - 1) * n as u64) as u128)
            .expect("full group class");
        assert_eq!(full.max_orbit, q - 1, "Γ({q}) is transitive on nonzero");
    }
}
