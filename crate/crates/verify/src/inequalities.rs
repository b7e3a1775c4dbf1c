//! Global inequality scans:
//! (a) `n^(beta+1)/2 <= 2^(n/6)` over `2 <= n <= 4096` (interval
//!     arithmetic, exact threshold reported);
//! (b) `n³ <= 2^(n-1)` for primes, refuted at `n = 11`;
//! (c) `|H|³ · (2^ν)² <= 2^(2n)` per reference degree with the crude cycle
//!     bound `ν = (p+1)·n/(2p)`, expected to fail exactly at
//!     `{4, 8, 9, 16, 27}`.

use crate::bounds::{self, BoundConstants, BoundVerdict};
use crate::report::{ClaimReport, Verdict, Witness};
use num_bigint::BigUint;
use orbitcheck_core::field::is_prime;
use orbitcheck_core::Result;

pub const SCAN_LIMIT: u64 = 4096;
pub const EXPECTED_CRUDE_FAILURES: [u64; 5] = [4, 8, 9, 16, 27];

/// Part (a): scan and report the threshold above which the growth bound
/// holds for all larger n in range.
pub fn scan_growth_bound(consts: &BoundConstants) -> Result<(ClaimReport, Vec<u64>)> {
    let mut report = ClaimReport::new(
        "inequalities",
        vec![],
        format!("n^(beta+1)/2 <= 2^(n/6) over 2 <= n <= {SCAN_LIMIT}"),
    );
    let mut failures = Vec::new();
    let mut indeterminate = 0u64;
    for n in 2..=SCAN_LIMIT {
        match bounds::half_pow_beta_plus_one_le_two_pow_sixth(n, consts) {
            BoundVerdict::Holds => {}
            BoundVerdict::Fails => failures.push(n),
            BoundVerdict::Indeterminate => {
                indeterminate += 1;
                report.merge_verdict(Verdict::Indeterminate);
            }
        }
    }
    let largest_failure = failures.last().copied();
    let threshold = largest_failure.map(|f| f + 1).unwrap_or(2);
    report.set_number("largest_failing_n", largest_failure.unwrap_or(0));
    report.set_number("holds_for_all_n_at_least", threshold);
    report.set_number("indeterminate_comparisons", indeterminate);
    report.set_number(
        "confirmed_97_to_4096",
        (97..=SCAN_LIMIT).all(|n| !failures.contains(&n)) && indeterminate == 0,
    );
    Ok((report, failures))
}

/// Part (b): `n³ <= 2^(n-1)` over primes in `[13, 4096]`, and the explicit
/// refutation at `n = 11`.
pub fn scan_prime_cubes() -> ClaimReport {
    let mut report = ClaimReport::new(
        "inequalities",
        vec![],
        format!("n^3 <= 2^(n-1) over primes 13 <= n <= {SCAN_LIMIT}, refutation at 11"),
    );
    let mut failures = Vec::new();
    for n in (13..=SCAN_LIMIT).filter(|&n| is_prime(n)) {
        let lhs = BigUint::from(n).pow(3);
        let rhs = BigUint::from(2u32).pow((n - 1) as u32);
        if lhs > rhs {
            failures.push(n);
            report.merge_verdict(Verdict::Fail);
            report
                .witnesses
                .push(Witness::new("counterexample", format!("prime {n} violates n^3 <= 2^(n-1)")));
        }
    }
    // n = 11: 1331 > 1024 must fail.
    let eleven_fails = BigUint::from(11u32).pow(3) > BigUint::from(2u32).pow(10);
    report.set_number("prime_failures_13_to_4096", failures.len());
    report.set_number("refuted_at_11", eleven_fails);
    report.set_number("lhs_at_11", 11u64.pow(3));
    report.set_number("rhs_at_11", 2u64.pow(10));
    if !eleven_fails {
        report.merge_verdict(Verdict::Fail);
    }
    report
}

/// Part (c): for each reference degree, substitute the computed largest
/// nilpotent order and the crude cycle bound into the squared inequality.
/// Returns the failing degrees, which must equal `{4, 8, 9, 16, 27}`.
pub fn crude_bound_failures(largest_by_degree: &[(u64, u128)]) -> Result<(ClaimReport, Vec<u64>)> {
    let mut report = ClaimReport::new(
        "inequalities",
        largest_by_degree.iter().map(|(d, _)| *d).collect(),
        "|H|^3 * (2^((p+1)n/2p))^2 <= 2^(2n) with computed largest |H|".to_string(),
    );
    let mut failures = Vec::new();
    for &(n, h) in largest_by_degree {
        let routes = orbitcheck_core::zoo::degree_routes(n)?;
        let p = routes.p;
        // nu = (p+1)·n/(2p) is an integer for prime-power n = p^d >= p^2,
        // and for n = p it equals (p+1)/2 rounded via exact division below.
        let nu = ((p + 1) * n) / (2 * p);
        debug_assert_eq!(((p + 1) * n) % (2 * p), 0, "crude bound exponent not integral");
        let lhs = BigUint::from(h).pow(3) * BigUint::from(2u32).pow(2 * nu as u32);
        let rhs = BigUint::from(2u32).pow(2 * n as u32);
        let fails = lhs > rhs;
        if fails {
            failures.push(n);
        }
        report.witnesses.push(
            Witness::new("row", format!("degree {n}: crude-bound inequality {}", if fails { "fails" } else { "holds" }))
                .with("largest_order", h)
                .with("nu", nu)
                .with("lhs", lhs.to_string())
                .with("rhs", rhs.to_string()),
        );
    }
    report.set_number(
        "failing_degrees",
        failures
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("+"),
    );
    let expected: Vec<u64> = EXPECTED_CRUDE_FAILURES.to_vec();
    report.set_number("expected_failing_degrees", "4+8+9+16+27");
    if failures != expected {
        report.merge_verdict(Verdict::Fail);
        report.witnesses.push(
            Witness::new("finding", "crude-bound failure set differs from the expected set")
                .with("computed", format!("{failures:?}"))
                .with("expected", format!("{expected:?}")),
        );
    }
    Ok((report, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_scan_brackets_the_threshold() {
        let (report, failures) = scan_growth_bound(&BoundConstants::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(failures.contains(&95));
        assert!(!failures.contains(&96));
        assert!(!failures.contains(&97));
        assert!(failures.iter().all(|&n| n < 97));
        assert_eq!(report.numbers["confirmed_97_to_4096"], "true");
    }

    #[test]
    fn prime_cube_scan() {
        let report = scan_prime_cubes();
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.numbers["prime_failures_13_to_4096"], "0");
        assert_eq!(report.numbers["refuted_at_11"], "true");
    }

    #[test]
    fn crude_failures_with_reference_orders() {
        let reference: Vec<(u64, u128)> = crate::order_bounds::REFERENCE_LARGEST.to_vec();
        let (report, failures) = crude_bound_failures(&reference).unwrap();
        assert_eq!(failures, vec![4, 8, 9, 16, 27]);
        assert_eq!(report.verdict, Verdict::Pass);
    }
}
