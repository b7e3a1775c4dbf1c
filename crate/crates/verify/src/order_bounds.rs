//! Largest nilpotent subgroup orders per degree (the reference table), and
//! the order bounds `|H| <= 2^n` and `|H| <= n^(beta+1)/2` over every
//! nilpotent class of every catalog entry.

use crate::bounds::{self, BoundConstants, BoundVerdict};
use crate::report::{ClaimReport, Verdict, Witness};
use num_bigint::BigUint;
use orbitcheck_core::subgroups;
use orbitcheck_core::zoo::CatalogEntry;
use orbitcheck_core::Result;

/// Reference values for the largest nilpotent subgroup order by degree.
pub const REFERENCE_LARGEST: [(u64, u128); 10] = [
    (4, 8),
    (8, 8),
    (9, 27),
    (16, 128),
    (25, 32),
    (27, 81),
    (32, 32),
    (49, 96),
    (64, 1024),
    (81, 729),
];

pub fn reference_largest(degree: u64) -> Option<u128> {
    REFERENCE_LARGEST
        .iter()
        .find(|(d, _)| *d == degree)
        .map(|(_, v)| *v)
}

/// Computes the largest nilpotent order over a degree's entries and compares
/// it with the reference value; mismatches become findings with witnesses.
pub fn verify_table1_degree(
    degree: u64,
    entries: &[CatalogEntry],
    tier: u8,
    completeness: &str,
) -> Result<ClaimReport> {
    let mut report = ClaimReport::new(
        "table1",
        vec![degree],
        format!("largest nilpotent subgroup order over {} entries of degree {}", entries.len(), degree),
    );
    report.tier = tier;
    report.completeness = completeness.to_string();
    let groups: Vec<_> = entries.iter().map(|e| e.group.clone()).collect();
    let (best, witnesses) = subgroups::largest_nilpotent_order(&groups)?;
    report.set_number("largest_nilpotent_order", best);
    for w in witnesses.iter().take(4) {
        report.witnesses.push(
            Witness::new("witness", format!("nilpotent subgroup of maximal order at degree {degree}"))
                .with("order", w.order)
                .with("entry_route", entries[w.source].route.clone())
                .with("entry_order", entries[w.source].order)
                .with(
                    "generators",
                    w.group
                        .generators()
                        .iter()
                        .map(|g| g.to_text())
                        .collect::<Vec<_>>()
                        .join("; "),
                ),
        );
    }
    match reference_largest(degree) {
        Some(expected) => {
            report.set_number("expected", expected);
            if best != expected {
                report.merge_verdict(Verdict::Fail);
                report.witnesses.push(
                    Witness::new("finding", format!("computed largest order differs at degree {degree}"))
                        .with("computed", best)
                        .with("expected", expected)
                        .with("completeness", completeness),
                );
            }
        }
        None => {
            report.merge_verdict(Verdict::IncompleteUniverse);
        }
    }
    Ok(report)
}

/// `|H| <= 2^n` and `|H| <= n^(beta+1)/2` for every nilpotent class of every
/// entry at one degree, plus the point-stabilizer bound `|H_0| <= n^beta/2`.
pub fn verify_order_bounds_degree(
    degree: u64,
    entries: &[CatalogEntry],
    tier: u8,
    completeness: &str,
    consts: &BoundConstants,
) -> Result<ClaimReport> {
    let mut report = ClaimReport::new(
        "lemma25",
        vec![degree],
        format!("nilpotent order bounds over {} entries of degree {}", entries.len(), degree),
    );
    report.tier = tier;
    report.completeness = completeness.to_string();
    let two_pow_n = BigUint::from(2u32).pow(degree as u32);
    let mut largest: u128 = 1;
    for entry in entries {
        let classes = subgroups::nilpotent_subgroups(&entry.group)?;
        for class in &classes.classes {
            largest = largest.max(class.order);
            let h = BigUint::from(class.order);
            if h > two_pow_n {
                report.merge_verdict(Verdict::Fail);
                report.witnesses.push(
                    Witness::new("counterexample", "order exceeds 2^n")
                        .with("degree", degree)
                        .with("order", class.order)
                        .with("entry_route", entry.route.clone()),
                );
            }
            match bounds::le_half_pow_beta_plus_one(&h, degree, consts) {
                BoundVerdict::Holds => {}
                BoundVerdict::Fails => {
                    report.merge_verdict(Verdict::Fail);
                    report.witnesses.push(
                        Witness::new("counterexample", "order exceeds n^(beta+1)/2")
                            .with("degree", degree)
                            .with("order", class.order)
                            .with("entry_route", entry.route.clone()),
                    );
                }
                BoundVerdict::Indeterminate => {
                    report.merge_verdict(Verdict::Indeterminate);
                    report.witnesses.push(
                        Witness::new("finding", "interval comparison straddles equality")
                            .with("degree", degree)
                            .with("order", class.order),
                    );
                }
            }
            // Point-stabilizer part: |H ∩ G_0| <= n^beta / 2, i.e.
            // 2·|H_0| <= n^beta.
            let h0 = class.group.point_stabilizer(0)?.order();
            match bounds::le_pow_beta(&BigUint::from(2 * h0), degree, consts) {
                BoundVerdict::Holds => {}
                BoundVerdict::Fails => {
                    report.merge_verdict(Verdict::Fail);
                    report.witnesses.push(
                        Witness::new("counterexample", "stabilizer order exceeds n^beta/2")
                            .with("degree", degree)
                            .with("stabilizer_order", h0)
                            .with("entry_route", entry.route.clone()),
                    );
                }
                BoundVerdict::Indeterminate => {
                    report.merge_verdict(Verdict::Indeterminate);
                }
            }
        }
    }
    report.set_number("largest_nilpotent_order", largest);
    if let Some(expected) = reference_largest(degree) {
        report.set_number("expected", expected);
        if largest != expected {
            report.merge_verdict(Verdict::Fail);
            report.witnesses.push(
                Witness::new("finding", "largest order differs from the reference table")
                    .with("computed", largest)
                    .with("expected", expected),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use orbitcheck_core::zoo;

    #[test]
    fn table1_small_degrees() {
        for (n, expect) in [(4u64, 8u128), (8, 8), (9, 27)] {
            let entries = zoo::solvable_primitive_catalog(n).unwrap();
            let report = verify_table1_degree(n, &entries, 1, "complete").unwrap();
            assert_eq!(report.verdict, Verdict::Pass);
            assert_eq!(report.numbers["largest_nilpotent_order"], expect.to_string());
        }
    }

    #[test]
    fn order_bounds_degree_9() {
        let entries = zoo::solvable_primitive_catalog(9).unwrap();
        let report =
            verify_order_bounds_degree(9, &entries, 1, "complete", &BoundConstants::default())
                .unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.numbers["largest_nilpotent_order"], "27");
    }
}
