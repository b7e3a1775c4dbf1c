//! Catalog construction across the tier-1 degrees, with the structural
//! invariants every entry must satisfy.

use orbitcheck_core::classify;
use orbitcheck_core::subgroups;
use orbitcheck_core::zoo::{self, build_catalog};

#[test]
fn prime_degree_catalogs_follow_divisors() {
    for (p, expect) in [(2u64, 1usize), (3, 2), (5, 3), (7, 4), (11, 4)] {
        let entries = zoo::solvable_primitive_catalog(p).unwrap();
        assert_eq!(entries.len(), expect, "degree {p}");
        for e in &entries {
            assert_eq!(e.order % p as u128, 0);
            assert!(e.flags.is_primitive && e.flags.is_solvable);
        }
    }
}

#[test]
fn degree_9_catalog_orders() {
    let entries = zoo::solvable_primitive_catalog(9).unwrap();
    // Largest is AGL(2,3) itself (order 432); all contain the translations.
    assert!(entries.iter().any(|e| e.order == 432));
    for e in &entries {
        assert_eq!(e.degree, 9);
        assert_eq!(e.order % 9, 0);
        assert!(e.flags.is_primitive && e.flags.is_solvable);
    }
}

#[test]
fn degree_25_and_27_catalogs_build() {
    let entries25 = zoo::solvable_primitive_catalog(25).unwrap();
    assert!(!entries25.is_empty());
    // The Q8-normalizer route gives a solvable irreducible subgroup of
    // GL(2,5) of order 96.
    assert!(entries25.iter().any(|e| e.order == 25 * 96));

    let entries27 = zoo::solvable_primitive_catalog(27).unwrap();
    assert!(!entries27.is_empty());
    for e in &entries27 {
        assert_eq!(e.order % 27, 0);
    }
}

#[test]
fn degree_32_catalog_is_semilinear_complete() {
    let entries = zoo::solvable_primitive_catalog(32).unwrap();
    let orders: Vec<u128> = entries.iter().map(|e| e.order).collect();
    assert_eq!(orders, vec![992, 4960]);
    let routes = zoo::degree_routes(32).unwrap();
    assert!(routes.complete);
    assert_eq!(routes.tier, 1);
}

#[test]
fn degree_16_catalog_builds_exhaustively() {
    let entries = zoo::solvable_primitive_catalog(16).unwrap();
    assert!(!entries.is_empty());
    // Some entry supports the order-128 nilpotent subgroup (16 * 8).
    let max_two_part = entries
        .iter()
        .map(|e| {
            let mut o = e.order;
            let mut t = 1u128;
            while o % 2 == 0 {
                o /= 2;
                t *= 2;
            }
            t
        })
        .max()
        .unwrap();
    assert!(max_two_part >= 128, "2-part {max_two_part}");
    for e in &entries {
        assert!(e.flags.is_primitive && e.flags.is_solvable);
    }
}

#[test]
fn every_entry_has_regular_translation_socle() {
    // The translation subgroup (order p^d) is the unique minimal normal
    // subgroup and acts regularly; |G| = p^d * |G_0|.
    let catalog = build_catalog(&[4, 8, 9]).unwrap();
    for (&n, entries) in &catalog.entries {
        for e in entries {
            let stab = e.group.point_stabilizer(0).unwrap();
            assert_eq!(stab.order() * n as u128, e.order);
            assert_eq!(e.group.orbit_of(0).len() as u64, n);
        }
    }
}

#[test]
fn largest_nilpotent_small_degrees() {
    for (n, expect) in [(4u64, 8u128), (8, 8), (9, 27)] {
        let entries = zoo::solvable_primitive_catalog(n).unwrap();
        let groups: Vec<_> = entries.iter().map(|e| e.group.clone()).collect();
        let (best, wits) = subgroups::largest_nilpotent_order(&groups).unwrap();
        assert_eq!(best, expect, "degree {n}");
        assert!(!wits.is_empty());
        for w in &wits {
            assert!(classify::is_nilpotent(&w.group).unwrap());
        }
    }
}
