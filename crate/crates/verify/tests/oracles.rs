//! Oracle-equivalence tests: the optimized kernels against brute-force
//! power-set enumeration, and subgroup enumeration against an independent
//! generator-subset closure oracle.

use orbitcheck_core::linear;
use orbitcheck_core::subgroups;
use orbitcheck_core::zoo;
use orbitcheck_core::{Permutation, PermutationGroup};
use orbitcheck_verify::subset::{self, SearchMode, SubsetProblem};
use std::collections::HashSet;

/// Brute-force |S(H^#)|: iterate all subsets and all elements.
fn brute_subset_count(h: &PermutationGroup) -> u128 {
    let n = h.degree();
    assert!(n <= 16);
    let els: Vec<Permutation> = h.elements().unwrap().collect();
    let mut count = 0u128;
    for mask in 0..(1u64 << n) {
        for g in &els {
            if !g.is_identity() && g.image_of_mask(mask) == mask {
                count += 1;
            }
        }
    }
    count
}

/// Brute-force maximal stabilizer index over subsets of the complement.
fn brute_best_index(h_els: &[Permutation], n: u32, lambda: u64) -> u128 {
    let full = (1u64 << n) - 1;
    let avail = full & !lambda;
    let order = h_els.len() as u128;
    let mut best = 0u128;
    let mut sub = avail;
    loop {
        let stab = h_els
            .iter()
            .filter(|g| g.image_of_mask(sub) == sub)
            .count() as u128;
        best = best.max(order / stab);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & avail;
    }
    best
}

#[test]
fn subset_counts_agree_with_brute_force_on_small_catalog_groups() {
    for degree in [2u64, 3, 4, 5, 7, 8, 9, 11] {
        for entry in zoo::solvable_primitive_catalog(degree).unwrap() {
            if entry.degree > 12 || entry.order > 2000 {
                continue;
            }
            assert_eq!(
                subset::stabilized_subset_count(&entry.group).unwrap(),
                brute_subset_count(&entry.group),
                "degree {degree}"
            );
        }
    }
}

#[test]
fn find_delta_exhaustive_matches_brute_force() {
    for degree in [4u64, 8, 9] {
        for entry in zoo::solvable_primitive_catalog(degree).unwrap() {
            let lists = subgroups::nilpotent_subgroups(&entry.group).unwrap();
            for class in lists.classes.iter().filter(|c| c.order > 1) {
                let els: Vec<Permutation> = class.group.elements().unwrap().collect();
                for lambda in [0u64, 1, 3] {
                    let problem = SubsetProblem {
                        omega_size: degree as u32,
                        lambda,
                        m: lambda.count_ones(),
                        h_order: class.order,
                    };
                    let res = subset::find_delta(&els, &problem, SearchMode::Exhaustive).unwrap();
                    let expect = brute_best_index(&els, degree as u32, lambda);
                    assert_eq!(res.index, expect);
                    // The returned subset realizes the claimed index.
                    let stab = els
                        .iter()
                        .filter(|g| g.image_of_mask(res.delta) == res.delta)
                        .count() as u128;
                    assert_eq!(class.order / stab, res.index);
                    assert_eq!(res.delta & problem.lambda, 0);
                }
            }
        }
    }
}

#[test]
fn s4_subgroup_classes_against_generator_subset_oracle() {
    // Independent oracle: closures of all generator subsets of size <= 3,
    // deduplicated exactly, then grouped into conjugacy classes by brute
    // force.
    let s4 = PermutationGroup::symmetric(4);
    let els: Vec<Permutation> = s4.elements().unwrap().collect();
    let mut subgroups_exact: HashSet<Vec<Permutation>> = HashSet::new();
    let closure = |gens: &[&Permutation]| -> Vec<Permutation> {
        let mut set: HashSet<Permutation> = HashSet::new();
        set.insert(Permutation::identity(4));
        let mut frontier: Vec<Permutation> = vec![Permutation::identity(4)];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.then(g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let mut v: Vec<Permutation> = set.into_iter().collect();
        v.sort();
        v
    };
    for i in 0..els.len() {
        subgroups_exact.insert(closure(&[&els[i]]));
        for j in (i + 1)..els.len() {
            subgroups_exact.insert(closure(&[&els[i], &els[j]]));
            for k in (j + 1)..els.len() {
                subgroups_exact.insert(closure(&[&els[i], &els[j], &els[k]]));
            }
        }
    }
    assert_eq!(subgroups_exact.len(), 30, "S4 has 30 subgroups");
    // Group into conjugacy classes.
    let mut classes: Vec<Vec<Permutation>> = Vec::new();
    'outer: for sub in &subgroups_exact {
        for rep in &classes {
            if rep.len() != sub.len() {
                continue;
            }
            for x in &els {
                let mut conj: Vec<Permutation> = sub.iter().map(|s| s.conjugated_by(x)).collect();
                conj.sort();
                if &conj == rep {
                    continue 'outer;
                }
            }
        }
        classes.push(sub.clone());
    }
    assert_eq!(classes.len(), 11, "S4 has 11 subgroup classes");
    let list = subgroups::subgroups_up_to_conjugacy(&s4).unwrap();
    assert_eq!(list.classes.len(), 11);
}

#[test]
fn gamma8_order_21_by_map_enumeration() {
    let field = orbitcheck_core::field::FieldSpec::new(2, 3).unwrap();
    let maps = linear::all_semilinear_maps(&field).unwrap();
    assert_eq!(maps.len(), 21);
    let distinct: HashSet<Permutation> = maps.iter().cloned().collect();
    assert_eq!(distinct.len(), 21);
    for a in &maps {
        for b in &maps {
            assert!(distinct.contains(&a.then(b)), "closure under composition");
        }
    }
    let (gamma, _, _) = linear::make_gamma(2, 3).unwrap();
    assert_eq!(gamma.order(), 21);
}

#[test]
fn degree9_sylow2_delta_search_over_full_power_set() {
    // The order-16 nilpotent subgroup of the degree-9 affine group: an
    // exhaustive scan over all 2^9 subsets finds some Delta with
    // index^2 >= 32 (the m = 0 case).
    let entries = zoo::solvable_primitive_catalog(9).unwrap();
    let mut found = false;
    for entry in &entries {
        let lists = subgroups::nilpotent_subgroups(&entry.group).unwrap();
        for class in lists.classes.iter().filter(|c| c.order == 16) {
            found = true;
            let els: Vec<Permutation> = class.group.elements().unwrap().collect();
            let problem = SubsetProblem {
                omega_size: 9,
                lambda: 0,
                m: 0,
                h_order: 16,
            };
            let res = subset::find_delta(&els, &problem, SearchMode::Exhaustive).unwrap();
            assert!(res.index * res.index >= 32, "index {}", res.index);
            assert!(res.satisfied);
        }
    }
    assert!(found, "a degree-9 entry has an order-16 nilpotent subgroup");
}
