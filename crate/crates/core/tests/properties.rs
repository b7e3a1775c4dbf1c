//! Property tests with independent oracles: chain orders against closure
//! enumeration, cycle counts against a cycle-minimum recount, orbit
//! refinement, and the Sylow-normality characterization of nilpotency.

use orbitcheck_core::classify;
use orbitcheck_core::{PermutationGroup, Permutation};
use proptest::prelude::*;
use std::collections::HashSet;

fn arb_permutation(degree: usize) -> impl Strategy<Value = Permutation> {
    Just(degree).prop_perturb(move |d, mut rng| {
        let mut images: Vec<u32> = (0..d as u32).collect();
        for i in (1..d).rev() {
            let j = (rng.next_u32() as usize) % (i + 1);
            images.swap(i, j);
        }
        Permutation::from_images(images).unwrap()
    })
}

fn arb_group(degree: usize, gens: usize) -> impl Strategy<Value = PermutationGroup> {
    proptest::collection::vec(arb_permutation(degree), 1..=gens)
        .prop_map(|gens| PermutationGroup::from_generators(gens).unwrap())
}

/// Order by brute-force closure, independent of the stabilizer chain.
fn closure_order(g: &PermutationGroup) -> usize {
    let mut set: HashSet<Permutation> = HashSet::new();
    let mut frontier = vec![Permutation::identity(g.degree())];
    set.insert(frontier[0].clone());
    while let Some(x) = frontier.pop() {
        for gen in g.generators_arc() {
            let y = x.then(gen);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set.len()
}

/// Independent cycle-count oracle: points that are minimal in their cycle.
fn cycle_count_oracle(g: &Permutation) -> u32 {
    let n = g.degree();
    let mut count = 0u32;
    for p in 0..n as u32 {
        let mut minimal = true;
        let mut x = g.apply(p);
        while x != p {
            if x < p {
                minimal = false;
                break;
            }
            x = g.apply(x);
        }
        if minimal {
            count += 1;
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chain_order_equals_closure_order(g in arb_group(7, 3)) {
        prop_assume!(g.order() <= 5040);
        prop_assert_eq!(g.order() as usize, closure_order(&g));
    }

    #[test]
    fn cycle_count_matches_minimum_recount(g in arb_permutation(12)) {
        let st = g.cycle_stats().unwrap();
        prop_assert_eq!(st.cycle_count, cycle_count_oracle(&g));
    }

    #[test]
    fn membership_enumeration_consistent(g in arb_group(6, 2)) {
        for e in g.elements().unwrap() {
            prop_assert!(g.contains(&e));
        }
        prop_assert_eq!(g.elements().unwrap().count() as u128, g.order());
    }

    #[test]
    fn subgroup_orbits_refine_group_orbits(gens in proptest::collection::vec(arb_permutation(9), 2..=3)) {
        let g = PermutationGroup::from_generators(gens.clone()).unwrap();
        let h = PermutationGroup::from_generators(vec![gens[0].clone()]).unwrap();
        let g_orbits = g.orbit_partition();
        for h_orbit in h.orbit_partition() {
            let covering = g_orbits
                .iter()
                .find(|o| o.contains(&h_orbit[0]))
                .expect("partition covers all points");
            for p in &h_orbit {
                prop_assert!(covering.contains(p));
            }
        }
    }
}

/// Nilpotency agrees with "the p-elements form a subgroup for every prime"
/// (normal Sylow characterization) over an assorted corpus of small groups.
#[test]
fn nilpotency_matches_sylow_oracle() {
    let mut corpus: Vec<PermutationGroup> = vec![
        PermutationGroup::symmetric(3),
        PermutationGroup::symmetric(4),
        PermutationGroup::cyclic(12),
        PermutationGroup::trivial(4),
        PermutationGroup::from_generators(vec![
            Permutation::parse("1 2 3 0").unwrap(),
            Permutation::parse("2 1 0 3").unwrap(),
        ])
        .unwrap(), // D4
        PermutationGroup::from_generators(vec![
            Permutation::parse("1 0 3 2 4 5").unwrap(),
            Permutation::parse("0 1 2 3 5 4").unwrap(),
        ])
        .unwrap(), // C2 x C2
    ];
    for n in [4u64, 8, 9] {
        for e in orbitcheck_core::zoo::solvable_primitive_catalog(n).unwrap() {
            if e.order <= 2000 {
                corpus.push(e.group.clone());
            }
        }
    }
    for g in &corpus {
        assert!(g.order() <= 2000);
        let elements: Vec<Permutation> = g.elements().unwrap().collect();
        let mut oracle_nilpotent = true;
        let order = g.order() as u64;
        let mut rest = order;
        let mut primes = Vec::new();
        let mut d = 2u64;
        while d * d <= rest {
            if rest % d == 0 {
                primes.push(d);
                while rest % d == 0 {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            primes.push(rest);
        }
        for &p in &primes {
            // p-elements must be closed under multiplication.
            let p_els: Vec<&Permutation> = elements
                .iter()
                .filter(|e| {
                    let mut o = e.order().unwrap();
                    while o % p as u128 == 0 {
                        o /= p as u128;
                    }
                    o == 1
                })
                .collect();
            'outer: for a in &p_els {
                for b in &p_els {
                    let c = a.then(b);
                    let mut o = c.order().unwrap();
                    while o % p as u128 == 0 {
                        o /= p as u128;
                    }
                    if o != 1 {
                        oracle_nilpotent = false;
                        break 'outer;
                    }
                }
            }
            if !oracle_nilpotent {
                break;
            }
        }
        assert_eq!(
            classify::is_nilpotent(g).unwrap(),
            oracle_nilpotent,
            "nilpotency disagrees for group of order {}",
            g.order()
        );
    }
}
