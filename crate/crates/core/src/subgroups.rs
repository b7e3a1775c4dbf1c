//! Subgroup enumeration up to conjugacy by cyclic extension.
//!
//! Starting from the trivial group, each class representative `U` is extended
//! by elements `z` of prime order modulo `U` drawn from `N_G(U)`; candidates
//! are restricted to prime-power-order elements (their p-parts reach the same
//! extensions). Layer results are deduplicated by the exact conjugation
//! orbit, so representatives are pairwise non-conjugate.
//!
//! Reachability: every solvable subgroup has a subnormal series with prime
//! indices, so cyclic extension enumerates exactly the solvable subgroups of
//! the ambient group (all subgroups when the ambient is solvable). With
//! `nilpotent_only`, extensions are restricted to `z` centralizing the
//! complement of its prime in `U`; subgroups of nilpotent groups are
//! nilpotent and every maximal subgroup of a nilpotent group is normal of
//! prime index, so the restriction is exhaustive for nilpotent targets and
//! every produced extension is nilpotent by construction.

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::index::GroupIndex;
use crate::perm::Permutation;
use rayon::prelude::*;
use std::collections::HashMap;

/// Default ambient cap for full subgroup enumeration.
pub const GENERAL_ENUM_CAP: u128 = 25_000;
/// Default ambient cap for nilpotent-only enumeration.
pub const NILPOTENT_ENUM_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    pub ambient_cap: u128,
    pub nilpotent_only: bool,
}

/// One conjugacy class of subgroups.
#[derive(Debug, Clone)]
pub struct SubgroupClass {
    pub group: PermutationGroup,
    pub order: u128,
    pub class_size: u64,
    /// For nilpotent enumerations: no nilpotent overgroup exists in the
    /// ambient group (equivalently, the class admitted no extension).
    pub is_maximal: bool,
    /// Canonical class key: the lexicographically least conjugate, as sorted
    /// element ranks in the ambient index.
    pub canonical_ranks: Vec<u32>,
}

/// Representatives of subgroup classes of one ambient group.
#[derive(Debug)]
pub struct SubgroupList {
    pub ambient_order: u128,
    pub ambient_degree: usize,
    pub classes: Vec<SubgroupClass>,
}

impl SubgroupList {
    pub fn largest_order(&self) -> u128 {
        self.classes.iter().map(|c| c.order).max().unwrap_or(1)
    }
}

struct ClassRec {
    set: Vec<u32>,
    gens: Vec<u32>,
    class_size: u64,
    extended: bool,
}

fn perm_order_u64(g: &Permutation) -> u64 {
    g.order().map(|o| o as u64).unwrap_or(u64::MAX)
}

fn prime_power(mut n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            return if n == 1 { Some((p, e)) } else { None };
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Some((n, 1))
}

/// Greedy generator extraction from a sorted subgroup rank set.
fn extract_gens(idx: &GroupIndex, set: &[u32]) -> Vec<u32> {
    let mut gens: Vec<u32> = Vec::new();
    let mut span: Vec<u32> = vec![0];
    for &r in set {
        if r == 0 || span.binary_search(&r).is_ok() {
            continue;
        }
        gens.push(r);
        span = idx.closure(&gens);
        if span.len() == set.len() {
            break;
        }
    }
    gens
}

/// The full cyclic-extension engine.
pub fn subgroup_classes(g: &PermutationGroup, opts: EnumOptions) -> Result<SubgroupList> {
    if g.order() > opts.ambient_cap {
        return Err(Error::SubgroupCap(g.order(), opts.ambient_cap));
    }
    let idx = GroupIndex::build(g, opts.ambient_cap)?;
    let mut classes: Vec<ClassRec> = vec![ClassRec {
        set: vec![0],
        gens: vec![],
        class_size: 1,
        extended: false,
    }];
    // Member hash -> class id, fed with every conjugate of every class.
    // 128-bit content hashes; a collision would merge two classes, with
    // probability ~|subgroups|^2 / 2^128. Order equality is re-checked on
    // every hit.
    let mut member_hash: HashMap<u128, u32> = HashMap::new();
    member_hash.insert(GroupIndex::set_hash(&classes[0].set), 0);

    let mut layer: Vec<u32> = vec![0];
    while !layer.is_empty() {
        let mut next_layer: Vec<u32> = Vec::new();
        // Expansion is independent per class; dedup is a sequential merge in
        // deterministic (sorted) class order.
        let expansions: Vec<(u32, Vec<Vec<u32>>)> = {
            let sets: Vec<(u32, Vec<u32>)> = layer
                .iter()
                .map(|&cid| (cid, classes[cid as usize].set.clone()))
                .collect();
            sets.into_par_iter()
                .map(|(cid, u_set)| {
                    extension_candidates(&idx, &u_set, opts.nilpotent_only).map(|c| (cid, c))
                })
                .collect::<Result<_>>()?
        };
        for (cid, candidates) in expansions {
            for w_set in candidates {
                classes[cid as usize].extended = true;
                let h = GroupIndex::set_hash(&w_set);
                if let Some(&known) = member_hash.get(&h) {
                    debug_assert_eq!(classes[known as usize].set.len(), w_set.len());
                    continue;
                }
                let new_id = classes.len() as u32;
                let mut sink = |mh: u128| {
                    member_hash.insert(mh, new_id);
                };
                let (canonical, orbit_len) = idx.canonical_class_key(&w_set, Some(&mut sink));
                let gens = extract_gens(&idx, &canonical);
                classes.push(ClassRec {
                    set: canonical,
                    gens,
                    class_size: orbit_len,
                    extended: false,
                });
                next_layer.push(new_id);
            }
        }
        // Deterministic processing order for the next layer.
        next_layer.sort_by(|&a, &b| classes[a as usize].set.cmp(&classes[b as usize].set));
        layer = next_layer;
    }

    // Materialize representatives, sorted by (order, canonical key).
    let mut order_ids: Vec<u32> = (0..classes.len() as u32).collect();
    order_ids.sort_by(|&a, &b| {
        let (ca, cb) = (&classes[a as usize], &classes[b as usize]);
        ca.set
            .len()
            .cmp(&cb.set.len())
            .then_with(|| ca.set.cmp(&cb.set))
    });
    let mut out = Vec::with_capacity(classes.len());
    for id in order_ids {
        let rec = &classes[id as usize];
        let gen_perms: Vec<Permutation> = if rec.gens.is_empty() {
            vec![Permutation::identity(g.degree())]
        } else {
            rec.gens.iter().map(|&r| idx.element(r)).collect()
        };
        let group = PermutationGroup::from_generators(gen_perms)?;
        if group.order() != rec.set.len() as u128 {
            return Err(Error::Internal(
                "extracted generators do not span the class representative".into(),
            ));
        }
        out.push(SubgroupClass {
            group,
            order: rec.set.len() as u128,
            class_size: rec.class_size,
            is_maximal: !rec.extended,
            canonical_ranks: rec.set.clone(),
        });
    }
    Ok(SubgroupList {
        ambient_order: g.order(),
        ambient_degree: g.degree(),
        classes: out,
    })
}

/// All extensions `W = U·⟨z⟩` of prime index over `U`, as sorted rank sets,
/// deduplicated by exact set equality within the parent.
fn extension_candidates(
    idx: &GroupIndex,
    u_set: &[u32],
    nilpotent_only: bool,
) -> Result<Vec<Vec<u32>>> {
    let mut ngens = idx.normalizer_gens(u_set);
    for &r in u_set {
        if r != 0 && !ngens.contains(&r) {
            ngens.push(r);
        }
    }
    ngens.sort_unstable();
    let n_group = if ngens.is_empty() {
        PermutationGroup::trivial(idx.degree())
    } else {
        PermutationGroup::from_generators(ngens.iter().map(|&r| idx.element(r)).collect())?
    };

    // Element permutations of U, for coset construction.
    let u_perms: Vec<Permutation> = u_set.iter().map(|&r| idx.element(r)).collect();

    // q'-part generators per prime, computed on demand (nilpotent mode). In
    // a nilpotent subgroup the elements of order coprime to q form the
    // q-complement subgroup.
    let mut coprime_gens: HashMap<u64, Vec<Permutation>> = HashMap::new();
    let coprime_part = |q: u64| -> Vec<Permutation> {
        let part: Vec<u32> = u_set
            .iter()
            .copied()
            .filter(|&r| idx.element_order(r) as u64 % q != 0)
            .collect();
        let gens = extract_gens(idx, &part);
        gens.into_iter().map(|r| idx.element(r)).collect()
    };

    let mut covered: Vec<bool> = vec![false; idx.size() as usize];
    for &r in u_set {
        covered[r as usize] = true;
    }
    let mut out: Vec<Vec<u32>> = Vec::new();

    for z in n_group.elements_with_cap(idx.size() as u128)? {
        // Cheap filters first; ranking is the expensive step.
        let Some((q, _)) = prime_power(perm_order_u64(&z)) else {
            continue;
        };
        if nilpotent_only {
            let gens = coprime_gens
                .entry(q)
                .or_insert_with(|| coprime_part(q));
            if gens
                .iter()
                .any(|gq| z.then(gq) != gq.then(&z))
            {
                continue;
            }
        }
        let Some(zr) = idx.rank(&z) else {
            return Err(Error::Internal("normalizer element outside ambient".into()));
        };
        if covered[zr as usize] {
            continue;
        }
        let zq = z.pow(q);
        let Some(zqr) = idx.rank(&zq) else {
            return Err(Error::Internal("power escaped the ambient".into()));
        };
        if u_set.binary_search(&zqr).is_err() {
            continue;
        }
        // W = U ∪ U·z ∪ … ∪ U·z^{q-1}.
        let mut w: Vec<u32> = u_set.to_vec();
        let mut zi = Permutation::identity(idx.degree());
        for _ in 1..q {
            zi.compose_in_place(&z);
            for u in &u_perms {
                let e = u.then(&zi);
                let Some(r) = idx.rank(&e) else {
                    return Err(Error::Internal("coset element outside ambient".into()));
                };
                w.push(r);
            }
        }
        w.sort_unstable();
        w.dedup();
        if w.len() != u_set.len() * q as usize {
            return Err(Error::Internal("extension has unexpected order".into()));
        }
        for &r in &w {
            covered[r as usize] = true;
        }
        out.push(w);
    }
    Ok(out)
}

/// All subgroups up to conjugacy (complete for solvable ambient groups; for
/// a non-solvable ambient this enumerates exactly the solvable subgroups).
pub fn subgroups_up_to_conjugacy(g: &PermutationGroup) -> Result<SubgroupList> {
    subgroup_classes(
        g,
        EnumOptions {
            ambient_cap: GENERAL_ENUM_CAP,
            nilpotent_only: false,
        },
    )
}

/// All nilpotent subgroups up to conjugacy, with maximality flags.
pub fn nilpotent_subgroups(g: &PermutationGroup) -> Result<SubgroupList> {
    subgroup_classes(
        g,
        EnumOptions {
            ambient_cap: NILPOTENT_ENUM_CAP,
            nilpotent_only: true,
        },
    )
}

/// Witness for a largest-nilpotent-order computation.
#[derive(Debug, Clone)]
pub struct LargestNilpotentWitness {
    pub source: usize,
    pub group: PermutationGroup,
    pub order: u128,
}

/// Maximum nilpotent subgroup order over a family of groups, with all
/// witnesses of the maximal order (one per class per source group).
pub fn largest_nilpotent_order(
    groups: &[PermutationGroup],
) -> Result<(u128, Vec<LargestNilpotentWitness>)> {
    let mut best: u128 = 0;
    let mut witnesses = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        let list = nilpotent_subgroups(g)?;
        for class in &list.classes {
            if class.order > best {
                best = class.order;
                witnesses.clear();
            }
            if class.order == best {
                witnesses.push(LargestNilpotentWitness {
                    source: i,
                    group: class.group.clone(),
                    order: class.order,
                });
            }
        }
    }
    Ok((best, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify;

    #[test]
    fn cyclic_six_has_four_subgroups() {
        let c6 = PermutationGroup::cyclic(6);
        let list = subgroups_up_to_conjugacy(&c6).unwrap();
        let orders: Vec<u128> = list.classes.iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn trivial_group_has_one_subgroup() {
        let t = PermutationGroup::trivial(3);
        let list = subgroups_up_to_conjugacy(&t).unwrap();
        assert_eq!(list.classes.len(), 1);
    }

    #[test]
    fn s4_has_eleven_classes() {
        let s4 = PermutationGroup::symmetric(4);
        let list = subgroups_up_to_conjugacy(&s4).unwrap();
        assert_eq!(list.classes.len(), 11);
        let total: u64 = list.classes.iter().map(|c| c.class_size).sum();
        assert_eq!(total, 30); // S4 has 30 subgroups
    }

    #[test]
    fn s4_nilpotent_classes() {
        let s4 = PermutationGroup::symmetric(4);
        let list = nilpotent_subgroups(&s4).unwrap();
        let orders: Vec<u128> = list.classes.iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![1, 2, 2, 3, 4, 4, 4, 8]);
        for c in &list.classes {
            assert!(classify::is_nilpotent(&c.group).unwrap());
        }
        // D4 is the unique maximal nilpotent 2-subgroup; C3 is maximal too.
        let maximal: Vec<u128> = list
            .classes
            .iter()
            .filter(|c| c.is_maximal)
            .map(|c| c.order)
            .collect();
        assert_eq!(maximal, vec![3, 8]);
    }

    #[test]
    fn abelian_group_all_subgroups_nilpotent() {
        let c12 = PermutationGroup::cyclic(12);
        let all = subgroups_up_to_conjugacy(&c12).unwrap();
        let nil = nilpotent_subgroups(&c12).unwrap();
        assert_eq!(all.classes.len(), nil.classes.len());
        assert_eq!(nil.largest_order(), 12);
    }

    #[test]
    fn largest_nilpotent_in_s4_is_eight() {
        let (best, wits) = largest_nilpotent_order(&[PermutationGroup::symmetric(4)]).unwrap();
        assert_eq!(best, 8);
        assert_eq!(wits.len(), 1);
        assert!(classify::is_nilpotent(&wits[0].group).unwrap());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let s4 = PermutationGroup::symmetric(4);
        let err = subgroup_classes(
            &s4,
            EnumOptions {
                ambient_cap: 10,
                nilpotent_only: false,
            },
        );
        assert!(matches!(err, Err(Error::SubgroupCap(24, 10))));
    }
}
