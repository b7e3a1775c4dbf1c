//! Conjugacy of subgroups inside an ambient group: cheap invariant
//! prefilters, then an exact transporter search over the conjugation orbit.

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::index::{GroupIndex, INDEX_CAP};
use crate::perm::Permutation;
use std::collections::BTreeMap;

/// Conjugation-invariant fingerprint of a subgroup acting on points:
/// order, orbit-size multiset, and the element-order profile (truncated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub order: u128,
    pub orbit_sizes: Vec<usize>,
    pub order_profile: Option<BTreeMap<u128, u64>>,
}

pub const PROFILE_CAP: u128 = 100_000;

pub fn fingerprint(g: &PermutationGroup) -> Result<Fingerprint> {
    let mut orbit_sizes: Vec<usize> = g.orbit_partition().iter().map(|o| o.len()).collect();
    orbit_sizes.sort_unstable();
    let order_profile = if g.order() <= PROFILE_CAP {
        Some(crate::classify::order_profile(g)?)
    } else {
        None
    };
    Ok(Fingerprint {
        order: g.order(),
        orbit_sizes,
        order_profile,
    })
}

/// Decides whether `a` and `b` are conjugate inside `ambient`, returning a
/// conjugating witness when they are. Membership of both subgroups in the
/// ambient group is verified first. The search walks the conjugation orbit
/// of `a`; the ambient order must stay within the index cap.
pub fn are_conjugate_subgroups(
    a: &PermutationGroup,
    b: &PermutationGroup,
    ambient: &PermutationGroup,
) -> Result<(bool, Option<Permutation>)> {
    for (name, sub) in [("first", a), ("second", b)] {
        for gen in sub.generators_arc() {
            if !ambient.contains(gen) {
                return Err(Error::NotASubgroup(format!(
                    "{name} group is not contained in the ambient group"
                )));
            }
        }
    }
    if a.order() != b.order() {
        return Ok((false, None));
    }
    if fingerprint(a)? != fingerprint(b)? {
        return Ok((false, None));
    }
    if a.order() == 1 {
        return Ok((true, Some(Permutation::identity(ambient.degree()))));
    }
    let idx = GroupIndex::build(ambient, INDEX_CAP)?;
    let rank_set = |g: &PermutationGroup| -> Result<Vec<u32>> {
        let mut seed = Vec::new();
        for gen in g.generators_arc() {
            if let Some(r) = idx.rank(gen) {
                if r != 0 {
                    seed.push(r);
                }
            } else {
                return Err(Error::NotASubgroup("generator outside ambient index".into()));
            }
        }
        Ok(idx.closure(&seed))
    };
    let sa = rank_set(a)?;
    let sb = rank_set(b)?;
    if sa == sb {
        return Ok((true, Some(Permutation::identity(ambient.degree()))));
    }
    match idx.transporter(&sa, &sb) {
        Some(w) => {
            debug_assert_eq!(idx.conj_set_by_perm(&sa, &w).as_deref(), Some(sb.as_slice()));
            Ok((true, Some(w)))
        }
        None => Ok((false, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_subgroups_are_conjugate_with_identity_witness() {
        let s4 = PermutationGroup::symmetric(4);
        let a = PermutationGroup::from_generators(vec![Permutation::parse("1 0 2 3").unwrap()])
            .unwrap();
        let (ok, w) = are_conjugate_subgroups(&a, &a, &s4).unwrap();
        assert!(ok);
        assert!(w.unwrap().is_identity());
    }

    #[test]
    fn point_stabilizers_in_transitive_group_are_conjugate() {
        let s4 = PermutationGroup::symmetric(4);
        let st0 = s4.point_stabilizer(0).unwrap();
        let st2 = s4.point_stabilizer(2).unwrap();
        let (ok, w) = are_conjugate_subgroups(&st0, &st2, &s4).unwrap();
        assert!(ok);
        let w = w.unwrap();
        for gen in st0.generators_arc() {
            assert!(st2.contains(&gen.conjugated_by(&w)));
        }
    }

    #[test]
    fn c4_and_klein_four_are_not_conjugate() {
        let s4 = PermutationGroup::symmetric(4);
        let c4 = PermutationGroup::from_generators(vec![Permutation::parse("1 2 3 0").unwrap()])
            .unwrap();
        let v4 = PermutationGroup::from_generators(vec![
            Permutation::parse("1 0 3 2").unwrap(),
            Permutation::parse("2 3 0 1").unwrap(),
        ])
        .unwrap();
        let (ok, w) = are_conjugate_subgroups(&c4, &v4, &s4).unwrap();
        assert!(!ok);
        assert!(w.is_none());
    }

    #[test]
    fn membership_is_verified() {
        let a4 = PermutationGroup::from_generators(vec![
            Permutation::parse("1 2 0 3").unwrap(),
            Permutation::parse("0 2 3 1").unwrap(),
        ])
        .unwrap();
        assert_eq!(a4.order(), 12);
        let c2 = PermutationGroup::from_generators(vec![Permutation::parse("1 0 2 3").unwrap()])
            .unwrap();
        assert!(matches!(
            are_conjugate_subgroups(&c2, &c2, &a4),
            Err(Error::NotASubgroup(_))
        ));
    }
}
