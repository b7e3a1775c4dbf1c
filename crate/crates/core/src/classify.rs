//! Structural predicates: transitivity, primitivity (minimal block systems),
//! solvability (derived series), nilpotency (lower central series), and
//! element-order profiles.

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::perm::{Permutation, Point};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GroupFlags {
    pub is_transitive: bool,
    pub is_primitive: bool,
    pub is_solvable: bool,
    pub is_nilpotent: bool,
    pub is_abelian: bool,
    /// Smallest prime dividing the order; `None` for the trivial group.
    pub smallest_prime_divisor: Option<u64>,
}

/// Normal closure of the subgroup generated by `seeds` under conjugation by
/// `g`'s generators, as a generator list.
pub fn normal_closure_gens(g: &PermutationGroup, seeds: &[Permutation]) -> Result<Vec<Permutation>> {
    let degree = g.degree();
    // Only elements that enlarge the closure are kept, so the returned list
    // has at most log2(order) entries.
    let mut chain = crate::group::StabilizerChain::build(degree, &[], &[])?;
    let mut gens: Vec<Permutation> = Vec::new();
    for s in seeds {
        if !chain.contains(s) {
            chain.extend_with_generator(s.clone());
            gens.push(s.clone());
        }
    }
    if gens.is_empty() {
        return Ok(vec![Permutation::identity(degree)]);
    }
    let mut head = 0;
    while head < gens.len() {
        let cur = gens[head].clone();
        head += 1;
        for cg in g.generators_arc() {
            let conj = cur.conjugated_by(cg);
            if !chain.contains(&conj) {
                chain.extend_with_generator(conj.clone());
                gens.push(conj);
            }
        }
    }
    Ok(gens)
}

/// Generators of the derived subgroup `[G, G]`.
pub fn derived_subgroup_gens(g: &PermutationGroup) -> Result<Vec<Permutation>> {
    let gens = g.generators();
    let mut comms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in gens.iter().skip(i + 1) {
            let c = a.commutator(b);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    normal_closure_gens(g, &comms)
}

/// Derived series until it stabilizes; final entry is the last distinct term.
fn derived_series_reaches_trivial(g: &PermutationGroup) -> Result<bool> {
    let mut cur = g.clone();
    let mut iterations = 0u32;
    let cap = 2 * g.order().max(2).ilog2() + 2;
    loop {
        if cur.order() == 1 {
            return Ok(true);
        }
        let next = PermutationGroup::from_generators(derived_subgroup_gens(&cur)?)?;
        if next.order() == cur.order() {
            return Ok(false);
        }
        cur = next;
        iterations += 1;
        if iterations > cap {
            return Err(Error::Internal(
                "derived series exceeded its length bound".into(),
            ));
        }
    }
}

/// Lower central series termination, bounded by log2 of the order.
fn lower_central_reaches_trivial(g: &PermutationGroup) -> Result<bool> {
    let mut cur_gens = derived_subgroup_gens(g)?; // gamma_2
    let mut cur = PermutationGroup::from_generators(cur_gens.clone())?;
    let mut iterations = 0u32;
    let cap = g.order().max(2).ilog2() + 2;
    loop {
        if cur.order() == 1 {
            return Ok(true);
        }
        // gamma_{k+1} = normal closure of [gamma_k, G].
        let mut comms = Vec::new();
        for a in &cur_gens {
            for b in g.generators_arc() {
                let c = a.commutator(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        let next_gens = normal_closure_gens(g, &comms)?;
        let next = PermutationGroup::from_generators(next_gens.clone())?;
        if next.order() == cur.order() {
            return Ok(false);
        }
        cur = next;
        cur_gens = next_gens;
        iterations += 1;
        if iterations > cap {
            return Err(Error::Internal(
                "lower central series exceeded its log2 bound".into(),
            ));
        }
    }
}

pub fn is_solvable(g: &PermutationGroup) -> Result<bool> {
    derived_series_reaches_trivial(g)
}

pub fn is_nilpotent(g: &PermutationGroup) -> Result<bool> {
    lower_central_reaches_trivial(g)
}

pub fn is_abelian(g: &PermutationGroup) -> bool {
    let gens = g.generators();
    for (i, a) in gens.iter().enumerate() {
        for b in gens.iter().skip(i + 1) {
            if a.then(b) != b.then(a) {
                return false;
            }
        }
    }
    true
}

/// Smallest block of a transitive action containing `{a, b}` (Atkinson's
/// union-find algorithm); returns the block as a sorted point list.
pub fn minimal_block(g: &PermutationGroup, a: Point, b: Point) -> Vec<Point> {
    let n = g.degree();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut queue: Vec<(u32, u32)> = vec![(a, b)];
    let root = find(&mut parent, a);
    parent[b as usize] = root;
    while let Some((x, y)) = queue.pop() {
        for gen in g.generators_arc() {
            let (gx, gy) = (gen.apply(x), gen.apply(y));
            let (rx, ry) = (find(&mut parent, gx), find(&mut parent, gy));
            if rx != ry {
                parent[ry as usize] = rx;
                queue.push((gx, gy));
            }
        }
    }
    let ra = find(&mut parent, a);
    (0..n as u32)
        .filter(|&p| find(&mut parent, p) == ra)
        .collect()
}

/// Primitivity via minimal block systems: transitive, and every minimal block
/// containing a pair of points is the whole point set.
pub fn is_primitive(g: &PermutationGroup) -> bool {
    if !g.is_transitive() {
        return false;
    }
    let n = g.degree();
    if n <= 2 {
        return true;
    }
    for b in 1..n as Point {
        if minimal_block(g, 0, b).len() != n {
            return false;
        }
    }
    true
}

/// Smallest prime divisor of `n` by trial division.
pub fn smallest_prime_divisor(n: u128) -> Option<u64> {
    if n <= 1 {
        return None;
    }
    if n % 2 == 0 {
        return Some(2);
    }
    let mut d = 3u128;
    while d * d <= n {
        if n % d == 0 {
            return Some(d as u64);
        }
        d += 2;
    }
    Some(n as u64) // n itself prime; group orders in range by construction
}

/// Full structural classification.
pub fn classify(g: &PermutationGroup) -> Result<GroupFlags> {
    let is_transitive = g.is_transitive();
    let primitive = is_transitive && is_primitive(g);
    let abelian = is_abelian(g);
    let nilpotent = if abelian { true } else { is_nilpotent(g)? };
    let solvable = if nilpotent { true } else { is_solvable(g)? };
    Ok(GroupFlags {
        is_transitive,
        is_primitive: primitive,
        is_solvable: solvable,
        is_nilpotent: nilpotent,
        is_abelian: abelian,
        smallest_prime_divisor: smallest_prime_divisor(g.order()),
    })
}

/// Map from element order to the number of elements of that order.
pub fn order_profile(g: &PermutationGroup) -> Result<BTreeMap<u128, u64>> {
    let mut out = BTreeMap::new();
    for e in g.elements()? {
        *out.entry(e.order()?).or_insert(0u64) += 1;
    }
    Ok(out)
}
