//! Rank/unrank machinery over a group's stabilizer chain, plus index-level
//! conjugation tables. This is the performance kernel behind subgroup
//! enumeration and conjugacy search: subgroups become sorted `u32` rank sets,
//! and conjugation by a generator becomes a table lookup.

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::perm::{Permutation, Point};
use rayon::prelude::*;
use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

/// Default cap on the ambient order for index construction.
pub const INDEX_CAP: u128 = 450_000;

struct IdxLevel {
    base: Point,
    orbit_pos: Vec<u32>,
    /// Explicit transversal elements aligned with the orbit, and inverses.
    trans: Vec<Permutation>,
    trans_inv: Vec<Permutation>,
    stride: u64,
}

pub struct GroupIndex {
    degree: usize,
    size: u64,
    levels: Vec<IdxLevel>,
    gens: Vec<Permutation>,
    /// `conj[k][i]` = rank of `gens[k]^{-1} · element(i) · gens[k]`.
    conj: Vec<Vec<u32>>,
    orders: Vec<u32>,
}

impl GroupIndex {
    pub fn build(group: &PermutationGroup, cap: u128) -> Result<GroupIndex> {
        if group.order() > cap {
            return Err(Error::AmbientTooLarge(group.order()));
        }
        let size = group.order() as u64;
        let degree = group.degree();
        let (levels, total) = Self::levels_from_chain(group)?;
        debug_assert_eq!(total as u128, size as u128);

        let gens: Vec<Permutation> = group
            .generators()
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();

        let mut idx = GroupIndex {
            degree,
            size,
            levels,
            gens,
            conj: Vec::new(),
            orders: Vec::new(),
        };

        let orders: Vec<u32> = (0..size)
            .into_par_iter()
            .map(|i| {
                let e = idx.element(i as u32);
                e.order().map(|o| o as u32).unwrap_or(u32::MAX)
            })
            .collect();
        idx.orders = orders;

        let mut conj = Vec::with_capacity(idx.gens.len());
        for g in &idx.gens {
            let table: Vec<u32> = (0..size)
                .into_par_iter()
                .map(|i| {
                    let e = idx.element(i as u32);
                    idx.rank(&e.conjugated_by(g))
                        .expect("conjugate of a member is a member")
                })
                .collect();
            conj.push(table);
        }
        idx.conj = conj;
        Ok(idx)
    }

    fn levels_from_chain(group: &PermutationGroup) -> Result<(Vec<IdxLevel>, u64)> {
        let chain = group.chain();
        let degree = group.degree();
        let base = chain.base();
        let mut levels: Vec<IdxLevel> = Vec::with_capacity(base.len());
        let mut sizes = Vec::with_capacity(base.len());
        for l in 0..base.len() {
            let (orbit, trans) = chain.level_transversal(l);
            let mut orbit_pos = vec![u32::MAX; degree];
            for (i, &x) in orbit.iter().enumerate() {
                orbit_pos[x as usize] = i as u32;
            }
            let trans_inv: Vec<Permutation> = trans.iter().map(|t| t.inverse()).collect();
            sizes.push(orbit.len() as u64);
            levels.push(IdxLevel {
                base: base[l],
                orbit_pos,
                trans,
                trans_inv,
                stride: 0,
            });
        }
        let mut stride = 1u64;
        for (l, lv) in levels.iter_mut().enumerate() {
            lv.stride = stride;
            stride = stride
                .checked_mul(sizes[l])
                .ok_or(Error::OrderOverflow)?;
        }
        Ok((levels, stride))
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn generator(&self, k: usize) -> &Permutation {
        &self.gens[k]
    }

    /// Rank of a member element; `None` for non-members.
    pub fn rank(&self, g: &Permutation) -> Option<u32> {
        if g.degree() != self.degree {
            return None;
        }
        let mut h = g.clone();
        let mut idx = 0u64;
        for lv in &self.levels {
            let x = h.apply(lv.base);
            let pos = lv.orbit_pos[x as usize];
            if pos == u32::MAX {
                return None;
            }
            idx += pos as u64 * lv.stride;
            h.compose_in_place(&lv.trans_inv[pos as usize]);
        }
        if h.is_identity() {
            Some(idx as u32)
        } else {
            None
        }
    }

    pub fn element(&self, i: u32) -> Permutation {
        let mut out = Permutation::identity(self.degree);
        let mut idx = i as u64;
        for lv in self.levels.iter().rev() {
            let pos = (idx / lv.stride) as usize;
            idx %= lv.stride;
            out.compose_in_place(&lv.trans[pos]);
        }
        out
    }

    pub fn element_order(&self, i: u32) -> u32 {
        self.orders[i as usize]
    }

    /// Conjugates a sorted rank set by generator `k`; output sorted.
    pub fn conj_set_by_gen(&self, set: &[u32], k: usize) -> Vec<u32> {
        let map = &self.conj[k];
        let mut out: Vec<u32> = set.iter().map(|&i| map[i as usize]).collect();
        out.sort_unstable();
        out
    }

    /// Conjugates a sorted rank set by an arbitrary element (as permutation).
    pub fn conj_set_by_perm(&self, set: &[u32], x: &Permutation) -> Option<Vec<u32>> {
        let mut out = Vec::with_capacity(set.len());
        for &i in set {
            let e = self.element(i).conjugated_by(x);
            out.push(self.rank(&e)?);
        }
        out.sort_unstable();
        Some(out)
    }

    pub fn product(&self, i: u32, j: u32) -> u32 {
        let e = self.element(i).then(&self.element(j));
        self.rank(&e).expect("product of members is a member")
    }

    pub fn inverse_idx(&self, i: u32) -> u32 {
        self.rank(&self.element(i).inverse())
            .expect("inverse of a member is a member")
    }

    /// Closure of a seed set of ranks into a sorted subgroup rank set
    /// (always contains the identity, rank 0).
    pub fn closure(&self, seed: &[u32]) -> Vec<u32> {
        let mut set: HashSet<u32> = HashSet::new();
        set.insert(0);
        let mut frontier: Vec<u32> = vec![0];
        let seeds: Vec<u32> = seed.to_vec();
        while let Some(x) = frontier.pop() {
            for &s in &seeds {
                let y = self.product(x, s);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        let mut out: Vec<u32> = set.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// 128-bit content hash of a sorted rank set (for in-run dedup maps).
    pub fn set_hash(set: &[u32]) -> u128 {
        let mut h1 = DefaultHasher::new();
        0x9e3779b97f4a7c15u64.hash(&mut h1);
        set.hash(&mut h1);
        let mut h2 = DefaultHasher::new();
        0xc2b2ae3d27d4eb4fu64.hash(&mut h2);
        set.hash(&mut h2);
        ((h1.finish() as u128) << 64) | h2.finish() as u128
    }

    /// BFS over the conjugation orbit of a subgroup rank set. Returns the
    /// lexicographically least orbit member (canonical class key), the orbit
    /// length, and optionally feeds every member's content hash to `sink`
    /// (used by callers to recognize conjugates discovered later).
    pub fn canonical_class_key(
        &self,
        set: &[u32],
        mut sink: Option<&mut dyn FnMut(u128)>,
    ) -> (Vec<u32>, u64) {
        let start = set.to_vec();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        if let Some(s) = sink.as_deref_mut() {
            s(Self::set_hash(&start));
        }
        seen.insert(start.clone());
        let mut best = start.clone();
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let cur = queue[head].clone();
            head += 1;
            for k in 0..self.gens.len() {
                let img = self.conj_set_by_gen(&cur, k);
                if !seen.contains(&img) {
                    if let Some(s) = sink.as_deref_mut() {
                        s(Self::set_hash(&img));
                    }
                    if img < best {
                        best = img.clone();
                    }
                    seen.insert(img.clone());
                    queue.push(img);
                }
            }
        }
        (best, queue.len() as u64)
    }

    /// Generators (as ranks) of the normalizer `N_G(U)` of a subgroup rank
    /// set, via Schreier generators on the conjugation orbit.
    pub fn normalizer_gens(&self, set: &[u32]) -> Vec<u32> {
        let mut node_ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut nodes: Vec<Vec<u32>> = Vec::new();
        let mut tree: Vec<(u32, u32)> = Vec::new(); // (parent node, gen idx)
        let start = set.to_vec();
        node_ids.insert(start.clone(), 0);
        nodes.push(start);
        tree.push((u32::MAX, u32::MAX));
        let mut out: HashSet<u32> = HashSet::new();
        let mut head = 0usize;
        while head < nodes.len() {
            let cur = nodes[head].clone();
            for k in 0..self.gens.len() {
                let img = self.conj_set_by_gen(&cur, k);
                if let Some(&nid) = node_ids.get(&img) {
                    // Schreier generator: u_head · g_k · u_nid^{-1}.
                    let u1 = self.node_rep(head as u32, &tree);
                    let u2 = self.node_rep(nid, &tree);
                    let g = u1.then(&self.gens[k]).then(&u2.inverse());
                    if let Some(r) = self.rank(&g) {
                        if r != 0 {
                            out.insert(r);
                        }
                    }
                    continue;
                }
                let nid = nodes.len() as u32;
                node_ids.insert(img.clone(), nid);
                nodes.push(img);
                tree.push((head as u32, k as u32));
            }
            head += 1;
        }
        let mut gens: Vec<u32> = out.into_iter().collect();
        gens.sort_unstable();
        self.reduce_generating_ranks(&gens)
    }

    /// Drops generators already contained in the span of the earlier ones;
    /// keeps the generated group and the deterministic order.
    pub fn reduce_generating_ranks(&self, ranks: &[u32]) -> Vec<u32> {
        let mut reduced: Vec<u32> = Vec::new();
        let mut chain: Option<crate::group::StabilizerChain> = None;
        for &r in ranks {
            if r == 0 {
                continue;
            }
            let perm = self.element(r);
            let contained = chain.as_ref().map_or(false, |c| c.contains(&perm));
            if !contained {
                match &mut chain {
                    None => {
                        chain = Some(
                            crate::group::StabilizerChain::build(self.degree, &[perm], &[])
                                .expect("degree-consistent generator"),
                        )
                    }
                    Some(c) => c.extend_with_generator(perm),
                }
                reduced.push(r);
            }
        }
        reduced
    }

    /// Walks the Schreier tree to build the conjugator mapping the root
    /// subgroup to node `nid`.
    fn node_rep(&self, mut nid: u32, tree: &[(u32, u32)]) -> Permutation {
        let mut path = Vec::new();
        while tree[nid as usize].0 != u32::MAX {
            let (parent, k) = tree[nid as usize];
            path.push(k as usize);
            nid = parent;
        }
        let mut out = Permutation::identity(self.degree);
        for &k in path.iter().rev() {
            out.compose_in_place(&self.gens[k]);
        }
        out
    }

    /// Searches the ambient group for `x` with `A^x = B` (as rank sets);
    /// returns a witness permutation when one exists.
    pub fn transporter(&self, a: &[u32], b: &[u32]) -> Option<Permutation> {
        if a.len() != b.len() {
            return None;
        }
        if a == b {
            return Some(Permutation::identity(self.degree));
        }
        let mut node_ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut nodes: Vec<Vec<u32>> = Vec::new();
        let mut tree: Vec<(u32, u32)> = Vec::new();
        let start = a.to_vec();
        node_ids.insert(start.clone(), 0);
        nodes.push(start);
        tree.push((u32::MAX, u32::MAX));
        let mut head = 0usize;
        while head < nodes.len() {
            let cur = nodes[head].clone();
            for k in 0..self.gens.len() {
                let img = self.conj_set_by_gen(&cur, k);
                if node_ids.contains_key(&img) {
                    continue;
                }
                let nid = nodes.len() as u32;
                let found = img.as_slice() == b;
                node_ids.insert(img.clone(), nid);
                nodes.push(img);
                tree.push((head as u32, k as u32));
                if found {
                    return Some(self.node_rep(nid, &tree));
                }
            }
            head += 1;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> PermutationGroup {
        PermutationGroup::symmetric(4)
    }

    #[test]
    fn rank_unrank_roundtrip() {
        let g = s4();
        let idx = GroupIndex::build(&g, INDEX_CAP).unwrap();
        assert_eq!(idx.size(), 24);
        for i in 0..24u32 {
            let e = idx.element(i);
            assert_eq!(idx.rank(&e), Some(i));
        }
        assert_eq!(idx.rank(&Permutation::identity(4)), Some(0));
    }

    #[test]
    fn closure_of_transposition() {
        let g = s4();
        let idx = GroupIndex::build(&g, INDEX_CAP).unwrap();
        let t = idx.rank(&Permutation::parse("1 0 2 3").unwrap()).unwrap();
        let sub = idx.closure(&[t]);
        assert_eq!(sub.len(), 2);
    }

    #[test]
    fn normalizer_of_sylow_two() {
        let g = s4();
        let idx = GroupIndex::build(&g, INDEX_CAP).unwrap();
        // V4 = {e, (01)(23), (02)(13), (03)(12)} is normal: N = S4.
        let a = idx.rank(&Permutation::parse("1 0 3 2").unwrap()).unwrap();
        let b = idx.rank(&Permutation::parse("2 3 0 1").unwrap()).unwrap();
        let v4 = idx.closure(&[a, b]);
        let ngens = idx.normalizer_gens(&v4);
        let mut seed = v4.clone();
        seed.extend_from_slice(&ngens);
        let n = idx.closure(&seed);
        assert_eq!(n.len(), 24);
    }

    #[test]
    fn transporter_between_point_stabilizers() {
        let g = s4();
        let idx = GroupIndex::build(&g, INDEX_CAP).unwrap();
        // <(12)(3)> style: stabilizer-ish small sets conjugate in S4.
        let a = idx.closure(&[idx.rank(&Permutation::parse("1 0 2 3").unwrap()).unwrap()]);
        let b = idx.closure(&[idx.rank(&Permutation::parse("0 1 3 2").unwrap()).unwrap()]);
        let w = idx.transporter(&a, &b).expect("transpositions are conjugate");
        let img = idx.conj_set_by_perm(&a, &w).unwrap();
        assert_eq!(img, b);
    }
}
