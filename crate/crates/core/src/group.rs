//! Permutation groups through generators and stabilizer chains.
//!
//! The chain is a deterministic Schreier–Sims structure: base points are the
//! smallest moved points (an explicit base prefix can be requested, which is
//! how point stabilizers are computed), transversals are kept as Schreier
//! trees, and the group order is the exact product of orbit lengths with
//! 128-bit overflow detection.

use crate::error::{Error, Result};
use crate::perm::{Permutation, Point};
use std::sync::Arc;

/// Default cap on full element enumeration.
pub const ELEMENT_ENUMERATION_CAP: u128 = 10_000_000;

const NO_TREE: i32 = -1;
const TREE_ROOT: i32 = -2;

#[derive(Clone)]
struct Level {
    base: Point,
    gens: Vec<Arc<Permutation>>,
    inv_gens: Vec<Arc<Permutation>>,
    /// `tree[p]`: generator index labelling the Schreier-tree edge into `p`,
    /// `TREE_ROOT` at the base point, `NO_TREE` outside the orbit.
    tree: Vec<i32>,
    /// Append-only orbit: generator insertion extends it without reordering,
    /// so verification watermarks below stay valid.
    orbit: Vec<Point>,
    /// Position of each point in `orbit`, `u32::MAX` outside.
    orbit_pos: Vec<u32>,
    /// Verified rectangle of Schreier pairs: all `(orbit index, gen index)`
    /// pairs below these marks have sifted through the deeper levels. A
    /// sifted pair stays sifted when deeper groups grow, so the marks never
    /// need to be rolled back.
    verified_pts: usize,
    verified_gens: usize,
}

impl Level {
    fn new(degree: usize, base: Point) -> Level {
        let mut lv = Level {
            base,
            gens: Vec::new(),
            inv_gens: Vec::new(),
            tree: vec![NO_TREE; degree],
            orbit: Vec::new(),
            orbit_pos: vec![u32::MAX; degree],
            verified_pts: 0,
            verified_gens: 0,
        };
        lv.tree[base as usize] = TREE_ROOT;
        lv.orbit.push(base);
        lv.orbit_pos[base as usize] = 0;
        lv.extend_orbit();
        lv
    }

    fn extend_orbit(&mut self) {
        let mut head = 0;
        while head < self.orbit.len() {
            let x = self.orbit[head];
            head += 1;
            for (k, g) in self.gens.iter().enumerate() {
                let y = g.apply(x);
                if self.tree[y as usize] == NO_TREE {
                    self.tree[y as usize] = k as i32;
                    self.orbit_pos[y as usize] = self.orbit.len() as u32;
                    self.orbit.push(y);
                }
            }
        }
    }

    fn in_orbit(&self, p: Point) -> bool {
        self.tree[p as usize] != NO_TREE
    }

    /// Replaces `g` by `g · u_x^{-1}` where `x = base^g`; returns false when
    /// `x` is outside the orbit.
    fn reduce(&self, g: &mut Permutation) -> bool {
        let mut x = g.apply(self.base);
        if !self.in_orbit(x) {
            return false;
        }
        while x != self.base {
            let k = self.tree[x as usize] as usize;
            g.compose_in_place(&self.inv_gens[k]);
            x = self.inv_gens[k].apply(x);
        }
        true
    }

    /// Writes the transversal element `u_x` (mapping base to `x`) into `out`.
    fn coset_rep_into(&self, x: Point, out: &mut Permutation) {
        debug_assert!(self.in_orbit(x));
        let mut path = Vec::new();
        let mut p = x;
        while p != self.base {
            let k = self.tree[p as usize] as usize;
            path.push(k);
            p = self.inv_gens[k].apply(p);
        }
        *out = Permutation::identity(out.degree());
        for &k in path.iter().rev() {
            out.compose_in_place(&self.gens[k]);
        }
    }

    fn push_gen(&mut self, g: Arc<Permutation>) {
        self.inv_gens.push(Arc::new(g.inverse()));
        self.gens.push(g);
        self.extend_orbit();
    }
}

#[derive(Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Runs deterministic Schreier–Sims over `gens`. Points in `base_hint`
    /// become the first base points whether or not they are moved.
    pub fn build(degree: usize, gens: &[Permutation], base_hint: &[Point]) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
        };
        for &b in base_hint {
            chain.levels.push(Level::new(degree, b));
        }
        for g in gens {
            // Sifting first keeps the strong generating set lean.
            let (residue, _) = chain.strip_from(g, 0);
            if !residue.is_identity() {
                chain.insert_generator(Arc::new(residue));
                chain.schreier_sims();
            }
        }
        Ok(chain)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<Point> {
        self.levels.iter().map(|l| l.base).collect()
    }

    fn level_fixing_prefix(&self, g: &Permutation) -> usize {
        let mut i = 0;
        while i < self.levels.len() && g.apply(self.levels[i].base) == self.levels[i].base {
            i += 1;
        }
        i
    }

    /// Adds `g` as a strong generator at every level whose base prefix it
    /// fixes, appending a new base point when it fixes the whole base.
    fn insert_generator(&mut self, g: Arc<Permutation>) {
        let j = self.level_fixing_prefix(&g);
        if j == self.levels.len() {
            let b = g
                .min_moved_point()
                .expect("identity generators are filtered out");
            self.levels.push(Level::new(self.degree, b));
        }
        for l in 0..=j.min(self.levels.len() - 1) {
            self.levels[l].push_gen(g.clone());
        }
    }

    /// Adds one generator and re-establishes the chain invariants. The
    /// element is sifted first; only a nontrivial residue is inserted, which
    /// generates the same extension.
    pub fn extend_with_generator(&mut self, g: Permutation) {
        let (residue, _) = self.strip_from(&g, 0);
        if residue.is_identity() {
            return;
        }
        self.insert_generator(Arc::new(residue));
        self.schreier_sims();
    }

    /// Strips `g` through levels `from..`, returning the residue and the
    /// level where sifting stopped (`levels.len()` on full sift).
    pub fn strip_from(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for l in from..self.levels.len() {
            if !self.levels[l].reduce(&mut h) {
                return (h, l);
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, l) = self.strip_from(g, 0);
        l == self.levels.len() && residue.is_identity()
    }

    /// Verification loop: every Schreier generator of every level must sift
    /// to the identity through the deeper levels. Each `(orbit point, gen)`
    /// pair is processed once across the whole construction, tracked by the
    /// per-level verified rectangle.
    fn schreier_sims(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() - 1;
        let mut u = Permutation::identity(self.degree);
        'levels: loop {
            let level_len = self.levels[i].orbit.len();
            let gen_len = self.levels[i].gens.len();
            let (vp, vg) = (self.levels[i].verified_pts, self.levels[i].verified_gens);
            let mut oi = 0;
            while oi < level_len {
                let fresh_point = oi >= vp;
                let x = self.levels[i].orbit[oi];
                let mut have_rep = false;
                for k in 0..gen_len {
                    if !fresh_point && k < vg {
                        continue; // inside the verified rectangle
                    }
                    if !have_rep {
                        self.levels[i].coset_rep_into(x, &mut u);
                        have_rep = true;
                    }
                    let mut schreier = u.clone();
                    let gk = self.levels[i].gens[k].clone();
                    schreier.compose_in_place(&gk);
                    // Reduce by the transversal rep of x^gens[k]; stays at
                    // this level by construction.
                    let ok = self.levels[i].reduce(&mut schreier);
                    debug_assert!(ok);
                    if schreier.is_identity() {
                        continue;
                    }
                    let (residue, j) = self.strip_from(&schreier, i + 1);
                    if residue.is_identity() && j == self.levels.len() {
                        continue;
                    }
                    if !residue.is_identity() {
                        let residue = Arc::new(residue);
                        if j == self.levels.len() {
                            let b = residue
                                .min_moved_point()
                                .expect("residue is not the identity");
                            self.levels.push(Level::new(self.degree, b));
                        }
                        for l in (i + 1)..=j {
                            self.levels[l].push_gen(residue.clone());
                        }
                        i = j;
                        continue 'levels;
                    }
                }
                oi += 1;
            }
            self.levels[i].verified_pts = level_len;
            self.levels[i].verified_gens = gen_len;
            if i == 0 {
                break;
            }
            i -= 1;
        }
        // Drop trailing redundant levels (fixed base points with no gens).
        while let Some(last) = self.levels.last() {
            if last.gens.is_empty() {
                self.levels.pop();
            } else {
                break;
            }
        }
    }

    pub fn order(&self) -> Result<u128> {
        let mut ord: u128 = 1;
        for l in &self.levels {
            ord = ord
                .checked_mul(l.orbit.len() as u128)
                .ok_or(Error::OrderOverflow)?;
        }
        Ok(ord)
    }

    /// Generators of the stabilizer of the first base point (the group at
    /// level 1), as plain permutations.
    pub fn level_one_generators(&self) -> Vec<Permutation> {
        if self.levels.len() <= 1 {
            return Vec::new();
        }
        self.levels[1].gens.iter().map(|g| (**g).clone()).collect()
    }

    fn strides(&self) -> Vec<u128> {
        // Level 0 varies fastest.
        let mut strides = vec![1u128; self.levels.len()];
        for l in 1..self.levels.len() {
            strides[l] = strides[l - 1] * self.levels[l - 1].orbit.len() as u128;
        }
        strides
    }

    /// Rank of a member element in the deterministic enumeration order.
    pub fn element_index(&self, g: &Permutation) -> Option<u128> {
        let strides = self.strides();
        let mut h = g.clone();
        let mut idx = 0u128;
        for (l, level) in self.levels.iter().enumerate() {
            let x = h.apply(level.base);
            if !level.in_orbit(x) {
                return None;
            }
            idx += level.orbit_pos[x as usize] as u128 * strides[l];
            let ok = level.reduce(&mut h);
            debug_assert!(ok);
        }
        if h.is_identity() {
            Some(idx)
        } else {
            None
        }
    }

    /// Element at a given rank; inverse of [`element_index`](Self::element_index).
    pub fn element_at(&self, mut idx: u128) -> Permutation {
        let mut out = Permutation::identity(self.degree);
        let mut rep = Permutation::identity(self.degree);
        // element = u^(m-1) · … · u^(0); build from the deepest level down.
        for l in (0..self.levels.len()).rev() {
            let stride: u128 = self.levels[..l]
                .iter()
                .map(|lv| lv.orbit.len() as u128)
                .product();
            let pos = (idx / stride) as usize;
            idx %= stride;
            let x = self.levels[l].orbit[pos];
            self.levels[l].coset_rep_into(x, &mut rep);
            out.compose_in_place(&rep);
        }
        out
    }

    /// Orbit (in BFS order) and matching explicit transversal elements of one
    /// level. `u = transversal[i]` maps the level's base point to `orbit[i]`.
    pub fn level_transversal(&self, l: usize) -> (Vec<Point>, Vec<Permutation>) {
        let level = &self.levels[l];
        let mut rep = Permutation::identity(self.degree);
        let mut reps = Vec::with_capacity(level.orbit.len());
        for &x in &level.orbit {
            level.coset_rep_into(x, &mut rep);
            reps.push(rep.clone());
        }
        (level.orbit.clone(), reps)
    }

    fn transversal_perms(&self) -> Vec<Vec<Permutation>> {
        let mut out = Vec::with_capacity(self.levels.len());
        let mut rep = Permutation::identity(self.degree);
        for l in &self.levels {
            let mut reps = Vec::with_capacity(l.orbit.len());
            for &x in &l.orbit {
                l.coset_rep_into(x, &mut rep);
                reps.push(rep.clone());
            }
            out.push(reps);
        }
        out
    }
}

/// A permutation group with generators, a completed stabilizer chain and
/// exact order. Immutable after construction; all read operations may run
/// concurrently on shared groups.
#[derive(Clone)]
pub struct PermutationGroup {
    degree: usize,
    gens: Vec<Arc<Permutation>>,
    chain: Arc<StabilizerChain>,
    order: u128,
}

impl PermutationGroup {
    /// Builds the group generated by `gens` (the trivial group is built from
    /// an identity generator).
    pub fn from_generators(gens: Vec<Permutation>) -> Result<Self> {
        Self::from_generators_with_base(gens, &[])
    }

    /// Same, forcing the chain's base to start with `base_hint`.
    pub fn from_generators_with_base(gens: Vec<Permutation>, base_hint: &[Point]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let degree = gens[0].degree();
        let chain = StabilizerChain::build(degree, &gens, base_hint)?;
        let order = chain.order()?;
        Ok(PermutationGroup {
            degree,
            gens: gens.into_iter().map(Arc::new).collect(),
            chain: Arc::new(chain),
            order,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_generators(vec![Permutation::identity(degree)])
            .expect("trivial group always builds")
    }

    pub fn symmetric(degree: usize) -> Self {
        assert!(degree >= 1);
        if degree == 1 {
            return Self::trivial(1);
        }
        let mut tr: Vec<Point> = (0..degree as Point).collect();
        tr.swap(0, 1);
        let mut cyc: Vec<Point> = (1..degree as Point).collect();
        cyc.push(0);
        Self::from_generators(vec![
            Permutation::from_images(tr).unwrap(),
            Permutation::from_images(cyc).unwrap(),
        ])
        .expect("symmetric group builds")
    }

    pub fn cyclic(degree: usize) -> Self {
        assert!(degree >= 1);
        let mut cyc: Vec<Point> = (1..degree as Point).collect();
        cyc.push(0);
        Self::from_generators(vec![Permutation::from_images(cyc).unwrap()])
            .expect("cyclic group builds")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn generators(&self) -> Vec<Permutation> {
        self.gens.iter().map(|g| (**g).clone()).collect()
    }

    pub fn generators_arc(&self) -> &[Arc<Permutation>] {
        &self.gens
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Membership: true exactly when `g` sifts to the identity.
    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    /// True when every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermutationGroup) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn orbit_of(&self, p: Point) -> Vec<Point> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![p];
        seen[p as usize] = true;
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in &self.gens {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbits of the natural action, each sorted, ordered by smallest point.
    pub fn orbit_partition(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if seen[p] {
                continue;
            }
            let orbit = self.orbit_of(p as Point);
            for &x in &orbit {
                seen[x as usize] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit_of(0).len() == self.degree
    }

    /// The stabilizer of `v`, computed from a chain with `v` as first base
    /// point; satisfies `|G| = |G_v| · |v^G|` exactly.
    pub fn point_stabilizer(&self, v: Point) -> Result<PermutationGroup> {
        let rebased = if !self.chain.base().first().map(|&b| b == v).unwrap_or(false) {
            StabilizerChain::build(
                self.degree,
                &self.generators(),
                &[v],
            )?
        } else {
            (*self.chain).clone()
        };
        let mut gens = rebased.level_one_generators();
        if gens.is_empty() {
            gens.push(Permutation::identity(self.degree));
        }
        PermutationGroup::from_generators(gens)
    }

    /// Iterator over all elements, in the chain's deterministic order.
    pub fn elements(&self) -> Result<Elements> {
        self.elements_with_cap(ELEMENT_ENUMERATION_CAP)
    }

    pub fn elements_with_cap(&self, cap: u128) -> Result<Elements> {
        if self.order > cap {
            return Err(Error::EnumerationCap {
                order: self.order,
                cap,
            });
        }
        Ok(Elements::new(&self.chain))
    }
}

impl std::fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PermutationGroup(degree {}, order {}, {} gens)",
            self.degree,
            self.order,
            self.gens.len()
        )
    }
}

/// Streaming element enumeration: an odometer over the chain transversals
/// with cached partial products (level 0 varies fastest, matching
/// [`StabilizerChain::element_index`]).
pub struct Elements {
    transversals: Vec<Vec<Permutation>>,
    counters: Vec<usize>,
    /// `prefix[l]` = product of transversal picks at levels `(len-1)..=l`.
    prefix: Vec<Permutation>,
    degree: usize,
    done: bool,
    started: bool,
}

impl Elements {
    fn new(chain: &StabilizerChain) -> Elements {
        let transversals = chain.transversal_perms();
        let m = transversals.len();
        let degree = chain.degree();
        let mut it = Elements {
            transversals,
            counters: vec![0; m],
            prefix: vec![Permutation::identity(degree); m],
            degree,
            done: false,
            started: false,
        };
        it.rebuild_prefix_from(m.saturating_sub(1));
        it
    }

    fn rebuild_prefix_from(&mut self, from: usize) {
        let m = self.transversals.len();
        if m == 0 {
            return;
        }
        for l in (0..=from).rev() {
            let mut p = if l + 1 < m {
                self.prefix[l + 1].clone()
            } else {
                Permutation::identity(self.degree)
            };
            p.compose_in_place(&self.transversals[l][self.counters[l]]);
            self.prefix[l] = p;
        }
    }
}

impl Iterator for Elements {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(if self.transversals.is_empty() {
                Permutation::identity(self.degree)
            } else {
                self.prefix[0].clone()
            });
        }
        let m = self.transversals.len();
        if m == 0 {
            self.done = true;
            return None;
        }
        let mut l = 0;
        loop {
            self.counters[l] += 1;
            if self.counters[l] < self.transversals[l].len() {
                break;
            }
            self.counters[l] = 0;
            l += 1;
            if l == m {
                self.done = true;
                return None;
            }
        }
        self.rebuild_prefix_from(l);
        Some(self.prefix[0].clone())
    }
}
