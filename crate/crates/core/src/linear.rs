//! Semilinear groups Γ(qⁿ) and Γ₀(qⁿ) as permutation groups on field
//! elements, matrix groups over prime fields acting on vector spaces, and
//! module-level orbit/centralizer primitives.
//!
//! Vectors in GF(p)^d are encoded little-endian base p: coordinate 0 is the
//! least significant digit of the point index. The zero vector is point 0.

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldSpec, FIELD_SIZE_CAP};
use crate::group::PermutationGroup;
use crate::perm::{Permutation, Point};
use serde::{Deserialize, Serialize};

/// One map `x ↦ a·x^{p^j}` of Γ(p^k), given by multiplier and Frobenius
/// exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemilinearMap {
    pub multiplier: u64,
    pub frobenius_exponent: u32,
}

impl SemilinearMap {
    pub fn to_permutation(&self, field: &FieldSpec) -> Result<Permutation> {
        if self.multiplier == 0 || self.multiplier >= field.size() {
            return Err(Error::Internal("multiplier must be a nonzero element".into()));
        }
        let q = field.size() as usize;
        let mut images = Vec::with_capacity(q);
        for x in 0..q as u64 {
            images.push(field.mul(self.multiplier, field.frobenius(x, self.frobenius_exponent)) as Point);
        }
        Permutation::from_images(images)
    }
}

/// Γ(p^k) and Γ₀(p^k) on the p^k field elements. `|Γ| = (p^k - 1)·k`,
/// `|Γ₀| = p^k - 1`, and both fix the zero element (point 0).
pub fn make_gamma(p: u64, k: u32) -> Result<(PermutationGroup, PermutationGroup, FieldSpec)> {
    let field = FieldSpec::new(p, k)?;
    let mult = SemilinearMap {
        multiplier: field.primitive_element(),
        frobenius_exponent: 0,
    }
    .to_permutation(&field)?;
    let gamma0 = PermutationGroup::from_generators(vec![mult.clone()])?;
    let gamma = if k == 1 {
        gamma0.clone()
    } else {
        let frob = SemilinearMap {
            multiplier: 1,
            frobenius_exponent: 1,
        }
        .to_permutation(&field)?;
        PermutationGroup::from_generators(vec![mult, frob])?
    };
    Ok((gamma, gamma0, field))
}

/// All `(p^k - 1)·k` semilinear maps, for closure-style oracles.
pub fn all_semilinear_maps(field: &FieldSpec) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    for a in 1..field.size() {
        for j in 0..field.extension_degree() {
            out.push(
                SemilinearMap {
                    multiplier: a,
                    frobenius_exponent: j,
                }
                .to_permutation(field)?,
            );
        }
    }
    Ok(out)
}

/// A d×d matrix over GF(p), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub p: u64,
    pub d: usize,
    pub entries: Vec<u64>,
}

impl Matrix {
    pub fn identity(p: u64, d: usize) -> Matrix {
        let mut entries = vec![0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1;
        }
        Matrix { p, d, entries }
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.d + c]
    }

    pub fn is_invertible(&self) -> bool {
        // Gaussian elimination over GF(p).
        let d = self.d;
        let p = self.p;
        let mut m: Vec<u64> = self.entries.iter().map(|&e| e % p).collect();
        let mut rank = 0;
        for col in 0..d {
            let pivot = (rank..d).find(|&r| m[r * d + col] != 0);
            let Some(pivot) = pivot else { continue };
            if pivot != rank {
                for i in 0..d {
                    m.swap(pivot * d + i, rank * d + i);
                }
            }
            let inv = mod_pow(m[rank * d + col], p - 2, p);
            for c in 0..d {
                m[rank * d + c] = m[rank * d + c] * inv % p;
            }
            for r in 0..d {
                if r != rank && m[r * d + col] != 0 {
                    let f = m[r * d + col];
                    for c in 0..d {
                        m[r * d + c] = (m[r * d + c] + (p - f) * m[rank * d + c]) % p;
                    }
                }
            }
            rank += 1;
        }
        rank == d
    }

    /// The permutation `v ↦ M·v` on vector indices.
    pub fn to_permutation(&self) -> Result<Permutation> {
        let size = (self.p as u128).pow(self.d as u32);
        if size > FIELD_SIZE_CAP as u128 {
            return Err(Error::SizeCap(size.min(u64::MAX as u128) as u64, FIELD_SIZE_CAP));
        }
        let size = size as usize;
        let mut images = Vec::with_capacity(size);
        let mut vec_buf = vec![0u64; self.d];
        let mut img_buf = vec![0u64; self.d];
        for v in 0..size as u64 {
            decode_vector(v, self.p, self.d, &mut vec_buf);
            for r in 0..self.d {
                let mut acc = 0u64;
                for c in 0..self.d {
                    acc = (acc + self.at(r, c) % self.p * vec_buf[c]) % self.p;
                }
                img_buf[r] = acc;
            }
            images.push(encode_vector(&img_buf, self.p) as Point);
        }
        Permutation::from_images(images)
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

pub fn decode_vector(v: u64, p: u64, d: usize, out: &mut [u64]) {
    let mut v = v;
    for i in 0..d {
        out[i] = v % p;
        v /= p;
    }
}

pub fn encode_vector(coords: &[u64], p: u64) -> u64 {
    let mut out = 0u64;
    for &c in coords.iter().rev() {
        out = out * p + c % p;
    }
    out
}

/// A matrix group realized as permutations of GF(p)^d, acting linearly.
#[derive(Debug, Clone)]
pub struct LinearModule {
    pub dimension: usize,
    pub characteristic: u64,
    pub group: PermutationGroup,
    pub matrices: Vec<Matrix>,
    /// No proper nonzero invariant subspace (spin test at construction).
    pub irreducible: bool,
    /// Certified completely reducible: irreducible, or a direct sum of
    /// completely reducible summands.
    pub completely_reducible: bool,
}

impl LinearModule {
    pub fn point_count(&self) -> u64 {
        (self.characteristic as u64).pow(self.dimension as u32)
    }
}

/// Builds the permutation action of a matrix group on its vector space.
pub fn make_linear_action(matrices: Vec<Matrix>) -> Result<LinearModule> {
    if matrices.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let p = matrices[0].p;
    let d = matrices[0].d;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    for m in &matrices {
        if m.p != p || m.d != d {
            return Err(Error::MixedCharacteristic(p, m.p));
        }
        if !m.is_invertible() {
            return Err(Error::SingularMatrix(p));
        }
    }
    let perms: Vec<Permutation> = matrices
        .iter()
        .map(|m| m.to_permutation())
        .collect::<Result<_>>()?;
    let group = PermutationGroup::from_generators(perms)?;
    // Additivity spot-check on a spanning set: images of e_i + e_j agree
    // with the sum of images.
    for g in group.generators_arc() {
        for i in 0..d {
            for j in 0..d {
                let ei = (p as u64).pow(i as u32);
                let ej = (p as u64).pow(j as u32);
                let sum = add_points(ei, ej, p, d);
                if g.apply(sum as Point) as u64
                    != add_points(g.apply(ei as Point) as u64, g.apply(ej as Point) as u64, p, d)
                {
                    return Err(Error::NonAdditive);
                }
            }
        }
    }
    let irreducible = is_irreducible_action(&matrices);
    Ok(LinearModule {
        dimension: d,
        characteristic: p,
        group,
        matrices,
        irreducible,
        completely_reducible: irreducible,
    })
}

pub fn add_points(a: u64, b: u64, p: u64, d: usize) -> u64 {
    let mut av = vec![0u64; d];
    let mut bv = vec![0u64; d];
    decode_vector(a, p, d, &mut av);
    decode_vector(b, p, d, &mut bv);
    for i in 0..d {
        av[i] = (av[i] + bv[i]) % p;
    }
    encode_vector(&av, p)
}

/// Spin test: the module is irreducible iff every nonzero vector generates
/// the whole space under the group action plus linear spans.
pub fn is_irreducible_action(matrices: &[Matrix]) -> bool {
    let p = matrices[0].p;
    let d = matrices[0].d;
    let size = (p as u64).pow(d as u32);
    for v in 1..size {
        if spin_dimension(matrices, v) < d {
            return false;
        }
    }
    true
}

/// Dimension of the smallest invariant subspace containing `v`.
fn spin_dimension(matrices: &[Matrix], v: u64) -> usize {
    let p = matrices[0].p;
    let d = matrices[0].d;
    // Row-reduce a growing basis; apply generators until closed.
    let mut basis: Vec<Vec<u64>> = Vec::new(); // reduced echelon rows
    let mut frontier = vec![v];
    let mut buf = vec![0u64; d];
    while let Some(w) = frontier.pop() {
        decode_vector(w, p, d, &mut buf);
        if reduce_against(&mut buf, &basis, p) {
            continue; // already in span
        }
        insert_row(&mut basis, buf.clone(), p);
        if basis.len() == d {
            return d;
        }
        for m in matrices {
            let mut img = vec![0u64; d];
            decode_vector(w, p, d, &mut buf);
            for r in 0..d {
                let mut acc = 0;
                for c in 0..d {
                    acc = (acc + m.at(r, c) * buf[c]) % p;
                }
                img[r] = acc;
            }
            frontier.push(encode_vector(&img, p));
        }
    }
    basis.len()
}

/// Reduces `row` against the echelon basis; returns true when it vanishes.
fn reduce_against(row: &mut [u64], basis: &[Vec<u64>], p: u64) -> bool {
    for b in basis {
        let lead = b.iter().position(|&x| x != 0).unwrap();
        if row[lead] != 0 {
            let f = row[lead] * mod_pow(b[lead], p - 2, p) % p;
            for i in 0..row.len() {
                row[i] = (row[i] + (p - f) * b[i]) % p;
            }
        }
    }
    row.iter().all(|&x| x == 0)
}

fn insert_row(basis: &mut Vec<Vec<u64>>, row: Vec<u64>, _p: u64) {
    basis.push(row);
}

/// Exact count of fixed vectors of an additive permutation; always a power
/// of the characteristic (the fixed set is a subspace).
pub fn fixed_vector_count(module: &LinearModule, g: &Permutation) -> Result<u64> {
    let p = module.characteristic;
    let d = module.dimension;
    let n = module.point_count();
    if g.degree() as u64 != n {
        return Err(Error::DegreeMismatch(g.degree(), n as usize));
    }
    // Full additivity check: π(u + e_i) = π(u) + π(e_i) for all u, i.
    for i in 0..d {
        let ei = (p as u64).pow(i as u32);
        let gei = g.apply(ei as Point) as u64;
        for u in 0..n {
            let lhs = g.apply(add_points(u, ei, p, d) as Point) as u64;
            let rhs = add_points(g.apply(u as Point) as u64, gei, p, d);
            if lhs != rhs {
                return Err(Error::NonAdditive);
            }
        }
    }
    let count = (0..n).filter(|&v| g.apply(v as Point) as u64 == v).count() as u64;
    debug_assert!(is_power_of(count, p));
    Ok(count)
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Point stabilizer of `v` in `h` (the paper's `C_H(v)` for module actions).
pub fn centralizer_of_vector(h: &PermutationGroup, v: Point) -> Result<PermutationGroup> {
    h.point_stabilizer(v)
}

/// How generator lists combine in a direct sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumAssignment {
    /// Independent factors: the direct product `G_1 × … × G_m`.
    Product,
    /// One abstract group acting on every summand; generator lists must have
    /// equal length and are combined pairwise.
    Diagonal,
}

/// Direct sum of same-characteristic modules. For mixed characteristic use
/// [`product_domain`].
pub fn direct_sum_module(modules: &[LinearModule], assignment: SumAssignment) -> Result<LinearModule> {
    if modules.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let p = modules[0].characteristic;
    for m in modules {
        if m.characteristic != p {
            return Err(Error::MixedCharacteristic(p, m.characteristic));
        }
    }
    let total_d: usize = modules.iter().map(|m| m.dimension).sum();
    let mut mats: Vec<Matrix> = Vec::new();
    match assignment {
        SumAssignment::Product => {
            let mut offset = 0;
            for m in modules {
                for mat in &m.matrices {
                    mats.push(embed_block(mat, total_d, offset));
                }
                offset += m.dimension;
            }
        }
        SumAssignment::Diagonal => {
            let k = modules[0].matrices.len();
            for m in modules {
                if m.matrices.len() != k {
                    return Err(Error::Internal(
                        "diagonal sum needs aligned generator lists".into(),
                    ));
                }
            }
            for gi in 0..k {
                let mut big = Matrix::identity(p, total_d);
                let mut offset = 0;
                for m in modules {
                    let mat = &m.matrices[gi];
                    for r in 0..m.dimension {
                        for c in 0..m.dimension {
                            big.entries[(offset + r) * total_d + (offset + c)] = mat.at(r, c);
                        }
                    }
                    offset += m.dimension;
                }
                mats.push(big);
            }
        }
    }
    let mut out = make_linear_action(mats)?;
    out.completely_reducible = modules.iter().all(|m| m.completely_reducible);
    Ok(out)
}

fn embed_block(mat: &Matrix, total_d: usize, offset: usize) -> Matrix {
    let mut big = Matrix::identity(mat.p, total_d);
    for r in 0..mat.d {
        for c in 0..mat.d {
            big.entries[(offset + r) * total_d + (offset + c)] = mat.at(r, c);
        }
    }
    big
}

/// A group acting on a finite point set with a distinguished fixed point 0;
/// the common shape of modules and mixed-characteristic products.
#[derive(Debug, Clone)]
pub struct ActionDomain {
    pub group: PermutationGroup,
    pub size: u64,
    pub completely_reducible: bool,
    pub description: String,
}

impl From<&LinearModule> for ActionDomain {
    fn from(m: &LinearModule) -> ActionDomain {
        ActionDomain {
            group: m.group.clone(),
            size: m.point_count(),
            completely_reducible: m.completely_reducible,
            description: format!("GF({})^{}", m.characteristic, m.dimension),
        }
    }
}

/// Cartesian product of two permutation domains (the mixed-characteristic
/// form of a direct sum): the product group acts componentwise on pairs
/// `(v1, v2) ↦ v1 + n1·v2`.
pub fn product_domain(a: &ActionDomain, b: &ActionDomain) -> Result<ActionDomain> {
    let n1 = a.size;
    let n2 = b.size;
    let total = n1
        .checked_mul(n2)
        .filter(|&t| t <= FIELD_SIZE_CAP)
        .ok_or(Error::SizeCap(u64::MAX, FIELD_SIZE_CAP))?;
    let mut gens = Vec::new();
    for g in a.group.generators_arc() {
        let mut images = Vec::with_capacity(total as usize);
        for v in 0..total {
            let (v1, v2) = (v % n1, v / n1);
            images.push((g.apply(v1 as Point) as u64 + n1 * v2) as Point);
        }
        gens.push(Permutation::from_images(images)?);
    }
    for g in b.group.generators_arc() {
        let mut images = Vec::with_capacity(total as usize);
        for v in 0..total {
            let (v1, v2) = (v % n1, v / n1);
            images.push((v1 + n1 * g.apply(v2 as Point) as u64) as Point);
        }
        gens.push(Permutation::from_images(images)?);
    }
    Ok(ActionDomain {
        group: PermutationGroup::from_generators(gens)?,
        size: total,
        completely_reducible: a.completely_reducible && b.completely_reducible,
        description: format!("{} x {}", a.description, b.description),
    })
}

/// JSON module description: `{"p":3,"d":2,"matrices":[[[…]]]}` with
/// row-major entries reduced mod p.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleDescription {
    pub p: u64,
    pub d: usize,
    pub matrices: Vec<Vec<Vec<u64>>>,
}

impl ModuleDescription {
    pub fn to_module(&self) -> Result<LinearModule> {
        let mats: Vec<Matrix> = self
            .matrices
            .iter()
            .map(|rows| {
                let mut entries = Vec::with_capacity(self.d * self.d);
                for row in rows {
                    for &e in row {
                        entries.push(e % self.p);
                    }
                }
                Matrix {
                    p: self.p,
                    d: self.d,
                    entries,
                }
            })
            .collect();
        for m in &mats {
            if m.entries.len() != self.d * self.d {
                return Err(Error::CatalogFormat("matrix shape mismatch".into()));
            }
        }
        make_linear_action(mats)
    }

    pub fn from_module(m: &LinearModule) -> ModuleDescription {
        ModuleDescription {
            p: m.characteristic,
            d: m.dimension,
            matrices: m
                .matrices
                .iter()
                .map(|mat| {
                    (0..mat.d)
                        .map(|r| (0..mat.d).map(|c| mat.at(r, c)).collect())
                        .collect()
                })
                .collect(),
        }
    }
}
