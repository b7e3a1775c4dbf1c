//! Constructions (wreath products, affine groups) and the catalog of
//! solvable primitive permutation groups of small degree.
//!
//! Solvable primitive groups are affine: `V ⋊ H` with `V = GF(p)^d` the
//! translations and `H` an irreducible solvable subgroup of GL(d,p). Route
//! support per degree:
//! * prime degrees: subgroups of AGL(1,p) containing the translations,
//!   one per divisor of p-1;
//! * exhaustive: all solvable subgroup classes of GL(d,p) when
//!   `|GL(d,p)| <= 25000`, filtered to irreducible ones;
//! * semilinear: subgroups of the image of Γ(p^d) in GL(d,p);
//! * wreath: block-monomial groups K ≀ S for K irreducible solvable in a
//!   smaller dimension and S a transitive solvable block permutation group
//!   (only at degrees whose exhaustive route is out of reach).

use crate::classify::{self, GroupFlags};
use crate::conjugacy;
use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::index::INDEX_CAP;
use crate::linear::{self, Matrix};
use crate::perm::{Permutation, Point};
use crate::subgroups::{self, EnumOptions};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write as _;

pub const TIER1_DEGREES: [u64; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32];
pub const TIER2_DEGREES: [u64; 3] = [49, 64, 81];
pub const EXHAUSTIVE_GL_CAP: u128 = 25_000;
pub const WREATH_DEGREE_CAP: u64 = 1 << 20;

/// Imprimitive wreath product `H ≀ S` on `deg(H) · deg(S)` points. Block `j`
/// is `{a·j, …, a·j + a - 1}` for `a = deg(H)`.
pub fn wreath_product(h: &PermutationGroup, s: &PermutationGroup) -> Result<PermutationGroup> {
    let a = h.degree();
    let b = s.degree();
    let n = (a as u64)
        .checked_mul(b as u64)
        .filter(|&n| n <= WREATH_DEGREE_CAP)
        .ok_or(Error::SizeCap(u64::MAX, WREATH_DEGREE_CAP))?;
    let n = n as usize;
    let mut gens = Vec::new();
    for j in 0..b {
        for hg in h.generators_arc() {
            if hg.is_identity() {
                continue;
            }
            let mut images: Vec<Point> = (0..n as Point).collect();
            for i in 0..a {
                images[a * j + i] = (a * j) as Point + hg.apply(i as Point);
            }
            gens.push(Permutation::from_images(images)?);
        }
    }
    for sg in s.generators_arc() {
        if sg.is_identity() {
            continue;
        }
        let mut images = vec![0 as Point; n];
        for j in 0..b {
            let tj = sg.apply(j as Point) as usize;
            for i in 0..a {
                images[a * j + i] = (a * tj + i) as Point;
            }
        }
        gens.push(Permutation::from_images(images)?);
    }
    if gens.is_empty() {
        gens.push(Permutation::identity(n));
    }
    let w = PermutationGroup::from_generators(gens)?;
    // |H ≀ S| = |H|^b · |S|.
    let expect = (0..b).try_fold(s.order(), |acc, _| acc.checked_mul(h.order()));
    if expect != Some(w.order()) {
        return Err(Error::Internal("wreath product order mismatch".into()));
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteKind {
    PrimeAffine,
    ExhaustiveLinear,
    Semilinear,
    WreathLinear { a: u32, b: u32 },
}

#[derive(Debug, Clone)]
pub struct DegreeRoutes {
    pub degree: u64,
    pub p: u64,
    pub d: u32,
    pub tier: u8,
    pub complete: bool,
    pub routes: Vec<RouteKind>,
}

pub fn gl_order(d: u32, p: u64) -> u128 {
    let q = (p as u128).pow(d);
    let mut out = 1u128;
    for i in 0..d {
        out = out.saturating_mul(q - (p as u128).pow(i));
    }
    out
}

/// Parses `n = p^d` and decides routes and completeness tier.
pub fn degree_routes(n: u64) -> Result<DegreeRoutes> {
    if n < 2 {
        return Err(Error::UnsupportedDegree(n, "degree must be at least 2".into()));
    }
    let p = classify::smallest_prime_divisor(n as u128)
        .expect("n >= 2 has a prime divisor") as u64;
    let mut m = n;
    let mut d = 0u32;
    while m % p == 0 {
        m /= p;
        d += 1;
    }
    if m != 1 {
        return Err(Error::UnsupportedDegree(
            n,
            format!("{n} is not a prime power (no solvable primitive groups exist)"),
        ));
    }
    let tier = if TIER1_DEGREES.contains(&n) {
        1
    } else if TIER2_DEGREES.contains(&n) {
        2
    } else {
        return Err(Error::UnsupportedDegree(
            n,
            "degree outside the supported catalog range".into(),
        ));
    };
    let mut routes = Vec::new();
    let mut complete = true;
    if d == 1 {
        routes.push(RouteKind::PrimeAffine);
    } else if gl_order(d, p) <= EXHAUSTIVE_GL_CAP {
        routes.push(RouteKind::ExhaustiveLinear);
    } else {
        routes.push(RouteKind::Semilinear);
        // d prime and p = 2: no monomial or extraspecial configurations fit,
        // so the semilinear route is forced-complete (degree 32).
        complete = d == 5 && p == 2;
        for a in 1..d {
            if d % a != 0 {
                continue;
            }
            let b = d / a;
            if b < 2 || b > 4 {
                continue;
            }
            let a_ok = if a == 1 {
                p > 2 // GL(1,2) is trivial; nontrivial K required
            } else {
                gl_order(a, p) <= EXHAUSTIVE_GL_CAP
            };
            if a_ok {
                routes.push(RouteKind::WreathLinear { a, b });
            }
        }
    }
    Ok(DegreeRoutes {
        degree: n,
        p,
        d,
        tier,
        complete,
        routes,
    })
}

/// Transitive solvable subgroups of S_b up to conjugacy, for small b.
pub fn transitive_solvable(b: u32) -> Vec<(String, PermutationGroup)> {
    let parse = |gens: &[&str]| {
        PermutationGroup::from_generators(gens.iter().map(|s| Permutation::parse(s).unwrap()).collect())
            .unwrap()
    };
    match b {
        2 => vec![("S2".into(), parse(&["1 0"]))],
        3 => vec![("C3".into(), parse(&["1 2 0"])), ("S3".into(), parse(&["1 0 2", "1 2 0"]))],
        4 => vec![
            ("C4".into(), parse(&["1 2 3 0"])),
            ("V4".into(), parse(&["1 0 3 2", "2 3 0 1"])),
            ("D4".into(), parse(&["1 2 3 0", "2 1 0 3"])),
            ("A4".into(), parse(&["1 2 0 3", "1 0 3 2"])),
            ("S4".into(), parse(&["1 0 2 3", "1 2 3 0"])),
        ],
        _ => Vec::new(),
    }
}

/// Standard generators of GL(d,p): elementary transvections plus one
/// diagonal with a primitive root.
fn gl_generators(d: u32, p: u64) -> Vec<Matrix> {
    let d = d as usize;
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let mut m = Matrix::identity(p, d);
            m.entries[i * d + j] = 1;
            out.push(m);
        }
    }
    if p > 2 {
        let z = primitive_root(p);
        let mut m = Matrix::identity(p, d);
        m.entries[0] = z;
        out.push(m);
    }
    out
}

fn primitive_root(p: u64) -> u64 {
    let field = crate::field::FieldSpec::new(p, 1).expect("prime field");
    field.primitive_element()
}

/// Reads off the matrix of a linear permutation of GF(p)^d (columns are the
/// images of the basis vectors).
fn matrix_of_linear_perm(g: &Permutation, p: u64, d: u32) -> Matrix {
    let d = d as usize;
    let mut entries = vec![0u64; d * d];
    let mut col = vec![0u64; d];
    for c in 0..d {
        let e = (p as u64).pow(c as u32);
        linear::decode_vector(g.apply(e as Point) as u64, p, d, &mut col);
        for r in 0..d {
            entries[r * d + c] = col[r];
        }
    }
    Matrix { p, d, entries }
}

/// Irreducible solvable subgroups of GL(d,p) up to conjugacy in the route's
/// ambient, as matrix generator sets tagged with a route name.
pub fn irreducible_solvable_subgroups(d: u32, p: u64) -> Result<Vec<(Vec<Matrix>, String)>> {
    let routes = if d == 1 {
        vec![RouteKind::PrimeAffine]
    } else if gl_order(d, p) <= EXHAUSTIVE_GL_CAP {
        vec![RouteKind::ExhaustiveLinear]
    } else {
        degree_routes((p as u64).pow(d))?.routes
    };
    let mut out = Vec::new();
    for route in routes {
        out.extend(route_subgroups(route, d, p)?);
    }
    Ok(out)
}

fn route_subgroups(route: RouteKind, d: u32, p: u64) -> Result<Vec<(Vec<Matrix>, String)>> {
    let mut out = Vec::new();
    match route {
        RouteKind::PrimeAffine => {
            // Subgroups of GL(1,p) = C_{p-1}: one per divisor.
            let z = primitive_root(p);
            let order = p - 1;
            let mut divisors: Vec<u64> = (1..=order).filter(|f| order % f == 0).collect();
            divisors.sort_unstable();
            for f in divisors {
                let gen = mod_pow(z, order / f, p);
                out.push((
                    vec![Matrix {
                        p,
                        d: 1,
                        entries: vec![gen],
                    }],
                    format!("AGL(1,{p})-subgroup"),
                ));
            }
        }
        RouteKind::ExhaustiveLinear => {
            let mats = gl_generators(d, p);
            let module = linear::make_linear_action(mats)?;
            if module.group.order() != gl_order(d, p) {
                return Err(Error::Internal("GL generator set is incomplete".into()));
            }
            let list = subgroups::subgroup_classes(
                &module.group,
                EnumOptions {
                    ambient_cap: EXHAUSTIVE_GL_CAP,
                    nilpotent_only: false,
                },
            )?;
            for class in &list.classes {
                let mats: Vec<Matrix> = class
                    .group
                    .generators()
                    .iter()
                    .map(|g| matrix_of_linear_perm(g, p, d))
                    .collect();
                if linear::is_irreducible_action(&mats) {
                    out.push((mats, format!("AGL({d},{p})-subgroup")));
                }
            }
        }
        RouteKind::Semilinear => {
            let (gamma, _gamma0, _field) = linear::make_gamma(p, d)?;
            let list = subgroups::subgroup_classes(
                &gamma,
                EnumOptions {
                    ambient_cap: gamma.order().max(EXHAUSTIVE_GL_CAP),
                    nilpotent_only: false,
                },
            )?;
            let q = (p as u64).pow(d);
            for class in &list.classes {
                let mats: Vec<Matrix> = class
                    .group
                    .generators()
                    .iter()
                    .map(|g| matrix_of_linear_perm(g, p, d))
                    .collect();
                if linear::is_irreducible_action(&mats) {
                    out.push((mats, format!("AΓL(1,{q})-subgroup")));
                }
            }
        }
        RouteKind::WreathLinear { a, b } => {
            let inner = if a == 1 {
                route_subgroups(RouteKind::PrimeAffine, 1, p)?
            } else {
                route_subgroups(RouteKind::ExhaustiveLinear, a, p)?
            };
            for (k_mats, _) in inner {
                // K must be nontrivial for K ≀ S to act irreducibly.
                let k_module = linear::make_linear_action(k_mats.clone())?;
                if k_module.group.order() == 1 || !k_module.irreducible {
                    continue;
                }
                for (s_name, s_group) in transitive_solvable(b) {
                    let mats = wreath_matrices(&k_mats, &s_group, a, b, p);
                    if !linear::is_irreducible_action(&mats) {
                        return Err(Error::Internal(
                            "wreath of irreducible by transitive must be irreducible".into(),
                        ));
                    }
                    out.push((
                        mats,
                        format!("wreath({a},{b}):K{}-{}", k_module.group.order(), s_name),
                    ));
                }
            }
        }
    }
    Ok(out)
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

/// Block matrices generating K ≀ S inside GL(a·b, p).
fn wreath_matrices(
    k_mats: &[Matrix],
    s_group: &PermutationGroup,
    a: u32,
    b: u32,
    p: u64,
) -> Vec<Matrix> {
    let (a, b) = (a as usize, b as usize);
    let n = a * b;
    let mut out = Vec::new();
    for j in 0..b {
        for km in k_mats {
            let mut big = Matrix::identity(p, n);
            for r in 0..a {
                for c in 0..a {
                    big.entries[(j * a + r) * n + (j * a + c)] = km.at(r, c);
                }
            }
            out.push(big);
        }
    }
    for sg in s_group.generators_arc() {
        if sg.is_identity() {
            continue;
        }
        let mut big = Matrix {
            p,
            d: n,
            entries: vec![0; n * n],
        };
        for j in 0..b {
            let tj = sg.apply(j as Point) as usize;
            for r in 0..a {
                big.entries[(tj * a + r) * n + (j * a + r)] = 1;
            }
        }
        out.push(big);
    }
    out
}

/// A persisted solvable primitive permutation group.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub degree: u64,
    pub group: PermutationGroup,
    pub order: u128,
    pub flags: GroupFlags,
    pub route: String,
    /// Set when a fingerprint tie with another entry could not be resolved
    /// by a conjugacy test in a common constructed ambient.
    pub possible_duplicate: bool,
}

#[derive(Debug, Clone)]
pub struct DegreeMeta {
    pub tier: u8,
    pub complete: bool,
    pub completeness: String,
    pub routes: Vec<String>,
}

#[derive(Debug, Default)]
pub struct Catalog {
    pub entries: BTreeMap<u64, Vec<CatalogEntry>>,
    pub meta: BTreeMap<u64, DegreeMeta>,
}

impl Catalog {
    pub fn degrees(&self) -> Vec<u64> {
        self.entries.keys().copied().collect()
    }

    pub fn at(&self, degree: u64) -> &[CatalogEntry] {
        self.entries.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Builds the affine group `V ⋊ K` on p^d points from matrix generators.
pub fn affine_group(p: u64, d: u32, k_mats: &[Matrix]) -> Result<PermutationGroup> {
    let n = (p as u128).pow(d);
    if n > WREATH_DEGREE_CAP as u128 {
        return Err(Error::SizeCap(n.min(u64::MAX as u128) as u64, WREATH_DEGREE_CAP));
    }
    let n = n as usize;
    let mut gens = Vec::new();
    for i in 0..d as usize {
        let e = (p as u64).pow(i as u32);
        let mut images = Vec::with_capacity(n);
        for v in 0..n as u64 {
            images.push(linear::add_points(v, e, p, d as usize) as Point);
        }
        gens.push(Permutation::from_images(images)?);
    }
    for m in k_mats {
        let perm = m.to_permutation()?;
        if !perm.is_identity() {
            gens.push(perm);
        }
    }
    PermutationGroup::from_generators(gens)
}

/// All solvable primitive permutation groups of degree `n` known to the
/// route table, pairwise non-conjugate, sorted by order then generators.
pub fn solvable_primitive_catalog(n: u64) -> Result<Vec<CatalogEntry>> {
    let routes = degree_routes(n)?;
    let (p, d) = (routes.p, routes.d);
    let mut raw: Vec<CatalogEntry> = Vec::new();
    for route in &routes.routes {
        for (k_mats, route_name) in route_subgroups(*route, d, p)? {
            let group = affine_group(p, d, &k_mats)?;
            let flags = classify::classify(&group)?;
            if !flags.is_primitive || !flags.is_solvable {
                return Err(Error::Internal(format!(
                    "constructed degree-{n} group via {route_name} is not solvable primitive"
                )));
            }
            raw.push(CatalogEntry {
                degree: n,
                order: group.order(),
                group,
                flags,
                route: route_name,
                possible_duplicate: false,
            });
        }
    }
    dedup_entries(&mut raw, p, d)?;
    raw.sort_by(|a, b| {
        a.order
            .cmp(&b.order)
            .then_with(|| gens_text(&a.group).cmp(&gens_text(&b.group)))
    });
    Ok(raw)
}

fn gens_text(g: &PermutationGroup) -> String {
    g.generators()
        .iter()
        .map(|p| p.to_text())
        .collect::<Vec<_>>()
        .join(";")
}

/// A common constructed ambient for conjugacy testing of two entries, when
/// one exists within the index cap.
fn common_ambient(a: &CatalogEntry, b: &CatalogEntry, p: u64, d: u32) -> Result<Option<PermutationGroup>> {
    let same_family = |r: &str| -> Option<&str> {
        if r.starts_with("AGL(") {
            Some("agl")
        } else if r.starts_with("AΓL(") {
            Some("agammal")
        } else if r.starts_with("wreath(") {
            Some("wreath")
        } else {
            None
        }
    };
    let (fa, fb) = (same_family(&a.route), same_family(&b.route));
    let ambient = match (fa, fb) {
        (Some("agl"), Some("agl")) => {
            if (p as u128).pow(d) * gl_order(d, p) <= INDEX_CAP {
                Some(affine_group(p, d, &gl_generators(d, p))?)
            } else {
                None
            }
        }
        (Some("agammal"), Some("agammal")) => {
            let (gamma, _, _) = linear::make_gamma(p, d)?;
            let gamma_mats: Vec<Matrix> = gamma
                .generators()
                .iter()
                .map(|g| matrix_of_linear_perm(g, p, d))
                .collect();
            Some(affine_group(p, d, &gamma_mats)?)
        }
        (Some("wreath"), Some("wreath")) => {
            // Same factorization: V ⋊ (GL(a,p) ≀ S_b) is the family ambient.
            let pa = wreath_params(&a.route);
            let pb = wreath_params(&b.route);
            match (pa, pb) {
                (Some((wa, wb)), Some((wa2, wb2))) if (wa, wb) == (wa2, wb2) => {
                    let full_order = (p as u128).pow(d)
                        * gl_order(wa, p).pow(wb)
                        * factorial(wb as u64);
                    if full_order <= INDEX_CAP {
                        let s_full = transitive_solvable(wb)
                            .into_iter()
                            .last()
                            .map(|(_, g)| g)
                            .ok_or_else(|| Error::Internal("no block group".into()))?;
                        let mats = wreath_matrices(&gl_generators(wa, p), &s_full, wa, wb, p);
                        Some(affine_group(p, d, &mats)?)
                    } else {
                        None
                    }
                }
                _ => None,
            }
        }
        _ => None,
    };
    Ok(ambient)
}

fn wreath_params(route: &str) -> Option<(u32, u32)> {
    let inner = route.strip_prefix("wreath(")?.split(')').next()?;
    let mut it = inner.split(',');
    let a = it.next()?.trim().parse().ok()?;
    let b = it.next()?.trim().parse().ok()?;
    Some((a, b))
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// Removes conjugate duplicates; ties that cannot be tested in a common
/// ambient are kept and flagged.
fn dedup_entries(entries: &mut Vec<CatalogEntry>, p: u64, d: u32) -> Result<()> {
    let mut fingerprints: Vec<conjugacy::Fingerprint> = Vec::with_capacity(entries.len());
    for e in entries.iter() {
        // Fingerprint keyed on the point stabilizer's orbit structure plus
        // the order profile of the full group.
        fingerprints.push(entry_fingerprint(e)?);
    }
    let mut keep: Vec<bool> = vec![true; entries.len()];
    for i in 0..entries.len() {
        if !keep[i] {
            continue;
        }
        for j in (i + 1)..entries.len() {
            if !keep[j] || fingerprints[i] != fingerprints[j] {
                continue;
            }
            match common_ambient(&entries[i], &entries[j], p, d)? {
                Some(ambient) => {
                    let (conj, _) =
                        conjugacy::are_conjugate_subgroups(&entries[i].group, &entries[j].group, &ambient)?;
                    if conj {
                        keep[j] = false;
                    }
                }
                None => {
                    entries[i].possible_duplicate = true;
                    entries[j].possible_duplicate = true;
                }
            }
        }
    }
    let mut idx = 0;
    entries.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
    Ok(())
}

fn entry_fingerprint(e: &CatalogEntry) -> Result<conjugacy::Fingerprint> {
    let stab = e.group.point_stabilizer(0)?;
    let mut orbit_sizes: Vec<usize> = stab.orbit_partition().iter().map(|o| o.len()).collect();
    orbit_sizes.sort_unstable();
    let order_profile = if e.group.order() <= conjugacy::PROFILE_CAP {
        Some(classify::order_profile(&e.group)?)
    } else {
        None
    };
    Ok(conjugacy::Fingerprint {
        order: e.group.order(),
        orbit_sizes,
        order_profile,
    })
}

/// Builds the full catalog for a set of degrees.
pub fn build_catalog(degrees: &[u64]) -> Result<Catalog> {
    let mut catalog = Catalog::default();
    for &n in degrees {
        let routes = degree_routes(n)?;
        let entries = solvable_primitive_catalog(n)?;
        let completeness = if routes.complete && routes.routes == vec![RouteKind::Semilinear] {
            "complete (forced semilinear route)".to_string()
        } else if routes.tier == 1 || matches!(routes.routes.as_slice(), [RouteKind::ExhaustiveLinear] | [RouteKind::PrimeAffine]) {
            "complete".to_string()
        } else {
            "partial-routes".to_string()
        };
        catalog.meta.insert(
            n,
            DegreeMeta {
                tier: routes.tier,
                complete: completeness.starts_with("complete"),
                completeness,
                routes: routes
                    .routes
                    .iter()
                    .map(|r| format!("{r:?}"))
                    .collect(),
            },
        );
        catalog.entries.insert(n, entries);
    }
    Ok(catalog)
}

// Catalog persistence: JSON-lines, one entry per line:
// {"v":1,"degree":9,"gens":["..."],"order":"432",
//  "flags":{"solvable":true,"primitive":true},"route":"AGL(2,3)-subgroup"}

#[derive(Serialize, Deserialize)]
struct FlagsLine {
    solvable: bool,
    primitive: bool,
}

#[derive(Serialize, Deserialize)]
struct EntryLine {
    v: u32,
    degree: u64,
    gens: Vec<String>,
    order: String,
    flags: FlagsLine,
    route: String,
}

pub const CATALOG_SCHEMA_VERSION: u32 = 1;

pub fn catalog_store(catalog: &Catalog, path: &std::path::Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    for entries in catalog.entries.values() {
        for e in entries {
            let line = EntryLine {
                v: CATALOG_SCHEMA_VERSION,
                degree: e.degree,
                gens: e.group.generators().iter().map(|g| g.to_text()).collect(),
                order: e.order.to_string(),
                flags: FlagsLine {
                    solvable: e.flags.is_solvable,
                    primitive: e.flags.is_primitive,
                },
                route: e.route.clone(),
            };
            serde_json::to_writer(&mut file, &line)
                .map_err(|err| Error::CatalogFormat(err.to_string()))?;
            file.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn catalog_load(path: &std::path::Path) -> Result<Catalog> {
    use std::io::BufRead;
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut catalog = Catalog::default();
    for line in file.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: EntryLine =
            serde_json::from_str(&line).map_err(|e| Error::CatalogFormat(e.to_string()))?;
        if parsed.v != CATALOG_SCHEMA_VERSION {
            return Err(Error::CatalogFormat(format!(
                "schema version {} unsupported (expected {CATALOG_SCHEMA_VERSION})",
                parsed.v
            )));
        }
        let gens: Vec<Permutation> = parsed
            .gens
            .iter()
            .map(|t| Permutation::parse(t))
            .collect::<Result<_>>()?;
        let group = PermutationGroup::from_generators(gens)?;
        let claimed: u128 = parsed
            .order
            .parse()
            .map_err(|_| Error::CatalogFormat("order is not a decimal integer".into()))?;
        if group.order() != claimed {
            return Err(Error::CatalogIntegrity(format!(
                "degree-{} entry claims order {} but generators give {}",
                parsed.degree,
                claimed,
                group.order()
            )));
        }
        let flags = classify::classify(&group)?;
        if flags.is_solvable != parsed.flags.solvable || flags.is_primitive != parsed.flags.primitive
        {
            return Err(Error::CatalogIntegrity(format!(
                "degree-{} entry flags disagree with recomputation",
                parsed.degree
            )));
        }
        catalog
            .entries
            .entry(parsed.degree)
            .or_default()
            .push(CatalogEntry {
                degree: parsed.degree,
                order: group.order(),
                group,
                flags,
                route: parsed.route,
                possible_duplicate: false,
            });
    }
    for (&n, _) in catalog.entries.iter() {
        let routes = degree_routes(n)?;
        let completeness = if routes.complete && routes.routes == vec![RouteKind::Semilinear] {
            "complete (forced semilinear route)".to_string()
        } else if routes.tier == 1
            || matches!(routes.routes.as_slice(), [RouteKind::ExhaustiveLinear] | [RouteKind::PrimeAffine])
        {
            "complete".to_string()
        } else {
            "partial-routes".to_string()
        };
        catalog.meta.insert(
            n,
            DegreeMeta {
                tier: routes.tier,
                complete: completeness.starts_with("complete"),
                completeness,
                routes: routes.routes.iter().map(|r| format!("{r:?}")).collect(),
            },
        );
    }
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wreath_of_c2_by_c2_is_dihedral_eight() {
        let c2 = PermutationGroup::cyclic(2);
        let w = wreath_product(&c2, &c2).unwrap();
        assert_eq!(w.order(), 8);
        assert!(!classify::is_abelian(&w));
        assert!(classify::is_nilpotent(&w).unwrap());
    }

    #[test]
    fn wreath_by_trivial_is_the_group_itself() {
        let s3 = PermutationGroup::symmetric(3);
        let t = PermutationGroup::trivial(1);
        let w = wreath_product(&s3, &t).unwrap();
        assert_eq!(w.degree(), 3);
        assert_eq!(w.order(), 6);
    }

    #[test]
    fn s3_wreath_c2_order_and_blocks() {
        let s3 = PermutationGroup::symmetric(3);
        let c2 = PermutationGroup::cyclic(2);
        let w = wreath_product(&s3, &c2).unwrap();
        assert_eq!(w.degree(), 6);
        assert_eq!(w.order(), 72);
        // {0,1,2} / {3,4,5} form a block system.
        let block = classify::minimal_block(&w, 0, 1);
        assert_eq!(block, vec![0, 1, 2]);
        assert!(!classify::is_primitive(&w));
    }

    #[test]
    fn degree_routes_basic() {
        assert!(degree_routes(6).is_err());
        assert!(degree_routes(121).is_err());
        let r4 = degree_routes(4).unwrap();
        assert_eq!((r4.p, r4.d, r4.tier), (2, 2, 1));
        let r32 = degree_routes(32).unwrap();
        assert_eq!(r32.routes, vec![RouteKind::Semilinear]);
        assert!(r32.complete);
        let r64 = degree_routes(64).unwrap();
        assert!(r64.routes.len() > 1);
        assert!(!r64.complete);
    }

    #[test]
    fn gl22_irreducible_solvable_subgroups() {
        let subs = irreducible_solvable_subgroups(2, 2).unwrap();
        // C3 and S3 = GL(2,2).
        let mut orders: Vec<u128> = subs
            .iter()
            .map(|(mats, _)| linear::make_linear_action(mats.clone()).unwrap().group.order())
            .collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![3, 6]);
    }

    #[test]
    fn gl32_irreducible_solvable_subgroups() {
        let subs = irreducible_solvable_subgroups(3, 2).unwrap();
        let mut orders: Vec<u128> = subs
            .iter()
            .map(|(mats, _)| linear::make_linear_action(mats.clone()).unwrap().group.order())
            .collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![7, 21]);
    }

    #[test]
    fn degree_4_catalog() {
        let entries = solvable_primitive_catalog(4).unwrap();
        let orders: Vec<u128> = entries.iter().map(|e| e.order).collect();
        assert_eq!(orders, vec![12, 24]);
    }

    #[test]
    fn degree_8_catalog() {
        let entries = solvable_primitive_catalog(8).unwrap();
        let orders: Vec<u128> = entries.iter().map(|e| e.order).collect();
        assert_eq!(orders, vec![56, 168]);
    }

    #[test]
    fn degree_2_catalog_is_c2() {
        let entries = solvable_primitive_catalog(2).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].order, 2);
    }

    #[test]
    fn catalog_roundtrip_and_tamper_detection() {
        let catalog = build_catalog(&[4]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cat.jsonl");
        catalog_store(&catalog, &path).unwrap();
        let loaded = catalog_load(&path).unwrap();
        assert_eq!(loaded.at(4).len(), 2);
        assert_eq!(
            loaded.at(4).iter().map(|e| e.order).collect::<Vec<_>>(),
            vec![12, 24]
        );
        let text = std::fs::read_to_string(&path).unwrap();
        for (a, b) in loaded.at(4).iter().zip(catalog.at(4)) {
            assert_eq!(gens_text(&a.group), gens_text(&b.group));
        }
        // Tamper with the order field.
        let bad = text.replacen("\"order\":\"12\"", "\"order\":\"13\"", 1);
        std::fs::write(&path, bad).unwrap();
        assert!(matches!(
            catalog_load(&path),
            Err(Error::CatalogIntegrity(_))
        ));
    }

    #[test]
    fn empty_catalog_roundtrips() {
        let catalog = Catalog::default();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        catalog_store(&catalog, &path).unwrap();
        let loaded = catalog_load(&path).unwrap();
        assert!(loaded.entries.is_empty());
    }
}
