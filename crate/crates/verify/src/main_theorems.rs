//! The orbit-size main theorems on faithful completely reducible domains:
//! for every nontrivial nilpotent subgroup `H`, some `v` satisfies
//! `p·|C_H(v)|^p <= |H|` (with `p` the smallest prime divisor of `|H|`),
//! and when `2 | |H|`, some `v` satisfies `2·|H| <= |v^H|²`. Both are
//! decided from orbit extremes: the minimum stabilizer order over nonzero
//! points is `|H|` divided by the largest orbit size.

use crate::gamma::orbit_extremes;
use crate::report::{ClaimReport, Verdict, Witness};
use num_bigint::BigUint;
use orbitcheck_core::conjugacy;
use orbitcheck_core::linear::{self, ActionDomain, LinearModule, Matrix, SumAssignment};
use orbitcheck_core::subgroups::{self, EnumOptions};
use orbitcheck_core::zoo;
use orbitcheck_core::{classify, Error, PermutationGroup, Result};
use rayon::prelude::*;

/// The five base dimensions/characteristics of the standard universe.
pub const STANDARD_GLS: [(u32, u64); 5] = [(2, 2), (2, 3), (3, 2), (2, 5), (3, 3)];

/// Outcome of both theorem checks for one nilpotent subgroup on one domain.
#[derive(Debug, Clone)]
pub struct TheoremNumbers {
    pub h_order: u128,
    pub smallest_prime: u64,
    pub max_orbit: u64,
    pub min_centralizer: u128,
    pub witness_point: u32,
    pub thm_orbit_square_holds: Option<bool>,
    pub thm_centralizer_power_holds: bool,
}

/// Exact checks for one nilpotent `H` acting on a domain.
pub fn check_theorems(h: &PermutationGroup) -> Result<TheoremNumbers> {
    if h.order() == 1 {
        return Err(Error::Internal("the trivial subgroup is excluded".into()));
    }
    let extremes = orbit_extremes(h);
    let p = classify::smallest_prime_divisor(h.order()).expect("nontrivial group");
    let min_c = extremes.min_centralizer_order;
    // p · minC^p <= |H|, in arbitrary precision.
    let lhs = BigUint::from(p) * BigUint::from(min_c).pow(p as u32);
    let centralizer_ok = lhs <= BigUint::from(h.order());
    let orbit_square = if h.order() % 2 == 0 {
        let m = BigUint::from(extremes.max_orbit);
        Some(BigUint::from(2u32) * BigUint::from(h.order()) <= &m * &m)
    } else {
        None
    };
    // Internal consistency: for p = 2 the two forms coincide through the
    // orbit-stabilizer identity.
    if p == 2 {
        debug_assert_eq!(orbit_square, Some(centralizer_ok));
    }
    Ok(TheoremNumbers {
        h_order: h.order(),
        smallest_prime: p,
        max_orbit: extremes.max_orbit,
        min_centralizer: min_c,
        witness_point: extremes.witness_point,
        thm_orbit_square_holds: orbit_square,
        thm_centralizer_power_holds: centralizer_ok,
    })
}

fn record(report: &mut ClaimReport, label: &str, t: &TheoremNumbers) {
    let centralizer_fail = !t.thm_centralizer_power_holds;
    let orbit_fail = t.thm_orbit_square_holds == Some(false);
    if centralizer_fail || orbit_fail {
        report.merge_verdict(Verdict::Fail);
        report.witnesses.push(
            Witness::new("counterexample", format!("orbit-size theorem fails on {label}"))
                .with("h_order", t.h_order)
                .with("smallest_prime", t.smallest_prime)
                .with("max_orbit", t.max_orbit)
                .with("min_centralizer", t.min_centralizer)
                .with("witness_point", t.witness_point)
                .with("centralizer_power_holds", t.thm_centralizer_power_holds)
                .with("orbit_square_holds", format!("{:?}", t.thm_orbit_square_holds)),
        );
    }
}

/// Checks both theorems over every nontrivial nilpotent class of one group
/// acting on its domain; the domain must be faithful (a permutation action
/// always is) and certified completely reducible.
pub fn verify_domain(domain: &ActionDomain, label: &str, report: &mut ClaimReport) -> Result<u64> {
    if !domain.completely_reducible {
        return Err(Error::Internal(format!(
            "domain {label} lacks a complete-reducibility certificate"
        )));
    }
    // Faithfulness: the action is a permutation representation on exactly
    // the domain's points, so only the identity fixes everything.
    if domain.group.degree() as u64 != domain.size {
        return Err(Error::DegreeMismatch(
            domain.group.degree(),
            domain.size as usize,
        ));
    }
    let list = subgroups::nilpotent_subgroups(&domain.group)?;
    let mut checked = 0u64;
    for class in list.classes.iter().filter(|c| c.order > 1) {
        let numbers = check_theorems(&class.group)?;
        record(report, &format!("{label} (|H|={})", class.order), &numbers);
        checked += 1;
    }
    Ok(checked)
}

/// One irreducible solvable subgroup of a GL with its natural module.
pub struct NaturalModule {
    pub d: u32,
    pub p: u64,
    pub module: LinearModule,
    pub route: String,
}

pub fn natural_modules(d: u32, p: u64) -> Result<Vec<NaturalModule>> {
    let mut out = Vec::new();
    for (mats, route) in zoo::irreducible_solvable_subgroups(d, p)? {
        let module = linear::make_linear_action(mats)?;
        if module.group.order() == 1 {
            continue;
        }
        out.push(NaturalModule { d, p, module, route });
    }
    Ok(out)
}

/// The single-module half of the standard universe: every irreducible
/// solvable subgroup of the five GLs on its natural module.
pub fn verify_single_modules() -> Result<ClaimReport> {
    let mut report = ClaimReport::new(
        "main-theorems",
        STANDARD_GLS.iter().map(|(d, p)| (*p).pow(*d)).collect(),
        "irreducible solvable subgroups of GL(2,2), GL(2,3), GL(3,2), GL(2,5), GL(3,3) on natural modules".to_string(),
    );
    let mut checked = 0u64;
    let mut groups = 0u64;
    for (d, p) in STANDARD_GLS {
        for nm in natural_modules(d, p)? {
            let domain: ActionDomain = (&nm.module).into();
            checked += verify_domain(&domain, &format!("{}^{} via {}", p, d, nm.route), &mut report)?;
            groups += 1;
        }
    }
    report.set_number("groups", groups);
    report.set_number("nilpotent_classes_checked", checked);
    Ok(report)
}

/// A maximal nilpotent action on one of the five natural modules, as matrix
/// generators (deduplicated inside its GL).
pub struct MaximalNilpotentAction {
    pub d: u32,
    pub p: u64,
    pub group: PermutationGroup,
    pub order: u128,
}

/// Collects, per GL, the maximal nilpotent subgroup classes across all its
/// irreducible solvable subgroups, deduplicated up to GL-conjugacy.
pub fn maximal_nilpotent_actions(d: u32, p: u64) -> Result<Vec<MaximalNilpotentAction>> {
    let gl_mats = gl_generator_matrices(d, p);
    let gl_module = linear::make_linear_action(gl_mats)?;
    let mut reps: Vec<MaximalNilpotentAction> = Vec::new();
    for nm in natural_modules(d, p)? {
        let list = subgroups::nilpotent_subgroups(&nm.module.group)?;
        for class in list.classes.iter().filter(|c| c.order > 1 && c.is_maximal) {
            let mut duplicate = false;
            for known in &reps {
                if known.order != class.order {
                    continue;
                }
                let (conj, _) =
                    conjugacy::are_conjugate_subgroups(&class.group, &known.group, &gl_module.group)?;
                if conj {
                    duplicate = true;
                    break;
                }
            }
            if !duplicate {
                reps.push(MaximalNilpotentAction {
                    d,
                    p,
                    group: class.group.clone(),
                    order: class.order,
                });
            }
        }
    }
    reps.sort_by_key(|r| r.order);
    Ok(reps)
}

fn gl_generator_matrices(d: u32, p: u64) -> Vec<Matrix> {
    // Transvections plus a primitive diagonal generate GL(d,p).
    let dd = d as usize;
    let mut out = Vec::new();
    for i in 0..dd {
        for j in 0..dd {
            if i == j {
                continue;
            }
            let mut m = Matrix::identity(p, dd);
            m.entries[i * dd + j] = 1;
            out.push(m);
        }
    }
    if p > 2 {
        let f = orbitcheck_core::field::FieldSpec::new(p, 1).expect("prime field");
        let mut m = Matrix::identity(p, dd);
        m.entries[0] = f.primitive_element();
        out.push(m);
    }
    out
}

fn matrices_of(group: &PermutationGroup, d: u32, p: u64) -> Vec<Matrix> {
    let dd = d as usize;
    group
        .generators()
        .iter()
        .map(|g| {
            let mut entries = vec![0u64; dd * dd];
            let mut col = vec![0u64; dd];
            for c in 0..dd {
                let e = (p as u64).pow(c as u32);
                linear::decode_vector(g.apply(e as u32) as u64, p, dd, &mut col);
                for r in 0..dd {
                    entries[r * dd + c] = col[r];
                }
            }
            Matrix { p, d: dd, entries }
        })
        .collect()
}

/// The pairwise direct-sum half of the universe: every nilpotent subgroup of
/// `G1 × G2` lies inside a product of maximal nilpotent actions `K1 × K2`
/// (projections of a nilpotent subgroup are nilpotent), so enumerating all
/// subgroups of each product, up to conjugacy, covers every class.
pub fn verify_pairwise_sums() -> Result<ClaimReport> {
    let mut report = ClaimReport::new(
        "main-theorems",
        STANDARD_GLS.iter().map(|(d, p)| (*p).pow(*d)).collect(),
        "pairwise direct sums of the five natural modules (product actions)".to_string(),
    );
    let mut per_gl: Vec<Vec<MaximalNilpotentAction>> = Vec::new();
    for (d, p) in STANDARD_GLS {
        per_gl.push(maximal_nilpotent_actions(d, p)?);
    }
    let mut pair_jobs: Vec<(usize, usize, usize, usize)> = Vec::new();
    for i in 0..STANDARD_GLS.len() {
        for j in i..STANDARD_GLS.len() {
            for a in 0..per_gl[i].len() {
                for b in 0..per_gl[j].len() {
                    if i == j && b < a {
                        continue;
                    }
                    pair_jobs.push((i, j, a, b));
                }
            }
        }
    }
    let results: Vec<Result<(u64, Vec<Witness>, bool)>> = pair_jobs
        .par_iter()
        .map(|&(i, j, a, b)| verify_one_pair(&per_gl[i][a], &per_gl[j][b]))
        .collect();
    let mut checked = 0u64;
    let mut pairs = 0u64;
    for r in results {
        let (count, witnesses, failed) = r?;
        checked += count;
        pairs += 1;
        if failed {
            report.merge_verdict(Verdict::Fail);
        }
        report.witnesses.extend(witnesses);
    }
    report.set_number("maximal_nilpotent_pairs", pairs);
    report.set_number("nilpotent_subgroups_checked", checked);
    Ok(report)
}

/// All subgroups of `K1 × K2` on the direct-sum (or mixed-characteristic
/// product) domain, each checked against both theorems.
fn verify_one_pair(
    k1: &MaximalNilpotentAction,
    k2: &MaximalNilpotentAction,
) -> Result<(u64, Vec<Witness>, bool)> {
    let domain = pair_domain(k1, k2)?;
    let list = subgroups::subgroup_classes(
        &domain.group,
        EnumOptions {
            ambient_cap: domain.group.order().max(subgroups::GENERAL_ENUM_CAP),
            nilpotent_only: false,
        },
    )?;
    let label = format!(
        "K({})xK({}) on {}",
        k1.order, k2.order, domain.description
    );
    let mut witnesses = Vec::new();
    let mut failed = false;
    let mut checked = 0u64;
    for class in list.classes.iter().filter(|c| c.order > 1) {
        let numbers = check_theorems(&class.group)?;
        checked += 1;
        if !numbers.thm_centralizer_power_holds || numbers.thm_orbit_square_holds == Some(false) {
            failed = true;
            witnesses.push(
                Witness::new("counterexample", format!("orbit-size theorem fails on {label}"))
                    .with("h_order", numbers.h_order)
                    .with("smallest_prime", numbers.smallest_prime)
                    .with("max_orbit", numbers.max_orbit)
                    .with("min_centralizer", numbers.min_centralizer),
            );
        }
    }
    Ok((checked, witnesses, failed))
}

/// Builds the product domain of two maximal nilpotent actions: a true
/// direct-sum module in equal characteristic, a cartesian product of the
/// two permutation domains otherwise.
fn pair_domain(
    k1: &MaximalNilpotentAction,
    k2: &MaximalNilpotentAction,
) -> Result<ActionDomain> {
    if k1.p == k2.p {
        let m1 = linear::make_linear_action(matrices_of(&k1.group, k1.d, k1.p))?;
        let m2 = linear::make_linear_action(matrices_of(&k2.group, k2.d, k2.p))?;
        let mut m1 = m1;
        let mut m2 = m2;
        // Complete reducibility comes from the ambient irreducible modules;
        // the nilpotent parts need the certificate set explicitly.
        m1.completely_reducible = true;
        m2.completely_reducible = true;
        let sum = linear::direct_sum_module(&[m1, m2], SumAssignment::Product)?;
        let mut domain: ActionDomain = (&sum).into();
        domain.completely_reducible = true;
        Ok(domain)
    } else {
        let d1 = module_domain(&k1.group, k1.d, k1.p)?;
        let d2 = module_domain(&k2.group, k2.d, k2.p)?;
        linear::product_domain(&d1, &d2)
    }
}

fn module_domain(group: &PermutationGroup, d: u32, p: u64) -> Result<ActionDomain> {
    Ok(ActionDomain {
        group: group.clone(),
        size: (p as u64).pow(d),
        completely_reducible: true,
        description: format!("GF({p})^{d}"),
    })
}

/// Monotonicity under trivial summands: extending the domain by points on
/// which the group acts trivially multiplies every orbit by nothing and
/// cannot decrease the maximal orbit size.
pub fn trivial_summand_monotone(group: &PermutationGroup, extra_points: u64) -> Result<bool> {
    let base = orbit_extremes(group);
    let d1 = ActionDomain {
        group: group.clone(),
        size: group.degree() as u64,
        completely_reducible: true,
        description: "base".into(),
    };
    let d2 = ActionDomain {
        group: PermutationGroup::trivial(extra_points as usize),
        size: extra_points,
        completely_reducible: true,
        description: "trivial".into(),
    };
    let prod = linear::product_domain(&d1, &d2)?;
    let after = orbit_extremes(&prod.group);
    Ok(after.max_orbit >= base.max_orbit)
}

/// Verification of a user-supplied module description file.
pub fn verify_module_description(desc: &linear::ModuleDescription) -> Result<ClaimReport> {
    let module = desc.to_module()?;
    let mut report = ClaimReport::new(
        "main-theorems",
        vec![module.point_count()],
        format!("user module GF({})^{}", desc.p, desc.d),
    );
    if !module.completely_reducible {
        report.merge_verdict(Verdict::IncompleteUniverse);
        report.witnesses.push(Witness::new(
            "finding",
            "module is not certified completely reducible (not irreducible); skipping",
        ));
        return Ok(report);
    }
    let domain: ActionDomain = (&module).into();
    let checked = verify_domain(&domain, &report.universe.description.clone(), &mut report)?;
    report.set_number("nilpotent_classes_checked", checked);
    Ok(report)
}
