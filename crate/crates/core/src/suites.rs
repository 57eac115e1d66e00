//! Named verification suites with deterministic JSON reports.
//!
//! A report holds the tool version, the effective configuration and one
//! entry per check, sorted by name. Wall-clock times are returned next to
//! the report, never inside it, so identical configurations give
//! byte-identical reports for any thread count.

use crate::displacement::{
    displacement_energy, packing_number, subgroups_commute, verify_disjunction_inequality, verify_master_inequalities,
};
use crate::error::{Error, Result};
use crate::fcomm::{
    fcomm_norm_bound, rearrange, seven_fcommutators, solve_rearrange_id, two_commutator_witness, two_fcommutators,
    two_fcommutators_capacity_one, FCommEnvironment,
};
use crate::group::{Element, FiniteGroup, GroupDescriptor, Perm, SubgroupSpec, DEFAULT_LIMIT};
use crate::norms::{
    aff_z_commutator_witness, aff_z_window, all_pairs, check_extremal_domination, commutator_length_in,
    coset_extension_qnorm, qk_norm_in, quasinorm_to_norm, stabilization_upper, verify_norm_axioms, verify_quasinorm,
    Norm, NormTable, SupportNorm, TrivialNorm, WreathSupportNorm,
};
use crate::par;
use crate::quasimorphism::{
    coordinate_sum, counting_qm, gbar_defect_decomposition, sample_triples, scl_bounds, verify_gbar_splitting,
    verify_prop1_witness,
};
use crate::rational::{self, int, Rational};
use crate::sampling::{random_element, rng_for};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::time::Instant;

pub const SUITES: &[&str] = &[
    "aff-z",
    "displacement",
    "elementary-sl",
    "gbar",
    "gbar-defect",
    "lemma23",
    "norm-axioms",
    "packing",
    "prop-witness",
    "seven-fcomm",
    "stabilization",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Number of seeded cases; `None` uses the suite default.
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub version: String,
    pub config: Value,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub check: String,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub report: SuiteReport,
    pub timings: Vec<Timing>,
}

/// Run a suite by name. A tripped size guard aborts the suite with
/// [`Error::GuardExceeded`]; any other error fails only its check.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteRun> {
    let mut r = Runner::default();
    let budget = |default: usize| config.budget.unwrap_or(default);
    let seed = config.seed;
    let effective_budget = match name {
        "aff-z" => aff_z(&mut r),
        "displacement" => displacement(&mut r),
        "elementary-sl" => elementary_sl(&mut r),
        "gbar" => gbar(&mut r, seed, budget(1000)),
        "gbar-defect" => gbar_defect(&mut r, seed, budget(10_000)),
        "lemma23" => lemma23(&mut r, seed, budget(1000)),
        "norm-axioms" => norm_axioms(&mut r),
        "packing" => packing(&mut r),
        "prop-witness" => prop_witness(&mut r, seed, budget(1000)),
        "seven-fcomm" => seven_fcomm(&mut r, seed, budget(100)),
        "stabilization" => stabilization(&mut r, seed, budget(100)),
        _ => return Err(Error::InvalidInput(format!("unknown suite {name:?}; known: {}", SUITES.join(", ")))),
    };
    if let Some(e) = r.guard {
        return Err(e);
    }
    let mut checks = r.checks;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let mut timings = r.timings;
    timings.sort_by(|a, b| a.check.cmp(&b.check));
    let report = SuiteReport {
        suite: name.to_string(),
        version: crate::VERSION.to_string(),
        config: json!({ "seed": seed, "budget": effective_budget }),
        passed: checks.iter().all(|c| c.passed),
        checks,
    };
    Ok(SuiteRun { report, timings })
}

#[derive(Default)]
struct Runner {
    checks: Vec<CheckResult>,
    timings: Vec<Timing>,
    guard: Option<Error>,
}

impl Runner {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, Value)>) {
        if self.guard.is_some() {
            return;
        }
        let start = Instant::now();
        let outcome = f();
        self.timings.push(Timing { check: name.to_string(), seconds: start.elapsed().as_secs_f64() });
        let (passed, detail) = match outcome {
            Ok(v) => v,
            Err(e @ Error::GuardExceeded { .. }) => {
                self.guard = Some(e);
                return;
            }
            Err(e) => (false, json!({ "error": e.to_string() })),
        };
        self.checks.push(CheckResult { name: name.to_string(), passed, detail });
    }
}

/// Per-case outcomes folded into a count and the least failing witness.
fn tally(outcomes: Vec<Result<Option<Value>>>) -> Result<(bool, Value)> {
    let mut failures = 0;
    let mut first = None;
    let checked = outcomes.len();
    for o in outcomes {
        if let Some(w) = o? {
            failures += 1;
            first.get_or_insert(w);
        }
    }
    Ok((failures == 0, json!({ "checked": checked, "failures": failures, "first_failure": first })))
}

fn parse(d: &GroupDescriptor, s: &str) -> Result<Element> {
    d.parse_element(s)
}

fn sym123(d: &GroupDescriptor) -> Result<SubgroupSpec> {
    Ok(SubgroupSpec::labeled(d.parse_elements("(1 2), (1 2 3)")?, "Sym{1,2,3}"))
}

fn rat(r: &Rational) -> String {
    rational::to_string(r)
}

// ---------------------------------------------------------------------------

fn elementary_sl(r: &mut Runner) -> Option<usize> {
    for n in [3usize, 4] {
        r.check(&format!("sl{n}z-elementary-commutator"), || {
            let d = GroupDescriptor::SlZ(n);
            let triples: Vec<(usize, usize, usize)> = (0..n)
                .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
                .filter(|&(i, j, k)| i != j && j != k && i != k)
                .collect();
            let cases: Vec<(usize, usize, usize, i64)> =
                triples.iter().flat_map(|&(i, j, k)| (-1000..=1000).map(move |p| (i, j, k, p))).collect();
            let outcomes = par::map(&cases, |&(i, j, k, p)| -> Result<Option<Value>> {
                let lhs = d.elementary(i, k, p)?;
                let rhs = d.commutator_of(&d.elementary(i, j, 1)?, &d.power(&d.elementary(j, k, 1)?, p)?)?;
                Ok((lhs != rhs).then(|| {
                    json!({ "indices": [i + 1, j + 1, k + 1], "p": p, "lhs": lhs.to_string(), "rhs": rhs.to_string() })
                }))
            });
            let (ok, mut detail) = tally(outcomes)?;
            detail["index_triples"] = json!(triples.len());
            detail["exponents"] = json!("-1000..=1000");
            Ok((ok, detail))
        });
    }
    None
}

// ---------------------------------------------------------------------------

/// `z^a t^e` as the affine map `x ↦ (−1)^e x + a` of `Z`.
fn aff_map(g: &Element) -> (i64, i64) {
    match g {
        Element::Aff(a) => (if a.flip { -1 } else { 1 }, a.a),
        _ => unreachable!("aff element"),
    }
}

fn aff_compose(p: (i64, i64), q: (i64, i64)) -> (i64, i64) {
    (p.0 * q.0, p.0 * q.1 + p.1)
}

fn aff_z(r: &mut Runner) -> Option<usize> {
    let d = GroupDescriptor::AffZ;
    r.check("conjugacy-t-tz2n", || {
        let t = Element::aff(0, true);
        let z = Element::aff(1, false);
        let outcomes: Vec<Result<Option<Value>>> = (-100i64..=100)
            .map(|n| {
                let by = d.power(&z, -n)?;
                let conj = d.conjugate_of(&t, &by)?;
                let target = d.compose(&t, &d.power(&z, 2 * n)?)?;
                let oracle = aff_compose(aff_compose(aff_map(&by), aff_map(&t)), aff_map(&d.power(&z, n)?));
                let oracle_target = (-1, -2 * n);
                let ok = conj == target && oracle == oracle_target && aff_map(&target) == oracle_target;
                Ok((!ok).then(|| json!({ "n": n, "conjugator": by.to_string(), "got": conj.to_string(), "want": target.to_string() })))
            })
            .collect();
        tally(outcomes)
    });
    r.check("commutator-witness-z2n", || {
        let outcomes: Vec<Result<Option<Value>>> = (-100i64..=100)
            .map(|n| {
                let (a, b) = aff_z_commutator_witness(n);
                let c = d.commutator_of(&a, &b)?;
                Ok((c != Element::aff(2 * n, false)).then(|| json!({ "n": n, "a": a.to_string(), "b": b.to_string(), "got": c.to_string() })))
            })
            .collect();
        tally(outcomes)
    });
    r.check("coset-extension-quasinorm", || {
        let ext = coset_extension_qnorm(&d, None, DEFAULT_LIMIT)?;
        let window = aff_z_window(50);
        let report = verify_quasinorm(&ext.spec, &all_pairs(&window))?;
        let detail = json!({
            "window": window.len(),
            "transversal": ext.reps.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "constant_c": rat(&ext.constant_c),
            "report": report,
        });
        Ok((report.passed, detail))
    });
    None
}

// ---------------------------------------------------------------------------

fn random_pairs(base: &GroupDescriptor, seed: u64, i: usize, m: usize) -> Vec<(Element, Element)> {
    let mut rng = rng_for(seed, i as u64);
    (0..m).map(|_| (random_element(base, &mut rng, 1), random_element(base, &mut rng, 1))).collect()
}

fn seven_fcomm(r: &mut Runner, seed: u64, budget: usize) -> Option<usize> {
    let s3: GroupDescriptor = "sn:3".parse().expect("valid");
    let case = |i: usize| {
        let m = 1 + i % 3;
        let env = FCommEnvironment::wreath(&GroupDescriptor::wreath_zn(s3.clone(), m + 1));
        (m, env, random_pairs(&s3, seed, i, m))
    };
    let cases: Vec<usize> = (0..budget).collect();
    r.check("seven-fcommutator-reconstruction", || {
        let outcomes = par::map(&cases, |&i| -> Result<Option<Value>> {
            let (m, env, pairs) = case(i);
            let env = env?;
            let dec = seven_fcommutators(&env, &pairs)?;
            let ok = dec.verified && dec.verify(&env) && dec.factor_count() <= 7;
            Ok((!ok).then(|| json!({ "case": i, "m": m, "decomposition": dec.to_json(&env) })))
        });
        let (ok, mut detail) = tally(outcomes)?;
        detail["base"] = json!("sn:3");
        detail["m"] = json!([1, 2, 3]);
        Ok((ok, detail))
    });
    r.check("two-commutator-witness", || {
        let outcomes = par::map(&cases, |&i| -> Result<Option<Value>> {
            let (m, env, pairs) = case(i);
            let env = env?;
            let d = env.ambient();
            let b = env.base();
            let ((a1, b1), (a2, b2)) = two_commutator_witness(&env, &pairs)?;
            let h = pairs.iter().rev().fold(b.identity(), |acc, (f, g)| b.mul(&acc, &b.comm(f, g)));
            let product = d.compose(&d.commutator_of(&a1, &b1)?, &d.commutator_of(&a2, &b2)?)?;
            Ok((product != env.embed(&h)?).then(|| {
                json!({ "case": i, "m": m, "target": env.embed(&h).map(|e| e.to_string()).unwrap_or_default(),
                        "commutators": [[a1.to_string(), b1.to_string()], [a2.to_string(), b2.to_string()]] })
            }))
        });
        tally(outcomes)
    });
    r.check("wreath-support-norm-bound", || {
        let outcomes = par::map(&cases, |&i| -> Result<Option<Value>> {
            let (m, env, pairs) = case(i);
            let env = env?;
            let dec = seven_fcommutators(&env, &pairs)?;
            let bound = fcomm_norm_bound(&env, &dec, &WreathSupportNorm { modulus: m + 1 })?;
            Ok((!bound.passed).then(|| json!({ "case": i, "m": m, "bound": bound })))
        });
        tally(outcomes)
    });
    r.check("s3-two-fcommutators-exhaustive", || {
        let elems = s3.enumerate_elements(DEFAULT_LIMIT)?;
        let two = FCommEnvironment::wreath(&"wreath:sn:3:zn:3".parse()?)?;
        let one = FCommEnvironment::wreath(&"wreath:sn:3:zn:2".parse()?)?;
        let mut outcomes = Vec::new();
        for f in &elems {
            for g in &elems {
                let a = two_fcommutators(&two, f, g)?;
                let b = two_fcommutators_capacity_one(&one, f, g)?;
                let ok = a.verify(&two) && b.verify(&one) && a.factor_count() == 2 && b.factor_count() == 2;
                outcomes.push(Ok((!ok).then(|| json!({ "f": f.to_string(), "g": g.to_string() }))));
            }
        }
        tally(outcomes)
    });
    Some(budget)
}

// ---------------------------------------------------------------------------

fn lemma23(r: &mut Runner, seed: u64, budget: usize) -> Option<usize> {
    let s3: GroupDescriptor = "sn:3".parse().expect("valid");
    let cases: Vec<usize> = (0..budget).collect();
    r.check("rearrange-identity-system", || {
        let outcomes = par::map(&cases, |&i| -> Result<Option<Value>> {
            let m = 1 + i % 4;
            let env = FCommEnvironment::wreath(&GroupDescriptor::wreath_zn(s3.clone(), m + 1))?;
            let d = env.ambient();
            let mut rng = rng_for(seed, i as u64);
            let mut gs: Vec<Element> = (0..m).map(|_| random_element(&s3, &mut rng, 1)).collect();
            let prod = s3.product(gs.iter())?;
            gs.push(s3.invert(&prod)?);

            let (sol, c) = solve_rearrange_id(&env, &gs)?;
            let shift = env.shift().clone();
            let mut rhs = d.identity();
            for (k, g) in gs.iter().enumerate() {
                let conj = d.conjugate_of(&env.embed(g)?, &d.power(&shift, k as i64)?)?;
                rhs = d.compose(&rhs, &conj)?;
            }
            let lhs = d.commutator_of(&shift, &d.invert(&sol.assembled)?)?;
            let mut literal = true;
            for k in 0..m {
                literal &= sol.phis[k] == s3.product(gs[..=k].iter())?;
            }
            let ok = lhs == rhs && c.value(&env) == rhs && literal && sol.satisfies_system(&s3, &gs);
            Ok((!ok).then(|| {
                json!({ "case": i, "g": gs.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                        "phi": sol.assembled.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string(),
                        "prefixes_literal": literal })
            }))
        });
        let (ok, mut detail) = tally(outcomes)?;
        detail["m"] = json!([1, 2, 3, 4]);
        Ok((ok, detail))
    });
    r.check("rearrange-s3-exhaustive", || {
        let env = FCommEnvironment::wreath(&"wreath:sn:3:zn:3".parse()?)?;
        let d = env.ambient();
        let elems = s3.enumerate_elements(DEFAULT_LIMIT)?;
        let mut outcomes = Vec::new();
        for g1 in &elems {
            for g2 in &elems {
                let (c, residual) = rearrange(&env, &[g1.clone(), g2.clone()])?;
                let ok = d.compose(&c.value(&env), &residual)? == env.embed(&s3.compose(g2, g1)?)?;
                outcomes.push(Ok((!ok).then(|| json!({ "g1": g1.to_string(), "g2": g2.to_string() }))));
            }
        }
        tally(outcomes)
    });
    Some(budget)
}

// ---------------------------------------------------------------------------

fn displacement(r: &mut Runner) -> Option<usize> {
    r.check("s9-sym123-support-norm", || {
        let d: GroupDescriptor = "sn:9".parse()?;
        let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT)?;
        let h = sym123(&d)?;
        let report = verify_master_inequalities(&g, &h, 2, &SupportNorm, DEFAULT_LIMIT)?;
        let e1 = report.energies[0].value;
        let ok = report.passed && report.chain.checked > 0 && e1 == Some(int(6));
        Ok((ok, serde_json::to_value(&report).expect("serializable")))
    });
    r.check("s6-sym123-energies", || {
        let d: GroupDescriptor = "sn:6".parse()?;
        let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT)?;
        let h = sym123(&d)?;
        let e1 = displacement_energy(&g, &h, 1, &SupportNorm)?;
        let e2 = displacement_energy(&g, &h, 2, &SupportNorm)?;
        let ok = e1.value == Some(int(6)) && e2.value.is_none();
        Ok((ok, json!({ "e1": e1, "e2": e2 })))
    });
    r.check("s8-disjunction", || {
        let d: GroupDescriptor = "sn:8".parse()?;
        let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT)?;
        let h1 = sym123(&d)?;
        let h2 = SubgroupSpec::labeled(d.parse_elements("(2 3), (2 3 4)")?, "Sym{2,3,4}");
        let report = verify_disjunction_inequality(&g, &h1, &h2, &SupportNorm, DEFAULT_LIMIT)?;
        Ok((report.passed && report.energy.value == Some(int(4)), serde_json::to_value(&report).expect("serializable")))
    });
    None
}

// ---------------------------------------------------------------------------

/// Independent oracle: all `φ` with `H ⟂ Conj_φ(H)`, then all pairs of them.
fn brute_force_packing_at_most_two(g: &FiniteGroup, h: &SubgroupSpec) -> Result<(bool, bool)> {
    let d = g.descriptor();
    let conj = |phi: &Element| SubgroupSpec::new(h.generators.iter().map(|x| d.conjugate_of(x, phi)).collect::<Result<Vec<_>>>().expect("same group"));
    let singles: Vec<&Element> = g
        .elements()
        .iter()
        .filter(|phi| subgroups_commute(d, h, &conj(phi)).unwrap_or(false))
        .collect();
    let pairs = par::find_first(&singles, |a| {
        singles.iter().any(|b| subgroups_commute(d, &conj(a), &conj(b)).unwrap_or(false))
    });
    Ok((!singles.is_empty(), pairs.is_some()))
}

fn packing(r: &mut Runner) -> Option<usize> {
    for (n, want) in [(6usize, 2usize), (9, 3)] {
        r.check(&format!("s{n}-sym123"), || {
            let d = GroupDescriptor::Symmetric(n);
            let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT)?;
            let res = packing_number(&g, &sym123(&d)?, want + 1, DEFAULT_LIMIT)?;
            Ok((res.p == Some(want) && res.exhausted, serde_json::to_value(&res).expect("serializable")))
        });
    }
    r.check("s6-sym123-brute-force-oracle", || {
        let d = GroupDescriptor::Symmetric(6);
        let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT)?;
        let (one, two) = brute_force_packing_at_most_two(&g, &sym123(&d)?)?;
        let p = if two { None } else if one { Some(2) } else { Some(1) };
        Ok((p == Some(2), json!({ "one_displacer_exists": one, "two_displacers_exist": two })))
    });
    r.check("s5-abelian-degenerate", || {
        let d = GroupDescriptor::Symmetric(5);
        let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT)?;
        let res = packing_number(&g, &SubgroupSpec::new(vec![parse(&d, "(1 2 3)")?]), 3, DEFAULT_LIMIT)?;
        Ok((res.abelian_degenerate && res.p.is_none(), serde_json::to_value(&res).expect("serializable")))
    });
    None
}

// ---------------------------------------------------------------------------

/// `q_K` by set products: `S_0 = {1}`, `S_{j+1} = S_j · K̂` with `K̂` the
/// conjugates of `K ∪ K⁻¹`.
fn set_closure_oracle(g: &FiniteGroup, k: &[Element]) -> Vec<(Element, usize)> {
    let mut gens: Vec<Element> = k.iter().cloned().chain(k.iter().map(|x| g.inv(x))).collect();
    gens = g.conjugacy_closure(&gens);
    let mut seen: BTreeSet<Element> = BTreeSet::from([g.identity()]);
    let mut out = vec![(g.identity(), 0)];
    let mut level: BTreeSet<Element> = BTreeSet::from([g.identity()]);
    let mut j = 0;
    while !level.is_empty() {
        j += 1;
        let next: BTreeSet<Element> =
            level.iter().flat_map(|a| gens.iter().map(move |c| g.mul(a, c))).filter(|x| !seen.contains(x)).collect();
        for x in &next {
            seen.insert(x.clone());
            out.push((x.clone(), j));
        }
        level = next;
    }
    out
}

fn axioms_check(table: &NormTable) -> (bool, Value) {
    let report = verify_norm_axioms(table);
    (report.passed, json!({ "norm": table.name(), "elements": table.len(), "diameter": rat(&table.diameter()), "report": report }))
}

fn norm_axioms(r: &mut Runner) -> Option<usize> {
    let a5 = || -> Result<(FiniteGroup, Vec<Element>)> {
        let d: GroupDescriptor = "an:5".parse()?;
        let k = vec![parse(&d, "(1 2 3 4 5)")?];
        Ok((FiniteGroup::enumerate(&d, DEFAULT_LIMIT)?, k))
    };
    r.check("a5-qk-axioms", || {
        let (g, k) = a5()?;
        Ok(axioms_check(&qk_norm_in(&g, &k)?))
    });
    r.check("a5-qk-set-closure-oracle", || {
        let (g, k) = a5()?;
        let table = qk_norm_in(&g, &k)?;
        let oracle = set_closure_oracle(&g, &k);
        let mismatches: Vec<Value> = oracle
            .iter()
            .filter(|(x, v)| table.get(x) != Some(int(*v as i64)))
            .map(|(x, v)| json!({ "element": x.to_string(), "oracle": v, "bfs": table.get(x).map(|r| rat(&r)) }))
            .collect();
        let ok = oracle.len() == 60 && mismatches.is_empty();
        Ok((ok, json!({ "compared": oracle.len(), "diameter": rat(&table.diameter()), "mismatches": mismatches.first() })))
    });
    r.check("a5-commutator-length", || {
        let (g, _) = a5()?;
        let cl = commutator_length_in(&g, DEFAULT_LIMIT)?;
        let gr = &g;
        let commutators: BTreeSet<Element> =
            gr.elements().iter().flat_map(|a| gr.elements().iter().map(move |b| gr.comm(a, b))).collect();
        let off_identity_one = cl.table.iter().all(|(x, v)| *v == int(if x.is_identity() { 0 } else { 1 }));
        let ok = off_identity_one && cl.cld() == int(1) && commutators.len() == 60;
        Ok((ok, json!({ "cld": rat(&cl.cld()), "distinct_commutators": commutators.len(), "elements": cl.table.len() })))
    });
    r.check("a5-extremal-domination", || {
        let (g, k) = a5()?;
        let support = check_extremal_domination(&g, &SupportNorm, &k)?;
        let trivial = check_extremal_domination(&g, &TrivialNorm, &k)?;
        let ok = support.passed && trivial.passed && support.lambda == int(5) && trivial.lambda == int(1);
        Ok((ok, json!({ "support": support, "trivial": trivial })))
    });
    r.check("s3-trivial-norm-axioms", || {
        let g = FiniteGroup::enumerate(&"sn:3".parse()?, DEFAULT_LIMIT)?;
        Ok(axioms_check(&NormTable::from_norm(&g, &TrivialNorm)?))
    });
    r.check("s5-support-norm-axioms", || {
        let g = FiniteGroup::enumerate(&"sn:5".parse()?, DEFAULT_LIMIT)?;
        Ok(axioms_check(&NormTable::from_norm(&g, &SupportNorm)?))
    });
    r.check("wreath-s3-z3-support-norm-axioms", || {
        let g = FiniteGroup::enumerate(&"wreath:sn:3:zn:3".parse()?, DEFAULT_LIMIT)?;
        Ok(axioms_check(&NormTable::from_norm(&g, &WreathSupportNorm { modulus: 3 })?))
    });
    r.check("bar-s3-normalized-quasinorm-axioms", || {
        let d: GroupDescriptor = "bar:sn:3".parse()?;
        let ext = coset_extension_qnorm(&d, None, DEFAULT_LIMIT)?;
        let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT)?;
        let q = verify_quasinorm(&ext.spec, &all_pairs(g.elements()))?;
        let (ok, mut detail) = axioms_check(&quasinorm_to_norm(&ext.spec, DEFAULT_LIMIT)?);
        detail["quasinorm"] = serde_json::to_value(&q).expect("serializable");
        Ok((ok && q.passed, detail))
    });
    None
}

// ---------------------------------------------------------------------------

/// `(g₁, g₂)tᵉ` in `Bar(S_n)` acting on `{1..n} × {0, 1}`: `t` swaps the
/// sheets, then `g₁` acts on sheet 0 and `g₂` on sheet 1.
fn bar_action(x: &Element, n: usize) -> Perm {
    let b = x.as_bar().expect("bar element");
    let (p1, p2) = (b.first.as_perm().expect("perm"), b.second.as_perm().expect("perm"));
    let images = (0..2 * n)
        .map(|pt| {
            let (i, s) = (pt % n, pt / n);
            let s = if b.flip { 1 - s } else { s };
            if s == 0 {
                p1.apply(i)
            } else {
                n + p2.apply(i)
            }
        })
        .collect();
    Perm::from_images(images).expect("bijection")
}

fn action_mismatch(d: &GroupDescriptor, n: usize, a: &Element, b: &Element) -> Option<Value> {
    let ab = d.compose(a, b).expect("same group");
    (bar_action(&ab, n) != bar_action(a, n).compose(&bar_action(b, n)))
        .then(|| json!({ "a": a.to_string(), "b": b.to_string(), "ab": ab.to_string() }))
}

fn gbar(r: &mut Runner, seed: u64, budget: usize) -> Option<usize> {
    r.check("bar-s3-multiplication-oracle", || {
        let d: GroupDescriptor = "bar:sn:3".parse()?;
        let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT)?;
        let pairs = all_pairs(g.elements());
        let faithful = g.elements().iter().map(|x| bar_action(x, 3)).collect::<BTreeSet<_>>().len() == g.len();
        let (ok, mut detail) = tally(par::map(&pairs, |(a, b)| Ok(action_mismatch(&d, 3, a, b))))?;
        detail["faithful"] = json!(faithful);
        Ok((ok && faithful, detail))
    });
    r.check("bar-s5-multiplication-oracle", || {
        let d: GroupDescriptor = "bar:sn:5".parse()?;
        let idx: Vec<usize> = (0..budget).collect();
        tally(par::map(&idx, |&i| {
            let mut rng = rng_for(seed, i as u64);
            let (a, b) = (random_element(&d, &mut rng, 1), random_element(&d, &mut rng, 1));
            Ok(action_mismatch(&d, 5, &a, &b))
        }))
    });
    r.check("bar-s5-splitting", || {
        let d: GroupDescriptor = "bar:sn:5".parse()?;
        let s5 = GroupDescriptor::Symmetric(5);
        let idx: Vec<usize> = (0..budget.min(200)).collect();
        let outcomes = par::map(&idx, |&i| -> Result<Option<Value>> {
            let mut rng = rng_for(seed, i as u64);
            let w = Element::bar(random_element(&s5, &mut rng, 1), random_element(&s5, &mut rng, 1), i % 2 == 1);
            let rep = verify_gbar_splitting(&d, &w, 20)?;
            Ok((!rep.passed).then(|| serde_json::to_value(&rep).expect("serializable")))
        });
        let (ok, mut detail) = tally(outcomes)?;
        detail["k_max"] = json!(20);
        detail["cases"] = json!([1, 2]);
        Ok((ok, detail))
    });
    Some(budget)
}

// ---------------------------------------------------------------------------

fn gbar_defect(r: &mut Runner, seed: u64, budget: usize) -> Option<usize> {
    let f2: GroupDescriptor = "free:2".parse().expect("valid");
    let pattern = f2.parse_element("a b").expect("valid");
    r.check("counting-qm-defect-decomposition", || {
        let q = counting_qm(&f2, pattern.as_word().expect("word"))?;
        let bar = GroupDescriptor::bar(f2.clone());
        let triples = sample_triples(&bar, seed, budget, 6);
        let declared = int(3);
        let outcomes = par::map(&triples, |[h, f, g]| -> Result<Option<Value>> {
            let fg = bar.compose(f, g)?;
            for (a, b) in [(h, f), (f, g), (h, &fg)] {
                let c = gbar_defect_decomposition(&q, a, b)?;
                let parts_ok = c.parts.iter().all(|p| rational::parse(p).is_some_and(|v| rational::abs(v) <= declared));
                let ok = c.decomposes && c.bound_holds && parts_ok && rational::abs(c.defect) <= int(2) * declared;
                if !ok {
                    return Ok(Some(serde_json::to_value(&c).expect("serializable")));
                }
            }
            Ok(None)
        });
        let (ok, mut detail) = tally(outcomes)?;
        detail["pattern"] = json!("a b");
        detail["declared_defect"] = json!("3");
        detail["word_size"] = json!(6);
        Ok((ok, detail))
    });
    r.check("counting-qm-scl-lower-bound", || {
        let q = counting_qm(&f2, pattern.as_word().expect("word"))?;
        let w = f2.parse_element("a b A B")?;
        let b = scl_bounds(&q, &w, int(3), 64, &[(1, 1)])?;
        let ok = b.lower_value == Some(Rational::new(61, 768)) && b.upper_value == Some(int(1));
        Ok((ok, serde_json::to_value(&b).expect("serializable")))
    });
    Some(budget)
}

// ---------------------------------------------------------------------------

fn prop_witness(r: &mut Runner, seed: u64, budget: usize) -> Option<usize> {
    r.check("free2-cubed-witness-additivity", || {
        let f2: GroupDescriptor = "free:2".parse()?;
        let d = GroupDescriptor::Product(vec![f2.clone(), f2.clone(), f2.clone()]);
        let pattern = f2.parse_element("a b")?;
        let parts = (0..3).map(|_| counting_qm(&f2, pattern.as_word().expect("word"))).collect::<Result<Vec<_>>>()?;
        let phi = coordinate_sum(&d, parts)?;
        let embed = |i: usize, w: &Element| {
            let mut coords = vec![f2.identity(); 3];
            coords[i] = w.clone();
            Element::Product(coords)
        };
        let subgroups: Vec<SubgroupSpec> = (0..3)
            .map(|i| SubgroupSpec::new(vec![embed(i, &f2.parse_element("a").expect("valid")), embed(i, &f2.parse_element("b").expect("valid"))]))
            .collect();
        let idx: Vec<usize> = (0..budget).collect();
        let outcomes = par::map(&idx, |&i| -> Result<Option<Value>> {
            let mut rng = rng_for(seed, i as u64);
            let witnesses: Vec<(Element, Element)> = (0..3)
                .map(|k| (embed(k, &random_element(&f2, &mut rng, 6)), embed(k, &random_element(&f2, &mut rng, 6))))
                .collect();
            let rep = verify_prop1_witness(&phi, &subgroups, &witnesses)?;
            let ok = rep.additive && rep.commutator_splits && rep.subgroups_commute;
            Ok((!ok).then(|| json!({ "case": i, "witnesses": witnesses.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect::<Vec<_>>(), "report": rep })))
        });
        let (ok, mut detail) = tally(outcomes)?;
        detail["quasimorphism"] = json!(phi.name);
        Ok((ok, detail))
    });
    Some(budget)
}

// ---------------------------------------------------------------------------

struct Family {
    label: &'static str,
    descriptor: GroupDescriptor,
    norm: Box<dyn Norm>,
    size: usize,
}

fn families() -> Vec<Family> {
    let p = |s: &str| s.parse::<GroupDescriptor>().expect("valid");
    vec![
        Family { label: "sn:7 support", descriptor: p("sn:7"), norm: Box::new(SupportNorm), size: 1 },
        Family { label: "an:6 support", descriptor: p("an:6"), norm: Box::new(SupportNorm), size: 1 },
        Family { label: "wreath:sn:3:zn:4 support", descriptor: p("wreath:sn:3:zn:4"), norm: Box::new(WreathSupportNorm { modulus: 4 }), size: 1 },
        Family { label: "z2inf support", descriptor: p("z2inf"), norm: Box::new(SupportNorm), size: 12 },
        Family { label: "bar:sn:4 trivial", descriptor: p("bar:sn:4"), norm: Box::new(TrivialNorm), size: 1 },
        Family { label: "slp:2:3 trivial", descriptor: p("slp:2:3"), norm: Box::new(TrivialNorm), size: 6 },
        Family { label: "product:sn:3,an:4 trivial", descriptor: p("product:sn:3,an:4"), norm: Box::new(TrivialNorm), size: 1 },
    ]
}

fn stabilization(r: &mut Runner, seed: u64, budget: usize) -> Option<usize> {
    r.check("torsion-is-zero", || {
        let mut outcomes = Vec::new();
        for fam in families() {
            let idx: Vec<usize> = (0..budget).collect();
            outcomes.extend(par::map(&idx, |&i| -> Result<Option<Value>> {
                let mut rng = rng_for(seed, i as u64);
                let f = random_element(&fam.descriptor, &mut rng, fam.size);
                let est = stabilization_upper(&fam.descriptor, &fam.norm, &f, 200)?;
                Ok((!(est.exact_zero && est.upper == int(0))).then(|| json!({ "family": fam.label, "estimate": est })))
            }));
        }
        let mut outcomes_aff = Vec::new();
        for a in -20..=20 {
            let f = Element::aff(a, true);
            let est = stabilization_upper(&GroupDescriptor::AffZ, &TrivialNorm, &f, 200)?;
            outcomes_aff.push(Ok((!(est.exact_zero && est.upper == int(0))).then(|| json!({ "family": "aff-z trivial", "estimate": est }))));
        }
        outcomes.extend(outcomes_aff);
        let (ok, mut detail) = tally(outcomes)?;
        detail["families"] = json!(families().iter().map(|f| f.label).chain(["aff-z trivial"]).collect::<Vec<_>>());
        Ok((ok, detail))
    });
    r.check("upper-bound-antitone-in-n-max", || {
        let mut cases: Vec<(String, GroupDescriptor, Box<dyn Norm>, Element)> = Vec::new();
        for fam in families() {
            for i in 0..budget.min(20) {
                let mut rng = rng_for(seed, i as u64);
                let f = random_element(&fam.descriptor, &mut rng, fam.size);
                let norm: Box<dyn Norm> = match fam.label {
                    l if l.starts_with("wreath") => Box::new(WreathSupportNorm { modulus: 4 }),
                    l if l.ends_with("support") => Box::new(SupportNorm),
                    _ => Box::new(TrivialNorm),
                };
                cases.push((fam.label.to_string(), fam.descriptor.clone(), norm, f));
            }
        }
        for a in [1i64, 2, 5, -3] {
            cases.push(("aff-z trivial".into(), GroupDescriptor::AffZ, Box::new(TrivialNorm), Element::aff(a, false)));
        }
        let f2: GroupDescriptor = "free:2".parse()?;
        for w in ["a", "a b", "a b A B", "a a b"] {
            cases.push(("free:2 trivial".into(), f2.clone(), Box::new(TrivialNorm), f2.parse_element(w)?));
        }
        let outcomes = par::map(&cases, |(label, d, norm, f)| -> Result<Option<Value>> {
            let mut prev: Option<Rational> = None;
            for n_max in 1..=40 {
                let est = stabilization_upper(d, norm, f, n_max)?;
                if prev.is_some_and(|p| est.upper > p) {
                    return Ok(Some(json!({ "family": label, "element": f.to_string(), "n_max": n_max })));
                }
                prev = Some(est.upper);
            }
            Ok(None)
        });
        tally(outcomes)
    });
    r.check("aff-z-translation-decays", || {
        let est = stabilization_upper(&GroupDescriptor::AffZ, &TrivialNorm, &Element::aff(1, false), 50)?;
        let ok = !est.exact_zero && est.upper == Rational::new(1, 50);
        Ok((ok, serde_json::to_value(&est).expect("serializable")))
    });
    Some(budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &SuiteConfig::default()).is_err());
    }

    #[test]
    fn small_suites_pass_and_are_deterministic() {
        for name in ["aff-z", "lemma23", "seven-fcomm", "prop-witness"] {
            let cfg = SuiteConfig { seed: 3, budget: Some(20) };
            let a = run_suite(name, &cfg).unwrap();
            let b = run_suite(name, &cfg).unwrap();
            assert!(a.report.passed, "{}", a.report.to_json());
            assert_eq!(a.report.to_json(), b.report.to_json());
        }
    }
}
