//! Displaceability of subgroups of finite groups: strong displacers,
//! algebraic packing numbers, displacement energies, and exact checks of
//! the norm inequalities they imply.
//!
//! Subgroup commutation is decided on generators: two subgroups commute
//! iff every pair of generators does.

use crate::error::{Error, Result};
use crate::fcomm::{two_commutator_witness, FCommEnvironment};
use crate::group::{Element, FiniteGroup, GroupDescriptor, SubgroupSpec};
use crate::norms::{commutator_length_in, Norm};
use crate::par;
use crate::rational::{self, int, Rational};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

/// Ambient order allowed for the packing search.
pub const PACKING_GUARD: usize = 1_000_000;
/// Ambient order allowed for energy scans.
pub const ENERGY_GUARD: usize = 10_000_000;

fn commute_sets(d: &GroupDescriptor, a: &[Element], b: &[Element]) -> bool {
    a.iter().all(|x| b.iter().all(|y| d.comm(x, y).is_identity()))
}

fn conj_all(d: &GroupDescriptor, gens: &[Element], by: &Element) -> Vec<Element> {
    gens.iter().map(|g| d.conj(g, by)).collect()
}

/// Whether the subgroups generated by `a` and `b` commute elementwise.
pub fn subgroups_commute(d: &GroupDescriptor, a: &SubgroupSpec, b: &SubgroupSpec) -> Result<bool> {
    for s in [a, b] {
        if let Some(g) = s.generators.iter().find(|g| !d.contains(g)) {
            return Err(Error::InvalidInput(format!("`{g}` is not in {d}")));
        }
    }
    Ok(commute_sets(d, &a.generators, &b.generators))
}

/// `φ` `m`-displaces `H`: `H` commutes with `Conj_{φ^k}(H)` for
/// `k = 1..m` (which covers every pair `i < j` after conjugating by
/// `φ^{-i}`).
pub fn is_strong_displacer(d: &GroupDescriptor, h: &SubgroupSpec, phi: &Element, m: usize) -> bool {
    let mut power = d.identity();
    (1..=m).all(|_| {
        power = d.mul(&power, phi);
        commute_sets(d, &h.generators, &conj_all(d, &h.generators, &power))
    })
}

/// Least element (in canonical order) that `m`-displaces `H`.
pub fn find_strong_displacer(group: &FiniteGroup, h: &SubgroupSpec, m: usize) -> Result<Option<Element>> {
    h.validate(group.descriptor())?;
    if group.len() > ENERGY_GUARD {
        return Err(Error::GuardExceeded { limit: ENERGY_GUARD });
    }
    let d = group.descriptor();
    Ok(par::find_first(group.elements(), |phi| is_strong_displacer(d, h, phi, m)).map(|(_, e)| e.clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DisplacementMode {
    Weak,
    Strong,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplacementReport {
    pub h: Vec<String>,
    pub m: usize,
    pub mode: DisplacementMode,
    /// `φ_1, …, φ_m` (`φ_0 = 1` is implicit).
    pub witnesses: Vec<String>,
    pub found: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackingResult {
    /// `None` when `H` is abelian: it is `m`-displaced by `1` for every `m`.
    pub p: Option<usize>,
    pub abelian_degenerate: bool,
    pub certificate: DisplacementReport,
    /// The search proved that no larger packing exists.
    pub exhausted: bool,
    /// Number of distinct conjugates of `H` examined.
    pub conjugates: usize,
}

/// Distinct conjugate subgroups `Conj_φ(H)`, each with the least `φ`
/// producing it and its generators.
fn distinct_conjugates(group: &FiniteGroup, h: &SubgroupSpec, members: &[Element]) -> Vec<(Element, Vec<Element>)> {
    let d = group.descriptor();
    let keyed: Vec<(Vec<Element>, usize)> = par::map_range(0..group.len(), |i| {
        let phi = &group.elements()[i];
        let mut key = conj_all(d, members, phi);
        key.sort();
        (key, i)
    });
    let mut first: BTreeMap<Vec<Element>, usize> = BTreeMap::new();
    for (key, i) in keyed {
        first.entry(key).or_insert(i);
    }
    let mut out: Vec<(Element, Vec<Element>)> = first
        .into_values()
        .map(|i| {
            let phi = group.elements()[i].clone();
            let gens = conj_all(d, &h.generators, &phi);
            (phi, gens)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// `p(G, H) = m + 1` for the largest `m` such that some `φ_1, …, φ_m`
/// make `H, Conj_{φ_1}(H), …, Conj_{φ_m}(H)` pairwise commute.
///
/// Conjugates are reduced to distinct subgroups, then a maximum clique
/// containing `H` is found in their commutation graph. `m_cap` bounds
/// the clique size searched for.
pub fn packing_number(group: &FiniteGroup, h: &SubgroupSpec, m_cap: usize, limit: usize) -> Result<PackingResult> {
    let d = group.descriptor();
    h.validate(d)?;
    if group.len() > PACKING_GUARD {
        return Err(Error::GuardExceeded { limit: PACKING_GUARD });
    }
    let h_labels: Vec<String> = h.generators.iter().map(|g| g.to_string()).collect();
    if h.is_abelian(d) {
        let witnesses = vec![d.identity().to_string(); m_cap];
        return Ok(PackingResult {
            p: None,
            abelian_degenerate: true,
            certificate: DisplacementReport { h: h_labels, m: m_cap, mode: DisplacementMode::Weak, witnesses, found: true },
            exhausted: false,
            conjugates: 0,
        });
    }
    let members = FiniteGroup::subgroup(d, h, limit)?.elements().to_vec();
    let conjugates = distinct_conjugates(group, h, &members);
    let candidates: Vec<&(Element, Vec<Element>)> =
        conjugates.iter().filter(|(_, gens)| commute_sets(d, &h.generators, gens)).collect();
    let n = candidates.len();
    let adjacency: Vec<Vec<bool>> = par::map_range(0..n, |i| {
        (0..n).map(|j| i != j && commute_sets(d, &candidates[i].1, &candidates[j].1)).collect()
    });
    let mut best: Vec<usize> = Vec::new();
    let mut current = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    let capped = max_clique(&adjacency, &mut current, &all, &mut best, m_cap);
    let witnesses: Vec<String> = best.iter().map(|&i| candidates[i].0.to_string()).collect();
    let m = best.len();
    // Re-check the certificate from scratch.
    let specs: Vec<SubgroupSpec> = std::iter::once(h.clone())
        .chain(best.iter().map(|&i| SubgroupSpec::new(candidates[i].1.clone())))
        .collect();
    for i in 0..specs.len() {
        for j in i + 1..specs.len() {
            if !subgroups_commute(d, &specs[i], &specs[j])? {
                return Err(Error::NotCommuting { a: format!("{i}"), b: format!("{j}") });
            }
        }
    }
    Ok(PackingResult {
        p: Some(m + 1),
        abelian_degenerate: false,
        certificate: DisplacementReport { h: h_labels, m, mode: DisplacementMode::Weak, witnesses, found: m > 0 },
        exhausted: !capped,
        conjugates: conjugates.len(),
    })
}

/// Branch-and-bound maximum clique, preferring lexicographically least
/// vertex lists. Returns true if the search stopped at `cap`.
fn max_clique(adj: &[Vec<bool>], current: &mut Vec<usize>, candidates: &[usize], best: &mut Vec<usize>, cap: usize) -> bool {
    if current.len() > best.len() {
        *best = current.clone();
        if best.len() >= cap {
            return true;
        }
    }
    for (k, &v) in candidates.iter().enumerate() {
        if current.len() + candidates.len() - k <= best.len() {
            break;
        }
        let next: Vec<usize> = candidates[k + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
        current.push(v);
        let stop = max_clique(adj, current, &next, best, cap);
        current.pop();
        if stop {
            return true;
        }
    }
    false
}

fn ser_energy<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&rational::to_string(r)),
        None => s.serialize_str("infinite"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnergyResult {
    pub m: usize,
    /// `None` means `+∞`: no strong `m`-displacer exists.
    #[serde(serialize_with = "ser_energy")]
    pub value: Option<Rational>,
    pub minimizer: Option<String>,
    #[serde(skip)]
    pub minimizer_element: Option<Element>,
}

/// `e_m(H) = min ν(φ)` over strong `m`-displacers `φ`; ties go to the
/// least `φ`.
pub fn displacement_energy<N: Norm>(group: &FiniteGroup, h: &SubgroupSpec, m: usize, norm: &N) -> Result<EnergyResult> {
    let d = group.descriptor();
    h.validate(d)?;
    if group.len() > ENERGY_GUARD {
        return Err(Error::GuardExceeded { limit: ENERGY_GUARD });
    }
    let best = min_by_norm(group, norm, |phi| is_strong_displacer(d, h, phi, m))?;
    Ok(energy_result(m, best))
}

fn min_by_norm<N: Norm>(
    group: &FiniteGroup,
    norm: &N,
    admissible: impl Fn(&Element) -> bool + Sync + Send,
) -> Result<Option<(Rational, Element)>> {
    let hits = par::filter_map(group.elements(), |phi| admissible(phi).then(|| norm.norm(phi).map(|v| (v, phi.clone()))));
    let hits = hits.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(hits.into_iter().min())
}

fn energy_result(m: usize, best: Option<(Rational, Element)>) -> EnergyResult {
    EnergyResult {
        m,
        value: best.as_ref().map(|b| b.0),
        minimizer: best.as_ref().map(|b| b.1.to_string()),
        minimizer_element: best.map(|b| b.1),
    }
}

/// `e(H₁, H₂) = min ν(φ)` over `φ` with `H₁` commuting with `Conj_φ(H₂)`.
pub fn disjunction_energy<N: Norm>(group: &FiniteGroup, h1: &SubgroupSpec, h2: &SubgroupSpec, norm: &N) -> Result<EnergyResult> {
    let d = group.descriptor();
    h1.validate(d)?;
    h2.validate(d)?;
    let best = min_by_norm(group, norm, |phi| commute_sets(d, &h1.generators, &conj_all(d, &h2.generators, phi)))?;
    Ok(energy_result(1, best))
}

fn ser_opt_rational<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser_energy(v, s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub x: String,
    pub cl: usize,
    /// `"14e_m"`, `"4e_1"` or `"4e(H1,H2)"`.
    pub bound: String,
    #[serde(with = "crate::rational::serde_p_q")]
    pub lhs: Rational,
    /// `None` when the energy is infinite.
    #[serde(serialize_with = "ser_opt_rational")]
    pub rhs: Option<Rational>,
    pub ok: bool,
}

impl InequalityCheck {
    fn new(x: &Element, cl: usize, bound: &str, lhs: Rational, rhs: Option<Rational>) -> Self {
        let ok = rhs.is_none_or(|r| lhs <= r);
        InequalityCheck { x: x.to_string(), cl, bound: bound.into(), lhs, rhs, ok }
    }
}

/// Explicit `cl_G(x) ≤ 2` certificate: `x = [a₁, b₁]·[a₂, b₂]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoCommutatorCheck {
    pub x: String,
    pub cl_h: usize,
    pub displacer: String,
    pub commutators: [(String, String); 2],
    pub ok: bool,
}

/// Counts for the pointwise chain `[f,g] = [[f,φ], g]` and
/// `ν([f,g]) ≤ 2ν([f,φ]) ≤ 4ν(φ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChainSummary {
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MasterReport {
    pub p: Option<usize>,
    pub witnesses: Vec<String>,
    pub energies: Vec<EnergyResult>,
    pub inequality_checks: Vec<InequalityCheck>,
    pub two_commutator_checks: Vec<TwoCommutatorCheck>,
    pub chain: ChainSummary,
    pub monotone: bool,
    pub passed: bool,
}

/// Check, for every `x ∈ H'` with `cl_H(x) = k ≤ m_max`:
/// `ν(x) ≤ 14 e_k(H)`, the two-commutator certificate in `G` built from a
/// strong `k`-displacer, and for `k = 1` also `ν(x) ≤ 4 e_1(H)` and the
/// pointwise chain against every displacer.
pub fn verify_master_inequalities<N: Norm>(
    group: &FiniteGroup,
    h: &SubgroupSpec,
    m_max: usize,
    norm: &N,
    limit: usize,
) -> Result<MasterReport> {
    let d = group.descriptor();
    h.validate(d)?;
    let h_group = FiniteGroup::subgroup(d, h, limit)?;
    let cl = commutator_length_in(&h_group, limit)?;
    let energies = (1..=m_max).map(|m| displacement_energy(group, h, m, norm)).collect::<Result<Vec<_>>>()?;
    let monotone = energies.windows(2).all(|w| match (w[0].value, w[1].value) {
        (Some(a), Some(b)) => a <= b,
        (_, None) => true,
        (None, Some(_)) => false,
    });
    let packing = packing_number(group, h, m_max.max(1) + 1, limit)?;

    let mut checks = Vec::new();
    let mut two_comm = Vec::new();
    for (x, v) in cl.table.iter() {
        let k = *v.numer() as usize;
        let lhs = norm.norm(x)?;
        if k == 0 {
            for e in &energies {
                checks.push(InequalityCheck::new(x, 0, "14e_m", lhs, e.value.map(|r| r * int(14))));
            }
            continue;
        }
        if k > m_max {
            continue;
        }
        let e = &energies[k - 1];
        checks.push(InequalityCheck::new(x, k, "14e_m", lhs, e.value.map(|r| r * int(14))));
        if k == 1 {
            checks.push(InequalityCheck::new(x, k, "4e_1", lhs, e.value.map(|r| r * int(4))));
        }
        if let Some(phi) = &e.minimizer_element {
            let env = FCommEnvironment::inclusion(d, h, phi, k, limit)?;
            let mut pairs = cl.factorization(x).expect("x in H'");
            pairs.reverse();
            let ok_and_pairs = two_commutator_witness(&env, &pairs);
            let (ok, commutators) = match ok_and_pairs {
                Ok(((a1, b1), (a2, b2))) => {
                    let ok = d.mul(&d.comm(&a1, &b1), &d.comm(&a2, &b2)) == *x;
                    (ok, [(a1.to_string(), b1.to_string()), (a2.to_string(), b2.to_string())])
                }
                Err(_) => (false, Default::default()),
            };
            two_comm.push(TwoCommutatorCheck { x: x.to_string(), cl_h: k, displacer: phi.to_string(), commutators, ok });
        }
    }

    let minimizer = energies.first().and_then(|e| e.minimizer_element.as_ref());
    let chain = pointwise_chain(group, h, &h_group, &cl, norm, minimizer)?;
    let passed = checks.iter().all(|c| c.ok) && two_comm.iter().all(|c| c.ok) && chain.failures == 0 && monotone;
    Ok(MasterReport {
        p: packing.p,
        witnesses: packing.certificate.witnesses,
        energies,
        inequality_checks: checks,
        two_commutator_checks: two_comm,
        chain,
        monotone,
        passed,
    })
}

/// Runs the chain on one factorization of every `x` with `cl_H(x) = 1`
/// against every strong 1-displacer, and on every `(f, g) ∈ H × H`
/// against the energy minimizer.
fn pointwise_chain<N: Norm>(
    group: &FiniteGroup,
    h: &SubgroupSpec,
    h_group: &FiniteGroup,
    cl: &crate::norms::ClTable,
    norm: &N,
    minimizer: Option<&Element>,
) -> Result<ChainSummary> {
    let d = group.descriptor();
    let chain_ok = |f: &Element, g: &Element, phi: &Element, nu_phi: Rational| -> Result<bool> {
        let x = d.comm(f, g);
        let f_phi = d.comm(f, phi);
        let nu_f_phi = norm.norm(&f_phi)?;
        Ok(d.comm(&f_phi, g) == x && norm.norm(&x)? <= int(2) * nu_f_phi && nu_f_phi <= int(2) * nu_phi)
    };
    let xs: Vec<(Element, Element, Element)> = cl
        .table
        .iter()
        .filter(|(_, v)| **v == int(1))
        .map(|(x, _)| {
            let (f, g) = cl.factorization(x).expect("x in H'").remove(0);
            (x.clone(), f, g)
        })
        .collect();
    let displacers: Vec<&Element> = group.elements().iter().filter(|phi| is_strong_displacer(d, h, phi, 1)).collect();
    let results = par::map(&displacers, |phi| -> Result<Vec<Option<String>>> {
        let nu_phi = norm.norm(phi)?;
        xs.iter()
            .map(|(x, f, g)| Ok((!chain_ok(f, g, phi, nu_phi)?).then(|| format!("x = {x}, φ = {phi}"))))
            .collect()
    });
    let mut results = results;
    if let Some(phi) = minimizer {
        let nu_phi = norm.norm(phi)?;
        let hs = h_group.elements();
        results.push(
            hs.iter()
                .flat_map(|f| hs.iter().map(move |g| (f, g)))
                .map(|(f, g)| Ok((!chain_ok(f, g, phi, nu_phi)?).then(|| format!("f = {f}, g = {g}, φ = {phi}"))))
                .collect(),
        );
    }
    let mut summary = ChainSummary::default();
    for r in results {
        for outcome in r? {
            summary.checked += 1;
            if let Some(w) = outcome {
                summary.failures += 1;
                summary.first_failure.get_or_insert(w);
            }
        }
    }
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjunctionReport {
    pub energy: EnergyResult,
    pub checks: Vec<InequalityCheck>,
    /// `[h₁, h₂] = [h₁, [h₂, φ]]` for the minimizer `φ` and every pair.
    pub identity_holds: bool,
    pub passed: bool,
}

/// `ν([h₁, h₂]) ≤ 4 e(H₁, H₂)` for all `h₁ ∈ H₁`, `h₂ ∈ H₂`.
pub fn verify_disjunction_inequality<N: Norm>(
    group: &FiniteGroup,
    h1: &SubgroupSpec,
    h2: &SubgroupSpec,
    norm: &N,
    limit: usize,
) -> Result<DisjunctionReport> {
    let d = group.descriptor();
    let energy = disjunction_energy(group, h1, h2, norm)?;
    let a = FiniteGroup::subgroup(d, h1, limit)?;
    let b = FiniteGroup::subgroup(d, h2, limit)?;
    let mut checks = Vec::new();
    let mut identity_holds = true;
    for x in a.elements() {
        for y in b.elements() {
            let c = d.comm(x, y);
            checks.push(InequalityCheck::new(&c, 1, "4e(H1,H2)", norm.norm(&c)?, energy.value.map(|r| r * int(4))));
            if let Some(phi) = &energy.minimizer_element {
                identity_holds &= d.comm(x, &d.comm(y, phi)) == c;
            }
        }
    }
    checks.sort_by(|p, q| (&p.x, p.lhs).cmp(&(&q.x, q.lhs)));
    checks.dedup();
    let passed = identity_holds && checks.iter().all(|c| c.ok);
    Ok(DisjunctionReport { energy, checks, identity_holds, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_LIMIT;
    use crate::norms::SupportNorm;

    fn setup(g: &str, h: &str) -> (FiniteGroup, SubgroupSpec) {
        let d: GroupDescriptor = g.parse().unwrap();
        let spec = SubgroupSpec::new(d.parse_elements(h).unwrap());
        (FiniteGroup::enumerate(&d, DEFAULT_LIMIT).unwrap(), spec)
    }

    #[test]
    fn commuting_subgroups() {
        let (g, a) = setup("sn:6", "(1 2), (1 2 3)");
        let d = g.descriptor();
        let b = SubgroupSpec::new(d.parse_elements("(4 5), (4 5 6)").unwrap());
        let c = SubgroupSpec::new(d.parse_elements("(3 4), (3 4 5)").unwrap());
        assert!(subgroups_commute(d, &a, &b).unwrap());
        assert!(!subgroups_commute(d, &a, &c).unwrap());
        assert!(subgroups_commute(d, &a, &SubgroupSpec::new(vec![d.identity()])).unwrap());
    }

    #[test]
    fn strong_displacers_in_s6() {
        let (g, h) = setup("sn:6", "(1 2), (1 2 3)");
        let phi = find_strong_displacer(&g, &h, 1).unwrap().unwrap();
        assert!(is_strong_displacer(g.descriptor(), &h, &phi, 1));
        assert_eq!(find_strong_displacer(&g, &h, 2).unwrap(), None);
        let e1 = displacement_energy(&g, &h, 1, &SupportNorm).unwrap();
        assert_eq!(e1.value, Some(int(6)));
        assert_eq!(displacement_energy(&g, &h, 2, &SupportNorm).unwrap().value, None);
    }

    #[test]
    fn packing_in_s6() {
        let (g, h) = setup("sn:6", "(1 2), (1 2 3)");
        let p = packing_number(&g, &h, 5, DEFAULT_LIMIT).unwrap();
        assert_eq!(p.p, Some(2));
        assert!(p.exhausted);
        assert_eq!(p.conjugates, 20);
    }

    #[test]
    fn abelian_is_degenerate() {
        let (g, h) = setup("sn:5", "(1 2 3)");
        let p = packing_number(&g, &h, 3, DEFAULT_LIMIT).unwrap();
        assert!(p.abelian_degenerate && p.p.is_none());
        let e = displacement_energy(&g, &h, 4, &SupportNorm).unwrap();
        assert_eq!(e.value, Some(int(0)));
        assert_eq!(e.minimizer.as_deref(), Some("()"));
    }

    #[test]
    fn disjunction_in_s8() {
        let (g, h1) = setup("sn:8", "(1 2), (1 2 3)");
        let h2 = SubgroupSpec::new(g.descriptor().parse_elements("(2 3), (2 3 4)").unwrap());
        let r = verify_disjunction_inequality(&g, &h1, &h2, &SupportNorm, DEFAULT_LIMIT).unwrap();
        assert_eq!(r.energy.value, Some(int(4)));
        assert!(r.passed && r.identity_holds);
    }
}
