use super::{commutator_length_in, Norm, NormTable};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, GroupDescriptor};
use crate::par;
use crate::rational::{self, int, Rational};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

type ValueFn = Arc<dyn Fn(&Element) -> Result<Rational> + Send + Sync>;

/// A q-norm: `q(ab) ≤ q(a) + q(b) + c_add` and
/// `|q(b⁻¹ab) − q(a)| ≤ c_conj`.
#[derive(Clone)]
pub struct QuasiNormSpec {
    pub descriptor: GroupDescriptor,
    pub name: String,
    pub c_add: Rational,
    pub c_conj: Rational,
    values: ValueFn,
}

impl QuasiNormSpec {
    pub fn new(
        descriptor: GroupDescriptor,
        name: impl Into<String>,
        c_add: Rational,
        c_conj: Rational,
        values: impl Fn(&Element) -> Result<Rational> + Send + Sync + 'static,
    ) -> Self {
        QuasiNormSpec { descriptor, name: name.into(), c_add, c_conj, values: Arc::new(values) }
    }

    /// A norm table viewed as a q-norm with both constants zero.
    pub fn from_table(table: &NormTable) -> Self {
        let t = table.clone();
        Self::new(table.descriptor().clone(), table.name(), int(0), int(0), move |g| t.norm(g))
    }

    pub fn value(&self, g: &Element) -> Result<Rational> {
        (self.values)(g)
    }

    pub fn with_constants(mut self, c_add: Rational, c_conj: Rational) -> Self {
        self.c_add = c_add;
        self.c_conj = c_conj;
        self
    }
}

impl Norm for QuasiNormSpec {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn norm(&self, g: &Element) -> Result<Rational> {
        self.value(g)
    }
}

impl std::fmt::Debug for QuasiNormSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuasiNormSpec")
            .field("descriptor", &self.descriptor.to_string())
            .field("name", &self.name)
            .field("c_add", &self.c_add)
            .field("c_conj", &self.c_conj)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct QuasiViolation {
    /// `"additive"` or `"conjugation"`.
    pub kind: String,
    pub a: String,
    pub b: String,
    #[serde(with = "crate::rational::serde_p_q")]
    pub slack: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiNormReport {
    pub passed: bool,
    pub checked: usize,
    #[serde(with = "crate::rational::serde_p_q")]
    pub c_add: Rational,
    #[serde(with = "crate::rational::serde_p_q")]
    pub c_conj: Rational,
    /// Largest `q(ab) − q(a) − q(b)` seen.
    #[serde(with = "crate::rational::serde_p_q")]
    pub max_add_slack: Rational,
    /// Largest `|q(b⁻¹ab) − q(a)|` seen.
    #[serde(with = "crate::rational::serde_p_q")]
    pub max_conj_slack: Rational,
    /// Largest `|q(b⁻¹ab) − q(b)|` seen: the conjugation condition read
    /// with `q(b)` in place of `q(a)`. Reported, never used for `passed`.
    #[serde(with = "crate::rational::serde_p_q")]
    pub max_literal_conj_slack: Rational,
    pub literal_version_holds: bool,
    pub violation_count: usize,
    pub violations: Vec<QuasiViolation>,
}

/// Check both q-norm conditions exactly on every supplied pair `(a, b)`.
pub fn verify_quasinorm(q: &QuasiNormSpec, pairs: &[(Element, Element)]) -> Result<QuasiNormReport> {
    let d = &q.descriptor;
    if let Some((a, b)) = pairs.iter().find(|(a, b)| !d.contains(a) || !d.contains(b)) {
        return Err(Error::InvalidInput(format!("pair ({a}, {b}) is not in {d}")));
    }
    let rows = par::map(pairs, |(a, b)| -> Result<(Rational, Rational, Rational)> {
        let (qa, qb) = (q.value(a)?, q.value(b)?);
        let qab = q.value(&d.mul(a, b))?;
        let qc = q.value(&d.mul(&d.mul(&d.inv(b), a), b))?;
        Ok((qab - qa - qb, rational::abs(qc - qa), rational::abs(qc - qb)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    let (mut add, mut conj, mut literal) = (Rational::from_integer(i64::MIN), int(0), int(0));
    for ((a, b), (s_add, s_conj, s_lit)) in pairs.iter().zip(&rows) {
        add = add.max(*s_add);
        conj = conj.max(*s_conj);
        literal = literal.max(*s_lit);
        if *s_add > q.c_add {
            violations.push(QuasiViolation { kind: "additive".into(), a: a.to_string(), b: b.to_string(), slack: *s_add });
        }
        if *s_conj > q.c_conj {
            violations.push(QuasiViolation {
                kind: "conjugation".into(),
                a: a.to_string(),
                b: b.to_string(),
                slack: *s_conj,
            });
        }
    }
    if pairs.is_empty() {
        add = int(0);
    }
    let violation_count = violations.len();
    violations.truncate(64);
    Ok(QuasiNormReport {
        passed: violation_count == 0,
        checked: pairs.len(),
        c_add: q.c_add,
        c_conj: q.c_conj,
        max_add_slack: add,
        max_conj_slack: conj,
        max_literal_conj_slack: literal,
        literal_version_holds: literal <= q.c_conj,
        violation_count,
        violations,
    })
}

/// Every ordered pair from `elements`.
pub fn all_pairs(elements: &[Element]) -> Vec<(Element, Element)> {
    elements.iter().flat_map(|a| elements.iter().map(move |b| (a.clone(), b.clone()))).collect()
}

/// Turn a q-norm on a finite group into a norm: symmetrize with
/// `max(q(a), q(a⁻¹))`, take the maximum over conjugates, then add
/// `c_add + c_conj + 1` off the identity.
pub fn quasinorm_to_norm(q: &QuasiNormSpec, limit: usize) -> Result<NormTable> {
    let group = FiniteGroup::enumerate(&q.descriptor, limit)?;
    let elems = group.elements();
    let sym: HashMap<&Element, Rational> = par::map(elems, |a| Ok::<_, Error>(q.value(a)?.max(q.value(&group.inv(a))?)))
        .into_iter()
        .zip(elems)
        .map(|(v, a)| v.map(|v| (a, v)))
        .collect::<Result<_>>()?;
    let constant = q.c_add + q.c_conj + int(1);
    let values: BTreeMap<Element, Rational> = par::map(elems, |a| {
        if a.is_identity() {
            return int(0);
        }
        let sup = elems.iter().map(|g| sym[&group.conj(a, g)]).max().expect("non-empty group");
        sup + constant
    })
    .into_iter()
    .zip(elems.iter().cloned())
    .map(|(v, a)| (a, v))
    .collect();
    Ok(NormTable::new(q.descriptor.clone(), format!("normalized({})", q.name), values).with_constant_added(constant))
}

/// `q ∘ epi` on `domain`, after checking `epi(ab) = epi(a)·epi(b)` on
/// every sample pair.
pub fn pullback_qnorm(
    q: &QuasiNormSpec,
    domain: &GroupDescriptor,
    epi: impl Fn(&Element) -> Result<Element> + Send + Sync + 'static,
    samples: &[(Element, Element)],
) -> Result<QuasiNormSpec> {
    let target = &q.descriptor;
    for (a, b) in samples {
        let lhs = epi(&domain.compose(a, b)?)?;
        let rhs = target.compose(&epi(a)?, &epi(b)?)?;
        if lhs != rhs {
            return Err(Error::NotHomomorphism { a: a.to_string(), b: b.to_string() });
        }
    }
    let inner = q.clone();
    let epi = Arc::new(epi);
    Ok(QuasiNormSpec::new(domain.clone(), format!("pullback({})", q.name), q.c_add, q.c_conj, move |g| {
        inner.value(&epi(g)?)
    }))
}

/// The q-norm `q(hs) = cl(h)` built from a transversal `S` of `G'`.
#[derive(Clone, Debug)]
pub struct CosetExtension {
    pub spec: QuasiNormSpec,
    pub reps: Vec<Element>,
    /// `max cl(h(s₁, s₂))` over representative pairs, where
    /// `s₁s₂ = h(s₁, s₂)·s` with `s` the representative of `s₁s₂`.
    pub constant_c: Rational,
}

/// Coset extension of commutator length over `G'`. Finite groups are
/// enumerated; `AffZ` is handled in closed form. With `reps = None` the
/// least element of each coset is used (for `AffZ`: `1, t, z, z t`).
pub fn coset_extension_qnorm(d: &GroupDescriptor, reps: Option<Vec<Element>>, limit: usize) -> Result<CosetExtension> {
    if *d == GroupDescriptor::AffZ {
        return aff_z_extension(reps);
    }
    if !d.is_finite() {
        return Err(Error::Unsupported(format!("index of the derived subgroup of {d} is not known to be finite")));
    }
    let group = FiniteGroup::enumerate(d, limit)?;
    let cl = Arc::new(commutator_length_in(&group, limit)?);
    let derived: Vec<Element> = cl.table.elements().cloned().collect();

    let mut coset_of: HashMap<Element, usize> = HashMap::new();
    let mut least = Vec::new();
    for g in group.elements() {
        if coset_of.contains_key(g) {
            continue;
        }
        let id = least.len();
        least.push(g.clone());
        for h in &derived {
            coset_of.insert(group.mul(h, g), id);
        }
    }
    let reps = match reps {
        None => least,
        Some(reps) => order_transversal(reps, least.len(), |r| coset_of.get(r).copied())?,
    };
    let rep_inv: Vec<Element> = reps.iter().map(|s| group.inv(s)).collect();
    let h_part = {
        let d = d.clone();
        move |g: &Element| coset_of.get(g).map(|&i| d.mul(g, &rep_inv[i]))
    };
    let mut c = int(0);
    for s1 in &reps {
        for s2 in &reps {
            let h = h_part(&group.mul(s1, s2)).expect("member");
            c = c.max(cl.get(&h).expect("h lies in G'"));
        }
    }
    let desc = d.clone();
    let spec = QuasiNormSpec::new(d.clone(), "coset-cl", int(1) + c, int(1), move |g| {
        let h = h_part(g).ok_or_else(|| Error::DescriptorMismatch { descriptor: desc.to_string() })?;
        Ok(cl.get(&h).expect("h lies in G'"))
    });
    Ok(CosetExtension { spec, reps, constant_c: c })
}

/// Reorder user representatives by coset id, rejecting duplicates, gaps
/// and non-members.
fn order_transversal(
    reps: Vec<Element>,
    index: usize,
    coset: impl Fn(&Element) -> Option<usize>,
) -> Result<Vec<Element>> {
    if reps.len() != index {
        return Err(Error::NotTransversal(format!("expected {index} representatives, got {}", reps.len())));
    }
    let mut slots: Vec<Option<Element>> = vec![None; index];
    for r in reps {
        let i = coset(&r).ok_or_else(|| Error::NotTransversal(format!("`{r}` is not a group element")))?;
        if let Some(prev) = &slots[i] {
            return Err(Error::NotTransversal(format!("`{prev}` and `{r}` lie in the same coset")));
        }
        slots[i] = Some(r);
    }
    Ok(slots.into_iter().map(|s| s.expect("all slots filled")).collect())
}

/// `cl` on `G' = ⟨z²⟩ ⊂ AffZ`: every `z^{2n}` equals `[t, z^{-n}]`.
fn aff_z_cl(h: &Element) -> Result<Rational> {
    match h {
        Element::Aff(x) if !x.flip && x.a % 2 == 0 => Ok(int((x.a != 0) as i64)),
        _ => Err(Error::InvalidInput(format!("`{h}` is not in the derived subgroup of aff-z"))),
    }
}

/// The pair `(t, z^{-n})` whose commutator is `z^{2n}`.
pub fn aff_z_commutator_witness(n: i64) -> (Element, Element) {
    (Element::aff(0, true), Element::aff(-n, false))
}

fn aff_z_extension(reps: Option<Vec<Element>>) -> Result<CosetExtension> {
    let d = GroupDescriptor::AffZ;
    let coset = |g: &Element| match g {
        Element::Aff(x) => Some((x.a.rem_euclid(2) as usize) * 2 + x.flip as usize),
        _ => None,
    };
    let default = vec![Element::aff(0, false), Element::aff(0, true), Element::aff(1, false), Element::aff(1, true)];
    let reps = order_transversal(reps.unwrap_or(default), 4, coset)?;
    let h_part = {
        let reps = reps.clone();
        move |g: &Element| -> Result<Element> {
            let i = coset(g).ok_or_else(|| Error::DescriptorMismatch { descriptor: "aff-z".into() })?;
            GroupDescriptor::AffZ.compose(g, &GroupDescriptor::AffZ.invert(&reps[i])?)
        }
    };
    let mut c = int(0);
    for s1 in &reps {
        for s2 in &reps {
            c = c.max(aff_z_cl(&h_part(&d.mul(s1, s2))?)?);
        }
    }
    let spec = QuasiNormSpec::new(d, "coset-cl", int(1) + c, int(1), move |g| aff_z_cl(&h_part(g)?));
    Ok(CosetExtension { spec, reps, constant_c: c })
}

/// `z^a t^e` for `|a| ≤ radius`.
pub fn aff_z_window(radius: i64) -> Vec<Element> {
    (-radius..=radius).flat_map(|a| [Element::aff(a, false), Element::aff(a, true)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_LIMIT;
    use crate::norms::{verify_norm_axioms, SupportNorm, TrivialNorm};

    fn group(s: &str) -> FiniteGroup {
        FiniteGroup::enumerate(&s.parse().unwrap(), DEFAULT_LIMIT).unwrap()
    }

    #[test]
    fn norms_are_q_norms() {
        let g = group("sn:4");
        let q = QuasiNormSpec::from_table(&NormTable::from_norm(&g, &SupportNorm).unwrap());
        let r = verify_quasinorm(&q, &all_pairs(g.elements())).unwrap();
        assert!(r.passed && r.literal_version_holds == (r.max_literal_conj_slack == int(0)));
        assert_eq!(r.checked, 576);
    }

    #[test]
    fn small_constant_is_reported() {
        let g = group("sn:3");
        let q = QuasiNormSpec::new(g.descriptor().clone(), "two", int(0), int(0), |e| {
            Ok(int(if e.is_identity() { 0 } else { 2 }))
        })
        .with_constants(int(-1), int(0));
        let r = verify_quasinorm(&q, &all_pairs(g.elements())).unwrap();
        assert!(!r.passed);
        assert!(r.violations.iter().all(|v| v.kind == "additive"));
    }

    #[test]
    fn conversion_adds_constant() {
        let g = group("sn:3");
        let t = NormTable::from_norm(&g, &TrivialNorm).unwrap();
        let n = quasinorm_to_norm(&QuasiNormSpec::from_table(&t), DEFAULT_LIMIT).unwrap();
        for (e, v) in n.iter() {
            assert_eq!(*v, t.get(e).unwrap() * int(2));
        }
        let zero = QuasiNormSpec::new(g.descriptor().clone(), "zero", int(0), int(0), |_| Ok(int(0)));
        let n = quasinorm_to_norm(&zero, DEFAULT_LIMIT).unwrap();
        assert_eq!(n, NormTable::new(g.descriptor().clone(), "normalized(zero)", t.iter().map(|(e, v)| (e.clone(), *v)).collect()).with_constant_added(int(1)));
        assert!(verify_norm_axioms(&n).passed);
    }

    #[test]
    fn aff_z_extension_on_window() {
        let ext = coset_extension_qnorm(&GroupDescriptor::AffZ, None, DEFAULT_LIMIT).unwrap();
        assert_eq!(ext.constant_c, int(1));
        assert_eq!(ext.spec.c_add, int(2));
        let w = aff_z_window(50);
        let r = verify_quasinorm(&ext.spec, &all_pairs(&w)).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(ext.spec.value(&Element::aff(6, false)).unwrap(), int(1));
        assert_eq!(ext.spec.value(&Element::aff(1, true)).unwrap(), int(0));
        assert_eq!(ext.spec.value(&Element::aff(-3, true)).unwrap(), int(1));
    }

    #[test]
    fn aff_z_witness_expands() {
        let d = GroupDescriptor::AffZ;
        for n in -7..=7 {
            let (a, b) = aff_z_commutator_witness(n);
            assert_eq!(d.commutator_of(&a, &b).unwrap(), Element::aff(2 * n, false));
        }
    }

    #[test]
    fn transversal_is_validated() {
        let d = GroupDescriptor::AffZ;
        let bad = vec![Element::aff(0, false), Element::aff(2, false), Element::aff(1, true), Element::aff(0, true)];
        assert!(matches!(coset_extension_qnorm(&d, Some(bad), 10), Err(Error::NotTransversal(_))));
        let good = vec![Element::aff(4, false), Element::aff(-1, false), Element::aff(3, true), Element::aff(2, true)];
        assert!(coset_extension_qnorm(&d, Some(good), 10).is_ok());
    }

    #[test]
    fn bar_s3_extension_is_q_norm_and_normalizes() {
        let d: GroupDescriptor = "bar:sn:3".parse().unwrap();
        let ext = coset_extension_qnorm(&d, None, DEFAULT_LIMIT).unwrap();
        let g = group("bar:sn:3");
        assert_eq!(g.len(), 72);
        let r = verify_quasinorm(&ext.spec, &all_pairs(g.elements())).unwrap();
        assert!(r.passed, "{r:?}");
        let n = quasinorm_to_norm(&ext.spec, DEFAULT_LIMIT).unwrap();
        assert!(verify_norm_axioms(&n).passed);
    }

    #[test]
    fn derived_elements_keep_cl() {
        let g = group("sn:4");
        let ext = coset_extension_qnorm(g.descriptor(), None, DEFAULT_LIMIT).unwrap();
        let cl = commutator_length_in(&g, DEFAULT_LIMIT).unwrap();
        for (h, v) in cl.table.iter() {
            assert_eq!(ext.spec.value(h).unwrap(), *v);
        }
    }

    #[test]
    fn pullbacks() {
        let z2: GroupDescriptor = "product:sn:2,sn:2".parse().unwrap();
        let triv = QuasiNormSpec::new(z2.clone(), "trivial", int(0), int(0), |e| TrivialNorm.norm(e));
        let tau = crate::group::Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
        let id = crate::group::Perm::identity(2);
        let epi = move |g: &Element| -> Result<Element> {
            let x = match g {
                Element::Aff(x) => x,
                _ => return Err(Error::InvalidInput("not aff-z".into())),
            };
            let pick = |odd: bool| Element::Perm(if odd { tau.clone() } else { id.clone() });
            Ok(Element::Product(vec![pick(x.a.rem_euclid(2) == 1), pick(x.flip)]))
        };
        let w = aff_z_window(5);
        let q = pullback_qnorm(&triv, &GroupDescriptor::AffZ, epi, &all_pairs(&w)).unwrap();
        assert_eq!(q.value(&Element::aff(4, false)).unwrap(), int(0));
        assert_eq!(q.value(&Element::aff(3, false)).unwrap(), int(1));
        assert!(verify_quasinorm(&q, &all_pairs(&w)).unwrap().passed);

        let broken = |g: &Element| -> Result<Element> {
            let x = g.as_perm().unwrap();
            Ok(Element::Perm(if x.support_size() == 2 { x.clone() } else { crate::group::Perm::identity(3) }))
        };
        let s3 = group("sn:3");
        let q3 = QuasiNormSpec::from_table(&NormTable::from_norm(&s3, &TrivialNorm).unwrap());
        let r = pullback_qnorm(&q3, s3.descriptor(), broken, &all_pairs(s3.elements()));
        assert!(matches!(r, Err(Error::NotHomomorphism { .. })));
    }
}
