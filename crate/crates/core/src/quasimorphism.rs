//! Quasi-morphisms: defects, homogenization, the extension to `Ḡ`,
//! commutator sups, additivity over commuting subgroups, and certified
//! bounds on stable commutator length.

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, GroupDescriptor, SubgroupSpec, Word};
use crate::par;
use crate::rational::{self, int, Rational};
use crate::sampling::{random_element, rng_for};
use serde::Serialize;
use std::sync::Arc;

type EvalFn = Arc<dyn Fn(&Element) -> Result<Rational> + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QmKind {
    Homomorphism,
    Counting,
    BarExtension,
    User,
}

/// A function `r` with `|r(ab) − r(a) − r(b)|` bounded.
#[derive(Clone)]
pub struct QuasiMorphism {
    pub domain: GroupDescriptor,
    pub name: String,
    pub kind: QmKind,
    /// Claimed, not proved; see [`homogeneity_spot_check`].
    pub homogeneous: bool,
    /// How the function was built, when it affects defect values.
    pub convention: Option<String>,
    eval: EvalFn,
}

impl QuasiMorphism {
    pub fn new(
        domain: GroupDescriptor,
        name: impl Into<String>,
        kind: QmKind,
        homogeneous: bool,
        eval: impl Fn(&Element) -> Result<Rational> + Send + Sync + 'static,
    ) -> Self {
        QuasiMorphism { domain, name: name.into(), kind, homogeneous, convention: None, eval: Arc::new(eval) }
    }

    /// The zero function.
    pub fn zero(domain: GroupDescriptor) -> Self {
        Self::new(domain, "zero", QmKind::Homomorphism, true, |_| Ok(int(0)))
    }

    pub fn eval(&self, g: &Element) -> Result<Rational> {
        if !self.domain.contains(g) {
            return Err(Error::DescriptorMismatch { descriptor: self.domain.to_string() });
        }
        (self.eval)(g)
    }
}

impl std::fmt::Debug for QuasiMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuasiMorphism")
            .field("domain", &self.domain.to_string())
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("homogeneous", &self.homogeneous)
            .finish()
    }
}

/// Overlapping occurrences of `pattern` minus those of `pattern⁻¹` in the
/// reduced word.
pub const COUNTING_CONVENTION: &str = "overlapping occurrences of the pattern minus those of its inverse, in the reduced word";

/// Counting quasi-morphism `u ↦ #pattern(u) − #pattern⁻¹(u)` on a free
/// group. Not homogeneous.
pub fn counting_qm(domain: &GroupDescriptor, pattern: &Word) -> Result<QuasiMorphism> {
    let rank = match domain {
        GroupDescriptor::Free(r) => *r,
        _ => return Err(Error::Unsupported(format!("counting quasi-morphism on {domain}"))),
    };
    if pattern.is_empty() {
        return Err(Error::InvalidInput("pattern must be non-empty".into()));
    }
    if !pattern.is_reduced() || pattern.max_generator() as usize > rank {
        return Err(Error::InvalidInput(format!("pattern `{pattern}` is not a reduced word in {domain}")));
    }
    let (p, q) = (pattern.clone(), pattern.inverse());
    let mut qm = QuasiMorphism::new(domain.clone(), format!("count:{pattern}"), QmKind::Counting, false, move |g| {
        let w = g.as_word().ok_or_else(|| Error::InvalidInput(format!("`{g}` is not a word")))?;
        Ok(int(w.count_occurrences(&p) as i64 - w.count_occurrences(&q) as i64))
    });
    qm.convention = Some(COUNTING_CONVENTION.into());
    Ok(qm)
}

/// `Σ qᵢ(gᵢ)` on a direct product, one quasi-morphism per factor.
pub fn coordinate_sum(domain: &GroupDescriptor, parts: Vec<QuasiMorphism>) -> Result<QuasiMorphism> {
    let ds = match domain {
        GroupDescriptor::Product(ds) if ds.len() == parts.len() => ds,
        _ => return Err(Error::InvalidInput(format!("{domain} is not a product of {} factors", parts.len()))),
    };
    if ds.iter().zip(&parts).any(|(d, q)| *d != q.domain) {
        return Err(Error::DescriptorMismatch { descriptor: domain.to_string() });
    }
    let homogeneous = parts.iter().all(|q| q.homogeneous);
    let kind = if parts.iter().all(|q| q.kind == QmKind::Homomorphism) { QmKind::Homomorphism } else { QmKind::User };
    let name = format!("sum({})", parts.iter().map(|q| q.name.as_str()).collect::<Vec<_>>().join(","));
    let convention = parts.iter().find_map(|q| q.convention.clone());
    let mut qm = QuasiMorphism::new(domain.clone(), name, kind, homogeneous, move |g| match g {
        Element::Product(es) => es.iter().zip(&parts).map(|(e, q)| q.eval(e)).sum(),
        _ => Err(Error::InvalidInput(format!("`{g}` is not a tuple"))),
    });
    qm.convention = convention;
    Ok(qm)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    Exact,
    SampledLowerBound,
    DeclaredUpperBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleMeta {
    pub count: usize,
    pub seed: u64,
    /// Word length / exponent bound passed to the sampler.
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectEstimate {
    #[serde(with = "crate::rational::serde_p_q")]
    pub value: Rational,
    pub certified: Certification,
    pub sample_meta: Option<SampleMeta>,
    pub witness: Option<(String, String)>,
    pub convention: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefectMode {
    /// All pairs of a finite domain, enumerated up to `limit` elements.
    Exact { limit: usize },
    /// `budget` seeded pairs of elements of size at most `size`.
    Sampled { seed: u64, budget: usize, size: usize },
}

fn defect_at(q: &QuasiMorphism, a: &Element, b: &Element) -> Result<Rational> {
    let ab = q.domain.mul(a, b);
    Ok(rational::abs(q.eval(&ab)? - q.eval(a)? - q.eval(b)?))
}

/// Largest value, ties broken by the smaller index.
fn max_with_witness(values: Vec<Rational>) -> Option<(usize, Rational)> {
    values.into_iter().enumerate().fold(None, |best, (i, v)| match best {
        Some((_, b)) if b >= v => best,
        _ => Some((i, v)),
    })
}

/// `sup |r(ab) − r(a) − r(b)|`: exact over a finite domain, or a seeded
/// lower bound. Sample `i` depends only on `(seed, i)`, so a larger budget
/// never lowers the estimate.
pub fn defect(q: &QuasiMorphism, mode: DefectMode) -> Result<DefectEstimate> {
    match mode {
        DefectMode::Exact { limit } => {
            if !q.domain.is_finite() {
                return Err(Error::InfiniteGroup(q.domain.to_string()));
            }
            let g = FiniteGroup::enumerate(&q.domain, limit)?;
            let n = g.len();
            let rows = par::map_range(0..n, |i| -> Result<Vec<Rational>> {
                let a = &g.elements()[i];
                g.elements().iter().map(|b| defect_at(q, a, b)).collect()
            });
            let flat: Vec<Rational> = rows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
            let best = max_with_witness(flat);
            Ok(DefectEstimate {
                value: best.map_or(int(0), |b| b.1),
                certified: Certification::Exact,
                sample_meta: None,
                witness: best.map(|(k, _)| (g.elements()[k / n].to_string(), g.elements()[k % n].to_string())),
                convention: q.convention.clone(),
            })
        }
        DefectMode::Sampled { seed, budget, size } => {
            let pairs = sample_pairs(&q.domain, seed, budget, size);
            let values = par::map(&pairs, |(a, b)| defect_at(q, a, b)).into_iter().collect::<Result<Vec<_>>>()?;
            let best = max_with_witness(values);
            Ok(DefectEstimate {
                value: best.map_or(int(0), |b| b.1),
                certified: Certification::SampledLowerBound,
                sample_meta: Some(SampleMeta { count: budget, seed, size }),
                witness: best.map(|(k, _)| (pairs[k].0.to_string(), pairs[k].1.to_string())),
                convention: q.convention.clone(),
            })
        }
    }
}

/// Seeded pairs; pair `i` depends only on `(seed, i)`.
pub fn sample_pairs(d: &GroupDescriptor, seed: u64, budget: usize, size: usize) -> Vec<(Element, Element)> {
    par::map_range(0..budget, |i| {
        let mut rng = rng_for(seed, i as u64);
        (random_element(d, &mut rng, size), random_element(d, &mut rng, size))
    })
}

/// Seeded triples; triple `i` depends only on `(seed, i)`.
pub fn sample_triples(d: &GroupDescriptor, seed: u64, budget: usize, size: usize) -> Vec<[Element; 3]> {
    par::map_range(0..budget, |i| {
        let mut rng = rng_for(seed, i as u64);
        [random_element(d, &mut rng, size), random_element(d, &mut rng, size), random_element(d, &mut rng, size)]
    })
}

/// `r(gⁿ) = n·r(g)` for every sample and every listed `n`.
pub fn homogeneity_spot_check(q: &QuasiMorphism, samples: &[Element], powers: &[i64]) -> Result<bool> {
    for g in samples {
        let v = q.eval(g)?;
        for &n in powers {
            if q.eval(&q.domain.pow(g, n))? != int(n) * v {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogenizationInterval {
    pub element: String,
    pub n: u64,
    /// `r(gⁿ)/n`.
    #[serde(with = "crate::rational::serde_p_q")]
    pub center: Rational,
    /// `D̄/n` when a defect bound `D̄` is supplied.
    pub radius: Option<String>,
    #[serde(skip)]
    pub radius_value: Option<Rational>,
    /// The interval provably contains `lim r(gᵏ)/k`.
    pub certified: bool,
}

impl HomogenizationInterval {
    pub fn lower(&self) -> Option<Rational> {
        self.radius_value.map(|r| self.center - r)
    }

    pub fn upper(&self) -> Option<Rational> {
        self.radius_value.map(|r| self.center + r)
    }

    pub fn contains(&self, x: Rational) -> bool {
        match self.radius_value {
            Some(r) => self.center - r <= x && x <= self.center + r,
            None => x == self.center,
        }
    }
}

/// `r(gⁿ)/n` with radius `D̄/n`. The homogenization `r̄` satisfies
/// `|r̄ − r| ≤ D` and `r̄(gⁿ) = n·r̄(g)`, so `|r̄(g) − r(gⁿ)/n| ≤ D/n`.
/// `gⁿ` is computed by repeated squaring.
pub fn homogenize(q: &QuasiMorphism, g: &Element, n: u64, defect_upper: Option<Rational>) -> Result<HomogenizationInterval> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let power = q.domain.power(g, n as i64)?;
    let center = q.eval(&power)? / int(n as i64);
    let radius_value = defect_upper.map(|d| d / int(n as i64));
    Ok(HomogenizationInterval {
        element: g.to_string(),
        n,
        center,
        radius: radius_value.map(|r| rational::to_string(&r)),
        radius_value,
        certified: defect_upper.is_some(),
    })
}

/// `r̄((g₁, g₂)tᵉ) = r(g₁) + r(g₂)` on `Ḡ`.
pub fn bar_extension(r: &QuasiMorphism) -> QuasiMorphism {
    let inner = r.clone();
    let mut q = QuasiMorphism::new(
        GroupDescriptor::bar(r.domain.clone()),
        format!("bar({})", r.name),
        QmKind::BarExtension,
        false,
        move |h| {
            let b = h.as_bar().ok_or_else(|| Error::InvalidInput(format!("`{h}` is not in a bar group")))?;
            Ok(inner.eval(&b.first)? + inner.eval(&b.second)?)
        },
    );
    q.convention = r.convention.clone();
    q
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GbarDefectCheck {
    pub h: String,
    pub f: String,
    /// `r̄(hf) − r̄(h) − r̄(f)`.
    #[serde(with = "crate::rational::serde_p_q")]
    pub defect: Rational,
    /// The two component defects `r(p) − r(a) − r(b)`.
    pub parts: [String; 2],
    /// `defect` equals the sum of the parts.
    pub decomposes: bool,
    /// `|defect| ≤ |part₁| + |part₂|`.
    pub bound_holds: bool,
}

/// For `h = (h₁, h₂)tᵉ` and `f = (f₁, f₂)t^d`: the coordinates of `hf` are
/// `h₁f₁, h₂f₂` when `e = 0` and `h₁f₂, h₂f₁` when `e = 1`, so the defect
/// of `r̄` splits into two defects of `r`.
pub fn gbar_defect_decomposition(r: &QuasiMorphism, h: &Element, f: &Element) -> Result<GbarDefectCheck> {
    let bar = GroupDescriptor::bar(r.domain.clone());
    let rbar = bar_extension(r);
    let (hb, fb) = match (h.as_bar(), f.as_bar()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::DescriptorMismatch { descriptor: bar.to_string() }),
    };
    let hf = bar.compose(h, f)?;
    let defect = rbar.eval(&hf)? - rbar.eval(h)? - rbar.eval(f)?;
    let pairs = if hb.flip {
        [(&hb.first, &fb.second), (&hb.second, &fb.first)]
    } else {
        [(&hb.first, &fb.first), (&hb.second, &fb.second)]
    };
    let g = &r.domain;
    let mut parts = [int(0); 2];
    for (k, (a, b)) in pairs.iter().enumerate() {
        parts[k] = r.eval(&g.mul(a, b))? - r.eval(a)? - r.eval(b)?;
    }
    Ok(GbarDefectCheck {
        h: h.to_string(),
        f: f.to_string(),
        defect,
        parts: parts.map(|p| rational::to_string(&p)),
        decomposes: defect == parts[0] + parts[1],
        bound_holds: rational::abs(defect) <= rational::abs(parts[0]) + rational::abs(parts[1]),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GbarSplittingReport {
    pub w: String,
    /// 1 for `w = (g₁, g₂)`, 2 for `w = (g₁, g₂)t`.
    pub case: u8,
    pub w1: String,
    pub w2: String,
    pub k: usize,
    pub passed: bool,
    /// First `j` where the identity fails.
    pub failure: Option<usize>,
}

/// Case 1: `w = (g₁, g₂)`, `w₁ = (g₁, 1)`, `w₂ = (1, g₂)`, `wʲ = w₁ʲw₂ʲ`.
/// Case 2: `w = (g₁, g₂)t`, `w₁ = (g₁g₂, 1)`, `w₂ = (1, g₂g₁)`,
/// `w²ʲ = w₁ʲw₂ʲ`. Checked for `1 ≤ j ≤ k`.
pub fn verify_gbar_splitting(d: &GroupDescriptor, w: &Element, k: usize) -> Result<GbarSplittingReport> {
    let base = match d {
        GroupDescriptor::Bar(b) => b.as_ref(),
        _ => return Err(Error::Unsupported(format!("splitting in {d}"))),
    };
    if !d.contains(w) {
        return Err(Error::DescriptorMismatch { descriptor: d.to_string() });
    }
    let b = w.as_bar().expect("bar element");
    let id = base.identity();
    let (case, w1, w2) = if b.flip {
        (
            2,
            Element::bar(base.mul(&b.first, &b.second), id.clone(), false),
            Element::bar(id, base.mul(&b.second, &b.first), false),
        )
    } else {
        (1, Element::bar(b.first.clone(), id.clone(), false), Element::bar(id, b.second.clone(), false))
    };
    let step = if case == 1 { w.clone() } else { d.mul(w, w) };
    let (mut lhs, mut p1, mut p2) = (d.identity(), d.identity(), d.identity());
    let mut failure = None;
    for j in 1..=k {
        lhs = d.mul(&lhs, &step);
        p1 = d.mul(&p1, &w1);
        p2 = d.mul(&p2, &w2);
        if lhs != d.mul(&p1, &p2) {
            failure = Some(j);
            break;
        }
    }
    Ok(GbarSplittingReport {
        w: w.to_string(),
        case,
        w1: w1.to_string(),
        w2: w2.to_string(),
        k,
        passed: failure.is_none(),
        failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutatorSupEstimate {
    #[serde(with = "crate::rational::serde_p_q")]
    pub value: Rational,
    /// Pairs attaining the value, least first (at most 8).
    pub witnesses: Vec<(String, String)>,
    pub certified: Certification,
    pub sample_meta: Option<SampleMeta>,
}

/// Where the sup of `r([x, y])` is taken.
#[derive(Clone, Debug)]
pub enum CommutatorDomain {
    /// Every pair from a finite list (a finite subgroup, or a ball).
    Exhaustive(Vec<Element>),
    /// Seeded pairs from the whole domain.
    Sampled { seed: u64, budget: usize, size: usize },
}

/// `sup r([x, y])`. Exhaustive over a finite subgroup it is exact; over a
/// ball or a sample it is a lower bound.
pub fn commutator_sup(q: &QuasiMorphism, domain: &CommutatorDomain, exact: bool) -> Result<CommutatorSupEstimate> {
    let d = &q.domain;
    let (pairs, meta) = match domain {
        CommutatorDomain::Exhaustive(xs) => {
            if let Some(x) = xs.iter().find(|x| !d.contains(x)) {
                return Err(Error::InvalidInput(format!("`{x}` is not in {d}")));
            }
            (xs.iter().flat_map(|a| xs.iter().map(move |b| (a.clone(), b.clone()))).collect::<Vec<_>>(), None)
        }
        CommutatorDomain::Sampled { seed, budget, size } => {
            if exact {
                return Err(Error::InvalidInput("sampled commutator sup cannot be exact".into()));
            }
            (sample_pairs(d, *seed, *budget, *size), Some(SampleMeta { count: *budget, seed: *seed, size: *size }))
        }
    };
    let values = par::map(&pairs, |(x, y)| q.eval(&d.comm(x, y))).into_iter().collect::<Result<Vec<_>>>()?;
    let value = values.iter().copied().max().unwrap_or_else(|| int(0));
    let mut witnesses: Vec<(String, String)> = pairs
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v == value)
        .map(|((x, y), _)| (x.to_string(), y.to_string()))
        .collect();
    witnesses.sort();
    witnesses.truncate(8);
    Ok(CommutatorSupEstimate {
        value,
        witnesses,
        certified: if exact { Certification::Exact } else { Certification::SampledLowerBound },
        sample_meta: meta,
    })
}

/// Reduced words of length at most `radius` in `free:rank`, shortlex.
pub fn free_ball(rank: usize, radius: usize) -> Vec<Element> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|g| [g, -g]).collect();
    let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
    let mut out = vec![Element::Word(Word::identity())];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().map(|w| Element::Word(Word::reduce(w.iter().copied()).expect("non-zero letters"))));
        layer = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop1WitnessReport {
    pub subgroups_commute: bool,
    /// `[∏xᵢ, ∏yᵢ] = ∏[xᵢ, yᵢ]`.
    pub commutator_splits: bool,
    #[serde(with = "crate::rational::serde_p_q")]
    pub combined: Rational,
    pub parts: Vec<String>,
    #[serde(with = "crate::rational::serde_p_q")]
    pub sum: Rational,
    pub additive: bool,
    /// The check shows `‖r‖_K ≥ Σ rᵢ` for these witnesses only; the sups
    /// themselves are not certified equal.
    pub sup_equality_certified: bool,
}

/// For pairwise commuting `H₁, …, H_N` and witnesses `(xᵢ, yᵢ) ∈ Hᵢ`:
/// check `r([x₁⋯x_N, y₁⋯y_N]) = Σ r([xᵢ, yᵢ])` exactly.
pub fn verify_prop1_witness(
    q: &QuasiMorphism,
    subgroups: &[SubgroupSpec],
    witnesses: &[(Element, Element)],
) -> Result<Prop1WitnessReport> {
    let d = &q.domain;
    if subgroups.len() != witnesses.len() {
        return Err(Error::InvalidInput("one witness pair per subgroup".into()));
    }
    for s in subgroups {
        s.validate(d)?;
    }
    let commute = |a: &[Element], b: &[Element]| a.iter().all(|x| b.iter().all(|y| d.comm(x, y).is_identity()));
    let mut subgroups_commute = true;
    for i in 0..subgroups.len() {
        for j in i + 1..subgroups.len() {
            let wi = [witnesses[i].0.clone(), witnesses[i].1.clone()];
            let wj = [witnesses[j].0.clone(), witnesses[j].1.clone()];
            subgroups_commute &= commute(&subgroups[i].generators, &subgroups[j].generators) && commute(&wi, &wj);
        }
    }
    if !subgroups_commute {
        return Err(Error::NotCommuting { a: "H_i".into(), b: "H_j".into() });
    }
    let x = d.product(witnesses.iter().map(|w| &w.0))?;
    let y = d.product(witnesses.iter().map(|w| &w.1))?;
    let comms: Vec<Element> = witnesses.iter().map(|(a, b)| d.comm(a, b)).collect();
    let big = d.comm(&x, &y);
    let commutator_splits = big == d.product(comms.iter())?;
    let combined = q.eval(&big)?;
    let parts = comms.iter().map(|c| q.eval(c)).collect::<Result<Vec<_>>>()?;
    let sum: Rational = parts.iter().sum();
    Ok(Prop1WitnessReport {
        subgroups_commute,
        commutator_splits,
        combined,
        parts: parts.iter().map(rational::to_string).collect(),
        sum,
        additive: combined == sum,
        sup_equality_certified: false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SclBounds {
    pub element: String,
    pub lower: Option<String>,
    #[serde(skip)]
    pub lower_value: Option<Rational>,
    pub lower_provenance: Option<String>,
    pub upper: Option<String>,
    #[serde(skip)]
    pub upper_value: Option<Rational>,
    pub upper_provenance: Option<String>,
    /// Finite ambient group: `scl ≡ 0`.
    pub degenerate: bool,
}

/// Certified scl bounds for `w`.
///
/// Lower: with `φ̄` the homogenization of `q` and `D̄ ≥ D(q)`,
/// `scl(w) ≥ |φ̄(w)| / (2 D(φ̄))`, and `D(φ̄) ≤ 2D̄` (or `D̄` when `q` is
/// homogeneous). `|φ̄(w)|` is bounded below by the homogenization interval
/// at `n`.
///
/// Upper: `min cl(wᵏ)/k` over the supplied `(k, cl(wᵏ))` pairs.
pub fn scl_bounds(
    q: &QuasiMorphism,
    w: &Element,
    defect_upper: Rational,
    n: u64,
    cl_powers: &[(u64, u64)],
) -> Result<SclBounds> {
    let interval = homogenize(q, w, n, Some(defect_upper))?;
    let finite = q.domain.is_finite();
    let (lower_value, lower_provenance) = if defect_upper == int(0) {
        if interval.center != int(0) {
            return Err(Error::InvalidInput(format!(
                "declared defect 0 makes {} a homomorphism, but it is non-zero at {w}",
                q.name
            )));
        }
        (int(0), format!("{}: homomorphism, no bound", q.name))
    } else {
        let radius = interval.radius_value.expect("bound supplied");
        let magnitude = (rational::abs(interval.center) - radius).max(int(0));
        let hom_defect = if q.homogeneous { defect_upper } else { int(2) * defect_upper };
        (
            magnitude / (int(2) * hom_defect),
            format!(
                "{}: |center| - radius = {} at n = {n}, D = {}, denominator {}",
                q.name,
                rational::to_string(&magnitude),
                rational::to_string(&defect_upper),
                rational::to_string(&(int(2) * hom_defect))
            ),
        )
    };
    let lower_value = if finite { int(0) } else { lower_value };
    let mut upper_value = None;
    let mut upper_provenance = None;
    for &(k, c) in cl_powers {
        if k == 0 {
            continue;
        }
        let v = Rational::new(c as i64, k as i64);
        if upper_value.is_none_or(|u| v < u) {
            upper_value = Some(v);
            upper_provenance = Some(format!("cl(w^{k}) = {c}"));
        }
    }
    if finite && upper_value.is_none() {
        upper_value = Some(int(0));
        upper_provenance = Some("finite group".into());
    }
    if let (Some(u), l) = (upper_value, lower_value) {
        if l > u {
            return Err(Error::InvalidInput(format!(
                "inconsistent bounds: lower {} > upper {}",
                rational::to_string(&l),
                rational::to_string(&u)
            )));
        }
    }
    Ok(SclBounds {
        element: w.to_string(),
        lower: Some(rational::to_string(&lower_value)),
        lower_value: Some(lower_value),
        lower_provenance: Some(if finite { "finite group".into() } else { lower_provenance }),
        upper: upper_value.map(|u| rational::to_string(&u)),
        upper_value,
        upper_provenance,
        degenerate: finite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_LIMIT;

    fn f2() -> GroupDescriptor {
        "free:2".parse().unwrap()
    }

    fn word(s: &str) -> Element {
        f2().parse_element(s).unwrap()
    }

    #[test]
    fn counting_values() {
        let q = counting_qm(&f2(), word("a b").as_word().unwrap()).unwrap();
        assert_eq!(q.eval(&word("1")).unwrap(), int(0));
        assert_eq!(q.eval(&word("a b a b")).unwrap(), int(2));
        assert_eq!(q.eval(&word("B A")).unwrap(), int(-1));
        assert!(counting_qm(&f2(), &Word::identity()).is_err());
    }

    #[test]
    fn sampled_defect_is_reproducible_and_monotone() {
        let q = counting_qm(&f2(), word("a b").as_word().unwrap()).unwrap();
        let small = defect(&q, DefectMode::Sampled { seed: 7, budget: 50, size: 6 }).unwrap();
        let again = defect(&q, DefectMode::Sampled { seed: 7, budget: 50, size: 6 }).unwrap();
        let big = defect(&q, DefectMode::Sampled { seed: 7, budget: 500, size: 6 }).unwrap();
        assert_eq!(small, again);
        assert!(small.value <= big.value && big.value <= int(3));
    }

    #[test]
    fn homomorphism_on_finite_group_has_no_defect() {
        let s4: GroupDescriptor = "sn:4".parse().unwrap();
        let sign = QuasiMorphism::new(s4.clone(), "zero-sign", QmKind::Homomorphism, true, |_| Ok(int(0)));
        assert_eq!(defect(&sign, DefectMode::Exact { limit: DEFAULT_LIMIT }).unwrap().value, int(0));
        assert!(defect(&counting_qm(&f2(), word("a").as_word().unwrap()).unwrap(), DefectMode::Exact { limit: 10 }).is_err());
    }

    #[test]
    fn scl_lower_bound_for_basic_commutator() {
        let q = counting_qm(&f2(), word("a b").as_word().unwrap()).unwrap();
        let w = word("a b A B");
        let iv = homogenize(&q, &w, 64, Some(int(3))).unwrap();
        assert_eq!(iv.center, int(1));
        let b = scl_bounds(&q, &w, int(3), 64, &[(1, 1)]).unwrap();
        assert_eq!(b.lower_value, Some(Rational::new(61, 768)));
        assert_eq!(b.upper_value, Some(int(1)));
        assert!(scl_bounds(&q, &w, int(0), 64, &[]).is_err());
    }

    #[test]
    fn gbar_cases() {
        let d: GroupDescriptor = "bar:sn:5".parse().unwrap();
        for (i, w) in sample_pairs(&d, 3, 20, 4).into_iter().map(|p| p.0).enumerate() {
            let r = verify_gbar_splitting(&d, &w, 20).unwrap();
            assert!(r.passed, "sample {i}: {r:?}");
        }
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(free_ball(2, 0).len(), 1);
        assert_eq!(free_ball(2, 2).len(), 1 + 4 + 12);
    }
}
