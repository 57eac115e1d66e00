//! F-commutators: elements of the form `Conj_f[F, h]` for a fixed `F`
//! whose powers conjugate a subgroup `H` into pairwise commuting copies
//! `H_0 = H, H_1, …, H_m`.
//!
//! Every construction here returns explicit factors and checks them by
//! exact multiplication.

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, GroupDescriptor, SubgroupSpec};
use crate::norms::Norm;
use crate::rational::{int, Rational};
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};

/// How `H` sits inside the ambient group.
#[derive(Clone, Debug)]
pub enum Embedding {
    /// `H` is the base group of a wreath product, placed at coordinate 0;
    /// `F` is the shift and `Conj_{F^i}` moves it to coordinate `i`.
    WreathCoordinate { base: GroupDescriptor },
    /// `H` is a finite subgroup of the ambient group itself.
    Inclusion { members: HashSet<Element> },
}

/// The ambient group, `F`, the embedding of `H`, and the largest `m` for
/// which `H, Conj_F(H), …, Conj_{F^m}(H)` pairwise commute.
#[derive(Clone, Debug)]
pub struct FCommEnvironment {
    ambient: GroupDescriptor,
    f: Element,
    f_inv: Element,
    embedding: Embedding,
    capacity: usize,
}

impl FCommEnvironment {
    /// `A ≀ Z` (unbounded capacity) or `A ≀ Z_N` (capacity `N − 1`), with
    /// `F` the shift.
    pub fn wreath(ambient: &GroupDescriptor) -> Result<Self> {
        let (base, capacity) = match ambient {
            GroupDescriptor::WreathZ(b) => ((**b).clone(), usize::MAX),
            GroupDescriptor::WreathZn(b, n) => ((**b).clone(), n.saturating_sub(1)),
            _ => return Err(Error::Unsupported(format!("F-commutator environment on {ambient}"))),
        };
        let f = ambient.wreath_shift()?;
        let f_inv = ambient.inv(&f);
        Ok(FCommEnvironment { ambient: ambient.clone(), f, f_inv, embedding: Embedding::WreathCoordinate { base }, capacity })
    }

    /// `H ⊂ G` with an arbitrary `F ∈ G`. The capacity is the largest
    /// `m ≤ max_m` such that the conjugates by `F^0, …, F^m` pairwise
    /// commute (checked on generators).
    pub fn inclusion(ambient: &GroupDescriptor, h: &SubgroupSpec, f: &Element, max_m: usize, limit: usize) -> Result<Self> {
        if !ambient.contains(f) {
            return Err(Error::DescriptorMismatch { descriptor: ambient.to_string() });
        }
        let members: HashSet<Element> = FiniteGroup::subgroup(ambient, h, limit)?.elements().iter().cloned().collect();
        let lifted = |i: usize| -> Vec<Element> {
            let p = ambient.pow(f, i as i64);
            h.generators.iter().map(|g| ambient.conj(g, &p)).collect()
        };
        let commute = |a: &[Element], b: &[Element]| a.iter().all(|x| b.iter().all(|y| ambient.comm(x, y).is_identity()));
        let mut layers = vec![lifted(0)];
        let mut capacity = 0;
        while capacity < max_m {
            let next = lifted(capacity + 1);
            if !layers.iter().all(|l| commute(l, &next)) {
                break;
            }
            layers.push(next);
            capacity += 1;
        }
        let f_inv = ambient.inv(f);
        Ok(FCommEnvironment {
            ambient: ambient.clone(),
            f: f.clone(),
            f_inv,
            embedding: Embedding::Inclusion { members },
            capacity,
        })
    }

    pub fn ambient(&self) -> &GroupDescriptor {
        &self.ambient
    }

    /// The element `F`.
    pub fn shift(&self) -> &Element {
        &self.f
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Descriptor that elements of `H` are written in.
    pub fn base(&self) -> &GroupDescriptor {
        match &self.embedding {
            Embedding::WreathCoordinate { base } => base,
            Embedding::Inclusion { .. } => &self.ambient,
        }
    }

    fn check_base(&self, h: &Element) -> Result<()> {
        let ok = match &self.embedding {
            Embedding::WreathCoordinate { base } => base.contains(h),
            Embedding::Inclusion { members } => members.contains(h),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("`{h}` is not an element of H")))
        }
    }

    fn require(&self, m: usize) -> Result<()> {
        if m > self.capacity {
            Err(Error::CapacityExceeded { capacity: self.capacity, required: m })
        } else {
            Ok(())
        }
    }

    /// `H`'s element `h` as an ambient element.
    pub fn embed(&self, h: &Element) -> Result<Element> {
        self.check_base(h)?;
        Ok(self.embed_unchecked(h))
    }

    fn embed_unchecked(&self, h: &Element) -> Element {
        match &self.embedding {
            Embedding::WreathCoordinate { .. } => self.ambient.wreath_basis(h, 0).expect("base element"),
            Embedding::Inclusion { .. } => h.clone(),
        }
    }

    /// `Conj_{F^i}(embed(h))`.
    pub fn lift(&self, i: usize, h: &Element) -> Element {
        let e = self.embed_unchecked(h);
        match &self.embedding {
            Embedding::WreathCoordinate { .. } => self.ambient.wreath_basis(h, i as i64).expect("base element"),
            Embedding::Inclusion { .. } => self.ambient.conj(&e, &self.ambient.pow(&self.f, i as i64)),
        }
    }

    /// `∏ Conj_{F^i}(g_i)` over `i = 0, 1, …`.
    pub fn lift_all(&self, gs: &[Element]) -> Element {
        gs.iter().enumerate().fold(self.ambient.identity(), |acc, (i, g)| self.ambient.mul(&acc, &self.lift(i, g)))
    }

    /// The commuting-conjugates hypothesis, checked on `generators` of `H`
    /// for all `0 ≤ i < j ≤ m`.
    pub fn check_commuting(&self, generators: &[Element], m: usize) -> bool {
        let d = &self.ambient;
        let layers: Vec<Vec<Element>> = (0..=m).map(|i| generators.iter().map(|g| self.lift(i, g)).collect()).collect();
        (0..=m).all(|i| {
            (i + 1..=m).all(|j| layers[i].iter().all(|a| layers[j].iter().all(|b| d.comm(a, b).is_identity())))
        })
    }
}

/// `Conj_f[F, h]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FCommutator {
    pub f: Element,
    pub h: Element,
}

impl FCommutator {
    pub fn new(f: Element, h: Element) -> Self {
        FCommutator { f, h }
    }

    pub fn value(&self, env: &FCommEnvironment) -> Element {
        let d = &env.ambient;
        let bracket = d.mul(&d.mul(&d.mul(&env.f, &self.h), &env.f_inv), &d.inv(&self.h));
        d.conj(&bracket, &self.f)
    }

    /// `(Conj_f[F, h])⁻¹ = Conj_{fh}[F, h⁻¹]`.
    pub fn inverse(&self, env: &FCommEnvironment) -> FCommutator {
        let d = &env.ambient;
        FCommutator { f: d.mul(&self.f, &self.h), h: d.inv(&self.h) }
    }

    /// `Conj_a(Conj_f[F, h]) = Conj_{af}[F, h]`.
    pub fn conjugated(&self, env: &FCommEnvironment, a: &Element) -> FCommutator {
        FCommutator { f: env.ambient.mul(a, &self.f), h: self.h.clone() }
    }

    /// `Conj_f[F, h] = [fFf⁻¹, fhf⁻¹]` as a plain commutator.
    pub fn as_commutator(&self, env: &FCommEnvironment) -> (Element, Element) {
        let d = &env.ambient;
        (d.conj(&env.f, &self.f), d.conj(&self.h, &self.f))
    }
}

/// `φ_k = g_0⋯g_k` and `φ = ∏_{i<m} Conj_{F^i}(φ_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RearrangeSolution {
    /// `φ_0, …, φ_{m-1}` in `H`.
    pub phis: Vec<Element>,
    pub assembled: Element,
}

impl RearrangeSolution {
    /// The defining system: `φ_0 = g_0`, `φ_{k-1}⁻¹φ_k = g_k`, with
    /// `φ_m = 1`.
    pub fn satisfies_system(&self, base: &GroupDescriptor, gs: &[Element]) -> bool {
        let m = gs.len() - 1;
        let phi = |k: usize| if k == m { base.identity() } else { self.phis[k].clone() };
        phi(0) == gs[0] && (1..=m).all(|k| base.mul(&base.inv(&phi(k - 1)), &phi(k)) == gs[k])
    }
}

/// Factors whose values multiply, in order, to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FCommutatorDecomposition {
    pub target: Element,
    pub factors: Vec<FCommutator>,
    pub verified: bool,
    /// Intermediate elements, by name.
    pub audit: BTreeMap<String, Element>,
}

impl FCommutatorDecomposition {
    fn build(env: &FCommEnvironment, target: Element, factors: Vec<FCommutator>, audit: BTreeMap<String, Element>) -> Self {
        let mut d = FCommutatorDecomposition { target, factors, verified: false, audit };
        d.verified = d.product(env) == d.target;
        d
    }

    pub fn product(&self, env: &FCommEnvironment) -> Element {
        self.factors.iter().fold(env.ambient.identity(), |acc, c| env.ambient.mul(&acc, &c.value(env)))
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Re-check the product and that every factor's stated inverse
    /// representation really is the inverse.
    pub fn verify(&self, env: &FCommEnvironment) -> bool {
        let d = &env.ambient;
        self.product(env) == self.target
            && self.factors.iter().all(|c| d.mul(&c.value(env), &c.inverse(env).value(env)).is_identity())
    }

    pub fn to_json(&self, env: &FCommEnvironment) -> DecompositionJson {
        DecompositionJson {
            target: self.target.to_string(),
            factors: self
                .factors
                .iter()
                .map(|c| FactorJson { f: c.f.to_string(), h: c.h.to_string(), value: c.value(env).to_string() })
                .collect(),
            verified: self.verified,
            factor_count: self.factors.len(),
            audit: self.audit.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorJson {
    pub f: String,
    pub h: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionJson {
    pub target: String,
    pub factors: Vec<FactorJson>,
    pub verified: bool,
    pub factor_count: usize,
    pub audit: BTreeMap<String, String>,
}

fn check_all(env: &FCommEnvironment, gs: &[Element]) -> Result<()> {
    gs.iter().try_for_each(|g| env.check_base(g))
}

/// Given `g_0, …, g_m ∈ H` with `g_0⋯g_m = 1`, find `φ` with
/// `[F, φ⁻¹] = ∏ Conj_{F^i}(g_i)`.
pub fn solve_rearrange_id(env: &FCommEnvironment, gs: &[Element]) -> Result<(RearrangeSolution, FCommutator)> {
    if gs.is_empty() {
        return Err(Error::InvalidInput("need at least g_0".into()));
    }
    check_all(env, gs)?;
    let m = gs.len() - 1;
    env.require(m)?;
    let base = env.base();
    let mut prefix = base.identity();
    let mut phis = Vec::with_capacity(m + 1);
    for g in gs {
        prefix = base.mul(&prefix, g);
        phis.push(prefix.clone());
    }
    if !phis.pop().expect("non-empty").is_identity() {
        return Err(Error::ProductNotIdentity);
    }
    let assembled = env.lift_all(&phis);
    let c = FCommutator::new(env.ambient.identity(), env.ambient.inv(&assembled));
    debug_assert_eq!(c.value(env), env.lift_all(gs));
    Ok((RearrangeSolution { phis, assembled }, c))
}

/// For `g_1, …, g_m ∈ H`: an F-commutator `c` and the residual
/// `∏_{i=1}^m Conj_{F^i}(g_i)` with `embed(g_m⋯g_1) = value(c)·residual`.
pub fn rearrange(env: &FCommEnvironment, gs: &[Element]) -> Result<(FCommutator, Element)> {
    check_all(env, gs)?;
    env.require(gs.len())?;
    let base = env.base();
    let g = gs.iter().rev().fold(base.identity(), |acc, x| base.mul(&acc, x));
    let mut primed = vec![g];
    primed.extend(gs.iter().map(|x| base.inv(x)));
    let (_, c) = solve_rearrange_id(env, &primed)?;
    let mut with_gap = vec![base.identity()];
    with_gap.extend(gs.iter().cloned());
    Ok((c, env.lift_all(&with_gap)))
}

/// `embed([f, g])` as two F-commutators, from the two products with
/// coordinates `(fg, g⁻¹, f⁻¹)` and `(f⁻¹g⁻¹, g, f)`. Needs capacity 2.
pub fn two_fcommutators(env: &FCommEnvironment, f: &Element, g: &Element) -> Result<FCommutatorDecomposition> {
    check_all(env, &[f.clone(), g.clone()])?;
    env.require(2)?;
    let b = env.base();
    let first = [b.mul(f, g), b.inv(g), b.inv(f)];
    let second = [b.mul(&b.inv(f), &b.inv(g)), g.clone(), f.clone()];
    let (_, c1) = solve_rearrange_id(env, &first)?;
    let (_, c2) = solve_rearrange_id(env, &second)?;
    let target = env.embed_unchecked(&b.comm(f, g));
    let audit = BTreeMap::from([
        ("first".to_string(), env.lift_all(&first)),
        ("second".to_string(), env.lift_all(&second)),
    ]);
    Ok(FCommutatorDecomposition::build(env, target, vec![c1, c2], audit))
}

/// `embed([f, g]) = Conj_f[F, f⁻¹] · Conj_g[F, f]`, which only needs `H`
/// and `Conj_F(H)` to commute.
pub fn two_fcommutators_capacity_one(env: &FCommEnvironment, f: &Element, g: &Element) -> Result<FCommutatorDecomposition> {
    check_all(env, &[f.clone(), g.clone()])?;
    env.require(1)?;
    let d = &env.ambient;
    let (ef, eg) = (env.embed_unchecked(f), env.embed_unchecked(g));
    let target = env.embed_unchecked(&env.base().comm(f, g));
    let factors = vec![FCommutator::new(ef.clone(), d.inv(&ef)), FCommutator::new(eg, ef)];
    Ok(FCommutatorDecomposition::build(env, target, factors, BTreeMap::new()))
}

fn commutator_pair(env: &FCommEnvironment, f: &Element, g: &Element) -> Result<FCommutatorDecomposition> {
    if env.capacity >= 2 {
        two_fcommutators(env, f, g)
    } else {
        two_fcommutators_capacity_one(env, f, g)
    }
}

/// `embed(∏_{i=m}^{1} [f_i, g_i])` as at most seven F-commutators.
///
/// One factor comes from rearranging onto coordinates `1..m`, where the
/// product becomes `θ = [φ, ψ] = [fx, gy]`. Two more write `[f, g]`, and
/// four come from `Conj_g{Conj_f(g⁻¹xg · y · x⁻¹) · y⁻¹}`.
pub fn seven_fcommutators(env: &FCommEnvironment, pairs: &[(Element, Element)]) -> Result<FCommutatorDecomposition> {
    let d = &env.ambient;
    let b = env.base();
    let m = pairs.len();
    for (f, g) in pairs {
        check_all(env, &[f.clone(), g.clone()])?;
    }
    if m == 0 {
        return Ok(FCommutatorDecomposition::build(env, d.identity(), Vec::new(), BTreeMap::new()));
    }
    env.require(m)?;
    let comms: Vec<Element> = pairs.iter().map(|(f, g)| b.comm(f, g)).collect();
    let h = comms.iter().rev().fold(b.identity(), |acc, c| b.mul(&acc, c));
    let target = env.embed_unchecked(&h);

    let (c0, theta) = rearrange(env, &comms)?;
    let fs: Vec<Element> = pairs.iter().map(|p| p.0.clone()).collect();
    let gs: Vec<Element> = pairs.iter().map(|p| p.1.clone()).collect();
    let (xf, phi) = rearrange(env, &fs)?;
    let (yg, psi) = rearrange(env, &gs)?;
    let f_base = fs.iter().rev().fold(b.identity(), |acc, x| b.mul(&acc, x));
    let g_base = gs.iter().rev().fold(b.identity(), |acc, x| b.mul(&acc, x));
    let (f, g) = (env.embed_unchecked(&f_base), env.embed_unchecked(&g_base));
    // embed(f) = x'φ gives φ = f·x with x = Conj_{f⁻¹}(x'⁻¹); same for ψ.
    let (f_inv, g_inv) = (d.inv(&f), d.inv(&g));
    let x = xf.inverse(env).conjugated(env, &f_inv);
    let y = yg.inverse(env).conjugated(env, &g_inv);
    let gf = d.mul(&g, &f);
    let gfg_inv = d.mul(&gf, &g_inv);

    let mut factors = vec![c0];
    factors.extend(commutator_pair(env, &f_base, &g_base)?.factors);
    factors.push(x.conjugated(env, &gfg_inv));
    factors.push(y.conjugated(env, &gf));
    factors.push(x.inverse(env).conjugated(env, &gf));
    factors.push(y.inverse(env).conjugated(env, &g));

    let audit = BTreeMap::from([
        ("theta".to_string(), theta),
        ("phi".to_string(), phi),
        ("psi".to_string(), psi),
        ("f".to_string(), f),
        ("g".to_string(), g),
        ("x".to_string(), x.value(env)),
        ("y".to_string(), y.value(env)),
    ]);
    Ok(FCommutatorDecomposition::build(env, target, factors, audit))
}

/// Two ambient commutators whose product is `embed(∏_{i=m}^{1} [f_i, g_i])`:
/// the rearranging F-commutator `Conj_a[F, b] = [aFa⁻¹, aba⁻¹]`, then
/// `[φ, ψ]`.
pub fn two_commutator_witness(
    env: &FCommEnvironment,
    pairs: &[(Element, Element)],
) -> Result<((Element, Element), (Element, Element))> {
    let d = &env.ambient;
    let b = env.base();
    for (f, g) in pairs {
        check_all(env, &[f.clone(), g.clone()])?;
    }
    env.require(pairs.len())?;
    let comms: Vec<Element> = pairs.iter().map(|(f, g)| b.comm(f, g)).collect();
    let (c0, _) = rearrange(env, &comms)?;
    let fs: Vec<Element> = pairs.iter().map(|p| p.0.clone()).collect();
    let gs: Vec<Element> = pairs.iter().map(|p| p.1.clone()).collect();
    let mut phi_coords = vec![b.identity()];
    phi_coords.extend(fs);
    let mut psi_coords = vec![b.identity()];
    psi_coords.extend(gs);
    let first = c0.as_commutator(env);
    let second = (env.lift_all(&phi_coords), env.lift_all(&psi_coords));
    let h = comms.iter().rev().fold(b.identity(), |acc, c| b.mul(&acc, c));
    let product = d.mul(&d.comm(&first.0, &first.1), &d.comm(&second.0, &second.1));
    if product != env.embed_unchecked(&h) {
        return Err(Error::InvalidInput("two-commutator reconstruction failed".into()));
    }
    Ok((first, second))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FCommBoundReport {
    #[serde(with = "crate::rational::serde_p_q")]
    pub nu_f: Rational,
    /// Largest factor value `ν(Conj_f[F, h])`.
    #[serde(with = "crate::rational::serde_p_q")]
    pub max_factor: Rational,
    #[serde(with = "crate::rational::serde_p_q")]
    pub nu_target: Rational,
    /// Every factor satisfies `ν ≤ 2ν(F)`.
    pub factors_ok: bool,
    /// `ν(target) ≤ 14ν(F)`.
    pub target_ok: bool,
    pub passed: bool,
}

/// Check `ν(c) ≤ 2ν(F)` for each factor and `ν(target) ≤ 14ν(F)`.
pub fn fcomm_norm_bound<N: Norm>(
    env: &FCommEnvironment,
    decomp: &FCommutatorDecomposition,
    norm: &N,
) -> Result<FCommBoundReport> {
    let nu_f = norm.norm(&env.f)?;
    let mut max_factor = int(0);
    for c in &decomp.factors {
        max_factor = max_factor.max(norm.norm(&c.value(env))?);
    }
    let nu_target = norm.norm(&decomp.target)?;
    let factors_ok = max_factor <= int(2) * nu_f;
    let target_ok = nu_target <= int(14) * nu_f;
    Ok(FCommBoundReport { nu_f, max_factor, nu_target, factors_ok, target_ok, passed: factors_ok && target_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_LIMIT;

    fn env(s: &str) -> FCommEnvironment {
        FCommEnvironment::wreath(&s.parse().unwrap()).unwrap()
    }

    fn p(s: &str) -> Element {
        "sn:3".parse::<GroupDescriptor>().unwrap().parse_element(s).unwrap()
    }

    #[test]
    fn capacity() {
        assert_eq!(env("wreath:sn:3:zn:3").capacity(), 2);
        assert_eq!(env("wreath:sn:3:z").capacity(), usize::MAX);
        assert!(env("wreath:sn:3:zn:4").check_commuting(&[p("(1 2)"), p("(1 2 3)")], 3));
    }

    #[test]
    fn rearrange_id_small() {
        let e = env("wreath:sn:3:zn:3");
        let (sol, c) = solve_rearrange_id(&e, &[p("()"), p("()")]).unwrap();
        assert!(sol.assembled.is_identity() && c.value(&e).is_identity());
        let g = p("(1 2 3)");
        let gi = p("(1 3 2)");
        let (sol, c) = solve_rearrange_id(&e, &[g.clone(), gi.clone()]).unwrap();
        assert_eq!(sol.assembled, e.embed(&g).unwrap());
        assert_eq!(c.value(&e), e.lift_all(&[g.clone(), gi.clone()]));
        assert!(sol.satisfies_system(e.base(), &[g, gi]));
        assert_eq!(solve_rearrange_id(&e, &[p("(1 2)"), p("()")]), Err(Error::ProductNotIdentity));
        assert!(matches!(
            solve_rearrange_id(&e, &[p("()"), p("()"), p("()"), p("()")]),
            Err(Error::CapacityExceeded { capacity: 2, required: 3 })
        ));
    }

    #[test]
    fn two_factor_lemma_exhaustive() {
        let e = env("wreath:sn:3:zn:3");
        let s3 = FiniteGroup::enumerate(&"sn:3".parse().unwrap(), DEFAULT_LIMIT).unwrap();
        for f in s3.elements() {
            for g in s3.elements() {
                let dec = two_fcommutators(&e, f, g).unwrap();
                assert!(dec.verified && dec.verify(&e) && dec.factor_count() == 2);
                let one = two_fcommutators_capacity_one(&e, f, g).unwrap();
                assert!(one.verified);
            }
        }
        let narrow = env("wreath:sn:3:zn:2");
        assert!(two_fcommutators(&narrow, &p("(1 2)"), &p("(1 3)")).is_err());
        assert!(two_fcommutators_capacity_one(&narrow, &p("(1 2)"), &p("(1 3)")).unwrap().verified);
    }

    #[test]
    fn inclusion_environment() {
        let d: GroupDescriptor = "sn:9".parse().unwrap();
        let h = SubgroupSpec::new(d.parse_elements("(1 2), (1 2 3)").unwrap());
        let f = d.parse_element("(1 4 7)(2 5 8)(3 6 9)").unwrap();
        let e = FCommEnvironment::inclusion(&d, &h, &f, 5, DEFAULT_LIMIT).unwrap();
        assert_eq!(e.capacity(), 2);
        let dec = seven_fcommutators(&e, &[(h.generators[0].clone(), h.generators[1].clone())]).unwrap();
        assert!(dec.verified);
    }
}
