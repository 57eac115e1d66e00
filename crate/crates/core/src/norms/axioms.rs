use super::NormTable;
use crate::group::{Element, GroupDescriptor};
use crate::par;
use crate::rational::{self, int, Rational};
use serde::Serialize;

/// The five norm axioms, in the order they are usually listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// ν(1) = 0, and values are non-negative.
    Identity,
    /// ν(f) = ν(f⁻¹).
    Symmetry,
    /// ν(fg) ≤ ν(f) + ν(g).
    Triangle,
    /// ν(gfg⁻¹) = ν(f).
    Conjugation,
    /// ν(f) > 0 for f ≠ 1.
    Positivity,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// Element literals involved, in the order the axiom names them.
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub passed: bool,
    /// True when only positivity fails, i.e. the table is a pseudo-norm.
    pub pseudo_norm: bool,
    pub violation_count: usize,
    /// The first violations in canonical order, at most [`AxiomReport::MAX_LISTED`].
    pub violations: Vec<AxiomViolation>,
    pub checked_pairs: usize,
}

impl AxiomReport {
    pub const MAX_LISTED: usize = 64;
}

/// Exhaustive check of all five axioms on a table whose domain is a finite
/// group. Never fails: problems, including a domain that is not closed
/// under the group law, are reported as violations.
pub fn verify_norm_axioms(table: &NormTable) -> AxiomReport {
    let d = table.descriptor();
    let elems: Vec<&Element> = table.elements().collect();
    let value = |g: &Element| table.get(g);

    let per_element: Vec<Vec<AxiomViolation>> = par::map(&elems, |f| {
        let mut out = Vec::new();
        let vf = value(f).expect("domain element");
        check_single(d, f, vf, &value, &mut out);
        for g in &elems {
            let vg = value(g).expect("domain element");
            match value(&d.mul(f, g)) {
                Some(vfg) if vfg > vf + vg => out.push(violation(
                    Axiom::Triangle,
                    &[f, g],
                    format!("ν(fg) = {} > {} + {}", fmt(vfg), fmt(vf), fmt(vg)),
                )),
                Some(_) => {}
                None => out.push(violation(Axiom::Triangle, &[f, g], "fg is outside the domain".into())),
            }
            match value(&d.conj(f, g)) {
                Some(vc) if vc != vf => out.push(violation(
                    Axiom::Conjugation,
                    &[f, g],
                    format!("ν(gfg⁻¹) = {} ≠ {}", fmt(vc), fmt(vf)),
                )),
                Some(_) => {}
                None => out.push(violation(Axiom::Conjugation, &[f, g], "gfg⁻¹ is outside the domain".into())),
            }
        }
        out
    });

    let mut violations: Vec<AxiomViolation> = per_element.into_iter().flatten().collect();
    violations.sort();
    let violation_count = violations.len();
    let passed = violation_count == 0;
    let pseudo_norm = violations.iter().all(|v| v.axiom == Axiom::Positivity);
    violations.truncate(AxiomReport::MAX_LISTED);
    AxiomReport { passed, pseudo_norm, violation_count, violations, checked_pairs: elems.len() * elems.len() }
}

fn check_single(
    d: &GroupDescriptor,
    f: &Element,
    vf: Rational,
    value: &impl Fn(&Element) -> Option<Rational>,
    out: &mut Vec<AxiomViolation>,
) {
    if vf < int(0) {
        out.push(violation(Axiom::Identity, &[f], format!("negative value {}", fmt(vf))));
    }
    if f.is_identity() {
        if vf != int(0) {
            out.push(violation(Axiom::Identity, &[f], format!("ν(1) = {}", fmt(vf))));
        }
    } else if vf <= int(0) {
        out.push(violation(Axiom::Positivity, &[f], format!("ν(f) = {} for f ≠ 1", fmt(vf))));
    }
    match value(&d.inv(f)) {
        Some(vi) if vi != vf => {
            out.push(violation(Axiom::Symmetry, &[f], format!("ν(f⁻¹) = {} ≠ {}", fmt(vi), fmt(vf))))
        }
        Some(_) => {}
        None => out.push(violation(Axiom::Symmetry, &[f], "f⁻¹ is outside the domain".into())),
    }
}

fn violation(axiom: Axiom, elems: &[&Element], detail: String) -> AxiomViolation {
    AxiomViolation { axiom, witness: elems.iter().map(|e| e.to_string()).collect(), detail }
}

fn fmt(r: Rational) -> String {
    rational::to_string(&r)
}
