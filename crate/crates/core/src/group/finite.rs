//! Finite groups as explicit sorted element lists, and the closure
//! operations built on them.

use super::descriptor::AbelianizationOrder;
use super::element::Element;
use super::GroupDescriptor;
use crate::error::{Error, Result};
use crate::par;
use std::collections::{HashMap, HashSet};

/// Generators of a subgroup of some ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub generators: Vec<Element>,
    pub label: Option<String>,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<Element>) -> Self {
        SubgroupSpec { generators, label: None }
    }

    pub fn labeled(generators: Vec<Element>, label: impl Into<String>) -> Self {
        SubgroupSpec { generators, label: Some(label.into()) }
    }

    /// Non-empty, and every generator is a member of `ambient`.
    pub fn validate(&self, ambient: &GroupDescriptor) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::InvalidInput("subgroup needs at least one generator".into()));
        }
        match self.generators.iter().find(|g| !ambient.contains(g)) {
            Some(_) => Err(Error::DescriptorMismatch { descriptor: ambient.to_string() }),
            None => Ok(()),
        }
    }

    /// Generators pairwise commute.
    pub fn is_abelian(&self, ambient: &GroupDescriptor) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| ambient.comm(&g[i], &g[j]).is_identity()))
    }
}

/// A finite group, or finite subgroup of a possibly infinite ambient group,
/// held as a sorted element list with an index.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    descriptor: GroupDescriptor,
    generators: Vec<Element>,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

impl FiniteGroup {
    /// All elements of a finite family.
    pub fn enumerate(descriptor: &GroupDescriptor, limit: usize) -> Result<Self> {
        let elements = descriptor.enumerate_elements(limit)?;
        let generators = descriptor.generators().unwrap_or_else(|| elements.clone());
        Ok(Self::from_sorted(descriptor.clone(), generators, elements))
    }

    /// The subgroup generated by `spec` inside `ambient`.
    pub fn subgroup(ambient: &GroupDescriptor, spec: &SubgroupSpec, limit: usize) -> Result<Self> {
        spec.validate(ambient)?;
        let elements = closure(ambient, &spec.generators, limit)?;
        Ok(Self::from_sorted(ambient.clone(), spec.generators.clone(), elements))
    }

    fn from_sorted(descriptor: GroupDescriptor, generators: Vec<Element>, elements: Vec<Element>) -> Self {
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        FiniteGroup { descriptor, generators, elements, index }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Sorted by canonical payload.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.index.contains_key(e)
    }

    pub fn identity(&self) -> Element {
        self.descriptor.identity()
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.descriptor.mul(a, b)
    }

    pub fn inv(&self, a: &Element) -> Element {
        self.descriptor.inv(a)
    }

    pub fn conj(&self, g: &Element, by: &Element) -> Element {
        self.descriptor.conj(g, by)
    }

    pub fn comm(&self, a: &Element, b: &Element) -> Element {
        self.descriptor.comm(a, b)
    }

    /// The smallest set containing `base ∪ base⁻¹` and closed under
    /// conjugation by every element of this group. Sorted.
    pub fn conjugacy_closure(&self, base: &[Element]) -> Vec<Element> {
        let mut seeds: Vec<Element> = base.iter().flat_map(|b| [b.clone(), self.inv(b)]).collect();
        par::sort_dedup(&mut seeds);
        let mut out: Vec<Element> = par::flat_map(&seeds, |s| {
            self.elements.iter().map(|g| self.conj(s, g)).collect::<Vec<_>>()
        });
        par::sort_dedup(&mut out);
        out
    }

    /// The subgroup generated by all commutators, as the normal closure of
    /// the commutators of the generators.
    pub fn derived_subgroup(&self, limit: usize) -> Result<FiniteGroup> {
        let gens = &self.generators;
        let mut normal_gens: Vec<Element> = Vec::new();
        for a in gens {
            for b in gens {
                let c = self.comm(a, b);
                if !c.is_identity() {
                    normal_gens.push(c);
                }
            }
        }
        par::sort_dedup(&mut normal_gens);
        loop {
            let sub = closure(&self.descriptor, &normal_gens, limit)?;
            let members: HashSet<&Element> = sub.iter().collect();
            let mut fresh: Vec<Element> = normal_gens
                .iter()
                .flat_map(|n| gens.iter().map(move |g| (n, g)))
                .map(|(n, g)| self.conj(n, g))
                .filter(|c| !members.contains(c))
                .collect();
            if fresh.is_empty() {
                let generators = if normal_gens.is_empty() { vec![self.identity()] } else { normal_gens };
                return Ok(Self::from_sorted(self.descriptor.clone(), generators, sub));
            }
            normal_gens.append(&mut fresh);
            par::sort_dedup(&mut normal_gens);
        }
    }

    /// Whether every pair of generators commutes.
    pub fn is_abelian(&self) -> bool {
        SubgroupSpec::new(self.generators.clone()).is_abelian(&self.descriptor)
    }
}

/// The subgroup generated by `gens`: BFS from the identity by right
/// multiplication. Sorted. Fails once the closure exceeds `limit`.
pub fn closure(d: &GroupDescriptor, gens: &[Element], limit: usize) -> Result<Vec<Element>> {
    let id = d.identity();
    let mut seen: HashSet<Element> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next: Vec<Element> = par::flat_map(&frontier, |x| gens.iter().map(|g| d.mul(x, g)).collect());
        par::sort_dedup(&mut next);
        next.retain(|e| !seen.contains(e));
        if seen.len() + next.len() > limit {
            return Err(Error::GuardExceeded { limit });
        }
        seen.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out: Vec<Element> = seen.into_iter().collect();
    par::sort_dedup(&mut out);
    Ok(out)
}

impl GroupDescriptor {
    /// Subgroup generated by `spec`.
    pub fn subgroup_closure(&self, spec: &SubgroupSpec, limit: usize) -> Result<Vec<Element>> {
        spec.validate(self)?;
        closure(self, &spec.generators, limit)
    }

    /// Conjugacy closure of `base ∪ base⁻¹` in a finite group.
    pub fn conjugacy_closure(&self, base: &[Element], limit: usize) -> Result<Vec<Element>> {
        Ok(FiniteGroup::enumerate(self, limit)?.conjugacy_closure(base))
    }

    pub fn derived_subgroup(&self, limit: usize) -> Result<Vec<Element>> {
        Ok(FiniteGroup::enumerate(self, limit)?.derived_subgroup(limit)?.elements)
    }

    /// `|G/G'|`: by enumeration for finite groups within `limit`, otherwise
    /// from the family's analytic value.
    pub fn abelianization_order(&self, limit: usize) -> Result<AbelianizationOrder> {
        match self.order() {
            Some(order) if order <= limit as u128 => {
                let g = FiniteGroup::enumerate(self, limit)?;
                let derived = g.derived_subgroup(limit)?;
                Ok(AbelianizationOrder::Finite((g.len() / derived.len()) as u128))
            }
            _ => Ok(self.abelianization_analytic()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::enumerate::DEFAULT_LIMIT;

    fn d(s: &str) -> GroupDescriptor {
        s.parse().unwrap()
    }

    fn brute_force_derived(g: &FiniteGroup) -> Vec<Element> {
        let comms: Vec<Element> = g
            .elements()
            .iter()
            .flat_map(|a| g.elements().iter().map(move |b| g.comm(a, b)))
            .collect();
        closure(g.descriptor(), &comms, DEFAULT_LIMIT).unwrap()
    }

    #[test]
    fn closures() {
        let s3 = d("sn:3");
        let t = s3.parse_element("(1 2)").unwrap();
        assert_eq!(s3.subgroup_closure(&SubgroupSpec::new(vec![t]), 10).unwrap().len(), 2);
        let s6 = d("sn:6");
        let gens = s6.parse_elements("(1 2), (1 2 3)").unwrap();
        assert_eq!(s6.subgroup_closure(&SubgroupSpec::new(gens), 1000).unwrap().len(), 6);
        let sl = d("slp:2:5");
        let gens = vec![sl.elementary(0, 1, 1).unwrap(), sl.elementary(1, 0, 1).unwrap()];
        assert_eq!(sl.subgroup_closure(&SubgroupSpec::new(gens), 1000).unwrap().len(), 120);
        let free = d("free:1");
        let a = free.parse_element("a").unwrap();
        assert!(matches!(
            free.subgroup_closure(&SubgroupSpec::new(vec![a]), 50),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn conjugacy_closures() {
        let s4 = d("sn:4");
        let id = s4.identity();
        assert_eq!(s4.conjugacy_closure(std::slice::from_ref(&id), 100).unwrap(), vec![id]);
        let t = s4.parse_element("(1 2)").unwrap();
        assert_eq!(s4.conjugacy_closure(&[t], 100).unwrap().len(), 6);
        let a5 = d("an:5");
        let c = a5.parse_element("(1 2 3 4 5)").unwrap();
        let closed = a5.conjugacy_closure(std::slice::from_ref(&c), 100).unwrap();
        // a 5-cycle is conjugate to its inverse in A_5, so only its own class
        // of 12 appears; the class of c^2 stays outside
        let all = a5.enumerate_elements(100).unwrap();
        let mut brute: Vec<Element> = all
            .iter()
            .flat_map(|g| [a5.conjugate_of(&c, g).unwrap(), a5.conjugate_of(&a5.invert(&c).unwrap(), g).unwrap()])
            .collect();
        brute.sort();
        brute.dedup();
        assert_eq!(closed, brute);
        assert_eq!(closed.len(), 12);
        assert!(!closed.contains(&a5.power(&c, 2).unwrap()));
    }

    #[test]
    fn derived_subgroups_match_brute_force() {
        for s in ["sn:3", "sn:4", "an:4", "an:5", "bar:sn:3", "wreath:sn:3:zn:2", "slp:2:3", "product:sn:2,sn:3"] {
            let g = FiniteGroup::enumerate(&d(s), DEFAULT_LIMIT).unwrap();
            assert_eq!(g.derived_subgroup(DEFAULT_LIMIT).unwrap().elements(), brute_force_derived(&g), "{s}");
        }
        assert_eq!(d("sn:4").derived_subgroup(100).unwrap().len(), 12);
        assert_eq!(d("an:5").derived_subgroup(100).unwrap().len(), 60);
        assert_eq!(d("product:sn:2,sn:2").derived_subgroup(100).unwrap().len(), 1);
    }

    #[test]
    fn abelianization_enumerated_agrees_with_family_rule() {
        for s in [
            "sn:1", "sn:2", "sn:4", "an:3", "an:4", "an:5", "slp:2:2", "slp:2:3", "slp:2:5",
            "bar:sn:3", "bar:an:4", "wreath:sn:3:zn:2", "wreath:an:3:zn:3", "product:sn:3,an:4",
        ] {
            let g = d(s);
            assert_eq!(g.abelianization_order(DEFAULT_LIMIT).unwrap(), g.abelianization_analytic(), "{s}");
        }
        assert_eq!(d("an:5").abelianization_order(100).unwrap(), AbelianizationOrder::Finite(1));
        assert_eq!(d("aff-z").abelianization_order(100).unwrap(), AbelianizationOrder::Finite(4));
        assert_eq!(d("free:2").abelianization_order(100).unwrap(), AbelianizationOrder::Infinite);
    }
}
