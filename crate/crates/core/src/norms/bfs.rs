use super::{Norm, NormTable};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, GroupDescriptor};
use crate::par;
use crate::rational::{int, Rational};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Pairs `(a, b)` examined when listing all simple commutators.
const COMMUTATOR_PAIR_LIMIT: usize = 60_000_000;

/// Breadth-first distances from the identity in the graph with edges
/// `x → x·s`, `s ∈ steps`, over the elements of `domain`.
///
/// Returns per-element distance and the parent `(element index, step
/// index)`, choosing the least parent so the result is thread-independent.
/// Per-element distance and `(parent, step)` indices.
type BfsTree = (Vec<Option<u32>>, Vec<Option<(usize, usize)>>);

fn bfs(domain: &FiniteGroup, steps: &[Element]) -> BfsTree {
    let n = domain.len();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    let start = domain.index_of(&domain.identity()).expect("identity in domain");
    dist[start] = Some(0);
    let mut frontier = vec![start];
    let mut level = 0u32;
    while !frontier.is_empty() {
        level += 1;
        let dist_ref = &dist;
        let mut hits: Vec<(usize, usize, usize)> = par::flat_map(&frontier, |&x| {
            let xe = &domain.elements()[x];
            steps
                .iter()
                .enumerate()
                .filter_map(|(si, s)| {
                    let y = domain.index_of(&domain.mul(xe, s))?;
                    dist_ref[y].is_none().then_some((y, x, si))
                })
                .collect()
        });
        par::sort_dedup(&mut hits);
        frontier.clear();
        for (y, x, si) in hits {
            if dist[y].is_none() {
                dist[y] = Some(level);
                parent[y] = Some((x, si));
                frontier.push(y);
            }
        }
    }
    (dist, parent)
}

/// `q_K` on a finite group: word length with respect to the conjugacy
/// closure of `K ∪ K⁻¹`.
pub fn qk_norm_in(group: &FiniteGroup, k: &[Element]) -> Result<NormTable> {
    if k.is_empty() {
        return Err(Error::InvalidInput("K must be non-empty".into()));
    }
    if let Some(bad) = k.iter().find(|g| !group.contains(g)) {
        return Err(Error::InvalidInput(format!("`{bad}` is not in {}", group.descriptor())));
    }
    let steps = group.conjugacy_closure(k);
    let (dist, _) = bfs(group, &steps);
    let unreached = dist.iter().filter(|d| d.is_none()).count();
    if unreached > 0 {
        return Err(Error::NotCGenerating { unreached });
    }
    let values = group.elements().iter().cloned().zip(dist).map(|(g, d)| (g, int(d.unwrap() as i64))).collect();
    Ok(NormTable::new(group.descriptor().clone(), "qk", values).with_generator_set(k))
}

pub fn qk_norm(d: &GroupDescriptor, k: &[Element], limit: usize) -> Result<NormTable> {
    qk_norm_in(&FiniteGroup::enumerate(d, limit)?, k)
}

/// Commutator length on the derived subgroup, with witnesses.
#[derive(Clone, Debug)]
pub struct ClTable {
    pub table: NormTable,
    /// Every simple commutator with its least witness pair `(a, b)`.
    commutators: BTreeMap<Element, (Element, Element)>,
    /// `x ↦ (y, c)` with `x = y·c` and `cl(y) = cl(x) − 1`.
    parent: HashMap<Element, (Element, Element)>,
}

impl ClTable {
    /// Commutator length diameter.
    pub fn cld(&self) -> Rational {
        self.table.diameter()
    }

    pub fn get(&self, g: &Element) -> Option<Rational> {
        self.table.get(g)
    }

    pub fn commutator_witness(&self, c: &Element) -> Option<&(Element, Element)> {
        self.commutators.get(c)
    }

    pub fn commutator_count(&self) -> usize {
        self.commutators.len()
    }

    /// Pairs `(aᵢ, bᵢ)` of minimal length with `x = ∏ [aᵢ, bᵢ]`.
    pub fn factorization(&self, x: &Element) -> Option<Vec<(Element, Element)>> {
        self.table.get(x)?;
        let mut out = Vec::new();
        let mut cur = x.clone();
        while let Some((prev, c)) = self.parent.get(&cur) {
            out.push(self.commutators[c].clone());
            cur = prev.clone();
        }
        out.reverse();
        Some(out)
    }
}

/// Commutator length on `G'` of a finite group.
pub fn commutator_length_in(group: &FiniteGroup, limit: usize) -> Result<ClTable> {
    let n = group.len();
    if n.saturating_mul(n) > COMMUTATOR_PAIR_LIMIT {
        return Err(Error::GuardExceeded { limit: COMMUTATOR_PAIR_LIMIT });
    }
    let elems = group.elements();
    let mut all: Vec<(Element, usize, usize)> = par::map_range(0..n, |i| {
        let mut row: Vec<(Element, usize, usize)> =
            (0..n).map(|j| (group.comm(&elems[i], &elems[j]), i, j)).collect();
        row.sort();
        row.dedup_by(|a, b| a.0 == b.0);
        row
    })
    .into_iter()
    .flatten()
    .collect();
    par::sort_dedup(&mut all);
    let mut commutators = BTreeMap::new();
    for (c, i, j) in all {
        commutators.entry(c).or_insert_with(|| (elems[i].clone(), elems[j].clone()));
    }

    let derived = group.derived_subgroup(limit)?;
    let steps: Vec<Element> = commutators.keys().cloned().collect();
    let (dist, parent_idx) = bfs(&derived, &steps);
    debug_assert!(dist.iter().all(|d| d.is_some()));
    let delems = derived.elements();
    let values = delems.iter().cloned().zip(&dist).map(|(g, d)| (g, int(d.unwrap_or(0) as i64))).collect();
    let parent = parent_idx
        .iter()
        .enumerate()
        .filter_map(|(y, p)| p.map(|(x, si)| (delems[y].clone(), (delems[x].clone(), steps[si].clone()))))
        .collect();
    let table = NormTable::new(group.descriptor().clone(), "cl", values);
    Ok(ClTable { table, commutators, parent })
}

pub fn commutator_length(d: &GroupDescriptor, limit: usize) -> Result<ClTable> {
    commutator_length_in(&FiniteGroup::enumerate(d, limit)?, limit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominationReport {
    pub norm_name: String,
    #[serde(with = "crate::rational::serde_p_q")]
    pub lambda: Rational,
    pub witness_checked: usize,
    pub passed: bool,
    /// First element (canonical order) with `q(g) > λ·q_K(g)`.
    pub violation: Option<String>,
}

/// Find `λ = max q` over the conjugacy closure of `K` and check
/// `q ≤ λ·q_K` on the whole group.
pub fn check_extremal_domination<N: Norm>(group: &FiniteGroup, q: &N, k: &[Element]) -> Result<DominationReport> {
    let qk = qk_norm_in(group, k)?;
    let closure = group.conjugacy_closure(k);
    let lambda = par::map(&closure, |c| q.norm(c))
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or_else(|| int(0));
    let elems = group.elements();
    let ok = par::map(elems, |g| Ok::<_, Error>(q.norm(g)? <= lambda * qk.norm(g)?))
        .into_iter()
        .collect::<Result<Vec<bool>>>()?;
    let violation = ok.iter().position(|b| !b).map(|i| elems[i].to_string());
    Ok(DominationReport {
        norm_name: q.name(),
        lambda,
        witness_checked: elems.len(),
        passed: violation.is_none(),
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_LIMIT;
    use crate::norms::{verify_norm_axioms, SupportNorm, TrivialNorm};
    use std::collections::HashSet;

    fn group(s: &str) -> FiniteGroup {
        FiniteGroup::enumerate(&s.parse().unwrap(), DEFAULT_LIMIT).unwrap()
    }

    /// Level sets by iterated set products `C, C·C, …`.
    fn set_product_oracle(g: &FiniteGroup, c: &[Element]) -> HashMap<Element, i64> {
        let mut out = HashMap::from([(g.identity(), 0)]);
        let mut power: HashSet<Element> = HashSet::from([g.identity()]);
        let mut n = 0;
        while out.len() < g.len() {
            n += 1;
            power = power.iter().flat_map(|x| c.iter().map(move |s| (x, s))).map(|(x, s)| g.mul(x, s)).collect();
            for x in &power {
                out.entry(x.clone()).or_insert(n);
            }
            assert!(n < 100);
        }
        out
    }

    #[test]
    fn qk_on_a5_matches_set_products() {
        let g = group("an:5");
        let k = vec![g.descriptor().parse_element("(1 2 3 4 5)").unwrap()];
        let t = qk_norm_in(&g, &k).unwrap();
        let oracle = set_product_oracle(&g, &g.conjugacy_closure(&k));
        for (e, v) in t.iter() {
            assert_eq!(*v, int(oracle[e]), "{e}");
        }
        assert_eq!(t.get(&g.identity()), Some(int(0)));
        assert_eq!(t.diameter(), int(3));
        assert!(verify_norm_axioms(&t).passed);
    }

    #[test]
    fn qk_transpositions_in_s5() {
        let g = group("sn:5");
        let k = vec![g.descriptor().parse_element("(1 2)").unwrap()];
        let t = qk_norm_in(&g, &k).unwrap();
        for (e, v) in t.iter() {
            let p = e.as_perm().unwrap();
            assert_eq!(*v, int(5 - p.cycle_count() as i64), "{e}");
        }
    }

    #[test]
    fn qk_rejects_non_c_generating() {
        let g = group("sn:4");
        let k = vec![g.descriptor().parse_element("(1 2 3)").unwrap()];
        assert_eq!(qk_norm_in(&g, &k), Err(Error::NotCGenerating { unreached: 12 }));
    }

    #[test]
    fn cl_on_a5_is_one() {
        let cl = commutator_length(&"an:5".parse().unwrap(), DEFAULT_LIMIT).unwrap();
        assert_eq!(cl.table.len(), 60);
        assert_eq!(cl.cld(), int(1));
        assert_eq!(cl.commutator_count(), 60);
    }

    #[test]
    fn cl_factorizations_multiply_back() {
        let g = group("sn:4");
        let cl = commutator_length_in(&g, DEFAULT_LIMIT).unwrap();
        assert_eq!(cl.table.len(), 12);
        let oracle = set_product_oracle(
            &FiniteGroup::subgroup(g.descriptor(), &crate::group::SubgroupSpec::new(
                cl.table.elements().cloned().collect()), DEFAULT_LIMIT).unwrap(),
            &cl.commutators.keys().cloned().collect::<Vec<_>>(),
        );
        for (x, v) in cl.table.iter() {
            assert_eq!(*v, int(oracle[x]));
            let f = cl.factorization(x).unwrap();
            assert_eq!(int(f.len() as i64), *v);
            let prod = f.iter().fold(g.identity(), |acc, (a, b)| g.mul(&acc, &g.comm(a, b)));
            assert_eq!(&prod, x);
        }
    }

    #[test]
    fn domination_lambda() {
        let g = group("an:5");
        let k = vec![g.descriptor().parse_element("(1 2 3)").unwrap()];
        let r = check_extremal_domination(&g, &SupportNorm, &k).unwrap();
        assert_eq!(r.lambda, int(3));
        assert!(r.passed);
        let r = check_extremal_domination(&g, &TrivialNorm, &k).unwrap();
        assert_eq!(r.lambda, int(1));
        assert!(r.passed);
        let qk = qk_norm_in(&g, &k).unwrap();
        assert_eq!(check_extremal_domination(&g, &qk, &k).unwrap().lambda, int(1));
    }
}
