use super::element::{Element, WreathElement};
use super::perm::Perm;
use super::word::Word;
use super::GroupDescriptor;
use crate::error::{Error, Result};
use crate::par;
use std::collections::BTreeMap;

/// Default enumeration guard.
pub const DEFAULT_LIMIT: usize = 10_000_000;

impl GroupDescriptor {
    /// A finite generating set, when the family has one.
    pub fn generators(&self) -> Option<Vec<Element>> {
        use GroupDescriptor::*;
        Some(match self {
            Symmetric(n) => {
                if *n < 2 {
                    vec![]
                } else {
                    let cyc: Vec<usize> = (0..*n).collect();
                    vec![
                        Element::Perm(Perm::from_cycles(*n, &[vec![0, 1]])?),
                        Element::Perm(Perm::from_cycles(*n, &[cyc])?),
                    ]
                }
            }
            Alternating(n) => (2..*n)
                .map(|k| Element::Perm(Perm::from_cycles(*n, &[vec![0, 1, k]]).expect("valid cycle")))
                .collect(),
            Free(r) => (1..=*r as i32).map(|k| Element::Word(Word::generator(k))).collect(),
            WreathZ(b) | WreathZn(b, _) => {
                let mut gens: Vec<Element> =
                    b.generators()?.iter().map(|g| self.wreath_basis(g, 0).expect("base element")).collect();
                gens.push(self.wreath_shift().expect("wreath family"));
                gens
            }
            AffZ => vec![Element::aff(1, false), Element::aff(0, true)],
            Bar(g) => {
                let mut gens: Vec<Element> =
                    g.generators()?.into_iter().map(|x| Element::bar(x, g.identity(), false)).collect();
                gens.push(Element::bar(g.identity(), g.identity(), true));
                gens
            }
            Z2Infinity => return None,
            SlZ(n) | SlMod(n, _) => {
                let mut gens = Vec::new();
                for i in 0..*n {
                    for j in (0..*n).filter(|&j| j != i) {
                        gens.push(self.elementary(i, j, 1).expect("valid indices"));
                    }
                }
                gens
            }
            Product(ds) => {
                let mut gens = Vec::new();
                for (k, d) in ds.iter().enumerate() {
                    for g in d.generators()? {
                        let mut comps: Vec<Element> = ds.iter().map(|d| d.identity()).collect();
                        comps[k] = g;
                        gens.push(Element::Product(comps));
                    }
                }
                gens
            }
        })
    }

    /// Every element exactly once, sorted by canonical payload.
    pub fn enumerate_elements(&self, limit: usize) -> Result<Vec<Element>> {
        let order = self.order().ok_or_else(|| Error::InfiniteGroup(self.to_string()))?;
        if order > limit as u128 {
            return Err(Error::GuardExceeded { limit });
        }
        let mut out = self.enumerate_unsorted(limit)?;
        par::sort_dedup(&mut out);
        debug_assert_eq!(out.len() as u128, order);
        Ok(out)
    }

    fn enumerate_unsorted(&self, limit: usize) -> Result<Vec<Element>> {
        use GroupDescriptor::*;
        Ok(match self {
            Symmetric(n) => all_perms(*n).into_iter().map(Element::Perm).collect(),
            Alternating(n) => all_perms(*n).into_iter().filter(Perm::is_even).map(Element::Perm).collect(),
            WreathZn(b, n) => {
                let base = b.enumerate_elements(limit)?;
                let mut maps: Vec<BTreeMap<i64, Element>> = vec![BTreeMap::new()];
                for i in 0..*n as i64 {
                    let mut next = Vec::with_capacity(maps.len() * base.len());
                    for m in &maps {
                        for g in &base {
                            let mut m2 = m.clone();
                            if !g.is_identity() {
                                m2.insert(i, g.clone());
                            }
                            next.push(m2);
                        }
                    }
                    maps = next;
                }
                let mut out = Vec::with_capacity(maps.len() * n);
                for m in maps {
                    for shift in 0..*n as i64 {
                        out.push(Element::Wreath(WreathElement { support: m.clone(), shift }));
                    }
                }
                out
            }
            Bar(g) => {
                let base = g.enumerate_elements(limit)?;
                let mut out = Vec::with_capacity(base.len() * base.len() * 2);
                for a in &base {
                    for b in &base {
                        for flip in [false, true] {
                            out.push(Element::bar(a.clone(), b.clone(), flip));
                        }
                    }
                }
                out
            }
            SlMod(..) => {
                let gens = self.generators().expect("finite generating set");
                super::finite::closure(self, &gens, limit)?
            }
            Product(ds) => {
                let mut out: Vec<Vec<Element>> = vec![Vec::new()];
                for d in ds {
                    let comp = d.enumerate_elements(limit)?;
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            comp.iter().map(move |c| {
                                let mut p = prefix.clone();
                                p.push(c.clone());
                                p
                            })
                        })
                        .collect();
                }
                out.into_iter().map(Element::Product).collect()
            }
            _ => return Err(Error::InfiniteGroup(self.to_string())),
        })
    }
}

/// All permutations of `n` points in lexicographic order of image arrays.
fn all_perms(n: usize) -> Vec<Perm> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push(Perm::from_images(cur.clone()).expect("bijection"));
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}
