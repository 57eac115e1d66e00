//! Element arithmetic on top of [`GroupDescriptor`].

use super::element::{AffElement, BarElement, BitWord, Element, WreathElement};
use super::matrix::{IntMatrix, ModMatrix};
use super::perm::Perm;
use super::word::Word;
use super::GroupDescriptor;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

impl GroupDescriptor {
    pub fn identity(&self) -> Element {
        use GroupDescriptor::*;
        match self {
            Symmetric(n) | Alternating(n) => Element::Perm(Perm::identity(*n)),
            Free(_) => Element::Word(Word::identity()),
            WreathZ(_) | WreathZn(..) => Element::Wreath(WreathElement { support: BTreeMap::new(), shift: 0 }),
            AffZ => Element::aff(0, false),
            Bar(g) => Element::bar(g.identity(), g.identity(), false),
            Z2Infinity => Element::Bits(BitWord::default()),
            SlZ(n) => Element::IntMatrix(IntMatrix::identity(*n)),
            SlMod(n, _) => Element::ModMatrix(ModMatrix::identity(*n)),
            Product(ds) => Element::Product(ds.iter().map(|d| d.identity()).collect()),
        }
    }

    /// Whether `e` is a canonical element of this group. Checks payload
    /// shape, canonical form, parity for `A_n` and determinant for `SL`.
    pub fn contains(&self, e: &Element) -> bool {
        use GroupDescriptor::*;
        match (self, e) {
            (Symmetric(n), Element::Perm(p)) => p.degree() == *n,
            (Alternating(n), Element::Perm(p)) => p.degree() == *n && p.is_even(),
            (Free(r), Element::Word(w)) => w.is_reduced() && w.max_generator() as usize <= *r,
            (WreathZ(b), Element::Wreath(w)) => w
                .support
                .values()
                .all(|g| !g.is_identity() && b.contains(g)),
            (WreathZn(b, n), Element::Wreath(w)) => {
                let n = *n as i64;
                (0..n).contains(&w.shift)
                    && w.support.iter().all(|(i, g)| (0..n).contains(i) && !g.is_identity() && b.contains(g))
            }
            (AffZ, Element::Aff(_)) => true,
            (Bar(g), Element::Bar(b)) => g.contains(&b.first) && g.contains(&b.second),
            (Z2Infinity, Element::Bits(b)) => b.is_canonical(),
            (SlZ(n), Element::IntMatrix(m)) => m.dim() == *n && m.determinant().is_one(),
            (SlMod(n, p), Element::ModMatrix(m)) => m.dim() == *n && m.is_reduced(*p) && m.determinant(*p) == 1,
            (Product(ds), Element::Product(es)) => {
                ds.len() == es.len() && ds.iter().zip(es).all(|(d, e)| d.contains(e))
            }
            _ => false,
        }
    }

    /// Cheap payload-shape check used on every arithmetic call.
    fn fits(&self, e: &Element) -> bool {
        use GroupDescriptor::*;
        match (self, e) {
            (Symmetric(n) | Alternating(n), Element::Perm(p)) => p.degree() == *n,
            (Free(_), Element::Word(_)) => true,
            (WreathZ(_) | WreathZn(..), Element::Wreath(_)) => true,
            (AffZ, Element::Aff(_)) => true,
            (Bar(g), Element::Bar(b)) => g.fits(&b.first) && g.fits(&b.second),
            (Z2Infinity, Element::Bits(_)) => true,
            (SlZ(n), Element::IntMatrix(m)) => m.dim() == *n,
            (SlMod(n, _), Element::ModMatrix(m)) => m.dim() == *n,
            (Product(ds), Element::Product(es)) => ds.len() == es.len() && ds.iter().zip(es).all(|(d, e)| d.fits(e)),
            _ => false,
        }
    }

    fn mismatch(&self) -> Error {
        Error::DescriptorMismatch { descriptor: self.to_string() }
    }

    fn ensure(&self, e: &Element) -> Result<()> {
        if self.fits(e) {
            Ok(())
        } else {
            Err(self.mismatch())
        }
    }

    /// Canonical form of `ab`.
    pub fn compose(&self, a: &Element, b: &Element) -> Result<Element> {
        self.ensure(a)?;
        self.ensure(b)?;
        Ok(self.mul(a, b))
    }

    pub fn invert(&self, a: &Element) -> Result<Element> {
        self.ensure(a)?;
        Ok(self.inv(a))
    }

    /// `by · g · by⁻¹`.
    pub fn conjugate_of(&self, g: &Element, by: &Element) -> Result<Element> {
        self.ensure(g)?;
        self.ensure(by)?;
        Ok(self.conj(g, by))
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator_of(&self, a: &Element, b: &Element) -> Result<Element> {
        self.ensure(a)?;
        self.ensure(b)?;
        Ok(self.comm(a, b))
    }

    /// `gⁿ` for any integer `n`, by repeated squaring.
    pub fn power(&self, g: &Element, n: i64) -> Result<Element> {
        self.ensure(g)?;
        Ok(self.pow(g, n))
    }

    /// Product of a sequence, left to right.
    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Result<Element> {
        items.into_iter().try_fold(self.identity(), |acc, x| self.compose(&acc, x))
    }

    pub(crate) fn conj(&self, g: &Element, by: &Element) -> Element {
        self.mul(&self.mul(by, g), &self.inv(by))
    }

    pub(crate) fn comm(&self, a: &Element, b: &Element) -> Element {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&ab, &self.inv(&ba))
    }

    pub(crate) fn pow(&self, g: &Element, n: i64) -> Element {
        let base = if n < 0 { self.inv(g) } else { g.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// Multiplication without the shape check; callers guarantee membership.
    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        use GroupDescriptor::*;
        match (self, a, b) {
            (Symmetric(_) | Alternating(_), Element::Perm(x), Element::Perm(y)) => Element::Perm(x.compose(y)),
            (Free(_), Element::Word(x), Element::Word(y)) => Element::Word(x.concat(y)),
            (WreathZ(base), Element::Wreath(x), Element::Wreath(y)) => Element::Wreath(wreath_mul(base, None, x, y)),
            (WreathZn(base, n), Element::Wreath(x), Element::Wreath(y)) => {
                Element::Wreath(wreath_mul(base, Some(*n as i64), x, y))
            }
            (AffZ, Element::Aff(x), Element::Aff(y)) => Element::Aff(AffElement {
                a: if x.flip { x.a - y.a } else { x.a + y.a },
                flip: x.flip ^ y.flip,
            }),
            (Bar(g), Element::Bar(x), Element::Bar(y)) => {
                let (first, second) = if x.flip {
                    (g.mul(&x.first, &y.second), g.mul(&x.second, &y.first))
                } else {
                    (g.mul(&x.first, &y.first), g.mul(&x.second, &y.second))
                };
                Element::Bar(Box::new(BarElement { first, second, flip: x.flip ^ y.flip }))
            }
            (Z2Infinity, Element::Bits(x), Element::Bits(y)) => Element::Bits(x.xor(y)),
            (SlZ(_), Element::IntMatrix(x), Element::IntMatrix(y)) => Element::IntMatrix(x.mul(y)),
            (SlMod(_, p), Element::ModMatrix(x), Element::ModMatrix(y)) => Element::ModMatrix(x.mul(y, *p)),
            (Product(ds), Element::Product(xs), Element::Product(ys)) => {
                Element::Product(ds.iter().zip(xs.iter().zip(ys)).map(|(d, (x, y))| d.mul(x, y)).collect())
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub(crate) fn inv(&self, a: &Element) -> Element {
        use GroupDescriptor::*;
        match (self, a) {
            (Symmetric(_) | Alternating(_), Element::Perm(x)) => Element::Perm(x.inverse()),
            (Free(_), Element::Word(x)) => Element::Word(x.inverse()),
            (WreathZ(base), Element::Wreath(x)) => Element::Wreath(wreath_inv(base, None, x)),
            (WreathZn(base, n), Element::Wreath(x)) => Element::Wreath(wreath_inv(base, Some(*n as i64), x)),
            (AffZ, Element::Aff(x)) => Element::Aff(if x.flip { *x } else { AffElement { a: -x.a, flip: false } }),
            (Bar(g), Element::Bar(x)) => {
                let (first, second) = if x.flip {
                    (g.inv(&x.second), g.inv(&x.first))
                } else {
                    (g.inv(&x.first), g.inv(&x.second))
                };
                Element::Bar(Box::new(BarElement { first, second, flip: x.flip }))
            }
            (Z2Infinity, Element::Bits(x)) => Element::Bits(x.clone()),
            (SlZ(_), Element::IntMatrix(x)) => Element::IntMatrix(x.adjugate()),
            (SlMod(_, p), Element::ModMatrix(x)) => Element::ModMatrix(x.inverse(*p)),
            (Product(ds), Element::Product(xs)) => Element::Product(ds.iter().zip(xs).map(|(d, x)| d.inv(x)).collect()),
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// `E_ij^p` in `SL(n, Z)` (0-based indices).
    pub fn elementary(&self, i: usize, j: usize, p: impl Into<BigInt>) -> Result<Element> {
        match self {
            GroupDescriptor::SlZ(n) if i != j && i < *n && j < *n => {
                Ok(Element::IntMatrix(IntMatrix::elementary(*n, i, j, p)))
            }
            GroupDescriptor::SlMod(n, q) if i != j && i < *n && j < *n => {
                let p: BigInt = p.into();
                let r = (p % BigInt::from(*q) + BigInt::from(*q)) % BigInt::from(*q);
                let v: i64 = r.try_into().expect("residue fits");
                Ok(Element::ModMatrix(ModMatrix::elementary(*n, i, j, v, *q)))
            }
            _ => Err(Error::Unsupported(format!("elementary matrix ({i}, {j}) in {self}"))),
        }
    }

    /// Base element `h` placed at wreath coordinate `i`.
    pub fn wreath_basis(&self, h: &Element, i: i64) -> Result<Element> {
        let (base, modulus) = match self {
            GroupDescriptor::WreathZ(b) => (b, None),
            GroupDescriptor::WreathZn(b, n) => (b, Some(*n as i64)),
            _ => return Err(Error::Unsupported(format!("wreath coordinate in {self}"))),
        };
        if !base.fits(h) {
            return Err(base.mismatch());
        }
        let mut support = BTreeMap::new();
        if !h.is_identity() {
            support.insert(modulus.map_or(i, |n| i.rem_euclid(n)), h.clone());
        }
        Ok(Element::Wreath(WreathElement { support, shift: 0 }))
    }

    /// The generating shift `F = (1, 1)` of a wreath product.
    pub fn wreath_shift(&self) -> Result<Element> {
        match self {
            GroupDescriptor::WreathZ(_) | GroupDescriptor::WreathZn(..) => {
                Ok(Element::Wreath(WreathElement { support: BTreeMap::new(), shift: 1 }))
            }
            _ => Err(Error::Unsupported(format!("wreath shift in {self}"))),
        }
    }
}

fn wrap(i: i64, modulus: Option<i64>) -> i64 {
    modulus.map_or(i, |n| i.rem_euclid(n))
}

/// `(f, s)(g, t) = (f · σ_s(g), s + t)` with `σ_s(g)(i) = g(i − s)`.
fn wreath_mul(base: &GroupDescriptor, modulus: Option<i64>, x: &WreathElement, y: &WreathElement) -> WreathElement {
    let mut support = x.support.clone();
    for (i, g) in &y.support {
        let j = wrap(i + x.shift, modulus);
        match support.remove(&j) {
            Some(f) => {
                let v = base.mul(&f, g);
                if !v.is_identity() {
                    support.insert(j, v);
                }
            }
            None => {
                support.insert(j, g.clone());
            }
        }
    }
    WreathElement { support, shift: wrap(x.shift + y.shift, modulus) }
}

/// `(f, s)⁻¹ = (σ_{-s}(f⁻¹), −s)`.
fn wreath_inv(base: &GroupDescriptor, modulus: Option<i64>, x: &WreathElement) -> WreathElement {
    let support = x
        .support
        .iter()
        .map(|(i, g)| (wrap(i - x.shift, modulus), base.inv(g)))
        .collect();
    WreathElement { support, shift: wrap(-x.shift, modulus) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> GroupDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn aff_z_normal_form() {
        let g = d("aff-z");
        let zt = Element::aff(1, false);
        let zt = g.compose(&zt, &Element::aff(0, true)).unwrap();
        assert_eq!(g.compose(&zt, &zt).unwrap(), g.identity());
        let t = Element::aff(0, true);
        let z = Element::aff(1, false);
        assert_eq!(g.commutator_of(&t, &z).unwrap(), Element::aff(-2, false));
    }

    #[test]
    fn bar_mixed_product() {
        let g = d("bar:sn:3");
        let s3 = d("sn:3");
        let p = |c: &[Vec<usize>]| Element::Perm(Perm::from_cycles(3, c).unwrap());
        let (h1, h2) = (p(&[vec![0, 1]]), p(&[vec![0, 1, 2]]));
        let (f1, f2) = (p(&[vec![1, 2]]), p(&[vec![0, 2]]));
        let h = Element::bar(h1.clone(), h2.clone(), true);
        let f = Element::bar(f1.clone(), f2.clone(), false);
        let expect = Element::bar(s3.mul(&h1, &f2), s3.mul(&h2, &f1), true);
        assert_eq!(g.compose(&h, &f).unwrap(), expect);
    }

    #[test]
    fn mismatch_is_reported() {
        let g = d("sn:3");
        let e = d("sn:4").identity();
        assert!(matches!(g.compose(&g.identity(), &e), Err(Error::DescriptorMismatch { .. })));
        assert!(!g.contains(&Element::aff(0, false)));
    }

    #[test]
    fn power_handles_negative_exponents() {
        let g = d("free:2");
        let w = Element::Word(Word::reduce([1, 2]).unwrap());
        let w3 = g.power(&w, 3).unwrap();
        assert_eq!(w3.as_word().unwrap().letters(), &[1, 2, 1, 2, 1, 2]);
        assert_eq!(g.compose(&w3, &g.power(&w, -3).unwrap()).unwrap(), g.identity());
        assert_eq!(g.power(&w, 0).unwrap(), g.identity());
    }
}
