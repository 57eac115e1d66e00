use super::matrix::{IntMatrix, ModMatrix};
use super::perm::Perm;
use super::word::Word;
use std::collections::BTreeMap;
use std::fmt;

/// A group element in canonical form.
///
/// Equality, ordering and hashing all act on the canonical payload, so two
/// elements of the same group are equal exactly when they represent the same
/// group element. Which group an element belongs to is carried by the
/// [`GroupDescriptor`](super::GroupDescriptor) used to operate on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Perm(Perm),
    Word(Word),
    Wreath(WreathElement),
    Aff(AffElement),
    Bar(Box<BarElement>),
    Bits(BitWord),
    IntMatrix(IntMatrix),
    ModMatrix(ModMatrix),
    Product(Vec<Element>),
}

/// `(f, s)` in `A ≀ Z` or `A ≀ Z_N`: a finitely supported map `Z → A` and a
/// shift. Identity values never appear in `support`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    pub support: BTreeMap<i64, Element>,
    pub shift: i64,
}

/// `z^a t^e` in `Aff(Z) = <z, t | t² = 1, t z t⁻¹ = z⁻¹>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffElement {
    pub a: i64,
    pub flip: bool,
}

/// `(g1, g2) t^e` in `Ḡ = (G × G) ⋊ Z_2`, where `t (g1, g2) t⁻¹ = (g2, g1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarElement {
    pub first: Element,
    pub second: Element,
    pub flip: bool,
}

/// A finite 0/1 word in `Z_2^∞`, without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord(Vec<bool>);

impl BitWord {
    pub fn new(mut bits: Vec<bool>) -> Self {
        while bits.last() == Some(&false) {
            bits.pop();
        }
        BitWord(bits)
    }

    pub fn unit(i: usize) -> Self {
        let mut bits = vec![false; i + 1];
        bits[i] = true;
        BitWord(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn xor(&self, other: &BitWord) -> BitWord {
        let n = self.0.len().max(other.0.len());
        let get = |v: &Vec<bool>, i: usize| v.get(i).copied().unwrap_or(false);
        BitWord::new((0..n).map(|i| get(&self.0, i) ^ get(&other.0, i)).collect())
    }

    pub fn is_canonical(&self) -> bool {
        self.0.last() != Some(&false)
    }
}

impl Element {
    pub fn aff(a: i64, flip: bool) -> Element {
        Element::Aff(AffElement { a, flip })
    }

    pub fn bar(first: Element, second: Element, flip: bool) -> Element {
        Element::Bar(Box::new(BarElement { first, second, flip }))
    }

    pub fn bits(bits: Vec<bool>) -> Element {
        Element::Bits(BitWord::new(bits))
    }

    /// Identity test from the payload alone.
    pub fn is_identity(&self) -> bool {
        match self {
            Element::Perm(p) => p.is_identity(),
            Element::Word(w) => w.is_empty(),
            Element::Wreath(w) => w.support.is_empty() && w.shift == 0,
            Element::Aff(a) => a.a == 0 && !a.flip,
            Element::Bar(b) => !b.flip && b.first.is_identity() && b.second.is_identity(),
            Element::Bits(b) => b.0.is_empty(),
            Element::IntMatrix(m) => m.is_identity(),
            Element::ModMatrix(m) => m.is_identity(),
            Element::Product(es) => es.iter().all(Element::is_identity),
        }
    }

    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            Element::Perm(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Element::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_bar(&self) -> Option<&BarElement> {
        match self {
            Element::Bar(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_wreath(&self) -> Option<&WreathElement> {
        match self {
            Element::Wreath(w) => Some(w),
            _ => None,
        }
    }
}

/// The literal syntax accepted by
/// [`GroupDescriptor::parse_element`](super::GroupDescriptor::parse_element).
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Perm(p) => p.fmt(f),
            Element::Word(w) => w.fmt(f),
            Element::Wreath(w) => {
                f.write_str("{")?;
                for (k, (i, g)) in w.support.iter().enumerate() {
                    if k > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{i}: {g}")?;
                }
                write!(f, "}} s^{}", w.shift)
            }
            Element::Aff(a) => match (a.a, a.flip) {
                (0, false) => f.write_str("1"),
                (0, true) => f.write_str("t"),
                (x, false) => write!(f, "z^{x}"),
                (x, true) => write!(f, "z^{x} t"),
            },
            Element::Bar(b) => {
                write!(f, "<{}; {}>", b.first, b.second)?;
                if b.flip {
                    f.write_str(" t")?;
                }
                Ok(())
            }
            Element::Bits(b) => {
                if b.0.is_empty() {
                    return f.write_str("0");
                }
                for &x in &b.0 {
                    f.write_str(if x { "1" } else { "0" })?;
                }
                Ok(())
            }
            Element::IntMatrix(m) => m.fmt(f),
            Element::ModMatrix(m) => m.fmt(f),
            Element::Product(es) => {
                f.write_str("[")?;
                for (k, e) in es.iter().enumerate() {
                    if k > 0 {
                        f.write_str("; ")?;
                    }
                    e.fmt(f)?;
                }
                f.write_str("]")
            }
        }
    }
}
