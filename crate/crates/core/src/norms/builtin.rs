use super::Norm;
use crate::error::{Error, Result};
use crate::group::Element;
use crate::rational::{int, Rational};
use std::sync::Arc;

/// 1 on every element except the identity.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialNorm;

impl Norm for TrivialNorm {
    fn name(&self) -> String {
        "trivial".into()
    }

    fn norm(&self, g: &Element) -> Result<Rational> {
        Ok(int(if g.is_identity() { 0 } else { 1 }))
    }
}

/// Size of support: moved points of a permutation, or 1-bits of a word in
/// `Z_2^∞` (the word-length norm there).
pub fn support_norm(g: &Element) -> Result<Rational> {
    match g {
        Element::Perm(p) => Ok(int(p.support_size() as i64)),
        Element::Bits(b) => Ok(int(b.ones() as i64)),
        _ => Err(Error::Unsupported(format!("support norm of `{g}`"))),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SupportNorm;

impl Norm for SupportNorm {
    fn name(&self) -> String {
        "support".into()
    }

    fn norm(&self, g: &Element) -> Result<Rational> {
        support_norm(g)
    }
}

/// Norm on `A ≀ Z_N`: the number of non-identity coordinates when the shift
/// is zero, and `N + 1` otherwise.
///
/// Conjugation preserves the shift, and on the base group it only permutes
/// and conjugates coordinates, so the value is conjugation invariant.
#[derive(Clone, Copy, Debug)]
pub struct WreathSupportNorm {
    pub modulus: usize,
}

impl Norm for WreathSupportNorm {
    fn name(&self) -> String {
        format!("wreath-support:{}", self.modulus)
    }

    fn norm(&self, g: &Element) -> Result<Rational> {
        let w = g.as_wreath().ok_or_else(|| Error::Unsupported(format!("wreath support of `{g}`")))?;
        Ok(int(if w.shift == 0 { w.support.len() as i64 } else { self.modulus as i64 + 1 }))
    }
}

type NormFn = Arc<dyn Fn(&Element) -> Result<Rational> + Send + Sync>;

/// A norm given by a closure.
#[derive(Clone)]
pub struct FnNorm {
    name: String,
    f: NormFn,
}

impl FnNorm {
    pub fn new(name: impl Into<String>, f: impl Fn(&Element) -> Result<Rational> + Send + Sync + 'static) -> Self {
        FnNorm { name: name.into(), f: Arc::new(f) }
    }
}

impl Norm for FnNorm {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn norm(&self, g: &Element) -> Result<Rational> {
        (self.f)(g)
    }
}

impl std::fmt::Debug for FnNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnNorm").field("name", &self.name).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDescriptor;

    #[test]
    fn support_values() {
        let s5: GroupDescriptor = "sn:5".parse().unwrap();
        assert_eq!(support_norm(&s5.identity()).unwrap(), int(0));
        assert_eq!(support_norm(&s5.parse_element("(1 2)").unwrap()).unwrap(), int(2));
        let z: GroupDescriptor = "z2inf".parse().unwrap();
        assert_eq!(support_norm(&z.parse_element("10110").unwrap()).unwrap(), int(3));
        assert!(support_norm(&Element::aff(1, false)).is_err());
    }
}
