use crate::error::{Error, Result};
use super::matrix::is_prime;
use std::fmt;
use std::str::FromStr;

/// The supported group families.
///
/// Text form (used by the CLI and cache keys): `sn:<n>`, `an:<n>`,
/// `free:<rank>`, `wreath:<base>:z`, `wreath:<base>:zn:<N>`, `aff-z`,
/// `bar:<base>`, `z2inf`, `slz:<n>`, `slp:<n>:<p>`, `product:<d1>,<d2>,...`.
/// Product components that themselves contain a comma are parenthesized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupDescriptor {
    Symmetric(usize),
    Alternating(usize),
    Free(usize),
    WreathZ(Box<GroupDescriptor>),
    WreathZn(Box<GroupDescriptor>, usize),
    AffZ,
    Bar(Box<GroupDescriptor>),
    Z2Infinity,
    SlZ(usize),
    SlMod(usize, u32),
    Product(Vec<GroupDescriptor>),
}

/// Order of `G/G'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbelianizationOrder {
    Finite(u128),
    Infinite,
}

impl AbelianizationOrder {
    /// Membership in the class of groups with finite first homology.
    pub fn is_finite(&self) -> bool {
        matches!(self, AbelianizationOrder::Finite(_))
    }

    fn mul(self, other: Self) -> Self {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a.saturating_mul(b)),
            _ => Self::Infinite,
        }
    }
}

impl GroupDescriptor {
    pub fn wreath_z(base: GroupDescriptor) -> Self {
        GroupDescriptor::WreathZ(Box::new(base))
    }

    pub fn wreath_zn(base: GroupDescriptor, n: usize) -> Self {
        GroupDescriptor::WreathZn(Box::new(base), n)
    }

    pub fn bar(inner: GroupDescriptor) -> Self {
        GroupDescriptor::Bar(Box::new(inner))
    }

    /// Check the family parameters.
    pub fn validate(&self) -> Result<()> {
        use GroupDescriptor::*;
        let bad = || Err(Error::InvalidDescriptor(self.to_string()));
        match self {
            Symmetric(n) | Alternating(n) if *n == 0 || *n > u16::MAX as usize => bad(),
            Free(0) => bad(),
            WreathZn(_, n) if *n < 2 => bad(),
            SlZ(n) if *n < 2 => bad(),
            SlMod(n, p) if *n < 2 || !is_prime(*p) => bad(),
            Product(ds) if ds.is_empty() => bad(),
            WreathZ(b) | WreathZn(b, _) | Bar(b) => b.validate(),
            Product(ds) => ds.iter().try_for_each(|d| d.validate()),
            _ => Ok(()),
        }
    }

    pub fn is_finite(&self) -> bool {
        use GroupDescriptor::*;
        match self {
            Symmetric(_) | Alternating(_) | SlMod(..) => true,
            Free(_) | WreathZ(_) | AffZ | Z2Infinity | SlZ(_) => false,
            WreathZn(b, _) | Bar(b) => b.is_finite(),
            Product(ds) => ds.iter().all(|d| d.is_finite()),
        }
    }

    /// Group order from the family formula (saturating), `None` if infinite.
    pub fn order(&self) -> Option<u128> {
        use GroupDescriptor::*;
        match self {
            Symmetric(n) => Some(factorial(*n)),
            Alternating(n) => Some(if *n < 2 { 1 } else { factorial(*n) / 2 }),
            WreathZn(b, n) => {
                let base = b.order()?;
                Some(base.saturating_pow(*n as u32).saturating_mul(*n as u128))
            }
            Bar(b) => {
                let g = b.order()?;
                Some(g.saturating_mul(g).saturating_mul(2))
            }
            SlMod(n, p) => {
                let p = *p as u128;
                let mut order = p.saturating_pow((n * (n - 1) / 2) as u32);
                for k in 2..=*n {
                    order = order.saturating_mul(p.saturating_pow(k as u32) - 1);
                }
                Some(order)
            }
            Product(ds) => ds.iter().try_fold(1u128, |acc, d| Some(acc.saturating_mul(d.order()?))),
            Free(_) | WreathZ(_) | AffZ | Z2Infinity | SlZ(_) => None,
        }
    }

    /// `|G/G'|` from the family alone.
    ///
    /// For wreath products over `Z_N` the shift-coinvariants of `H_1(A)^N`
    /// are `H_1(A)`, giving `|H_1(A)|·N`; the swap extension `Ḡ` likewise
    /// gives `2·|H_1(G)|`.
    pub fn abelianization_analytic(&self) -> AbelianizationOrder {
        use AbelianizationOrder::{Finite, Infinite};
        use GroupDescriptor::*;
        match self {
            Symmetric(n) => Finite(if *n >= 2 { 2 } else { 1 }),
            Alternating(n) => Finite(if *n == 3 || *n == 4 { 3 } else { 1 }),
            Free(_) | WreathZ(_) | Z2Infinity => Infinite,
            WreathZn(b, n) => b.abelianization_analytic().mul(Finite(*n as u128)),
            AffZ => Finite(4),
            Bar(b) => b.abelianization_analytic().mul(Finite(2)),
            SlZ(2) => Finite(12),
            SlZ(_) => Finite(1),
            SlMod(2, 2) => Finite(2),
            SlMod(2, 3) => Finite(3),
            SlMod(..) => Finite(1),
            Product(ds) => ds.iter().fold(Finite(1), |acc, d| acc.mul(d.abelianization_analytic())),
        }
    }

    /// Families whose every element commutes with every other.
    pub fn is_abelian(&self) -> bool {
        use GroupDescriptor::*;
        match self {
            Symmetric(n) => *n <= 2,
            Alternating(n) => *n <= 3,
            Free(r) => *r == 1,
            Z2Infinity => true,
            Product(ds) => ds.iter().all(|d| d.is_abelian()),
            _ => false,
        }
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupDescriptor::*;
        match self {
            Symmetric(n) => write!(f, "sn:{n}"),
            Alternating(n) => write!(f, "an:{n}"),
            Free(r) => write!(f, "free:{r}"),
            WreathZ(b) => write!(f, "wreath:{b}:z"),
            WreathZn(b, n) => write!(f, "wreath:{b}:zn:{n}"),
            AffZ => f.write_str("aff-z"),
            Bar(b) => write!(f, "bar:{b}"),
            Z2Infinity => f.write_str("z2inf"),
            SlZ(n) => write!(f, "slz:{n}"),
            SlMod(n, p) => write!(f, "slp:{n}:{p}"),
            Product(ds) => {
                f.write_str("product:")?;
                for (k, d) in ds.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    let s = d.to_string();
                    if s.contains(',') {
                        write!(f, "({s})")?;
                    } else {
                        f.write_str(&s)?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let d = parse_descriptor(s.trim()).ok_or_else(|| Error::InvalidDescriptor(s.to_string()))?;
        d.validate()?;
        Ok(d)
    }
}

fn parse_descriptor(s: &str) -> Option<GroupDescriptor> {
    use GroupDescriptor::*;
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') && balanced_outer(s) {
        return parse_descriptor(&s[1..s.len() - 1]);
    }
    match s {
        "aff-z" => return Some(AffZ),
        "z2inf" => return Some(Z2Infinity),
        _ => {}
    }
    let (head, rest) = s.split_once(':')?;
    match head {
        "sn" => Some(Symmetric(rest.parse().ok()?)),
        "an" => Some(Alternating(rest.parse().ok()?)),
        "free" => Some(Free(rest.parse().ok()?)),
        "slz" => Some(SlZ(rest.parse().ok()?)),
        "slp" => {
            let (n, p) = rest.split_once(':')?;
            Some(SlMod(n.parse().ok()?, p.parse().ok()?))
        }
        "bar" => Some(GroupDescriptor::bar(parse_descriptor(rest)?)),
        "wreath" => {
            if let Some(base) = rest.strip_suffix(":z") {
                return Some(GroupDescriptor::wreath_z(parse_descriptor(base)?));
            }
            let idx = rest.rfind(":zn:")?;
            let n = rest[idx + 4..].parse().ok()?;
            Some(GroupDescriptor::wreath_zn(parse_descriptor(&rest[..idx])?, n))
        }
        "product" => {
            let parts = split_top_level(rest, ',')?;
            Some(Product(parts.iter().map(|p| parse_descriptor(p)).collect::<Option<_>>()?))
        }
        _ => None,
    }
}

fn balanced_outer(s: &str) -> bool {
    // true when the first '(' closes at the very end
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i != s.len() - 1 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Split on `sep` outside of any bracket pair; `None` on unbalanced input.
pub(crate) fn split_top_level(s: &str, sep: char) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' | '<' => depth += 1,
            ')' | ']' | '}' | '>' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&s[start..]);
    Some(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trips() {
        for s in [
            "sn:3",
            "an:5",
            "free:2",
            "wreath:sn:3:z",
            "wreath:sn:3:zn:4",
            "aff-z",
            "bar:sn:3",
            "bar:free:2",
            "z2inf",
            "slz:3",
            "slp:2:5",
            "product:free:2,free:2,free:2",
            "product:(product:sn:2,sn:2),an:4",
            "wreath:bar:sn:3:zn:2",
        ] {
            let d: GroupDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        for s in ["sn:0", "free:0", "wreath:sn:3:zn:1", "slp:2:4", "slz:1", "nope", "product:"] {
            assert!(s.parse::<GroupDescriptor>().is_err(), "{s}");
        }
    }

    #[test]
    fn orders() {
        let o = |s: &str| s.parse::<GroupDescriptor>().unwrap().order();
        assert_eq!(o("sn:3"), Some(6));
        assert_eq!(o("an:5"), Some(60));
        assert_eq!(o("wreath:sn:3:zn:3"), Some(648));
        assert_eq!(o("slp:2:3"), Some(24));
        assert_eq!(o("slp:2:5"), Some(120));
        assert_eq!(o("bar:sn:3"), Some(72));
        assert_eq!(o("aff-z"), None);
    }

    #[test]
    fn analytic_abelianization() {
        let a = |s: &str| s.parse::<GroupDescriptor>().unwrap().abelianization_analytic();
        assert_eq!(a("aff-z"), AbelianizationOrder::Finite(4));
        assert_eq!(a("free:2"), AbelianizationOrder::Infinite);
        assert_eq!(a("an:5"), AbelianizationOrder::Finite(1));
        assert_eq!(a("bar:sn:3"), AbelianizationOrder::Finite(4));
    }
}
