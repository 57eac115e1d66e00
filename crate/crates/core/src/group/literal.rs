//! Element literals.
//!
//! * permutations: 1-based cycle notation, `(1 2)(3 4 5)`; `()` is the identity
//! * free-group words: letters `a b A` (upper case = inverse), `x27` for
//!   generators past `z`, optional integer exponents `a^3 B^-2`; `1` is empty
//! * `Aff(Z)`: products of `z^k` and `t`, e.g. `z^3 t`
//! * `Ḡ`: `<g1; g2>` or `<g1; g2> t`
//! * wreath products: `{0: g; 2: h} s^k`
//! * `Z_2^∞`: a bit string such as `10110`
//! * matrices: row-major integer lists, `[1,1,0,0,1,0,0,0,1]`
//! * direct products: `[e1; e2; ...]`

use super::descriptor::split_top_level;
use super::element::{BitWord, Element, WreathElement};
use super::matrix::{IntMatrix, ModMatrix};
use super::perm::Perm;
use super::word::Word;
use super::GroupDescriptor;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::collections::BTreeMap;

impl GroupDescriptor {
    /// Parse an element literal and check that it is a canonical member.
    pub fn parse_element(&self, literal: &str) -> Result<Element> {
        let err = |reason: &str| Error::InvalidElement {
            literal: literal.to_string(),
            descriptor: self.to_string(),
            reason: reason.to_string(),
        };
        let e = self.parse_raw(literal.trim()).map_err(|r| err(&r))?;
        if self.contains(&e) {
            Ok(e)
        } else {
            Err(err("not a member of the group"))
        }
    }

    /// Parse a `,`-separated list of literals (top-level commas only).
    pub fn parse_elements(&self, list: &str) -> Result<Vec<Element>> {
        let parts = split_top_level(list, ',').ok_or_else(|| Error::InvalidElement {
            literal: list.to_string(),
            descriptor: self.to_string(),
            reason: "unbalanced brackets".into(),
        })?;
        parts.into_iter().filter(|p| !p.trim().is_empty()).map(|p| self.parse_element(p)).collect()
    }

    fn parse_raw(&self, s: &str) -> Result<Element, String> {
        use GroupDescriptor::*;
        let is_one = matches!(s, "" | "1" | "id" | "e");
        match self {
            Symmetric(n) | Alternating(n) => {
                if is_one || s == "()" {
                    return Ok(self.identity());
                }
                parse_cycles(*n, s).map(Element::Perm)
            }
            Free(_) => {
                if is_one {
                    return Ok(self.identity());
                }
                parse_word(s).map(Element::Word)
            }
            AffZ => {
                if is_one {
                    return Ok(self.identity());
                }
                let mut acc = self.identity();
                for tok in s.split_whitespace() {
                    let x = match tok {
                        "t" => Element::aff(0, true),
                        "z" => Element::aff(1, false),
                        _ => {
                            let k = tok.strip_prefix("z^").ok_or("expected z^k or t")?;
                            Element::aff(k.parse().map_err(|_| "bad exponent")?, false)
                        }
                    };
                    acc = self.mul(&acc, &x);
                }
                Ok(acc)
            }
            Bar(g) => {
                if is_one {
                    return Ok(self.identity());
                }
                if s == "t" {
                    return Ok(Element::bar(g.identity(), g.identity(), true));
                }
                let (body, flip) = match s.strip_suffix('t') {
                    Some(b) if b.trim_end().ends_with('>') => (b.trim_end(), true),
                    _ => (s, false),
                };
                let inner = body
                    .strip_prefix('<')
                    .and_then(|b| b.strip_suffix('>'))
                    .ok_or("expected <g1; g2>")?;
                let parts = split_top_level(inner, ';').ok_or("unbalanced brackets")?;
                if parts.len() != 2 {
                    return Err("expected two coordinates".into());
                }
                Ok(Element::bar(g.parse_raw(parts[0].trim())?, g.parse_raw(parts[1].trim())?, flip))
            }
            WreathZ(base) | WreathZn(base, _) => {
                if is_one {
                    return Ok(self.identity());
                }
                let modulus = match self {
                    WreathZn(_, n) => Some(*n as i64),
                    _ => None,
                };
                let wrap = |i: i64| modulus.map_or(i, |n| i.rem_euclid(n));
                let (map_part, shift_part) = match s.find('}') {
                    Some(close) => (&s[..=close], s[close + 1..].trim()),
                    None => ("{}", s),
                };
                let mut support = BTreeMap::new();
                let inner = map_part
                    .strip_prefix('{')
                    .and_then(|m| m.strip_suffix('}'))
                    .ok_or("expected {i: g; ...}")?;
                for entry in split_top_level(inner, ';').ok_or("unbalanced brackets")? {
                    if entry.trim().is_empty() {
                        continue;
                    }
                    let (i, g) = entry.split_once(':').ok_or("expected i: g")?;
                    let i: i64 = i.trim().parse().map_err(|_| "bad coordinate")?;
                    let g = base.parse_raw(g.trim())?;
                    if !g.is_identity() && support.insert(wrap(i), g).is_some() {
                        return Err("repeated coordinate".into());
                    }
                }
                let shift = match shift_part {
                    "" => 0,
                    "s" => 1,
                    t => t.strip_prefix("s^").ok_or("expected s^k")?.parse().map_err(|_| "bad shift")?,
                };
                Ok(Element::Wreath(WreathElement { support, shift: wrap(shift) }))
            }
            Z2Infinity => {
                if s.chars().all(|c| c == '0' || c == '1') {
                    Ok(Element::Bits(BitWord::new(s.chars().map(|c| c == '1').collect())))
                } else {
                    Err("expected a 0/1 string".into())
                }
            }
            SlZ(n) => {
                if is_one {
                    return Ok(self.identity());
                }
                let entries = parse_int_list(s)?;
                IntMatrix::from_rows(*n, entries)
                    .map(Element::IntMatrix)
                    .ok_or_else(|| format!("expected {} entries", n * n))
            }
            SlMod(n, p) => {
                if is_one {
                    return Ok(self.identity());
                }
                let entries: Vec<i64> = parse_int_list(s)?
                    .into_iter()
                    .map(|b| (b % BigInt::from(*p)).try_into().expect("residue fits"))
                    .collect();
                ModMatrix::from_rows(*n, &entries, *p)
                    .map(Element::ModMatrix)
                    .ok_or_else(|| format!("expected {} entries", n * n))
            }
            Product(ds) => {
                if is_one {
                    return Ok(self.identity());
                }
                let inner = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or("expected [e1; e2; ...]")?;
                let parts = split_top_level(inner, ';').ok_or("unbalanced brackets")?;
                if parts.len() != ds.len() {
                    return Err(format!("expected {} components", ds.len()));
                }
                Ok(Element::Product(
                    ds.iter().zip(parts).map(|(d, p)| d.parse_raw(p.trim())).collect::<Result<_, _>>()?,
                ))
            }
        }
    }
}

fn parse_cycles(n: usize, s: &str) -> Result<Perm, String> {
    let mut acc = Perm::identity(n);
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body_end = rest.find(')').ok_or("unclosed cycle")?;
        let body = rest.strip_prefix('(').ok_or("expected '('")?;
        let body = &body[..body_end - 1];
        let points: Vec<usize> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| format!("bad point `{t}`")))
            .collect::<Result<_, _>>()?;
        if points.iter().any(|&x| x == 0 || x > n) {
            return Err(format!("points must lie in 1..={n}"));
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err("repeated point in cycle".into());
        }
        let cyc: Vec<usize> = points.iter().map(|x| x - 1).collect();
        let c = Perm::from_cycles(n, &[cyc]).ok_or("bad cycle")?;
        // cycles are written left to right and act right to left
        acc = acc.compose(&c);
        rest = rest[body_end + 1..].trim_start();
    }
    Ok(acc)
}

fn parse_word(s: &str) -> Result<Word, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(format!("unexpected `{c}`"));
        }
        let sign = if c.is_ascii_uppercase() { -1 } else { 1 };
        i += 1;
        let idx = if (c == 'x' || c == 'X') && i < chars.len() && chars[i].is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            chars[start..i].iter().collect::<String>().parse::<i32>().map_err(|_| "bad index")?
        } else {
            (c.to_ascii_lowercase() as u8 - b'a') as i32 + 1
        };
        let mut exp = 1i64;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            if i < chars.len() && chars[i] == '-' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            exp = chars[start..i].iter().collect::<String>().parse().map_err(|_| "bad exponent")?;
        }
        let l = sign * idx * exp.signum() as i32;
        for _ in 0..exp.unsigned_abs() {
            letters.push(l);
        }
    }
    Word::reduce(letters).ok_or_else(|| "zero letter".to_string())
}

fn parse_int_list(s: &str) -> Result<Vec<BigInt>, String> {
    s.split(|c: char| c == ',' || c == ';' || c == '[' || c == ']' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<BigInt>().map_err(|_| format!("bad integer `{t}`")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(desc: &str, lit: &str) -> String {
        let d: GroupDescriptor = desc.parse().unwrap();
        d.parse_element(lit).unwrap().to_string()
    }

    #[test]
    fn literals_round_trip() {
        assert_eq!(rt("sn:4", "(1 2)(3 4)"), "(1 2)(3 4)");
        assert_eq!(rt("sn:3", "()"), "()");
        assert_eq!(rt("free:2", "a b A"), "a b A");
        assert_eq!(rt("free:2", "a^2 b^-1"), "a a B");
        assert_eq!(rt("aff-z", "z^3 t"), "z^3 t");
        assert_eq!(rt("aff-z", "t z"), "z^-1 t");
        assert_eq!(rt("bar:sn:3", "<(1 2); ()> t"), "<(1 2); ()> t");
        assert_eq!(rt("wreath:sn:3:zn:3", "{0: (1 2); 4: (1 3)} s^2"), "{0: (1 2); 1: (1 3)} s^2");
        assert_eq!(rt("z2inf", "10101"), "10101");
        assert_eq!(rt("z2inf", "1100"), "11");
        assert_eq!(rt("slz:2", "[1,1,0,1]"), "[1,1,0,1]");
        assert_eq!(rt("product:free:2,sn:3", "[a b; (1 2 3)]"), "[a b; (1 2 3)]");
    }

    #[test]
    fn cycle_products_act_right_to_left() {
        // (1 2)(1 3) = (1 3 2)
        assert_eq!(rt("sn:3", "(1 2)(1 3)"), "(1 3 2)");
    }

    #[test]
    fn rejects_non_members() {
        let d: GroupDescriptor = "an:4".parse().unwrap();
        assert!(d.parse_element("(1 2)").is_err());
        let s: GroupDescriptor = "slz:2".parse().unwrap();
        assert!(s.parse_element("[2,0,0,1]").is_err());
        let f: GroupDescriptor = "free:2".parse().unwrap();
        assert!(f.parse_element("c").is_err());
    }
}
