use crate::error::{Error, Result};
use crate::group::{Element, GroupDescriptor};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Smallest `k` such that `g` lies in the subgroup generated by the first
/// `k` generators. Supported on `Z2Infinity` (GF(2) elimination) and on
/// the abelian models `free:1` and products of `free:1` (`Z^n`, integer
/// row reduction).
pub fn generator_filtration_norm(d: &GroupDescriptor, g: &Element, generators: &[Element]) -> Result<usize> {
    let vec_of = |e: &Element| -> Result<Vec<BigInt>> {
        if !d.contains(e) {
            return Err(Error::DescriptorMismatch { descriptor: d.to_string() });
        }
        abelian_coordinates(d, e)
    };
    let target = vec_of(g)?;
    let gens = generators.iter().map(vec_of).collect::<Result<Vec<_>>>()?;
    let modulus = if *d == GroupDescriptor::Z2Infinity { Some(BigInt::from(2)) } else { None };
    let width = gens.iter().map(Vec::len).chain([target.len()]).max().unwrap_or(0);
    let pad = |v: &Vec<BigInt>| {
        let mut v = v.clone();
        v.resize(width, BigInt::zero());
        v
    };
    let target = pad(&target);
    for k in 0..=gens.len() {
        let rows: Vec<Vec<BigInt>> = gens[..k].iter().map(pad).collect();
        if in_span(rows, &target, modulus.as_ref()) {
            return Ok(k);
        }
    }
    Err(Error::NotInSpan)
}

fn abelian_coordinates(d: &GroupDescriptor, e: &Element) -> Result<Vec<BigInt>> {
    match (d, e) {
        (GroupDescriptor::Z2Infinity, Element::Bits(b)) => {
            Ok(b.bits().iter().map(|&x| BigInt::from(x as u8)).collect())
        }
        (GroupDescriptor::Free(1), Element::Word(w)) => Ok(vec![BigInt::from(w.letters().iter().map(|l| l.signum() as i64).sum::<i64>())]),
        (GroupDescriptor::Product(ds), Element::Product(es)) if ds.iter().all(|c| *c == GroupDescriptor::Free(1)) => {
            es.iter().map(|x| abelian_coordinates(&GroupDescriptor::Free(1), x).map(|v| v[0].clone())).collect()
        }
        _ => Err(Error::Unsupported(format!("generator filtration on {d}"))),
    }
}

/// Whether `target` is an integer (or mod-`p`) combination of `rows`.
fn in_span(mut rows: Vec<Vec<BigInt>>, target: &[BigInt], modulus: Option<&BigInt>) -> bool {
    let reduce = |x: &BigInt| match modulus {
        Some(p) => x.mod_floor(p),
        None => x.clone(),
    };
    let width = target.len();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..width {
        // Euclid on the column until a single non-zero entry remains below `top`.
        loop {
            for r in &mut rows[top..] {
                for x in r.iter_mut() {
                    *x = reduce(x);
                }
            }
            let nonzero: Vec<usize> = (top..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&r) = nonzero.first() {
                    rows.swap(top, r);
                    pivots.push((top, col));
                    top += 1;
                }
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&r| rows[r][col].abs()).expect("non-empty");
            let pivot_row = rows[best].clone();
            for &r in &nonzero {
                if r != best {
                    let q = rows[r][col].div_floor(&pivot_row[col]);
                    for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                        *x -= &q * p;
                    }
                }
            }
        }
    }
    let mut t: Vec<BigInt> = target.iter().map(&reduce).collect();
    let mut next = 0;
    for col in 0..width {
        match pivots.get(next) {
            Some(&(r, c)) if c == col => {
                next += 1;
                let p = &rows[r][col];
                let q = match modulus {
                    // p is 1 mod 2 here
                    Some(_) => t[col].clone(),
                    None => {
                        if !t[col].is_multiple_of(p) {
                            return false;
                        }
                        &t[col] / p
                    }
                };
                for (x, y) in t.iter_mut().zip(&rows[r]) {
                    *x = reduce(&(&*x - &q * y));
                }
            }
            _ => {
                if !t[col].is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_highest_bit() {
        let d = GroupDescriptor::Z2Infinity;
        let gens: Vec<Element> = (0..10).map(|i| Element::Bits(crate::group::BitWord::unit(i))).collect();
        let g = d.parse_element("0100001").unwrap();
        assert_eq!(generator_filtration_norm(&d, &g, &gens).unwrap(), 7);
        assert_eq!(generator_filtration_norm(&d, &d.identity(), &gens).unwrap(), 0);
        assert_eq!(generator_filtration_norm(&d, &g, &gens[..3]), Err(Error::NotInSpan));
        // 110 and 011 span 101
        let mixed = vec![d.parse_element("11").unwrap(), d.parse_element("011").unwrap()];
        assert_eq!(generator_filtration_norm(&d, &d.parse_element("101").unwrap(), &mixed).unwrap(), 2);
    }

    #[test]
    fn z2_lattice() {
        let d: GroupDescriptor = "product:free:1,free:1".parse().unwrap();
        let gens = d.parse_elements("[a; 1], [1; a]").unwrap();
        let g = d.parse_element("[1; a^5]").unwrap();
        assert_eq!(generator_filtration_norm(&d, &g, &gens).unwrap(), 2);
        let even = d.parse_elements("[a^2; 1], [a^3; a]").unwrap();
        assert_eq!(generator_filtration_norm(&d, &d.parse_element("[a; 1]").unwrap(), &even), Err(Error::NotInSpan));
        assert_eq!(generator_filtration_norm(&d, &d.parse_element("[a^4; 1]").unwrap(), &even).unwrap(), 1);
        assert_eq!(generator_filtration_norm(&d, &d.parse_element("[a^-1; a^-1]").unwrap(), &even).unwrap(), 2);
    }
}
