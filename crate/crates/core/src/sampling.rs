//! Seeded random elements.
//!
//! Sample `i` of a run with seed `s` is drawn from its own generator seeded
//! from `(s, i)`, so samples are independent of thread count and a larger
//! budget only ever extends the sample sequence.

use crate::group::{BitWord, Element, GroupDescriptor, Perm, Word, WreathElement};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub type SampleRng = ChaCha8Rng;

pub fn rng_for(seed: u64, index: u64) -> SampleRng {
    // splitmix64 of the pair
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// A random element; `size` bounds word lengths, exponents and supports
/// for the infinite families.
pub fn random_element<R: Rng>(d: &GroupDescriptor, rng: &mut R, size: usize) -> Element {
    use GroupDescriptor::*;
    let size = size.max(1);
    match d {
        Symmetric(n) | Alternating(n) => {
            let mut images: Vec<usize> = (0..*n).collect();
            images.shuffle(rng);
            let mut p = Perm::from_images(images).expect("bijection");
            if matches!(d, Alternating(_)) && !p.is_even() {
                p = Perm::from_cycles(*n, &[vec![0, 1]]).expect("n >= 2").compose(&p);
            }
            Element::Perm(p)
        }
        Free(r) => {
            let len = rng.random_range(0..=size);
            let mut letters: Vec<i32> = Vec::with_capacity(len);
            while letters.len() < len {
                let g = rng.random_range(1..=*r as i32);
                let l = if rng.random_bool(0.5) { g } else { -g };
                if letters.last() != Some(&-l) {
                    letters.push(l);
                }
            }
            Element::Word(Word::reduce(letters).expect("non-zero letters"))
        }
        WreathZ(b) | WreathZn(b, _) => {
            let (lo, hi, modulus) = match d {
                WreathZn(_, n) => (0, *n as i64 - 1, Some(*n as i64)),
                _ => (-(size as i64), size as i64, None),
            };
            let mut support = BTreeMap::new();
            for i in lo..=hi {
                if rng.random_bool(0.5) {
                    let g = random_element(b, rng, size);
                    if !g.is_identity() {
                        support.insert(i, g);
                    }
                }
            }
            let shift = rng.random_range(lo..=hi);
            let shift = modulus.map_or(shift, |n| shift.rem_euclid(n));
            Element::Wreath(WreathElement { support, shift })
        }
        AffZ => Element::aff(rng.random_range(-(size as i64)..=size as i64), rng.random_bool(0.5)),
        Bar(g) => Element::bar(random_element(g, rng, size), random_element(g, rng, size), rng.random_bool(0.5)),
        Z2Infinity => {
            let len = rng.random_range(0..=size);
            Element::Bits(BitWord::new((0..len).map(|_| rng.random_bool(0.5)).collect()))
        }
        SlZ(n) | SlMod(n, _) => {
            let mut acc = d.identity();
            for _ in 0..size {
                let i = rng.random_range(0..*n);
                let j = (i + rng.random_range(1..*n)) % n;
                let e = d.elementary(i, j, if rng.random_bool(0.5) { 1 } else { -1 }).expect("valid indices");
                acc = d.compose(&acc, &e).expect("same group");
            }
            acc
        }
        Product(ds) => Element::Product(ds.iter().map(|c| random_element(c, rng, size)).collect()),
    }
}
