//! Square integer matrices (arbitrary precision) and matrices over `Z/p`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { n, entries }
    }

    /// Row-major entries; `None` unless there are exactly `n²` of them.
    pub fn from_rows(n: usize, entries: Vec<BigInt>) -> Option<Self> {
        (entries.len() == n * n).then_some(IntMatrix { n, entries })
    }

    /// The elementary matrix `E_ij^p` (0-based indices, `i != j`).
    pub fn elementary(n: usize, i: usize, j: usize, p: impl Into<BigInt>) -> Self {
        assert!(i != j && i < n && j < n, "elementary matrix needs distinct indices < n");
        let mut m = Self::identity(n);
        m.entries[i * n + j] = p.into();
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        IntMatrix { n, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn determinant(&self) -> BigInt {
        bareiss_det(self.n, self.entries.clone())
    }

    /// Adjugate; equals the inverse when the determinant is 1.
    pub fn adjugate(&self) -> IntMatrix {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut minor = Vec::with_capacity((n - 1) * (n - 1));
                for r in (0..n).filter(|&r| r != i) {
                    for c in (0..n).filter(|&c| c != j) {
                        minor.push(self.entries[r * n + c].clone());
                    }
                }
                let d = bareiss_det(n - 1, minor);
                // adj[j][i] = (-1)^{i+j} M_ij
                entries[j * n + i] = if (i + j) % 2 == 0 { d } else { -d };
            }
        }
        IntMatrix { n, entries }
    }
}

/// Fraction-free Gaussian elimination; exact over the integers.
fn bareiss_det(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..n {
                a.swap(k * n + c, swap * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
        }
        prev = a[k * n + k].clone();
    }
    sign * &a[n * n - 1]
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// A square matrix over `Z/p`; the modulus lives in the group descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl ModMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        ModMatrix { n, entries }
    }

    /// Reduces every entry into `[0, p)`.
    pub fn from_rows(n: usize, entries: &[i64], p: u32) -> Option<Self> {
        if entries.len() != n * n || p == 0 {
            return None;
        }
        let entries = entries.iter().map(|&e| e.rem_euclid(p as i64) as u32).collect();
        Some(ModMatrix { n, entries })
    }

    pub fn elementary(n: usize, i: usize, j: usize, v: i64, p: u32) -> Self {
        assert!(i != j && i < n && j < n, "elementary matrix needs distinct indices < n");
        let mut m = Self::identity(n);
        m.entries[i * n + j] = v.rem_euclid(p as i64) as u32;
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_reduced(&self, p: u32) -> bool {
        self.entries.iter().all(|&e| e < p)
    }

    pub fn mul(&self, other: &ModMatrix, p: u32) -> ModMatrix {
        let n = self.n;
        let p = p as u64;
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc = (acc + self.entries[i * n + k] as u64 * other.entries[k * n + j] as u64) % p;
                }
                entries[i * n + j] = acc as u32;
            }
        }
        ModMatrix { n, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn determinant(&self, p: u32) -> u32 {
        let n = self.n;
        let pm = p as u64;
        let mut a: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let mut det = 1u64;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| a[r * n + k] != 0) else {
                return 0;
            };
            if piv != k {
                for c in 0..n {
                    a.swap(k * n + c, piv * n + c);
                }
                det = (pm - det) % pm;
            }
            det = det * a[k * n + k] % pm;
            let inv = mod_inverse(a[k * n + k], pm);
            for r in k + 1..n {
                let factor = a[r * n + k] * inv % pm;
                for c in k..n {
                    a[r * n + c] = (a[r * n + c] + pm - factor * a[k * n + c] % pm) % pm;
                }
            }
        }
        det as u32
    }

    /// Inverse by Gauss-Jordan elimination; the matrix must be invertible.
    pub fn inverse(&self, p: u32) -> ModMatrix {
        let n = self.n;
        let pm = p as u64;
        let mut a: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let mut inv: Vec<u64> = ModMatrix::identity(n).entries.iter().map(|&e| e as u64).collect();
        for k in 0..n {
            let piv = (k..n).find(|&r| a[r * n + k] != 0).expect("singular matrix mod p");
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
                inv.swap(k * n + c, piv * n + c);
            }
            let s = mod_inverse(a[k * n + k], pm);
            for c in 0..n {
                a[k * n + c] = a[k * n + c] * s % pm;
                inv[k * n + c] = inv[k * n + c] * s % pm;
            }
            for r in (0..n).filter(|&r| r != k) {
                let factor = a[r * n + k];
                if factor == 0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = (a[r * n + c] + pm - factor * a[k * n + c] % pm) % pm;
                    inv[r * n + c] = (inv[r * n + c] + pm - factor * inv[k * n + c] % pm) % pm;
                }
            }
        }
        ModMatrix { n, entries: inv.into_iter().map(|e| e as u32).collect() }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime: a^(p-2)
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| (*d as u64) * (*d as u64) <= p as u64).all(|d| !p.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_inverse_negates_entry() {
        let e = IntMatrix::elementary(3, 0, 1, 1);
        let inv = e.adjugate();
        assert_eq!(inv, IntMatrix::elementary(3, 0, 1, -1));
        assert!(e.mul(&inv).is_identity());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = IntMatrix::from_rows(3, [2, -1, 0, 1, 3, 4, 0, 5, -2].map(BigInt::from).to_vec()).unwrap();
        // 2(3*-2 - 4*5) - (-1)(1*-2 - 0) + 0 = -52 - 2
        assert_eq!(m.determinant(), BigInt::from(-54));
        let z = IntMatrix::from_rows(2, [0, 1, 1, 0].map(BigInt::from).to_vec()).unwrap();
        assert_eq!(z.determinant(), BigInt::from(-1));
    }

    #[test]
    fn mod_inverse_and_det() {
        let m = ModMatrix::from_rows(2, &[1, 2, 3, 7], 5).unwrap();
        assert_eq!(m.determinant(5), 1);
        assert!(m.mul(&m.inverse(5), 5).is_identity());
        assert!(is_prime(5) && !is_prime(9) && !is_prime(1));
    }
}
