use std::fmt;

/// A permutation of `{0, .., n-1}` stored as its image array.
///
/// Composition is functional: `a.compose(b)` applies `b` first, then `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u16>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u16).collect())
    }

    /// Build from an image array; `None` unless it is a bijection.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        if n > u16::MAX as usize {
            return None;
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images.into_iter().map(|i| i as u16).collect()))
    }

    /// Build from disjoint 0-based cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Option<Self> {
        let mut p = Self::identity(n);
        for c in cycles {
            // each cycle is applied after the ones already accumulated
            let mut cyc: Vec<usize> = (0..n).collect();
            for (k, &x) in c.iter().enumerate() {
                if x >= n {
                    return None;
                }
                cyc[x] = c[(k + 1) % c.len()];
            }
            p = Perm::from_images(cyc)?.compose(&p);
        }
        Some(p)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.0.len(), other.0.len());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut r = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            r[j as usize] = i as u16;
        }
        Perm(r)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Number of moved points.
    pub fn support_size(&self) -> usize {
        self.0.iter().enumerate().filter(|&(i, &j)| i != j as usize).count()
    }

    /// All cycles including fixed points, each starting at its least point.
    pub fn all_cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.all_cycles().len()
    }

    pub fn is_even(&self) -> bool {
        (self.0.len() - self.cycle_count()).is_multiple_of(2)
    }

    /// Image-array as `usize`, for callers that index by point.
    pub fn to_vec(&self) -> Vec<usize> {
        self.images().collect()
    }
}

/// 1-based cycle notation, `()` for the identity.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.all_cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_is_involution() {
        let t = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        assert!(t.compose(&t).is_identity());
        assert_eq!(t.to_string(), "(1 2)");
        assert_eq!(t.support_size(), 2);
        assert!(!t.is_even());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        // (1 2)(1 3): 1 -> 3, 3 -> 1 -> 2, 2 -> 1
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![0, 2]]).unwrap();
        let ab = a.compose(&b);
        assert_eq!(ab.apply(0), 2);
        assert_eq!(ab.apply(2), 1);
        assert_eq!(ab.to_string(), "(1 3 2)");
    }

    #[test]
    fn inverse_round_trip() {
        let p = Perm::from_images(vec![0, 2, 1, 4, 7, 8, 3, 5, 6]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(Perm::from_images(vec![0, 0]).is_none());
    }
}
