use std::fmt;

/// A freely reduced word in a free group.
///
/// Letters are signed generator indices: `+k` is the `k`-th generator
/// (1-based) and `-k` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Freely reduce an arbitrary letter sequence. Zero letters are rejected.
    pub fn reduce(letters: impl IntoIterator<Item = i32>) -> Option<Self> {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            if l == 0 {
                return None;
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Some(Word(out))
    }

    pub fn generator(k: i32) -> Self {
        assert!(k != 0, "generator index must be non-zero");
        Word(vec![k])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|&l| l != 0) && self.0.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut cancel = 0;
        let (a, b) = (&self.0, &other.0);
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == -b[cancel] {
            cancel += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
        out.extend_from_slice(&a[..a.len() - cancel]);
        out.extend_from_slice(&b[cancel..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// Overlapping occurrences of `pattern` as a contiguous subword.
    pub fn count_occurrences(&self, pattern: &Word) -> usize {
        let p = &pattern.0;
        if p.is_empty() || p.len() > self.0.len() {
            return 0;
        }
        self.0.windows(p.len()).filter(|w| *w == p.as_slice()).count()
    }
}

pub(crate) fn letter_name(l: i32) -> String {
    let k = l.unsigned_abs();
    if k <= 26 {
        let c = (b'a' + (k - 1) as u8) as char;
        if l > 0 {
            c.to_string()
        } else {
            c.to_ascii_uppercase().to_string()
        }
    } else if l > 0 {
        format!("x{k}")
    } else {
        format!("X{k}")
    }
}

/// Space-separated letters (`a b A`), `1` for the empty word.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let names: Vec<String> = self.0.iter().map(|&l| letter_name(l)).collect();
        f.write_str(&names.join(" "))
    }
}
