use std::fmt;

use super::FamilyError;

/// A permutation of `{1, …, n}` in one-line notation: `images[i - 1] = σ(i)`.
///
/// The associated permutation matrix has entry `(i, j) = 1` iff `σ(i) = j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Validates that `images` is a bijection on `{1, …, n}`.
    pub fn from_images(images: Vec<usize>) -> Result<Self, FamilyError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(FamilyError::InvalidPermutation(images.clone()));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses one-line notation: either a digit string (`"231"`, n ≤ 9) or a
    /// comma-separated list (`"2,3,1"`).
    pub fn parse_one_line(s: &str) -> Result<Self, FamilyError> {
        let bad = || FamilyError::InvalidLabel(s.to_string());
        let images: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        Self::from_images(images).map_err(|_| bad())
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// σ(i) for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation {
            images: other.images.iter().map(|&j| self.apply(j)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// Restriction to `{1, …, m}`, if that set is invariant.
    pub fn restrict(&self, m: usize) -> Option<Permutation> {
        let head = &self.images[..m];
        head.iter().all(|&v| v <= m).then(|| Permutation {
            images: head.to_vec(),
        })
    }

    /// Extends by fixing `n+1, …, total`.
    pub fn extend_fixing(&self, total: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.n() + 1..=total);
        Permutation { images }
    }

    /// Sign as +1 / -1.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.n()];
        let mut sign = 1;
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    pub fn one_line(&self) -> String {
        if self.n() <= 9 {
            self.images.iter().map(|v| v.to_string()).collect()
        } else {
            self.images
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Advances to the lexicographically next permutation; returns `false`
    /// after the last one.
    pub fn next_lex(&mut self) -> bool {
        let a = &mut self.images;
        let n = a.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && a[i - 1] >= a[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while a[j] <= a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        true
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.one_line())
    }
}

/// All permutations of `{1, …, n}` in lexicographic order of one-line
/// notation.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut p = Permutation::identity(n);
    loop {
        out.push(p.clone());
        if !p.next_lex() {
            break;
        }
    }
    out
}
