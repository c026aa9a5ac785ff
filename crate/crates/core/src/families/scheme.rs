use std::fmt;

use serde::{Deserialize, Serialize};

use super::FamilyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Bqp,
    Qap,
    Phi,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Bqp => "bqp",
            Family::Qap => "qap",
            Family::Phi => "phi",
        }
    }

    /// Families whose symmetry group (relabelling by left composition) acts
    /// transitively on vertices through coordinate permutations.
    pub fn is_permutation_family(self) -> bool {
        matches!(self, Family::Qap | Family::Phi)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, FamilyError> {
        match s.to_ascii_lowercase().as_str() {
            "bqp" => Ok(Family::Bqp),
            "qap" => Ok(Family::Qap),
            "phi" => Ok(Family::Phi),
            _ => Err(FamilyError::UnknownFamily(s.to_string())),
        }
    }
}

/// Semantic coordinate of a family, 1-based as in the usual notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiIndex {
    /// `x_{ij}`
    Bqp(usize, usize),
    /// `y_{ijkl}`
    Qap(usize, usize, usize, usize),
    /// `z_{e,f}` with `e = (i, j)`, `f = (k, l)`, `i < j`, `k < l`.
    Phi((usize, usize), (usize, usize)),
}

/// Translation between semantic multi-indices and flat 0-based offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexScheme {
    pub family: Family,
    pub n: usize,
    pub ambient_dim: usize,
}

pub fn binomial2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic 0-based rank of the edge `{i, j}` of `K_n`, `1 ≤ i < j ≤ n`.
pub fn edge_index(i: usize, j: usize, n: usize) -> Result<usize, FamilyError> {
    if i == 0 || i >= j || j > n {
        return Err(FamilyError::InvalidEdge { i, j, n });
    }
    // Edges {a, ·} for a < i come first: Σ_{a<i} (n - a).
    let before = (i - 1) * n - (i - 1) * i / 2;
    Ok(before + (j - i - 1))
}

/// Inverse of [`edge_index`].
pub fn edge_from_index(idx: usize, n: usize) -> Result<(usize, usize), FamilyError> {
    let mut rest = idx;
    for i in 1..n {
        let row = n - i;
        if rest < row {
            return Ok((i, i + 1 + rest));
        }
        rest -= row;
    }
    Err(FamilyError::OffsetOutOfRange {
        offset: idx,
        dim: binomial2(n),
    })
}

/// All edges of `K_n` in lexicographic order.
pub fn edges(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(binomial2(n));
    for i in 1..=n {
        for j in i + 1..=n {
            out.push((i, j));
        }
    }
    out
}

impl IndexScheme {
    pub fn bqp(m: usize) -> Self {
        IndexScheme {
            family: Family::Bqp,
            n: m,
            ambient_dim: m * m,
        }
    }

    pub fn qap(n: usize) -> Self {
        IndexScheme {
            family: Family::Qap,
            n,
            ambient_dim: n.pow(4),
        }
    }

    pub fn phi(n: usize) -> Self {
        let e = binomial2(n);
        IndexScheme {
            family: Family::Phi,
            n,
            ambient_dim: e * e,
        }
    }

    pub fn for_family(family: Family, n: usize) -> Self {
        match family {
            Family::Bqp => Self::bqp(n),
            Family::Qap => Self::qap(n),
            Family::Phi => Self::phi(n),
        }
    }

    pub fn encode(&self, idx: MultiIndex) -> Result<usize, FamilyError> {
        let n = self.n;
        let bad = || FamilyError::IndexMismatch {
            index: format!("{idx:?}"),
            scheme: *self,
        };
        let in_range = |v: usize| (1..=n).contains(&v);
        match (self.family, idx) {
            (Family::Bqp, MultiIndex::Bqp(i, j)) if in_range(i) && in_range(j) => {
                Ok((i - 1) * n + (j - 1))
            }
            (Family::Qap, MultiIndex::Qap(i, j, k, l))
                if [i, j, k, l].into_iter().all(in_range) =>
            {
                Ok((((i - 1) * n + (j - 1)) * n + (k - 1)) * n + (l - 1))
            }
            (Family::Phi, MultiIndex::Phi((i, j), (k, l))) => {
                let e = edge_index(i, j, n).map_err(|_| bad())?;
                let f = edge_index(k, l, n).map_err(|_| bad())?;
                Ok(e * binomial2(n) + f)
            }
            _ => Err(bad()),
        }
    }

    pub fn decode(&self, offset: usize) -> Result<MultiIndex, FamilyError> {
        if offset >= self.ambient_dim {
            return Err(FamilyError::OffsetOutOfRange {
                offset,
                dim: self.ambient_dim,
            });
        }
        let n = self.n;
        Ok(match self.family {
            Family::Bqp => MultiIndex::Bqp(offset / n + 1, offset % n + 1),
            Family::Qap => {
                let l = offset % n;
                let k = (offset / n) % n;
                let j = (offset / (n * n)) % n;
                let i = offset / (n * n * n);
                MultiIndex::Qap(i + 1, j + 1, k + 1, l + 1)
            }
            Family::Phi => {
                let m = binomial2(n);
                MultiIndex::Phi(
                    edge_from_index(offset / m, n)?,
                    edge_from_index(offset % m, n)?,
                )
            }
        })
    }

    /// Shorthand for `encode(MultiIndex::Bqp(i, j))`.
    pub fn x(&self, i: usize, j: usize) -> usize {
        self.encode(MultiIndex::Bqp(i, j)).expect("bqp index")
    }

    /// Shorthand for `encode(MultiIndex::Qap(i, j, k, l))`.
    pub fn y(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        self.encode(MultiIndex::Qap(i, j, k, l)).expect("qap index")
    }

    /// `z_{(i,j),(k,l)}`; both edges may be given in either orientation.
    pub fn z(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let e = (i.min(j), i.max(j));
        let f = (k.min(l), k.max(l));
        self.encode(MultiIndex::Phi(e, f)).expect("phi index")
    }
}

impl fmt::Display for IndexScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}) in dimension {}",
            self.family, self.n, self.ambient_dim
        )
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiIndex::Bqp(i, j) => write!(f, "x[{i},{j}]"),
            MultiIndex::Qap(i, j, k, l) => write!(f, "y[{i},{j},{k},{l}]"),
            MultiIndex::Phi((i, j), (k, l)) => write!(f, "z[{i}{j},{k}{l}]"),
        }
    }
}
