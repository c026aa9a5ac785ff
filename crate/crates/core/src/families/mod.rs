//! Index schemes and exact vertex generators for the Boolean quadric
//! polytope `BQP(m)`, the quadratic assignment polytope `QAP(n)` and the
//! edge-permutation polytope `φ_n`.
//!
//! Vertices are 0/1 vectors stored as ascending lists of one-positions over
//! flat 0-based offsets; semantic indices are 1-based and translated only by
//! [`IndexScheme`].

mod permutation;
mod scheme;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exactmath::QVector;

pub use permutation::{all_permutations, Permutation};
pub use scheme::{binomial2, edge_from_index, edge_index, edges, Family, IndexScheme, MultiIndex};

#[derive(Debug, thiserror::Error)]
pub enum FamilyError {
    #[error("{family}({n}) requires parameter >= {min}")]
    ParameterTooSmall {
        family: Family,
        n: usize,
        min: usize,
    },
    #[error("not a permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("label {0:?} is not a valid generator for this family")]
    InvalidLabel(String),
    #[error("invalid edge ({i}, {j}) of K_{n}")]
    InvalidEdge { i: usize, j: usize, n: usize },
    #[error("offset {offset} out of range for dimension {dim}")]
    OffsetOutOfRange { offset: usize, dim: usize },
    #[error("index {index} does not belong to scheme {scheme}")]
    IndexMismatch { index: String, scheme: IndexScheme },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),
    #[error("vertex file: {0}")]
    Io(#[from] std::io::Error),
    #[error("vertex file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Labelled list of distinct 0/1 vertices in a fixed coordinate scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    scheme: IndexScheme,
    labels: Vec<String>,
    vertices: Vec<Vec<usize>>,
}

/// On-disk form of a [`VertexSet`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexSetFile {
    pub family: Family,
    pub n: usize,
    pub ambient_dim: usize,
    pub labels: Vec<String>,
    pub vertices: Vec<Vec<usize>>,
}

impl VertexSet {
    pub fn new(
        scheme: IndexScheme,
        labels: Vec<String>,
        vertices: Vec<Vec<usize>>,
    ) -> Result<Self, FamilyError> {
        let invalid = |m: String| Err(FamilyError::InvalidVertexSet(m));
        if labels.len() != vertices.len() {
            return invalid(format!(
                "{} labels for {} vertices",
                labels.len(),
                vertices.len()
            ));
        }
        let mut seen = HashSet::with_capacity(vertices.len());
        for (k, v) in vertices.iter().enumerate() {
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return invalid(format!("vertex {k} offsets are not strictly ascending"));
            }
            if v.last().is_some_and(|&o| o >= scheme.ambient_dim) {
                return invalid(format!("vertex {k} exceeds ambient dimension"));
            }
            if !seen.insert(v.as_slice()) {
                return invalid(format!("vertex {k} is a duplicate"));
            }
        }
        Ok(VertexSet {
            scheme,
            labels,
            vertices,
        })
    }

    pub fn scheme(&self) -> &IndexScheme {
        &self.scheme
    }

    pub fn ambient_dim(&self) -> usize {
        self.scheme.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn vertex(&self, i: usize) -> &[usize] {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn dense(&self, i: usize) -> QVector {
        QVector::indicator(self.ambient_dim(), &self.vertices[i])
    }

    pub fn dense_all(&self) -> Vec<QVector> {
        (0..self.len()).map(|i| self.dense(i)).collect()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn index_of_vertex(&self, ones: &[usize]) -> Option<usize> {
        self.vertices.iter().position(|v| v == ones)
    }

    /// The generator permutation of vertex `i` (QAP and φ families only).
    pub fn permutation(&self, i: usize) -> Result<Permutation, FamilyError> {
        if !self.scheme.family.is_permutation_family() {
            return Err(FamilyError::InvalidLabel(self.labels[i].clone()));
        }
        Permutation::parse_one_line(&self.labels[i])
    }

    /// Vertex set restricted to the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> VertexSet {
        VertexSet {
            scheme: self.scheme,
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            vertices: indices.iter().map(|&i| self.vertices[i].clone()).collect(),
        }
    }

    /// Same vertices, as a set, ignoring order and labels.
    pub fn same_vertices(&self, other: &VertexSet) -> bool {
        let a: HashSet<&[usize]> = self.vertices.iter().map(Vec::as_slice).collect();
        let b: HashSet<&[usize]> = other.vertices.iter().map(Vec::as_slice).collect();
        self.scheme == other.scheme && a == b
    }

    pub fn to_file(&self) -> VertexSetFile {
        VertexSetFile {
            family: self.scheme.family,
            n: self.scheme.n,
            ambient_dim: self.scheme.ambient_dim,
            labels: self.labels.clone(),
            vertices: self.vertices.clone(),
        }
    }

    pub fn from_file(file: VertexSetFile) -> Result<Self, FamilyError> {
        let scheme = IndexScheme::for_family(file.family, file.n);
        if scheme.ambient_dim != file.ambient_dim {
            return Err(FamilyError::InvalidVertexSet(format!(
                "ambient_dim {} does not match {}",
                file.ambient_dim, scheme
            )));
        }
        Self::new(scheme, file.labels, file.vertices)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("vertex set serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, FamilyError> {
        Self::from_file(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<Self, FamilyError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), FamilyError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

fn require(family: Family, n: usize, min: usize) -> Result<(), FamilyError> {
    if n < min {
        Err(FamilyError::ParameterTooSmall { family, n, min })
    } else {
        Ok(())
    }
}

/// `u ⊗ u` for a bit vector `u`, as one-positions in `BQP(m)` coordinates.
pub fn bqp_vertex(bits: &[bool]) -> Vec<usize> {
    let m = bits.len();
    let on: Vec<usize> = (0..m).filter(|&i| bits[i]).collect();
    let mut ones = Vec::with_capacity(on.len() * on.len());
    for &i in &on {
        for &j in &on {
            ones.push(i * m + j);
        }
    }
    ones
}

pub fn bits_label(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(label: &str) -> Result<Vec<bool>, FamilyError> {
    label
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(FamilyError::InvalidLabel(label.to_string())),
        })
        .collect()
}

/// All `2^m` vertices of `BQP(m)`, bit vectors in lexicographic order.
pub fn bqp_vertices(m: usize) -> Result<VertexSet, FamilyError> {
    require(Family::Bqp, m, 2)?;
    let count = 1usize << m;
    let mut labels = Vec::with_capacity(count);
    let mut vertices = Vec::with_capacity(count);
    for code in 0..count {
        let bits: Vec<bool> = (0..m).map(|i| (code >> (m - 1 - i)) & 1 == 1).collect();
        labels.push(bits_label(&bits));
        vertices.push(bqp_vertex(&bits));
    }
    VertexSet::new(IndexScheme::bqp(m), labels, vertices)
}

/// `y = P_σ ⊗ P_σ`: `y_{ijkl} = [σ(i)=j]·[σ(k)=l]`.
pub fn qap_vertex(sigma: &Permutation) -> Vec<usize> {
    let n = sigma.n();
    let scheme = IndexScheme::qap(n);
    let mut ones = Vec::with_capacity(n * n);
    for i in 1..=n {
        for k in 1..=n {
            ones.push(scheme.y(i, sigma.apply(i), k, sigma.apply(k)));
        }
    }
    ones.sort_unstable();
    ones
}

/// All `n!` vertices of `QAP(n)`, generators in lexicographic order.
pub fn qap_vertices(n: usize) -> Result<VertexSet, FamilyError> {
    require(Family::Qap, n, 2)?;
    from_permutations(IndexScheme::qap(n), &all_permutations(n), qap_vertex)
}

/// Edge permutation matrix: `z_{e,f} = 1` iff `σ(e) = f`.
pub fn phi_vertex(sigma: &Permutation) -> Result<Vec<usize>, FamilyError> {
    let n = sigma.n();
    require(Family::Phi, n, 3)?;
    let scheme = IndexScheme::phi(n);
    let mut ones: Vec<usize> = edges(n)
        .into_iter()
        .map(|(i, j)| scheme.z(i, j, sigma.apply(i), sigma.apply(j)))
        .collect();
    ones.sort_unstable();
    Ok(ones)
}

/// All `n!` vertices of `φ_n`, generators in lexicographic order.
pub fn phi_vertices(n: usize) -> Result<VertexSet, FamilyError> {
    require(Family::Phi, n, 3)?;
    from_permutations(IndexScheme::phi(n), &all_permutations(n), |s| {
        phi_vertex(s).expect("n >= 3")
    })
}

/// `φ_3` in the classical display order: identity, the two 3-cycles, then
/// the three transpositions. The first three are the even permutations.
pub fn phi3_display_order() -> VertexSet {
    let order = ["123", "231", "312", "321", "213", "132"];
    let perms: Vec<Permutation> = order
        .iter()
        .map(|s| Permutation::parse_one_line(s).expect("static permutation"))
        .collect();
    from_permutations(IndexScheme::phi(3), &perms, |s| {
        phi_vertex(s).expect("n = 3")
    })
    .expect("distinct vertices")
}

pub fn family_vertices(family: Family, n: usize) -> Result<VertexSet, FamilyError> {
    match family {
        Family::Bqp => bqp_vertices(n),
        Family::Qap => qap_vertices(n),
        Family::Phi => phi_vertices(n),
    }
}

fn from_permutations(
    scheme: IndexScheme,
    perms: &[Permutation],
    vertex: impl Fn(&Permutation) -> Vec<usize>,
) -> Result<VertexSet, FamilyError> {
    let labels = perms.iter().map(Permutation::one_line).collect();
    let vertices = perms.iter().map(vertex).collect();
    VertexSet::new(scheme, labels, vertices)
}
