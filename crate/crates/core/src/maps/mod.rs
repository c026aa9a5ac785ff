//! Exact affine maps between family coordinate spaces.

mod constructions;
mod fit;

use serde::{Deserialize, Serialize};

use crate::exactmath::{QMatrix, QVector, Rational};
use crate::faces::FaceError;
use crate::families::{FamilyError, IndexScheme, VertexSet};

pub use constructions::{
    lemma1_face_iso, lemma1_h, prop1_projection, thm1_embedding, thm2_consistency, thm2_face_iso,
    FaceIso, Thm1Embedding,
};
pub use fit::{brute_force_iso_search, fit_affine_map, AffineFit, IsoSearch};

#[derive(Debug, thiserror::Error)]
pub enum MapError {
    #[error("{what} needs parameter >= {min}, got {n}")]
    ParameterTooSmall {
        what: &'static str,
        n: usize,
        min: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vertex sets differ in size: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("{len} vertices exceed the search cap of {cap}")]
    TooManyVertices { len: usize, cap: usize },
    #[error("correspondence is not a bijection: {0}")]
    NotBijective(String),
    #[error("map file: {0}")]
    InvalidFile(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Face(#[from] FaceError),
}

/// `x ↦ linear·x + offset` between two coordinate schemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub name: String,
    pub domain: IndexScheme,
    pub codomain: IndexScheme,
    pub linear: QMatrix,
    pub offset: QVector,
}

/// Serialized form of an [`AffineMap`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub name: String,
    pub domain: IndexScheme,
    pub codomain: IndexScheme,
    /// Nonzero entries `(row, column, value)`.
    pub linear: Vec<(usize, usize, Rational)>,
    pub offset: QVector,
}

impl AffineMap {
    pub fn new(
        name: impl Into<String>,
        domain: IndexScheme,
        codomain: IndexScheme,
        linear: QMatrix,
        offset: QVector,
    ) -> Result<Self, MapError> {
        let shape_ok = linear.rows() == codomain.ambient_dim && linear.cols() == domain.ambient_dim;
        if !shape_ok {
            return Err(MapError::DimensionMismatch {
                expected: codomain.ambient_dim * domain.ambient_dim,
                found: linear.rows() * linear.cols(),
            });
        }
        if offset.dim() != codomain.ambient_dim {
            return Err(MapError::DimensionMismatch {
                expected: codomain.ambient_dim,
                found: offset.dim(),
            });
        }
        Ok(AffineMap {
            name: name.into(),
            domain,
            codomain,
            linear,
            offset,
        })
    }

    pub fn apply(&self, x: &QVector) -> Result<QVector, MapError> {
        let lin = self
            .linear
            .mul_vec(x)
            .map_err(|_| MapError::DimensionMismatch {
                expected: self.domain.ambient_dim,
                found: x.dim(),
            })?;
        Ok(lin.add(&self.offset))
    }

    /// Image of the 0/1 point with the given one-positions.
    pub fn apply_ones(&self, ones: &[usize]) -> QVector {
        self.linear.mul_ones(ones).add(&self.offset)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap, MapError> {
        if inner.codomain != self.domain {
            return Err(MapError::DimensionMismatch {
                expected: self.domain.ambient_dim,
                found: inner.codomain.ambient_dim,
            });
        }
        let linear = self.linear.mul(&inner.linear).expect("shapes checked");
        let offset = self.apply(&inner.offset)?;
        AffineMap::new(
            format!("{} ∘ {}", self.name, inner.name),
            inner.domain,
            self.codomain,
            linear,
            offset,
        )
    }

    /// Images of all vertices of `v` that are again 0/1 points; `None` for
    /// any vertex whose image leaves `{0,1}^d`.
    pub fn image_vertices(&self, v: &VertexSet) -> Result<Vec<Option<Vec<usize>>>, MapError> {
        if v.scheme().ambient_dim != self.domain.ambient_dim {
            return Err(MapError::DimensionMismatch {
                expected: self.domain.ambient_dim,
                found: v.ambient_dim(),
            });
        }
        Ok(v.vertices()
            .iter()
            .map(|ones| zero_one_support(&self.apply_ones(ones)))
            .collect())
    }

    pub fn to_file(&self) -> MapFile {
        MapFile {
            name: self.name.clone(),
            domain: self.domain,
            codomain: self.codomain,
            linear: self
                .linear
                .triplets()
                .map(|(i, j, v)| (i, j, v.clone()))
                .collect(),
            offset: self.offset.clone(),
        }
    }

    pub fn from_file(file: MapFile) -> Result<Self, MapError> {
        let (rows, cols) = (file.codomain.ambient_dim, file.domain.ambient_dim);
        let mut linear = QMatrix::zeros(rows, cols);
        for (i, j, v) in file.linear {
            if i >= rows || j >= cols {
                return Err(MapError::InvalidFile(format!(
                    "entry ({i}, {j}) outside {rows}x{cols}"
                )));
            }
            linear[(i, j)] = v;
        }
        AffineMap::new(file.name, file.domain, file.codomain, linear, file.offset)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("map serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, MapError> {
        let file: MapFile =
            serde_json::from_str(s).map_err(|e| MapError::InvalidFile(e.to_string()))?;
        AffineMap::from_file(file)
    }
}

/// One-positions of a 0/1 vector, or `None` if some entry is not 0 or 1.
pub fn zero_one_support(q: &QVector) -> Option<Vec<usize>> {
    let mut ones = Vec::new();
    for (i, v) in q.iter().enumerate() {
        if v.is_one() {
            ones.push(i);
        } else if !v.is_zero() {
            return None;
        }
    }
    Some(ones)
}

/// Affine functional `Σ c_i x_i + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm {
    pub coeffs: Vec<(usize, Rational)>,
    pub constant: Rational,
}

impl LinearForm {
    pub fn eval_ones(&self, ones: &[usize]) -> Rational {
        let mut acc = self.constant.clone();
        for (c, v) in &self.coeffs {
            if ones.binary_search(c).is_ok() {
                acc += v;
            }
        }
        acc
    }

    /// `Σ_{c ∈ plus} x_c - Σ_{c ∈ minus} x_c + constant`.
    pub fn signed_sum(plus: &[usize], minus: &[usize], constant: i64) -> Self {
        let coeffs = plus
            .iter()
            .map(|&c| (c, Rational::one()))
            .chain(minus.iter().map(|&c| (c, -Rational::one())))
            .collect();
        LinearForm {
            coeffs,
            constant: Rational::from_integer(constant),
        }
    }
}

/// Bijection from the vertices of one set (by index) onto another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCorrespondence {
    /// How generators correspond, in words.
    pub rule: String,
    /// `images[i]` is the index matched with domain vertex `i`.
    pub images: Vec<usize>,
}

impl VertexCorrespondence {
    pub fn new(rule: impl Into<String>, images: Vec<usize>) -> Result<Self, MapError> {
        let mut seen = vec![false; images.len()];
        for &j in &images {
            if j >= images.len() || std::mem::replace(&mut seen[j], true) {
                return Err(MapError::NotBijective(format!(
                    "image {j} repeated or out of range"
                )));
            }
        }
        Ok(VertexCorrespondence {
            rule: rule.into(),
            images,
        })
    }

    pub fn identity(len: usize) -> Self {
        VertexCorrespondence {
            rule: "identity".into(),
            images: (0..len).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }
}

/// `map` sends each vertex `i` of `v` exactly onto vertex `corr(i)` of `w`.
pub fn map_respects(
    map: &AffineMap,
    v: &VertexSet,
    w: &VertexSet,
    corr: &VertexCorrespondence,
) -> bool {
    corr.len() == v.len()
        && v.len() == w.len()
        && (0..v.len()).all(|i| map.apply_ones(v.vertex(i)) == w.dense(corr.image(i)))
}
