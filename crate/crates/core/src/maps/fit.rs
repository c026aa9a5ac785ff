//! Fitting affine maps to vertex correspondences.

use serde::{Deserialize, Serialize};

use crate::exactmath::{affine_hull_frame, independent_rows, QMatrix, QVector, Rational};
use crate::families::{all_permutations, VertexSet};

use super::{AffineMap, MapError, VertexCorrespondence};

#[derive(Debug, Clone)]
pub enum AffineFit {
    Fitted {
        map: AffineMap,
        /// `dim aff(V) = dim aff(W)`: the map is an affine isomorphism of
        /// the hulls carrying `V` onto `W`.
        isomorphism: bool,
        domain_dim: usize,
        codomain_dim: usize,
    },
    /// An affine dependency `λ` of `V` (`Σ λ = 0`, `Σ λ_i v_i = 0`) with
    /// `Σ λ_i w_{corr(i)} ≠ 0`, so no affine map fits.
    Inconsistent { dependency: QVector },
}

impl AffineFit {
    pub fn map(&self) -> Option<&AffineMap> {
        match self {
            AffineFit::Fitted { map, .. } => Some(map),
            AffineFit::Inconsistent { .. } => None,
        }
    }

    pub fn is_isomorphism(&self) -> bool {
        matches!(
            self,
            AffineFit::Fitted {
                isomorphism: true,
                ..
            }
        )
    }
}

/// Affine basis of `V` and every vertex's coordinates in it, shared by all
/// correspondences tried against the same `V`.
struct Basis {
    /// `v_0` then affinely independent vertices `v_{b_1}, …, v_{b_d}`.
    points: Vec<usize>,
    /// `v_i - v_0 = Σ_k λ_{ik} (v_{b_k} - v_0)`.
    lambdas: Vec<QVector>,
    /// `C⁻¹` for `C` with columns the frame coordinates of `v_{b_k} - v_0`.
    c_inv: QMatrix,
    pivots: Vec<usize>,
    dim: usize,
}

impl Basis {
    fn new(v: &VertexSet) -> Self {
        let dense = v.dense_all();
        let frame = affine_hull_frame(&dense).expect("common dimension");
        let coords: Vec<QVector> = dense.iter().map(|p| frame.coords_unchecked(p)).collect();
        let chosen = independent_rows(&coords);
        let d = frame.dim();
        let mut c = QMatrix::zeros(d, d);
        for (k, &b) in chosen.iter().enumerate() {
            for r in 0..d {
                c[(r, k)] = coords[b][r].clone();
            }
        }
        let c_inv = c.inverse().expect("independent frame coordinates");
        let lambdas = coords
            .iter()
            .map(|w| c_inv.mul_vec(w).expect("shape"))
            .collect();
        let mut points = vec![0];
        points.extend(chosen);
        Basis {
            points,
            lambdas,
            c_inv,
            pivots: frame.pivot_columns,
            dim: d,
        }
    }

    /// Predicted image of vertex `i` given the images of the basis points.
    fn predict(&self, i: usize, w0: &QVector, deltas: &[QVector]) -> QVector {
        let mut p = w0.clone();
        for (l, dl) in self.lambdas[i].iter().zip(deltas) {
            if !l.is_zero() {
                p.axpy(l, dl);
            }
        }
        p
    }
}

fn affine_dim(w: &VertexSet) -> usize {
    affine_hull_frame(&w.dense_all())
        .map(|f| f.dim())
        .unwrap_or(0)
}

fn fit_with(
    basis: &Basis,
    v: &VertexSet,
    w: &VertexSet,
    corr: &VertexCorrespondence,
    w_dim: usize,
) -> Result<AffineFit, MapError> {
    let w0 = w.dense(corr.image(0));
    let deltas: Vec<QVector> = basis.points[1..]
        .iter()
        .map(|&b| w.dense(corr.image(b)).sub(&w0))
        .collect();
    for i in 0..v.len() {
        if basis.predict(i, &w0, &deltas) != w.dense(corr.image(i)) {
            // v_i - v_0 - Σ λ_k (v_{b_k} - v_0) = 0 but its image is not.
            let mut dep = QVector::zeros(v.len());
            dep[i] += &Rational::one();
            let mut lsum = Rational::zero();
            for (l, &b) in basis.lambdas[i].iter().zip(&basis.points[1..]) {
                dep[b] -= l;
                lsum += l;
            }
            dep[0] += &(lsum - Rational::one());
            return Ok(AffineFit::Inconsistent { dependency: dep });
        }
    }
    // x ↦ w_0 + D C⁻¹ (x - v_0)[P]
    let (rows, cols) = (w.ambient_dim(), v.ambient_dim());
    let mut linear = QMatrix::zeros(rows, cols);
    for r in 0..rows {
        for (j, &pc) in basis.pivots.iter().enumerate() {
            let mut acc = Rational::zero();
            for (k, dk) in deltas.iter().enumerate() {
                if !dk[r].is_zero() {
                    acc += &dk[r] * &basis.c_inv[(k, j)];
                }
            }
            linear[(r, pc)] = acc;
        }
    }
    let lv0 = linear.mul_ones(v.vertex(0));
    let offset = w0.sub(&lv0);
    let map = AffineMap::new(
        format!("fit[{}]", corr.rule),
        *v.scheme(),
        *w.scheme(),
        linear,
        offset,
    )?;
    Ok(AffineFit::Fitted {
        map,
        isomorphism: basis.dim == w_dim,
        domain_dim: basis.dim,
        codomain_dim: w_dim,
    })
}

/// Affine map with `v_i ↦ w_{corr(i)}` for all `i`, or a dependency of `V`
/// that the correspondence breaks.
pub fn fit_affine_map(
    v: &VertexSet,
    w: &VertexSet,
    corr: &VertexCorrespondence,
) -> Result<AffineFit, MapError> {
    if v.len() != w.len() || corr.len() != v.len() {
        return Err(MapError::SizeMismatch {
            left: v.len(),
            right: w.len(),
        });
    }
    if v.is_empty() {
        return Err(MapError::SizeMismatch { left: 0, right: 0 });
    }
    fit_with(&Basis::new(v), v, w, corr, affine_dim(w))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsoSearch {
    pub bijections_tried: u64,
    /// Bijections admitting some affine map (isomorphism or not).
    pub affine_fits: u64,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    /// First bijection, in lexicographic order, that fits an isomorphism.
    pub found: Option<VertexCorrespondence>,
    #[serde(skip)]
    pub map: Option<AffineMap>,
}

/// Tries every bijection `V → W` in lexicographic order and stops at the
/// first that fits an affine isomorphism.
pub fn brute_force_iso_search(
    v: &VertexSet,
    w: &VertexSet,
    max_vertices: usize,
) -> Result<IsoSearch, MapError> {
    if v.len() != w.len() {
        return Err(MapError::SizeMismatch {
            left: v.len(),
            right: w.len(),
        });
    }
    if v.len() > max_vertices {
        return Err(MapError::TooManyVertices {
            len: v.len(),
            cap: max_vertices,
        });
    }
    if v.is_empty() {
        return Err(MapError::SizeMismatch { left: 0, right: 0 });
    }
    let basis = Basis::new(v);
    let w_dim = affine_dim(w);
    let mut out = IsoSearch {
        bijections_tried: 0,
        affine_fits: 0,
        domain_dim: basis.dim,
        codomain_dim: w_dim,
        found: None,
        map: None,
    };
    for p in all_permutations(v.len()) {
        out.bijections_tried += 1;
        let images: Vec<usize> = p.images().iter().map(|&x| x - 1).collect();
        let corr = VertexCorrespondence::new(format!("bijection {}", p.one_line()), images)?;
        if let AffineFit::Fitted {
            map, isomorphism, ..
        } = fit_with(&basis, v, w, &corr, w_dim)?
        {
            out.affine_fits += 1;
            if isomorphism {
                out.found = Some(corr);
                out.map = Some(map);
                break;
            }
        }
    }
    Ok(out)
}
