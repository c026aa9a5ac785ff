//! Face certification for vertex subsets of 0/1 polytopes.
//!
//! A subset `S` of the vertex set `V` is the vertex set of a face iff the
//! affine hull of `S` misses the convex hull of `V \ S`. [`FaceTester`]
//! decides this with two exact LPs in the affine-hull frame of `V`:
//!
//! * the support LP maximizes the gap `ε ∈ [0, 1]` of a hyperplane
//!   `a·w = b` through `S` with `a ∈ [-1, 1]^d`, `a·w_t ≤ b - ε` off `S`;
//! * if the optimum gap is zero, the witness LP finds affine weights on `S`
//!   and convex weights on `V \ S` with a common point.
//!
//! The support LP is solved by constraint generation: only the outside
//! vertices that have been violated so far enter the LP, and the final
//! hyperplane is checked against all of `V`. When the restricted optimum is
//! zero, the witness LP over the same restricted vertices is feasible, and
//! its solution is a witness for `V` itself.
//!
//! Every answer is re-checked by [`verify_face_certificate`] or
//! [`verify_nonface_witness`], which only substitute vertices into the
//! certificate in ambient coordinates.

mod equations;
mod scan;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::exactmath::{affine_hull_frame, AffineHullFrame, QVector, Rational};
use crate::families::{Family, VertexSet};
use crate::simplex::{
    lp_solve, verify_lp_certificate, LinearProgram, LpResult, Relation, VarBounds,
};

pub use equations::{
    face_by_equations, face_chain, EquationCheck, FaceByEquations, FaceChain, FaceEquation, Sense,
};
pub use scan::{k_neighborly_scan, Counterexample, NeighborlinessReport, ScanOptions};

#[derive(Debug, thiserror::Error)]
pub enum FaceError {
    #[error("subset is empty")]
    EmptySubset,
    #[error("subset must be a proper subset of the vertex set")]
    NotProper,
    #[error("vertex index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("vertex index {0} repeated in subset")]
    DuplicateIndex(usize),
    #[error("k = {k} must satisfy 1 <= k < {len}")]
    BadK { k: usize, len: usize },
    #[error("symmetry reduction needs the full vertex set of a permutation family: {0}")]
    NoSymmetry(String),
    #[error("coordinate {coord} out of range for dimension {dim}")]
    BadCoordinate { coord: usize, dim: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// Description of the reduced frame a certificate was computed in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameInfo {
    pub dim: usize,
    pub origin_vertex: usize,
    pub pivot_columns: Vec<usize>,
    /// Vertices of the face the LPs ran in.
    pub face_vertices: usize,
}

/// Supporting hyperplane `a·x = b` through `S` with `a·v ≤ b - ε` elsewhere,
/// stated in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCertificate {
    #[serde(rename = "a")]
    pub normal: QVector,
    #[serde(rename = "b")]
    pub offset: Rational,
    #[serde(rename = "epsilon")]
    pub gap: Rational,
    pub frame: FrameInfo,
}

/// A point that lies both in `aff(S)` and in `conv(V \ S)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonFaceWitness {
    /// Affine weights over `S` in ascending vertex order.
    pub alpha: QVector,
    /// Convex weights over `V \ S` in ascending vertex order.
    pub mu: QVector,
    pub point: QVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FaceVerdict {
    Face(FaceCertificate),
    NonFace(NonFaceWitness),
}

impl FaceVerdict {
    pub fn is_face(&self) -> bool {
        matches!(self, FaceVerdict::Face(_))
    }
}

/// Certificate file: the verdict plus enough context to re-check it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub family: Family,
    pub n: usize,
    pub ambient_dim: usize,
    pub subset: Vec<usize>,
    #[serde(flatten)]
    pub verdict: FaceVerdict,
}

impl CertificateFile {
    pub fn new(vertices: &VertexSet, subset: &[usize], verdict: FaceVerdict) -> Self {
        CertificateFile {
            family: vertices.scheme().family,
            n: vertices.scheme().n,
            ambient_dim: vertices.ambient_dim(),
            subset: subset.to_vec(),
            verdict,
        }
    }

    /// Whether the file is about this vertex set at all (family, parameter
    /// and vector lengths).
    pub fn matches(&self, vertices: &VertexSet) -> bool {
        let s = vertices.scheme();
        let dims_ok = match &self.verdict {
            FaceVerdict::Face(c) => c.normal.dim() == s.ambient_dim,
            FaceVerdict::NonFace(w) => w.point.dim() == s.ambient_dim,
        };
        self.family == s.family && self.n == s.n && self.ambient_dim == s.ambient_dim && dims_ok
    }

    pub fn verify(&self, vertices: &VertexSet) -> bool {
        match &self.verdict {
            FaceVerdict::Face(c) => verify_face_certificate(vertices, &self.subset, c),
            FaceVerdict::NonFace(w) => verify_nonface_witness(vertices, &self.subset, w),
        }
    }
}

/// Sorted copy of `subset` after checking the preconditions of [`is_face`].
pub fn normalize_subset(len: usize, subset: &[usize]) -> Result<Vec<usize>, FaceError> {
    if subset.is_empty() {
        return Err(FaceError::EmptySubset);
    }
    let mut s = subset.to_vec();
    s.sort_unstable();
    for w in s.windows(2) {
        if w[0] == w[1] {
            return Err(FaceError::DuplicateIndex(w[0]));
        }
    }
    if let Some(&index) = s.iter().find(|&&i| i >= len) {
        return Err(FaceError::IndexOutOfRange { index, len });
    }
    if s.len() == len {
        return Err(FaceError::NotProper);
    }
    Ok(s)
}

fn complement(len: usize, subset: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; len];
    for &i in subset {
        inside[i] = true;
    }
    (0..len).filter(|&i| !inside[i]).collect()
}

/// Vertices of a face of `conv(V)` in the affine-hull frame of that face.
struct LocalFrame {
    members: Vec<usize>,
    frame: AffineHullFrame,
    coords: Vec<QVector>,
}

impl LocalFrame {
    fn new(vertices: &VertexSet, members: Vec<usize>) -> Self {
        let dense: Vec<QVector> = members.iter().map(|&i| vertices.dense(i)).collect();
        let frame = affine_hull_frame(&dense).expect("vertex set has a common dimension");
        let coords = dense.iter().map(|v| frame.coords_unchecked(v)).collect();
        LocalFrame {
            members,
            frame,
            coords,
        }
    }

    fn info(&self) -> FrameInfo {
        FrameInfo {
            dim: self.frame.dim(),
            origin_vertex: self.members[0],
            pivot_columns: self.frame.pivot_columns.clone(),
            face_vertices: self.members.len(),
        }
    }
}

/// Answer inside a local frame, in ambient coordinates but with `mu`
/// indexed by the local complement.
enum LocalVerdict {
    Face {
        normal: QVector,
        offset: Rational,
        gap: Rational,
    },
    NonFace {
        alpha: QVector,
        mu: QVector,
    },
}

/// Smallest face of the unit cube containing `S`, as the inequality
/// `c·x ≤ c0` with `c = +1` on coordinates that are 1 throughout `S` and
/// `-1` on those that are 0 throughout `S`.
struct CubeFace {
    normal: QVector,
    offset: Rational,
    c0: i64,
    values: Vec<i64>,
}

impl CubeFace {
    fn new(vertices: &VertexSet, s: &[usize]) -> Self {
        let dim = vertices.ambient_dim();
        let mut count = vec![0usize; dim];
        for &v in s {
            for &o in vertices.vertex(v) {
                count[o] += 1;
            }
        }
        let sign: Vec<i64> = count
            .iter()
            .map(|&c| match c {
                0 => -1,
                c if c == s.len() => 1,
                _ => 0,
            })
            .collect();
        let c0 = count.iter().filter(|&&c| c == s.len()).count() as i64;
        let values = vertices
            .vertices()
            .iter()
            .map(|ones| ones.iter().map(|&o| sign[o]).sum())
            .collect();
        CubeFace {
            normal: QVector::from_ints(sign),
            offset: Rational::from_integer(c0),
            c0,
            values,
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.values[v] == self.c0
    }
}

/// Decides face membership for subsets of a fixed vertex set.
///
/// A subset `S` is first placed in its smallest cube face `F`, which is a
/// face of `conv(V)` since `V` is 0/1. If `F ∩ V = S` the cube inequality
/// is the certificate. Otherwise `S` is a face of `conv(V)` iff it is a face
/// of `conv(F ∩ V)`, and the LPs run in the affine-hull frame of `F ∩ V`;
/// a supporting hyperplane found there is tilted by a multiple of the cube
/// inequality to separate the rest of `V`.
pub struct FaceTester<'a> {
    vertices: &'a VertexSet,
    full: OnceLock<LocalFrame>,
}

impl<'a> FaceTester<'a> {
    pub fn new(vertices: &'a VertexSet) -> Self {
        FaceTester {
            vertices,
            full: OnceLock::new(),
        }
    }

    pub fn vertices(&self) -> &VertexSet {
        self.vertices
    }

    /// Affine-hull frame of the whole vertex set.
    pub fn frame(&self) -> &AffineHullFrame {
        &self.full_frame().frame
    }

    fn full_frame(&self) -> &LocalFrame {
        self.full
            .get_or_init(|| LocalFrame::new(self.vertices, (0..self.vertices.len()).collect()))
    }

    pub fn is_face(&self, subset: &[usize]) -> Result<FaceVerdict, FaceError> {
        let s = normalize_subset(self.vertices.len(), subset)?;
        let cube = CubeFace::new(self.vertices, &s);
        let members: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| cube.contains(v))
            .collect();
        let verdict = if members.len() == s.len() {
            FaceVerdict::Face(FaceCertificate {
                normal: cube.normal,
                offset: cube.offset,
                gap: Rational::one(),
                frame: FrameInfo {
                    dim: 0,
                    origin_vertex: s[0],
                    pivot_columns: Vec::new(),
                    face_vertices: s.len(),
                },
            })
        } else {
            let local_owned;
            let local = if members.len() == self.vertices.len() {
                self.full_frame()
            } else {
                local_owned = LocalFrame::new(self.vertices, members);
                &local_owned
            };
            let local_s: Vec<usize> = s
                .iter()
                .map(|v| {
                    local
                        .members
                        .binary_search(v)
                        .expect("S lies in its cube face")
                })
                .collect();
            match solve_local(local, &local_s)? {
                LocalVerdict::Face {
                    normal,
                    offset,
                    gap,
                } => FaceVerdict::Face(self.tilt(local, &cube, normal, offset, gap)),
                LocalVerdict::NonFace { alpha, mu } => {
                    FaceVerdict::NonFace(self.lift_witness(local, &s, &local_s, alpha, mu))
                }
            }
        };
        let ok = match &verdict {
            FaceVerdict::Face(c) => verify_face_certificate(self.vertices, &s, c),
            FaceVerdict::NonFace(w) => verify_nonface_witness(self.vertices, &s, w),
        };
        if !ok {
            return Err(FaceError::InternalInconsistency(
                "certificate failed substitution".into(),
            ));
        }
        Ok(verdict)
    }

    /// `a·x ≤ b` separates `S` inside the cube face; add `λ(c·x - c0)` with
    /// `λ` large enough that the gap also holds off the cube face.
    fn tilt(
        &self,
        local: &LocalFrame,
        cube: &CubeFace,
        mut normal: QVector,
        mut offset: Rational,
        gap: Rational,
    ) -> FaceCertificate {
        let mut lambda = Rational::zero();
        for v in 0..self.vertices.len() {
            if cube.contains(v) {
                continue;
            }
            // c·v ≤ c0 - 1 on 0/1 points off the cube face.
            let need = &normal.dot_ones(self.vertices.vertex(v)) - &offset + &gap;
            let drop = Rational::from_integer(cube.c0 - cube.values[v]);
            let l = need / drop;
            if l > lambda {
                lambda = l;
            }
        }
        if !lambda.is_zero() {
            normal.axpy(&lambda, &cube.normal);
            offset += &lambda * &cube.offset;
        }
        FaceCertificate {
            normal,
            offset,
            gap,
            frame: local.info(),
        }
    }

    fn lift_witness(
        &self,
        local: &LocalFrame,
        s: &[usize],
        local_s: &[usize],
        alpha: QVector,
        local_mu: QVector,
    ) -> NonFaceWitness {
        let outside = complement(self.vertices.len(), s);
        let local_outside = complement(local.members.len(), local_s);
        let mut mu = QVector::zeros(outside.len());
        for (w, &t) in local_mu.iter().zip(&local_outside) {
            let pos = outside
                .binary_search(&local.members[t])
                .expect("local outside vertex lies outside");
            mu[pos] = w.clone();
        }
        let mut point = QVector::zeros(self.vertices.ambient_dim());
        for (w, &v) in alpha.iter().zip(s) {
            for &o in self.vertices.vertex(v) {
                point[o] += w;
            }
        }
        NonFaceWitness { alpha, mu, point }
    }
}

const MIN_BATCH: usize = 4;

fn lp_failure(what: &str) -> FaceError {
    FaceError::InternalInconsistency(what.to_string())
}

/// Support LP by constraint generation, then the witness LP on a zero gap.
fn solve_local(local: &LocalFrame, s: &[usize]) -> Result<LocalVerdict, FaceError> {
    let d = local.frame.dim();
    let outside = complement(local.members.len(), s);
    let batch = (d / 4).max(MIN_BATCH);
    let mut active: Vec<usize> = Vec::new();
    loop {
        let lp = support_lp(local, s, &active);
        let res = lp_solve(&lp).map_err(|e| lp_failure(&e.to_string()))?;
        if !verify_lp_certificate(&lp, &res) {
            return Err(lp_failure("support LP certificate failed"));
        }
        let LpResult::Optimal { primal, .. } = res else {
            return Err(lp_failure("support LP is not optimal"));
        };
        let a = QVector::from_vec(primal[..d].to_vec());
        let b = primal[d].clone();
        let eps = primal[d + 1].clone();
        if eps.is_zero() {
            return witness_lp(local, s, &active);
        }
        let mut violated: Vec<(Rational, usize)> = outside
            .iter()
            .filter(|t| active.binary_search(t).is_err())
            .filter_map(|&t| {
                let slack = &a.dot(&local.coords[t]) - &b + &eps;
                slack.is_positive().then_some((slack, t))
            })
            .collect();
        if violated.is_empty() {
            // Back to ambient coordinates: a_amb[P_i] = a_i, b shifted by
            // the origin.
            let mut normal = QVector::zeros(local.frame.ambient_dim());
            let mut offset = b;
            for (ai, &c) in a.iter().zip(&local.frame.pivot_columns) {
                normal[c] = ai.clone();
                offset += ai * &local.frame.origin[c];
            }
            return Ok(LocalVerdict::Face {
                normal,
                offset,
                gap: eps,
            });
        }
        violated.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        active.extend(violated.into_iter().take(batch).map(|(_, t)| t));
        active.sort_unstable();
    }
}

/// Variables: `a_0..a_{d-1}`, `b`, `ε`.
fn support_lp(local: &LocalFrame, s: &[usize], active: &[usize]) -> LinearProgram {
    let d = local.frame.dim();
    let mut lp = LinearProgram::new(d + 2);
    let mut obj = QVector::zeros(d + 2);
    obj[d + 1] = Rational::one();
    lp.maximize(obj).expect("objective length");
    for j in 0..d {
        lp.set_bounds(j, VarBounds::between(-Rational::one(), Rational::one()))
            .expect("variable");
    }
    lp.set_bounds(d + 1, VarBounds::between(Rational::zero(), Rational::one()))
        .expect("variable");
    let row = |t: usize, eps: bool| {
        let mut r = local.coords[t].clone().into_inner();
        r.push(-Rational::one());
        r.push(if eps {
            Rational::one()
        } else {
            Rational::zero()
        });
        QVector::from_vec(r)
    };
    for &v in s {
        lp.add_constraint(row(v, false), Relation::Eq, Rational::zero())
            .expect("row length");
    }
    for &t in active {
        lp.add_constraint(row(t, true), Relation::Le, Rational::zero())
            .expect("row length");
    }
    lp
}

/// Variables: `alpha` over `s`, then `mu` over `active`. The returned `mu`
/// is indexed by the local complement of `s`.
fn witness_lp(
    local: &LocalFrame,
    s: &[usize],
    active: &[usize],
) -> Result<LocalVerdict, FaceError> {
    let d = local.frame.dim();
    let (ns, nt) = (s.len(), active.len());
    let mut lp = LinearProgram::new(ns + nt);
    for j in ns..ns + nt {
        lp.set_bounds(j, VarBounds::nonnegative())
            .expect("variable");
    }
    for i in 0..d {
        let mut r = QVector::zeros(ns + nt);
        for (k, &v) in s.iter().enumerate() {
            r[k] = local.coords[v][i].clone();
        }
        for (k, &t) in active.iter().enumerate() {
            r[ns + k] = -&local.coords[t][i];
        }
        lp.add_constraint(r, Relation::Eq, Rational::zero())
            .expect("row");
    }
    let mut sum_alpha = QVector::zeros(ns + nt);
    let mut sum_mu = QVector::zeros(ns + nt);
    for k in 0..ns {
        sum_alpha[k] = Rational::one();
    }
    for k in ns..ns + nt {
        sum_mu[k] = Rational::one();
    }
    lp.add_constraint(sum_alpha, Relation::Eq, Rational::one())
        .expect("row");
    lp.add_constraint(sum_mu, Relation::Eq, Rational::one())
        .expect("row");
    let res = lp_solve(&lp).map_err(|e| lp_failure(&e.to_string()))?;
    let LpResult::Optimal { primal, .. } = res else {
        return Err(lp_failure("zero gap but the witness LP is infeasible"));
    };
    let alpha = QVector::from_vec(primal[..ns].to_vec());
    let outside = complement(local.members.len(), s);
    let mut mu = QVector::zeros(outside.len());
    for (k, &t) in active.iter().enumerate() {
        let pos = outside
            .binary_search(&t)
            .expect("active vertex lies outside");
        mu[pos] = primal[ns + k].clone();
    }
    Ok(LocalVerdict::NonFace { alpha, mu })
}

/// One-shot [`FaceTester::is_face`].
pub fn is_face(vertices: &VertexSet, subset: &[usize]) -> Result<FaceVerdict, FaceError> {
    FaceTester::new(vertices).is_face(subset)
}

/// `a·v = b` on `S`, `a·v ≤ b - ε` off `S`, `ε > 0`, by substitution.
pub fn verify_face_certificate(
    vertices: &VertexSet,
    subset: &[usize],
    cert: &FaceCertificate,
) -> bool {
    let Ok(s) = normalize_subset(vertices.len(), subset) else {
        return false;
    };
    if cert.normal.dim() != vertices.ambient_dim() || !cert.gap.is_positive() {
        return false;
    }
    let bound = &cert.offset - &cert.gap;
    let mut k = 0;
    for i in 0..vertices.len() {
        let val = cert.normal.dot_ones(vertices.vertex(i));
        if k < s.len() && s[k] == i {
            k += 1;
            if val != cert.offset {
                return false;
            }
        } else if val > bound {
            return false;
        }
    }
    true
}

/// `Σ α_s v_s = Σ μ_t v_t = p`, `Σ α = Σ μ = 1`, `μ ≥ 0`, by substitution.
pub fn verify_nonface_witness(
    vertices: &VertexSet,
    subset: &[usize],
    wit: &NonFaceWitness,
) -> bool {
    let Ok(s) = normalize_subset(vertices.len(), subset) else {
        return false;
    };
    let outside = complement(vertices.len(), &s);
    let dim = vertices.ambient_dim();
    if wit.alpha.dim() != s.len() || wit.mu.dim() != outside.len() || wit.point.dim() != dim {
        return false;
    }
    if !wit.alpha.sum().is_one()
        || !wit.mu.sum().is_one()
        || wit.mu.iter().any(Rational::is_negative)
    {
        return false;
    }
    let combo = |weights: &QVector, idx: &[usize]| {
        let mut p = QVector::zeros(dim);
        for (w, &v) in weights.iter().zip(idx) {
            if w.is_zero() {
                continue;
            }
            for &o in vertices.vertex(v) {
                p[o] += w;
            }
        }
        p
    };
    combo(&wit.alpha, &s) == wit.point && combo(&wit.mu, &outside) == wit.point
}
