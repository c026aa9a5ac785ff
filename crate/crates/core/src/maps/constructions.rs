//! The explicit maps between QAP, BQP and φ coordinates.

use crate::exactmath::{QMatrix, QVector, Rational};
use crate::faces::{face_by_equations, FaceByEquations, FaceEquation, NonFaceWitness};
use crate::families::{
    bits_label, bqp_vertices, edges, phi_vertices, IndexScheme, Permutation, VertexSet,
};

use super::{AffineMap, LinearForm, MapError, VertexCorrespondence};

fn require(what: &'static str, n: usize, min: usize) -> Result<(), MapError> {
    if n < min {
        Err(MapError::ParameterTooSmall { what, n, min })
    } else {
        Ok(())
    }
}

/// `z_{ij,kl} = y_{ikjl} + y_{iljk}` from `QAP(n)` space onto `φ_n` space.
pub fn prop1_projection(n: usize) -> Result<AffineMap, MapError> {
    require("prop1_projection", n, 3)?;
    let qap = IndexScheme::qap(n);
    let phi = IndexScheme::phi(n);
    let mut linear = QMatrix::zeros(phi.ambient_dim, qap.ambient_dim);
    for &(i, j) in &edges(n) {
        for &(k, l) in &edges(n) {
            let row = phi.z(i, j, k, l);
            linear[(row, qap.y(i, k, j, l))] = Rational::one();
            linear[(row, qap.y(i, l, j, k))] = Rational::one();
        }
    }
    AffineMap::new(
        format!("prop1_projection({n})"),
        qap,
        phi,
        linear,
        QVector::zeros(phi.ambient_dim),
    )
}

/// `QAP(n)` inside `BQP(n²)`: the coordinate identification together with
/// the equations cutting out the face.
#[derive(Debug, Clone)]
pub struct Thm1Embedding {
    pub n: usize,
    /// `y_{ijkl} ↦ x_{(i,j),(k,l)}`, cells numbered row-major.
    pub identification: AffineMap,
    /// `x_{ij,il} = 0` for `j ≠ l`.
    pub row_fixings: Vec<(usize, bool)>,
    /// `Σ_j x_{ij,ij} = 1` for each `i`.
    pub row_sums: Vec<FaceEquation>,
    /// `x_{ij,kj} = 0` for `i ≠ k`.
    pub column_fixings: Vec<(usize, bool)>,
    /// `Σ_i x_{ij,ij} = 1` for each `j`.
    pub column_sums: Vec<FaceEquation>,
}

impl Thm1Embedding {
    /// Face chain `F1 ⊃ F2 ⊃ F3`. Column sums only become valid as `≤ 1`
    /// after the column fixings, so those form their own stage.
    pub fn chain(&self) -> Vec<Vec<FaceEquation>> {
        let fix =
            |f: &[(usize, bool)]| f.iter().map(|&(c, v)| FaceEquation::fixing(c, v)).collect();
        vec![
            fix(&self.row_fixings),
            self.row_sums.clone(),
            fix(&self.column_fixings),
            self.column_sums.clone(),
        ]
    }

    /// Vertices of `v` (a `BQP(n²)` vertex set) satisfying the row fixings,
    /// row sums and column sums with equality.
    pub fn filter(&self, v: &VertexSet) -> Vec<usize> {
        let sums: Vec<&FaceEquation> = self.row_sums.iter().chain(&self.column_sums).collect();
        (0..v.len())
            .filter(|&i| {
                let ones = v.vertex(i);
                self.row_fixings
                    .iter()
                    .all(|&(c, val)| ones.binary_search(&c).is_ok() == val)
                    && sums.iter().all(|e| {
                        let lhs: Rational = e
                            .coeffs
                            .iter()
                            .filter(|(c, _)| ones.binary_search(c).is_ok())
                            .map(|(_, w)| w.clone())
                            .sum();
                        lhs == e.rhs
                    })
            })
            .collect()
    }
}

pub fn thm1_embedding(n: usize) -> Result<Thm1Embedding, MapError> {
    require("thm1_embedding", n, 2)?;
    let qap = IndexScheme::qap(n);
    let bqp = IndexScheme::bqp(n * n);
    let cell = |i: usize, j: usize| (i - 1) * n + j;
    let x = |i: usize, j: usize, k: usize, l: usize| bqp.x(cell(i, j), cell(k, l));
    let identification = AffineMap::new(
        format!("thm1_identification({n})"),
        qap,
        bqp,
        QMatrix::identity(bqp.ambient_dim),
        QVector::zeros(bqp.ambient_dim),
    )?;
    let mut row_fixings = Vec::new();
    let mut column_fixings = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for l in 1..=n {
                if j != l {
                    row_fixings.push((x(i, j, i, l), false));
                    // Same shape with the roles of rows and columns swapped.
                    column_fixings.push((x(j, i, l, i), false));
                }
            }
        }
    }
    let row_sums = (1..=n)
        .map(|i| FaceEquation::sum_at_most(&(1..=n).map(|j| x(i, j, i, j)).collect::<Vec<_>>(), 1))
        .collect();
    let column_sums = (1..=n)
        .map(|j| FaceEquation::sum_at_most(&(1..=n).map(|i| x(i, j, i, j)).collect::<Vec<_>>(), 1))
        .collect();
    Ok(Thm1Embedding {
        n,
        identification,
        row_fixings,
        row_sums,
        column_fixings,
        column_sums,
    })
}

/// A face of a family polytope with affine maps to and from a smaller one.
#[derive(Debug, Clone)]
pub struct FaceIso {
    pub fixings: Vec<(usize, bool)>,
    /// Validity report of the fixings over the whole vertex set.
    pub face_check: FaceByEquations,
    /// The face's vertices, in the order of the full vertex set.
    pub face: VertexSet,
    pub target: VertexSet,
    pub forward: AffineMap,
    pub inverse: AffineMap,
    /// Face vertex index to target vertex index.
    pub correspondence: VertexCorrespondence,
}

impl FaceIso {
    /// Carries a non-face witness for `target_subset` of the target through
    /// the inverse map to a witness for the matching subset of the full
    /// vertex set (of size `full_len`) the face was cut from.
    pub fn lift_nonface_witness(
        &self,
        full_len: usize,
        target_subset: &[usize],
        witness: &NonFaceWitness,
    ) -> Result<(Vec<usize>, NonFaceWitness), MapError> {
        let mut back = vec![0; self.correspondence.len()];
        for (i, &j) in self.correspondence.images.iter().enumerate() {
            back[j] = i;
        }
        let global = |t: usize| self.face_check.subset[back[t]];
        let mut pairs: Vec<(usize, Rational)> = target_subset
            .iter()
            .zip(witness.alpha.iter())
            .map(|(&t, a)| (global(t), a.clone()))
            .collect();
        pairs.sort_by_key(|p| p.0);
        let subset: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let target_outside: Vec<usize> = (0..self.target.len())
            .filter(|t| !target_subset.contains(t))
            .collect();
        let outside: Vec<usize> = (0..full_len)
            .filter(|i| subset.binary_search(i).is_err())
            .collect();
        let mut mu = QVector::zeros(outside.len());
        for (&t, m) in target_outside.iter().zip(witness.mu.iter()) {
            let pos = outside
                .binary_search(&global(t))
                .map_err(|_| MapError::NotBijective("lifted vertex inside the subset".into()))?;
            mu[pos] = m.clone();
        }
        let point = self.inverse.apply(&witness.point)?;
        let alpha = pairs.into_iter().map(|p| p.1).collect();
        Ok((subset, NonFaceWitness { alpha, mu, point }))
    }
}

/// `h_{ik} = Σ_{j ∈ [3]∖{i}} Σ_{l ∈ [3]∖{k}} z_{(i,j),(k,l)} - 1` on `φ_n`.
/// On the face it is the indicator of `σ(i) = k`.
pub fn lemma1_h(n: usize, i: usize, k: usize) -> LinearForm {
    let phi = IndexScheme::phi(n);
    let mut plus = Vec::new();
    for j in (1..=3).filter(|&j| j != i) {
        for l in (1..=3).filter(|&l| l != k) {
            plus.push(phi.z(i, j, k, l));
        }
    }
    LinearForm::signed_sum(&plus, &[], -1)
}

/// The face of `φ_n` of permutations fixing `4..n`, and its maps to `φ_3`.
pub fn lemma1_face_iso(n: usize) -> Result<FaceIso, MapError> {
    require("lemma1_face_iso", n, 4)?;
    let phi = IndexScheme::phi(n);
    let phi3 = IndexScheme::phi(3);
    let all = phi_vertices(n)?;
    let target = phi_vertices(3)?;

    let mut fixings = Vec::new();
    for &(i, j) in &edges(n) {
        for &(k, l) in &edges(n) {
            if j > 3 && l != j {
                fixings.push((phi.z(i, j, k, l), false));
            }
        }
    }
    let face_check = face_by_equations(&all, &fixings)?;
    let face = all.subset(&face_check.subset);

    let mut fwd = QMatrix::zeros(phi3.ambient_dim, phi.ambient_dim);
    for &(i, j) in &edges(3) {
        for &(k, l) in &edges(3) {
            fwd[(phi3.z(i, j, k, l), phi.z(i, j, k, l))] = Rational::one();
        }
    }
    let forward = AffineMap::new(
        format!("lemma1_forward({n})"),
        phi,
        phi3,
        fwd,
        QVector::zeros(phi3.ambient_dim),
    )?;

    let mut inv = QMatrix::zeros(phi.ambient_dim, phi3.ambient_dim);
    let mut off = QVector::zeros(phi.ambient_dim);
    for &(i, j) in &edges(n) {
        for &(k, l) in &edges(n) {
            let row = phi.z(i, j, k, l);
            if j <= 3 && l <= 3 {
                inv[(row, phi3.z(i, j, k, l))] = Rational::one();
            } else if j > 3 && l == j && i <= 3 && k <= 3 {
                for (c, w) in &lemma1_h(3, i, k).coeffs {
                    inv[(row, *c)] += w;
                }
                off[row] = -Rational::one();
            } else if (i, j) == (k, l) {
                off[row] = Rational::one();
            }
        }
    }
    let inverse = AffineMap::new(format!("lemma1_inverse({n})"), phi3, phi, inv, off)?;

    let images = (0..face.len())
        .map(|v| {
            let sigma = face.permutation(v)?;
            let r = sigma
                .restrict(3)
                .ok_or_else(|| MapError::NotBijective(format!("{} moves 4..n", face.label(v))))?;
            target
                .index_of_label(&r.one_line())
                .ok_or_else(|| MapError::NotBijective(r.one_line()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let correspondence = VertexCorrespondence::new("σ ↦ σ restricted to {1,2,3}", images)?;
    Ok(FaceIso {
        fixings,
        face_check,
        face,
        target,
        forward,
        inverse,
        correspondence,
    })
}

/// Bit `u_i = 1` iff the permutation leaves the pair `(2i-1, 2i)` in place.
fn pair_bits(sigma: &Permutation, k: usize) -> Vec<bool> {
    (1..=k)
        .map(|i| sigma.apply(2 * i - 1) == 2 * i - 1)
        .collect()
}

/// The face of `φ_{2k}` where each pair `(2i-1, 2i)` is kept or swapped,
/// and its maps to `BQP(k)`.
pub fn thm2_face_iso(k: usize) -> Result<FaceIso, MapError> {
    require("thm2_face_iso", k, 2)?;
    let n = 2 * k;
    let phi = IndexScheme::phi(n);
    let bqp = IndexScheme::bqp(k);
    let all = phi_vertices(n)?;
    let target = bqp_vertices(k)?;

    let fixings: Vec<(usize, bool)> = (1..=k)
        .map(|i| (phi.z(2 * i - 1, 2 * i, 2 * i - 1, 2 * i), true))
        .collect();
    let face_check = face_by_equations(&all, &fixings)?;
    let face = all.subset(&face_check.subset);

    // Forward: x_ij = x_ji = z_{2i2j,2i2j}; diagonals read through the
    // lexicographically first partner block.
    let mut fwd = QMatrix::zeros(bqp.ambient_dim, phi.ambient_dim);
    for i in 1..=k {
        for j in i + 1..=k {
            let c = phi.z(2 * i, 2 * j, 2 * i, 2 * j);
            fwd[(bqp.x(i, j), c)] = Rational::one();
            fwd[(bqp.x(j, i), c)] = Rational::one();
        }
    }
    fwd[(bqp.x(1, 1), phi.z(2, 4, 2, 4))] = Rational::one();
    fwd[(bqp.x(1, 1), phi.z(2, 4, 2, 3))] = Rational::one();
    for j in 2..=k {
        fwd[(bqp.x(j, j), phi.z(2, 2 * j, 2, 2 * j))] = Rational::one();
        fwd[(bqp.x(j, j), phi.z(2, 2 * j, 1, 2 * j))] = Rational::one();
    }
    let forward = AffineMap::new(
        format!("thm2_forward({k})"),
        phi,
        bqp,
        fwd,
        QVector::zeros(bqp.ambient_dim),
    )?;

    // Inverse: for e = {a, b} across pairs i < j and f inside the same two
    // pairs, z_{e,f} is a product of u_i or 1-u_i with u_j or 1-u_j.
    let pair = |v: usize| v.div_ceil(2);
    let mut inv = QMatrix::zeros(phi.ambient_dim, bqp.ambient_dim);
    let mut off = QVector::zeros(phi.ambient_dim);
    let one = Rational::one();
    for &(a, b) in &edges(n) {
        for &(c, d) in &edges(n) {
            let row = phi.z(a, b, c, d);
            let (pi, pj) = (pair(a), pair(b));
            if pi == pj {
                if (a, b) == (c, d) {
                    off[row] = one.clone();
                }
                continue;
            }
            // σ(a) is a or its partner, likewise σ(b); since a < b lie in
            // pairs pi < pj, f must meet pair pi in c and pair pj in d.
            if pair(c) != pi || pair(d) != pj {
                continue;
            }
            let (ka, kb) = (c == a, d == b);
            let (xii, xjj, xij) = (bqp.x(pi, pi), bqp.x(pj, pj), bqp.x(pi, pj));
            match (ka, kb) {
                (true, true) => inv[(row, xij)] += &one,
                (true, false) => {
                    inv[(row, xii)] += &one;
                    inv[(row, xij)] -= &one;
                }
                (false, true) => {
                    inv[(row, xjj)] += &one;
                    inv[(row, xij)] -= &one;
                }
                (false, false) => {
                    off[row] = one.clone();
                    inv[(row, xii)] -= &one;
                    inv[(row, xjj)] -= &one;
                    inv[(row, xij)] += &one;
                }
            }
        }
    }
    let inverse = AffineMap::new(format!("thm2_inverse({k})"), bqp, phi, inv, off)?;

    let images = (0..face.len())
        .map(|v| {
            let label = bits_label(&pair_bits(&face.permutation(v)?, k));
            target
                .index_of_label(&label)
                .ok_or(MapError::NotBijective(label))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let correspondence = VertexCorrespondence::new(
        "σ ↦ u with u_i = 1 iff the pair (2i-1, 2i) is left in place",
        images,
    )?;
    Ok(FaceIso {
        fixings,
        face_check,
        face,
        target,
        forward,
        inverse,
        correspondence,
    })
}

/// Linear identities on the face of [`thm2_face_iso`], each of which must
/// evaluate to zero on every face vertex: the five groups for every pair of
/// pairs `i < j`, and the two consistency families for the diagonal reads.
pub fn thm2_consistency(k: usize) -> Vec<(String, LinearForm)> {
    let phi = IndexScheme::phi(2 * k);
    let mut out = Vec::new();
    for i in 1..=k {
        for j in i + 1..=k {
            let m = [0, 2 * i - 1, 2 * i, 2 * j - 1, 2 * j];
            let z = |a: usize, b: usize, c: usize, d: usize| phi.z(m[a], m[b], m[c], m[d]);
            let groups: [[usize; 16]; 4] = [
                [1, 3, 1, 3, 1, 4, 1, 4, 2, 3, 2, 3, 2, 4, 2, 4],
                [1, 3, 1, 4, 1, 4, 1, 3, 2, 3, 2, 4, 2, 4, 2, 3],
                [1, 3, 2, 3, 1, 4, 2, 4, 2, 3, 1, 3, 2, 4, 1, 4],
                [1, 3, 2, 4, 1, 4, 2, 3, 2, 3, 1, 4, 2, 4, 1, 3],
            ];
            for (g, idx) in groups.iter().enumerate() {
                let terms: Vec<usize> = idx.chunks(4).map(|t| z(t[0], t[1], t[2], t[3])).collect();
                for w in terms.windows(2) {
                    out.push((
                        format!("group{} pairs ({i},{j})", g + 1),
                        LinearForm::signed_sum(&[w[0]], &[w[1]], 0),
                    ));
                }
            }
            let row = [z(2, 4, 1, 3), z(2, 4, 1, 4), z(2, 4, 2, 3), z(2, 4, 2, 4)];
            out.push((
                format!("group5 pairs ({i},{j})"),
                LinearForm::signed_sum(&row, &[], -1),
            ));
        }
    }
    // x_ii read through block (i, j) agrees with block (i, l).
    for i in 1..=k {
        for j in i + 1..=k {
            for l in i + 1..=k {
                if l == j {
                    continue;
                }
                out.push((
                    format!("row consistency i={i} j={j} l={l}"),
                    LinearForm::signed_sum(
                        &[
                            phi.z(2 * i, 2 * j, 2 * i, 2 * j),
                            phi.z(2 * i, 2 * j, 2 * i, 2 * j - 1),
                        ],
                        &[
                            phi.z(2 * i, 2 * l, 2 * i, 2 * l),
                            phi.z(2 * i, 2 * l, 2 * i, 2 * l - 1),
                        ],
                        0,
                    ),
                ));
            }
        }
    }
    for j in 1..=k {
        for i in 1..j {
            for kk in 1..j {
                if kk == i {
                    continue;
                }
                out.push((
                    format!("column consistency j={j} i={i} k={kk}"),
                    LinearForm::signed_sum(
                        &[
                            phi.z(2 * i, 2 * j, 2 * i, 2 * j),
                            phi.z(2 * i, 2 * j, 2 * i - 1, 2 * j),
                        ],
                        &[
                            phi.z(2 * kk, 2 * j, 2 * kk, 2 * j),
                            phi.z(2 * kk, 2 * j, 2 * kk - 1, 2 * j),
                        ],
                        0,
                    ),
                ));
            }
        }
    }
    out
}
