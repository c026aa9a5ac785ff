//! Face verdicts against a witness-only LP in ambient coordinates.

use polyiso::exactmath::{QVector, Rational};
use polyiso::faces::{
    is_face, verify_face_certificate, verify_nonface_witness, CertificateFile, FaceTester,
    FaceVerdict,
};
use polyiso::families::{family_vertices, Family, IndexScheme, VertexSet};
use polyiso::simplex::{lp_solve, LinearProgram, LpStatus, Relation, VarBounds};
use proptest::prelude::*;

/// Feasibility of `Σ α_s v_s = Σ μ_t v_t`, `Σ α = Σ μ = 1`, `μ ≥ 0` with
/// every coordinate written out. Feasible iff `S` is not a face.
fn oracle_is_face(v: &VertexSet, s: &[usize]) -> bool {
    let outside: Vec<usize> = (0..v.len()).filter(|i| !s.contains(i)).collect();
    let (ns, nt) = (s.len(), outside.len());
    let mut lp = LinearProgram::new(ns + nt);
    for j in ns..ns + nt {
        lp.set_bounds(j, VarBounds::nonnegative()).unwrap();
    }
    for c in 0..v.ambient_dim() {
        let mut row = QVector::zeros(ns + nt);
        for (k, &i) in s.iter().enumerate() {
            if v.vertex(i).contains(&c) {
                row[k] = Rational::one();
            }
        }
        for (k, &i) in outside.iter().enumerate() {
            if v.vertex(i).contains(&c) {
                row[ns + k] = -Rational::one();
            }
        }
        lp.add_constraint(row, Relation::Eq, Rational::zero())
            .unwrap();
    }
    let ones = |r: std::ops::Range<usize>| {
        let mut q = QVector::zeros(ns + nt);
        for j in r {
            q[j] = Rational::one();
        }
        q
    };
    lp.add_constraint(ones(0..ns), Relation::Eq, Rational::one())
        .unwrap();
    lp.add_constraint(ones(ns..ns + nt), Relation::Eq, Rational::one())
        .unwrap();
    lp_solve(&lp).unwrap().status() == LpStatus::Infeasible
}

fn check(v: &VertexSet, tester: &FaceTester, s: &[usize]) -> Result<(), TestCaseError> {
    let verdict = tester.is_face(s).unwrap();
    prop_assert_eq!(verdict.is_face(), oracle_is_face(v, s), "subset {:?}", s);
    match &verdict {
        FaceVerdict::Face(c) => prop_assert!(verify_face_certificate(v, s, c)),
        FaceVerdict::NonFace(w) => prop_assert!(verify_nonface_witness(v, s, w)),
    }
    let file = CertificateFile::new(v, s, verdict);
    let back: CertificateFile =
        serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
    prop_assert!(back.matches(v) && back.verify(v));
    Ok(())
}

fn point_set() -> impl Strategy<Value = VertexSet> {
    // Random 0/1 points in dimension 4 or 9 (the BQP schemes for m = 2, 3).
    (2usize..=3)
        .prop_flat_map(|m| {
            let dim = m * m;
            (
                Just(m),
                proptest::collection::btree_set(0u32..(1 << dim), 3..=12),
            )
        })
        .prop_map(|(m, pts)| {
            let dim = m * m;
            let vertices: Vec<Vec<usize>> = pts
                .iter()
                .map(|&p| (0..dim).filter(|b| p >> b & 1 == 1).collect())
                .collect();
            let labels = (0..vertices.len()).map(|i| format!("p{i}")).collect();
            VertexSet::new(IndexScheme::bqp(m), labels, vertices).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_point_sets_match_oracle(v in point_set(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let mut s: Vec<usize> = picks.iter().map(|i| i.index(v.len())).collect();
        s.sort_unstable();
        s.dedup();
        prop_assume!(s.len() < v.len());
        let tester = FaceTester::new(&v);
        check(&v, &tester, &s)?;
    }

    #[test]
    fn family_subsets_match_oracle(
        which in 0usize..3,
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..6),
    ) {
        let (family, n) = [(Family::Phi, 4), (Family::Qap, 4), (Family::Bqp, 3)][which];
        let v = family_vertices(family, n).unwrap();
        let mut s: Vec<usize> = picks.iter().map(|i| i.index(v.len())).collect();
        s.sort_unstable();
        s.dedup();
        let tester = FaceTester::new(&v);
        check(&v, &tester, &s)?;
    }
}

#[test]
fn phi3_triples_exhaustive() {
    let v = family_vertices(Family::Phi, 3).unwrap();
    let tester = FaceTester::new(&v);
    let mut non_faces = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                let s = [a, b, c];
                check(&v, &tester, &s).unwrap();
                if !is_face(&v, &s).unwrap().is_face() {
                    non_faces.push(
                        s.iter()
                            .map(|&i| v.label(i).to_string())
                            .collect::<Vec<_>>(),
                    );
                }
            }
        }
    }
    assert_eq!(
        non_faces,
        vec![vec!["123", "231", "312"], vec!["132", "213", "321"]]
    );
}
