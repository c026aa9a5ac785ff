use polyiso::exactmath::{affine_dependencies, affine_hull_frame, QMatrix, QVector, Rational};
use polyiso::families::{
    all_permutations, binomial2, edges, phi_vertex, phi_vertices, qap_vertex, qap_vertices,
    IndexScheme, MultiIndex, Permutation,
};
use proptest::prelude::*;

fn edge_matrix(sigma: &Permutation) -> QMatrix {
    let n = sigma.n();
    let c = binomial2(n);
    let mut m = QMatrix::zeros(c, c);
    for o in phi_vertex(sigma).unwrap() {
        m[(o / c, o % c)] = Rational::one();
    }
    m
}

#[test]
fn qap_vertices_satisfy_product_and_assignment_equations() {
    for n in 2..=5 {
        let s = IndexScheme::qap(n);
        for sigma in all_permutations(n) {
            let ones = qap_vertex(&sigma);
            let y = |i, j, k, l| ones.binary_search(&s.y(i, j, k, l)).is_ok() as u8;
            for i in 1..=n {
                assert_eq!((1..=n).map(|j| y(i, j, i, j)).sum::<u8>(), 1);
                assert_eq!((1..=n).map(|j| y(j, i, j, i)).sum::<u8>(), 1);
                for j in 1..=n {
                    for k in 1..=n {
                        for l in 1..=n {
                            assert_eq!(y(i, j, k, l), y(i, j, i, j) * y(k, l, k, l));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn phi_vertices_are_doubly_stochastic_permutation_matrices() {
    for n in 3..=5 {
        let c = binomial2(n);
        for sigma in all_permutations(n) {
            let m = edge_matrix(&sigma);
            for r in 0..c {
                let row: Rational = (0..c).map(|j| m[(r, j)].clone()).sum();
                let col: Rational = (0..c).map(|j| m[(j, r)].clone()).sum();
                assert!(row.is_one() && col.is_one());
            }
        }
    }
}

#[test]
fn edge_matrices_compose_contravariantly() {
    // Rows are source edges, so Z_{σ∘τ} = Z_τ · Z_σ.
    let perms = all_permutations(4);
    for s in &perms {
        for t in &perms {
            let lhs = edge_matrix(&s.compose(t));
            let rhs = edge_matrix(t).mul(&edge_matrix(s)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn generators_are_injective_and_frames_roundtrip() {
    for n in 3..=5 {
        for v in [qap_vertices(n).unwrap(), phi_vertices(n).unwrap()] {
            let mut seen = std::collections::HashSet::new();
            assert!(v.vertices().iter().all(|x| seen.insert(x.clone())));
            let dense = v.dense_all();
            let frame = affine_hull_frame(&dense).unwrap();
            for p in &dense {
                assert_eq!(frame.reconstruct(&frame.coords_of(p).unwrap()), *p);
            }
        }
    }
}

#[test]
fn hull_dimensions() {
    let dim = |v: &polyiso::families::VertexSet| affine_hull_frame(&v.dense_all()).unwrap().dim();
    assert_eq!(dim(&qap_vertices(3).unwrap()), 5);
    for (n, d) in [(3, 4), (4, 13), (5, 41)] {
        assert_eq!(dim(&phi_vertices(n).unwrap()), d, "n = {n}");
        // dim = (n-1)² + (n(n-3)/2)²
        assert_eq!(d, (n - 1) * (n - 1) + (n * (n - 3) / 2).pow(2));
    }
    let deps = affine_dependencies(&phi_vertices(3).unwrap().dense_all()).unwrap();
    assert_eq!(deps.len(), 1);
}

#[test]
fn edge_index_is_lexicographic() {
    let s = IndexScheme::phi(5);
    for (a, &(i, j)) in edges(5).iter().enumerate() {
        for (b, &(k, l)) in edges(5).iter().enumerate() {
            let o = s.encode(MultiIndex::Phi((i, j), (k, l))).unwrap();
            assert_eq!(o, a * 10 + b);
            assert_eq!(s.decode(o).unwrap(), MultiIndex::Phi((i, j), (k, l)));
        }
    }
}

proptest! {
    #[test]
    fn qap_offsets_roundtrip(n in 2usize..6, a in 0usize..10_000) {
        let s = IndexScheme::qap(n);
        let o = a % s.ambient_dim;
        let idx = s.decode(o).unwrap();
        prop_assert_eq!(s.encode(idx).unwrap(), o);
    }

    #[test]
    fn left_multiplication_permutes_phi_coordinates(seed in 0usize..120, other in 0usize..120) {
        // ρ∘σ's vertex is σ's vertex with columns relabelled by ρ: the
        // symmetry behind scanning only subsets through the identity.
        let perms = all_permutations(5);
        let (rho, sigma) = (&perms[seed], &perms[other]);
        let s = IndexScheme::phi(5);
        let lifted: Vec<usize> = {
            let mut v: Vec<usize> = phi_vertex(sigma)
                .unwrap()
                .iter()
                .map(|&o| match s.decode(o).unwrap() {
                    MultiIndex::Phi(e, (k, l)) => s.z(e.0, e.1, rho.apply(k), rho.apply(l)),
                    _ => unreachable!(),
                })
                .collect();
            v.sort_unstable();
            v
        };
        prop_assert_eq!(lifted, phi_vertex(&rho.compose(sigma)).unwrap());
    }
}

#[test]
fn dependency_is_the_sum_coincidence() {
    let v = polyiso::families::phi3_display_order();
    let deps = affine_dependencies(&v.dense_all()).unwrap();
    assert_eq!(deps, vec![QVector::from_ints([1, 1, 1, -1, -1, -1])]);
}
