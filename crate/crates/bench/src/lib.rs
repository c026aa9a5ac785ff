//! Fixtures shared by the criterion benches.

use polyiso::exactmath::{QVector, Rational};
use polyiso::simplex::{LinearProgram, Relation, VarBounds};

/// A dense packing LP: maximize `Σ x_j` subject to `n` rows with
/// coefficients `1 + (i * j) mod 5` and `x ∈ [0, 1]^n`.
pub fn packing_lp(n: usize) -> LinearProgram {
    let mut lp = LinearProgram::new(n);
    lp.maximize(QVector::from_ints(std::iter::repeat_n(1, n)))
        .unwrap();
    for i in 0..n {
        let row = QVector::from_ints((0..n).map(|j| 1 + ((i * j) % 5) as i64));
        lp.add_constraint(row, Relation::Le, Rational::from_integer(n as i64))
            .unwrap();
    }
    for j in 0..n {
        lp.set_bounds(j, VarBounds::between(Rational::zero(), Rational::one()))
            .unwrap();
    }
    lp
}
