//! Certificate checks by substitution. Nothing here depends on the tableau.

use crate::exactmath::{QVector, Rational};

use super::{LinearProgram, LpResult, Relation};

fn primal_feasible(lp: &LinearProgram, x: &QVector) -> bool {
    if x.dim() != lp.num_vars() {
        return false;
    }
    let in_bounds = lp.bounds().iter().zip(x.iter()).all(|(b, v)| {
        b.lower.as_ref().is_none_or(|l| v >= l) && b.upper.as_ref().is_none_or(|u| v <= u)
    });
    in_bounds
        && lp.constraints().iter().all(|c| {
            let lhs = c.coeffs.dot(x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
}

fn multipliers_well_signed(lp: &LinearProgram, y: &QVector) -> bool {
    y.dim() == lp.constraints().len()
        && lp
            .constraints()
            .iter()
            .zip(y.iter())
            .all(|(c, yr)| c.relation == Relation::Eq || !yr.is_negative())
}

/// `(Σ y_r ã_r, Σ y_r b̃_r)` over the ≤-oriented rows.
fn combine(lp: &LinearProgram, y: &QVector) -> (QVector, Rational) {
    let mut g = QVector::zeros(lp.num_vars());
    let mut rhs = Rational::zero();
    for (c, yr) in lp.constraints().iter().zip(y.iter()) {
        if yr.is_zero() {
            continue;
        }
        let w = yr * &c.orientation();
        g.axpy(&w, &c.coeffs);
        rhs += &w * &c.rhs;
    }
    (g, rhs)
}

/// Checks `result` against `lp` by direct substitution.
pub fn verify_lp_certificate(lp: &LinearProgram, result: &LpResult) -> bool {
    if lp.validate().is_err() {
        return false;
    }
    match result {
        LpResult::Optimal {
            primal,
            value,
            duals,
        } => {
            if !primal_feasible(lp, primal) || lp.objective().dot(primal) != *value {
                return false;
            }
            if !multipliers_well_signed(lp, duals) {
                return false;
            }
            // Residual c - Σ y ã must be absorbed by finite bounds.
            let (g, mut dual_value) = combine(lp, duals);
            for ((c, gj), b) in lp.objective().iter().zip(g.iter()).zip(lp.bounds()) {
                let rho = c - gj;
                if rho.is_positive() {
                    match &b.upper {
                        Some(u) => dual_value += &rho * u,
                        None => return false,
                    }
                } else if rho.is_negative() {
                    match &b.lower {
                        Some(l) => dual_value += &rho * l,
                        None => return false,
                    }
                }
            }
            dual_value == *value
        }
        LpResult::Infeasible { farkas } => {
            if lp.has_crossed_bounds() {
                return true;
            }
            if !multipliers_well_signed(lp, farkas) {
                return false;
            }
            // Valid inequality g·x ≤ rhs; contradiction iff min over the box
            // of g·x exceeds rhs.
            let (g, rhs) = combine(lp, farkas);
            let mut min = Rational::zero();
            for (gj, b) in g.iter().zip(lp.bounds()) {
                if gj.is_positive() {
                    match &b.lower {
                        Some(l) => min += gj * l,
                        None => return false,
                    }
                } else if gj.is_negative() {
                    match &b.upper {
                        Some(u) => min += gj * u,
                        None => return false,
                    }
                }
            }
            min > rhs
        }
        LpResult::Unbounded { primal, ray } => {
            if !primal_feasible(lp, primal) || ray.dim() != lp.num_vars() {
                return false;
            }
            let recedes = lp.constraints().iter().all(|c| {
                let d = c.coeffs.dot(ray);
                match c.relation {
                    Relation::Le => !d.is_positive(),
                    Relation::Eq => d.is_zero(),
                    Relation::Ge => !d.is_negative(),
                }
            });
            let bounded_ok = lp.bounds().iter().zip(ray.iter()).all(|(b, r)| {
                (!r.is_negative() || b.lower.is_none()) && (!r.is_positive() || b.upper.is_none())
            });
            recedes && bounded_ok && lp.objective().dot(ray).is_positive()
        }
    }
}
