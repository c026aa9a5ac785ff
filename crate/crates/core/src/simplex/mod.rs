//! Exact-rational linear programming.
//!
//! [`lp_solve`] runs a two-phase primal simplex on a dense tableau with
//! implicit upper bounds and Bland's least-index rule. Every result carries a
//! certificate that [`verify_lp_certificate`] checks by direct substitution
//! against the original program, without touching the pivoting code:
//!
//! * optimal: primal point plus constraint multipliers whose dual objective
//!   equals the primal objective;
//! * infeasible: nonnegative multipliers over the `≤`-oriented constraints
//!   whose combination contradicts the variable bounds;
//! * unbounded: a feasible point and an improving recession direction.
//!
//! Multipliers are reported for constraints oriented as `≤` (a `≥` row is
//! read as `-a·x ≤ -b`); they are nonnegative on inequality rows and free on
//! equality rows.

mod tableau;
mod verify;

use std::fmt;

use crate::exactmath::{QVector, Rational};

pub use verify::verify_lp_certificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: QVector,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    /// Orientation as `≤`: `(sign, coefficients scale)` where `≥` rows flip.
    pub(crate) fn orientation(&self) -> Rational {
        match self.relation {
            Relation::Ge => -Rational::one(),
            _ => Rational::one(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl VarBounds {
    pub fn free() -> Self {
        Self::default()
    }

    pub fn nonnegative() -> Self {
        VarBounds {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        VarBounds {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

/// `maximize objective·x` subject to linear constraints and per-variable
/// bounds. Variables are free unless bounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: QVector,
    constraints: Vec<Constraint>,
    bounds: Vec<VarBounds>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("constraint {row} has {found} coefficients, expected {expected}")]
    ConstraintLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("objective has {found} coefficients, expected {expected}")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("variable {0} out of range")]
    VariableOutOfRange(usize),
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: QVector::zeros(num_vars),
            constraints: Vec::new(),
            bounds: vec![VarBounds::free(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &QVector {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[VarBounds] {
        &self.bounds
    }

    pub fn maximize(&mut self, objective: QVector) -> Result<(), LpError> {
        if objective.dim() != self.num_vars {
            return Err(LpError::ObjectiveLength {
                expected: self.num_vars,
                found: objective.dim(),
            });
        }
        self.objective = objective;
        Ok(())
    }

    pub fn add_constraint(
        &mut self,
        coeffs: QVector,
        relation: Relation,
        rhs: Rational,
    ) -> Result<usize, LpError> {
        if coeffs.dim() != self.num_vars {
            return Err(LpError::ConstraintLength {
                row: self.constraints.len(),
                expected: self.num_vars,
                found: coeffs.dim(),
            });
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(self.constraints.len() - 1)
    }

    pub fn set_bounds(&mut self, var: usize, bounds: VarBounds) -> Result<(), LpError> {
        let slot = self
            .bounds
            .get_mut(var)
            .ok_or(LpError::VariableOutOfRange(var))?;
        *slot = bounds;
        Ok(())
    }

    pub(crate) fn validate(&self) -> Result<(), LpError> {
        if self.objective.dim() != self.num_vars {
            return Err(LpError::ObjectiveLength {
                expected: self.num_vars,
                found: self.objective.dim(),
            });
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coeffs.dim() != self.num_vars {
                return Err(LpError::ConstraintLength {
                    row,
                    expected: self.num_vars,
                    found: c.coeffs.dim(),
                });
            }
        }
        Ok(())
    }

    /// True when some variable has `lower > upper`.
    pub(crate) fn has_crossed_bounds(&self) -> bool {
        self.bounds.iter().any(|b| match (&b.lower, &b.upper) {
            (Some(l), Some(u)) => l > u,
            _ => false,
        })
    }
}

fn write_linear(f: &mut fmt::Formatter<'_>, coeffs: &QVector) -> fmt::Result {
    let mut first = true;
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "{c} x{j}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Plain-text dump, one constraint per line, rationals as `p/q`.
impl fmt::Display for LinearProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "maximize ")?;
        write_linear(f, &self.objective)?;
        writeln!(f)?;
        for c in &self.constraints {
            write_linear(f, &c.coeffs)?;
            writeln!(f, " {} {}", c.relation.symbol(), c.rhs)?;
        }
        for (j, b) in self.bounds.iter().enumerate() {
            match (&b.lower, &b.upper) {
                (None, None) => {}
                (Some(l), None) => writeln!(f, "x{j} >= {l}")?,
                (None, Some(u)) => writeln!(f, "x{j} <= {u}")?,
                (Some(l), Some(u)) => writeln!(f, "{l} <= x{j} <= {u}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal {
        primal: QVector,
        value: Rational,
        /// One multiplier per constraint, `≤`-oriented.
        duals: QVector,
    },
    Infeasible {
        /// One multiplier per constraint, `≤`-oriented. All zero when the
        /// variable bounds alone are contradictory.
        farkas: QVector,
    },
    Unbounded {
        primal: QVector,
        ray: QVector,
    },
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal { .. } => LpStatus::Optimal,
            LpResult::Infeasible { .. } => LpStatus::Infeasible,
            LpResult::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn primal(&self) -> Option<&QVector> {
        match self {
            LpResult::Optimal { primal, .. } | LpResult::Unbounded { primal, .. } => Some(primal),
            LpResult::Infeasible { .. } => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

pub fn lp_solve(lp: &LinearProgram) -> Result<LpResult, LpError> {
    lp.validate()?;
    if lp.has_crossed_bounds() {
        return Ok(LpResult::Infeasible {
            farkas: QVector::zeros(lp.constraints.len()),
        });
    }
    Ok(tableau::solve(lp))
}
