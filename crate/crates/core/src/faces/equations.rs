//! Faces cut out by valid linear equations.

use serde::{Deserialize, Serialize};

use crate::exactmath::Rational;
use crate::families::VertexSet;

use super::FaceError;

/// Direction in which `Σ c_i x_i` is claimed to be bounded by `rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    AtMost,
    AtLeast,
}

/// Equation `Σ c_i x_i = rhs` whose inequality form is claimed valid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceEquation {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
    pub sense: Sense,
}

impl FaceEquation {
    /// `x_coord = value` for a 0/1 coordinate: `x ≥ 0` or `x ≤ 1`.
    pub fn fixing(coord: usize, value: bool) -> Self {
        FaceEquation {
            coeffs: vec![(coord, Rational::one())],
            rhs: if value {
                Rational::one()
            } else {
                Rational::zero()
            },
            sense: if value { Sense::AtMost } else { Sense::AtLeast },
        }
    }

    /// `Σ_{c ∈ coords} x_c = rhs`, valid as `≤ rhs`.
    pub fn sum_at_most(coords: &[usize], rhs: i64) -> Self {
        FaceEquation {
            coeffs: coords.iter().map(|&c| (c, Rational::one())).collect(),
            rhs: Rational::from_integer(rhs),
            sense: Sense::AtMost,
        }
    }

    fn lhs(&self, ones: &[usize]) -> Rational {
        self.coeffs
            .iter()
            .filter(|(c, _)| ones.binary_search(c).is_ok())
            .map(|(_, v)| v.clone())
            .sum()
    }

    fn holds(&self, lhs: &Rational) -> bool {
        match self.sense {
            Sense::AtMost => *lhs <= self.rhs,
            Sense::AtLeast => *lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationCheck {
    pub equation: FaceEquation,
    /// The inequality holds at every vertex under consideration.
    pub valid: bool,
    /// Some vertex under consideration attains equality.
    pub tight: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceByEquations {
    /// Indices of the vertices satisfying every equation. May be empty.
    pub subset: Vec<usize>,
    pub checks: Vec<EquationCheck>,
}

impl FaceByEquations {
    pub fn all_valid(&self) -> bool {
        self.checks.iter().all(|c| c.valid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceChain {
    pub stages: Vec<FaceByEquations>,
}

impl FaceChain {
    pub fn all_valid(&self) -> bool {
        self.stages.iter().all(FaceByEquations::all_valid)
    }

    pub fn subset(&self) -> &[usize] {
        self.stages.last().map_or(&[], |s| &s.subset)
    }
}

fn check_coords(vertices: &VertexSet, equations: &[FaceEquation]) -> Result<(), FaceError> {
    let dim = vertices.ambient_dim();
    for e in equations {
        if let Some(&(coord, _)) = e.coeffs.iter().find(|(c, _)| *c >= dim) {
            return Err(FaceError::BadCoordinate { coord, dim });
        }
    }
    Ok(())
}

fn stage(vertices: &VertexSet, within: &[usize], equations: &[FaceEquation]) -> FaceByEquations {
    let mut keep = vec![true; within.len()];
    let checks = equations
        .iter()
        .map(|e| {
            let (mut valid, mut tight) = (true, false);
            for (k, &v) in within.iter().enumerate() {
                let lhs = e.lhs(vertices.vertex(v));
                valid &= e.holds(&lhs);
                if lhs == e.rhs {
                    tight = true;
                } else {
                    keep[k] = false;
                }
            }
            EquationCheck {
                equation: e.clone(),
                valid,
                tight,
            }
        })
        .collect();
    let subset = within
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(&v, _)| v)
        .collect();
    FaceByEquations { subset, checks }
}

/// Vertices of `V` with the given coordinates fixed, after checking that
/// each fixing is a valid inequality for `conv(V)`.
pub fn face_by_equations(
    vertices: &VertexSet,
    fixings: &[(usize, bool)],
) -> Result<FaceByEquations, FaceError> {
    let eqs: Vec<FaceEquation> = fixings
        .iter()
        .map(|&(c, v)| FaceEquation::fixing(c, v))
        .collect();
    check_coords(vertices, &eqs)?;
    let all: Vec<usize> = (0..vertices.len()).collect();
    Ok(stage(vertices, &all, &eqs))
}

/// Iterated faces: each stage's equations are checked for validity on the
/// face produced by the previous stage.
pub fn face_chain(
    vertices: &VertexSet,
    stages: &[Vec<FaceEquation>],
) -> Result<FaceChain, FaceError> {
    for eqs in stages {
        check_coords(vertices, eqs)?;
    }
    let mut current: Vec<usize> = (0..vertices.len()).collect();
    let mut out = Vec::with_capacity(stages.len());
    for eqs in stages {
        let st = stage(vertices, &current, eqs);
        current = st.subset.clone();
        out.push(st);
    }
    Ok(FaceChain { stages: out })
}
