//! Exhaustive k-neighborliness scans.

use serde::{Deserialize, Serialize};

use crate::families::{family_vertices, phi_vertex, qap_vertex, Family, Permutation, VertexSet};

use super::{FaceError, FaceTester, FaceVerdict, NonFaceWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Only scan subsets containing the identity vertex.
    pub fix_first: bool,
    pub stop_at_first: bool,
    /// Worker threads; 1 scans sequentially.
    pub jobs: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            fix_first: false,
            stop_at_first: false,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub subset: Vec<usize>,
    pub labels: Vec<String>,
    pub witness: NonFaceWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborlinessReport {
    pub k: usize,
    pub vertex_count: usize,
    pub total_subsets: u64,
    pub scanned: u64,
    pub faces_certified: u64,
    pub non_faces: u64,
    pub complete: bool,
    /// Lexicographically first non-face among the scanned subsets.
    pub first_counterexample: Option<Counterexample>,
    pub symmetry_reduction: Option<String>,
}

impl NeighborlinessReport {
    /// All subsets of the (reduced) search space were scanned and certified.
    pub fn is_k_neighborly(&self) -> bool {
        self.complete && self.non_faces == 0
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Lexicographic k-combinations of `0..n`.
struct Combinations {
    idx: Vec<usize>,
    n: usize,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            idx: (0..k).collect(),
            n,
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

fn identity_index(vertices: &VertexSet) -> Result<usize, FaceError> {
    let scheme = vertices.scheme();
    let id = Permutation::identity(scheme.n);
    let ones = match scheme.family {
        Family::Qap => qap_vertex(&id),
        Family::Phi => phi_vertex(&id).map_err(|e| FaceError::NoSymmetry(e.to_string()))?,
        Family::Bqp => {
            return Err(FaceError::NoSymmetry(
                "bqp has no permutation labels".into(),
            ))
        }
    };
    let full = family_vertices(scheme.family, scheme.n)
        .map_err(|e| FaceError::NoSymmetry(e.to_string()))?;
    if vertices.len() != full.len() || !vertices.same_vertices(&full) {
        return Err(FaceError::NoSymmetry(format!(
            "{} vertices given, the full set has {}",
            vertices.len(),
            full.len()
        )));
    }
    vertices
        .index_of_vertex(&ones)
        .ok_or_else(|| FaceError::NoSymmetry("identity vertex missing".into()))
}

const CHUNK: usize = 64;

/// Tests every k-subset of `V` (or every one containing the identity with
/// `fix_first`) in lexicographic order. The reported counterexample is the
/// first in that order regardless of `jobs`.
pub fn k_neighborly_scan(
    vertices: &VertexSet,
    k: usize,
    options: ScanOptions,
) -> Result<NeighborlinessReport, FaceError> {
    let len = vertices.len();
    if k == 0 || k >= len {
        return Err(FaceError::BadK { k, len });
    }
    let (fixed, total, symmetry) = if options.fix_first {
        let f = identity_index(vertices)?;
        let note = "subsets containing the identity only: left multiplication by a \
                    permutation permutes coordinates, preserves face structure and acts \
                    transitively on vertices"
            .to_string();
        (Some(f), binomial(len - 1, k - 1), Some(note))
    } else {
        (None, binomial(len, k), None)
    };
    let subsets: Box<dyn Iterator<Item = Vec<usize>>> = match fixed {
        Some(f) => {
            let others: Vec<usize> = (0..len).filter(|&i| i != f).collect();
            Box::new(Combinations::new(len - 1, k - 1).map(move |c| {
                let mut s: Vec<usize> = c.iter().map(|&i| others[i]).collect();
                s.push(f);
                s.sort_unstable();
                s
            }))
        }
        None => Box::new(Combinations::new(len, k)),
    };

    let tester = FaceTester::new(vertices);
    let pool = if options.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(options.jobs)
                .build()
                .map_err(|e| FaceError::InternalInconsistency(e.to_string()))?,
        )
    } else {
        None
    };

    let mut report = NeighborlinessReport {
        k,
        vertex_count: len,
        total_subsets: total,
        scanned: 0,
        faces_certified: 0,
        non_faces: 0,
        complete: true,
        first_counterexample: None,
        symmetry_reduction: symmetry,
    };
    let mut subsets = subsets.peekable();
    while subsets.peek().is_some() {
        let chunk: Vec<Vec<usize>> = subsets.by_ref().take(CHUNK).collect();
        let verdicts: Vec<Result<FaceVerdict, FaceError>> = match &pool {
            Some(p) => {
                use rayon::prelude::*;
                p.install(|| chunk.par_iter().map(|s| tester.is_face(s)).collect())
            }
            None => chunk.iter().map(|s| tester.is_face(s)).collect(),
        };
        for (s, v) in chunk.into_iter().zip(verdicts) {
            report.scanned += 1;
            match v? {
                FaceVerdict::Face(_) => report.faces_certified += 1,
                FaceVerdict::NonFace(witness) => {
                    report.non_faces += 1;
                    if report.first_counterexample.is_none() {
                        let labels = s.iter().map(|&i| vertices.label(i).to_string()).collect();
                        report.first_counterexample = Some(Counterexample {
                            subset: s,
                            labels,
                            witness,
                        });
                    }
                    if options.stop_at_first {
                        report.complete = report.scanned == total;
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}
