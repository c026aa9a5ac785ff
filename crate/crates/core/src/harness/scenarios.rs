use std::collections::HashSet;
use std::time::Instant;

use crate::exactmath::affine_hull_frame;
use crate::faces::{
    face_chain, is_face, k_neighborly_scan, verify_nonface_witness, CertificateFile, FaceTester,
    FaceVerdict, ScanOptions,
};
use crate::families::{bqp_vertices, phi_vertices, qap_vertices, VertexSet};
use crate::maps::{
    brute_force_iso_search, lemma1_face_iso, lemma1_h, map_respects, prop1_projection,
    thm1_embedding, thm2_consistency, thm2_face_iso, FaceIso, VertexCorrespondence,
};

use super::{HarnessError, Report, Scenario, Step, StepStatus};

type Steps = Result<Vec<Step>, HarnessError>;

/// Runs a scenario after checking its parameter guard. `jobs` sizes the
/// worker pool of neighborliness scans; it never changes the report.
pub fn run_scenario(
    scenario: Scenario,
    value: usize,
    force: bool,
    jobs: usize,
) -> Result<Report, HarnessError> {
    scenario.check_parameter(value, force)?;
    let start = Instant::now();
    let steps = match scenario {
        Scenario::Thm1 => thm1(value)?,
        Scenario::Prop1 => prop1(value)?,
        Scenario::Lemma1 => lemma1(value)?,
        Scenario::Thm2 => thm2(value)?,
        Scenario::PhiNot3Neighborly => phi_not_3_neighborly(value, jobs)?,
        Scenario::Qap3Neighborly => qap_3_neighborly(value, jobs)?,
        Scenario::Nonisomorphism => nonisomorphism(value, jobs)?,
        Scenario::Corollary3nFace => corollary(value, jobs)?,
    };
    let passed = steps.iter().all(|s| s.status != StepStatus::Fail);
    Ok(Report {
        scenario,
        parameter: scenario.parameter_name().to_string(),
        value,
        passed,
        steps,
        duration_ms: start.elapsed().as_millis() as u64,
    })
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn vertex_sets_equal(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let x: HashSet<&Vec<usize>> = a.iter().collect();
    let y: HashSet<&Vec<usize>> = b.iter().collect();
    a.len() == b.len() && x == y
}

fn inverse_of(c: &VertexCorrespondence) -> VertexCorrespondence {
    let mut back = vec![0; c.len()];
    for (i, &j) in c.images.iter().enumerate() {
        back[j] = i;
    }
    VertexCorrespondence::new("inverse", back).expect("inverse of a bijection")
}

fn hull_dim(v: &VertexSet) -> usize {
    affine_hull_frame(&v.dense_all())
        .map(|f| f.dim())
        .unwrap_or(0)
}

fn thm1(n: usize) -> Steps {
    let e = thm1_embedding(n)?;
    let b = bqp_vertices(n * n)?;
    let q = qap_vertices(n)?;
    let chain = face_chain(&b, &e.chain())?;
    let sizes: Vec<String> = std::iter::once(b.len())
        .chain(chain.stages.iter().map(|s| s.subset.len()))
        .map(|x| x.to_string())
        .collect();
    let tight = chain
        .stages
        .iter()
        .all(|s| s.checks.iter().all(|c| c.tight));
    let kept = e.filter(&b);
    let images: Vec<Vec<usize>> = e
        .identification
        .image_vertices(&q)?
        .into_iter()
        .map(|x| x.unwrap_or_default())
        .collect();
    let filtered = b.subset(&kept);
    Ok(vec![
        Step::check(
            "face-chain",
            "row zero fixings, row sums, column zero fixings and column sums are valid inequalities \
             on the successive faces of BQP(n^2), each attained with equality",
            chain.all_valid() && tight,
            format!("vertex counts {}", sizes.join(" -> ")),
        ),
        Step::check(
            "filtered-count",
            "the zero fixings with row and column sums equal to 1 leave n! vertices of BQP(n^2)",
            kept.len() == factorial(n) && chain.subset() == kept.as_slice(),
            format!("{} of {} vertices kept, {} expected", kept.len(), b.len(), factorial(n)),
        ),
        Step::check(
            "identification",
            "under y_ijkl = x_(ij)(kl) the face is exactly the vertex set of QAP(n)",
            vertex_sets_equal(filtered.vertices(), &images),
            format!("{} QAP({n}) vertices matched", q.len()),
        ),
    ])
}

fn prop1(n: usize) -> Steps {
    let map = prop1_projection(n)?;
    let q = qap_vertices(n)?;
    let p = phi_vertices(n)?;
    let shape = (0..map.linear.rows()).all(|r| {
        let row = map.linear.row(r);
        row.iter().filter(|x| x.is_one()).count() == 2
            && row.iter().all(|x| x.is_one() || x.is_zero())
    }) && map.offset.is_zero();
    let mut labelled = true;
    let mut images = Vec::with_capacity(q.len());
    for (i, img) in map.image_vertices(&q)?.into_iter().enumerate() {
        let hit = img
            .as_ref()
            .and_then(|ones| p.index_of_vertex(ones))
            .map(|j| p.label(j) == q.label(i));
        labelled &= hit == Some(true);
        images.push(img.unwrap_or_default());
    }
    Ok(vec![
        Step::check(
            "map-shape",
            "z_(ij)(kl) = y_ikjl + y_iljk: two unit entries per row, zero offset",
            shape,
            format!("{}x{} matrix", map.linear.rows(), map.linear.cols()),
        ),
        Step::check(
            "label-respecting",
            "the QAP vertex of a permutation maps to the edge permutation matrix of the same permutation",
            labelled,
            format!("{} vertices checked", q.len()),
        ),
        Step::check(
            "onto",
            "the image of the QAP(n) vertex set is the vertex set of phi_n",
            vertex_sets_equal(&images, p.vertices()),
            format!("{} images, {} phi_{n} vertices", images.len(), p.len()),
        ),
    ])
}

fn iso_steps(iso: &FaceIso, claim_forward: &str, claim_inverse: &str) -> Vec<Step> {
    let fwd_ok = map_respects(&iso.forward, &iso.face, &iso.target, &iso.correspondence);
    let images: Vec<Vec<usize>> = (0..iso.face.len())
        .map(|i| {
            crate::maps::zero_one_support(&iso.forward.apply_ones(iso.face.vertex(i)))
                .unwrap_or_default()
        })
        .collect();
    let onto = vertex_sets_equal(&images, iso.target.vertices());
    let inv_ok = map_respects(
        &iso.inverse,
        &iso.target,
        &iso.face,
        &inverse_of(&iso.correspondence),
    );
    let round = (0..iso.face.len()).all(|i| {
        iso.inverse
            .apply(&iso.forward.apply_ones(iso.face.vertex(i)))
            .is_ok_and(|x| x == iso.face.dense(i))
    });
    vec![
        Step::check(
            "forward",
            claim_forward,
            fwd_ok && onto,
            format!("{} face vertices onto {} target vertices ({})", iso.face.len(), iso.target.len(), iso.correspondence.rule),
        ),
        Step::check(
            "inverse",
            claim_inverse,
            inv_ok && round,
            "inverse after forward is the identity on the face, forward after inverse on the target",
        ),
    ]
}

fn lemma1(n: usize) -> Steps {
    let iso = lemma1_face_iso(n)?;
    let mut steps = vec![Step::check(
        "face",
        "fixing z_(ij)(kl) = 0 for j > 3, l != j cuts out a face of phi_n whose vertices are the \
         permutations fixing 4..n",
        iso.face_check.all_valid() && iso.face.len() == 6,
        format!("{} fixings, {} vertices", iso.fixings.len(), iso.face.len()),
    )];
    steps.extend(iso_steps(
        &iso,
        "projecting onto the coordinates inside {1,2,3} maps the face onto phi_3",
        "every face coordinate is an affine function of the phi_3 coordinates",
    ));
    let mut h_ok = true;
    for v in 0..iso.face.len() {
        let sigma = iso.face.permutation(v)?;
        for i in 1..=3 {
            for k in 1..=3 {
                let h = lemma1_h(n, i, k).eval_ones(iso.face.vertex(v));
                h_ok &= (h.is_one() && sigma.apply(i) == k) || (h.is_zero() && sigma.apply(i) != k);
            }
        }
    }
    steps.push(Step::check(
        "h-indicator",
        "h_ik = sum of z_(ij')(kl') over j' != i, l' != k in {1,2,3}, minus 1, is 1 exactly when the \
         permutation sends i to k (h_12: when it sends 1 to 2)",
        h_ok,
        "all nine h_ik on every face vertex",
    ));
    let even: Vec<usize> = ["123", "231", "312"]
        .iter()
        .filter_map(|l| iso.target.index_of_label(l))
        .collect();
    let all = phi_vertices(n)?;
    let step = match is_face(&iso.target, &even)? {
        FaceVerdict::NonFace(w3) => {
            let (subset, wit) = iso.lift_nonface_witness(all.len(), &even, &w3)?;
            let ok = verify_nonface_witness(&all, &subset, &wit);
            let labels: Vec<&str> = subset.iter().map(|&i| all.label(i)).collect();
            Step::check(
                "witness-transport",
                "the affine dependency among the even permutations of phi_3 carries over to phi_n, so \
                 phi_n is not 3-neighborly",
                ok,
                format!("triple {} is not a face", labels.join(", ")),
            )
            .with_certificate(CertificateFile::new(&all, &subset, FaceVerdict::NonFace(wit)))
        }
        FaceVerdict::Face(_) => Step::check(
            "witness-transport",
            "the even permutations of phi_3 do not form a face",
            false,
            "even triple certified as a face",
        ),
    };
    steps.push(step);
    Ok(steps)
}

fn thm2(k: usize) -> Steps {
    let iso = thm2_face_iso(k)?;
    let mut steps = vec![Step::check(
        "face",
        "fixing z_(2i-1,2i)(2i-1,2i) = 1 cuts out a face of phi_2k whose vertices keep or swap each pair",
        iso.face_check.all_valid() && iso.face.len() == 1 << k,
        format!("{} vertices, 2^{k} expected", iso.face.len()),
    )];
    steps.extend(iso_steps(
        &iso,
        "x_ij = z_(2i,2j)(2i,2j) with the diagonal read through one block maps the face onto BQP(k)",
        "every face coordinate is an affine function of the BQP(k) coordinates",
    ));
    let forms = thm2_consistency(k);
    let bad: Vec<&str> = forms
        .iter()
        .filter(|(_, f)| {
            iso.face
                .vertices()
                .iter()
                .any(|v| !f.eval_ones(v).is_zero())
        })
        .map(|(name, _)| name.as_str())
        .collect();
    steps.push(Step::check(
        "consistency",
        "the four equality groups, the block row sum and both diagonal consistency families hold on \
         every face vertex",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} identities hold", forms.len())
        } else {
            format!("violated: {}", bad.join("; "))
        },
    ));
    let id = iso
        .face
        .index_of_label(&(1..=2 * k).map(|d| d.to_string()).collect::<String>());
    let all_ones = "1".repeat(k);
    steps.push(Step::check(
        "identity",
        "the identity permutation corresponds to the all-ones vector",
        id.is_some_and(|i| iso.target.label(iso.correspondence.image(i)) == all_ones),
        format!("identity -> {all_ones}"),
    ));
    Ok(steps)
}

fn scan_step(
    name: &str,
    claim: &str,
    v: &VertexSet,
    fix_first: bool,
    expect_neighborly: bool,
    jobs: usize,
) -> Result<Step, HarnessError> {
    let r = k_neighborly_scan(
        v,
        3,
        ScanOptions {
            fix_first,
            stop_at_first: !expect_neighborly,
            jobs,
        },
    )?;
    let scope = if fix_first {
        "triples through the identity"
    } else {
        "triples"
    };
    match &r.first_counterexample {
        None => Ok(Step::check(
            name,
            claim,
            expect_neighborly && r.is_k_neighborly(),
            format!(
                "{} of {} {scope} certified faces",
                r.faces_certified, r.total_subsets
            ),
        )),
        Some(c) => {
            let ok = !expect_neighborly && verify_nonface_witness(v, &c.subset, &c.witness);
            let cert = CertificateFile::new(v, &c.subset, FaceVerdict::NonFace(c.witness.clone()));
            Ok(Step::check(
                name,
                claim,
                ok,
                format!(
                    "triple {} is not a face (after {} of {} {scope})",
                    c.labels.join(", "),
                    r.scanned,
                    r.total_subsets
                ),
            )
            .with_certificate(cert))
        }
    }
}

fn phi_not_3_neighborly(n: usize, jobs: usize) -> Steps {
    let v = phi_vertices(n)?;
    Ok(vec![scan_step(
        "counterexample",
        "some three vertices of phi_n do not form a face",
        &v,
        true,
        false,
        jobs,
    )?])
}

fn qap_3_neighborly(n: usize, jobs: usize) -> Steps {
    let v = qap_vertices(n)?;
    Ok(vec![scan_step(
        "all-triples",
        "every three vertices of QAP(n) form a face",
        &v,
        n >= 4,
        true,
        jobs,
    )?])
}

fn nonisomorphism(n: usize, jobs: usize) -> Steps {
    let q = qap_vertices(n)?;
    let p = phi_vertices(n)?;
    let (dq, dp) = (hull_dim(&q), hull_dim(&p));
    let mut steps = vec![
        Step::check(
            "hull-dimensions",
            "the affine hulls of QAP(n) and phi_n have different dimensions",
            dq != dp,
            format!("dim aff QAP({n}) = {dq}, dim aff phi_{n} = {dp}"),
        ),
        scan_step(
            "qap-3-neighborly",
            "every three vertices of QAP(n) form a face",
            &q,
            n >= 4,
            true,
            jobs,
        )?,
        scan_step(
            "phi-not-3-neighborly",
            "some three vertices of phi_n do not form a face, so no face-lattice isomorphism exists",
            &p,
            true,
            false,
            jobs,
        )?,
    ];
    const CAP: usize = 8;
    if q.len() <= CAP {
        let r = brute_force_iso_search(&q, &p, CAP)?;
        steps.push(Step::check(
            "affine-search",
            "no bijection between the vertex sets extends to an affine isomorphism",
            r.found.is_none(),
            format!(
                "{} bijections tried, {} admit an affine map, none an isomorphism",
                r.bijections_tried, r.affine_fits
            ),
        ));
    } else {
        steps.push(Step::skipped(
            "affine-search",
            "no bijection between the vertex sets extends to an affine isomorphism",
            format!(
                "{}! bijections exceed the search cap; refuted by hull dimensions instead",
                n
            ),
        ));
    }
    Ok(steps)
}

fn corollary(k: usize, jobs: usize) -> Steps {
    let iso = thm2_face_iso(k)?;
    let all = phi_vertices(2 * k)?;
    let mut steps = vec![Step::check(
        "face-size",
        "phi_2k has a face with 2^k vertices",
        iso.face.len() == 1 << k,
        format!("{} vertices", iso.face.len()),
    )];
    steps.push(scan_step(
        "standalone-3-neighborly",
        "every three vertices of the face form a face of the face",
        &iso.face,
        false,
        true,
        jobs,
    )?);
    let tester = FaceTester::new(&all);
    let g = &iso.face_check.subset;
    let mut total = 0;
    let mut ok = 0;
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            for c in b + 1..g.len() {
                total += 1;
                if tester.is_face(&[g[a], g[b], g[c]])?.is_face() {
                    ok += 1;
                }
            }
        }
    }
    steps.push(Step::check(
        "3-neighborly-in-phi",
        "every three vertices of the face form a face of phi_2k",
        ok == total,
        format!("{ok} of {total} triples certified faces of phi_{}", 2 * k),
    ));
    Ok(steps)
}
