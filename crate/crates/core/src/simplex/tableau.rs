//! Dense bounded-variable simplex tableau.
//!
//! Internal form: `A x = b`, `b ≥ 0`, `0 ≤ x_j ≤ ub_j`. Columns are ordered
//! structural, slack, artificial; Bland's rule uses that order. A nonbasic
//! variable always sits at zero: when one reaches its upper bound it is
//! replaced by its complement `ub - x` (`flipped`).

use crate::exactmath::{QVector, Rational};

use super::{LinearProgram, LpResult, Relation};

#[derive(Debug, Clone)]
enum VarMap {
    /// `x = lower + col`
    Shift { col: usize, lower: Rational },
    /// `x = upper - col`
    Reflect { col: usize, upper: Rational },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

struct Tableau {
    m: usize,
    ncols: usize,
    a: Vec<Rational>,
    rhs: Vec<Rational>,
    /// Reduced costs `d_j`; `obj_rhs = -z0`.
    obj: Vec<Rational>,
    obj_rhs: Rational,
    basis: Vec<usize>,
    row_of: Vec<Option<usize>>,
    ub: Vec<Option<Rational>>,
    flipped: Vec<bool>,
    barred: Vec<bool>,
}

enum Step {
    Optimal,
    Unbounded(usize),
}

enum Limit {
    Flip,
    Lower(usize),
    Upper(usize),
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> &Rational {
        &self.a[r * self.ncols + c]
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let nc = self.ncols;
        let inv = self.at(r, e).recip();
        let nz: Vec<usize> = (0..nc).filter(|&j| !self.a[r * nc + j].is_zero()).collect();
        if !inv.is_one() {
            for &j in &nz {
                self.a[r * nc + j] *= &inv;
            }
            self.rhs[r] *= &inv;
        }
        let prow: Vec<(usize, Rational)> = nz
            .iter()
            .map(|&j| (j, self.a[r * nc + j].clone()))
            .collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * nc + e].clone();
            if f.is_zero() {
                continue;
            }
            for (j, pv) in &prow {
                let cell = &mut self.a[i * nc + j];
                *cell = cell.sub_mul(&f, pv);
            }
            self.rhs[i] = self.rhs[i].sub_mul(&f, &prhs);
        }
        let f = self.obj[e].clone();
        if !f.is_zero() {
            for (j, pv) in &prow {
                self.obj[*j] = self.obj[*j].sub_mul(&f, pv);
            }
            self.obj_rhs = self.obj_rhs.sub_mul(&f, &prhs);
        }
        let old = self.basis[r];
        self.row_of[old] = None;
        self.basis[r] = e;
        self.row_of[e] = Some(r);
    }

    /// Replace nonbasic column `c` by its complement `ub - x_c`.
    fn complement(&mut self, c: usize) {
        let u = self.ub[c].clone().expect("complement needs an upper bound");
        let nc = self.ncols;
        for i in 0..self.m {
            let v = self.a[i * nc + c].clone();
            if v.is_zero() {
                continue;
            }
            self.rhs[i] = self.rhs[i].sub_mul(&v, &u);
            self.a[i * nc + c] = -v;
        }
        let d = self.obj[c].clone();
        if !d.is_zero() {
            self.obj_rhs = self.obj_rhs.sub_mul(&d, &u);
            self.obj[c] = -d;
        }
        self.flipped[c] = !self.flipped[c];
    }

    fn entering(&self) -> Option<usize> {
        (0..self.ncols)
            .find(|&j| self.row_of[j].is_none() && !self.barred[j] && self.obj[j].is_positive())
    }

    fn ratio_test(&self, e: usize) -> Option<Limit> {
        let mut best: Option<(Rational, Limit, usize)> = None;
        // Flip wins ties; among rows the smallest basic column index wins.
        if let Some(u) = &self.ub[e] {
            best = Some((u.clone(), Limit::Flip, 0));
        }
        for r in 0..self.m {
            let a = self.at(r, e);
            let (theta, limit) = if a.is_positive() {
                (&self.rhs[r] / a, Limit::Lower(r))
            } else if a.is_negative() {
                match &self.ub[self.basis[r]] {
                    Some(u) => ((u - &self.rhs[r]) / (-a), Limit::Upper(r)),
                    None => continue,
                }
            } else {
                continue;
            };
            let key = self.basis[r];
            let better = match &best {
                None => true,
                Some((bt, bl, bk)) => {
                    theta < *bt || (theta == *bt && !matches!(bl, Limit::Flip) && key < *bk)
                }
            };
            if better {
                best = Some((theta, limit, key));
            }
        }
        best.map(|(_, l, _)| l)
    }

    fn run(&mut self) -> Step {
        loop {
            let Some(e) = self.entering() else {
                return Step::Optimal;
            };
            match self.ratio_test(e) {
                None => return Step::Unbounded(e),
                Some(Limit::Flip) => self.complement(e),
                Some(Limit::Lower(r)) => self.pivot(r, e),
                Some(Limit::Upper(r)) => {
                    let leaving = self.basis[r];
                    self.pivot(r, e);
                    self.complement(leaving);
                }
            }
        }
    }

    /// Current value of every column in its original (uncomplemented) sense.
    fn column_values(&self) -> Vec<Rational> {
        (0..self.ncols)
            .map(|j| {
                let v = match self.row_of[j] {
                    Some(r) => self.rhs[r].clone(),
                    None => Rational::zero(),
                };
                if self.flipped[j] {
                    self.ub[j].as_ref().expect("flipped column has bound") - &v
                } else {
                    v
                }
            })
            .collect()
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let nc = self.ncols;
        let mut constant = Rational::zero();
        for j in 0..nc {
            if self.flipped[j] && !costs[j].is_zero() {
                constant += &costs[j] * self.ub[j].as_ref().expect("bound");
                self.obj[j] = -&costs[j];
            } else {
                self.obj[j] = costs[j].clone();
            }
        }
        self.obj_rhs = -constant;
        for r in 0..self.m {
            let b = self.basis[r];
            let cb = self.obj[b].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..nc {
                let v = &self.a[r * nc + j];
                if !v.is_zero() {
                    self.obj[j] = self.obj[j].sub_mul(&cb, v);
                }
            }
            self.obj_rhs = self.obj_rhs.sub_mul(&cb, &self.rhs[r]);
        }
    }
}

pub(super) fn solve(lp: &LinearProgram) -> LpResult {
    // Variable substitution.
    let mut maps = Vec::with_capacity(lp.num_vars);
    let mut ub: Vec<Option<Rational>> = Vec::new();
    for b in &lp.bounds {
        let col = ub.len();
        match (&b.lower, &b.upper) {
            (Some(l), u) => {
                ub.push(u.as_ref().map(|u| u - l));
                maps.push(VarMap::Shift {
                    col,
                    lower: l.clone(),
                });
            }
            (None, Some(u)) => {
                ub.push(None);
                maps.push(VarMap::Reflect {
                    col,
                    upper: u.clone(),
                });
            }
            (None, None) => {
                ub.push(None);
                ub.push(None);
                maps.push(VarMap::Split {
                    pos: col,
                    neg: col + 1,
                });
            }
        }
    }
    let n_struct = ub.len();
    let m = lp.constraints.len();

    // Rows in structural coordinates, oriented as ≤ / =.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut is_ineq = Vec::with_capacity(m);
    for c in &lp.constraints {
        let o = c.orientation();
        let mut row = vec![Rational::zero(); n_struct];
        let mut b = &c.rhs * &o;
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let a = a * &o;
            match &maps[j] {
                VarMap::Shift { col, lower } => {
                    b = b.sub_mul(&a, lower);
                    row[*col] = a;
                }
                VarMap::Reflect { col, upper } => {
                    b = b.sub_mul(&a, upper);
                    row[*col] = -a;
                }
                VarMap::Split { pos, neg } => {
                    row[*neg] = -&a;
                    row[*pos] = a;
                }
            }
        }
        rows.push(row);
        rhs.push(b);
        is_ineq.push(c.relation != Relation::Eq);
    }

    // Column layout: structural | slacks | artificials.
    let n_slack = is_ineq.iter().filter(|&&x| x).count();
    let mut sign = vec![Rational::one(); m];
    let mut slack_col = vec![None; m];
    let mut needs_art = vec![false; m];
    let mut next = n_struct;
    for r in 0..m {
        if is_ineq[r] {
            slack_col[r] = Some(next);
            next += 1;
        }
        if rhs[r].is_negative() {
            sign[r] = -Rational::one();
        }
        needs_art[r] = !is_ineq[r] || rhs[r].is_negative();
    }
    let n_art = needs_art.iter().filter(|&&x| x).count();
    let ncols = n_struct + n_slack + n_art;
    ub.resize(ncols, None);

    let mut t = Tableau {
        m,
        ncols,
        a: vec![Rational::zero(); m * ncols],
        rhs: Vec::with_capacity(m),
        obj: vec![Rational::zero(); ncols],
        obj_rhs: Rational::zero(),
        basis: vec![0; m],
        row_of: vec![None; ncols],
        ub,
        flipped: vec![false; ncols],
        barred: vec![false; ncols],
    };
    // Zero-width columns never need to move.
    for j in 0..n_struct {
        if t.ub[j].as_ref().is_some_and(Rational::is_zero) {
            t.barred[j] = true;
        }
    }
    let mut identity_col = vec![0; m];
    let mut art = n_struct + n_slack;
    for r in 0..m {
        let s = &sign[r];
        for (j, v) in rows[r].iter().enumerate() {
            if !v.is_zero() {
                t.a[r * ncols + j] = v * s;
            }
        }
        if let Some(sc) = slack_col[r] {
            t.a[r * ncols + sc] = s.clone();
        }
        t.rhs.push(&rhs[r] * s);
        let id = if needs_art[r] {
            t.a[r * ncols + art] = Rational::one();
            art += 1;
            art - 1
        } else {
            slack_col[r].expect("slack row")
        };
        identity_col[r] = id;
        t.basis[r] = id;
        t.row_of[id] = Some(r);
    }
    let art_range = n_struct + n_slack..ncols;

    // Phase 1: maximize -Σ artificials.
    if n_art > 0 {
        let mut costs = vec![Rational::zero(); ncols];
        for c in art_range.clone() {
            costs[c] = -Rational::one();
        }
        t.set_costs(&costs);
        for c in art_range.clone() {
            t.barred[c] = true;
        }
        let Step::Optimal = t.run() else {
            unreachable!("phase one is bounded by zero");
        };
        if t.obj_rhs.is_positive() {
            // Objective -Σ art = -obj_rhs < 0.
            let farkas: QVector = (0..m)
                .map(|r| {
                    let id = identity_col[r];
                    let mut y = -&t.obj[id];
                    if art_range.contains(&id) {
                        y -= Rational::one();
                    }
                    y * &sign[r]
                })
                .collect();
            return LpResult::Infeasible { farkas };
        }
        // Drive remaining artificials out of the basis at zero level.
        for r in 0..m {
            if !art_range.contains(&t.basis[r]) {
                continue;
            }
            if let Some(j) =
                (0..n_struct + n_slack).find(|&j| !t.at(r, j).is_zero() && !t.barred[j])
            {
                t.pivot(r, j);
            }
        }
    }

    // Phase 2.
    let mut costs = vec![Rational::zero(); ncols];
    let mut constant = Rational::zero();
    for (j, map) in maps.iter().enumerate() {
        let c = &lp.objective[j];
        match map {
            VarMap::Shift { col, lower } => {
                costs[*col] = c.clone();
                constant += c * lower;
            }
            VarMap::Reflect { col, upper } => {
                costs[*col] = -c;
                constant += c * upper;
            }
            VarMap::Split { pos, neg } => {
                costs[*pos] = c.clone();
                costs[*neg] = -c;
            }
        }
    }
    t.set_costs(&costs);
    let step = t.run();

    let values = t.column_values();
    let to_user = |vals: &[Rational], linear_only: bool| -> QVector {
        maps.iter()
            .map(|map| match map {
                VarMap::Shift { col, lower } => {
                    if linear_only {
                        vals[*col].clone()
                    } else {
                        lower + &vals[*col]
                    }
                }
                VarMap::Reflect { col, upper } => {
                    if linear_only {
                        -&vals[*col]
                    } else {
                        upper - &vals[*col]
                    }
                }
                VarMap::Split { pos, neg } => &vals[*pos] - &vals[*neg],
            })
            .collect()
    };
    let primal = to_user(&values, false);

    match step {
        Step::Optimal => {
            let duals: QVector = (0..m)
                .map(|r| -&t.obj[identity_col[r]] * &sign[r])
                .collect();
            let value = &constant - &t.obj_rhs;
            LpResult::Optimal {
                primal,
                value,
                duals,
            }
        }
        Step::Unbounded(e) => {
            let mut dir = vec![Rational::zero(); ncols];
            dir[e] = Rational::one();
            for r in 0..m {
                let a = t.at(r, e);
                if !a.is_zero() {
                    dir[t.basis[r]] = -a;
                }
            }
            for (j, d) in dir.iter_mut().enumerate() {
                if t.flipped[j] {
                    *d = -&*d;
                }
            }
            LpResult::Unbounded {
                primal,
                ray: to_user(&dir, true),
            }
        }
    }
}
