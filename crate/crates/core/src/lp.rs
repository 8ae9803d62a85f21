//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex with Bland's rule for both the entering
//! and the leaving variable, so it terminates and is bit-for-bit
//! deterministic. Problems are small (a few hundred constraints at most).

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{AffineFn, Polytope};
use crate::rational::{dot, solve, Point, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

/// Minimize `objective . x` subject to the constraints and bounds. Variables
/// are free unless bounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<LpConstraint>,
    pub bounds: Vec<VarBounds>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBounds::default(); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        self.constraints.push(LpConstraint { coeffs, relation, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) -> &mut Self {
        self.bounds[var] = VarBounds { lower, upper };
        self
    }

    pub fn nonnegative(mut self) -> Self {
        for b in self.bounds.iter_mut() {
            b.lower = Some(Rational::zero());
        }
        self
    }

    fn check_dims(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.bounds.len(),
            });
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    /// Whether `x` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        let rows_ok = self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        });
        let bounds_ok = self.bounds.iter().zip(x).all(|(b, xi)| {
            b.lower.as_ref().is_none_or(|l| xi >= l) && b.upper.as_ref().is_none_or(|u| xi <= u)
        });
        rows_ok && bounds_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub point: Option<Point>,
    pub value: Option<Rational>,
}

/// Lagrange multipliers proving optimality.
///
/// `rows[i]` belongs to constraint `i` (`>= 0` for `Ge`, `<= 0` for `Le`), `lower[j]`
/// and `upper[j]` to the bounds of variable `j`. A valid certificate satisfies
/// `c = A^T rows + lower + upper` with a dual objective equal to the primal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub rows: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
}

impl DualCertificate {
    pub fn verify(&self, lp: &LinearProgram, value: &Rational) -> bool {
        let n = lp.num_vars();
        if self.rows.len() != lp.constraints.len() || self.lower.len() != n || self.upper.len() != n {
            return false;
        }
        let signs_ok = lp.constraints.iter().zip(&self.rows).all(|(c, y)| match c.relation {
            Relation::Le => !y.is_positive(),
            Relation::Ge => !y.is_negative(),
            Relation::Eq => true,
        });
        if !signs_ok {
            return false;
        }
        let mut dual_value = Rational::zero();
        for (c, y) in lp.constraints.iter().zip(&self.rows) {
            dual_value += y * &c.rhs;
        }
        for j in 0..n {
            let b = &lp.bounds[j];
            let fixed = b.lower.is_some() && b.lower == b.upper;
            let (l, u) = (&self.lower[j], &self.upper[j]);
            if !fixed {
                if l.is_negative() || u.is_positive() {
                    return false;
                }
                if (b.lower.is_none() && !l.is_zero()) || (b.upper.is_none() && !u.is_zero()) {
                    return false;
                }
            }
            if let Some(lb) = &b.lower {
                dual_value += l * lb;
            }
            if let Some(ub) = &b.upper {
                if !fixed {
                    dual_value += u * ub;
                }
            }
            let mut stationarity = &self.lower[j] + &self.upper[j];
            for (c, y) in lp.constraints.iter().zip(&self.rows) {
                stationarity += &c.coeffs[j] * y;
            }
            if stationarity != lp.objective[j] {
                return false;
            }
        }
        dual_value == *value
    }
}

#[derive(Debug, Clone)]
enum VarMap {
    Fixed(Rational),
    Shift { col: usize, lower: Rational },
    Free { pos: usize, neg: usize },
}

#[derive(Debug, Clone, Copy)]
enum Origin {
    Row(usize),
    Upper(usize),
}

struct StandardForm {
    /// rows of A' (structural part only), after sign normalization
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// +1 for Le rows, -1 for Ge rows (before normalization)
    slack_sign: Vec<i8>,
    flip: Vec<bool>,
    origin: Vec<Origin>,
    costs: Vec<Rational>,
    cost_offset: Rational,
    vars: Vec<VarMap>,
    ncols: usize,
}

fn standardize(lp: &LinearProgram) -> StandardForm {
    let n = lp.num_vars();
    let mut vars = Vec::with_capacity(n);
    let mut ncols = 0;
    for b in &lp.bounds {
        match (&b.lower, &b.upper) {
            (Some(l), Some(u)) if l == u => vars.push(VarMap::Fixed(l.clone())),
            (Some(l), _) => {
                vars.push(VarMap::Shift {
                    col: ncols,
                    lower: l.clone(),
                });
                ncols += 1;
            }
            (None, _) => {
                vars.push(VarMap::Free {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }
    }
    let mut costs = vec![Rational::zero(); ncols];
    let mut cost_offset = Rational::zero();
    for (j, v) in vars.iter().enumerate() {
        let c = &lp.objective[j];
        match v {
            VarMap::Fixed(l) => cost_offset += c * l,
            VarMap::Shift { col, lower } => {
                costs[*col] = c.clone();
                cost_offset += c * lower;
            }
            VarMap::Free { pos, neg } => {
                costs[*pos] = c.clone();
                costs[*neg] = -c.clone();
            }
        }
    }

    let mut raw: Vec<(Vec<Rational>, Relation, Rational, Origin)> = Vec::new();
    for (i, c) in lp.constraints.iter().enumerate() {
        raw.push((c.coeffs.clone(), c.relation, c.rhs.clone(), Origin::Row(i)));
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if let (Some(u), false) = (&b.upper, matches!(vars[j], VarMap::Fixed(_))) {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            raw.push((e, Relation::Le, u.clone(), Origin::Upper(j)));
        }
    }

    let mut sf = StandardForm {
        rows: Vec::new(),
        rhs: Vec::new(),
        slack_sign: Vec::new(),
        flip: Vec::new(),
        origin: Vec::new(),
        costs,
        cost_offset,
        vars,
        ncols,
    };
    for (coeffs, rel, rhs, origin) in raw {
        let mut row = vec![Rational::zero(); ncols];
        let mut b = rhs;
        for (j, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &sf.vars[j] {
                VarMap::Fixed(l) => b -= a * l,
                VarMap::Shift { col, lower } => {
                    row[*col] = a.clone();
                    b -= a * lower;
                }
                VarMap::Free { pos, neg } => {
                    row[*pos] = a.clone();
                    row[*neg] = -a.clone();
                }
            }
        }
        let signs: &[i8] = match rel {
            Relation::Le => &[1],
            Relation::Ge => &[-1],
            // equality as a pair of opposite inequalities
            Relation::Eq => &[1, -1],
        };
        for &s in signs {
            let flip = b.is_negative();
            let (r, bb) = if flip {
                (row.iter().map(|x| -x).collect(), -b.clone())
            } else {
                (row.clone(), b.clone())
            };
            sf.rows.push(r);
            sf.rhs.push(bb);
            sf.slack_sign.push(s);
            sf.flip.push(flip);
            sf.origin.push(origin);
        }
    }
    sf
}

struct Tableau {
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// row index in the standard form for each tableau row
    row_ids: Vec<usize>,
    cost: Vec<Rational>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, p) in self.cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn set_costs(&mut self, c: &[Rational]) {
        let mut cost: Vec<Rational> = c.to_vec();
        cost.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let f = cost[b].clone();
            for (x, p) in cost.iter_mut().zip(&self.t[r]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.cost = cost;
    }

    /// Runs Bland's rule over columns `< allowed`; `false` means unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.width;
        loop {
            let Some(c) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                if !self.t[r][c].is_positive() {
                    continue;
                }
                let ratio = &self.t[r][rhs] / &self.t[r][c];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

struct Solved {
    solution: LpSolution,
    certificate: Option<DualCertificate>,
}

fn run(lp: &LinearProgram, want_certificate: bool) -> Result<Solved> {
    lp.check_dims()?;
    let sf = standardize(lp);
    let m = sf.rows.len();
    let nz = sf.ncols;
    // columns: structural | slacks (one per row) | artificials
    let slack0 = nz;
    let art0 = nz + m;
    let mut needs_art = Vec::new();
    for r in 0..m {
        let s = if sf.flip[r] { -sf.slack_sign[r] } else { sf.slack_sign[r] };
        if s != 1 {
            needs_art.push(r);
        }
    }
    let width = art0 + needs_art.len();
    let mut t = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = vec![Rational::zero(); width + 1];
        row[..nz].clone_from_slice(&sf.rows[r]);
        let s = if sf.flip[r] { -sf.slack_sign[r] } else { sf.slack_sign[r] };
        row[slack0 + r] = Rational::from_integer(s.into());
        row[width] = sf.rhs[r].clone();
        if let Some(k) = needs_art.iter().position(|&x| x == r) {
            row[art0 + k] = Rational::one();
            basis.push(art0 + k);
        } else {
            basis.push(slack0 + r);
        }
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        basis,
        row_ids: (0..m).collect(),
        cost: Vec::new(),
        width,
    };

    if !needs_art.is_empty() {
        let mut c1 = vec![Rational::zero(); width];
        for k in 0..needs_art.len() {
            c1[art0 + k] = Rational::one();
        }
        tab.set_costs(&c1);
        tab.optimize(width);
        if !tab.cost[width].is_zero() {
            return Ok(Solved {
                solution: LpSolution {
                    status: LpStatus::Infeasible,
                    point: None,
                    value: None,
                },
                certificate: None,
            });
        }
        // drive artificials out of the basis; drop redundant rows
        let mut r = 0;
        while r < tab.t.len() {
            if tab.basis[r] >= art0 {
                if let Some(c) = (0..art0).find(|&j| !tab.t[r][j].is_zero()) {
                    tab.pivot(r, c);
                    r += 1;
                } else {
                    tab.t.remove(r);
                    tab.basis.remove(r);
                    tab.row_ids.remove(r);
                }
            } else {
                r += 1;
            }
        }
    }

    let mut c2 = vec![Rational::zero(); width];
    c2[..nz].clone_from_slice(&sf.costs);
    tab.set_costs(&c2);
    if !tab.optimize(art0) {
        return Ok(Solved {
            solution: LpSolution {
                status: LpStatus::Unbounded,
                point: None,
                value: None,
            },
            certificate: None,
        });
    }

    let mut z = vec![Rational::zero(); width];
    for (r, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.t[r][width].clone();
    }
    let x: Point = sf
        .vars
        .iter()
        .map(|v| match v {
            VarMap::Fixed(l) => l.clone(),
            VarMap::Shift { col, lower } => lower + &z[*col],
            VarMap::Free { pos, neg } => &z[*pos] - &z[*neg],
        })
        .collect();
    let value = dot(&lp.objective, &x);
    debug_assert_eq!(value, dot(&sf.costs, &z[..nz]) + &sf.cost_offset);

    let certificate = want_certificate.then(|| certificate(lp, &sf, &tab, &c2));
    Ok(Solved {
        solution: LpSolution {
            status: LpStatus::Optimal,
            point: Some(x),
            value: Some(value),
        },
        certificate,
    })
}

fn certificate(lp: &LinearProgram, sf: &StandardForm, tab: &Tableau, costs: &[Rational]) -> DualCertificate {
    let nz = sf.ncols;
    let k = tab.basis.len();
    // original standard-form column of variable `col` restricted to the kept rows
    let column = |col: usize| -> Vec<Rational> {
        tab.row_ids
            .iter()
            .map(|&r| {
                if col < nz {
                    sf.rows[r][col].clone()
                } else if col == nz + r {
                    let s = if sf.flip[r] { -sf.slack_sign[r] } else { sf.slack_sign[r] };
                    Rational::from_integer(s.into())
                } else {
                    Rational::zero()
                }
            })
            .collect()
    };
    // B^T y = c_B
    let bt: Vec<Vec<Rational>> = tab.basis.iter().map(|&b| column(b)).collect();
    let cb: Vec<Rational> = tab.basis.iter().map(|&b| costs[b].clone()).collect();
    let y_kept = if k == 0 { Vec::new() } else { solve(&bt, &cb).expect("basis is nonsingular") };

    let n = lp.num_vars();
    let mut rows = vec![Rational::zero(); lp.constraints.len()];
    let mut upper = vec![Rational::zero(); n];
    for (idx, &r) in tab.row_ids.iter().enumerate() {
        let y = if sf.flip[r] { -y_kept[idx].clone() } else { y_kept[idx].clone() };
        match sf.origin[r] {
            Origin::Row(i) => rows[i] += y,
            Origin::Upper(j) => upper[j] += y,
        }
    }
    let mut lower = vec![Rational::zero(); n];
    for j in 0..n {
        let mut resid = lp.objective[j].clone() - &upper[j];
        for (c, y) in lp.constraints.iter().zip(&rows) {
            resid -= &c.coeffs[j] * y;
        }
        lower[j] = resid;
    }
    DualCertificate { rows, lower, upper }
}

/// Exact optimum by the two-phase simplex method with Bland's rule.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    Ok(run(lp, false)?.solution)
}

/// As [`solve_lp`], also returning a dual certificate when optimal.
pub fn solve_lp_certified(lp: &LinearProgram) -> Result<(LpSolution, Option<DualCertificate>)> {
    let s = run(lp, true)?;
    Ok((s.solution, s.certificate))
}

/// `min_x max_k fns_k(x)` over `domain` through the epigraph program
/// `min t` s.t. `t >= fns_k(x)`, `x in domain`.
pub fn minimize_maximum(fns: &[AffineFn], domain: &Polytope) -> Result<(Point, Rational)> {
    if fns.is_empty() {
        return Err(Error::InvalidParameter("minimize_maximum needs at least one function".into()));
    }
    let n = domain.dim();
    let mut obj = vec![Rational::zero(); n + 1];
    obj[n] = Rational::one();
    let mut lp = LinearProgram::new(obj);
    for f in fns {
        if f.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.dim(),
            });
        }
        let mut row: Vec<Rational> = f.linear.iter().map(|a| -a).collect();
        row.push(Rational::one());
        lp.add_constraint(row, Relation::Ge, f.constant.clone());
    }
    for h in domain.facets() {
        let mut row = h.normal_q();
        row.push(Rational::zero());
        lp.add_constraint(row, Relation::Ge, -h.offset.clone());
    }
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {
            let mut p = sol.point.expect("optimal");
            let t = p.pop().expect("epigraph variable");
            Ok((p, t))
        }
        LpStatus::Infeasible => Err(Error::LpFailed("infeasible")),
        LpStatus::Unbounded => Err(Error::LpFailed("unbounded")),
    }
}
