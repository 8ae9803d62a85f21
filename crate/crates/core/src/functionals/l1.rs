use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{AffineFn, Polytope};
use crate::integrate::{region_moments, subdivide_by_pl, Moments, PlConvexFn, Subdivision};
use crate::rational::{dot, solve, sub, to_f64, Point, Rational};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Options {
    /// Relative gap `(upper - lower) / upper` at which the search stops.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for L1Options {
    fn default() -> Self {
        L1Options {
            tol: 1e-9,
            max_iter: 10_000,
        }
    }
}

/// Certified enclosure `lower <= ||f||_{1,T} <= upper` of the reduced L1-norm
/// `inf_xi int_P |(f + xi) - mean(f + xi)| dx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L1Bracket {
    pub lower: Rational,
    pub upper: Rational,
    pub converged: bool,
    pub iterations: usize,
    /// Linear part of the best `xi` found (attains `upper`).
    pub linear: Vec<Rational>,
}

impl L1Bracket {
    pub fn relative_gap(&self) -> f64 {
        if self.upper.is_zero() {
            0.0
        } else {
            to_f64(&((&self.upper - &self.lower) / &self.upper))
        }
    }
}

pub fn reduced_l1_norm(p: &Polytope, f: &PlConvexFn, opts: L1Options) -> Result<L1Bracket> {
    reduced_l1_norm_on(&subdivide_by_pl(p, f), opts)
}

struct Problem<'a> {
    cells: &'a Subdivision,
    bary: Point,
    mean: Rational,
    cov: Vec<Vec<Rational>>,
    /// `int f (x - bary) dx`
    fx: Vec<Rational>,
    vertices: Vec<Point>,
}

struct Eval {
    g: Rational,
    q: Vec<Rational>,
    lower: Rational,
}

impl Problem<'_> {
    /// `h_a = f + <a, x - bary> - mean f` on the cell with piece `piece`.
    fn residual(&self, piece: &AffineFn, a: &[Rational]) -> AffineFn {
        let linear: Vec<Rational> = piece.linear.iter().zip(a).map(|(x, y)| x + y).collect();
        AffineFn::new(linear, &piece.constant - dot(a, &self.bary) - &self.mean)
    }

    fn centered_first(&self, m: &Moments) -> Vec<Rational> {
        m.first.iter().zip(&self.bary).map(|(f, b)| f - b * &m.volume).collect()
    }

    fn eval(&self, a: &[Rational]) -> Eval {
        let n = a.len();
        let mut g = Rational::zero();
        let mut q = vec![Rational::zero(); n];
        for cell in &self.cells.cells {
            let h = self.residual(self.cells.piece(cell), a);
            let values: Vec<Rational> = cell.region.vertices().iter().map(|v| h.eval(v)).collect();
            let mut add = |m: &Moments, sign: bool| {
                let int_h = m.integrate_affine(&h);
                let first = self.centered_first(m);
                if sign {
                    g += int_h;
                    q.iter_mut().zip(first).for_each(|(x, y)| *x += y);
                } else {
                    g -= int_h;
                    q.iter_mut().zip(first).for_each(|(x, y)| *x -= y);
                }
            };
            if values.iter().all(|v| !v.is_negative()) {
                add(&cell.moments, true);
            } else if values.iter().all(|v| !v.is_positive()) {
                add(&cell.moments, false);
            } else {
                if let Ok(r) = cell.region.cut(h.as_constraint(None)) {
                    add(&region_moments(&r), true);
                }
                if let Ok(r) = cell.region.cut(h.neg().as_constraint(None)) {
                    add(&region_moments(&r), false);
                }
            }
        }
        let lower = self.lower_bound(a, &g, &q);
        Eval { g, q, lower }
    }

    /// Dual bound from the test function `s = (sign h_a - <c, x - bary>) / (1 + M)`
    /// with `cov c = q`, which is orthogonal to every `x_i - bary_i`, so
    /// `int s h_b` is the same for all `b` and bounds `int |h_b|` from below.
    fn lower_bound(&self, a: &[Rational], g: &Rational, q: &[Rational]) -> Rational {
        let c = solve(&self.cov, q).expect("covariance is positive definite");
        let m = self
            .vertices
            .iter()
            .map(|v| dot(&c, &sub(v, &self.bary)).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let value = (g - dot(a, q) - dot(&c, &self.fx)) / (Rational::from_integer(1.into()) + m);
        if value.is_negative() {
            Rational::zero()
        } else {
            value
        }
    }
}

fn to_rational(x: f64) -> Rational {
    BigRational::from_float(x).unwrap_or_else(Rational::zero)
}

fn solve_f64(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let k = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= k * a[col][c];
            }
            b[r] -= k * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Stops when the certified relative gap drops below `tol`. The search runs
/// damped Newton steps in floating point on the exact gradient `q`, with a
/// finite-difference Hessian; every iterate is evaluated exactly, so the
/// bracket is always valid even when the search stalls.
pub fn reduced_l1_norm_on(cells: &Subdivision, opts: L1Options) -> Result<L1Bracket> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let n = cells.dim();
    let total = Moments::sum(n, cells.cells.iter().map(|c| &c.moments));
    let vol = total.volume.clone();
    let bary = total.barycenter();
    let mean = cells.interior_integral() / &vol;
    let fx: Vec<Rational> = (0..n)
        .map(|i| cells.integral_times(&AffineFn::coordinate(n, i)) - &bary[i] * cells.interior_integral())
        .collect();
    let problem = Problem {
        cells,
        bary,
        mean,
        cov: total.covariance(),
        fx,
        vertices: cells.vertices(),
    };

    // least-squares fit as the starting point
    let mut a: Vec<Rational> = solve(&problem.cov, &problem.fx)
        .expect("covariance is positive definite")
        .iter()
        .map(|x| -x)
        .collect();
    let mut cur = problem.eval(&a);
    let mut best = L1Bracket {
        lower: cur.lower.clone(),
        upper: cur.g.clone(),
        converged: false,
        iterations: 0,
        linear: a.clone(),
    };
    let cov_f: Vec<Vec<f64>> = problem.cov.iter().map(|r| r.iter().map(to_f64).collect()).collect();

    for iter in 0..opts.max_iter {
        best.iterations = iter;
        if best.upper.is_zero() || best.relative_gap() <= opts.tol {
            best.converged = true;
            return Ok(best);
        }
        let af: Vec<f64> = a.iter().map(to_f64).collect();
        let qf: Vec<f64> = cur.q.iter().map(to_f64).collect();
        let gf = to_f64(&cur.g);
        let norm_a = af.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let eps = 1e-7 * (1.0 + norm_a);
        let mut hess = vec![vec![0.0; n]; n];
        for j in 0..n {
            let mut ap = af.clone();
            ap[j] += eps;
            let ar: Vec<Rational> = ap.iter().map(|&x| to_rational(x)).collect();
            let e = problem.eval(&ar);
            for i in 0..n {
                hess[i][j] = (to_f64(&e.q[i]) - qf[i]) / eps;
            }
            absorb(&mut best, &e, &ar);
        }
        for i in 0..n {
            for j in 0..i {
                let s = 0.5 * (hess[i][j] + hess[j][i]);
                hess[i][j] = s;
                hess[j][i] = s;
            }
        }
        let rhs: Vec<f64> = qf.iter().map(|x| -x).collect();
        let newton = solve_f64(hess, rhs.clone()).filter(|d| d.iter().zip(&qf).map(|(x, y)| x * y).sum::<f64>() < 0.0);
        let dir = match newton {
            Some(d) => d,
            None => solve_f64(cov_f.clone(), rhs).ok_or(Error::Singular)?,
        };
        let mut step = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let trial: Vec<Rational> = af.iter().zip(&dir).map(|(x, d)| to_rational(x + step * d)).collect();
            let e = problem.eval(&trial);
            absorb(&mut best, &e, &trial);
            if to_f64(&e.g) < gf || e.g < cur.g {
                a = trial;
                cur = e;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            best.iterations = iter + 1;
            best.converged = best.upper.is_zero() || best.relative_gap() <= opts.tol;
            return Ok(best);
        }
    }
    best.iterations = opts.max_iter;
    best.converged = best.upper.is_zero() || best.relative_gap() <= opts.tol;
    Ok(best)
}

fn absorb(best: &mut L1Bracket, e: &Eval, a: &[Rational]) {
    if e.g < best.upper {
        best.upper = e.g.clone();
        best.linear = a.to_vec();
    }
    if e.lower > best.lower {
        best.lower = e.lower.clone();
    }
    debug_assert!(best.lower <= best.upper, "dual bound exceeds attained value");
}
