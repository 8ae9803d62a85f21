//! Combinatorial functionals on convex piecewise-affine functions.

mod l1;
mod na;

use num_traits::{One, Zero};

pub use l1::{reduced_l1_norm, reduced_l1_norm_on, L1Bracket, L1Options};
pub use na::{compactification_polytope, na_report, DhMeasure, NaFunctionalReport};

use crate::error::{Error, Result};
use crate::geometry::{AffineFn, Polytope};
use crate::integrate::{moments, subdivide_by_pl, MomentTable, PlConvexFn, Subdivision};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::rational::{dot, solve, sub, Rational};

/// `sigma(dP) / vol(P)`.
pub fn sbar(mt: &MomentTable) -> Rational {
    mt.boundary_measure() / mt.volume()
}

/// `sbar` together with the extremal affine function `V = <a, x> + c`.
///
/// `a` solves `cov * a = rhs` where `cov` is the centered second moment
/// matrix `int (x - b)(x - b)^T dx` and `rhs_i = int_dP x_i dsigma - sbar int_P x_i dx`;
/// `c` makes `int_P V dx = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalData {
    pub sbar: Rational,
    pub v: AffineFn,
    pub moments: MomentTable,
    pub gram: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub solution: Vec<Rational>,
}

impl ExtremalData {
    pub fn is_v_zero(&self) -> bool {
        self.v.is_zero()
    }

    /// A copy with `V` replaced by zero.
    pub fn without_v(&self) -> ExtremalData {
        let n = self.v.dim();
        ExtremalData {
            v: AffineFn::zero(n),
            solution: vec![Rational::zero(); n],
            ..self.clone()
        }
    }

    /// `max_P V`, attained at a vertex.
    pub fn max_v(&self, p: &Polytope) -> Rational {
        p.vertices().iter().map(|x| self.v.eval(x)).max().expect("polytope has vertices")
    }
}

pub fn extremal_affine(mt: &MomentTable) -> Result<ExtremalData> {
    let s = sbar(mt);
    let interior = mt.interior();
    let boundary = mt.boundary_total();
    let gram = mt.covariance();
    let rhs: Vec<Rational> = boundary
        .first
        .iter()
        .zip(&interior.first)
        .map(|(b, i)| b - &s * i)
        .collect();
    let a = solve(&gram, &rhs).ok_or(Error::Singular)?;
    let c = -dot(&a, &interior.first) / &interior.volume;
    Ok(ExtremalData {
        sbar: s,
        v: AffineFn::new(a.clone(), c),
        moments: mt.clone(),
        gram,
        rhs,
        solution: a,
    })
}

/// Convenience: moments and extremal data of `P`.
pub fn extremal_data(p: &Polytope) -> Result<ExtremalData> {
    extremal_affine(&moments(p))
}

/// `L_V(f) = int_dP f dsigma - int_P (sbar + V) f dx`.
pub fn l_v(p: &Polytope, ed: &ExtremalData, f: &PlConvexFn) -> Rational {
    l_v_on(&subdivide_by_pl(p, f), ed)
}

pub fn l_v_on(sub: &Subdivision, ed: &ExtremalData) -> Rational {
    sub.boundary_integral() - &ed.sbar * sub.interior_integral() - sub.integral_times(&ed.v)
}

/// `f + l` with `l` affine, `(f + l)(x0) = 0` and `f + l >= 0` on `P`.
///
/// `-l` is a supporting affine function of `f` at `x0`, found as a feasible
/// subgradient `g` of the inequalities `f(v) >= f(x0) + <g, v - x0>` over the
/// vertices of the linearity cells.
pub fn normalize_pl(p: &Polytope, f: &PlConvexFn, x0: &[Rational]) -> Result<PlConvexFn> {
    if x0.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: x0.len(),
        });
    }
    if !p.is_interior(x0) {
        return Err(Error::NotInterior);
    }
    let n = p.dim();
    let cells = subdivide_by_pl(p, f);
    let fx0 = f.eval(x0);
    let mut lp = LinearProgram::new(vec![Rational::zero(); n]);
    for (v, fv) in cells.vertex_values() {
        // <g, v - x0> <= f(v) - f(x0)
        lp.add_constraint(sub(&v, x0), Relation::Le, fv - &fx0);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::LpFailed("no subgradient found"));
    }
    let g = sol.point.expect("optimal");
    let l = AffineFn::new(g.iter().map(|x| -x).collect(), dot(&g, x0) - fx0);
    Ok(f.add_affine(&l))
}

/// `mean_P f - min_P f`.
pub fn jnorm_raw(p: &Polytope, f: &PlConvexFn) -> Rational {
    jnorm_raw_on(&subdivide_by_pl(p, f))
}

pub fn jnorm_raw_on(sub: &Subdivision) -> Rational {
    sub.interior_integral() / sub.volume() - sub.min_value()
}

/// `inf_xi (mean(f + xi) - min(f + xi))` over affine `xi`, with an optimal
/// `xi` normalized so that `min(f + xi) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JNorm {
    pub value: Rational,
    pub witness: AffineFn,
}

pub fn jnorm(p: &Polytope, f: &PlConvexFn) -> Result<JNorm> {
    jnorm_on(&subdivide_by_pl(p, f))
}

pub fn jnorm_on(sub: &Subdivision) -> Result<JNorm> {
    let n = sub.dim();
    let vol = sub.volume();
    let mean = sub.interior_integral() / &vol;
    let first = sub
        .cells
        .iter()
        .fold(vec![Rational::zero(); n], |acc, c| crate::rational::add(&acc, &c.moments.first));
    let bary: Vec<Rational> = first.iter().map(|m| m / &vol).collect();
    // variables (a_1..a_n, m): minimize <a, bary> - m, m - <a, v> <= f(v)
    let mut obj = bary.clone();
    obj.push(-Rational::one());
    let mut lp = LinearProgram::new(obj);
    for (v, fv) in sub.vertex_values() {
        let mut row: Vec<Rational> = v.iter().map(|x| -x).collect();
        row.push(Rational::one());
        lp.add_constraint(row, Relation::Le, fv);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::LpFailed("J-norm program not optimal"));
    }
    let mut x = sol.point.expect("optimal");
    let m = x.pop().expect("epigraph variable");
    Ok(JNorm {
        value: mean + sol.value.expect("optimal"),
        witness: AffineFn::new(x, -m),
    })
}
