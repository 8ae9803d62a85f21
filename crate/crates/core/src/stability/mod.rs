//! Stability verdicts: the sufficient condition in terms of `d_x0`, the
//! barycenter criterion for toric Fano manifolds, a crease-function search for
//! destabilizers, and lattice-point oracles for the continuous quantities.

mod lattice;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use lattice::{
    df_asymptotic_check, ehrhart_count, ehrhart_fit, lattice_points, weight_sum, Comparison,
    EhrhartPolynomial, OracleReport,
};

use crate::error::{Error, Result};
use crate::functionals::{jnorm_on, l_v_on, ExtremalData};
use crate::geometry::{best_interior_point, is_reflexive, AffineFn, Polytope};
use crate::integrate::{subdivide_by_pl, PlConvexFn};
use crate::parallel::ordered_map;
use crate::rational::{from_bigint, Point, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuffBranch {
    /// `V = 0` and `sbar < (n + 1) / d_x0`.
    VZeroStrict,
    /// `V != 0` and `sbar + max_P V <= (n + 1) / d_x0`.
    VNonzero,
    Inconclusive,
}

impl SuffBranch {
    pub fn is_positive(self) -> bool {
        self != SuffBranch::Inconclusive
    }

    pub fn label(self) -> &'static str {
        match self {
            SuffBranch::VZeroStrict => "V = 0, strict",
            SuffBranch::VNonzero => "V != 0, non-strict",
            SuffBranch::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffVerdict {
    pub x0: Point,
    /// `max_j (<lambda_j, x0> + d_j)`.
    pub d_x0: Rational,
    pub sbar: Rational,
    pub max_v: Rational,
    /// `(n + 1) / d_x0`.
    pub threshold: Rational,
    pub branch: SuffBranch,
    /// `1 - d_x0 / (n + 1) * (sbar + max_P V)`; for a nonnegative convex `f`
    /// vanishing at `x0`, `L_V(f) >= delta * int_dP f dsigma`.
    pub delta: Rational,
}

impl SuffVerdict {
    pub fn verdict(&self) -> &'static str {
        if self.branch.is_positive() {
            "uniformly relatively K-polystable"
        } else {
            "inconclusive"
        }
    }
}

/// Evaluates the sufficient condition at `x0`, or at the minimizer of `d_x0`
/// when `x0` is not given.
pub fn sufficient_condition(p: &Polytope, ed: &ExtremalData, x0: Option<&[Rational]>) -> Result<SuffVerdict> {
    let n = p.dim();
    let x0: Point = match x0 {
        Some(x) => {
            if x.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: x.len(),
                });
            }
            if !p.is_interior(x) {
                return Err(Error::NotInterior);
            }
            x.to_vec()
        }
        None => best_interior_point(p)?.0,
    };
    let d_x0 = p
        .facets()
        .iter()
        .map(|h| h.eval(&x0))
        .max()
        .expect("polytope has facets");
    let max_v = ed.max_v(p);
    let n1 = Rational::from_integer(BigInt::from(n + 1));
    let threshold = &n1 / &d_x0;
    let load = &ed.sbar + &max_v;
    let delta = Rational::one() - &d_x0 / &n1 * &load;
    let branch = if ed.is_v_zero() {
        if ed.sbar < threshold {
            SuffBranch::VZeroStrict
        } else {
            SuffBranch::Inconclusive
        }
    } else if load <= threshold {
        SuffBranch::VNonzero
    } else {
        SuffBranch::Inconclusive
    };
    Ok(SuffVerdict {
        x0,
        d_x0,
        sbar: ed.sbar.clone(),
        max_v,
        threshold,
        branch,
        delta,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoCondition {
    pub index: u8,
    pub statement: &'static str,
    pub holds: bool,
    /// `true` when `holds` is computed directly, `false` when it is implied
    /// by the equivalence with the computed conditions.
    pub computed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoVerdict {
    pub reflexive: bool,
    pub barycenter: Point,
    pub v: AffineFn,
    /// Empty unless `reflexive`.
    pub conditions: Vec<FanoCondition>,
}

impl FanoVerdict {
    /// `None` for non-reflexive polytopes.
    pub fn verdict(&self) -> Option<&'static str> {
        if !self.reflexive {
            return None;
        }
        Some(if self.conditions.iter().all(|c| c.holds) {
            "uniformly K-polystable"
        } else {
            "not K-semistable"
        })
    }
}

/// For a reflexive `P` the following are equivalent: uniform K-polystability,
/// K-polystability, K-semistability, vanishing Futaki invariant, barycenter at
/// the origin, `V = 0`. The last three are computed independently.
pub fn fano_analysis(p: &Polytope, ed: &ExtremalData) -> FanoVerdict {
    let barycenter = ed.moments.barycenter();
    let reflexive = is_reflexive(p);
    let mut conditions = Vec::new();
    if reflexive {
        // Futaki invariant on the coordinate functions
        let futaki = ed.rhs.iter().all(Rational::is_zero);
        let centered = barycenter.iter().all(Rational::is_zero);
        let v_zero = ed.is_v_zero();
        debug_assert!(futaki == centered && centered == v_zero, "Fano criteria disagree");
        let holds = futaki && centered && v_zero;
        let implied = [
            (1, "uniformly K-polystable"),
            (2, "K-polystable"),
            (3, "K-semistable"),
        ];
        for (index, statement) in implied {
            conditions.push(FanoCondition {
                index,
                statement,
                holds,
                computed: false,
            });
        }
        conditions.push(FanoCondition {
            index: 4,
            statement: "Futaki invariant vanishes",
            holds: futaki,
            computed: true,
        });
        conditions.push(FanoCondition {
            index: 5,
            statement: "barycenter is the origin",
            holds: centered,
            computed: true,
        });
        conditions.push(FanoCondition {
            index: 6,
            statement: "V = 0",
            holds: v_zero,
            computed: true,
        });
    }
    FanoVerdict {
        reflexive,
        barycenter,
        v: ed.v.clone(),
        conditions,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DestabVerdict {
    NoDestabilizerFound,
    DestabilizerCertificate,
}

impl fmt::Display for DestabVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DestabVerdict::NoDestabilizerFound => "no-destabilizer-found",
            DestabVerdict::DestabilizerCertificate => "destabilizer-certificate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestabCandidate {
    /// `ell` in `f = max(0, ell)`.
    pub crease: AffineFn,
    pub f: PlConvexFn,
    pub l_v: Rational,
    pub jnorm: Rational,
    pub ratio: Rational,
}

impl DestabCandidate {
    fn evaluate(p: &Polytope, ed: &ExtremalData, crease: AffineFn) -> Result<DestabCandidate> {
        let f = PlConvexFn::crease(crease.clone());
        let cells = subdivide_by_pl(p, &f);
        let l_v = l_v_on(&cells, ed);
        let jnorm = jnorm_on(&cells)?.value;
        if !jnorm.is_positive() {
            return Err(Error::InvalidParameter("crease does not meet the interior".into()));
        }
        let ratio = &l_v / &jnorm;
        Ok(DestabCandidate {
            crease,
            f,
            l_v,
            jnorm,
            ratio,
        })
    }

    /// Recomputes `L_V(f)` and `||f||_J` from scratch and compares.
    pub fn verify(&self, p: &Polytope, ed: &ExtremalData) -> bool {
        DestabCandidate::evaluate(p, ed, self.crease.clone()).is_ok_and(|c| c == *self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestabReport {
    pub family: String,
    pub assume_v_zero: bool,
    pub candidates: usize,
    /// Minimizer of `L_V(f) / ||f||_J`, first in candidate order among ties.
    pub best: Option<DestabCandidate>,
    pub verdict: DestabVerdict,
}

/// Crease functions `max(0, <a, x> + b)` with `a` primitive, `|a_i| <= max_slope`,
/// `b` in `(1 / grid_depth) Z` and the crease meeting the interior of `P`, in
/// lexicographic order on `(a, b)`.
pub fn crease_family(p: &Polytope, grid_depth: u64, max_slope: u64) -> Vec<AffineFn> {
    let n = p.dim();
    let s = max_slope as i64;
    let k = BigInt::from(grid_depth);
    let kq = from_bigint(&k);
    let mut out = Vec::new();
    let mut a = vec![-s; n];
    loop {
        let g = a.iter().fold(0i64, |acc, x| acc.gcd(x));
        if g == 1 {
            let aq: Vec<Rational> = a.iter().map(|&x| Rational::from_integer(x.into())).collect();
            let values: Vec<Rational> = p.vertices().iter().map(|v| crate::rational::dot(&aq, v)).collect();
            let lo = values.iter().min().expect("vertices") * &kq;
            let hi = values.iter().max().expect("vertices") * &kq;
            // -b = t / k with k lo < t < k hi; ascending b is descending t
            let mut t = hi.ceil().to_integer() - BigInt::one();
            let lo_t = lo.floor().to_integer() + BigInt::one();
            while t >= lo_t {
                out.push(AffineFn::new(aq.clone(), -Rational::new(t.clone(), k.clone())));
                t -= BigInt::one();
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if a[i] < s {
                a[i] += 1;
                a[i + 1..].iter_mut().for_each(|x| *x = -s);
                break;
            }
        }
    }
}

pub fn destabilizer_search(
    p: &Polytope,
    ed: &ExtremalData,
    grid_depth: u64,
    max_slope: u64,
    assume_v_zero: bool,
) -> Result<DestabReport> {
    if grid_depth == 0 || max_slope == 0 {
        return Err(Error::InvalidParameter("grid depth and slope bound must be positive".into()));
    }
    let ed = if assume_v_zero { ed.without_v() } else { ed.clone() };
    let family = crease_family(p, grid_depth, max_slope);
    let evaluated = ordered_map(&family, |crease| DestabCandidate::evaluate(p, &ed, crease.clone()));
    let mut best: Option<DestabCandidate> = None;
    for c in evaluated {
        let c = c?;
        if best.as_ref().map_or(true, |b| c.ratio.cmp(&b.ratio) == Ordering::Less) {
            best = Some(c);
        }
    }
    let verdict = match &best {
        Some(b) if !b.ratio.is_positive() => DestabVerdict::DestabilizerCertificate,
        _ => DestabVerdict::NoDestabilizerFound,
    };
    Ok(DestabReport {
        family: format!(
            "max(0, <a, x> + b), a primitive with |a_i| <= {max_slope}, b in (1/{grid_depth})Z, crease meeting the interior{}",
            if assume_v_zero { ", V replaced by 0" } else { "" }
        ),
        assume_v_zero,
        candidates: family.len(),
        best,
        verdict,
    })
}

#[cfg(test)]
mod tests;
