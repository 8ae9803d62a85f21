use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::functionals::{na_report, ExtremalData};
use crate::geometry::{is_integral, Polytope};
use crate::integrate::{subdivide_by_pl, PlConvexFn};
use crate::parallel::ordered_map;
use crate::rational::{from_bigint, solve, to_f64, Rational};

/// Integer facet data of an integral polytope: rows `(lambda_j, d_j)`.
fn integer_facets(p: &Polytope) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
    if !is_integral(p) {
        return Err(Error::NotIntegral);
    }
    Ok(p.facets()
        .iter()
        .map(|h| (h.normal.clone(), h.offset.to_integer()))
        .collect())
}

fn bounding_box(p: &Polytope, m: u64) -> Vec<(BigInt, BigInt)> {
    let m = BigInt::from(m);
    (0..p.dim())
        .map(|i| {
            let lo = p.vertices().iter().map(|v| v[i].to_integer()).min().expect("vertices");
            let hi = p.vertices().iter().map(|v| v[i].to_integer()).max().expect("vertices");
            (lo * &m, hi * &m)
        })
        .collect()
}

/// Folds `visit` over every lattice point of `mP` (bounding-box scan with exact
/// membership); slices along the first coordinate run in parallel and are
/// combined in ascending order.
fn scan<T, V, C>(p: &Polytope, m: u64, init: T, visit: V, combine: C) -> Result<T>
where
    T: Clone + Send + Sync,
    V: Fn(&mut T, &[BigInt]) + Sync + Send,
    C: Fn(T, T) -> T,
{
    let facets = integer_facets(p)?;
    let bbox = bounding_box(p, m);
    let mb = BigInt::from(m);
    let mut firsts = Vec::new();
    let mut x = bbox[0].0.clone();
    while x <= bbox[0].1 {
        firsts.push(x.clone());
        x += 1;
    }
    let parts = ordered_map(&firsts, |x0| {
        let mut acc = init.clone();
        let mut point = vec![x0.clone()];
        walk(&facets, &bbox, &mb, &mut point, &mut acc, &visit);
        acc
    });
    Ok(parts.into_iter().fold(init, combine))
}

fn walk<T, V: Fn(&mut T, &[BigInt])>(
    facets: &[(Vec<BigInt>, BigInt)],
    bbox: &[(BigInt, BigInt)],
    m: &BigInt,
    point: &mut Vec<BigInt>,
    acc: &mut T,
    visit: &V,
) {
    let i = point.len();
    if i == bbox.len() {
        let inside = facets
            .iter()
            .all(|(l, d)| l.iter().zip(point.iter()).map(|(a, b)| a * b).sum::<BigInt>() + d * m >= BigInt::zero());
        if inside {
            visit(acc, point);
        }
        return;
    }
    let mut x = bbox[i].0.clone();
    while x <= bbox[i].1 {
        point.push(x.clone());
        walk(facets, bbox, m, point, acc, visit);
        point.pop();
        x += 1;
    }
}

/// The lattice points of `mP` in lexicographic order.
pub fn lattice_points(p: &Polytope, m: u64) -> Result<Vec<Vec<BigInt>>> {
    scan(
        p,
        m,
        Vec::new(),
        |acc: &mut Vec<Vec<BigInt>>, x| acc.push(x.to_vec()),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}

/// `#(mP ∩ Z^n)`.
pub fn ehrhart_count(p: &Polytope, m: u64) -> Result<BigInt> {
    scan(p, m, BigInt::zero(), |acc, _| *acc += 1, |a, b| a + b)
}

/// Ehrhart polynomial, coefficients from the leading term down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    pub coefficients: Vec<Rational>,
    /// `(m, #(mP ∩ Z^n))` for every count taken.
    pub samples: Vec<(u64, BigInt)>,
}

impl EhrhartPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn leading(&self) -> &Rational {
        &self.coefficients[0]
    }

    pub fn subleading(&self) -> &Rational {
        &self.coefficients[1]
    }

    pub fn eval(&self, m: u64) -> Rational {
        let m = Rational::from_integer(m.into());
        self.coefficients.iter().fold(Rational::zero(), |acc, c| acc * &m + c)
    }
}

/// Interpolates through `m = 1..=n+1` and checks the counts for
/// `m = n+2..=m_max` against the polynomial.
pub fn ehrhart_fit(p: &Polytope, m_max: u64) -> Result<EhrhartPolynomial> {
    let n = p.dim();
    if m_max < n as u64 + 1 {
        return Err(Error::InvalidParameter(format!("m_max must be at least {}", n + 1)));
    }
    let samples: Vec<(u64, BigInt)> = (1..=m_max)
        .map(|m| ehrhart_count(p, m).map(|c| (m, c)))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Rational>> = (1..=n as u64 + 1)
        .map(|m| {
            let m = Rational::from_integer(m.into());
            (0..=n).rev().map(|k| pow(&m, k)).collect()
        })
        .collect();
    let values: Vec<Rational> = samples[..=n].iter().map(|(_, c)| from_bigint(c)).collect();
    let coefficients = solve(&rows, &values).expect("Vandermonde system is regular");
    let poly = EhrhartPolynomial { coefficients, samples };
    check_samples(&poly, &poly.samples[n + 1..])?;
    Ok(poly)
}

fn check_samples(poly: &EhrhartPolynomial, samples: &[(u64, BigInt)]) -> Result<()> {
    for (m, c) in samples {
        let predicted = poly.eval(*m);
        let counted = from_bigint(c);
        if predicted != counted {
            return Err(Error::InterpolationMismatch {
                m: *m,
                predicted,
                counted,
            });
        }
    }
    Ok(())
}

fn pow(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

/// `w_m = sum over alpha in mP ∩ Z^n of m (L - f(alpha / m))`.
pub fn weight_sum(p: &Polytope, f: &PlConvexFn, level: &Rational, m: u64) -> Result<Rational> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let max = subdivide_by_pl(p, f).max_value();
    if *level < max {
        return Err(Error::LevelTooSmall {
            l: level.clone(),
            max,
        });
    }
    let mq = Rational::from_integer(m.into());
    let ml = &mq * level;
    // m f(alpha / m) = max_k (<g_k, alpha> + m c_k)
    let pieces: Vec<(Vec<Rational>, Rational)> = f
        .pieces()
        .iter()
        .map(|a| (a.linear.clone(), &a.constant * &mq))
        .collect();
    scan(
        p,
        m,
        Rational::zero(),
        |acc, alpha| {
            let mf = pieces
                .iter()
                .map(|(g, c)| g.iter().zip(alpha).map(|(gi, ai)| gi * from_bigint(ai)).sum::<Rational>() + c)
                .max()
                .expect("nonempty");
            *acc += &ml - mf;
        },
        |a, b| a + b,
    )
}

/// An estimate set against its exact target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub name: &'static str,
    pub exact: Rational,
    pub estimate: Rational,
}

impl Comparison {
    pub fn residual(&self) -> Rational {
        &self.estimate - &self.exact
    }

    /// `|estimate - exact| / |exact|`, or the absolute residual when `exact = 0`.
    pub fn relative_error(&self) -> f64 {
        let r = self.residual().abs();
        if self.exact.is_zero() {
            to_f64(&r)
        } else {
            to_f64(&(r / self.exact.abs()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub level: Rational,
    pub ehrhart: EhrhartPolynomial,
    /// `m -> #(mP ∩ Z^n)` at the oracle sample points.
    pub counts: BTreeMap<u64, BigInt>,
    /// `m -> w_m`.
    pub weights: BTreeMap<u64, Rational>,
    /// Least-squares fit `w_m / (m E_P(m)) ~ F0 + F1 / m`.
    pub f0: Rational,
    pub f1: Rational,
    /// `m -> w_m / (m E_P(m)) - F0 - F1 / m`.
    pub fit_residuals: BTreeMap<u64, Rational>,
    /// Leading and subleading Ehrhart coefficients against `vol(P)` and
    /// `sigma(dP) / 2`, `F0` against `E^NA` and `-2 F1` against `M^NA`.
    pub comparisons: Vec<Comparison>,
}

impl OracleReport {
    pub fn comparison(&self, name: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.name == name)
    }
}

/// Lattice-point estimates of `E^NA` and `M^NA` from the expansion
/// `w_m / (m E_P(m)) = F0 + F1 / m + O(1 / m^2)`.
pub fn df_asymptotic_check(
    p: &Polytope,
    ed: &ExtremalData,
    f: &PlConvexFn,
    level: &Rational,
    m_list: &[u64],
) -> Result<OracleReport> {
    if m_list.len() < 3 || m_list.windows(2).any(|w| w[0] >= w[1]) || m_list[0] == 0 {
        return Err(Error::InvalidParameter(
            "need at least three increasing positive sample sizes".into(),
        ));
    }
    let exact = na_report(p, ed, f, level)?;
    let ehrhart = ehrhart_fit(p, p.dim() as u64 + 2)?;
    let mut counts = BTreeMap::new();
    let mut weights = BTreeMap::new();
    let mut points = Vec::new();
    for &m in m_list {
        let count = ehrhart_count(p, m)?;
        check_samples(&ehrhart, &[(m, count.clone())])?;
        let w = weight_sum(p, f, level, m)?;
        let y = &w / (Rational::from_integer(m.into()) * from_bigint(&count));
        points.push((Rational::new(BigInt::one(), m.into()), y));
        counts.insert(m, count);
        weights.insert(m, w);
    }
    let (f0, f1) = fit_line(&points);
    let fit_residuals = m_list
        .iter()
        .zip(&points)
        .map(|(&m, (u, y))| (m, y - &f0 - &f1 * u))
        .collect();
    let mt = &ed.moments;
    let comparisons = vec![
        Comparison {
            name: "leading Ehrhart coefficient vs vol(P)",
            exact: mt.volume().clone(),
            estimate: ehrhart.leading().clone(),
        },
        Comparison {
            name: "subleading Ehrhart coefficient vs sigma(dP)/2",
            exact: mt.boundary_measure() / Rational::from_integer(2.into()),
            estimate: ehrhart.subleading().clone(),
        },
        Comparison {
            name: "F0 vs E^NA",
            exact: exact.e_na.clone(),
            estimate: f0.clone(),
        },
        Comparison {
            name: "-2 F1 vs M^NA",
            exact: exact.m_na.clone(),
            estimate: -Rational::from_integer(2.into()) * &f1,
        },
    ];
    Ok(OracleReport {
        level: level.clone(),
        ehrhart,
        counts,
        weights,
        f0,
        f1,
        fit_residuals,
        comparisons,
    })
}

/// Least squares `y ~ c0 + c1 u` from the exact normal equations.
fn fit_line(points: &[(Rational, Rational)]) -> (Rational, Rational) {
    let k = Rational::from_integer(BigInt::from(points.len()));
    let su: Rational = points.iter().map(|(u, _)| u).sum();
    let sy: Rational = points.iter().map(|(_, y)| y).sum();
    let suu: Rational = points.iter().map(|(u, _)| u * u).sum();
    let suy: Rational = points.iter().map(|(u, y)| u * y).sum();
    let c1 = (&k * suy - &su * &sy) / (&k * suu - &su * &su);
    let c0 = (sy - &c1 * su) / k;
    (c0, c1)
}
