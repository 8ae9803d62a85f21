use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{jnorm_on, jnorm_raw_on, ExtremalData};
use crate::error::{Error, Result};
use crate::geometry::{AffineFn, Polytope};
use crate::integrate::{subdivide_by_pl, PlConvexFn, Subdivision};
use crate::rational::{from_bigint, solve, Rational};

/// Non-Archimedean functionals of the toric test configuration of `(f, L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaFunctionalReport {
    pub level: Rational,
    pub e_na: Rational,
    pub j_raw: Rational,
    pub j_reduced: Rational,
    /// Optimal twist for `j_reduced`, normalized so `min(f + xi) = 0`.
    pub witness: AffineFn,
    pub h_v: Rational,
    pub m_na: Rational,
    pub m_v: Rational,
    pub dh: DhMeasure,
    /// `{(x, y) : x in P, f(x) - L <= y <= 0}`.
    pub compactification: Polytope,
}

/// Pushforward of `dx / vol(P)` under `L - f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhMeasure {
    level: Rational,
    volume: Rational,
    cells: Subdivision,
    /// `[L - max f, L - min f]`.
    pub support: (Rational, Rational),
    /// `(position, mass)` for each plateau of `f`.
    pub atoms: Vec<(Rational, Rational)>,
}

impl DhMeasure {
    pub fn new(cells: Subdivision, level: Rational) -> DhMeasure {
        let volume = cells.volume();
        let support = (&level - cells.max_value(), &level - cells.min_value());
        let atoms = cells
            .plateaus()
            .into_iter()
            .map(|(value, vol)| (&level - value, vol / &volume))
            .collect();
        DhMeasure {
            level,
            volume,
            cells,
            support,
            atoms,
        }
    }

    /// `DH((-inf, t]) = vol{f >= L - t} / vol(P)`.
    pub fn cdf(&self, t: &Rational) -> Rational {
        let s = &self.level - t;
        let below = self.cells.sublevel_volume(&s);
        let plateau: Rational = self
            .cells
            .plateaus()
            .into_iter()
            .filter(|(v, _)| *v == s)
            .map(|(_, m)| m)
            .sum();
        Rational::one() - (below - plateau) / &self.volume
    }

    pub fn total_mass(&self) -> Rational {
        self.cdf(&self.support.1)
    }

    /// Values of `L - f` at the cell vertices: the cdf is polynomial between them.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut b: Vec<Rational> = self.cells.vertex_values().into_iter().map(|(_, v)| &self.level - v).collect();
        b.sort();
        b.dedup();
        b
    }

    /// `int t dDH(t) = lo + int_lo^hi (1 - cdf(t)) dt`, integrating the cdf
    /// exactly as a polynomial of degree `<= n` on each interval between breakpoints.
    pub fn mean(&self) -> Rational {
        let n = self.cells.dim();
        let points = self.breakpoints();
        let mut total = self.support.0.clone();
        for w in points.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let width = hi - lo;
            // samples at interior nodes u_k = (k + 1) / (n + 2), local variable u in [0, 1]
            let nodes: Vec<Rational> = (0..=n).map(|k| Rational::new(BigInt::from(k + 1), BigInt::from(n + 2))).collect();
            let values: Vec<Rational> = nodes
                .iter()
                .map(|u| Rational::one() - self.cdf(&(lo + u * &width)))
                .collect();
            let vander: Vec<Vec<Rational>> = nodes
                .iter()
                .map(|u| (0..=n).map(|j| pow(u, j)).collect())
                .collect();
            let coeffs = solve(&vander, &values).expect("distinct nodes");
            let integral: Rational = coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c / Rational::from_integer(BigInt::from(j + 1)))
                .sum();
            total += integral * width;
        }
        total
    }

    /// `(t, cdf(t))` at `k + 1` evenly spaced points across the support.
    pub fn samples(&self, k: usize) -> Vec<(Rational, Rational)> {
        let (lo, hi) = &self.support;
        let k = k.max(1);
        (0..=k)
            .map(|i| {
                let t = lo + (hi - lo) * Rational::new(BigInt::from(i), BigInt::from(k));
                let c = self.cdf(&t);
                (t, c)
            })
            .collect()
    }
}

fn pow(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

/// The `(n+1)`-dimensional polytope `{x in P, f(x) - L <= y <= 0}` with
/// integer primitive normals; `f` must already be reduced to its active pieces
/// and `L >= max_P f`.
pub fn compactification_polytope(p: &Polytope, f: &PlConvexFn, level: &Rational) -> Result<Polytope> {
    let n = p.dim();
    let mut facets: Vec<(Vec<BigInt>, Rational)> = p
        .facets()
        .iter()
        .map(|h| {
            let mut normal = h.normal.clone();
            normal.push(BigInt::zero());
            (normal, h.offset.clone())
        })
        .collect();
    let mut top = vec![BigInt::zero(); n];
    top.push(-BigInt::one());
    facets.push((top, Rational::zero()));
    for piece in f.pieces() {
        // y - <g, x> - c + L >= 0, cleared of denominators
        let den = piece.linear.iter().fold(BigInt::one(), |acc, g| acc.lcm(g.denom()));
        let scale = from_bigint(&den);
        let mut normal: Vec<BigInt> = piece.linear.iter().map(|g| -(g * &scale).to_integer()).collect();
        normal.push(den);
        facets.push((normal, (level - &piece.constant) * scale));
    }
    // at L = max f some facets of P collapse to lower-dimensional faces of Q
    loop {
        match Polytope::new(n + 1, facets.clone(), Some("compactification".into())) {
            Err(Error::RedundantFacet { index }) => {
                facets.remove(index);
            }
            other => return other,
        }
    }
}

pub fn na_report(p: &Polytope, ed: &ExtremalData, f: &PlConvexFn, level: &Rational) -> Result<NaFunctionalReport> {
    let cells = subdivide_by_pl(p, f);
    let max = cells.max_value();
    if *level < max {
        return Err(Error::LevelTooSmall {
            l: level.clone(),
            max,
        });
    }
    let vol = cells.volume();
    let int_f = cells.interior_integral();
    let mean = &int_f / &vol;
    let j = jnorm_on(&cells)?;
    let h_v = -cells.integral_times(&ed.v) / &vol;
    let m_na = (cells.boundary_integral() - &ed.sbar * &int_f) / &vol;
    let compactification = compactification_polytope(p, &cells.function, level)?;
    Ok(NaFunctionalReport {
        level: level.clone(),
        e_na: level - &mean,
        j_raw: jnorm_raw_on(&cells),
        j_reduced: j.value,
        witness: j.witness,
        m_v: &m_na + &h_v,
        h_v,
        m_na,
        dh: DhMeasure::new(cells, level.clone()),
        compactification,
    })
}
