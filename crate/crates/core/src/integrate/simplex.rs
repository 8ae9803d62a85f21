use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::geometry::AffineFn;
use crate::rational::{det, factorial, from_bigint, sub, Point, Rational};

/// A `k`-simplex in `R^n` carrying its `k`-dimensional measure.
///
/// For full-dimensional simplices the measure is the Lebesgue volume; for
/// simplices on a facet it is the facet measure computed in lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex {
    pub vertices: Vec<Point>,
    pub measure: Rational,
}

impl Simplex {
    /// Full-dimensional simplex with its Lebesgue volume.
    pub fn full(vertices: Vec<Point>) -> Simplex {
        let n = vertices.len() - 1;
        let rows: Vec<Vec<Rational>> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
        let measure = det(&rows).abs() / from_bigint(&factorial(n));
        Simplex { vertices, measure }
    }

    pub fn with_measure(vertices: Vec<Point>, measure: Rational) -> Simplex {
        Simplex { vertices, measure }
    }

    pub fn order(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Moments up to degree two, from `int b_i = m/(k+1)` and
    /// `int b_i b_j = m (1 + [i=j]) / ((k+1)(k+2))` in barycentric coordinates.
    pub fn moments(&self) -> Moments {
        let n = self.vertices[0].len();
        let k = Rational::from_integer(self.order().into());
        let one = Rational::from_integer(1.into());
        let two = Rational::from_integer(2.into());
        let m = &self.measure;
        let mut sum = vec![Rational::zero(); n];
        for v in &self.vertices {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
        }
        let c1 = m / (&k + &one);
        let first: Vec<Rational> = sum.iter().map(|s| s * &c1).collect();
        let c2 = m / ((&k + &one) * (&k + &two));
        let mut second = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut acc = &sum[i] * &sum[j];
                for v in &self.vertices {
                    acc += &v[i] * &v[j];
                }
                let val = acc * &c2;
                second[j][i] = val.clone();
                second[i][j] = val;
            }
        }
        Moments {
            volume: m.clone(),
            first,
            second,
        }
    }
}

/// `int_S x^alpha` by expanding `x = sum_i b_i v_i` in barycentric coordinates
/// and applying `int_S b^kappa = k! |S| prod(kappa_i!) / (k + |kappa|)!`.
pub fn simplex_moment(s: &Simplex, alpha: &[u32]) -> Rational {
    let k = s.order();
    let nb = k + 1;
    // polynomial in barycentric coordinates: exponent vector -> coefficient
    let mut poly: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    poly.insert(vec![0; nb], Rational::from_integer(1.into()));
    for (coord, &power) in alpha.iter().enumerate() {
        for _ in 0..power {
            let mut next: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
            for (exp, c) in &poly {
                for (i, v) in s.vertices.iter().enumerate() {
                    if v[coord].is_zero() {
                        continue;
                    }
                    let mut e = exp.clone();
                    e[i] += 1;
                    *next.entry(e).or_insert_with(Rational::zero) += c * &v[coord];
                }
            }
            poly = next;
        }
    }
    let total: u32 = alpha.iter().sum();
    let denom = from_bigint(&factorial(k + total as usize));
    let kfact = from_bigint(&factorial(k));
    poly.iter()
        .map(|(exp, c)| {
            let num: Rational = exp.iter().map(|&e| from_bigint(&factorial(e as usize))).product();
            c * num
        })
        .sum::<Rational>()
        * kfact
        * &s.measure
        / denom
}

/// Integrals of `1`, `x_i` and `x_i x_j` over a region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Moments {
    pub volume: Rational,
    pub first: Vec<Rational>,
    pub second: Vec<Vec<Rational>>,
}

impl Moments {
    pub fn zero(n: usize) -> Moments {
        Moments {
            volume: Rational::zero(),
            first: vec![Rational::zero(); n],
            second: vec![vec![Rational::zero(); n]; n],
        }
    }

    pub fn accumulate(&mut self, other: &Moments) {
        self.volume += &other.volume;
        for (a, b) in self.first.iter_mut().zip(&other.first) {
            *a += b;
        }
        for (ra, rb) in self.second.iter_mut().zip(&other.second) {
            for (a, b) in ra.iter_mut().zip(rb) {
                *a += b;
            }
        }
    }

    pub fn sum<'a>(n: usize, items: impl IntoIterator<Item = &'a Moments>) -> Moments {
        let mut m = Moments::zero(n);
        for it in items {
            m.accumulate(it);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// `int x^alpha` for `|alpha| <= 2`.
    pub fn monomial(&self, alpha: &[u32]) -> Option<Rational> {
        let nz: Vec<(usize, u32)> = alpha.iter().copied().enumerate().filter(|&(_, a)| a > 0).collect();
        match nz.as_slice() {
            [] => Some(self.volume.clone()),
            [(i, 1)] => Some(self.first[*i].clone()),
            [(i, 2)] => Some(self.second[*i][*i].clone()),
            [(i, 1), (j, 1)] => Some(self.second[*i][*j].clone()),
            _ => None,
        }
    }

    /// `int f` for affine `f`.
    pub fn integrate_affine(&self, f: &AffineFn) -> Rational {
        let mut s = &f.constant * &self.volume;
        for (a, m) in f.linear.iter().zip(&self.first) {
            if !a.is_zero() {
                s += a * m;
            }
        }
        s
    }

    /// `int f g` for affine `f`, `g`.
    pub fn integrate_product(&self, f: &AffineFn, g: &AffineFn) -> Rational {
        let n = self.dim();
        let mut s = &f.constant * &g.constant * &self.volume;
        for i in 0..n {
            let lin = &f.linear[i] * &g.constant + &g.linear[i] * &f.constant;
            if !lin.is_zero() {
                s += lin * &self.first[i];
            }
            if f.linear[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !g.linear[j].is_zero() {
                    s += &f.linear[i] * &g.linear[j] * &self.second[i][j];
                }
            }
        }
        s
    }

    pub fn barycenter(&self) -> Point {
        self.first.iter().map(|m| m / &self.volume).collect()
    }

    /// `int (x - b)(x - b)^T` about the barycenter `b` (not divided by the volume).
    pub fn covariance(&self) -> Vec<Vec<Rational>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| &self.second[i][j] - &self.first[i] * &self.first[j] / &self.volume)
                    .collect()
            })
            .collect()
    }
}
