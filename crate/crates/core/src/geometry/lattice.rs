//! Integer lattice helpers: primitive vectors and Z-bases of hyperplane lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{dot, from_bigint, solve, Point, Rational};

use super::HalfSpace;

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Lattice coordinates on a facet hyperplane `{<lambda, x> + d = 0}`.
///
/// `basis` is a Z-basis of `{u in Z^n : <lambda, u> = 0}` and `complement`
/// satisfies `<lambda, complement> = 1`, so `[complement | basis]` is
/// unimodular. Lebesgue measure in the `basis` coordinates is the facet
/// measure `sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasisMap {
    pub facet: Option<usize>,
    pub basis: Vec<Vec<BigInt>>,
    pub complement: Vec<BigInt>,
    pub anchor: Point,
    /// Rows `1..n` of the inverse of `[complement | basis]`.
    coord_rows: Vec<Vec<Rational>>,
}

impl LatticeBasisMap {
    /// Coordinates `t` with `x = anchor + sum_k t_k basis_k`; `x` must lie on the hyperplane.
    pub fn coords(&self, x: &[Rational]) -> Vec<Rational> {
        let shifted: Vec<Rational> = x.iter().zip(&self.anchor).map(|(a, b)| a - b).collect();
        self.coord_rows.iter().map(|r| dot(r, &shifted)).collect()
    }

    pub fn point(&self, t: &[Rational]) -> Point {
        let mut x = self.anchor.clone();
        for (tk, b) in t.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += tk * from_bigint(bi);
            }
        }
        x
    }

    /// The unimodular matrix `[complement | basis]` as rows of columns.
    pub fn unimodular_columns(&self) -> Vec<Vec<BigInt>> {
        let mut cols = vec![self.complement.clone()];
        cols.extend(self.basis.iter().cloned());
        cols
    }
}

/// Z-basis of the hyperplane lattice of `h` by unimodular column reduction of
/// the (primitive) normal.
pub fn hyperplane_lattice_basis(h: &HalfSpace) -> LatticeBasisMap {
    let n = h.normal.len();
    let mut row = h.normal.clone();
    // columns of U, kept so that row = normal * U throughout
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| !row[i].is_zero()).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let p = *nonzero
            .iter()
            .min_by(|&&a, &&b| row[a].abs().cmp(&row[b].abs()).then(a.cmp(&b)))
            .unwrap();
        for &i in &nonzero {
            if i == p {
                continue;
            }
            let q = row[i].div_floor(&row[p]);
            row[i] = &row[i] - &q * &row[p];
            let cp = cols[p].clone();
            for (c, d) in cols[i].iter_mut().zip(&cp) {
                *c -= &q * d;
            }
        }
    }
    let p = (0..n).find(|&i| !row[i].is_zero()).expect("nonzero normal");
    assert!(row[p].abs().is_one(), "normal must be primitive");
    if row[p].is_negative() {
        for c in cols[p].iter_mut() {
            *c = -c.clone();
        }
    }
    let complement = cols[p].clone();
    let basis: Vec<Vec<BigInt>> = (0..n).filter(|&i| i != p).map(|i| cols[i].clone()).collect();

    let anchor: Point = complement.iter().map(|c| -from_bigint(c) * &h.offset).collect();

    // inverse of U: solve U y = e_i column by column, keep rows 1..n
    let u_rows: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            std::iter::once(&complement)
                .chain(basis.iter())
                .map(|col| from_bigint(&col[r]))
                .collect()
        })
        .collect();
    let mut inv_cols = Vec::with_capacity(n);
    for i in 0..n {
        let e: Vec<Rational> = (0..n)
            .map(|j| if i == j { Rational::one() } else { Rational::zero() })
            .collect();
        inv_cols.push(solve(&u_rows, &e).expect("unimodular"));
    }
    let coord_rows = (1..n)
        .map(|r| (0..n).map(|c| inv_cols[c][r].clone()).collect())
        .collect();

    LatticeBasisMap {
        facet: None,
        basis,
        complement,
        anchor,
        coord_rows,
    }
}
