//! Bounded convex regions given by rational inequalities `<a, x> + b >= 0`.
//!
//! This is the workhorse behind [`Polytope`](super::Polytope) and behind the
//! linearity cells of piecewise-affine functions, whose separating normals are
//! rational rather than primitive lattice vectors. Vertices are always derived
//! from the inequalities by exhaustive enumeration of `n`-subsets.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::rational::{affine_dim, dot, solve, Point, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<Rational>,
    pub offset: Rational,
    /// Facet index of the ambient polytope this constraint came from, if any.
    pub tag: Option<usize>,
}

impl Constraint {
    pub fn new(normal: Vec<Rational>, offset: Rational, tag: Option<usize>) -> Self {
        Constraint { normal, offset, tag }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x) + &self.offset
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionDefect {
    Empty,
    LowerDimensional,
}

/// Full-dimensional bounded region with irredundant facets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    dim: usize,
    facets: Vec<Constraint>,
    /// Index into the input constraint list for each facet.
    facet_rows: Vec<usize>,
    vertices: Vec<Point>,
    facet_vertices: Vec<Vec<usize>>,
}

/// Calls `visit` with every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All feasible points where `dim` linearly independent constraints are tight,
/// deduplicated and sorted lexicographically.
pub fn enumerate_vertices(dim: usize, rows: &[Constraint]) -> Vec<Point> {
    let mut found = BTreeSet::new();
    for_each_subset(rows.len(), dim, |subset| {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].normal.clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| -rows[i].offset.clone()).collect();
        if let Some(x) = solve(&a, &b) {
            if rows.iter().all(|r| !r.eval(&x).is_negative()) {
                found.insert(x);
            }
        }
    });
    found.into_iter().collect()
}

impl Region {
    /// Builds the region `{x : row(x) >= 0 for all rows}`, which the caller
    /// guarantees to be bounded. Redundant rows are dropped; when two rows
    /// support the same facet the tagged one (else the first) is kept.
    pub fn build(dim: usize, rows: &[Constraint]) -> Result<Region, RegionDefect> {
        let vertices = enumerate_vertices(dim, rows);
        if vertices.is_empty() {
            return Err(RegionDefect::Empty);
        }
        let refs: Vec<&Point> = vertices.iter().collect();
        if affine_dim(&refs) != Some(dim) {
            return Err(RegionDefect::LowerDimensional);
        }
        let mut facets: Vec<Constraint> = Vec::new();
        let mut facet_rows = Vec::new();
        let mut facet_vertices: Vec<Vec<usize>> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let tight: Vec<usize> = (0..vertices.len())
                .filter(|&v| row.eval(&vertices[v]).is_zero())
                .collect();
            let pts: Vec<&Point> = tight.iter().map(|&v| &vertices[v]).collect();
            if dim > 0 && affine_dim(&pts) != Some(dim - 1) {
                continue;
            }
            if let Some(k) = facet_vertices.iter().position(|t| *t == tight) {
                if facets[k].tag.is_none() && row.tag.is_some() {
                    facets[k] = row.clone();
                    facet_rows[k] = i;
                }
                continue;
            }
            facets.push(row.clone());
            facet_rows.push(i);
            facet_vertices.push(tight);
        }
        Ok(Region {
            dim,
            facets,
            facet_rows,
            vertices,
            facet_vertices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Constraint] {
        &self.facets
    }

    pub fn facet_rows(&self) -> &[usize] {
        &self.facet_rows
    }

    /// Indices (into [`vertices`](Self::vertices)) of the vertices on facet `k`.
    pub fn facet_vertices(&self, k: usize) -> &[usize] {
        &self.facet_vertices[k]
    }

    /// Facets tight at vertex `v`.
    pub fn active_facets(&self, v: usize) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&k| self.facet_vertices[k].binary_search(&v).is_ok())
            .collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|f| !f.eval(x).is_negative())
    }

    pub fn contains_interior(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|f| f.eval(x).is_positive())
    }

    /// Intersection with one more half-space, `Err` if the result has no interior.
    pub fn cut(&self, extra: Constraint) -> Result<Region, RegionDefect> {
        let mut rows = self.facets.clone();
        rows.push(extra);
        Region::build(self.dim, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, point};

    fn row(a: &[i64], b: i64) -> Constraint {
        Constraint::new(point(a), int(b), None)
    }

    #[test]
    fn subsets_in_lex_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0;
        for_each_subset(3, 0, |_| count += 1);
        assert_eq!(count, 1);
        for_each_subset(2, 3, |_| panic!("no subsets"));
    }

    #[test]
    fn square_with_redundant_row() {
        let rows = vec![
            row(&[1, 0], 0),
            row(&[-1, 0], 1),
            row(&[0, 1], 0),
            row(&[0, -1], 1),
            row(&[-1, -1], 3),
        ];
        let r = Region::build(2, &rows).unwrap();
        assert_eq!(r.vertices().len(), 4);
        assert_eq!(r.facet_rows(), &[0, 1, 2, 3]);
    }

    #[test]
    fn degenerate_regions() {
        let seg = vec![row(&[1, 0], 0), row(&[-1, 0], 0), row(&[0, 1], 0), row(&[0, -1], 1)];
        assert_eq!(Region::build(2, &seg), Err(RegionDefect::LowerDimensional));
        let empty = vec![row(&[1], -2), row(&[-1], 1)];
        assert_eq!(Region::build(1, &empty), Err(RegionDefect::Empty));
    }
}
