//! Rational polytopes in facet form and their lattice data.

mod lattice;
pub mod region;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use lattice::{gcd_all, hyperplane_lattice_basis, LatticeBasisMap};
pub use region::{Constraint, Region, RegionDefect};

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::rational::{det, dot, from_bigint, Point, Rational};

/// `x -> <linear, x> + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFn {
    pub linear: Vec<Rational>,
    pub constant: Rational,
}

impl AffineFn {
    pub fn new(linear: Vec<Rational>, constant: Rational) -> Self {
        AffineFn { linear, constant }
    }

    pub fn zero(dim: usize) -> Self {
        AffineFn::new(vec![Rational::zero(); dim], Rational::zero())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        AffineFn::new(vec![Rational::zero(); dim], c)
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut linear = vec![Rational::zero(); dim];
        linear[i] = Rational::one();
        AffineFn::new(linear, Rational::zero())
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.linear, x) + &self.constant
    }

    pub fn add(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(
            self.linear.iter().zip(&other.linear).map(|(a, b)| a + b).collect(),
            &self.constant + &other.constant,
        )
    }

    pub fn sub(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(
            self.linear.iter().zip(&other.linear).map(|(a, b)| a - b).collect(),
            &self.constant - &other.constant,
        )
    }

    pub fn scale(&self, c: &Rational) -> AffineFn {
        AffineFn::new(self.linear.iter().map(|a| a * c).collect(), &self.constant * c)
    }

    pub fn neg(&self) -> AffineFn {
        self.scale(&-Rational::one())
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn as_constraint(&self, tag: Option<usize>) -> Constraint {
        Constraint::new(self.linear.clone(), self.constant.clone(), tag)
    }
}

/// `<normal, x> + offset >= 0` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<BigInt>,
    pub offset: Rational,
}

impl HalfSpace {
    /// Divides the normal by the gcd of its entries and the offset accordingly.
    pub fn primitive(normal: Vec<BigInt>, offset: Rational) -> Result<HalfSpace> {
        let g = gcd_all(&normal);
        if g.is_zero() {
            return Err(Error::ZeroNormal { index: 0 });
        }
        let normal: Vec<BigInt> = normal.into_iter().map(|c| c / &g).collect();
        Ok(HalfSpace {
            normal,
            offset: offset / from_bigint(&g),
        })
    }

    pub fn normal_q(&self) -> Vec<Rational> {
        self.normal.iter().map(from_bigint).collect()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.normal.iter().zip(x).map(|(a, b)| from_bigint(a) * b).sum::<Rational>() + &self.offset
    }

    pub fn as_affine(&self) -> AffineFn {
        AffineFn::new(self.normal_q(), self.offset.clone())
    }
}

/// A bounded, full-dimensional polytope `{x : <lambda_j, x> + d_j >= 0}` with
/// primitive normals and no redundant facets. Vertices are derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    facets: Vec<HalfSpace>,
    region: Region,
    name: Option<String>,
}

impl Polytope {
    /// Validates and builds a polytope from raw facet data. Normals are
    /// primitivized silently.
    pub fn new(
        dim: usize,
        facets: Vec<(Vec<BigInt>, Rational)>,
        name: Option<String>,
    ) -> Result<Polytope> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut prims = Vec::with_capacity(facets.len());
        for (index, (normal, offset)) in facets.into_iter().enumerate() {
            if normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: normal.len(),
                });
            }
            let h = HalfSpace::primitive(normal, offset).map_err(|_| Error::ZeroNormal { index })?;
            prims.push(h);
        }
        if !is_bounded(dim, &prims)? {
            return Err(Error::Unbounded);
        }
        let rows: Vec<Constraint> = prims
            .iter()
            .enumerate()
            .map(|(j, h)| Constraint::new(h.normal_q(), h.offset.clone(), Some(j)))
            .collect();
        let region = Region::build(dim, &rows).map_err(|_| Error::EmptyInterior)?;
        if let Some(index) = (0..prims.len()).find(|j| !region.facet_rows().contains(j)) {
            return Err(Error::RedundantFacet { index });
        }
        Ok(Polytope {
            dim,
            facets: prims,
            region,
            name,
        })
    }

    /// Convenience constructor from small integer data.
    pub fn from_ints(dim: usize, facets: &[(&[i64], i64)]) -> Result<Polytope> {
        Polytope::new(
            dim,
            facets
                .iter()
                .map(|(a, b)| (a.iter().map(|&x| BigInt::from(x)).collect(), Rational::from_integer(BigInt::from(*b))))
                .collect(),
            None,
        )
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertices(&self) -> &[Point] {
        self.region.vertices()
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Indices of the vertices lying on facet `j`.
    pub fn facet_vertices(&self, j: usize) -> &[usize] {
        self.region.facet_vertices(j)
    }

    pub fn active_facets(&self, v: usize) -> Vec<usize> {
        self.region.active_facets(v)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|h| !h.eval(x).is_negative())
    }

    pub fn is_interior(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|h| h.eval(x).is_positive())
    }

    pub fn facet_fns(&self) -> Vec<AffineFn> {
        self.facets.iter().map(HalfSpace::as_affine).collect()
    }

    /// Lattice coordinates of facet `j`.
    pub fn facet_lattice(&self, j: usize) -> LatticeBasisMap {
        let mut m = hyperplane_lattice_basis(&self.facets[j]);
        m.facet = Some(j);
        m
    }

    /// The polytope shifted by `t` (`P + t`).
    pub fn translate(&self, t: &[Rational]) -> Polytope {
        let facets: Vec<HalfSpace> = self
            .facets
            .iter()
            .map(|h| HalfSpace {
                normal: h.normal.clone(),
                offset: &h.offset - h.normal.iter().zip(t).map(|(a, b)| from_bigint(a) * b).sum::<Rational>(),
            })
            .collect();
        let rows: Vec<Constraint> = facets
            .iter()
            .enumerate()
            .map(|(j, h)| Constraint::new(h.normal_q(), h.offset.clone(), Some(j)))
            .collect();
        let region = Region::build(self.dim, &rows).expect("translation preserves validity");
        Polytope {
            dim: self.dim,
            facets,
            region,
            name: self.name.clone(),
        }
    }
}

fn is_bounded(dim: usize, facets: &[HalfSpace]) -> Result<bool> {
    // the recession cone {u : <lambda_j, u> >= 0} is trivial iff the
    // normals have full rank and no u makes all pairings nonnegative with one positive
    let normals: Vec<Vec<Rational>> = facets.iter().map(HalfSpace::normal_q).collect();
    if crate::rational::rank(&normals) < dim {
        return Ok(false);
    }
    let total: Vec<Rational> = (0..dim)
        .map(|i| normals.iter().map(|n| n[i].clone()).sum())
        .collect();
    let mut lp = LinearProgram::new(total.iter().map(|c| -c).collect());
    for n in &normals {
        lp.add_constraint(n.clone(), Relation::Ge, Rational::zero());
    }
    lp.add_constraint(total, Relation::Le, Rational::one());
    let sol = lp::solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value.expect("optimal").is_zero()),
        LpStatus::Unbounded => Ok(false),
        LpStatus::Infeasible => Err(Error::LpFailed("infeasible")),
    }
}

/// Re-derives the vertex set from the facets alone: every feasible solution
/// of an `n`-subset of facet equations, sorted lexicographically.
pub fn vertices_from_facets(p: &Polytope) -> Vec<Point> {
    let rows: Vec<Constraint> = p
        .facets()
        .iter()
        .map(|h| Constraint::new(h.normal_q(), h.offset.clone(), None))
        .collect();
    region::enumerate_vertices(p.dim(), &rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDiagnostic {
    pub vertex: Point,
    pub active_facets: Vec<usize>,
    /// Determinant of the active normals when exactly `n` facets are active.
    pub determinant: Option<BigInt>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelzantReport {
    pub pass: bool,
    pub vertices: Vec<VertexDiagnostic>,
}

impl DelzantReport {
    pub fn failures(&self) -> impl Iterator<Item = &VertexDiagnostic> {
        self.vertices.iter().filter(|v| !v.pass)
    }
}

/// Smoothness at every vertex: exactly `n` active facets whose normals form a
/// lattice basis.
pub fn delzant_check(p: &Polytope) -> DelzantReport {
    let vertices: Vec<VertexDiagnostic> = p
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, x)| {
            let active = p.active_facets(v);
            let determinant = (active.len() == p.dim()).then(|| {
                let m: Vec<Vec<Rational>> = active.iter().map(|&j| p.facets()[j].normal_q()).collect();
                det(&m).to_integer()
            });
            let pass = determinant.as_ref().is_some_and(|d| d.abs().is_one());
            VertexDiagnostic {
                vertex: x.clone(),
                active_facets: active,
                determinant,
                pass,
            }
        })
        .collect();
    DelzantReport {
        pass: vertices.iter().all(|v| v.pass),
        vertices,
    }
}

pub fn is_integral(p: &Polytope) -> bool {
    p.vertices().iter().all(|v| v.iter().all(Rational::is_integer))
}

/// Integral, origin in the interior and every offset equal to 1.
pub fn is_reflexive(p: &Polytope) -> bool {
    is_integral(p) && p.facets().iter().all(|h| h.offset.is_one())
}

/// Minimizer of `x -> max_j (<lambda_j, x> + d_j)` over `P`, lexicographically
/// smallest among optimal points, together with the optimal value.
pub fn best_interior_point(p: &Polytope) -> Result<(Point, Rational)> {
    let fns = p.facet_fns();
    let (_, value) = lp::minimize_maximum(&fns, p)?;
    let n = p.dim();
    let mut fixed: Vec<Rational> = Vec::new();
    for i in 0..n {
        let mut obj = vec![Rational::zero(); n];
        obj[i] = Rational::one();
        let mut prog = LinearProgram::new(obj);
        for f in &fns {
            // <lambda, x> + d <= value
            prog.add_constraint(f.linear.clone(), Relation::Le, &value - &f.constant);
            prog.add_constraint(f.linear.clone(), Relation::Ge, -f.constant.clone());
        }
        for (k, xk) in fixed.iter().enumerate() {
            let mut row = vec![Rational::zero(); n];
            row[k] = Rational::one();
            prog.add_constraint(row, Relation::Eq, xk.clone());
        }
        let sol = lp::solve_lp(&prog)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::LpFailed("not optimal in tie-breaking"));
        }
        fixed.push(sol.value.expect("optimal"));
    }
    Ok((fixed, value))
}

/// Translates `P` so that its barycenter is the origin; returns the translation applied.
pub fn recenter(p: &Polytope) -> (Polytope, Point) {
    let mt = crate::integrate::moments(p);
    let t: Point = mt.barycenter().iter().map(|c| -c).collect();
    (p.translate(&t), t)
}
