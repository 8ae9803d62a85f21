//! Exact integration over polytopes and their boundaries.
//!
//! Interior integrals come from fan triangulations. Boundary integrals use the
//! facet measure `sigma`, realized as Lebesgue measure in lattice coordinates
//! of each facet hyperplane, so no irrational lengths ever appear.
//! Piecewise-affine functions are integrated cell by cell over their
//! linearity subdivision.

mod pl;
mod simplex;
mod triangulate;

use num_traits::{Signed, Zero};

pub use pl::PlConvexFn;
pub use simplex::{simplex_moment, Moments, Simplex};
pub use triangulate::{triangulate_face, triangulate_region, FanBase};

use crate::geometry::{AffineFn, Constraint, LatticeBasisMap, Polytope, Region};
use crate::rational::{det, factorial, from_bigint, sub, Point, Rational};

/// Fan triangulation of `P` from its lexicographically smallest vertex.
pub fn triangulate(p: &Polytope) -> Vec<Simplex> {
    triangulate_with(p, FanBase::LexMin)
}

pub fn triangulate_with(p: &Polytope, base: FanBase) -> Vec<Simplex> {
    region_simplices(p.region(), base)
}

pub fn region_simplices(region: &Region, base: FanBase) -> Vec<Simplex> {
    let verts = region.vertices();
    triangulate_region(region, base)
        .into_iter()
        .map(|s| Simplex::full(s.iter().map(|&v| verts[v].clone()).collect()))
        .collect()
}

pub fn region_moments(region: &Region) -> Moments {
    let simplices = region_simplices(region, FanBase::LexMin);
    Moments::sum(region.dim(), simplices.iter().map(|s| s.moments()).collect::<Vec<_>>().iter())
}

pub fn region_volume(region: &Region) -> Rational {
    region_simplices(region, FanBase::LexMin).iter().map(|s| s.measure.clone()).sum()
}

/// `(n-1)`-simplices triangulating facet `k` of `region`, weighted by the facet
/// measure of the hyperplane with lattice coordinates `lattice`.
fn facet_simplices(region: &Region, k: usize, lattice: &LatticeBasisMap, base: FanBase) -> Vec<Simplex> {
    let n = region.dim();
    let verts = region.vertices();
    let scale = from_bigint(&factorial(n - 1));
    triangulate_face(region, region.facet_vertices(k), n - 1, base)
        .into_iter()
        .map(|s| {
            let pts: Vec<Point> = s.iter().map(|&v| verts[v].clone()).collect();
            let t: Vec<Vec<Rational>> = pts.iter().map(|x| lattice.coords(x)).collect();
            let rows: Vec<Vec<Rational>> = t[1..].iter().map(|ti| sub(ti, &t[0])).collect();
            let measure = det(&rows).abs() / &scale;
            Simplex::with_measure(pts, measure)
        })
        .collect()
}

/// Exact moments of degree `<= 2` over `P` and over each facet (with `sigma`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentTable {
    dim: usize,
    interior: Moments,
    boundary: Vec<Moments>,
    simplices: Vec<Simplex>,
    facet_simplices: Vec<Vec<Simplex>>,
}

pub fn moments(p: &Polytope) -> MomentTable {
    moments_with(p, FanBase::LexMin)
}

pub fn moments_with(p: &Polytope, base: FanBase) -> MomentTable {
    let n = p.dim();
    let simplices = triangulate_with(p, base);
    let interior = Moments::sum(n, simplices.iter().map(|s| s.moments()).collect::<Vec<_>>().iter());
    let facet_simplices: Vec<Vec<Simplex>> = (0..p.facets().len())
        .map(|j| facet_simplices(p.region(), j, &p.facet_lattice(j), base))
        .collect();
    let boundary = facet_simplices
        .iter()
        .map(|ss| Moments::sum(n, ss.iter().map(|s| s.moments()).collect::<Vec<_>>().iter()))
        .collect();
    MomentTable {
        dim: n,
        interior,
        boundary,
        simplices,
        facet_simplices,
    }
}

impl MomentTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn interior(&self) -> &Moments {
        &self.interior
    }

    pub fn facet(&self, j: usize) -> &Moments {
        &self.boundary[j]
    }

    pub fn facets(&self) -> &[Moments] {
        &self.boundary
    }

    pub fn boundary_total(&self) -> Moments {
        Moments::sum(self.dim, self.boundary.iter())
    }

    pub fn volume(&self) -> &Rational {
        &self.interior.volume
    }

    /// `sigma(dP)`.
    pub fn boundary_measure(&self) -> Rational {
        self.boundary.iter().map(|m| m.volume.clone()).sum()
    }

    pub fn barycenter(&self) -> Point {
        self.interior.barycenter()
    }

    pub fn second_moment_matrix(&self) -> &[Vec<Rational>] {
        &self.interior.second
    }

    pub fn covariance(&self) -> Vec<Vec<Rational>> {
        self.interior.covariance()
    }

    /// `int_P x^alpha dx` for any degree.
    pub fn interior_moment(&self, alpha: &[u32]) -> Rational {
        self.interior
            .monomial(alpha)
            .unwrap_or_else(|| self.simplices.iter().map(|s| simplex_moment(s, alpha)).sum())
    }

    /// `int_{F_j} x^alpha dsigma` for any degree.
    pub fn boundary_moment(&self, j: usize, alpha: &[u32]) -> Rational {
        self.boundary[j]
            .monomial(alpha)
            .unwrap_or_else(|| self.facet_simplices[j].iter().map(|s| simplex_moment(s, alpha)).sum())
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn facet_simplex_list(&self, j: usize) -> &[Simplex] {
        &self.facet_simplices[j]
    }
}

/// One linearity cell of a piecewise-affine function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub region: Region,
    /// Index of the active piece in [`Subdivision::function`].
    pub piece: usize,
    pub moments: Moments,
    /// `(facet of P, sigma-moments of the cell's face on it)`.
    pub boundary: Vec<(usize, Moments)>,
}

/// Linearity cells of `f` over `P`; cells have disjoint interiors and cover `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub cells: Vec<Cell>,
    /// The input function with pieces that never attain the max removed.
    pub function: PlConvexFn,
    dim: usize,
}

pub fn subdivide_by_pl(p: &Polytope, f: &PlConvexFn) -> Subdivision {
    let n = p.dim();
    assert_eq!(f.dim(), n, "function dimension must match polytope");
    let lattices: Vec<LatticeBasisMap> = (0..p.facets().len()).map(|j| p.facet_lattice(j)).collect();
    let base_rows: Vec<Constraint> = p
        .facets()
        .iter()
        .enumerate()
        .map(|(j, h)| Constraint::new(h.normal_q(), h.offset.clone(), Some(j)))
        .collect();
    let pieces = f.pieces();
    let mut kept: Vec<AffineFn> = Vec::new();
    let mut cells = Vec::new();
    for (k, lk) in pieces.iter().enumerate() {
        let mut rows = base_rows.clone();
        for (j, lj) in pieces.iter().enumerate() {
            if j != k {
                rows.push(lk.sub(lj).as_constraint(None));
            }
        }
        let Ok(region) = Region::build(n, &rows) else {
            continue;
        };
        let moments = region_moments(&region);
        let mut boundary = Vec::new();
        for (fi, c) in region.facets().iter().enumerate() {
            if let Some(j) = c.tag {
                let ss = facet_simplices(&region, fi, &lattices[j], FanBase::LexMin);
                let m = Moments::sum(n, ss.iter().map(|s| s.moments()).collect::<Vec<_>>().iter());
                boundary.push((j, m));
            }
        }
        cells.push(Cell {
            region,
            piece: kept.len(),
            moments,
            boundary,
        });
        kept.push(lk.clone());
    }
    Subdivision {
        cells,
        function: PlConvexFn::new(kept).expect("some piece attains the max on a full-dimensional set"),
        dim: n,
    }
}

impl Subdivision {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn piece(&self, cell: &Cell) -> &AffineFn {
        &self.function.pieces()[cell.piece]
    }

    pub fn volume(&self) -> Rational {
        self.cells.iter().map(|c| c.moments.volume.clone()).sum()
    }

    /// `int_P f dx`.
    pub fn interior_integral(&self) -> Rational {
        self.cells.iter().map(|c| c.moments.integrate_affine(self.piece(c))).sum()
    }

    /// `int_dP f dsigma`.
    pub fn boundary_integral(&self) -> Rational {
        self.cells
            .iter()
            .flat_map(|c| c.boundary.iter().map(move |(_, m)| m.integrate_affine(self.piece(c))))
            .sum()
    }

    /// `int_P f g dx` for affine `g`.
    pub fn integral_times(&self, g: &AffineFn) -> Rational {
        self.cells.iter().map(|c| c.moments.integrate_product(self.piece(c), g)).sum()
    }

    /// Distinct vertices of all cells, sorted.
    pub fn vertices(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.cells.iter().flat_map(|c| c.region.vertices().iter().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// `(vertex, f(vertex))` with the value taken from the cell's active piece.
    pub fn vertex_values(&self) -> Vec<(Point, Rational)> {
        let mut out: Vec<(Point, Rational)> = self
            .cells
            .iter()
            .flat_map(|c| {
                let piece = self.piece(c);
                c.region.vertices().iter().map(move |v| (v.clone(), piece.eval(v)))
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn min_value(&self) -> Rational {
        self.vertex_values().into_iter().map(|(_, v)| v).min().expect("nonempty")
    }

    pub fn max_value(&self) -> Rational {
        self.vertex_values().into_iter().map(|(_, v)| v).max().expect("nonempty")
    }

    /// `vol(P ∩ {f <= t})`.
    pub fn sublevel_volume(&self, t: &Rational) -> Rational {
        let mut total = Rational::zero();
        for c in &self.cells {
            let piece = self.piece(c);
            let values: Vec<Rational> = c.region.vertices().iter().map(|v| piece.eval(v)).collect();
            if values.iter().all(|v| v <= t) {
                total += &c.moments.volume;
                continue;
            }
            if values.iter().all(|v| v > t) {
                continue;
            }
            // t - piece(x) >= 0
            let cut = AffineFn::constant(self.dim, t.clone()).sub(piece);
            if let Ok(r) = c.region.cut(cut.as_constraint(None)) {
                total += region_volume(&r);
            }
        }
        total
    }

    /// Pieces whose cell is full-dimensional with zero gradient: `(value, cell volume)`.
    pub fn plateaus(&self) -> Vec<(Rational, Rational)> {
        self.cells
            .iter()
            .filter(|c| self.piece(c).is_constant())
            .map(|c| (self.piece(c).constant.clone(), c.moments.volume.clone()))
            .collect()
    }
}

/// `(int_P f dx, int_dP f dsigma)`.
pub fn integral_pl(p: &Polytope, f: &PlConvexFn) -> (Rational, Rational) {
    let s = subdivide_by_pl(p, f);
    (s.interior_integral(), s.boundary_integral())
}

pub fn sublevel_volume(p: &Polytope, f: &PlConvexFn, t: &Rational) -> Rational {
    subdivide_by_pl(p, f).sublevel_volume(t)
}

/// Lebesgue volume of a bounded region given by inequalities, zero when it has no interior.
pub fn volume_of(dim: usize, rows: &[Constraint]) -> Rational {
    match Region::build(dim, rows) {
        Ok(r) => region_volume(&r),
        Err(_) => Rational::zero(),
    }
}
