use crate::error::{Error, Result};
use crate::geometry::AffineFn;
use crate::rational::Rational;

/// A convex piecewise-affine function `max_k pieces[k]`.
///
/// Duplicate pieces are removed on construction. Pieces that never attain the
/// maximum on a full-dimensional part of a polytope are removed by
/// [`subdivide_by_pl`](super::subdivide_by_pl).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlConvexFn {
    pieces: Vec<AffineFn>,
}

impl PlConvexFn {
    pub fn new(pieces: Vec<AffineFn>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::EmptyPiecewise);
        };
        let n = first.dim();
        let mut out: Vec<AffineFn> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(PlConvexFn { pieces: out })
    }

    pub fn affine(f: AffineFn) -> Self {
        PlConvexFn { pieces: vec![f] }
    }

    pub fn zero(dim: usize) -> Self {
        Self::affine(AffineFn::zero(dim))
    }

    /// `max(0, f)`.
    pub fn crease(f: AffineFn) -> Self {
        let zero = AffineFn::zero(f.dim());
        PlConvexFn::new(vec![zero, f]).expect("two pieces of equal dimension")
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].dim()
    }

    pub fn pieces(&self) -> &[AffineFn] {
        &self.pieces
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.pieces.iter().map(|p| p.eval(x)).max().expect("nonempty")
    }

    pub fn add_affine(&self, l: &AffineFn) -> Self {
        PlConvexFn::new(self.pieces.iter().map(|p| p.add(l)).collect()).expect("nonempty")
    }

    /// `c * f` for `c > 0`.
    pub fn scale(&self, c: &Rational) -> Self {
        assert!(*c > Rational::from_integer(0.into()), "scaling must be positive");
        PlConvexFn {
            pieces: self.pieces.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `max(f, g)`.
    pub fn max_with(&self, other: &PlConvexFn) -> Self {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        PlConvexFn::new(pieces).expect("nonempty")
    }

    pub fn is_single_piece(&self) -> bool {
        self.pieces.len() == 1
    }
}
