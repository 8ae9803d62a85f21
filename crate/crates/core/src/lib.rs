//! Exact rational toolkit for stability questions on polarized toric manifolds.
//!
//! Everything is driven by a Delzant polytope given in facet form
//! `{x : <lambda_j, x> + d_j >= 0}`. The crate computes moments over the
//! polytope and over its boundary (with the lattice-normalized facet measure),
//! the extremal affine function `V`, the relative Donaldson-Futaki functional
//! `L_V` on convex piecewise-affine functions, J-norms by exact linear
//! programming, non-Archimedean functionals of toric test configurations and
//! sufficient conditions for uniform (relative) K-polystability. Lattice point
//! counts serve as independent oracles for the continuous quantities.
//!
//! All arithmetic is exact over [`Rational`]. The one approximate quantity is
//! the reduced L1-norm, which is returned as a certified bracket.

pub mod error;
pub mod functionals;
pub mod geometry;
pub mod integrate;
pub mod lp;
pub mod parallel;
pub mod rational;
pub mod stability;

pub use error::{Error, Result};
pub use rational::{Point, Rational};

pub use functionals::{
    extremal_affine, jnorm, jnorm_raw, l_v, na_report, normalize_pl, reduced_l1_norm, sbar,
    DhMeasure, ExtremalData, JNorm, L1Bracket, L1Options, NaFunctionalReport,
};
pub use geometry::{AffineFn, HalfSpace, LatticeBasisMap, Polytope};
pub use integrate::{
    integral_pl, moments, simplex_moment, subdivide_by_pl, sublevel_volume, triangulate,
    FanBase, MomentTable, Moments, PlConvexFn, Simplex, Subdivision,
};
pub use lp::{minimize_maximum, solve_lp, LinearProgram, LpSolution, LpStatus, Relation};
pub use stability::{
    destabilizer_search, df_asymptotic_check, ehrhart_count, ehrhart_fit, fano_analysis,
    sufficient_condition, weight_sum, DestabReport, EhrhartPolynomial, FanoVerdict,
    OracleReport, SuffBranch, SuffVerdict,
};
