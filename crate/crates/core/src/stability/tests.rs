use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use super::*;
use crate::functionals::{extremal_data, l_v, na_report, normalize_pl};
use crate::integrate::moments;
use crate::rational::{frac, int, point};

fn square01() -> Polytope {
    Polytope::from_ints(2, &[(&[1, 0], 0), (&[-1, 0], 1), (&[0, 1], 0), (&[0, -1], 1)]).unwrap()
}

fn square11() -> Polytope {
    Polytope::from_ints(2, &[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1)]).unwrap()
}

fn simplex2() -> Polytope {
    Polytope::from_ints(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[-1, -1], 1)]).unwrap()
}

fn p2() -> Polytope {
    Polytope::from_ints(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)]).unwrap()
}

fn bl1() -> Polytope {
    Polytope::from_ints(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1), (&[1, 1], 1)]).unwrap()
}

fn bl2() -> Polytope {
    Polytope::from_ints(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1), (&[1, 1], 1), (&[-1, 0], 1)]).unwrap()
}

fn hexagon() -> Polytope {
    Polytope::from_ints(
        2,
        &[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1), (&[1, -1], 1), (&[-1, 1], 1)],
    )
    .unwrap()
}

fn p1xp2() -> Polytope {
    Polytope::from_ints(
        3,
        &[(&[1, 0, 0], 1), (&[-1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1), (&[0, -1, -1], 1)],
    )
    .unwrap()
}

fn del_pezzos() -> Vec<Polytope> {
    vec![p2(), square11(), bl1(), bl2(), hexagon()]
}

fn crease_x() -> PlConvexFn {
    PlConvexFn::crease(AffineFn::new(point(&[1, 0]), int(0)))
}

#[test]
fn sufficient_condition_examples() {
    let sq = square01();
    let ed = extremal_data(&sq).unwrap();
    let v = sufficient_condition(&sq, &ed, Some(&[frac(1, 2), frac(1, 2)])).unwrap();
    assert!(ed.is_v_zero());
    assert_eq!(v.sbar, int(4));
    assert_eq!(v.d_x0, frac(1, 2));
    assert_eq!(v.threshold, int(6));
    assert_eq!(v.branch, SuffBranch::VZeroStrict);
    assert_eq!(v.delta, frac(1, 3));
    assert_eq!(sufficient_condition(&sq, &ed, None).unwrap(), v);

    let p = p2();
    let ed = extremal_data(&p).unwrap();
    let v = sufficient_condition(&p, &ed, Some(&point(&[0, 0]))).unwrap();
    assert_eq!((v.sbar.clone(), v.threshold.clone()), (int(2), int(3)));
    assert_eq!(v.branch, SuffBranch::VZeroStrict);
    assert_eq!(v.delta, frac(1, 3));

    let b = bl1();
    let ed = extremal_data(&b).unwrap();
    let v = sufficient_condition(&b, &ed, Some(&point(&[0, 0]))).unwrap();
    assert!(!ed.is_v_zero());
    assert_eq!(v.max_v, frac(5, 11));
    assert!(&v.sbar + &v.max_v <= v.threshold);
    assert_eq!(v.branch, SuffBranch::VNonzero);
    assert_eq!(v.verdict(), "uniformly relatively K-polystable");
}

#[test]
fn sufficient_condition_rejects_boundary_points() {
    let sq = square01();
    let ed = extremal_data(&sq).unwrap();
    assert_eq!(sufficient_condition(&sq, &ed, Some(&point(&[0, 0]))), Err(Error::NotInterior));
    assert!(matches!(
        sufficient_condition(&sq, &ed, Some(&point(&[0]))),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn sufficient_condition_can_be_inconclusive() {
    // a long thin box: sbar is large compared with (n + 1) / d_x0
    let b = Polytope::from_ints(2, &[(&[1, 0], 0), (&[-1, 0], 8), (&[0, 1], 0), (&[0, -1], 1)]).unwrap();
    let ed = extremal_data(&b).unwrap();
    let v = sufficient_condition(&b, &ed, None).unwrap();
    assert_eq!(v.branch, SuffBranch::Inconclusive);
    assert_eq!(v.verdict(), "inconclusive");
    assert!(!v.delta.is_positive());
}

#[test]
fn del_pezzos_pass_the_sufficient_condition() {
    for p in del_pezzos() {
        let ed = extremal_data(&p).unwrap();
        let v = sufficient_condition(&p, &ed, None).unwrap();
        assert!(v.branch.is_positive(), "{:?}", p.vertices());
        assert!(!v.delta.is_negative());
    }
}

#[test]
fn fano_examples() {
    let p = p2();
    let f = fano_analysis(&p, &extremal_data(&p).unwrap());
    assert!(f.reflexive);
    assert_eq!(f.barycenter, point(&[0, 0]));
    assert_eq!(f.conditions.len(), 6);
    assert_eq!(f.verdict(), Some("uniformly K-polystable"));

    let b = bl1();
    let f = fano_analysis(&b, &extremal_data(&b).unwrap());
    assert!(f.barycenter.iter().any(|c| !c.is_zero()));
    assert!(f.conditions.iter().all(|c| !c.holds));
    assert_eq!(f.verdict(), Some("not K-semistable"));

    let h = hexagon();
    let f = fano_analysis(&h, &extremal_data(&h).unwrap());
    assert_eq!(f.verdict(), Some("uniformly K-polystable"));

    let s = square01();
    let f = fano_analysis(&s, &extremal_data(&s).unwrap());
    assert!(!f.reflexive);
    assert!(f.conditions.is_empty());
    assert_eq!(f.verdict(), None);
}

#[test]
fn fano_computed_conditions_agree() {
    for p in [p2(), square11(), bl1(), bl2(), hexagon(), p1xp2()] {
        let f = fano_analysis(&p, &extremal_data(&p).unwrap());
        let computed: Vec<bool> = f.conditions.iter().filter(|c| c.computed).map(|c| c.holds).collect();
        assert_eq!(computed.len(), 3);
        assert!(computed.iter().all(|&h| h == computed[0]));
    }
}

#[test]
fn sufficient_condition_never_contradicts_fano() {
    for p in [bl1(), bl2()] {
        let ed = extremal_data(&p).unwrap();
        let fano = fano_analysis(&p, &ed);
        assert_eq!(fano.verdict(), Some("not K-semistable"));
        let v = sufficient_condition(&p, &ed, None).unwrap();
        assert_ne!(v.branch, SuffBranch::VZeroStrict);
    }
}

#[test]
fn crease_family_on_unit_square() {
    let sq = square01();
    let fam = crease_family(&sq, 1, 1);
    // x + y = 1 and x - y = 0 with both orientations; axis-parallel creases miss the interior
    assert_eq!(fam.len(), 4);
    assert_eq!(fam[0], AffineFn::new(point(&[-1, -1]), int(1)));
    assert!(fam.iter().all(|l| l.linear.iter().filter(|a| a.is_zero()).count() == 0));
    let ed = extremal_data(&sq).unwrap();
    let r = destabilizer_search(&sq, &ed, 1, 1, false).unwrap();
    assert_eq!(r.candidates, 4);
}

#[test]
fn crease_family_is_sorted_and_primitive() {
    let fam = crease_family(&square11(), 3, 2);
    let keys: Vec<(Vec<Rational>, Rational)> = fam.iter().map(|l| (l.linear.clone(), l.constant.clone())).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    for l in &fam {
        let g = l.linear.iter().fold(BigInt::zero(), |acc, a| num_integer::Integer::gcd(&acc, &a.to_integer()));
        assert_eq!(g, BigInt::from(1));
        let vals: Vec<Rational> = square11().vertices().iter().map(|v| l.eval(v)).collect();
        assert!(vals.iter().any(|v| v.is_positive()) && vals.iter().any(|v| v.is_negative()));
    }
}

#[test]
fn destabilizer_search_on_stable_square() {
    let sq = square11();
    let ed = extremal_data(&sq).unwrap();
    let r = destabilizer_search(&sq, &ed, 2, 2, false).unwrap();
    assert_eq!(r.verdict, DestabVerdict::NoDestabilizerFound);
    let best = r.best.unwrap();
    assert!(best.ratio.is_positive());
    let crease = DestabCandidate::evaluate(&sq, &ed, AffineFn::new(point(&[1, 0]), int(0))).unwrap();
    assert_eq!((crease.l_v.clone(), crease.jnorm.clone(), crease.ratio.clone()), (int(1), frac(1, 4), int(4)));
    assert!(best.ratio <= crease.ratio);
}

#[test]
fn destabilizer_certificate_without_v() {
    for p in [bl1(), bl2()] {
        let ed = extremal_data(&p).unwrap();
        let r = destabilizer_search(&p, &ed, 2, 1, true).unwrap();
        assert_eq!(r.verdict, DestabVerdict::DestabilizerCertificate);
        let best = r.best.unwrap();
        assert!(!best.ratio.is_positive() && best.jnorm.is_positive());
        assert!(best.verify(&p, &ed.without_v()));
        assert_eq!(l_v(&p, &ed.without_v(), &best.f), best.l_v);
    }
}

#[test]
fn del_pezzos_have_no_crease_destabilizer() {
    for p in del_pezzos() {
        let ed = extremal_data(&p).unwrap();
        let r = destabilizer_search(&p, &ed, 2, 2, false).unwrap();
        assert_eq!(r.verdict, DestabVerdict::NoDestabilizerFound, "{:?}", p.vertices());
        assert!(r.candidates > 0);
    }
}

#[test]
fn destabilizer_search_is_deterministic_and_rejects_zero() {
    let p = bl2();
    let ed = extremal_data(&p).unwrap();
    let a = destabilizer_search(&p, &ed, 3, 2, true).unwrap();
    let b = destabilizer_search(&p, &ed, 3, 2, true).unwrap();
    assert_eq!(a, b);
    assert!(matches!(destabilizer_search(&p, &ed, 0, 1, false), Err(Error::InvalidParameter(_))));
}

/// `#(mP ∩ Z^2)` by testing every point of a generous box against the vertex
/// description: each point must lie on the inner side of every edge.
fn count_by_edges(p: &Polytope, m: i64) -> usize {
    let c = crate::rational::to_f64;
    let vs: Vec<(f64, f64)> = p.vertices().iter().map(|v| (c(&v[0]), c(&v[1]))).collect();
    let (cx, cy) = vs.iter().fold((0.0, 0.0), |a, v| (a.0 + v.0, a.1 + v.1));
    let (cx, cy) = (cx / vs.len() as f64, cy / vs.len() as f64);
    let mut vs = vs;
    vs.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).partial_cmp(&(b.1 - cy).atan2(b.0 - cx)).unwrap());
    let vi: Vec<(i64, i64)> = vs.iter().map(|v| (v.0.round() as i64 * m, v.1.round() as i64 * m)).collect();
    let r = 10 * m + 10;
    let mut count = 0;
    for x in -r..=r {
        for y in -r..=r {
            let inside = (0..vi.len()).all(|i| {
                let (a, b) = (vi[i], vi[(i + 1) % vi.len()]);
                (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) >= 0
            });
            count += inside as usize;
        }
    }
    count
}

#[test]
fn ehrhart_count_examples() {
    let sq = square01();
    for m in 1..=5u64 {
        assert_eq!(ehrhart_count(&sq, m).unwrap(), BigInt::from((m + 1) * (m + 1)));
    }
    assert_eq!(ehrhart_count(&p2(), 1).unwrap(), BigInt::from(10));
    assert_eq!(ehrhart_count(&simplex2(), 2).unwrap(), BigInt::from(6));
    for p in [p2(), bl1(), bl2(), hexagon(), simplex2()] {
        for m in 1..=4 {
            assert_eq!(ehrhart_count(&p, m as u64).unwrap(), BigInt::from(count_by_edges(&p, m)));
        }
    }
    assert_eq!(lattice_points(&simplex2(), 1).unwrap().len(), 3);
}

#[test]
fn ehrhart_rejects_non_integral() {
    let p = Polytope::new(
        2,
        vec![
            (vec![1.into(), 0.into()], int(0)),
            (vec![0.into(), 1.into()], int(0)),
            (vec![(-2).into(), (-2).into()], int(1)),
        ],
        None,
    )
    .unwrap();
    assert_eq!(ehrhart_count(&p, 1), Err(Error::NotIntegral));
}

#[test]
fn ehrhart_fit_examples() {
    let fit = ehrhart_fit(&square01(), 6).unwrap();
    assert_eq!(fit.coefficients, vec![int(1), int(2), int(1)]);
    let fit = ehrhart_fit(&p2(), 6).unwrap();
    assert_eq!(fit.coefficients, vec![frac(9, 2), frac(9, 2), int(1)]);
    let fit = ehrhart_fit(&simplex2(), 6).unwrap();
    assert_eq!(fit.coefficients, vec![frac(1, 2), frac(3, 2), int(1)]);
    assert_eq!(fit.samples.len(), 6);
    assert!(matches!(ehrhart_fit(&simplex2(), 2), Err(Error::InvalidParameter(_))));
}

#[test]
fn ehrhart_coefficients_match_moments() {
    for p in [square01(), square11(), simplex2(), p2(), bl1(), bl2(), hexagon(), p1xp2()] {
        let fit = ehrhart_fit(&p, p.dim() as u64 + 3).unwrap();
        let mt = moments(&p);
        assert_eq!(fit.leading(), mt.volume());
        assert_eq!(*fit.subleading(), mt.boundary_measure() / int(2));
        assert_eq!(*fit.coefficients.last().unwrap(), int(1));
    }
}

#[test]
fn weight_sum_examples() {
    let sq = square11();
    assert_eq!(weight_sum(&sq, &crease_x(), &int(1), 1).unwrap(), int(6));
    for m in 1..=4u64 {
        let e = from_bigint(&ehrhart_count(&sq, m).unwrap());
        let w = weight_sum(&sq, &PlConvexFn::zero(2), &frac(3, 2), m).unwrap();
        assert_eq!(w, Rational::from_integer(m.into()) * frac(3, 2) * e);
    }
    assert!(matches!(
        weight_sum(&sq, &crease_x(), &frac(1, 2), 1),
        Err(Error::LevelTooSmall { .. })
    ));
}

#[test]
fn df_check_for_zero_function_is_exact() {
    let sq = square11();
    let ed = extremal_data(&sq).unwrap();
    let r = df_asymptotic_check(&sq, &ed, &PlConvexFn::zero(2), &int(2), &[2, 4, 8]).unwrap();
    assert_eq!(r.f0, int(2));
    assert!(r.f1.is_zero());
    assert!(r.fit_residuals.values().all(Zero::is_zero));
    assert!(r.comparisons.iter().all(|c| c.residual().is_zero()));
}

#[test]
fn df_check_for_crease() {
    let sq = square11();
    let ed = extremal_data(&sq).unwrap();
    let r = df_asymptotic_check(&sq, &ed, &crease_x(), &int(1), &[16, 32, 64]).unwrap();
    let e = r.comparison("F0 vs E^NA").unwrap();
    assert_eq!(e.exact, frac(3, 4));
    assert!(e.relative_error() < 0.01, "{}", e.relative_error());
    let m = r.comparison("-2 F1 vs M^NA").unwrap();
    assert_eq!(m.exact, frac(1, 4));
    assert!(m.relative_error() < 0.05, "{}", m.relative_error());
    let last = crate::rational::to_f64(&r.fit_residuals[&64]).abs();
    assert!(last < 1e-2 * crate::rational::to_f64(&r.f1).abs());
    assert!(matches!(
        df_asymptotic_check(&sq, &ed, &crease_x(), &int(1), &[4, 2, 8]),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn df_check_for_integral_function_in_3d() {
    let p = p1xp2();
    let ed = extremal_data(&p).unwrap();
    let f = PlConvexFn::crease(AffineFn::new(point(&[0, 1, 1]), int(0)));
    let r = df_asymptotic_check(&p, &ed, &f, &int(2), &[2, 4, 8]).unwrap();
    let exact = na_report(&p, &ed, &f, &int(2)).unwrap();
    assert_eq!(r.comparison("F0 vs E^NA").unwrap().exact, exact.e_na);
    assert!(r.comparisons[..2].iter().all(|c| c.residual().is_zero()));
    assert!(r.comparison("F0 vs E^NA").unwrap().relative_error() < 0.05);
}

fn crease_strategy() -> impl Strategy<Value = AffineFn> {
    (-4i64..=4, -4i64..=4, -6i64..=6, 1i64..=4)
        .prop_filter("nonzero slope", |(a, b, _, _)| *a != 0 || *b != 0)
        .prop_map(|(a, b, c, d)| AffineFn::new(point(&[a, b]), frac(c, d)))
}

fn affine_strategy() -> impl Strategy<Value = AffineFn> {
    (-3i64..=3, -3i64..=3, -4i64..=4).prop_map(|(a, b, c)| AffineFn::new(point(&[a, b]), int(c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn delta_certificate_holds_for_normalized_creases(idx in 0usize..2, l in crease_strategy()) {
        let p = [square01(), p2()][idx].clone();
        let ed = extremal_data(&p).unwrap();
        let v = sufficient_condition(&p, &ed, None).unwrap();
        prop_assert_eq!(v.delta.clone(), frac(1, 3));
        let f = normalize_pl(&p, &PlConvexFn::crease(l), &v.x0).unwrap();
        let cells = subdivide_by_pl(&p, &f);
        prop_assert!(l_v(&p, &ed, &f) >= &v.delta * cells.boundary_integral());
    }

    #[test]
    fn delta_certificate_on_del_pezzos(idx in 0usize..5, l in crease_strategy()) {
        let p = del_pezzos()[idx].clone();
        let ed = extremal_data(&p).unwrap();
        let v = sufficient_condition(&p, &ed, None).unwrap();
        let f = normalize_pl(&p, &PlConvexFn::crease(l), &v.x0).unwrap();
        let cells = subdivide_by_pl(&p, &f);
        prop_assert!(l_v(&p, &ed, &f) >= &v.delta * cells.boundary_integral());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_sum_of_affine_matches_coordinate_sums(idx in 0usize..5, l in affine_strategy(), m in 1u64..5) {
        let p = del_pezzos()[idx].clone();
        let max = p.vertices().iter().map(|v| l.eval(v)).max().unwrap();
        let level = max + int(1);
        let w = weight_sum(&p, &PlConvexFn::affine(l.clone()), &level, m).unwrap();
        // m sum (L - l(alpha / m)) = m L N - <g, sum alpha> - m c N
        let (mut n, mut sx, mut sy) = (0i64, 0i64, 0i64);
        let mi = m as i64;
        for x in -3 * mi..=3 * mi {
            for y in -3 * mi..=3 * mi {
                let pt = [frac(x, mi), frac(y, mi)];
                if p.contains(&pt) {
                    n += 1;
                    sx += x;
                    sy += y;
                }
            }
        }
        let mq = int(mi);
        let expected = &mq * &level * int(n) - &l.linear[0] * int(sx) - &l.linear[1] * int(sy) - &mq * &l.constant * int(n);
        prop_assert_eq!(w, expected);
    }
}
