//! Report assembly. Every report is a JSON value; the human-readable form is
//! rendered from the same value, so both carry identical exact rationals.

use serde_json::{json, Map, Value};
use toric_k::geometry::{delzant_check, is_integral, is_reflexive};
use toric_k::rational::{parse_rational, to_f64};
use toric_k::stability::{
    DestabCandidate, DestabReport, EhrhartPolynomial, FanoVerdict, OracleReport, SuffVerdict,
};
use toric_k::{AffineFn, ExtremalData, MomentTable, NaFunctionalReport, PlConvexFn, Polytope, Rational};

/// `{"exact": "p/q", "approx": x}`.
pub fn q(r: &Rational) -> Value {
    let approx = to_f64(r);
    json!({
        "exact": r.to_string(),
        "approx": if approx.is_finite() { json!(approx) } else { Value::Null },
    })
}

pub fn qs(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn qmat(m: &[Vec<Rational>]) -> Value {
    Value::Array(m.iter().map(|r| qs(r)).collect())
}

/// Recognizes the rational encoding produced by [`q`].
pub fn as_rational(v: &Value) -> Option<Rational> {
    let obj = v.as_object()?;
    if obj.len() != 2 || !obj.contains_key("approx") {
        return None;
    }
    parse_rational(obj.get("exact")?.as_str()?).ok()
}

pub fn affine(f: &AffineFn) -> Value {
    json!({ "linear": qs(&f.linear), "constant": q(&f.constant) })
}

pub fn pl_function(f: &PlConvexFn) -> Value {
    json!({ "pieces": f.pieces().iter().map(affine).collect::<Vec<_>>() })
}

pub fn polytope(p: &Polytope, name: &str) -> Value {
    json!({
        "name": name,
        "dim": p.dim(),
        "facets": p.facets().iter().map(|h| json!({
            "normal": h.normal.iter().map(|x| json!(x.to_string())).collect::<Vec<_>>(),
            "offset": q(&h.offset),
        })).collect::<Vec<_>>(),
        "vertices": p.vertices().iter().map(|v| qs(v)).collect::<Vec<_>>(),
    })
}

fn point_text(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn validation(p: &Polytope) -> Value {
    let report = delzant_check(p);
    let failures: Vec<Value> = report
        .failures()
        .map(|d| {
            let reason = match &d.determinant {
                Some(det) => format!("|det| = {} at vertex {}", det.magnitude(), point_text(&d.vertex)),
                None => format!("{} facets meet at vertex {}", d.active_facets.len(), point_text(&d.vertex)),
            };
            json!({
                "vertex": qs(&d.vertex),
                "active_facets": d.active_facets,
                "determinant": d.determinant.as_ref().map(|x| x.to_string()),
                "reason": reason,
            })
        })
        .collect();
    json!({
        "delzant": report.pass,
        "failures": failures,
        "integral": is_integral(p),
        "reflexive": is_reflexive(p),
    })
}

pub fn moments(mt: &MomentTable) -> Value {
    json!({
        "volume": q(mt.volume()),
        "boundary_measure": q(&mt.boundary_measure()),
        "sbar": q(&(mt.boundary_measure() / mt.volume())),
        "barycenter": qs(&mt.barycenter()),
        "facet_measures": mt.facets().iter().map(|m| q(&m.volume)).collect::<Vec<_>>(),
        "simplices": mt.simplices().len(),
    })
}

pub fn extremal(ed: &ExtremalData) -> Value {
    json!({
        "v": affine(&ed.v),
        "v_is_zero": ed.is_v_zero(),
        "gram": qmat(&ed.gram),
        "rhs": qs(&ed.rhs),
    })
}

pub fn sufficient(v: &SuffVerdict) -> Value {
    json!({
        "x0": qs(&v.x0),
        "d_x0": q(&v.d_x0),
        "sbar": q(&v.sbar),
        "max_v": q(&v.max_v),
        "threshold": q(&v.threshold),
        "branch": v.branch.label(),
        "delta": q(&v.delta),
        "verdict": v.verdict(),
    })
}

pub fn fano(f: &FanoVerdict) -> Value {
    json!({
        "barycenter": qs(&f.barycenter),
        "v": affine(&f.v),
        "conditions": f.conditions.iter().map(|c| json!({
            "index": c.index,
            "statement": c.statement,
            "holds": c.holds,
            "basis": if c.computed { "computed" } else { "equivalent to the computed conditions" },
        })).collect::<Vec<_>>(),
        "verdict": f.verdict(),
    })
}

pub fn ehrhart(poly: &EhrhartPolynomial, mt: &MomentTable) -> Value {
    let half = Rational::new(1.into(), 2.into());
    json!({
        "coefficients": qs(&poly.coefficients),
        "samples": poly.samples.iter().map(|(m, c)| json!({"m": m, "count": c.to_string()})).collect::<Vec<_>>(),
        "leading_equals_volume": poly.leading() == mt.volume(),
        "subleading_equals_half_boundary": *poly.subleading() == mt.boundary_measure() * half,
    })
}

pub fn na(r: &NaFunctionalReport, cdf_samples: usize) -> Value {
    let dh = &r.dh;
    json!({
        "level": q(&r.level),
        "functionals": {
            "e_na": q(&r.e_na),
            "j_raw": q(&r.j_raw),
            "j_reduced": q(&r.j_reduced),
            "witness": affine(&r.witness),
            "h_v": q(&r.h_v),
            "m_na": q(&r.m_na),
            "m_v": q(&r.m_v),
        },
        "dh": {
            "support": qs(&[dh.support.0.clone(), dh.support.1.clone()]),
            "atoms": dh.atoms.iter().map(|(t, m)| json!({"position": q(t), "mass": q(m)})).collect::<Vec<_>>(),
            "mean": q(&dh.mean()),
            "cdf_samples": dh.samples(cdf_samples).iter().map(|(t, c)| json!({"t": q(t), "cdf": q(c)})).collect::<Vec<_>>(),
        },
        "compactification": polytope(&r.compactification, "compactification"),
    })
}

pub fn oracle(r: &OracleReport, mt: &MomentTable) -> Value {
    json!({
        "ehrhart": ehrhart(&r.ehrhart, mt),
        "counts": r.counts.iter().map(|(m, c)| json!({"m": m, "count": c.to_string()})).collect::<Vec<_>>(),
        "weights": r.weights.iter().map(|(m, w)| json!({"m": m, "w": q(w)})).collect::<Vec<_>>(),
        "f0": q(&r.f0),
        "f1": q(&r.f1),
        "minus_two_f1": q(&(-Rational::from_integer(2.into()) * &r.f1)),
        "fit_residuals": r.fit_residuals.iter().map(|(m, e)| json!({"m": m, "residual": q(e)})).collect::<Vec<_>>(),
        "comparisons": r.comparisons.iter().map(|c| json!({
            "name": c.name,
            "exact": q(&c.exact),
            "estimate": q(&c.estimate),
            "residual": q(&c.residual()),
            "relative_error": c.relative_error(),
        })).collect::<Vec<_>>(),
    })
}

fn candidate(c: &DestabCandidate) -> Value {
    json!({
        "crease": affine(&c.crease),
        "l_v": q(&c.l_v),
        "jnorm": q(&c.jnorm),
        "ratio": q(&c.ratio),
    })
}

pub fn destab(r: &DestabReport) -> Value {
    json!({
        "family": r.family,
        "assume_v_zero": r.assume_v_zero,
        "candidates": r.candidates,
        "best": r.best.as_ref().map(candidate),
        "verdict": r.verdict.to_string(),
    })
}

/// Indented `key: value` text; rationals print as `p/q (≈ x)`.
pub fn render_human(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn inline(v: &Value) -> Option<String> {
    if let Some(r) = as_rational(v) {
        let approx = v["approx"].as_f64().map_or("nan".to_string(), |x| format!("{x}"));
        return Some(if r.is_integer() {
            r.to_string()
        } else {
            format!("{r} (≈ {approx})")
        });
    }
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() || as_rational(i).is_some()) => {
            let parts: Option<Vec<String>> = items.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => render_map(map, depth, out),
        Value::Array(items) => {
            for item in items {
                match inline(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        // first line shares the bullet
                        let mut inner = String::new();
                        render(item, depth + 1, &mut inner);
                        let body = inner.strip_prefix(&format!("{pad}  ")).unwrap_or(&inner);
                        out.push_str(&format!("{pad}- {body}"));
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other).unwrap_or_default())),
    }
}

fn render_map(map: &Map<String, Value>, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (k, v) in map {
        match inline(v) {
            Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                render(v, depth + 1, out);
            }
        }
    }
}

/// Every exact rational string in `v`, depth first.
pub fn exact_values(v: &Value) -> Vec<String> {
    let mut out = Vec::new();
    collect(v, &mut out);
    out
}

fn collect(v: &Value, out: &mut Vec<String>) {
    if let Some(r) = as_rational(v) {
        out.push(r.to_string());
        return;
    }
    match v {
        Value::Object(m) => m.values().for_each(|x| collect(x, out)),
        Value::Array(a) => a.iter().for_each(|x| collect(x, out)),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_round_trip() {
        let r = Rational::new((-7).into(), 3.into());
        assert_eq!(as_rational(&q(&r)), Some(r.clone()));
        let text = serde_json::to_string(&q(&r)).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(as_rational(&back), Some(r));
    }

    #[test]
    fn human_rendering_shows_exact_values() {
        let v = json!({"a": q(&Rational::new(1.into(), 3.into())), "b": [q(&Rational::from_integer(2.into()))], "c": {"d": true}});
        let text = render_human(&v);
        assert!(text.contains("a: 1/3 (≈ 0.3333333333333333)"), "{text}");
        assert!(text.contains("b: [2]"));
        assert!(text.contains("c:\n  d: yes"));
    }
}
