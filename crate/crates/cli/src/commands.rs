//! Subcommand implementations, independent of argument parsing.

use std::fmt::Write as _;

use serde_json::{json, Value};
use toric_k::functionals::extremal_affine;
use toric_k::geometry::{delzant_check, is_integral};
use toric_k::rational::parse_rational;
use toric_k::stability::{
    destabilizer_search, df_asymptotic_check, ehrhart_fit, fano_analysis, sufficient_condition, DestabVerdict,
};
use toric_k::{moments, na_report, Polytope, Rational};

use crate::catalog::ENTRIES;
use crate::error::CliError;
use crate::format::{load_function, load_polytope, parse_point, PolytopeDocument};
use crate::report;

/// A finished command: the report and the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit: i32,
}

impl Outcome {
    fn ok(report: Value) -> Outcome {
        Outcome { report, exit: 0 }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
            s.push('\n');
            s
        } else {
            report::render_human(&self.report)
        }
    }
}

fn load_valid(input: &str) -> Result<(PolytopeDocument, Polytope, Value), CliError> {
    let (doc, p) = load_polytope(input)?;
    let validation = report::validation(&p);
    Ok((doc, p, validation))
}

fn not_delzant(doc: &PolytopeDocument, p: &Polytope, validation: Value) -> Outcome {
    Outcome {
        report: json!({
            "polytope": report::polytope(p, &doc.name),
            "validation": validation,
            "error": "polytope is not Delzant",
        }),
        exit: 1,
    }
}

pub fn validate(input: &str) -> Result<Outcome, CliError> {
    let (doc, p, validation) = load_valid(input)?;
    let pass = validation["delzant"].as_bool().unwrap_or(false);
    Ok(Outcome {
        report: json!({
            "polytope": report::polytope(&p, &doc.name),
            "validation": validation,
            "result": if pass { "pass" } else { "fail" },
        }),
        exit: if pass { 0 } else { 1 },
    })
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub x0: Option<String>,
    pub oracle: Option<u64>,
}

pub fn analyze(input: &str, opts: &AnalyzeOptions) -> Result<Outcome, CliError> {
    let (doc, p, validation) = load_valid(input)?;
    if !delzant_check(&p).pass {
        return Ok(not_delzant(&doc, &p, validation));
    }
    let x0 = opts.x0.as_deref().map(parse_point).transpose()?;
    let mt = moments(&p);
    let ed = extremal_affine(&mt)?;
    let suff = sufficient_condition(&p, &ed, x0.as_deref())?;
    let fano = fano_analysis(&p, &ed);
    let mut out = json!({
        "polytope": report::polytope(&p, &doc.name),
        "validation": validation,
        "verdict": suff.verdict(),
        "moments": report::moments(&mt),
        "extremal": report::extremal(&ed),
        "sufficient_condition": report::sufficient(&suff),
    });
    if fano.reflexive {
        out["fano"] = report::fano(&fano);
    }
    if let Some(m_max) = opts.oracle {
        if !is_integral(&p) {
            return Err(toric_k::Error::NotIntegral.into());
        }
        let poly = ehrhart_fit(&p, m_max)?;
        out["oracle"] = report::ehrhart(&poly, &mt);
    }
    Ok(Outcome::ok(out))
}

/// The three largest powers of two not exceeding `m_max`.
pub fn oracle_sizes(m_max: u64) -> Result<Vec<u64>, CliError> {
    if m_max < 4 {
        return Err(CliError::Usage("--oracle-mmax must be at least 4".into()));
    }
    let top = 63 - m_max.leading_zeros();
    Ok((top - 2..=top).map(|k| 1u64 << k).collect())
}

#[derive(Debug, Clone)]
pub struct TestConfigOptions {
    pub function: String,
    pub level: String,
    pub oracle_mmax: Option<u64>,
    pub cdf_samples: usize,
}

pub fn test_config(input: &str, opts: &TestConfigOptions) -> Result<Outcome, CliError> {
    let (doc, p, validation) = load_valid(input)?;
    let level: Rational =
        parse_rational(&opts.level).map_err(|e| CliError::Usage(format!("bad value for --L: {e}")))?;
    let f = load_function(&opts.function, p.dim())?;
    if !delzant_check(&p).pass {
        return Ok(not_delzant(&doc, &p, validation));
    }
    let sizes = opts.oracle_mmax.map(oracle_sizes).transpose()?;
    let mt = moments(&p);
    let ed = extremal_affine(&mt)?;
    let na = na_report(&p, &ed, &f, &level)?;
    let mut out = json!({
        "polytope": report::polytope(&p, &doc.name),
        "function": report::pl_function(&f),
        "test_configuration": report::na(&na, opts.cdf_samples),
    });
    if let Some(sizes) = sizes {
        let r = df_asymptotic_check(&p, &ed, &f, &level, &sizes)?;
        out["oracle"] = report::oracle(&r, &mt);
    }
    Ok(Outcome::ok(out))
}

/// `t,cdf` rows with exact and decimal columns from a `test-config` report.
pub fn dh_csv(report: &Value) -> String {
    let mut s = String::from("t_exact,t_approx,cdf_exact,cdf_approx\n");
    if let Some(rows) = report["test_configuration"]["dh"]["cdf_samples"].as_array() {
        for row in rows {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                row["t"]["exact"].as_str().unwrap_or(""),
                row["t"]["approx"],
                row["cdf"]["exact"].as_str().unwrap_or(""),
                row["cdf"]["approx"],
            );
        }
    }
    s
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub grid_depth: u64,
    pub max_slope: u64,
    pub assume_v_zero: bool,
}

pub fn search_destab(input: &str, opts: &SearchOptions) -> Result<Outcome, CliError> {
    if opts.grid_depth == 0 || opts.max_slope == 0 {
        return Err(CliError::Usage("--grid-depth and --max-slope must be positive".into()));
    }
    let (doc, p, validation) = load_valid(input)?;
    if !delzant_check(&p).pass {
        return Ok(not_delzant(&doc, &p, validation));
    }
    let ed = extremal_affine(&moments(&p))?;
    let r = destabilizer_search(&p, &ed, opts.grid_depth, opts.max_slope, opts.assume_v_zero)?;
    let verdict = match r.verdict {
        DestabVerdict::DestabilizerCertificate => "destabilizer-certificate",
        DestabVerdict::NoDestabilizerFound => "inconclusive",
    };
    Ok(Outcome::ok(json!({
        "polytope": report::polytope(&p, &doc.name),
        "search": report::destab(&r),
        "verdict": verdict,
    })))
}

pub fn catalog(name: Option<&str>) -> Result<Outcome, CliError> {
    match name {
        Some(n) => {
            let e = crate::catalog::lookup(n).ok_or_else(|| CliError::UnknownCatalogEntry(n.to_string()))?;
            Ok(Outcome::ok(serde_json::to_value(e.document()).expect("document serializes")))
        }
        None => Ok(Outcome::ok(Value::Array(
            ENTRIES
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "aliases": e.aliases,
                        "dim": e.dim(),
                        "description": e.description,
                    })
                })
                .collect(),
        ))),
    }
}
