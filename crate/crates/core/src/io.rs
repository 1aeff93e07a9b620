//! JSON form of truncated series.
//!
//! ```json
//! {"vars": ["x", "y"], "trunc": 6,
//!  "terms": [{"exp": [2, 0], "re": "-1", "im": "0"}]}
//! ```
//!
//! Coefficients are rational strings (`"p/q"`, integers, or decimals) or
//! JSON numbers; a missing `im` means zero. Exact output writes rational
//! strings, approximate output writes numbers with 17 significant digits.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::{Map, Number, Value};

use crate::error::{GermError, Result};
use crate::mindex::MultiIndex;
use crate::scalar::{rational_to_f64, Scalar};
use crate::series::{default_var_names, Series};

#[derive(Clone, Debug, PartialEq)]
pub struct NamedSeries<S: Scalar> {
    pub vars: Vec<String>,
    pub series: Series<S>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDoc {
    vars: Vec<String>,
    trunc: u32,
    terms: Vec<TermDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    exp: Vec<u32>,
    re: Value,
    #[serde(default)]
    im: Option<Value>,
}

/// Parses `"p/q"`, `"-7"`, `"0.125"` or `"1.5e-3"` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || GermError::Parse(format!("bad rational {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(GermError::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all = format!("{int}{frac}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(n * ten.pow(scale as u32))
    } else {
        BigRational::new(n, ten.pow((-scale) as u32))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

fn value_to_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(GermError::Parse(format!(
            "coefficient must be a string or number, got {other}"
        ))),
    }
}

/// Correctly rounded double; rational strings go through exact arithmetic.
fn value_to_f64(v: &Value) -> Result<f64> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => {
            return Err(GermError::Parse(format!(
                "coefficient must be a string or number, got {other}"
            )))
        }
    };
    if text.contains('/') {
        return Ok(rational_to_f64(&parse_rational(&text)?));
    }
    text.trim()
        .parse::<f64>()
        .map_err(|_| GermError::Parse(format!("bad number {text:?}")))
}

fn from_doc<S: Scalar>(doc: SeriesDoc) -> Result<NamedSeries<S>> {
    let m = doc.vars.len();
    if m == 0 {
        return Err(GermError::Parse(
            "a series needs at least one variable".into(),
        ));
    }
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in doc.terms {
        if t.exp.len() != m {
            return Err(GermError::DimensionMismatch {
                expected: m,
                found: t.exp.len(),
            });
        }
        let c = if S::EXACT {
            let re = value_to_rational(&t.re)?;
            let im = match &t.im {
                Some(v) => value_to_rational(v)?,
                None => BigRational::zero(),
            };
            S::from_parts(&re, &im)
        } else {
            let re = value_to_f64(&t.re)?;
            let im = match &t.im {
                Some(v) => value_to_f64(v)?,
                None => 0.0,
            };
            S::from_c64(Complex64::new(re, im)).expect("approximate scalars take any double")
        };
        terms.push((MultiIndex::new(t.exp), c));
    }
    Ok(NamedSeries {
        vars: doc.vars,
        series: Series::from_terms(m, doc.trunc, terms)?,
    })
}

pub fn parse_series<S: Scalar>(text: &str) -> Result<NamedSeries<S>> {
    let doc: SeriesDoc = serde_json::from_str(text).map_err(|e| GermError::Parse(e.to_string()))?;
    from_doc(doc)
}

/// A single series document or a JSON array of them.
pub fn parse_series_list<S: Scalar>(text: &str) -> Result<Vec<NamedSeries<S>>> {
    let v: Value = serde_json::from_str(text).map_err(|e| GermError::Parse(e.to_string()))?;
    let docs = match v {
        Value::Array(items) => items,
        other => vec![other],
    };
    docs.into_iter()
        .map(|d| from_doc(serde_json::from_value(d).map_err(|e| GermError::Parse(e.to_string()))?))
        .collect()
}

/// A double as a JSON number with 17 significant digits; non-finite values
/// become strings.
pub fn float_json(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    Number::from_str(&format!("{x:.16e}"))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn rational_json(r: &BigRational) -> Value {
    if r.denom().is_one() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

/// A scalar as `{"re": …, "im": …}`.
pub fn scalar_json<S: Scalar>(c: &S) -> Value {
    let mut obj = Map::new();
    match c.rational_parts() {
        Some((re, im)) => {
            obj.insert("re".into(), rational_json(&re));
            obj.insert("im".into(), rational_json(&im));
        }
        None => {
            let z = c.to_c64();
            obj.insert("re".into(), float_json(z.re));
            obj.insert("im".into(), float_json(z.im));
        }
    }
    Value::Object(obj)
}

/// Terms are written in increasing `≺` order.
pub fn series_json<S: Scalar>(s: &Series<S>, vars: Option<&[String]>) -> Value {
    let names = vars
        .map(<[String]>::to_vec)
        .unwrap_or_else(|| default_var_names(s.nvars()));
    let terms: Vec<Value> = s
        .terms()
        .map(|(n, c)| {
            let mut t = Map::new();
            t.insert("exp".into(), Value::from(n.exps().to_vec()));
            if let Value::Object(parts) = scalar_json(c) {
                t.extend(parts);
            }
            Value::Object(t)
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("vars".into(), Value::from(names));
    obj.insert("trunc".into(), Value::from(s.trunc()));
    obj.insert("terms".into(), Value::Array(terms));
    Value::Object(obj)
}

pub fn emit_series<S: Scalar>(s: &Series<S>, vars: Option<&[String]>) -> String {
    serde_json::to_string_pretty(&series_json(s, vars)).expect("serializable")
}
