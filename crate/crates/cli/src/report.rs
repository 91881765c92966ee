//! Check reports and their text / JSON renderings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sicfield::scalar::f64_to_rational;
use sicfield::{Extended, FieldElem, PolyQ, Rational};

/// Significant digits used for every decimal rendering.
pub const DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            _ => Err(format!("unknown precision `{s}` (expected double or extended)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    /// One-line human summary.
    pub summary: String,
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(check: impl Into<String>, status: Status, summary: impl Into<String>) -> Self {
        Report { check: check.into(), status, summary: summary.into(), details: Map::new() }
    }

    pub fn check(check: impl Into<String>, ok: bool, summary: impl Into<String>) -> Self {
        Self::new(check, Status::from_bool(ok), summary)
    }

    pub fn error(check: impl Into<String>, err: impl fmt::Display) -> Self {
        Self::new(check, Status::Error, err.to_string())
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Round-half-even decimal with [`DIGITS`] significant digits, computed
/// exactly. Trailing zeros are dropped; scientific notation outside
/// `1e-5 ..= 1e12`.
pub fn decimal(q: &Rational) -> String {
    decimal_digits(q, DIGITS)
}

pub fn decimal_digits(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let sign = if q.is_negative() { "-" } else { "" };
    let a = q.abs();
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> Rational {
        let p = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_integer(p)
        } else {
            Rational::new(BigInt::one(), p)
        }
    };
    // Decimal exponent e with 10^e <= a < 10^(e+1); start from a bit-length estimate.
    let bits = a.numer().bits() as i64 - a.denom().bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let scaled = &a * pow10(digits as i64 - 1 - e);
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut m = floor.to_integer();
    if frac > half || (frac == half && (&m % 2u32) == BigInt::one()) {
        m += 1;
    }
    if m == num_traits::pow(ten.clone(), digits) {
        m /= 10;
        e += 1;
    }
    let s = m.to_string();
    let (int_part, frac_part) = if (-5..12).contains(&e) {
        if e >= 0 {
            let k = (e + 1) as usize;
            if k >= s.len() {
                (format!("{s}{}", "0".repeat(k - s.len())), String::new())
            } else {
                (s[..k].to_string(), s[k..].to_string())
            }
        } else {
            ("0".to_string(), format!("{}{s}", "0".repeat((-e - 1) as usize)))
        }
    } else {
        let frac = s[1..].trim_end_matches('0');
        let mant = if frac.is_empty() { s[..1].to_string() } else { format!("{}.{frac}", &s[..1]) };
        return format!("{sign}{mant}e{e}");
    };
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Exact rational value of a floating point number.
pub trait ExactValue {
    fn exact(&self) -> Option<Rational>;
}

impl ExactValue for f64 {
    fn exact(&self) -> Option<Rational> {
        f64_to_rational(*self)
    }
}

impl ExactValue for Extended {
    fn exact(&self) -> Option<Rational> {
        Some(f64_to_rational(self.hi())? + f64_to_rational(self.lo())?)
    }
}

fn float_decimal<F: ExactValue + ToPrimitive>(x: &F) -> String {
    match x.exact() {
        Some(q) => decimal(&q),
        None => x.to_f64().map_or("NaN".into(), |v| v.to_string()),
    }
}

/// JSON number holding the rounded decimal.
fn decimal_value(s: &str) -> Value {
    s.parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or_else(|| Value::String(s.to_string()), Value::Number)
}

/// Rounded decimal of a float as a JSON number.
pub fn float_value<F: ExactValue + ToPrimitive>(x: F) -> Value {
    decimal_value(&float_decimal(&x))
}

/// `(re, im)` decimals of the complex embedding at the given precision.
///
/// The parts are embedded separately as the real elements `(z + z̄)/2` and
/// `(z − z̄)/2i`, so an exactly real or imaginary element shows an exact 0.
pub fn approx_parts(z: &FieldElem, precision: Precision) -> (String, String) {
    let bar = z.conj();
    let re = (z + &bar).mul_rational(&Rational::new(BigInt::one(), BigInt::from(2)));
    let i = sicfield::constant("i").expect("i is a named constant");
    let im = &(&(z - &bar) * &i).mul_rational(&Rational::new(BigInt::from(-1), BigInt::from(2)));
    let part = |w: &FieldElem| -> String {
        if w.is_zero() {
            return "0".into();
        }
        match precision {
            Precision::Double => float_decimal(&w.embed_in::<f64>().re),
            Precision::Extended => float_decimal(&w.embed_in::<Extended>().re),
        }
    };
    (part(&re), part(im))
}

pub fn complex_string(re: &str, im: &str) -> String {
    match (re, im) {
        (_, "0") => re.to_string(),
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re} - {}i", &im[1..]),
        _ => format!("{re} + {im}i"),
    }
}

/// `{"coords": [16 "p/q"], "approx": {"re", "im"}, "text"}`.
pub fn field_json(z: &FieldElem, precision: Precision) -> Value {
    let coords: Vec<Value> =
        z.coords().iter().map(|q| Value::String(format!("{}/{}", q.numer(), q.denom()))).collect();
    let (re, im) = approx_parts(z, precision);
    json!({
        "coords": coords,
        "approx": { "re": decimal_value(&re), "im": decimal_value(&im) },
        "text": z.to_string(),
    })
}

pub fn poly_json(p: &PolyQ) -> Value {
    json!({
        "text": p.to_string(),
        "coeffs": p.coeffs().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
    })
}

pub fn render_json(reports: &[Report]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize") + "\n"
}

fn number_text(v: &Value) -> String {
    match v.as_f64() {
        Some(x) if x.fract() == 0.0 && x.abs() < 1e12 => format!("{}", x as i64),
        _ => v.to_string(),
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("coords") => {
            let text = m.get("text").and_then(Value::as_str).unwrap_or("");
            let approx = &m["approx"];
            format!("{text}  ≈ {}", complex_string(&number_text(&approx["re"]), &number_text(&approx["im"])))
        }
        Value::Object(m) if m.contains_key("coeffs") => m["text"].as_str().unwrap_or("").to_string(),
        other => other.to_string(),
    }
}

pub fn render_text(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("[{}] {}: {}\n", r.status, r.check, r.summary));
        for (k, v) in &r.details {
            out.push_str(&format!("    {k} = {}\n", value_text(v)));
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    out.push_str(&format!("{passed}/{} checks passed\n", reports.len()));
    out
}
