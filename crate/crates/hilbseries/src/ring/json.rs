//! Canonical JSON encoding of truncated series.
//!
//! Shape: `{"vars":[…],"orders":[…],"terms":[{"exp":[…],"num":"…","den":"…"}]}`
//! with terms sorted lexicographically by exponent and all integers rendered
//! as decimal strings. The term map is a `BTreeMap`, so the sort order comes
//! for free and the output is byte-stable.

use num::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use super::series::{SeriesShape, TruncatedSeries};
use super::{Coeff, RatQT, QQ};

/// Coefficients that can be serialized as a num/den string pair.
pub trait JsonCoeff: Coeff {
    fn num_string(&self) -> String;
    fn den_string(&self) -> String;
    fn from_strings(num: &str, den: &str) -> Option<Self>;
}

impl JsonCoeff for QQ {
    fn num_string(&self) -> String {
        self.numer().to_string()
    }
    fn den_string(&self) -> String {
        self.denom().to_string()
    }
    fn from_strings(num: &str, den: &str) -> Option<Self> {
        let n: BigInt = num.parse().ok()?;
        let d: BigInt = den.parse().ok()?;
        if d == BigInt::from(0) {
            None
        } else {
            Some(QQ::new(n, d))
        }
    }
}

impl JsonCoeff for RatQT {
    fn num_string(&self) -> String {
        self.numer().render()
    }
    fn den_string(&self) -> String {
        self.denom().render()
    }
    fn from_strings(_num: &str, _den: &str) -> Option<Self> {
        // Rational-function coefficients are emitted, never re-read.
        None
    }
}

pub fn series_to_json<R: JsonCoeff>(s: &TruncatedSeries<R>) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(e, c)| {
            json!({
                "exp": e,
                "num": c.num_string(),
                "den": c.den_string(),
            })
        })
        .collect();
    json!({
        "vars": s.shape().vars.as_ref(),
        "orders": s.shape().orders,
        "terms": terms,
    })
}

pub fn series_from_json(v: &Value) -> Option<TruncatedSeries<QQ>> {
    let vars: Vec<String> =
        v.get("vars")?.as_array()?.iter().map(|x| x.as_str().unwrap_or("").to_string()).collect();
    let orders: Vec<u64> = v.get("orders")?.as_array()?.iter().filter_map(|x| x.as_u64()).collect();
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let orders32: Vec<u32> = orders.iter().map(|&o| o as u32).collect();
    let shape = SeriesShape::new(&var_refs, &orders32);
    let mut out = TruncatedSeries::zero(shape);
    for t in v.get("terms")?.as_array()? {
        let exp: Vec<u32> =
            t.get("exp")?.as_array()?.iter().filter_map(|x| x.as_u64()).map(|x| x as u32).collect();
        let c = QQ::from_strings(t.get("num")?.as_str()?, t.get("den")?.as_str()?)?;
        out.insert(exp, c);
    }
    Some(out)
}

/// Render a rational as `a` or `a/b`.
pub fn qq_string(c: &QQ) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{qi, qq};
    use super::*;

    #[test]
    fn roundtrip_and_stability() {
        let shape = SeriesShape::new(&["w", "z"], &[2, 2]);
        let s = TruncatedSeries::monomial(shape.clone(), vec![1, 2], qq(3, 7))
            .add(&TruncatedSeries::constant(shape, qi(1)));
        let v = series_to_json(&s);
        let s2 = series_from_json(&v).unwrap();
        assert_eq!(s, s2);
        assert_eq!(serde_json::to_string(&v).unwrap(), serde_json::to_string(&series_to_json(&s2)).unwrap());
    }
}
