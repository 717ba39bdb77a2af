//! JSON forms shared by reports: rationals as `"p/q"` strings, formal
//! weights as `[[monomial, coefficient], ..]` lists.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::weight::{format_rational, parse_rational, GenMonomial, Weight};

pub fn weight_to_json(w: &Weight) -> Value {
    match w.as_constant() {
        Some(c) => Value::String(format_rational(&c)),
        None => Value::Array(
            w.terms()
                .iter()
                .map(|(m, c)| Value::Array(vec![Value::String(m.to_string()), Value::String(format_rational(c))]))
                .collect(),
        ),
    }
}

pub fn weight_from_json(v: &Value) -> Result<Weight> {
    let bad = || Error::Config(format!("malformed weight `{v}`"));
    match v {
        Value::String(s) => Ok(Weight::constant(parse_rational(s)?)),
        Value::Array(items) => {
            let mut terms = Vec::with_capacity(items.len());
            for item in items {
                let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
                let m: GenMonomial = pair[0].as_str().ok_or_else(bad)?.parse()?;
                let c = parse_rational(pair[1].as_str().ok_or_else(bad)?)?;
                terms.push((m, c));
            }
            Ok(Weight::from_terms(terms))
        }
        _ => Err(bad()),
    }
}

/// `{"k1,k2": weight, ..}`; keys sort as strings.
pub fn series_to_json(series: &BTreeMap<MultiIndex, Weight>) -> Value {
    let mut map = serde_json::Map::new();
    for (k, w) in series {
        map.insert(k.to_string(), weight_to_json(w));
    }
    Value::Object(map)
}

pub fn series_from_json(v: &Value) -> Result<BTreeMap<MultiIndex, Weight>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Config("series must be a JSON object".into()))?;
    obj.iter()
        .map(|(k, w)| Ok((k.parse()?, weight_from_json(w)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::ratio;
    use crate::weight::Generator;

    #[test]
    fn round_trip() {
        let g = Weight::generator(Generator::new(&"a1 a1".parse::<crate::Monomial>().unwrap().cyclic_class()));
        let w = &g.scale(&ratio(-1, 2)) + &Weight::constant(ratio(3, 1));
        assert_eq!(weight_from_json(&weight_to_json(&w)).unwrap(), w);
        let c = Weight::constant(ratio(7, 9));
        assert_eq!(weight_to_json(&c), Value::String("7/9".into()));
        assert_eq!(weight_from_json(&weight_to_json(&c)).unwrap(), c);
        let mut s = BTreeMap::new();
        s.insert(MultiIndex::new(vec![1, 0]), w);
        s.insert(MultiIndex::new(vec![0, 2]), c);
        assert_eq!(series_from_json(&series_to_json(&s)).unwrap(), s);
    }
}
