//! `SYMFUNC v1` text serialization.
//!
//! ```text
//! SYMFUNC v1 degree=3 terms=3
//! 3: 1/3
//! 2,1: -1/2
//! 1,1,1: 1/6
//! ```
//!
//! Terms appear in canonical partition order, the empty partition is written
//! `-`, and every coefficient is a reduced fraction with positive
//! denominator. `degree` is the largest degree present (0 for the zero
//! function).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::symfunc::SymmetricFunction;

pub const HEADER_TAG: &str = "SYMFUNC v1";

pub fn to_text(f: &SymmetricFunction) -> String {
    let terms = f.sorted_terms();
    let degree = terms.last().map(|(k, _)| k.degree()).unwrap_or(0);
    let mut out = String::with_capacity(32 + terms.len() * 24);
    let _ = writeln!(out, "{HEADER_TAG} degree={degree} terms={}", terms.len());
    for (k, c) in terms {
        let _ = writeln!(out, "{k}: {}/{}", c.numer(), c.denom());
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn from_text(text: &str) -> Result<SymmetricFunction> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let rest = header
        .strip_prefix(HEADER_TAG)
        .ok_or_else(|| parse_err(1, format!("expected '{HEADER_TAG}' header")))?;
    let mut degree = None;
    let mut count = None;
    for field in rest.split_whitespace() {
        if let Some(v) = field.strip_prefix("degree=") {
            degree = Some(v.parse::<u32>().map_err(|e| parse_err(1, e.to_string()))?);
        } else if let Some(v) = field.strip_prefix("terms=") {
            count = Some(v.parse::<usize>().map_err(|e| parse_err(1, e.to_string()))?);
        } else {
            return Err(parse_err(1, format!("unknown header field '{field}'")));
        }
    }
    let degree = degree.ok_or_else(|| parse_err(1, "missing degree"))?;
    let count = count.ok_or_else(|| parse_err(1, "missing terms"))?;

    let mut f = SymmetricFunction::zero();
    let mut previous: Option<Partition> = None;
    let mut seen = 0usize;
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        if line.is_empty() {
            return Err(parse_err(lineno, "blank line"));
        }
        let (key, coeff) = line.split_once(": ").ok_or_else(|| parse_err(lineno, "expected '<parts>: <n>/<d>'"))?;
        let key = parse_partition(key).map_err(|m| parse_err(lineno, m))?;
        let coeff = parse_fraction(coeff).map_err(|m| parse_err(lineno, m))?;
        if let Some(prev) = &previous {
            if *prev >= key {
                return Err(parse_err(lineno, "terms out of canonical order"));
            }
        }
        f.add_term(key.clone(), coeff);
        previous = Some(key);
        seen += 1;
    }
    if seen != count {
        return Err(parse_err(1, format!("header announces {count} terms, found {seen}")));
    }
    let actual = previous.map(|k| k.degree()).unwrap_or(0);
    if actual != degree {
        return Err(parse_err(1, format!("header degree {degree} but terms reach {actual}")));
    }
    Ok(f)
}

fn parse_partition(s: &str) -> std::result::Result<Partition, String> {
    if s == "-" {
        return Ok(Partition::empty());
    }
    let parts = s
        .split(',')
        .map(|p| p.parse::<u32>().map_err(|e| format!("bad part '{p}': {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Partition::new(parts).map_err(|e| e.to_string())
}

fn parse_fraction(s: &str) -> std::result::Result<BigRational, String> {
    let (n, d) = s.split_once('/').ok_or_else(|| format!("expected fraction, got '{s}'"))?;
    let n: BigInt = n.parse().map_err(|_| format!("bad numerator '{n}'"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad denominator '{d}'"))?;
    if !d.is_positive() {
        return Err("denominator must be positive".into());
    }
    if n.is_zero() {
        return Err("zero coefficient".into());
    }
    let q = BigRational::new(n.clone(), d.clone());
    if *q.numer() != n || *q.denom() != d {
        return Err(format!("fraction {s} is not reduced"));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{derivation_character, littlewood_series};
    use crate::symfunc::exterior_plethysm;
    use proptest::prelude::*;

    #[test]
    fn known_layout() {
        let e3 = exterior_plethysm(3, &SymmetricFunction::power_sum(1)).unwrap();
        let text = to_text(&e3);
        assert_eq!(text, "SYMFUNC v1 degree=3 terms=3\n3: 1/3\n2,1: -1/2\n1,1,1: 1/6\n");
        assert_eq!(from_text(&text).unwrap(), e3);
        assert_eq!(to_text(&SymmetricFunction::one()), "SYMFUNC v1 degree=0 terms=1\n-: 1/1\n");
        assert_eq!(to_text(&SymmetricFunction::zero()), "SYMFUNC v1 degree=0 terms=0\n");
    }

    #[test]
    fn rejects_malformed() {
        assert!(from_text("").is_err());
        assert!(from_text("SYMFUNC v2 degree=0 terms=0\n").is_err());
        assert!(from_text("SYMFUNC v1 degree=1 terms=2\n1: 1/1\n").is_err());
        assert!(from_text("SYMFUNC v1 degree=2 terms=2\n1,1: 1/1\n2: 1/1\n").is_err());
        assert!(from_text("SYMFUNC v1 degree=2 terms=1\n2: 2/4\n").is_err());
        assert!(from_text("SYMFUNC v1 degree=2 terms=1\n2: 0/1\n").is_err());
        assert!(from_text("SYMFUNC v1 degree=2 terms=1\n1,2: 1/1\n").is_err());
        assert!(from_text("SYMFUNC v1 degree=3 terms=1\n2: 1/1\n").is_err());
    }

    #[test]
    fn pipeline_objects_round_trip() {
        let h3 = derivation_character(3).unwrap();
        let e2 = exterior_plethysm(2, &h3.character).unwrap();
        let text = to_text(&e2);
        assert_eq!(to_text(&from_text(&text).unwrap()), text);
        let b = littlewood_series(8).unwrap().series();
        assert_eq!(from_text(&to_text(&b)).unwrap(), b);
    }

    proptest! {
        #[test]
        fn round_trip(terms in proptest::collection::vec(
            (proptest::collection::vec(1u32..6, 0..5), -50i64..50, 1i64..30), 0..12)) {
            let f = SymmetricFunction::from_terms(terms.into_iter().map(|(p, n, d)| {
                (Partition::from_parts_unsorted(p), BigRational::new(n.into(), d.into()))
            }));
            let text = to_text(&f);
            let back = from_text(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(to_text(&back), text);
        }
    }
}
