//! Scalar literals: `entry := term (('+'|'-') term)*`,
//! `term := rational ('*'? 'w')?`, `rational := int ('/' int)?`.
//! A leading sign and a bare `w` are accepted as well.

use num_bigint::BigInt;

use super::field::Field;
use super::quad::Quad;
use super::scalar::PAdic;
use crate::error::{LabError, Result};

pub fn parse_quad(s: &str, field: &Field) -> Result<Quad> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(LabError::Parse("empty scalar literal".into()));
    }
    let bytes = s.as_bytes();
    let mut acc = Quad::zero(field);
    let mut i = 0;
    while i < bytes.len() {
        let mut negative = false;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            negative = bytes[i] == b'-';
            i += 1;
        } else if i > 0 {
            return Err(LabError::Parse(format!("expected '+' or '-' in {s:?}")));
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        let term = parse_term(&s[start..i], field).map_err(|e| match e {
            LabError::Parse(m) => LabError::Parse(format!("{m} in {s:?}")),
            other => other,
        })?;
        acc = if negative { acc.sub(&term) } else { acc.add(&term) };
    }
    Ok(acc)
}

fn parse_term(t: &str, field: &Field) -> Result<Quad> {
    if t.is_empty() {
        return Err(LabError::Parse("empty term".into()));
    }
    let (coef, has_w) = match t.strip_suffix('w') {
        Some(rest) => (rest.strip_suffix('*').unwrap_or(rest), true),
        None => (t, false),
    };
    let value = if coef.is_empty() {
        if !has_w {
            return Err(LabError::Parse("empty term".into()));
        }
        PAdic::one(field)
    } else {
        parse_rational(coef, field)?
    };
    Ok(if has_w {
        Quad::new(PAdic::zero(field), value)
    } else {
        Quad::from_base(value)
    })
}

fn parse_rational(r: &str, field: &Field) -> Result<PAdic> {
    let mut parts = r.splitn(2, '/');
    let num = parse_int(parts.next().unwrap_or(""))?;
    let den = match parts.next() {
        Some(d) => parse_int(d)?,
        None => BigInt::from(1),
    };
    PAdic::from_big_rational(field, &num, &den).map_err(|_| LabError::Parse("zero denominator".into()))
}

fn parse_int(s: &str) -> Result<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(LabError::Parse(format!("bad integer {s:?}")));
    }
    s.parse::<BigInt>().map_err(|e| LabError::Parse(e.to_string()))
}

/// Parses a literal that must lie in `F`.
pub fn parse_padic(s: &str, field: &Field) -> Result<PAdic> {
    let q = parse_quad(s, field)?;
    if !q.im.is_exact_zero() {
        return Err(LabError::Parse(format!("{s:?} is not an element of the base field")));
    }
    Ok(q.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::FieldConfig;

    #[test]
    fn grammar() {
        let f = Field::new(FieldConfig::with_u(3, -1, 48).unwrap()).unwrap();
        let cases = [
            ("1", "1"),
            ("w", "w"),
            ("-w", "-w"),
            ("2+3w", "2+3*w"),
            ("1/3 - 2/9*w", "1/3-2/9*w"),
            ("-5/7", "-5/7"),
            ("4w+1", "1+4*w"),
            ("0", "0"),
        ];
        for (input, out) in cases {
            assert_eq!(parse_quad(input, &f).unwrap().to_string(), out, "{input}");
        }
        for bad in ["", "1/0", "x", "1++2", "1/", "w/2"] {
            assert!(parse_quad(bad, &f).is_err(), "{bad}");
        }
        assert!(parse_padic("w", &f).is_err());
        assert_eq!(parse_padic("9/2", &f).unwrap().valuation(), Some(2));
    }
}
