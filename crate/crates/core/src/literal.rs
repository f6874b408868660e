//! Textual element and ideal literals.
//!
//! Elements: a coordinate tuple `(a,b,…)` in the power basis, or a sum of
//! terms `c`, `c*u`, `cu` with `u` one of `i` (field `x^2+1`), `s` or
//! `sqrt(m)` (field `x^2-m`), `t` or `t^n` (the generator θ in any field).
//! Ideals: one element, or several separated by `;`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::BallIndex;
use crate::error::{Error, Result};
use crate::field::{AlgebraicInt, Field};
use crate::ideal::IdealHNF;
use crate::sieve::lattice_points_in_ball;

fn sqrt_parameter(field: &Field) -> Option<BigInt> {
    let f = field.min_poly();
    (f.len() == 3 && f[1].is_zero()).then(|| -f[0].clone())
}

fn is_gaussian(field: &Field) -> bool {
    sqrt_parameter(field) == Some(BigInt::from(-1))
}

fn bad(s: &str, why: &str) -> Error {
    Error::Parse(format!("{why} in element literal {s:?}"))
}

/// Parses one element literal.
pub fn parse_element(field: &Field, s: &str) -> Result<AlgebraicInt> {
    let d = field.degree();
    let t = s.trim();
    if t.starts_with('(') {
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| bad(s, "unbalanced parentheses"))?;
        let coords: Vec<BigInt> = inner
            .split(',')
            .map(|c| c.trim().parse::<BigInt>().map_err(|_| bad(s, "bad coordinate")))
            .collect::<Result<_>>()?;
        if coords.len() != d {
            return Err(Error::FieldMismatch);
        }
        return Ok(AlgebraicInt::new(coords));
    }
    let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad(s, "empty"));
    }
    // split into signed terms
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in compact.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if (ch == '+' || ch == '-') && depth == 0 && !cur.is_empty() && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut acc = field.zero();
    for term in terms {
        let (sign, body) = match term.as_bytes()[0] {
            b'-' => (-1, &term[1..]),
            b'+' => (1, &term[1..]),
            _ => (1, &term[..]),
        };
        let digits = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
        let (num, unit) = body.split_at(digits);
        let unit = unit.strip_prefix('*').unwrap_or(unit);
        let coeff: BigInt = if num.is_empty() {
            if unit.is_empty() {
                return Err(bad(s, "empty term"));
            }
            BigInt::one()
        } else {
            num.parse().map_err(|_| bad(s, "bad integer"))?
        };
        let coeff = coeff * sign;
        let basis_elem = parse_unit(field, unit, s)?;
        let scaled = AlgebraicInt::new(basis_elem.coords().iter().map(|c| c * &coeff).collect());
        acc = field.add(&acc, &scaled)?;
    }
    Ok(acc)
}

fn parse_unit(field: &Field, unit: &str, s: &str) -> Result<AlgebraicInt> {
    if unit.is_empty() {
        return Ok(field.one());
    }
    if unit == "i" {
        if !is_gaussian(field) {
            return Err(bad(s, "`i` needs the field x^2+1"));
        }
        return Ok(field.theta());
    }
    if unit == "s" {
        if sqrt_parameter(field).is_none() {
            return Err(bad(s, "`s` needs a field x^2-m"));
        }
        return Ok(field.theta());
    }
    if let Some(m) = unit.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let m: BigInt = m.parse().map_err(|_| bad(s, "bad sqrt argument"))?;
        if sqrt_parameter(field) != Some(m) {
            return Err(bad(s, "sqrt(m) must match the field x^2-m"));
        }
        return Ok(field.theta());
    }
    if unit == "t" {
        return Ok(field.theta());
    }
    if let Some(e) = unit.strip_prefix("t^") {
        let e: u32 = e.parse().map_err(|_| bad(s, "bad exponent"))?;
        return field.pow(&field.theta(), e);
    }
    Err(bad(s, "unknown unit"))
}

/// Parses `;`-separated elements.
pub fn parse_element_list(field: &Field, s: &str) -> Result<Vec<AlgebraicInt>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(';').map(|e| parse_element(field, e)).collect()
}

/// Parses an ideal literal (its generators, `;`-separated).
pub fn parse_ideal(field: &Field, s: &str) -> Result<IdealHNF> {
    let gens = parse_element_list(field, s)?;
    if gens.is_empty() {
        return Err(Error::Parse("ideal literal has no generators".into()));
    }
    IdealHNF::from_generators(field, &gens)
}

fn signed_term(out: &mut String, c: &BigInt, unit: &str) {
    if c.is_zero() {
        return;
    }
    let neg = c.is_negative();
    let mag = c.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push(if neg { '-' } else { '+' });
    }
    if unit.is_empty() {
        out.push_str(&mag.to_string());
    } else if mag.is_one() {
        out.push_str(unit);
    } else if unit == "i" {
        out.push_str(&format!("{mag}i"));
    } else {
        out.push_str(&format!("{mag}*{unit}"));
    }
}

/// Prints an element using the same sugar the parser accepts.
pub fn format_element(field: &Field, a: &AlgebraicInt) -> String {
    let c = a.coords();
    if field.degree() == 1 {
        return c[0].to_string();
    }
    let unit = if is_gaussian(field) {
        "i".to_string()
    } else if let Some(m) = sqrt_parameter(field) {
        format!("sqrt({m})")
    } else {
        return a.to_string();
    };
    let mut out = String::new();
    signed_term(&mut out, &c[0], "");
    signed_term(&mut out, &c[1], &unit);
    if out.is_empty() {
        out.push('0');
    }
    out
}

const GENERATOR_SEARCH_POINTS: u64 = 200_000;

/// A generator of smallest geometric norm (ties: lexicographically largest),
/// if one turns up within a bounded search.
pub fn short_generator(a: &IdealHNF) -> Option<AlgebraicInt> {
    let field = a.field();
    let d = field.degree();
    let n = a.norm_u64()? as u128;
    let mut r = 1u64;
    while r < 10_000 && BallIndex::new(d, r * 2).len() <= GENERATOR_SEARCH_POINTS {
        r *= 2;
    }
    let mut best: Option<(u64, Vec<i64>)> = None;
    for v in lattice_points_in_ball(a, r) {
        let Some(nv) = field.elem_norm_i64(&v) else { continue };
        if nv.unsigned_abs() != n {
            continue;
        }
        let l1: u64 = v.iter().map(|c| c.unsigned_abs()).sum();
        let better = match &best {
            None => true,
            Some((bl, bv)) => l1 < *bl || (l1 == *bl && v > *bv),
        };
        if better {
            best = Some((l1, v));
        }
    }
    best.map(|(_, v)| AlgebraicInt::from_i64(&v))
}

/// `8-6i` for a principal ideal with a short generator, otherwise the HNF
/// columns as a generator list.
pub fn format_ideal(a: &IdealHNF) -> String {
    let field = a.field();
    if let Some(g) = short_generator(a) {
        return format_element(field, &g);
    }
    a.basis()
        .iter()
        .map(|c| {
            let e = AlgebraicInt::new(c.clone());
            if field.degree() == 1 { e.coords()[0].to_string() } else { e.to_string() }
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Coordinates as `i64`, or a parse error naming the literal.
pub fn to_i64_coords(a: &AlgebraicInt) -> Result<Vec<i64>> {
    a.coords().iter().map(|c| c.to_i64().ok_or_else(|| Error::TooLarge(c.to_string()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;

    #[test]
    fn gaussian_literals() {
        let k = NumberField::from_i64(&[1, 0, 1]).unwrap();
        assert_eq!(parse_element(&k, "8-6i").unwrap(), AlgebraicInt::from_i64(&[8, -6]));
        assert_eq!(parse_element(&k, "-i").unwrap(), AlgebraicInt::from_i64(&[0, -1]));
        assert_eq!(parse_element(&k, "1+i").unwrap(), AlgebraicInt::from_i64(&[1, 1]));
        assert_eq!(parse_element(&k, " (3, -4) ").unwrap(), AlgebraicInt::from_i64(&[3, -4]));
        assert_eq!(parse_element(&k, "2*i").unwrap(), AlgebraicInt::from_i64(&[0, 2]));
        assert_eq!(parse_element(&k, "t^2").unwrap(), AlgebraicInt::from_i64(&[-1, 0]));
        let list = parse_element_list(&k, "1;i;-1;-i").unwrap();
        assert_eq!(list.len(), 4);
        assert!(parse_element(&k, "sqrt(2)").is_err());
        assert!(parse_element(&k, "(1,2,3)").is_err());
        assert!(parse_element(&k, "1+q").is_err());
        assert_eq!(format_element(&k, &AlgebraicInt::from_i64(&[8, -6])), "8-6i");
        assert_eq!(format_element(&k, &AlgebraicInt::from_i64(&[0, -1])), "-i");
    }

    #[test]
    fn sqrt_literals() {
        let k = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        assert_eq!(parse_element(&k, "3-s").unwrap(), AlgebraicInt::from_i64(&[3, -1]));
        assert_eq!(parse_element(&k, "1+2*sqrt(2)").unwrap(), AlgebraicInt::from_i64(&[1, 2]));
        assert_eq!(format_element(&k, &AlgebraicInt::from_i64(&[1, -2])), "1-2*sqrt(2)");
        assert!(parse_element(&k, "sqrt(3)").is_err());
    }

    #[test]
    fn ideal_round_trip() {
        let k = NumberField::from_i64(&[1, 0, 1]).unwrap();
        let a = parse_ideal(&k, "8-6i").unwrap();
        assert_eq!(format_ideal(&a), "8-6i");
        let p = parse_ideal(&k, "2;1+i").unwrap();
        assert_eq!(format_ideal(&p), "1+i");
        let q = NumberField::from_i64(&[0, 1]).unwrap();
        assert_eq!(format_ideal(&parse_ideal(&q, "-12").unwrap()), "12");
        // a cubic field without sugar falls back to tuples
        let c = NumberField::from_i64(&[1, -1, 0, 1]).unwrap();
        let id = parse_ideal(&c, "(2,0,0);(1,1,0)").unwrap();
        let back = parse_ideal(&c, &format_ideal(&id)).unwrap();
        assert_eq!(back, id);
    }
}
