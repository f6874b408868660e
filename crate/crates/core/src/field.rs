//! Exact arithmetic in `Z[θ]` for a monogenic number field `K = Q(θ)`.
//!
//! Elements are coordinate vectors with respect to the power basis
//! `1, θ, …, θ^{d-1}`, which is also the identification `Z^d ≅ O_K` used for
//! the geometric (L1) norm and for every ball average in the crate.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intfactor;

/// Shared handle to a number field; every ideal and grid keeps one.
pub type Field = Arc<NumberField>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    /// Coefficients of the minimal polynomial, constant term first, monic.
    min_poly: Vec<BigInt>,
    /// `c[i][j][m]` flattened as `(i * d + j) * d + m`.
    mult_table: Vec<BigInt>,
    discriminant: BigInt,
}

/// Ring operation selector for [`NumberField::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// An element of `Z[θ]` in power-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicInt {
    coords: Vec<BigInt>,
}

impl AlgebraicInt {
    pub fn new(coords: Vec<BigInt>) -> Self {
        AlgebraicInt { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        AlgebraicInt { coords: coords.iter().map(|&c| BigInt::from(c)).collect() }
    }

    pub fn zero(d: usize) -> Self {
        AlgebraicInt { coords: vec![BigInt::zero(); d] }
    }

    pub fn one(d: usize) -> Self {
        let mut e = Self::zero(d);
        e.coords[0] = BigInt::one();
        e
    }

    /// The rational integer `n` embedded in `O_K`.
    pub fn rational(d: usize, n: impl Into<BigInt>) -> Self {
        let mut e = Self::zero(d);
        e.coords[0] = n.into();
        e
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// L1 norm of the coordinates.
    pub fn geom_norm(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).sum()
    }

    /// Coordinates as machine integers, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| c.to_i64()).collect()
    }
}

impl fmt::Display for AlgebraicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl NumberField {
    /// Builds `Q(θ)` from the coefficients of its minimal polynomial
    /// (constant term first). Degrees up to 4 are checked for rational roots
    /// and quadratic factors; higher degrees need
    /// [`NumberField::new_assuming_irreducible`].
    pub fn new(coeffs: &[BigInt]) -> Result<Field> {
        let d = validate_monic(coeffs)?;
        if d > 4 {
            return Err(Error::IrreducibilityUnchecked { degree: d });
        }
        check_irreducible(coeffs)?;
        Ok(Arc::new(Self::build(coeffs)))
    }

    /// Same as [`NumberField::new`] but trusts the caller on irreducibility.
    /// The rational-root test still runs since it is cheap.
    pub fn new_assuming_irreducible(coeffs: &[BigInt]) -> Result<Field> {
        validate_monic(coeffs)?;
        if coeffs.len() - 1 <= 4 {
            check_irreducible(coeffs)?;
        } else {
            check_no_rational_root(coeffs)?;
        }
        Ok(Arc::new(Self::build(coeffs)))
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Field> {
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(&c)
    }

    /// Parses `"1,0,1"` (constant term first) into `x^2 + 1`.
    pub fn parse(spec: &str) -> Result<Field> {
        Self::new(&parse_coeffs(spec)?)
    }

    /// [`NumberField::parse`] without the irreducibility test.
    pub fn parse_assuming_irreducible(spec: &str) -> Result<Field> {
        Self::new_assuming_irreducible(&parse_coeffs(spec)?)
    }

    fn build(coeffs: &[BigInt]) -> Self {
        let d = coeffs.len() - 1;
        // powers θ^0 .. θ^{2d-2} in the power basis
        let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(2 * d);
        for n in 0..(2 * d).saturating_sub(1).max(1) {
            let v = if n < d {
                let mut v = vec![BigInt::zero(); d];
                v[n] = BigInt::one();
                v
            } else {
                // θ^n = θ · θ^{n-1}, reduce θ^d = -Σ a_i θ^i
                let prev = &powers[n - 1];
                let mut v = vec![BigInt::zero(); d];
                for i in 0..d - 1 {
                    v[i + 1] = prev[i].clone();
                }
                let top = &prev[d - 1];
                if !top.is_zero() {
                    for i in 0..d {
                        v[i] -= top * &coeffs[i];
                    }
                }
                v
            };
            powers.push(v);
        }
        let mut mult_table = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                mult_table.extend(powers[i + j].iter().cloned());
            }
        }
        let mut field = NumberField { min_poly: coeffs.to_vec(), mult_table, discriminant: BigInt::zero() };
        // disc(f) = (-1)^{d(d-1)/2} N(f'(θ)) for monic f
        let mut deriv = vec![BigInt::zero(); d];
        for i in 1..=d {
            deriv[i - 1] = &coeffs[i] * BigInt::from(i as u64);
        }
        let n = field.elem_norm(&AlgebraicInt::new(deriv));
        field.discriminant = if (d * (d - 1) / 2) % 2 == 1 { -n } else { n };
        field
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// `c^{ij}_m`: coordinate `m` of `θ^i · θ^j`.
    pub fn mult_coeff(&self, i: usize, j: usize, m: usize) -> &BigInt {
        let d = self.degree();
        &self.mult_table[(i * d + j) * d + m]
    }

    /// `d · max |c^{ij}_m|`, the explicit constant in `‖ab‖ ≤ C ‖a‖ ‖b‖`.
    pub fn product_constant(&self) -> BigInt {
        let max = self.mult_table.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
        max * BigInt::from(self.degree())
    }

    /// Comma-separated coefficient string, constant term first.
    pub fn spec_string(&self) -> String {
        self.min_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn zero(&self) -> AlgebraicInt {
        AlgebraicInt::zero(self.degree())
    }

    pub fn one(&self) -> AlgebraicInt {
        AlgebraicInt::one(self.degree())
    }

    /// The generator `θ` (equal to `-a_0` when `d = 1`).
    pub fn theta(&self) -> AlgebraicInt {
        let d = self.degree();
        if d == 1 {
            return AlgebraicInt::rational(1, -self.min_poly[0].clone());
        }
        let mut e = AlgebraicInt::zero(d);
        e.coords[1] = BigInt::one();
        e
    }

    pub fn element(&self, coords: &[i64]) -> Result<AlgebraicInt> {
        self.check(&AlgebraicInt::from_i64(coords))?;
        Ok(AlgebraicInt::from_i64(coords))
    }

    fn check(&self, a: &AlgebraicInt) -> Result<()> {
        if a.dim() == self.degree() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn arith(&self, a: &AlgebraicInt, b: &AlgebraicInt, op: ArithOp) -> Result<AlgebraicInt> {
        match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Neg => {
                self.check(a)?;
                Ok(self.neg(a))
            }
        }
    }

    pub fn add(&self, a: &AlgebraicInt, b: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check(a)?;
        self.check(b)?;
        Ok(AlgebraicInt::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect()))
    }

    pub fn sub(&self, a: &AlgebraicInt, b: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check(a)?;
        self.check(b)?;
        Ok(AlgebraicInt::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect()))
    }

    pub fn neg(&self, a: &AlgebraicInt) -> AlgebraicInt {
        AlgebraicInt::new(a.coords.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, a: &AlgebraicInt, b: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check(a)?;
        self.check(b)?;
        let d = self.degree();
        let mut out = vec![BigInt::zero(); d];
        for (i, ai) in a.coords.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coords.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let p = ai * bj;
                for (m, o) in out.iter_mut().enumerate() {
                    let c = self.mult_coeff(i, j, m);
                    if !c.is_zero() {
                        *o += &p * c;
                    }
                }
            }
        }
        Ok(AlgebraicInt::new(out))
    }

    /// Machine-integer multiplication for hot loops; `None` on overflow.
    pub fn mul_i64(&self, a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
        let d = self.degree();
        let mut out = vec![0i128; d];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                if b[j] == 0 {
                    continue;
                }
                let p = a[i] as i128 * b[j] as i128;
                for (m, o) in out.iter_mut().enumerate() {
                    let c = self.mult_coeff(i, j, m).to_i64()? as i128;
                    *o = o.checked_add(p.checked_mul(c)?)?;
                }
            }
        }
        out.into_iter().map(|v| i64::try_from(v).ok()).collect()
    }

    pub fn pow(&self, a: &AlgebraicInt, mut e: u32) -> Result<AlgebraicInt> {
        self.check(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `a`: column `j` holds the coordinates of `a θ^j`.
    pub fn mult_matrix(&self, a: &AlgebraicInt) -> Vec<Vec<BigInt>> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = a.clone();
        let theta = self.theta();
        for j in 0..d {
            cols.push(cur.coords.clone());
            if j + 1 < d {
                cur = self.mul(&cur, &theta).expect("same field");
            }
        }
        cols
    }

    /// `N_{K/Q}(a) = det(m_a)`; may be negative.
    pub fn elem_norm(&self, a: &AlgebraicInt) -> BigInt {
        if a.dim() != self.degree() {
            return BigInt::zero();
        }
        determinant(self.mult_matrix(a))
    }

    /// `elem_norm` on machine integers; `None` if an intermediate overflows.
    pub fn elem_norm_i64(&self, a: &[i64]) -> Option<i128> {
        let d = self.degree();
        if d == 1 {
            return Some(a[0] as i128);
        }
        let mut theta = vec![0i64; d];
        theta[1] = 1;
        let mut cols: Vec<Vec<i64>> = Vec::with_capacity(d);
        cols.push(a.to_vec());
        for j in 1..d {
            let next = self.mul_i64(&cols[j - 1], &theta)?;
            cols.push(next);
        }
        // Bareiss on rows
        let mut m: Vec<Vec<i128>> = (0..d).map(|r| (0..d).map(|c| cols[c][r] as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..d - 1 {
            if m[k][k] == 0 {
                let Some(r) = (k + 1..d).find(|&r| m[r][k] != 0) else { return Some(0) };
                m.swap(k, r);
                sign = -sign;
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let v = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                    m[i][j] = v / prev;
                }
            }
            prev = m[k][k];
        }
        Some(sign * m[d - 1][d - 1])
    }

    /// Evaluates an integer polynomial (constant term first) at `θ`.
    pub fn eval_poly(&self, poly: &[BigInt]) -> AlgebraicInt {
        let theta = self.theta();
        let mut acc = self.zero();
        for c in poly.iter().rev() {
            acc = self.mul(&acc, &theta).expect("same field");
            acc.coords[0] += c;
        }
        acc
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix given by columns.
pub fn determinant(cols: Vec<Vec<BigInt>>) -> BigInt {
    let n = cols.len();
    if n == 0 {
        return BigInt::one();
    }
    // work row-major
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn validate_monic(coeffs: &[BigInt]) -> Result<usize> {
    if coeffs.len() < 2 {
        return Err(Error::DegreeZero);
    }
    if !coeffs.last().unwrap().is_one() {
        return Err(Error::NotMonic);
    }
    Ok(coeffs.len() - 1)
}

pub(crate) fn parse_coeffs(spec: &str) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    for tok in spec.split(',') {
        let t = tok.trim();
        out.push(t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient {t:?} in field spec {spec:?}")))?);
    }
    // trailing zero coefficients would hide the real leading term
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    Ok(out)
}

fn poly_to_string(p: &[BigInt]) -> String {
    p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn check_no_rational_root(coeffs: &[BigInt]) -> Result<()> {
    let d = coeffs.len() - 1;
    if d == 1 {
        return Ok(());
    }
    let a0 = &coeffs[0];
    if a0.is_zero() {
        return Err(Error::ReducibleDetected { factor: "0,1".into() });
    }
    for r in integer_divisors(a0)? {
        for cand in [r.clone(), -r] {
            if eval_int(coeffs, &cand).is_zero() {
                return Err(Error::ReducibleDetected { factor: poly_to_string(&[-cand, BigInt::one()]) });
            }
        }
    }
    Ok(())
}

fn check_irreducible(coeffs: &[BigInt]) -> Result<()> {
    check_no_rational_root(coeffs)?;
    let d = coeffs.len() - 1;
    if d == 4 {
        // a quadratic factor x^2 + b x + c has |b| ≤ 2R with R the Cauchy root bound
        let r: BigInt = BigInt::one() + coeffs.iter().map(|c| c.abs()).max().unwrap();
        let bound = (BigInt::from(2) * r).to_i64().ok_or(Error::IrreducibilityUnchecked { degree: d })?;
        if bound > 2_000_000 {
            return Err(Error::IrreducibilityUnchecked { degree: d });
        }
        for c0 in integer_divisors(&coeffs[0])? {
            for c in [c0.clone(), -c0] {
                for b in -bound..=bound {
                    let g = [c.clone(), BigInt::from(b), BigInt::one()];
                    if divides_monic(&g, coeffs) {
                        return Err(Error::ReducibleDetected { factor: poly_to_string(&g) });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Does the monic `g` divide `f` over Z?
fn divides_monic(g: &[BigInt], f: &[BigInt]) -> bool {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = r.len() - dg;
        for i in 0..dg {
            r[shift + i] -= &lead * &g[i];
        }
    }
    r.iter().all(Zero::is_zero)
}

fn integer_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let m = n.abs().to_u64().ok_or_else(|| Error::TooLarge(n.to_string()))?;
    if m == 0 {
        return Ok(vec![]);
    }
    let mut divs = vec![1u64];
    for (p, e) in intfactor::factor_u64(m) {
        let cur = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(cur.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    Ok(divs.into_iter().map(BigInt::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> Field {
        NumberField::from_i64(&[1, 0, 1]).unwrap()
    }

    #[test]
    fn gaussian_field_basics() {
        let k = gauss();
        assert_eq!(k.degree(), 2);
        assert_eq!(*k.discriminant(), BigInt::from(-4));
        let i = k.element(&[0, 1]).unwrap();
        assert_eq!(k.mul(&i, &i).unwrap(), AlgebraicInt::from_i64(&[-1, 0]));
        let a = k.element(&[1, 1]).unwrap();
        let b = k.element(&[1, -1]).unwrap();
        assert_eq!(k.mul(&a, &b).unwrap(), AlgebraicInt::from_i64(&[2, 0]));
        assert_eq!(k.elem_norm(&AlgebraicInt::from_i64(&[8, -6])), BigInt::from(100));
    }

    #[test]
    fn rational_field() {
        let q = NumberField::from_i64(&[0, 1]).unwrap();
        assert_eq!(q.degree(), 1);
        assert_eq!(*q.discriminant(), BigInt::one());
        let a = q.element(&[-7]).unwrap();
        assert_eq!(q.elem_norm(&a), BigInt::from(-7));
        assert_eq!(q.mul(&a, &a).unwrap(), AlgebraicInt::from_i64(&[49]));
    }

    #[test]
    fn real_quadratic() {
        let k = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        assert_eq!(*k.discriminant(), BigInt::from(8));
        let a = k.element(&[1, 1]).unwrap();
        assert_eq!(k.mul(&a, &a).unwrap(), AlgebraicInt::from_i64(&[3, 2]));
        assert_eq!(k.elem_norm(&a), BigInt::from(-1));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(NumberField::from_i64(&[5]).unwrap_err(), Error::DegreeZero);
        assert_eq!(NumberField::from_i64(&[1, 0, 2]).unwrap_err(), Error::NotMonic);
        assert!(matches!(NumberField::from_i64(&[-1, 0, 1]), Err(Error::ReducibleDetected { .. })));
        assert!(matches!(NumberField::from_i64(&[0, 0, 1]), Err(Error::ReducibleDetected { .. })));
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2) has no rational root
        assert!(matches!(NumberField::from_i64(&[4, 0, 0, 0, 1]), Err(Error::ReducibleDetected { .. })));
        // x^4 + 1 is irreducible although it splits modulo every prime
        assert!(NumberField::from_i64(&[1, 0, 0, 0, 1]).is_ok());
        assert!(matches!(NumberField::from_i64(&[-2, 0, 0, 0, 0, 1]), Err(Error::IrreducibilityUnchecked { degree: 5 })));
        let c: Vec<BigInt> = [-2, 0, 0, 0, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert!(NumberField::new_assuming_irreducible(&c).is_ok());
    }

    #[test]
    fn parse_spec() {
        let k = NumberField::parse("1, 0, 1").unwrap();
        assert_eq!(k.spec_string(), "1,0,1");
        assert!(NumberField::parse("1,x,1").is_err());
    }

    #[test]
    fn field_mismatch() {
        let k = gauss();
        let a = AlgebraicInt::from_i64(&[1, 2, 3]);
        assert_eq!(k.mul(&a, &a).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn mult_table_matches_repeated_reduction() {
        let k = NumberField::from_i64(&[1, -1, 0, 1]).unwrap(); // x^3 - x + 1
        let theta = k.theta();
        for i in 0..3 {
            for j in 0..3 {
                let p = k.pow(&theta, (i + j) as u32).unwrap();
                for m in 0..3 {
                    assert_eq!(k.mult_coeff(i, j, m), &p.coords()[m]);
                }
            }
        }
    }

    #[test]
    fn mul_i64_agrees() {
        let k = NumberField::from_i64(&[1, -1, 0, 1]).unwrap();
        let a = [3, -2, 5];
        let b = [-1, 4, 2];
        let big = k.mul(&AlgebraicInt::from_i64(&a), &AlgebraicInt::from_i64(&b)).unwrap();
        assert_eq!(k.mul_i64(&a, &b).unwrap(), big.to_i64().unwrap());
        for v in [[3, -2, 5], [0, 0, 0], [1, 0, 0], [0, 7, -1]] {
            let n = k.elem_norm(&AlgebraicInt::from_i64(&v));
            assert_eq!(BigInt::from(k.elem_norm_i64(&v).unwrap()), n);
        }
    }
}
