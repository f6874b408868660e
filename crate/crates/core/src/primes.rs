//! Prime ideals of `Z[θ]` via Kummer-Dedekind, ordered by norm, and the
//! Möbius and k-free indicators on ideals.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{AlgebraicInt, Field};
use crate::ideal::IdealHNF;
use crate::intfactor;
use crate::poly::{Fp, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub ideal: IdealHNF,
    /// The rational prime below.
    pub over: u64,
    pub resid_degree: u32,
    pub ramification: u32,
    /// `g_i mod p`, the Kummer-Dedekind factor this prime comes from.
    pub residue_poly: Vec<u64>,
}

impl PrimeIdeal {
    /// `N(𝔭) = p^f`.
    pub fn norm(&self) -> u64 {
        self.over.pow(self.resid_degree)
    }
}

fn reduce_poly(f: &[BigInt], p: u64) -> Poly {
    let pb = BigInt::from(p);
    f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect()
}

fn lift(g: &[u64]) -> Vec<BigInt> {
    g.iter().map(|&c| BigInt::from(c)).collect()
}

fn mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Dedekind criterion: is `Z[θ]` maximal at the prime `p`?
pub fn dedekind_check(field: &Field, p: u64) -> bool {
    let disc = field.discriminant();
    if !(disc % BigInt::from(p)).is_zero() {
        return true;
    }
    let f = field.min_poly();
    let fp = Fp::new(p);
    let fac = fp.factor(&reduce_poly(f, p));
    if fac.iter().all(|(_, e)| *e == 1) {
        return true;
    }
    // g = ∏ g_i, h = ∏ g_i^{e_i - 1}, F = (g h - f) / p
    let mut g = vec![BigInt::from(1)];
    let mut h = vec![BigInt::from(1)];
    let mut repeated: Poly = vec![1];
    for (gi, e) in &fac {
        g = mul_int(&g, &lift(gi));
        for _ in 1..*e {
            h = mul_int(&h, &lift(gi));
        }
        if *e > 1 {
            repeated = fp.mul_poly(&repeated, gi);
        }
    }
    let mut gh = mul_int(&g, &h);
    gh.resize(f.len().max(gh.len()), BigInt::zero());
    let pb = BigInt::from(p);
    let big_f: Vec<BigInt> = gh.iter().zip(f.iter().chain(std::iter::repeat(&BigInt::zero()))).map(|(x, y)| (x - y) / &pb).collect();
    let fbar = fp.trim(reduce_poly(&big_f, p));
    // gcd(F̄, ḡ, h̄) = gcd(F̄, ∏_{e_i > 1} g_i)
    let t = fp.gcd(&fbar, &repeated);
    Fp::deg(&t) <= 0
}

/// `(f_i, e_i)` for every prime above `p`, without building ideals.
pub fn splitting_type(field: &Field, p: u64) -> Result<Vec<(u32, u32)>> {
    if !dedekind_check(field, p) {
        return Err(Error::NonMonogenicAtP { p });
    }
    let fp = Fp::new(p);
    Ok(fp.factor(&reduce_poly(field.min_poly(), p)).into_iter().map(|(g, e)| ((g.len() - 1) as u32, e)).collect())
}

/// The primes above `p`, `𝔭_i = (p, g_i(θ))`.
pub fn factor_rational_prime(field: &Field, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !dedekind_check(field, p) {
        return Err(Error::NonMonogenicAtP { p });
    }
    let fp = Fp::new(p);
    let d = field.degree();
    let mut out = Vec::new();
    for (g, e) in fp.factor(&reduce_poly(field.min_poly(), p)) {
        let gt = field.eval_poly(&lift(&g));
        let ideal = IdealHNF::from_generators(field, &[AlgebraicInt::rational(d, p), gt])?;
        out.push(PrimeIdeal { ideal, over: p, resid_degree: (g.len() - 1) as u32, ramification: e, residue_poly: g });
    }
    out.sort_by(|a, b| a.ideal.cmp(&b.ideal));
    Ok(out)
}

/// Memoized source of prime ideals for one field. Construction verifies the
/// Dedekind criterion at every prime dividing the discriminant, so a field
/// outside the monogenic contract is refused before any result is produced.
#[derive(Debug)]
pub struct PrimeStream {
    field: Field,
    memo: RwLock<HashMap<u64, Arc<Vec<PrimeIdeal>>>>,
}

impl PrimeStream {
    pub fn new(field: &Field) -> Result<Self> {
        let disc = field.discriminant().abs();
        let disc = disc.to_u64().ok_or_else(|| Error::TooLarge(disc.to_string()))?;
        for (p, _) in intfactor::factor_u64(disc) {
            if !dedekind_check(field, p) {
                return Err(Error::NonMonogenicAtP { p });
            }
        }
        Ok(PrimeStream { field: field.clone(), memo: RwLock::new(HashMap::new()) })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn above(&self, p: u64) -> Result<Arc<Vec<PrimeIdeal>>> {
        if let Some(v) = self.memo.read().unwrap().get(&p) {
            return Ok(v.clone());
        }
        let v = Arc::new(factor_rational_prime(&self.field, p)?);
        // identical values from racing writers, so last write wins harmlessly
        self.memo.write().unwrap().insert(p, v.clone());
        Ok(v)
    }

    /// All prime ideals of norm `≤ limit`, sorted by norm then basis.
    pub fn primes_by_norm(&self, limit: u64) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        for p in intfactor::primes_up_to(limit) {
            for q in self.above(p)?.iter() {
                if q.norm() <= limit {
                    out.push(q.clone());
                }
            }
        }
        out.sort_by(|a, b| a.ideal.cmp(&b.ideal));
        Ok(out)
    }

    /// Norms `N(𝔭) ≤ limit` (with multiplicity, ascending) without building ideals.
    pub fn prime_norms(&self, limit: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for p in intfactor::primes_up_to(limit) {
            for (f, _) in splitting_type(&self.field, p)? {
                if let Some(q) = p.checked_pow(f) {
                    if q <= limit {
                        out.push(q);
                    }
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `v_𝔭(𝔞)` for every prime `𝔭 ⊇ 𝔞`, found by divisibility tests.
    pub fn factor_ideal(&self, a: &IdealHNF) -> Result<Vec<(PrimeIdeal, u32)>> {
        let n = a.norm_u64().ok_or_else(|| Error::TooLarge(a.norm().to_string()))?;
        let mut out = Vec::new();
        for (p, total) in intfactor::factor_u64(n) {
            for q in self.above(p)?.iter() {
                let mut v = 0u32;
                let mut pw = q.ideal.clone();
                while v * q.resid_degree < total && pw.divides(a)? {
                    v += 1;
                    pw = pw.product(&q.ideal)?;
                }
                if v > 0 {
                    out.push((q.clone(), v));
                }
            }
        }
        Ok(out)
    }

    /// `μ(𝔞)` for `k = 1`, the k-free indicator `μ^(k)(𝔞)` for `k ≥ 2`.
    pub fn mobius_mu_k(&self, a: &IdealHNF, k: u32) -> Result<i32> {
        if k == 0 {
            return Err(Error::BadExponent { k, min: 1 });
        }
        let fac = self.factor_ideal(a)?;
        if k == 1 {
            if fac.iter().any(|(_, v)| *v >= 2) {
                return Ok(0);
            }
            return Ok(if fac.len() % 2 == 0 { 1 } else { -1 });
        }
        Ok(i32::from(fac.iter().all(|(_, v)| *v < k)))
    }

    /// Every nonzero ideal of norm `≤ limit` together with its Möbius value.
    pub fn ideals_up_to(&self, limit: u64) -> Result<Vec<(IdealHNF, i32)>> {
        let primes = self.primes_by_norm(limit)?;
        let mut out = vec![(IdealHNF::unit(&self.field), 1)];
        let mut frontier: Vec<(IdealHNF, i32, u64, usize)> = vec![(IdealHNF::unit(&self.field), 1, 1, 0)];
        while let Some((id, mu, n, start)) = frontier.pop() {
            for (i, q) in primes.iter().enumerate().skip(start) {
                let qn = q.norm();
                if n * qn > limit {
                    break;
                }
                let mut cur = id.clone();
                let mut cur_n = n;
                let mut e = 0;
                while cur_n * qn <= limit {
                    cur = cur.product(&q.ideal)?;
                    cur_n *= qn;
                    e += 1;
                    let m = if e == 1 { -mu } else { 0 };
                    out.push((cur.clone(), m));
                    frontier.push((cur.clone(), m, cur_n, i + 1));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// `Σ_{𝔟^k ⊇ 𝔞} μ(𝔟)` over an explicit list of `(𝔟^k, μ(𝔟))`.
    pub fn mobius_sum_crosscheck(a: &IdealHNF, powers: &[(IdealHNF, i32)]) -> Result<i32> {
        let mut s = 0;
        for (bk, mu) in powers {
            if *mu != 0 && bk.norm() <= a.norm() && bk.divides(a)? {
                s += mu;
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;

    fn gauss() -> Field {
        NumberField::from_i64(&[1, 0, 1]).unwrap()
    }

    fn el(k: &Field, c: &[i64]) -> AlgebraicInt {
        k.element(c).unwrap()
    }

    #[test]
    fn dedekind() {
        let k = gauss();
        assert!(dedekind_check(&k, 2));
        let q = NumberField::from_i64(&[0, 1]).unwrap();
        assert!(dedekind_check(&q, 2) && dedekind_check(&q, 7));
        let r5 = NumberField::from_i64(&[-5, 0, 1]).unwrap();
        assert!(!dedekind_check(&r5, 2));
        assert!(dedekind_check(&r5, 5));
        assert_eq!(factor_rational_prime(&r5, 2).unwrap_err(), Error::NonMonogenicAtP { p: 2 });
        assert_eq!(PrimeStream::new(&r5).unwrap_err(), Error::NonMonogenicAtP { p: 2 });
        // x^2 + 3: Z[√-3] has index 2 in the Eisenstein integers
        let e = NumberField::from_i64(&[3, 0, 1]).unwrap();
        assert!(!dedekind_check(&e, 2));
        // x^2 + x + 1 is the maximal order
        let e = NumberField::from_i64(&[1, 1, 1]).unwrap();
        assert!(PrimeStream::new(&e).is_ok());
    }

    #[test]
    fn gaussian_primes() {
        let k = gauss();
        let f5 = factor_rational_prime(&k, 5).unwrap();
        assert_eq!(f5.iter().map(|p| p.norm()).collect::<Vec<_>>(), vec![5, 5]);
        let f3 = factor_rational_prime(&k, 3).unwrap();
        assert_eq!((f3.len(), f3[0].norm()), (1, 9));
        let f2 = factor_rational_prime(&k, 2).unwrap();
        assert_eq!((f2.len(), f2[0].norm(), f2[0].ramification), (1, 2, 2));
        assert_eq!(f2[0].ideal, IdealHNF::principal(&k, &el(&k, &[1, 1])).unwrap());
        let s = PrimeStream::new(&k).unwrap();
        let norms: Vec<u64> = s.primes_by_norm(13).unwrap().iter().map(|p| p.norm()).collect();
        assert_eq!(norms, vec![2, 5, 5, 9, 13, 13]);
        assert_eq!(s.prime_norms(13).unwrap(), norms);
    }

    #[test]
    fn other_fields() {
        let q = NumberField::from_i64(&[0, 1]).unwrap();
        let s = PrimeStream::new(&q).unwrap();
        let ps = s.primes_by_norm(10).unwrap();
        assert_eq!(ps.iter().map(|p| p.norm()).collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        assert_eq!(ps[1].ideal, IdealHNF::rational(&q, 3).unwrap());
        let r2 = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        let s = PrimeStream::new(&r2).unwrap();
        assert_eq!(s.primes_by_norm(7).unwrap().iter().map(|p| p.norm()).collect::<Vec<_>>(), vec![2, 7, 7]);
    }

    #[test]
    fn products_recover_p() {
        for coeffs in [vec![1, 0, 1], vec![-2, 0, 1], vec![1, -1, 0, 1], vec![1, 0, 0, 0, 1]] {
            let k = NumberField::from_i64(&coeffs).unwrap();
            let s = PrimeStream::new(&k).unwrap();
            for p in intfactor::primes_up_to(60) {
                let ps = s.above(p).unwrap();
                let mut acc = IdealHNF::unit(&k);
                let mut ef = 0;
                for q in ps.iter() {
                    acc = acc.product(&q.ideal.power(q.ramification).unwrap()).unwrap();
                    ef += q.ramification * q.resid_degree;
                    assert_eq!(q.ideal.norm(), &BigInt::from(q.norm()));
                    assert_eq!(q.ideal.power(3).unwrap().norm(), &BigInt::from(q.norm().pow(3)));
                }
                assert_eq!(acc, IdealHNF::rational(&k, p).unwrap(), "field {coeffs:?}, p = {p}");
                assert_eq!(ef as usize, k.degree());
            }
        }
    }

    #[test]
    fn residue_rings_are_fields() {
        let k = NumberField::from_i64(&[1, -1, 0, 1]).unwrap();
        let s = PrimeStream::new(&k).unwrap();
        for q in s.primes_by_norm(50).unwrap() {
            let rs: Vec<_> = q.ideal.residues().collect();
            for a in rs.iter().skip(1) {
                for b in rs.iter().skip(1) {
                    assert!(!q.ideal.contains(&k.mul(a, b).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn mobius_values() {
        let q = NumberField::from_i64(&[0, 1]).unwrap();
        let s = PrimeStream::new(&q).unwrap();
        let id = |n: i64| IdealHNF::rational(&q, n).unwrap();
        assert_eq!(s.mobius_mu_k(&id(12), 2).unwrap(), 0);
        assert_eq!(s.mobius_mu_k(&id(10), 2).unwrap(), 1);
        assert_eq!(s.mobius_mu_k(&id(30), 1).unwrap(), -1);
        let k = gauss();
        let s = PrimeStream::new(&k).unwrap();
        let pr = |c: &[i64]| IdealHNF::principal(&k, &el(&k, c)).unwrap();
        assert_eq!(s.mobius_mu_k(&pr(&[2, 0]), 1).unwrap(), 0);
        assert_eq!(s.mobius_mu_k(&pr(&[5, 0]), 1).unwrap(), 1);
        assert_eq!(s.mobius_mu_k(&pr(&[8, -6]), 2).unwrap(), 0);
        assert_eq!(s.mobius_mu_k(&pr(&[1, 1]), 2).unwrap(), 1);
    }

    #[test]
    fn ideal_enumeration_counts() {
        // ideals of Z[i] with norm ≤ 25 counted by Σ_{n ≤ 25} r_2(n)/4
        let k = gauss();
        let s = PrimeStream::new(&k).unwrap();
        let ids = s.ideals_up_to(25).unwrap();
        let mut expect = 0;
        for n in 1..=25i64 {
            let mut r = 0;
            for a in -5i64..=5 {
                for b in -5i64..=5 {
                    if a * a + b * b == n {
                        r += 1;
                    }
                }
            }
            expect += r / 4;
        }
        assert_eq!(ids.len(), expect);
        let set: std::collections::HashSet<_> = ids.iter().map(|x| x.0.clone()).collect();
        assert_eq!(set.len(), ids.len());
    }
}
