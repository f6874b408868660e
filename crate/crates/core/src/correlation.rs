//! Correlation functions of the k-free indicator: exact ball averages from a
//! sieve grid, and the Euler products they converge to, with rigorous tails.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{AlgebraicInt, Field};
use crate::ideal::IdealHNF;
use crate::literal::{format_element, format_ideal, to_i64_coords};
use crate::primes::{PrimeIdeal, PrimeStream};
use crate::sieve::SieveGrid;
use crate::truncated::{fmt_sig, power_tail, Compensated, TruncatedValue, ROUNDING_PER_FACTOR};

/// A pattern `a, a + a_1, …, a + a_r` (with `a_0 = 0` implicit), optionally
/// restricted to `a ∈ 𝔟`. Repeated shifts are allowed.
#[derive(Debug, Clone)]
pub struct CorrelationSpec {
    pub k: u32,
    pub shifts: Vec<AlgebraicInt>,
    pub modulus: Option<IdealHNF>,
}

impl CorrelationSpec {
    pub fn new(k: u32, shifts: Vec<AlgebraicInt>) -> Self {
        CorrelationSpec { k, shifts, modulus: None }
    }

    pub fn with_modulus(mut self, b: IdealHNF) -> Self {
        self.modulus = Some(b);
        self
    }

    /// `0, a_1, …, a_r`.
    pub fn all_shifts(&self, d: usize) -> Vec<AlgebraicInt> {
        std::iter::once(AlgebraicInt::zero(d)).chain(self.shifts.iter().cloned()).collect()
    }
}

fn distinct(shifts: &[AlgebraicInt]) -> Vec<AlgebraicInt> {
    let mut v = shifts.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Number of distinct classes of `shifts` modulo `pk`.
pub fn residue_d(pk: &IdealHNF, shifts: &[AlgebraicInt]) -> Result<u64> {
    let mut reps = shifts.iter().map(|a| pk.reduce_mod(a)).collect::<Result<Vec<_>>>()?;
    reps.sort();
    reps.dedup();
    Ok(reps.len() as u64)
}

/// Classes of `shifts` modulo `pk` whose representatives lie in `gcd(pk, b)`.
pub fn residue_d_b(pk: &IdealHNF, b: &IdealHNF, shifts: &[AlgebraicInt]) -> Result<u64> {
    let g = pk.sum_gcd(b)?;
    let mut reps = Vec::new();
    for a in shifts {
        let r = pk.reduce_mod(a)?;
        if g.contains(&r)? {
            reps.push(r);
        }
    }
    reps.sort();
    reps.dedup();
    Ok(reps.len() as u64)
}

/// 1 iff `b ≡ -a_i (mod 𝔫_i)` is solvable for all `i`, decided pairwise.
pub fn e_symbol(ideals: &[IdealHNF], shifts: &[AlgebraicInt]) -> Result<u8> {
    if ideals.len() != shifts.len() {
        return Err(Error::Parse("e_symbol needs one shift per ideal".into()));
    }
    for i in 0..ideals.len() {
        for j in i + 1..ideals.len() {
            let g = ideals[i].sum_gcd(&ideals[j])?;
            let diff = ideals[i].field().sub(&shifts[i], &shifts[j])?;
            if !g.contains(&diff)? {
                return Ok(0);
            }
        }
    }
    Ok(1)
}

/// A prime with its k-th power cached.
#[derive(Debug, Clone)]
pub struct LocalPrime {
    pub prime: PrimeIdeal,
    pub pk: IdealHNF,
    /// `N(𝔭^k)`.
    pub q: u128,
}

#[derive(Debug, Default)]
struct LocalCache {
    limit: u64,
    primes: Vec<Arc<LocalPrime>>,
}

/// An exactly evaluated Euler factor `(q − n_g D) / q`.
#[derive(Debug, Clone, Serialize)]
pub struct ExceptionalFactor {
    pub prime: String,
    pub q: u128,
    pub d: u64,
    pub gcd_norm: u128,
}

#[derive(Debug, Clone)]
pub struct AnalyticResult {
    pub value: TruncatedValue,
    pub witness: Option<PrimeIdeal>,
    pub distinct_shifts: usize,
    pub exceptional: Vec<(Arc<LocalPrime>, u64, u128)>,
}

/// Shared state for Euler products over one field and exponent `k`: prime
/// norms up to the cutoff, suffix log-sums of generic factors per pattern
/// size, and the small primes with their `k`-th powers.
#[derive(Debug)]
pub struct EulerContext {
    stream: Arc<PrimeStream>,
    k: u32,
    cutoff: u64,
    norms: Vec<u64>,
    suffix: RwLock<HashMap<u64, Arc<Vec<f64>>>>,
    local: RwLock<LocalCache>,
}

impl EulerContext {
    pub fn new(stream: Arc<PrimeStream>, k: u32, cutoff: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadExponent { k, min: 2 });
        }
        let norms = stream.prime_norms(cutoff)?;
        Ok(EulerContext { stream, k, cutoff, norms, suffix: RwLock::new(HashMap::new()), local: RwLock::new(LocalCache::default()) })
    }

    pub fn field(&self) -> &Field {
        self.stream.field()
    }

    pub fn stream(&self) -> &Arc<PrimeStream> {
        &self.stream
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    /// Prime norms `≤ cutoff`, ascending with multiplicity.
    pub fn norms(&self) -> &[u64] {
        &self.norms
    }

    fn qf(&self, n: u64) -> f64 {
        (n as f64).powi(self.k as i32)
    }

    /// All primes of norm `≤ limit` with their `k`-th powers.
    pub fn local_primes(&self, limit: u64) -> Result<Vec<Arc<LocalPrime>>> {
        {
            let c = self.local.read().unwrap();
            if c.limit >= limit {
                return Ok(c.primes.iter().take_while(|p| p.prime.norm() <= limit).cloned().collect());
            }
        }
        let new_limit = limit.max(64).max(self.local.read().unwrap().limit * 2);
        let old: HashMap<IdealHNF, Arc<LocalPrime>> =
            self.local.read().unwrap().primes.iter().map(|p| (p.prime.ideal.clone(), p.clone())).collect();
        let mut primes = Vec::new();
        for p in self.stream.primes_by_norm(new_limit)? {
            if let Some(lp) = old.get(&p.ideal) {
                primes.push(lp.clone());
                continue;
            }
            let pk = p.ideal.power(self.k)?;
            let q = pk.norm().to_u128().ok_or_else(|| Error::TooLarge(pk.norm().to_string()))?;
            primes.push(Arc::new(LocalPrime { prime: p, pk, q }));
        }
        let mut c = self.local.write().unwrap();
        if c.limit < new_limit {
            *c = LocalCache { limit: new_limit, primes };
        }
        Ok(c.primes.iter().take_while(|p| p.prime.norm() <= limit).cloned().collect())
    }

    pub(crate) fn local_prime_for(&self, p: &PrimeIdeal) -> Result<Arc<LocalPrime>> {
        let pk = p.ideal.power(self.k)?;
        let q = pk.norm().to_u128().ok_or_else(|| Error::TooLarge(pk.norm().to_string()))?;
        Ok(Arc::new(LocalPrime { prime: p.clone(), pk, q }))
    }

    /// `suffix[i] = Σ_{j ≥ i} ln(1 − m / N(𝔭_j)^k)` over the sorted norms,
    /// summed from the small end. Entries whose factor is not positive are NaN.
    fn suffix_sums(&self, m: u64) -> Arc<Vec<f64>> {
        if let Some(v) = self.suffix.read().unwrap().get(&m) {
            return v.clone();
        }
        let n = self.norms.len();
        let mut out = vec![0.0; n + 1];
        let mut acc = Compensated::new();
        for i in (0..n).rev() {
            let q = self.qf(self.norms[i]);
            if q <= m as f64 {
                out[i] = f64::NAN;
                continue;
            }
            acc.add((-(m as f64) / q).ln_1p());
            out[i] = acc.value();
        }
        let v = Arc::new(out);
        self.suffix.write().unwrap().insert(m, v.clone());
        v
    }

    /// `Π (1 − m/N(𝔭)^k)` over all `N(𝔭) ≤ cutoff` with `N(𝔭)^k > m`; the
    /// tail covers every omitted prime, so it needs `2^k > m`.
    pub fn generic_product(&self, m: u64) -> TruncatedValue {
        let start = self.norms.partition_point(|&n| self.qf(n) <= m as f64);
        let s = self.suffix_sums(m);
        let d = self.field().degree() as f64;
        let log = if start < self.norms.len() { s[start] } else { 0.0 };
        let tail = m as f64 * d * power_tail(self.cutoff, self.k);
        let rounding = ROUNDING_PER_FACTOR * (self.norms.len() - start + 1) as f64;
        TruncatedValue::new(log.exp(), tail + rounding, self.cutoff)
    }

    /// `σ_O = Π_𝔭 (1 − 2/N(𝔭^k))`.
    pub fn sigma_o(&self) -> TruncatedValue {
        self.generic_product(2)
    }

    /// `Π_{𝔭} (1 − q^{-s})` over `N(𝔭) ≤ cutoff`, i.e. `1/ζ_K(s)` truncated.
    pub fn inverse_zeta(&self, s: u32) -> TruncatedValue {
        let mut acc = Compensated::new();
        for &n in self.norms.iter().rev() {
            acc.add((-(n as f64).powi(-(s as i32))).ln_1p());
        }
        let d = self.field().degree() as f64;
        let tail = d * power_tail(self.cutoff, s);
        let rounding = ROUNDING_PER_FACTOR * self.norms.len() as f64;
        TruncatedValue::new(acc.value().exp(), tail + rounding, self.cutoff)
    }

    /// The Euler product for the pattern `shifts` (which must contain 0 if the
    /// pattern is a correlation), optionally restricted to `a ∈ 𝔟`.
    pub fn euler_product(&self, shifts: &[AlgebraicInt], modulus: Option<&IdealHNF>) -> Result<AnalyticResult> {
        let field = self.field().clone();
        let d = field.degree();
        let shifts = distinct(shifts);
        let m = shifts.len() as u64;
        // |N(a_i - a_j)| for distinct pairs
        let mut diff_norms: Vec<BigInt> = Vec::new();
        for i in 0..shifts.len() {
            for j in i + 1..shifts.len() {
                diff_norms.push(field.elem_norm(&field.sub(&shifts[i], &shifts[j])?).abs());
            }
        }
        let t_ex = diff_norms.iter().max().cloned().unwrap_or_else(BigInt::zero);
        let threshold = t_ex.max(BigInt::from(m));
        let threshold = threshold.to_u128().ok_or_else(|| Error::TooLarge(threshold.to_string()))?;
        let nbound = integer_root_u128(threshold, self.k);

        let mut exceptional: Vec<Arc<LocalPrime>> =
            self.local_primes(nbound)?.into_iter().filter(|p| p.q <= threshold).collect();
        let mut modulus_primes: Vec<Arc<LocalPrime>> = Vec::new();
        if let Some(b) = modulus {
            for (p, _) in self.stream.factor_ideal(b)? {
                let lp = match exceptional.iter().find(|e| e.prime.ideal == p.ideal) {
                    Some(e) => e.clone(),
                    None => {
                        let lp = self.local_prime_for(&p)?;
                        exceptional.push(lp.clone());
                        lp
                    }
                };
                modulus_primes.push(lp);
            }
        }

        let mut log = Compensated::new();
        let mut used = Vec::with_capacity(exceptional.len());
        for lp in &exceptional {
            let (dval, gnorm) = match modulus {
                None => {
                    let qb = BigInt::from(lp.q);
                    let may_collide = diff_norms.iter().any(|n| n.is_multiple_of(&qb));
                    let dv = if may_collide { residue_d(&lp.pk, &shifts)? } else { m };
                    (dv, 1u128)
                }
                Some(b) => {
                    let g = lp.pk.sum_gcd(b)?;
                    let gn = g.norm().to_u128().expect("divides q");
                    (residue_d_b(&lp.pk, b, &shifts)?, gn)
                }
            };
            let removed = gnorm * dval as u128;
            if removed == lp.q {
                return Ok(AnalyticResult {
                    value: TruncatedValue::zero(self.cutoff),
                    witness: Some(lp.prime.clone()),
                    distinct_shifts: m as usize,
                    exceptional: vec![(lp.clone(), dval, gnorm)],
                });
            }
            log.add((-(removed as f64) / lp.q as f64).ln_1p());
            used.push((lp.clone(), dval, gnorm));
        }

        // generic factors: N(𝔭) ≤ cutoff, q > threshold, 𝔭 ∤ 𝔟
        let start = self.norms.partition_point(|&n| (n as u128).checked_pow(self.k).map_or(false, |q| q <= threshold));
        let suffix = self.suffix_sums(m);
        let mut generic_count = (self.norms.len() - start) as u64;
        if start < self.norms.len() {
            log.add(suffix[start]);
        }
        for lp in &modulus_primes {
            let n = lp.prime.norm();
            if lp.q > threshold && n <= self.cutoff {
                // counted in the generic suffix, replace by the exact factor
                log.add(-(-(m as f64) / lp.q as f64).ln_1p());
                generic_count -= 1;
            }
        }
        let tail = m as f64 * d as f64 * power_tail(self.cutoff, self.k);
        let rounding = ROUNDING_PER_FACTOR * (generic_count + used.len() as u64 + 1) as f64;
        let mut value = log.value().exp();
        if let Some(b) = modulus {
            value /= b.norm().to_f64().unwrap_or(f64::INFINITY);
        }
        Ok(AnalyticResult {
            value: TruncatedValue::new(value, tail + rounding, self.cutoff),
            witness: None,
            distinct_shifts: m as usize,
            exceptional: used,
        })
    }

    /// `c_{r+1}(a_1, …, a_r)`.
    pub fn analytic_correlation(&self, spec: &CorrelationSpec) -> Result<AnalyticResult> {
        self.check_k(spec)?;
        let all = spec.all_shifts(self.field().degree());
        self.euler_product(&all, None)
    }

    /// `S_{k,𝔟}(a)`; with `𝔟 = O_K` this is the correlation itself.
    pub fn analytic_s(&self, spec: &CorrelationSpec) -> Result<AnalyticResult> {
        self.check_k(spec)?;
        let all = spec.all_shifts(self.field().degree());
        match &spec.modulus {
            Some(b) if !b.is_unit() => self.euler_product(&all, Some(b)),
            _ => self.euler_product(&all, None),
        }
    }

    fn check_k(&self, spec: &CorrelationSpec) -> Result<()> {
        if spec.k != self.k {
            return Err(Error::BadExponent { k: spec.k, min: self.k });
        }
        Ok(())
    }

    /// `c_2(b)` for a machine-integer `b`.
    pub fn c2(&self, b: &[i64]) -> Result<TruncatedValue> {
        let d = self.field().degree();
        Ok(self.euler_product(&[AlgebraicInt::zero(d), AlgebraicInt::from_i64(b)], None)?.value)
    }

    /// `c_3(b_1, b_2)`.
    pub fn c3(&self, b1: &[i64], b2: &[i64]) -> Result<TruncatedValue> {
        let d = self.field().degree();
        let s = [AlgebraicInt::zero(d), AlgebraicInt::from_i64(b1), AlgebraicInt::from_i64(b2)];
        Ok(self.euler_product(&s, None)?.value)
    }
}

pub(crate) fn integer_root_u128(t: u128, k: u32) -> u64 {
    let mut r = (t as f64).powf(1.0 / k as f64).floor() as u64;
    r = r.saturating_sub(1);
    while (r as u128 + 1).checked_pow(k).map_or(false, |v| v <= t) {
        r += 1;
    }
    r
}

/// `ζ_K(s)` truncated at prime norm `cutoff`.
pub fn dedekind_zeta(stream: &PrimeStream, s: u32, cutoff: u64) -> Result<TruncatedValue> {
    if s < 2 {
        return Err(Error::BadExponent { k: s, min: 2 });
    }
    let mut acc = Compensated::new();
    let norms = stream.prime_norms(cutoff)?;
    for &n in norms.iter().rev() {
        acc.add((-(n as f64).powi(-(s as i32))).ln_1p());
    }
    let d = stream.field().degree() as f64;
    let eps = d * power_tail(cutoff, s) + ROUNDING_PER_FACTOR * norms.len() as f64;
    let inv = TruncatedValue::new(acc.value().exp(), eps, cutoff);
    Ok(inv.recip())
}

/// `(1/#B_R) Σ_{a ∈ B_R, a ∈ 𝔟} Π_i μ^(k)(a + a_i)`, exactly.
pub fn empirical_correlation(grid: &SieveGrid, spec: &CorrelationSpec, radius: u64) -> Result<Ratio<u64>> {
    if spec.k != grid.k() {
        return Err(Error::BadExponent { k: spec.k, min: grid.k() });
    }
    let d = grid.field().degree();
    let shifts: Vec<Vec<i64>> = spec.shifts.iter().map(to_i64_coords).collect::<Result<_>>()?;
    let reach: u64 = shifts.iter().map(|s| s.iter().map(|c| c.unsigned_abs()).sum::<u64>()).max().unwrap_or(0);
    if radius + reach > grid.radius() {
        return Err(Error::RadiusTooSmall { need: radius + reach, have: grid.radius() });
    }
    let inner = crate::ball::BallIndex::new(d, radius);
    let modulus = spec.modulus.as_ref().filter(|b| !b.is_unit());
    let total = inner.len();
    let chunk = 4096u64;
    let starts: Vec<u64> = (0..total.div_ceil(chunk)).map(|c| c * chunk).collect();
    let count: u64 = starts
        .par_iter()
        .map(|&s0| {
            let mut c = 0u64;
            let mut buf = vec![0i64; d];
            let mut it = inner.unrank(s0).map(|first| {
                let mut bi = crate::ball::BallIter::new(d, radius);
                bi.seek(first);
                bi
            });
            let Some(it) = it.as_mut() else { return 0 };
            for a in it.take(chunk as usize) {
                if !grid.bit(&a).unwrap() {
                    continue;
                }
                if let Some(b) = modulus {
                    if !b.contains_i64(&a) {
                        continue;
                    }
                }
                let ok = shifts.iter().all(|s| {
                    for i in 0..d {
                        buf[i] = a[i] + s[i];
                    }
                    grid.bit(&buf).unwrap()
                });
                c += u64::from(ok);
            }
            c
        })
        .sum();
    Ok(Ratio::new(count, total))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecEcho {
    pub field: String,
    pub k: u32,
    pub shifts: Vec<String>,
    pub modulus: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalEcho {
    pub radius: u64,
    pub value: f64,
    pub numerator: u64,
    pub denominator: u64,
}

/// The JSON shape shared by the library and the command line.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationReport {
    pub spec: SpecEcho,
    pub value: f64,
    pub value_display: String,
    pub tail_bound: f64,
    pub cutoff: u64,
    pub exact_zero: bool,
    pub witness_prime: Option<String>,
    pub exceptional: Vec<ExceptionalFactor>,
    pub empirical: Option<EmpiricalEcho>,
}

impl CorrelationReport {
    pub fn new(field: &Field, spec: &CorrelationSpec, res: &AnalyticResult, empirical: Option<(u64, Ratio<u64>)>) -> Self {
        CorrelationReport {
            spec: SpecEcho {
                field: field.spec_string(),
                k: spec.k,
                shifts: spec.shifts.iter().map(|a| format_element(field, a)).collect(),
                modulus: spec.modulus.as_ref().map(format_ideal),
            },
            value: res.value.value,
            value_display: res.value.display(),
            tail_bound: res.value.tail_bound,
            cutoff: res.value.norm_cutoff,
            exact_zero: res.value.exact_zero,
            witness_prime: res.witness.as_ref().map(|p| format_ideal(&p.ideal)),
            exceptional: res
                .exceptional
                .iter()
                .map(|(lp, d, g)| ExceptionalFactor { prime: format_ideal(&lp.prime.ideal), q: lp.q, d: *d, gcd_norm: *g })
                .collect(),
            empirical: empirical.map(|(radius, r)| EmpiricalEcho {
                radius,
                value: *r.numer() as f64 / *r.denom() as f64,
                numerator: *r.numer(),
                denominator: *r.denom(),
            }),
        }
    }
}

/// `12`-digit rendering of an exact ratio.
pub fn ratio_display(r: &Ratio<u64>) -> String {
    if r.numer().is_zero() {
        "0 (exact)".into()
    } else if r.is_one() {
        "1 (exact)".into()
    } else {
        fmt_sig(*r.numer() as f64 / *r.denom() as f64, 12)
    }
}
