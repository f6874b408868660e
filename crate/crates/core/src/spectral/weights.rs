//! The weights `σ_𝔡` and `g(𝔡)`, the atoms of the spectral measure and the
//! spectrum approximations `Λ_D`.

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::character::{annihilator_points, Character};
use super::{for_each_squarefree, rankin_tail};
use crate::correlation::{integer_root_u128, EulerContext};
use crate::error::{Error, Result};
use crate::field::AlgebraicInt;
use crate::ideal::IdealHNF;
use crate::primes::{PrimeIdeal, PrimeStream};
use crate::truncated::{power_tail, Compensated, TruncatedValue, ROUNDING_PER_FACTOR};

#[derive(Debug, Clone, Serialize)]
pub struct Weights {
    pub mu: i32,
    /// `(1/N(𝔡^k)) Π_{𝔭∤𝔡} (1 − 2/N(𝔭^k))`.
    pub sigma: TruncatedValue,
    /// `σ_O Π_{𝔭|𝔡} 1/(N(𝔭^k) − 2)`, the same number by another route.
    pub sigma_cross: TruncatedValue,
    /// `(μ(𝔡)/ζ_K(k)) Π_{𝔭|𝔡} 1/(N(𝔭^k) − 1)`.
    pub g: TruncatedValue,
    /// `g(𝔡)^2`, the spectral mass at each character of reduced level `𝔡`.
    pub mass: TruncatedValue,
}

/// One point of `Λ` with its weight.
///
/// `weight` is `σ_𝔡` for the reduced level. Each `𝔡' ⊆ 𝔡` contributes
/// `σ_{𝔡'}/N(𝔡'^k)` at this point; those add up to `mass = g(𝔡)^2`.
#[derive(Debug, Clone)]
pub struct SpectralAtom {
    pub character: Character,
    pub weight: TruncatedValue,
    pub mass: TruncatedValue,
}

fn prime_norms_of(stream: &PrimeStream, d: &IdealHNF) -> Result<Vec<u64>> {
    let fac = stream.factor_ideal(d)?;
    if fac.iter().any(|(_, e)| *e > 1) {
        return Err(Error::NotSquareFree);
    }
    Ok(fac.iter().map(|(p, _)| p.norm()).collect())
}

fn qf(n: u64, k: u32) -> f64 {
    (n as f64).powi(k as i32)
}

/// `(1/Π q_i) Π_{𝔭 ∉ divisors} (1 − 2/q)`, skipping one occurrence of each
/// divisor norm in the cutoff list.
fn sigma_direct(ctx: &EulerContext, divisor_norms: &[u64]) -> TruncatedValue {
    let k = ctx.k();
    let mut skip = divisor_norms.to_vec();
    let mut acc = Compensated::new();
    let mut factors = 0usize;
    for &n in ctx.norms().iter().rev() {
        if let Some(pos) = skip.iter().position(|&m| m == n) {
            skip.swap_remove(pos);
            continue;
        }
        acc.add((-2.0 / qf(n, k)).ln_1p());
        factors += 1;
    }
    let scale: f64 = divisor_norms.iter().map(|&n| 1.0 / qf(n, k)).product();
    let d = ctx.field().degree() as f64;
    let tail = 2.0 * d * power_tail(ctx.cutoff(), k) + ROUNDING_PER_FACTOR * (factors + 1) as f64;
    TruncatedValue::new(acc.value().exp() * scale, tail, ctx.cutoff())
}

/// `σ_𝔡`, `g(𝔡)` and friends for a square-free `𝔡`.
pub fn weights(ctx: &EulerContext, d: &IdealHNF) -> Result<Weights> {
    let norms = prime_norms_of(ctx.stream(), d)?;
    Ok(weights_from_norms(ctx, &norms))
}

fn weights_from_norms(ctx: &EulerContext, norms: &[u64]) -> Weights {
    let k = ctx.k();
    let mu = if norms.len() % 2 == 0 { 1 } else { -1 };
    let sigma = sigma_direct(ctx, norms);
    let cross: f64 = norms.iter().map(|&n| 1.0 / (qf(n, k) - 2.0)).product();
    let sigma_cross = ctx.sigma_o().scale(cross);
    let gscale: f64 = norms.iter().map(|&n| 1.0 / (qf(n, k) - 1.0)).product();
    let g = ctx.inverse_zeta(k).scale(mu as f64 * gscale);
    let mass = g.mul(&g);
    Weights { mu, sigma, sigma_cross, g, mass }
}

/// Square-free `𝔡` with `N(𝔡^k) ≤ bound`, sorted, each with its primes.
pub fn squarefree_levels(stream: &PrimeStream, k: u32, bound: u64) -> Result<Vec<(IdealHNF, Vec<PrimeIdeal>)>> {
    let root = integer_root_u128(bound as u128, k);
    let primes = if bound >= 1 << k { stream.primes_by_norm(root)? } else { Vec::new() };
    let qs: Vec<u128> = primes.iter().map(|p| (p.norm() as u128).pow(k)).collect();
    let mut picks = Vec::new();
    for_each_squarefree(&qs, bound as u128, |ix| picks.push(ix.to_vec()));
    let field = stream.field();
    let mut out = Vec::with_capacity(picks.len());
    for ix in picks {
        let mut id = IdealHNF::unit(field);
        for &i in &ix {
            id = id.product(&primes[i].ideal)?;
        }
        out.push((id, ix.iter().map(|&i| primes[i].clone()).collect()));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn reduced_class(field_unit: &IdealHNF, level: &IdealHNF, primes: &[PrimeIdeal], k: u32) -> Result<Vec<Character>> {
    let mut larger = Vec::with_capacity(primes.len());
    for skip in 0..primes.len() {
        let mut id = field_unit.clone();
        for (i, p) in primes.iter().enumerate() {
            if i != skip {
                id = id.product(&p.ideal)?;
            }
        }
        larger.push(id.power(k)?);
    }
    let mut pts: Vec<Character> = annihilator_points(&level.power(k)?)?
        .into_iter()
        .filter(|y| larger.iter().all(|l| !y.annihilates(l)))
        .map(|phase| Character { phase, level: level.clone() })
        .collect();
    pts.sort_by(|a, b| a.phase.cmp(&b.phase));
    Ok(pts)
}

/// `Λ_D`: every character whose reduced level `𝔡` has `N(𝔡^k) ≤ D`, ordered by
/// level then phase.
pub fn lambda_approx(stream: &PrimeStream, k: u32, d_bound: u64) -> Result<Vec<Character>> {
    if k < 2 {
        return Err(Error::BadExponent { k, min: 2 });
    }
    let levels = squarefree_levels(stream, k, d_bound)?;
    let unit = IdealHNF::unit(stream.field());
    let classes: Vec<Result<Vec<Character>>> =
        levels.par_iter().map(|(level, primes)| reduced_class(&unit, level, primes, k)).collect();
    let mut out = Vec::new();
    for c in classes {
        out.extend(c?);
    }
    Ok(out)
}

/// `Λ_D` with `σ_𝔡` and the per-point mass attached.
pub fn spectral_atoms(ctx: &EulerContext, d_bound: u64) -> Result<Vec<SpectralAtom>> {
    let chars = lambda_approx(ctx.stream(), ctx.k(), d_bound)?;
    let mut out = Vec::with_capacity(chars.len());
    let mut cache: Option<(IdealHNF, Weights)> = None;
    for c in chars {
        if cache.as_ref().map_or(true, |(l, _)| *l != c.level) {
            cache = Some((c.level.clone(), weights(ctx, &c.level)?));
        }
        let w = &cache.as_ref().expect("filled").1;
        out.push(SpectralAtom { weight: w.sigma, mass: w.mass, character: c });
    }
    Ok(out)
}

/// `c_2(a) = Σ_{𝔡^k ∋ a} σ_𝔡` summed over square-free levels.
///
/// For `a ≠ 0` only the finitely many `𝔭` with `𝔭^k ∋ a` can divide `𝔡`, and
/// all their subsets are summed. For `a = 0` every `𝔡` with `N(𝔡) ≤ zero_bound`
/// is summed and the remainder bounded by Rankin's trick.
pub fn c2_from_atoms(ctx: &EulerContext, a: &AlgebraicInt, zero_bound: u64) -> Result<TruncatedValue> {
    let field = ctx.field();
    if a.dim() != field.degree() {
        return Err(Error::FieldMismatch);
    }
    let k = ctx.k();
    if !a.is_zero() {
        let n = field.elem_norm(a).abs();
        let n = n.to_u128().ok_or_else(|| Error::TooLarge(n.to_string()))?;
        let root = integer_root_u128(n, k);
        let mut norms = Vec::new();
        for lp in ctx.local_primes(root)? {
            if lp.q <= n && lp.pk.contains(a)? {
                norms.push(lp.prime.norm());
            }
        }
        let mut acc = Compensated::new();
        let mut tail: f64 = 0.0;
        for mask in 0u32..1 << norms.len() {
            let sub: Vec<u64> = (0..norms.len()).filter(|i| mask >> i & 1 == 1).map(|i| norms[i]).collect();
            let s = sigma_direct(ctx, &sub);
            acc.add(s.value);
            tail = tail.max(s.tail_bound);
        }
        return Ok(TruncatedValue::new(acc.value(), tail, ctx.cutoff()));
    }
    let norms = ctx.stream().prime_norms(zero_bound)?;
    let qs: Vec<u128> = norms.iter().map(|&n| n as u128).collect();
    let mut acc = Compensated::new();
    for_each_squarefree(&qs, zero_bound as u128, |ix| {
        acc.add(ix.iter().map(|&i| 1.0 / (qf(norms[i], k) - 2.0)).product());
    });
    let listed: Vec<(u64, f64)> = norms.iter().map(|&n| (n, 1.0 / (qf(n, k) - 2.0))).collect();
    let rest = rankin_tail(&listed, zero_bound, field.degree(), k, 2.0, zero_bound);
    let so = ctx.sigma_o();
    let partial = acc.value();
    let t = (1.0 + so.tail_bound) * (1.0 + rest / partial) - 1.0;
    Ok(TruncatedValue::new(so.value * partial, t, ctx.cutoff().min(zero_bound)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::NumberField;
    use crate::literal::parse_ideal;

    fn gauss(cutoff: u64) -> EulerContext {
        let f = NumberField::from_i64(&[1, 0, 1]).unwrap();
        EulerContext::new(Arc::new(PrimeStream::new(&f).unwrap()), 2, cutoff).unwrap()
    }

    #[test]
    fn sigma_of_rationals() {
        let f = NumberField::from_i64(&[0, 1]).unwrap();
        let ctx = EulerContext::new(Arc::new(PrimeStream::new(&f).unwrap()), 2, 1_000_000).unwrap();
        let w = weights(&ctx, &IdealHNF::unit(&f)).unwrap();
        // Π_p (1 − 2/p²), summed independently from the norm side
        assert!(w.sigma.contains(0.322_634_098_939_2, 1e-12), "{}", w.sigma.value);
        assert!(w.sigma.tail_bound < 1e-5);
        assert_eq!(w.mu, 1);
        assert!((w.g.value - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-6);
    }

    #[test]
    fn two_routes_to_sigma_agree() {
        let ctx = gauss(20_000);
        let f = ctx.field().clone();
        let mixed = parse_ideal(&f, "1+i").unwrap().product(&parse_ideal(&f, "2-i").unwrap()).unwrap();
        let ds = ["1+i", "2+i", "3"].map(|l| parse_ideal(&f, l).unwrap());
        for d in ds.iter().chain([&mixed]) {
            let w = weights(&ctx, d).unwrap();
            assert!((w.sigma.value - w.sigma_cross.value).abs() <= w.sigma.abs_error() + w.sigma_cross.abs_error() + 1e-15);
        }
    }

    #[test]
    fn gaussian_g_of_one_plus_i() {
        let ctx = gauss(100_000);
        let d = parse_ideal(ctx.field(), "1+i").unwrap();
        let w = weights(&ctx, &d).unwrap();
        let inv = ctx.inverse_zeta(2).value;
        assert_eq!(w.mu, -1);
        assert!((w.g.value + inv / 3.0).abs() < 1e-12);
        assert!(matches!(weights(&ctx, &d.power(2).unwrap()), Err(Error::NotSquareFree)));
    }

    #[test]
    fn sigma_bracketing_holds_in_corrected_order() {
        let ctx = gauss(20_000);
        let so = ctx.sigma_o().value;
        let inv = ctx.inverse_zeta(2).value;
        for (d, _) in squarefree_levels(ctx.stream(), 2, 10_000).unwrap() {
            let s = weights(&ctx, &d).unwrap().sigma.value;
            assert!(s > 0.0 && s <= so * (1.0 + 1e-12) && s < inv);
        }
    }

    #[test]
    fn gaussian_lambda_sizes() {
        let ctx = gauss(1000);
        let s = ctx.stream();
        assert_eq!(lambda_approx(s, 2, 3).unwrap().len(), 1);
        assert_eq!(lambda_approx(s, 2, 25).unwrap().len(), 52);
        assert_eq!(lambda_approx(s, 2, 100).unwrap().len(), 276);
        let l = lambda_approx(s, 2, 4).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l[0].phase.is_zero() && l[0].level.is_unit());
    }

    #[test]
    fn partition_identity() {
        let ctx = gauss(1000);
        let s = ctx.stream();
        let k = 2;
        for (d, primes) in squarefree_levels(s, k, 10_000).unwrap() {
            let full = annihilator_points(&d.power(k).unwrap()).unwrap();
            let mut total = 0u64;
            for (dd, pp) in squarefree_levels(s, k, d.norm_u64().unwrap().pow(k)).unwrap() {
                if !dd.divides(&d).unwrap() {
                    continue;
                }
                let class = reduced_class(&IdealHNF::unit(ctx.field()), &dd, &pp, k).unwrap();
                let expect: u64 = pp.iter().map(|p| p.norm().pow(k) - 1).product();
                assert_eq!(class.len() as u64, expect);
                total += expect;
            }
            assert_eq!(total, full.len() as u64, "level {d:?} with {} primes", primes.len());
        }
    }

    #[test]
    fn c2_atoms_at_two_and_zero() {
        let ctx = gauss(20_000);
        let two = AlgebraicInt::from_i64(&[2, 0]);
        let a = c2_from_atoms(&ctx, &two, 0).unwrap();
        let b = ctx.c2(&[2, 0]).unwrap();
        assert!((a.value - b.value).abs() <= a.abs_error() + b.abs_error() + 1e-12);
        let z = c2_from_atoms(&ctx, &AlgebraicInt::zero(2), 10_000).unwrap();
        let inv = ctx.inverse_zeta(2);
        assert!((z.value - inv.value).abs() <= z.abs_error() + inv.abs_error());
        assert!(z.value < inv.value);
    }
}
