//! Correlations rebuilt from the `g` weights, and the partial Parseval sums.

use serde::Serialize;

use super::character::annihilator_points;
use super::{for_each_squarefree, rankin_tail};
use crate::correlation::{EulerContext, LocalPrime};
use crate::error::{Error, Result};
use crate::field::AlgebraicInt;
use crate::literal::to_i64_coords;
use crate::truncated::{Compensated, TruncatedValue};

/// Below these `N(𝔭^k)` the local factor is summed over the actual characters
/// of `O/𝔭^k`; above, the orthogonality relations give it in closed form.
const EXPLICIT_Q_R1: u128 = 4096;
const EXPLICIT_Q_R2: u128 = 256;

/// `Σ_{ψ ≠ 1} ψ(x)` over characters of `O/𝔭^k`: `q − 1` if `x ∈ 𝔭^k`, else `−1`.
fn closed_sum(lp: &LocalPrime, x: &[i64]) -> f64 {
    if lp.pk.contains_i64(x) {
        lp.q as f64 - 1.0
    } else {
        -1.0
    }
}

fn cos_phase(num: i64, den: i64) -> f64 {
    (std::f64::consts::TAU * num as f64 / den as f64).cos()
}

/// Local factor for one shift: configurations `(χ_0, χ_1)` with `χ_0 χ_1 = 1`,
/// not both trivial, weighted by `(−1/(q−1))^2 χ_1(a)`.
fn local_r1(lp: &LocalPrime, a: &[i64]) -> Result<f64> {
    let w = 1.0 / (lp.q as f64 - 1.0);
    if lp.q > EXPLICIT_Q_R1 {
        return Ok(closed_sum(lp, a) * w * w);
    }
    let mut acc = Compensated::new();
    for y in annihilator_points(&lp.pk)?.iter().filter(|y| !y.is_zero()) {
        acc.add(cos_phase(y.pair(a), y.den()));
    }
    Ok(acc.value() * w * w)
}

/// Local factor for two shifts: all `(χ_0, χ_1, χ_2)` with trivial product,
/// not all trivial, each nontrivial component weighted by `−1/(q−1)`.
fn local_r2(lp: &LocalPrime, a1: &[i64], a2: &[i64]) -> Result<f64> {
    let w = -1.0 / (lp.q as f64 - 1.0);
    if lp.q > EXPLICIT_Q_R2 {
        let diff: Vec<i64> = a1.iter().zip(a2).map(|(x, y)| x - y).collect();
        let (s1, s2, s12) = (closed_sum(lp, a1), closed_sum(lp, a2), closed_sum(lp, &diff));
        // pairs: one of the three components trivial; triples: Σ_{ψ1,ψ2,ψ1ψ2 ≠ 1}
        return Ok((s1 + s2 + s12) * w * w + (s1 * s2 - s12) * w * w * w);
    }
    let pts = annihilator_points(&lp.pk)?;
    let mut acc = Compensated::new();
    for y1 in &pts {
        for y2 in &pts {
            let y0 = y1.add(y2)?.neg();
            let nontrivial = [&y0, y1, y2].iter().filter(|y| !y.is_zero()).count() as i32;
            if nontrivial == 0 {
                continue;
            }
            let phase = y1.pair_f64(a1) + y2.pair_f64(a2);
            acc.add(w.powi(nontrivial) * (std::f64::consts::TAU * phase).cos());
        }
    }
    Ok(acc.value())
}

/// `Σ_{𝔞_0..𝔞_r} g(𝔞_0)…g(𝔞_r) Σ χ_1(a_1)…χ_r(a_r)` over reduced characters
/// with trivial product, for `r = shifts.len() ≤ 2`.
///
/// The inner sum is multiplicative in `𝔪 = lcm(𝔞_i)`, so the series is
/// `ζ_K(k)^{-(r+1)} Σ_{𝔪 square-free} Π_{𝔭|𝔪} L_𝔭`; it is truncated at
/// `N(𝔪) ≤ level_norm_bound` and the rest bounded by Rankin's trick.
pub fn hall_formula_r2(ctx: &EulerContext, shifts: &[AlgebraicInt], level_norm_bound: u64) -> Result<TruncatedValue> {
    let field = ctx.field();
    let r = shifts.len();
    if r > 2 {
        return Err(Error::TooLarge(format!("{r} shifts; at most 2 are supported")));
    }
    if shifts.iter().any(|a| a.dim() != field.degree()) {
        return Err(Error::FieldMismatch);
    }
    let k = ctx.k();
    let a: Vec<Vec<i64>> = shifts.iter().map(to_i64_coords).collect::<Result<_>>()?;
    let primes = ctx.local_primes(level_norm_bound)?;
    let mut local = Vec::with_capacity(primes.len());
    for lp in &primes {
        local.push(match r {
            0 => 0.0,
            1 => local_r1(lp, &a[0])?,
            _ => local_r2(lp, &a[0], &a[1])?,
        });
    }
    let norms: Vec<u128> = primes.iter().map(|p| p.prime.norm() as u128).collect();
    let mut acc = Compensated::new();
    for_each_squarefree(&norms, level_norm_bound as u128, |ix| {
        acc.add(ix.iter().map(|&i| local[i]).product());
    });
    let sum = acc.value();

    // beyond the bound, L_𝔭 = O(1/q) in general and O(1/q^2) once no shift
    // difference can lie in 𝔭^k
    let mut diffs: Vec<Vec<i64>> = a.clone();
    if r == 2 {
        diffs.push(a[0].iter().zip(&a[1]).map(|(x, y)| x - y).collect());
    }
    let small = diffs.iter().all(|x| {
        field.elem_norm_i64(x).is_some_and(|n| n != 0 && n.unsigned_abs() <= level_norm_bound as u128)
    });
    let (s, c) = match (r, small) {
        (0, _) => (2 * k, 0.0),
        (_, true) => (2 * k, if r == 1 { 2.0 } else { 7.0 }),
        (_, false) => (k, if r == 1 { 2.0 } else { 6.0 }),
    };
    let listed: Vec<(u64, f64)> = primes.iter().zip(&local).map(|(p, l)| (p.prime.norm(), l.abs())).collect();
    let rest = if r == 0 { 0.0 } else { rankin_tail(&listed, level_norm_bound, field.degree(), s, c, level_norm_bound) };

    let inv = ctx.inverse_zeta(k);
    let mut scale = inv;
    for _ in 0..r {
        scale = scale.mul(&inv);
    }
    let t = (1.0 + scale.tail_bound) * (1.0 + rest / sum.abs()) - 1.0;
    Ok(TruncatedValue::new(scale.value * sum, t, ctx.cutoff().min(level_norm_bound)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ParsevalReport {
    pub d_bound: u64,
    /// `ζ_K(k) Σ_{N(𝔡) ≤ D} g(𝔡)^2 Π_{𝔭|𝔡} (N(𝔭^k) − 1)`.
    pub partial: TruncatedValue,
    pub levels: usize,
    /// Upper bound for the missing mass `1 − partial`.
    pub tail_estimate: f64,
}

/// Partial Parseval sum for the normalized eigenfunctions; the full sum is 1.
/// Since `g^2 Π (q−1) = ζ^{-2} Π 1/(q−1)` this needs only prime norms.
pub fn parseval_check(ctx: &EulerContext, d_bound: u64) -> Result<ParsevalReport> {
    let k = ctx.k();
    let norms = ctx.stream().prime_norms(d_bound)?;
    let h: Vec<f64> = norms.iter().map(|&n| 1.0 / ((n as f64).powi(k as i32) - 1.0)).collect();
    let nn: Vec<u128> = norms.iter().map(|&n| n as u128).collect();
    let mut acc = Compensated::new();
    let mut levels = 0usize;
    for_each_squarefree(&nn, d_bound as u128, |ix| {
        acc.add(ix.iter().map(|&i| h[i]).product());
        levels += 1;
    });
    let inv = ctx.inverse_zeta(k);
    let partial = inv.scale(acc.value());
    let listed: Vec<(u64, f64)> = norms.iter().copied().zip(h.iter().copied()).collect();
    let rest = rankin_tail(&listed, d_bound.max(1), ctx.field().degree(), k, 2.0, d_bound.max(1));
    Ok(ParsevalReport { d_bound, partial, levels, tail_estimate: inv.upper() * rest })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::NumberField;
    use crate::primes::PrimeStream;

    fn ctx(poly: &[i64], cutoff: u64) -> EulerContext {
        let f = NumberField::from_i64(poly).unwrap();
        EulerContext::new(Arc::new(PrimeStream::new(&f).unwrap()), 2, cutoff).unwrap()
    }

    #[test]
    fn explicit_and_closed_local_factors_agree() {
        let c = ctx(&[1, 0, 1], 1000);
        for lp in c.local_primes(13).unwrap() {
            for a in [[0i64, 0], [1, 0], [2, 0], [1, 1], [3, 4], [5, 0]] {
                let exp = local_r1(&lp, &a).unwrap();
                let w = 1.0 / (lp.q as f64 - 1.0);
                assert!((exp - closed_sum(&lp, &a) * w * w).abs() < 1e-12);
                for b in [[0i64, 0], [1, 0], [0, 1], [2, 2]] {
                    let e2 = local_r2(&lp, &a, &b).unwrap();
                    let diff = [a[0] - b[0], a[1] - b[1]];
                    let (s1, s2, s12) = (closed_sum(&lp, &a), closed_sum(&lp, &b), closed_sum(&lp, &diff));
                    let w = -w;
                    let closed = (s1 + s2 + s12) * w * w + (s1 * s2 - s12) * w * w * w;
                    assert!((e2 - closed).abs() < 1e-12, "{:?} {a:?} {b:?}", lp.prime.ideal);
                }
            }
        }
    }

    #[test]
    fn r0_is_the_density() {
        let c = ctx(&[1, 0, 1], 10_000);
        let h = hall_formula_r2(&c, &[], 100).unwrap();
        assert_eq!(h.value, c.inverse_zeta(2).value);
    }

    #[test]
    fn hall_matches_c2_and_c3() {
        let c = ctx(&[1, 0, 1], 20_000);
        for a in [[0i64, 0], [1, 0], [2, 0], [1, 1]] {
            let h = hall_formula_r2(&c, &[AlgebraicInt::from_i64(&a)], 2000).unwrap();
            let c2 = c.c2(&a).unwrap();
            assert!((h.value - c2.value).abs() < 1e-3, "{a:?}: {} vs {}", h.value, c2.value);
        }
        let (a1, a2) = ([1i64, 0], [0i64, 1]);
        let h = hall_formula_r2(&c, &[AlgebraicInt::from_i64(&a1), AlgebraicInt::from_i64(&a2)], 2000).unwrap();
        let c3 = c.c3(&a1, &a2).unwrap();
        assert!((h.value - c3.value).abs() < 1e-3, "{} vs {}", h.value, c3.value);
    }

    #[test]
    fn parseval_grows_to_one() {
        let c = ctx(&[0, 1], 10_000);
        let one = parseval_check(&c, 1).unwrap();
        assert!((one.partial.value - c.inverse_zeta(2).value).abs() < 1e-15);
        let p = parseval_check(&c, 10_000).unwrap();
        assert!(p.partial.value > 0.99 && p.partial.value < 1.0 + p.partial.abs_error());
        assert!(1.0 - p.partial.value <= p.tail_estimate + p.partial.abs_error());
    }
}
