//! Eigenfunction averages at the generic point and character-weighted
//! correlation averages.

use num_complex::Complex64;
use rayon::prelude::*;

use super::character::{reduced_level, Character, Phase};
use crate::ball::BallIter;
use crate::correlation::EulerContext;
use crate::error::{Error, Result};
use crate::primes::PrimeStream;
use crate::sieve::SieveGrid;
use crate::truncated::Compensated;

fn unit_root(num: i64, den: i64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * num as f64 / den as f64)
}

/// Sums complex terms in the given order with compensation on both parts.
fn csum(terms: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let (mut re, mut im) = (Compensated::new(), Compensated::new());
    for z in terms {
        re.add(z.re);
        im.add(z.im);
    }
    Complex64::new(re.value(), im.value())
}

/// `θ_χ = (1/#B_R) Σ_{a ∈ B_R} χ(−a) μ^(k)(a)` over the whole grid.
///
/// The phases `⟨y, a⟩` are tallied exactly per numerator; each class is
/// turned into a root of unity once, in numerator order.
pub fn empirical_theta(grid: &SieveGrid, chi: &Phase) -> Result<Complex64> {
    if chi.dim() != grid.field().degree() {
        return Err(Error::FieldMismatch);
    }
    let den = chi.den();
    let mut hist = vec![0u64; den as usize];
    for (rank, v) in grid.index().iter().enumerate() {
        if grid.bit_at(rank as u64) {
            hist[chi.pair(&v) as usize] += 1;
        }
    }
    let total = grid.len() as f64;
    let s = csum(hist.iter().enumerate().filter(|(_, &c)| c > 0).map(|(r, &c)| unit_root(-(r as i64), den) * c as f64));
    Ok(s / total)
}

/// For one character, `(1/#B_x) Σ_b χ(b) c_2(b)` (limit `g(𝔡)^2`); for two,
/// `(1/#B_x^2) Σ_{b_1,b_2} χ_1(b_1) χ_2(b_2) c_3(b_1, b_2)` (limit
/// `g(𝔡_1) g(𝔡_2) g(𝔡)` with `𝔡` the reduced level of `χ_1 χ_2`).
pub fn weighted_correlation_average(ctx: &EulerContext, chis: &[Phase], radius: u64) -> Result<Complex64> {
    let d = ctx.field().degree();
    if chis.is_empty() || chis.len() > 2 {
        return Err(Error::TooLarge(format!("{} characters; 1 or 2 are supported", chis.len())));
    }
    if chis.iter().any(|c| c.dim() != d) {
        return Err(Error::FieldMismatch);
    }
    if radius == 0 {
        return Err(Error::RadiusTooSmall { need: 1, have: 0 });
    }
    let ball: Vec<Vec<i64>> = BallIter::new(d, radius).collect();
    let n = ball.len() as f64;
    if chis.len() == 1 {
        let chi = &chis[0];
        let terms: Vec<Result<Complex64>> =
            ball.par_iter().map(|b| Ok(unit_root(chi.pair(b), chi.den()) * ctx.c2(b)?.value)).collect();
        let terms: Vec<Complex64> = terms.into_iter().collect::<Result<_>>()?;
        return Ok(csum(terms) / n);
    }
    let (c1, c2) = (&chis[0], &chis[1]);
    let rows: Vec<Result<Complex64>> = ball
        .par_iter()
        .map(|b1| {
            let mut row = Vec::with_capacity(ball.len());
            for b2 in &ball {
                row.push(unit_root(c2.pair(b2), c2.den()) * ctx.c3(b1, b2)?.value);
            }
            Ok(unit_root(c1.pair(b1), c1.den()) * csum(row))
        })
        .collect();
    let rows: Vec<Complex64> = rows.into_iter().collect::<Result<_>>()?;
    Ok(csum(rows) / (n * n))
}

/// `ε = μ(𝔡_1) μ(𝔡_2) μ(𝔡)` where `𝔡` is the reduced level of `χ_1 χ_2`;
/// returns `ε` and `𝔡`.
pub fn multiplicativity_sign(stream: &PrimeStream, k: u32, c1: &Character, c2: &Character) -> Result<(i32, crate::ideal::IdealHNF)> {
    let mu = |d: &crate::ideal::IdealHNF| -> Result<i32> {
        let m = stream.mobius_mu_k(d, 1)?;
        if m == 0 {
            Err(Error::NotSquareFree)
        } else {
            Ok(m)
        }
    };
    let (m1, m2) = (mu(&c1.level)?, mu(&c2.level)?);
    let lcm = c1.level.intersect_lcm(&c2.level)?;
    let y = c1.phase.add(&c2.phase)?;
    let level = reduced_level(stream, &y, &lcm, k)?;
    Ok((m1 * m2 * mu(&level)?, level))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::NumberField;
    use crate::literal::parse_ideal;
    use crate::sieve::sieve;
    use crate::spectral::lambda_approx;

    #[test]
    fn radius_zero_theta_vanishes() {
        let f = NumberField::from_i64(&[1, 0, 1]).unwrap();
        let s = PrimeStream::new(&f).unwrap();
        let g = sieve(&s, 2, 0).unwrap();
        let t = empirical_theta(&g, &Phase::new(&[1, 1], 2).unwrap()).unwrap();
        assert_eq!(t, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn trivial_theta_is_density() {
        let f = NumberField::from_i64(&[1, 0, 1]).unwrap();
        let s = PrimeStream::new(&f).unwrap();
        let g = sieve(&s, 2, 30).unwrap();
        let t = empirical_theta(&g, &Phase::zero(2)).unwrap();
        let dens = *g.density().numer() as f64 / *g.density().denom() as f64;
        assert!((t.re - dens).abs() < 1e-15 && t.im == 0.0);
    }

    #[test]
    fn signs() {
        let f = NumberField::from_i64(&[1, 0, 1]).unwrap();
        let s = PrimeStream::new(&f).unwrap();
        let lam = lambda_approx(&s, 2, 25).unwrap();
        let two = parse_ideal(&f, "1+i").unwrap();
        let five = parse_ideal(&f, "1+2i").unwrap();
        let a = lam.iter().find(|c| c.level == two).unwrap();
        let b = lam.iter().find(|c| c.level == five).unwrap();
        let inv = Character { phase: a.phase.neg(), level: two.clone() };
        let (e, l) = multiplicativity_sign(&s, 2, a, &inv).unwrap();
        assert_eq!((e, l.is_unit()), (1, true));
        let (e, l) = multiplicativity_sign(&s, 2, a, b).unwrap();
        assert_eq!(e, 1);
        assert_eq!(l, two.product(&five).unwrap());
        let o = &lam[0];
        assert_eq!(multiplicativity_sign(&s, 2, o, o).unwrap().0, 1);
    }

    #[test]
    fn c2_average_tends_to_g_squared() {
        let f = NumberField::from_i64(&[1, 0, 1]).unwrap();
        let ctx = EulerContext::new(Arc::new(PrimeStream::new(&f).unwrap()), 2, 2000).unwrap();
        let inv = ctx.inverse_zeta(2).value;
        let avg = weighted_correlation_average(&ctx, &[Phase::zero(2)], 40).unwrap();
        assert!((avg.re - inv * inv).abs() < 0.02, "{avg}");
        let y = Phase::new(&[1, 0], 2).unwrap();
        let avg = weighted_correlation_average(&ctx, &[y], 40).unwrap();
        assert!((avg.re - inv * inv / 9.0).abs() < 0.02, "{avg}");
    }
}
