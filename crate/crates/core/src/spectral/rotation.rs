//! Exact eigenvalue checks for translations on `𝒢_D = Π_{N(𝔭^k) ≤ D} O/𝔭^k`.

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::character::{Character, Phase};
use super::weights::lambda_approx;
use crate::correlation::integer_root_u128;
use crate::error::{Error, Result};
use crate::field::AlgebraicInt;
use crate::ideal::IdealHNF;
use crate::literal::{format_ideal, to_i64_coords};
use crate::primes::PrimeStream;

#[derive(Debug, Clone, Serialize)]
pub struct RotationReport {
    pub k: u32,
    pub d_bound: u64,
    pub v: Vec<i64>,
    /// `(prime, N(𝔭^k))` for each factor of the truncation.
    pub factors: Vec<(String, u64)>,
    pub group_order: u64,
    pub characters: usize,
    /// `(χ, g)` pairs on which the eigenvalue relation was verified.
    pub relation_checks: u64,
    pub orthogonal_pairs: u64,
    /// `χ(ι(v))` as `num/den` per character, in `Λ_D` order.
    pub eigenvalues: Vec<String>,
}

/// Cap on `#𝒢_D · #Λ_D`, the number of relation checks.
pub const MAX_CHECKS: u64 = 2_000_000_000;

struct Factor {
    pk: IdealHNF,
    residues: Vec<Vec<i64>>,
    /// index of `r + v mod 𝔭^k`
    shifted: Vec<usize>,
    /// columns of multiplication by the CRT idempotent for this factor
    idempotent: Vec<Vec<i64>>,
}

fn violation(detail: String) -> Error {
    Error::EigenrelationViolated { detail }
}

fn residue_index(diag: &[i64], r: &[i64]) -> usize {
    r.iter().zip(diag).fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize)
}

fn build_factor(stream: &PrimeStream, pk: &IdealHNF, rest: &IdealHNF, v: &[i64]) -> Result<Factor> {
    let field = stream.field();
    let (_, e) = pk.coprime_split(rest)?.ok_or_else(|| violation(format!("{} and its cofactor are not coprime", format_ideal(pk))))?;
    // e ≡ 1 mod 𝔭^k and e ∈ rest; any representative mod 𝔭^k·rest will do
    let modulus = pk.product(rest)?;
    let e = modulus.reduce_mod(&e)?;
    let idempotent = field.mult_matrix(&e).iter().map(|c| c.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>();
    let idempotent = idempotent.ok_or_else(|| Error::TooLarge("idempotent coordinates".into()))?;
    let diag: Vec<i64> = pk.diagonal().iter().map(|x| x.to_i64().expect("small")).collect();
    let residues: Vec<Vec<i64>> = pk.residues().map(|r| to_i64_coords(&r)).collect::<Result<_>>()?;
    let mut shifted = Vec::with_capacity(residues.len());
    for r in &residues {
        let moved: Vec<i64> = r.iter().zip(v).map(|(a, b)| a + b).collect();
        let red = to_i64_coords(&pk.reduce_mod(&AlgebraicInt::from_i64(&moved))?)?;
        shifted.push(residue_index(&diag, &red));
    }
    Ok(Factor { pk: pk.clone(), residues, shifted, idempotent })
}

/// Local components `y_i = M_{e_i}^T y`, checked to be trivial on `𝔭_i^k` and
/// to add back up to `y`.
fn local_phases(chi: &Character, factors: &[Factor]) -> Result<Vec<Phase>> {
    let mut parts = Vec::with_capacity(factors.len());
    let mut total = Phase::zero(chi.phase.dim());
    for f in factors {
        let y = chi.phase.pullback(&f.idempotent)?;
        if !y.annihilates(&f.pk) {
            return Err(violation(format!("local part {y} of {} is not trivial on {}", chi.phase, format_ideal(&f.pk))));
        }
        total = total.add(&y)?;
        parts.push(y);
    }
    if total != chi.phase {
        return Err(violation(format!("local parts of {} add up to {total}", chi.phase)));
    }
    Ok(parts)
}

/// Verifies `ξ_χ(g + ι(v)) = χ(ι(v)) ξ_χ(g)` for every `g ∈ 𝒢_D` and every
/// `χ ∈ Λ_D`, with `ξ_χ(g) = Π_i χ_i(g_i)`, in exact rational phases; then
/// `⟨ξ_χ, ξ_χ'⟩ = 0` for all `χ ≠ χ'` under the normalized counting measure.
pub fn rotation_eigencheck(stream: &PrimeStream, k: u32, d_bound: u64, v: &[i64]) -> Result<RotationReport> {
    let field = stream.field();
    let d = field.degree();
    if v.len() != d {
        return Err(Error::FieldMismatch);
    }
    let chars = lambda_approx(stream, k, d_bound)?;
    let root = integer_root_u128(d_bound as u128, k);
    let primes = if d_bound >= 1 << k { stream.primes_by_norm(root)? } else { Vec::new() };
    let pks: Vec<IdealHNF> = primes.iter().map(|p| p.ideal.power(k)).collect::<Result<_>>()?;
    let mut factors = Vec::with_capacity(pks.len());
    for (i, pk) in pks.iter().enumerate() {
        let mut rest = IdealHNF::unit(field);
        for (j, other) in pks.iter().enumerate() {
            if j != i {
                rest = rest.product(other)?;
            }
        }
        factors.push(build_factor(stream, pk, &rest, v)?);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.residues.len()).collect();
    let order = sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s as u64));
    let order = match order {
        Some(o) if o.saturating_mul(chars.len() as u64) <= MAX_CHECKS => o,
        _ => return Err(Error::TooLarge(format!("truncation at D = {d_bound} is too large to sweep"))),
    };

    let locals: Vec<Vec<Phase>> = chars.par_iter().map(|c| local_phases(c, &factors)).collect::<Result<_>>()?;

    // eigenvalue relation, one full sweep of 𝒢_D per character
    let sweeps: Vec<Result<(u64, String)>> = chars
        .par_iter()
        .zip(&locals)
        .map(|(chi, ys)| {
            let l = ys.iter().fold(1i64, |acc, y| acc.lcm(&y.den()));
            let target = chi.phase.pair(v) * (l / chi.phase.den());
            let deltas: Vec<Vec<i64>> = factors
                .iter()
                .zip(ys)
                .map(|(f, y)| {
                    let s = l / y.den();
                    (0..f.residues.len())
                        .map(|r| (y.pair(&f.residues[f.shifted[r]]) - y.pair(&f.residues[r])).rem_euclid(y.den()) * s)
                        .collect()
                })
                .collect();
            let checks = sweep(&deltas, l, target).map_err(|g| {
                violation(format!("character {} fails at group element {g:?}", chi.phase))
            })?;
            Ok((checks, format!("{}/{}", chi.phase.pair(v), chi.phase.den())))
        })
        .collect();
    let mut relation_checks = 0;
    let mut eigenvalues = Vec::with_capacity(chars.len());
    for s in sweeps {
        let (c, e) = s?;
        relation_checks += c;
        eigenvalues.push(e);
    }

    // orthogonality: some local factor carries a nontrivial difference whose
    // values are equidistributed over its image
    let pairs: Vec<Result<u64>> = (0..chars.len())
        .into_par_iter()
        .map(|a| {
            let mut n = 0;
            for b in a + 1..chars.len() {
                let Some(i) = (0..factors.len()).find(|&i| locals[a][i] != locals[b][i]) else {
                    return Err(violation(format!("{} and {} agree on 𝒢_D", chars[a].phase, chars[b].phase)));
                };
                let delta = locals[a][i].add(&locals[b][i].neg())?;
                if !cancels(&delta, &factors[i].residues) {
                    return Err(violation(format!("{} and {} are not orthogonal", chars[a].phase, chars[b].phase)));
                }
                n += 1;
            }
            Ok(n)
        })
        .collect();
    let mut orthogonal_pairs = 0;
    for p in pairs {
        orthogonal_pairs += p?;
    }
    let factors_out = primes.iter().zip(&pks).map(|(p, pk)| (format_ideal(&p.ideal), pk.norm_u64().unwrap_or(0))).collect();
    Ok(RotationReport {
        k,
        d_bound,
        v: v.to_vec(),
        factors: factors_out,
        group_order: order,
        characters: chars.len(),
        relation_checks,
        orthogonal_pairs,
        eigenvalues,
    })
}

/// Checks `Σ_i deltas[i][g_i] ≡ target (mod l)` over the whole product; on
/// failure returns the offending index tuple.
fn sweep(deltas: &[Vec<i64>], l: i64, target: i64) -> std::result::Result<u64, Vec<usize>> {
    let m = deltas.len();
    if m == 0 {
        return if target.rem_euclid(l) == 0 { Ok(1) } else { Err(Vec::new()) };
    }
    let mut idx = vec![0usize; m];
    let mut checks = 0u64;
    loop {
        let pre: i64 = (0..m - 1).map(|i| deltas[i][idx[i]]).sum();
        for (r, &last) in deltas[m - 1].iter().enumerate() {
            if (pre + last - target).rem_euclid(l) != 0 {
                idx[m - 1] = r;
                return Err(idx);
            }
        }
        checks += deltas[m - 1].len() as u64;
        let mut i = m - 1;
        loop {
            if i == 0 {
                return Ok(checks);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < deltas[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// `Σ_r exp(2πi ⟨δ, r⟩) = 0` exactly: the values `⟨δ, r⟩ mod 1` must cover
/// the `den(δ)`-th roots of unity equally often, with `den(δ) > 1`.
fn cancels(delta: &Phase, residues: &[Vec<i64>]) -> bool {
    let t = delta.den() as usize;
    if t == 1 || residues.len() % t != 0 {
        return false;
    }
    let mut hist = vec![0usize; t];
    for r in residues {
        hist[delta.pair(r) as usize] += 1;
    }
    hist.iter().all(|&c| c == residues.len() / t)
}
