//! The k-free indicator on a whole L1 ball, by sieving translates of `𝔭^k`.

use std::io::{self, Write};

use bitvec::prelude::*;
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{BallIndex, BallIter};
use crate::error::{Error, Result};
use crate::field::{AlgebraicInt, Field};
use crate::ideal::IdealHNF;
use crate::primes::{PrimeIdeal, PrimeStream};

/// `μ^(k)` on `B_x`, one bit per point in lexicographic ball order.
#[derive(Debug, Clone)]
pub struct SieveGrid {
    field: Field,
    k: u32,
    index: BallIndex,
    bits: BitVec<u64, Lsb0>,
    max_elem_norm: BigInt,
}

/// Lattice points of `𝔞` with `‖v‖ ≤ x`, by coefficient search over the HNF
/// basis from the last coordinate up, pruning each coefficient to the interval
/// that keeps the fixed coordinates inside the remaining L1 budget.
pub fn lattice_points_in_ball(a: &IdealHNF, x: u64) -> Vec<Vec<i64>> {
    let d = a.field().degree();
    let Some(h) = a.basis_i64() else {
        // entries beyond i64 only happen for ideals far larger than any ball
        return BallIter::new(d, x).filter(|v| a.contains_i64(v)).collect();
    };
    let mut out = Vec::new();
    let mut acc = vec![0i128; d];
    search(&h, d, x as i128, &mut acc, &mut out);
    out
}

fn search(h: &[Vec<i64>], j: usize, budget: i128, acc: &mut Vec<i128>, out: &mut Vec<Vec<i64>>) {
    if j == 0 {
        out.push(acc.iter().map(|&c| c as i64).collect());
        return;
    }
    let j = j - 1;
    let hjj = h[j][j] as i128;
    let c = acc[j];
    // |c + z h_jj| ≤ budget
    let lo = (-budget - c).div_euclid(hjj) + i128::from((-budget - c).rem_euclid(hjj) != 0);
    let hi = (budget - c).div_euclid(hjj);
    for z in lo..=hi {
        for i in 0..=j {
            acc[i] += z * h[j][i] as i128;
        }
        let used = acc[j].abs();
        search(h, j, budget - used, acc, out);
        for i in 0..=j {
            acc[i] -= z * h[j][i] as i128;
        }
    }
}

fn max_abs_norm(field: &Field, index: &BallIndex) -> BigInt {
    let pts: Vec<Vec<i64>> = index.iter().collect();
    pts.par_chunks(4096)
        .map(|chunk| {
            chunk
                .iter()
                .map(|v| match field.elem_norm_i64(v) {
                    Some(n) => BigInt::from(n.unsigned_abs()),
                    None => field.elem_norm(&AlgebraicInt::from_i64(v)).abs(),
                })
                .max()
                .unwrap_or_default()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .max()
        .unwrap_or_default()
}

/// Largest `n` with `n^k ≤ m`.
fn integer_root(m: &BigInt, k: u32) -> u64 {
    let approx = m.to_f64().unwrap_or(f64::MAX).powf(1.0 / k as f64).floor() as u64;
    let mut r = approx.saturating_sub(2);
    while BigInt::from(r + 1).pow(k) <= *m {
        r += 1;
    }
    while r > 0 && BigInt::from(r).pow(k) > *m {
        r -= 1;
    }
    r
}

/// Sieves with the default rayon pool.
pub fn sieve(stream: &PrimeStream, k: u32, x: u64) -> Result<SieveGrid> {
    sieve_with_workers(stream, k, x, rayon::current_num_threads().max(1))
}

/// Sieves with primes split into `workers` chunks; each chunk builds its own
/// clear-mask and the masks are OR-ed in chunk order, so the grid does not
/// depend on `workers`.
pub fn sieve_with_workers(stream: &PrimeStream, k: u32, x: u64, workers: usize) -> Result<SieveGrid> {
    if k < 2 {
        return Err(Error::BadExponent { k, min: 2 });
    }
    let field = stream.field().clone();
    let d = field.degree();
    let index = BallIndex::new(d, x);
    let n = index.len() as usize;
    let max_elem_norm = max_abs_norm(&field, &index);
    let bound = integer_root(&max_elem_norm, k);
    let primes: Vec<PrimeIdeal> = stream.primes_by_norm(bound)?;

    let workers = workers.max(1);
    let chunk = primes.len().div_ceil(workers).max(1);
    let job = |ps: &[PrimeIdeal]| -> Result<BitVec<u64, Lsb0>> {
        let mut mask = bitvec![u64, Lsb0; 0; n];
        for p in ps {
            let pk = p.ideal.power(k)?;
            for v in lattice_points_in_ball(&pk, x) {
                let r = index.rank(&v).expect("point lies in the ball") as usize;
                mask.set(r, true);
            }
        }
        Ok(mask)
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| Error::TooLarge(e.to_string()))?;
    let masks: Vec<Result<BitVec<u64, Lsb0>>> = pool.install(|| primes.par_chunks(chunk).map(job).collect());

    let mut bits = bitvec![u64, Lsb0; 1; n];
    let zero = index.rank(&vec![0; d]).unwrap() as usize;
    bits.set(zero, false);
    for m in masks {
        let m = m?;
        for (w, c) in bits.as_raw_mut_slice().iter_mut().zip(m.as_raw_slice()) {
            *w &= !*c;
        }
    }
    Ok(SieveGrid { field, k, index, bits, max_elem_norm })
}

impl SieveGrid {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn radius(&self) -> u64 {
        self.index.radius()
    }

    pub fn index(&self) -> &BallIndex {
        &self.index
    }

    pub fn len(&self) -> u64 {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_elem_norm(&self) -> &BigInt {
        &self.max_elem_norm
    }

    pub fn bits(&self) -> &BitSlice<u64, Lsb0> {
        &self.bits
    }

    /// `μ^(k)(v)`, or `None` outside the ball.
    pub fn bit(&self, v: &[i64]) -> Option<bool> {
        if v.len() != self.field.degree() {
            return None;
        }
        self.index.rank(v).map(|r| self.bits[r as usize])
    }

    pub fn bit_at(&self, rank: u64) -> bool {
        self.bits[rank as usize]
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.count_ones() as u64
    }

    /// `#{k-free a ∈ B_x} / #B_x`.
    pub fn density(&self) -> Ratio<u64> {
        Ratio::new(self.count_ones(), self.len())
    }

    /// The grid of a smaller ball, copied bit for bit.
    pub fn restrict(&self, x: u64) -> Option<SieveGrid> {
        if x > self.radius() {
            return None;
        }
        let index = BallIndex::new(self.field.degree(), x);
        let mut bits = bitvec![u64, Lsb0; 0; index.len() as usize];
        for (i, v) in index.iter().enumerate() {
            bits.set(i, self.bit(&v).unwrap());
        }
        let max_elem_norm = max_abs_norm(&self.field, &index);
        Some(SieveGrid { field: self.field.clone(), k: self.k, index, bits, max_elem_norm })
    }

    /// CSV rows `c0,…,c{d-1},bit` in ball order, with a header line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let d = self.field.degree();
        let header: Vec<String> = (0..d).map(|i| format!("c{i}")).chain(["bit".to_string()]).collect();
        writeln!(w, "{}", header.join(","))?;
        for (i, v) in self.index.iter().enumerate() {
            let row: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            writeln!(w, "{},{}", row.join(","), u8::from(self.bits[i]))?;
        }
        Ok(())
    }

    /// Binary PGM (maxval 1) of the bounding square of a planar ball: rows run
    /// from the second coordinate `x` down to `-x`, columns from the first
    /// coordinate `-x` to `x`. Pixels outside the ball are 0.
    pub fn pgm_bytes(&self) -> Result<Vec<u8>> {
        let d = self.field.degree();
        if d != 2 {
            return Err(Error::UnsupportedDimension { d });
        }
        let x = self.radius() as i64;
        let side = (2 * x + 1) as usize;
        let mut out = format!("P5\n{side} {side}\n1\n").into_bytes();
        for b in (-x..=x).rev() {
            for a in -x..=x {
                out.push(u8::from(self.bit(&[a, b]).unwrap_or(false)));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub samples: usize,
    pub seed: u64,
    pub mismatches: usize,
    pub k_free_in_sample: usize,
}

/// Recomputes `μ^(k)` at `n` pseudorandom nonzero points through the
/// factorization path and fails on any disagreement.
pub fn crosscheck_sample(grid: &SieveGrid, stream: &PrimeStream, n: usize, seed: u64) -> Result<CrosscheckReport> {
    let field = grid.field();
    let len = grid.len();
    let d = field.degree();
    let zero = grid.index.rank(&vec![0; d]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatched = Vec::new();
    let mut ones = 0;
    if len > 1 {
        for _ in 0..n {
            let mut r = rng.gen_range(0..len - 1);
            if r >= zero {
                r += 1;
            }
            let v = grid.index.unrank(r).unwrap();
            let a = IdealHNF::principal(field, &AlgebraicInt::from_i64(&v))?;
            let oracle = stream.mobius_mu_k(&a, grid.k)? == 1;
            ones += usize::from(oracle);
            if oracle != grid.bit_at(r) {
                mismatched.push(v);
            }
        }
    }
    if let Some(first) = mismatched.first() {
        return Err(Error::MismatchFound { count: mismatched.len(), first: AlgebraicInt::from_i64(first).to_string() });
    }
    Ok(CrosscheckReport { samples: if len > 1 { n } else { 0 }, seed, mismatches: 0, k_free_in_sample: ones })
}
