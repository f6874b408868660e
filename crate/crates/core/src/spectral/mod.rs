//! Characters, weights and eigenfunctions of the pure point spectrum of the
//! k-free shift.
//!
//! Characters of `O_K ≅ Z^d` trivial on `𝔡^k` are points `y ∈ (Q/Z)^d` with
//! `⟨y, a⟩ ∈ Z` on the lattice. Everything group theoretic (annihilation,
//! levels, products, eigenvalue relations) runs on exact rational phases; only
//! sums against data become floating point.

mod character;
mod hall;
mod rotation;
mod theta;
mod weights;

pub use character::{annihilator_points, reduced_level, Character, Phase, MAX_ANNIHILATOR};
pub use hall::{hall_formula_r2, parseval_check, ParsevalReport};
pub use rotation::{rotation_eigencheck, RotationReport, MAX_CHECKS};
pub use theta::{empirical_theta, multiplicativity_sign, weighted_correlation_average};
pub use weights::{c2_from_atoms, lambda_approx, spectral_atoms, squarefree_levels, weights, SpectralAtom, Weights};

/// Upper bound for `Σ_{N(𝔪) > b} Π_{𝔭|𝔪} h(𝔭)` over square-free `𝔪`, by
/// Rankin's trick: `≤ b^{-δ} Π_𝔭 (1 + N(𝔭)^δ h(𝔭))`.
///
/// `listed` holds `(N(𝔭), h(𝔭))` for every prime of norm `≤ t`; beyond `t`
/// the caller guarantees `h(𝔭) ≤ c / N(𝔭)^s`. At most `d` primes share a norm,
/// so the unlisted part of the product is at most
/// `exp(c d t^{1+δ-s} / (s-1-δ))`. The best `δ ∈ (0, s-1)` on a grid wins.
pub(crate) fn rankin_tail(listed: &[(u64, f64)], t: u64, d: usize, s: u32, c: f64, b: u64) -> f64 {
    if s < 2 {
        return f64::INFINITY;
    }
    let top = s as f64 - 1.0;
    let mut best = f64::INFINITY;
    for i in 1..64 {
        let delta = top * i as f64 / 64.0;
        let mut log = -delta * (b as f64).ln();
        for &(n, h) in listed {
            log += ((n as f64).powf(delta) * h).ln_1p();
        }
        log += c * d as f64 * (t as f64).powf(1.0 + delta - s as f64) / (top - delta);
        best = best.min(log.exp());
    }
    best
}

/// Visits every square-free product of distinct entries of `norms` (sorted
/// ascending, one entry per prime) not exceeding `bound`, depth first in
/// index order, passing the chosen indices.
pub(crate) fn for_each_squarefree(norms: &[u128], bound: u128, mut f: impl FnMut(&[usize])) {
    fn go(norms: &[u128], bound: u128, start: usize, prod: u128, stack: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        f(stack);
        for i in start..norms.len() {
            let Some(p) = prod.checked_mul(norms[i]).filter(|&p| p <= bound) else { break };
            stack.push(i);
            go(norms, bound, i + 1, p, stack, f);
            stack.pop();
        }
    }
    go(norms, bound, 0, 1, &mut Vec::new(), &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_walk_counts() {
        let mut seen = Vec::new();
        for_each_squarefree(&[2, 3, 5, 7], 30, |ix| seen.push(ix.to_vec()));
        // 1, 2, 3, 5, 7, 6, 10, 14, 15, 21, 30
        assert_eq!(seen.len(), 11);
        assert_eq!(seen[0], Vec::<usize>::new());
    }

    #[test]
    fn rankin_bounds_a_known_tail() {
        // square-free n > 100 weighted by 1/n^2, over Q: true tail ~ 6/π^2 / 100
        let primes = crate::intfactor::primes_up_to(1000);
        let listed: Vec<(u64, f64)> = primes.iter().map(|&p| (p, 1.0 / (p * p) as f64)).collect();
        let bound = rankin_tail(&listed, 1000, 1, 2, 1.0, 100);
        let mut exact = 0.0;
        for n in 101..200_000u64 {
            if crate::intfactor::factor_u64(n).iter().all(|(_, e)| *e == 1) {
                exact += 1.0 / (n * n) as f64;
            }
        }
        assert!(bound >= exact, "{bound} < {exact}");
        assert!(bound < 1.0);
    }
}
