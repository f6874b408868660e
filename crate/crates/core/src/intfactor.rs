//! Factoring rational integers at desk scale: trial division to 10^6, then
//! Brent's variant of Pollard rho backed by a deterministic Miller-Rabin test.

const TRIAL_LIMIT: u64 = 1_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic for every `u64` (bases are the first twelve primes).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'base: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Finds a nontrivial factor of an odd composite `n` (Brent cycle detection).
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let f = rho(n);
    split(f, out);
    split(n / f, out);
}

/// Prime factorization as `(p, e)` pairs sorted by `p`. `factor_u64(0)` and
/// `factor_u64(1)` are empty.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= n {
        push(p, &mut n);
        p += 2;
    }
    if n > 1 {
        let mut rest = Vec::new();
        split(n, &mut rest);
        rest.sort_unstable();
        for q in rest {
            match out.last_mut() {
                Some((p, e)) if *p == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    out
}

/// All primes `≤ n` by a plain sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factor_u64(100), vec![(2, 2), (5, 2)]);
        assert_eq!(factor_u64(999_983), vec![(999_983, 1)]);
    }

    #[test]
    fn beyond_trial_division() {
        // 1000003 * 1000033, both past the trial limit
        assert_eq!(factor_u64(1_000_003 * 1_000_033), vec![(1_000_003, 1), (1_000_033, 1)]);
        assert_eq!(factor_u64(1_000_003u64.pow(2) * 7), vec![(7, 1), (1_000_003, 2)]);
        let big = 18_446_744_073_709_551_557u64; // largest prime below 2^64
        assert!(is_prime(big));
        assert_eq!(factor_u64(big), vec![(big, 1)]);
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let ps = primes_up_to(10_000);
        let set: std::collections::HashSet<u64> = ps.iter().copied().collect();
        for n in 0..10_000 {
            assert_eq!(is_prime(n), set.contains(&n), "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u64..1_000_000_000_000u64) {
            let f = factor_u64(n);
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, n);
            for (p, _) in f {
                prop_assert!(is_prime(p));
            }
        }
    }
}
