//! Dense polynomials over `F_p` and their factorization into monic
//! irreducibles (square-free, distinct-degree, then equal-degree splitting).
//! Coefficients are stored constant term first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Poly = Vec<u64>;

#[derive(Debug, Clone, Copy)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        crate::intfactor::pow_mod(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        // p is prime
        self.pow(a, self.p - 2)
    }

    pub fn from_i128(&self, a: i128) -> u64 {
        a.rem_euclid(self.p as i128) as u64
    }

    pub fn trim(&self, mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &Poly) -> isize {
        a.len() as isize - 1
    }

    pub fn is_one(a: &Poly) -> bool {
        a.len() == 1 && a[0] == 1
    }

    pub fn monic(&self, a: Poly) -> Poly {
        let a = self.trim(a);
        match a.last() {
            None => a,
            Some(&lc) if lc == 1 => a,
            Some(&lc) => {
                let inv = self.inv(lc);
                a.into_iter().map(|c| self.mul(c, inv)).collect()
            }
        }
    }

    pub fn add_poly(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(out)
    }

    pub fn sub_poly(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(out)
    }

    pub fn mul_poly(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.trim(out)
    }

    /// `(q, r)` with `a = q b + r`; `b` nonzero.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let b = self.trim(b.clone());
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = self.trim(a.clone());
        if r.len() < b.len() {
            return (vec![], r);
        }
        let inv = self.inv(*b.last().unwrap());
        let mut q = vec![0u64; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(*r.last().unwrap(), inv);
            q[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = self.sub(r[shift + i], self.mul(c, bi));
            }
            r = self.trim(r);
        }
        (self.trim(q), r)
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.divrem(a, b).1
    }

    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Poly {
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_empty());
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let mut a = self.trim(a.clone());
        let mut b = self.trim(b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(a)
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        let out = a.iter().enumerate().skip(1).map(|(i, &c)| self.mul(c, (i as u64) % self.p)).collect();
        self.trim(out)
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul_poly(a, b), m)
    }

    pub fn powmod(&self, a: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&vec![1], m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(&base, &base, m);
            }
        }
        acc
    }

    /// Square-free decomposition `f = ∏ s_i^i` of a monic `f`.
    fn squarefree(&self, f: &Poly) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        if f.len() <= 1 {
            return out;
        }
        let df = self.derivative(f);
        let mut c = self.gcd(f, &df);
        let mut w = self.div_exact(f, &c);
        let mut i = 1u32;
        while !Self::is_one(&w) {
            let y = self.gcd(&w, &c);
            let fac = self.div_exact(&w, &y);
            if !Self::is_one(&fac) {
                out.push((fac, i));
            }
            w = y;
            c = self.div_exact(&c, &w);
            i += 1;
        }
        if !Self::is_one(&c) {
            // c is a p-th power: its coefficients live at multiples of p
            let p = self.p as usize;
            let root: Poly = c.iter().step_by(p).copied().collect();
            for (g, e) in self.squarefree(&root) {
                out.push((g, e * self.p as u32));
            }
        }
        out
    }

    /// Distinct-degree split of a square-free monic `f`: `(product of all degree-i factors, i)`.
    fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut g = f.clone();
        let x: Poly = vec![0, 1];
        let mut h = self.rem(&x, &g);
        let mut i = 1usize;
        while Self::deg(&g) >= 2 * i as isize {
            h = self.powmod(&h, self.p as u128, &g);
            let fac = self.gcd(&g, &self.sub_poly(&h, &x));
            if !Self::is_one(&fac) {
                g = self.div_exact(&g, &fac);
                h = self.rem(&h, &g);
                out.push((fac, i));
            }
            i += 1;
        }
        if Self::deg(&g) > 0 {
            let n = Self::deg(&g) as usize;
            out.push((g, n));
        }
        out
    }

    fn random_poly(&self, n: usize, rng: &mut ChaCha8Rng) -> Poly {
        self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect())
    }

    /// Splits a product of distinct degree-`i` irreducibles.
    fn equal_degree(&self, f: &Poly, i: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
        let n = Self::deg(f) as usize;
        if n == i {
            out.push(f.clone());
            return;
        }
        loop {
            let a = self.random_poly(n, rng);
            if a.len() < 2 {
                continue;
            }
            let b = if self.p == 2 {
                // trace to F_2: Σ_{j < i} a^{2^j}
                let mut t = self.rem(&a, f);
                let mut acc = t.clone();
                for _ in 1..i {
                    t = self.mulmod(&t, &t, f);
                    acc = self.add_poly(&acc, &t);
                }
                acc
            } else {
                // a^{(p^i - 1)/2} = (a^{1 + p + … + p^{i-1}})^{(p-1)/2}
                let mut t = self.rem(&a, f);
                let mut acc = t.clone();
                for _ in 1..i {
                    t = self.powmod(&t, self.p as u128, f);
                    acc = self.mulmod(&acc, &t, f);
                }
                let r = self.powmod(&acc, ((self.p - 1) / 2) as u128, f);
                self.sub_poly(&r, &vec![1])
            };
            let g = self.gcd(f, &b);
            let dg = Self::deg(&g);
            if dg > 0 && dg < n as isize {
                let h = self.div_exact(f, &g);
                self.equal_degree(&g, i, rng, out);
                self.equal_degree(&h, i, rng, out);
                return;
            }
        }
    }

    /// Factorization of a monic polynomial into `(irreducible, exponent)`,
    /// sorted by degree then coefficients. Deterministic for a given `p`.
    pub fn factor(&self, f: &Poly) -> Vec<(Poly, u32)> {
        let f = self.monic(f.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(self.p);
        let mut out = Vec::new();
        for (s, e) in self.squarefree(&f) {
            for (g, i) in self.distinct_degree(&s) {
                let mut parts = Vec::new();
                self.equal_degree(&g, i, &mut rng, &mut parts);
                out.extend(parts.into_iter().map(|q| (q, e)));
            }
        }
        out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev())));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn expand(fp: &Fp, fs: &[(Poly, u32)]) -> Poly {
        let mut acc = vec![1];
        for (g, e) in fs {
            for _ in 0..*e {
                acc = fp.mul_poly(&acc, g);
            }
        }
        acc
    }

    fn is_irreducible_brute(fp: &Fp, g: &Poly) -> bool {
        // no monic divisor of degree 1..=deg/2, by exhaustive search (small p only)
        let n = Fp::deg(g) as usize;
        for dd in 1..=n / 2 {
            let total = fp.p.pow(dd as u32);
            for idx in 0..total {
                let mut h = vec![0u64; dd + 1];
                let mut t = idx;
                for c in h.iter_mut().take(dd) {
                    *c = t % fp.p;
                    t /= fp.p;
                }
                h[dd] = 1;
                if fp.rem(g, &h).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn gaussian_splitting() {
        let f = vec![1, 0, 1];
        assert_eq!(Fp::new(2).factor(&f), vec![(vec![1, 1], 2)]);
        assert_eq!(Fp::new(3).factor(&f), vec![(vec![1, 0, 1], 1)]);
        let five = Fp::new(5).factor(&f);
        assert_eq!(five.len(), 2);
        assert!(five.iter().all(|(g, e)| g.len() == 2 && *e == 1));
    }

    #[test]
    fn pth_powers() {
        // (x^2 + 1)^3 over F_3 has zero derivative
        let fp = Fp::new(3);
        let f = expand(&fp, &[(vec![1, 0, 1], 3)]);
        assert_eq!(fp.factor(&f), vec![(vec![1, 0, 1], 3)]);
        let fp = Fp::new(2);
        let f = expand(&fp, &[(vec![1, 1], 2), (vec![1, 1, 1], 2), (vec![0, 1], 1)]);
        let fs = fp.factor(&f);
        assert_eq!(expand(&fp, &fs), f);
        assert_eq!(fs.len(), 3);
    }

    proptest! {
        #[test]
        fn factorization_is_complete(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), coeffs in proptest::collection::vec(0u64..1000, 1..6)) {
            let fp = Fp::new(p);
            let mut f: Poly = coeffs.iter().map(|c| c % p).collect();
            f.push(1);
            let fs = fp.factor(&f);
            prop_assert_eq!(expand(&fp, &fs), f);
            for (g, _) in &fs {
                prop_assert_eq!(*g.last().unwrap(), 1);
                prop_assert!(is_irreducible_brute(&fp, g));
            }
        }
    }
}
