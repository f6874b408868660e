//! Characters of `Z^d` trivial on a full-rank ideal, as exact phases.

use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::IdealHNF;
use crate::primes::PrimeStream;

/// Largest annihilator this module will enumerate.
pub const MAX_ANNIHILATOR: u64 = 50_000_000;

/// A point `y = num/den ∈ (Q/Z)^d`, the character `a ↦ exp(2πi ⟨y, a⟩)`.
/// Normalized: `0 ≤ num_j < den` and `gcd(num, den) = 1` (the zero point has
/// `den = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Phase {
    num: Vec<i64>,
    den: i64,
}

impl Phase {
    pub fn new(num: &[i128], den: i128) -> Result<Self> {
        if den <= 0 {
            return Err(Error::Parse(format!("phase denominator {den} must be positive")));
        }
        let mut g = den;
        let reduced: Vec<i128> = num.iter().map(|x| x.rem_euclid(den)).collect();
        for x in &reduced {
            g = g.gcd(x);
        }
        let den = den / g;
        let num = reduced.iter().map(|x| (x / g).to_i64()).collect::<Option<Vec<_>>>();
        match (num, den.to_i64()) {
            (Some(num), Some(den)) => Ok(Phase { num, den }),
            _ => Err(Error::TooLarge(format!("phase denominator {den}"))),
        }
    }

    pub fn zero(d: usize) -> Self {
        Phase { num: vec![0; d], den: 1 }
    }

    pub fn num(&self) -> &[i64] {
        &self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn is_zero(&self) -> bool {
        self.den == 1
    }

    /// `y_1 + y_2`, the product of the characters.
    pub fn add(&self, other: &Phase) -> Result<Phase> {
        let l = (self.den as i128).lcm(&(other.den as i128));
        let (a, b) = (l / self.den as i128, l / other.den as i128);
        let num: Vec<i128> = self.num.iter().zip(&other.num).map(|(&x, &y)| x as i128 * a + y as i128 * b).collect();
        Phase::new(&num, l)
    }

    /// `−y`, the complex conjugate character.
    pub fn neg(&self) -> Phase {
        let num: Vec<i128> = self.num.iter().map(|&x| -(x as i128)).collect();
        Phase::new(&num, self.den as i128).expect("same denominator")
    }

    /// Numerator of `⟨y, v⟩ mod 1` over `den`.
    pub fn pair(&self, v: &[i64]) -> i64 {
        let den = self.den as i128;
        let mut s = 0i128;
        for (&y, &x) in self.num.iter().zip(v) {
            s = (s + y as i128 * (x as i128).rem_euclid(den)).rem_euclid(den);
        }
        s as i64
    }

    /// `⟨y, v⟩ mod 1` as a float in `[0, 1)`.
    pub fn pair_f64(&self, v: &[i64]) -> f64 {
        self.pair(v) as f64 / self.den as f64
    }

    /// The phase of `a ↦ χ(m a)`, i.e. `M^T y` for the matrix given by columns.
    pub fn pullback(&self, cols: &[Vec<i64>]) -> Result<Phase> {
        let num: Vec<i128> = cols.iter().map(|c| self.pair(c) as i128).collect();
        Phase::new(&num, self.den as i128)
    }

    /// Is the character trivial on the lattice `a`?
    pub fn annihilates(&self, a: &IdealHNF) -> bool {
        let den = self.den as i128;
        a.basis().iter().all(|c| {
            let mut s = 0i128;
            for (&y, x) in self.num.iter().zip(c) {
                let x = (x % num_bigint::BigInt::from(den)).to_i128().expect("reduced below den");
                s = (s + y as i128 * x).rem_euclid(den);
            }
            s == 0
        })
    }

    /// `num_1,...,num_d,den`.
    pub fn literal(&self) -> String {
        let mut parts: Vec<String> = self.num.iter().map(|x| x.to_string()).collect();
        parts.push(self.den.to_string());
        parts.join(",")
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.num.iter().map(|x| format!("{x}/{}", self.den)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A character together with its reduced level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub phase: Phase,
    pub level: IdealHNF,
}

/// `(a)^⊥ = { y ∈ (Q/Z)^d : ⟨y, a⟩ ∈ Z for all a ∈ 𝔞 }`, all `N(𝔞)` points.
///
/// With `H` the HNF basis the condition is `H^T y = t ∈ Z^d`; `H^T` is lower
/// triangular so the box `0 ≤ t_j < h_jj` is a transversal and `y` comes out of
/// forward substitution. Points are listed in box order.
pub fn annihilator_points(a: &IdealHNF) -> Result<Vec<Phase>> {
    let n = a.norm_u64().filter(|&n| n <= MAX_ANNIHILATOR).ok_or_else(|| Error::TooLarge(format!("annihilator of size {}", a.norm())))?;
    let h = a.basis_i64().ok_or_else(|| Error::TooLarge("ideal basis".into()))?;
    let d = h.len();
    let nn = n as i128;
    let diag: Vec<i64> = (0..d).map(|j| h[j][j]).collect();
    let mut out = Vec::with_capacity(n as usize);
    let mut t = vec![0i64; d];
    let mut y = vec![0i128; d];
    loop {
        // Y = N y, integral because every denominator divides N
        for j in 0..d {
            let mut s = t[j] as i128 * nn;
            for i in 0..j {
                s -= h[j][i] as i128 * y[i];
            }
            debug_assert_eq!(s % h[j][j] as i128, 0);
            y[j] = (s / h[j][j] as i128).rem_euclid(nn);
        }
        out.push(Phase::new(&y, nn)?);
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            t[i] += 1;
            if t[i] < diag[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

/// The unique minimal square-free `𝔡 | candidate` with `y ∈ (𝔡^k)^⊥`.
///
/// The set of such `𝔡` is closed under gcd, so dropping primes greedily
/// reaches the minimum. Fails if `candidate` is not square-free or `y` is not
/// trivial on `candidate^k`.
pub fn reduced_level(stream: &PrimeStream, y: &Phase, candidate: &IdealHNF, k: u32) -> Result<IdealHNF> {
    let fac = stream.factor_ideal(candidate)?;
    if fac.iter().any(|(_, e)| *e > 1) {
        return Err(Error::NotSquareFree);
    }
    let field = stream.field();
    let mut keep: Vec<IdealHNF> = fac.into_iter().map(|(p, _)| p.ideal).collect();
    let level_of = |ps: &[IdealHNF]| -> Result<IdealHNF> {
        let mut acc = IdealHNF::unit(field);
        for p in ps {
            acc = acc.product(p)?;
        }
        Ok(acc)
    };
    if !y.annihilates(&level_of(&keep)?.power(k)?) {
        return Err(Error::Parse(format!("phase {y} is not trivial on the k-th power of the candidate level")));
    }
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if y.annihilates(&level_of(&trial)?.power(k)?) {
            keep = trial;
        } else {
            i += 1;
        }
    }
    level_of(&keep)
}
