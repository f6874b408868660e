//! Column Hermite normal form over Z.
//!
//! A full-rank lattice `L ⊂ Z^d` given by generating columns is brought to the
//! unique upper-triangular basis `H` with positive diagonal and every entry to
//! the right of a pivot reduced into `[0, h_ii)`. Optionally the unimodular
//! column transform is tracked, which gives kernels (for intersections) and
//! Bezout certificates (for coprime splits).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Columns of an integer matrix.
pub type Cols = Vec<Vec<BigInt>>;

#[derive(Debug, Clone)]
pub struct HnfOutput {
    /// `d` HNF columns, or fewer if the input was not of full rank
    /// (in which case `full_rank` is false and `basis` is unspecified).
    pub basis: Cols,
    pub full_rank: bool,
    /// For each HNF column `j`, the combination of input columns producing it.
    pub transform: Option<Cols>,
    /// Input combinations that vanish; a basis of the integer kernel.
    pub kernel: Option<Cols>,
}

fn axpy(dst: &mut [BigInt], a: &BigInt, src: &[BigInt]) {
    for (x, y) in dst.iter_mut().zip(src) {
        if !y.is_zero() {
            *x += a * y;
        }
    }
}

// (p, c) <- (s p + t c, -v p + u c)
fn combine(p: &mut Vec<BigInt>, c: &mut Vec<BigInt>, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    for (x, y) in p.iter_mut().zip(c.iter_mut()) {
        let nx = s * &*x + t * &*y;
        let ny = u * &*y - v * &*x;
        *x = nx;
        *y = ny;
    }
}

/// HNF of the lattice spanned by `cols` (each of length `d`).
pub fn hnf(cols: &[Vec<BigInt>], d: usize, with_transform: bool) -> HnfOutput {
    let n = cols.len();
    let mut a: Cols = cols.to_vec();
    let mut u: Option<Cols> = with_transform.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![BigInt::zero(); n];
                e[j] = BigInt::one();
                e
            })
            .collect()
    });
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots: Vec<Option<usize>> = vec![None; d];
    let mut full_rank = true;

    for row in (0..d).rev() {
        let Some(pos) = active.iter().position(|&j| !a[j][row].is_zero()) else {
            full_rank = false;
            continue;
        };
        let pj = active.remove(pos);
        for &cj in &active {
            if a[cj][row].is_zero() {
                continue;
            }
            let x = a[pj][row].clone();
            let y = a[cj][row].clone();
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let uu = &x / &g;
            let vv = &y / &g;
            let (lo, hi) = if pj < cj { (pj, cj) } else { (cj, pj) };
            {
                let (left, right) = a.split_at_mut(hi);
                let (pcol, ccol) = if pj == lo { (&mut left[lo], &mut right[0]) } else { (&mut right[0], &mut left[lo]) };
                combine(pcol, ccol, &s, &t, &uu, &vv);
            }
            if let Some(u) = u.as_mut() {
                let (left, right) = u.split_at_mut(hi);
                let (pcol, ccol) = if pj == lo { (&mut left[lo], &mut right[0]) } else { (&mut right[0], &mut left[lo]) };
                combine(pcol, ccol, &s, &t, &uu, &vv);
            }
        }
        if a[pj][row].is_negative() {
            for x in a[pj].iter_mut() {
                *x = -&*x;
            }
            if let Some(u) = u.as_mut() {
                for x in u[pj].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        pivots[row] = Some(pj);
    }

    if !full_rank {
        let kernel = u.as_ref().map(|u| active.iter().map(|&j| u[j].clone()).collect());
        let basis = pivots.iter().flatten().map(|&j| a[j].clone()).collect();
        return HnfOutput { basis, full_rank, transform: None, kernel };
    }

    let piv: Vec<usize> = pivots.into_iter().map(|p| p.unwrap()).collect();
    // reduce entries right of each pivot
    for j in 1..d {
        for i in (0..j).rev() {
            let h = a[piv[i]][i].clone();
            let q = a[piv[j]][i].div_floor(&h);
            if q.is_zero() {
                continue;
            }
            let neg = -q;
            let src = a[piv[i]].clone();
            axpy(&mut a[piv[j]], &neg, &src);
            if let Some(u) = u.as_mut() {
                let src = u[piv[i]].clone();
                axpy(&mut u[piv[j]], &neg, &src);
            }
        }
    }
    let basis = piv.iter().map(|&j| a[j].clone()).collect();
    let transform = u.as_ref().map(|u| piv.iter().map(|&j| u[j].clone()).collect());
    let kernel = u.as_ref().map(|u| active.iter().map(|&j| u[j].clone()).collect());
    HnfOutput { basis, full_rank, transform, kernel }
}

/// Writes `v = H z` by back-substitution; `None` if `v ∉ L(H)`.
pub fn solve_upper(h: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let d = h.len();
    let mut r = v.to_vec();
    let mut z = vec![BigInt::zero(); d];
    for i in (0..d).rev() {
        let (q, rem) = r[i].div_rem(&h[i][i]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            axpy(&mut r[..=i], &-&q, &h[i][..=i]);
        }
        z[i] = q;
    }
    Some(z)
}

/// Canonical representative of `v + L(H)`: coordinates in `[0, h_ii)`.
pub fn reduce_upper(h: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    let d = h.len();
    let mut r = v.to_vec();
    for i in (0..d).rev() {
        let q = r[i].div_floor(&h[i][i]);
        if !q.is_zero() {
            axpy(&mut r[..=i], &-&q, &h[i][..=i]);
        }
    }
    r
}

/// Product of the diagonal.
pub fn diag_product(h: &[Vec<BigInt>]) -> BigInt {
    h.iter().enumerate().map(|(i, c)| c[i].clone()).product()
}

pub fn is_canonical(h: &[Vec<BigInt>]) -> bool {
    let d = h.len();
    for j in 0..d {
        if h[j].len() != d || !h[j][j].is_positive() {
            return false;
        }
        for i in j + 1..d {
            if !h[j][i].is_zero() {
                return false;
            }
        }
        for i in 0..j {
            if h[j][i].is_negative() || h[j][i] >= h[i][i] {
                return false;
            }
        }
    }
    true
}
