//! The lattice L1 ball `B_x = { a ∈ Z^d : ‖a‖ ≤ x }` in lexicographic order.
//!
//! Order: coordinate 0 is most significant, values ascending. The first point
//! is `(-x, 0, …, 0)`, the last `(x, 0, …, 0)`. [`BallIndex`] gives the rank of
//! a point in this order in `O(d)`, which is what the sieve bit arrays use.

/// Number of points of `Z^m` with L1 norm at most `t`, for all `m ≤ d`, `t ≤ x`,
/// plus prefix sums over `t`.
#[derive(Debug, Clone)]
pub struct BallIndex {
    dim: usize,
    radius: u64,
    // counts[m][t] = #{ v ∈ Z^m : ‖v‖ ≤ t }
    counts: Vec<Vec<u64>>,
    // prefix[m][t] = Σ_{u ≤ t} counts[m][u]
    prefix: Vec<Vec<u64>>,
}

impl BallIndex {
    pub fn new(dim: usize, radius: u64) -> Self {
        let n = radius as usize + 1;
        let mut counts = vec![vec![1u64; n]];
        for m in 1..=dim {
            let prev: &Vec<u64> = &counts[m - 1];
            let mut row = vec![0u64; n];
            // c = 0 contributes prev[t]; ±c contributes 2·prev[t-c], i.e. twice
            // the running sum of prev below t
            let mut below = 0u64;
            for t in 0..n {
                row[t] = prev[t] + 2 * below;
                below += prev[t];
            }
            counts.push(row);
        }
        let prefix = counts
            .iter()
            .map(|row| {
                let mut acc = 0u64;
                row.iter()
                    .map(|&v| {
                        acc += v;
                        acc
                    })
                    .collect()
            })
            .collect();
        BallIndex { dim, radius, counts, prefix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    /// `#B_x`.
    pub fn len(&self) -> u64 {
        self.counts[self.dim][self.radius as usize]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `#{ v ∈ Z^m : ‖v‖ ≤ t }`.
    pub fn count(&self, m: usize, t: u64) -> u64 {
        self.counts[m][t as usize]
    }

    // Σ_{c = -s}^{c_hi - 1} counts[m][s - |c|], for -s ≤ c_hi ≤ s + 1
    fn partial(&self, m: usize, s: u64, c_hi: i64) -> u64 {
        let s_i = s as i64;
        let pre = &self.prefix[m];
        let mut total = 0u64;
        // negative part c ∈ [-s, min(c_hi-1, -1)] covers budgets 0 ..= s + min(c_hi-1, -1)
        let neg_top = (c_hi - 1).min(-1);
        if neg_top >= -s_i {
            total += pre[(s_i + neg_top) as usize];
        }
        // c ∈ [0, c_hi-1] covers budgets s-c_hi+1 ..= s
        if c_hi >= 1 {
            let lo = s_i - c_hi; // exclusive
            total += pre[s as usize] - if lo >= 0 { pre[lo as usize] } else { 0 };
        }
        total
    }

    /// Rank of `v` in lexicographic order, or `None` if `‖v‖ > x`.
    pub fn rank(&self, v: &[i64]) -> Option<u64> {
        debug_assert_eq!(v.len(), self.dim);
        let mut budget = self.radius;
        let mut r = 0u64;
        for (i, &c) in v.iter().enumerate() {
            let a = c.unsigned_abs();
            if a > budget {
                return None;
            }
            let m = self.dim - i - 1;
            r += self.partial(m, budget, c);
            budget -= a;
        }
        Some(r)
    }

    /// Inverse of [`BallIndex::rank`].
    pub fn unrank(&self, mut r: u64) -> Option<Vec<i64>> {
        if r >= self.len() {
            return None;
        }
        let mut out = Vec::with_capacity(self.dim);
        let mut budget = self.radius;
        for i in 0..self.dim {
            let m = self.dim - i - 1;
            let b = budget as i64;
            // largest c with partial(m, budget, c) ≤ r
            let (mut lo, mut hi) = (-b, b);
            while lo < hi {
                let mid = lo + (hi - lo + 1) / 2;
                if self.partial(m, budget, mid) <= r {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            r -= self.partial(m, budget, lo);
            budget -= lo.unsigned_abs();
            out.push(lo);
        }
        Some(out)
    }

    pub fn iter(&self) -> BallIter {
        BallIter::new(self.dim, self.radius)
    }
}

/// Lexicographic stream of the points of `B_x`.
#[derive(Debug, Clone)]
pub struct BallIter {
    radius: u64,
    cur: Option<Vec<i64>>,
}

impl BallIter {
    pub fn new(dim: usize, radius: u64) -> Self {
        let mut first = vec![0i64; dim];
        if dim > 0 {
            first[0] = -(radius as i64);
        }
        BallIter { radius, cur: Some(first) }
    }

    /// Restarts the stream at `v`, which must lie in the ball.
    pub fn seek(&mut self, v: Vec<i64>) {
        self.cur = Some(v);
    }

    fn advance(&mut self) {
        let Some(v) = self.cur.as_mut() else { return };
        let d = v.len();
        // used[i] = Σ_{j<i} |v_j|
        let mut used = vec![0u64; d + 1];
        for i in 0..d {
            used[i + 1] = used[i] + v[i].unsigned_abs();
        }
        for i in (0..d).rev() {
            let next = v[i] + 1;
            if used[i] + next.unsigned_abs() <= self.radius {
                v[i] = next;
                let rem = self.radius - used[i] - next.unsigned_abs();
                if i + 1 < d {
                    v[i + 1] = -(rem as i64);
                    for c in v.iter_mut().skip(i + 2) {
                        *c = 0;
                    }
                }
                return;
            }
        }
        self.cur = None;
    }
}

impl Iterator for BallIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.cur.clone()?;
        self.advance();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts() {
        assert_eq!(BallIter::new(2, 1).count(), 5);
        assert_eq!(BallIter::new(1, 10).count(), 21);
        assert_eq!(BallIter::new(2, 50).count(), 5101);
        assert_eq!(BallIndex::new(2, 50).len(), 2 * 50 * 50 + 2 * 50 + 1);
        assert_eq!(BallIndex::new(3, 2).len(), 25);
        assert_eq!(BallIter::new(2, 0).collect::<Vec<_>>(), vec![vec![0, 0]]);
    }

    #[test]
    fn order_is_lexicographic_and_brute_force_complete() {
        for d in 1..=3 {
            for x in 0..6u64 {
                let pts: Vec<_> = BallIter::new(d, x).collect();
                assert!(pts.windows(2).all(|w| w[0] < w[1]));
                let xi = x as i64;
                let mut brute = 0;
                let mut stack = vec![vec![]];
                while let Some(p) = stack.pop() {
                    if p.len() == d {
                        if p.iter().map(|c: &i64| c.unsigned_abs()).sum::<u64>() <= x {
                            brute += 1;
                        }
                        continue;
                    }
                    for c in -xi..=xi {
                        let mut q = p.clone();
                        q.push(c);
                        stack.push(q);
                    }
                }
                assert_eq!(pts.len(), brute);
            }
        }
    }

    #[test]
    fn rank_matches_position() {
        for d in 1..=4 {
            let idx = BallIndex::new(d, 5);
            for (i, p) in idx.iter().enumerate() {
                assert_eq!(idx.rank(&p), Some(i as u64));
                assert_eq!(idx.unrank(i as u64).as_deref(), Some(&p[..]));
            }
            let mut out = vec![0i64; d];
            out[d - 1] = 6;
            assert_eq!(idx.rank(&out), None);
        }
    }

    proptest! {
        #[test]
        fn nested_balls(x in 0u64..12, d in 1usize..4) {
            let small: std::collections::BTreeSet<_> = BallIter::new(d, x).collect();
            let big: std::collections::BTreeSet<_> = BallIter::new(d, x + 1).collect();
            prop_assert!(small.is_subset(&big));
            for p in &big {
                let inside = p.iter().map(|c| c.unsigned_abs()).sum::<u64>() <= x;
                prop_assert_eq!(inside, small.contains(p));
            }
        }
    }
}
