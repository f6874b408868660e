//! Nonzero ideals of `Z[θ]` as sublattices of `Z^d` in canonical column HNF.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{AlgebraicInt, Field};
use crate::hnf::{self, Cols};

#[derive(Clone)]
pub struct IdealHNF {
    field: Field,
    basis: Arc<Cols>,
    norm: BigInt,
}

impl fmt::Debug for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealHNF[")?;
        for (j, c) in self.basis.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", AlgebraicInt::new(c.clone()))?;
        }
        write!(f, "]")
    }
}

impl PartialEq for IdealHNF {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for IdealHNF {}

impl Hash for IdealHNF {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl PartialOrd for IdealHNF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Norm first, then the basis read row by row.
impl Ord for IdealHNF {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm.cmp(&other.norm).then_with(|| {
            let d = self.basis.len();
            for i in 0..d {
                for j in 0..d {
                    let o = self.basis[j][i].cmp(&other.basis[j][i]);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
            Ordering::Equal
        })
    }
}

pub(crate) fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || a.min_poly() == b.min_poly()
}

impl IdealHNF {
    fn from_cols(field: &Field, cols: &[Vec<BigInt>]) -> Result<Self> {
        let d = field.degree();
        let out = hnf::hnf(cols, d, false);
        if !out.full_rank {
            return Err(Error::ZeroIdeal);
        }
        Ok(Self::from_basis_unchecked(field, out.basis))
    }

    fn from_basis_unchecked(field: &Field, basis: Cols) -> Self {
        let norm = hnf::diag_product(&basis);
        IdealHNF { field: field.clone(), basis: Arc::new(basis), norm }
    }

    /// Ideal generated by `gens`: the Z-span of all `g θ^j`.
    pub fn from_generators(field: &Field, gens: &[AlgebraicInt]) -> Result<Self> {
        let d = field.degree();
        let mut cols = Vec::new();
        for g in gens {
            if g.dim() != d {
                return Err(Error::FieldMismatch);
            }
            if g.is_zero() {
                continue;
            }
            cols.extend(field.mult_matrix(g));
        }
        if cols.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        Self::from_cols(field, &cols)
    }

    pub fn principal(field: &Field, a: &AlgebraicInt) -> Result<Self> {
        Self::from_generators(field, std::slice::from_ref(a))
    }

    /// The ideal `(n)` for a rational integer `n ≠ 0`.
    pub fn rational(field: &Field, n: impl Into<BigInt>) -> Result<Self> {
        let d = field.degree();
        let n: BigInt = n.into();
        if n.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let n = if n < BigInt::zero() { -n } else { n };
        let basis = (0..d)
            .map(|j| {
                let mut c = vec![BigInt::zero(); d];
                c[j] = n.clone();
                c
            })
            .collect();
        Ok(Self::from_basis_unchecked(field, basis))
    }

    /// The unit ideal `O_K`.
    pub fn unit(field: &Field) -> Self {
        Self::rational(field, 1).expect("nonzero")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// HNF columns.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// `N(𝔞) = #O/𝔞`.
    pub fn norm(&self) -> &BigInt {
        &self.norm
    }

    pub fn norm_u64(&self) -> Option<u64> {
        self.norm.to_u64()
    }

    pub fn is_unit(&self) -> bool {
        self.norm.is_one()
    }

    /// Diagonal of the HNF, the mixed radix of the residue transversal.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.basis.iter().enumerate().map(|(i, c)| c[i].clone()).collect()
    }

    /// Basis columns as machine integers when they fit.
    pub fn basis_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.basis.iter().map(|c| c.iter().map(|x| x.to_i64()).collect()).collect()
    }

    fn check(&self, other: &IdealHNF) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// `gcd(𝔞, 𝔟) = 𝔞 + 𝔟`.
    pub fn sum_gcd(&self, other: &IdealHNF) -> Result<IdealHNF> {
        self.check(other)?;
        let cols: Cols = self.basis.iter().chain(other.basis.iter()).cloned().collect();
        Self::from_cols(&self.field, &cols)
    }

    /// `lcm(𝔞, 𝔟) = 𝔞 ∩ 𝔟`, from the kernel of `[A | -B]`.
    pub fn intersect_lcm(&self, other: &IdealHNF) -> Result<IdealHNF> {
        self.check(other)?;
        let d = self.field.degree();
        let cols: Cols = self
            .basis
            .iter()
            .cloned()
            .chain(other.basis.iter().map(|c| c.iter().map(|x| -x).collect()))
            .collect();
        let out = hnf::hnf(&cols, d, true);
        let kernel = out.kernel.expect("transform requested");
        let mut gens = Vec::with_capacity(kernel.len());
        for k in kernel {
            let mut v = vec![BigInt::zero(); d];
            for (j, c) in self.basis.iter().enumerate() {
                if k[j].is_zero() {
                    continue;
                }
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi += &k[j] * ci;
                }
            }
            gens.push(v);
        }
        Self::from_cols(&self.field, &gens)
    }

    pub fn product(&self, other: &IdealHNF) -> Result<IdealHNF> {
        self.check(other)?;
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let mut cols = Vec::with_capacity(self.basis.len() * other.basis.len());
        for a in self.basis.iter() {
            let a = AlgebraicInt::new(a.clone());
            for b in other.basis.iter() {
                let b = AlgebraicInt::new(b.clone());
                cols.push(self.field.mul(&a, &b)?.into_coords());
            }
        }
        Self::from_cols(&self.field, &cols)
    }

    pub fn power(&self, k: u32) -> Result<IdealHNF> {
        if k == 0 {
            return Ok(Self::unit(&self.field));
        }
        let mut acc: Option<IdealHNF> = None;
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.product(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base)?;
            }
        }
        Ok(acc.expect("k > 0"))
    }

    pub fn contains(&self, v: &AlgebraicInt) -> Result<bool> {
        if v.dim() != self.field.degree() {
            return Err(Error::FieldMismatch);
        }
        Ok(hnf::solve_upper(&self.basis, v.coords()).is_some())
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        hnf::solve_upper(&self.basis, &v).is_some()
    }

    /// `𝔞 | 𝔟`, i.e. `𝔞 ⊇ 𝔟`.
    pub fn divides(&self, other: &IdealHNF) -> Result<bool> {
        self.check(other)?;
        Ok(other.basis.iter().all(|c| hnf::solve_upper(&self.basis, c).is_some()))
    }

    /// Canonical representative of `v mod 𝔞` (coordinates in `[0, h_ii)`).
    pub fn reduce_mod(&self, v: &AlgebraicInt) -> Result<AlgebraicInt> {
        if v.dim() != self.field.degree() {
            return Err(Error::FieldMismatch);
        }
        Ok(AlgebraicInt::new(hnf::reduce_upper(&self.basis, v.coords())))
    }

    /// The `N(𝔞)` canonical residues, in mixed-radix order (last coordinate fastest).
    pub fn residues(&self) -> Residues {
        let diag = self.diagonal();
        Residues { cur: Some(vec![BigInt::zero(); diag.len()]), diag }
    }

    /// `u ∈ 𝔞`, `w ∈ 𝔟` with `u + w = 1`, when the ideals are coprime.
    pub fn coprime_split(&self, other: &IdealHNF) -> Result<Option<(AlgebraicInt, AlgebraicInt)>> {
        self.check(other)?;
        let d = self.field.degree();
        let cols: Cols = self.basis.iter().chain(other.basis.iter()).cloned().collect();
        let out = hnf::hnf(&cols, d, true);
        if !out.full_rank || !hnf::diag_product(&out.basis).is_one() {
            return Ok(None);
        }
        // column 0 of the HNF is e_0 = 1
        let x = &out.transform.expect("transform requested")[0];
        let mut u = vec![BigInt::zero(); d];
        for (j, c) in self.basis.iter().enumerate() {
            for (ui, ci) in u.iter_mut().zip(c) {
                *ui += &x[j] * ci;
            }
        }
        let mut w = vec![BigInt::zero(); d];
        w[0] = BigInt::one();
        for (wi, ui) in w.iter_mut().zip(&u) {
            *wi -= ui;
        }
        Ok(Some((AlgebraicInt::new(u), AlgebraicInt::new(w))))
    }
}

/// Mixed-radix stream of canonical residues.
#[derive(Debug, Clone)]
pub struct Residues {
    diag: Vec<BigInt>,
    cur: Option<Vec<BigInt>>,
}

impl Iterator for Residues {
    type Item = AlgebraicInt;

    fn next(&mut self) -> Option<AlgebraicInt> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.diag[i] {
                self.cur = Some(next);
                break;
            }
            next[i] = BigInt::zero();
        }
        Some(AlgebraicInt::new(out))
    }
}
