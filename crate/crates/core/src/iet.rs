//! Interval exchange transformations and Veech's cycle data.
//!
//! Permutations use 1-indexed semantics: `perm.image(j)` is the position that
//! interval `j` occupies after the exchange. The auxiliary permutation
//! `sigma` acts on `{0, .., m}` and is stored 0-indexed as-is.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::json::unify_basis;
use crate::exactnum::{rank_over_q, ExactError, FieldElement, RealBasis};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IetError {
    #[error("not a permutation of 1..={0}: {1:?}")]
    InvalidPermutation(usize, Vec<usize>),
    #[error("permutation has {0} entries but {1} lengths were given")]
    LengthCountMismatch(usize, usize),
    #[error("interval {0} has non-positive length")]
    NonPositiveLength(usize),
    #[error("point {0} lies outside [0, {1})")]
    OutOfDomain(String, String),
    #[error("permutation {0} is reducible")]
    Reducible(Permutation),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A permutation of `{1, .., m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = IetError;

    fn try_from(images: Vec<usize>) -> Result<Self, IetError> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, IetError> {
        let m = images.len();
        let mut seen = vec![false; m + 1];
        for &i in &images {
            if i == 0 || i > m || seen[i] {
                return Err(IetError::InvalidPermutation(m, images));
            }
            seen[i] = true;
        }
        if m == 0 {
            return Err(IetError::InvalidPermutation(0, images));
        }
        Ok(Permutation { images })
    }

    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (1..=m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `pi(j)` for `1 <= j <= m`.
    pub fn image(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (j, &p) in self.images.iter().enumerate() {
            inv[p - 1] = j + 1;
        }
        Permutation { images: inv }
    }

    /// No proper prefix `{1..k}`, `k < m`, is mapped onto itself.
    pub fn is_irreducible(&self) -> bool {
        let mut max = 0;
        for (k, &p) in self.images.iter().enumerate().take(self.len() - 1) {
            max = max.max(p);
            if max == k + 1 {
                return false;
            }
        }
        true
    }

    /// Veech's `sigma_pi(i) = pi^{-1}(pi(i) + 1) - 1` on `{0, .., m}`, with `pi`
    /// extended by `pi(0) = 0` and `pi(m+1) = m+1`.
    pub fn sigma(&self) -> Vec<usize> {
        let m = self.len();
        let ext = |i: usize| if i == 0 || i == m + 1 { i } else { self.image(i) };
        let mut inv_ext = vec![0; m + 2];
        for i in 0..=m + 1 {
            inv_ext[ext(i)] = i;
        }
        (0..=m).map(|i| inv_ext[ext(i) + 1] - 1).collect()
    }

    pub fn sigma_decomposition(&self) -> SigmaDecomposition {
        let sigma = self.sigma();
        let cycles = invariant_sets(&sigma);
        let b_vectors = b_vectors(&cycles, self.len());
        SigmaDecomposition { sigma, cycles, b_vectors }
    }
}

/// Orbits of a permutation of `{0, .., n-1}`, each sorted, listed by
/// ascending minimum.
pub fn invariant_sets(sigma: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; sigma.len()];
    let mut cycles = Vec::new();
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = sigma[i];
        }
        cycle.sort_unstable();
        cycles.push(cycle);
    }
    cycles
}

/// `b_{S,i} = chi_S(i-1) - chi_S(i)` for `1 <= i <= m`, one vector per cycle.
pub fn b_vectors(cycles: &[Vec<usize>], m: usize) -> Vec<Vec<i64>> {
    cycles
        .iter()
        .map(|s| {
            let chi = |i: usize| i64::from(s.contains(&i));
            (1..=m).map(|i| chi(i - 1) - chi(i)).collect()
        })
        .collect()
}

/// `sigma_pi`, its cycles `S_1..S_r` and the integer vectors `b_S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaDecomposition {
    pub sigma: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
    pub b_vectors: Vec<Vec<i64>>,
}

impl SigmaDecomposition {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// `sum_j b_j * x_j` for an integer vector `b`.
pub fn int_dot(b: &[i64], xs: &[FieldElement]) -> FieldElement {
    let mut acc = FieldElement::zero(xs[0].basis());
    for (bi, x) in b.iter().zip(xs) {
        if *bi != 0 {
            acc = &acc + &x.scale_int(*bi);
        }
    }
    acc
}

/// The map `T_(lambda, pi)` on `[0, |lambda|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Iet {
    lengths: Vec<FieldElement>,
    perm: Permutation,
    /// left endpoints of the intervals `I_j`
    starts: Vec<FieldElement>,
    /// `T(x) = x + shifts[j]` on `I_j`
    shifts: Vec<FieldElement>,
    total: FieldElement,
}

impl Iet {
    pub fn new(lengths: Vec<FieldElement>, perm: Permutation) -> Result<Self, IetError> {
        if lengths.len() != perm.len() {
            return Err(IetError::LengthCountMismatch(perm.len(), lengths.len()));
        }
        let basis = lengths[0].basis().clone();
        for (j, l) in lengths.iter().enumerate() {
            if **l.basis() != *basis {
                return Err(ExactError::BasisMismatch.into());
            }
            if l.sign()? != Ordering::Greater {
                return Err(IetError::NonPositiveLength(j + 1));
            }
        }
        let lengths: Vec<FieldElement> = lengths
            .into_iter()
            .map(|l| FieldElement::new(basis.clone(), l.coords().to_vec()))
            .collect::<Result<_, _>>()?;
        let m = lengths.len();
        let mut starts = Vec::with_capacity(m);
        let mut acc = FieldElement::zero(&basis);
        for l in &lengths {
            starts.push(acc.clone());
            acc = &acc + l;
        }
        let inv = perm.inverse();
        let mut image_starts = vec![FieldElement::zero(&basis); m];
        let mut acc = FieldElement::zero(&basis);
        for pos in 1..=m {
            let j = inv.image(pos);
            image_starts[j - 1] = acc.clone();
            acc = &acc + &lengths[j - 1];
        }
        let shifts = image_starts.iter().zip(&starts).map(|(a, b)| a - b).collect();
        Ok(Iet {
            lengths,
            perm,
            starts,
            shifts,
            total: acc,
        })
    }

    /// Convenience constructor for rational lengths over the basis `{1}`.
    pub fn rational(lengths: &[(i64, i64)], perm: &[usize]) -> Result<Self, IetError> {
        let b = RealBasis::rational();
        let ls = lengths
            .iter()
            .map(|&(n, d)| FieldElement::from_rational(&b, crate::exactnum::rat(n, d)))
            .collect();
        Iet::new(ls, Permutation::new(perm.to_vec())?)
    }

    pub fn basis(&self) -> &Arc<RealBasis> {
        self.lengths[0].basis()
    }

    pub fn lengths(&self) -> &[FieldElement] {
        &self.lengths
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn m(&self) -> usize {
        self.lengths.len()
    }

    pub fn total_length(&self) -> &FieldElement {
        &self.total
    }

    /// Left endpoints of `I_1, .., I_m`.
    pub fn interval_starts(&self) -> &[FieldElement] {
        &self.starts
    }

    /// Translation applied on each interval.
    pub fn shifts(&self) -> &[FieldElement] {
        &self.shifts
    }

    fn check_domain(&self, x: &FieldElement) -> Result<(), IetError> {
        let out = || IetError::OutOfDomain(x.to_string(), self.total.to_string());
        if x.sign()? == Ordering::Less || x.cmp_exact(&self.total)? != Ordering::Less {
            return Err(out());
        }
        Ok(())
    }

    /// Index (0-based) of the interval containing `x`; discontinuity points
    /// belong to the interval on their right.
    pub fn locate(&self, x: &FieldElement) -> Result<usize, IetError> {
        self.check_domain(x)?;
        locate_in(&self.starts, x)
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement, IetError> {
        let j = self.locate(x)?;
        Ok(x + &self.shifts[j])
    }

    pub fn apply_inverse(&self, y: &FieldElement) -> Result<FieldElement, IetError> {
        self.check_domain(y)?;
        let inv = self.perm.inverse();
        let image_starts: Vec<FieldElement> = (1..=self.m())
            .map(|pos| {
                let j = inv.image(pos) - 1;
                &self.starts[j] + &self.shifts[j]
            })
            .collect();
        let pos = locate_in(&image_starts, y)?;
        let j = inv.image(pos + 1) - 1;
        Ok(y - &self.shifts[j])
    }

    /// `[x, T x, .., T^n x]`, exactly.
    pub fn orbit(&self, x: &FieldElement, n: usize) -> Result<Vec<FieldElement>, IetError> {
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = x.clone();
        self.check_domain(&cur)?;
        out.push(cur.clone());
        for _ in 0..n {
            cur = self.apply(&cur)?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// True iff the lengths are linearly independent over the rationals.
    pub fn lengths_rationally_independent(&self) -> bool {
        let rows: Vec<_> = self.lengths.iter().map(|l| l.coords().to_vec()).collect();
        rank_over_q(&rows).map(|r| r == self.m()).unwrap_or(false)
    }

    pub fn sigma_decomposition(&self) -> SigmaDecomposition {
        self.perm.sigma_decomposition()
    }

    pub fn to_float(&self) -> FloatIet {
        FloatIet::new(
            self.lengths.iter().map(FieldElement::to_f64).collect(),
            self.perm.clone(),
        )
    }
}

fn locate_in(starts: &[FieldElement], x: &FieldElement) -> Result<usize, IetError> {
    // last start <= x
    let (mut lo, mut hi) = (0usize, starts.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if starts[mid].cmp_exact(x)? == Ordering::Greater {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// Double precision twin of [`Iet`] for long orbits.
#[derive(Debug, Clone)]
pub struct FloatIet {
    lengths: Vec<f64>,
    perm: Permutation,
    starts: Vec<f64>,
    shifts: Vec<f64>,
    total: f64,
}

impl FloatIet {
    pub fn new(lengths: Vec<f64>, perm: Permutation) -> Self {
        let m = lengths.len();
        let mut starts = Vec::with_capacity(m);
        let mut acc = 0.0;
        for l in &lengths {
            starts.push(acc);
            acc += l;
        }
        let inv = perm.inverse();
        let mut image_starts = vec![0.0; m];
        let mut acc2 = 0.0;
        for pos in 1..=m {
            let j = inv.image(pos) - 1;
            image_starts[j] = acc2;
            acc2 += lengths[j];
        }
        let shifts = image_starts.iter().zip(&starts).map(|(a, b)| a - b).collect();
        FloatIet {
            lengths,
            perm,
            starts,
            shifts,
            total: acc,
        }
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn total_length(&self) -> f64 {
        self.total
    }

    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    pub fn locate(&self, x: f64) -> usize {
        match self.starts.partition_point(|&s| s <= x) {
            0 => 0,
            k => k - 1,
        }
    }

    /// One step; the result is wrapped back into `[0, |lambda|)` to absorb
    /// rounding at the right end.
    pub fn apply(&self, x: f64) -> f64 {
        let y = x + self.shifts[self.locate(x)];
        if y >= self.total {
            y - self.total
        } else if y < 0.0 {
            y + self.total
        } else {
            y
        }
    }

    pub fn orbit(&self, x: f64, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = x;
        out.push(cur);
        for _ in 0..n {
            cur = self.apply(cur);
            out.push(cur);
        }
        out
    }
}

/// On-disk form: `{ "perm": [4,2,3,1], "lengths": [<FieldElement>, ..] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IetJson {
    pub perm: Permutation,
    pub lengths: Vec<FieldElement>,
}

impl IetJson {
    pub fn from_iet(iet: &Iet) -> Self {
        IetJson {
            perm: iet.perm.clone(),
            lengths: iet.lengths.clone(),
        }
    }

    pub fn into_iet(self) -> Result<Iet, IetError> {
        let (_, lengths) = unify_basis(self.lengths)?;
        Iet::new(lengths, self.perm)
    }
}
