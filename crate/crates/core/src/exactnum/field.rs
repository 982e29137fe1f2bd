use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};

use super::{int, ExactError, Rational, HINT_TIE_TOLERANCE};

/// A finite list of reals assumed linearly independent over the rationals.
///
/// The first label is always the constant `1`.
#[derive(Debug, Clone)]
pub struct RealBasis {
    labels: Vec<String>,
    hints: Vec<f64>,
}

impl PartialEq for RealBasis {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.hints.len() == other.hints.len()
            && self
                .hints
                .iter()
                .zip(&other.hints)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl RealBasis {
    /// Builds a basis from `1` followed by the given symbols.
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, f64)>) -> Result<Arc<Self>, ExactError> {
        let mut labels = vec!["1".to_string()];
        let mut hints = vec![1.0];
        for (label, hint) in symbols {
            labels.push(label.into());
            hints.push(hint);
        }
        Self::from_parts(labels, hints)
    }

    pub fn from_parts(labels: Vec<String>, hints: Vec<f64>) -> Result<Arc<Self>, ExactError> {
        if labels.is_empty() || labels.len() != hints.len() {
            return Err(ExactError::InvalidBasis("labels and hints must be non-empty and of equal length".into()));
        }
        if labels[0] != "1" || hints[0] != 1.0 {
            return Err(ExactError::InvalidBasis("first basis element must be the constant 1".into()));
        }
        let mut seen = HashSet::new();
        for (label, hint) in labels.iter().zip(&hints) {
            if !seen.insert(label.as_str()) {
                return Err(ExactError::InvalidBasis(format!("duplicate label {label:?}")));
            }
            if !hint.is_finite() || *hint == 0.0 {
                return Err(ExactError::InvalidBasis(format!("hint for {label:?} must be finite and nonzero")));
            }
        }
        Ok(Arc::new(RealBasis { labels, hints }))
    }

    /// The basis `{1}`: plain rationals.
    pub fn rational() -> Arc<Self> {
        Arc::new(RealBasis {
            labels: vec!["1".into()],
            hints: vec![1.0],
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn hints(&self) -> &[f64] {
        &self.hints
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn same_basis(a: &Arc<RealBasis>, b: &Arc<RealBasis>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A real number `sum_i coords[i] * basis[i]` with rational coordinates.
#[derive(Clone)]
pub struct FieldElement {
    basis: Arc<RealBasis>,
    coords: Vec<Rational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, label) in self.coords.iter().zip(self.basis.labels()) {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if label == "1" {
                write!(f, "{mag}")?;
            } else if mag == int(1) {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}*{label}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        same_basis(&self.basis, &other.basis) && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(basis: Arc<RealBasis>, coords: Vec<Rational>) -> Result<Self, ExactError> {
        if coords.len() != basis.len() {
            return Err(ExactError::DimensionMismatch(coords.len(), basis.len()));
        }
        Ok(FieldElement { basis, coords })
    }

    pub fn zero(basis: &Arc<RealBasis>) -> Self {
        FieldElement {
            basis: basis.clone(),
            coords: vec![Rational::zero(); basis.len()],
        }
    }

    pub fn from_rational(basis: &Arc<RealBasis>, q: Rational) -> Self {
        let mut x = Self::zero(basis);
        x.coords[0] = q;
        x
    }

    pub fn from_int(basis: &Arc<RealBasis>, n: i64) -> Self {
        Self::from_rational(basis, int(n))
    }

    /// `q * basis[index]`.
    pub fn symbol(basis: &Arc<RealBasis>, index: usize, q: Rational) -> Self {
        let mut x = Self::zero(basis);
        x.coords[index] = q;
        x
    }

    /// The element named by `label`, with coefficient one.
    pub fn named(basis: &Arc<RealBasis>, label: &str) -> Option<Self> {
        basis.index_of(label).map(|i| Self::symbol(basis, i, int(1)))
    }

    pub fn basis(&self) -> &Arc<RealBasis> {
        &self.basis
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// True when only the coordinate of `1` can be nonzero.
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then(|| &self.coords[0])
    }

    /// Returns `Some((index, q))` when the element is `q * basis[index]` for a
    /// single basis element (zero maps to index 0).
    pub fn as_monomial(&self) -> Option<(usize, Rational)> {
        let nz: Vec<usize> = (0..self.coords.len()).filter(|&i| !self.coords[i].is_zero()).collect();
        match nz.as_slice() {
            [] => Some((0, Rational::zero())),
            [i] => Some((*i, self.coords[*i].clone())),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.coords
            .iter()
            .zip(self.basis.hints())
            .map(|(c, h)| c.to_f64().unwrap_or(f64::NAN) * h)
            .sum()
    }

    /// Sum of the magnitudes of the individual terms; the natural scale for
    /// judging cancellation in [`to_f64`](Self::to_f64).
    pub fn magnitude_scale(&self) -> f64 {
        self.coords
            .iter()
            .zip(self.basis.hints())
            .map(|(c, h)| (c.to_f64().unwrap_or(f64::NAN) * h).abs())
            .sum()
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if same_basis(&self.basis, &other.basis) {
            Ok(())
        } else {
            Err(ExactError::BasisMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(FieldElement {
            basis: self.basis.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(FieldElement {
            basis: self.basis.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        FieldElement {
            basis: self.basis.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&int(n))
    }

    /// Product of two elements, available when at least one factor is
    /// rational, or when the basis is `{1}`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        Err(ExactError::UnrepresentableProduct(format!("({self}) * ({other})")))
    }

    /// Quotient by a rational element.
    pub fn try_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        match other.as_rational() {
            Some(q) if q.is_zero() => Err(ExactError::DivisionByZero),
            Some(q) => Ok(self.scale(&q.recip())),
            None => {
                // x / y is rational when x is a rational multiple of y.
                if let Some(r) = self.rational_ratio(other) {
                    return Ok(FieldElement::from_rational(&self.basis, r));
                }
                Err(ExactError::UnrepresentableProduct(format!("({self}) / ({other})")))
            }
        }
    }

    /// If `self = r * other` for a rational `r` (and `other != 0`), returns `r`.
    pub fn rational_ratio(&self, other: &Self) -> Option<Rational> {
        if !same_basis(&self.basis, &other.basis) || other.is_zero() {
            return None;
        }
        let pivot = other.coords.iter().position(|c| !c.is_zero())?;
        let r = &self.coords[pivot] / &other.coords[pivot];
        let proportional = self
            .coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| *a == b * &r);
        proportional.then_some(r)
    }

    /// Exact sign, decided by the float hint unless the hint is within the
    /// tie tolerance of zero, in which case the element must be exactly zero.
    pub fn sign(&self) -> Result<Ordering, ExactError> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(q) = self.as_rational() {
            return Ok(if q.is_positive() { Ordering::Greater } else { Ordering::Less });
        }
        let v = self.to_f64();
        let scale = self.magnitude_scale();
        if v.abs() > HINT_TIE_TOLERANCE * scale {
            Ok(if v > 0.0 { Ordering::Greater } else { Ordering::Less })
        } else {
            Err(ExactError::AmbiguousComparison(v))
        }
    }

    pub fn is_positive(&self) -> Result<bool, ExactError> {
        Ok(self.sign()? == Ordering::Greater)
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering, ExactError> {
        self.checked_sub(other)?.sign()
    }

    /// Floor of the value, certified exactly.
    pub fn floor(&self) -> Result<Rational, ExactError> {
        if let Some(q) = self.as_rational() {
            return Ok(q.floor());
        }
        let guess = Rational::from_float(self.to_f64().floor())
            .ok_or_else(|| ExactError::Parse("non-finite value".into()))?;
        // value is irrational here, so it is never an integer: check guess < x < guess+1
        let lo = self.checked_sub(&FieldElement::from_rational(&self.basis, guess.clone()))?;
        match lo.sign()? {
            Ordering::Less => Ok(guess - int(1)),
            _ => {
                let hi = lo.checked_sub(&FieldElement::from_int(&self.basis, 1))?;
                if hi.sign()? == Ordering::Less {
                    Ok(guess)
                } else {
                    Ok(guess + int(1))
                }
            }
        }
    }

    /// Re-expresses the element over a larger basis containing all of this
    /// element's labels.
    pub fn rebase(&self, target: &Arc<RealBasis>) -> Result<Self, ExactError> {
        let mut out = FieldElement::zero(target);
        for (c, label) in self.coords.iter().zip(self.basis.labels()) {
            if c.is_zero() {
                continue;
            }
            let idx = target
                .index_of(label)
                .ok_or_else(|| ExactError::InvalidBasis(format!("label {label:?} missing from target basis")))?;
            out.coords[idx] = c.clone();
        }
        Ok(out)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    /// Panics on basis mismatch; use [`FieldElement::checked_add`] for
    /// untrusted inputs.
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("basis mismatch in FieldElement addition")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("basis mismatch in FieldElement subtraction")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            basis: self.basis.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// A point or vector in the plane with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vec2 {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl Vec2 {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        Vec2 { x, y }
    }

    pub fn zero(basis: &Arc<RealBasis>) -> Self {
        Vec2::new(FieldElement::zero(basis), FieldElement::zero(basis))
    }

    pub fn from_rationals(basis: &Arc<RealBasis>, x: Rational, y: Rational) -> Self {
        Vec2::new(FieldElement::from_rational(basis, x), FieldElement::from_rational(basis, y))
    }

    pub fn basis(&self) -> &Arc<RealBasis> {
        self.x.basis()
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, q: &Rational) -> Vec2 {
        Vec2::new(self.x.scale(q), self.y.scale(q))
    }

    pub fn checked_add(&self, o: &Vec2) -> Result<Vec2, ExactError> {
        Ok(Vec2::new(self.x.checked_add(&o.x)?, self.y.checked_add(&o.y)?))
    }

    pub fn checked_sub(&self, o: &Vec2) -> Result<Vec2, ExactError> {
        Ok(Vec2::new(self.x.checked_sub(&o.x)?, self.y.checked_sub(&o.y)?))
    }

    /// `self.x * o.y - self.y * o.x`, when representable.
    pub fn try_cross(&self, o: &Vec2) -> Result<FieldElement, ExactError> {
        Ok(&self.x.try_mul(&o.y)? - &self.y.try_mul(&o.x)?)
    }

    pub fn rebase(&self, target: &Arc<RealBasis>) -> Result<Vec2, ExactError> {
        Ok(Vec2::new(self.x.rebase(target)?, self.y.rebase(target)?))
    }
}

impl Add for &Vec2 {
    type Output = Vec2;
    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn beta_basis() -> Arc<RealBasis> {
        RealBasis::new([("b1", std::f64::consts::SQRT_2), ("b2", 3f64.sqrt())]).unwrap()
    }

    #[test]
    fn halves_sum_to_one() {
        let b = RealBasis::rational();
        let h = FieldElement::from_rational(&b, rat(1, 2));
        assert_eq!(h.checked_add(&h).unwrap(), FieldElement::from_int(&b, 1));
    }

    #[test]
    fn self_difference_is_zero() {
        let b = beta_basis();
        let x = FieldElement::new(b.clone(), vec![rat(3, 7), rat(-2, 5), rat(9, 4)]).unwrap();
        assert!(x.checked_sub(&x).unwrap().is_zero());
    }

    #[test]
    fn scaling_distributes() {
        let b = beta_basis();
        let x = &FieldElement::from_int(&b, 1) + &FieldElement::named(&b, "b1").unwrap();
        let y = x.scale(&rat(3, 2));
        assert_eq!(y.coords(), &[rat(3, 2), rat(3, 2), rat(0, 1)]);
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let a = FieldElement::from_int(&beta_basis(), 1);
        let b = FieldElement::from_int(&RealBasis::rational(), 1);
        assert_eq!(a.checked_add(&b), Err(ExactError::BasisMismatch));
    }

    #[test]
    fn invalid_bases_rejected() {
        assert!(RealBasis::from_parts(vec!["x".into()], vec![1.0]).is_err());
        assert!(RealBasis::new([("a", 1.5), ("a", 2.5)]).is_err());
        assert!(RealBasis::new([("a", f64::NAN)]).is_err());
        assert!(RealBasis::new([("a", 0.0)]).is_err());
    }

    #[test]
    fn sign_uses_exact_zero_on_ties() {
        let b = RealBasis::new([("near_one", 1.0 + 1e-13)]).unwrap();
        let x = &FieldElement::named(&b, "near_one").unwrap() - &FieldElement::from_int(&b, 1);
        assert!(matches!(x.sign(), Err(ExactError::AmbiguousComparison(_))));
        let z = &x - &x;
        assert_eq!(z.sign().unwrap(), Ordering::Equal);
        let y = FieldElement::named(&beta_basis(), "b1").unwrap();
        assert_eq!(y.sign().unwrap(), Ordering::Greater);
    }

    #[test]
    fn products_need_a_rational_factor() {
        let b = beta_basis();
        let s = FieldElement::named(&b, "b1").unwrap();
        let two = FieldElement::from_int(&b, 2);
        assert_eq!(s.try_mul(&two).unwrap(), s.scale_int(2));
        assert!(matches!(s.try_mul(&s), Err(ExactError::UnrepresentableProduct(_))));
        assert_eq!(s.scale_int(3).try_div(&s).unwrap(), FieldElement::from_int(&b, 3));
    }

    #[test]
    fn floor_is_certified() {
        let b = beta_basis();
        let s = FieldElement::named(&b, "b1").unwrap().scale_int(5); // 7.07..
        assert_eq!(s.floor().unwrap(), int(7));
        assert_eq!((-&s).floor().unwrap(), int(-8));
        assert_eq!(FieldElement::from_rational(&b, rat(-1, 2)).floor().unwrap(), int(-1));
    }

    #[test]
    fn display_is_readable() {
        let b = beta_basis();
        let x = FieldElement::new(b, vec![rat(2, 1), rat(-1, 1), rat(1, 3)]).unwrap();
        assert_eq!(x.to_string(), "2 - b1 + 1/3*b2");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        #[derive(Debug, Clone)]
        enum Op {
            Add(usize),
            Sub(usize),
            Scale(i64, i64),
            Neg,
        }

        fn op() -> impl Strategy<Value = Op> {
            prop_oneof![
                (0usize..3).prop_map(Op::Add),
                (0usize..3).prop_map(Op::Sub),
                (-7i64..=7, 1i64..=7).prop_map(|(n, d)| Op::Scale(n, d)),
                Just(Op::Neg),
            ]
        }

        proptest! {
            #[test]
            fn exact_and_float_evaluation_agree(ops in prop::collection::vec(op(), 1..100)) {
                let b = beta_basis();
                let atoms = [
                    FieldElement::from_rational(&b, rat(2, 3)),
                    FieldElement::named(&b, "b1").unwrap(),
                    FieldElement::named(&b, "b2").unwrap().scale(&rat(-1, 5)),
                ];
                let mut exact = FieldElement::from_int(&b, 1);
                let mut float = 1.0f64;
                let mut scale = 1.0f64;
                for o in &ops {
                    match o {
                        Op::Add(i) => { exact = &exact + &atoms[*i]; float += atoms[*i].to_f64(); scale += atoms[*i].to_f64().abs(); }
                        Op::Sub(i) => { exact = &exact - &atoms[*i]; float -= atoms[*i].to_f64(); scale += atoms[*i].to_f64().abs(); }
                        Op::Scale(n, d) => {
                            exact = exact.scale(&rat(*n, *d));
                            float *= *n as f64 / *d as f64;
                            scale *= (*n as f64 / *d as f64).abs().max(1.0);
                        }
                        Op::Neg => { exact = -&exact; float = -float; }
                    }
                }
                let diff = (exact.to_f64() - float).abs();
                prop_assert!(diff <= 1e-9 * scale.max(exact.magnitude_scale()).max(1.0), "diff {diff}");
            }
        }
    }
}
