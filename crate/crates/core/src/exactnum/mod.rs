//! Exact scalars for certificates.
//!
//! Real parameters (interval lengths, return times, slit vectors) are
//! [`FieldElement`]s: rational coordinate vectors over a [`RealBasis`] of reals
//! that the caller declares to be linearly independent over the rationals.
//! Equality and linear independence are then decided exactly; the float hints
//! attached to the basis are only used to order elements and to drive
//! simulations.

mod contfrac;
mod field;
pub mod json;
mod linalg;

use std::sync::Arc;

use thiserror::Error;

pub use contfrac::{convergents_f64, convergents_rational, Convergent, MAX_FLOAT_CONVERGENTS};
pub use field::{FieldElement, RealBasis, Vec2};
pub use linalg::{rank_over_q, solve_exact};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for `num/den` as a [`Rational`]. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer [`Rational`].
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("field elements live over different bases")]
    BasisMismatch,
    #[error("empty input")]
    EmptyInput,
    #[error("vectors have inconsistent dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("input must be strictly positive")]
    NonPositiveInput,
    #[error("cannot certify the ordering of two nearly equal values (difference ~ {0:e})")]
    AmbiguousComparison(f64),
    #[error("product leaves the span of the basis: {0}")]
    UnrepresentableProduct(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("malformed number: {0}")]
    Parse(String),
}

/// Relative threshold below which float hints are not trusted to order two
/// values.
pub const HINT_TIE_TOLERANCE: f64 = 1e-9;

/// Moves elements over possibly different bases onto the union of their
/// bases. Labels shared between bases must carry identical hints.
pub fn merge_bases(xs: Vec<FieldElement>) -> Result<(Arc<RealBasis>, Vec<FieldElement>), ExactError> {
    let mut labels: Vec<String> = vec!["1".into()];
    let mut hints: Vec<f64> = vec![1.0];
    for x in &xs {
        for (l, h) in x.basis().labels().iter().zip(x.basis().hints()) {
            match labels.iter().position(|m| m == l) {
                Some(i) if hints[i].to_bits() != h.to_bits() => {
                    return Err(ExactError::InvalidBasis(format!("label {l:?} declared with two hints")));
                }
                Some(_) => {}
                None => {
                    labels.push(l.clone());
                    hints.push(*h);
                }
            }
        }
    }
    let basis = RealBasis::from_parts(labels, hints)?;
    let out = xs.iter().map(|x| x.rebase(&basis)).collect::<Result<_, _>>()?;
    Ok((basis, out))
}

/// True iff no nonzero integer pair `(p, q)` gives `p*u + q*v = 0`.
///
/// Over a rationally independent basis this is the same as the coordinate
/// vectors of `u` and `v` having rank two.
pub fn integrally_independent(u: &FieldElement, v: &FieldElement) -> Result<bool, ExactError> {
    if **u.basis() != **v.basis() {
        return Err(ExactError::BasisMismatch);
    }
    Ok(rank_over_q(&[u.coords().to_vec(), v.coords().to_vec()])? == 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independence_examples() {
        let b = RealBasis::new([("beta1", 0.5f64.sqrt())]).unwrap();
        let half = FieldElement::from_rational(&b, rat(1, 2));
        let beta = FieldElement::named(&b, "beta1").unwrap();
        assert!(integrally_independent(&half, &beta).unwrap());
        let u = FieldElement::from_rational(&b, rat(3, 2));
        let v = FieldElement::from_rational(&b, rat(3, 4));
        assert!(!integrally_independent(&u, &v).unwrap());
        // witness 1*u - 2*v = 0
        assert!((&u - &v.scale_int(2)).is_zero());
        let one_beta = &FieldElement::from_int(&b, 1) + &beta;
        assert!(!integrally_independent(&one_beta, &one_beta.scale_int(2)).unwrap());
    }

    #[test]
    fn independence_symmetric_and_zero_dependent() {
        let b = RealBasis::new([("a", 2f64.sqrt()), ("c", 5f64.sqrt())]).unwrap();
        let xs = [
            FieldElement::zero(&b),
            FieldElement::from_int(&b, 3),
            FieldElement::named(&b, "a").unwrap(),
            &FieldElement::named(&b, "c").unwrap() - &FieldElement::from_int(&b, 1),
        ];
        for x in &xs {
            for y in &xs {
                assert_eq!(integrally_independent(x, y).unwrap(), integrally_independent(y, x).unwrap());
            }
            assert!(!integrally_independent(x, &xs[0]).unwrap());
        }
    }

    #[test]
    fn independence_needs_common_basis() {
        let a = FieldElement::from_int(&RealBasis::rational(), 1);
        let b = FieldElement::from_int(&RealBasis::new([("s", 2.0f64.sqrt())]).unwrap(), 1);
        assert_eq!(integrally_independent(&a, &b), Err(ExactError::BasisMismatch));
    }

    #[test]
    fn merging_bases() {
        let q = FieldElement::from_rational(&RealBasis::rational(), rat(1, 2));
        let s = FieldElement::named(&RealBasis::new([("s", 0.3)]).unwrap(), "s").unwrap();
        let t = FieldElement::named(&RealBasis::new([("t", 0.7), ("s", 0.3)]).unwrap(), "s").unwrap();
        let (b, xs) = merge_bases(vec![q, s, t]).unwrap();
        assert_eq!(b.labels(), ["1", "s", "t"]);
        assert_eq!(xs[1], xs[2]);
        assert_eq!(xs[0].as_rational(), Some(&rat(1, 2)));
        let clash = FieldElement::named(&RealBasis::new([("s", 0.4)]).unwrap(), "s").unwrap();
        assert!(merge_bases(vec![xs[1].clone(), clash]).is_err());
    }
}
