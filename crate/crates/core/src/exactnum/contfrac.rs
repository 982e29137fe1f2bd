use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactError, FieldElement, Rational};

/// Upper bound on convergents produced from a float approximation.
pub const MAX_FLOAT_CONVERGENTS: usize = 40;

const FLOAT_GUARD: f64 = 1e-12;

/// A convergent `num / den` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub num: BigInt,
    pub den: BigInt,
}

impl Convergent {
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.num.to_f64().unwrap_or(f64::NAN) / self.den.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_i64_pair(&self) -> Option<(i64, i64)> {
        use num_traits::ToPrimitive;
        Some((self.num.to_i64()?, self.den.to_i64()?))
    }
}

struct Recurrence {
    h: (BigInt, BigInt),
    k: (BigInt, BigInt),
}

impl Recurrence {
    fn new() -> Self {
        // h_{-1} = 1, h_{-2} = 0; k_{-1} = 0, k_{-2} = 1
        Recurrence {
            h: (BigInt::one(), BigInt::zero()),
            k: (BigInt::zero(), BigInt::one()),
        }
    }

    fn push(&mut self, a: &BigInt) -> Convergent {
        let h = a * &self.h.0 + &self.h.1;
        let k = a * &self.k.0 + &self.k.1;
        let prev_h = std::mem::replace(&mut self.h.0, h.clone());
        let prev_k = std::mem::replace(&mut self.k.0, k.clone());
        self.h.1 = prev_h;
        self.k.1 = prev_k;
        Convergent { num: h, den: k }
    }
}

/// Convergents of a positive rational. Terminates early once the expansion is
/// exhausted.
pub fn convergents_rational(x: &Rational, count: usize) -> Result<Vec<Convergent>, ExactError> {
    if !x.is_positive() || count == 0 {
        return Err(ExactError::NonPositiveInput);
    }
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut rec = Recurrence::new();
    let mut out = Vec::new();
    while out.len() < count && !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        out.push(rec.push(&a));
        num = std::mem::replace(&mut den, r);
    }
    Ok(out)
}

/// Convergents of a positive float, at most [`MAX_FLOAT_CONVERGENTS`] of them.
/// Stops once the remainder or the approximation error falls under `1e-12`.
pub fn convergents_f64(x: f64, count: usize) -> Result<Vec<Convergent>, ExactError> {
    if !(x > 0.0) || !x.is_finite() || count == 0 {
        return Err(ExactError::NonPositiveInput);
    }
    let count = count.min(MAX_FLOAT_CONVERGENTS);
    let mut rec = Recurrence::new();
    let mut out = Vec::new();
    let mut rest = x;
    while out.len() < count {
        let a = rest.floor();
        let c = rec.push(&BigInt::from(a as i64));
        let err = (c.to_f64() - x).abs();
        out.push(c);
        let frac = rest - a;
        if frac < FLOAT_GUARD || err < FLOAT_GUARD * x {
            break;
        }
        rest = 1.0 / frac;
    }
    Ok(out)
}

impl FieldElement {
    /// Continued-fraction convergents: exact for rational elements, from the
    /// float hint otherwise.
    pub fn convergents(&self, count: usize) -> Result<Vec<Convergent>, ExactError> {
        match self.as_rational() {
            Some(q) => convergents_rational(q, count),
            None => convergents_f64(self.to_f64(), count),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, RealBasis};

    fn pairs(cs: &[Convergent]) -> Vec<(i64, i64)> {
        cs.iter().map(|c| c.as_i64_pair().unwrap()).collect()
    }

    /// Oracle: best approximations of the second kind (record minima of
    /// |q x - p| over q), found by scanning every denominator.
    fn brute_force_best(x: f64, qmax: i64) -> Vec<(i64, i64)> {
        let mut best = f64::INFINITY;
        let mut out = Vec::new();
        for q in 1..=qmax {
            let p = (x * q as f64).round() as i64;
            let e = (x * q as f64 - p as f64).abs();
            if e < best {
                best = e;
                out.push((p, q));
            }
        }
        out
    }

    #[test]
    fn sqrt2() {
        let cs = convergents_f64(2f64.sqrt(), 4).unwrap();
        assert_eq!(pairs(&cs), vec![(1, 1), (3, 2), (7, 5), (17, 12)]);
        // best approximations of the second kind coincide with convergents
        assert_eq!(brute_force_best(2f64.sqrt(), 12), vec![(1, 1), (3, 2), (7, 5), (17, 12)]);
    }

    #[test]
    fn golden_ratio() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let cs = convergents_f64(phi, 5).unwrap();
        assert_eq!(pairs(&cs), vec![(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]);
    }

    #[test]
    fn rationals_terminate() {
        let cs = convergents_rational(&rat(1, 2), 10).unwrap();
        assert_eq!(pairs(&cs), vec![(0, 1), (1, 2)]);
        let cs = convergents_rational(&rat(43, 19), 10).unwrap();
        assert_eq!(cs.last().unwrap().as_i64_pair().unwrap(), (43, 19));
    }

    #[test]
    fn field_element_dispatch() {
        let b = RealBasis::new([("s2", 2f64.sqrt())]).unwrap();
        let half = FieldElement::from_rational(&b, rat(1, 2));
        assert_eq!(pairs(&half.convergents(5).unwrap()), vec![(0, 1), (1, 2)]);
        let s2 = FieldElement::named(&b, "s2").unwrap();
        assert_eq!(pairs(&s2.convergents(4).unwrap()), vec![(1, 1), (3, 2), (7, 5), (17, 12)]);
    }

    #[test]
    fn rejects_nonpositive() {
        assert_eq!(convergents_f64(0.0, 3), Err(ExactError::NonPositiveInput));
        assert_eq!(convergents_f64(-1.5, 3), Err(ExactError::NonPositiveInput));
        assert_eq!(convergents_rational(&rat(-1, 3), 3), Err(ExactError::NonPositiveInput));
    }

    #[test]
    fn count_is_capped() {
        let cs = convergents_f64(std::f64::consts::PI, 1000).unwrap();
        assert!(cs.len() <= MAX_FLOAT_CONVERGENTS);
    }

    #[test]
    fn classical_error_bound() {
        for x in [2f64.sqrt(), std::f64::consts::E, 3f64.sqrt() / 7.0, 0.5 * 2f64.sqrt()] {
            for c in convergents_f64(x, 12).unwrap() {
                let m = num_traits::ToPrimitive::to_f64(&c.den).unwrap();
                assert!((x - c.to_f64()).abs() < 1.0 / (m * m), "x={x} conv={c:?}");
            }
        }
    }
}
