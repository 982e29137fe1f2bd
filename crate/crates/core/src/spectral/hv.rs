//! Horizontal-vertical surfaces: classification by `a / b`, the explicit
//! eigenfunctions `e(jx + ky)` of the `b = 2a` case and the rectangle counts
//! along convergents of `a / b`.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{rat, FieldElement};
use crate::flow::{Direction, Engine, FlowError};
use crate::surface::TranslationSurface;

use super::{e, random_point, Observable, SpectralError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvClass {
    /// `a / b` rational
    AlmostIntegrable,
    /// `a / b` irrational
    WeakMixing,
}

impl std::fmt::Display for HvClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HvClass::AlmostIntegrable => "AlmostIntegrable",
            HvClass::WeakMixing => "WeakMixing",
        })
    }
}

/// Exact rationality test of `a / b`.
pub fn hv_classify(a: &FieldElement, b: &FieldElement) -> Result<HvClass, SpectralError> {
    let (_, ab) = crate::exactnum::merge_bases(vec![a.clone(), b.clone()])?;
    let (a, b) = (&ab[0], &ab[1]);
    if !a.is_positive()? || a.cmp_exact(b)? != std::cmp::Ordering::Less {
        return Err(SpectralError::BadParameters(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    Ok(match a.rational_ratio(b) {
        Some(_) => HvClass::AlmostIntegrable,
        None => HvClass::WeakMixing,
    })
}

/// `alpha_jk = j cos(theta) + k sin(theta)`; `exact` is filled in when the
/// direction vector has rational components of length one.
#[derive(Debug, Clone, PartialEq)]
pub struct HvEigenvalue {
    pub j: i64,
    pub k: i64,
    pub alpha: f64,
    pub exact: Option<FieldElement>,
}

pub fn hv_eigenvalues(
    theta: &Direction,
    js: std::ops::RangeInclusive<i64>,
    ks: std::ops::RangeInclusive<i64>,
) -> Vec<HvEigenvalue> {
    let v = theta.vector();
    let unit = match (v.x.as_rational(), v.y.as_rational()) {
        (Some(x), Some(y)) if x * x + y * y == rat(1, 1) => Some((x.clone(), y.clone())),
        _ => None,
    };
    let [dx, dy] = theta.to_f64();
    let norm = dx.hypot(dy);
    let (c, s) = (dx / norm, dy / norm);
    let mut out = Vec::new();
    for j in js {
        for k in ks.clone() {
            let exact = unit.as_ref().map(|(x, y)| {
                FieldElement::from_rational(v.x.basis(), x * rat(j, 1) + y * rat(k, 1))
            });
            out.push(HvEigenvalue { j, k, alpha: j as f64 * c + k as f64 * s, exact });
        }
    }
    out
}

/// Largest `|f(phi_t p) - e(alpha t) f(p)|` for `f = e(jx + ky)` and
/// `alpha = j cos(theta) + k sin(theta)`, over random `p` and `t <= t_max`,
/// flowing at unit speed. Orbits that hit a cone point are redrawn.
pub fn verify_hv_eigenfunction(
    surface: &TranslationSurface,
    j: i64,
    k: i64,
    theta: f64,
    sample_count: usize,
    t_max: f64,
    seed: u64,
) -> Result<f64, SpectralError> {
    if sample_count == 0 || !(t_max > 0.0) {
        return Err(SpectralError::BadParameters("samples and t_max must be positive".into()));
    }
    let f = Observable::Fourier { j, k };
    let d = [theta.cos(), theta.sin()];
    let alpha = j as f64 * d[0] + k as f64 * d[1];
    let engine = Engine::new(surface);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut redraws = 0;
    while done < sample_count {
        let (poly, p) = random_point(surface, &mut rng);
        let t = rng.gen_range(0.0..=t_max);
        let (_, q) = match engine.advance(poly, p, d, t) {
            Ok(r) => r,
            Err(FlowError::SingularOrbit(_)) if redraws < 100 * sample_count => {
                redraws += 1;
                continue;
            }
            Err(err) => return Err(err.into()),
        };
        let lhs: Complex64 = f.on_chart(q)?;
        let rhs = e((alpha * t).rem_euclid(1.0)) * f.on_chart(p)?;
        worst = worst.max((lhs - rhs).norm());
        done += 1;
    }
    Ok(worst)
}

/// `N_i = m_i^2 - n_i^2` for a convergent `n_i / m_i` of `a / b`.
pub fn fundamental_rectangle_count(n: i64, m: i64) -> Result<u64, SpectralError> {
    if n <= 0 || n >= m || num_integer::gcd(n, m) != 1 {
        return Err(SpectralError::BadConvergent(n, m));
    }
    let (n, m) = (n as i128, m as i128);
    u64::try_from(m * m - n * n).map_err(|_| SpectralError::BadConvergent(n as i64, m as i64))
}

/// Side `b / m_i` of the fundamental squares.
pub fn fundamental_rectangle_side(b: &FieldElement, m: i64) -> Result<FieldElement, SpectralError> {
    if m <= 0 {
        return Err(SpectralError::BadConvergent(0, m));
    }
    Ok(b.scale(&rat(1, m)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentCount {
    pub n: i64,
    pub m: i64,
    pub count: u64,
}

/// Counts along the convergents `n_i / m_i` of `ratio` in `(0, 1)`, skipping
/// the leading convergents outside `0 < n < m`.
pub fn convergent_counts(ratio: &FieldElement, count: usize) -> Result<Vec<ConvergentCount>, SpectralError> {
    let cs = ratio.convergents(count + 2)?;
    let mut out = Vec::new();
    for c in cs {
        let (Some(n), Some(m)) = (c.num.to_i64(), c.den.to_i64()) else { break };
        if let Ok(count) = fundamental_rectangle_count(n, m) {
            out.push(ConvergentCount { n, m, count });
        }
    }
    out.truncate(count);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{RealBasis, Vec2};
    use crate::surface::build_hv_surface;

    fn beta() -> std::sync::Arc<RealBasis> {
        RealBasis::new([("beta1", std::f64::consts::SQRT_2 - 1.0)]).unwrap()
    }

    #[test]
    fn classification() {
        let r = RealBasis::rational();
        let q = |n, d| FieldElement::from_rational(&r, rat(n, d));
        assert_eq!(hv_classify(&q(1, 1), &q(2, 1)).unwrap(), HvClass::AlmostIntegrable);
        assert_eq!(hv_classify(&q(2, 3), &q(4, 3)).unwrap(), HvClass::AlmostIntegrable);
        let b = beta();
        let one = FieldElement::from_int(&b, 1);
        let bb = &one + &FieldElement::named(&b, "beta1").unwrap();
        assert_eq!(hv_classify(&one, &bb).unwrap(), HvClass::WeakMixing);
        assert!(matches!(hv_classify(&q(2, 1), &q(1, 1)), Err(SpectralError::BadParameters(_))));
    }

    #[test]
    fn eigenvalue_tables() {
        let r = RealBasis::rational();
        let up = Direction::vertical(&r);
        for ev in hv_eigenvalues(&up, -2..=2, -2..=2) {
            assert!((ev.alpha - ev.k as f64).abs() < 1e-15);
            assert_eq!(ev.exact.unwrap(), FieldElement::from_int(&r, ev.k));
        }
        let diag = Direction::new(Vec2::from_rationals(&r, rat(1, 1), rat(1, 1))).unwrap();
        for ev in hv_eigenvalues(&diag, -2..=2, -2..=2) {
            assert!((ev.alpha - (ev.j + ev.k) as f64 / 2f64.sqrt()).abs() < 1e-12);
            assert!(ev.exact.is_none());
        }
        let pyth = Direction::new(Vec2::from_rationals(&r, rat(3, 5), rat(4, 5))).unwrap();
        let ev = &hv_eigenvalues(&pyth, 1..=1, 1..=1)[0];
        assert_eq!(ev.exact.as_ref().unwrap().as_rational().unwrap(), &rat(7, 5));
        let zero = &hv_eigenvalues(&pyth, 0..=0, 0..=0)[0];
        assert_eq!(zero.alpha, 0.0);
    }

    #[test]
    fn eigenfunctions_of_the_integral_case() {
        let r = RealBasis::rational();
        let s = build_hv_surface(&FieldElement::from_int(&r, 1), &FieldElement::from_int(&r, 2)).unwrap();
        assert_eq!(verify_hv_eigenfunction(&s, 0, 0, 0.7, 20, 10.0, 1).unwrap(), 0.0);
        assert!(verify_hv_eigenfunction(&s, 1, 0, 0.7, 50, 20.0, 2).unwrap() < 1e-9);
    }

    #[test]
    fn irrational_notch_breaks_the_eigenfunction() {
        let b = beta();
        let one = FieldElement::from_int(&b, 1);
        let bb = &one + &FieldElement::named(&b, "beta1").unwrap();
        let s = build_hv_surface(&one, &bb).unwrap();
        assert!(verify_hv_eigenfunction(&s, 1, 0, 0.7, 50, 20.0, 3).unwrap() > 0.5);
    }

    #[test]
    fn rectangle_counts() {
        assert_eq!(fundamental_rectangle_count(1, 2).unwrap(), 3);
        assert_eq!(fundamental_rectangle_count(3, 5).unwrap(), 16);
        for (n, m) in [(0, 2), (2, 2), (2, 4), (3, 2)] {
            assert!(matches!(fundamental_rectangle_count(n, m), Err(SpectralError::BadConvergent(..))));
        }
        let r = RealBasis::rational();
        assert_eq!(
            fundamental_rectangle_side(&FieldElement::from_int(&r, 2), 5).unwrap(),
            FieldElement::from_rational(&r, rat(2, 5))
        );
        let b = RealBasis::new([("s", 0.5f64.sqrt())]).unwrap();
        let cs = convergent_counts(&FieldElement::named(&b, "s").unwrap(), 10).unwrap();
        assert_eq!(cs.len(), 10);
        assert_eq!((cs[0].n, cs[0].m, cs[0].count), (2, 3, 5));
        assert!(cs.windows(2).all(|w| w[0].count < w[1].count));
    }
}
