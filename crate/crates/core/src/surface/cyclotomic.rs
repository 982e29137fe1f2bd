//! Exact cosines of rational multiples of `pi`.
//!
//! `cos(2 pi j / M)` is expressed over the rational basis
//! `{cos(2 pi k / M) : 0 <= k < phi(M)/2}` of the real cyclotomic field, by
//! reducing `zeta^j + zeta^-j` modulo the cyclotomic polynomial `Phi_M`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::exactnum::{solve_exact, ExactError, FieldElement, Rational, RealBasis};

type Poly = Vec<Rational>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Quotient and remainder of `a / b` for monic `b`.
fn divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].clone();
        if c.is_zero() {
            continue;
        }
        q[i - db] = c.clone();
        for (k, bk) in b.iter().enumerate() {
            r[i - db + k] = &r[i - db + k] - &c * bk;
        }
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn cyclotomic_poly(m: usize) -> Poly {
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut p: Poly = vec![Rational::zero(); m + 1];
    p[0] = -Rational::one();
    p[m] = Rational::one();
    for d in 1..m {
        if m % d == 0 {
            p = divmod(&p, &cyclotomic_poly(d)).0;
        }
    }
    trim(&mut p);
    p
}

fn totient(m: usize) -> usize {
    (1..=m).filter(|&k| num_integer::gcd(k, m) == 1).count()
}

pub(crate) struct CosTable {
    m: usize,
    phi_m: Poly,
    columns: Vec<Vec<Rational>>,
    basis: Arc<RealBasis>,
    cache: HashMap<usize, Vec<Rational>>,
}

impl CosTable {
    pub(crate) fn new(m: usize) -> Result<Self, ExactError> {
        assert!(m >= 3);
        let phi_m = cyclotomic_poly(m);
        let n = totient(m);
        let d = n / 2;
        let mut table = CosTable {
            m,
            phi_m,
            columns: Vec::new(),
            basis: RealBasis::rational(),
            cache: HashMap::new(),
        };
        table.columns = (0..d).map(|k| table.zeta_sum(k)).collect();
        let mut labels = vec!["1".to_string()];
        let mut hints = vec![1.0];
        for k in 1..d {
            labels.push(format!("cos(2pi*{k}/{m})"));
            hints.push((std::f64::consts::TAU * k as f64 / m as f64).cos());
        }
        table.basis = RealBasis::from_parts(labels, hints)?;
        Ok(table)
    }

    /// `zeta^j + zeta^-j` reduced mod `Phi_M`, padded to `phi(M)` coefficients.
    fn zeta_sum(&self, j: usize) -> Vec<Rational> {
        let j = j % self.m;
        let mut p: Poly = vec![Rational::zero(); self.m + 1];
        p[j] = &p[j] + Rational::one();
        let jm = (self.m - j) % self.m;
        p[jm] = &p[jm] + Rational::one();
        let (_, mut r) = divmod(&p, &self.phi_m);
        r.resize(self.phi_m.len() - 1, Rational::zero());
        r
    }

    /// Coordinates of `cos(2 pi j / M)` in the table's basis.
    pub(crate) fn cos(&mut self, j: i64) -> FieldElement {
        let j = j.rem_euclid(self.m as i64) as usize;
        if !self.cache.contains_key(&j) {
            let target = self.zeta_sum(j);
            let coords = solve_exact(&self.columns, &target).expect("cosines span the real cyclotomic field");
            self.cache.insert(j, coords);
        }
        FieldElement::new(self.basis.clone(), self.cache[&j].clone()).expect("length matches basis")
    }

    /// `cos(pi * r)` and `sin(pi * r)` for `r` with denominator dividing `M/4`.
    pub(crate) fn cos_sin_pi(&mut self, r: &Rational) -> (FieldElement, FieldElement) {
        // pi * r = 2 pi * (M r / 2) / M
        let quarter = self.m as i64 / 4;
        let j = r * Rational::from_integer((2 * quarter).into());
        assert!(j.is_integer(), "angle {r} not on the table grid");
        let j: i64 = j.to_integer().try_into().expect("small index");
        (self.cos(j), self.cos(quarter - j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn cyclotomic_polynomials() {
        let ints = |p: Poly| p.into_iter().map(|c| c.to_integer().try_into().unwrap()).collect::<Vec<i64>>();
        assert_eq!(ints(cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(ints(cyclotomic_poly(4)), vec![1, 0, 1]);
        assert_eq!(ints(cyclotomic_poly(12)), vec![1, 0, -1, 0, 1]);
        assert_eq!(ints(cyclotomic_poly(8)), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn cosines_match_floats() {
        for m in [8usize, 12, 16, 24, 20] {
            let mut t = CosTable::new(m).unwrap();
            for j in 0..m as i64 {
                let c = t.cos(j);
                let expect = (std::f64::consts::TAU * j as f64 / m as f64).cos();
                assert!((c.to_f64() - expect).abs() < 1e-12, "m={m} j={j}");
            }
        }
    }

    #[test]
    fn known_values() {
        let mut t = CosTable::new(12).unwrap();
        // cos(pi/2) = 0, cos(pi/3) = 1/2, cos(pi) = -1
        assert!(t.cos(3).is_zero());
        assert_eq!(t.cos(2).as_rational(), Some(&rat(1, 2)));
        assert_eq!(t.cos(6).as_rational(), Some(&int(-1)));
        let (c, s) = t.cos_sin_pi(&rat(1, 3));
        assert_eq!(c.as_rational(), Some(&rat(1, 2)));
        assert!((s.to_f64() - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }
}
