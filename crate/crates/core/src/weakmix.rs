//! Eigenvalue exclusion and the two-cycle test for weak mixing.
//!
//! A measurable eigenfunction `f(S_s x) = e(alpha s) f(x)` of a flow with
//! section map `T_(lambda, pi)` and return times `t` restricts to a solution
//! of `f(Tx) = e(nu_j) f(x)` on `I_j` with `nu = alpha t`. For almost every
//! `lambda`, Veech's obstruction forces `b_S . nu` to be an integer for every
//! cycle `S` of `sigma_pi`. So `alpha` is excluded as soon as one `b_S . alpha t`
//! is not an integer, and if two of the numbers `b_S . t` are independent with
//! integral coefficients no nonzero `alpha` survives.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::json::BasisJson;
use crate::exactnum::{integrally_independent, rank_over_q, ExactError, FieldElement, Rational};
use crate::flow::{first_return_map, Direction, FlowError, ReturnMapResult, Section};
use crate::iet::{int_dot, Iet, Permutation, SigmaDecomposition};
use crate::surface::TranslationSurface;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeakMixError {
    #[error("permutation {0} is reducible")]
    ReducibleInput(Permutation),
    #[error("{0} return times for {1} intervals")]
    TimeCountMismatch(usize, usize),
    #[error("return time {0} is not positive")]
    NonPositiveTime(usize),
    #[error("eigenvalue candidate {0} is neither rational nor a rational multiple of one basis symbol")]
    UnsupportedAlpha(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// Cycles of `sigma_pi` with their `b_S`, for an irreducible `pi`.
pub fn veech_obstruction_set(perm: &Permutation) -> Result<SigmaDecomposition, WeakMixError> {
    if !perm.is_irreducible() {
        return Err(WeakMixError::ReducibleInput(perm.clone()));
    }
    Ok(perm.sigma_decomposition())
}

fn is_integer(x: &FieldElement) -> bool {
    x.as_rational().is_some_and(|q| q.is_integer())
}

/// The cocycle `phi = e(nu_j)` on `I_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleSpec {
    pub iet: Iet,
    pub nu: Vec<FieldElement>,
}

impl CocycleSpec {
    /// `nu = alpha t`, the cocycle of a candidate flow eigenvalue.
    pub fn from_eigenvalue(iet: &Iet, alpha: &FieldElement, times: &[FieldElement]) -> Result<Self, WeakMixError> {
        if !alpha.is_rational() && alpha.as_monomial().is_none() {
            return Err(WeakMixError::UnsupportedAlpha(alpha.to_string()));
        }
        if times.len() != iet.m() {
            return Err(WeakMixError::TimeCountMismatch(times.len(), iet.m()));
        }
        let nu = times.iter().map(|t| alpha.try_mul(t)).collect::<Result<_, _>>()?;
        Ok(CocycleSpec { iet: iet.clone(), nu })
    }

    /// Arbitrary `nu`; the public surface only needs `nu = alpha t`.
    #[cfg(test)]
    pub(crate) fn general(iet: &Iet, nu: Vec<FieldElement>) -> Result<Self, WeakMixError> {
        if nu.len() != iet.m() {
            return Err(WeakMixError::TimeCountMismatch(nu.len(), iet.m()));
        }
        Ok(CocycleSpec { iet: iet.clone(), nu })
    }

    /// First cycle `S` whose `b_S . nu` is not an integer, with that value.
    pub(crate) fn obstruction(&self) -> Result<Option<(usize, FieldElement)>, WeakMixError> {
        let dec = veech_obstruction_set(self.iet.perm())?;
        Ok(dec
            .b_vectors
            .iter()
            .map(|b| int_dot(b, &self.nu))
            .enumerate()
            .find(|(_, x)| !is_integer(x)))
    }
}

/// Outcome of [`exclude_eigenvalue`].
#[derive(Debug, Clone, PartialEq)]
pub enum Exclusion {
    /// `b_S . alpha t` is not an integer for the cycle `set`.
    Excluded { cycle: usize, set: Vec<usize>, value: FieldElement },
    NotExcluded,
}

impl Exclusion {
    pub fn is_excluded(&self) -> bool {
        matches!(self, Exclusion::Excluded { .. })
    }
}

/// Whether `alpha` is ruled out as an eigenvalue of the flow with section map
/// `iet` and return times `t`. Only this `alpha` is decided; multiples
/// `n alpha` need their own call.
pub fn exclude_eigenvalue(iet: &Iet, times: &[FieldElement], alpha: &FieldElement) -> Result<Exclusion, WeakMixError> {
    let spec = CocycleSpec::from_eigenvalue(iet, alpha, times)?;
    Ok(match spec.obstruction()? {
        Some((cycle, value)) => {
            let set = iet.perm().sigma_decomposition().cycles[cycle].clone();
            Exclusion::Excluded { cycle, set, value }
        }
        None => Exclusion::NotExcluded,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    WeaklyMixingAE,
    Inconclusive,
}

impl Status {
    /// Process exit code of the `weakmix check` command.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::WeaklyMixingAE => 0,
            Status::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::WeaklyMixingAE => "WeaklyMixingAE",
            Status::Inconclusive => "Inconclusive",
        })
    }
}

/// One cycle `S` with `b_S` and `b_S . t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleData {
    pub set: Vec<usize>,
    pub b: Vec<i64>,
    pub value: FieldElement,
}

/// The certifying pair. `rank` is the rank of the coordinate rows of `u`
/// and `v` (the criterion used); `rank_with_one` adds the row of `1`, which
/// is the stronger reading of integral independence.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub j: usize,
    pub k: usize,
    pub u: FieldElement,
    pub v: FieldElement,
    pub rank: usize,
    pub rank_with_one: usize,
}

pub const CAVEAT_AE: &str = "weak mixing follows for almost every length vector with this permutation and these \
return times; the lengths at hand are not certified to avoid the exceptional null set";
pub const CAVEAT_BASIS: &str = "integral independence is read off basis coordinates, which assumes 1 and the basis \
symbols are linearly independent over the rationals";
pub const CAVEAT_ONE: &str = "1, u and v are rationally dependent: the pair passes the two-number test but not the \
stronger reading that also includes 1";
pub const CAVEAT_LENGTHS: &str = "the interval lengths satisfy a rational relation, so they lie in a null set and \
the almost-everywhere statement says nothing about this particular length vector";

#[derive(Debug, Clone)]
pub struct WeakMixVerdict {
    pub status: Status,
    pub permutation: Permutation,
    pub times: Vec<FieldElement>,
    pub cycles: Vec<CycleData>,
    pub certificate: Option<Certificate>,
    pub caveats: Vec<String>,
    pub return_map: Option<ReturnMapResult>,
}

fn ranks(u: &FieldElement, v: &FieldElement) -> Result<(usize, usize), ExactError> {
    let one = FieldElement::from_int(u.basis(), 1);
    let rows = [u.coords().to_vec(), v.coords().to_vec(), one.coords().to_vec()];
    Ok((rank_over_q(&rows[..2])?, rank_over_q(&rows)?))
}

/// Scans the cycle pairs `(S_j, S_k)`, `j < k`, in order and certifies with
/// the first pair whose `b_S . t` are nonzero and integrally independent.
pub fn check_weak_mixing(iet: &Iet, times: &[FieldElement]) -> Result<WeakMixVerdict, WeakMixError> {
    let dec = veech_obstruction_set(iet.perm())?;
    if times.len() != iet.m() {
        return Err(WeakMixError::TimeCountMismatch(times.len(), iet.m()));
    }
    for (j, t) in times.iter().enumerate() {
        if !t.is_positive()? {
            return Err(WeakMixError::NonPositiveTime(j));
        }
    }
    let cycles: Vec<CycleData> = dec
        .cycles
        .iter()
        .zip(&dec.b_vectors)
        .map(|(s, b)| CycleData { set: s.clone(), b: b.clone(), value: int_dot(b, times) })
        .collect();
    let mut certificate = None;
    'scan: for j in 0..cycles.len() {
        for k in j + 1..cycles.len() {
            let (u, v) = (&cycles[j].value, &cycles[k].value);
            if u.is_zero() || v.is_zero() || !integrally_independent(u, v)? {
                continue;
            }
            let (rank, rank_with_one) = ranks(u, v)?;
            certificate = Some(Certificate { j, k, u: u.clone(), v: v.clone(), rank, rank_with_one });
            break 'scan;
        }
    }
    let mut caveats = vec![CAVEAT_AE.to_string(), CAVEAT_BASIS.to_string()];
    if certificate.as_ref().is_some_and(|c| c.rank_with_one < 3) {
        caveats.push(CAVEAT_ONE.to_string());
    }
    if !iet.lengths_rationally_independent() {
        caveats.push(CAVEAT_LENGTHS.to_string());
    }
    Ok(WeakMixVerdict {
        status: if certificate.is_some() { Status::WeaklyMixingAE } else { Status::Inconclusive },
        permutation: iet.perm().clone(),
        times: times.to_vec(),
        cycles,
        certificate,
        caveats,
        return_map: None,
    })
}

/// First return to `section` along `direction`, then [`check_weak_mixing`].
pub fn check_surface_weak_mixing(
    surface: &TranslationSurface,
    direction: &Direction,
    section: &Section,
) -> Result<WeakMixVerdict, WeakMixError> {
    let r = first_return_map(surface, direction, section)?;
    let mut verdict = check_weak_mixing(&r.iet, &r.times)?;
    verdict.return_map = Some(r);
    Ok(verdict)
}

fn element_json(x: &FieldElement) -> Value {
    json!({
        "value": x.to_string(),
        "coords": x.coords().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "approx": x.to_f64(),
    })
}

impl WeakMixVerdict {
    pub fn to_json(&self) -> Value {
        let basis = self.times.first().map(|t| BasisJson::from_basis(t.basis()));
        let mut v = json!({
            "status": self.status.to_string(),
            "permutation": self.permutation.images(),
            "basis": basis,
            "times": self.times.iter().map(element_json).collect::<Vec<_>>(),
            "cycles": self.cycles.iter().map(|c| json!({
                "set": c.set,
                "b": c.b,
                "b_dot_t": element_json(&c.value),
            })).collect::<Vec<_>>(),
            "certificate": self.certificate.as_ref().map(|c| json!({
                "pair": [c.j, c.k],
                "u": element_json(&c.u),
                "v": element_json(&c.v),
                "rank_uv": c.rank,
                "rank_1uv": c.rank_with_one,
            })),
            "caveats": self.caveats,
        });
        if let Some(r) = &self.return_map {
            v["return_map"] = json!({
                "mode": r.mode.to_string(),
                "lengths": r.iet.lengths().iter().map(element_json).collect::<Vec<_>>(),
                "permutation": r.iet.perm().images(),
            });
        }
        v
    }
}

impl fmt::Display for WeakMixVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status: {}", self.status)?;
        writeln!(f, "permutation: {}", self.permutation)?;
        if let Some(r) = &self.return_map {
            let ls: Vec<String> = r.iet.lengths().iter().map(ToString::to_string).collect();
            writeln!(f, "section lengths: ({})", ls.join(", "))?;
        }
        let ts: Vec<String> = self.times.iter().map(ToString::to_string).collect();
        writeln!(f, "return times: ({})", ts.join(", "))?;
        for (i, c) in self.cycles.iter().enumerate() {
            writeln!(f, "S_{i} = {:?}  b = {:?}  b.t = {}", c.set, c.b, c.value)?;
        }
        match &self.certificate {
            Some(c) => writeln!(
                f,
                "certificate: S_{} and S_{}, u = {}, v = {}, rank(u, v) = {}, rank(1, u, v) = {}",
                c.j, c.k, c.u, c.v, c.rank, c.rank_with_one
            )?,
            None => writeln!(f, "certificate: none (no pair of cycles with independent b.t)")?,
        }
        for c in &self.caveats {
            writeln!(f, "caveat: {c}")?;
        }
        Ok(())
    }
}

/// Smallest `n` in `1..=limit` with `n x` an integer. A Some here means the
/// multiple `n alpha` is not excluded by the cycle that excluded `alpha`.
pub fn integer_multiple_within(x: &FieldElement, limit: u32) -> Option<u32> {
    let q = x.as_rational()?;
    (1..=limit).find(|&n| (q * Rational::from_integer(n.into())).is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, RealBasis};
    use crate::surface::{suspend, unit_torus};
    use proptest::prelude::*;

    fn p4231() -> Permutation {
        Permutation::new(vec![4, 2, 3, 1]).unwrap()
    }

    fn betas() -> std::sync::Arc<RealBasis> {
        RealBasis::new([("beta1", 2f64.sqrt() - 1.0), ("beta2", 3f64.sqrt() - 1.0)]).unwrap()
    }

    fn ones(b: &std::sync::Arc<RealBasis>, m: usize) -> Vec<FieldElement> {
        vec![FieldElement::from_int(b, 1); m]
    }

    #[test]
    fn obstruction_sets() {
        let d = veech_obstruction_set(&p4231()).unwrap();
        assert_eq!(d.cycles, vec![vec![0, 3], vec![1, 4], vec![2]]);
        assert_eq!(d.b_vectors, vec![vec![1, 0, -1, 1], vec![-1, 1, 0, -1], vec![0, -1, 1, 0]]);
        let rot = veech_obstruction_set(&Permutation::new(vec![2, 1]).unwrap()).unwrap();
        assert_eq!(rot.b_vectors, vec![vec![0, 0]]);
        // b_S sum to zero, so two cycles can never give independent values
        for b in [&d, &rot] {
            for i in 0..b.b_vectors[0].len() {
                assert_eq!(b.b_vectors.iter().map(|v| v[i]).sum::<i64>(), 0);
            }
        }
        assert!(matches!(
            veech_obstruction_set(&Permutation::new(vec![1, 2]).unwrap()),
            Err(WeakMixError::ReducibleInput(_))
        ));
    }

    #[test]
    fn exclusion_examples() {
        let b = RealBasis::rational();
        let iet = Iet::rational(&[(1, 4); 4], &[4, 2, 3, 1]).unwrap();
        let t = ones(&b, 4);
        let half = FieldElement::from_rational(&b, rat(1, 2));
        match exclude_eigenvalue(&iet, &t, &half).unwrap() {
            Exclusion::Excluded { set, value, .. } => {
                assert_eq!(set, vec![0, 3]);
                assert_eq!(value, half);
            }
            Exclusion::NotExcluded => panic!("1/2 should be excluded"),
        }
        let one = FieldElement::from_int(&b, 1);
        assert_eq!(exclude_eigenvalue(&iet, &t, &one).unwrap(), Exclusion::NotExcluded);
        let zero = FieldElement::zero(&b);
        assert_eq!(exclude_eigenvalue(&iet, &t, &zero).unwrap(), Exclusion::NotExcluded);
    }

    #[test]
    fn exclusion_needs_representable_products() {
        let b = betas();
        let iet = Iet::rational(&[(1, 4); 4], &[4, 2, 3, 1]).unwrap();
        let beta1 = FieldElement::named(&b, "beta1").unwrap();
        let beta2 = FieldElement::named(&b, "beta2").unwrap();
        let mut t = ones(&b, 4);
        t[1] = beta1.clone();
        // beta2 * beta1 leaves the span
        assert!(matches!(
            exclude_eigenvalue(&iet.clone(), &t, &beta2),
            Err(WeakMixError::Exact(ExactError::UnrepresentableProduct(_)))
        ));
        let mixed = &beta1 + &FieldElement::from_int(&b, 1);
        assert!(matches!(exclude_eigenvalue(&iet, &t, &mixed), Err(WeakMixError::UnsupportedAlpha(_))));
        // a symbolic alpha against rational times is fine and never an integer
        let r = exclude_eigenvalue(&iet, &ones(&b, 4), &beta1).unwrap();
        assert!(r.is_excluded());
    }

    #[test]
    fn worked_example_is_certified() {
        let b = betas();
        let iet = Iet::rational(&[(1, 4); 4], &[4, 2, 3, 1]).unwrap();
        let one = FieldElement::from_int(&b, 1);
        let t = vec![
            one.clone(),
            FieldElement::named(&b, "beta1").unwrap(),
            FieldElement::named(&b, "beta2").unwrap(),
            one,
        ];
        let v = check_weak_mixing(&iet, &t).unwrap();
        assert_eq!(v.status, Status::WeaklyMixingAE);
        let c = v.certificate.as_ref().unwrap();
        assert_eq!((c.j, c.k), (0, 1));
        assert_eq!(c.u.coords(), &[rat(2, 1), rat(0, 1), rat(-1, 1)]);
        assert_eq!(c.v.coords(), &[rat(-2, 1), rat(1, 1), rat(0, 1)]);
        assert_eq!(c.rank, 2);
        assert_eq!(c.rank_with_one, 3);
        assert_eq!(v.cycles.len(), 3);
        assert!(v.caveats.iter().any(|s| s == CAVEAT_AE));
        assert_eq!(v.status.exit_code(), 0);
        let text = v.to_string();
        assert!(text.contains("rank(u, v) = 2"));
        assert_eq!(v.to_json()["certificate"]["rank_uv"], 2);
    }

    #[test]
    fn inconclusive_examples() {
        let b = RealBasis::rational();
        let iet = Iet::rational(&[(1, 4); 4], &[4, 2, 3, 1]).unwrap();
        let v = check_weak_mixing(&iet, &ones(&b, 4)).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.cycles[0].value, FieldElement::from_int(&b, 1));
        assert_eq!(v.cycles[1].value, FieldElement::from_int(&b, -1));
        assert_eq!(v.status.exit_code(), 2);

        let bb = betas();
        let rot = Iet::rational(&[(1, 3), (2, 3)], &[2, 1]).unwrap();
        let t = vec![FieldElement::named(&bb, "beta1").unwrap(), FieldElement::from_int(&bb, 2)];
        assert_eq!(check_weak_mixing(&rot, &t).unwrap().status, Status::Inconclusive);
        assert!(matches!(check_weak_mixing(&rot, &t[..1]), Err(WeakMixError::TimeCountMismatch(1, 2))));
        let neg = vec![FieldElement::from_int(&bb, 1), FieldElement::from_int(&bb, -1)];
        assert!(matches!(check_weak_mixing(&rot, &neg), Err(WeakMixError::NonPositiveTime(1))));
    }

    #[test]
    fn surface_checks() {
        let b = RealBasis::rational();
        let torus = unit_torus(&b);
        let x = Section::horizontal(0, FieldElement::zero(&b), FieldElement::from_int(&b, 1), FieldElement::zero(&b), true);
        let v = check_surface_weak_mixing(&torus, &Direction::vertical(&b), &x).unwrap();
        assert_eq!(v.status, Status::Inconclusive);

        let iet = Iet::rational(&[(1, 5), (1, 3), (2, 7), (1, 6)], &[4, 2, 3, 1]).unwrap();
        let s = suspend(&iet, &ones(&b, 4)).unwrap();
        let v = check_surface_weak_mixing(&s.surface, &Direction::vertical(&b), &s.section).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert!(v.return_map.is_some());

        let bb = betas();
        let one = FieldElement::from_int(&bb, 1);
        let hs = [one.clone(), FieldElement::named(&bb, "beta1").unwrap(), FieldElement::named(&bb, "beta2").unwrap(), one];
        let s = suspend(&iet, &hs).unwrap();
        let v = check_surface_weak_mixing(&s.surface, &Direction::vertical(&bb), &s.section).unwrap();
        assert_eq!(v.status, Status::WeaklyMixingAE);
    }

    #[test]
    fn general_cocycle() {
        let b = RealBasis::rational();
        let iet = Iet::rational(&[(1, 4); 4], &[4, 2, 3, 1]).unwrap();
        let int_nu = CocycleSpec::general(&iet, ones(&b, 4)).unwrap();
        assert_eq!(int_nu.obstruction().unwrap(), None);
        let mut nu = ones(&b, 4);
        nu[2] = FieldElement::from_rational(&b, rat(1, 3));
        let spec = CocycleSpec::general(&iet, nu).unwrap();
        let (s, val) = spec.obstruction().unwrap().unwrap();
        assert_eq!(s, 0);
        assert_eq!(val, FieldElement::from_rational(&b, rat(5, 3)));
    }

    #[test]
    fn multiples_that_escape_exclusion() {
        let b = RealBasis::rational();
        assert_eq!(integer_multiple_within(&FieldElement::from_rational(&b, rat(1, 2)), 10), Some(2));
        assert_eq!(integer_multiple_within(&FieldElement::from_rational(&b, rat(1, 12)), 10), None);
        let bb = betas();
        assert_eq!(integer_multiple_within(&FieldElement::named(&bb, "beta1").unwrap(), 10), None);
    }

    fn element(b: &std::sync::Arc<RealBasis>, c: &[(i64, i64)]) -> FieldElement {
        FieldElement::new(b.clone(), c.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn certificates_rank_two_and_scale_invariant(
            cs in proptest::collection::vec((proptest::collection::vec((-3i64..4, 1i64..4), 3), 1i64..4), 4),
            n in 1i64..7, d in 1i64..7,
        ) {
            let b = betas();
            let iet = Iet::rational(&[(1, 5), (1, 3), (2, 7), (1, 6)], &[4, 2, 3, 1]).unwrap();
            // positive times: a large rational part dominates the symbols
            let t: Vec<FieldElement> = cs
                .iter()
                .map(|(c, k)| &element(&b, c) + &FieldElement::from_int(&b, 20 * k))
                .collect();
            let v = check_weak_mixing(&iet, &t).unwrap();
            if let Some(c) = &v.certificate {
                prop_assert_eq!(v.status, Status::WeaklyMixingAE);
                prop_assert_eq!(rank_over_q(&[c.u.coords().to_vec(), c.v.coords().to_vec()]).unwrap(), 2);
                prop_assert!(!c.u.is_zero() && !c.v.is_zero());
            } else {
                prop_assert_eq!(v.status, Status::Inconclusive);
            }
            let scaled: Vec<FieldElement> = t.iter().map(|x| x.scale(&rat(n, d))).collect();
            prop_assert_eq!(check_weak_mixing(&iet, &scaled).unwrap().status, v.status);
        }

        #[test]
        fn rational_times_are_never_certified(ts in proptest::collection::vec((1i64..50, 1i64..9), 4)) {
            let b = RealBasis::rational();
            let iet = Iet::rational(&[(1, 5), (1, 3), (2, 7), (1, 6)], &[4, 2, 3, 1]).unwrap();
            let t: Vec<FieldElement> = ts.iter().map(|&(n, d)| FieldElement::from_rational(&b, rat(n, d))).collect();
            prop_assert_eq!(check_weak_mixing(&iet, &t).unwrap().status, Status::Inconclusive);
            let (u, v) = (&t[0], &t[1]);
            prop_assert!(!integrally_independent(u, v).unwrap());
        }
    }
}
