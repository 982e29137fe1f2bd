//! End to end through the public API: surface, return map, certificate,
//! and the files in between.

use veechmix::exactnum::{rat, FieldElement, RealBasis};
use veechmix::flow::{first_return_map, first_return_map_float, Direction, Section};
use veechmix::iet::{Iet, Permutation};
use veechmix::surface::io::{surface_from_json, surface_to_json};
use veechmix::surface::{fig1_default, suspend};
use veechmix::weakmix::{check_weak_mixing, exclude_eigenvalue, Exclusion, Status};

fn betas() -> std::sync::Arc<RealBasis> {
    RealBasis::new([("beta1", 2f64.sqrt() - 1.0), ("beta2", (5f64.sqrt() - 1.0) / 2.0)]).unwrap()
}

#[test]
fn fig1_certifies_after_a_file_round_trip() {
    let t = fig1_default().unwrap();
    let s = surface_from_json(&surface_to_json(&t.surface)).unwrap();
    assert_eq!(s.genus().unwrap(), t.surface.genus().unwrap());
    assert_eq!(s.pairings(), t.surface.pairings());

    let section = Section::from_json(&t.section.to_json()).unwrap();
    let up = Direction::vertical(s.basis());
    let r = first_return_map(&s, &up, &section).unwrap();
    assert_eq!(r.iet.perm(), &Permutation::new(vec![4, 2, 3, 1]).unwrap());

    let v = check_weak_mixing(&r.iet, &r.times).unwrap();
    assert_eq!(v.status, Status::WeaklyMixingAE);
    let c = v.certificate.unwrap();
    assert_eq!(c.rank, 2);
    // the exact return times and the float tracer agree
    let f = first_return_map_float(&s, up.to_f64(), &section).unwrap();
    assert_eq!(f.iet.perm(), r.iet.perm());
    for (a, b) in r.times.iter().zip(&f.times) {
        assert!((a.to_f64() - b).abs() < 1e-9);
    }
}

#[test]
fn suspension_certificate_matches_direct_check() {
    let b = betas();
    let beta1 = FieldElement::named(&b, "beta1").unwrap();
    let beta2 = FieldElement::named(&b, "beta2").unwrap();
    let one = FieldElement::from_int(&b, 1);
    let lengths = vec![beta1.clone(), beta2.clone(), FieldElement::from_rational(&b, rat(1, 3)), FieldElement::from_rational(&b, rat(1, 5))];
    let iet = Iet::new(lengths, Permutation::new(vec![4, 2, 3, 1]).unwrap()).unwrap();
    let heights = vec![one.clone(), &one + &one, &one + &beta1, &(&one + &(&one + &one)) - &beta2];

    let s = suspend(&iet, &heights).unwrap();
    let r = first_return_map(&s.surface, &Direction::vertical(&b), &s.section).unwrap();
    assert_eq!(r.iet.lengths(), iet.lengths());
    assert_eq!(r.times, heights);

    let direct = check_weak_mixing(&iet, &heights).unwrap();
    let via_surface = check_weak_mixing(&r.iet, &r.times).unwrap();
    assert_eq!(direct.status, Status::WeaklyMixingAE);
    assert_eq!(direct.to_json(), via_surface.to_json());

    // unit heights: every pairing b_S . t is an integer
    let ones = vec![one; 4];
    assert_eq!(check_weak_mixing(&iet, &ones).unwrap().status, Status::Inconclusive);
    let alpha = FieldElement::from_int(&b, 1);
    assert!(matches!(exclude_eigenvalue(&iet, &ones, &alpha).unwrap(), Exclusion::NotExcluded));
    let half = FieldElement::from_rational(&b, rat(1, 2));
    assert!(matches!(exclude_eigenvalue(&iet, &ones, &half).unwrap(), Exclusion::Excluded { .. }));
}
