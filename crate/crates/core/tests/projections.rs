use proptest::prelude::*;
use saddlepoint::projections::{
    characterization_gap, check_monotone, check_pythagorean, Projector, SetDescriptor,
};
use saddlepoint::Error;

fn vec_strategy(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, dim)
}

fn projectors(dim: usize) -> impl Strategy<Value = Projector> {
    let boxes = (vec_strategy(dim), prop::collection::vec(0.0f64..3.0, dim)).prop_map(|(lo, w)| {
        let hi = lo.iter().zip(&w).map(|(l, w)| l + w).collect();
        Projector::boxed(lo, hi).unwrap()
    });
    let balls = (vec_strategy(dim), 0.0f64..4.0).prop_map(|(c, r)| Projector::ball(c, r).unwrap());
    let masks = prop::collection::vec(any::<bool>(), dim).prop_map(|m| {
        Projector::mask_zero(m.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect())
    });
    prop_oneof![Just(Projector::whole_space()), boxes, balls, masks]
}

#[test]
fn closed_form_examples() {
    let b = Projector::uniform_box(3, 0.0, 1.0).unwrap();
    assert_eq!(b.project(&[-0.5, 0.5, 2.0]), vec![0.0, 0.5, 1.0]);
    let ball = Projector::ball(vec![0.0; 3], 1.0).unwrap();
    let y = ball.project(&[2.0, 0.0, 0.0]);
    assert!((y[0] - 1.0).abs() < 1e-15);
    assert_eq!(Projector::mask_zero(vec![0]).project(&[3.0, 4.0]), vec![0.0, 4.0]);
}

#[test]
fn empty_sets_rejected() {
    assert!(matches!(Projector::boxed(vec![1.0], vec![0.0]), Err(Error::EmptySet(_))));
    assert!(Projector::new(SetDescriptor::Ball { center: vec![0.0], radius: -1.0 }).is_err());
}

#[test]
fn monotone_examples() {
    let b = Projector::uniform_box(1, 0.0, 1.0).unwrap();
    assert!(check_monotone(&b, &[2.0], &[-1.0], 1e-12));
    assert!(check_monotone(&b, &[0.3], &[0.3], 0.0));
}

#[test]
fn pythagorean_examples() {
    let ball = Projector::ball(vec![0.0, 0.0], 1.0).unwrap();
    assert!(check_pythagorean(&ball, &[2.0, 0.0], 1e-12).unwrap());
    let off = Projector::ball(vec![5.0, 0.0], 1.0).unwrap();
    assert_eq!(check_pythagorean(&off, &[2.0, 0.0], 1e-12), Err(Error::OriginNotInSet));
}

#[test]
fn translation_example() {
    let b = Projector::uniform_box(1, 0.0, 1.0).unwrap();
    let t = b.translate(&[0.5]);
    assert_eq!(t.project(&[0.7]), vec![0.5]);
    assert_eq!(b.project(&[1.2])[0] - 0.5, 0.5);
    assert_eq!(b.translate(&[0.0]).project(&[3.0]), b.project(&[3.0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn idempotent_and_feasible(p in projectors(5), x in vec_strategy(5)) {
        let y = p.project(&x);
        prop_assert!(p.contains(&y));
        if !matches!(p.descriptor(), SetDescriptor::Ball { .. }) {
            prop_assert_eq!(p.project(&y), y);
        }
    }

    #[test]
    fn firmly_nonexpansive(p in projectors(4), x in vec_strategy(4), y in vec_strategy(4)) {
        prop_assert!(check_monotone(&p, &x, &y, 1e-12));
        let (px, py) = (p.project(&x), p.project(&y));
        let d: f64 = px.iter().zip(&py).map(|(a, b)| (a - b) * (a - b)).sum();
        let e: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
        prop_assert!(d.sqrt() <= e.sqrt() + 1e-12);
    }

    #[test]
    fn pythagorean_when_origin_inside(p in projectors(4), x in vec_strategy(4)) {
        match check_pythagorean(&p, &x, 1e-12) {
            Ok(holds) => prop_assert!(holds),
            Err(e) => {
                prop_assert_eq!(e, Error::OriginNotInSet);
                prop_assert!(!p.contains_origin());
            }
        }
    }

    #[test]
    fn characterization(p in projectors(3), x in vec_strategy(3), zs in prop::collection::vec(vec_strategy(3), 100)) {
        for z in zs {
            let z = p.project(&z);
            prop_assert!(characterization_gap(&p, &x, &z) <= 1e-12);
        }
    }

    #[test]
    fn translation_identity(lo in vec_strategy(3), w in prop::collection::vec(0.0f64..2.0, 3), v in vec_strategy(3), x in vec_strategy(3)) {
        let hi: Vec<f64> = lo.iter().zip(&w).map(|(l, w)| l + w).collect();
        let p = Projector::boxed(lo, hi).unwrap();
        let t = p.translate(&v);
        let shifted: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a - b).collect();
        let lhs = t.project(&shifted);
        let rhs: Vec<f64> = p.project(&x).iter().zip(&v).map(|(a, b)| a - b).collect();
        for (a, b) in lhs.iter().zip(&rhs) {
            prop_assert!((a - b).abs() <= 1e-15 * (1.0 + b.abs()));
        }
    }
}
