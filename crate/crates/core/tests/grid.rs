use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use saddlepoint::grid::{
    adjointness_gap, check_adjointness, divergence, gradient, mask_disk, operator_norm_bound,
    power_iteration_norm, Closure, FaceField, GridSpec, ScalarField,
};

fn random_scalar(grid: GridSpec, rng: &mut StdRng) -> ScalarField {
    let values = (0..grid.scalar_len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    ScalarField::from_values(grid, values).unwrap()
}

fn random_faces(grid: GridSpec, rng: &mut StdRng) -> FaceField {
    let flat: Vec<f64> = (0..grid.face_len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    FaceField::from_flat(grid, &flat).unwrap()
}

#[test]
fn adjoint_on_both_boundary_modes() {
    let mut rng = StdRng::seed_from_u64(1);
    for n in [8, 16, 32] {
        for grid in [GridSpec::unit_square(n).unwrap(), GridSpec::quarter(n).unwrap()] {
            for _ in 0..50 {
                let u = random_scalar(grid, &mut rng);
                let p = random_faces(grid, &mut rng);
                assert!(check_adjointness(&u, &p) <= 1e-13);
            }
        }
    }
}

#[test]
fn corrupted_closure_breaks_adjointness() {
    let mut rng = StdRng::seed_from_u64(2);
    let grid = GridSpec::unit_square(16).unwrap();
    let u = random_scalar(grid, &mut rng);
    let p = random_faces(grid, &mut rng);
    assert!(adjointness_gap(&u, &p, Closure::Mirrored) > 1e-3);
}

#[test]
fn sine_mode_is_discrete_eigenvector() {
    for n in [8, 33, 100] {
        let grid = GridSpec::unit_square(n).unwrap();
        let pi = std::f64::consts::PI;
        let u = ScalarField::from_fn(grid, |x, y| (pi * x).sin() * (pi * y).sin());
        let lap = divergence(&gradient(&u));
        let h = grid.h();
        let lambda = 4.0 / (h * h) * 2.0 * (pi * h / 2.0).sin().powi(2);
        let err: f64 = lap.values.iter().zip(&u.values).map(|(l, v)| (l + lambda * v).powi(2)).sum();
        let scale: f64 = u.values.iter().map(|v| (lambda * v).powi(2)).sum();
        assert!((err / scale).sqrt() <= 1e-12);
    }
}

#[test]
fn power_iteration_brackets_formula() {
    for n in [16, 32] {
        let grid = GridSpec::unit_square(n).unwrap();
        let c = operator_norm_bound(&grid);
        let est = power_iteration_norm(&grid, 2000).unwrap();
        assert!(est <= c * (1.0 + 1e-12) && est >= 0.9 * c, "{est} vs {c}");
    }
    let a = power_iteration_norm(&GridSpec::unit_square(16).unwrap(), 2000).unwrap();
    let b = power_iteration_norm(&GridSpec::unit_square(32).unwrap(), 2000).unwrap();
    assert!((b / a - 2.0).abs() < 0.1);
    assert!(power_iteration_norm(&GridSpec::unit_square(16).unwrap(), 10).is_err());
}

#[test]
fn norm_bound_values() {
    assert!((operator_norm_bound(&GridSpec::unit_square(100).unwrap()) - 282.842_712_474_619).abs() < 1e-9);
}

#[test]
fn disk_masks() {
    let empty = GridSpec::disk(10, 0.0, (0.5, 0.5)).unwrap();
    assert!(mask_disk(&empty).unwrap().is_empty());
    let grid = GridSpec::disk(100, 0.5, (0.5, 0.5)).unwrap();
    let ratio = mask_disk(&grid).unwrap().len() as f64 / 1e4;
    assert!((ratio / (std::f64::consts::PI / 4.0) - 1.0).abs() < 0.02);
    assert!(mask_disk(&GridSpec::unit_square(10).unwrap()).is_err());
    let coarse = GridSpec::disk(3, 0.5, (0.5, 0.5)).unwrap();
    assert_eq!(mask_disk(&coarse).unwrap().len(), 9);
    assert!(GridSpec::disk(10, 0.75, (0.5, 0.5)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_text_round_trip(seed in any::<u64>(), n in 3usize..12, quarter in any::<bool>()) {
        let grid = if quarter { GridSpec::quarter(n).unwrap() } else { GridSpec::unit_square(n).unwrap() };
        let mut rng = StdRng::seed_from_u64(seed);
        let u = random_scalar(grid, &mut rng);
        let back = ScalarField::from_text(grid, &u.to_text()).unwrap();
        prop_assert_eq!(back, u);
        let p = random_faces(grid, &mut rng);
        let back = FaceField::from_text(grid, &p.to_text()).unwrap();
        prop_assert_eq!(back, p);
    }
}
