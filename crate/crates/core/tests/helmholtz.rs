use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use saddlepoint::grid::{GridSpec, ScalarField};
use saddlepoint::helmholtz::{apply_operator, solve, HelmholtzConfig, HelmholtzOperator, Preconditioner};

/// Five-point `I − Δ` assembled entry by entry: mirror sides contribute
/// nothing, Dirichlet sides weigh twice (the boundary sits half a cell away).
fn assemble(grid: &GridSpec) -> DMatrix<f64> {
    let n = grid.n_cells();
    let h2 = grid.h() * grid.h();
    let mut m = DMatrix::zeros(n * n, n * n);
    for j in 0..n {
        for i in 0..n {
            let k = j * n + i;
            let mut diag = 1.0;
            let sides = [(i as isize - 1, j as isize, true), (i as isize + 1, j as isize, false),
                         (i as isize, j as isize - 1, true), (i as isize, j as isize + 1, false)];
            for (ii, jj, low) in sides {
                if ii < 0 || jj < 0 || ii >= n as isize || jj >= n as isize {
                    if !(low && grid.symmetry()) {
                        diag += 2.0 / h2;
                    }
                } else {
                    diag += 1.0 / h2;
                    m[(k, jj as usize * n + ii as usize)] = -1.0 / h2;
                }
            }
            m[(k, k)] = diag;
        }
    }
    m
}

fn random_field(grid: GridSpec, rng: &mut StdRng) -> ScalarField {
    ScalarField::from_values(grid, (0..grid.scalar_len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

#[test]
fn matches_dense_direct_solve() {
    let mut rng = StdRng::seed_from_u64(9);
    for grid in [GridSpec::unit_square(9).unwrap(), GridSpec::quarter(9).unwrap()] {
        let m = assemble(&grid);
        for pc in [Preconditioner::None, Preconditioner::Multigrid] {
            let rhs = random_field(grid, &mut rng);
            let mut cfg = HelmholtzConfig::new(grid);
            cfg.rel_tolerance = 1e-13;
            cfg.preconditioner = pc;
            let got = solve(&cfg, &rhs).unwrap();
            let want = m.clone().lu().solve(&DVector::from_vec(rhs.values.clone())).unwrap();
            let err = got.field.values.iter().zip(want.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-9, "{err}");
        }
    }
}

#[test]
fn operator_matches_assembled_matrix() {
    let mut rng = StdRng::seed_from_u64(4);
    let grid = GridSpec::quarter(7).unwrap();
    let v = random_field(grid, &mut rng);
    let y = apply_operator(&grid, &v);
    let want = assemble(&grid) * DVector::from_vec(v.values.clone());
    for (a, b) in y.values.iter().zip(want.iter()) {
        assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()));
    }
}

#[test]
fn eigenvector_recovered() {
    let pi = std::f64::consts::PI;
    for n in [16, 64] {
        let grid = GridSpec::unit_square(n).unwrap();
        let s = ScalarField::from_fn(grid, |x, y| (pi * x).sin() * (pi * y).sin());
        let h = grid.h();
        let lambda = 8.0 / (h * h) * (pi * h / 2.0).sin().powi(2);
        let rhs = ScalarField::from_values(grid, s.values.iter().map(|v| (1.0 + lambda) * v).collect()).unwrap();
        let cfg = HelmholtzConfig::new(grid);
        let sol = solve(&cfg, &rhs).unwrap();
        let err: f64 = sol.field.values.iter().zip(&s.values).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = s.values.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(err / norm <= cfg.rel_tolerance, "{}", err / norm);
    }
}

#[test]
fn symmetric_and_coercive() {
    let mut rng = StdRng::seed_from_u64(5);
    for grid in [GridSpec::unit_square(12).unwrap(), GridSpec::quarter(12).unwrap()] {
        for _ in 0..20 {
            let v = random_field(grid, &mut rng);
            let w = random_field(grid, &mut rng);
            let av = apply_operator(&grid, &v);
            let aw = apply_operator(&grid, &w);
            let (a, b) = (av.dot(&w), v.dot(&aw));
            assert!((a - b).abs() <= 1e-13 * a.abs().max(b.abs()).max(1.0));
            assert!(av.dot(&v) >= v.dot(&v));
        }
    }
}

#[test]
fn cg_energy_is_monotone() {
    let mut rng = StdRng::seed_from_u64(6);
    let grid = GridSpec::unit_square(40).unwrap();
    let rhs = random_field(grid, &mut rng);
    let sol = solve(&HelmholtzConfig::new(grid), &rhs).unwrap();
    assert!(sol.iterations > 1);
    for w in sol.energy_history.windows(2) {
        assert!(w[1] <= w[0] + 1e-14 * w[0].abs().max(1.0));
    }
}

#[test]
fn multigrid_and_plain_cg_agree() {
    let mut rng = StdRng::seed_from_u64(8);
    for grid in [GridSpec::unit_square(64).unwrap(), GridSpec::disk(64, 0.5, (0.5, 0.5)).unwrap()] {
        let rhs = random_field(grid, &mut rng);
        let plain = HelmholtzOperator::new(HelmholtzConfig::new(grid)).unwrap();
        let mut cfg = HelmholtzConfig::new(grid);
        cfg.preconditioner = Preconditioner::Multigrid;
        let mg = HelmholtzOperator::new(cfg).unwrap();
        let a = plain.solve(&rhs.values, None).unwrap();
        let b = mg.solve(&rhs.values, None).unwrap();
        assert!(b.iterations < a.iterations);
        let diff: f64 = a.field.values.iter().zip(&b.field.values).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = a.field.values.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(diff / norm < 1e-8);
    }
}
