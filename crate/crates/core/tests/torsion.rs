use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use saddlepoint::grid::{FaceField, GridSpec, ScalarField};
use saddlepoint::saddle::Termination;
use saddlepoint::torsion::{
    check_optimality, dphi_star_eps, dual_energy, extract_radii, phi, phi_star, primal_energy,
    regularized_lipschitz, residual, run_scheme, Scheme, TorsionConfig,
};

fn random_vec(rng: &mut StdRng, scale: f64) -> [f64; 2] {
    [rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)]
}

#[test]
fn young_fenchel() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..10_000 {
        let z = random_vec(&mut rng, 3.0);
        let q = random_vec(&mut rng, 3.0);
        assert!(phi(z) + phi_star(q) >= z[0] * q[0] + z[1] * q[1] - 1e-12);
    }
    // equality on the smooth branches: q = z/|z| inside, q = z outside
    for _ in 0..1000 {
        let z = random_vec(&mut rng, 3.0);
        let r = z[0].hypot(z[1]);
        let q = if r < 1.0 { [z[0] / r, z[1] / r] } else { z };
        let gap = phi(z) + phi_star(q) - (z[0] * q[0] + z[1] * q[1]);
        assert!(gap.abs() <= 1e-12, "{gap}");
    }
}

#[test]
fn regularized_derivative_seams() {
    for eps in [0.01, 0.03, 0.1, 0.5] {
        let lg = regularized_lipschitz(eps);
        for seam in [1.0 - eps / 2.0, 1.0 + eps / 2.0] {
            let a = dphi_star_eps([seam - 1e-9, 0.0], eps)[0];
            let b = dphi_star_eps([seam + 1e-9, 0.0], eps)[0];
            let jump = (b - a).abs() - lg * 2e-9;
            assert!(jump <= 1e-8 * lg, "{eps} {seam} {jump}");
        }
        let top = dphi_star_eps([1.0 + eps / 2.0, 0.0], eps)[0];
        assert!((top - (2.0 + eps) / 2.0).abs() < 1e-12);
    }
    assert_eq!(dphi_star_eps([0.0, 0.0], 3.0), [0.0, 0.0]);
    assert_eq!(dphi_star_eps([0.3, 0.4], 0.1), [0.0, 0.0]);
}

#[test]
fn regularized_derivative_is_lipschitz() {
    let mut rng = StdRng::seed_from_u64(2);
    for eps in [0.03, 0.2] {
        let lg = regularized_lipschitz(eps);
        for _ in 0..10_000 {
            let p = random_vec(&mut rng, 1.5);
            let q = [p[0] + rng.gen_range(-0.05..0.05), p[1] + rng.gen_range(-0.05..0.05)];
            let (a, b) = (dphi_star_eps(p, eps), dphi_star_eps(q, eps));
            let lhs = (a[0] - b[0]).hypot(a[1] - b[1]);
            assert!(lhs <= lg * (p[0] - q[0]).hypot(p[1] - q[1]) + 1e-12);
        }
    }
}

#[test]
fn energies_match_direct_summation() {
    let mut rng = StdRng::seed_from_u64(3);
    for grid in [GridSpec::unit_square(8).unwrap(), GridSpec::quarter(8).unwrap()] {
        let n = 8;
        let h = grid.h();
        let u = ScalarField::from_values(grid, (0..n * n).map(|_| rng.gen_range(-0.1..0.1)).collect()).unwrap();
        let flat: Vec<f64> = (0..grid.face_len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let p = FaceField::from_flat(grid, &flat).unwrap();

        let val = |i: isize, j: isize| -> f64 {
            if i < 0 || j < 0 {
                if grid.symmetry() { u.get(0.max(i) as usize, 0.max(j) as usize) } else { -u.get(0.max(i) as usize, 0.max(j) as usize) }
            } else if i >= n as isize || j >= n as isize {
                -u.get((n - 1).min(i as usize), (n - 1).min(j as usize))
            } else {
                u.get(i as usize, j as usize)
            }
        };
        let mut pe = 0.0;
        let mut de = 0.0;
        for j in 0..n as isize {
            for i in 0..n as isize {
                let gx = 0.5 * ((val(i + 1, j) - val(i, j)) + (val(i, j) - val(i - 1, j))) / h;
                let gy = 0.5 * ((val(i, j + 1) - val(i, j)) + (val(i, j) - val(i, j - 1))) / h;
                pe += phi([gx, gy]);
                let (iu, ju) = (i as usize, j as usize);
                let west = if grid.symmetry() && iu == 0 { 0.0 } else { p.p1(iu, ju) };
                let south = if grid.symmetry() && ju == 0 { 0.0 } else { p.p2(iu, ju) };
                de += phi_star([0.5 * (west + p.p1(iu + 1, ju)), 0.5 * (south + p.p2(iu, ju + 1))]);
            }
        }
        assert!((primal_energy(&u) - h * h * pe).abs() <= 1e-14 * (1.0 + pe.abs() * h * h));
        assert!((dual_energy(&p) - h * h * de).abs() <= 1e-14 * (1.0 + de.abs() * h * h));
    }
}

#[test]
fn small_dual_fields_have_zero_energy() {
    let grid = GridSpec::unit_square(10).unwrap();
    let p = FaceField::from_flat(grid, &vec![0.5; grid.face_len()]).unwrap();
    assert_eq!(dual_energy(&p), 0.0);
}

#[test]
fn radii_of_synthetic_ramp() {
    let grid = GridSpec::disk(100, 0.5, (0.5, 0.5)).unwrap();
    let u = ScalarField::from_fn(grid, |x, y| 2.0 * ((x - 0.5).hypot(y - 0.5) - 0.4).max(0.0));
    let r = extract_radii(&u).unwrap();
    assert!((r.outer.unwrap() - 0.4).abs() <= grid.h());
}

#[test]
fn exact_disk_pair_is_nearly_optimal() {
    for n in [50, 100] {
        let grid = GridSpec::disk(n, 0.5, (0.5, 0.5)).unwrap();
        let h = grid.h();
        let u = ScalarField::from_fn(grid, |x, y| {
            let r = (x - 0.5).hypot(y - 0.5).max(0.4);
            1.25 * (0.25 - r * r)
        });
        let mut p = FaceField::zeros(grid);
        for j in 0..n {
            for i in 0..=n {
                p.comp1[j * (n + 1) + i] = -2.5 * (i as f64 * h - 0.5);
            }
        }
        for j in 0..=n {
            for i in 0..n {
                p.comp2[j * n + i] = -2.5 * (j as f64 * h - 0.5);
            }
        }
        let rep = check_optimality(&u, &p, 5.0, 3.0 * h, 1e-4);
        assert!(rep.feasibility < 1e-10);
        assert!(rep.fenchel_gap >= -1e-12 && rep.fenchel_gap < 2.0 * h, "{n}: {}", rep.fenchel_gap);
    }
}

#[test]
fn zero_pair_diagnostics() {
    let grid = GridSpec::quarter(10).unwrap();
    let rep = check_optimality(&ScalarField::zeros(grid), &FaceField::zeros(grid), 5.0, 0.15, 1e-4);
    assert!((rep.feasibility - residual(&FaceField::zeros(grid), 5.0)).abs() < 1e-15);
    assert!(!rep.feasible);
}

fn quick(grid: GridSpec, scheme: Scheme) -> saddlepoint::torsion::TorsionResult {
    let mut c = TorsionConfig::new(grid, 5.0, scheme);
    c.max_outer_iters = 50_000;
    run_scheme(&c).unwrap()
}

#[test]
fn schemes_converge_and_agree_on_coarse_grid() {
    let grid = GridSpec::quarter(20).unwrap();
    let runs: Vec<_> = Scheme::ALL.iter().map(|s| quick(grid, *s)).collect();
    for r in &runs {
        assert_eq!(r.report.termination, Termination::Converged);
        let min = r.report.residual_history.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min < 1e-4);
        assert!(r.report.final_residual().unwrap() < 1e-4);
        assert_eq!(r.primal_energy_history.len(), r.report.iterations);
    }
    assert!(runs[0].report.iterations > runs[1].report.iterations);
    let h = grid.h();
    let d: f64 = runs[0].u.values.iter().zip(&runs[2].u.values).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
    assert!((h * h * d).sqrt() < 1e-3);
}

#[test]
fn quarter_matches_full_square_on_coarse_grid() {
    let q = quick(GridSpec::quarter(16).unwrap(), Scheme::Implicit);
    let f = quick(GridSpec::unit_square(32).unwrap(), Scheme::Implicit);
    let h = q.u.grid.h();
    let mut d = 0.0;
    for j in 0..16 {
        for i in 0..16 {
            d += (q.u.get(i, j) - f.u.get(16 + i, 16 + j)).powi(2);
        }
    }
    assert!((h * h * d).sqrt() < 1e-3);
}
