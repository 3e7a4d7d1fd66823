use rand::rngs::StdRng;
use rand::SeedableRng;
use saddlepoint::grid::GridSpec;
use saddlepoint::projections::Projector;
use saddlepoint::saddle::QuadraticProblem;
use saddlepoint::semi_implicit::check_hypothesis_ha;
use saddlepoint::torsion::TorsionProblem;

fn gradient_problem(n: usize) -> TorsionProblem {
    TorsionProblem::new(GridSpec::unit_square(n).unwrap(), 0.0, 1.0)
}

fn boundary_ring(n: usize) -> Vec<usize> {
    (0..n * n).filter(|k| {
        let (i, j) = (k % n, k / n);
        i == 0 || j == 0 || i == n - 1 || j == n - 1
    }).collect()
}

#[test]
fn orthogonal_operator_satisfies_ha() {
    let (c, s) = (0.6, 0.8);
    let rot = QuadraticProblem::new(2, 2, vec![c, -s, s, c]);
    let mut rng = StdRng::seed_from_u64(1);
    for p in [Projector::uniform_box(2, -0.3, 0.7).unwrap(), Projector::ball(vec![0.1, 0.0], 0.5).unwrap()] {
        let r = check_hypothesis_ha(&rot, &p, 1000, 1e-12, &mut rng).unwrap();
        assert!(r.holds, "{}", r.worst);
    }
}

#[test]
fn whole_space_is_trivial() {
    let mut rng = StdRng::seed_from_u64(2);
    let r = check_hypothesis_ha(&gradient_problem(8), &Projector::whole_space(), 100, 0.0, &mut rng).unwrap();
    assert!(r.holds);
    assert_eq!(r.worst, 0.0);
}

#[test]
fn gradient_with_uniform_box_satisfies_ha() {
    let mut rng = StdRng::seed_from_u64(3);
    let p = Projector::uniform_box(64, -0.5, 0.5).unwrap();
    let r = check_hypothesis_ha(&gradient_problem(8), &p, 1000, 1e-12, &mut rng).unwrap();
    assert!(r.holds, "{}", r.worst);
}

#[test]
fn gradient_with_dirichlet_mask_violates_ha() {
    // Zeroing the boundary ring of a random field leaves jumps across the
    // ring's inner edge, where <∇(u − Πu), ∇Πu> picks up −u_i u_j / h² terms
    // of either sign; random fields make the sum negative.
    let n = 8;
    let mut rng = StdRng::seed_from_u64(4);
    let p = Projector::mask_zero(boundary_ring(n));
    let r = check_hypothesis_ha(&gradient_problem(n), &p, 1000, 1e-12, &mut rng).unwrap();
    assert!(!r.holds);
    assert!(r.worst < -0.05, "{}", r.worst);
}

#[test]
fn origin_required() {
    let mut rng = StdRng::seed_from_u64(5);
    let p = Projector::uniform_box(64, 0.5, 1.0).unwrap();
    assert!(check_hypothesis_ha(&gradient_problem(8), &p, 10, 1e-12, &mut rng).is_err());
}
