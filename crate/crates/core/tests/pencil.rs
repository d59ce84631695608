use isobound_core::basis::{build_space, SpaceKind};
use isobound_core::geometry2d::boundary_frame;
use isobound_core::pencil::{jacobi_eigen, nullspace, solve_pencil, Matrix, SymPencil};
use isobound_core::DomainSpec2D;
use isobound_oracles::inverse_iteration;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spd(rng: &mut ChaCha8Rng, d: usize, shift: f64) -> Matrix {
    let g = Matrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    let mut m = g.transpose().matmul(&g);
    for i in 0..d {
        m[(i, i)] += shift;
    }
    m
}

fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let g = Matrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    let sym = g.transpose().matmul(&g);
    jacobi_eigen(&sym).vectors
}

fn to_nalgebra(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

#[test]
fn small_closed_forms() {
    let p = SymPencil::new(Matrix::from_diagonal(&[1.0, 2.0, 3.0]), Matrix::identity(3)).unwrap();
    let r = solve_pencil(&p, 1e-12).unwrap();
    for (v, e) in r.values.iter().zip([1.0, 2.0, 3.0]) {
        assert!((v - e).abs() < 1e-14);
    }
    let p = SymPencil::new(Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]), Matrix::identity(2)).unwrap();
    let r = solve_pencil(&p, 1e-12).unwrap();
    assert!((r.values[0] - 1.0).abs() < 1e-14 && (r.values[1] - 3.0).abs() < 1e-14);
}

#[test]
fn random_five_by_five_matches_inverse_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let a = random_spd(&mut rng, 5, 0.1);
        let b = random_spd(&mut rng, 5, 0.5);
        let r = solve_pencil(&SymPencil::new(a.clone(), b.clone()).unwrap(), 1e-12).unwrap();
        let oracle = inverse_iteration(&to_nalgebra(&a), &to_nalgebra(&b), 5);
        for (v, o) in r.values.iter().zip(&oracle) {
            assert!((v - o).abs() <= 1e-9 * o.abs(), "{v} vs {o}");
        }
    }
}

#[test]
fn nullspace_examples() {
    let n = nullspace(&Matrix::from_diagonal(&[0.0, 0.0, 5.0]), 1e-8);
    assert_eq!(n.cols(), 2);
    for j in 0..2 {
        assert!(n[(2, j)].abs() < 1e-15);
    }
    assert_eq!(nullspace(&Matrix::identity(4), 0.5).cols(), 0);
}

#[test]
fn disk_constraint_nullspace_counts_exact_solutions() {
    let order = 10;
    let space = build_space(SpaceKind::Biharmonic, order, 1.0).unwrap();
    let frame = boundary_frame(&DomainSpec2D::disk(1.0), 256).unwrap();
    let d = space.len();
    let mut nc = Matrix::zeros(d, d);
    for k in 0..frame.len() {
        let nu = frame.normals[k];
        let dn: Vec<f64> = space
            .iter()
            .map(|f| {
                let g = f.eval(frame.local[k]).unwrap().gradient;
                g[0] * nu[0] + g[1] * nu[1]
            })
            .collect();
        for i in 0..d {
            for j in 0..d {
                nc[(i, j)] += frame.weights[k] * dn[i] * dn[j];
            }
        }
    }
    // a r^k + b r^{k+2} with a k + b (k+2) = 0 for each order and parity, plus constants
    let expected = 2 * order as usize + 1;
    let basis = nullspace(&nc, 1e-8);
    assert_eq!(basis.cols(), expected);
    let gram = basis.transpose().matmul(&basis);
    for i in 0..expected {
        for j in 0..expected {
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((gram[(i, j)] - e).abs() < 1e-12);
        }
    }
}

#[test]
fn jacobi_off_diagonal_norm_decreases() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [10, 60, 200] {
        let e = jacobi_eigen(&random_spd(&mut rng, d, 0.0));
        assert!(e.sweeps <= 30);
        for w in e.off_norms.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigenvalues_are_invariant_under_orthogonal_change_of_basis(seed in any::<u64>(), d in 2usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_spd(&mut rng, d, 0.1);
        let b = random_spd(&mut rng, d, 1.0);
        let q = random_orthogonal(&mut rng, d);
        let r1 = solve_pencil(&SymPencil::new(a.clone(), b.clone()).unwrap(), 1e-12).unwrap();
        let r2 = solve_pencil(&SymPencil::new(a.congruence(&q), b.congruence(&q)).unwrap(), 1e-12).unwrap();
        for (x, y) in r1.values.iter().zip(&r2.values) {
            prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(1e-12));
        }
    }

    #[test]
    fn every_pair_has_a_small_residual(seed in any::<u64>(), d in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_spd(&mut rng, d, 0.0);
        let b = random_spd(&mut rng, d, 0.5);
        let p = SymPencil::new(a, b).unwrap();
        let r = solve_pencil(&p, 1e-12).unwrap();
        prop_assert_eq!(r.values.len(), d);
        for k in 0..d {
            prop_assert!(r.relative_residual(&p, k) <= 1e-10);
        }
    }
}
