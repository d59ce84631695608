use isobound_core::mesh3d::{cotan_laplacian, ellipsoid_mesh, icosphere, mesh_summary};
use isobound_core::pencil::lowest_eigenvalues;
use isobound_core::spectra::surface_spectrum;
use isobound_oracles::{ellipsoid_area, sparse_pencil_lowest, spheroid_curvature_energy};
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn sphere_eigenvalues_track_the_first_level() {
    // first sphere level 2/R² with multiplicity 3
    let s = surface_spectrum(&icosphere(4, 2.0).unwrap(), 3).unwrap();
    assert!(s.eigenvalues.iter().all(|v| rel(*v, 0.5) < 0.015), "{:?}", s.eigenvalues);
}

#[test]
fn spectrum_is_invariant_under_rigid_motion_and_scales_inversely_squared() {
    let m = icosphere(2, 1.0).unwrap();
    let base = surface_spectrum(&m, 5).unwrap().eigenvalues;
    let moved = surface_spectrum(&m.translated([0.3, -1.2, 2.0]), 5).unwrap().eigenvalues;
    let big = surface_spectrum(&m.scaled(3.0), 5).unwrap().eigenvalues;
    for i in 0..5 {
        assert!(rel(moved[i], base[i]) < 1e-10);
        assert!(rel(big[i] * 9.0, base[i]) < 1e-10);
    }
    let (a, b) = (mesh_summary(&m).unwrap(), mesh_summary(&m.scaled(3.0)).unwrap());
    assert!(rel(b.boundary_measure, 9.0 * a.boundary_measure) < 1e-12);
    assert!(rel(b.volume, 27.0 * a.volume) < 1e-12);
    assert!(rel(b.curvature_energy, a.curvature_energy) < 1e-12);
}

#[test]
fn ellipsoid_area_matches_quadrature_oracle() {
    let (a, b, c) = (1.2, 1.0, 1.0 / 1.2);
    let g = mesh_summary(&ellipsoid_mesh(a, b, c, 4).unwrap()).unwrap();
    assert!(rel(g.boundary_measure, ellipsoid_area(a, b, c)) < 0.005);
    assert!(rel(g.volume, 4.0 * PI * a * b * c / 3.0) < 0.005);
}

#[test]
fn spheroid_curvature_energy_matches_quadrature_oracle() {
    let g = mesh_summary(&ellipsoid_mesh(1.0, 1.0, 2.0, 4).unwrap()).unwrap();
    assert!(rel(g.curvature_energy, spheroid_curvature_energy(1.0, 2.0)) < 0.02);
}

#[test]
fn dense_solve_agrees_with_refined_sparse_solve() {
    let coarse = surface_spectrum(&ellipsoid_mesh(1.0, 1.0, 1.5, 4).unwrap(), 3).unwrap().eigenvalues;
    let fine = ellipsoid_mesh(1.0, 1.0, 1.5, 5).unwrap();
    let lap = cotan_laplacian(&fine).unwrap();
    let oracle = sparse_pencil_lowest(&lap.triplets(), &lap.mass, 4, 1.0);
    assert!(oracle[0].abs() < 1e-8);
    for (v, o) in coarse.iter().zip(&oracle[1..]) {
        assert!(rel(*v, *o) < 0.01, "{v} vs {o}");
    }
}

#[test]
fn sphere_error_decays_at_least_quadratically() {
    let errs: Vec<f64> = (1..=3)
        .map(|l| (surface_spectrum(&icosphere(l, 1.0).unwrap(), 1).unwrap().eigenvalues[0] - 2.0).abs())
        .collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 3.5, "{errs:?}");
    }
}

#[test]
fn connected_surface_has_one_dimensional_kernel() {
    let lap = cotan_laplacian(&ellipsoid_mesh(1.3, 1.0, 0.8, 2).unwrap()).unwrap();
    let ones = vec![1.0; lap.dim()];
    assert!(lap.apply(&ones).iter().all(|v| v.abs() < 1e-12));
    let low = lowest_eigenvalues(&lap.normalized_dense().unwrap(), 2);
    assert!(low[0].abs() < 1e-10);
    assert!(low[1] > 0.5);
}
