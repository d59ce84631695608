//! Eigenvalue problems on planar domains and closed surfaces, and
//! closed-form ball spectra in any dimension.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::basis::{build_space, BasisFn, EvalRecord, SpaceKind};
use crate::error::{Error, Result};
use crate::geometry2d::{boundary_frame, interior_quad, BoundaryFrame, DomainSpec2D, VALIDATION_SAMPLES};
use crate::math::{cos, sqrt};
use crate::mesh3d::{cotan_laplacian, TriMesh};
use crate::pencil::{jacobi_eigen, lowest_eigenvalues, nullspace, solve_pencil, Matrix, SymPencil};

/// Relative threshold separating zero modes from the reported spectrum.
pub const ZERO_MODE_REL: f64 = 1e-9;

/// Positive boundary weight `ρ(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityFn {
    Constant(f64),
    /// `c0 + c1 cos(mθ)`.
    Cosine {
        c0: f64,
        c1: f64,
        m: u32,
    },
}

impl Default for DensityFn {
    fn default() -> Self {
        DensityFn::Constant(1.0)
    }
}

impl DensityFn {
    pub fn eval(&self, theta: f64) -> f64 {
        match *self {
            DensityFn::Constant(c) => c,
            DensityFn::Cosine { c0, c1, m } => c0 + c1 * cos(m as f64 * theta),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = (0..VALIDATION_SAMPLES).any(|j| {
            let v = self.eval(2.0 * PI * j as f64 / VALIDATION_SAMPLES as f64);
            !(v > 0.0 && v.is_finite())
        });
        if bad {
            return Err(Error::InvalidArgument(format!("density {self} is not positive")));
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, DensityFn::Constant(_)) || matches!(self, DensityFn::Cosine { c1, .. } if *c1 == 0.0)
    }

    /// Samples at the angles of a boundary frame.
    pub fn sample(&self, frame: &BoundaryFrame) -> Vec<f64> {
        frame.theta.iter().map(|t| self.eval(*t)).collect()
    }
}

impl fmt::Display for DensityFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityFn::Constant(c) => write!(f, "const:{c}"),
            DensityFn::Cosine { c0, c1, m } => write!(f, "cos:{c0},{c1},{m}"),
        }
    }
}

/// `const:c` or `cos:c0,c1,m`.
impl FromStr for DensityFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, args) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected kind:args, got {s:?}")))?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
            .collect::<Result<_>>()?;
        let rho = match (tag.trim(), nums.as_slice()) {
            ("const", [c]) => DensityFn::Constant(*c),
            ("cos", [c0, c1, m]) if *m >= 0.0 && libm::trunc(*m) == *m => {
                DensityFn::Cosine { c0: *c0, c1: *c1, m: *m as u32 }
            }
            _ => return Err(Error::Parse(format!("unrecognized density {s:?}"))),
        };
        rho.validate()?;
        Ok(rho)
    }
}

/// Discretization knobs shared by the planar solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Trial space order `K`.
    pub order: u32,
    /// Boundary nodes `N`.
    pub boundary_nodes: usize,
    pub interior_theta: usize,
    pub interior_radial: usize,
    pub eps_b: f64,
    /// Relative cut on the normal-derivative Gram in the biharmonic constraint.
    pub eps_c: f64,
    /// How many nonzero eigenvalues to report.
    pub count: usize,
    /// Attach an error estimate from a coarser solve.
    pub estimate: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            order: 16,
            boundary_nodes: 512,
            interior_theta: 256,
            interior_radial: 24,
            eps_b: 1e-12,
            eps_c: 1e-8,
            count: 4,
            estimate: true,
        }
    }
}

impl SolverConfig {
    pub fn with_order(mut self, order: u32) -> Self {
        self.order = order;
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn without_estimate(mut self) -> Self {
        self.estimate = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidArgument("order must be >= 2".into()));
        }
        if self.boundary_nodes < 64 || self.boundary_nodes % 2 != 0 {
            return Err(Error::InvalidArgument("boundary nodes must be even and >= 64".into()));
        }
        if self.interior_theta < 64 || self.interior_radial < 8 {
            return Err(Error::InvalidArgument("interior grid must be at least 64 x 8".into()));
        }
        if !(self.eps_b > 0.0 && self.eps_b < 1.0 && self.eps_c > 0.0 && self.eps_c < 1.0) {
            return Err(Error::InvalidArgument("thresholds must lie in (0, 1)".into()));
        }
        if self.count == 0 {
            return Err(Error::InvalidArgument("count must be positive".into()));
        }
        Ok(())
    }

    /// The coarser configuration used by [`estimate_error`].
    pub fn coarse(&self) -> SolverConfig {
        SolverConfig {
            order: self.order.saturating_sub(4).max(2),
            boundary_nodes: (self.boundary_nodes / 2).max(64) & !1,
            estimate: false,
            ..*self
        }
    }
}

/// Which eigenvalue problem a spectrum solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Problem {
    /// Laplacian of a closed curve.
    CurveLaplace,
    /// Laplace–Beltrami operator of a closed surface.
    SurfaceLaplace,
    /// `-βΔ̄u + ∂_ν u = η ρ u` for harmonic `u`; Steklov when `β = 0`.
    SteklovWentzell { beta: f64, rho: DensityFn },
    /// `Δ²u = 0`, `∂_ν u = 0`, `∂_ν Δu + ξ ρ u = 0`.
    BiharmonicSteklov { rho: DensityFn },
    /// `Δ²u - τΔu = 0` with the natural fourth-order boundary conditions.
    Tension { tau: f64 },
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::CurveLaplace => "curve_laplace",
            Problem::SurfaceLaplace => "surface_laplace",
            Problem::SteklovWentzell { .. } => "steklov_wentzell",
            Problem::BiharmonicSteklov { .. } => "biharmonic_steklov",
            Problem::Tension { .. } => "tension",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::SteklovWentzell { beta, rho } => write!(f, "steklov_wentzell(beta={beta}, rho={rho})"),
            Problem::BiharmonicSteklov { rho } => write!(f, "biharmonic_steklov(rho={rho})"),
            Problem::Tension { tau } => write!(f, "tension(tau={tau})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub trial_dim: usize,
    /// Dimension after the essential constraint (equal to `trial_dim` when
    /// there is none).
    pub constrained_dim: usize,
    pub retained_rank: usize,
    pub condensed_rank: usize,
    pub b_condition: f64,
    /// Largest `‖∂_ν u‖ / ‖u‖` on the boundary over the reported modes.
    pub constraint_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub problem: Problem,
    pub domain: String,
    /// The first nonzero eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// One nonnegative entry per eigenvalue.
    pub error_estimate: Vec<f64>,
    /// `None` for mesh spectra.
    pub config: Option<SolverConfig>,
    pub diagnostics: Diagnostics,
}

impl SpectrumResult {
    pub fn get(&self, i: usize) -> Option<f64> {
        self.eigenvalues.get(i).copied()
    }
}

/// Drops leading eigenvalues that are zero relative to the scale of the
/// first `count + 1` and returns the next `count`.
fn nonzero_modes(values: &[f64], count: usize) -> Result<(Vec<f64>, usize)> {
    let head = &values[..values.len().min(count + 2)];
    let scale = head.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let skip = values.iter().take_while(|v| **v < ZERO_MODE_REL * scale).count();
    if values.len() < skip + count {
        return Err(Error::MissingSpectrum(format!(
            "{} nonzero eigenvalues available, {count} requested",
            values.len().saturating_sub(skip)
        )));
    }
    Ok((values[skip..skip + count].to_vec(), skip))
}

/// Laplacian of the closed boundary curve: `(2πk/L)²`, each twice.
pub fn curve_spectrum(spec: &DomainSpec2D, count: usize) -> Result<SpectrumResult> {
    curve_spectrum_with(spec, count, crate::geometry2d::DEFAULT_BOUNDARY_NODES)
}

pub fn curve_spectrum_with(spec: &DomainSpec2D, count: usize, nodes: usize) -> Result<SpectrumResult> {
    let values = |n: usize| -> Result<Vec<f64>> {
        let l = boundary_frame(spec, n)?.perimeter();
        Ok((0..count)
            .map(|i| {
                let q = 2.0 * PI * (i / 2 + 1) as f64 / l;
                q * q
            })
            .collect())
    };
    let fine = values(nodes)?;
    let coarse = values((nodes / 2).max(64) & !1)?;
    Ok(SpectrumResult {
        problem: Problem::CurveLaplace,
        domain: spec.to_string(),
        error_estimate: fine.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect(),
        eigenvalues: fine,
        config: None,
        diagnostics: Diagnostics::default(),
    })
}

/// First nonzero eigenvalues of the cotangent stiffness against the lumped
/// mass.
pub fn surface_spectrum(mesh: &TriMesh, count: usize) -> Result<SpectrumResult> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    let lap = cotan_laplacian(mesh)?;
    let dense = lap.normalized_dense()?;
    let raw = lowest_eigenvalues(&dense, count + 4);
    let (eigenvalues, _) = nonzero_modes(&raw, count)?;
    Ok(SpectrumResult {
        problem: Problem::SurfaceLaplace,
        domain: format!("mesh(V={}, F={})", mesh.vertex_count(), mesh.faces().len()),
        error_estimate: vec![0.0; count],
        eigenvalues,
        config: None,
        diagnostics: Diagnostics {
            trial_dim: mesh.vertex_count(),
            constrained_dim: mesh.vertex_count(),
            ..Default::default()
        },
    })
}

fn eval_all(space: &[BasisFn], points: &[[f64; 2]]) -> Result<Vec<Vec<EvalRecord>>> {
    points.iter().map(|p| space.iter().map(|f| f.eval(*p)).collect()).collect()
}

/// `Σ_n w_n f_n g_nᵀ` for per-node value rows, symmetrized.
fn weighted_gram<F, G>(rows: usize, d: usize, w: &[f64], f: F, g: G) -> Matrix
where
    F: Fn(usize, usize) -> f64,
    G: Fn(usize, usize) -> f64,
{
    let mut m = Matrix::zeros(d, d);
    let mut fv = vec![0.0; d];
    let mut gv = vec![0.0; d];
    for n in 0..rows {
        for i in 0..d {
            fv[i] = f(n, i);
            gv[i] = g(n, i);
        }
        for i in 0..d {
            let a = w[n] * fv[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..d {
                m[(i, j)] += a * gv[j];
            }
        }
    }
    m.symmetrize();
    m
}

fn normal_derivative(e: &EvalRecord, nu: [f64; 2]) -> f64 {
    e.gradient[0] * nu[0] + e.gradient[1] * nu[1]
}

/// Solves the planar problem once, without an error estimate.
fn solve_planar(spec: &DomainSpec2D, problem: &Problem, cfg: &SolverConfig) -> Result<SpectrumResult> {
    cfg.validate()?;
    spec.validate()?;
    let frame = boundary_frame(spec, cfg.boundary_nodes)?;
    let r_char = spec.characteristic_radius();
    let n = frame.len();
    let (space_kind, rho) = match *problem {
        Problem::SteklovWentzell { beta, rho } => {
            if !(beta >= 0.0 && beta.is_finite()) {
                return Err(Error::InvalidArgument(format!("beta must be nonnegative, got {beta}")));
            }
            rho.validate()?;
            (SpaceKind::Harmonic, rho)
        }
        Problem::BiharmonicSteklov { rho } => {
            rho.validate()?;
            (SpaceKind::Biharmonic, rho)
        }
        Problem::Tension { tau } => (SpaceKind::Tension { tau }, DensityFn::Constant(1.0)),
        Problem::CurveLaplace | Problem::SurfaceLaplace => {
            return Err(Error::InvalidArgument(format!("{} is not a planar Trefftz problem", problem.name())))
        }
    };
    let space = build_space(space_kind, cfg.order, r_char)?;
    let d = space.len();
    let bev = eval_all(&space, &frame.local)?;
    let rho_s = rho.sample(&frame);
    let w = &frame.weights;
    let b = weighted_gram(n, d, w, |k, i| rho_s[k] * bev[k][i].value, |k, j| bev[k][j].value);
    let dn = |k: usize, i: usize| normal_derivative(&bev[k][i], frame.normals[k]);

    let mut lap_integrals: Vec<f64> = Vec::new();
    let a = match *problem {
        Problem::SteklovWentzell { beta, .. } => {
            let mut a = weighted_gram(n, d, w, |k, i| bev[k][i].value, dn);
            if beta > 0.0 {
                let dt = |k: usize, i: usize| normal_derivative(&bev[k][i], frame.tangents[k]);
                let t = weighted_gram(n, d, w, dt, dt);
                for i in 0..d {
                    for j in 0..d {
                        a[(i, j)] += beta * t[(i, j)];
                    }
                }
            }
            a
        }
        Problem::BiharmonicSteklov { .. } => {
            let q = interior_quad(spec, cfg.interior_theta, cfg.interior_radial)?;
            let iev = eval_all(&space, &q.local)?;
            lap_integrals = (0..d).map(|i| (0..q.len()).map(|k| q.weights[k] * iev[k][i].laplacian).sum()).collect();
            weighted_gram(q.len(), d, &q.weights, |k, i| iev[k][i].laplacian, |k, j| iev[k][j].laplacian)
        }
        Problem::Tension { tau } => {
            let q = interior_quad(spec, cfg.interior_theta, cfg.interior_radial)?;
            let iev = eval_all(&space, &q.local)?;
            let mut a = Matrix::zeros(d, d);
            for (k, row) in iev.iter().enumerate() {
                let wk = q.weights[k];
                for i in 0..d {
                    for j in i..d {
                        let v = wk * (row[i].hessian_dot(&row[j]) + tau * row[i].gradient_dot(&row[j]));
                        a[(i, j)] += v;
                        if i != j {
                            a[(j, i)] += v;
                        }
                    }
                }
            }
            a
        }
        _ => unreachable!(),
    };

    let mut diag = Diagnostics { trial_dim: d, constrained_dim: d, ..Default::default() };
    let (values, vectors_full) = if let Problem::BiharmonicSteklov { .. } = problem {
        let nc = weighted_gram(n, d, w, dn, dn);
        let basis = neumann_fitted_basis(&nc, &lap_integrals, 2 * cfg.order as usize + 1, cfg.eps_c);
        if basis.cols() <= 1 {
            return Err(Error::StarvedSpace);
        }
        diag.constrained_dim = basis.cols();
        let pencil = SymPencil::new(a.congruence(&basis), b.congruence(&basis))?;
        let r = solve_pencil(&pencil, cfg.eps_b)?;
        diag.retained_rank = r.retained_rank;
        diag.condensed_rank = r.condensed_rank;
        diag.b_condition = r.b_condition;
        (r.values, basis.matmul(&r.vectors))
    } else {
        let pencil = SymPencil::new(a, b.clone())?;
        let r = solve_pencil(&pencil, cfg.eps_b)?;
        diag.retained_rank = r.retained_rank;
        diag.condensed_rank = r.condensed_rank;
        diag.b_condition = r.b_condition;
        (r.values, r.vectors)
    };
    let (eigenvalues, skip) = nonzero_modes(&values, cfg.count)?;

    // boundary residual of the Neumann-type constraint on the reported modes,
    // and the size of the boundary term it leaves in the Rayleigh quotient
    let mut floor = vec![0.0; eigenvalues.len()];
    if let Problem::BiharmonicSteklov { .. } = problem {
        let mut worst = 0.0f64;
        for (slot, col) in (skip..skip + cfg.count).enumerate() {
            let c = vectors_full.column(col);
            let (mut num, mut den, mut lap) = (0.0, 0.0, 0.0);
            for k in 0..n {
                let u: f64 = (0..d).map(|i| c[i] * bev[k][i].value).sum();
                let du: f64 = (0..d).map(|i| c[i] * dn(k, i)).sum();
                let l: f64 = (0..d).map(|i| c[i] * bev[k][i].laplacian).sum();
                num += w[k] * du * du;
                den += w[k] * u * u;
                lap += w[k] * l * l;
            }
            worst = worst.max(sqrt(num / den));
            let mass: f64 = (0..n)
                .map(|k| {
                    let u: f64 = (0..d).map(|i| c[i] * bev[k][i].value).sum();
                    w[k] * rho_s[k] * u * u
                })
                .sum();
            floor[slot] = sqrt(lap * num) / mass;
        }
        diag.constraint_residual = worst;
    }

    Ok(SpectrumResult {
        problem: *problem,
        domain: spec.to_string(),
        error_estimate: floor,
        eigenvalues,
        config: Some(*cfg),
        diagnostics: diag,
    })
}

/// Columns spanning the biharmonic functions with `∂νu ≈ 0` on the boundary.
///
/// The first `nh` trial functions are harmonic (index 0 is the constant), the
/// rest Almansi. Almansi coefficients range over the combinations with
/// `∫Δu = 0`; each is paired with the least-squares harmonic part cancelling
/// its normal derivative. The harmonic Gram block is inverted on its
/// `nullspace` complement at relative threshold `eps_c`.
fn neumann_fitted_basis(nc: &Matrix, lap_integrals: &[f64], nh: usize, eps_c: f64) -> Matrix {
    let d = nc.cols();
    let na = d - nh;
    let g = Matrix::from_fn(nh, nh, |i, j| nc[(i, j)]);
    let eg = jacobi_eigen(&g);
    let top = eg.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let flux = Matrix::from_fn(na, na, |i, j| lap_integrals[nh + i] * lap_integrals[nh + j]);
    let free = nullspace(&flux, 0.5);
    let mut z = Matrix::zeros(d, free.cols() + 1);
    z[(0, 0)] = 1.0;
    for c in 0..free.cols() {
        let coef = free.column(c);
        // right-hand side: harmonic-Almansi coupling applied to the Almansi part
        let rhs: Vec<f64> = (0..nh).map(|i| (0..na).map(|j| nc[(i, nh + j)] * coef[j]).sum()).collect();
        for (m, &lam) in eg.values.iter().enumerate() {
            if lam <= eps_c * top {
                continue;
            }
            let proj: f64 = (0..nh).map(|i| eg.vectors[(i, m)] * rhs[i]).sum::<f64>() / lam;
            for i in 0..nh {
                z[(i, c + 1)] -= eg.vectors[(i, m)] * proj;
            }
        }
        for j in 0..na {
            z[(nh + j, c + 1)] = coef[j];
        }
    }
    z
}

/// Per-eigenvalue `|λ(K, N) − λ(K−4, N/2)|`, raised to the solver's own
/// floor. A starved coarse solve gives `|λ|`.
pub fn estimate_error(spec: &DomainSpec2D, problem: &Problem, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let fine = solve_planar(spec, problem, cfg)?;
    attach_estimate(fine, spec, problem, cfg).map(|r| r.error_estimate)
}

fn attach_estimate(
    mut res: SpectrumResult,
    spec: &DomainSpec2D,
    problem: &Problem,
    cfg: &SolverConfig,
) -> Result<SpectrumResult> {
    let diff: Vec<f64> = match solve_planar(spec, problem, &cfg.coarse()) {
        Ok(coarse) => res.eigenvalues.iter().zip(&coarse.eigenvalues).map(|(a, b)| (a - b).abs()).collect(),
        Err(Error::StarvedSpace | Error::MissingSpectrum(_)) => res.eigenvalues.iter().map(|v| v.abs()).collect(),
        Err(e) => return Err(e),
    };
    for (est, d) in res.error_estimate.iter_mut().zip(diff) {
        *est = est.max(d);
    }
    Ok(res)
}

/// Solves a planar problem and, when `cfg.estimate` is set, attaches the
/// coarse-solve error estimate. Biharmonic estimates never drop below the
/// boundary term left by the constraint violation.
pub fn solve(spec: &DomainSpec2D, problem: &Problem, cfg: &SolverConfig) -> Result<SpectrumResult> {
    if let Problem::CurveLaplace = problem {
        return curve_spectrum_with(spec, cfg.count, cfg.boundary_nodes);
    }
    let res = solve_planar(spec, problem, cfg)?;
    if cfg.estimate {
        attach_estimate(res, spec, problem, cfg)
    } else {
        Ok(res)
    }
}

pub fn steklov_wentzell(spec: &DomainSpec2D, beta: f64, rho: DensityFn, cfg: &SolverConfig) -> Result<SpectrumResult> {
    solve(spec, &Problem::SteklovWentzell { beta, rho }, cfg)
}

/// `ξ` (or `ζ` for nonconstant `ρ`) with `∂νu = 0` imposed in least squares.
/// The reported estimate covers the leftover constraint violation.
pub fn biharmonic_steklov(spec: &DomainSpec2D, rho: DensityFn, cfg: &SolverConfig) -> Result<SpectrumResult> {
    solve(spec, &Problem::BiharmonicSteklov { rho }, cfg)
}

pub fn tension_spectrum(spec: &DomainSpec2D, tau: f64, cfg: &SolverConfig) -> Result<SpectrumResult> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    solve(spec, &Problem::Tension { tau }, cfg)
}

/// Closed-form spectra on the ball of radius `R` in `ℝⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallProblem {
    /// `ξ_k = k²(n+2k)/R³`.
    Biharmonic,
    /// `k/R + βk(k+n−2)/R²`; Steklov when `β = 0`.
    Wentzell { beta: f64 },
    /// First level only: `τ/R` with multiplicity `n`.
    Tension { tau: f64 },
    /// Laplace–Beltrami on the sphere: `k(k+n−2)/R²`.
    SphereLaplace,
}

impl BallProblem {
    pub fn name(&self) -> &'static str {
        match self {
            BallProblem::Biharmonic => "biharmonic",
            BallProblem::Wentzell { .. } => "wentzell",
            BallProblem::Tension { .. } => "tension",
            BallProblem::SphereLaplace => "sphere_laplace",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallLevel {
    pub k: u32,
    pub value: f64,
    pub multiplicity: u64,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Dimension of the space of degree-`k` harmonic homogeneous polynomials
/// in `n` variables.
pub fn harmonic_dim(n: u32, k: u32) -> u64 {
    let (n, k) = (n as u64, k as u64);
    if n == 0 {
        return 0;
    }
    let lead = binomial(n + k - 1, n - 1);
    let tail = if k >= 2 { binomial(n + k - 3, n - 1) } else { 0 };
    lead - tail
}

/// Nonzero levels `k = 1..=levels` (the tension problem has only `k = 1`).
pub fn ball_spectrum(problem: BallProblem, n: u32, radius: f64, levels: u32) -> Result<Vec<BallLevel>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {n}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let nf = n as f64;
    let r = radius;
    let level = |k: u32| -> Result<BallLevel> {
        let kf = k as f64;
        let value = match problem {
            BallProblem::Biharmonic => kf * kf * (nf + 2.0 * kf) / (r * r * r),
            BallProblem::Wentzell { beta } => {
                if !(beta >= 0.0) {
                    return Err(Error::InvalidArgument(format!("beta must be nonnegative, got {beta}")));
                }
                kf / r + beta * kf * (kf + nf - 2.0) / (r * r)
            }
            BallProblem::Tension { tau } => {
                if !(tau > 0.0) {
                    return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
                }
                tau / r
            }
            BallProblem::SphereLaplace => kf * (kf + nf - 2.0) / (r * r),
        };
        Ok(BallLevel { k, value, multiplicity: harmonic_dim(n, k) })
    };
    let top = if let BallProblem::Tension { .. } = problem { 1 } else { levels };
    (1..=top).map(level).collect()
}

/// The first `count` ball eigenvalues with multiplicity, ascending.
pub fn ball_eigenvalues(problem: BallProblem, n: u32, radius: f64, count: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut levels = 1;
    loop {
        let table = ball_spectrum(problem, n, radius, levels)?;
        out.clear();
        for l in &table {
            for _ in 0..l.multiplicity {
                out.push(l.value);
            }
        }
        if out.len() >= count {
            out.truncate(count);
            return Ok(out);
        }
        if let BallProblem::Tension { .. } = problem {
            return Err(Error::MissingSpectrum(format!(
                "only the first {n} tension eigenvalues are known in closed form"
            )));
        }
        levels += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn curve_disk_values() {
        let s = curve_spectrum(&DomainSpec2D::disk(2.0), 4).unwrap();
        for (g, w) in s.eigenvalues.iter().zip([0.25, 0.25, 1.0, 1.0]) {
            assert!(close(*g, w, 1e-12));
        }
    }

    #[test]
    fn steklov_disk() {
        let s = steklov_wentzell(&DomainSpec2D::disk(1.0), 0.0, DensityFn::Constant(1.0), &SolverConfig::default())
            .unwrap();
        for (g, w) in s.eigenvalues.iter().zip([1.0, 1.0, 2.0, 2.0]) {
            assert!(close(*g, w, 1e-10), "{:?}", s.eigenvalues);
        }
        assert!(s.error_estimate.iter().all(|e| *e <= 1e-9));
    }

    #[test]
    fn wentzell_disk() {
        let cfg = SolverConfig::default().with_order(12);
        let s = steklov_wentzell(&DomainSpec2D::disk(1.0), 0.3, DensityFn::Constant(1.0), &cfg).unwrap();
        assert!(close(s.eigenvalues[0], 1.3, 1e-8) && close(s.eigenvalues[1], 1.3, 1e-8));
    }

    #[test]
    fn biharmonic_disk() {
        let cfg = SolverConfig::default().with_order(14);
        let s = biharmonic_steklov(&DomainSpec2D::disk(1.0), DensityFn::Constant(1.0), &cfg).unwrap();
        for (g, w) in s.eigenvalues.iter().zip([4.0, 4.0, 24.0, 24.0]) {
            assert!(close(*g, w, 1e-6), "{:?}", s.eigenvalues);
        }
        assert!(s.diagnostics.constraint_residual < 1e-6);
        assert!(s.error_estimate[0] <= 1e-6);
    }

    #[test]
    fn tension_disk() {
        let cfg = SolverConfig::default().with_order(12).with_count(2);
        let s = tension_spectrum(&DomainSpec2D::disk(1.0), 1.0, &cfg).unwrap();
        assert!(close(s.eigenvalues[0], 1.0, 1e-6) && close(s.eigenvalues[1], 1.0, 1e-6), "{:?}", s.eigenvalues);
        let s = tension_spectrum(&DomainSpec2D::disk(2.0), 5.0, &cfg).unwrap();
        assert!(close(s.eigenvalues[0], 2.5, 1e-6) && close(s.eigenvalues[1], 2.5, 1e-6), "{:?}", s.eigenvalues);
    }

    #[test]
    fn sphere_surface_spectrum() {
        let m = crate::mesh3d::icosphere(3, 1.0).unwrap();
        let s = surface_spectrum(&m, 3).unwrap();
        assert!(s.eigenvalues.iter().all(|l| (l - 2.0).abs() < 0.05), "{:?}", s.eigenvalues);
    }

    #[test]
    fn ball_tables() {
        let t = ball_spectrum(BallProblem::Biharmonic, 3, 1.0, 2).unwrap();
        assert_eq!((t[0].value, t[0].multiplicity), (5.0, 3));
        assert_eq!((t[1].value, t[1].multiplicity), (28.0, 5));
        let t = ball_spectrum(BallProblem::Wentzell { beta: 0.0 }, 2, 1.0, 1).unwrap();
        assert_eq!((t[0].value, t[0].multiplicity), (1.0, 2));
        for k in 0..=5 {
            assert_eq!(harmonic_dim(3, k), 2 * k as u64 + 1);
        }
        assert_eq!(harmonic_dim(2, 0), 1);
        assert_eq!(harmonic_dim(2, 4), 2);
    }

    #[test]
    fn density_parse() {
        assert_eq!("const:2".parse::<DensityFn>().unwrap(), DensityFn::Constant(2.0));
        assert_eq!("cos:1,0.5,3".parse::<DensityFn>().unwrap(), DensityFn::Cosine { c0: 1.0, c1: 0.5, m: 3 });
        assert!("cos:1,1.5,3".parse::<DensityFn>().is_err());
    }
}
