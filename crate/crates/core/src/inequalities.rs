//! Registry of isoperimetric eigenvalue inequalities and conjectures, with
//! signed slack and first-order error bars.
//!
//! Slack is oriented so that a nonnegative value means the inequality holds:
//! `rhs − lhs` for upper bounds, `lhs − rhs` for lower bounds.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry2d::{
    boundary_frame, boundary_power_integral, geo_summary, recenter, CenteringMode, DomainSpec2D, GeoSummary,
};
use crate::math::{powf, sqrt};
use crate::mesh3d::{mesh_summary, TriMesh};
use crate::spectra::{curve_spectrum_with, solve, surface_spectrum, DensityFn, Problem, SolverConfig, SpectrumResult};

/// Volume of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * core::f64::consts::PI * unit_ball_volume(n - 2) / n as f64,
    }
}

/// `ω_n` together with the dimension it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallConstants {
    pub n: u32,
    pub omega: f64,
}

impl BallConstants {
    pub fn new(n: u32) -> Self {
        Self { n, omega: unit_ball_volume(n) }
    }
}

/// Which side of the display is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `lhs ≤ rhs`.
    Upper,
    /// `lhs ≥ rhs`.
    Lower,
}

/// Spectrum a check consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Need {
    Geometry,
    Laplace,
    Biharmonic,
    WeightedBiharmonic,
    Tension,
    Steklov,
    Wentzell,
    WeightedWentzell,
}

macro_rules! check_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CheckId { $($variant),* }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(CheckId::$variant => $name),* }
            }
        }

        impl FromStr for CheckId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $($name => Ok(CheckId::$variant),)*
                    other => Err(Error::Parse(format!("unknown check id {other:?}"))),
                }
            }
        }
    };
}

check_ids! {
    Reilly => "REILLY",
    T1Sum => "T1_SUM",
    T1Curv => "T1_CURV",
    Conj21 => "CONJ_2_1",
    Rem22 => "REM_2_2",
    T3Recip => "T3_RECIP",
    WeightedProd => "WEIGHTED_PROD",
    BpRecip => "BP_RECIP",
    T4Sum => "T4_SUM",
    Conj32 => "CONJ_3_2",
    Brock => "BROCK",
    StekSum => "STEK_SUM",
    HenrotProd => "HENROT_PROD",
    T7Sum => "T7_SUM",
    T8Prod => "T8_PROD",
    T41Weighted => "T41_WEIGHTED",
    J0Min => "J0_MIN",
    JProd => "JPROD",
    Lemma41 => "LEMMA_4_1",
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl CheckId {
    /// One-line statement of what is compared.
    pub fn statement(self) -> &'static str {
        use CheckId::*;
        match self {
            Reilly => "λ1 ≤ (n−1)/n² · |M|²/|Ω|²",
            T1Sum => "Σ λi ≤ (n−1)/n · |M|²/|Ω|²",
            T1Curv => "Σ λi ≤ (n−1) √|M| / |Ω| · (∫ H²)^½",
            Conj21 => "Σ λi ≤ (n−1) |M|/|Ω| · (ωn/|Ω|)^(1/n)",
            Rem22 => "λn ≤ |M|²/(4|Ω|²)",
            T3Recip => "Σ 1/ξi ≥ n²|Ω|(|Ω|/ωn)^(2/n) / ((n+2)|∂Ω|)",
            WeightedProd => "Π ζi ≤ (ωn/|Ω|)² ((n+2)/(n|Ω|) ∫ρ⁻¹)ⁿ",
            BpRecip => "Σ 1/λi,τ ≥ (n/τ)(|Ω|/ωn)^(1/n)",
            T4Sum => "Σ λi,τ ≤ τ|∂Ω|/|Ω|",
            Conj32 => "Π λi,τ ≤ τⁿ ωn/|Ω|",
            Brock => "Σ 1/pi ≥ n(|Ω|/ωn)^(1/n)",
            StekSum => "Σ pi ≤ |∂Ω|/|Ω|",
            HenrotProd => "Π pi ≤ ωn/|Ω|",
            T7Sum => "Σ λi,β ≤ |∂Ω|/|Ω| + (n−1)β/n · |∂Ω|²/|Ω|²",
            T8Prod => "Π λi,β ≤ (1 + (n−1)β|∂Ω|/(n|Ω|))ⁿ ωn/|Ω|",
            T41Weighted => "Σ ηi,β ≤ ((|Ω|+β|∂Ω|)∫ρ⁻¹ − β/n (∫ρ^−½)²)/|Ω|²",
            J0Min => "J0 ≥ n ωn R*^(n+2)/(n+2), R* = (|Ω|/ωn)^(1/n)",
            JProd => "Π Jk ≥ |Ω|^(n+2)/((n+2)ⁿ ωn²)",
            Lemma41 => "Π ∫∂Ω xk² ≥ |Ω|^(n+1)/ωn",
        }
    }

    pub fn orientation(self) -> Orientation {
        use CheckId::*;
        match self {
            T3Recip | BpRecip | Brock | J0Min | JProd | Lemma41 => Orientation::Lower,
            _ => Orientation::Upper,
        }
    }

    /// Centroid the check's geometry must be normalized to, if any.
    pub fn centering(self) -> Option<CenteringMode> {
        use CheckId::*;
        match self {
            T3Recip | WeightedProd | J0Min | JProd => Some(CenteringMode::Volume),
            T8Prod | Lemma41 => Some(CenteringMode::Boundary),
            _ => None,
        }
    }

    /// Whether the statement needs a convex domain in dimension `n`.
    pub fn requires_convex(self, n: usize) -> bool {
        matches!(self, CheckId::T8Prod | CheckId::Lemma41) && n >= 3
    }

    /// Whether the statement is an open conjecture for a domain of the
    /// given dimension and convexity.
    pub fn is_conjecture(self, n: usize, convex: bool) -> bool {
        use CheckId::*;
        match self {
            Conj21 | Conj32 | Rem22 => true,
            HenrotProd => n >= 3 && !convex,
            _ => false,
        }
    }

    pub fn need(self) -> Need {
        use CheckId::*;
        match self {
            Reilly | T1Sum | T1Curv | Conj21 | Rem22 => Need::Laplace,
            T3Recip => Need::Biharmonic,
            WeightedProd => Need::WeightedBiharmonic,
            BpRecip | T4Sum | Conj32 => Need::Tension,
            Brock | StekSum | HenrotProd => Need::Steklov,
            T7Sum | T8Prod => Need::Wentzell,
            T41Weighted => Need::WeightedWentzell,
            J0Min | JProd | Lemma41 => Need::Geometry,
        }
    }

    /// Planar domains support every check; closed surfaces only those that
    /// use the Laplace–Beltrami spectrum or moments.
    pub fn applicable(self, dim: usize) -> bool {
        match dim {
            2 => true,
            3 => matches!(self.need(), Need::Laplace | Need::Geometry),
            _ => false,
        }
    }
}

/// Parses a comma-separated list of check ids; `all` selects every id.
pub fn parse_ids(list: &str) -> Result<Vec<CheckId>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(CheckId::ALL.to_vec());
    }
    let mut ids =
        list.split(',').filter(|s| !s.trim().is_empty()).map(CheckId::from_str).collect::<Result<Vec<_>>>()?;
    ids.sort();
    ids.dedup();
    if ids.is_empty() {
        return Err(Error::Parse("empty check list".into()));
    }
    Ok(ids)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn classify(slack: f64, err: f64) -> Status {
        if slack > err {
            Status::Pass
        } else if slack < -err {
            Status::Fail
        } else {
            Status::Inconclusive
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub id: CheckId,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub rel_slack: f64,
    pub err: f64,
    pub status: Status,
    pub conjecture: bool,
    /// FNV-1a digest of the numbers the check consumed.
    pub digest: u64,
}

/// Parameters shared by the spectral checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckParams {
    pub beta: f64,
    pub tau: f64,
    pub rho: DensityFn,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self { beta: 1.0, tau: 1.0, rho: DensityFn::Constant(1.0) }
    }
}

/// `∫_∂Ω ρ⁻¹` and `∫_∂Ω ρ^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightIntegrals {
    pub inv: f64,
    pub inv_sqrt: f64,
}

impl WeightIntegrals {
    pub fn on_boundary(spec: &DomainSpec2D, rho: &DensityFn, nodes: usize) -> Result<Self> {
        let frame = boundary_frame(spec, nodes)?;
        let r = rho.sample(&frame);
        Ok(Self { inv: boundary_power_integral(&frame, &r, -1.0), inv_sqrt: boundary_power_integral(&frame, &r, -0.5) })
    }
}

/// Spectra available to [`evaluate`].
#[derive(Debug, Clone, Default)]
pub struct SpectraSet {
    entries: Vec<(Need, SpectrumResult)>,
}

impl SpectraSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, need: Need, s: SpectrumResult) {
        self.entries.retain(|(n, _)| *n != need);
        self.entries.push((need, s));
    }

    pub fn get(&self, need: Need) -> Option<&SpectrumResult> {
        self.entries.iter().find(|(n, _)| *n == need).map(|(_, s)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Need, SpectrumResult)> {
        self.entries.iter()
    }
}

/// Everything a check may consume besides the spectra.
#[derive(Debug, Clone, Copy)]
pub struct CheckContext<'a> {
    pub geo: &'a GeoSummary,
    pub params: CheckParams,
    pub weights: Option<WeightIntegrals>,
    /// Relative uncertainty of the geometric functionals.
    pub geometry_rel_error: f64,
}

/// Relative tolerance on the centroid, in units of the length scale.
pub const CENTERING_TOL: f64 = 1e-10;
/// Floor of the geometry error term, relative to `|rhs|`.
pub const GEOMETRY_REL_ERROR: f64 = 1e-10;

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn bytes(&mut self, b: &[u8]) {
        for x in b {
            self.0 ^= *x as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn f64(&mut self, v: f64) {
        self.bytes(&v.to_bits().to_le_bytes());
    }
}

fn first_n<'s>(s: &'s SpectrumResult, n: usize, id: CheckId) -> Result<(&'s [f64], &'s [f64])> {
    if s.eigenvalues.len() < n {
        return Err(Error::MissingSpectrum(format!(
            "{id} needs {n} eigenvalues of {}, got {}",
            s.problem.name(),
            s.eigenvalues.len()
        )));
    }
    Ok((&s.eigenvalues[..n], &s.error_estimate[..n]))
}

/// Evaluates one check. Fails when a spectrum is missing, the geometry is
/// not centered as the check requires, or convexity is required but absent.
pub fn evaluate(id: CheckId, ctx: &CheckContext<'_>, spectra: &SpectraSet) -> Result<CheckReport> {
    let g = ctx.geo;
    let n = g.dim;
    if !id.applicable(n) {
        return Err(Error::NotApplicable { id: id.as_str(), dim: n });
    }
    if id.requires_convex(n) && !g.convex {
        return Err(Error::ConvexityRequired(id.as_str()));
    }
    if let Some(mode) = id.centering() {
        let c = match mode {
            CenteringMode::Volume => &g.volume_centroid,
            CenteringMode::Boundary => &g.boundary_centroid,
        };
        let off = sqrt(c.iter().map(|x| x * x).sum());
        if off > CENTERING_TOL * g.length_scale {
            return Err(Error::CenteringViolated(format!(
                "{id} needs the {} centroid at the origin, it is {off:e} away",
                mode.as_str()
            )));
        }
    }
    let nf = n as f64;
    let a = g.volume;
    let l = g.boundary_measure;
    let omega = unit_ball_volume(n as u32);
    let p = ctx.params;
    let mut digest = Fnv::new();
    digest.bytes(id.as_str().as_bytes());
    for v in [a, l] {
        digest.f64(v);
    }

    let spectrum = match id.need() {
        Need::Geometry => None,
        need => {
            Some(spectra.get(need).ok_or_else(|| Error::MissingSpectrum(format!("{id} needs a {need:?} spectrum")))?)
        }
    };
    let (lam, est): (&[f64], &[f64]) = match spectrum {
        Some(s) => first_n(s, n, id)?,
        None => (&[], &[]),
    };
    for v in lam {
        digest.f64(*v);
    }
    let sum = |v: &[f64]| v.iter().sum::<f64>();
    let prod = |v: &[f64]| v.iter().product::<f64>();
    let ones = vec![1.0; lam.len()];
    let recip_sq: Vec<f64> = lam.iter().map(|x| 1.0 / (x * x)).collect();
    let prod_grad: Vec<f64> = lam.iter().map(|x| prod(lam) / x).collect();
    let weights = || ctx.weights.ok_or_else(|| Error::MissingSpectrum(format!("{id} needs boundary weight integrals")));

    use CheckId::*;
    let (lhs, rhs, grad): (f64, f64, Vec<f64>) = match id {
        Reilly => {
            let mut gr = vec![0.0; n];
            gr[0] = 1.0;
            (lam[0], (nf - 1.0) / (nf * nf) * l * l / (a * a), gr)
        }
        T1Sum => (sum(lam), (nf - 1.0) / nf * l * l / (a * a), ones),
        T1Curv => {
            digest.f64(g.curvature_energy);
            (sum(lam), (nf - 1.0) * sqrt(l) / a * sqrt(g.curvature_energy), ones)
        }
        Conj21 => (sum(lam), (nf - 1.0) * l / a * powf(omega / a, 1.0 / nf), ones),
        Rem22 => {
            let mut gr = vec![0.0; n];
            gr[n - 1] = 1.0;
            (lam[n - 1], l * l / (4.0 * a * a), gr)
        }
        T3Recip => {
            (lam.iter().map(|x| 1.0 / x).sum(), nf * nf * a * powf(a / omega, 2.0 / nf) / ((nf + 2.0) * l), recip_sq)
        }
        WeightedProd => {
            let w = weights()?;
            digest.f64(w.inv);
            (prod(lam), (omega / a) * (omega / a) * powf((nf + 2.0) / (nf * a) * w.inv, nf), prod_grad)
        }
        BpRecip => (lam.iter().map(|x| 1.0 / x).sum(), nf / p.tau * powf(a / omega, 1.0 / nf), recip_sq),
        T4Sum => (sum(lam), p.tau * l / a, ones),
        Conj32 => (prod(lam), powf(p.tau, nf) * omega / a, prod_grad),
        Brock => (lam.iter().map(|x| 1.0 / x).sum(), nf * powf(a / omega, 1.0 / nf), recip_sq),
        StekSum => (sum(lam), l / a, ones),
        HenrotProd => (prod(lam), omega / a, prod_grad),
        T7Sum => (sum(lam), l / a + (nf - 1.0) * p.beta / nf * l * l / (a * a), ones),
        T8Prod => (prod(lam), powf(1.0 + (nf - 1.0) * p.beta * l / (nf * a), nf) * omega / a, prod_grad),
        T41Weighted => {
            let w = weights()?;
            digest.f64(w.inv);
            digest.f64(w.inv_sqrt);
            (sum(lam), ((a + p.beta * l) * w.inv - p.beta / nf * w.inv_sqrt * w.inv_sqrt) / (a * a), ones)
        }
        J0Min => {
            let r_star = powf(a / omega, 1.0 / nf);
            (g.j0(), nf * omega * powf(r_star, nf + 2.0) / (nf + 2.0), Vec::new())
        }
        JProd => (g.jprod(), powf(a, nf + 2.0) / (powf(nf + 2.0, nf) * omega * omega), Vec::new()),
        Lemma41 => (g.boundary_moment_product(), powf(a, nf + 1.0) / omega, Vec::new()),
    };
    if matches!(id, J0Min | JProd) {
        for m in &g.moments {
            digest.f64(*m);
        }
    }
    if id == Lemma41 {
        for m in &g.boundary_moments {
            digest.f64(*m);
        }
    }
    let slack = match id.orientation() {
        Orientation::Upper => rhs - lhs,
        Orientation::Lower => lhs - rhs,
    };
    let spectral: f64 = grad.iter().zip(est).map(|(d, e)| d.abs() * e).sum();
    let err = spectral + ctx.geometry_rel_error.max(GEOMETRY_REL_ERROR) * rhs.abs();
    Ok(CheckReport {
        id,
        lhs,
        rhs,
        slack,
        rel_slack: slack / rhs.abs(),
        err,
        status: Status::classify(slack, err),
        conjecture: id.is_conjecture(n, g.convex),
        digest: digest.0,
    })
}

/// Outcome of one check inside a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub id: CheckId,
    pub outcome: core::result::Result<CheckReport, Error>,
}

impl CheckEntry {
    pub fn report(&self) -> Option<&CheckReport> {
        self.outcome.as_ref().ok()
    }

    pub fn status(&self) -> Option<Status> {
        self.report().map(|r| r.status)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub domain: String,
    /// Geometry of the input as given (before any recentering).
    pub geometry: GeoSummary,
    pub params: CheckParams,
    pub config: Option<SolverConfig>,
    pub spectra: SpectraSet,
    pub checks: Vec<CheckEntry>,
    /// FNV-1a digest of the inputs and every check digest.
    pub digest: u64,
}

impl SuiteReport {
    pub fn entry(&self, id: CheckId) -> Option<&CheckEntry> {
        self.checks.iter().find(|e| e.id == id)
    }

    pub fn report(&self, id: CheckId) -> Option<&CheckReport> {
        self.entry(id).and_then(|e| e.report())
    }

    /// Non-conjecture checks with status fail.
    pub fn theorem_failures(&self) -> usize {
        self.checks.iter().filter_map(|e| e.report()).filter(|r| r.status == Status::Fail && !r.conjecture).count()
    }

    pub fn conjecture_failures(&self) -> usize {
        self.checks.iter().filter_map(|e| e.report()).filter(|r| r.status == Status::Fail && r.conjecture).count()
    }

    pub fn errors(&self) -> usize {
        self.checks.iter().filter(|e| e.outcome.is_err()).count()
    }
}

/// Settings for [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SuiteConfig {
    pub solver: SolverConfig,
    pub params: CheckParams,
}

fn problem_for(need: Need, p: &CheckParams) -> Option<Problem> {
    let one = DensityFn::Constant(1.0);
    Some(match need {
        Need::Geometry => return None,
        Need::Laplace => Problem::CurveLaplace,
        Need::Biharmonic => Problem::BiharmonicSteklov { rho: one },
        Need::WeightedBiharmonic => Problem::BiharmonicSteklov { rho: p.rho },
        Need::Tension => Problem::Tension { tau: p.tau },
        Need::Steklov => Problem::SteklovWentzell { beta: 0.0, rho: one },
        Need::Wentzell => Problem::SteklovWentzell { beta: p.beta, rho: one },
        Need::WeightedWentzell => Problem::SteklovWentzell { beta: p.beta, rho: p.rho },
    })
}

fn sorted_unique(ids: &[CheckId]) -> Vec<CheckId> {
    let mut v = ids.to_vec();
    v.sort();
    v.dedup();
    v
}

fn suite_digest(domain: &str, checks: &[CheckEntry]) -> u64 {
    let mut h = Fnv::new();
    h.bytes(domain.as_bytes());
    for e in checks {
        h.bytes(e.id.as_str().as_bytes());
        match &e.outcome {
            Ok(r) => h.bytes(&r.digest.to_le_bytes()),
            Err(_) => h.bytes(b"error"),
        }
    }
    h.0
}

/// Runs the selected checks on a planar domain. Each spectrum is computed
/// once; geometry is recentered per check. Failures are recorded per check.
pub fn run_suite(spec: &DomainSpec2D, ids: &[CheckId], cfg: &SuiteConfig) -> Result<SuiteReport> {
    spec.validate()?;
    cfg.solver.validate()?;
    let ids = sorted_unique(ids);
    let nodes = cfg.solver.boundary_nodes;
    let geometry = geo_summary(spec, nodes)?;
    let solver = SolverConfig { count: cfg.solver.count.max(2), ..cfg.solver };

    let mut spectra = SpectraSet::new();
    let mut spectrum_errors: Vec<(Need, Error)> = Vec::new();
    let mut needs: Vec<Need> = ids.iter().map(|i| i.need()).collect();
    needs.sort();
    needs.dedup();
    for need in needs {
        let Some(problem) = problem_for(need, &cfg.params) else { continue };
        let res = match problem {
            Problem::CurveLaplace => curve_spectrum_with(spec, solver.count, nodes),
            _ => match solve(spec, &problem, &solver) {
                Err(Error::MissingSpectrum(_)) if solver.count > 2 => solve(spec, &problem, &solver.with_count(2)),
                other => other,
            },
        };
        match res {
            Ok(s) => spectra.insert(need, s),
            Err(e) => spectrum_errors.push((need, e)),
        }
    }

    let weights = if ids.iter().any(|i| matches!(i.need(), Need::WeightedBiharmonic | Need::WeightedWentzell)) {
        Some(WeightIntegrals::on_boundary(spec, &cfg.params.rho, nodes)?)
    } else {
        None
    };
    let volume_geo = if ids.iter().any(|i| i.centering() == Some(CenteringMode::Volume)) {
        Some(geo_summary(&recenter(spec, CenteringMode::Volume)?, nodes)?)
    } else {
        None
    };
    let boundary_geo = if ids.iter().any(|i| i.centering() == Some(CenteringMode::Boundary)) {
        Some(geo_summary(&recenter(spec, CenteringMode::Boundary)?, nodes)?)
    } else {
        None
    };

    let checks: Vec<CheckEntry> = ids
        .iter()
        .map(|&id| {
            if let Some((_, e)) = spectrum_errors.iter().find(|(n, _)| *n == id.need()) {
                return CheckEntry { id, outcome: Err(e.clone()) };
            }
            let geo = match id.centering() {
                Some(CenteringMode::Volume) => volume_geo.as_ref().unwrap(),
                Some(CenteringMode::Boundary) => boundary_geo.as_ref().unwrap(),
                None => &geometry,
            };
            let ctx = CheckContext { geo, params: cfg.params, weights, geometry_rel_error: GEOMETRY_REL_ERROR };
            CheckEntry { id, outcome: evaluate(id, &ctx, &spectra) }
        })
        .collect();
    let domain = alloc::string::ToString::to_string(spec);
    Ok(SuiteReport {
        digest: suite_digest(&domain, &checks),
        domain,
        geometry,
        params: cfg.params,
        config: Some(solver),
        spectra,
        checks,
    })
}

fn max_rel_change(a: &GeoSummary, b: &GeoSummary) -> f64 {
    let rel = |x: f64, y: f64| if x == 0.0 { 0.0 } else { ((x - y) / x).abs() };
    [
        rel(a.volume, b.volume),
        rel(a.boundary_measure, b.boundary_measure),
        rel(a.curvature_energy, b.curvature_energy),
        rel(a.j0(), b.j0()),
        rel(a.boundary_moment_product(), b.boundary_moment_product()),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Runs the selected checks on a closed surface. When a coarser mesh of the
/// same surface is supplied, eigenvalue and geometry differences against it
/// serve as error estimates; otherwise the spectral estimate is zero.
pub fn run_mesh_suite(mesh: &TriMesh, reference: Option<&TriMesh>, ids: &[CheckId]) -> Result<SuiteReport> {
    let ids = sorted_unique(ids);
    let geometry = mesh_summary(mesh)?;
    let n = geometry.dim;
    let mut spectra = SpectraSet::new();
    let mut geometry_rel_error = GEOMETRY_REL_ERROR;
    let mut spectrum_error = None;
    if ids.iter().any(|i| i.need() == Need::Laplace) {
        match surface_spectrum(mesh, n) {
            Ok(mut s) => {
                if let Some(coarse) = reference {
                    let c = surface_spectrum(coarse, n)?;
                    s.error_estimate = s.eigenvalues.iter().zip(&c.eigenvalues).map(|(a, b)| (a - b).abs()).collect();
                }
                spectra.insert(Need::Laplace, s);
            }
            Err(e) => spectrum_error = Some(e),
        }
    }
    if let Some(coarse) = reference {
        let cg = mesh_summary(coarse)?;
        let centered = |g: &GeoSummary, m: &TriMesh| -> Result<GeoSummary> {
            let c = &g.volume_centroid;
            mesh_summary(&m.translated([-c[0], -c[1], -c[2]]))
        };
        geometry_rel_error =
            max_rel_change(&centered(&geometry, mesh)?, &centered(&cg, coarse)?).max(GEOMETRY_REL_ERROR);
    }
    let centered_geo = |mode: CenteringMode| -> Result<GeoSummary> {
        let c = match mode {
            CenteringMode::Volume => &geometry.volume_centroid,
            CenteringMode::Boundary => &geometry.boundary_centroid,
        };
        mesh_summary(&mesh.translated([-c[0], -c[1], -c[2]]))
    };
    let mut checks = Vec::with_capacity(ids.len());
    for &id in &ids {
        if id.need() == Need::Laplace {
            if let Some(e) = &spectrum_error {
                checks.push(CheckEntry { id, outcome: Err(e.clone()) });
                continue;
            }
        }
        let geo = match id.centering() {
            Some(mode) => match centered_geo(mode) {
                Ok(g) => g,
                Err(e) => {
                    checks.push(CheckEntry { id, outcome: Err(e) });
                    continue;
                }
            },
            None => geometry.clone(),
        };
        let ctx = CheckContext { geo: &geo, params: CheckParams::default(), weights: None, geometry_rel_error };
        checks.push(CheckEntry { id, outcome: evaluate(id, &ctx, &spectra) });
    }
    let domain = format!("mesh(V={}, F={})", mesh.vertex_count(), mesh.faces().len());
    Ok(SuiteReport {
        digest: suite_digest(&domain, &checks),
        domain,
        geometry,
        params: CheckParams::default(),
        config: None,
        spectra,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) / PI - 1.0).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn ids_roundtrip() {
        for id in CheckId::ALL {
            assert_eq!(id.as_str().parse::<CheckId>().unwrap(), *id);
        }
        assert!("T9_NOPE".parse::<CheckId>().is_err());
        assert_eq!(parse_ids("T4_SUM,T3_RECIP").unwrap(), vec![CheckId::T3Recip, CheckId::T4Sum]);
    }

    #[test]
    fn classification() {
        assert_eq!(Status::classify(1.0, 0.5), Status::Pass);
        assert_eq!(Status::classify(-1.0, 0.5), Status::Fail);
        assert_eq!(Status::classify(0.2, 0.5), Status::Inconclusive);
    }

    #[test]
    fn uncentered_moment_check_is_rejected() {
        let spec = DomainSpec2D::disk(1.0).with_center([0.5, 0.0]);
        let g = geo_summary(&spec, 256).unwrap();
        let ctx = CheckContext { geo: &g, params: CheckParams::default(), weights: None, geometry_rel_error: 0.0 };
        assert!(matches!(evaluate(CheckId::JProd, &ctx, &SpectraSet::new()), Err(Error::CenteringViolated(_))));
    }

    #[test]
    fn missing_spectrum_is_an_error() {
        let g = geo_summary(&DomainSpec2D::disk(1.0), 256).unwrap();
        let ctx = CheckContext { geo: &g, params: CheckParams::default(), weights: None, geometry_rel_error: 0.0 };
        assert!(matches!(evaluate(CheckId::T1Sum, &ctx, &SpectraSet::new()), Err(Error::MissingSpectrum(_))));
    }

    #[test]
    fn disk_equality_suite() {
        let report = run_suite(&DomainSpec2D::disk(1.0), CheckId::ALL, &SuiteConfig::default()).unwrap();
        for e in &report.checks {
            let r = e.outcome.as_ref().unwrap_or_else(|err| panic!("{}: {err}", e.id));
            assert!(r.rel_slack.abs() <= 1e-6, "{} rel_slack {}", r.id, r.rel_slack);
            assert_ne!(r.status, Status::Fail, "{}", r.id);
        }
    }
}
