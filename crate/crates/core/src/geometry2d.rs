//! Star-shaped planar domains and the boundary/interior quadratures built on
//! them.
//!
//! A domain is a radius function `r(θ) > 0` about a center point. Boundary
//! integrals use the uniform trapezoid rule in `θ`, which converges
//! spectrally for the smooth periodic integrands produced here. Interior
//! integrals use a polar tensor rule (trapezoid in `θ`, Gauss–Legendre in the
//! radial fraction).

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math::{cos, powf, sin, sqrt};
use crate::quadrature::gauss_legendre_unit;

/// Number of samples used to validate positivity of `r(θ)`.
pub const VALIDATION_SAMPLES: usize = 4096;
/// Default boundary node count.
pub const DEFAULT_BOUNDARY_NODES: usize = 512;
const RECENTER_NODES: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    Disk {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `R (1 + ε cos mθ)`.
    PerturbedDisk {
        radius: f64,
        eps: f64,
        waves: u32,
    },
    /// `a₀ + Σ (a_k cos kθ + b_k sin kθ)`; `cos[k-1] = a_k`, `sin[k-1] = b_k`.
    FourierRadius {
        a0: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
}

/// A star-shaped domain: radius function about `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec2D {
    pub kind: DomainKind,
    pub center: [f64; 2],
}

impl DomainSpec2D {
    pub fn new(kind: DomainKind) -> Self {
        Self { kind, center: [0.0, 0.0] }
    }

    pub fn disk(radius: f64) -> Self {
        Self::new(DomainKind::Disk { radius })
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::new(DomainKind::Ellipse { a, b })
    }

    pub fn perturbed_disk(radius: f64, eps: f64, waves: u32) -> Self {
        Self::new(DomainKind::PerturbedDisk { radius, eps, waves })
    }

    pub fn fourier(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self::new(DomainKind::FourierRadius { a0, cos, sin })
    }

    pub fn with_center(mut self, center: [f64; 2]) -> Self {
        self.center = center;
        self
    }

    /// The same shape moved by `offset`.
    pub fn translated(&self, offset: [f64; 2]) -> Self {
        let mut out = self.clone();
        out.center = [self.center[0] + offset[0], self.center[1] + offset[1]];
        out
    }

    /// Dilation about the origin by `s > 0` (center included).
    pub fn scaled(&self, s: f64) -> Self {
        let kind = match &self.kind {
            DomainKind::Disk { radius } => DomainKind::Disk { radius: radius * s },
            DomainKind::Ellipse { a, b } => DomainKind::Ellipse { a: a * s, b: b * s },
            DomainKind::PerturbedDisk { radius, eps, waves } => {
                DomainKind::PerturbedDisk { radius: radius * s, eps: *eps, waves: *waves }
            }
            DomainKind::FourierRadius { a0, cos, sin } => DomainKind::FourierRadius {
                a0: a0 * s,
                cos: cos.iter().map(|c| c * s).collect(),
                sin: sin.iter().map(|c| c * s).collect(),
            },
        };
        Self { kind, center: [self.center[0] * s, self.center[1] * s] }
    }

    /// `(r, r', r'')` at angle `theta`, derivatives taken analytically.
    pub fn radius(&self, theta: f64) -> (f64, f64, f64) {
        match &self.kind {
            DomainKind::Disk { radius } => (*radius, 0.0, 0.0),
            DomainKind::Ellipse { a, b } => {
                let (s, c) = (sin(theta), cos(theta));
                let q = b * b * c * c + a * a * s * s;
                let dq = (a * a - b * b) * sin(2.0 * theta);
                let ddq = 2.0 * (a * a - b * b) * cos(2.0 * theta);
                let ab = a * b;
                let r = ab / sqrt(q);
                let q32 = q * sqrt(q);
                let dr = -0.5 * ab * dq / q32;
                let ddr = ab * (0.75 * dq * dq / (q32 * q) - 0.5 * ddq / q32);
                (r, dr, ddr)
            }
            DomainKind::PerturbedDisk { radius, eps, waves } => {
                let m = *waves as f64;
                let (s, c) = (sin(m * theta), cos(m * theta));
                (radius * (1.0 + eps * c), -radius * eps * m * s, -radius * eps * m * m * c)
            }
            DomainKind::FourierRadius { a0, cos: ac, sin: bs } => {
                let (mut r, mut dr, mut ddr) = (*a0, 0.0, 0.0);
                for (i, (a, b)) in ac.iter().zip(bs).enumerate() {
                    let k = (i + 1) as f64;
                    let (s, c) = (sin(k * theta), cos(k * theta));
                    r += a * c + b * s;
                    dr += k * (b * c - a * s);
                    ddr -= k * k * (a * c + b * s);
                }
                (r, dr, ddr)
            }
        }
    }

    /// Checks parameter ranges and positivity of `r` on the validation grid.
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            DomainKind::Disk { radius } if !(*radius > 0.0 && radius.is_finite()) => {
                return Err(Error::InvalidDomain(format!("disk radius {radius} must be positive")));
            }
            DomainKind::Ellipse { a, b } if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) => {
                return Err(Error::InvalidDomain(format!("ellipse semi-axes {a}, {b} must be positive")));
            }
            DomainKind::PerturbedDisk { radius, eps, waves } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidDomain(format!("radius {radius} must be positive")));
                }
                if !(eps.abs() < 1.0) {
                    return Err(Error::InvalidDomain(format!("|eps| = {} must be < 1", eps.abs())));
                }
                if *waves == 0 {
                    return Err(Error::InvalidDomain("wave number must be >= 1".to_string()));
                }
            }
            DomainKind::FourierRadius { cos, sin, .. } if cos.len() != sin.len() => {
                return Err(Error::InvalidDomain("fourier cos/sin lengths differ".to_string()));
            }
            _ => {}
        }
        if !(self.center[0].is_finite() && self.center[1].is_finite()) {
            return Err(Error::InvalidDomain("center must be finite".to_string()));
        }
        let h = 2.0 * PI / VALIDATION_SAMPLES as f64;
        for j in 0..VALIDATION_SAMPLES {
            let (r, _, _) = self.radius(j as f64 * h);
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::InvalidDomain(format!("non-positive radius {r} at theta = {}", j as f64 * h)));
            }
        }
        Ok(())
    }

    /// Smallest and largest `r(θ)` on the validation grid.
    pub fn radius_range(&self) -> (f64, f64) {
        match &self.kind {
            DomainKind::Disk { radius } => (*radius, *radius),
            DomainKind::Ellipse { a, b } => (a.min(*b), a.max(*b)),
            _ => {
                let h = 2.0 * PI / VALIDATION_SAMPLES as f64;
                (0..VALIDATION_SAMPLES).fold((f64::INFINITY, 0.0f64), |(lo, hi), j| {
                    let r = self.radius(j as f64 * h).0;
                    (lo.min(r), hi.max(r))
                })
            }
        }
    }

    /// `max_θ r(θ)`: the scale used to normalize trial functions.
    pub fn characteristic_radius(&self) -> f64 {
        self.radius_range().1
    }
}

impl fmt::Display for DomainSpec2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DomainKind::Disk { radius } => write!(f, "disk:{radius}")?,
            DomainKind::Ellipse { a, b } => write!(f, "ellipse:{a},{b}")?,
            DomainKind::PerturbedDisk { radius, eps, waves } => write!(f, "pdisk:{radius},{eps},{waves}")?,
            DomainKind::FourierRadius { a0, cos, sin } => {
                write!(f, "fourier:{a0}")?;
                for (a, b) in cos.iter().zip(sin) {
                    write!(f, ",{a},{b}")?;
                }
            }
        }
        if self.center != [0.0, 0.0] {
            write!(f, "@{},{}", self.center[0], self.center[1])?;
        }
        Ok(())
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}")))
        })
        .collect()
}

/// Text form: `disk:R`, `ellipse:a,b`, `pdisk:R,eps,m`,
/// `fourier:a0,a1,b1,...`, optionally followed by `@cx,cy`.
impl FromStr for DomainSpec2D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (body, center) = match s.split_once('@') {
            Some((b, c)) => {
                let v = parse_list(c)?;
                if v.len() != 2 {
                    return Err(Error::Parse(format!("center needs two numbers, got {c:?}")));
                }
                (b, [v[0], v[1]])
            }
            None => (s, [0.0, 0.0]),
        };
        let (tag, args) = body.split_once(':').ok_or_else(|| Error::Parse(format!("expected kind:args, got {s:?}")))?;
        let v = parse_list(args)?;
        let want = |n: usize| -> Result<()> {
            if v.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("{tag} takes {n} numbers, got {}", v.len())))
            }
        };
        let kind = match tag.trim() {
            "disk" => {
                want(1)?;
                DomainKind::Disk { radius: v[0] }
            }
            "ellipse" => {
                want(2)?;
                DomainKind::Ellipse { a: v[0], b: v[1] }
            }
            "pdisk" => {
                want(3)?;
                if v[2] < 1.0 || libm::trunc(v[2]) != v[2] {
                    return Err(Error::Parse(format!("wave number {} must be a positive integer", v[2])));
                }
                DomainKind::PerturbedDisk { radius: v[0], eps: v[1], waves: v[2] as u32 }
            }
            "fourier" => {
                if v.len() % 2 != 1 {
                    return Err(Error::Parse("fourier takes a0 followed by (a_k, b_k) pairs".to_string()));
                }
                let cos = v[1..].iter().step_by(2).copied().collect();
                let sin = v[2..].iter().step_by(2).copied().collect();
                DomainKind::FourierRadius { a0: v[0], cos, sin }
            }
            other => return Err(Error::Parse(format!("unknown domain kind {other:?}"))),
        };
        let spec = DomainSpec2D { kind, center };
        spec.validate()?;
        Ok(spec)
    }
}

/// Trapezoid-rule boundary discretization.
#[derive(Debug, Clone)]
pub struct BoundaryFrame {
    pub theta: Vec<f64>,
    /// Absolute positions (center included).
    pub points: Vec<[f64; 2]>,
    /// Positions relative to the domain center.
    pub local: Vec<[f64; 2]>,
    /// Arclength weights `|x'(θ)| · 2π/N`.
    pub weights: Vec<f64>,
    pub normals: Vec<[f64; 2]>,
    pub tangents: Vec<[f64; 2]>,
    pub curvature: Vec<f64>,
}

impl BoundaryFrame {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `∮ f ds` for a function of (node index, absolute position).
    pub fn integrate<F: Fn(usize, [f64; 2]) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).enumerate().map(|(j, (p, w))| w * f(j, *p)).sum()
    }
}

pub fn boundary_frame(spec: &DomainSpec2D, n: usize) -> Result<BoundaryFrame> {
    if n < 64 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("boundary node count {n} must be even and >= 64")));
    }
    spec.validate()?;
    let h = 2.0 * PI / n as f64;
    let mut frame = BoundaryFrame {
        theta: Vec::with_capacity(n),
        points: Vec::with_capacity(n),
        local: Vec::with_capacity(n),
        weights: Vec::with_capacity(n),
        normals: Vec::with_capacity(n),
        tangents: Vec::with_capacity(n),
        curvature: Vec::with_capacity(n),
    };
    for j in 0..n {
        let th = j as f64 * h;
        let (r, dr, ddr) = spec.radius(th);
        let (s, c) = (sin(th), cos(th));
        let local = [r * c, r * s];
        let dx = [dr * c - r * s, dr * s + r * c];
        let speed = sqrt(r * r + dr * dr);
        let t = [dx[0] / speed, dx[1] / speed];
        frame.theta.push(th);
        frame.local.push(local);
        frame.points.push([spec.center[0] + local[0], spec.center[1] + local[1]]);
        frame.weights.push(speed * h);
        frame.tangents.push(t);
        frame.normals.push([t[1], -t[0]]);
        frame.curvature.push((r * r + 2.0 * dr * dr - r * ddr) / (speed * speed * speed));
    }
    Ok(frame)
}

/// Polar tensor rule on a star-shaped domain.
#[derive(Debug, Clone)]
pub struct InteriorQuad {
    /// Absolute positions.
    pub points: Vec<[f64; 2]>,
    /// Positions relative to the domain center.
    pub local: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl InteriorQuad {
    pub fn integrate<F: Fn([f64; 2]) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(*p)).sum()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

pub fn interior_quad(spec: &DomainSpec2D, n_theta: usize, n_r: usize) -> Result<InteriorQuad> {
    if n_theta < 64 || n_r < 8 {
        return Err(Error::InvalidArgument(format!("interior rule {n_theta}x{n_r} below the 64x8 minimum")));
    }
    spec.validate()?;
    let (t, gw) = gauss_legendre_unit(n_r);
    let h = 2.0 * PI / n_theta as f64;
    let cap = n_theta * n_r;
    let mut q = InteriorQuad {
        points: Vec::with_capacity(cap),
        local: Vec::with_capacity(cap),
        weights: Vec::with_capacity(cap),
    };
    for j in 0..n_theta {
        let th = j as f64 * h;
        let r = spec.radius(th).0;
        let (s, c) = (sin(th), cos(th));
        for (tk, wk) in t.iter().zip(&gw) {
            let local = [tk * r * c, tk * r * s];
            q.local.push(local);
            q.points.push([spec.center[0] + local[0], spec.center[1] + local[1]]);
            q.weights.push(h * wk * tk * r * r);
        }
    }
    Ok(q)
}

/// Geometric functionals of a domain (`dim = 2`) or of a closed surface and
/// the solid it bounds (`dim = 3`).
///
/// Moments are taken about the coordinate origin, so they depend on where
/// the domain sits; use [`recenter`] first when a check needs a centroid at
/// the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoSummary {
    pub dim: usize,
    /// `|Ω|`.
    pub volume: f64,
    /// `|∂Ω|` (the measure of the hypersurface `M`).
    pub boundary_measure: f64,
    pub volume_centroid: Vec<f64>,
    pub boundary_centroid: Vec<f64>,
    /// `J_k = ∫_Ω x_k²`.
    pub moments: Vec<f64>,
    /// `∫_∂Ω x_k²`.
    pub boundary_moments: Vec<f64>,
    /// `∫_∂Ω H²` (planar curvature `κ` when `dim = 2`).
    pub curvature_energy: f64,
    pub convex: bool,
    /// A length used to scale centering tolerances (perimeter/π in 2D,
    /// twice the largest vertex distance from the centroid in 3D).
    pub length_scale: f64,
}

impl GeoSummary {
    /// Polar moment `J₀ = Σ J_k`.
    pub fn j0(&self) -> f64 {
        self.moments.iter().sum()
    }

    /// `J(Ω) = Π J_k`.
    pub fn jprod(&self) -> f64 {
        self.moments.iter().product()
    }

    pub fn boundary_moment_product(&self) -> f64 {
        self.boundary_moments.iter().product()
    }
}

pub fn geo_summary(spec: &DomainSpec2D, n: usize) -> Result<GeoSummary> {
    let frame = boundary_frame(spec, n)?;
    Ok(summary_from_frame(&frame))
}

pub(crate) fn summary_from_frame(frame: &BoundaryFrame) -> GeoSummary {
    let mut area = 0.0;
    let mut perimeter = 0.0;
    let mut first = [0.0; 2];
    let mut bsum = [0.0; 2];
    let mut moments = [0.0; 2];
    let mut bmoments = [0.0; 2];
    let mut kappa2 = 0.0;
    let mut kmin = f64::INFINITY;
    let mut kmax = 0.0f64;
    for j in 0..frame.len() {
        let x = frame.points[j];
        let nu = frame.normals[j];
        let w = frame.weights[j];
        let k = frame.curvature[j];
        area += 0.5 * (x[0] * nu[0] + x[1] * nu[1]) * w;
        perimeter += w;
        for d in 0..2 {
            first[d] += 0.5 * x[d] * x[d] * nu[d] * w;
            bsum[d] += x[d] * w;
            moments[d] += x[d] * x[d] * x[d] / 3.0 * nu[d] * w;
            bmoments[d] += x[d] * x[d] * w;
        }
        kappa2 += k * k * w;
        kmin = kmin.min(k);
        kmax = kmax.max(k.abs());
    }
    GeoSummary {
        dim: 2,
        volume: area,
        boundary_measure: perimeter,
        volume_centroid: vec![first[0] / area, first[1] / area],
        boundary_centroid: vec![bsum[0] / perimeter, bsum[1] / perimeter],
        moments: moments.to_vec(),
        boundary_moments: bmoments.to_vec(),
        curvature_energy: kappa2,
        convex: kmin >= -1e-9 * kmax,
        length_scale: perimeter / PI,
    }
}

/// Which centroid a check normalizes to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CenteringMode {
    Volume,
    Boundary,
}

impl CenteringMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CenteringMode::Volume => "volume",
            CenteringMode::Boundary => "boundary",
        }
    }
}

/// Shifts the center so the chosen centroid sits at the origin.
pub fn recenter(spec: &DomainSpec2D, mode: CenteringMode) -> Result<DomainSpec2D> {
    let g = geo_summary(spec, RECENTER_NODES)?;
    let c = match mode {
        CenteringMode::Volume => &g.volume_centroid,
        CenteringMode::Boundary => &g.boundary_centroid,
    };
    Ok(spec.translated([-c[0], -c[1]]))
}

/// Integral of `ρ^p` over the boundary for a positive weight sampled at
/// the frame angles.
pub(crate) fn boundary_power_integral(frame: &BoundaryFrame, rho: &[f64], p: f64) -> f64 {
    frame.weights.iter().zip(rho).map(|(w, r)| w * powf(*r, p)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_perimeter_and_curvature() {
        let f = boundary_frame(&DomainSpec2D::disk(1.0), 256).unwrap();
        assert!((f.perimeter() - 2.0 * PI).abs() < 1e-12);
        let f = boundary_frame(&DomainSpec2D::disk(2.0), 128).unwrap();
        assert!(f.curvature.iter().all(|k| (k - 0.5).abs() < 1e-15));
    }

    #[test]
    fn frame_is_orthonormal() {
        let f = boundary_frame(&DomainSpec2D::perturbed_disk(1.0, 0.3, 3), 128).unwrap();
        for (n, t) in f.normals.iter().zip(&f.tangents) {
            assert!((n[0] * t[0] + n[1] * t[1]).abs() < 1e-15);
            assert!((n[0] * n[0] + n[1] * n[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn frame_rejects_bad_sizes() {
        let d = DomainSpec2D::disk(1.0);
        assert!(boundary_frame(&d, 32).is_err());
        assert!(boundary_frame(&d, 101).is_err());
    }

    #[test]
    fn invalid_domains_rejected() {
        assert!(DomainSpec2D::disk(-1.0).validate().is_err());
        assert!(DomainSpec2D::perturbed_disk(1.0, 1.2, 3).validate().is_err());
        assert!(DomainSpec2D::ellipse(0.0, 1.0).validate().is_err());
        let neg = DomainSpec2D::fourier(0.2, vec![0.5], vec![0.0]);
        assert!(matches!(boundary_frame(&neg, 64), Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn disk_summary_values() {
        let g = geo_summary(&DomainSpec2D::disk(1.0), 512).unwrap();
        assert!((g.volume - PI).abs() < 1e-13);
        assert!((g.moments[0] - PI / 4.0).abs() < 1e-13);
        assert!((g.moments[1] - PI / 4.0).abs() < 1e-13);
        assert!((g.j0() - PI / 2.0).abs() < 1e-13);
        assert!((g.jprod() - PI * PI / 16.0).abs() < 1e-13);
        assert!((g.boundary_moments[0] - PI).abs() < 1e-13);
        assert!((g.curvature_energy - 2.0 * PI).abs() < 1e-13);
        assert!(g.convex);
    }

    #[test]
    fn perturbed_disk_polar_moment_exceeds_disk() {
        let g = geo_summary(&DomainSpec2D::perturbed_disk(1.0, 0.3, 3), 512).unwrap();
        assert!(g.j0() > PI / 2.0);
        assert!(!g.convex);
    }

    #[test]
    fn recenter_disk() {
        let d = DomainSpec2D::disk(1.0).with_center([0.7, 0.0]);
        for mode in [CenteringMode::Volume, CenteringMode::Boundary] {
            let c = recenter(&d, mode).unwrap().center;
            assert!(c[0].abs() < 1e-14 && c[1].abs() < 1e-14);
        }
    }

    #[test]
    fn recenter_volume_zeroes_first_moment() {
        let d = DomainSpec2D::perturbed_disk(1.0, 0.2, 1);
        let r = recenter(&d, CenteringMode::Volume).unwrap();
        let q = interior_quad(&r, 512, 24).unwrap();
        assert!(q.integrate(|x| x[0]).abs() < 1e-10);
        assert!(q.integrate(|x| x[1]).abs() < 1e-10);
    }

    #[test]
    fn interior_quad_disk_and_ellipse() {
        let q = interior_quad(&DomainSpec2D::disk(1.0), 256, 16).unwrap();
        assert!((q.weights.iter().sum::<f64>() - PI).abs() < 1e-12);
        assert!((q.integrate(|x| x[0] * x[0]) - PI / 4.0).abs() < 1e-12);
        let q = interior_quad(&DomainSpec2D::ellipse(1.3, 1.0 / 1.3), 256, 16).unwrap();
        assert!((q.weights.iter().sum::<f64>() - PI).abs() < 1e-10);
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["disk:1", "ellipse:1.5,0.6667", "pdisk:1,0.2,3", "fourier:1,0.1,-0.05,0,0.02", "disk:2@0.5,-1"] {
            let d: DomainSpec2D = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("square:1".parse::<DomainSpec2D>().is_err());
        assert!("ellipse:1".parse::<DomainSpec2D>().is_err());
        assert!("pdisk:1,0.2,2.5".parse::<DomainSpec2D>().is_err());
        assert!("fourier:1,0.1".parse::<DomainSpec2D>().is_err());
        assert!("disk:-1".parse::<DomainSpec2D>().is_err());
    }
}
