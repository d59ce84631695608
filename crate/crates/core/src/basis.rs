//! Trefftz trial functions for the planar solvers.
//!
//! Every function is evaluated in coordinates relative to the domain center
//! and scaled by a characteristic radius `R_char`, so that `|z / R_char| ≤ 1`
//! on the closed domain.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest `√τ·|x|` accepted by the modified-Helmholtz series.
pub const HELMHOLTZ_ARG_LIMIT: f64 = 60.0;
/// Largest argument accepted by [`bessel_i`].
pub const BESSEL_ARG_LIMIT: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisKind {
    /// `Re` / `Im` of `(z / R)^k`.
    HarmonicPoly { k: u32, parity: Parity },
    /// `|x / R|² · h_k`.
    Almansi { k: u32, parity: Parity },
    /// `I_k(√τ r) {cos, sin}(kθ) / I_k(√τ R)`.
    ModHelmholtz { k: u32, parity: Parity, tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFn {
    pub kind: BasisKind,
    pub scale: f64,
}

/// Value and derivatives of a trial function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalRecord {
    pub value: f64,
    pub gradient: [f64; 2],
    /// `[h_xx, h_xy, h_yy]`.
    pub hessian: [f64; 3],
    pub laplacian: f64,
}

impl EvalRecord {
    /// Frobenius inner product of the two Hessians.
    pub fn hessian_dot(&self, other: &EvalRecord) -> f64 {
        self.hessian[0] * other.hessian[0]
            + 2.0 * self.hessian[1] * other.hessian[1]
            + self.hessian[2] * other.hessian[2]
    }

    pub fn gradient_dot(&self, other: &EvalRecord) -> f64 {
        self.gradient[0] * other.gradient[0] + self.gradient[1] * other.gradient[1]
    }
}

/// `w^k`, `k w^{k-1}`, `k(k-1) w^{k-2}` for complex `w`, as (re, im) pairs.
fn complex_powers(k: u32, w: [f64; 2]) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let mul = |a: [f64; 2], b: [f64; 2]| [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]];
    let mut p = [[1.0, 0.0]; 3]; // w^k, w^{k-1}, w^{k-2}
    let mut cur = [1.0, 0.0];
    for j in 0..=k {
        if j + 2 == k {
            p[2] = cur;
        }
        if j + 1 == k {
            p[1] = cur;
        }
        if j == k {
            p[0] = cur;
        } else {
            cur = mul(cur, w);
        }
    }
    let kf = k as f64;
    let d1 = if k >= 1 { [kf * p[1][0], kf * p[1][1]] } else { [0.0, 0.0] };
    let c2 = kf * (kf - 1.0);
    let d2 = if k >= 2 { [c2 * p[2][0], c2 * p[2][1]] } else { [0.0, 0.0] };
    (p[0], d1, d2)
}

/// Harmonic `Re/Im (z/R)^k` with derivatives in unscaled coordinates.
fn harmonic(k: u32, parity: Parity, scale: f64, x: [f64; 2]) -> EvalRecord {
    let w = [x[0] / scale, x[1] / scale];
    let (f, d1, d2) = complex_powers(k, w);
    let (s1, s2) = (1.0 / scale, 1.0 / (scale * scale));
    // f' = u_x - i u_y for u = Re f; f' = v_y + i v_x for v = Im f.
    match parity {
        Parity::Cos => EvalRecord {
            value: f[0],
            gradient: [d1[0] * s1, -d1[1] * s1],
            hessian: [d2[0] * s2, -d2[1] * s2, -d2[0] * s2],
            laplacian: 0.0,
        },
        Parity::Sin => EvalRecord {
            value: f[1],
            gradient: [d1[1] * s1, d1[0] * s1],
            hessian: [d2[1] * s2, d2[0] * s2, -d2[1] * s2],
            laplacian: 0.0,
        },
    }
}

/// `g · h` where `g` is radial in `ρ = |x|²`: `g = G(ρ)`, `G'`, `G''` given.
fn radial_product(h: &EvalRecord, x: [f64; 2], g: f64, dg: f64, ddg: f64) -> EvalRecord {
    // ∇G = 2G' x, ∇²G = 4G'' x⊗x + 2G' I
    let gx = [2.0 * dg * x[0], 2.0 * dg * x[1]];
    let gh = [4.0 * ddg * x[0] * x[0] + 2.0 * dg, 4.0 * ddg * x[0] * x[1], 4.0 * ddg * x[1] * x[1] + 2.0 * dg];
    let value = g * h.value;
    let gradient = [g * h.gradient[0] + h.value * gx[0], g * h.gradient[1] + h.value * gx[1]];
    let hessian = [
        g * h.hessian[0] + 2.0 * gx[0] * h.gradient[0] + h.value * gh[0],
        g * h.hessian[1] + gx[0] * h.gradient[1] + gx[1] * h.gradient[0] + h.value * gh[1],
        g * h.hessian[2] + 2.0 * gx[1] * h.gradient[1] + h.value * gh[2],
    ];
    EvalRecord { value, gradient, hessian, laplacian: hessian[0] + hessian[2] }
}

/// `G_k(q) = Σ_m q^m k! / (m! (m+k)!)` with its first two derivatives.
/// `I_k(x) = (x/2)^k / k! · G_k(x²/4)`.
fn normalized_bessel_series(k: u32, q: f64) -> (f64, f64, f64) {
    let kf = k as f64;
    let (mut g, mut dg, mut ddg) = (1.0, 0.0, 0.0);
    // c = k!/(m!(m+k)!), d = c q^{m-1}, e = c q^{m-2}; all terms positive
    let (mut c, mut d, mut e) = (1.0, 0.0, 0.0);
    for m in 1..=1000u32 {
        let mf = m as f64;
        let f = 1.0 / (mf * (mf + kf));
        c *= f;
        d = if m == 1 { c } else { d * q * f };
        e = match m {
            1 => 0.0,
            2 => c,
            _ => e * q * f,
        };
        let t = d * q;
        g += t;
        dg += mf * d;
        ddg += mf * (mf - 1.0) * e;
        if m > 2 && t <= 1e-17 * g && mf * d <= 1e-17 * dg && mf * (mf - 1.0) * e <= 1e-17 * ddg {
            break;
        }
    }
    (g, dg, ddg)
}

impl BasisFn {
    pub fn harmonic(k: u32, parity: Parity, scale: f64) -> Self {
        Self { kind: BasisKind::HarmonicPoly { k, parity }, scale }
    }

    pub fn almansi(k: u32, parity: Parity, scale: f64) -> Self {
        Self { kind: BasisKind::Almansi { k, parity }, scale }
    }

    pub fn mod_helmholtz(k: u32, parity: Parity, tau: f64, scale: f64) -> Self {
        Self { kind: BasisKind::ModHelmholtz { k, parity, tau }, scale }
    }

    /// Value, gradient, Hessian and Laplacian at `x` (relative to the
    /// expansion center).
    pub fn eval(&self, x: [f64; 2]) -> Result<EvalRecord> {
        if !(x[0].is_finite() && x[1].is_finite()) {
            return Err(Error::InvalidArgument("evaluation point must be finite".into()));
        }
        let r_char = self.scale;
        match self.kind {
            BasisKind::HarmonicPoly { k, parity } => Ok(harmonic(k, parity, r_char, x)),
            BasisKind::Almansi { k, parity } => {
                let h = harmonic(k, parity, r_char, x);
                let s2 = 1.0 / (r_char * r_char);
                let rho = x[0] * x[0] + x[1] * x[1];
                Ok(radial_product(&h, x, rho * s2, s2, 0.0))
            }
            BasisKind::ModHelmholtz { k, parity, tau } => {
                let rho = x[0] * x[0] + x[1] * x[1];
                let arg = crate::math::sqrt(tau * rho);
                if !(arg <= HELMHOLTZ_ARG_LIMIT) || !(tau > 0.0) {
                    return Err(Error::Range { arg, limit: HELMHOLTZ_ARG_LIMIT });
                }
                let edge = crate::math::sqrt(tau) * r_char;
                if edge > HELMHOLTZ_ARG_LIMIT {
                    return Err(Error::Range { arg: edge, limit: HELMHOLTZ_ARG_LIMIT });
                }
                // v = h_k(x/R) G_k(τρ/4) / G_k(τR²/4)
                let h = harmonic(k, parity, r_char, x);
                let (norm, _, _) = normalized_bessel_series(k, tau * r_char * r_char / 4.0);
                let (g, dg, ddg) = normalized_bessel_series(k, tau * rho / 4.0);
                let c = tau / 4.0;
                Ok(radial_product(&h, x, g / norm, c * dg / norm, c * c * ddg / norm))
            }
        }
    }
}

/// Modified Bessel function of the first kind and its derivative,
/// `(I_k(x), I_k'(x))`, by the ascending series.
pub fn bessel_i(k: u32, x: f64) -> Result<(f64, f64)> {
    if !(0.0..=BESSEL_ARG_LIMIT).contains(&x) {
        return Err(Error::Range { arg: x, limit: BESSEL_ARG_LIMIT });
    }
    let value = bessel_series(k, x);
    let deriv = if k == 0 { bessel_series(1, x) } else { 0.5 * (bessel_series(k - 1, x) + bessel_series(k + 1, x)) };
    Ok((value, deriv))
}

fn bessel_series(k: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    // leading term (x/2)^k / k!
    let mut term = 1.0;
    for j in 1..=k {
        term *= half / j as f64;
    }
    let q = half * half;
    let mut sum = term;
    let mut m = 0u32;
    loop {
        m += 1;
        term *= q / (m as f64 * (m + k) as f64);
        sum += term;
        if term < 1e-17 * sum || m > 1000 {
            break;
        }
    }
    sum
}

/// Which trial family a solver needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    Harmonic,
    Biharmonic,
    Tension { tau: f64 },
}

/// Ordered trial space of order `K` (`K ≥ 2`).
///
/// Harmonic: `2K+1` functions. Biharmonic adds the Almansi counterparts
/// (`4K+2`). Tension adds modified-Helmholtz functions of orders `0..=K`
/// (`4K+2`; order 0 has cosine parity only).
pub fn build_space(kind: SpaceKind, order: u32, r_char: f64) -> Result<Vec<BasisFn>> {
    if order < 2 {
        return Err(Error::InvalidArgument("trial space order must be >= 2".into()));
    }
    if !(r_char > 0.0) {
        return Err(Error::InvalidArgument("characteristic radius must be positive".into()));
    }
    let family = |make: &dyn Fn(u32, Parity) -> BasisFn| -> Vec<BasisFn> {
        let mut v = Vec::with_capacity(2 * order as usize + 1);
        v.push(make(0, Parity::Cos));
        for k in 1..=order {
            v.push(make(k, Parity::Cos));
            v.push(make(k, Parity::Sin));
        }
        v
    };
    let mut space = family(&|k, p| BasisFn::harmonic(k, p, r_char));
    match kind {
        SpaceKind::Harmonic => {}
        SpaceKind::Biharmonic => space.extend(family(&|k, p| BasisFn::almansi(k, p, r_char))),
        SpaceKind::Tension { tau } => {
            if !(tau > 0.0) {
                return Err(Error::InvalidArgument("tension tau must be positive".into()));
            }
            space.extend(family(&|k, p| BasisFn::mod_helmholtz(k, p, tau, r_char)))
        }
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_quadratic() {
        let e = BasisFn::harmonic(2, Parity::Cos, 1.0).eval([1.0, 0.0]).unwrap();
        assert!((e.value - 1.0).abs() < 1e-15);
        assert_eq!(e.laplacian, 0.0);
        assert!((e.hessian[0] - 2.0).abs() < 1e-15 && (e.hessian[2] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn almansi_laplacian() {
        let p = [0.3, -0.7];
        let e = BasisFn::almansi(1, Parity::Cos, 1.0).eval(p).unwrap();
        assert!((e.laplacian - 8.0 * p[0]).abs() < 1e-14);
    }

    #[test]
    fn mod_helmholtz_ratio() {
        let e = BasisFn::mod_helmholtz(0, Parity::Cos, 4.0, 1.0).eval([0.5, 0.0]).unwrap();
        assert!((e.laplacian / e.value - 4.0).abs() < 1e-10);
    }

    #[test]
    fn mod_helmholtz_is_one_on_scale_circle() {
        for k in 0..6 {
            let e = BasisFn::mod_helmholtz(k, Parity::Cos, 2.0, 1.5).eval([1.5, 0.0]).unwrap();
            assert!((e.value - 1.0).abs() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn mod_helmholtz_matches_bessel() {
        let (tau, r_char, k) = (3.0, 1.2, 3u32);
        let s = libm::sqrt(tau);
        let p = [0.4, 0.5];
        let r = libm::hypot(p[0], p[1]);
        let th = libm::atan2(p[1], p[0]);
        let want = bessel_i(k, s * r).unwrap().0 * libm::cos(k as f64 * th) / bessel_i(k, s * r_char).unwrap().0;
        let got = BasisFn::mod_helmholtz(k, Parity::Cos, tau, r_char).eval(p).unwrap().value;
        assert!((got - want).abs() < 1e-13 * want.abs().max(1.0));
    }

    #[test]
    fn helmholtz_range_error() {
        let f = BasisFn::mod_helmholtz(1, Parity::Cos, 3600.0, 1.0);
        assert!(matches!(f.eval([1.1, 0.0]), Err(Error::Range { .. })));
    }

    #[test]
    fn bessel_values() {
        assert_eq!(bessel_i(0, 0.0).unwrap().0, 1.0);
        assert_eq!(bessel_i(3, 0.0).unwrap().0, 0.0);
        assert!((bessel_i(0, 1.0).unwrap().0 - 1.2660658777520084).abs() < 1e-15);
        assert!(bessel_i(0, 121.0).is_err());
        assert!(bessel_i(0, -1.0).is_err());
    }

    #[test]
    fn bessel_recurrence() {
        for &x in &[0.5, 2.0, 10.0] {
            for k in 1..=20u32 {
                let a = bessel_i(k - 1, x).unwrap().0;
                let b = bessel_i(k + 1, x).unwrap().0;
                let c = bessel_i(k, x).unwrap().0;
                let lhs = a - b;
                let rhs = 2.0 * k as f64 / x * c;
                assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs(), "k={k} x={x}");
            }
        }
    }

    #[test]
    fn space_sizes() {
        assert_eq!(build_space(SpaceKind::Harmonic, 3, 1.0).unwrap().len(), 7);
        assert_eq!(build_space(SpaceKind::Biharmonic, 3, 1.0).unwrap().len(), 14);
        let t = build_space(SpaceKind::Tension { tau: 1.0 }, 3, 1.0).unwrap();
        assert_eq!(t.len(), 14);
        assert_eq!(t.iter().filter(|f| matches!(f.kind, BasisKind::ModHelmholtz { .. })).count(), 7);
        assert!(build_space(SpaceKind::Harmonic, 1, 1.0).is_err());
    }
}
