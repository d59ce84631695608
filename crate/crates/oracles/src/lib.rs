//! Reference computations used to derive expected values in tests.
//!
//! Nothing here shares code with `isobound-core`; each routine takes a
//! different numerical route to the quantity it checks.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Perimeter of the ellipse with semi-axes `a`, `b` from the parametric
/// arc-length element.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let f = |t: f64| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
    4.0 * adaptive_simpson(&f, 0.0, PI / 2.0, 1e-14)
}

/// Surface area of the ellipsoid `x²/a² + y²/b² + z²/c² = 1` by nested
/// adaptive quadrature of the parametric area element.
pub fn ellipsoid_area(a: f64, b: f64, c: f64) -> f64 {
    let element = |t: f64, p: f64| {
        let (st, ct, sp, cp) = (t.sin(), t.cos(), p.sin(), p.cos());
        let rt = [a * ct * cp, b * ct * sp, -c * st];
        let rp = [-a * st * sp, b * st * cp, 0.0];
        let n = [rt[1] * rp[2] - rt[2] * rp[1], rt[2] * rp[0] - rt[0] * rp[2], rt[0] * rp[1] - rt[1] * rp[0]];
        (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
    };
    let outer = |t: f64| adaptive_simpson(&|p: f64| element(t, p), 0.0, PI / 2.0, 1e-11);
    8.0 * adaptive_simpson(&outer, 0.0, PI / 2.0, 1e-10)
}

/// `∫ H²` over the spheroid with equatorial radius `a` and polar semi-axis
/// `c`, where `H` is the average of the principal curvatures.
pub fn spheroid_curvature_energy(a: f64, c: f64) -> f64 {
    let f = |t: f64| {
        let (s, co) = (t.sin(), t.cos());
        let q = a * a * co * co + c * c * s * s;
        let k_meridian = a * c / q.powf(1.5);
        let k_parallel = c / (a * q.sqrt());
        let h = 0.5 * (k_meridian + k_parallel);
        h * h * 2.0 * PI * a * s * q.sqrt()
    };
    adaptive_simpson(&f, 0.0, PI, 1e-12)
}

/// `I_k(x)` from the first `terms` terms of the ascending series, each term
/// built from scratch and summed with compensation.
pub fn bessel_i_series(k: u32, x: f64, terms: u32) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for m in 0..terms {
        let mut t = 1.0;
        for j in 1..=m {
            t *= (x / 2.0) / j as f64;
        }
        for j in 1..=(m + k) {
            t *= (x / 2.0) / j as f64;
        }
        // Kahan summation
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum
}

/// `I_0(x) = (1/π) ∫₀^π e^{x cos t} dt` by the trapezoid rule, which is
/// spectrally accurate for this periodic integrand.
pub fn bessel_i0_integral(x: f64, nodes: usize) -> f64 {
    let h = 2.0 * PI / nodes as f64;
    (0..nodes).map(|j| (x * (j as f64 * h).cos()).exp()).sum::<f64>() / nodes as f64
}

/// Dimension of the kernel of the Laplacian from degree-`k` homogeneous
/// polynomials in `n` variables to degree `k − 2`, by rank computation on
/// the monomial coefficient matrix.
pub fn harmonic_dim_bruteforce(n: usize, k: usize) -> usize {
    fn monomials(n: usize, k: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![k]];
        }
        let mut out = Vec::new();
        for first in (0..=k).rev() {
            for mut rest in monomials(n - 1, k - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let src = monomials(n, k);
    if k < 2 {
        return src.len();
    }
    let dst = monomials(n, k - 2);
    let mut m = DMatrix::<f64>::zeros(dst.len(), src.len());
    for (j, mono) in src.iter().enumerate() {
        for var in 0..n {
            let e = mono[var];
            if e >= 2 {
                let mut t = mono.clone();
                t[var] -= 2;
                let i = dst.iter().position(|d| *d == t).unwrap();
                m[(i, j)] += (e * (e - 1)) as f64;
            }
        }
    }
    src.len() - m.rank(1e-9)
}

/// Smallest `count` eigenvalues of `A x = λ B x` (both SPD) by inverse
/// iteration with `B`-orthogonal deflation, polished by Rayleigh quotient
/// iteration.
pub fn inverse_iteration(a: &DMatrix<f64>, b: &DMatrix<f64>, count: usize) -> Vec<f64> {
    let n = a.nrows();
    let lu = a.clone().lu();
    let mut found: Vec<DVector<f64>> = Vec::new();
    let mut values = Vec::new();
    let bdot = |x: &DVector<f64>, y: &DVector<f64>| x.dot(&(b * y));
    let deflate = |x: &mut DVector<f64>, found: &[DVector<f64>]| {
        for v in found {
            let c = x.dot(&(b * v));
            *x -= v * c;
        }
    };
    for idx in 0..count {
        let mut x = DVector::from_fn(n, |i, _| 1.0 + ((i * 7 + idx * 13) % 11) as f64 / 10.0);
        deflate(&mut x, &found);
        let mut lam = 0.0;
        for _ in 0..5000 {
            let mut y = lu.solve(&(b * &x)).unwrap();
            deflate(&mut y, &found);
            let nrm = bdot(&y, &y).sqrt();
            y /= nrm;
            let new = y.dot(&(a * &y));
            x = y;
            if (new - lam).abs() <= 1e-15 * new.abs() {
                lam = new;
                break;
            }
            lam = new;
        }
        for _ in 0..3 {
            let shifted = a - b * lam;
            let Some(mut y) = shifted.lu().solve(&(b * &x)) else { break };
            deflate(&mut y, &found);
            let nrm = bdot(&y, &y).sqrt();
            if !nrm.is_finite() || nrm == 0.0 {
                break;
            }
            y /= nrm;
            x = y;
            lam = x.dot(&(a * &x));
        }
        values.push(lam);
        found.push(x);
    }
    values
}

/// Steklov eigenvalues of the domain bounded by the closed curve `ζ(t)`,
/// `t ∈ [0, 2π)` counterclockwise, from a Nyström discretization of the
/// boundary Cauchy integral with a real density.
///
/// With `F = C μ` the interior boundary values of the analytic function,
/// `u = Re F` and its conjugate `v = Im F`, the Dirichlet-to-Neumann map is
/// `∂_ν u = ∂_s v`, so `Λ = diag(1/|ζ'|) D Im(C) Re(C)⁻¹` with `D` the
/// trigonometric differentiation matrix. `D` annihilates the alternating
/// grid mode, which adds one spurious zero eigenvalue; it is removed. Returns
/// the real parts of the remaining eigenvalues in ascending order (the first
/// is the zero mode of constants).
pub fn nystrom_steklov<Z, DZ>(zeta: Z, dzeta: DZ, nodes: usize) -> Vec<f64>
where
    Z: Fn(f64) -> (f64, f64),
    DZ: Fn(f64) -> (f64, f64),
{
    assert!(nodes % 2 == 0, "even node count required");
    let h = 2.0 * PI / nodes as f64;
    let pts: Vec<(f64, f64)> = (0..nodes).map(|j| zeta(j as f64 * h)).collect();
    let der: Vec<(f64, f64)> = (0..nodes).map(|j| dzeta(j as f64 * h)).collect();
    let d = DMatrix::from_fn(nodes, nodes, |i, j| {
        if i == j {
            0.0
        } else {
            let k = i as f64 - j as f64;
            let sign = if (i + nodes - j) % 2 == 0 { 1.0 } else { -1.0 };
            0.5 * sign / (k * h / 2.0).tan()
        }
    });
    // complex C = I + (h / 2πi)[off-diagonal Cauchy terms with the
    // diagonal compensation] + (h / 2πi) D
    let mut cre = DMatrix::<f64>::identity(nodes, nodes);
    let mut cim = DMatrix::<f64>::zeros(nodes, nodes);
    // h/(2πi) · w = (h/2π) · (-i) · w
    let fac = h / (2.0 * PI);
    for i in 0..nodes {
        let mut row_re = 0.0;
        let mut row_im = 0.0;
        for j in 0..nodes {
            if i == j {
                continue;
            }
            let (dx, dy) = (pts[j].0 - pts[i].0, pts[j].1 - pts[i].1);
            let den = dx * dx + dy * dy;
            // ζ'_j / (ζ_j − ζ_i)
            let (qr, qi) = ((der[j].0 * dx + der[j].1 * dy) / den, (der[j].1 * dx - der[j].0 * dy) / den);
            // multiply by -i·fac: (qr + i qi)(-i) = qi − i qr
            let (wr, wi) = (fac * qi, -fac * qr);
            cre[(i, j)] += wr;
            cim[(i, j)] += wi;
            row_re += wr;
            row_im += wi;
        }
        cre[(i, i)] -= row_re;
        cim[(i, i)] -= row_im;
    }
    // (h/2πi) D = -i·fac·D contributes only to the imaginary part
    cim -= &d * fac;
    let speed: Vec<f64> = der.iter().map(|(x, y)| (x * x + y * y).sqrt()).collect();
    let re_inv = cre.try_inverse().expect("double-layer operator is invertible");
    let mut lam = &d * cim * re_inv;
    for i in 0..nodes {
        for j in 0..nodes {
            lam[(i, j)] /= speed[i];
        }
    }
    let mut ev: Vec<f64> = lam.complex_eigenvalues().iter().map(|z| z.re).collect();
    ev.sort_by(f64::total_cmp);
    ev.remove(1);
    ev
}

/// Steklov eigenvalues of the ellipse with semi-axes `a`, `b`.
pub fn ellipse_steklov(a: f64, b: f64, nodes: usize) -> Vec<f64> {
    nystrom_steklov(|t| (a * t.cos(), b * t.sin()), |t| (-a * t.sin(), b * t.cos()), nodes)
}

/// Smallest `count` eigenvalues of the sparse symmetric pencil `(S, diag(m))`
/// by subspace iteration with shifted solves `(S + σM)⁻¹ M`, each solved by
/// Jacobi-preconditioned conjugate gradients.
pub fn sparse_pencil_lowest(triplets: &[(usize, usize, f64)], mass: &[f64], count: usize, shift: f64) -> Vec<f64> {
    let n = mass.len();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j, v) in triplets {
        rows[i].push((j, v));
    }
    let apply_s = |x: &[f64]| -> Vec<f64> { rows.iter().map(|r| r.iter().map(|&(j, v)| v * x[j]).sum()).collect() };
    let diag: Vec<f64> = (0..n)
        .map(|i| rows[i].iter().filter(|(j, _)| *j == i).map(|(_, v)| v).sum::<f64>() + shift * mass[i])
        .collect();
    let apply_k = |x: &[f64]| -> Vec<f64> {
        let s = apply_s(x);
        s.iter().zip(x).zip(mass).map(|((s, x), m)| s + shift * m * x).collect()
    };
    let cg = |rhs: &[f64], x0: &[f64]| -> Vec<f64> {
        let mut x = x0.to_vec();
        let kx = apply_k(&x);
        let mut r: Vec<f64> = rhs.iter().zip(&kx).map(|(b, k)| b - k).collect();
        let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let bnorm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        for _ in 0..5000 {
            let kp = apply_k(&p);
            let alpha = rz / p.iter().zip(&kp).map(|(a, b)| a * b).sum::<f64>();
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * kp[i];
            }
            if r.iter().map(|v| v * v).sum::<f64>().sqrt() <= 1e-13 * bnorm {
                break;
            }
            for i in 0..n {
                z[i] = r[i] / diag[i];
            }
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        x
    };
    let block = count + 6;
    let mut x = DMatrix::from_fn(n, block, |i, j| ((i * (j + 3) * 2654435761usize) % 1000) as f64 / 1000.0 - 0.5);
    let mut values = vec![0.0; count];
    for _ in 0..100 {
        let mut y = DMatrix::<f64>::zeros(n, block);
        for j in 0..block {
            let col: Vec<f64> = (0..n).map(|i| mass[i] * x[(i, j)]).collect();
            let x0: Vec<f64> = (0..n).map(|i| x[(i, j)] / (1.0 + shift)).collect();
            let sol = cg(&col, &x0);
            for i in 0..n {
                y[(i, j)] = sol[i];
            }
        }
        let mut sy = DMatrix::<f64>::zeros(n, block);
        for j in 0..block {
            let col: Vec<f64> = (0..n).map(|i| y[(i, j)]).collect();
            let s = apply_s(&col);
            for i in 0..n {
                sy[(i, j)] = s[i];
            }
        }
        let my = DMatrix::from_fn(n, block, |i, j| mass[i] * y[(i, j)]);
        let sr = y.transpose() * &sy;
        let mr = y.transpose() * &my;
        let sr = (&sr + sr.transpose()) * 0.5;
        let mr = (&mr + mr.transpose()) * 0.5;
        let l = mr.cholesky().expect("Ritz mass matrix is positive definite").l();
        let linv = l.clone().try_inverse().unwrap();
        let c = &linv * sr * linv.transpose();
        let eig = c.symmetric_eigen();
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let new: Vec<f64> = order[..count].iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = linv.transpose() * eig.eigenvectors;
        let mut xn = DMatrix::<f64>::zeros(n, block);
        for (k, &i) in order.iter().enumerate() {
            let v = &y * vecs.column(i);
            for r in 0..n {
                xn[(r, k)] = v[r];
            }
        }
        x = xn;
        let done = new.iter().zip(&values).all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1e-12));
        values = new;
        if done {
            break;
        }
    }
    values
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_and_circle() {
        assert!((adaptive_simpson(&|x: f64| x.powi(4), 0.0, 1.0, 1e-14) - 0.2).abs() < 1e-13);
        assert!((ellipse_perimeter(1.0, 1.0) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn sphere_integrals() {
        assert!((ellipsoid_area(1.0, 1.0, 1.0) - 4.0 * PI).abs() < 1e-8);
        assert!((spheroid_curvature_energy(2.0, 2.0) - 4.0 * PI).abs() < 1e-10);
        // prolate spheroid area closed form
        let (a, c): (f64, f64) = (1.0, 2.0);
        let e = (1.0 - a * a / (c * c)).sqrt();
        let exact = 2.0 * PI * a * a * (1.0 + c / (a * e) * e.asin());
        assert!((ellipsoid_area(a, a, c) - exact).abs() < 1e-8);
    }

    #[test]
    fn bessel_cross_check() {
        for x in [0.5, 1.0, 4.0] {
            let s = bessel_i_series(0, x, 50);
            let q = bessel_i0_integral(x, 64);
            assert!((s - q).abs() < 1e-14 * s, "{x}: {s} {q}");
        }
    }

    #[test]
    fn corank_small_cases() {
        assert_eq!(harmonic_dim_bruteforce(2, 3), 2);
        assert_eq!(harmonic_dim_bruteforce(3, 2), 5);
        assert_eq!(harmonic_dim_bruteforce(3, 0), 1);
    }

    #[test]
    fn inverse_iteration_diagonal() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let b = DMatrix::identity(3, 3);
        let v = inverse_iteration(&a, &b, 3);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 2.0).abs() < 1e-12 && (v[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn nystrom_disk() {
        let ev = ellipse_steklov(1.0, 1.0, 64);
        assert!(ev[0].abs() < 1e-10);
        for (k, w) in [(1, 1.0), (2, 1.0), (3, 2.0), (4, 2.0)] {
            assert!((ev[k] - w).abs() < 1e-10, "{ev:?}");
        }
    }
}
