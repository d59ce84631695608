//! Dense symmetric eigen-solvers.
//!
//! [`solve_pencil`] diagonalizes the denominator, splits off directions below
//! `ε_B · max`, whitens the rest and reduces the numerator onto them. The
//! split-off directions are condensed out of the numerator by a Schur
//! complement.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::math::sqrt;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Builds from a row-major slice.
    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data: data.to_vec() }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matvec");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `Vᵀ M V`.
    pub fn congruence(&self, v: &Matrix) -> Matrix {
        let mut out = v.transpose().matmul(&self.matmul(v));
        out.symmetrize();
        out
    }

    /// Replaces the matrix with `(M + Mᵀ)/2`.
    pub fn symmetrize(&mut self) {
        let n = self.rows.min(self.cols);
        for i in 0..n {
            for j in (i + 1)..n {
                let m = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = m;
                self[(j, i)] = m;
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn asymmetry(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)];
                s += d * d;
            }
        }
        sqrt(s)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Columns `idx` of `self` as a new matrix.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Output of [`jacobi_eigen`].
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: Matrix,
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm before the first sweep and after each one.
    pub off_norms: Vec<f64>,
}

pub const MAX_JACOBI_SWEEPS: usize = 60;

fn off_norm(a: &Matrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sqrt(s)
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
pub fn jacobi_eigen(m: &Matrix) -> SymEigen {
    assert!(m.is_square(), "jacobi_eigen needs a square matrix");
    let n = m.rows;
    let mut a = m.clone();
    a.symmetrize();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();
    let mut off_norms = vec![off_norm(&a)];
    let mut sweeps = 0;
    if scale == 0.0 || n < 2 {
        return finish_jacobi(a, v, 0, off_norms);
    }
    let tol = 1e-17 * scale;
    while sweeps < MAX_JACOBI_SWEEPS && *off_norms.last().unwrap() > tol {
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // skip rotations that cannot change the diagonal in floating point
                if apq.abs() < 1e-18 * scale && sweeps > 3 {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_finite() {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (theta.abs() + sqrt(theta * theta + 1.0))
                } else {
                    0.0
                };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                let tau = s / (1.0 + c);
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let nrp = arp - s * (arq + tau * arp);
                    let nrq = arq + s * (arp - tau * arq);
                    a[(r, p)] = nrp;
                    a[(p, r)] = nrp;
                    a[(r, q)] = nrq;
                    a[(q, r)] = nrq;
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp - s * (vrq + tau * vrp);
                    v[(r, q)] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
        off_norms.push(off_norm(&a));
    }
    finish_jacobi(a, v, sweeps, off_norms)
}

fn finish_jacobi(a: Matrix, v: Matrix, sweeps: usize, off_norms: Vec<f64>) -> SymEigen {
    let n = a.rows;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = v.select_columns(&order);
    SymEigen { values, vectors, sweeps, off_norms }
}

/// A symmetric pencil `(A, B)` with `B` positive semi-definite.
#[derive(Debug, Clone)]
pub struct SymPencil {
    pub a: Matrix,
    pub b: Matrix,
}

impl SymPencil {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
            return Err(Error::InvalidArgument("pencil matrices must be square and of equal size".into()));
        }
        for (name, m) in [("A", &a), ("B", &b)] {
            if m.asymmetry() > 1e-12 * m.frobenius_norm() {
                return Err(Error::InvalidArgument(alloc::format!("pencil matrix {name} is not symmetric")));
            }
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }
}

/// Largest pencil dimension [`solve_pencil`] accepts.
pub const MAX_PENCIL_DIM: usize = 2000;
/// Relative threshold below which condensed numerator directions are ignored.
const CONDENSE_REL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EigResult {
    /// Ascending.
    pub values: Vec<f64>,
    /// Eigenvectors in the original coordinates, one column per value,
    /// normalized so that `vᵀ B v = 1`.
    pub vectors: Matrix,
    /// Number of denominator directions retained.
    pub retained_rank: usize,
    /// Largest over smallest retained denominator eigenvalue.
    pub b_condition: f64,
    /// Number of split-off directions that were condensed into the numerator.
    pub condensed_rank: usize,
    pub sweeps: usize,
}

impl EigResult {
    /// `‖A v − λ B v‖ / (‖A‖ + |λ|‖B‖)` for column `k`, with `v` scaled to
    /// unit Euclidean length.
    pub fn relative_residual(&self, pencil: &SymPencil, k: usize) -> f64 {
        let v = self.vectors.column(k);
        let nv = sqrt(v.iter().map(|x| x * x).sum());
        let v: Vec<f64> = v.iter().map(|x| x / nv).collect();
        let av = pencil.a.matvec(&v);
        let bv = pencil.b.matvec(&v);
        let lam = self.values[k];
        let r = sqrt(av.iter().zip(&bv).map(|(a, b)| (a - lam * b) * (a - lam * b)).sum());
        r / (pencil.a.frobenius_norm() + lam.abs() * pencil.b.frobenius_norm())
    }
}

/// Regularized generalized eigensolve `A v = λ B v`.
pub fn solve_pencil(p: &SymPencil, eps_b: f64) -> Result<EigResult> {
    let d = p.dim();
    if d == 0 || d > MAX_PENCIL_DIM {
        return Err(Error::InvalidArgument(alloc::format!("pencil dimension {d} outside 1..={MAX_PENCIL_DIM}")));
    }
    let be = jacobi_eigen(&p.b);
    let bmax = be.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(bmax > f64::MIN_POSITIVE) {
        return Err(Error::DegeneratePencil);
    }
    if be.values[0] < -1e-10 * bmax {
        return Err(Error::InvalidArgument("pencil denominator is indefinite".into()));
    }
    let cut = eps_b * bmax;
    let keep: Vec<usize> = (0..d).filter(|&i| be.values[i] >= cut).collect();
    let drop: Vec<usize> = (0..d).filter(|&i| be.values[i] < cut).collect();
    let r = keep.len();
    let bmin = keep.iter().map(|&i| be.values[i]).fold(f64::INFINITY, f64::min);

    // W = U_keep diag(β^{-1/2}), Z = U_drop
    let mut w = be.vectors.select_columns(&keep);
    for (j, &i) in keep.iter().enumerate() {
        let s = 1.0 / sqrt(be.values[i]);
        for row in 0..d {
            w[(row, j)] *= s;
        }
    }
    let mut reduced = p.a.congruence(&w);

    // Condense the split-off directions: minimize A over them for fixed
    // retained coordinates.
    let mut lift: Option<Matrix> = None; // maps y -> z coefficients
    let mut condensed_rank = 0;
    let z = be.vectors.select_columns(&drop);
    if !drop.is_empty() {
        let azz = p.a.congruence(&z);
        let awz = w.transpose().matmul(&p.a.matmul(&z)); // r x q
        let ae = jacobi_eigen(&azz);
        let amax = p.a.frobenius_norm();
        let good: Vec<usize> = (0..ae.values.len()).filter(|&i| ae.values[i] > CONDENSE_REL * amax).collect();
        condensed_rank = good.len();
        if !good.is_empty() {
            // A_zz^+ restricted to well-resolved directions: E diag(1/α) Eᵀ
            let e = ae.vectors.select_columns(&good);
            let mut e_scaled = e.clone();
            for (j, &i) in good.iter().enumerate() {
                let s = 1.0 / ae.values[i];
                for row in 0..e.rows() {
                    e_scaled[(row, j)] *= s;
                }
            }
            let pinv = e_scaled.matmul(&e.transpose()); // q x q
            let coupling = awz.matmul(&pinv); // r x q
            let correction = coupling.matmul(&awz.transpose()); // r x r
            for i in 0..r {
                for j in 0..r {
                    reduced[(i, j)] -= correction[(i, j)];
                }
            }
            reduced.symmetrize();
            // z = -A_zz^+ A_zw y
            let mut l = coupling.transpose();
            for v in l.data.iter_mut() {
                *v = -*v;
            }
            lift = Some(l);
        }
    }

    let re = jacobi_eigen(&reduced);
    let mut vectors = w.matmul(&re.vectors);
    if let Some(l) = lift {
        let zc = z.matmul(&l.matmul(&re.vectors));
        for i in 0..d {
            for j in 0..r {
                vectors[(i, j)] += zc[(i, j)];
            }
        }
    }
    Ok(EigResult {
        values: re.values,
        vectors,
        retained_rank: r,
        b_condition: bmax / bmin,
        condensed_rank,
        sweeps: re.sweeps,
    })
}

/// Orthonormal basis (as columns) of the eigenvectors of the symmetric PSD
/// matrix `n` whose eigenvalues are at most `eps_c · max`.
pub fn nullspace(n: &Matrix, eps_c: f64) -> Matrix {
    let e = jacobi_eigen(n);
    let max = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let idx: Vec<usize> = (0..e.values.len()).filter(|&i| e.values[i] <= eps_c * max).collect();
    e.vectors.select_columns(&idx)
}

/// Householder reflector taking `x` to `off·e1`. Fills `v` and returns
/// `(off, beta)`; `beta` is `None` when `x` is already aligned.
fn reflector(x: &[f64], v: &mut [f64]) -> (f64, Option<f64>) {
    let alpha2: f64 = x.iter().map(|t| t * t).sum();
    let x0 = x[0];
    let alpha = if x0 >= 0.0 { -sqrt(alpha2) } else { sqrt(alpha2) };
    let vnorm2 = alpha2 - 2.0 * alpha * x0 + alpha * alpha;
    if vnorm2 <= f64::MIN_POSITIVE {
        return (x0, None);
    }
    v.copy_from_slice(x);
    v[0] -= alpha;
    (alpha, Some(2.0 / vnorm2))
}

/// Adds `row·v` (upper-triangle row `i` of a symmetric matrix, starting at
/// the diagonal) into `p`.
fn accumulate_row(row: &[f64], v: &[f64], p: &mut [f64]) {
    let vi = v[0];
    let mut s = 0.0;
    for (aij, vj) in row.iter().zip(v) {
        s += aij * vj;
    }
    p[0] += s;
    for (pj, aij) in p[1..].iter_mut().zip(&row[1..]) {
        *pj += vi * aij;
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns `(diagonal, off-diagonal)`; the off-diagonal has length `n-1`.
///
/// Works on the upper triangle; each step's rank-two update is fused with
/// the product needed by the next reflector.
pub fn tridiagonalize(m: &Matrix) -> (Vec<f64>, Vec<f64>) {
    assert!(m.is_square(), "tridiagonalize needs a square matrix");
    let n = m.rows;
    let mut a = m.clone();
    a.symmetrize();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    if n < 3 {
        for i in 0..n {
            diag[i] = a[(i, i)];
        }
        if n == 2 {
            off[0] = a[(0, 1)];
        }
        return (diag, off);
    }
    let (mut v, mut vn) = (vec![0.0; n], vec![0.0; n]);
    let (mut p, mut pn) = (vec![0.0; n], vec![0.0; n]);

    let full_product = |a: &Matrix, k: usize, v: &[f64], beta: f64, p: &mut [f64]| {
        p[k + 1..].iter_mut().for_each(|x| *x = 0.0);
        for i in k + 1..n {
            accumulate_row(&a.data[i * n + i..(i + 1) * n], &v[i..], &mut p[i..]);
        }
        p[k + 1..].iter_mut().for_each(|x| *x *= beta);
    };

    let mut cur = reflector(&a.data[1..n], &mut v[1..n]);
    if let Some(beta) = cur.1 {
        full_product(&a, 0, &v, beta, &mut p);
    }
    for k in 0..n - 2 {
        diag[k] = a[(k, k)];
        off[k] = cur.0;
        let has_next = k + 1 < n - 2;
        let Some(beta) = cur.1 else {
            if has_next {
                cur = reflector(&a.data[(k + 1) * n + k + 2..(k + 2) * n], &mut v[k + 2..n]);
                if let Some(b) = cur.1 {
                    full_product(&a, k + 1, &v, b, &mut p);
                }
            }
            continue;
        };
        let pv: f64 = (k + 1..n).map(|i| p[i] * v[i]).sum();
        let kfac = 0.5 * beta * pv;
        for i in k + 1..n {
            p[i] -= kfac * v[i];
        }
        // p now holds w; A <- A - v wᵀ - w vᵀ
        let update = |row: &mut [f64], i: usize, v: &[f64], w: &[f64]| {
            let (vi, wi) = (v[i], w[i]);
            for ((aij, vj), wj) in row.iter_mut().zip(&v[i..]).zip(&w[i..]) {
                *aij -= vi * wj + wi * vj;
            }
        };
        update(&mut a.data[(k + 1) * n + k + 1..(k + 2) * n], k + 1, &v, &p);
        let next = if has_next {
            reflector(&a.data[(k + 1) * n + k + 2..(k + 2) * n], &mut vn[k + 2..n])
        } else {
            (0.0, None)
        };
        pn[k + 2..].iter_mut().for_each(|x| *x = 0.0);
        for i in k + 2..n {
            let row = &mut a.data[i * n + i..(i + 1) * n];
            update(row, i, &v, &p);
            if next.1.is_some() {
                accumulate_row(row, &vn[i..], &mut pn[i..]);
            }
        }
        if let Some(b) = next.1 {
            pn[k + 2..].iter_mut().for_each(|x| *x *= b);
        }
        cur = next;
        core::mem::swap(&mut v, &mut vn);
        core::mem::swap(&mut p, &mut pn);
    }
    diag[n - 2] = a[(n - 2, n - 2)];
    off[n - 2] = a[(n - 2, n - 1)];
    diag[n - 1] = a[(n - 1, n - 1)];
    (diag, off)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` smallest eigenvalues of a symmetric matrix, ascending, by
/// tridiagonalization and Sturm bisection.
pub fn lowest_eigenvalues(m: &Matrix, count: usize) -> Vec<f64> {
    let (diag, off) = tridiagonalize(m);
    let n = diag.len();
    let count = count.min(n);
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let span = (hi - lo).abs().max(f64::MIN_POSITIVE);
    (0..count)
        .map(|k| {
            let (mut a, mut b) = (lo - 1e-12 * span, hi + 1e-12 * span);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                if sturm_count(&diag, &off, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}
