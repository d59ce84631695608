//! Closed oriented triangle surfaces in 3-space.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry2d::GeoSummary;
use crate::math::sqrt;
use crate::pencil::Matrix;

/// Largest vertex count accepted by the dense surface eigen-solve.
pub const DENSE_VERTEX_LIMIT: usize = 3000;
/// Largest icosphere subdivision level.
pub const MAX_SUBDIV: u32 = 6;
/// Cotangents beyond this magnitude mark a face as degenerate.
const COT_LIMIT: f64 = 1e12;

type V3 = [f64; 3];

#[inline]
fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
fn norm(a: V3) -> f64 {
    sqrt(dot(a, a))
}

/// A closed, consistently oriented triangle mesh with outward normals.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<V3>,
    faces: Vec<[usize; 3]>,
}

impl TriMesh {
    /// Validates topology, orientation, face areas and enclosed volume.
    pub fn new(vertices: Vec<V3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        if vertices.len() < 4 || faces.len() < 4 {
            return Err(Error::Topology("a closed surface needs at least 4 vertices and 4 faces".into()));
        }
        if vertices.iter().any(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::InvalidArgument("non-finite vertex coordinate".into()));
        }
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (fi, f) in faces.iter().enumerate() {
            if f.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::Topology(format!("face {fi} references a missing vertex")));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::DegenerateFace { face: fi });
            }
            for e in 0..3 {
                let key = (f[e], f[(e + 1) % 3]);
                if directed.insert(key, fi).is_some() {
                    return Err(Error::Topology(format!(
                        "edge {}-{} appears twice with the same direction",
                        key.0, key.1
                    )));
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(Error::Topology(format!("edge {a}-{b} is not shared by two faces")));
            }
        }
        let mesh = Self { vertices, faces };
        let scale = mesh.bounding_diameter();
        for fi in 0..mesh.faces.len() {
            if mesh.face_area(fi) <= 1e-14 * scale * scale {
                return Err(Error::DegenerateFace { face: fi });
            }
        }
        if !(mesh.volume() > 0.0) {
            return Err(Error::Topology("enclosed volume is not positive; faces must be oriented outward".into()));
        }
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[V3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        3 * self.faces.len() / 2
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    fn corners(&self, fi: usize) -> [V3; 3] {
        let f = self.faces[fi];
        [self.vertices[f[0]], self.vertices[f[1]], self.vertices[f[2]]]
    }

    /// Unnormalized outward normal, length twice the face area.
    fn face_normal(&self, fi: usize) -> V3 {
        let [a, b, c] = self.corners(fi);
        cross(sub(b, a), sub(c, a))
    }

    pub fn face_area(&self, fi: usize) -> f64 {
        0.5 * norm(self.face_normal(fi))
    }

    pub fn area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    pub fn volume(&self) -> f64 {
        (0..self.faces.len())
            .map(|fi| {
                let [a, b, c] = self.corners(fi);
                dot(a, cross(b, c)) / 6.0
            })
            .sum()
    }

    /// Lumped vertex masses: a third of the incident face areas.
    pub fn masses(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.vertices.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            let a = self.face_area(fi) / 3.0;
            for &i in f {
                m[i] += a;
            }
        }
        m
    }

    fn bounding_diameter(&self) -> f64 {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for d in 0..3 {
                lo[d] = lo[d].min(v[d]);
                hi[d] = hi[d].max(v[d]);
            }
        }
        norm(sub(hi, lo))
    }

    pub fn translated(&self, offset: V3) -> TriMesh {
        let vertices = self.vertices.iter().map(|v| [v[0] + offset[0], v[1] + offset[1], v[2] + offset[2]]).collect();
        TriMesh { vertices, faces: self.faces.clone() }
    }

    /// Uniform scaling about the origin; `s` must be positive.
    pub fn scaled(&self, s: f64) -> TriMesh {
        assert!(s > 0.0, "scale factor must be positive");
        let vertices = self.vertices.iter().map(|v| [v[0] * s, v[1] * s, v[2] * s]).collect();
        TriMesh { vertices, faces: self.faces.clone() }
    }

    /// Dihedral convexity test: for every edge, the far vertex of one
    /// neighbouring face does not lie outside the plane of the other.
    pub fn is_convex(&self) -> bool {
        let tol = 1e-9 * self.bounding_diameter();
        let mut edge_face: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for e in 0..3 {
                edge_face.insert((f[e], f[(e + 1) % 3]), fi);
            }
        }
        for (&(a, b), &fi) in &edge_face {
            let gj = edge_face[&(b, a)];
            let g = self.faces[gj];
            let far = g.iter().copied().find(|&v| v != a && v != b).unwrap();
            let n = self.face_normal(fi);
            let nn = norm(n);
            if dot(sub(self.vertices[far], self.vertices[a]), n) / nn > tol {
                return false;
            }
        }
        true
    }
}

/// Cotangent stiffness and lumped mass of a mesh.
#[derive(Debug, Clone)]
pub struct LaplaceOperator {
    /// Sparse rows of `S`, each sorted by column and including the diagonal.
    rows: Vec<Vec<(usize, f64)>>,
    pub mass: Vec<f64>,
}

impl LaplaceOperator {
    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// `S x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(j, s)| s * x[j]).sum()).collect()
    }

    /// `(i, j, S_ij)` for every stored entry.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, s) in r {
                out.push((i, j, s));
            }
        }
        out
    }

    /// Dense `M^{-1/2} S M^{-1/2}`.
    pub fn normalized_dense(&self) -> Result<Matrix> {
        let n = self.dim();
        if n > DENSE_VERTEX_LIMIT {
            return Err(Error::MeshTooLarge { vertices: n, limit: DENSE_VERTEX_LIMIT });
        }
        let d: Vec<f64> = self.mass.iter().map(|m| 1.0 / sqrt(*m)).collect();
        let mut out = Matrix::zeros(n, n);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, s) in r {
                out[(i, j)] = d[i] * s * d[j];
            }
        }
        Ok(out)
    }
}

pub fn cotan_laplacian(mesh: &TriMesh) -> Result<LaplaceOperator> {
    let n = mesh.vertex_count();
    let mut acc: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
    for (fi, f) in mesh.faces.iter().enumerate() {
        let p = mesh.corners(fi);
        for c in 0..3 {
            let (i, j) = (f[(c + 1) % 3], f[(c + 2) % 3]);
            let u = sub(p[(c + 1) % 3], p[c]);
            let v = sub(p[(c + 2) % 3], p[c]);
            let cr = norm(cross(u, v));
            let cot = dot(u, v) / cr;
            if !cot.is_finite() || cot.abs() > COT_LIMIT {
                return Err(Error::DegenerateFace { face: fi });
            }
            let w = -0.5 * cot;
            *acc[i].entry(j).or_insert(0.0) += w;
            *acc[j].entry(i).or_insert(0.0) += w;
        }
    }
    let rows = acc
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            let diag: f64 = -r.values().sum::<f64>();
            r.insert(i, diag);
            r.into_iter().collect()
        })
        .collect();
    Ok(LaplaceOperator { rows, mass: mesh.masses() })
}

/// Geometric functionals of the surface and the solid it bounds.
pub fn mesh_summary(mesh: &TriMesh) -> Result<GeoSummary> {
    let lap = cotan_laplacian(mesh)?;
    let mut volume = 0.0;
    let mut area = 0.0;
    let mut first = [0.0; 3];
    let mut bsum = [0.0; 3];
    let mut moments = [0.0; 3];
    let mut bmoments = [0.0; 3];
    for fi in 0..mesh.faces.len() {
        let [a, b, c] = mesh.corners(fi);
        let tv = dot(a, cross(b, c)) / 6.0;
        let ta = mesh.face_area(fi);
        volume += tv;
        area += ta;
        for d in 0..3 {
            let (x, y, z) = (a[d], b[d], c[d]);
            let sq = x * x + y * y + z * z;
            let pairs = x * y + y * z + x * z;
            // the fourth tetrahedron vertex is the origin
            first[d] += tv * (x + y + z) / 4.0;
            moments[d] += tv / 10.0 * (sq + pairs);
            bsum[d] += ta * (x + y + z) / 3.0;
            bmoments[d] += ta / 6.0 * (sq + pairs);
        }
    }
    let mut h2 = 0.0;
    let xs: [Vec<f64>; 3] = core::array::from_fn(|d| mesh.vertices.iter().map(|v| v[d]).collect());
    let sx: [Vec<f64>; 3] = core::array::from_fn(|d| lap.apply(&xs[d]));
    for i in 0..mesh.vertex_count() {
        let m = lap.mass[i];
        let hv: f64 = (0..3).map(|d| (sx[d][i] / (2.0 * m)) * (sx[d][i] / (2.0 * m))).sum();
        h2 += hv * m;
    }
    let vc: Vec<f64> = first.iter().map(|f| f / volume).collect();
    let reach = mesh.vertices.iter().map(|v| norm(sub(*v, [vc[0], vc[1], vc[2]]))).fold(0.0f64, f64::max);
    Ok(GeoSummary {
        dim: 3,
        volume,
        boundary_measure: area,
        volume_centroid: vc,
        boundary_centroid: bsum.iter().map(|b| b / area).collect(),
        moments: moments.to_vec(),
        boundary_moments: bmoments.to_vec(),
        curvature_energy: h2,
        convex: mesh.is_convex(),
        length_scale: 2.0 * reach,
    })
}

/// Icosahedron refined by repeated midpoint subdivision, with every vertex
/// projected onto the sphere of radius `radius`.
pub fn icosphere(subdiv: u32, radius: f64) -> Result<TriMesh> {
    if subdiv > MAX_SUBDIV {
        return Err(Error::InvalidArgument(format!("subdivision level {subdiv} exceeds {MAX_SUBDIV}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let t = (1.0 + sqrt(5.0)) / 2.0;
    let mut verts: Vec<V3> = vec![
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let project = |v: V3| {
        let l = norm(v);
        [v[0] / l, v[1] / l, v[2] / l]
    };
    for v in verts.iter_mut() {
        *v = project(*v);
    }
    for _ in 0..subdiv {
        let mut mid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<V3>| -> usize {
            let key = if a < b { (a, b) } else { (b, a) };
            *mid.entry(key).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(project([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0]));
                verts.len() - 1
            })
        };
        for f in &faces {
            let ab = midpoint(f[0], f[1], &mut verts);
            let bc = midpoint(f[1], f[2], &mut verts);
            let ca = midpoint(f[2], f[0], &mut verts);
            next.push([f[0], ab, ca]);
            next.push([f[1], bc, ab]);
            next.push([f[2], ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    for v in verts.iter_mut() {
        *v = [v[0] * radius, v[1] * radius, v[2] * radius];
    }
    TriMesh::new(verts, faces)
}

/// Unit icosphere with vertices scaled by `(a, b, c)` along the axes.
pub fn ellipsoid_mesh(a: f64, b: f64, c: f64, subdiv: u32) -> Result<TriMesh> {
    for s in [a, b, c] {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!("semi-axes must be positive, got {s}")));
        }
    }
    let sphere = icosphere(subdiv, 1.0)?;
    let vertices = sphere.vertices.iter().map(|v| [v[0] * a, v[1] * b, v[2] * c]).collect();
    TriMesh::new(vertices, sphere.faces)
}
