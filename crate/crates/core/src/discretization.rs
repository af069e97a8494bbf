//! Piecewise-linear discretization of `W₀^{1,p(x)}(Ω)` on simplicial meshes.
//!
//! All integrals use the one-point centroid rule: an element contributes
//! `f(centroid) · |element|`. Gradients of the piecewise-linear interpolant
//! are constant per element.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{shape_check, Error, Result};

/// A 1-D interval or 2-D rectangle mesh of segments / triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    dim: usize,
    vertices: Vec<[f64; 2]>,
    // element connectivity, stride `dim + 1`
    conn: Vec<usize>,
    boundary: Vec<bool>,
    measures: Vec<f64>,
    // gradient of each local hat function, stride `dim + 1`
    basis_grads: Vec<[f64; 2]>,
}

impl Mesh {
    /// `n` uniform segments on `(a_end, b_end)`.
    pub fn interval(n: usize, a_end: f64, b_end: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Shape(format!("interval mesh needs n >= 2 (got {n})")));
        }
        if !(a_end < b_end) {
            return Err(Error::Shape(format!("degenerate interval ({a_end}, {b_end})")));
        }
        let h = (b_end - a_end) / n as f64;
        let vertices = (0..=n)
            .map(|i| {
                let x = if i == n { b_end } else { a_end + h * i as f64 };
                [x, 0.0]
            })
            .collect::<Vec<_>>();
        let mut boundary = vec![false; n + 1];
        boundary[0] = true;
        boundary[n] = true;
        let conn = (0..n).flat_map(|e| [e, e + 1]).collect();
        Self::assemble(1, vertices, conn, boundary)
    }

    /// Structured triangulation of the rectangle with corners `lo`, `hi`:
    /// `nx × ny` cells, each split into two triangles with diagonals
    /// alternating in a checkerboard pattern.
    pub fn rect(nx: usize, ny: usize, lo: [f64; 2], hi: [f64; 2]) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::Shape(format!("rectangle mesh needs nx, ny >= 2 (got {nx}x{ny})")));
        }
        if !(lo[0] < hi[0] && lo[1] < hi[1]) {
            return Err(Error::Shape(format!("degenerate rectangle {lo:?} - {hi:?}")));
        }
        let (hx, hy) = ((hi[0] - lo[0]) / nx as f64, (hi[1] - lo[1]) / ny as f64);
        let coord = |i: usize, n: usize, lo: f64, hi: f64, h: f64| {
            if i == n {
                hi
            } else {
                lo + h * i as f64
            }
        };
        let idx = |i: usize, j: usize| j * (nx + 1) + i;
        let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
        let mut boundary = Vec::with_capacity(vertices.capacity());
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push([coord(i, nx, lo[0], hi[0], hx), coord(j, ny, lo[1], hi[1], hy)]);
                boundary.push(i == 0 || j == 0 || i == nx || j == ny);
            }
        }
        let mut conn = Vec::with_capacity(6 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let (v00, v10, v01, v11) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
                if (i + j) % 2 == 0 {
                    conn.extend([v00, v10, v11, v00, v11, v01]);
                } else {
                    conn.extend([v00, v10, v01, v10, v11, v01]);
                }
            }
        }
        Self::assemble(2, vertices, conn, boundary)
    }

    fn assemble(dim: usize, vertices: Vec<[f64; 2]>, conn: Vec<usize>, boundary: Vec<bool>) -> Result<Self> {
        let stride = dim + 1;
        let n_el = conn.len() / stride;
        let mut measures = Vec::with_capacity(n_el);
        let mut basis_grads = Vec::with_capacity(conn.len());
        for el in conn.chunks_exact(stride) {
            if dim == 1 {
                let h = vertices[el[1]][0] - vertices[el[0]][0];
                measures.push(h);
                basis_grads.extend([[-1.0 / h, 0.0], [1.0 / h, 0.0]]);
            } else {
                let [x0, x1, x2] = [vertices[el[0]], vertices[el[1]], vertices[el[2]]];
                let twice_area = (x1[0] - x0[0]) * (x2[1] - x0[1]) - (x2[0] - x0[0]) * (x1[1] - x0[1]);
                measures.push(0.5 * twice_area);
                let pts = [x0, x1, x2];
                for i in 0..3 {
                    let (xj, xk) = (pts[(i + 1) % 3], pts[(i + 2) % 3]);
                    basis_grads.push([(xj[1] - xk[1]) / twice_area, (xk[0] - xj[0]) / twice_area]);
                }
            }
        }
        if let Some(e) = measures.iter().position(|&m| !(m > 0.0)) {
            return Err(Error::Shape(format!("element {e} has nonpositive measure")));
        }
        Ok(Mesh {
            dim,
            vertices,
            conn,
            boundary,
            measures,
            basis_grads,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_elements(&self) -> usize {
        self.measures.len()
    }

    pub fn vertex(&self, v: usize) -> [f64; 2] {
        self.vertices[v]
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    /// Vertex indices of element `e` (2 for segments, 3 for triangles).
    pub fn element(&self, e: usize) -> &[usize] {
        let s = self.dim + 1;
        &self.conn[e * s..(e + 1) * s]
    }

    /// Gradients of the hat functions of element `e`, in local vertex order.
    pub fn basis_gradients(&self, e: usize) -> &[[f64; 2]] {
        let s = self.dim + 1;
        &self.basis_grads[e * s..(e + 1) * s]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn total_measure(&self) -> f64 {
        self.measures.iter().sum()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_vertices()).filter(|&v| !self.boundary[v])
    }

    pub fn n_interior(&self) -> usize {
        self.boundary.iter().filter(|b| !**b).count()
    }

    pub fn centroid(&self, e: usize) -> [f64; 2] {
        let el = self.element(e);
        let k = el.len() as f64;
        let mut c = [0.0; 2];
        for &v in el {
            c[0] += self.vertices[v][0] / k;
            c[1] += self.vertices[v][1] / k;
        }
        c
    }

    /// Value of every hat function at an element centroid, `1 / (dim + 1)`.
    pub fn centroid_weight(&self) -> f64 {
        1.0 / (self.dim + 1) as f64
    }

    /// Lumped mass `∫ φ_v` for every vertex.
    pub fn lumped_mass(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.n_vertices()];
        let w = self.centroid_weight();
        for e in 0..self.n_elements() {
            for &v in self.element(e) {
                m[v] += w * self.measures[e];
            }
        }
        m
    }
}

/// Nodal values of a piecewise-linear function on a shared mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl GridFunction {
    /// Zero-trace grid function; values at boundary vertices are overwritten with 0.
    pub fn new(mesh: Arc<Mesh>, mut values: Vec<f64>) -> Result<Self> {
        shape_check("nodal values", values.len(), mesh.n_vertices())?;
        for (v, x) in values.iter_mut().enumerate() {
            if mesh.is_boundary(v) {
                *x = 0.0;
            }
        }
        Ok(GridFunction { mesh, values })
    }

    /// Nodal data taken verbatim, boundary values included.
    pub fn raw(mesh: Arc<Mesh>, values: Vec<f64>) -> Result<Self> {
        shape_check("nodal values", values.len(), mesh.n_vertices())?;
        Ok(GridFunction { mesh, values })
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let values = vec![0.0; mesh.n_vertices()];
        GridFunction { mesh, values }
    }

    /// Samples `f` at the vertices, then zeroes the boundary.
    pub fn from_fn(mesh: Arc<Mesh>, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = mesh.vertices().iter().map(|&x| f(x)).collect();
        Self::new(mesh, values).expect("one value per vertex")
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn has_zero_trace(&self) -> bool {
        self.values
            .iter()
            .zip(self.mesh.boundary_mask())
            .all(|(&x, &b)| !b || x == 0.0)
    }

    pub(crate) fn require_zero_trace(&self) -> Result<()> {
        if self.has_zero_trace() {
            Ok(())
        } else {
            Err(Error::Domain("grid function has nonzero boundary values".into()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0)
    }

    /// Interpolant value at every element centroid.
    pub fn centroid_values(&self) -> Vec<f64> {
        let w = self.mesh.centroid_weight();
        (0..self.mesh.n_elements())
            .map(|e| self.mesh.element(e).iter().map(|&v| self.values[v]).sum::<f64>() * w)
            .collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|x| c * x)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            mesh: self.mesh.clone(),
            values: self.values.iter().map(|&x| f(x)).collect(),
        }
    }

    /// `self + c · other` on the same mesh.
    pub fn axpy(&self, c: f64, other: &GridFunction) -> Self {
        debug_assert_eq!(self.values.len(), other.values.len());
        GridFunction {
            mesh: self.mesh.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| x + c * y).collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max |self - other|` over vertices.
    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}

/// Constant gradient of the piecewise-linear interpolant on every element.
pub fn gradient_of(u: &GridFunction) -> Vec<[f64; 2]> {
    let mesh = u.mesh();
    (0..mesh.n_elements())
        .map(|e| element_gradient(mesh, e, u.values()))
        .collect()
}

#[inline]
pub(crate) fn element_gradient(mesh: &Mesh, e: usize, values: &[f64]) -> [f64; 2] {
    let mut g = [0.0; 2];
    for (&v, dphi) in mesh.element(e).iter().zip(mesh.basis_gradients(e)) {
        g[0] += values[v] * dphi[0];
        g[1] += values[v] * dphi[1];
    }
    g
}

/// Euclidean length of every element gradient.
pub fn gradient_magnitudes(u: &GridFunction) -> Vec<f64> {
    gradient_of(u).iter().map(|g| g[0].hypot(g[1])).collect()
}

/// Centroid-rule integral `Σ f_e · |e|`.
pub fn integrate(f: &[f64], mesh: &Mesh) -> Result<f64> {
    shape_check("integrand", f.len(), mesh.n_elements())?;
    Ok(quadrature(f, mesh))
}

#[inline]
pub(crate) fn quadrature(f: &[f64], mesh: &Mesh) -> f64 {
    f.iter().zip(mesh.measures()).map(|(f, m)| f * m).sum()
}

/// Renders the plain-text dump: a `dim n_vertices n_elements` header, one
/// vertex per line, one element per line, then one nodal value per line.
pub fn write_dump(u: &GridFunction) -> String {
    let mesh = u.mesh();
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", mesh.dim(), mesh.n_vertices(), mesh.n_elements());
    for x in mesh.vertices() {
        if mesh.dim() == 1 {
            let _ = writeln!(s, "{:.17e}", x[0]);
        } else {
            let _ = writeln!(s, "{:.17e} {:.17e}", x[0], x[1]);
        }
    }
    for e in 0..mesh.n_elements() {
        let idx: Vec<String> = mesh.element(e).iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", idx.join(" "));
    }
    for v in u.values() {
        let _ = writeln!(s, "{:.17e}", v);
    }
    s
}

/// Parsed contents of a solution dump.
#[derive(Debug, Clone, PartialEq)]
pub struct Dump {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub elements: Vec<Vec<usize>>,
    pub values: Vec<f64>,
}

pub fn read_dump(text: &str) -> Result<Dump> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let bad = |line: usize, message: &str| Error::Parse {
        line: line + 1,
        message: message.to_string(),
    };
    let (hl, header) = lines.next().ok_or_else(|| bad(0, "empty dump"))?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(hl, "bad header")))
        .collect::<Result<_>>()?;
    let [dim, nv, ne] = head[..] else {
        return Err(bad(hl, "header must be `dim n_vertices n_elements`"));
    };
    let mut take = |n: usize| -> Result<Vec<(usize, &str)>> {
        (0..n)
            .map(|_| lines.next().ok_or_else(|| bad(usize::MAX - 1, "truncated dump")))
            .collect()
    };
    let floats = |(l, s): (usize, &str)| -> Result<Vec<f64>> {
        s.split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(l, "bad number")))
            .collect()
    };
    let vertices = take(nv)?.into_iter().map(floats).collect::<Result<Vec<_>>>()?;
    let elements = take(ne)?
        .into_iter()
        .map(|(l, s)| {
            s.split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(l, "bad index")))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let values = take(nv)?
        .into_iter()
        .map(|r| floats(r).map(|v| v[0]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dump {
        dim,
        vertices,
        elements,
        values,
    })
}
