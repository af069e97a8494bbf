//! Sparse stiffness operator of the constant-coefficient Laplacian on the
//! interior vertices. It supplies the `H¹₀` inner product used for Sobolev
//! gradients and path lengths, and the discrete Dirichlet eigenvectors.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::discretization::Mesh;

/// `L_ij = ∫ ∇φ_i · ∇φ_j` restricted to interior vertices, in CSR form.
#[derive(Debug, Clone)]
pub struct Stiffness {
    n_vertices: usize,
    interior: Vec<usize>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Stiffness {
    pub fn new(mesh: &Mesh) -> Self {
        let interior: Vec<usize> = mesh.interior_vertices().collect();
        let mut slot = vec![None; mesh.n_vertices()];
        for (k, &v) in interior.iter().enumerate() {
            slot[v] = Some(k);
        }
        let n = interior.len();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in 0..mesh.n_elements() {
            let m = mesh.measures()[e];
            let el = mesh.element(e);
            let grads = mesh.basis_gradients(e);
            for (i, &vi) in el.iter().enumerate() {
                let Some(si) = slot[vi] else { continue };
                for (j, &vj) in el.iter().enumerate() {
                    let Some(sj) = slot[vj] else { continue };
                    let val = (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]) * m;
                    match rows[si].iter_mut().find(|(c, _)| *c == sj) {
                        Some(entry) => entry.1 += val,
                        None => rows[si].push((sj, val)),
                    }
                }
            }
        }
        let mut row_ptr = vec![0];
        let (mut cols, mut vals) = (Vec::new(), Vec::new());
        for mut row in rows {
            row.sort_by_key(|(c, _)| *c);
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Stiffness {
            n_vertices: mesh.n_vertices(),
            interior,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn n_interior(&self) -> usize {
        self.interior.len()
    }

    fn apply_interior(&self, x: &[f64], y: &mut [f64]) {
        for (i, out) in y.iter_mut().enumerate() {
            *out = (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(|k| self.vals[k] * x[self.cols[k]])
                .sum();
        }
    }

    fn gather(&self, full: &[f64]) -> Vec<f64> {
        self.interior.iter().map(|&v| full[v]).collect()
    }

    fn scatter(&self, interior: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.n_vertices];
        for (&v, &x) in self.interior.iter().zip(interior) {
            full[v] = x;
        }
        full
    }

    /// `L u` on vertex vectors (boundary entries ignored on input, zero on output).
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let x = self.gather(u);
        let mut y = vec![0.0; x.len()];
        self.apply_interior(&x, &mut y);
        self.scatter(&y)
    }

    /// `uᵀ L v = ∫ ∇u · ∇v`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let lu = self.apply(u);
        lu.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// `H¹₀` seminorm `(∫ |∇u|²)^{1/2}`.
    pub fn energy_norm(&self, u: &[f64]) -> f64 {
        self.inner(u, u).max(0.0).sqrt()
    }

    /// Solves `L x = r` by conjugate gradients: the `H¹₀` Riesz representative of
    /// the functional whose hat-function values are `r`.
    pub fn riesz(&self, r: &[f64]) -> Vec<f64> {
        let b = self.gather(r);
        let n = b.len();
        let mut x = vec![0.0; n];
        let b_norm = dot(&b, &b).sqrt();
        if b_norm == 0.0 {
            return self.scatter(&x);
        }
        let mut res = b.clone();
        let mut dir = res.clone();
        let mut ad = vec![0.0; n];
        let mut rr = dot(&res, &res);
        for _ in 0..(4 * n + 20) {
            self.apply_interior(&dir, &mut ad);
            let alpha = rr / dot(&dir, &ad);
            for i in 0..n {
                x[i] += alpha * dir[i];
                res[i] -= alpha * ad[i];
            }
            let rr_new = dot(&res, &res);
            if rr_new.sqrt() <= 1e-14 * b_norm {
                break;
            }
            let beta = rr_new / rr;
            for i in 0..n {
                dir[i] = res[i] + beta * dir[i];
            }
            rr = rr_new;
        }
        self.scatter(&x)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The `k` lowest discrete Dirichlet eigenpairs of `L v = μ M v`, `M` the
/// lumped mass. Vectors are vertex-indexed, `H¹₀`-normalized, and signed so
/// that their first non-negligible entry is positive.
pub fn dirichlet_eigenpairs(mesh: &Mesh, k: usize) -> Vec<(f64, Vec<f64>)> {
    let stiff = Stiffness::new(mesh);
    let n = stiff.n_interior();
    let mass = mesh.lumped_mass();
    let inv_sqrt: Vec<f64> = stiff.interior.iter().map(|&v| 1.0 / mass[v].sqrt()).collect();
    let mut dense = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for idx in stiff.row_ptr[i]..stiff.row_ptr[i + 1] {
            let j = stiff.cols[idx];
            dense[(i, j)] = stiff.vals[idx] * inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let eig = SymmetricEigen::new(dense);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order
        .into_iter()
        .take(k)
        .map(|c| {
            let y: Vec<f64> = (0..n).map(|i| eig.eigenvectors[(i, c)] * inv_sqrt[i]).collect();
            let mut v = stiff.scatter(&y);
            let scale = stiff.energy_norm(&v);
            let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            let first = v.iter().copied().find(|x| x.abs() > 1e-6 * peak).unwrap_or(1.0);
            let s = first.signum() / scale;
            v.iter_mut().for_each(|x| *x *= s);
            (eig.eigenvalues[c], v)
        })
        .collect()
}
