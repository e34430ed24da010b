//! Dense complex Hermitian eigensolver.
//!
//! Householder reduction to complex tridiagonal form, a diagonal phase
//! similarity that makes the tridiagonal real, then implicit QL with Wilkinson
//! shifts on the real symmetric tridiagonal. All arithmetic is sequential, so
//! identical input bits give identical output bits.

use num_complex::Complex64;

use crate::error::NumericsError;

/// Entry-wise tolerance used when validating Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major whose entries satisfy
/// `H[i][j] == conj(H[j][i])` within [`HERMITIAN_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Result<Self, NumericsError> {
        if dim == 0 {
            return Err(NumericsError::EmptyMatrix);
        }
        Ok(Self {
            dim,
            entries: vec![ZERO; dim * dim],
        })
    }

    /// Validates and wraps a row-major entry array.
    ///
    /// Rejection reports the entry pair with the largest deviation from
    /// Hermiticity.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self, NumericsError> {
        if dim == 0 {
            return Err(NumericsError::EmptyMatrix);
        }
        if entries.len() != dim * dim {
            return Err(NumericsError::ShapeMismatch {
                dim,
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let mut worst = (0, 0, 0.0f64);
        for i in 0..dim {
            for j in i..dim {
                let dev = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                if dev > worst.2 || dev.is_nan() {
                    worst = (i, j, dev);
                }
            }
        }
        if !(worst.2 <= HERMITIAN_TOL) {
            return Err(NumericsError::NotHermitian {
                row: worst.0,
                col: worst.1,
                deviation: worst.2,
                tolerance: HERMITIAN_TOL,
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Result<Self, NumericsError> {
        Self::from_row_major(N, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self, NumericsError> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        Ok(m)
    }

    /// Sets `H[i][j] = value` and `H[j][i] = conj(value)`. On the diagonal the
    /// imaginary part is discarded.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        let n = self.dim;
        if i == j {
            self.entries[i * n + i] = Complex64::new(value.re, 0.0);
        } else {
            self.entries[i * n + j] = value;
            self.entries[j * n + i] = value.conj();
        }
    }

    /// Adds `value` at `(i, j)` and its conjugate at `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, value: Complex64) {
        let current = self.get(i, j);
        self.set(i, j, current + value);
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    dim: usize,
    // column-major: vector j occupies [j*dim, (j+1)*dim)
    vectors: Vec<Complex64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Eigenvector belonging to `eigenvalues[j]`.
    pub fn vector(&self, j: usize) -> &[Complex64] {
        &self.vectors[j * self.dim..(j + 1) * self.dim]
    }

    /// `max |(V^dagger V - I)_ij|`
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let dot: Complex64 = self
                    .vector(a)
                    .iter()
                    .zip(self.vector(b))
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let target = if a == b { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// `max |(H V - V Lambda)_ij|`
    pub fn residual(&self, matrix: &HermitianMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.vector(j);
            let hv = matrix.mul_vec(v);
            for (x, y) in hv.iter().zip(v) {
                worst = worst.max((x - y * lambda).norm());
            }
        }
        worst
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh(matrix: &HermitianMatrix) -> Result<EigenDecomposition, NumericsError> {
    let n = matrix.dim;
    if n == 1 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![matrix.entries[0].re],
            dim: 1,
            vectors: vec![ONE],
        });
    }

    let mut a = matrix.entries.clone();
    // Q accumulates the Householder reflectors, row-major.
    let mut q = vec![ZERO; n * n];
    for i in 0..n {
        q[i * n + i] = ONE;
    }
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let off = k + 1;
        let tail: f64 = (off + 1..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[off * n + k];
        let xnorm = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * xnorm;

        let v = &mut v[..m];
        for (t, vi) in v.iter_mut().enumerate() {
            *vi = a[(off + t) * n + k];
        }
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut() {
            *vi /= vnorm;
        }

        // p = A_sub v ; w = p - (v^dagger p) v ; A_sub -= 2 (v w^dagger + w v^dagger)
        let p = &mut p[..m];
        for (r, pr) in p.iter_mut().enumerate() {
            let row = &a[(off + r) * n + off..(off + r) * n + n];
            *pr = row.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
        }
        let kappa: f64 = v
            .iter()
            .zip(p.iter())
            .map(|(x, y)| (x.conj() * y).re)
            .sum();
        for (pr, vr) in p.iter_mut().zip(v.iter()) {
            *pr -= vr * kappa;
        }
        for r in 0..m {
            let (vr, wr) = (v[r], p[r]);
            let row = &mut a[(off + r) * n + off..(off + r) * n + n];
            for (c, entry) in row.iter_mut().enumerate() {
                *entry -= 2.0 * (vr * p[c].conj() + wr * v[c].conj());
            }
        }
        a[off * n + k] = alpha;
        a[k * n + off] = alpha.conj();
        for i in off + 1..n {
            a[i * n + k] = ZERO;
            a[k * n + i] = ZERO;
        }

        // Q <- Q (I - 2 v v^dagger) on columns off..n
        for r in 0..n {
            let row = &mut q[r * n + off..r * n + n];
            let s: Complex64 = row.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
            for (entry, vc) in row.iter_mut().zip(v.iter()) {
                *entry -= 2.0 * s * vc.conj();
            }
        }
    }

    // Phase similarity D^dagger T D with real non-negative off-diagonals.
    let mut diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut sub = vec![0.0; n];
    let mut phases = vec![ONE; n];
    for i in 0..n - 1 {
        let e = a[(i + 1) * n + i];
        let r = e.norm();
        sub[i] = r;
        phases[i + 1] = if r > 0.0 { phases[i] * (e / r) } else { phases[i] };
    }

    // Real eigenvectors of the tridiagonal, column-major.
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_ql(&mut diag, &mut sub, &mut z, n)?;

    // V = Q D Z
    for r in 0..n {
        for c in 0..n {
            q[r * n + c] *= phases[c];
        }
    }
    let mut vectors = vec![ZERO; n * n];
    for j in 0..n {
        let zj = &z[j * n..(j + 1) * n];
        let out = &mut vectors[j * n..(j + 1) * n];
        for (r, o) in out.iter_mut().enumerate() {
            let row = &q[r * n..(r + 1) * n];
            *o = row.iter().zip(zj).map(|(x, &y)| x * y).sum();
        }
    }

    Ok(EigenDecomposition {
        eigenvalues: diag,
        dim: n,
        vectors,
    })
}

/// Implicit QL on a real symmetric tridiagonal matrix (`d` diagonal, `e[i]`
/// couples `i` and `i + 1`). Rotations are accumulated into the column-major
/// `z`; on return `d` is ascending and column `j` of `z` is its eigenvector.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<(), NumericsError> {
    const MAX_ITER: usize = 60;
    let eps = f64::EPSILON;
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_ITER {
                    return Err(NumericsError::NoConvergence { iterations: MAX_ITER });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let zi = &mut left[i * n..];
                    let zi1 = &mut right[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let hb = *b;
                        *b = s * *a + c * hb;
                        *a = c * *a - s * hb;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Selection sort keeps the ordering deterministic for ties.
    for i in 0..n - 1 {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for r in 0..n {
                z.swap(i * n + r, k * n + r);
            }
        }
    }
    Ok(())
}
