//! Dense Hermitian eigensolver.
//!
//! The matrix is reduced to a real symmetric tridiagonal form by complex
//! Householder reflections followed by a diagonal phase scaling, and the
//! tridiagonal problem is solved by implicit-shift QL. Eigenvectors are
//! accumulated through both stages.

use num_complex::Complex64;

use crate::error::{HillError, Result};

const MAX_QL_SWEEPS_PER_VALUE: usize = 60;

/// Hermitian matrix stored densely in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds the matrix from its upper triangle; `f(i, j)` is called for `i <= j`.
    /// Diagonal imaginary parts are dropped.
    pub fn from_upper<F>(n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        if n == 0 {
            return Err(HillError::InvalidArgument("matrix dimension must be >= 1".into()));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(f(i, i).re, 0.0);
            for j in (i + 1)..n {
                let z = f(i, j);
                data[i * n + j] = z;
                data[j * n + i] = z.conj();
            }
        }
        Ok(Self { n, data })
    }

    /// Wraps a full row-major buffer, checking Hermitian symmetry to `tol`.
    pub fn from_dense(n: usize, data: Vec<Complex64>, tol: f64) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(HillError::InvalidArgument(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            for j in i..n {
                let d = (data[i * n + j] - data[j * n + i].conj()).norm();
                if d > tol {
                    return Err(HillError::InvalidArgument(format!(
                        "matrix not Hermitian at ({i}, {j}): defect {d:.3e}"
                    )));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let row = &self.data[i * n..(i + 1) * n];
                row.iter().zip(v).map(|(a, x)| a * x).sum()
            })
            .collect()
    }

    /// `u* A v`.
    pub fn form(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let av = self.mul_vec(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    fn fingerprint(&self) -> u64 {
        // FNV-1a over the raw bits
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for z in &self.data {
            for bits in [z.re.to_bits(), z.im.to_bits()] {
                for b in bits.to_le_bytes() {
                    h ^= u64::from(b);
                    h = h.wrapping_mul(0x0000_0100_0000_01b3);
                }
            }
        }
        h
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// `vectors[j]` is the unit eigenvector belonging to `values[j]`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl HermitianEigen {
    /// Largest `‖A v − λ v‖` over all pairs.
    pub fn max_residual(&self, a: &HermitianMatrix) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(&lam, v)| {
                let av = a.mul_vec(v);
                av.iter()
                    .zip(v)
                    .map(|(x, y)| (x - y * lam).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen(a: &HermitianMatrix) -> Result<HermitianEigen> {
    let n = a.n;
    let mut work = a.data.clone();
    let (diag, offdiag, reflectors) = householder_tridiagonalize(n, &mut work);

    // Phase scaling D with D* T D real: d_{k+1} = d_k * beta_k / |beta_k|.
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    let mut e = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let beta = offdiag[k];
        let mag = beta.norm();
        e[k] = mag;
        phases[k + 1] = if mag > 0.0 { phases[k] * (beta / mag) } else { phases[k] };
    }
    let mut d = diag;

    // rows of `w` are the tridiagonal eigenvectors
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        w[i * n + i] = 1.0;
    }
    tql2(&mut d, &mut e, &mut w, n).map_err(|iterations| HillError::EigenNoConvergence {
        dim: n,
        iterations,
        fingerprint: a.fingerprint(),
    })?;

    let q = accumulate_reflectors(n, &reflectors);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &j in &order {
        values.push(d[j]);
        let wj = &w[j * n..(j + 1) * n];
        // z = Q D w_j
        let dw: Vec<Complex64> = phases.iter().zip(wj).map(|(p, &x)| p * x).collect();
        let z: Vec<Complex64> = (0..n)
            .map(|r| {
                let row = &q[r * n..(r + 1) * n];
                row.iter().zip(&dw).map(|(a, b)| a * b).sum()
            })
            .collect();
        vectors.push(z);
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only (same code path, eigenvectors discarded).
pub fn hermitian_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(a).map(|e| e.values)
}

struct Reflector {
    /// first row/column index the reflector acts on
    start: usize,
    /// unit vector (empty when the step was skipped)
    v: Vec<Complex64>,
}

/// Reduces `a` (row-major, Hermitian) to tridiagonal form. Returns the real
/// diagonal, the complex subdiagonal `T[k+1,k]`, and the reflectors.
fn householder_tridiagonalize(
    n: usize,
    a: &mut [Complex64],
) -> (Vec<f64>, Vec<Complex64>, Vec<Reflector>) {
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut sub = vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)];

    for k in 0..n.saturating_sub(2) {
        let s = n - k - 1;
        let x: Vec<Complex64> = (0..s).map(|i| a[(k + 1 + i) * n + k]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            sub[k] = x[0];
            reflectors.push(Reflector { start: k + 1, v: Vec::new() });
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }

        // trailing block B = a[k+1.., k+1..]; B <- H B H with H = I - 2 v v*
        let off = k + 1;
        let mut p = vec![Complex64::new(0.0, 0.0); s];
        for i in 0..s {
            let row = &a[(off + i) * n + off..(off + i) * n + n];
            p[i] = row.iter().zip(&v).map(|(b, x)| b * x).sum();
        }
        let kappa: Complex64 = v.iter().zip(&p).map(|(x, y)| x.conj() * y).sum();
        let wv: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kappa.re).collect();
        for i in 0..s {
            let vi2 = v[i] * 2.0;
            let wi2 = wv[i] * 2.0;
            let row = &mut a[(off + i) * n + off..(off + i) * n + n];
            for (j, b) in row.iter_mut().enumerate() {
                *b -= vi2 * wv[j].conj() + wi2 * v[j].conj();
            }
        }
        // column k below the diagonal becomes (alpha, 0, ...)
        a[off * n + k] = alpha;
        a[k * n + off] = alpha.conj();
        for i in 1..s {
            a[(off + i) * n + k] = Complex64::new(0.0, 0.0);
            a[k * n + off + i] = Complex64::new(0.0, 0.0);
        }
        sub[k] = alpha;
        reflectors.push(Reflector { start: off, v });
    }
    if n >= 2 {
        sub[n - 2] = a[(n - 1) * n + n - 2];
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    (diag, sub, reflectors)
}

/// Q = H_0 H_1 ... H_{n-3}, row-major.
fn accumulate_reflectors(n: usize, reflectors: &[Reflector]) -> Vec<Complex64> {
    let mut q = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        q[i * n + i] = Complex64::new(1.0, 0.0);
    }
    for r in reflectors.iter().rev() {
        if r.v.is_empty() {
            continue;
        }
        let off = r.start;
        let s = n - off;
        // Q[off.., off..] <- (I - 2 v v*) Q[off.., off..]
        let mut t = vec![Complex64::new(0.0, 0.0); s];
        for i in 0..s {
            let vi = r.v[i].conj();
            let row = &q[(off + i) * n + off..(off + i) * n + n];
            for (tj, qij) in t.iter_mut().zip(row) {
                *tj += vi * qij;
            }
        }
        for i in 0..s {
            let vi2 = r.v[i] * 2.0;
            let row = &mut q[(off + i) * n + off..(off + i) * n + n];
            for (qij, tj) in row.iter_mut().zip(&t) {
                *qij -= vi2 * tj;
            }
        }
    }
    q
}

/// Implicit-shift QL on a symmetric tridiagonal matrix (EISPACK tql2 lineage).
/// `e[i]` couples rows `i` and `i+1`; `e[n-1]` is ignored. Rows of `w` are
/// rotated alongside. On failure returns the iteration count reached.
fn tql2(d: &mut [f64], e: &mut [f64], w: &mut [f64], n: usize) -> std::result::Result<(), usize> {
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let mut total = 0usize;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                total += 1;
                if iter > MAX_QL_SWEEPS_PER_VALUE {
                    return Err(total);
                }
                let g = d[l];
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
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    let wi = &mut lo[i * n..];
                    let wi1 = &mut hi[..n];
                    for k in 0..n {
                        let t = wi1[k];
                        wi1[k] = s * wi[k] + c * t;
                        wi[k] = c * wi[k] - s * t;
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
    Ok(())
}
