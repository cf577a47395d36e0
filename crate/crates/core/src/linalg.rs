//! Small dense kernels: LU with partial pivoting, cyclic Jacobi for symmetric
//! eigenproblems, and conjugate gradients on an implicit operator.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dense {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] += v;
    }

    pub fn max_abs(&self) -> f64 {
        math::max_abs(&self.a)
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting. Returns
/// `None` when a pivot falls below `pivot_floor`.
pub(crate) fn lu_solve(mut m: Dense, mut b: Vec<f64>, pivot_floor: f64) -> Option<Vec<f64>> {
    let n = m.n;
    for k in 0..n {
        let mut p = k;
        let mut best = math::abs(m.get(k, k));
        for i in k + 1..n {
            let v = math::abs(m.get(i, k));
            if v > best {
                best = v;
                p = i;
            }
        }
        if !(best > pivot_floor) {
            return None;
        }
        if p != k {
            for j in 0..n {
                m.a.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        let pivot = m.get(k, k);
        for i in k + 1..n {
            let factor = m.get(i, k) / pivot;
            if factor != 0.0 {
                for j in k..n {
                    let v = m.get(k, j);
                    m.add(i, j, -factor * v);
                }
                b[i] -= factor * b[k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= m.get(i, j) * x[j];
        }
        x[i] = s / m.get(i, i);
    }
    Some(x)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and column eigenvectors (column `k` of the returned
/// row-major matrix pairs with eigenvalue `k`), unsorted, and the number of
/// sweeps performed.
pub(crate) fn jacobi_eigen(
    mut a: Dense,
    tol: f64,
    max_sweeps: usize,
) -> Option<(Vec<f64>, Dense, usize)> {
    let n = a.n;
    let mut v = Dense::zeros(n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for sweep in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a.get(i, j) * a.get(i, j);
            }
        }
        if math::sqrt(off) <= tol * scale {
            let vals = (0..n).map(|i| a.get(i, i)).collect();
            return Some((vals, v, sweep));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + math::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + math::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    None
}

/// Conjugate gradients for an SPD operator given as a closure.
pub(crate) fn conjugate_gradient<F>(
    apply: F,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Option<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let bnorm = math::norm2(b).max(f64::MIN_POSITIVE);
    let mut rr: f64 = r.iter().map(|v| v * v).sum();
    for _ in 0..max_iter {
        if math::sqrt(rr) <= tol * bnorm {
            return Some(x);
        }
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if !(pap > 0.0) {
            return None;
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    if math::sqrt(rr) <= tol * bnorm {
        Some(x)
    } else {
        None
    }
}
