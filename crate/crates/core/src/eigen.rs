//! Dense symmetric eigenvalues: Householder reduction to tridiagonal form
//! followed by implicit QL iteration. Eigenvectors are never formed.

use crate::error::{LabError, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Eigenvalues of the symmetric `n x n` row-major matrix, sorted descending.
///
/// Only the lower triangle is read.
pub fn symmetric_eigenvalues(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    if matrix.len() != n * n {
        return Err(LabError::InvalidDimension(format!(
            "expected {} entries for n = {n}, got {}",
            n * n,
            matrix.len()
        )));
    }
    for i in 0..n {
        for j in 0..=i {
            if !matrix[i * n + j].is_finite() {
                return Err(LabError::NumericInput { row: i, col: j });
            }
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut work = matrix.to_vec();
    let (mut diag, mut off) = tridiagonalize(&mut work, n);
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(diag)
}

/// Reduces the lower triangle of `a` in place; returns `(diagonal, subdiagonal)`
/// with the subdiagonal padded by a trailing zero to length `n`.
pub fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut off = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let base = k + 1;
        let alpha = a[base * n + k];
        let mut sigma = 0.0;
        for t in 1..m {
            let x = a[(base + t) * n + k];
            sigma += x * x;
        }
        if sigma == 0.0 {
            off[k] = alpha;
            continue;
        }
        let norm = (alpha * alpha + sigma).sqrt();
        let beta = if alpha >= 0.0 { -norm } else { norm };
        let tau = (beta - alpha) / beta;
        let scale = 1.0 / (alpha - beta);
        off[k] = beta;

        let v = &mut v[..m];
        let p = &mut p[..m];
        v[0] = 1.0;
        for t in 1..m {
            v[t] = a[(base + t) * n + k] * scale;
        }

        // p = tau * A22 * v from the lower triangle.
        p.fill(0.0);
        for i in 0..m {
            let row = &a[(base + i) * n + base..(base + i) * n + base + i + 1];
            let vi = v[i];
            let (strict, diag) = row.split_at(i);
            let mut acc = diag[0] * vi;
            for ((pj, &aij), &vj) in p[..i].iter_mut().zip(strict).zip(&v[..i]) {
                acc += aij * vj;
                *pj += aij * vi;
            }
            p[i] += acc;
        }
        let mut pv = 0.0;
        for (pi, &vi) in p.iter_mut().zip(v.iter()) {
            *pi *= tau;
            pv += *pi * vi;
        }
        let half = 0.5 * tau * pv;
        for (pi, &vi) in p.iter_mut().zip(v.iter()) {
            *pi -= half * vi;
        }

        // A22 -= v w^T + w v^T, lower triangle only.
        let w = &*p;
        for i in 0..m {
            let row = &mut a[(base + i) * n + base..(base + i) * n + base + i + 1];
            let vi = v[i];
            let wi = w[i];
            for ((aij, &vj), &wj) in row.iter_mut().zip(&v[..=i]).zip(&w[..=i]) {
                *aij -= vi * wj + wi * vj;
            }
        }
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    (diag, off)
}

/// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
/// `off[i]` couples `diag[i]` and `diag[i + 1]`; on return `diag` holds the
/// eigenvalues in no particular order.
pub fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(LabError::Domain(
                    "tridiagonal QL iteration failed to converge".into(),
                ));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
