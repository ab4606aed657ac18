//! Dense eigen-decomposition of small real symmetric tridiagonal matrices.
//!
//! Implicit QL iteration with Wilkinson-style shifts, accumulating the
//! plane rotations into an identity matrix so that eigenvectors come out
//! alongside eigenvalues. Both the Mathieu recurrence matrices and the
//! charge-basis Hamiltonian are tridiagonal, so nothing heavier is needed.

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenpairs sorted by ascending eigenvalue. `vectors[k]` belongs to
/// `values[k]` and has unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Diagonalize the symmetric tridiagonal matrix with main diagonal `diag`
/// and first off-diagonal `off` (`off[i]` couples rows `i` and `i + 1`).
pub fn eigh_tridiagonal(diag: &[f64], off: &[f64]) -> Result<TridiagonalEigen> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::domain("empty tridiagonal matrix"));
    }
    if off.len() + 1 != n {
        return Err(Error::domain(format!(
            "off-diagonal has {} entries, expected {}",
            off.len(),
            n - 1
        )));
    }
    if diag.iter().chain(off).any(|x| !x.is_finite()) {
        return Err(Error::domain("tridiagonal matrix has non-finite entries"));
    }

    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    // z[row][col]; column k ends up as the eigenvector of d[k]
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::convergence(format!(
                    "tridiagonal QL did not converge for eigenvalue {l} after {MAX_SWEEPS_PER_EIGENVALUE} sweeps"
                )));
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let zf = row[i + 1];
                    row[i + 1] = s * row[i] + c * zf;
                    row[i] = c * row[i] - s * zf;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| z.iter().map(|row| row[k]).collect())
        .collect();
    Ok(TridiagonalEigen { values, vectors })
}

/// Flip `v` so that its largest-magnitude component is positive. Ties go to
/// the lowest index.
pub fn fix_sign_by_largest(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// `max_i |(T v)_i - lambda v_i|` for the tridiagonal `T = (diag, off)`.
pub fn residual_inf(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut tv = diag[i] * v[i];
            if i > 0 {
                tv += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                tv += off[i] * v[i + 1];
            }
            (tv - lambda * v[i]).abs()
        })
        .fold(0.0, f64::max)
}
