//! Dense eigenproblems: cyclic Jacobi for symmetric matrices and a
//! balanced Hessenberg + Francis double-shift QR sweep for general real
//! matrices (eigenvalues only).

use super::mat::Mat;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One complex eigenvalue of a real matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Full eigenvalue set of a real square matrix, ordered by descending
/// real part, ties broken by descending imaginary part. Complex
/// eigenvalues of a real matrix appear in conjugate pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Eigenvalue>,
}

impl Spectrum {
    pub fn spectral_abscissa(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(f64::NEG_INFINITY, |m, e| m.max(e.re))
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

fn sort_eigenvalues(mut eigs: Vec<Eigenvalue>) -> Vec<Eigenvalue> {
    eigs.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    eigs
}

/// Real symmetric eigendecomposition `M = U Λ Uᵀ`.
///
/// Eigenvalues descend; `eigenvectors` holds the matching orthonormal
/// eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat,
}

impl SymEig {
    /// ‖UΛUᵀ − M‖_F, the reconstruction residual against `m`.
    pub fn reconstruction_residual(&self, m: &Mat) -> f64 {
        let u = &self.eigenvectors;
        let lam = Mat::diag(&self.eigenvalues);
        u.matmul(&lam).matmul(&u.transpose()).sub(m).frobenius()
    }
}

/// Iteration budget shared by both solvers, per the module contract.
fn sweep_cap(n: usize) -> usize {
    100 * n.max(1)
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// The input is symmetrized first; callers should ensure the symmetry
/// defect is within 1e-10·‖m‖_F for the contract to be meaningful.
pub fn eig_sym(m: &Mat) -> Result<SymEig> {
    if !m.is_square() {
        return Err(Error::dim("eig_sym requires a square matrix"));
    }
    if !m.is_finite() {
        return Err(Error::precondition("eig_sym: non-finite entries"));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(SymEig {
            eigenvalues: vec![],
            eigenvectors: Mat::zeros(0, 0),
        });
    }
    let mut a = m.symmetrize();
    let mut v = Mat::identity(n);
    let scale = a.frobenius().max(1.0);

    let off = |a: &Mat| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[(i, j)] * a[(i, j)];
            }
        }
        (2.0 * s).sqrt()
    };

    let cap = sweep_cap(n);
    let mut sweeps = 0;
    while off(&a) > 1e-14 * scale {
        sweeps += 1;
        if sweeps > cap {
            return Err(Error::NonConvergence {
                what: "Jacobi eigensolver".into(),
                iterations: cap,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A ← JᵀAJ with the rotation in the (p,q) plane
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                // exact zero by construction
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let eigenvectors = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SymEig {
        eigenvalues,
        eigenvectors,
    })
}

/// All eigenvalues of a general real square matrix.
///
/// Pipeline: radix-2 balancing, Householder reduction to upper
/// Hessenberg form, Francis double-shift QR with deflation. Balancing
/// and the similarity reductions leave the spectrum unchanged.
pub fn eig_general(m: &Mat) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::dim("eig_general requires a square matrix"));
    }
    if !m.is_finite() {
        return Err(Error::precondition("eig_general: non-finite entries"));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: vec![],
        });
    }
    let mut a = m.clone();
    balance(&mut a);
    hessenberg(&mut a);
    let eigs = hqr(&mut a)?;
    Ok(Spectrum {
        eigenvalues: sort_eigenvalues(eigs),
    })
}

/// Radix-2 balancing (Osborne). Similarity scaling only; exact in
/// floating point because the scale factors are powers of two.
fn balance(a: &mut Mat) {
    let n = a.rows;
    let radix: f64 = 2.0;
    let sqrdx = radix * radix;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / radix;
                let mut f = 1.0;
                let s = c + r;
                let mut c2 = c;
                while c2 < g {
                    f *= radix;
                    c2 *= sqrdx;
                }
                g = r * radix;
                while c2 > g {
                    f /= radix;
                    c2 /= sqrdx;
                }
                if (c2 + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= ginv;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Householder reduction to upper Hessenberg form (in place, no
/// transform accumulation — eigenvalues only).
fn hessenberg(a: &mut Mat) {
    let n = a.rows;
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal
        let mut alpha = 0.0f64;
        for i in (k + 1)..n {
            alpha = alpha.max(a[(i, k)].abs());
        }
        if alpha == 0.0 {
            continue;
        }
        let mut sigma = 0.0;
        let mut v = vec![0.0; n];
        for i in (k + 1)..n {
            v[i] = a[(i, k)] / alpha;
            sigma += v[i] * v[i];
        }
        let mut s = sigma.sqrt();
        if v[k + 1] < 0.0 {
            s = -s;
        }
        v[k + 1] += s;
        let beta = s * v[k + 1];
        if beta == 0.0 {
            continue;
        }
        // A ← (I − vvᵀ/β) A
        for j in 0..n {
            let mut dot = 0.0;
            for i in (k + 1)..n {
                dot += v[i] * a[(i, j)];
            }
            dot /= beta;
            for i in (k + 1)..n {
                a[(i, j)] -= dot * v[i];
            }
        }
        // A ← A (I − vvᵀ/β)
        for i in 0..n {
            let mut dot = 0.0;
            for j in (k + 1)..n {
                dot += a[(i, j)] * v[j];
            }
            dot /= beta;
            for j in (k + 1)..n {
                a[(i, j)] -= dot * v[j];
            }
        }
        a[(k + 1, k)] = -s * alpha;
        for i in (k + 2)..n {
            a[(i, k)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; returns the
/// eigenvalues. Ported from the classic EISPACK `hqr` with the crate's
/// iteration cap in place of the fixed per-eigenvalue limit.
fn hqr(a: &mut Mat) -> Result<Vec<Eigenvalue>> {
    let n = a.rows;
    let mut eigs: Vec<Eigenvalue> = Vec::with_capacity(n);
    let eps = f64::EPSILON;

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    if anorm == 0.0 {
        for _ in 0..n {
            eigs.push(Eigenvalue { re: 0.0, im: 0.0 });
        }
        return Ok(eigs);
    }

    let cap = sweep_cap(n);
    let mut total_its = 0usize;
    let mut t = 0.0;
    let mut nn = n as isize - 1;

    while nn >= 0 {
        let mut its = 0;
        loop {
            // search for a negligible subdiagonal element
            let mut l = nn;
            while l >= 1 {
                let s = a[((l - 1) as usize, (l - 1) as usize)].abs()
                    + a[(l as usize, l as usize)].abs();
                let s = if s == 0.0 { anorm } else { s };
                if a[(l as usize, (l - 1) as usize)].abs() <= eps * s {
                    a[(l as usize, (l - 1) as usize)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let x = a[(nn as usize, nn as usize)];
            if l == nn {
                // single real root
                eigs.push(Eigenvalue { re: x + t, im: 0.0 });
                nn -= 1;
                break;
            }
            let y = a[((nn - 1) as usize, (nn - 1) as usize)];
            let w = a[(nn as usize, (nn - 1) as usize)] * a[((nn - 1) as usize, nn as usize)];
            if l == nn - 1 {
                // a 2×2 block: one real pair or one conjugate pair
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x = x + t;
                if q >= 0.0 {
                    let z = p + z.copysign(if p == 0.0 { 1.0 } else { p });
                    let r1 = x + z;
                    let r2 = if z != 0.0 { x - w / z } else { x };
                    eigs.push(Eigenvalue { re: r1, im: 0.0 });
                    eigs.push(Eigenvalue { re: r2, im: 0.0 });
                } else {
                    eigs.push(Eigenvalue { re: x + p, im: z });
                    eigs.push(Eigenvalue { re: x + p, im: -z });
                }
                nn -= 2;
                break;
            }
            // no convergence yet: QR sweep
            total_its += 1;
            if total_its > cap {
                return Err(Error::NonConvergence {
                    what: "Hessenberg QR eigensolver".into(),
                    iterations: cap,
                });
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its == 10 || its == 20 {
                // exceptional shift
                t += x;
                for i in 0..=(nn as usize) {
                    a[(i, i)] -= x;
                }
                let s = a[(nn as usize, (nn - 1) as usize)].abs()
                    + a[((nn - 1) as usize, (nn - 2) as usize)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // look for two consecutive small subdiagonal elements
            let mut m = nn - 2;
            let (mut p, mut q, mut r) = (0.0f64, 0.0f64, 0.0f64);
            while m >= l {
                let z = a[(m as usize, m as usize)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[((m + 1) as usize, m as usize)] + a[(m as usize, (m + 1) as usize)];
                q = a[((m + 1) as usize, (m + 1) as usize)] - z - rr - ss;
                r = a[((m + 2) as usize, (m + 1) as usize)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m as usize, (m - 1) as usize)].abs() * (q.abs() + r.abs());
                let v = p.abs()
                    * (a[((m - 1) as usize, (m - 1) as usize)].abs()
                        + a[(m as usize, m as usize)].abs()
                        + a[((m + 1) as usize, (m + 1) as usize)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[(i as usize, (i - 2) as usize)] = 0.0;
            }
            for i in (m + 3)..=nn {
                a[(i as usize, (i - 3) as usize)] = 0.0;
            }
            // double QR step on rows l..=nn and columns m..=nn
            for k in m..nn {
                if k != m {
                    p = a[(k as usize, (k - 1) as usize)];
                    q = a[((k + 1) as usize, (k - 1) as usize)];
                    r = if k != nn - 1 {
                        a[((k + 2) as usize, (k - 1) as usize)]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(if p == 0.0 { 1.0 } else { p });
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        let v = a[(k as usize, (k - 1) as usize)];
                        a[(k as usize, (k - 1) as usize)] = -v;
                    }
                } else {
                    a[(k as usize, (k - 1) as usize)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                // row modification
                for j in (k as usize)..=(nn as usize) {
                    let mut pp = a[(k as usize, j)] + q * a[((k + 1) as usize, j)];
                    if k != nn - 1 {
                        pp += r * a[((k + 2) as usize, j)];
                        a[((k + 2) as usize, j)] -= pp * z;
                    }
                    a[((k + 1) as usize, j)] -= pp * y;
                    a[(k as usize, j)] -= pp * x;
                }
                // column modification
                let mmin = nn.min(k + 3);
                for i in (l as usize)..=(mmin as usize) {
                    let mut pp = x * a[(i, k as usize)] + y * a[(i, (k + 1) as usize)];
                    if k != nn - 1 {
                        pp += z * a[(i, (k + 2) as usize)];
                        a[(i, (k + 2) as usize)] -= pp * r;
                    }
                    a[(i, (k + 1) as usize)] -= pp * q;
                    a[(i, k as usize)] -= pp;
                }
            }
        }
    }
    Ok(eigs)
}
