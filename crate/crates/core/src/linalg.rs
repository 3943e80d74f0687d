//! Dense complex eigenvalue routines.
//!
//! Eigenvalues come from balancing, Householder reduction to upper
//! Hessenberg form and the implicitly shifted single-shift QR iteration
//! (Wilkinson shifts, Ahues-Tisseur deflation). Eigenvectors are obtained
//! on demand by inverse iteration, which stays well defined at defective
//! eigenvalues where a full eigenvector basis does not exist.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::C64;

/// QR sweeps allowed per eigenvalue before giving up.
const SWEEPS_PER_EIGENVALUE: usize = 30;

/// Relative radius (times `max(1, ‖A‖∞)`) within which eigenvalues are
/// treated as one cluster by [`merge_clusters`].
///
/// A perturbed `2×2` Jordan block splits by `O(sqrt(ε‖A‖))`, i.e. about
/// `1e-8` relative in double precision, while the cluster mean is accurate
/// to `O(ε)`.
pub const CLUSTER_REL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("QR iteration did not converge after {sweeps} sweeps")]
pub struct NoConvergence {
    pub sweeps: usize,
}

#[inline]
fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Column-major `n × n` work array.
struct Work {
    n: usize,
    a: Vec<C64>,
}

impl Work {
    fn from_matrix(m: &DMatrix<C64>) -> Self {
        Self {
            n: m.nrows(),
            a: m.as_slice().to_vec(),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> C64 {
        self.a[j * self.n + i]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: C64) {
        self.a[j * self.n + i] = v;
    }
}

/// Largest absolute row sum.
pub fn inf_norm(a: &DMatrix<C64>) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Cluster radius used for `a`, see [`CLUSTER_REL`].
pub fn cluster_radius(a: &DMatrix<C64>) -> f64 {
    CLUSTER_REL * inf_norm(a).max(1.0)
}

/// All eigenvalues of a square complex matrix, in the order they deflate.
pub fn eigenvalues(a: &DMatrix<C64>) -> Result<Vec<C64>, NoConvergence> {
    assert!(a.is_square(), "eigenvalues of a non-square matrix");
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut w = Work::from_matrix(a);
    balance(&mut w);
    reduce_to_hessenberg(&mut w);
    hessenberg_qr(&mut w)
}

/// Diagonal similarity scaling by powers of two so that row and column
/// norms are comparable. Eigenvalues are unchanged.
fn balance(w: &mut Work) {
    const RADIX: f64 = 2.0;
    let n = w.n;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(w.at(j, i));
                    r += abs1(w.at(i, j));
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    let v = w.at(i, j) * inv;
                    w.set(i, j, v);
                }
                for j in 0..n {
                    let v = w.at(j, i) * f;
                    w.set(j, i, v);
                }
            }
        }
    }
}

fn reduce_to_hessenberg(w: &mut Work) {
    let n = w.n;
    if n < 3 {
        return;
    }
    let mut v = vec![C64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| w.at(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = w.at(k + 1, k);
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = w.at(i, k);
        }
        v[k + 1] -= alpha;
        let vn2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vn2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vn2;

        // A <- (I - β v vᴴ) A
        for j in k..n {
            let mut s = C64::new(0.0, 0.0);
            for i in k + 1..n {
                s += v[i].conj() * w.at(i, j);
            }
            s *= beta;
            for i in k + 1..n {
                let val = w.at(i, j) - v[i] * s;
                w.set(i, j, val);
            }
        }
        // A <- A (I - β v vᴴ)
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for j in k + 1..n {
                s += w.at(i, j) * v[j];
            }
            s *= beta;
            for j in k + 1..n {
                let val = w.at(i, j) - s * v[j].conj();
                w.set(i, j, val);
            }
        }
        w.set(k + 1, k, alpha);
        for i in k + 2..n {
            w.set(i, k, C64::new(0.0, 0.0));
        }
    }
}

/// Eigenvalue of the trailing `2×2` block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let plus = p + disc;
    let minus = p - disc;
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

fn hessenberg_qr(w: &mut Work) -> Result<Vec<C64>, NoConvergence> {
    let n = w.n;
    let ulp = f64::EPSILON;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / ulp);
    let mut eig = vec![C64::new(0.0, 0.0); n];
    let max_sweeps = SWEEPS_PER_EIGENVALUE * n.max(10);
    let mut sweeps = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;

    loop {
        if hi == 0 {
            eig[0] = w.at(0, 0);
            break;
        }

        // Look for a negligible subdiagonal entry in the active window.
        let mut l = hi;
        while l > 0 {
            let sub = abs1(w.at(l, l - 1));
            if sub <= smlnum {
                break;
            }
            let mut tst = abs1(w.at(l - 1, l - 1)) + abs1(w.at(l, l));
            if tst == 0.0 {
                if l >= 2 {
                    tst += w.at(l - 1, l - 2).re.abs();
                }
                if l + 1 <= hi {
                    tst += w.at(l + 1, l).re.abs();
                }
            }
            if sub <= ulp * tst {
                let ab = sub.max(abs1(w.at(l - 1, l)));
                let ba = sub.min(abs1(w.at(l - 1, l)));
                let diff = abs1(w.at(l - 1, l - 1) - w.at(l, l));
                let aa = abs1(w.at(l, l)).max(diff);
                let bb = abs1(w.at(l, l)).min(diff);
                let s = aa + ab;
                if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                    break;
                }
            }
            l -= 1;
        }
        if l > 0 {
            w.set(l, l - 1, C64::new(0.0, 0.0));
        }
        if l == hi {
            eig[hi] = w.at(hi, hi);
            hi -= 1;
            its = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(NoConvergence { sweeps });
        }

        let shift = if its == 10 {
            w.at(l, l) + 0.75 * w.at(l + 1, l).re.abs()
        } else if its == 20 {
            w.at(hi, hi) + 0.75 * w.at(hi, hi - 1).re.abs()
        } else {
            wilkinson_shift(
                w.at(hi - 1, hi - 1),
                w.at(hi - 1, hi),
                w.at(hi, hi - 1),
                w.at(hi, hi),
            )
        };

        // Bulge chase with Givens rotations on rows/columns l..=hi.
        let mut x = w.at(l, l) - shift;
        let mut y = w.at(l + 1, l);
        for k in l..hi {
            let r = x.norm().hypot(y.norm());
            let (c, s) = if r == 0.0 {
                (1.0, C64::new(0.0, 0.0))
            } else if x.norm() == 0.0 {
                (0.0, C64::new(1.0, 0.0))
            } else {
                let c = x.norm() / r;
                (c, x * y.conj() / (x.norm() * r))
            };
            let col0 = if k > l { k - 1 } else { l };
            for j in col0..=hi {
                let t1 = w.at(k, j);
                let t2 = w.at(k + 1, j);
                w.set(k, j, t1 * c + s * t2);
                w.set(k + 1, j, -s.conj() * t1 + t2 * c);
            }
            let row1 = (k + 2).min(hi);
            for i in l..=row1 {
                let t1 = w.at(i, k);
                let t2 = w.at(i, k + 1);
                w.set(i, k, t1 * c + s.conj() * t2);
                w.set(i, k + 1, -s * t1 + t2 * c);
            }
            if k + 1 < hi {
                x = w.at(k + 1, k);
                y = w.at(k + 2, k);
            }
        }
        its += 1;
        sweeps += 1;
    }
    Ok(eig)
}

/// Replaces every group of eigenvalues lying within `radius` of each other
/// (single linkage) by the group mean. Returns the number of groups with more
/// than one member.
pub fn merge_clusters(values: &mut [C64], radius: f64) -> usize {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if values[j].re - values[i].re > radius {
                break;
            }
            if (values[j] - values[i]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut sum = vec![C64::new(0.0, 0.0); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        sum[r] += values[i];
        count[r] += 1;
    }
    for i in 0..n {
        let r = find(&mut parent, i);
        if count[r] > 1 {
            values[i] = sum[r] / count[r] as f64;
        }
    }
    count.iter().filter(|&&c| c > 1).count()
}

/// Eigenvector of `a` for the eigenvalue nearest `mu`, by inverse iteration.
/// Normalised to unit 2-norm.
pub fn inverse_iteration(a: &DMatrix<C64>, mu: C64) -> DVector<C64> {
    let n = a.nrows();
    let scale = inf_norm(a).max(1.0);
    let mut shift = mu;
    let mut bump = f64::EPSILON * scale;
    let (shifted, lu) = loop {
        let shifted = a - DMatrix::<C64>::identity(n, n) * shift;
        let lu = shifted.clone().lu();
        if lu.is_invertible() {
            break (shifted, lu);
        }
        shift += C64::new(bump, bump);
        bump *= 2.0;
    };
    let mut x = DVector::from_fn(n, |i, _| C64::new(1.0, (i as f64 + 1.0) / (n as f64 + 1.0)));
    x /= C64::new(x.norm(), 0.0);
    // At a defective eigenvalue successive iterates alternate between the
    // eigenvector and the generalised eigenvector, so keep the iterate with
    // the smallest residual.
    let mut best = (f64::INFINITY, x.clone());
    for _ in 0..6 {
        match lu.solve(&x) {
            Some(y) if y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
                let norm = y.norm();
                if norm == 0.0 {
                    break;
                }
                x = y / C64::new(norm, 0.0);
                let residual = (&shifted * &x).norm();
                if residual < best.0 {
                    best = (residual, x.clone());
                }
            }
            _ => break,
        }
    }
    best.1
}

/// Normalised overlap `|⟨L|R⟩| / (‖L‖‖R‖)` between the left and right
/// eigenvectors of `a` at the eigenvalue nearest `mu`.
///
/// The left eigenvector satisfies `⟨L| a = μ ⟨L|`, i.e. it is the right
/// eigenvector of `aᴴ` for `conj(μ)`. The overlap vanishes at an
/// exceptional point and equals one for normal matrices.
pub fn left_right_overlap(a: &DMatrix<C64>, mu: C64) -> f64 {
    let right = inverse_iteration(a, mu);
    let left = inverse_iteration(&a.adjoint(), mu.conj());
    left.dotc(&right).norm() / (left.norm() * right.norm())
}
