//! Newton iteration helpers for the trigonometric root problems.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::C64;

/// Largest Newton step, to keep iterates from jumping between basins.
const MAX_STEP: f64 = 0.5;

/// Roots whose real part is this close to `0` or `π/2` count as lying on
/// the edge of the fundamental domain.
const EDGE: f64 = 1e-12;

/// Folds `k` into the strip `0 <= Re k <= π/2` using `k -> k + π` and
/// `k -> -k`. On the two edges the representative with `Im k >= 0` is
/// chosen.
pub(crate) fn fold(k: C64) -> C64 {
    let mut re = k.re.rem_euclid(PI);
    let mut im = k.im;
    if re > FRAC_PI_2 {
        re = PI - re;
        im = -im;
    }
    if (re < EDGE || FRAC_PI_2 - re < EDGE) && im < 0.0 {
        im = -im;
    }
    C64::new(re, im)
}

/// `true` if a folded `k` lies within `radius` of `0` or `π/2`.
pub(crate) fn near_trivial(k: C64, radius: f64) -> bool {
    k.norm() < radius || (k - C64::new(FRAC_PI_2, 0.0)).norm() < radius
}

/// Newton iteration on `f(k) / sin(2k)^power`.
///
/// `eval` returns `(f, f')`. Dividing out the known zeros of `sin(2k)` at
/// `0` and `π/2` keeps iterates from converging onto them.
pub(crate) fn deflated_newton(
    eval: impl Fn(C64) -> (C64, C64),
    power: f64,
    start: C64,
    max_iter: usize,
) -> C64 {
    let mut k = start;
    for _ in 0..max_iter {
        let (f, df) = eval(k);
        if f == C64::new(0.0, 0.0) {
            break;
        }
        let denom = if power == 0.0 {
            df
        } else {
            let s = (2.0 * k).sin();
            if s == C64::new(0.0, 0.0) {
                break;
            }
            df - f * (2.0 * power) * ((2.0 * k).cos() / s)
        };
        if denom == C64::new(0.0, 0.0) {
            break;
        }
        let mut step = f / denom;
        let len = step.norm();
        if !len.is_finite() {
            break;
        }
        if len > MAX_STEP {
            step *= MAX_STEP / len;
        }
        k -= step;
        if len <= 1e-15 * (1.0 + k.norm()) {
            break;
        }
    }
    k
}

/// Cell centres of an `nre × nim` grid over `[0, π/2] × [-im_max, im_max]`.
pub(crate) fn seed_grid(nre: usize, nim: usize, im_max: f64) -> Vec<C64> {
    let dre = FRAC_PI_2 / nre as f64;
    let dim = 2.0 * im_max / nim as f64;
    (0..nre)
        .flat_map(|i| {
            (0..nim).map(move |j| C64::new((i as f64 + 0.5) * dre, -im_max + (j as f64 + 0.5) * dim))
        })
        .collect()
}

/// Merges candidates within `tol` of each other (after folding), keeping the
/// first representative and the largest multiplicity. Output order follows
/// first appearance.
pub(crate) fn dedup(candidates: impl IntoIterator<Item = (C64, usize)>, tol: f64) -> Vec<(C64, usize)> {
    let mut out: Vec<(C64, usize)> = Vec::new();
    for (k, mult) in candidates {
        match out.iter_mut().find(|(r, _)| (*r - k).norm() <= tol) {
            Some(existing) => {
                if mult > existing.1 {
                    *existing = (k, mult);
                }
            }
            None => out.push((k, mult)),
        }
    }
    out
}
