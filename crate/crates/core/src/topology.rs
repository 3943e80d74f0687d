//! Winding-number phase diagram.
//!
//! The Bloch symbol of the bulk chain is `h(k) = e^{ik} + λ e^{-ik}`. It
//! vanishes for some real `k` exactly when `|λ| = 1`, and its winding
//! number about the origin is `+1` inside the unit circle and `-1` outside.

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;

use crate::ep::{check_resolution, LambdaRect};
use crate::{Error, Result, C64};

/// Half-width of the band around `|λ| = 1` where no winding is assigned.
pub const BOUNDARY_BAND: f64 = 1e-3;

/// Smallest momentum discretisation accepted.
pub const MIN_SAMPLES: usize = 64;

/// Largest allowed distance of the accumulated winding from an integer.
pub const ROUNDING_TOL: f64 = 0.01;

const MAX_BISECTION_DEPTH: u32 = 40;

/// `e^{ik} + λ e^{-ik}`.
pub fn bloch_symbol(lambda: C64, k: f64) -> C64 {
    C64::from_polar(1.0, k) + lambda * C64::from_polar(1.0, -k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseStatus {
    Ok,
    /// `||λ| - 1| <= BOUNDARY_BAND`.
    Boundary,
    /// The symbol came too close to zero or the winding did not round
    /// cleanly.
    IllDefined,
}

impl PhaseStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseStatus::Ok => "ok",
            PhaseStatus::Boundary => "boundary",
            PhaseStatus::IllDefined => "ill_defined",
        }
    }
}

/// Winding number at one `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample {
    pub lambda: C64,
    /// `None` unless `status` is [`PhaseStatus::Ok`].
    pub winding: Option<i32>,
    /// Symbol evaluations, including adaptive refinements.
    pub samples_used: usize,
    pub status: PhaseStatus,
}

/// Phase accumulated by `h` from `k0` to `k1`, bisecting while a single
/// increment exceeds `π/2`. `None` if `h` vanishes on the way.
fn accumulate(lambda: C64, k0: f64, h0: C64, k1: f64, h1: C64, depth: u32, evals: &mut usize) -> Option<f64> {
    let step = (h1 / h0).arg();
    if step.abs() <= FRAC_PI_2 {
        return Some(step);
    }
    if depth == MAX_BISECTION_DEPTH {
        return None;
    }
    let km = 0.5 * (k0 + k1);
    let hm = bloch_symbol(lambda, km);
    *evals += 1;
    if hm.norm() <= f64::EPSILON * (1.0 + lambda.norm()) {
        return None;
    }
    Some(
        accumulate(lambda, k0, h0, km, hm, depth + 1, evals)?
            + accumulate(lambda, km, hm, k1, h1, depth + 1, evals)?,
    )
}

/// Winding number of the Bloch symbol at `lambda`, from `n_k` uniform
/// momentum steps with adaptive refinement.
pub fn winding_number(lambda: C64, n_k: usize) -> Result<PhaseSample> {
    if n_k < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SAMPLES} momentum samples, got {n_k}"
        )));
    }
    if !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda must be finite, got {lambda}")));
    }
    if (lambda.norm() - 1.0).abs() <= BOUNDARY_BAND {
        return Ok(PhaseSample {
            lambda,
            winding: None,
            samples_used: 0,
            status: PhaseStatus::Boundary,
        });
    }
    let ill = |samples_used| PhaseSample {
        lambda,
        winding: None,
        samples_used,
        status: PhaseStatus::IllDefined,
    };
    let floor = f64::EPSILON * (1.0 + lambda.norm());
    let ks: Vec<f64> = (0..=n_k).map(|m| TAU * m as f64 / n_k as f64).collect();
    let hs: Vec<C64> = ks.iter().map(|&k| bloch_symbol(lambda, k)).collect();
    let mut evals = n_k;
    if hs.iter().any(|h| h.norm() <= floor) {
        return Ok(ill(evals));
    }
    let mut total = 0.0;
    for m in 0..n_k {
        match accumulate(lambda, ks[m], hs[m], ks[m + 1], hs[m + 1], 0, &mut evals) {
            Some(phase) => total += phase,
            None => return Ok(ill(evals)),
        }
    }
    let w = total / TAU;
    let rounded = w.round();
    if (w - rounded).abs() >= ROUNDING_TOL {
        return Ok(ill(evals));
    }
    Ok(PhaseSample {
        lambda,
        winding: Some(rounded as i32),
        samples_used: evals,
        status: PhaseStatus::Ok,
    })
}

/// Winding numbers on an inclusive `nx × ny` lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub rect: LambdaRect,
    pub nx: usize,
    pub ny: usize,
    pub n_k: usize,
    /// Row-major with the real part varying fastest.
    pub samples: Vec<PhaseSample>,
}

pub fn phase_diagram(rect: LambdaRect, nx: usize, ny: usize, n_k: usize) -> Result<PhaseDiagram> {
    check_resolution(nx, ny)?;
    let samples = (0..nx * ny)
        .into_par_iter()
        .map(|idx| winding_number(rect.point(idx % nx, idx / nx, nx, ny), n_k))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseDiagram {
        rect,
        nx,
        ny,
        n_k,
        samples,
    })
}
