//! Large-`L` behaviour of the exceptional points.
//!
//! As `L -> ∞` the EPs approach the `L`th roots of unity other than `±1`,
//! one ring from inside the unit circle and one from outside.

use std::f64::consts::{PI, TAU};

use crate::ep::{find_eps, EpRecord, Ring};
use crate::{Branch, Error, Result, C64};

/// The `L`th roots of unity without `±1`, in order of angle `2πj/L`.
pub fn roots_of_unity_prediction(size: usize) -> Result<Vec<C64>> {
    if size < 4 || size % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "the prediction needs even L >= 4, got L = {size}"
        )));
    }
    Ok((1..size)
        .filter(|&j| 2 * j != size)
        .map(|j| C64::from_polar(1.0, TAU * j as f64 / size as f64))
        .collect())
}

/// Distance between two angles on the circle.
fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d) + 0.0
}

/// Finite-size distance of the EP rings from the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct RingConvergenceReport {
    pub size: usize,
    /// `max(1 - |λ|)` over the inner ring.
    pub inner_max_dev: f64,
    /// `max(|λ| - 1)` over the outer ring.
    pub outer_max_dev: f64,
    /// For each record, in census order, the angle `2πj/L` of the nearest
    /// predicted root, in `[0, 2π)`.
    pub predicted_angles: Vec<f64>,
    /// Angular distance from each record to its predicted root.
    pub angle_errors: Vec<f64>,
    /// Records whose angle error exceeds `π/L`.
    pub unmatched: Vec<bool>,
    /// Every inner record has `|λ| < 1` and every outer one `|λ| > 1`.
    pub two_sided: bool,
    /// Branch populating each ring, if it is a single one.
    pub inner_branch: Option<Branch>,
    pub outer_branch: Option<Branch>,
    pub records: Vec<EpRecord>,
}

impl RingConvergenceReport {
    pub fn max_angle_error(&self) -> f64 {
        self.angle_errors.iter().copied().fold(0.0, f64::max)
    }

    pub fn unmatched_count(&self) -> usize {
        self.unmatched.iter().filter(|&&u| u).count()
    }
}

/// Runs the census for `size` and compares it with the prediction.
pub fn convergence_report(size: usize) -> Result<RingConvergenceReport> {
    let records = find_eps(size)?;
    report_from_records(size, records)
}

/// Builds the report from an existing census.
pub fn report_from_records(size: usize, records: Vec<EpRecord>) -> Result<RingConvergenceReport> {
    let predicted = roots_of_unity_prediction(size)?;
    let angles: Vec<f64> = predicted.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
    let mut predicted_angles = Vec::with_capacity(records.len());
    let mut angle_errors = Vec::with_capacity(records.len());
    for r in &records {
        let theta = r.lambda_ep.arg();
        let (best, err) = angles
            .iter()
            .map(|&a| (a, angle_distance(theta, a)))
            .fold((f64::NAN, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        predicted_angles.push(best);
        angle_errors.push(err);
    }
    let unmatched = angle_errors.iter().map(|&e| e > PI / size as f64).collect();

    let mut inner_max_dev: f64 = 0.0;
    let mut outer_max_dev: f64 = 0.0;
    let mut two_sided = true;
    for r in &records {
        let radius = r.lambda_ep.norm();
        match r.ring {
            Ring::Inner => {
                inner_max_dev = inner_max_dev.max(1.0 - radius);
                two_sided &= radius < 1.0;
            }
            Ring::Outer => {
                outer_max_dev = outer_max_dev.max(radius - 1.0);
                two_sided &= radius > 1.0;
            }
        }
    }
    let single_branch = |ring: Ring| {
        let mut it = records.iter().filter(|r| r.ring == ring).map(|r| r.branch);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    };
    Ok(RingConvergenceReport {
        size,
        inner_max_dev,
        outer_max_dev,
        predicted_angles,
        angle_errors,
        unmatched,
        two_sided,
        inner_branch: single_branch(Ring::Inner),
        outer_branch: single_branch(Ring::Outer),
        records,
    })
}

/// Least-squares slopes of `ln(deviation)` against `ln L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub inner_slope: f64,
    pub outer_slope: f64,
}

/// Fits the convergence rate of both rings. Needs at least two distinct
/// sizes.
pub fn fit_rates(reports: &[RingConvergenceReport]) -> Option<RateFit> {
    let slope = |dev: &dyn Fn(&RingConvergenceReport) -> f64| {
        let pts: Vec<(f64, f64)> = reports
            .iter()
            .filter(|r| dev(r) > 0.0)
            .map(|r| ((r.size as f64).ln(), dev(r).ln()))
            .collect();
        let n = pts.len() as f64;
        if pts.len() < 2 {
            return None;
        }
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    };
    Some(RateFit {
        inner_slope: slope(&|r| r.inner_max_dev)?,
        outer_slope: slope(&|r| r.outer_max_dev)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prediction_examples() {
        let p4 = roots_of_unity_prediction(4).unwrap();
        assert_eq!(p4.len(), 2);
        assert!((p4[0] - C64::i()).norm() < 1e-15 && (p4[1] + C64::i()).norm() < 1e-15);
        let p8 = roots_of_unity_prediction(8).unwrap();
        assert_eq!(p8.len(), 6);
        assert!(p8.iter().any(|z| (z - C64::i()).norm() < 1e-15));
        assert!(p8.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15 && (z.im.abs() > 1e-12)));
        assert!(roots_of_unity_prediction(3).is_err());
    }

    #[test]
    fn four_site_deviations() {
        let r = convergence_report(4).unwrap();
        assert!((r.inner_max_dev - 0.5).abs() < 1e-12);
        assert!((r.outer_max_dev - 1.0).abs() < 1e-12);
        assert!(r.two_sided);
        assert_eq!(r.unmatched_count(), 0);
        assert_eq!(r.inner_branch, Some(Branch::Minus));
        assert_eq!(r.outer_branch, Some(Branch::Plus));
    }

    #[test]
    fn deviations_shrink_from_8_to_16() {
        let a = convergence_report(8).unwrap();
        let b = convergence_report(16).unwrap();
        assert!(b.inner_max_dev < a.inner_max_dev);
        assert!(b.outer_max_dev < a.outer_max_dev);
        let fit = fit_rates(&[a, b]).unwrap();
        assert!(fit.inner_slope < 0.0 && fit.outer_slope < 0.0);
    }

    #[test]
    fn angle_distance_wraps() {
        assert!((angle_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
        assert!((angle_distance(-PI / 2.0, 3.0 * PI / 2.0)).abs() < 1e-12);
    }
}
