//! Exceptional points.
//!
//! Two quasi-momenta of one branch coalesce where both `f(k)` and `f'(k)`
//! vanish. Eliminating `λ` leaves a condition on `k` alone,
//!
//! ```text
//! g(k) = (L+2) sin(Lk) cos((L+2)k) - L sin((L+2)k) cos(Lk)
//!      = sin(2(L+1)k) - (L+1) sin 2k,
//! ```
//!
//! and each nontrivial root gives `λ^{±1} = -sin((L+2)k) / sin(Lk)`. The
//! zeros of `g` at `k = 0` and `k = π/2` are triple and map to
//! `λ^{±1} = ∓(L+2)/L`, where the quasi-energies stay diagonalisable.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::ed::{exact_spectrum_raw, hamiltonian_matrix};
use crate::fermion::{
    canonical_sqrt, closest_pair, quasi_energies_matrix, sector_eigenvalues_raw, sector_matrix,
};
use crate::linalg::left_right_overlap;
use crate::roots::{deflated_newton, dedup, fold, near_trivial, seed_grid};
use crate::{Branch, Error, ModelParams, Result, Sector, C64};

/// Smallest and largest chain length accepted by [`find_eps`].
pub const MIN_EP_SIZE: usize = 4;
pub const MAX_EP_SIZE: usize = 64;

/// Largest chain length for the Hamiltonian-level check.
pub const MAX_HAMILTONIAN_CHECK_SIZE: usize = 10;

/// Default tolerance on the gap and the overlap at an EP.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-6;

/// Largest grid accepted by [`gap_landscape`] along either axis.
pub const MAX_GRID_POINTS: usize = 2048;

const TRIVIAL_RADIUS: f64 = 1e-6;
const DEDUP_TOL: f64 = 1e-8;
const SEED_IM_MAX: f64 = 1.0;
const REFINEMENTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    /// `|λ| < 1`.
    Inner,
    /// `|λ| > 1`.
    Outer,
}

impl Ring {
    pub fn of(lambda: C64) -> Self {
        if lambda.norm() < 1.0 {
            Ring::Inner
        } else {
            Ring::Outer
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Ring::Inner => "inner",
            Ring::Outer => "outer",
        }
    }
}

/// One exceptional point of a chain of given length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpRecord {
    /// Quasi-momentum of the coalescing pair, in the strip `0 <= Re k <= π/2`.
    pub k_ep: C64,
    pub lambda_ep: C64,
    pub branch: Branch,
    pub ring: Ring,
    /// Sign-free distance between the two closest quasi-energies at
    /// `lambda_ep`, from unmerged eigenvalues.
    pub quasi_gap: f64,
    /// Normalised left/right overlap of the coalescing pair.
    pub lr_overlap: f64,
    pub trivial: bool,
}

/// `(L+2) sin(Lk) cos((L+2)k) - L sin((L+2)k) cos(Lk)`.
pub fn ep_k_residual(k: C64, size: usize) -> C64 {
    let l = size as f64;
    let a = (l + 2.0) * k;
    let b = l * k;
    (l + 2.0) * b.sin() * a.cos() - l * a.sin() * b.cos()
}

/// Derivative of [`ep_k_residual`], `-4(L+1) sin(Lk) sin((L+2)k)`.
pub fn ep_k_residual_derivative(k: C64, size: usize) -> C64 {
    let l = size as f64;
    -4.0 * (l + 1.0) * (l * k).sin() * ((l + 2.0) * k).sin()
}

/// `-sin((L+2)k) / sin(Lk)`: the value of `λ^{±1}` that makes `k` a root.
pub fn lambda_from_k(k: C64, size: usize) -> C64 {
    let l = size as f64;
    -((l + 2.0) * k).sin() / (l * k).sin()
}

fn ep_scale(k: C64, l: f64) -> f64 {
    let y = k.im.abs();
    (2.0 * (l + 1.0) * y).cosh() + (l + 1.0) * (2.0 * y).cosh()
}

fn check_size(size: usize) -> Result<()> {
    if size % 2 == 1 || !(MIN_EP_SIZE..=MAX_EP_SIZE).contains(&size) {
        return Err(Error::InvalidParameter(format!(
            "EP search needs even {MIN_EP_SIZE} <= L <= {MAX_EP_SIZE}, got L = {size}"
        )));
    }
    Ok(())
}

fn ep_candidate(seed: C64, size: usize) -> Option<C64> {
    let l = size as f64;
    let eval = |k| (ep_k_residual(k, size), ep_k_residual_derivative(k, size));
    let k = deflated_newton(eval, 3.0, seed, 100);
    if !k.re.is_finite() || !k.im.is_finite() {
        return None;
    }
    if ep_k_residual(k, size).norm() > 1e-10 * ep_scale(k, l) {
        return None;
    }
    let k = fold(k);
    (!near_trivial(k, TRIVIAL_RADIUS)).then_some(k)
}

/// Polishes `(k, λ)` by Newton on `f(k) = f'(k) = 0` with `μ = λ` free.
fn polish_pair(k: C64, mu: C64, size: usize) -> (C64, C64) {
    let l = size as f64;
    let (mut k, mut mu) = (k, mu);
    for _ in 0..20 {
        let a = (l + 2.0) * k;
        let b = l * k;
        let f1 = a.sin() + mu * b.sin();
        let f2 = (l + 2.0) * a.cos() + l * mu * b.cos();
        let j11 = f2;
        let j12 = b.sin();
        let j21 = -(l + 2.0).powi(2) * a.sin() - l * l * mu * b.sin();
        let j22 = l * b.cos();
        let det = j11 * j22 - j12 * j21;
        if det.norm() == 0.0 {
            break;
        }
        let dk = (f1 * j22 - j12 * f2) / det;
        let dmu = (j11 * f2 - j21 * f1) / det;
        if !(dk.norm().is_finite() && dmu.norm().is_finite()) || dk.norm() > 1e-3 {
            break;
        }
        k -= dk;
        mu -= dmu;
        if dk.norm() <= 1e-16 * (1.0 + k.norm()) && dmu.norm() <= 1e-16 * (1.0 + mu.norm()) {
            break;
        }
    }
    (k, mu)
}

/// Zeroes a component below rounding level relative to `|z|`, so that EPs
/// on the imaginary axis sort and print as exactly imaginary.
fn snap(z: C64) -> C64 {
    let tiny = 1e-14 * z.norm();
    C64::new(
        if z.re.abs() < tiny { 0.0 } else { z.re },
        if z.im.abs() < tiny { 0.0 } else { z.im },
    )
}

/// The `L-2` nontrivial roots of [`ep_k_residual`] in the fundamental
/// strip, sorted by `(Re k, Im k)`.
pub fn ep_k_roots(size: usize) -> Result<Vec<C64>> {
    check_size(size)?;
    let expected = size - 2;
    let (mut nre, mut nim, mut im_max) = (8 * size, 16, SEED_IM_MAX);
    let mut roots = Vec::new();
    for attempt in 0..REFINEMENTS {
        if attempt > 0 {
            nre *= 2;
            nim *= 2;
            im_max *= 2.0;
        }
        let seeds = seed_grid(nre, nim, im_max);
        let found: Vec<(C64, usize)> = seeds
            .par_iter()
            .filter_map(|&s| ep_candidate(s, size).map(|k| (k, 1)))
            .collect();
        roots = dedup(found, DEDUP_TOL).into_iter().map(|r| r.0).collect::<Vec<_>>();
        if roots.len() == expected {
            break;
        }
    }
    if roots.len() != expected {
        return Err(Error::CensusMismatch {
            size,
            expected,
            found: roots,
        });
    }
    roots.sort_by(crate::fermion::lex_cmp);
    Ok(roots)
}

/// All `2L-4` exceptional points of a chain of length `L`, sorted by
/// `(Re λ, Im λ)`, with their matrix-level verification filled in.
pub fn find_eps(size: usize) -> Result<Vec<EpRecord>> {
    let ks = ep_k_roots(size)?;
    let mut records: Vec<EpRecord> = ks
        .par_iter()
        .flat_map_iter(|&k0| {
            let (k, mu) = polish_pair(k0, lambda_from_k(k0, size), size);
            let (k, mu) = (fold(k), snap(mu));
            [(Branch::Plus, mu), (Branch::Minus, mu.inv())].map(|(branch, lambda)| EpRecord {
                k_ep: k,
                lambda_ep: lambda,
                branch,
                ring: Ring::of(lambda),
                quasi_gap: f64::NAN,
                lr_overlap: f64::NAN,
                trivial: false,
            })
        })
        .collect();
    records.sort_by(|a, b| crate::fermion::lex_cmp(&a.lambda_ep, &b.lambda_ep));
    let distinct = dedup(records.iter().map(|r| (r.lambda_ep, 1)), DEDUP_TOL).len();
    if records.len() != 2 * size - 4 || distinct != records.len() {
        return Err(Error::CensusMismatch {
            size,
            expected: 2 * size - 4,
            found: records.iter().map(|r| r.lambda_ep).collect(),
        });
    }
    let checks: Vec<Result<MatrixCheck>> = records
        .par_iter()
        .map(|r| matrix_check(r.lambda_ep, size))
        .collect();
    for (r, c) in records.iter_mut().zip(checks) {
        let c = c?;
        r.quasi_gap = c.gap;
        r.lr_overlap = c.overlap;
    }
    Ok(records)
}

/// Coalescence measured on the quasi-energy matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixCheck {
    /// Sign-free distance between the closest two quasi-energies.
    pub gap: f64,
    /// Normalised left/right overlap of that pair, the larger of the two
    /// members' values.
    pub overlap: f64,
    pub pair: (C64, C64),
    pub sectors: (Sector, Sector),
}

/// Finds the closest pair of quasi-energies at `lambda` and measures the
/// left/right overlap of their eigenvectors in `CᵀC`.
pub fn matrix_check(lambda: C64, size: usize) -> Result<MatrixCheck> {
    let p = ModelParams::allow_odd(size, lambda)?;
    let mut a = Vec::with_capacity(size);
    let mut sectors = Vec::with_capacity(size);
    for sector in Sector::BOTH {
        for v in sector_eigenvalues_raw(&p, sector)? {
            a.push(v);
            sectors.push(sector);
        }
    }
    let eps: Vec<C64> = a.iter().map(|&v| canonical_sqrt(v)).collect();
    let (gap, i, j) = closest_pair(&eps).ok_or_else(|| {
        Error::InvalidParameter("need at least two quasi-energies".into())
    })?;
    let overlap_at = |sector: Sector, shift: C64| left_right_overlap(&sector_matrix(&p, sector), shift);
    let overlap = if sectors[i] == sectors[j] {
        overlap_at(sectors[i], (a[i] + a[j]) / 2.0)
    } else {
        overlap_at(sectors[i], a[i]).max(overlap_at(sectors[j], a[j]))
    };
    Ok(MatrixCheck {
        gap,
        overlap,
        pair: (eps[i], eps[j]),
        sectors: (sectors[i], sectors[j]),
    })
}

/// Coalescence measured on the full Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianCheck {
    /// Energies at which a pair of eigenvalues should coalesce: the sums
    /// over all modes except the coalescing quasi-energy pair.
    pub targets: Vec<C64>,
    /// Worst distance between the two eigenvalues nearest a target, over
    /// the targets whose overlap was measured.
    pub energy_gap: f64,
    /// Worst normalised left/right overlap over the measured targets.
    pub lr_overlap: f64,
    /// Number of targets, over all of them, at which two eigenvalues agree
    /// within the tolerance.
    pub coalescing_pairs: usize,
}

/// How far [`verify_ep`] goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Matrix,
    /// Also diagonalise the full Hamiltonian (`L <= 10`).
    Hamiltonian,
}

/// Verification of a candidate exceptional point.
#[derive(Debug, Clone, PartialEq)]
pub struct EpVerification {
    pub lambda: C64,
    pub size: usize,
    pub tol: f64,
    pub matrix: MatrixCheck,
    pub hamiltonian: Option<HamiltonianCheck>,
    pub passed: bool,
}

/// At most this many targets get the (costly) overlap measurement.
const MAX_OVERLAP_TARGETS: usize = 4;

fn hamiltonian_check(p: &ModelParams, tol: f64) -> Result<HamiltonianCheck> {
    let size = p.size();
    let q = quasi_energies_matrix(p)?;
    let (_, i, j) = q
        .closest_pair()
        .ok_or_else(|| Error::InvalidParameter("need at least two quasi-energies".into()))?;
    let others: Vec<C64> = q
        .epsilons()
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != i && m != j)
        .map(|(_, &e)| e)
        .collect();
    let mut targets = vec![C64::new(0.0, 0.0)];
    for &e in &others {
        targets = targets.iter().flat_map(|&t| [t + e, t - e]).collect();
    }

    let spectrum = exact_spectrum_raw(p)?;
    let nearest_two = |t: C64| {
        let mut d: Vec<(f64, C64)> = spectrum.iter().map(|&e| ((e - t).norm(), e)).collect();
        d.sort_by(|x, y| x.0.total_cmp(&y.0));
        (d[0].1, d[1].1)
    };
    let coalescing_pairs = targets
        .iter()
        .filter(|&&t| {
            let (x, y) = nearest_two(t);
            (x - y).norm() <= tol && (x - t).norm() <= tol
        })
        .count();

    let h: DMatrix<C64> = hamiltonian_matrix(p)?;
    let mut energy_gap: f64 = 0.0;
    let mut lr_overlap: f64 = 0.0;
    for &t in targets.iter().take(MAX_OVERLAP_TARGETS) {
        let (x, y) = nearest_two(t);
        energy_gap = energy_gap.max((x - y).norm());
        lr_overlap = lr_overlap.max(left_right_overlap(&h, (x + y) / 2.0));
    }
    debug_assert_eq!(targets.len(), 1 << (size - 2));
    Ok(HamiltonianCheck {
        targets,
        energy_gap,
        lr_overlap,
        coalescing_pairs,
    })
}

/// Checks that `lambda` is an exceptional point of the chain of length
/// `size`: the closest quasi-energy pair agrees within `tol` and its
/// normalised left/right overlap is below `tol`, and likewise for the
/// corresponding eigenvalue pairs of the Hamiltonian at
/// [`VerifyLevel::Hamiltonian`]. A failed check is reported, not returned
/// as an error.
pub fn verify_ep(lambda: C64, size: usize, tol: f64, level: VerifyLevel) -> Result<EpVerification> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let p = ModelParams::new(size, lambda)?;
    let matrix = matrix_check(lambda, size)?;
    let mut passed = matrix.gap <= tol && matrix.overlap <= tol;
    let hamiltonian = match level {
        VerifyLevel::Matrix => None,
        VerifyLevel::Hamiltonian => {
            if size > MAX_HAMILTONIAN_CHECK_SIZE {
                return Err(Error::Capacity {
                    what: "Hamiltonian-level EP verification",
                    max: MAX_HAMILTONIAN_CHECK_SIZE,
                    got: size,
                });
            }
            let h = hamiltonian_check(&p, tol)?;
            passed &= h.energy_gap <= tol && h.lr_overlap <= tol;
            Some(h)
        }
    };
    Ok(EpVerification {
        lambda,
        size,
        tol,
        matrix,
        hamiltonian,
        passed,
    })
}

/// Behaviour at one of the trivial roots `k = 0`, `k = π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrivialPointReport {
    pub lambda: C64,
    pub branch: Branch,
    pub k: C64,
    /// `|f(k)|` and `|f'(k)|` at the trivial root; both vanish, so `k` is a
    /// double root of the quasi-momentum condition.
    pub residual: f64,
    pub derivative_residual: f64,
    /// Quasi-energy of the mode at `k`, `sqrt(1 + λ² + 2λ cos 2k)`.
    pub quasi_energy: C64,
    /// Normalised left/right overlap of that mode.
    pub lr_overlap: f64,
    /// Closest-pair gap among all quasi-energies at `lambda`.
    pub quasi_gap: f64,
}

impl TrivialPointReport {
    /// The quasi-momentum condition is degenerate at this point.
    pub fn k_degenerate(&self, tol: f64) -> bool {
        self.residual <= tol && self.derivative_residual <= tol
    }

    /// An EP would need the overlap to vanish.
    pub fn is_ep(&self, tol: f64) -> bool {
        self.lr_overlap <= tol
    }
}

/// The four trivial points `λ^{±1} = ∓(L+2)/L` of a chain of length `L`,
/// in the order plus/`k = 0`, plus/`k = π/2`, minus/`k = 0`, minus/`k = π/2`.
pub fn trivial_points(size: usize) -> Result<Vec<TrivialPointReport>> {
    check_size(size)?;
    let l = size as f64;
    let r = (l + 2.0) / l;
    let mut out = Vec::with_capacity(4);
    for branch in Branch::BOTH {
        for (k, mu) in [(C64::new(0.0, 0.0), -r), (C64::new(FRAC_PI_2, 0.0), r)] {
            let mu = C64::new(mu, 0.0);
            let lambda = match branch {
                Branch::Plus => mu,
                Branch::Minus => mu.inv(),
            };
            let a = (l + 2.0) * k;
            let b = l * k;
            let f = a.sin() + mu * b.sin();
            let df = (l + 2.0) * a.cos() + l * mu * b.cos();
            let a_mode = C64::new(1.0, 0.0) + lambda * lambda + 2.0 * lambda * (2.0 * k).cos();
            let p = ModelParams::new(size, lambda)?;
            let lr_overlap = left_right_overlap(&sector_matrix(&p, branch.sector()), a_mode);
            let quasi_gap = matrix_check(lambda, size)?.gap;
            out.push(TrivialPointReport {
                lambda,
                branch,
                k,
                residual: f.norm(),
                derivative_residual: df.norm(),
                quasi_energy: canonical_sqrt(a_mode),
                lr_overlap,
                quasi_gap,
            });
        }
    }
    Ok(out)
}

/// Axis-aligned rectangle in the complex `λ` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl LambdaRect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite())
            && re_min <= re_max
            && im_min <= im_max;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "invalid rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// Point `(i, j)` of an inclusive `nx × ny` lattice.
    pub fn point(&self, i: usize, j: usize, nx: usize, ny: usize) -> C64 {
        let t = |n: usize, m: usize| if m <= 1 { 0.0 } else { n as f64 / (m - 1) as f64 };
        C64::new(
            self.re_min + (self.re_max - self.re_min) * t(i, nx),
            self.im_min + (self.im_max - self.im_min) * t(j, ny),
        )
    }
}

/// Validates a grid resolution against [`MAX_GRID_POINTS`].
pub fn check_resolution(nx: usize, ny: usize) -> Result<()> {
    if nx == 0 || ny == 0 || nx > MAX_GRID_POINTS || ny > MAX_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be between 1 and {MAX_GRID_POINTS} per axis, got {nx} x {ny}"
        )));
    }
    Ok(())
}

/// Closest-pair quasi-energy gap on a lattice of `λ` values.
#[derive(Debug, Clone, PartialEq)]
pub struct GapLandscape {
    pub size: usize,
    pub rect: LambdaRect,
    pub nx: usize,
    pub ny: usize,
    /// Row-major with the real part varying fastest; `None` where the
    /// eigensolver failed.
    pub gaps: Vec<Option<f64>>,
}

impl GapLandscape {
    pub fn lambda(&self, i: usize, j: usize) -> C64 {
        self.rect.point(i, j, self.nx, self.ny)
    }

    pub fn gap(&self, i: usize, j: usize) -> Option<f64> {
        self.gaps[j * self.nx + i]
    }

    /// Interior cells whose gap is strictly below all eight neighbours.
    pub fn local_minima(&self) -> Vec<(C64, f64)> {
        let mut out = Vec::new();
        for j in 1..self.ny.saturating_sub(1) {
            for i in 1..self.nx.saturating_sub(1) {
                let Some(g) = self.gap(i, j) else { continue };
                let lower = (j - 1..=j + 1).all(|jj| {
                    (i - 1..=i + 1).all(|ii| {
                        (ii == i && jj == j) || self.gap(ii, jj).is_some_and(|n| g < n)
                    })
                });
                if lower {
                    out.push((self.lambda(i, j), g));
                }
            }
        }
        out
    }
}

/// Smallest sign-free distance between two quasi-energies at every point
/// of an inclusive `nx × ny` lattice over `rect`.
pub fn gap_landscape(size: usize, rect: LambdaRect, nx: usize, ny: usize) -> Result<GapLandscape> {
    check_resolution(nx, ny)?;
    ModelParams::allow_odd(size, C64::new(0.0, 0.0))?;
    let gaps = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let lambda = rect.point(idx % nx, idx / nx, nx, ny);
            let p = ModelParams::allow_odd(size, lambda).ok()?;
            let mut eps = Vec::with_capacity(size);
            for sector in Sector::BOTH {
                eps.extend(sector_eigenvalues_raw(&p, sector).ok()?.into_iter().map(canonical_sqrt));
            }
            closest_pair(&eps).map(|c| c.0)
        })
        .collect();
    Ok(GapLandscape {
        size,
        rect,
        nx,
        ny,
        gaps,
    })
}

/// Distance from `lambda` to the nearest of `records`, for matching grid
/// minima against the census.
pub fn nearest_ep_distance(lambda: C64, records: &[EpRecord]) -> f64 {
    records
        .iter()
        .map(|r| (r.lambda_ep - lambda).norm())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn residual_vanishes_at_trivial_roots() {
        assert_eq!(ep_k_residual(C64::new(0.0, 0.0), 4).norm(), 0.0);
        assert!(ep_k_residual(C64::new(FRAC_PI_2, 0.0), 4).norm() < 1e-13);
    }

    #[test]
    fn residual_matches_simplified_form() {
        for (l, k) in [(4, C64::new(0.3, 0.2)), (10, C64::new(1.1, -0.05)), (7, C64::new(-0.4, 0.6))] {
            let lf = l as f64;
            let simple = (2.0 * (lf + 1.0) * k).sin() - (lf + 1.0) * (2.0 * k).sin();
            assert!((ep_k_residual(k, l) - simple).norm() < 1e-10 * (1.0 + simple.norm()));
            // derivative against a central difference
            let h = 1e-6;
            let fd = (ep_k_residual(k + h, l) - ep_k_residual(k - h, l)) / (2.0 * h);
            assert!((fd - ep_k_residual_derivative(k, l)).norm() < 1e-5 * (1.0 + fd.norm()));
        }
    }

    /// With `v = e^{2ik}` the EP condition is the polynomial
    /// `v^{2L+2} - (L+1) v^{L+2} + (L+1) v^L - 1`, whose roots are found
    /// here with the companion-matrix eigenvalues.
    #[test]
    fn roots_agree_with_polynomial_oracle() {
        for size in [4usize, 6, 8] {
            let n = 2 * size + 2;
            let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
            coeffs[0] = C64::new(-1.0, 0.0);
            coeffs[size] = C64::new(size as f64 + 1.0, 0.0);
            coeffs[size + 2] = C64::new(-(size as f64) - 1.0, 0.0);
            coeffs[n] = C64::new(1.0, 0.0);
            let companion = DMatrix::from_fn(n, n, |i, j| {
                if j == n - 1 {
                    -coeffs[i]
                } else if i == j + 1 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let vs = crate::linalg::eigenvalues(&companion).unwrap();
            let mut oracle: Vec<C64> = vs
                .iter()
                .map(|v| fold(-C64::i() * v.ln() / 2.0))
                .filter(|k| !near_trivial(*k, 1e-3))
                .collect();
            oracle = dedup(oracle.into_iter().map(|k| (k, 1)), 1e-6).into_iter().map(|r| r.0).collect();
            let roots = ep_k_roots(size).unwrap();
            assert_eq!(roots.len(), size - 2);
            assert_eq!(oracle.len(), size - 2, "{oracle:?}");
            for r in &roots {
                assert!(oracle.iter().any(|o| (o - r).norm() < 1e-7), "L={size}: {r}");
            }
        }
    }

    #[test]
    fn four_site_golden_values() {
        let recs = find_eps(4).unwrap();
        let mut got: Vec<C64> = recs.iter().map(|r| r.lambda_ep).collect();
        got.sort_by(|a, b| a.im.total_cmp(&b.im));
        let want = [-2.0, -0.5, 0.5, 2.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - C64::new(0.0, w)).norm() < 1e-12, "{g}");
        }
        for r in &recs {
            assert!((r.k_ep.re - PI / 4.0).abs() < 1e-12);
            assert!(r.quasi_gap < 1e-6 && r.lr_overlap < 1e-6, "{r:?}");
            assert_eq!(r.ring == Ring::Outer, r.branch == Branch::Plus);
        }
    }

    #[test]
    fn six_site_census_and_pairing() {
        let recs = find_eps(6).unwrap();
        assert_eq!(recs.len(), 8);
        assert_eq!(recs.iter().filter(|r| r.ring == Ring::Inner).count(), 4);
        for r in &recs {
            let inv = r.lambda_ep.inv();
            assert!(recs.iter().any(|s| (s.lambda_ep - inv).norm() < 1e-10));
            assert!(recs.iter().any(|s| (s.lambda_ep - r.lambda_ep.conj()).norm() < 1e-10));
            assert!(r.lambda_ep.re.abs() > 1e-3);
        }
    }

    #[test]
    fn off_ep_point_is_not_exceptional() {
        let v = verify_ep(C64::new(0.0, 1.9), 4, 1e-6, VerifyLevel::Hamiltonian).unwrap();
        assert!(!v.passed);
        assert!(v.matrix.gap > 1e-3);
        assert!(v.matrix.overlap > 1e-2);
    }

    #[test]
    fn hamiltonian_level_at_golden_ep() {
        let v = verify_ep(C64::new(0.0, 2.0), 4, 1e-6, VerifyLevel::Hamiltonian).unwrap();
        assert!(v.passed, "{v:?}");
        let h = v.hamiltonian.unwrap();
        assert_eq!(h.coalescing_pairs, 4);
    }

    #[test]
    fn trivial_points_are_double_roots_with_distinct_vectors() {
        for size in [4, 6] {
            for t in trivial_points(size).unwrap() {
                assert!(t.k_degenerate(1e-12), "{t:?}");
                assert!(!t.is_ep(0.1), "{t:?}");
                let l = size as f64;
                let want = match t.branch {
                    Branch::Plus => 2.0 / l,
                    Branch::Minus => 2.0 / (l + 2.0),
                };
                assert!((t.quasi_energy - C64::new(want, 0.0)).norm() < 1e-12, "{t:?}");
                // the mode is a genuine eigenvalue of its sector block
                let p = ModelParams::new(size, t.lambda).unwrap();
                let a = sector_eigenvalues_raw(&p, t.branch.sector()).unwrap();
                assert!(a.iter().any(|v| (v - t.quasi_energy * t.quasi_energy).norm() < 1e-10));
            }
        }
    }

    #[test]
    fn size_guard() {
        assert!(find_eps(2).is_err());
        assert!(find_eps(5).is_err());
        assert!(find_eps(66).is_err());
    }

    #[test]
    fn gap_landscape_minima_near_golden_values() {
        let rect = LambdaRect::new(-0.05, 0.05, -2.5, 2.5).unwrap();
        let g = gap_landscape(4, rect, 3, 101).unwrap();
        let axis: Vec<(f64, f64)> = (0..101).map(|j| (g.lambda(1, j).im, g.gap(1, j).unwrap())).collect();
        let mins: Vec<f64> = (1..100)
            .filter(|&j| axis[j].1 < axis[j - 1].1 && axis[j].1 < axis[j + 1].1)
            .map(|j| axis[j].0)
            .collect();
        for want in [-2.0, -0.5, 0.5, 2.0] {
            assert!(mins.iter().any(|m| (m - want).abs() < 1e-9), "{mins:?}");
        }
    }
}
