//! Quasi-momenta and the second route to the quasi-energies.
//!
//! Each branch `μ = λ^{±1}` contributes the roots of
//!
//! ```text
//! f(k) = sin((L+2)k) + μ sin(Lk)
//! ```
//!
//! other than the trivial zeros at `k = 0` and `k = π/2`. The quasi-energy of
//! a root is `ε = (1+λ) sqrt(1 - (1-γ²) sin²k)`, equivalently
//! `ε² = 1 + λ² + 2λ cos 2k`. Roots are reported in the strip
//! `0 <= Re k <= π/2`, which is a fundamental domain for the symmetries
//! `k -> -k`, `k -> k + π` and `k -> π - k` of `ε`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::fermion::{
    canonicalize, quasi_energies_matrix, QuasiEnergySet, QuasiSource,
};
use crate::matching::{match_values, Metric};
use crate::roots::{deflated_newton, dedup, fold, near_trivial, seed_grid};
use crate::{Branch, Error, GammaParams, ModelParams, Result, Sector, C64};

/// Roots closer than this to `0` or `π/2` are treated as trivial.
pub const TRIVIAL_RADIUS: f64 = 1e-6;

/// Distinct roots closer than this in `k` are merged.
pub const DEDUP_TOL: f64 = 1e-8;

const NEWTON_ITERS: usize = 100;
const REFINEMENTS: usize = 3;

/// One root of the quasi-momentum condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiMomentum {
    pub k: C64,
    pub branch: Branch,
    /// 2 at an exceptional point, where two quasi-momenta coincide.
    pub multiplicity: usize,
}

/// `sin((L+2)k) + λ^{±1} sin(Lk)`.
pub fn k_residual(k: C64, p: &ModelParams, branch: Branch) -> Result<C64> {
    let mu = branch.coupling(p.lambda())?;
    Ok(residual(k, p.size() as f64, mu).0)
}

/// Derivative of [`k_residual`] in `k`.
pub fn k_residual_derivative(k: C64, p: &ModelParams, branch: Branch) -> Result<C64> {
    let mu = branch.coupling(p.lambda())?;
    Ok(residual(k, p.size() as f64, mu).1)
}

fn residual(k: C64, l: f64, mu: C64) -> (C64, C64) {
    let a = (l + 2.0) * k;
    let b = l * k;
    (
        a.sin() + mu * b.sin(),
        (l + 2.0) * a.cos() + l * mu * b.cos(),
    )
}

fn second_derivative(k: C64, l: f64, mu: C64) -> C64 {
    let a = (l + 2.0) * k;
    let b = l * k;
    -(l + 2.0).powi(2) * a.sin() - l * l * mu * b.sin()
}

/// Upper bound on the size of the terms of `f`, used for relative
/// residual tests.
fn residual_scale(k: C64, l: f64, mu: C64) -> f64 {
    let y = k.im.abs();
    ((l + 2.0) * y).cosh() + mu.norm() * (l * y).cosh()
}

fn derivative_scale(k: C64, l: f64, mu: C64) -> f64 {
    let y = k.im.abs();
    (l + 2.0) * ((l + 2.0) * y).cosh() + l * mu.norm() * (l * y).cosh()
}

/// Seed lattice for the Newton search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedGrid {
    pub re_points: usize,
    pub im_points: usize,
    pub im_max: f64,
}

impl SeedGrid {
    /// `8L × 16` seeds with `|Im k| <= 1 + |ln|λ||/L`.
    pub fn for_model(p: &ModelParams) -> Self {
        let l = p.size() as f64;
        Self {
            re_points: 8 * p.size(),
            im_points: 16,
            im_max: 1.0 + p.lambda().norm().ln().abs() / l,
        }
    }

    fn refined(self) -> Self {
        Self {
            re_points: 2 * self.re_points,
            im_points: 2 * self.im_points,
            im_max: 2.0 * self.im_max,
        }
    }
}

/// Converges one seed and classifies the result as a simple or double root.
fn polish(seed: C64, l: f64, mu: C64) -> Option<(C64, usize)> {
    let k = deflated_newton(|k| residual(k, l, mu), 1.0, seed, NEWTON_ITERS);
    if !k.re.is_finite() || !k.im.is_finite() {
        return None;
    }
    let (f, df) = residual(k, l, mu);
    if f.norm() > 1e-10 * residual_scale(k, l, mu) {
        return None;
    }
    let k = fold(k);
    if near_trivial(k, TRIVIAL_RADIUS) {
        return None;
    }
    if df.norm() <= 1e-4 * derivative_scale(k, l, mu) {
        // Possible double root: converge on f' and check that f vanishes
        // there too.
        let eval = |k| (residual(k, l, mu).1, second_derivative(k, l, mu));
        let k2 = deflated_newton(eval, 0.0, k, 50);
        let f2 = residual(k2, l, mu).0;
        if (k2 - k).norm() <= 1e-3 && f2.norm() <= 1e-12 * residual_scale(k2, l, mu) {
            return Some((fold(k2), 2));
        }
    }
    Some((k, 1))
}

/// A trivial zero of `sin 2k` is a genuine root when `f` vanishes to higher
/// order there, i.e. when `f'` vanishes as well.
fn genuine_trivial_roots(l: f64, mu: C64) -> Vec<(C64, usize)> {
    [C64::new(0.0, 0.0), C64::new(FRAC_PI_2, 0.0)]
        .into_iter()
        .filter(|&k| residual(k, l, mu).1.norm() <= 1e-9 * derivative_scale(k, l, mu))
        .map(|k| (k, 1))
        .collect()
}

/// The `L/2` quasi-momenta of one branch, counted with multiplicity and
/// sorted by `(Re k, Im k)`.
///
/// Requires even `L` and `λ != 0`. Returns [`Error::IncompleteRoots`] if
/// the count is still wrong after refining the seed grid.
pub fn solve_quasimomenta(p: &ModelParams, branch: Branch) -> Result<Vec<QuasiMomentum>> {
    solve_quasimomenta_with(p, branch, SeedGrid::for_model(p))
}

/// [`solve_quasimomenta`] with an explicit starting seed grid.
pub fn solve_quasimomenta_with(
    p: &ModelParams,
    branch: Branch,
    grid: SeedGrid,
) -> Result<Vec<QuasiMomentum>> {
    if p.size() % 2 == 1 {
        return Err(Error::InvalidParameter(
            "the quasi-momentum route needs an even chain length".into(),
        ));
    }
    if p.lambda() == C64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "the quasi-momentum route needs lambda != 0".into(),
        ));
    }
    let mu = branch.coupling(p.lambda())?;
    let l = p.size() as f64;
    let expected = p.size() / 2;

    let mut grid = grid;
    let mut roots = Vec::new();
    for attempt in 0..REFINEMENTS {
        if attempt > 0 {
            grid = grid.refined();
        }
        let seeds = seed_grid(grid.re_points, grid.im_points, grid.im_max);
        let candidates: Vec<(C64, usize)> = seeds
            .par_iter()
            .filter_map(|&s| polish(s, l, mu))
            .collect();
        roots = dedup(candidates, DEDUP_TOL);
        let mut count: usize = roots.iter().map(|r| r.1).sum();
        if count < expected {
            for extra in genuine_trivial_roots(l, mu) {
                if count < expected {
                    roots.push(extra);
                    count += 1;
                }
            }
        }
        if count == expected {
            break;
        }
    }
    let count: usize = roots.iter().map(|r| r.1).sum();
    if count != expected {
        return Err(Error::IncompleteRoots {
            size: p.size(),
            lambda: p.lambda(),
            expected,
            found: roots.iter().map(|r| r.0).collect(),
        });
    }
    roots.sort_by(|a, b| crate::fermion::lex_cmp(&a.0, &b.0));
    Ok(roots
        .into_iter()
        .map(|(k, multiplicity)| QuasiMomentum {
            k,
            branch,
            multiplicity,
        })
        .collect())
}

/// Quasi-momenta of both branches, plus branch first.
pub fn solve_all_quasimomenta(p: &ModelParams) -> Result<Vec<QuasiMomentum>> {
    let mut out = solve_quasimomenta(p, Branch::Plus)?;
    out.extend(solve_quasimomenta(p, Branch::Minus)?);
    Ok(out)
}

/// `sqrt(1 - (1-γ²) sin²k)` in the canonical half-plane, in units of `H_γ`.
pub fn eps_from_k(k: C64, g: &GammaParams) -> C64 {
    let one = C64::new(1.0, 0.0);
    let gamma = g.gamma();
    canonicalize((one - (one - gamma * gamma) * k.sin().powi(2)).sqrt())
}

/// Quasi-energies in units of `H(λ)` from the roots of both branches.
///
/// Fails at `λ = -1`, where `γ` is undefined.
pub fn quasi_energies_from_momenta(p: &ModelParams) -> Result<QuasiEnergySet> {
    let g = p.gamma()?;
    let scale = g.lambda_scale();
    let roots = solve_all_quasimomenta(p)?;
    let mut epsilons = Vec::with_capacity(p.size());
    let mut sectors = Vec::with_capacity(p.size());
    let mut degenerate = false;
    for r in &roots {
        let eps = canonicalize(scale * eps_from_k(r.k, &g));
        degenerate |= r.multiplicity > 1;
        for _ in 0..r.multiplicity {
            epsilons.push(eps);
            sectors.push(r.branch.sector());
        }
    }
    QuasiEnergySet::new(epsilons, sectors, QuasiSource::Quasimomentum, degenerate)
}

/// Outcome of comparing the matrix and quasi-momentum routes.
#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    /// Worst matched distance over all quasi-energies, up to sign.
    pub distance: f64,
    /// Worst matched distance inside each sector.
    pub sector_distances: [(Sector, f64); 2],
    pub tol: f64,
    pub passed: bool,
    /// Either route saw coinciding quasi-energies.
    pub near_degenerate: bool,
    pub matrix: QuasiEnergySet,
    pub momenta: QuasiEnergySet,
}

/// Computes both routes and matches them sector by sector.
pub fn crosscheck_routes(p: &ModelParams, tol: f64) -> Result<CrosscheckReport> {
    let matrix = quasi_energies_matrix(p)?;
    let momenta = quasi_energies_from_momenta(p)?;
    let mut sector_distances = [(Sector::OddSites, 0.0), (Sector::EvenSites, 0.0)];
    let mut passed = true;
    for entry in &mut sector_distances {
        let report = match_values(
            &matrix.in_sector(entry.0),
            &momenta.in_sector(entry.0),
            tol,
            Metric::UpToSign,
        )?;
        entry.1 = report.worst_distance;
        passed &= report.matched;
    }
    let distance = sector_distances[0].1.max(sector_distances[1].1);
    Ok(CrosscheckReport {
        distance,
        sector_distances,
        tol,
        passed,
        near_degenerate: matrix.near_degenerate() || momenta.near_degenerate(),
        matrix,
        momenta,
    })
}
