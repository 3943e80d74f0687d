//! The imaginary-λ axis.
//!
//! For `λ = iλ_I` the quasi-energy polynomial has real coefficients up to
//! the sign of `λ`, so the quasi-energies and the spectrum are closed under
//! complex conjugation: the spectral signature of broken PT symmetry.

use crate::ed::exact_diagonalization;
use crate::ep::{find_eps, EpRecord};
use crate::fermion::{assemble_spectrum, quasi_energies_matrix, SpectrumMultiset};
use crate::matching::{match_values, spectra_match, MatchReport, Metric};
use crate::{Error, ModelParams, Result, C64};

/// Default filter width in `|Re λ|` for on-axis EPs.
pub const DEFAULT_AXIS_TOL: f64 = 1e-7;

/// Which pipeline produces the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumRoute {
    /// Sums of quasi-energies, any `L <= 20`.
    QuasiEnergy,
    /// Full diagonalisation, `L <= 14`.
    ExactDiag,
}

impl SpectrumRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumRoute::QuasiEnergy => "quasi_energy",
            SpectrumRoute::ExactDiag => "exact_diag",
        }
    }
}

/// Conjugation symmetry of the spectrum at a point on the imaginary axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PtReport {
    lambda: C64,
    conjugation_defect: f64,
    real_count: usize,
    conjugate_pair_count: usize,
    route: SpectrumRoute,
    tol: f64,
}

impl PtReport {
    /// Rejects any `lambda` off the imaginary axis or at the origin.
    pub fn new(
        lambda: C64,
        conjugation_defect: f64,
        real_count: usize,
        conjugate_pair_count: usize,
        route: SpectrumRoute,
        tol: f64,
    ) -> Result<Self> {
        if lambda.re != 0.0 || lambda.im == 0.0 || !lambda.im.is_finite() {
            return Err(Error::Domain(format!(
                "PT analysis needs a nonzero imaginary lambda, got {lambda}"
            )));
        }
        Ok(Self {
            lambda,
            conjugation_defect,
            real_count,
            conjugate_pair_count,
            route,
            tol,
        })
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    /// Worst matched distance between the spectrum and its conjugate.
    pub fn conjugation_defect(&self) -> f64 {
        self.conjugation_defect
    }

    /// Eigenvalues with `|Im E| < tol`.
    pub fn real_count(&self) -> usize {
        self.real_count
    }

    /// Eigenvalues with `Im E >= tol`, each paired with its conjugate.
    pub fn conjugate_pair_count(&self) -> usize {
        self.conjugate_pair_count
    }

    pub fn route(&self) -> SpectrumRoute {
        self.route
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn passed(&self) -> bool {
        self.conjugation_defect < self.tol
    }
}

fn spectrum(p: &ModelParams, route: SpectrumRoute) -> Result<SpectrumMultiset> {
    match route {
        SpectrumRoute::QuasiEnergy => assemble_spectrum(&quasi_energies_matrix(p)?),
        SpectrumRoute::ExactDiag => exact_diagonalization(p),
    }
}

/// Measures how far the spectrum at `λ = i·lambda_i` is from being closed
/// under complex conjugation.
pub fn pt_spectrum_check(
    size: usize,
    lambda_i: f64,
    tol: f64,
    route: SpectrumRoute,
) -> Result<PtReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let lambda = C64::new(0.0, lambda_i);
    if lambda_i == 0.0 || !lambda_i.is_finite() {
        return Err(Error::Domain(format!(
            "PT analysis needs a nonzero imaginary lambda, got {lambda}"
        )));
    }
    let p = ModelParams::new(size, lambda)?;
    let energies = spectrum(&p, route)?;
    let conjugate: Vec<C64> = energies.energies().iter().map(|e| e.conj()).collect();
    let report = match_values(energies.energies(), &conjugate, tol, Metric::Euclidean)?;
    let real_count = energies.energies().iter().filter(|e| e.im.abs() < tol).count();
    let conjugate_pair_count = energies.energies().iter().filter(|e| e.im >= tol).count();
    PtReport::new(
        lambda,
        report.worst_distance,
        real_count,
        conjugate_pair_count,
        route,
        tol,
    )
}

/// Compares the exact spectra at `iλ_I` and `-iλ_I`, which the PT
/// transformation maps onto each other.
pub fn pt_mirror_check(size: usize, lambda_i: f64, tol: f64) -> Result<MatchReport> {
    let up = exact_diagonalization(&ModelParams::new(size, C64::new(0.0, lambda_i))?)?;
    let down = exact_diagonalization(&ModelParams::new(size, C64::new(0.0, -lambda_i))?)?;
    spectra_match(&up, &down, tol)
}

/// Records with `|Re λ| < tol`, sorted by `Im λ`.
pub fn on_axis_from(records: &[EpRecord], tol: f64) -> Vec<EpRecord> {
    let mut out: Vec<EpRecord> = records
        .iter()
        .filter(|r| r.lambda_ep.re.abs() < tol)
        .copied()
        .collect();
    out.sort_by(|a, b| a.lambda_ep.im.total_cmp(&b.lambda_ep.im));
    out
}

/// Exceptional points of a chain of length `size` on the imaginary axis.
pub fn on_axis_eps(size: usize, tol: f64) -> Result<Vec<EpRecord>> {
    Ok(on_axis_from(&find_eps(size)?, tol))
}
