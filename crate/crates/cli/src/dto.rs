//! Serializable views of the library results.

use serde::{Deserialize, Serialize};
use xyep::asymptotics::{RateFit, RingConvergenceReport};
use xyep::ep::{EpRecord, EpVerification, GapLandscape, TrivialPointReport};
use xyep::fermion::{QuasiEnergySet, QuasiSource};
use xyep::matching::MatchReport;
use xyep::pt::PtReport;
use xyep::topology::{PhaseDiagram, PhaseSample};
use xyep::C64;

/// Complex number as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Cplx {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Cplx> for C64 {
    fn from(z: Cplx) -> Self {
        C64::new(z.re, z.im)
    }
}

fn cplx(v: &[C64]) -> Vec<Cplx> {
    v.iter().map(|&z| z.into()).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QuasiResult {
    pub size: usize,
    pub lambda: Cplx,
    pub source: String,
    pub near_degenerate: bool,
    pub epsilons: Vec<Cplx>,
    pub sectors: Vec<String>,
    pub ground_state_energy: Cplx,
}

impl QuasiResult {
    pub fn new(size: usize, lambda: C64, q: &QuasiEnergySet) -> Self {
        Self {
            size,
            lambda: lambda.into(),
            source: match q.source() {
                QuasiSource::Matrix => "matrix",
                QuasiSource::Quasimomentum => "quasimomentum",
            }
            .into(),
            near_degenerate: q.near_degenerate(),
            epsilons: cplx(q.epsilons()),
            sectors: q.sectors().iter().map(|s| s.as_str().to_string()).collect(),
            ground_state_energy: xyep::fermion::ground_state_energy(q).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatchResult {
    pub matched: bool,
    pub worst_distance: f64,
    pub unmatched: usize,
    pub tol: f64,
}

impl From<&MatchReport> for MatchResult {
    fn from(r: &MatchReport) -> Self {
        Self {
            matched: r.matched,
            worst_distance: r.worst_distance,
            unmatched: r.unmatched,
            tol: r.tol,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpectrumResult {
    pub size: usize,
    pub lambda: Cplx,
    /// Free-fermion energies sorted by (Re, Im).
    pub energies: Vec<Cplx>,
    /// Exact-diagonalization energies, when compared.
    pub exact: Option<Vec<Cplx>>,
    pub comparison: Option<MatchResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EpEntry {
    pub k: Cplx,
    pub lambda: Cplx,
    pub branch: String,
    pub ring: String,
    pub quasi_gap: f64,
    pub lr_overlap: f64,
    pub trivial: bool,
    pub on_axis: bool,
}

impl EpEntry {
    pub fn new(r: &EpRecord, axis_tol: f64) -> Self {
        Self {
            k: r.k_ep.into(),
            lambda: r.lambda_ep.into(),
            branch: r.branch.as_str().into(),
            ring: r.ring.as_str().into(),
            quasi_gap: r.quasi_gap,
            lr_overlap: r.lr_overlap,
            trivial: r.trivial,
            on_axis: r.lambda_ep.re.abs() < axis_tol,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EpsResult {
    pub size: usize,
    pub count: usize,
    pub inner_count: usize,
    pub outer_count: usize,
    pub on_axis_count: usize,
    pub records: Vec<EpEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RingEntry {
    pub size: usize,
    pub inner_max_dev: f64,
    pub outer_max_dev: f64,
    pub max_angle_error: f64,
    pub unmatched: usize,
    pub two_sided: bool,
    pub inner_branch: Option<String>,
    pub outer_branch: Option<String>,
    pub lambdas: Vec<Cplx>,
    pub predicted_angles: Vec<f64>,
    pub angle_errors: Vec<f64>,
}

impl From<&RingConvergenceReport> for RingEntry {
    fn from(r: &RingConvergenceReport) -> Self {
        Self {
            size: r.size,
            inner_max_dev: r.inner_max_dev,
            outer_max_dev: r.outer_max_dev,
            max_angle_error: r.max_angle_error(),
            unmatched: r.unmatched_count(),
            two_sided: r.two_sided,
            inner_branch: r.inner_branch.map(|b| b.as_str().into()),
            outer_branch: r.outer_branch.map(|b| b.as_str().into()),
            lambdas: r.records.iter().map(|x| x.lambda_ep.into()).collect(),
            predicted_angles: r.predicted_angles.clone(),
            angle_errors: r.angle_errors.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RateEntry {
    pub inner_slope: f64,
    pub outer_slope: f64,
}

impl From<RateFit> for RateEntry {
    fn from(f: RateFit) -> Self {
        Self {
            inner_slope: f.inner_slope,
            outer_slope: f.outer_slope,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RingsResult {
    pub reports: Vec<RingEntry>,
    /// Both deviations strictly decrease along the given sizes.
    pub monotone: bool,
    pub fit: Option<RateEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Minimum {
    pub lambda: Cplx,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GapResult {
    pub size: usize,
    pub grid: GridSpec,
    /// Row-major, real part fastest; `null` where the eigensolver failed.
    pub gaps: Vec<Option<f64>>,
    pub minima: Vec<Minimum>,
}

impl From<&GapLandscape> for GapResult {
    fn from(g: &GapLandscape) -> Self {
        Self {
            size: g.size,
            grid: GridSpec {
                re_min: g.rect.re_min,
                re_max: g.rect.re_max,
                im_min: g.rect.im_min,
                im_max: g.rect.im_max,
                nx: g.nx,
                ny: g.ny,
            },
            gaps: g.gaps.clone(),
            minima: g
                .local_minima()
                .into_iter()
                .map(|(l, gap)| Minimum { lambda: l.into(), gap })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PtEntry {
    pub lambda_i: f64,
    pub conjugation_defect: f64,
    pub real_count: usize,
    pub conjugate_pair_count: usize,
    pub passed: bool,
}

impl From<&PtReport> for PtEntry {
    fn from(r: &PtReport) -> Self {
        Self {
            lambda_i: r.lambda().im,
            conjugation_defect: r.conjugation_defect(),
            real_count: r.real_count(),
            conjugate_pair_count: r.conjugate_pair_count(),
            passed: r.passed(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PtResult {
    pub size: usize,
    pub route: String,
    pub tol: f64,
    pub points: Vec<PtEntry>,
    pub max_defect: f64,
    pub all_passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PhaseEntry {
    pub lambda: Cplx,
    pub winding: Option<i32>,
    pub samples_used: usize,
    pub status: String,
}

impl From<&PhaseSample> for PhaseEntry {
    fn from(s: &PhaseSample) -> Self {
        Self {
            lambda: s.lambda.into(),
            winding: s.winding,
            samples_used: s.samples_used,
            status: s.status.as_str().into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PhaseCounts {
    pub plus: usize,
    pub minus: usize,
    pub boundary: usize,
    pub ill_defined: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PhaseResult {
    pub grid: GridSpec,
    pub n_k: usize,
    pub counts: PhaseCounts,
    pub samples: Vec<PhaseEntry>,
}

impl From<&PhaseDiagram> for PhaseResult {
    fn from(d: &PhaseDiagram) -> Self {
        let samples: Vec<PhaseEntry> = d.samples.iter().map(PhaseEntry::from).collect();
        let count = |f: &dyn Fn(&PhaseEntry) -> bool| samples.iter().filter(|s| f(s)).count();
        let counts = PhaseCounts {
            plus: count(&|s| s.winding == Some(1)),
            minus: count(&|s| s.winding == Some(-1)),
            boundary: count(&|s| s.status == "boundary"),
            ill_defined: count(&|s| s.status == "ill_defined"),
        };
        Self {
            grid: GridSpec {
                re_min: d.rect.re_min,
                re_max: d.rect.re_max,
                im_min: d.rect.im_min,
                im_max: d.rect.im_max,
                nx: d.nx,
                ny: d.ny,
            },
            n_k: d.n_k,
            counts,
            samples,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HamiltonianEntry {
    pub energy_gap: f64,
    pub lr_overlap: f64,
    pub coalescing_pairs: usize,
    pub target_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerifyEntry {
    pub lambda: Cplx,
    pub quasi_gap: f64,
    pub lr_overlap: f64,
    pub pair: [Cplx; 2],
    pub hamiltonian: Option<HamiltonianEntry>,
    pub passed: bool,
}

impl From<&EpVerification> for VerifyEntry {
    fn from(v: &EpVerification) -> Self {
        Self {
            lambda: v.lambda.into(),
            quasi_gap: v.matrix.gap,
            lr_overlap: v.matrix.overlap,
            pair: [v.matrix.pair.0.into(), v.matrix.pair.1.into()],
            hamiltonian: v.hamiltonian.as_ref().map(|h| HamiltonianEntry {
                energy_gap: h.energy_gap,
                lr_overlap: h.lr_overlap,
                coalescing_pairs: h.coalescing_pairs,
                target_count: h.targets.len(),
            }),
            passed: v.passed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrivialEntry {
    pub lambda: Cplx,
    pub branch: String,
    pub k: Cplx,
    pub residual: f64,
    pub derivative_residual: f64,
    pub quasi_energy: Cplx,
    pub lr_overlap: f64,
    pub quasi_gap: f64,
    pub k_degenerate: bool,
    pub is_ep: bool,
}

/// Threshold below which a trivial point's overlap would count as an EP.
pub const TRIVIAL_OVERLAP_FLOOR: f64 = 0.1;

impl From<&TrivialPointReport> for TrivialEntry {
    fn from(t: &TrivialPointReport) -> Self {
        Self {
            lambda: t.lambda.into(),
            branch: t.branch.as_str().into(),
            k: t.k.into(),
            residual: t.residual,
            derivative_residual: t.derivative_residual,
            quasi_energy: t.quasi_energy.into(),
            lr_overlap: t.lr_overlap,
            quasi_gap: t.quasi_gap,
            k_degenerate: t.k_degenerate(1e-12),
            is_ep: t.is_ep(TRIVIAL_OVERLAP_FLOOR),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerifyResult {
    pub size: usize,
    pub tol: f64,
    pub level: String,
    pub checks: Vec<VerifyEntry>,
    pub trivial_points: Vec<TrivialEntry>,
    pub all_passed: bool,
}
