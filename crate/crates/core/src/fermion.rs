//! Quasi-energies and the free-fermion spectrum.
//!
//! Every eigenvalue of `H(λ)` with open boundaries is a signed sum
//! `E = Σ_j ±ε_j`, where `ε_j² = a_j` runs over the eigenvalues of `CᵀC`
//! and `C` has ones on the superdiagonal and `λ` on the subdiagonal. `Cᵀ`
//! is the plain transpose: for complex `λ` the product is complex symmetric
//! but not Hermitian.

use std::cmp::Ordering;

use nalgebra::DMatrix;

use crate::linalg::{self, cluster_radius, merge_clusters};
use crate::{Error, ModelParams, Result, Sector, C64};

/// Largest chain length for which the `2^L` spectrum is enumerated.
pub const MAX_ASSEMBLY_SIZE: usize = 20;

/// Quasi-energy pairs closer than this (in `a = ε²`) mark a set as
/// near-degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// `C` for the given model: `C[i][i+1] = 1`, `C[i+1][i] = λ`.
pub fn build_c_matrix(p: &ModelParams) -> DMatrix<C64> {
    let n = p.size();
    let lambda = p.lambda();
    DMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            C64::new(1.0, 0.0)
        } else if i == j + 1 {
            lambda
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `CᵀC` (plain transpose).
pub fn quasi_energy_matrix(p: &ModelParams) -> DMatrix<C64> {
    let c = build_c_matrix(p);
    c.transpose() * c
}

/// Restriction of `CᵀC` to the sites of one sector.
pub fn sector_matrix(p: &ModelParams, sector: Sector) -> DMatrix<C64> {
    let full = quasi_energy_matrix(p);
    let sites: Vec<usize> = sector.sites(p.size()).collect();
    DMatrix::from_fn(sites.len(), sites.len(), |i, j| full[(sites[i], sites[j])])
}

/// Picks the square root with `Re > 0`, or `Re = 0` and `Im >= 0`.
pub fn canonicalize(z: C64) -> C64 {
    let z = C64::new(z.re + 0.0, z.im + 0.0);
    if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        -z
    } else {
        z
    }
}

pub fn canonical_sqrt(a: C64) -> C64 {
    canonicalize(a.sqrt())
}

/// Distance between two quasi-energies up to their sign, the only
/// meaningful one since both signs enter the spectrum.
pub fn sign_free_distance(a: C64, b: C64) -> f64 {
    (a - b).norm().min((a + b).norm())
}

pub(crate) fn lex_cmp(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiSource {
    Matrix,
    Quasimomentum,
}

/// The `L` quasi-energies of one model, canonicalised and sorted by
/// `(Re, Im)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiEnergySet {
    epsilons: Vec<C64>,
    sectors: Vec<Sector>,
    source: QuasiSource,
    near_degenerate: bool,
}

impl QuasiEnergySet {
    /// Canonicalises and sorts. `epsilons` and `sectors` must have equal
    /// length.
    pub fn new(
        epsilons: Vec<C64>,
        sectors: Vec<Sector>,
        source: QuasiSource,
        near_degenerate: bool,
    ) -> Result<Self> {
        if epsilons.len() != sectors.len() {
            return Err(Error::CardinalityMismatch {
                left: epsilons.len(),
                right: sectors.len(),
            });
        }
        let mut pairs: Vec<(C64, Sector)> = epsilons
            .into_iter()
            .map(canonicalize)
            .zip(sectors)
            .collect();
        pairs.sort_by(|a, b| lex_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        let (epsilons, sectors) = pairs.into_iter().unzip();
        Ok(Self {
            epsilons,
            sectors,
            source,
            near_degenerate,
        })
    }

    pub fn epsilons(&self) -> &[C64] {
        &self.epsilons
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn source(&self) -> QuasiSource {
        self.source
    }

    pub fn near_degenerate(&self) -> bool {
        self.near_degenerate
    }

    pub fn len(&self) -> usize {
        self.epsilons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilons.is_empty()
    }

    /// Quasi-energies of one sector, in set order.
    pub fn in_sector(&self, sector: Sector) -> Vec<C64> {
        self.epsilons
            .iter()
            .zip(&self.sectors)
            .filter(|(_, s)| **s == sector)
            .map(|(e, _)| *e)
            .collect()
    }

    /// Smallest sign-free distance between two quasi-energies and the
    /// indices of that pair. `None` for fewer than two entries.
    pub fn closest_pair(&self) -> Option<(f64, usize, usize)> {
        closest_pair(&self.epsilons)
    }
}

pub(crate) fn closest_pair(eps: &[C64]) -> Option<(f64, usize, usize)> {
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..eps.len() {
        for j in i + 1..eps.len() {
            let d = sign_free_distance(eps[i], eps[j]);
            if best.map_or(true, |b| d < b.0) {
                best = Some((d, i, j));
            }
        }
    }
    best
}

fn eigen_failure(p: &ModelParams) -> Error {
    Error::EigenNonConvergence {
        size: p.size(),
        lambda: p.lambda(),
    }
}

/// Raw eigenvalues `a` of one sector block, without cluster merging.
pub fn sector_eigenvalues_raw(p: &ModelParams, sector: Sector) -> Result<Vec<C64>> {
    linalg::eigenvalues(&sector_matrix(p, sector)).map_err(|_| eigen_failure(p))
}

/// Quasi-energies from the eigenvalues of `CᵀC`.
///
/// The two site-parity blocks are diagonalised separately, which labels the
/// sectors exactly. Within a block, eigenvalues closer than the cluster
/// radius are replaced by their mean: at an exceptional point the block is
/// defective and the individual eigenvalues carry `O(sqrt(ε))` errors while
/// their mean does not. Such sets, and any with a pair of `a` values within
/// [`DEGENERACY_TOL`], are flagged near-degenerate.
pub fn quasi_energies_matrix(p: &ModelParams) -> Result<QuasiEnergySet> {
    let mut epsilons = Vec::with_capacity(p.size());
    let mut sectors = Vec::with_capacity(p.size());
    let mut all_a = Vec::with_capacity(p.size());
    let mut merged = 0;
    for sector in Sector::BOTH {
        let block = sector_matrix(p, sector);
        let mut a = linalg::eigenvalues(&block).map_err(|_| eigen_failure(p))?;
        merged += merge_clusters(&mut a, cluster_radius(&block));
        for &v in &a {
            epsilons.push(canonical_sqrt(v));
            sectors.push(sector);
        }
        all_a.extend(a);
    }
    let close_pair = (0..all_a.len())
        .any(|i| (i + 1..all_a.len()).any(|j| (all_a[i] - all_a[j]).norm() <= DEGENERACY_TOL));
    QuasiEnergySet::new(epsilons, sectors, QuasiSource::Matrix, merged > 0 || close_pair)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumOrigin {
    FreeFermion,
    ExactDiag,
}

/// The `2^L` energies of a chain, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMultiset {
    energies: Vec<C64>,
    origin: SpectrumOrigin,
}

impl SpectrumMultiset {
    pub fn new(energies: Vec<C64>, origin: SpectrumOrigin) -> Self {
        Self { energies, origin }
    }

    pub fn energies(&self) -> &[C64] {
        &self.energies
    }

    pub fn origin(&self) -> SpectrumOrigin {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Energies sorted by `(Re, Im)`.
    pub fn sorted(&self) -> Vec<C64> {
        let mut v = self.energies.clone();
        v.sort_by(lex_cmp);
        v
    }

    /// The multiset under `E -> f(E)`.
    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            energies: self.energies.iter().map(|&e| f(e)).collect(),
            origin: self.origin,
        }
    }
}

/// All `2^L` sign combinations `Σ ±ε_j`.
///
/// Entry `s` uses `-ε_j` where bit `L-1-j` of `s` is set, so entry `0` is
/// `+Σ ε_j` and the last entry is the ground-state combination.
pub fn assemble_spectrum(q: &QuasiEnergySet) -> Result<SpectrumMultiset> {
    if q.len() > MAX_ASSEMBLY_SIZE {
        return Err(Error::Capacity {
            what: "spectrum assembly",
            max: MAX_ASSEMBLY_SIZE,
            got: q.len(),
        });
    }
    let mut energies = vec![C64::new(0.0, 0.0)];
    for &eps in q.epsilons() {
        energies = energies.iter().flat_map(|&e| [e + eps, e - eps]).collect();
    }
    Ok(SpectrumMultiset::new(energies, SpectrumOrigin::FreeFermion))
}

/// `E_0 = -Σ ε_j` in the canonical sign convention.
///
/// For complex `λ` this is the all-minus combination, not an extremum of
/// the spectrum in any ordering.
pub fn ground_state_energy(q: &QuasiEnergySet) -> C64 {
    -q.epsilons().iter().sum::<C64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn set(eps: &[C64]) -> QuasiEnergySet {
        QuasiEnergySet::new(
            eps.to_vec(),
            vec![Sector::OddSites; eps.len()],
            QuasiSource::Matrix,
            false,
        )
        .unwrap()
    }

    #[test]
    fn c_matrix_small_cases() {
        let p = ModelParams::new(2, c(0.7, -0.2)).unwrap();
        let m = build_c_matrix(&p);
        assert_eq!(m[(0, 0)], c(0.0, 0.0));
        assert_eq!(m[(0, 1)], c(1.0, 0.0));
        assert_eq!(m[(1, 0)], c(0.7, -0.2));
        assert_eq!(m[(1, 1)], c(0.0, 0.0));

        let p = ModelParams::allow_odd(3, c(0.0, 2.0)).unwrap();
        let m = build_c_matrix(&p);
        let expected = DMatrix::from_row_slice(
            3,
            3,
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
        );
        assert_eq!(m, expected);

        let p = ModelParams::new(4, c(0.0, 0.0)).unwrap();
        let m = build_c_matrix(&p);
        for i in 0..4 {
            for j in 0..4 {
                let want = if j == i + 1 { 1.0 } else { 0.0 };
                assert_eq!(m[(i, j)], c(want, 0.0));
            }
        }
    }

    #[test]
    fn ctc_only_couples_same_parity_sites() {
        let p = ModelParams::new(8, c(0.4, 1.3)).unwrap();
        let m = quasi_energy_matrix(&p);
        for i in 0..8 {
            for j in 0..8 {
                if (i + j) % 2 == 1 {
                    assert_eq!(m[(i, j)], c(0.0, 0.0));
                }
            }
        }
        // complex symmetric, not Hermitian
        assert_eq!(m, m.transpose());
        assert_ne!(m, m.adjoint());
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(canonicalize(c(-1.0, 2.0)), c(1.0, -2.0));
        assert_eq!(canonicalize(c(0.0, -2.0)), c(0.0, 2.0));
        assert_eq!(canonicalize(c(-0.0, -0.0)), c(0.0, 0.0));
        assert_eq!(canonical_sqrt(c(-4.0, -0.0)), c(0.0, 2.0));
        assert_eq!(canonical_sqrt(c(-4.0, 0.0)), c(0.0, 2.0));
    }

    #[test]
    fn lambda_zero_quasi_energies() {
        let p = ModelParams::new(4, c(0.0, 0.0)).unwrap();
        let q = quasi_energies_matrix(&p).unwrap();
        let want = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        for (e, w) in q.epsilons().iter().zip(&want) {
            assert!((e - w).norm() < 1e-12, "{e}");
        }
        assert!(q.near_degenerate());
        assert!((ground_state_energy(&q) - c(-3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn xx_point_matches_closed_form() {
        // λ = 1: C is symmetric, CᵀC = C², eigenvalues (2cos(jπ/(L+1)))².
        let p = ModelParams::new(4, c(1.0, 0.0)).unwrap();
        let q = quasi_energies_matrix(&p).unwrap();
        let mut want: Vec<f64> = (1..=4).map(|j| (2.0 * (j as f64 * PI / 5.0).cos()).abs()).collect();
        want.sort_by(f64::total_cmp);
        for (e, w) in q.epsilons().iter().zip(&want) {
            assert!((e - c(*w, 0.0)).norm() < 1e-12, "{e} vs {w}");
        }
        let e0 = ground_state_energy(&q);
        assert!((e0 - c(-want.iter().sum::<f64>(), 0.0)).norm() < 1e-12);
        assert!((e0.re + 4.472135954999579).abs() < 1e-12);
    }

    #[test]
    fn assembly_enumerates_sign_patterns() {
        let s = assemble_spectrum(&set(&[c(1.0, 0.0), c(2.0, 0.0)])).unwrap();
        assert_eq!(s.sorted(), vec![c(-3.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(s.energies()[0], c(3.0, 0.0));
        assert_eq!(*s.energies().last().unwrap(), c(-3.0, 0.0));

        let s = assemble_spectrum(&set(&[c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert_eq!(s.sorted(), vec![c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(s.origin(), SpectrumOrigin::FreeFermion);
    }

    #[test]
    fn assembly_capacity_guard() {
        let eps = vec![c(1.0, 0.0); MAX_ASSEMBLY_SIZE + 1];
        let err = assemble_spectrum(&set(&eps)).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn ground_state_simple() {
        assert_eq!(ground_state_energy(&set(&[c(1.0, 0.0), c(2.0, 0.0)])), c(-3.0, 0.0));
    }

    #[test]
    fn sectors_split_evenly() {
        let p = ModelParams::new(6, c(0.3, 0.4)).unwrap();
        let q = quasi_energies_matrix(&p).unwrap();
        assert_eq!(q.in_sector(Sector::OddSites).len(), 3);
        assert_eq!(q.in_sector(Sector::EvenSites).len(), 3);
        assert!(!q.near_degenerate());
    }

    #[test]
    fn full_matrix_eigenvalues_are_union_of_sectors() {
        let p = ModelParams::new(8, c(-0.9, 1.1)).unwrap();
        let full = linalg::eigenvalues(&quasi_energy_matrix(&p)).unwrap();
        let q = quasi_energies_matrix(&p).unwrap();
        for a in full {
            let e = canonical_sqrt(a);
            let d = q.epsilons().iter().map(|x| sign_free_distance(*x, e)).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-10, "{a} not among sector eigenvalues");
        }
    }
}
