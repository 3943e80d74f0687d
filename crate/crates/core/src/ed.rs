//! Brute-force exact diagonalization of `H(λ)`.
//!
//! The `2^L × 2^L` matrix is built bond by bond from Kronecker products of
//! Pauli matrices, with no symmetry reduction, so that it shares nothing
//! with the free-fermion construction beyond the eigensolver.

use nalgebra::DMatrix;

use crate::fermion::{SpectrumMultiset, SpectrumOrigin};
use crate::linalg::{self, cluster_radius, merge_clusters};
use crate::{Error, ModelParams, Result, C64};

/// Largest chain length accepted for a dense `2^L × 2^L` Hamiltonian.
pub const MAX_ED_SIZE: usize = 14;

fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
}

fn pauli_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)])
}

/// `1 ⊗ ... ⊗ P_j ⊗ P_{j+1} ⊗ ... ⊗ 1` with site 0 as the leftmost factor.
fn bond_operator(size: usize, j: usize, pauli: &DMatrix<C64>) -> DMatrix<C64> {
    let left = DMatrix::<C64>::identity(1 << j, 1 << j);
    let right = DMatrix::<C64>::identity(1 << (size - j - 2), 1 << (size - j - 2));
    left.kronecker(&pauli.kronecker(pauli)).kronecker(&right)
}

/// Dense `H(λ) = -Σ (σˣσˣ + λ σʸσʸ)` with open boundaries.
pub fn hamiltonian_matrix(p: &ModelParams) -> Result<DMatrix<C64>> {
    let size = p.size();
    if size > MAX_ED_SIZE {
        return Err(Error::Capacity {
            what: "exact diagonalization",
            max: MAX_ED_SIZE,
            got: size,
        });
    }
    let dim = 1usize << size;
    let (x, y) = (pauli_x(), pauli_y());
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    for j in 0..size - 1 {
        h -= bond_operator(size, j, &x);
        h -= bond_operator(size, j, &y) * p.lambda();
    }
    Ok(h)
}

/// Eigenvalues of `H(λ)` exactly as returned by the eigensolver.
pub fn exact_spectrum_raw(p: &ModelParams) -> Result<Vec<C64>> {
    let h = hamiltonian_matrix(p)?;
    linalg::eigenvalues(&h).map_err(|_| Error::EigenNonConvergence {
        size: p.size(),
        lambda: p.lambda(),
    })
}

/// Full spectrum of `H(λ)` by dense diagonalization. Eigenvalue clusters
/// narrower than the cluster radius are replaced by their mean.
pub fn exact_diagonalization(p: &ModelParams) -> Result<SpectrumMultiset> {
    let h = hamiltonian_matrix(p)?;
    let mut energies = linalg::eigenvalues(&h).map_err(|_| Error::EigenNonConvergence {
        size: p.size(),
        lambda: p.lambda(),
    })?;
    merge_clusters(&mut energies, cluster_radius(&h));
    Ok(SpectrumMultiset::new(energies, SpectrumOrigin::ExactDiag))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_multiset(got: Vec<C64>, mut want: Vec<C64>, tol: f64) {
        want.sort_by(crate::fermion::lex_cmp);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn single_bond_without_anisotropy() {
        let p = ModelParams::new(2, c(0.0, 0.0)).unwrap();
        let h = hamiltonian_matrix(&p).unwrap();
        // -σˣ⊗σˣ is the anti-diagonal of -1s
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 { -1.0 } else { 0.0 };
                assert_eq!(h[(i, j)], c(want, 0.0));
            }
        }
        let s = exact_diagonalization(&p).unwrap();
        assert_multiset(s.sorted(), vec![c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], 1e-12);
        assert_eq!(s.origin(), SpectrumOrigin::ExactDiag);
    }

    #[test]
    fn single_bond_imaginary_anisotropy() {
        // -(XX + i YY): on {|00>,|11>} the block is [[0,-1+i],[-1+i,0]],
        // on {|01>,|10>} it is [[0,-1-i],[-1-i,0]].
        let p = ModelParams::new(2, c(0.0, 1.0)).unwrap();
        let s = exact_diagonalization(&p).unwrap();
        assert_multiset(
            s.sorted(),
            vec![c(1.0, 1.0), c(-1.0, -1.0), c(1.0, -1.0), c(-1.0, 1.0)],
            1e-12,
        );
    }

    #[test]
    fn hamiltonian_is_complex_symmetric() {
        let p = ModelParams::new(4, c(0.3, 0.8)).unwrap();
        let h = hamiltonian_matrix(&p).unwrap();
        assert_eq!(h, h.transpose());
        let hr = hamiltonian_matrix(&ModelParams::new(4, c(0.3, 0.0)).unwrap()).unwrap();
        assert_eq!(hr, hr.adjoint());
    }

    #[test]
    fn capacity_guard() {
        let p = ModelParams::new(16, c(0.5, 0.0)).unwrap();
        assert!(matches!(hamiltonian_matrix(&p), Err(Error::Capacity { .. })));
        assert!(matches!(exact_diagonalization(&p), Err(Error::Capacity { .. })));
    }
}
