//! Property tests over random anisotropies.

use proptest::prelude::*;
use xyep::ed::exact_diagonalization;
use xyep::fermion::{assemble_spectrum, quasi_energies_matrix, SpectrumOrigin};
use xyep::matching::spectra_match;
use xyep::quasimomentum::{crosscheck_routes, k_residual};
use xyep::topology::winding_number;
use xyep::{Branch, ModelParams, Sector, C64};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn disk(radius: f64) -> impl Strategy<Value = C64> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn annulus(lo: f64, hi: f64) -> impl Strategy<Value = C64> {
    (lo..hi, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn even_size(max_half: usize) -> impl Strategy<Value = usize> {
    (1..=max_half).prop_map(|h| 2 * h)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn assembled_spectrum_is_closed_under_negation(size in even_size(5), lambda in disk(3.0)) {
        let p = ModelParams::new(size, lambda).unwrap();
        let s = assemble_spectrum(&quasi_energies_matrix(&p).unwrap()).unwrap();
        prop_assert_eq!(s.len(), 1 << size);
        let negated = s.map(|e| -e);
        let r = spectra_match(&s, &negated, 1e-12).unwrap();
        prop_assert!(r.matched, "worst {}", r.worst_distance);
    }

    #[test]
    fn sectors_split_evenly(size in even_size(8), lambda in disk(3.0)) {
        let q = quasi_energies_matrix(&ModelParams::new(size, lambda).unwrap()).unwrap();
        prop_assert_eq!(q.in_sector(Sector::OddSites).len(), size / 2);
        prop_assert_eq!(q.in_sector(Sector::EvenSites).len(), size / 2);
        let canonical = q.epsilons().iter().all(|e| e.re > 0.0 || (e.re == 0.0 && e.im >= 0.0));
        prop_assert!(canonical);
    }

    #[test]
    fn hermitian_limit_is_real(size in even_size(3), lambda in -3.0f64..3.0) {
        let p = ModelParams::new(size, C64::new(lambda, 0.0)).unwrap();
        let q = quasi_energies_matrix(&p).unwrap();
        for e in q.epsilons() {
            prop_assert!(e.im.abs() < 1e-10 && e.re >= 0.0, "{}", e);
        }
        let ed = exact_diagonalization(&p).unwrap();
        prop_assert!(ed.energies().iter().all(|e| e.im.abs() < 1e-10));
    }

    #[test]
    fn residual_symmetries(size in even_size(10), lambda in annulus(0.1, 3.0),
                           re in -4.0f64..4.0, im in -0.5f64..0.5) {
        let p = ModelParams::new(size, lambda).unwrap();
        let k = C64::new(re, im);
        for b in Branch::BOTH {
            let f = k_residual(k, &p, b).unwrap();
            let shifted = k_residual(k + std::f64::consts::PI, &p, b).unwrap();
            let reflected = k_residual(-k, &p, b).unwrap();
            let scale = 1.0 + f.norm();
            let sign = if size % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((shifted - sign * f).norm() < 1e-9 * scale);
            prop_assert!((reflected + f).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn winding_follows_circle(lambda in annulus(0.0, 0.95), outer in annulus(1.05, 3.0)) {
        prop_assert_eq!(winding_number(lambda, 256).unwrap().winding, Some(1));
        prop_assert_eq!(winding_number(outer, 256).unwrap().winding, Some(-1));
        let coarse = winding_number(outer, 256).unwrap().winding;
        let fine = winding_number(outer, 4096).unwrap().winding;
        prop_assert_eq!(coarse, fine);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn free_fermion_matches_exact_diagonalization(size in even_size(3), lambda in disk(3.0)) {
        let p = ModelParams::new(size, lambda).unwrap();
        let ff = assemble_spectrum(&quasi_energies_matrix(&p).unwrap()).unwrap();
        let ed = exact_diagonalization(&p).unwrap();
        prop_assert_eq!(ff.origin(), SpectrumOrigin::FreeFermion);
        prop_assert_eq!(ed.origin(), SpectrumOrigin::ExactDiag);
        let r = spectra_match(&ff, &ed, 1e-8).unwrap();
        prop_assert!(r.matched, "λ={} worst {}", lambda, r.worst_distance);
    }

    #[test]
    fn routes_agree_on_annulus(size in even_size(4), lambda in annulus(0.2, 3.0)) {
        let r = crosscheck_routes(&ModelParams::new(size, lambda).unwrap(), 1e-8).unwrap();
        prop_assert!(r.passed, "λ={} distance {}", lambda, r.distance);
    }

    /// ε at 1/λ with the branches swapped, rescaled by λ, reproduces ε at λ.
    #[test]
    fn branch_duality(size in prop_oneof![Just(4usize), Just(6)], lambda in annulus(0.3, 2.5)) {
        let at = |l: C64| quasi_energies_matrix(&ModelParams::new(size, l).unwrap()).unwrap();
        let direct = at(lambda);
        let dual = at(lambda.inv());
        for sector in Sector::BOTH {
            let other = match sector { Sector::OddSites => Sector::EvenSites, Sector::EvenSites => Sector::OddSites };
            let scaled: Vec<C64> = dual.in_sector(other).iter().map(|e| *e * lambda).collect();
            let r = xyep::matching::match_values(&direct.in_sector(sector), &scaled, 1e-8,
                xyep::matching::Metric::UpToSign).unwrap();
            prop_assert!(r.matched, "worst {}", r.worst_distance);
        }
    }
}
