use std::f64::consts::PI;

use dipole_lab::factorization::{
    apply_operator, full_factorization_residual, AnalyticSpinor, ManufacturedSpinor, Mode, OperatorKind, PolarGrid,
    RadialProfile,
};
use dipole_lab::fields::{DipoleParams, FieldConfiguration};
use dipole_lab::spinor::{GammaBasis, Spinor};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn up() -> Spinor {
    Spinor::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
}

#[test]
fn golden_report_for_constant_spinor() {
    let basis = GammaBasis::dirac();
    let wei = FieldConfiguration::wei(1.0, 1.0).unwrap();
    let params = DipoleParams { m: 1.0, alpha_pol: 1.0, chi: 0.0, mu: 0.0 };
    let grid = PolarGrid::new(1.0, 2.0, 5, 8).unwrap();
    let report = full_factorization_residual(&ManufacturedSpinor::constant(up()), grid, &wei, &params, &basis).unwrap();

    assert_eq!(report.mass, 0.0);
    assert_eq!(report.azimuthal_transport, 0.0);
    assert_eq!(report.local_potential, 0.0);
    assert!(report.cross_cancellation < 1e-15);
    assert!((report.radial - 0.9807852804032303).abs() < 1e-14);
    assert!((report.total - 0.9807852804032303).abs() < 1e-14);
    // the radial commutator is largest at r = r_min, where it equals |sin(φ/4)|
    for (j, v) in report.radial_by_azimuth.iter().enumerate() {
        let phi = 2.0 * PI * j as f64 / 8.0;
        assert!((v - (phi / 4.0).sin().abs()).abs() < 1e-14, "node {j}: {v}");
    }
}

#[test]
fn residual_vanishes_without_moments() {
    let basis = GammaBasis::dirac();
    let wei = FieldConfiguration::wei(1.0, 1.0).unwrap();
    let params = DipoleParams { m: 2.0, ..Default::default() };
    let grid = PolarGrid::new(0.5, 2.0, 9, 16).unwrap();
    let psi = ManufacturedSpinor::single(Mode::new(RadialProfile::Sine { k: 1.0, shift: 0.2 }, 3, up()));
    let report = full_factorization_residual(&psi, grid, &wei, &params, &basis).unwrap();
    assert_eq!(report.total, 0.0);
}

fn asymmetry(kind: OperatorKind) -> f64 {
    let basis = GammaBasis::dirac();
    let wei = FieldConfiguration::wei(1.0, 1.0).unwrap();
    let params = DipoleParams { m: 0.7, alpha_pol: 1.0, chi: 0.5, mu: 0.0 };
    let grid = PolarGrid::new(1.0, 2.0, 161, 128).unwrap();
    let bump = RadialProfile::Gaussian { center: 1.5, width: 0.1 };
    let a = ManufacturedSpinor::single(Mode::new(bump, 1, Spinor::new(c(1.0, 0.0), c(0.0, 0.5), c(0.3, 0.0), c(0.0, -0.2))))
        .sample(grid);
    let b = ManufacturedSpinor::single(Mode::new(bump, 1, Spinor::new(c(0.2, 0.1), c(1.0, 0.0), c(0.0, 0.4), c(-0.6, 0.0))))
        .sample(grid);
    let ha = apply_operator(kind, &a, &wei, &params, &basis).unwrap();
    let hb = apply_operator(kind, &b, &wei, &params, &basis).unwrap();
    (a.inner(&hb) - ha.inner(&b)).norm()
}

// ⟨a|Hb⟩ − ⟨Ha|b⟩ for fields vanishing at the radial boundary. The reduced
// operator is symmetric up to stencil error; the cross term of the full one
// is anti-Hermitian.
#[test]
fn reduced_operator_is_symmetric_and_full_is_not() {
    let reduced = asymmetry(OperatorKind::Reduced);
    let full = asymmetry(OperatorKind::Full);
    assert!(reduced < 1e-5, "reduced asymmetry {reduced:e}");
    assert!(full > 0.1, "full asymmetry {full:e}");
}
