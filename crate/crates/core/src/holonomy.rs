//! Loop integrals of matrix-valued phase integrands and their path-ordered
//! exponentials.
//!
//! A closed circular loop of radius `R` around the z-axis is cut into `N`
//! segments by a monotone parametrization of the angle. On each segment the
//! integrand is evaluated at the angular midpoint and contracted with the
//! tangent line element `R φ̂ Δθ`, giving a segment matrix `M_k`. Then
//!
//! ```text
//! Φ = Σ_k M_k,        U = exp(iM_N) ⋯ exp(iM_2) exp(iM_1).
//! ```
//!
//! Later segments multiply on the left. For the line-charge configuration the
//! tangential integrand is constant along the circle, so the midpoint rule is
//! exact up to rounding and every `M_k` lies in the commuting algebra spanned
//! by `β̂` and `β̂Σ³`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Cylindrical, DipoleParams, FieldConfiguration, Vec3};
use crate::spinor::{
    commutator, decompose_on_commuting_basis, exp_i, CommutingDecomposition, GammaBasis, SpinorMatrix,
};

/// Printed with every phase result that includes a time leg.
pub const TIME_LEG_NOTE: &str = "the scalar Aharonov-Bohm time leg is computed as mu*beta*(Sigma.B)*tau, \
i.e. with the beta factor of the time integral in the Anandan phase; the closed-form phase is often \
quoted with a bare Sigma^3 in that term, which differs from this convention by a factor of beta";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Increasing φ.
    #[default]
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    pub fn from_sign(sign: i32) -> Option<Self> {
        match sign {
            1 => Some(Orientation::CounterClockwise),
            -1 => Some(Orientation::Clockwise),
            _ => None,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Orientation::CounterClockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
        }
    }
}

/// Monotone map `s ∈ [0, 1] ↦ θ ∈ [0, 2π]` that decides where the segment
/// boundaries fall. A uniform traversal speed corresponds to `Uniform`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Parametrization {
    #[default]
    Uniform,
    /// `θ = 2π sᵖ`, `p > 0`.
    Power { exponent: f64 },
    /// `θ = 2πs + a sin(2πs)`, `|a| < 1`.
    Wobble { amplitude: f64 },
}

impl Parametrization {
    pub fn angle(&self, s: f64) -> f64 {
        match *self {
            Parametrization::Uniform => TAU * s,
            Parametrization::Power { exponent } => TAU * s.powf(exponent),
            Parametrization::Wobble { amplitude } => TAU * s + amplitude * (TAU * s).sin(),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Parametrization::Uniform => Ok(()),
            Parametrization::Power { exponent } if exponent.is_finite() && exponent > 0.0 => Ok(()),
            Parametrization::Wobble { amplitude } if amplitude.is_finite() && amplitude.abs() < 1.0 => Ok(()),
            other => Err(Error::InvalidPath(format!("{other:?} is not strictly monotone"))),
        }
    }
}

/// Closed circle of radius `R` centered on the z-axis in the plane `z = const`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopPath {
    pub radius: f64,
    pub z: f64,
    pub orientation: Orientation,
    pub segments: usize,
    pub parametrization: Parametrization,
}

impl LoopPath {
    pub fn circle(radius: f64, segments: usize) -> Result<Self> {
        let path = LoopPath {
            radius,
            z: 0.0,
            orientation: Orientation::CounterClockwise,
            segments,
            parametrization: Parametrization::Uniform,
        };
        path.validate()?;
        Ok(path)
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_parametrization(mut self, parametrization: Parametrization) -> Result<Self> {
        parametrization.validate()?;
        self.parametrization = parametrization;
        Ok(self)
    }

    pub fn with_height(mut self, z: f64) -> Self {
        self.z = z;
        self
    }

    pub fn reversed(mut self) -> Self {
        self.orientation = self.orientation.reversed();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidPath(format!("radius must be positive, got {}", self.radius)));
        }
        if !self.z.is_finite() {
            return Err(Error::NonFinite("loop height"));
        }
        if self.segments == 0 {
            return Err(Error::InvalidPath("at least one segment is required".into()));
        }
        self.parametrization.validate()
    }

    /// Segment boundary angles `θ_0 = 0, …, θ_N = ±2π`.
    ///
    /// A clockwise loop walks the counterclockwise partition backwards, so
    /// reversing orientation visits the same midpoints in reverse order.
    pub fn boundary_angles(&self) -> Vec<f64> {
        let n = self.segments;
        let ccw = |k: usize| {
            if k == 0 {
                0.0
            } else if k == n {
                TAU
            } else {
                self.parametrization.angle(k as f64 / n as f64)
            }
        };
        match self.orientation {
            Orientation::CounterClockwise => (0..=n).map(ccw).collect(),
            Orientation::Clockwise => (0..=n).map(|k| ccw(n - k) - TAU).collect(),
        }
    }

    /// Midpoint and tangent line element `R φ̂(θ_mid) Δθ` of every segment.
    pub fn segments(&self) -> impl Iterator<Item = (Cylindrical, Vec3)> + '_ {
        let angles = self.boundary_angles();
        (0..self.segments).map(move |k| {
            let (a, b) = (angles[k], angles[k + 1]);
            let mid = Cylindrical::new(self.radius, 0.5 * (a + b), self.z);
            (mid, mid.azimuthal_unit() * (self.radius * (b - a)))
        })
    }
}

/// Length of the static time leg during which the spin-field energy
/// accumulates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeLeg {
    pub tau: f64,
}

impl TimeLeg {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::InvalidTimeLeg(format!("tau must be finite and non-negative, got {tau}")));
        }
        Ok(TimeLeg { tau })
    }
}

/// Matrix-valued vector field `W` whose line integral is a phase matrix.
pub trait PhaseIntegrand {
    /// Cartesian components `(W₁, W₂, W₃)` at `point`.
    fn eval(&self, point: Cylindrical) -> Result<[SpinorMatrix; 3]>;
}

impl<F> PhaseIntegrand for F
where
    F: Fn(Cylindrical) -> Result<[SpinorMatrix; 3]>,
{
    fn eval(&self, point: Cylindrical) -> Result<[SpinorMatrix; 3]> {
        self(point)
    }
}

/// `W_i = ¼ β̂ [(α + χ)(E×B)]_i`.
pub fn induced_integrand(
    point: Cylindrical,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<[SpinorMatrix; 3]> {
    let f = config.eval_fields(point)?;
    let exb = f.e.cross(&f.b) * (0.25 * (params.alpha_pol + params.chi));
    Ok(std::array::from_fn(|i| basis.beta.scale(exb[i])))
}

/// `W_i = β̂ [μ(Σ⃗×E) + ¼(α + χ)(E×B)]_i`, with `(Σ⃗×E)_i = ε_{ijk}Σ^j E_k`.
pub fn anandan_integrand(
    point: Cylindrical,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<[SpinorMatrix; 3]> {
    let f = config.eval_fields(point)?;
    let e = f.e;
    let exb = e.cross(&f.b) * (0.25 * (params.alpha_pol + params.chi));
    let sigma_cross_e = [
        basis.sigma[1].scale(e.z) - basis.sigma[2].scale(e.y),
        basis.sigma[2].scale(e.x) - basis.sigma[0].scale(e.z),
        basis.sigma[0].scale(e.y) - basis.sigma[1].scale(e.x),
    ];
    Ok(std::array::from_fn(|i| {
        basis.beta * (sigma_cross_e[i].scale(params.mu) + SpinorMatrix::identity().scale(exb[i]))
    }))
}

/// Binds a configuration to [`induced_integrand`].
pub struct InducedIntegrand<'a> {
    pub config: &'a FieldConfiguration,
    pub params: DipoleParams,
    pub basis: &'a GammaBasis,
}

impl PhaseIntegrand for InducedIntegrand<'_> {
    fn eval(&self, point: Cylindrical) -> Result<[SpinorMatrix; 3]> {
        induced_integrand(point, self.config, &self.params, self.basis)
    }
}

/// Binds a configuration to [`anandan_integrand`].
pub struct AnandanIntegrand<'a> {
    pub config: &'a FieldConfiguration,
    pub params: DipoleParams,
    pub basis: &'a GammaBasis,
}

impl PhaseIntegrand for AnandanIntegrand<'_> {
    fn eval(&self, point: Cylindrical) -> Result<[SpinorMatrix; 3]> {
        anandan_integrand(point, self.config, &self.params, self.basis)
    }
}

/// `M_k = W(midpoint_k)·Δr_k` for every segment, in traversal order.
pub fn segment_matrices(path: &LoopPath, integrand: &dyn PhaseIntegrand) -> Result<Vec<SpinorMatrix>> {
    path.validate()?;
    path.segments()
        .map(|(mid, dr)| {
            let w = integrand.eval(mid)?;
            Ok(w[0].scale(dr.x) + w[1].scale(dr.y) + w[2].scale(dr.z))
        })
        .collect()
}

/// Midpoint-rule loop integral `Φ = ∮ W·dr`.
pub fn loop_phase_integral(path: &LoopPath, integrand: &dyn PhaseIntegrand) -> Result<SpinorMatrix> {
    Ok(segment_matrices(path, integrand)?.into_iter().sum())
}

/// Ordered product of segment exponentials, later segments on the left.
pub fn ordered_product(segments: &[SpinorMatrix]) -> Result<SpinorMatrix> {
    segments
        .iter()
        .try_fold(SpinorMatrix::identity(), |u, m| Ok(exp_i(1.0, m)? * u))
}

/// `U = P exp(i∮W·dr)`.
pub fn path_ordered_holonomy(path: &LoopPath, integrand: &dyn PhaseIntegrand) -> Result<SpinorMatrix> {
    ordered_product(&segment_matrices(path, integrand)?)
}

/// Largest `‖[M_j, M_k]‖` over all segment pairs. Zero means the ordering
/// of the product is irrelevant.
pub fn commutator_certificate(segments: &[SpinorMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for (j, a) in segments.iter().enumerate() {
        for b in &segments[j + 1..] {
            worst = worst.max(commutator(a, b).max_abs());
        }
    }
    worst
}

/// `μ β̂ (Σ⃗·B) τ` for a particle held at rest in a static, uniform `B`.
pub fn scalar_ab_phase(config: &FieldConfiguration, mu: f64, leg: &TimeLeg, basis: &GammaBasis) -> Result<SpinorMatrix> {
    let b = match config {
        FieldConfiguration::Wei { b0, .. } => Vec3::new(0.0, 0.0, *b0),
        FieldConfiguration::Uniform { b, .. } => *b,
        FieldConfiguration::Custom(_) => {
            return Err(Error::UnsupportedConfiguration(
                "the time leg needs a magnetic field known to be uniform".into(),
            ))
        }
    };
    Ok((basis.beta * basis.sigma_dot([b.x, b.y, b.z])).scale(mu * leg.tau))
}

/// Phase matrix, holonomy and their diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseResult {
    pub phi: SpinorMatrix,
    pub holonomy: SpinorMatrix,
    /// Principal values in `(−π, π]`, ascending.
    pub eigenphases: [f64; 4],
    pub coefficients: CommutingDecomposition,
    /// `‖U − exp(iΦ)‖`.
    pub ordering_discrepancy: f64,
    /// Max pairwise segment commutator; `None` for closed-form results.
    pub commutator_certificate: Option<f64>,
}

impl PhaseResult {
    fn assemble(
        phi: SpinorMatrix,
        holonomy: SpinorMatrix,
        commutator_certificate: Option<f64>,
        basis: &GammaBasis,
    ) -> Result<Self> {
        let ordering_discrepancy = holonomy.max_abs_diff(&exp_i(1.0, &phi)?);
        Ok(PhaseResult {
            phi,
            holonomy,
            eigenphases: eigenphases(&holonomy),
            coefficients: decompose_on_commuting_basis(&phi, basis),
            ordering_discrepancy,
            commutator_certificate,
        })
    }
}

/// Principal arguments of the eigenvalues of `u`, mapped into `(−π, π]` and
/// sorted.
pub fn eigenphases(u: &SpinorMatrix) -> [f64; 4] {
    let mut phases = u.eigenvalues().map(|z: Complex64| {
        let p = z.arg();
        if p <= -PI {
            p + TAU
        } else {
            p
        }
    });
    phases.sort_by(f64::total_cmp);
    phases
}

/// Closed-form phase for the line-charge configuration:
///
/// ```text
/// Φ = (2πμλ + μB₀τ) β̂Σ³ − (π/2)(α + χ)λB₀ β̂
/// ```
pub fn analytic_phase(
    config: &FieldConfiguration,
    params: &DipoleParams,
    leg: &TimeLeg,
    basis: &GammaBasis,
) -> Result<PhaseResult> {
    let (lambda, b0) = config.wei_parameters().ok_or_else(|| {
        Error::UnsupportedConfiguration("closed-form phases exist only for the Wei configuration".into())
    })?;
    let c_beta = -0.5 * PI * (params.alpha_pol + params.chi) * lambda * b0;
    let c_beta_sigma3 = TAU * params.mu * lambda + params.mu * b0 * leg.tau;
    let phi = basis.beta.scale(c_beta) + basis.beta_sigma3().scale(c_beta_sigma3);
    let holonomy = exp_i(1.0, &phi)?;
    PhaseResult::assemble(phi, holonomy, None, basis)
}

/// Numerical phase: loop integral and path-ordered holonomy of the Anandan
/// integrand, followed by the time leg.
///
/// The time leg is applied after the loop: `U = exp(iΦ_τ)·U_loop`.
pub fn numeric_phase(
    path: &LoopPath,
    config: &FieldConfiguration,
    params: &DipoleParams,
    leg: &TimeLeg,
    basis: &GammaBasis,
) -> Result<PhaseResult> {
    let integrand = AnandanIntegrand { config, params: *params, basis };
    let segments = segment_matrices(path, &integrand)?;
    let loop_phi: SpinorMatrix = segments.iter().copied().sum();
    let loop_u = ordered_product(&segments)?;
    let certificate = commutator_certificate(&segments);

    let (phi, holonomy) = if leg.tau > 0.0 && params.mu != 0.0 {
        let time_phi = scalar_ab_phase(config, params.mu, leg, basis)?;
        (loop_phi + time_phi, exp_i(1.0, &time_phi)? * loop_u)
    } else {
        (loop_phi, loop_u)
    };
    PhaseResult::assemble(phi, holonomy, Some(certificate), basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn wei(lambda: f64, b0: f64) -> FieldConfiguration {
        FieldConfiguration::wei(lambda, b0).unwrap()
    }

    #[test]
    fn induced_integrand_examples() {
        let basis = GammaBasis::dirac();
        let cfg = wei(1.0, 1.0);
        let p0 = Cylindrical::new(1.0, 0.0, 0.0);
        let w = induced_integrand(p0, &cfg, &DipoleParams::default(), &basis).unwrap();
        assert!(w.iter().all(|m| m.max_abs() == 0.0));

        let w = induced_integrand(p0, &cfg, &DipoleParams::polarizable(1.0), &basis).unwrap();
        assert_eq!(w[0].max_abs(), 0.0);
        assert!(w[1].max_abs_diff(&basis.beta.scale(-0.25)) < 1e-15);
        assert_eq!(w[2].max_abs(), 0.0);
    }

    #[test]
    fn tangential_component_is_radius_independent() {
        let basis = GammaBasis::dirac();
        let (lambda, b0, alpha) = (1.3, 0.7, 2.0);
        let cfg = wei(lambda, b0);
        let expected = basis.beta.scale(-0.25 * alpha * lambda * b0);
        for r in [0.5, 1.0, 3.0, 10.0] {
            for phi in [0.0, 1.0, 4.0] {
                let p = Cylindrical::new(r, phi, 0.0);
                let w = induced_integrand(p, &cfg, &DipoleParams::polarizable(alpha), &basis).unwrap();
                let t = p.azimuthal_unit() * r;
                let tangential = w[0].scale(t.x) + w[1].scale(t.y) + w[2].scale(t.z);
                assert!(tangential.max_abs_diff(&expected) < 1e-14);
            }
        }
    }

    #[test]
    fn anandan_integrand_examples() {
        let basis = GammaBasis::dirac();
        let cfg = wei(1.0, 1.0);
        let p = Cylindrical::new(1.0, 0.0, 0.0);
        let params = DipoleParams { alpha_pol: 0.6, chi: 0.2, ..Default::default() };
        let a = anandan_integrand(p, &cfg, &params, &basis).unwrap();
        let b = induced_integrand(p, &cfg, &params, &basis).unwrap();
        for i in 0..3 {
            assert!(a[i].max_abs_diff(&b[i]) < 1e-15);
        }

        let w = anandan_integrand(p, &wei(1.0, 0.0), &DipoleParams { mu: 1.0, ..Default::default() }, &basis).unwrap();
        let t = p.azimuthal_unit() * p.r;
        let tangential = w[0].scale(t.x) + w[1].scale(t.y) + w[2].scale(t.z);
        assert!(tangential.max_abs_diff(&basis.beta_sigma3()) < 1e-15);
    }

    #[test]
    fn anandan_loop_integral_is_aharonov_casher() {
        let basis = GammaBasis::dirac();
        let cfg = wei(1.0, 0.0);
        let integrand = AnandanIntegrand { config: &cfg, params: DipoleParams { mu: 1.0, ..Default::default() }, basis: &basis };
        let phi = loop_phase_integral(&LoopPath::circle(2.0, 1000).unwrap(), &integrand).unwrap();
        assert!(phi.max_abs_diff(&basis.beta_sigma3().scale(TAU)) < 1e-10);
    }

    #[test]
    fn zero_integrand() {
        let zero = |_: Cylindrical| Ok([SpinorMatrix::zero(); 3]);
        let path = LoopPath::circle(1.0, 17).unwrap();
        assert_eq!(loop_phase_integral(&path, &zero).unwrap(), SpinorMatrix::zero());
        assert_eq!(path_ordered_holonomy(&path, &zero).unwrap(), SpinorMatrix::identity());
    }

    #[test]
    fn wei_loop_phase_and_orientation() {
        let basis = GammaBasis::dirac();
        let cfg = wei(1.0, 1.0);
        let integrand = InducedIntegrand { config: &cfg, params: DipoleParams::polarizable(1.0), basis: &basis };
        for r in [0.5, 1.0, 10.0] {
            let path = LoopPath::circle(r, 1000).unwrap();
            let phi = loop_phase_integral(&path, &integrand).unwrap();
            assert!(phi.max_abs_diff(&basis.beta.scale(-FRAC_PI_2)) < 1e-10);
            let phi = loop_phase_integral(&path.reversed(), &integrand).unwrap();
            assert!(phi.max_abs_diff(&basis.beta.scale(FRAC_PI_2)) < 1e-10);
        }
    }

    #[test]
    fn wei_holonomy() {
        let basis = GammaBasis::dirac();
        let cfg = wei(1.0, 1.0);
        let integrand = InducedIntegrand { config: &cfg, params: DipoleParams::polarizable(1.0), basis: &basis };
        let u = path_ordered_holonomy(&LoopPath::circle(1.0, 10_000).unwrap(), &integrand).unwrap();
        let expected = basis.beta.scale_complex(Complex64::new(0.0, -1.0));
        assert!(u.max_abs_diff(&expected) < 1e-8);

        let cfg = wei(1.0, 0.0);
        let integrand = AnandanIntegrand { config: &cfg, params: DipoleParams { mu: 1.0, ..Default::default() }, basis: &basis };
        let u = path_ordered_holonomy(&LoopPath::circle(1.0, 10_000).unwrap(), &integrand).unwrap();
        assert!(u.max_abs_diff(&SpinorMatrix::identity()) < 1e-8);
    }

    #[test]
    fn scalar_ab_examples() {
        let basis = GammaBasis::dirac();
        let cfg = wei(1.0, 3.0);
        assert_eq!(scalar_ab_phase(&cfg, 2.0, &TimeLeg::new(0.0).unwrap(), &basis).unwrap().max_abs(), 0.0);
        let phase = scalar_ab_phase(&cfg, 2.0, &TimeLeg::new(0.5).unwrap(), &basis).unwrap();
        assert!(phase.max_abs_diff(&basis.beta_sigma3().scale(3.0)) < 1e-15);
        let d = decompose_on_commuting_basis(&phase, &basis);
        assert!((d.c_beta_sigma3 - 3.0).abs() < 1e-15);
        let custom = FieldConfiguration::custom(|_| crate::fields::FieldSample { e: Vec3::zeros(), b: Vec3::zeros() });
        assert!(scalar_ab_phase(&custom, 1.0, &TimeLeg::new(1.0).unwrap(), &basis).is_err());
    }

    #[test]
    fn analytic_phase_examples() {
        let basis = GammaBasis::dirac();
        let cfg = wei(1.0, 1.0);
        let none = TimeLeg::default();

        let r = analytic_phase(&cfg, &DipoleParams::polarizable(1.0), &none, &basis).unwrap();
        assert!((r.coefficients.c_beta + FRAC_PI_2).abs() < 1e-15);

        let r = analytic_phase(&cfg, &DipoleParams { chi: 1.0, ..Default::default() }, &none, &basis).unwrap();
        assert!((r.coefficients.c_beta + FRAC_PI_2).abs() < 1e-15);

        let p = DipoleParams { mu: 1.0, alpha_pol: 1.0, ..Default::default() };
        let r = analytic_phase(&cfg, &p, &TimeLeg::new(2.0).unwrap(), &basis).unwrap();
        assert!((r.coefficients.c_beta_sigma3 - (TAU + 2.0)).abs() < 1e-14);
        assert!((r.coefficients.c_beta + FRAC_PI_2).abs() < 1e-15);
        assert!(r.holonomy.unitarity_defect() < 1e-12);

        let uniform = FieldConfiguration::uniform(Vec3::zeros(), Vec3::zeros()).unwrap();
        assert!(analytic_phase(&uniform, &p, &none, &basis).is_err());
    }

    #[test]
    fn eigenphases_wrap() {
        // exp(2πi β̂Σ³) = I: eigenphases vanish while the coefficient is 2π.
        let basis = GammaBasis::dirac();
        let r = analytic_phase(&wei(1.0, 0.0), &DipoleParams { mu: 1.0, ..Default::default() }, &TimeLeg::default(), &basis).unwrap();
        assert!((r.coefficients.c_beta_sigma3 - TAU).abs() < 1e-15);
        assert!(r.eigenphases.iter().all(|p| p.abs() < 1e-12));
        // −I sits on the branch cut and is reported as +π.
        let minus = eigenphases(&SpinorMatrix::identity().scale(-1.0));
        assert_eq!(minus, [PI; 4]);
    }

    #[test]
    fn path_validation() {
        assert!(LoopPath::circle(0.0, 10).is_err());
        assert!(LoopPath::circle(1.0, 0).is_err());
        let p = LoopPath::circle(1.0, 10).unwrap();
        assert!(p.with_parametrization(Parametrization::Wobble { amplitude: 1.5 }).is_err());
        assert!(p.with_parametrization(Parametrization::Power { exponent: -1.0 }).is_err());
        assert!(TimeLeg::new(-1.0).is_err());
        assert!(TimeLeg::new(f64::INFINITY).is_err());
    }

    #[test]
    fn boundary_angles_close_the_loop() {
        let p = LoopPath::circle(1.0, 7).unwrap().with_parametrization(Parametrization::Power { exponent: 2.0 }).unwrap();
        let a = p.boundary_angles();
        assert_eq!((a[0], a[7]), (0.0, TAU));
        assert!(a.windows(2).all(|w| w[1] > w[0]));
        let a = p.reversed().boundary_angles();
        assert_eq!((a[0], a[7]), (0.0, -TAU));
        assert!(a.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn wei_field_rejected_on_axis_through_integrand() {
        let basis = GammaBasis::dirac();
        let cfg = wei(1.0, 1.0);
        assert!(induced_integrand(Cylindrical::new(0.0, 0.0, 0.0), &cfg, &DipoleParams::polarizable(1.0), &basis).is_err());
    }
}
