//! Planar cylindrical Dirac operators on a polar grid, plus diagnostics for
//! the phase-factor substitution `ψ = e^{iΦ(φ)} ψ₀`.
//!
//! With `p_z = 0` the operator is
//!
//! ```text
//! H ψ = m β̂ψ − iα̂¹(∂_r + 1/(2r))ψ − i(α̂²/r)∂_φψ + V(r, φ)ψ
//! ```
//!
//! where `α̂¹`, `α̂²` act along `r̂`, `φ̂` and the `1/(2r)` term comes from the
//! cylindrical scale factors `h_φ = r`. The potential is the closed form of
//! [`crate::coupling`] evaluated with the field components on the same local
//! frame `(r̂, φ̂, ẑ)`. The reduced operator drops the `E×B` cross term.
//!
//! Derivatives use fourth-order central differences, periodic in `φ` and
//! one-sided (still fourth order) at the two radial boundaries.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::coupling::{potential_parts, PotentialParts};
use crate::error::{Error, Result};
use crate::fields::{Cylindrical, DipoleParams, FieldConfiguration};
use crate::spinor::{exp_i, GammaBasis, Spinor, SpinorMatrix};

/// Smallest node count along either axis that the five-point stencils need.
pub const MIN_NODES: usize = 5;

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Uniform polar grid on `[r_min, r_max] × [0, 2π)`; `z` is suppressed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub nr: usize,
    pub nphi: usize,
}

impl PolarGrid {
    pub fn new(r_min: f64, r_max: f64, nr: usize, nphi: usize) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite()) {
            return Err(Error::NonFinite("polar grid"));
        }
        if r_min <= 0.0 {
            return Err(Error::InvalidGrid(format!("r_min must be > 0 to exclude the line charge, got {r_min}")));
        }
        if r_max <= r_min {
            return Err(Error::InvalidGrid(format!("r_max ({r_max}) must exceed r_min ({r_min})")));
        }
        if nr < MIN_NODES || nphi < MIN_NODES {
            return Err(Error::InvalidGrid(format!(
                "the fourth-order stencil needs at least {MIN_NODES} nodes per axis, got nr = {nr}, nphi = {nphi}"
            )));
        }
        if !nphi.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("nphi must be even, got {nphi}")));
        }
        Ok(PolarGrid { r_min, r_max, nr, nphi })
    }

    pub fn dr(&self) -> f64 {
        (self.r_max - self.r_min) / (self.nr - 1) as f64
    }

    pub fn dphi(&self) -> f64 {
        TAU / self.nphi as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        if i + 1 == self.nr {
            self.r_max
        } else {
            self.r_min + i as f64 * self.dr()
        }
    }

    pub fn phi(&self, j: usize) -> f64 {
        j as f64 * self.dphi()
    }

    pub fn len(&self) -> usize {
        self.nr * self.nphi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nphi + j
    }

    /// `(i, j, r, φ)` for every node, radial index outermost.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        (0..self.nr).flat_map(move |i| (0..self.nphi).map(move |j| (i, j, self.r(i), self.phi(j))))
    }
}

/// Spinor samples on a [`PolarGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    pub grid: PolarGrid,
    pub values: Vec<Spinor>,
}

impl SpinorField {
    pub fn zeros(grid: PolarGrid) -> Self {
        SpinorField { grid, values: vec![Spinor::zeros(); grid.len()] }
    }

    pub fn from_fn(grid: PolarGrid, mut f: impl FnMut(f64, f64) -> Spinor) -> Self {
        SpinorField { grid, values: grid.nodes().map(|(_, _, r, phi)| f(r, phi)).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Spinor {
        &self.values[self.grid.index(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|s| s.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &SpinorField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    pub fn zip_with(&self, other: &SpinorField, f: impl Fn(&Spinor, &Spinor) -> Spinor) -> SpinorField {
        SpinorField {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// `⟨self|other⟩ = Σ ψ†χ r Δr Δφ`.
    pub fn inner(&self, other: &SpinorField) -> Complex64 {
        let g = self.grid;
        let w = g.dr() * g.dphi();
        g.nodes()
            .map(|(i, j, r, _)| self.get(i, j).dotc(other.get(i, j)) * (r * w))
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().flat_map(|s| s.iter()).all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Fourth-order first derivative along `r`.
pub fn radial_derivative(field: &SpinorField) -> Vec<Spinor> {
    let g = field.grid;
    let (n, h) = (g.nr, g.dr());
    let mut out = vec![Spinor::zeros(); g.len()];
    for j in 0..g.nphi {
        for i in 0..n {
            let w: [(usize, f64); 5] = if i == 0 {
                [(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)]
            } else if i == 1 {
                [(0, -3.0), (1, -10.0), (2, 18.0), (3, -6.0), (4, 1.0)]
            } else if i == n - 2 {
                [(n - 1, 3.0), (n - 2, 10.0), (n - 3, -18.0), (n - 4, 6.0), (n - 5, -1.0)]
            } else if i == n - 1 {
                [(n - 1, 25.0), (n - 2, -48.0), (n - 3, 36.0), (n - 4, -16.0), (n - 5, 3.0)]
            } else {
                [(i - 2, 1.0), (i - 1, -8.0), (i, 0.0), (i + 1, 8.0), (i + 2, -1.0)]
            };
            let d: Spinor = w.iter().map(|&(k, c)| field.get(k, j) * real(c)).sum();
            out[g.index(i, j)] = d * real(1.0 / (12.0 * h));
        }
    }
    out
}

/// Fourth-order periodic first derivative along `φ`.
pub fn azimuthal_derivative(field: &SpinorField) -> Vec<Spinor> {
    let g = field.grid;
    let (n, h) = (g.nphi, g.dphi());
    let mut out = vec![Spinor::zeros(); g.len()];
    for i in 0..g.nr {
        let at = |j: usize| *field.get(i, j % n);
        for j in 0..n {
            let d = at(j + n - 2) - at(j + n - 1) * real(8.0) + at(j + 1) * real(8.0) - at(j + 2);
            out[g.index(i, j)] = d * real(1.0 / (12.0 * h));
        }
    }
    out
}

/// Which of the two planar operators to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// Kinetic terms plus the full induced-dipole potential.
    Full,
    /// Same without the `E×B` cross term.
    Reduced,
}

/// Potential pieces at `(r, φ)` with fields resolved on `(r̂, φ̂, ẑ)`.
pub fn local_potential(
    r: f64,
    phi: f64,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<PotentialParts> {
    let point = Cylindrical::new(r, phi, 0.0);
    let f = config.eval_fields(point)?;
    let e = point.to_local_frame(&f.e);
    let b = point.to_local_frame(&f.b);
    Ok(potential_parts(&e, &b, params, basis))
}

fn potential_for(kind: OperatorKind, parts: &PotentialParts) -> SpinorMatrix {
    match kind {
        OperatorKind::Full => parts.cross + parts.local,
        OperatorKind::Reduced => parts.local,
    }
}

/// The operator at one node given the spinor and its two derivatives.
#[allow(clippy::too_many_arguments)]
fn apply_at_node(
    kind: OperatorKind,
    r: f64,
    psi: &Spinor,
    d_r: &Spinor,
    d_phi: &Spinor,
    potential: &PotentialParts,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Spinor {
    let mass = basis.beta.apply(psi) * Complex64::new(params.m, 0.0);
    let radial = basis.alpha[0].apply(&(d_r + psi * real(1.0 / (2.0 * r)))) * MINUS_I;
    let azimuthal = basis.alpha[1].apply(d_phi) * (MINUS_I / r);
    mass + radial + azimuthal + potential_for(kind, potential).apply(psi)
}

pub fn apply_operator(
    kind: OperatorKind,
    field: &SpinorField,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<SpinorField> {
    let g = field.grid;
    let d_r = radial_derivative(field);
    let d_phi = azimuthal_derivative(field);
    let mut out = Vec::with_capacity(g.len());
    for (i, j, r, phi) in g.nodes() {
        let k = g.index(i, j);
        let parts = local_potential(r, phi, config, params, basis)?;
        out.push(apply_at_node(kind, r, &field.values[k], &d_r[k], &d_phi[k], &parts, params, basis));
    }
    Ok(SpinorField { grid: g, values: out })
}

/// Discrete `Hψ` with the full potential.
pub fn apply_full_operator(
    field: &SpinorField,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<SpinorField> {
    apply_operator(OperatorKind::Full, field, config, params, basis)
}

/// Discrete `H₀ψ`, the operator left after the phase factor has absorbed
/// the cross term.
pub fn apply_reduced_operator(
    field: &SpinorField,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<SpinorField> {
    apply_operator(OperatorKind::Reduced, field, config, params, basis)
}

/// A spinor field known in closed form together with its first derivatives.
pub trait AnalyticSpinor {
    fn value(&self, r: f64, phi: f64) -> Spinor;
    fn d_r(&self, r: f64, phi: f64) -> Spinor;
    fn d_phi(&self, r: f64, phi: f64) -> Spinor;

    fn sample(&self, grid: PolarGrid) -> SpinorField {
        SpinorField::from_fn(grid, |r, phi| self.value(r, phi))
    }
}

/// Radial envelope of a manufactured mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialProfile {
    Constant,
    /// `exp(−((r − center)/width)²)`.
    Gaussian { center: f64, width: f64 },
    /// `sin(k r + shift)`.
    Sine { k: f64, shift: f64 },
}

impl RadialProfile {
    fn value(&self, r: f64) -> f64 {
        match *self {
            RadialProfile::Constant => 1.0,
            RadialProfile::Gaussian { center, width } => (-((r - center) / width).powi(2)).exp(),
            RadialProfile::Sine { k, shift } => (k * r + shift).sin(),
        }
    }

    fn derivative(&self, r: f64) -> f64 {
        match *self {
            RadialProfile::Constant => 0.0,
            RadialProfile::Gaussian { center, width } => {
                let x = (r - center) / width;
                -2.0 * x / width * (-x * x).exp()
            }
            RadialProfile::Sine { k, shift } => k * (k * r + shift).cos(),
        }
    }
}

/// `f(r) e^{iℓφ} s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mode {
    pub profile: RadialProfile,
    pub ell: i32,
    pub spinor: Spinor,
}

impl Mode {
    pub fn new(profile: RadialProfile, ell: i32, spinor: Spinor) -> Self {
        Mode { profile, ell, spinor }
    }

    fn angular(&self, phi: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.ell as f64 * phi)
    }
}

/// Superposition of modes, periodic in `φ` and smooth in `r`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ManufacturedSpinor {
    pub modes: Vec<Mode>,
}

impl ManufacturedSpinor {
    pub fn single(mode: Mode) -> Self {
        ManufacturedSpinor { modes: vec![mode] }
    }

    /// The same spinor at every point.
    pub fn constant(spinor: Spinor) -> Self {
        Self::single(Mode::new(RadialProfile::Constant, 0, spinor))
    }
}

impl AnalyticSpinor for ManufacturedSpinor {
    fn value(&self, r: f64, phi: f64) -> Spinor {
        self.modes
            .iter()
            .map(|m| m.spinor * (m.angular(phi) * m.profile.value(r)))
            .sum()
    }

    fn d_r(&self, r: f64, phi: f64) -> Spinor {
        self.modes
            .iter()
            .map(|m| m.spinor * (m.angular(phi) * m.profile.derivative(r)))
            .sum()
    }

    fn d_phi(&self, r: f64, phi: f64) -> Spinor {
        self.modes
            .iter()
            .map(|m| m.spinor * (m.angular(phi) * Complex64::new(0.0, m.ell as f64) * m.profile.value(r)))
            .sum()
    }
}

/// `Hψ` at a point from exact derivatives; the reference the discrete
/// operators converge to.
pub fn apply_operator_exact(
    kind: OperatorKind,
    psi: &dyn AnalyticSpinor,
    r: f64,
    phi: f64,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<Spinor> {
    let parts = local_potential(r, phi, config, params, basis)?;
    Ok(apply_at_node(
        kind,
        r,
        &psi.value(r, phi),
        &psi.d_r(r, phi),
        &psi.d_phi(r, phi),
        &parts,
        params,
        basis,
    ))
}

/// Max-abs distance between the discrete and the exact operator on a grid.
pub fn discretization_error(
    kind: OperatorKind,
    psi: &dyn AnalyticSpinor,
    grid: PolarGrid,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<f64> {
    let discrete = apply_operator(kind, &psi.sample(grid), config, params, basis)?;
    let mut worst = 0.0f64;
    for (i, j, r, phi) in grid.nodes() {
        let exact = apply_operator_exact(kind, psi, r, phi, config, params, basis)?;
        let d = (discrete.get(i, j) - exact).iter().map(|z| z.norm()).fold(0.0, f64::max);
        worst = worst.max(d);
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RefinementLevel {
    pub nr: usize,
    pub nphi: usize,
    pub dr: f64,
    pub error: f64,
}

/// Errors over a refinement sweep and the fitted log-log slope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub kind: OperatorKind,
    pub levels: Vec<RefinementLevel>,
    pub observed_order: f64,
}

/// Least-squares slope of `log(error)` against `log(h)`.
pub fn fitted_order(h: &[f64], err: &[f64]) -> f64 {
    let xs: Vec<f64> = h.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|x| x.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Runs [`discretization_error`] on a sequence of grids over the same annulus.
///
/// Each level is `(nr, nphi)`; both spacings should shrink by the same
/// factor between levels for the slope to be meaningful.
#[allow(clippy::too_many_arguments)]
pub fn convergence_study(
    kind: OperatorKind,
    psi: &dyn AnalyticSpinor,
    r_min: f64,
    r_max: f64,
    levels: &[(usize, usize)],
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<ConvergenceStudy> {
    if levels.len() < 2 {
        return Err(Error::InvalidGrid("a convergence study needs at least two levels".into()));
    }
    let mut rows = Vec::with_capacity(levels.len());
    for &(nr, nphi) in levels {
        let grid = PolarGrid::new(r_min, r_max, nr, nphi)?;
        let error = discretization_error(kind, psi, grid, config, params, basis)?;
        rows.push(RefinementLevel { nr, nphi, dr: grid.dr(), error });
    }
    let h: Vec<f64> = rows.iter().map(|l| l.dr).collect();
    let e: Vec<f64> = rows.iter().map(|l| l.error).collect();
    Ok(ConvergenceStudy { kind, levels: rows, observed_order: fitted_order(&h, &e) })
}

/// Rate `c` in `Φ(φ) = c φ β̂`: `c = −¼(α + χ)λB₀`.
pub fn phase_rate(config: &FieldConfiguration, params: &DipoleParams) -> Result<f64> {
    let (lambda, b0) = config.wei_parameters().ok_or_else(|| {
        Error::UnsupportedConfiguration("the phase factor is defined for the Wei configuration".into())
    })?;
    Ok(-0.25 * (params.alpha_pol + params.chi) * lambda * b0)
}

/// `exp(iΦ(φ))`, the open-path accumulation of the loop phase from angle 0.
pub fn phase_factor(rate: f64, phi: f64, basis: &GammaBasis) -> Result<SpinorMatrix> {
    exp_i(rate * phi, &basis.beta)
}

/// `(r, φ) ↦ exp(iΦ(φ))` on every node, laid out like [`SpinorField`].
pub fn phase_factor_field(
    grid: PolarGrid,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<Vec<SpinorMatrix>> {
    let rate = phase_rate(config, params)?;
    grid.nodes().map(|(_, _, _, phi)| phase_factor(rate, phi, basis)).collect()
}

fn spinor_norm(s: &Spinor) -> f64 {
    s.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Node-local pieces of `H(e^{iΦ}ψ₀) − e^{iΦ}H₀ψ₀`.
struct NodeTerms {
    mass: Spinor,
    radial: Spinor,
    azimuthal_transport: Spinor,
    local_potential: Spinor,
    cross_cancellation: Spinor,
}

fn node_terms(
    psi0: &dyn AnalyticSpinor,
    r: f64,
    phi: f64,
    rate: f64,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<NodeTerms> {
    let p = phase_factor(rate, phi, basis)?;
    let dp = (basis.beta * p).scale_complex(Complex64::new(0.0, rate));
    let psi = psi0.value(r, phi);
    let d_r = psi0.d_r(r, phi);
    let d_phi = psi0.d_phi(r, phi);
    let parts = local_potential(r, phi, config, params, basis)?;

    let radial_op = basis.alpha[0].scale_complex(MINUS_I);
    let azimuthal_op = basis.alpha[1].scale_complex(MINUS_I / r);
    let mass_op = basis.beta.scale(params.m);
    let comm = |a: &SpinorMatrix| *a * p - p * *a;

    Ok(NodeTerms {
        mass: comm(&mass_op).apply(&psi),
        radial: comm(&radial_op).apply(&(d_r + psi * real(1.0 / (2.0 * r)))),
        azimuthal_transport: comm(&azimuthal_op).apply(&d_phi),
        local_potential: comm(&parts.local).apply(&psi),
        cross_cancellation: (azimuthal_op * dp + parts.cross * p).apply(&psi),
    })
}

/// Max-abs residual of the displayed substitution identity
///
/// ```text
/// −i(α̂²/r) (∂_φ e^{iΦ}) ψ₀ + ¼β̂α⃗·[(α + χ)E×B] e^{iΦ} ψ₀ = 0
/// ```
///
/// over the grid nodes, with `ψ₀` evaluated exactly.
pub fn azimuthal_cancellation_residual(
    psi0: &dyn AnalyticSpinor,
    grid: PolarGrid,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<f64> {
    let rate = phase_rate(config, params)?;
    let mut worst = 0.0f64;
    for (_, _, r, phi) in grid.nodes() {
        let t = node_terms(psi0, r, phi, rate, config, params, basis)?;
        worst = worst.max(spinor_norm(&t.cross_cancellation));
    }
    Ok(worst)
}

/// Term-by-term breakdown of `H(e^{iΦ}ψ₀) − e^{iΦ}H₀ψ₀`.
///
/// Only the cross-term cancellation is expected to vanish. The radial and
/// azimuthal-transport pieces are generally nonzero because `e^{iΦ}`, with
/// `Φ ∝ β̂`, does not commute with `α̂¹` or `α̂²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub mass: f64,
    pub radial: f64,
    pub azimuthal_transport: f64,
    pub local_potential: f64,
    pub cross_cancellation: f64,
    pub total: f64,
    /// Max over `r` of the radial piece at each azimuthal node.
    pub radial_by_azimuth: Vec<f64>,
}

pub fn full_factorization_residual(
    psi0: &dyn AnalyticSpinor,
    grid: PolarGrid,
    config: &FieldConfiguration,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> Result<FactorizationReport> {
    let rate = phase_rate(config, params)?;
    let mut report = FactorizationReport {
        mass: 0.0,
        radial: 0.0,
        azimuthal_transport: 0.0,
        local_potential: 0.0,
        cross_cancellation: 0.0,
        total: 0.0,
        radial_by_azimuth: vec![0.0; grid.nphi],
    };
    for (_, j, r, phi) in grid.nodes() {
        let t = node_terms(psi0, r, phi, rate, config, params, basis)?;
        let radial = spinor_norm(&t.radial);
        report.mass = report.mass.max(spinor_norm(&t.mass));
        report.radial = report.radial.max(radial);
        report.azimuthal_transport = report.azimuthal_transport.max(spinor_norm(&t.azimuthal_transport));
        report.local_potential = report.local_potential.max(spinor_norm(&t.local_potential));
        report.cross_cancellation = report.cross_cancellation.max(spinor_norm(&t.cross_cancellation));
        let total = t.mass + t.radial + t.azimuthal_transport + t.local_potential + t.cross_cancellation;
        report.total = report.total.max(spinor_norm(&total));
        report.radial_by_azimuth[j] = report.radial_by_azimuth[j].max(radial);
    }
    Ok(report)
}
