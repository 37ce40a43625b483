//! The nonminimal induced-dipole coupling and its Hamiltonian form.
//!
//! The covariant equation
//!
//! ```text
//! m Ψ = iγ^μ∂_μ Ψ − C Ψ + T Ψ,
//! C = ¼ η^{αβ} K_{μα} F_{βν} γ^μ γ^ν,      T = (μ/2) Σ^{βν} F_{βν}
//! ```
//!
//! is brought to Hamiltonian form by isolating `iγ⁰∂_t Ψ` and multiplying
//! through by `γ⁰ = β̂`, so the interaction enters `H` as `β̂C − β̂T`.
//! Evaluating `β̂C` gives
//!
//! ```text
//! ¼ β̂ α⃗·[(α + χ) E×B] − ½ (α E² + χ B²) β̂
//! ```
//!
//! and `−β̂T` gives `iμ β̂ α⃗·E − μ β̂ Σ⃗·B`. Both routes are implemented here
//! independently and [`verify_reduction`] / [`verify_dipole_reduction`]
//! measure how far apart they are.
//!
//! The cross term `¼β̂α⃗·X` is anti-Hermitian (`β̂α̂ⁱ` is), while the local
//! `E²`, `B²` terms and both dipole terms are Hermitian.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{field_tensor, moment_tensor, DipoleParams, FieldConfiguration, Tensor2, Vec3};
use crate::spinor::{GammaBasis, SpinorMatrix};

/// Interaction matrix together with the inputs it was evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PotentialMatrix {
    pub value: SpinorMatrix,
    pub e: Vec3,
    pub b: Vec3,
    pub params: DipoleParams,
}

/// The two pieces of the induced-dipole potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialParts {
    /// `¼β̂α⃗·[(α + χ)E×B]`, the part a phase factor can absorb.
    pub cross: SpinorMatrix,
    /// `−½(αE² + χB²)β̂`, local and loop-free.
    pub local: SpinorMatrix,
}

fn eta(a: usize, b: usize) -> f64 {
    if a == b {
        crate::spinor::METRIC[a]
    } else {
        0.0
    }
}

/// `C = ¼ Σ η^{αβ} K_{μα} F_{βν} γ^μ γ^ν`, summed over all 256 index
/// combinations.
pub fn contraction_term(f: &Tensor2, k: &Tensor2, basis: &GammaBasis) -> SpinorMatrix {
    let mut c = SpinorMatrix::zero();
    for mu in 0..4 {
        for nu in 0..4 {
            let mut weight = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    weight += eta(a, b) * k.get(mu, a) * f.get(b, nu);
                }
            }
            if weight != 0.0 {
                c += (basis.gamma[mu] * basis.gamma[nu]).scale(0.25 * weight);
            }
        }
    }
    c
}

pub fn potential_parts(e: &Vec3, b: &Vec3, params: &DipoleParams, basis: &GammaBasis) -> PotentialParts {
    let exb = e.cross(b) * (params.alpha_pol + params.chi);
    let cross = (basis.beta * basis.alpha_dot([exb.x, exb.y, exb.z])).scale(0.25);
    let local = basis
        .beta
        .scale(-0.5 * (params.alpha_pol * e.norm_squared() + params.chi * b.norm_squared()));
    PotentialParts { cross, local }
}

/// Closed-form induced-dipole potential assembled from explicit cross and
/// dot products.
pub fn closed_form_potential(
    e: &Vec3,
    b: &Vec3,
    params: &DipoleParams,
    basis: &GammaBasis,
) -> PotentialMatrix {
    let parts = potential_parts(e, b, params, basis);
    PotentialMatrix { value: parts.cross + parts.local, e: *e, b: *b, params: *params }
}

/// `‖β̂·C − V‖`, the distance between the contraction route and the closed form.
pub fn verify_reduction(e: &Vec3, b: &Vec3, params: &DipoleParams, basis: &GammaBasis) -> f64 {
    let f = field_tensor(e, b);
    let k = moment_tensor(e, b, params);
    let via_contraction = basis.beta * contraction_term(&f, &k, basis);
    via_contraction.max_abs_diff(&closed_form_potential(e, b, params, basis).value)
}

/// `iμβ̂(α⃗·E) − μβ̂(Σ⃗·B)`.
pub fn magnetic_dipole_hamiltonian(e: &Vec3, b: &Vec3, mu: f64, basis: &GammaBasis) -> PotentialMatrix {
    let electric = (basis.beta * basis.alpha_dot([e.x, e.y, e.z]))
        .scale_complex(num_complex::Complex64::new(0.0, mu));
    let magnetic = (basis.beta * basis.sigma_dot([b.x, b.y, b.z])).scale(-mu);
    PotentialMatrix {
        value: electric + magnetic,
        e: *e,
        b: *b,
        params: DipoleParams { mu, ..Default::default() },
    }
}

/// `T = (μ/2) Σ_{b,n} Σ^{bn} F_{bn}`, brute-force sum.
pub fn spin_field_term(f: &Tensor2, mu: f64, basis: &GammaBasis) -> SpinorMatrix {
    let mut t = SpinorMatrix::zero();
    for b in 0..4 {
        for n in 0..4 {
            t += basis.sigma_tensor(b, n).scale(f.get(b, n));
        }
    }
    t.scale(mu / 2.0)
}

/// `‖−β̂T − H_μ‖` for the permanent magnetic dipole term.
pub fn verify_dipole_reduction(e: &Vec3, b: &Vec3, mu: f64, basis: &GammaBasis) -> f64 {
    let t = spin_field_term(&field_tensor(e, b), mu, basis);
    let via_tensor = -(basis.beta * t);
    via_tensor.max_abs_diff(&magnetic_dipole_hamiltonian(e, b, mu, basis).value)
}

/// Scalar coefficient of `β̂` in the `E²` term for the line-charge
/// configuration: `−½ α λ² / r²`.
pub fn effective_inverse_square(params: &DipoleParams, config: &FieldConfiguration, r: f64) -> Result<f64> {
    let (lambda, _) = config.wei_parameters().ok_or_else(|| {
        Error::UnsupportedConfiguration("the inverse-square potential needs the Wei configuration".into())
    })?;
    if r.is_nan() || r <= 0.0 {
        return Err(Error::LineChargeSingularity { r });
    }
    Ok(-0.5 * params.alpha_pol * lambda * lambda / (r * r))
}

/// The `χ` analogue, `−½ χ B₀²`, which does not depend on `r`.
pub fn magnetic_local_term(params: &DipoleParams, config: &FieldConfiguration) -> Result<f64> {
    let (_, b0) = config.wei_parameters().ok_or_else(|| {
        Error::UnsupportedConfiguration("the B² term is defined for the Wei configuration".into())
    })?;
    Ok(-0.5 * params.chi * b0 * b0)
}
