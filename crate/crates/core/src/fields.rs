//! Field configurations and the antisymmetric tensors `F_{μν}` and `K_{μν}`.
//!
//! Tensors carry both indices down, index 0 is time, and the spatial
//! orientation is right-handed with `ε₁₂₃ = +1`.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// A point in cylindrical coordinates `(r, φ, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cylindrical {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl Cylindrical {
    pub fn new(r: f64, phi: f64, z: f64) -> Self {
        Cylindrical { r, phi, z }
    }

    pub fn radial_unit(&self) -> Vec3 {
        Vec3::new(self.phi.cos(), self.phi.sin(), 0.0)
    }

    pub fn azimuthal_unit(&self) -> Vec3 {
        Vec3::new(-self.phi.sin(), self.phi.cos(), 0.0)
    }

    pub fn to_cartesian(&self) -> Vec3 {
        Vec3::new(self.r * self.phi.cos(), self.r * self.phi.sin(), self.z)
    }

    /// Components of a Cartesian vector on the local frame `(r̂, φ̂, ẑ)`.
    pub fn to_local_frame(&self, v: &Vec3) -> Vec3 {
        Vec3::new(v.dot(&self.radial_unit()), v.dot(&self.azimuthal_unit()), v.z)
    }
}

/// Electric and magnetic field at a point, Cartesian components.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldSample {
    pub e: Vec3,
    pub b: Vec3,
}

type Evaluator = dyn Fn(Cylindrical) -> FieldSample + Send + Sync;

/// User-supplied field map, used mainly by property tests.
#[derive(Clone)]
pub struct CustomField(Arc<Evaluator>);

impl CustomField {
    pub fn new(f: impl Fn(Cylindrical) -> FieldSample + Send + Sync + 'static) -> Self {
        CustomField(Arc::new(f))
    }
}

impl fmt::Debug for CustomField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomField(..)")
    }
}

/// A static electromagnetic field configuration.
#[derive(Clone, Debug)]
pub enum FieldConfiguration {
    /// Radial field of a line charge along ẑ plus a uniform axial magnetic
    /// field: `E = (λ/r) r̂`, `B = B₀ ẑ`.
    Wei { lambda: f64, b0: f64 },
    Uniform { e: Vec3, b: Vec3 },
    Custom(CustomField),
}

impl FieldConfiguration {
    pub fn wei(lambda: f64, b0: f64) -> Result<Self> {
        if !lambda.is_finite() || !b0.is_finite() {
            return Err(Error::NonFinite("Wei configuration"));
        }
        Ok(FieldConfiguration::Wei { lambda, b0 })
    }

    pub fn uniform(e: Vec3, b: Vec3) -> Result<Self> {
        if !e.iter().chain(b.iter()).all(|x| x.is_finite()) {
            return Err(Error::NonFinite("uniform configuration"));
        }
        Ok(FieldConfiguration::Uniform { e, b })
    }

    pub fn custom(f: impl Fn(Cylindrical) -> FieldSample + Send + Sync + 'static) -> Self {
        FieldConfiguration::Custom(CustomField::new(f))
    }

    /// `(λ, B₀)` for the Wei configuration.
    pub fn wei_parameters(&self) -> Option<(f64, f64)> {
        match *self {
            FieldConfiguration::Wei { lambda, b0 } => Some((lambda, b0)),
            _ => None,
        }
    }

    /// Fields at a cylindrical point, returned in Cartesian components.
    pub fn eval_fields(&self, point: Cylindrical) -> Result<FieldSample> {
        match self {
            FieldConfiguration::Wei { lambda, b0 } => {
                if point.r.is_nan() || point.r <= 0.0 {
                    return Err(Error::LineChargeSingularity { r: point.r });
                }
                Ok(FieldSample {
                    e: point.radial_unit() * (lambda / point.r),
                    b: Vec3::new(0.0, 0.0, *b0),
                })
            }
            FieldConfiguration::Uniform { e, b } => Ok(FieldSample { e: *e, b: *b }),
            FieldConfiguration::Custom(f) => Ok((f.0)(point)),
        }
    }
}

/// `λ = ρR₀²/2` for a uniformly charged cylinder of radius `R₀`.
pub fn lambda_from_volume_charge(rho: f64, r0: f64) -> f64 {
    rho * r0 * r0 / 2.0
}

/// Induced-moment response and permanent dipole of the neutral particle,
/// in natural units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DipoleParams {
    #[serde(default)]
    pub m: f64,
    /// Electric polarizability.
    #[serde(default)]
    pub alpha_pol: f64,
    /// Magnetic susceptibility.
    #[serde(default)]
    pub chi: f64,
    /// Permanent magnetic dipole moment.
    #[serde(default)]
    pub mu: f64,
}

impl DipoleParams {
    pub fn new(m: f64, alpha_pol: f64, chi: f64, mu: f64) -> Result<Self> {
        let p = DipoleParams { m, alpha_pol, chi, mu };
        p.validate()?;
        Ok(p)
    }

    /// Only the electric polarizability is nonzero.
    pub fn polarizable(alpha_pol: f64) -> Self {
        DipoleParams { alpha_pol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.m, self.alpha_pol, self.chi, self.mu].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("dipole parameters"));
        }
        if self.m < 0.0 {
            return Err(Error::InvalidParams(format!("mass must be non-negative, got {}", self.m)));
        }
        Ok(())
    }
}

/// Antisymmetric rank-2 tensor with both indices down.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Tensor2 {
    pub entries: [[f64; 4]; 4],
}

impl Tensor2 {
    pub fn zero() -> Self {
        Tensor2::default()
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.entries[mu][nu]
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..4).all(|m| (0..4).all(|n| self.entries[m][n] == -self.entries[n][m]))
    }

    pub fn max_abs_diff(&self, other: &Tensor2) -> f64 {
        let mut d = 0.0f64;
        for m in 0..4 {
            for n in 0..4 {
                d = d.max((self.entries[m][n] - other.entries[m][n]).abs());
            }
        }
        d
    }
}

/// Levi-Civita symbol on spatial indices `0..3`, `ε₀₁₂ = +1`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `F_{0i} = −E_i`, `F_{ij} = ε_{ijk}B^k`.
pub fn field_tensor(e: &Vec3, b: &Vec3) -> Tensor2 {
    let mut t = Tensor2::zero();
    for i in 0..3 {
        t.entries[0][i + 1] = -e[i];
        t.entries[i + 1][0] = e[i];
        for j in 0..3 {
            t.entries[i + 1][j + 1] = (0..3).map(|k| levi_civita(i, j, k) * b[k]).sum();
        }
    }
    t
}

/// `K_{0i} = −α E_i`, `K_{ij} = −χ ε_{ijk}B^k`.
///
/// Built directly from its components; [`field_tensor`] evaluated at
/// `(αE, −χB)` must give the same tensor.
pub fn moment_tensor(e: &Vec3, b: &Vec3, params: &DipoleParams) -> Tensor2 {
    let mut t = Tensor2::zero();
    for i in 0..3 {
        t.entries[0][i + 1] = -params.alpha_pol * e[i];
        t.entries[i + 1][0] = params.alpha_pol * e[i];
        for j in 0..3 {
            t.entries[i + 1][j + 1] =
                -params.chi * (0..3).map(|k| levi_civita(i, j, k) * b[k]).sum::<f64>();
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    fn close(a: &Vec3, b: &Vec3) -> bool {
        (a - b).amax() < 1e-15
    }

    #[test]
    fn wei_examples() {
        let cfg = FieldConfiguration::wei(2.0, 1.0).unwrap();
        let s = cfg.eval_fields(Cylindrical::new(2.0, 0.0, 0.0)).unwrap();
        assert!(close(&s.e, &v(1.0, 0.0, 0.0)));
        assert!(close(&s.b, &v(0.0, 0.0, 1.0)));

        let cfg = FieldConfiguration::wei(1.0, 1.0).unwrap();
        let s = cfg.eval_fields(Cylindrical::new(1.0, FRAC_PI_2, 5.0)).unwrap();
        assert!(close(&s.e, &v(0.0, 1.0, 0.0)));
        assert!(close(&s.b, &v(0.0, 0.0, 1.0)));
    }

    #[test]
    fn wei_rejects_axis() {
        let cfg = FieldConfiguration::wei(1.0, 1.0).unwrap();
        for r in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                cfg.eval_fields(Cylindrical::new(r, 0.0, 0.0)),
                Err(Error::LineChargeSingularity { .. })
            ));
        }
    }

    #[test]
    fn uniform_zero() {
        let cfg = FieldConfiguration::uniform(Vec3::zeros(), Vec3::zeros()).unwrap();
        let s = cfg.eval_fields(Cylindrical::new(3.0, 1.0, -2.0)).unwrap();
        assert_eq!(s.e, Vec3::zeros());
        assert_eq!(s.b, Vec3::zeros());
    }

    #[test]
    fn volume_charge_lambda() {
        assert_eq!(lambda_from_volume_charge(2.0, 1.0), 1.0);
        assert_eq!(lambda_from_volume_charge(0.0, 5.0), 0.0);
        assert_eq!(lambda_from_volume_charge(1.0, 2.0), 2.0);
    }

    #[test]
    fn field_tensor_examples() {
        let f = field_tensor(&v(3.0, 0.0, 0.0), &Vec3::zeros());
        assert_eq!(f.get(0, 1), -3.0);
        assert_eq!(f.get(1, 0), 3.0);
        let nonzero = f.entries.iter().flatten().filter(|x| **x != 0.0).count();
        assert_eq!(nonzero, 2);

        let f = field_tensor(&Vec3::zeros(), &v(0.0, 0.0, 2.0));
        assert_eq!(f.get(1, 2), 2.0);
        assert_eq!(f.get(2, 1), -2.0);

        assert_eq!(field_tensor(&Vec3::zeros(), &Vec3::zeros()), Tensor2::zero());
    }

    #[test]
    fn moment_tensor_examples() {
        let e = v(1.0, 0.0, 0.0);
        let k = moment_tensor(&e, &Vec3::zeros(), &DipoleParams::polarizable(2.0));
        assert_eq!(k.get(0, 1), -2.0);

        let p = DipoleParams { chi: 3.0, ..Default::default() };
        let k = moment_tensor(&Vec3::zeros(), &v(0.0, 0.0, 1.0), &p);
        assert_eq!(k.get(1, 2), -3.0);

        let k = moment_tensor(&v(1.0, 2.0, 3.0), &v(-1.0, 0.5, 2.0), &DipoleParams::default());
        assert_eq!(k.max_abs_diff(&Tensor2::zero()), 0.0);
    }

    #[test]
    fn params_validation() {
        assert!(DipoleParams::new(1.0, 0.5, 0.0, 0.0).is_ok());
        assert!(DipoleParams::new(-1.0, 0.5, 0.0, 0.0).is_err());
        assert!(DipoleParams::new(1.0, f64::NAN, 0.0, 0.0).is_err());
    }

    fn vec3() -> impl Strategy<Value = Vec3> {
        prop::array::uniform3(-10.0f64..10.0).prop_map(|a| Vec3::new(a[0], a[1], a[2]))
    }

    proptest! {
        #[test]
        fn tensors_antisymmetric(e in vec3(), b in vec3(), a in -5.0f64..5.0, chi in -5.0f64..5.0) {
            let p = DipoleParams { alpha_pol: a, chi, ..Default::default() };
            prop_assert!(field_tensor(&e, &b).is_antisymmetric());
            prop_assert!(moment_tensor(&e, &b, &p).is_antisymmetric());
        }

        #[test]
        fn moment_tensor_is_substituted_field_tensor(e in vec3(), b in vec3(), a in -5.0f64..5.0, chi in -5.0f64..5.0) {
            let p = DipoleParams { alpha_pol: a, chi, ..Default::default() };
            let direct = moment_tensor(&e, &b, &p);
            let substituted = field_tensor(&(e * a), &(b * -chi));
            prop_assert_eq!(direct.max_abs_diff(&substituted), 0.0);
        }

        #[test]
        fn wei_geometry(lambda in -5.0f64..5.0, b0 in 0.0f64..5.0, r in 0.01f64..100.0, phi in -7.0f64..7.0, z in -10.0f64..10.0) {
            let cfg = FieldConfiguration::wei(lambda, b0).unwrap();
            let s = cfg.eval_fields(Cylindrical::new(r, phi, z)).unwrap();
            prop_assert!((r * s.e.norm() - lambda.abs()).abs() <= 1e-12 * lambda.abs().max(1.0));
            prop_assert!(s.e.dot(&s.b).abs() < 1e-12);
            prop_assert_eq!(s.b, Vec3::new(0.0, 0.0, b0));
            let s0 = cfg.eval_fields(Cylindrical::new(r, phi, 0.0)).unwrap();
            prop_assert_eq!(s.e, s0.e);
            // rotating φ by δ rotates E by δ about ẑ
            let delta = 0.7;
            let rotated = cfg.eval_fields(Cylindrical::new(r, phi + delta, z)).unwrap();
            let rot = nalgebra::Rotation3::from_axis_angle(&Vec3::z_axis(), delta);
            prop_assert!((rot * s.e - rotated.e).amax() < 1e-12 * lambda.abs().max(1.0) / r.min(1.0));
            prop_assert_eq!(rotated.b, s.b);
        }
    }
}
