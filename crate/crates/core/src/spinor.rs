//! Dirac-representation matrices and the 4×4 complex algebra built on them.
//!
//! Everything downstream (potentials, phase matrices, holonomies) is a
//! [`SpinorMatrix`]. The basis follows the Dirac representation with a
//! diagonal `β̂ = γ⁰`, off-diagonal `γⁱ = β̂α̂ⁱ` and block-diagonal spin
//! matrices `Σⁱ`. Multiplying the printed matrices out gives
//! `{γ^μ, γ^ν} = −2η^{μν}` for the mostly-plus metric `η = diag(−1, 1, 1, 1)`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A four-component Dirac spinor.
pub type Spinor = Vector4<Complex64>;

/// Minkowski metric `η^{μν}` (mostly plus).
pub const METRIC: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// The sign `s` in `{γ^μ, γ^ν} = s·2η^{μν}·I` for the Dirac-representation
/// matrices and [`METRIC`].
pub const CLIFFORD_SIGN: f64 = -1.0;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 4×4 complex matrix acting on Dirac spinors.
#[derive(Clone, Copy, PartialEq)]
pub struct SpinorMatrix(Matrix4<Complex64>);

impl SpinorMatrix {
    pub fn zero() -> Self {
        SpinorMatrix(Matrix4::zeros())
    }

    pub fn identity() -> Self {
        SpinorMatrix(Matrix4::identity())
    }

    pub fn from_fn(f: impl FnMut(usize, usize) -> Complex64) -> Self {
        SpinorMatrix(Matrix4::from_fn(f))
    }

    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Self {
        Self::from_fn(|i, j| rows[i][j])
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        Self::from_fn(|i, j| if i == j { Complex64::new(d[i], 0.0) } else { ZERO })
    }

    /// Builds a 4×4 matrix out of four 2×2 blocks `[[a, b], [c, d]]`.
    pub fn from_blocks(
        a: [[Complex64; 2]; 2],
        b: [[Complex64; 2]; 2],
        c: [[Complex64; 2]; 2],
        d: [[Complex64; 2]; 2],
    ) -> Self {
        Self::from_fn(|i, j| {
            let block = match (i / 2, j / 2) {
                (0, 0) => &a,
                (0, 1) => &b,
                (1, 0) => &c,
                _ => &d,
            };
            block[i % 2][j % 2]
        })
    }

    pub fn as_matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4<Complex64> {
        self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn scale(&self, s: f64) -> Self {
        SpinorMatrix(self.0 * Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        SpinorMatrix(self.0 * s)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        SpinorMatrix(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest entry modulus; the norm used for every tolerance check.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &SpinorMatrix) -> f64 {
        (*self - *other).max_abs()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..4)
            .map(|i| (0..4).map(|j| self.0[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        (*self + self.dagger()).max_abs() <= tol
    }

    /// `‖U†U − I‖` in the max-abs norm.
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self).max_abs_diff(&SpinorMatrix::identity())
    }

    pub fn apply(&self, psi: &Spinor) -> Spinor {
        self.0 * psi
    }

    /// Eigenvalues, through a complex Schur decomposition.
    pub fn eigenvalues(&self) -> [Complex64; 4] {
        let schur = nalgebra::Schur::new(self.0);
        let (_, t) = schur.unpack();
        [t[(0, 0)], t[(1, 1)], t[(2, 2)], t[(3, 3)]]
    }
}

impl fmt::Debug for SpinorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SpinorMatrix [")?;
        for i in 0..4 {
            write!(f, "  ")?;
            for j in 0..4 {
                let z = self.0[(i, j)];
                write!(f, "{:>+9.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Serialized row-major as `[[[re, im]; 4]; 4]`.
impl Serialize for SpinorMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut rows = serializer.serialize_seq(Some(4))?;
        for i in 0..4 {
            let row: [[f64; 2]; 4] = std::array::from_fn(|j| {
                let z = self.0[(i, j)];
                [z.re, z.im]
            });
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

impl Index<(usize, usize)> for SpinorMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for SpinorMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

impl Add for SpinorMatrix {
    type Output = SpinorMatrix;
    fn add(self, rhs: SpinorMatrix) -> SpinorMatrix {
        SpinorMatrix(self.0 + rhs.0)
    }
}

impl AddAssign for SpinorMatrix {
    fn add_assign(&mut self, rhs: SpinorMatrix) {
        self.0 += rhs.0;
    }
}

impl Sub for SpinorMatrix {
    type Output = SpinorMatrix;
    fn sub(self, rhs: SpinorMatrix) -> SpinorMatrix {
        SpinorMatrix(self.0 - rhs.0)
    }
}

impl SubAssign for SpinorMatrix {
    fn sub_assign(&mut self, rhs: SpinorMatrix) {
        self.0 -= rhs.0;
    }
}

impl Neg for SpinorMatrix {
    type Output = SpinorMatrix;
    fn neg(self) -> SpinorMatrix {
        SpinorMatrix(-self.0)
    }
}

impl Mul for SpinorMatrix {
    type Output = SpinorMatrix;
    fn mul(self, rhs: SpinorMatrix) -> SpinorMatrix {
        SpinorMatrix(self.0 * rhs.0)
    }
}

impl Mul<f64> for SpinorMatrix {
    type Output = SpinorMatrix;
    fn mul(self, rhs: f64) -> SpinorMatrix {
        self.scale(rhs)
    }
}

impl Mul<SpinorMatrix> for f64 {
    type Output = SpinorMatrix;
    fn mul(self, rhs: SpinorMatrix) -> SpinorMatrix {
        rhs.scale(self)
    }
}

impl Mul<Complex64> for SpinorMatrix {
    type Output = SpinorMatrix;
    fn mul(self, rhs: Complex64) -> SpinorMatrix {
        self.scale_complex(rhs)
    }
}

impl Mul<SpinorMatrix> for Complex64 {
    type Output = SpinorMatrix;
    fn mul(self, rhs: SpinorMatrix) -> SpinorMatrix {
        rhs.scale_complex(self)
    }
}

impl Mul<Spinor> for SpinorMatrix {
    type Output = Spinor;
    fn mul(self, rhs: Spinor) -> Spinor {
        self.0 * rhs
    }
}

impl std::iter::Sum for SpinorMatrix {
    fn sum<It: Iterator<Item = SpinorMatrix>>(iter: It) -> SpinorMatrix {
        iter.fold(SpinorMatrix::zero(), |acc, m| acc + m)
    }
}

/// `ab − ba`.
pub fn commutator(a: &SpinorMatrix, b: &SpinorMatrix) -> SpinorMatrix {
    *a * *b - *b * *a
}

/// `ab + ba`.
pub fn anticommutator(a: &SpinorMatrix, b: &SpinorMatrix) -> SpinorMatrix {
    *a * *b + *b * *a
}

fn pauli() -> [[[Complex64; 2]; 2]; 3] {
    [
        [[ZERO, ONE], [ONE, ZERO]],
        [[ZERO, -I], [I, ZERO]],
        [[ONE, ZERO], [ZERO, -ONE]],
    ]
}

/// The gamma, Dirac alpha/beta and spin matrices in the Dirac representation.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaBasis {
    /// `γ⁰..γ³` with upper indices.
    pub gamma: [SpinorMatrix; 4],
    pub beta: SpinorMatrix,
    pub alpha: [SpinorMatrix; 3],
    /// Spin vector `Σ = diag(σ, σ)`.
    pub sigma: [SpinorMatrix; 3],
    pub metric: [f64; 4],
}

impl GammaBasis {
    /// Exact Dirac-representation matrices; every entry is 0, ±1 or ±i.
    pub fn dirac() -> Self {
        let z2 = [[ZERO; 2]; 2];
        let id2 = [[ONE, ZERO], [ZERO, ONE]];
        let neg = |m: [[Complex64; 2]; 2]| m.map(|row| row.map(|z| -z));
        let pauli = pauli();

        let beta = SpinorMatrix::from_blocks(id2, z2, z2, neg(id2));
        let spatial: [SpinorMatrix; 3] =
            std::array::from_fn(|i| SpinorMatrix::from_blocks(z2, pauli[i], neg(pauli[i]), z2));
        // γⁱ = β̂α̂ⁱ and β̂² = I, so α̂ⁱ = β̂γⁱ.
        let alpha = spatial.map(|g| beta * g);
        let sigma = pauli.map(|p| SpinorMatrix::from_blocks(p, z2, z2, p));

        GammaBasis {
            gamma: [beta, spatial[0], spatial[1], spatial[2]],
            beta,
            alpha,
            sigma,
            metric: METRIC,
        }
    }

    /// `β̂Σ³`, the fourth element of the commuting phase basis.
    pub fn beta_sigma3(&self) -> SpinorMatrix {
        self.beta * self.sigma[2]
    }

    /// `α⃗·v` for a real 3-vector.
    pub fn alpha_dot(&self, v: [f64; 3]) -> SpinorMatrix {
        (0..3).map(|i| self.alpha[i].scale(v[i])).sum()
    }

    /// `Σ⃗·v` for a real 3-vector.
    pub fn sigma_dot(&self, v: [f64; 3]) -> SpinorMatrix {
        (0..3).map(|i| self.sigma[i].scale(v[i])).sum()
    }

    /// `Σ^{bn} = (i/2)[γ^b, γ^n]`.
    pub fn sigma_tensor(&self, b: usize, n: usize) -> SpinorMatrix {
        assert!(b < 4 && n < 4, "spacetime index out of range: ({b}, {n})");
        commutator(&self.gamma[b], &self.gamma[n]).scale_complex(Complex64::new(0.0, 0.5))
    }
}

impl Default for GammaBasis {
    fn default() -> Self {
        Self::dirac()
    }
}

/// Free-function alias for [`GammaBasis::dirac`].
pub fn build_gamma_basis() -> GammaBasis {
    GammaBasis::dirac()
}

/// `exp(iθM)` by scaling and squaring of a truncated Taylor series.
pub fn exp_i(theta: f64, m: &SpinorMatrix) -> Result<SpinorMatrix> {
    if !theta.is_finite() || !m.is_finite() {
        return Err(Error::NonFinite("exp_i"));
    }
    let a = m.scale_complex(Complex64::new(0.0, theta));
    let norm = a.inf_norm();
    if norm == 0.0 {
        return Ok(SpinorMatrix::identity());
    }
    // Scale until ‖A/2^s‖ ≤ 1/2 so the series converges in a handful of terms.
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a.scale(0.5f64.powi(squarings));

    let mut sum = SpinorMatrix::identity();
    let mut term = SpinorMatrix::identity();
    for k in 1..=40 {
        term = (term * scaled).scale(1.0 / k as f64);
        sum += term;
        if term.max_abs() <= f64::EPSILON * 1e-3 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    Ok(sum)
}

/// Coefficients of a matrix on the mutually commuting, trace-orthogonal
/// basis `{I, β̂, Σ³, β̂Σ³}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommutingDecomposition {
    pub c_identity: f64,
    pub c_beta: f64,
    pub c_sigma3: f64,
    pub c_beta_sigma3: f64,
    /// Max-abs norm of what the four basis elements do not capture.
    pub remainder_norm: f64,
}

impl CommutingDecomposition {
    pub fn reconstruct(&self, basis: &GammaBasis) -> SpinorMatrix {
        SpinorMatrix::identity().scale(self.c_identity)
            + basis.beta.scale(self.c_beta)
            + basis.sigma[2].scale(self.c_sigma3)
            + basis.beta_sigma3().scale(self.c_beta_sigma3)
    }
}

/// Projects `m` onto `{I, β̂, Σ³, β̂Σ³}` with `c_X = Re Tr(m·X)/4`.
///
/// Imaginary parts of the traces, along with every other component, end up
/// in `remainder_norm`.
pub fn decompose_on_commuting_basis(m: &SpinorMatrix, basis: &GammaBasis) -> CommutingDecomposition {
    let coeff = |x: &SpinorMatrix| (*m * *x).trace().re / 4.0;
    let mut d = CommutingDecomposition {
        c_identity: m.trace().re / 4.0,
        c_beta: coeff(&basis.beta),
        c_sigma3: coeff(&basis.sigma[2]),
        c_beta_sigma3: coeff(&basis.beta_sigma3()),
        remainder_norm: 0.0,
    };
    d.remainder_norm = m.max_abs_diff(&d.reconstruct(basis));
    d
}
