//! Numerical laboratory for a neutral Dirac particle whose induced electric
//! dipole moment couples nonminimally to electric and magnetic fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`spinor`]: Dirac-representation matrices, commutators, `exp(iθM)` and
//!   the projection onto the commuting basis `{I, β̂, Σ³, β̂Σ³}`.
//! - [`fields`]: field configurations (line charge plus axial `B`, uniform,
//!   custom) and the tensors `F_{μν}`, `K_{μν}`.
//! - [`coupling`]: the tensor contraction, its closed-form Hamiltonian
//!   terms, and the two-route checks between them.
//! - [`holonomy`]: loop integrals, path-ordered holonomies and closed-form
//!   geometric phases.
//! - [`factorization`]: finite-difference cylindrical operators and the
//!   phase-factor substitution diagnostics.
//! - [`cli`]: the JSON-configured experiment runner behind the binary.
//!
//! ```
//! use dipole_lab::fields::{DipoleParams, FieldConfiguration};
//! use dipole_lab::holonomy::{analytic_phase, TimeLeg};
//! use dipole_lab::spinor::GammaBasis;
//!
//! let basis = GammaBasis::dirac();
//! let wei = FieldConfiguration::wei(1.0, 1.0).unwrap();
//! let phase = analytic_phase(&wei, &DipoleParams::polarizable(1.0), &TimeLeg::default(), &basis).unwrap();
//! assert!((phase.coefficients.c_beta + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
//! ```

pub mod cli;
pub mod coupling;
pub mod error;
pub mod factorization;
pub mod fields;
pub mod holonomy;
pub mod spinor;

pub use error::{Error, Result};

/// Every sign and ordering convention the numerics depend on. Result records
/// carry its SHA-256 so outputs produced under different conventions cannot
/// be confused.
pub const CONVENTION_LEDGER: &str = "\
units: hbar = c = 1
metric: eta^{mu nu} = diag(-1, +1, +1, +1)
levi-civita: epsilon_{123} = +1, right-handed axes
gamma matrices: Dirac representation, gamma^0 = beta = diag(I, -I), gamma^i = beta alpha^i
clifford: {gamma^mu, gamma^nu} = -2 eta^{mu nu} I
tensors: both indices down; F_{0i} = -E_i, F_{ij} = epsilon_{ijk} B^k; K = F(alpha E, -chi B)
contraction: C = 1/4 eta^{ab} K_{mu a} F_{b nu} gamma^mu gamma^nu
hamiltonian: multiply covariant equation by gamma^0; H_int = beta C - beta (mu/2) Sigma^{bn} F_{bn}
sigma tensor: Sigma^{bn} = (i/2)[gamma^b, gamma^n]
path ordering: segment k+1 multiplies segment k from the left
loop quadrature: angular midpoint, tangent element R phi_hat dtheta
time leg: mu beta (Sigma . B) tau, applied after the loop
planar operator: alpha^1 along r_hat, alpha^2 along phi_hat, potential fields on the local frame
";
