//! Zeta-polynomials attached to even-weight newforms.
//!
//! The pipeline runs from Fourier coefficients to completed critical
//! L-values, then to the period polynomial `R_f(z)` and the zeta-polynomial
//! `Z_f(s)`, assembled both from weighted moments with Stirling numbers and
//! as the Rodriguez-Villegas transform of `R_f`. The [`hilbert`] module holds
//! the comparison polynomials `H_k^±`, their zero locations and the lattice
//! point counts of the cross-simplex.

pub mod analysis;
pub mod combinatorics;
pub mod corpus;
pub mod error;
pub mod hilbert;
pub mod lvalues;
pub mod newform;
pub mod poly;
pub mod selftest;
pub mod zeta;

pub use analysis::{analyze, Analysis};
pub use error::{Error, Result};
pub use hilbert::{build_h_polys, convergence_study, ehrhart_count, solve_hk_zeros, ConvergenceTable, CotSolverResult, HPolyPair};
pub use lvalues::{all_critical_values, completed_lvalue, gamma_upper_int, CompletedLValues, DEFAULT_PRECISION};
pub use newform::{delta_coefficients, detect_sign, load_newform, Coefficient, InputFormat, NewformData, Sign};
pub use poly::{find_roots, Poly, RationalPoly, RealPoly, RootSet};
pub use zeta::{
    bloch_kato_moments, period_polynomial, rv_transform, verify, weighted_moments, zeta_direct, zeta_via_rv,
    BlochKatoVector, VerificationReport, ZetaPolynomial, ZetaRoute,
};
