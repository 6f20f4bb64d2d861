//! Numerical Lie theory for the rank-two compact irreducible Hermitian
//! symmetric spaces.
//!
//! The crate builds the isotropy data `g = k + p` for
//! `SO(2+n)/SO(2)xSO(n)`, `SU(2+n)/S(U(2)xU(n))`, `SO(10)/U(5)` and
//! `E6/U(1)xSpin(10)`, evaluates the moment map `mu(P) = 1/2 [P,[P,Z]]`
//! and its weighted squared norm `f_{a,b}`, and checks that for the right
//! weights `f_{a,b}` is a Cartan-Muenzner polynomial of degree four.
//!
//! Module map:
//!
//! * [`liealg`]: structure constants, Killing form, classical and Chevalley constructors
//! * [`symspace`]: Cartan decomposition and the central element `Z`
//! * [`roots`]: restricted roots, multiplicities and the decomposition of `Z`
//! * [`moment`]: `mu`, `f_{a,b}`, derivatives and finite-difference oracles
//! * [`verify`]: the named check registry, level-set geometry and reports
//! * [`cli`]: the `cmforge` command-line front end

pub mod cli;
pub mod error;
pub mod liealg;
pub mod linalg;
pub mod moment;
pub mod roots;
pub mod symspace;
pub mod verify;

pub use error::{Error, Result};
pub use liealg::{AlgebraElement, StructureAlgebra};
pub use moment::{MuenznerCoefficients, WeightedNormParams};
pub use roots::{RestrictedRootSystem, ZDecomposition};
pub use symspace::{Family, HermitianPair, PointInP};
pub use verify::{CheckId, CheckResult, VerificationReport};
