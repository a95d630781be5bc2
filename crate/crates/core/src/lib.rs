//! Tensor variational inequalities.
//!
//! A TVI asks for `x*` in a closed convex set `X` with
//! `<y - x*, A x*^{m-1} + q> >= 0` for all `y` in `X`, where `A` is an
//! m-order n-dimensional real tensor. This crate provides
//!
//! * dense tensors and their contractions ([`tensor`]),
//! * feasible sets with Euclidean projection ([`sets`]),
//! * the problem object and residual-based verification ([`problem`]),
//! * projection solvers and a uniqueness probe ([`solvers`]),
//! * sampling falsifiers for positive definiteness, strict positive
//!   definiteness and strong monotonicity ([`structured`]),
//! * the reduction of polynomial multi-player games to TVIs ([`game`]),
//! * JSON documents for problems and games ([`io`]).
//!
//! Indices are 0-based everywhere, including in files.

pub mod error;
pub mod game;
pub mod io;
pub mod problem;
pub mod rng;
pub mod sets;
pub mod solvers;
pub mod structured;
pub mod tensor;

pub use error::{Error, Result};
pub use game::{GameSpec, NashReport};
pub use problem::{TviProblem, VerificationReport};
pub use sets::{FeasibleSet, Halfspace};
pub use solvers::{SolveReport, SolveStatus, SolverParams};
pub use structured::{ModulusEstimate, Verdict};
pub use tensor::{DenseTensor, SquareTensor};
