//! Sobolev orthogonal polynomials on the unit ball `B^d` for the inner product
//! `⟨f,g⟩ = (1/ω_μ)∫_B f g (1−‖x‖²)^μ dx + (λ/σ_d)∫_S ∂_𝐧f ∂_𝐧g dσ`.
//!
//! The building blocks are univariate non-diagonal Jacobi–Sobolev families
//! ([`sobolev1d`]), spherical harmonics ([`sphere`]) and the ball bases
//! ([`ball`]); on top sit reproducing kernels and Christoffel functions
//! ([`kernels`]), their limit constants and scans ([`asymptotics`]) and the
//! invariant suites used by the command-line tool ([`verify`]).

pub mod asymptotics;
pub mod ball;
pub mod error;
pub mod jacobi;
pub mod kernels;
pub mod poly;
pub mod quadrature;
pub mod sobolev1d;
pub mod special;
pub mod sphere;
pub mod verify;

pub use error::{Error, Result};
