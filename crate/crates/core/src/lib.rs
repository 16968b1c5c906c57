//! Smoothed quadratic Hecke character sums over the Gaussian integers.
//!
//! The crate evaluates
//!
//! ```text
//! S2(X, Y; Phi, W) = sum_{n primary} sum_{(m, 1+i) = 1} ((1+i) m / n)_2 Phi(N(n)/Y) W(N(m)/X)
//! ```
//!
//! both directly and through its Poisson dual (a sum over frequencies `k`
//! weighted by quadratic Gauss sums and the transform `W~_i`), together with
//! every explicit ingredient: residue symbols, closed-form Gauss sums, the
//! polar-coordinate transform, the `k = 0` main term and the double
//! Dirichlet series `J_{k1}(v, w)` with its Euler-product factorization.
//!
//! Everything here is `no_std` + `alloc`; IO, reports and the command line
//! live in the `hecke` crate.
//!
//! Module map:
//! - [`gint`]: exact arithmetic in `Z[i]`, factorization, residue systems.
//! - [`symbols`]: quartic and quadratic residue symbols, Hecke characters.
//! - [`gauss_sum`]: quadratic Gauss sums, brute force and closed form.
//! - [`smooth`]: bump weights, the transform `W~_i`, Mellin transforms.
//! - [`charsum`]: direct and dual evaluators of `S2`, the main term `M0`.
//! - [`series`]: `J_{k1}(v, w)`, truncated Hecke L-series, Euler factors.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod charsum;
mod error;
pub mod exec;
pub mod gauss_sum;
pub mod gint;
pub mod quad;
pub mod series;
pub mod smooth;
pub mod symbols;

pub use error::{Error, Result};
pub use gint::{Factorization, GaussianInt, SurdValue, Unit};
pub use symbols::SymbolValue;
