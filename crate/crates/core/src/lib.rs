// SPDX-License-Identifier: Apache-2.0

//! Exact verification of the computational content behind a family of
//! extremal effective cycles on moduli spaces of pointed curves.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: rationals, prime and extension fields, exact kernels.
//! - [`classes`]: the divisor-class space of the glued boundary stratum and
//!   its symmetric reduction.
//! - [`injectivity`]: test-surface linear systems and kernel certificates.
//! - [`curves`]: elliptic curve group law and genus-2 Jacobians (Cantor).
//! - [`enumerative`]: theta-degree rule and finite-field fiber counting.
//! - [`strata`]: genus-one strata defined by group-law conditions.
//! - [`twisted`]: combinatorial twisted canonical divisor checks.
//! - [`cli`]: the command-line front end used by the `effcone` binary.

pub mod arith;
pub mod classes;
pub mod cli;
pub mod curves;
pub mod enumerative;
pub mod injectivity;
pub mod strata;
pub mod twisted;
