// SPDX-License-Identifier: Apache-2.0

//! Operator growth under dephasing Lindbladians.
//!
//! Bi-Lanczos coefficients, moments and Hankel transforms, and spectral
//! functions for the dissipative tilted-field Ising chain, the large-q
//! dissipative SYK model and a solvable hopping toy model.

pub mod bilanczos;
pub mod config;
pub mod error;
pub mod hankel;
pub mod lindblad;
pub mod moments;
pub mod opspace;
pub mod output;
pub mod pipeline;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
