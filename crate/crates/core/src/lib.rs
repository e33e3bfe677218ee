//! Bayesian and maximum-likelihood estimation of single-covariate logistic
//! regression by Monte Carlo.
//!
//! The crate provides the model mathematics ([`glm`]), three random-walk
//! Metropolis–Hastings samplers ([`mh`]), Stochastic Approximation Monte
//! Carlo over energy bands ([`samc`]), chain diagnostics ([`diagnostics`]) and
//! the replicated simulation harness with its file formats ([`harness`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod glm;
pub mod harness;
pub mod linalg;
pub mod mh;
pub mod rng;
pub mod samc;

pub use error::{Error, Result};
pub use glm::{Dataset, MleResult, ParamVector, PriorSpec};
pub use linalg::Matrix2;
pub use mh::{ChainTrace, Posterior, ProposalKind, ProposalSpec, Target};
pub use rng::RngStream;
pub use samc::{EnergyPartition, GainSchedule, SamcState, SamcTrace};
