//! Exact analysis of truthful randomized voting mechanisms under
//! normalized cardinal utilities.

pub mod catalog;
pub mod error;
pub mod games;
pub mod limits;
pub mod lp;
pub mod mechanism;
pub mod profile;
pub mod qp;
pub mod qpcert;
pub mod quasi;
pub mod rational;

pub use error::{Error, Result};
pub use mechanism::{Lottery, Mechanism, MechanismSpec};
pub use profile::{Profile, Valuation};
pub use quasi::{QuasiType, TypeProfile, TypeSpace};
pub use rational::Rational;
