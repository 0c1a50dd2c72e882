//! Jordan-Pochhammer pseudo-reflection groups over finite rings: construction,
//! verification, invariant forms, image classification, lifting detectors
//! and the associated counting formulas.

pub mod error;
pub mod cyclo;
pub mod exactalg;
pub mod jprep;
pub mod forms;
pub mod grpengine;
pub mod lifting;
pub mod prymstats;
pub mod cli;

pub use error::{Error, Result};
