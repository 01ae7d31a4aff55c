//! Hereditary set families on small universes: exact-rational weight
//! bounds, extremal constructions, weight certificates, pile decomposition,
//! and branch-and-bound search for minimum-size families of given minimum
//! degree.

pub mod colex;
pub mod constructions;
pub mod error;
pub mod family;
pub mod mask;
pub mod numerics;
pub mod cli;
pub mod io;
pub mod piles;
pub mod search;
pub mod rat;
pub mod weights_d5;

pub use error::{Error, Result};
pub use family::Family;
pub use mask::SubsetMask;
pub use rat::Rat;
