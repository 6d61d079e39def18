//! Joint deployment, reflection and power optimization for a single IRS
//! serving several single-antenna users from a single-antenna access point.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod ao;
pub mod channel;
pub mod convex;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod polyblock;
pub mod rates;
pub mod rng;
pub mod srocr;

pub use error::{Error, Result};
