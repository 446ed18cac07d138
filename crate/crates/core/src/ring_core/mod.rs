//! Exact arithmetic in the two model perfectoid valuation rings.

mod descriptor;
mod element;
pub(crate) mod exponent;
mod parse;
pub mod rng;

pub use descriptor::{Mode, RingDescriptor};
pub use element::{Exactness, RingElement};
pub use exponent::{Exponent, ValResult};
