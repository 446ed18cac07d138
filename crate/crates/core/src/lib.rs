//! Exact computation with normalized lengths over perfectoid valuation rings.
//!
//! Everything is generic over the integer type backing exponents
//! ([`scalar::ExpInt`]); the aliases below fix it to `BigInt` (default) or
//! `i64` (the `*64` variants).

pub mod almost;
pub mod error;
pub mod io;
pub mod length;
pub mod modpres;
pub mod purity_lab;
pub mod report;
pub mod ring_core;
pub mod scalar;
pub mod tilt;

pub use error::{Error, Result};
pub use report::{Report, Verdict};
pub use ring_core::{Exactness, Mode};

use num_bigint::BigInt;

pub type Exponent = ring_core::Exponent<BigInt>;
pub type ValResult = ring_core::ValResult<BigInt>;
pub type RingDescriptor = ring_core::RingDescriptor<BigInt>;
pub type RingElement = ring_core::RingElement<BigInt>;

pub type Exponent64 = ring_core::Exponent<i64>;
pub type RingDescriptor64 = ring_core::RingDescriptor<i64>;
pub type RingElement64 = ring_core::RingElement<i64>;
pub type TiltElement = tilt::TiltElement<BigInt>;
pub type PresentationMatrix = modpres::PresentationMatrix<BigInt>;
pub type CutIdeal = modpres::CutIdeal<BigInt>;
pub type CutModule = modpres::CutModule<BigInt>;
pub type LengthValue = length::LengthValue<BigInt>;
pub type SectionProblem = almost::SectionProblem<BigInt>;
pub type BasicSetup = almost::BasicSetup<BigInt>;
pub type ExtensionSpec = purity_lab::ExtensionSpec<BigInt>;
pub type ExtensionOrder = purity_lab::ExtensionOrder<BigInt>;
pub type PurityLedger = purity_lab::PurityLedger<BigInt>;
