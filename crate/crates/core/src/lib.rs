//! Codes for reconstructing binary strings from their prefix-suffix
//! composition multisets under composition errors.

pub mod bch;
pub mod bits;
pub mod compositions;
pub mod galois;
pub mod grs;
mod locator;
pub mod channel;
pub mod dominance;
pub mod multi;
pub mod single;
pub mod oracle;
pub mod params;
