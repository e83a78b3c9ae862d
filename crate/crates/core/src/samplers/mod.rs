//! Streaming sampling primitives.

mod misra_gries;
mod reservoir;

pub use misra_gries::{ImportantArcStore, MgTable};
pub use reservoir::{ReservoirWor, ReservoirWr};
