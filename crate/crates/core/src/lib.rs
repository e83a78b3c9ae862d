//! Single-pass graph-stream sketches that simulate random walks.
//!
//! Updates enter through [`stream::StreamSession`], which tracks exact
//! degrees, strips self-loops and forwards arc events to a walker's builder.
//! Builders freeze into sketches that answer `t`-step walk queries:
//!
//! - [`walk::DirectedWrBuilder`] and [`walk::DirectedWorBuilder`]: perfect
//!   simulation on directed insertion-only streams with `t` sampled
//!   out-arcs per vertex.
//! - [`walk::UndirectedBuilder`]: undirected insertion-only streams within
//!   error `ε`, keeping Misra-Gries heavy arcs plus `C` samples per vertex.
//! - [`turnstile::TurnstileDirectedBuilder`] and
//!   [`turnstile::TurnstileUndirectedBuilder`]: the same walkers driven by
//!   ℓ1 samplers and heavy-hitter sketches, so deletions are allowed.
//!
//! [`walker::FrozenWalker`] wraps all five behind one interface and
//! [`oracle`] provides exact distributions to test them against.

pub mod error;
pub mod oracle;
pub mod rng;
pub mod samplers;
pub mod stream;
pub mod turnstile;
pub mod verify;
pub mod walk;
pub mod walker;

pub use error::{Error, Result};
pub use stream::{Mode, Model, Update, VertexId, Walk};
pub use walker::{Algorithm, FrozenWalker, Ingestor, WalkerConfig};
