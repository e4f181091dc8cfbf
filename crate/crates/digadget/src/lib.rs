//! Gadget graphs and one-pass streaming simulation for directed
//! connectivity properties.
//!
//! Deciding acyclicity, strong connectivity, or all-vertex reachability
//! from a source over a one-pass edge stream takes working memory
//! proportional to the edge count — a fact established by encoding an
//! index-lookup problem into small gadget graphs. This crate builds those
//! gadgets and makes the whole argument executable at desk scale:
//!
//! * [`gadget`] constructs the three reductions from an instance `(x, i)`
//!   and knows each one's ground-truth answer;
//! * [`graph`] holds the exact connectivity oracles everything is checked
//!   against;
//! * [`stream`] models one-pass streams with bit-exact memory accounting;
//! * [`algo`] provides reference algorithms from full storage down to
//!   zero memory, plus the undirected union-find contrast;
//! * [`protocol`] runs the one-way Alice→Bob simulation, verifies it
//!   exhaustively at small sizes, and estimates success rates under a
//!   memory budget;
//! * [`instance_file`] and [`cli`] give the whole thing a reproducible
//!   command-line surface.
//!
//! # Quick start
//!
//! ```
//! use digadget::{BitVector, GadgetInstance, IndexInstance, Property};
//!
//! // The worked example: x = 001011010, i = 5 (so x[i] = 1).
//! let x: BitVector = "001011010".parse()?;
//! let inst = IndexInstance::new(x, 5)?;
//!
//! // A graph that is acyclic exactly when x[i] = 0 ...
//! let gadget = GadgetInstance::build(Property::Acyclicity, &inst);
//! assert_eq!(gadget.oracle_verdict(), false);
//!
//! // ... and one that is strongly connected exactly when x[i] = 1.
//! let gadget = GadgetInstance::build(Property::StrongConnectivity, &inst);
//! assert_eq!(gadget.oracle_verdict(), true);
//! # Ok::<(), digadget::GadgetError>(())
//! ```
//!
//! The accompanying guide under `book/` walks through the constructions,
//! the protocol, and the memory/success tradeoff; its code listings are
//! compiled and run as part of `cargo test`.

pub mod algo;
pub mod bits;
pub mod cli;
pub mod gadget;
pub mod graph;
pub mod instance_file;
pub mod protocol;
pub mod stream;

pub use algo::{union_find_components, Constant, FullStore, SampledIndex, UnionFind};
pub use bits::BitString;
pub use gadget::{
    build_e1, build_e2, ground_truth, BitVector, GadgetError, GadgetInstance, GadgetParams,
    IndexInstance, Property,
};
pub use graph::{Digraph, Edge, GraphError, VertexId};
pub use instance_file::{InstanceFile, ParseError};
pub use protocol::{
    alice_message, bob_decide, estimate_success, exhaustive_verify, run_trial, CoinMode,
    ProtocolError, SuccessEstimate, TrialResult, VerifyReport,
};
pub use stream::{
    make_stream, run_streaming, EdgeStream, MemoryProfile, PublicParams, StreamError,
    StreamOrder, StreamingAlgorithm,
};

// The guide's code listings double as doctests so the book can never
// drift from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/streams.md")]
    pub struct Streams;
    #[doc = include_str!("../../../book/src/gadgets.md")]
    pub struct Gadgets;
    #[doc = include_str!("../../../book/src/protocol.md")]
    pub struct Protocol;
    #[doc = include_str!("../../../book/src/tradeoff.md")]
    pub struct Tradeoff;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct CommandLine;
}
