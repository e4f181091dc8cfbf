//! Edge streams and the one-pass streaming-algorithm contract.
//!
//! A stream presents a gadget's edges in a single pass: all of `e1` first
//! (in canonical or seeded-shuffle order), then all of `e2`. The boundary
//! between the two segments is where the protocol message is cut, so
//! [`run_streaming`] records the serialized state size both at that
//! boundary and at its maximum over the whole pass.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::bits::BitString;
use crate::gadget::{ceil_sqrt, GadgetInstance, Property};
use crate::graph::{Edge, VertexId};

/// Edge order within each stream segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamOrder {
    /// Lexicographic by `(from, to)` within each segment.
    Canonical,
    /// Seeded uniform permutation within each segment.
    Shuffled,
}

impl std::str::FromStr for StreamOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "canonical" => Ok(StreamOrder::Canonical),
            "shuffled" => Ok(StreamOrder::Shuffled),
            other => Err(format!("unknown order {other:?}, expected canonical or shuffled")),
        }
    }
}

impl std::fmt::Display for StreamOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StreamOrder::Canonical => "canonical",
            StreamOrder::Shuffled => "shuffled",
        })
    }
}

/// Orders a segment's edges: sorted for canonical, seeded permutation
/// otherwise.
pub(crate) fn order_segment(edges: &mut [Edge], order: StreamOrder, rng: &mut ChaCha12Rng) {
    edges.sort_unstable();
    if order == StreamOrder::Shuffled {
        edges.shuffle(rng);
    }
}

/// A one-pass edge sequence with the `e1`/`e2` boundary marked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStream {
    vertex_count: usize,
    edges: Vec<Edge>,
    boundary: usize,
}

impl EdgeStream {
    pub fn new(vertex_count: usize, edges: Vec<Edge>, boundary: usize) -> Self {
        assert!(boundary <= edges.len());
        Self { vertex_count, edges, boundary }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Index of the first `e2` edge; equals `|e1|`.
    pub fn boundary(&self) -> usize {
        self.boundary
    }

    /// The `e1` segment.
    pub fn prefix(&self) -> &[Edge] {
        &self.edges[..self.boundary]
    }

    /// The `e2` segment.
    pub fn suffix(&self) -> &[Edge] {
        &self.edges[self.boundary..]
    }
}

/// Lays out a gadget instance as a stream: `e1` then `e2`, each segment
/// ordered per `order`. The seed only matters for shuffled order.
pub fn make_stream(instance: &GadgetInstance, order: StreamOrder, seed: u64) -> EdgeStream {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut e1: Vec<Edge> = instance.e1().iter().copied().collect();
    let mut e2: Vec<Edge> = instance.e2().iter().copied().collect();
    order_segment(&mut e1, order, &mut rng);
    order_segment(&mut e2, order, &mut rng);
    let boundary = e1.len();
    e1.extend(e2);
    EdgeStream::new(instance.vertex_count(), e1, boundary)
}

/// Everything both protocol parties know up front: the problem shape and
/// the coin seed. Only `x` and `i` are private.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicParams {
    pub vertex_count: usize,
    pub m: usize,
    pub n: usize,
    pub property: Property,
    /// Seed all of the algorithm's coins are derived from. Giving both
    /// parties the same seed models shared randomness.
    pub rng_seed: u64,
}

impl PublicParams {
    /// Parameters for a problem of size `m`: `n = ceil(sqrt(m))` and the
    /// vertex count implied by the property's layout.
    pub fn for_problem(property: Property, m: usize, rng_seed: u64) -> Self {
        let n = ceil_sqrt(m);
        Self {
            vertex_count: 2 * n + property.uses_source() as usize,
            m,
            n,
            property,
            rng_seed,
        }
    }

    pub fn for_instance(instance: &GadgetInstance, rng_seed: u64) -> Self {
        Self::for_problem(instance.property(), instance.m(), rng_seed)
    }

    /// The designated source vertex, when the layout has one.
    pub fn source(&self) -> Option<VertexId> {
        self.property.uses_source().then_some(2 * self.n)
    }
}

/// Serialized-state sizes observed while running a stream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MemoryProfile {
    /// Maximum state length over every edge boundary (including the
    /// post-`begin` state).
    pub max_state_bits: usize,
    /// State length exactly at the `e1`/`e2` boundary: the size of the
    /// message Alice would send.
    pub boundary_state_bits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StreamError {
    #[error("stream is over {actual} vertices but params declare {expected}")]
    VertexCountMismatch { expected: usize, actual: usize },
    #[error("malformed state: {0}")]
    MalformedState(String),
    #[error("snapshot/restore round-trip changed the serialized state")]
    SnapshotRoundTrip,
    #[error("cannot recover (j, k) from the stream suffix: {0}")]
    UnrecognizedSuffix(String),
}

/// The one-pass streaming-algorithm contract.
///
/// A run is `begin`, one `absorb` per stream edge, then a single `decide`.
/// `snapshot` must serialize the complete state: restoring it (under the
/// same params) and absorbing any remaining edges must reach the same
/// decision as the uninterrupted run.
pub trait StreamingAlgorithm {
    fn begin(&mut self, params: &PublicParams);

    fn absorb(&mut self, edge: Edge);

    fn snapshot(&self) -> BitString;

    fn restore(&mut self, params: &PublicParams, state: &BitString) -> Result<(), StreamError>;

    fn decide(&self) -> Result<bool, StreamError>;
}

/// Runs a full one-pass stream through `alg`, snapshotting at every edge
/// boundary to account memory exactly.
///
/// In debug builds every snapshot is restored back into the algorithm and
/// re-serialized; any mismatch is a contract violation and fails the run.
pub fn run_streaming(
    alg: &mut dyn StreamingAlgorithm,
    stream: &EdgeStream,
    params: &PublicParams,
) -> Result<(bool, MemoryProfile), StreamError> {
    if stream.vertex_count() != params.vertex_count {
        return Err(StreamError::VertexCountMismatch {
            expected: params.vertex_count,
            actual: stream.vertex_count(),
        });
    }
    alg.begin(params);
    let mut profile = MemoryProfile::default();
    let initial = checkpoint(alg, params)?;
    profile.max_state_bits = initial;
    if stream.boundary() == 0 {
        profile.boundary_state_bits = initial;
    }
    for (idx, &edge) in stream.edges().iter().enumerate() {
        alg.absorb(edge);
        let bits = checkpoint(alg, params)?;
        profile.max_state_bits = profile.max_state_bits.max(bits);
        if idx + 1 == stream.boundary() {
            profile.boundary_state_bits = bits;
        }
    }
    let decision = alg.decide()?;
    Ok((decision, profile))
}

/// Serializes the current state, verifying the decode/encode round-trip in
/// debug builds. Returns the state length in bits.
fn checkpoint(
    alg: &mut dyn StreamingAlgorithm,
    params: &PublicParams,
) -> Result<usize, StreamError> {
    let state = alg.snapshot();
    if cfg!(debug_assertions) {
        alg.restore(params, &state)?;
        if alg.snapshot() != state {
            return Err(StreamError::SnapshotRoundTrip);
        }
    }
    Ok(state.len())
}
