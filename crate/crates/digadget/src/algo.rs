//! Reference streaming algorithms spanning the memory/accuracy spectrum.
//!
//! * [`FullStore`] keeps every edge and answers exactly — the trivial
//!   O(m log n)-bit upper bound.
//! * [`SampledIndex`] keeps a budget-limited sample of bit positions drawn
//!   from shared randomness; its boundary message is exactly
//!   `min(budget, m)` bits and its success rate is `(1 + B/m) / 2`.
//! * [`Constant`] ignores the stream entirely: the zero-memory baseline.
//! * [`UnionFind`] is the undirected contrast: one-pass connected
//!   components in Θ(n log n) bits, which directed connectivity cannot
//!   match.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bits::{width_for, BitReader, BitString, BitWriter};
use crate::graph::{Digraph, Edge, VertexId};
use crate::stream::{PublicParams, StreamError, StreamingAlgorithm};

/// Field width for the edge-count prefixes inside serialized states.
const LEN_PREFIX_BITS: usize = 32;

fn malformed(message: impl Into<String>) -> StreamError {
    StreamError::MalformedState(message.into())
}

fn read_edge(reader: &mut BitReader<'_>, vertex_count: usize) -> Result<Edge, StreamError> {
    let width = width_for(vertex_count);
    let from = reader.field(width).ok_or_else(|| malformed("truncated edge"))? as usize;
    let to = reader.field(width).ok_or_else(|| malformed("truncated edge"))? as usize;
    if from >= vertex_count || to >= vertex_count {
        return Err(malformed(format!("edge {from}->{to} outside 0..{vertex_count}")));
    }
    Ok(Edge::new(from, to))
}

fn write_edge(writer: &mut BitWriter, edge: Edge, vertex_count: usize) {
    let width = width_for(vertex_count);
    writer.field(edge.from as u64, width);
    writer.field(edge.to as u64, width);
}

// ---------------------------------------------------------------------------
// FullStore
// ---------------------------------------------------------------------------

/// Stores the whole edge set and decides with the exact oracle.
///
/// State serializes as a length prefix followed by the sorted edge list,
/// `ceil(log2(vertex_count))` bits per endpoint.
#[derive(Default)]
pub struct FullStore {
    params: Option<PublicParams>,
    edges: BTreeSet<Edge>,
}

impl FullStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn params(&self) -> &PublicParams {
        self.params.as_ref().expect("begin() or restore() must run before use")
    }
}

impl StreamingAlgorithm for FullStore {
    fn begin(&mut self, params: &PublicParams) {
        self.params = Some(params.clone());
        self.edges.clear();
    }

    fn absorb(&mut self, edge: Edge) {
        debug_assert!(
            edge.from < self.params().vertex_count && edge.to < self.params().vertex_count,
            "edge {edge:?} outside the declared vertex range"
        );
        self.edges.insert(edge);
    }

    fn snapshot(&self) -> BitString {
        let vertex_count = self.params().vertex_count;
        let mut w = BitWriter::new();
        w.field(self.edges.len() as u64, LEN_PREFIX_BITS);
        for &edge in &self.edges {
            write_edge(&mut w, edge, vertex_count);
        }
        w.finish()
    }

    fn restore(&mut self, params: &PublicParams, state: &BitString) -> Result<(), StreamError> {
        let mut edges = BTreeSet::new();
        let mut r = BitReader::new(state);
        let count = r.field(LEN_PREFIX_BITS).ok_or_else(|| malformed("truncated edge count"))?;
        for _ in 0..count {
            edges.insert(read_edge(&mut r, params.vertex_count)?);
        }
        if r.remaining() != 0 {
            return Err(malformed("trailing bits after edge list"));
        }
        self.params = Some(params.clone());
        self.edges = edges;
        Ok(())
    }

    fn decide(&self) -> Result<bool, StreamError> {
        let params = self.params();
        let g = Digraph::from_edges(params.vertex_count, self.edges.iter().copied())
            .map_err(|e| malformed(e.to_string()))?;
        Ok(match params.property {
            crate::gadget::Property::Acyclicity => g.is_acyclic(),
            crate::gadget::Property::StrongConnectivity => g.is_strongly_connected(),
            crate::gadget::Property::ReachabilityFromS => {
                let s = params.source().expect("reachability params carry a source");
                g.reaches_all(s).map_err(|e| malformed(e.to_string()))?
            }
        })
    }
}

// ---------------------------------------------------------------------------
// SampledIndex
// ---------------------------------------------------------------------------

/// Samples `min(budget, m)` bit positions from the shared seed and records
/// only those bits of the bipartite prefix.
///
/// At the segment boundary the state is exactly the recorded bits (the
/// positions re-derive from the seed, so they are never transmitted). Once
/// suffix edges arrive they are buffered too, so mid-suffix checkpoints
/// stay restorable. At decide time the buffered suffix pins down `(j, k)`;
/// if position `j*n+k` was sampled the recorded bit answers through the
/// property's encoding, otherwise a fair coin does.
pub struct SampledIndex {
    budget_bits: usize,
    params: Option<PublicParams>,
    /// Sampled positions, sorted; length `min(budget_bits, m)`.
    positions: Vec<usize>,
    /// One recorded bit per sampled position.
    recorded: Vec<bool>,
    /// Absorbed edges that are not bipartite L→R, in arrival order.
    suffix: Vec<Edge>,
}

impl SampledIndex {
    pub fn new(budget_bits: usize) -> Self {
        Self {
            budget_bits,
            params: None,
            positions: Vec::new(),
            recorded: Vec::new(),
            suffix: Vec::new(),
        }
    }

    pub fn budget_bits(&self) -> usize {
        self.budget_bits
    }

    fn params(&self) -> &PublicParams {
        self.params.as_ref().expect("begin() or restore() must run before use")
    }

    /// Re-derives the sampled position set from the shared seed.
    fn reset(&mut self, params: &PublicParams) {
        let sample_size = self.budget_bits.min(params.m);
        let mut rng = ChaCha12Rng::seed_from_u64(params.rng_seed);
        let mut positions = rand::seq::index::sample(&mut rng, params.m, sample_size).into_vec();
        positions.sort_unstable();
        self.params = Some(params.clone());
        self.recorded = vec![false; positions.len()];
        self.positions = positions;
        self.suffix.clear();
    }

    /// Fair coin derived from the shared seed only, so interrupted and
    /// uninterrupted runs guess identically. The salt keeps the coin
    /// independent of the position sample drawn from the same seed.
    fn coin(&self) -> bool {
        const COIN_SALT: u64 = 0x9e37_79b9_7f4a_7c15;
        ChaCha12Rng::seed_from_u64(self.params().rng_seed ^ COIN_SALT).random()
    }

    /// Recovers `(j, k)` from the buffered suffix edges.
    fn infer_split(&self) -> Result<(usize, usize), StreamError> {
        let params = self.params();
        let n = params.n;
        let in_l = |v: VertexId| v < n;
        let in_r = |v: VertexId| (n..2 * n).contains(&v);
        match params.property {
            crate::gadget::Property::Acyclicity => match self.suffix.as_slice() {
                [e] if in_r(e.from) && in_l(e.to) => Ok((e.to, e.from - n)),
                _ => Err(StreamError::UnrecognizedSuffix(
                    "expected exactly one R-to-L edge".into(),
                )),
            },
            crate::gadget::Property::StrongConnectivity => {
                if n == 1 {
                    // A one-column layout leaves no choice.
                    return Ok((0, 0));
                }
                // R_k is the only source of R-to-R edges; L_j is the only
                // target of L-to-L edges.
                let k = self
                    .suffix
                    .iter()
                    .find(|e| in_r(e.from) && in_r(e.to))
                    .map(|e| e.from - n);
                let j = self.suffix.iter().find(|e| in_l(e.from) && in_l(e.to)).map(|e| e.to);
                match (j, k) {
                    (Some(j), Some(k)) => Ok((j, k)),
                    _ => Err(StreamError::UnrecognizedSuffix(
                        "missing the L-to-L or R-to-R star edges".into(),
                    )),
                }
            }
            crate::gadget::Property::ReachabilityFromS => {
                let source = 2 * n;
                let j = self
                    .suffix
                    .iter()
                    .find(|e| e.from == source && in_l(e.to))
                    .map(|e| e.to)
                    .ok_or_else(|| {
                        StreamError::UnrecognizedSuffix("missing the edge out of s".into())
                    })?;
                // All back-crossing edges leave R_k; with n = 1 there are
                // none and k must be 0.
                let k = match self.suffix.iter().find(|e| in_r(e.from) && in_l(e.to)) {
                    Some(e) => e.from - n,
                    None if n == 1 => 0,
                    None => {
                        return Err(StreamError::UnrecognizedSuffix(
                            "missing the R-to-L star edges".into(),
                        ))
                    }
                };
                Ok((j, k))
            }
        }
    }
}

impl StreamingAlgorithm for SampledIndex {
    fn begin(&mut self, params: &PublicParams) {
        self.reset(params);
    }

    fn absorb(&mut self, edge: Edge) {
        let params = self.params();
        let n = params.n;
        if edge.from < n && (n..2 * n).contains(&edge.to) {
            let position = edge.from * n + (edge.to - n);
            if let Ok(slot) = self.positions.binary_search(&position) {
                self.recorded[slot] = true;
            }
        } else {
            self.suffix.push(edge);
        }
    }

    fn snapshot(&self) -> BitString {
        let mut w = BitWriter::new();
        for &bit in &self.recorded {
            w.bit(bit);
        }
        // The suffix section is omitted entirely while empty, which keeps
        // the boundary message at exactly min(budget, m) bits.
        if !self.suffix.is_empty() {
            let vertex_count = self.params().vertex_count;
            w.field(self.suffix.len() as u64, LEN_PREFIX_BITS);
            for &edge in &self.suffix {
                write_edge(&mut w, edge, vertex_count);
            }
        }
        w.finish()
    }

    fn restore(&mut self, params: &PublicParams, state: &BitString) -> Result<(), StreamError> {
        self.reset(params);
        let mut r = BitReader::new(state);
        for slot in 0..self.positions.len() {
            self.recorded[slot] =
                r.bit().ok_or_else(|| malformed("state shorter than the sample size"))?;
        }
        if r.remaining() > 0 {
            let count =
                r.field(LEN_PREFIX_BITS).ok_or_else(|| malformed("truncated suffix count"))?;
            for _ in 0..count {
                let edge = read_edge(&mut r, params.vertex_count)?;
                self.suffix.push(edge);
            }
            if r.remaining() != 0 {
                return Err(malformed("trailing bits after suffix edges"));
            }
        }
        Ok(())
    }

    fn decide(&self) -> Result<bool, StreamError> {
        let params = self.params();
        let (j, k) = self.infer_split()?;
        let position = j * params.n + k;
        if position >= params.m {
            return Err(StreamError::UnrecognizedSuffix(format!(
                "recovered position {position} is out of range for m={}",
                params.m
            )));
        }
        Ok(match self.positions.binary_search(&position) {
            Ok(slot) => params.property.verdict_for_bit(self.recorded[slot]),
            Err(_) => self.coin(),
        })
    }
}

// ---------------------------------------------------------------------------
// Constant
// ---------------------------------------------------------------------------

/// Ignores the stream and always answers the same; zero bits of state.
pub struct Constant {
    verdict: bool,
}

impl Constant {
    pub fn new(verdict: bool) -> Self {
        Self { verdict }
    }
}

impl StreamingAlgorithm for Constant {
    fn begin(&mut self, _params: &PublicParams) {}

    fn absorb(&mut self, _edge: Edge) {}

    fn snapshot(&self) -> BitString {
        BitString::new()
    }

    fn restore(&mut self, _params: &PublicParams, state: &BitString) -> Result<(), StreamError> {
        if !state.is_empty() {
            return Err(malformed("constant algorithm state must be empty"));
        }
        Ok(())
    }

    fn decide(&self) -> Result<bool, StreamError> {
        Ok(self.verdict)
    }
}

// ---------------------------------------------------------------------------
// UnionFind
// ---------------------------------------------------------------------------

/// One-pass undirected connectivity with union by rank and path
/// compression. State serializes as the parent array then the rank array,
/// `ceil(log2(n))` bits per entry: at most `2·n·ceil(log2(n))` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<usize>,
}

impl UnionFind {
    pub fn new(vertex_count: usize) -> Self {
        Self { parent: (0..vertex_count).collect(), rank: vec![0; vertex_count] }
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn find(&mut self, v: VertexId) -> VertexId {
        if self.parent[v] != v {
            let root = self.find(self.parent[v]);
            self.parent[v] = root;
        }
        self.parent[v]
    }

    /// Merges the two endpoint classes; false if already joined.
    pub fn union(&mut self, a: VertexId, b: VertexId) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        true
    }

    /// Treats the edge as undirected and merges its endpoints.
    pub fn absorb(&mut self, edge: Edge) {
        self.union(edge.from, edge.to);
    }

    /// Number of connected components (roots are their own parents).
    pub fn component_count(&self) -> usize {
        self.parent.iter().enumerate().filter(|&(v, &p)| v == p).count()
    }

    pub fn snapshot(&self) -> BitString {
        let width = width_for(self.vertex_count());
        let mut w = BitWriter::new();
        for &p in &self.parent {
            w.field(p as u64, width);
        }
        for &r in &self.rank {
            w.field(r as u64, width);
        }
        w.finish()
    }

    pub fn state_bits(&self) -> usize {
        2 * self.vertex_count() * width_for(self.vertex_count())
    }

    pub fn restore(vertex_count: usize, state: &BitString) -> Result<Self, StreamError> {
        let width = width_for(vertex_count);
        let mut r = BitReader::new(state);
        let mut read_array = |what: &str| -> Result<Vec<usize>, StreamError> {
            (0..vertex_count)
                .map(|_| {
                    let value = r
                        .field(width)
                        .ok_or_else(|| malformed(format!("truncated {what} array")))?
                        as usize;
                    if value >= vertex_count.max(1) {
                        return Err(malformed(format!("{what} entry {value} out of range")));
                    }
                    Ok(value)
                })
                .collect()
        };
        let parent = read_array("parent")?;
        let rank = read_array("rank")?;
        if r.remaining() != 0 {
            return Err(malformed("trailing bits after rank array"));
        }
        Ok(Self { parent, rank })
    }
}

/// Component count of an undirected edge stream in one pass.
pub fn union_find_components(
    vertex_count: usize,
    edges: impl IntoIterator<Item = Edge>,
) -> usize {
    let mut uf = UnionFind::new(vertex_count);
    for edge in edges {
        uf.absorb(edge);
    }
    uf.component_count()
}
