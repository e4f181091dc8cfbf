//! The three index-encoding gadget constructions.
//!
//! An index instance is a bit-vector `x` of length `m` together with a
//! position `i`. Each construction turns it into a digraph over the fixed
//! layout `L = 0..n-1`, `R = n..2n-1` (plus `s = 2n` for reachability),
//! where `n = ceil(sqrt(m))`, such that the graph property holds iff a
//! fixed function of `x[i]` does:
//!
//! * acyclicity holds iff `x[i] = 0`;
//! * strong connectivity holds iff `x[i] = 1`;
//! * reachability of every vertex from `s` holds iff `x[i] = 1`.
//!
//! The edge set splits into `e1` (a bipartite L→R set determined by `x`
//! alone) and `e2` (determined by `i` alone), which is what makes the
//! one-way protocol in [`crate::protocol`] work.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::graph::{Digraph, Edge, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("index {i} is out of range for a bit-vector of length {m}")]
    IndexOutOfRange { i: usize, m: usize },
    #[error("bit-vector must be non-empty")]
    EmptyBitVector,
    #[error("invalid bit character {0:?}, expected '0' or '1'")]
    InvalidBitChar(char),
    #[error("unknown property {0:?}, expected one of acyc, sc, reach")]
    UnknownProperty(String),
}

/// Smallest `n` with `n * n >= m`.
pub(crate) fn ceil_sqrt(m: usize) -> usize {
    let root = m.isqrt();
    if root * root == m {
        root
    } else {
        root + 1
    }
}

/// Alice's bit-vector. Positions are 0-based; length `m` is at least 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        assert!(!bits.is_empty(), "bit-vector must be non-empty");
        Self { bits }
    }

    pub fn zeros(m: usize) -> Self {
        assert!(m >= 1, "bit-vector must be non-empty");
        Self { bits: vec![false; m] }
    }

    pub fn ones(m: usize) -> Self {
        assert!(m >= 1, "bit-vector must be non-empty");
        Self { bits: vec![true; m] }
    }

    /// Bit at position `p` is `(value >> p) & 1`; handy for exhaustive
    /// sweeps over all vectors of a small length.
    pub fn from_int(value: u64, m: usize) -> Self {
        assert!((1..=64).contains(&m));
        Self { bits: (0..m).map(|p| value >> p & 1 == 1).collect() }
    }

    pub fn random(m: usize, rng: &mut impl Rng) -> Self {
        assert!(m >= 1, "bit-vector must be non-empty");
        Self { bits: (0..m).map(|_| rng.random()).collect() }
    }

    /// Length `m`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        // Constructors reject empty vectors.
        false
    }

    /// Bit at `position`; panics when out of range.
    pub fn get(&self, position: usize) -> bool {
        self.bits[position]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }
}

impl FromStr for BitVector {
    type Err = GadgetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(GadgetError::EmptyBitVector);
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(GadgetError::InvalidBitChar(other)),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        Ok(Self { bits })
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in &self.bits {
            write!(f, "{}", if *bit { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A full index-problem instance: Alice's vector plus Bob's position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexInstance {
    x: BitVector,
    i: usize,
}

impl IndexInstance {
    pub fn new(x: BitVector, i: usize) -> Result<Self, GadgetError> {
        if i >= x.len() {
            return Err(GadgetError::IndexOutOfRange { i, m: x.len() });
        }
        Ok(Self { x, i })
    }

    pub fn x(&self) -> &BitVector {
        &self.x
    }

    pub fn index(&self) -> usize {
        self.i
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    /// The bit the whole construction is about: `x[i]`.
    pub fn indexed_bit(&self) -> bool {
        self.x.get(self.i)
    }
}

/// Layout parameters derived from `(m, i)`: the side length `n` and the
/// row/column split `i = j*n + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetParams {
    pub n: usize,
    pub j: usize,
    pub k: usize,
}

impl GadgetParams {
    pub fn derive(m: usize, i: usize) -> Result<Self, GadgetError> {
        if i >= m {
            return Err(GadgetError::IndexOutOfRange { i, m });
        }
        let n = ceil_sqrt(m);
        let k = i % n;
        let j = (i - k) / n;
        Ok(Self { n, j, k })
    }

    /// Recovers the encoded position `j*n + k`.
    pub fn position(&self) -> usize {
        self.j * self.n + self.k
    }
}

/// The three graph properties a gadget can encode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Acyclicity,
    StrongConnectivity,
    ReachabilityFromS,
}

impl Property {
    pub const ALL: [Property; 3] =
        [Property::Acyclicity, Property::StrongConnectivity, Property::ReachabilityFromS];

    /// Short token used on the command line and in instance files.
    pub fn token(self) -> &'static str {
        match self {
            Property::Acyclicity => "acyc",
            Property::StrongConnectivity => "sc",
            Property::ReachabilityFromS => "reach",
        }
    }

    /// Whether the layout carries the extra source vertex `s = 2n`.
    pub fn uses_source(self) -> bool {
        matches!(self, Property::ReachabilityFromS)
    }

    /// The property verdict a gadget built from `(x, i)` has when `x[i] = xi`.
    pub fn verdict_for_bit(self, xi: bool) -> bool {
        match self {
            Property::Acyclicity => !xi,
            Property::StrongConnectivity | Property::ReachabilityFromS => xi,
        }
    }

    /// Inverse of [`Property::verdict_for_bit`]: the indexed bit implied by
    /// a property verdict.
    pub fn bit_for_verdict(self, verdict: bool) -> bool {
        // The encoding maps are involutions, so this is the same table.
        self.verdict_for_bit(verdict)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Property {
    type Err = GadgetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "acyc" | "acyclicity" => Ok(Property::Acyclicity),
            "sc" | "strong-connectivity" => Ok(Property::StrongConnectivity),
            "reach" | "reachability" => Ok(Property::ReachabilityFromS),
            other => Err(GadgetError::UnknownProperty(other.to_string())),
        }
    }
}

/// The answer the gadget encodes, read directly off `x[i]` without
/// building any graph.
pub fn ground_truth(property: Property, inst: &IndexInstance) -> bool {
    property.verdict_for_bit(inst.indexed_bit())
}

/// Alice's edge set: `L_j -> R_k` is present iff `x`, zero-padded to `n*n`
/// bits, has a 1 at position `j*n + k`. Exactly `count_ones(x)` edges.
pub fn build_e1(x: &BitVector) -> BTreeSet<Edge> {
    let n = ceil_sqrt(x.len());
    (0..x.len())
        .filter(|&p| x.get(p))
        .map(|p| Edge::new(p / n, n + p % n))
        .collect()
}

/// Bob's edge set for the given property and layout. Depends only on
/// `(property, n, j, k)`, never on `x`.
pub fn build_e2(property: Property, params: GadgetParams) -> BTreeSet<Edge> {
    let GadgetParams { n, j, k } = params;
    let left = j; // L_j
    let right = n + k; // R_k
    let mut e2 = BTreeSet::new();
    match property {
        // One edge back across the bipartition: R_k -> L_j.
        Property::Acyclicity => {
            e2.insert(Edge::new(right, left));
        }
        // A full out-star at R_k and a full in-star at L_j. The edge
        // R_k -> L_j lies in both stars, so the set has 4n-3 edges.
        Property::StrongConnectivity => {
            for v in 0..2 * n {
                if v != right {
                    e2.insert(Edge::new(right, v));
                }
                if v != left {
                    e2.insert(Edge::new(v, left));
                }
            }
        }
        // s -> L_j, then L_j covers R except R_k and R_k covers L except
        // L_j: 2n-1 edges. Only the missing L_j -> R_k hop, supplied by e1
        // exactly when x[i] = 1, can close the gap.
        Property::ReachabilityFromS => {
            let source = 2 * n;
            e2.insert(Edge::new(source, left));
            for u in 0..n {
                if u != k {
                    e2.insert(Edge::new(left, n + u));
                }
                if u != j {
                    e2.insert(Edge::new(right, u));
                }
            }
        }
    }
    e2
}

/// A constructed reduction instance: layout parameters plus the two edge
/// sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    property: Property,
    params: GadgetParams,
    m: usize,
    e1: BTreeSet<Edge>,
    e2: BTreeSet<Edge>,
}

impl GadgetInstance {
    pub fn build(property: Property, inst: &IndexInstance) -> Self {
        let params = GadgetParams::derive(inst.m(), inst.index())
            .expect("IndexInstance guarantees i < m");
        Self {
            property,
            params,
            m: inst.m(),
            e1: build_e1(inst.x()),
            e2: build_e2(property, params),
        }
    }

    pub fn property(&self) -> Property {
        self.property
    }

    pub fn params(&self) -> GadgetParams {
        self.params
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.params.n + self.property.uses_source() as usize
    }

    /// The designated source vertex, present only for reachability.
    pub fn source(&self) -> Option<VertexId> {
        self.property.uses_source().then_some(2 * self.params.n)
    }

    pub fn e1(&self) -> &BTreeSet<Edge> {
        &self.e1
    }

    pub fn e2(&self) -> &BTreeSet<Edge> {
        &self.e2
    }

    /// The full graph `e1 ∪ e2`.
    pub fn graph(&self) -> Digraph {
        Digraph::from_edges(self.vertex_count(), self.e1.iter().chain(self.e2.iter()).copied())
            .expect("gadget edges are within the vertex range")
    }

    /// Runs the matching exact oracle on the built graph.
    pub fn oracle_verdict(&self) -> bool {
        let g = self.graph();
        match self.property {
            Property::Acyclicity => g.is_acyclic(),
            Property::StrongConnectivity => g.is_strongly_connected(),
            Property::ReachabilityFromS => g
                .reaches_all(self.source().expect("reachability instances have a source"))
                .expect("source is within the vertex range"),
        }
    }
}
