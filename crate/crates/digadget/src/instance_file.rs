//! The on-disk instance format.
//!
//! ```text
//! digadget <property> m=<m> n=<n> i=<i> s=<vertex|none>
//! <from> <to>        one line per e1 edge
//! ---
//! <from> <to>        one line per e2 edge
//! ```
//!
//! The `---` boundary line is mandatory even when `e1` is empty. Rendering
//! sorts each edge set, so equal instances produce byte-identical files;
//! parsing accepts the edges in any order. Parsed files carry whatever edge
//! sets they declare — they are checked against the vertex layout, but not
//! against the canonical construction, so hand-edited variants can still be
//! run through the oracles.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::gadget::{GadgetInstance, Property};
use crate::graph::{Digraph, Edge, GraphError, VertexId};

pub const BOUNDARY_MARKER: &str = "---";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn parse_error(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// The document model of an instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub property: Property,
    pub m: usize,
    pub n: usize,
    pub i: usize,
    pub s: Option<VertexId>,
    pub e1: BTreeSet<Edge>,
    pub e2: BTreeSet<Edge>,
}

impl InstanceFile {
    pub fn from_instance(instance: &GadgetInstance) -> Self {
        Self {
            property: instance.property(),
            m: instance.m(),
            n: instance.n(),
            i: instance.params().position(),
            s: instance.source(),
            e1: instance.e1().clone(),
            e2: instance.e2().clone(),
        }
    }

    /// Vertices `0..2n` plus the source when present.
    pub fn vertex_count(&self) -> usize {
        2 * self.n + self.s.is_some() as usize
    }

    /// The full graph `e1 ∪ e2`.
    pub fn graph(&self) -> Result<Digraph, GraphError> {
        Digraph::from_edges(self.vertex_count(), self.e1.iter().chain(self.e2.iter()).copied())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let s = match self.s {
            Some(v) => v.to_string(),
            None => "none".to_string(),
        };
        writeln!(out, "digadget {} m={} n={} i={} s={}", self.property.token(), self.m, self.n, self.i, s)
            .unwrap();
        for edge in &self.e1 {
            writeln!(out, "{edge}").unwrap();
        }
        writeln!(out, "{BOUNDARY_MARKER}").unwrap();
        for edge in &self.e2 {
            writeln!(out, "{edge}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate().map(|(idx, line)| (idx + 1, line.trim_end()));
        let (header_no, header) =
            lines.next().ok_or_else(|| parse_error(1, "empty file, expected a header line"))?;
        let mut file = Self::parse_header(header_no, header)?;

        let vertex_count = file.vertex_count();
        let mut seen_boundary = false;
        for (line_no, line) in lines {
            if line == BOUNDARY_MARKER {
                if seen_boundary {
                    return Err(parse_error(line_no, "duplicate boundary marker"));
                }
                seen_boundary = true;
                continue;
            }
            let edge = Self::parse_edge_line(line_no, line, vertex_count)?;
            if seen_boundary {
                file.e2.insert(edge);
            } else {
                file.e1.insert(edge);
            }
        }
        if !seen_boundary {
            return Err(parse_error(
                text.lines().count().max(1),
                format!("missing boundary marker {BOUNDARY_MARKER:?}"),
            ));
        }
        Ok(file)
    }

    fn parse_header(line_no: usize, header: &str) -> Result<Self, ParseError> {
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() != 6 || tokens[0] != "digadget" {
            return Err(parse_error(
                line_no,
                "header must be: digadget <property> m=<m> n=<n> i=<i> s=<vertex|none>",
            ));
        }
        let property: Property =
            tokens[1].parse().map_err(|e| parse_error(line_no, format!("{e}")))?;
        let mut fields = tokens[2..].iter();
        let mut take = |key: &str| -> Result<String, ParseError> {
            let token = fields.next().expect("header has exactly four fields");
            token
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| parse_error(line_no, format!("expected {key}=<value>, got {token:?}")))
        };
        let m: usize = take("m")?
            .parse()
            .map_err(|_| parse_error(line_no, "m must be a non-negative integer"))?;
        let n: usize = take("n")?
            .parse()
            .map_err(|_| parse_error(line_no, "n must be a non-negative integer"))?;
        let i: usize = take("i")?
            .parse()
            .map_err(|_| parse_error(line_no, "i must be a non-negative integer"))?;
        let s_token = take("s")?;
        if m == 0 || n == 0 {
            return Err(parse_error(line_no, "m and n must be at least 1"));
        }
        if i >= m {
            return Err(parse_error(line_no, format!("index i={i} must be below m={m}")));
        }
        let s = match s_token.as_str() {
            "none" => None,
            other => {
                let vertex: VertexId = other
                    .parse()
                    .map_err(|_| parse_error(line_no, "s must be a vertex id or `none`"))?;
                Some(vertex)
            }
        };
        match (property.uses_source(), s) {
            (true, Some(vertex)) if vertex != 2 * n => {
                return Err(parse_error(line_no, format!("s must be 2n = {}", 2 * n)));
            }
            (true, None) => {
                return Err(parse_error(line_no, "reachability instances need s=<vertex>"));
            }
            (false, Some(_)) => {
                return Err(parse_error(line_no, format!("property {property} takes s=none")));
            }
            _ => {}
        }
        Ok(Self { property, m, n, i, s, e1: BTreeSet::new(), e2: BTreeSet::new() })
    }

    fn parse_edge_line(
        line_no: usize,
        line: &str,
        vertex_count: usize,
    ) -> Result<Edge, ParseError> {
        let mut tokens = line.split_whitespace();
        let (Some(from), Some(to), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(parse_error(line_no, format!("expected `<from> <to>`, got {line:?}")));
        };
        let parse_vertex = |token: &str| -> Result<VertexId, ParseError> {
            token
                .parse()
                .map_err(|_| parse_error(line_no, format!("invalid vertex id {token:?}")))
        };
        let edge = Edge::new(parse_vertex(from)?, parse_vertex(to)?);
        if edge.from >= vertex_count || edge.to >= vertex_count {
            return Err(parse_error(
                line_no,
                format!("edge {edge:?} has an endpoint outside 0..{vertex_count}"),
            ));
        }
        Ok(edge)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{BitVector, IndexInstance};
    use proptest::prelude::*;

    fn build(property: Property, x: &str, i: usize) -> GadgetInstance {
        let inst = IndexInstance::new(x.parse().unwrap(), i).unwrap();
        GadgetInstance::build(property, &inst)
    }

    #[test]
    fn renders_the_figure_acyclicity_instance() {
        let file = InstanceFile::from_instance(&build(Property::Acyclicity, "001011010", 5));
        assert_eq!(
            file.render(),
            "digadget acyc m=9 n=3 i=5 s=none\n0 5\n1 4\n1 5\n2 4\n---\n5 1\n"
        );
    }

    #[test]
    fn renders_the_degenerate_reachability_instance() {
        let file = InstanceFile::from_instance(&build(Property::ReachabilityFromS, "0", 0));
        assert_eq!(file.render(), "digadget reach m=1 n=1 i=0 s=2\n---\n2 0\n");
    }

    #[test]
    fn round_trips_the_figure_instances() {
        for property in Property::ALL {
            let file = InstanceFile::from_instance(&build(property, "001011010", 5));
            assert_eq!(InstanceFile::parse(&file.render()).unwrap(), file);
        }
    }

    #[test]
    fn accepts_edges_in_any_order() {
        let text = "digadget acyc m=9 n=3 i=5 s=none\n2 4\n0 5\n1 5\n1 4\n---\n5 1\n";
        let canonical = "digadget acyc m=9 n=3 i=5 s=none\n0 5\n1 4\n1 5\n2 4\n---\n5 1\n";
        assert_eq!(InstanceFile::parse(text).unwrap().render(), canonical);
    }

    #[test]
    fn reports_errors_with_line_numbers() {
        let missing_boundary = "digadget acyc m=9 n=3 i=5 s=none\n0 5\n";
        let err = InstanceFile::parse(missing_boundary).unwrap_err();
        assert!(err.message.contains("boundary"), "{err}");

        let bad_edge = "digadget acyc m=9 n=3 i=5 s=none\n0 9\n---\n";
        let err = InstanceFile::parse(bad_edge).unwrap_err();
        assert_eq!(err.line, 2);

        let bad_index = "digadget acyc m=9 n=3 i=9 s=none\n---\n";
        assert_eq!(InstanceFile::parse(bad_index).unwrap_err().line, 1);

        let s_on_acyc = "digadget acyc m=9 n=3 i=5 s=6\n---\n";
        assert!(InstanceFile::parse(s_on_acyc).is_err());

        let wrong_s = "digadget reach m=9 n=3 i=5 s=5\n---\n";
        assert!(InstanceFile::parse(wrong_s).is_err());
    }

    #[test]
    fn graph_unions_both_edge_sets() {
        let file = InstanceFile::from_instance(&build(Property::Acyclicity, "001011010", 5));
        let g = file.graph().unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 5);
        assert!(!g.is_acyclic());
    }

    proptest! {
        // Render→parse is the identity on generated instances, for every
        // property and a spread of (m, i, x).
        #[test]
        fn render_parse_round_trip(
            m in 1usize..40,
            i_raw in 0usize..40,
            bits in prop::collection::vec(any::<bool>(), 40),
            property_idx in 0usize..3,
        ) {
            let i = i_raw % m;
            let x = BitVector::from_bits(bits[..m].to_vec());
            let inst = IndexInstance::new(x, i).unwrap();
            let gadget = GadgetInstance::build(Property::ALL[property_idx], &inst);
            let file = InstanceFile::from_instance(&gadget);
            let reparsed = InstanceFile::parse(&file.render()).unwrap();
            prop_assert_eq!(reparsed, file);
        }
    }
}
