//! graph6 and the `n; u-v,u-v` edge-list text form.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;
use core::str::FromStr;

use super::{Graph, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseGraphError {
    #[error("empty graph string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range 63..=126 in {token:?}")]
    BadByte { token: String, offset: usize, byte: u8 },
    #[error("graph6 string {token:?} has length {found}, expected {expected}")]
    BadLength { token: String, expected: usize, found: usize },
    #[error("graph6 string {token:?} encodes {n} vertices, more than {MAX_VERTICES}")]
    TooLarge { token: String, n: usize },
    #[error("malformed edge list near {token:?}")]
    EdgeList { token: String },
}

const HEADER: &str = ">>graph6<<";

impl Graph {
    /// Parses a graph6 string (an optional `>>graph6<<` header is accepted).
    pub fn from_graph6(s: &str) -> Result<Graph, ParseGraphError> {
        let token = s.trim();
        let body = token.strip_prefix(HEADER).unwrap_or(token).as_bytes();
        if body.is_empty() {
            return Err(ParseGraphError::Empty);
        }
        if let Some((offset, &byte)) = body.iter().enumerate().find(|(_, &b)| !(63..=126).contains(&b)) {
            return Err(ParseGraphError::BadByte { token: token.to_string(), offset, byte });
        }
        let (n, rest) = if body[0] == 126 {
            if body.len() >= 2 && body[1] == 126 {
                return Err(ParseGraphError::TooLarge { token: token.to_string(), n: usize::MAX });
            }
            if body.len() < 4 {
                return Err(ParseGraphError::BadLength {
                    token: token.to_string(),
                    expected: 4,
                    found: body.len(),
                });
            }
            let n = body[1..4].iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
            (n, &body[4..])
        } else {
            ((body[0] - 63) as usize, &body[1..])
        };
        if n > MAX_VERTICES {
            return Err(ParseGraphError::TooLarge { token: token.to_string(), n });
        }
        let bits = n * n.saturating_sub(1) / 2;
        let expected = bits.div_ceil(6);
        if rest.len() != expected {
            return Err(ParseGraphError::BadLength {
                token: token.to_string(),
                expected: expected + (body.len() - rest.len()),
                found: body.len(),
            });
        }
        let mut g = Graph::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = rest[k / 6] - 63;
                if byte >> (5 - k % 6) & 1 == 1 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        Ok(g)
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push((n >> shift & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = acc << 1 | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        // every byte is in 63..=126
        String::from_utf8(out).unwrap()
    }

    /// Parses `n; u-v,u-v,...` (whitespace tolerant, trailing comma allowed).
    pub fn from_edge_list(s: &str) -> Result<Graph, ParseGraphError> {
        let bad = |t: &str| ParseGraphError::EdgeList { token: t.trim().to_string() };
        let (head, tail) = s.split_once(';').ok_or_else(|| bad(s))?;
        let n: usize = head.trim().parse().map_err(|_| bad(head))?;
        if n > MAX_VERTICES {
            return Err(ParseGraphError::TooLarge { token: s.trim().to_string(), n });
        }
        let mut edges = Vec::new();
        for item in tail.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = item.split_once('-').ok_or_else(|| bad(item))?;
            let u: usize = a.trim().parse().map_err(|_| bad(item))?;
            let v: usize = b.trim().parse().map_err(|_| bad(item))?;
            edges.push((u, v));
        }
        Graph::from_edges(n, &edges).map_err(|_| bad(s))
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{};", self.n);
        for (i, (u, v)) in self.edges().into_iter().enumerate() {
            let _ = write!(out, "{}{}-{}", if i == 0 { " " } else { "," }, u, v);
        }
        out
    }
}

impl FromStr for Graph {
    type Err = ParseGraphError;

    /// Edge-list form if the string contains `;`, graph6 otherwise.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains(';') {
            Graph::from_edge_list(s)
        } else {
            Graph::from_graph6(s)
        }
    }
}
