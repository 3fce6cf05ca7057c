//! McKay's graph6 encoding, restricted to the single-byte size header.
//!
//! The upper triangle is read column by column (`x01, x02, x12, x03, ...`),
//! six bits per byte, most significant bit first, each byte offset by 63.

use super::WeightedGraph;
use crate::error::{Error, Result};

/// Largest order expressible with a one-byte header.
pub const MAX_GRAPH6_ORDER: usize = 62;

const OFFSET: u8 = 63;
const OPTIONAL_HEADER: &[u8] = b">>graph6<<";

fn upper_triangle(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

/// Parses one graph6 line into an unweighted graph. A trailing newline is
/// tolerated; disconnected graphs yield [`Error::Disconnected`].
pub fn parse_graph6(bytes: &[u8]) -> Result<WeightedGraph> {
    let mut line = bytes;
    while let [rest @ .., b'\n' | b'\r'] = line {
        line = rest;
    }
    if let Some(rest) = line.strip_prefix(OPTIONAL_HEADER) {
        line = rest;
    }
    let (&header, body) = line
        .split_first()
        .ok_or_else(|| Error::Parse("empty graph6 line".into()))?;
    if header == 126 {
        return Err(Error::Parse(format!(
            "multi-byte size header (n > {MAX_GRAPH6_ORDER}) is not supported"
        )));
    }
    if !(OFFSET..126).contains(&header) {
        return Err(Error::Parse(format!("malformed size byte {header}")));
    }
    let n = usize::from(header - OFFSET);
    if n < 2 {
        return Err(Error::Parse(format!("graph of order {n} is not supported")));
    }
    let bit_count = n * (n - 1) / 2;
    let expected = bit_count.div_ceil(6);
    if body.len() != expected {
        return Err(Error::Parse(format!(
            "expected {expected} data bytes for n = {n}, found {}",
            body.len()
        )));
    }
    if let Some(&b) = body.iter().find(|&&b| !(OFFSET..=126).contains(&b)) {
        return Err(Error::Parse(format!("byte {b} outside [63, 126]")));
    }
    let bit = |k: usize| -> bool {
        let byte = body[k / 6] - OFFSET;
        (byte >> (5 - k % 6)) & 1 == 1
    };
    if (bit_count..expected * 6).any(bit) {
        return Err(Error::Parse("nonzero padding bits".into()));
    }
    let pairs = upper_triangle(n)
        .enumerate()
        .filter(|&(k, _)| bit(k))
        .map(|(_, pair)| pair);
    WeightedGraph::unweighted(n, pairs)?.require_connected()
}

/// Encodes an unweighted loop-free graph with `n <= 62`. No newline is
/// appended.
pub fn write_graph6(g: &WeightedGraph) -> Result<Vec<u8>> {
    if !g.is_simple_unweighted() {
        return Err(Error::InvalidParameter(
            "graph6 requires an unweighted graph without self-loops".into(),
        ));
    }
    let n = g.n();
    if n > MAX_GRAPH6_ORDER {
        return Err(Error::InvalidParameter(format!(
            "graph6 output limited to n <= {MAX_GRAPH6_ORDER}, got {n}"
        )));
    }
    let mut out = vec![OFFSET + n as u8];
    let mut acc = 0u8;
    let mut filled = 0;
    for (i, j) in upper_triangle(n) {
        acc = (acc << 1) | u8::from(g.weight(i, j) > 0.0);
        filled += 1;
        if filled == 6 {
            out.push(acc + OFFSET);
            acc = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + OFFSET);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{complete, path, star};
    use proptest::prelude::*;

    #[test]
    fn known_encodings() {
        assert_eq!(parse_graph6(b"Bw").unwrap(), complete(3).clone_unnamed());
        assert_eq!(parse_graph6(b"Bg\n").unwrap(), path(3).clone_unnamed());
        assert_eq!(parse_graph6(b"A_").unwrap(), complete(2).clone_unnamed());
        assert_eq!(write_graph6(&complete(3)).unwrap(), b"Bw");
        assert_eq!(write_graph6(&complete(2)).unwrap(), b"A_");
        assert_eq!(write_graph6(&path(3)).unwrap(), b"Bg");
        assert_eq!(write_graph6(&star(4)).unwrap(), b"Cs");
    }

    #[test]
    fn optional_header_and_crlf() {
        assert_eq!(
            parse_graph6(b">>graph6<<Bw\r\n").unwrap(),
            complete(3).clone_unnamed()
        );
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(parse_graph6(b""), Err(Error::Parse(_))));
        assert!(matches!(parse_graph6(b"~"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph6(b" w"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph6(b"B "), Err(Error::Parse(_))));
        assert!(matches!(parse_graph6(b"Bww"), Err(Error::Parse(_))));
        // 'x' = 111001: the padding bit is set
        assert!(matches!(parse_graph6(b"Bx"), Err(Error::Parse(_))));
    }

    #[test]
    fn disconnected_is_distinct() {
        // two disjoint edges 0-1, 2-3: bits 100001 -> 96 = '`'
        assert_eq!(parse_graph6(b"C`"), Err(Error::Disconnected));
    }

    #[test]
    fn writer_rejects_weighted() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 2.0)]).unwrap();
        assert!(write_graph6(&g).is_err());
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0), (0, 0, 1.0)]).unwrap();
        assert!(write_graph6(&g).is_err());
        assert!(write_graph6(&path(63)).is_err());
    }

    impl WeightedGraph {
        fn clone_unnamed(&self) -> WeightedGraph {
            WeightedGraph {
                name: None,
                ..self.clone()
            }
        }
    }

    fn arb_connected() -> impl Strategy<Value = WeightedGraph> {
        (2usize..=20).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), prop::collection::vec(any::<bool>(), pairs)).prop_filter_map(
                "connected",
                |(n, bits)| {
                    let pairs = upper_triangle(n)
                        .zip(bits)
                        .filter(|&(_, b)| b)
                        .map(|(p, _)| p);
                    WeightedGraph::unweighted(n, pairs)
                        .ok()?
                        .require_connected()
                        .ok()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn round_trip(g in arb_connected()) {
            let bytes = write_graph6(&g).unwrap();
            prop_assert_eq!(parse_graph6(&bytes).unwrap(), g);
        }
    }
}
