//! Bit-exact graph6 encoding and decoding.
//!
//! Layout per the format specification: a size field `N(n)` followed by the
//! upper triangle of the adjacency matrix in column order
//! (`x_{0,1}, x_{0,2}, x_{1,2}, x_{0,3}, ...`), packed into 6-bit groups,
//! each group offset by 63 into the printable range.

use crate::graph::{Graph, GraphBuilder};
use crate::{Error, Result};

const HEADER: &str = ">>graph6<<";

/// Encodes a graph; requires `n >= 1`.
pub fn encode(g: &Graph) -> Result<String> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Domain(
            "graph6: cannot encode the empty vertex set".into(),
        ));
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else if n <= 258_047 {
        out.push(126);
        out.push(63 + ((n >> 12) & 0x3f) as u8);
        out.push(63 + ((n >> 6) & 0x3f) as u8);
        out.push(63 + (n & 0x3f) as u8);
    } else {
        return Err(Error::Domain(format!(
            "graph6: n = {n} exceeds supported range"
        )));
    }
    let mut acc = 0u8;
    let mut nbits = 0u8;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            nbits += 1;
            if nbits == 6 {
                out.push(63 + acc);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push(63 + (acc << (6 - nbits)));
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
}

/// Decodes a graph6 string (optionally prefixed by the `>>graph6<<` header;
/// trailing newline tolerated). Rejects malformed input, including wrong
/// byte counts and nonzero padding bits.
pub fn decode(s: &str) -> Result<Graph> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse("graph6: empty input".into()));
    }
    for &b in bytes {
        if !(63..=126).contains(&b) {
            return Err(Error::Parse(format!("graph6: byte {b} out of range")));
        }
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(Error::Parse(
                "graph6: 8-byte size field not supported".into(),
            ));
        }
        if bytes.len() < 4 {
            return Err(Error::Parse("graph6: truncated size field".into()));
        }
        let n = ((bytes[1] as usize - 63) << 12)
            | ((bytes[2] as usize - 63) << 6)
            | (bytes[3] as usize - 63);
        (n, 4)
    } else {
        (bytes[0] as usize - 63, 1)
    };
    if n == 0 {
        return Err(Error::Parse("graph6: zero-vertex graph rejected".into()));
    }
    let nbits = n * (n - 1) / 2;
    let expect = nbits.div_ceil(6);
    if bytes.len() - pos != expect {
        return Err(Error::Parse(format!(
            "graph6: expected {expect} data bytes for n = {n}, found {}",
            bytes.len() - pos
        )));
    }
    let mut builder = GraphBuilder::new(n);
    let mut acc = 0u32;
    let mut have = 0u32;
    let mut bit_index = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            if have == 0 {
                acc = (bytes[pos] - 63) as u32;
                pos += 1;
                have = 6;
            }
            have -= 1;
            if acc >> have & 1 == 1 {
                builder.add_edge(i, j)?;
            }
            bit_index += 1;
            if bit_index == nbits {
                break 'outer;
            }
        }
    }
    // remaining bits of the final group are padding and must be zero
    if have > 0 && acc & ((1 << have) - 1) != 0 {
        return Err(Error::Parse("graph6: nonzero padding bits".into()));
    }
    Ok(builder.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    #[test]
    fn k3_encodes_to_bw() {
        // by hand from the format: n=3 -> 'B'; bits 1,1,1 padded -> 111000 -> 'w'
        let k3 = Graph::complete(3);
        assert_eq!(encode(&k3).unwrap(), "Bw");
        let back = decode("Bw").unwrap();
        assert!(back == k3);
    }

    #[test]
    fn single_vertex_is_at_sign() {
        let g = Graph::empty(1);
        assert_eq!(encode(&g).unwrap(), "@");
        assert!(decode("@").unwrap() == g);
    }

    #[test]
    fn truncated_input_is_an_error() {
        assert!(decode("B").is_err());
        assert!(decode("").is_err());
        assert!(decode("~~").is_err());
    }

    #[test]
    fn header_and_newline_tolerated() {
        assert!(decode(">>graph6<<Bw\n").unwrap() == Graph::complete(3));
    }

    #[test]
    fn zero_vertices_rejected_on_encode() {
        assert!(encode(&Graph::empty(0)).is_err());
    }

    #[test]
    fn roundtrip_random_graphs_up_to_8() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x6772617068);
        for _ in 0..500 {
            let n = rng.gen_range(1..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edge_list(n, &edges).unwrap();
            let enc = encode(&g).unwrap();
            assert!(decode(&enc).unwrap() == g, "roundtrip failed for {enc}");
        }
    }

    #[test]
    fn three_byte_size_field_roundtrip() {
        let g = Graph::path(100);
        let enc = encode(&g).unwrap();
        assert_eq!(enc.as_bytes()[0], 126);
        assert!(decode(&enc).unwrap() == g);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn roundtrip_is_identity(n in 1usize..=8, bits in any::<u32>()) {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in (u + 1)..n {
                        if bits >> k & 1 == 1 {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                let g = Graph::from_edge_list(n, &edges).unwrap();
                prop_assert!(decode(&encode(&g).unwrap()).unwrap() == g);
            }
        }
    }
}
