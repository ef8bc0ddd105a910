//! graph6 / sparse6 text formats and the bundled corpus.
//!
//! Both writers are byte-compatible with the reference implementation used by
//! nauty and networkx; sparse6 in particular follows the same edge order and
//! padding rule so that tokens round-trip exactly.

use std::path::{Path, PathBuf};

use super::{Graph, GraphBuilder, GraphError, Vertex};

const G6_HEADER: &str = ">>graph6<<";
const S6_HEADER: &str = ">>sparse6<<";

/// Environment variable overriding the directory searched for corpus files.
pub const CORPUS_ENV: &str = "RAMSEY_CORPUS_DIR";

/// All connected graphs on at most six vertices, one graph6 token per line.
pub const CONNECTED_LE6: &str = include_str!("../../data/connected_le6.g6");

fn encode_n(n: usize, out: &mut Vec<u8>) -> Result<(), GraphError> {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else if n <= 68_719_476_735 {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        return Err(GraphError::TooLarge(n));
    }
    Ok(())
}

fn check_bytes(data: &[u8]) -> Result<(), GraphError> {
    match data.iter().find(|&&b| !(63..=126).contains(&b)) {
        Some(&b) => Err(GraphError::ByteOutOfRange(b)),
        None => Ok(()),
    }
}

/// Returns `(n, rest)`.
fn decode_n(data: &[u8]) -> Result<(usize, &[u8]), GraphError> {
    let take = |bytes: &[u8]| bytes.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    match data {
        [] => Err(GraphError::MalformedHeader("empty token".into())),
        [126, 126, rest @ ..] if rest.len() >= 6 => Ok((take(&rest[..6]), &rest[6..])),
        [126, 126, ..] => Err(GraphError::MalformedHeader("truncated 8-byte size".into())),
        [126, rest @ ..] if rest.len() >= 3 => Ok((take(&rest[..3]), &rest[3..])),
        [126, ..] => Err(GraphError::MalformedHeader("truncated 4-byte size".into())),
        [b, rest @ ..] => Ok(((b - 63) as usize, rest)),
    }
}

fn pack_bits(bits: &[bool], out: &mut Vec<u8>) {
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for i in 0..6 {
            byte <<= 1;
            if chunk.get(i).copied().unwrap_or(false) {
                byte |= 1;
            }
        }
        out.push(byte + 63);
    }
}

pub fn write_graph6(g: &Graph) -> Result<String, GraphError> {
    let n = g.n();
    let mut out = Vec::new();
    encode_n(n, &mut out)?;
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n as Vertex {
        for i in 0..j {
            bits.push(g.has_edge(i, j));
        }
    }
    pack_bits(&bits, &mut out);
    Ok(String::from_utf8(out).expect("graph6 is ascii"))
}

pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let token = text.trim_end_matches(['\n', '\r']);
    let token = token.strip_prefix(G6_HEADER).unwrap_or(token);
    let data = token.as_bytes();
    check_bytes(data)?;
    let (n, rest) = decode_n(data)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if rest.len() != expected {
        return Err(GraphError::LengthMismatch { expected, found: rest.len() });
    }
    let mut b = GraphBuilder::with_vertices(n);
    let mut k = 0usize;
    for j in 1..n as Vertex {
        for i in 0..j {
            let byte = rest[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                b.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    Ok(b.build())
}

fn sparse6_k(n: usize) -> usize {
    let mut k = 1;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

pub fn write_sparse6(g: &Graph) -> Result<String, GraphError> {
    let n = g.n();
    let k = sparse6_k(n);
    let enc = |x: usize, bits: &mut Vec<bool>| {
        for i in 0..k {
            bits.push(x >> (k - 1 - i) & 1 == 1);
        }
    };
    let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (v as usize, u as usize)).collect();
    edges.sort_unstable();
    let mut bits = Vec::new();
    let mut curv = 0usize;
    for (v, u) in edges {
        if v == curv {
            bits.push(false);
            enc(u, &mut bits);
        } else if v == curv + 1 {
            curv += 1;
            bits.push(true);
            enc(u, &mut bits);
        } else {
            curv = v;
            bits.push(true);
            enc(v, &mut bits);
            bits.push(false);
            enc(u, &mut bits);
        }
    }
    let pad = (6 - bits.len() % 6) % 6;
    if k < 6 && n == (1 << k) && pad >= k && curv + 1 < n {
        bits.push(false);
    }
    let pad = (6 - bits.len() % 6) % 6;
    bits.extend(std::iter::repeat_n(true, pad));
    let mut out = vec![b':'];
    encode_n(n, &mut out)?;
    pack_bits(&bits, &mut out);
    Ok(String::from_utf8(out).expect("sparse6 is ascii"))
}

pub fn parse_sparse6(text: &str) -> Result<Graph, GraphError> {
    let token = text.trim_end_matches(['\n', '\r']);
    let token = token.strip_prefix(S6_HEADER).unwrap_or(token);
    let token = token
        .strip_prefix(':')
        .ok_or_else(|| GraphError::MalformedHeader("sparse6 token must start with ':'".into()))?;
    let data = token.as_bytes();
    check_bytes(data)?;
    let (n, rest) = decode_n(data)?;
    let k = sparse6_k(n);
    let total = rest.len() * 6;
    let bit = |i: usize| (rest[i / 6] - 63) >> (5 - i % 6) & 1 == 1;
    let mut b = GraphBuilder::with_vertices(n);
    let mut pos = 0usize;
    let mut v = 0usize;
    while pos + 1 + k <= total {
        let flag = bit(pos);
        let mut x = 0usize;
        for i in 0..k {
            x = (x << 1) | bit(pos + 1 + i) as usize;
        }
        pos += 1 + k;
        if flag {
            v += 1;
        }
        if x >= n || v >= n {
            break;
        }
        if x > v {
            v = x;
        } else {
            let (a, c) = (x as Vertex, v as Vertex);
            if a == c || b.has_edge(a, c) {
                return Err(GraphError::NotSimple(a, c));
            }
            b.add_edge(a, c)?;
        }
    }
    Ok(b.build())
}

/// Parses a graph6 or sparse6 token, choosing by the leading character.
pub fn parse_any(text: &str) -> Result<Graph, GraphError> {
    let t = text.trim();
    if t.starts_with(':') || t.starts_with(S6_HEADER) {
        parse_sparse6(t)
    } else {
        parse_graph6(t)
    }
}

/// Parses every non-empty line of a corpus file.
pub fn parse_corpus(text: &str) -> Result<Vec<Graph>, GraphError> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).map(parse_any).collect()
}

/// Directory named by [`CORPUS_ENV`], if set.
pub fn corpus_dir() -> Option<PathBuf> {
    std::env::var_os(CORPUS_ENV).map(PathBuf::from)
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {source}")]
    Parse { path: PathBuf, line: usize, source: GraphError },
}

pub fn load_corpus_file(path: &Path) -> Result<Vec<Graph>, CorpusError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let g = parse_any(line)
            .map_err(|source| CorpusError::Parse { path: path.to_path_buf(), line: i + 1, source })?;
        out.push(g);
    }
    Ok(out)
}

/// The bundled connected graphs on at most `max_order` vertices.
pub fn bundled_connected(max_order: usize) -> Vec<Graph> {
    parse_corpus(CONNECTED_LE6)
        .expect("bundled corpus parses")
        .into_iter()
        .filter(|g| g.n() <= max_order)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn k1_is_a_single_byte() {
        assert_eq!(write_graph6(&Graph::empty(1)).unwrap(), "@");
        assert_eq!(parse_graph6("@").unwrap().n(), 1);
    }

    #[test]
    fn five_vertex_token_round_trips() {
        let g = parse_graph6("D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(write_graph6(&g).unwrap(), "D?{");
    }

    #[test]
    fn known_tokens() {
        assert_eq!(write_graph6(&families::complete(4)).unwrap(), "C~");
        assert_eq!(write_graph6(&families::cycle(5)).unwrap(), "Dhc");
        let p = parse_graph6(">>graph6<<C~").unwrap();
        assert_eq!(p.m(), 6);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_graph6("C"), Err(GraphError::LengthMismatch { expected: 1, found: 0 })));
        assert!(matches!(parse_graph6("C\x20"), Err(GraphError::ByteOutOfRange(0x20))));
        assert!(matches!(parse_graph6(""), Err(GraphError::MalformedHeader(_))));
        assert!(matches!(parse_graph6("~?"), Err(GraphError::MalformedHeader(_))));
    }

    #[test]
    fn large_n_header() {
        let g = Graph::empty(100);
        let s = write_graph6(&g).unwrap();
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap().n(), 100);
    }
}
