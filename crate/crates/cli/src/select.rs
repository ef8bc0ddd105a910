//! Graph selectors and small text formats accepted on the command line.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use ramsey_core::graph::format::{corpus_dir, load_corpus_file, parse_any, write_graph6};
use ramsey_core::graph::{families, EdgeColoring, EdgeId};
use ramsey_core::{Graph, Vertex};

/// Named family, `g6:<literal>`, a path to a graph6/sparse6 file (first
/// line), or a bare graph6/sparse6 literal.
///
/// Names: `K<n>`, `C<n>`, `P<n>` (n vertices), `S<m>` or `K1,<m>` (star),
/// `K<a>,<b>`, `K<t>.K2` (clique with a pendant edge), `M<k>` (matching),
/// `K3+C5`.
pub fn graph(sel: &str) -> Result<Graph> {
    let s = sel.trim();
    if let Some(lit) = s.strip_prefix("g6:") {
        return parse_any(lit).with_context(|| format!("parsing graph literal {lit:?}"));
    }
    if let Some(g) = named(s)? {
        return Ok(g);
    }
    if Path::new(s).is_file() {
        let mut all = load_corpus_file(Path::new(s))?;
        if all.is_empty() {
            bail!("{s} holds no graph");
        }
        return Ok(all.swap_remove(0));
    }
    parse_any(s).map_err(|e| anyhow!("{s:?} is not a graph name, file or graph6 literal ({e})"))
}

fn num(s: &str) -> Option<usize> {
    s.parse().ok()
}

fn named(s: &str) -> Result<Option<Graph>> {
    let upper = s.to_ascii_uppercase();
    if upper == "K3+C5" {
        return Ok(Some(families::k3_join_c5()));
    }
    if let Some(t) = upper.strip_suffix(".K2").and_then(|r| r.strip_prefix('K')).and_then(num) {
        if t < 2 {
            bail!("K_t.K2 needs t >= 2");
        }
        return Ok(Some(families::clique_with_pendant(t)));
    }
    let (head, rest) = upper.split_at(upper.chars().next().map_or(0, char::len_utf8));
    if let Some((a, b)) = rest.split_once(',') {
        if head == "K" {
            if let (Some(a), Some(b)) = (num(a), num(b)) {
                return Ok(Some(if a == 1 { families::star(b) } else { families::complete_bipartite(a, b) }));
            }
        }
        return Ok(None);
    }
    let Some(n) = num(rest) else { return Ok(None) };
    let g = match head {
        "K" => families::complete(n),
        "C" if n >= 3 => families::cycle(n),
        "C" => bail!("cycles need at least 3 vertices"),
        "P" if n >= 1 => families::path(n),
        "S" => families::star(n),
        "M" => families::matching(n),
        _ => return Ok(None),
    };
    Ok(Some(g))
}

/// `u-v` with `u`, `v` vertex numbers.
pub fn pair(s: &str) -> Result<(Vertex, Vertex)> {
    let (a, b) = s.trim().split_once('-').ok_or_else(|| anyhow!("expected u-v, got {s:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

pub fn edge(g: &Graph, s: &str) -> Result<EdgeId> {
    let (u, v) = pair(s)?;
    g.edge_id(u, v).ok_or_else(|| anyhow!("{u}-{v} is not an edge"))
}

pub fn vertices(s: &str) -> Result<Vec<Vertex>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| Ok(x.trim().parse()?)).collect()
}

/// `u-v=c,u-v=c,...`; edges not listed stay uncolored.
pub fn partial_coloring(g: &Graph, q: u8, s: &str) -> Result<EdgeColoring> {
    let mut c = EdgeColoring::uncolored(q, g.m());
    for item in s.split(',').filter(|x| !x.trim().is_empty()) {
        let (e, col) = item.split_once('=').ok_or_else(|| anyhow!("expected u-v=c, got {item:?}"))?;
        let col: u8 = col.trim().parse()?;
        c.set(edge(g, e)?, col)?;
    }
    Ok(c)
}

/// Edge-id classes: `0,1/2,3` (classes split by `/`).
pub fn classes(s: &str) -> Result<Vec<Vec<EdgeId>>> {
    s.split('/')
        .map(|cl| {
            cl.split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| Ok(EdgeId(x.trim().parse()?)))
                .collect()
        })
        .collect()
}

/// Patterns separated by `;`, each in [`classes`] form.
pub fn patterns(s: &str) -> Result<Vec<Vec<Vec<EdgeId>>>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(classes).collect()
}

/// Graphs from `path`, else every `*.g6`/`*.s6` file in the corpus
/// directory, else the bundled connected graphs on at most six vertices.
pub fn corpus(path: Option<&Path>) -> Result<Vec<Graph>> {
    if let Some(p) = path {
        return Ok(load_corpus_file(p)?);
    }
    if let Some(dir) = corpus_dir() {
        let mut files: Vec<_> = std::fs::read_dir(&dir)
            .with_context(|| format!("reading corpus directory {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "g6" || x == "s6"))
            .collect();
        files.sort();
        let mut out = Vec::new();
        for f in files {
            out.extend(load_corpus_file(&f)?);
        }
        return Ok(out);
    }
    Ok(ramsey_core::graph::format::bundled_connected(6))
}

pub fn g6(g: &Graph) -> String {
    write_graph6(g).unwrap_or_default()
}
