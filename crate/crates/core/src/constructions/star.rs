use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::arrowing::{is_minimal, MinimalityVerdict, SolveOptions};
use crate::graph::{families, is_connected, Graph, Vertex};

/// The characterization of 2-color arrowing for the star `K_{1,m}` on a
/// connected host: `Δ ≥ 2m − 1`, or `m` even and the host is
/// `(2m − 2)`-regular on an odd number of vertices.
pub fn star_arrow_predicate(g: &Graph, m: usize) -> Result<bool, ConstructionError> {
    if m == 0 {
        return Err(ConstructionError::Precondition("m must be at least 1".into()));
    }
    if g.n() == 0 || !is_connected(g) {
        return Err(ConstructionError::Precondition("host must be connected".into()));
    }
    let regular = g.min_degree() == g.max_degree() && g.max_degree() == 2 * m - 2;
    Ok(g.max_degree() >= 2 * m - 1 || (m.is_multiple_of(2) && regular && g.n() % 2 == 1))
}

pub fn degree_one_count(g: &Graph) -> usize {
    g.vertices().filter(|&v| g.degree(v) == 1).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeOneCheck {
    pub count: usize,
    /// `q(m − 1) + 1`.
    pub nonzero_value: usize,
    pub holds: bool,
}

/// A minimal q-Ramsey graph for `K_{1,m}` has either no degree-1 vertex or
/// exactly `q(m − 1) + 1` of them. Minimality is checked first.
pub fn star_degree_one_count_check(
    g: &Graph,
    m: usize,
    q: u8,
    opts: SolveOptions,
) -> Result<DegreeOneCheck, ConstructionError> {
    if m == 0 {
        return Err(ConstructionError::Precondition("m must be at least 1".into()));
    }
    let res = is_minimal(g, &families::star(m), q, opts)?;
    match res.verdict {
        MinimalityVerdict::Minimal => {}
        MinimalityVerdict::Unknown => return Err(ConstructionError::Budget("minimality check".into())),
        other => return Err(ConstructionError::NotMinimal(format!("{other:?}"))),
    }
    let count = degree_one_count(&res.graph);
    let nonzero_value = q as usize * (m - 1) + 1;
    Ok(DegreeOneCheck { count, nonzero_value, holds: count == 0 || count == nonzero_value })
}

/// `C_k` with a pendant edge at every cycle vertex; vertex `k + i` hangs off `i`.
pub fn p4_abundant(k: usize) -> Result<Graph, ConstructionError> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(ConstructionError::Precondition(format!("k = {k} must be odd and at least 3")));
    }
    let mut edges: Vec<(Vertex, Vertex)> = (0..k).map(|i| (i as Vertex, ((i + 1) % k) as Vertex)).collect();
    edges.extend((0..k).map(|i| (i as Vertex, (k + i) as Vertex)));
    Ok(Graph::from_edges(2 * k, &edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrowing::check_arrows;
    use crate::arrowing::Verdict;

    #[test]
    fn predicate_examples() {
        assert!(star_arrow_predicate(&families::cycle(5), 2).unwrap());
        assert!(star_arrow_predicate(&families::star(3), 2).unwrap());
        assert!(!star_arrow_predicate(&families::path(3), 2).unwrap());
        assert!(!star_arrow_predicate(&families::cycle(4), 2).unwrap());
        let two = families::path(2).disjoint_union(&families::path(2));
        assert!(star_arrow_predicate(&two, 2).is_err());
    }

    #[test]
    fn predicate_matches_engine_on_small_cycles() {
        for n in 3..8 {
            let c = families::cycle(n);
            let v = check_arrows(&c, &families::star(2), 2, SolveOptions::default()).unwrap().verdict;
            assert_eq!(star_arrow_predicate(&c, 2).unwrap(), v == Verdict::Arrows, "C_{n}");
        }
    }

    #[test]
    fn p4_shape() {
        let g = p4_abundant(3).unwrap();
        assert_eq!((g.n(), g.m()), (6, 6));
        assert_eq!(degree_one_count(&g), 3);
        assert_eq!(g.vertices().filter(|&v| g.degree(v) == 3).count(), 3);
        assert!(p4_abundant(4).is_err());
        assert!(p4_abundant(1).is_err());
    }

    #[test]
    fn degree_one_counts() {
        let r = star_degree_one_count_check(&families::star(5), 3, 2, SolveOptions::default()).unwrap();
        assert_eq!(r, DegreeOneCheck { count: 5, nonzero_value: 5, holds: true });
        let r = star_degree_one_count_check(&families::cycle(5), 2, 2, SolveOptions::default()).unwrap();
        assert_eq!(r.count, 0);
        assert!(r.holds);
        let err = star_degree_one_count_check(&families::star(6), 3, 2, SolveOptions::default());
        assert!(matches!(err, Err(ConstructionError::NotMinimal(_))));
    }
}
