//! Edge colorings, color patterns and pattern families.
//!
//! Colors are `0..q` throughout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{are_isomorphic, copy_edge_sets, EdgeId, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("color {color} out of range for q = {q}")]
    ColorOutOfRange { color: u8, q: u8 },
    #[error("edge {0} out of range")]
    EdgeOutOfRange(EdgeId),
    #[error("coloring has {found} edges, graph has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("edge {0} is uncolored")]
    Uncolored(EdgeId),
    #[error("edge {0} appears in more than one class")]
    Overlap(EdgeId),
    #[error("expected {expected} classes, found {found}")]
    ClassCount { expected: usize, found: usize },
}

/// Total or partial map from edge ids to colors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeColoring {
    q: u8,
    colors: Vec<Option<u8>>,
}

impl EdgeColoring {
    /// All `m` edges uncolored.
    pub fn uncolored(q: u8, m: usize) -> Self {
        EdgeColoring { q, colors: vec![None; m] }
    }

    pub fn total(q: u8, colors: Vec<u8>) -> Result<Self, ColoringError> {
        Self::partial(q, colors.into_iter().map(Some).collect())
    }

    pub fn partial(q: u8, colors: Vec<Option<u8>>) -> Result<Self, ColoringError> {
        if let Some(&color) = colors.iter().flatten().find(|&&c| c >= q) {
            return Err(ColoringError::ColorOutOfRange { color, q });
        }
        Ok(EdgeColoring { q, colors })
    }

    /// Builds a coloring of `m` edges from `(edge, color)` pairs.
    pub fn from_pairs(q: u8, m: usize, pairs: &[(EdgeId, u8)]) -> Result<Self, ColoringError> {
        let mut c = Self::uncolored(q, m);
        for &(e, color) in pairs {
            c.set(e, color)?;
        }
        Ok(c)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn get(&self, e: EdgeId) -> Option<u8> {
        self.colors.get(e.index()).copied().flatten()
    }

    pub fn set(&mut self, e: EdgeId, color: u8) -> Result<(), ColoringError> {
        if color >= self.q {
            return Err(ColoringError::ColorOutOfRange { color, q: self.q });
        }
        let slot = self.colors.get_mut(e.index()).ok_or(ColoringError::EdgeOutOfRange(e))?;
        *slot = Some(color);
        Ok(())
    }

    pub fn clear(&mut self, e: EdgeId) {
        if let Some(slot) = self.colors.get_mut(e.index()) {
            *slot = None;
        }
    }

    pub fn as_slice(&self) -> &[Option<u8>] {
        &self.colors
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn uncolored_edges(&self) -> Vec<EdgeId> {
        (0..self.colors.len() as u32).map(EdgeId).filter(|&e| self.get(e).is_none()).collect()
    }

    /// Edges of color `c`.
    pub fn class(&self, c: u8) -> Vec<EdgeId> {
        (0..self.colors.len() as u32).map(EdgeId).filter(|&e| self.get(e) == Some(c)).collect()
    }

    /// Colored edges as `(edge, color)` pairs in id order.
    pub fn pairs(&self) -> Vec<(EdgeId, u8)> {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| (EdgeId(i as u32), c)))
            .collect()
    }

    /// Colors of the listed edges, as a partial coloring of a graph with
    /// `m` edges where edge `edges[i]` gets `self[i]`-th entry.
    pub fn remap(&self, m: usize, edges: &[EdgeId]) -> EdgeColoring {
        let mut out = Self::uncolored(self.q, m);
        for (i, &e) in edges.iter().enumerate() {
            out.colors[e.index()] = self.colors[i];
        }
        out
    }

    /// Pulls back through `edges`: entry `i` of the result is the color of `edges[i]`.
    pub fn pullback(&self, edges: &[EdgeId]) -> EdgeColoring {
        EdgeColoring { q: self.q, colors: edges.iter().map(|&e| self.get(e)).collect() }
    }

    /// First copy (given as an edge set) that is monochromatic under this coloring.
    pub fn monochromatic_copy<'a>(&self, copies: &'a [Vec<EdgeId>]) -> Option<&'a [EdgeId]> {
        copies.iter().map(Vec::as_slice).find(|copy| {
            let first = self.get(copy[0]);
            first.is_some() && copy.iter().all(|&e| self.get(e) == first)
        })
    }

    pub fn pattern(&self) -> Result<ColorPattern, ColoringError> {
        ColorPattern::of(self)
    }
}

/// Partition of the edge set into `q` classes (some possibly empty).
///
/// Equality of patterns is equality of the partitions: class order is
/// irrelevant, so classes are stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorPattern {
    classes: Vec<Vec<EdgeId>>,
}

impl ColorPattern {
    pub fn of(coloring: &EdgeColoring) -> Result<Self, ColoringError> {
        if let Some(e) = coloring.uncolored_edges().first() {
            return Err(ColoringError::Uncolored(*e));
        }
        let classes = (0..coloring.q()).map(|c| coloring.class(c)).collect();
        Ok(Self::canonical(classes))
    }

    /// Validates that `classes` partition `0..m` into exactly `q` parts.
    pub fn from_classes(m: usize, q: usize, classes: Vec<Vec<EdgeId>>) -> Result<Self, ColoringError> {
        if classes.len() != q {
            return Err(ColoringError::ClassCount { expected: q, found: classes.len() });
        }
        let mut seen = vec![false; m];
        for &e in classes.iter().flatten() {
            let slot = seen.get_mut(e.index()).ok_or(ColoringError::EdgeOutOfRange(e))?;
            if *slot {
                return Err(ColoringError::Overlap(e));
            }
            *slot = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(ColoringError::Uncolored(EdgeId(i as u32)));
        }
        Ok(Self::canonical(classes))
    }

    fn canonical(mut classes: Vec<Vec<EdgeId>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort();
        ColorPattern { classes }
    }

    pub fn q(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<EdgeId>] {
        &self.classes
    }

    /// A coloring realizing this pattern, class `i` colored `i`.
    pub fn to_coloring(&self, m: usize) -> EdgeColoring {
        let mut c = EdgeColoring::uncolored(self.q() as u8, m);
        for (i, class) in self.classes.iter().enumerate() {
            for &e in class {
                c.colors[e.index()] = Some(i as u8);
            }
        }
        c
    }

    /// True when no class of the pattern contains a copy of `h`.
    pub fn is_h_free(&self, base: &Graph, h: &Graph) -> bool {
        self.classes.iter().all(|class| copy_edge_sets(&base.edge_induced(class), h).is_empty())
    }
}

fn permutations(q: usize) -> Vec<Vec<usize>> {
    if q == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(q - 1) {
        for i in 0..=p.len() {
            let mut next = p.clone();
            next.insert(i, q - 1);
            out.push(next);
        }
    }
    out
}

/// Some permutation of the classes makes the class graphs pairwise isomorphic.
pub fn patterns_isomorphic(ga: &Graph, a: &ColorPattern, gb: &Graph, b: &ColorPattern) -> bool {
    if a.q() != b.q() || ga.m() != gb.m() {
        return false;
    }
    let ca: Vec<Graph> = a.classes.iter().map(|c| ga.edge_induced(c)).collect();
    let cb: Vec<Graph> = b.classes.iter().map(|c| gb.edge_induced(c)).collect();
    permutations(a.q()).into_iter().any(|pi| (0..a.q()).all(|i| are_isomorphic(&ca[i], &cb[pi[i]])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMode {
    /// A pattern belongs when it equals a listed partition.
    Exact,
    /// A pattern belongs when it is isomorphic to a listed one.
    UpToIsomorphism,
}

/// Finite family of color patterns of one base graph, in declared order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternFamily {
    pub base: Graph,
    pub patterns: Vec<ColorPattern>,
    pub mode: FamilyMode,
}

impl PatternFamily {
    pub fn new(base: Graph, patterns: Vec<ColorPattern>, mode: FamilyMode) -> Self {
        PatternFamily { base, patterns, mode }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, p: &ColorPattern) -> bool {
        match self.mode {
            FamilyMode::Exact => self.patterns.contains(p),
            FamilyMode::UpToIsomorphism => {
                self.patterns.iter().any(|x| patterns_isomorphic(&self.base, x, &self.base, p))
            }
        }
    }

    pub fn all_h_free(&self, h: &Graph) -> bool {
        self.patterns.iter().all(|p| p.is_h_free(&self.base, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn monochromatic_triangles_are_isomorphic_patterns() {
        let k3 = families::complete(3);
        let red = EdgeColoring::total(2, vec![0, 0, 0]).unwrap().pattern().unwrap();
        let blue = EdgeColoring::total(2, vec![1, 1, 1]).unwrap().pattern().unwrap();
        assert_eq!(red, blue);
        assert!(patterns_isomorphic(&k3, &red, &k3, &blue));
    }

    #[test]
    fn swapped_classes() {
        let m3 = families::matching(3);
        let a = EdgeColoring::total(2, vec![0, 0, 1]).unwrap().pattern().unwrap();
        let b = EdgeColoring::total(2, vec![0, 1, 1]).unwrap().pattern().unwrap();
        assert!(patterns_isomorphic(&m3, &a, &m3, &b));
        let p4 = families::path(4);
        let matching_red = EdgeColoring::total(2, vec![0, 1, 0]).unwrap().pattern().unwrap();
        let path_red = EdgeColoring::total(2, vec![0, 1, 1]).unwrap().pattern().unwrap();
        assert!(!patterns_isomorphic(&p4, &matching_red, &p4, &path_red));
    }

    #[test]
    fn family_modes() {
        let p4 = families::path(4);
        let listed = EdgeColoring::total(2, vec![0, 0, 1]).unwrap().pattern().unwrap();
        let mirror = EdgeColoring::total(2, vec![0, 1, 1]).unwrap().pattern().unwrap();
        let exact = PatternFamily::new(p4.clone(), vec![listed.clone()], FamilyMode::Exact);
        let iso = PatternFamily::new(p4, vec![listed.clone()], FamilyMode::UpToIsomorphism);
        assert!(exact.contains(&listed) && !exact.contains(&mirror));
        assert!(iso.contains(&mirror));
    }

    #[test]
    fn invalid_inputs() {
        assert!(EdgeColoring::total(2, vec![0, 2]).is_err());
        assert!(ColorPattern::from_classes(3, 2, vec![vec![EdgeId(0)], vec![EdgeId(1)]]).is_err());
        assert!(ColorPattern::from_classes(2, 2, vec![vec![EdgeId(0)], vec![EdgeId(0), EdgeId(1)]]).is_err());
        assert!(EdgeColoring::uncolored(2, 1).pattern().is_err());
    }
}
