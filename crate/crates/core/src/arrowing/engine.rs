//! Backtracking search for colorings with no monochromatic hyperedge.
//!
//! Hyperedges are the edge sets of the target's copies. The state keeps, for
//! every copy, how many of its edges carry each color and how many are still
//! uncolored; a copy whose colored edges share one color and which has exactly
//! one uncolored edge removes that color from the edge's domain.

use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

const NONE: u8 = u8::MAX;
const CHECK_EVERY: u64 = 1024;

/// Search limits. `None` means unlimited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    #[serde(with = "opt_millis")]
    pub max_time: Option<Duration>,
}

mod opt_millis {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&(d.as_millis() as u64)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Ok(Option::<u64>::deserialize(d)?.map(Duration::from_millis))
    }
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: None, max_time: None };

    pub fn nodes(n: u64) -> Self {
        Budget { max_nodes: Some(n), max_time: None }
    }

    pub fn time(d: Duration) -> Self {
        Budget { max_nodes: None, max_time: Some(d) }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::UNLIMITED
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Color decisions tried.
    pub nodes: u64,
    pub copies: usize,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// A total coloring (one color per edge) with no monochromatic copy.
    Found(Vec<u8>),
    /// The search space was exhausted.
    Exhausted,
    /// The budget ran out first.
    Unknown,
}

/// Immutable search problem, shared across workers.
#[derive(Clone, Debug)]
pub struct Problem {
    pub(crate) m: usize,
    pub(crate) q: u8,
    pub(crate) copies: Vec<Vec<u32>>,
    edge_copies: Vec<Vec<u32>>,
    order: Vec<u32>,
    pub(crate) fixed: Vec<Option<u8>>,
}

impl Problem {
    /// `copies` are hyperedges over `0..m`; `fixed` pre-assigns colors.
    pub fn new(m: usize, q: u8, copies: Vec<Vec<u32>>, fixed: Vec<Option<u8>>) -> Self {
        assert!((1..=32).contains(&q), "q must be in 1..=32");
        assert_eq!(fixed.len(), m);
        let mut edge_copies = vec![Vec::new(); m];
        for (k, copy) in copies.iter().enumerate() {
            for &e in copy {
                edge_copies[e as usize].push(k as u32);
            }
        }
        let order = edge_order(m, &copies, &edge_copies);
        Problem { m, q, copies, edge_copies, order, fixed }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn copies(&self) -> &[Vec<u32>] {
        &self.copies
    }

    /// Independent re-check: every edge colored, in range, no copy monochromatic.
    pub fn is_valid_solution(&self, colors: &[u8]) -> bool {
        colors.len() == self.m
            && colors.iter().all(|&c| c < self.q)
            && self.fixed.iter().zip(colors).all(|(f, &c)| f.is_none_or(|f| f == c))
            && self
                .copies
                .iter()
                .all(|copy| copy.iter().any(|&e| colors[e as usize] != colors[copy[0] as usize]))
    }
}

/// Descending copy membership, preferring edges that share copies with edges
/// already placed so propagation kicks in early.
fn edge_order(m: usize, copies: &[Vec<u32>], edge_copies: &[Vec<u32>]) -> Vec<u32> {
    let mut touched = vec![0u32; m];
    let mut placed = vec![false; m];
    let mut copy_seen = vec![false; copies.len()];
    let mut heap: BinaryHeap<(u32, usize, std::cmp::Reverse<u32>)> = (0..m as u32)
        .map(|e| (0, edge_copies[e as usize].len(), std::cmp::Reverse(e)))
        .collect();
    let mut order = Vec::with_capacity(m);
    while let Some((t, _, std::cmp::Reverse(e))) = heap.pop() {
        if placed[e as usize] || t != touched[e as usize] {
            continue;
        }
        placed[e as usize] = true;
        order.push(e);
        for &k in &edge_copies[e as usize] {
            if copy_seen[k as usize] {
                continue;
            }
            copy_seen[k as usize] = true;
            for &f in &copies[k as usize] {
                if !placed[f as usize] {
                    touched[f as usize] += 1;
                    heap.push((touched[f as usize], edge_copies[f as usize].len(), std::cmp::Reverse(f)));
                }
            }
        }
    }
    order
}

enum Trail {
    Assign(u32),
    Domain(u32, u32),
}

struct Limits<'a> {
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
}

struct State<'p> {
    p: &'p Problem,
    color: Vec<u8>,
    domain: Vec<u32>,
    cnt: Vec<u32>,
    uncolored: Vec<u32>,
    distinct: Vec<u8>,
    used: Vec<u32>,
    trail: Vec<Trail>,
    pending: Vec<u32>,
    local_nodes: u64,
}

struct Frame {
    pos: usize,
    edge: u32,
    remaining: u32,
    mark: usize,
}

impl<'p> State<'p> {
    /// Fresh state with the fixed colors applied; `None` if they already conflict.
    fn new(p: &'p Problem) -> Option<Self> {
        let full = if p.q == 32 { u32::MAX } else { (1u32 << p.q) - 1 };
        let mut s = State {
            p,
            color: vec![NONE; p.m],
            domain: vec![full; p.m],
            cnt: vec![0; p.copies.len() * p.q as usize],
            uncolored: p.copies.iter().map(|c| c.len() as u32).collect(),
            distinct: vec![0; p.copies.len()],
            used: vec![0; p.q as usize],
            trail: Vec::new(),
            pending: Vec::new(),
            local_nodes: 0,
        };
        for e in 0..p.m {
            if let Some(c) = p.fixed[e] {
                if s.color[e] == NONE {
                    if s.domain[e] & (1 << c) == 0 || !s.assign(e as u32, c) {
                        return None;
                    }
                } else if s.color[e] != c {
                    return None;
                }
            }
        }
        Some(s)
    }

    fn allowed(&self) -> u32 {
        // Used colors plus the lowest unused one: unused colors are interchangeable.
        let mut mask = 0u32;
        let mut fresh = false;
        for (c, &n) in self.used.iter().enumerate() {
            if n > 0 {
                mask |= 1 << c;
            } else if !fresh {
                mask |= 1 << c;
                fresh = true;
            }
        }
        mask
    }

    fn restrict(&mut self, f: u32, c: u8) -> bool {
        let old = self.domain[f as usize];
        if old & (1 << c) == 0 {
            return true;
        }
        let new = old & !(1 << c);
        self.trail.push(Trail::Domain(f, old));
        self.domain[f as usize] = new;
        if new == 0 {
            return false;
        }
        if new.is_power_of_two() {
            self.pending.push(f);
        }
        true
    }

    /// Colors `e` with `c` and propagates to a fixpoint. Returns false on conflict.
    fn assign(&mut self, e: u32, c: u8) -> bool {
        self.pending.clear();
        let ok = self.assign_one(e, c) && self.drain();
        self.pending.clear();
        ok
    }

    fn drain(&mut self) -> bool {
        while let Some(f) = self.pending.pop() {
            if self.color[f as usize] != NONE {
                continue;
            }
            let c = self.domain[f as usize].trailing_zeros() as u8;
            if !self.assign_one(f, c) {
                return false;
            }
        }
        true
    }

    fn assign_one(&mut self, e: u32, c: u8) -> bool {
        let p = self.p;
        let q = p.q as usize;
        self.color[e as usize] = c;
        self.used[c as usize] += 1;
        self.trail.push(Trail::Assign(e));
        let mut ok = true;
        // Counters are updated for every copy before checking, so undo stays symmetric.
        for &k in &p.edge_copies[e as usize] {
            let k = k as usize;
            let slot = &mut self.cnt[k * q + c as usize];
            *slot += 1;
            if *slot == 1 {
                self.distinct[k] += 1;
            }
            self.uncolored[k] -= 1;
        }
        for &k in &p.edge_copies[e as usize] {
            let k = k as usize;
            if self.distinct[k] != 1 {
                continue;
            }
            match self.uncolored[k] {
                0 => {
                    ok = false;
                    break;
                }
                1 => {
                    let f = *p.copies[k]
                        .iter()
                        .find(|&&f| self.color[f as usize] == NONE)
                        .expect("one uncolored edge");
                    if !self.restrict(f, c) {
                        ok = false;
                        break;
                    }
                }
                _ => {}
            }
        }
        ok
    }

    fn undo_to(&mut self, mark: usize) {
        let q = self.p.q as usize;
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Trail::Assign(e) => {
                    let c = self.color[e as usize];
                    for &k in &self.p.edge_copies[e as usize] {
                        let k = k as usize;
                        let slot = &mut self.cnt[k * q + c as usize];
                        *slot -= 1;
                        if *slot == 0 {
                            self.distinct[k] -= 1;
                        }
                        self.uncolored[k] += 1;
                    }
                    self.used[c as usize] -= 1;
                    self.color[e as usize] = NONE;
                }
                Trail::Domain(f, old) => self.domain[f as usize] = old,
            }
        }
    }

    fn tick(&mut self, lim: &Limits) -> bool {
        self.local_nodes += 1;
        if !self.local_nodes.is_multiple_of(CHECK_EVERY) {
            return true;
        }
        let total = lim.nodes.fetch_add(CHECK_EVERY, Ordering::Relaxed) + CHECK_EVERY;
        if lim.stop.load(Ordering::Relaxed) {
            return false;
        }
        if lim.max_nodes.is_some_and(|n| total > n) {
            return false;
        }
        !lim.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn flush_nodes(&mut self, lim: &Limits) {
        lim.nodes.fetch_add(self.local_nodes % CHECK_EVERY, Ordering::Relaxed);
        self.local_nodes = 0;
    }

    fn search(&mut self, lim: &Limits) -> Outcome {
        let order = &self.p.order;
        let mut stack: Vec<Frame> = Vec::new();
        let mut pos = 0usize;
        loop {
            while pos < order.len() && self.color[order[pos] as usize] != NONE {
                pos += 1;
            }
            if pos == order.len() {
                return Outcome::Found(self.color.clone());
            }
            let edge = order[pos];
            let remaining = self.domain[edge as usize] & self.allowed();
            stack.push(Frame { pos, edge, remaining, mark: self.trail.len() });
            loop {
                let Some(top) = stack.last_mut() else {
                    return Outcome::Exhausted;
                };
                let (mark, edge, fpos) = (top.mark, top.edge, top.pos);
                if top.remaining == 0 {
                    stack.pop();
                    if let Some(parent) = stack.last() {
                        self.undo_to(parent.mark);
                    }
                    continue;
                }
                let c = top.remaining.trailing_zeros() as u8;
                top.remaining &= !(1 << c);
                self.undo_to(mark);
                if !self.tick(lim) {
                    return Outcome::Unknown;
                }
                if self.assign(edge, c) {
                    pos = fpos + 1;
                    break;
                }
            }
        }
    }
}

/// Decision prefixes for splitting the search among workers.
fn frontier(p: &Problem, want: usize) -> Option<Vec<Vec<(u32, u8)>>> {
    State::new(p)?;
    let mut out = vec![Vec::new()];
    for depth in 1..=24 {
        if out.len() >= want {
            break;
        }
        let mut next = Vec::new();
        for prefix in &out {
            let mut s2 = State::new(p)?;
            if !prefix.iter().all(|&(e, c)| s2.assign(e, c)) {
                continue;
            }
            let Some(&edge) = p.order.iter().find(|&&e| s2.color[e as usize] == NONE) else {
                next.push(prefix.clone());
                continue;
            };
            let mut mask = s2.domain[edge as usize] & s2.allowed();
            let mark = s2.trail.len();
            while mask != 0 {
                let c = mask.trailing_zeros() as u8;
                mask &= !(1 << c);
                if s2.assign(edge, c) {
                    let mut np = prefix.clone();
                    np.push((edge, c));
                    next.push(np);
                }
                s2.undo_to(mark);
            }
        }
        out = next;
        if out.is_empty() || depth == 24 {
            break;
        }
    }
    Some(out)
}

/// Runs the search. With `workers <= 1` the result is deterministic.
pub fn solve(p: &Problem, budget: Budget, workers: usize) -> (Outcome, SearchStats) {
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let lim = Limits {
        max_nodes: budget.max_nodes,
        deadline: budget.max_time.map(|d| Instant::now() + d),
        nodes: &nodes,
        stop: &stop,
    };
    let stats = |workers| SearchStats { nodes: nodes.load(Ordering::Relaxed), copies: p.copies.len(), workers };
    if workers <= 1 {
        let outcome = match State::new(p) {
            None => Outcome::Exhausted,
            Some(mut s) => {
                let o = s.search(&lim);
                s.flush_nodes(&lim);
                o
            }
        };
        return (check(p, outcome), stats(1));
    }
    let Some(tasks) = frontier(p, workers * 8) else {
        return (Outcome::Exhausted, stats(workers));
    };
    let next = AtomicUsize::new(0);
    let found: Mutex<Option<Vec<u8>>> = Mutex::new(None);
    let unknown = AtomicBool::new(false);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if stop.load(Ordering::Relaxed) {
                    return;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(prefix) = tasks.get(i) else { return };
                let Some(mut s) = State::new(p) else { return };
                if !prefix.iter().all(|&(e, c)| s.assign(e, c)) {
                    continue;
                }
                let o = s.search(&lim);
                s.flush_nodes(&lim);
                match o {
                    Outcome::Found(c) => {
                        let mut slot = found.lock().unwrap();
                        if slot.is_none() {
                            *slot = Some(c);
                        }
                        stop.store(true, Ordering::Relaxed);
                        return;
                    }
                    Outcome::Unknown => {
                        if !stop.load(Ordering::Relaxed) {
                            unknown.store(true, Ordering::Relaxed);
                        }
                        stop.store(true, Ordering::Relaxed);
                        return;
                    }
                    Outcome::Exhausted => {}
                }
            });
        }
    });
    let outcome = match found.into_inner().unwrap() {
        Some(c) => Outcome::Found(c),
        None if unknown.load(Ordering::Relaxed) => Outcome::Unknown,
        None => Outcome::Exhausted,
    };
    (check(p, outcome), stats(workers))
}

fn check(p: &Problem, o: Outcome) -> Outcome {
    if let Outcome::Found(c) = &o {
        assert!(p.is_valid_solution(c), "engine produced an invalid coloring");
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangles_of_k(n: u32) -> (usize, Vec<Vec<u32>>) {
        let mut id = std::collections::HashMap::new();
        for j in 1..n {
            for i in 0..j {
                let k = id.len() as u32;
                id.insert((i, j), k);
            }
        }
        let mut copies = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    copies.push(vec![id[&(a, b)], id[&(a, c)], id[&(b, c)]]);
                }
            }
        }
        (id.len(), copies)
    }

    #[test]
    fn k5_colorable_k6_not() {
        let (m, c) = triangles_of_k(5);
        let p = Problem::new(m, 2, c, vec![None; m]);
        assert!(matches!(solve(&p, Budget::UNLIMITED, 1).0, Outcome::Found(_)));
        let (m, c) = triangles_of_k(6);
        let p = Problem::new(m, 2, c, vec![None; m]);
        assert_eq!(solve(&p, Budget::UNLIMITED, 1).0, Outcome::Exhausted);
        assert_eq!(solve(&p, Budget::UNLIMITED, 4).0, Outcome::Exhausted);
    }

    #[test]
    fn budget_gives_unknown() {
        let (m, c) = triangles_of_k(17);
        let p = Problem::new(m, 3, c, vec![None; m]);
        let (o, stats) = solve(&p, Budget::nodes(2000), 1);
        // K_16 is 3-colorable without triangles, K_17 is not; neither is found in 2000 nodes
        assert_eq!(o, Outcome::Unknown);
        assert!(stats.nodes >= 2000);
    }

    #[test]
    fn fixed_colors_respected() {
        let (m, c) = triangles_of_k(5);
        let mut fixed = vec![None; m];
        fixed[0] = Some(1);
        fixed[1] = Some(1);
        let p = Problem::new(m, 2, c, fixed);
        match solve(&p, Budget::UNLIMITED, 1).0 {
            Outcome::Found(col) => assert_eq!((col[0], col[1]), (1, 1)),
            o => panic!("{o:?}"),
        }
    }
}
