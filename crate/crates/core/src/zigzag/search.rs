//! Exhaustive depth-first search for qualifying zigzag cycles.
//!
//! The walk starts with `a_1` forward from `v_0` and alternates direction;
//! each step either reaches a fresh vertex or lands back on `v_0`, which closes
//! the cycle. Odd cycles have a single representation; an even cycle is
//! emitted only from its representation whose first arrow is its smallest,
//! which is its canonical form. Candidates are tried in ascending arrow id, so
//! cycles come out in lexicographic order.

use super::{is_qualifying, validate_zigzag, ZigzagCycle};
use crate::quiverbuild::BoundQuiver;

/// `2·|vertices|`, which no cycle with distinct vertices can reach.
pub fn default_max_len(q: &BoundQuiver) -> usize {
    (2 * q.vertex_count()).max(2)
}

struct Search<'a> {
    q: &'a BoundQuiver,
    max_len: usize,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    path: Vec<usize>,
    visited: Vec<bool>,
    found: Vec<ZigzagCycle>,
    stop_at_first: bool,
}

impl<'a> Search<'a> {
    fn new(q: &'a BoundQuiver, max_len: usize, stop_at_first: bool) -> Self {
        let n = q.vertex_count();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for a in &q.arrows {
            out_adj[a.source].push(a.id);
            in_adj[a.target].push(a.id);
        }
        Search {
            q,
            max_len,
            out_adj,
            in_adj,
            path: Vec::new(),
            visited: vec![false; n],
            found: Vec::new(),
            stop_at_first,
        }
    }

    fn done(&self) -> bool {
        self.stop_at_first && !self.found.is_empty()
    }

    fn run(&mut self) {
        for a1 in 0..self.q.arrows.len() {
            let arrow = &self.q.arrows[a1];
            if arrow.source == arrow.target {
                continue;
            }
            let (v0, v1) = (arrow.source, arrow.target);
            self.visited[v0] = true;
            self.visited[v1] = true;
            self.path.push(a1);
            self.extend(v0, v1);
            self.path.pop();
            self.visited[v0] = false;
            self.visited[v1] = false;
            if self.done() {
                return;
            }
        }
    }

    /// `cur` is the last vertex reached; the next arrow has index `path.len() + 1`.
    fn extend(&mut self, v0: usize, cur: usize) {
        let k = self.path.len();
        if k >= self.max_len {
            return;
        }
        // odd k: last arrow was forward, the next one points into `cur`
        let forward = k.is_multiple_of(2);
        let count = if forward {
            self.out_adj[cur].len()
        } else {
            self.in_adj[cur].len()
        };
        for idx in 0..count {
            let a = if forward {
                self.out_adj[cur][idx]
            } else {
                self.in_adj[cur][idx]
            };
            if self.path.contains(&a) {
                continue;
            }
            let arrow = &self.q.arrows[a];
            let next = if forward { arrow.target } else { arrow.source };
            if next == v0 {
                // closing; an even cycle is canonical only if a_1 is its smallest arrow
                let first = self.path[0];
                if !forward && (a < first || self.path.iter().any(|&x| x < first)) {
                    continue;
                }
                self.path.push(a);
                if let Ok(c) = validate_zigzag(self.q, &self.path) {
                    if is_qualifying(self.q, &c).qualifies {
                        self.found.push(c);
                    }
                }
                self.path.pop();
            } else if !self.visited[next] && k + 1 < self.max_len {
                self.visited[next] = true;
                self.path.push(a);
                self.extend(v0, next);
                self.path.pop();
                self.visited[next] = false;
            }
            if self.done() {
                return;
            }
        }
    }
}

/// All qualifying cycles of length at most `max_len`, canonical and in
/// lexicographic order. An empty result proves there are none within the bound.
pub fn find_qualifying_cycles(q: &BoundQuiver, max_len: usize) -> Vec<ZigzagCycle> {
    let mut s = Search::new(q, max_len, false);
    s.run();
    let mut found = s.found;
    found.sort_by(|a, b| a.arrows.cmp(&b.arrows));
    found
}

/// The first cycle [`find_qualifying_cycles`] would return.
pub fn first_qualifying_cycle(q: &BoundQuiver, max_len: usize) -> Option<ZigzagCycle> {
    let mut s = Search::new(q, max_len, true);
    s.run();
    s.found.into_iter().next()
}
