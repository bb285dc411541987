use super::{MatchResult, MatchingGraph};
use crate::error::{Error, Result};

pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Exhaustive search over all matchings in which each node pairs with a
/// neighbour or with the boundary.
pub fn brute_force_match(g: &MatchingGraph) -> Result<MatchResult> {
    let n = g.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(n));
    }
    let mut best = MatchResult { weight: u64::MAX, ..Default::default() };
    let mut cur = MatchResult::default();
    let mut used = vec![false; n];
    search(g, 0, &mut used, &mut cur, &mut best);
    best.pairs.sort_unstable();
    best.to_boundary.sort_unstable();
    Ok(best)
}

fn search(g: &MatchingGraph, from: usize, used: &mut [bool], cur: &mut MatchResult, best: &mut MatchResult) {
    let Some(i) = (from..g.len()).find(|&i| !used[i]) else {
        if cur.weight < best.weight {
            *best = cur.clone();
        }
        return;
    };
    used[i] = true;
    cur.to_boundary.push(i);
    cur.weight += g.boundary(i) as u64;
    search(g, i + 1, used, cur, best);
    cur.weight -= g.boundary(i) as u64;
    cur.to_boundary.pop();
    for j in i + 1..g.len() {
        if used[j] {
            continue;
        }
        if let Some(w) = g.edge(i, j) {
            used[j] = true;
            cur.pairs.push((i, j));
            cur.weight += w as u64;
            search(g, i + 1, used, cur, best);
            cur.weight -= w as u64;
            cur.pairs.pop();
            used[j] = false;
        }
    }
    used[i] = false;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefers_boundary_when_cheaper() {
        let mut g = MatchingGraph::new(2);
        g.set_edge(0, 1, 3);
        g.set_boundary(0, 1);
        g.set_boundary(1, 1);
        let m = brute_force_match(&g).unwrap();
        assert_eq!(m.weight, 2);
        assert_eq!(m.to_boundary, vec![0, 1]);
    }

    #[test]
    fn four_cycle() {
        // 0-1:1, 1-2:2, 2-3:1, 3-0:2; the three pairings cost 2, 4 and
        // (no diagonal edges) infinity.
        let mut g = MatchingGraph::new(4);
        for (i, j, w) in [(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)] {
            g.set_edge(i, j, w);
        }
        for i in 0..4 {
            g.set_boundary(i, 10);
        }
        let m = brute_force_match(&g).unwrap();
        assert_eq!(m.weight, 2);
        assert_eq!(m.pairs, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn refuses_large_graphs() {
        assert!(brute_force_match(&MatchingGraph::new(13)).is_err());
    }
}
