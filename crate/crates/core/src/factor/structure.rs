//! Pattern-level checks: odd cycles in the graph of a matrix and the
//! bipartite-block hypothesis used by the edge factorization.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{Scalar, SymMatrix};
use crate::error::{Error, Result};

/// Largest dimension for which the cycle search is exhaustive.
pub const DEFAULT_CYCLE_DIM_BOUND: usize = 12;

/// Step budget for the cycle search above the exhaustive bound.
const LARGE_DIM_STEP_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphVerdict {
    /// No odd cycle of length at least five.
    Ok,
    /// Vertices (0-based) of an odd cycle of length at least five, in order.
    OddCycle(Vec<usize>),
}

fn adjacency(a: &SymMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && !a.get(i, j).is_zero())
                .collect()
        })
        .collect()
}

fn is_bipartite(adj: &[Vec<usize>]) -> bool {
    let mut color = vec![None; adj.len()];
    for s in 0..adj.len() {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let c = color[v].unwrap();
            for &w in &adj[v] {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

struct CycleSearch<'a> {
    adj: &'a [Vec<usize>],
    path: Vec<usize>,
    on_path: Vec<bool>,
    steps: u64,
    budget: Option<u64>,
}

impl CycleSearch<'_> {
    /// Extends simple paths from `start` through vertices larger than `start`.
    fn extend(&mut self, start: usize, v: usize) -> Option<bool> {
        self.steps += 1;
        if self.budget.is_some_and(|b| self.steps > b) {
            return None;
        }
        let adj = self.adj;
        for &w in &adj[v] {
            if w == start && self.path.len() >= 5 && self.path.len() % 2 == 1 {
                return Some(true);
            }
            if w > start && !self.on_path[w] {
                self.path.push(w);
                self.on_path[w] = true;
                if self.extend(start, w)? {
                    return Some(true);
                }
                self.on_path[w] = false;
                self.path.pop();
            }
        }
        Some(false)
    }
}

/// Looks for an odd cycle of length at least five in the graph of nonzero
/// off-diagonal entries. Bipartite graphs return immediately; otherwise the
/// simple-cycle search is exhaustive up to `dim_bound` vertices and budgeted
/// beyond it.
pub fn cp_graph_check(a: &SymMatrix, dim_bound: usize) -> Result<GraphVerdict> {
    let adj = adjacency(a);
    if is_bipartite(&adj) {
        return Ok(GraphVerdict::Ok);
    }
    let exhaustive = a.dim() <= dim_bound;
    let mut search = CycleSearch {
        adj: &adj,
        path: Vec::new(),
        on_path: vec![false; a.dim()],
        steps: 0,
        budget: (!exhaustive).then_some(LARGE_DIM_STEP_BUDGET),
    };
    for s in 0..a.dim() {
        search.path = vec![s];
        search.on_path.iter_mut().for_each(|b| *b = false);
        search.on_path[s] = true;
        match search.extend(s, s) {
            Some(true) => return Ok(GraphVerdict::OddCycle(search.path)),
            Some(false) => {}
            None => {
                return Err(Error::ResourceLimit(format!(
                    "odd-cycle search on a non-bipartite graph with {} vertices",
                    a.dim()
                )))
            }
        }
    }
    Ok(GraphVerdict::Ok)
}

/// True iff `a = [D1 C; C^T D2]` with diagonal `D1` (`split x split`) and `D2`,
/// `C >= 0`, `a w = lambda w` with `lambda >= 0`, and `w` strictly positive on
/// the first block and strictly negative on the second.
pub fn special_hypothesis_check(
    a: &SymMatrix,
    split: usize,
    w: &[Scalar],
    lambda: &Scalar,
) -> bool {
    let n = a.dim();
    if split == 0 || split >= n || w.len() != n || lambda.is_negative() {
        return false;
    }
    if !w[..split].iter().all(Scalar::is_positive) || !w[split..].iter().all(Scalar::is_negative) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            let same_block = (i < split) == (j < split);
            let v = a.get(i, j);
            if (same_block && !v.is_zero()) || v.is_negative() {
                return false;
            }
        }
    }
    a.mul_vec(w)
        .iter()
        .zip(w)
        .all(|(aw, wi)| *aw == lambda * wi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ldl_certify;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn pattern(n: usize, edges: &[(usize, usize)]) -> SymMatrix {
        let mut m = SymMatrix::identity(n);
        for &(i, j) in edges {
            m.set(i, j, Scalar::from_int(1));
        }
        m
    }

    #[test]
    fn five_cycle_is_reported() {
        let c5 = pattern(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let GraphVerdict::OddCycle(c) = cp_graph_check(&c5, DEFAULT_CYCLE_DIM_BOUND).unwrap()
        else {
            panic!("C5 must be flagged")
        };
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn triangles_and_even_cycles_pass() {
        let tri = pattern(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(cp_graph_check(&tri, 12).unwrap(), GraphVerdict::Ok);
        let c6 = pattern(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert_eq!(cp_graph_check(&c6, 12).unwrap(), GraphVerdict::Ok);
        // Two triangles sharing a vertex: the closed walk of length 5 is not a simple cycle.
        let bowtie = pattern(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        assert_eq!(cp_graph_check(&bowtie, 12).unwrap(), GraphVerdict::Ok);
    }

    #[test]
    fn budgeted_search_beyond_bound() {
        // Disjoint triangles: no odd cycle >= 5, and the budgeted search finishes.
        let edges: Vec<_> = (0..7)
            .flat_map(|t| {
                [
                    (3 * t, 3 * t + 1),
                    (3 * t + 1, 3 * t + 2),
                    (3 * t, 3 * t + 2),
                ]
            })
            .collect();
        let m = pattern(21, &edges);
        assert_eq!(cp_graph_check(&m, 12).unwrap(), GraphVerdict::Ok);
        let big = pattern(21, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert!(matches!(
            cp_graph_check(&big, 12).unwrap(),
            GraphVerdict::OddCycle(_)
        ));
    }

    #[test]
    fn special_hypothesis() {
        let ones = SymMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]).unwrap();
        assert!(special_hypothesis_check(
            &ones,
            1,
            &ints(&[1, -1]),
            &Scalar::zero()
        ));
        assert!(!special_hypothesis_check(
            &ones,
            1,
            &ints(&[1, 1]),
            &Scalar::zero()
        ));
        let shifted = SymMatrix::from_i64_rows(&[&[2, 1], &[1, 2]]).unwrap();
        assert!(special_hypothesis_check(
            &shifted,
            1,
            &ints(&[1, -1]),
            &Scalar::from_int(1)
        ));
        assert!(!special_hypothesis_check(
            &shifted,
            1,
            &ints(&[1, -1]),
            &Scalar::zero()
        ));
    }

    #[test]
    fn signed_comparison_is_psd_m_matrix() {
        let a =
            SymMatrix::from_i64_rows(&[&[3, 0, 1, 2], &[0, 2, 2, 0], &[1, 2, 3, 0], &[2, 0, 0, 2]])
                .unwrap();
        let w = ints(&[1, 1, -1, -1]);
        assert!(special_hypothesis_check(&a, 2, &w, &Scalar::zero()));
        let b = a.signed_split(2);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(!b.get(i, j).is_positive());
                }
            }
        }
        assert!(ldl_certify(&b).is_psd());
    }
}
