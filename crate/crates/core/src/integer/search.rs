//! Exhaustive search for integer completely positive factorizations.
//!
//! Depth-first over the residual `R = A - sum u u^T`. Each node takes the
//! lexicographically first positive off-diagonal entry `(p, q)` of `R` and
//! branches on every integer column `u >= 0` with `u_p, u_q >= 1` that fits
//! under `R` entrywise and is orthogonal to every kernel vector. Columns taken
//! at the same pivot are generated in lexicographically nonincreasing order,
//! so each multiset of columns is visited once. When no positive off-diagonal
//! entry is left, the diagonal is finished with scaled unit columns, which is
//! only allowed at coordinates where every kernel vector vanishes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::four_squares;
use crate::arith::{isqrt, ldl_certify, Scalar, SymMatrix};
use crate::error::{Error, Result};
use crate::factor::{dnn_check, verify, Atom, CpFactorization};

/// Shared node counter; `try_visit` returns `false` once the search must stop.
pub trait NodeBudget {
    fn try_visit(&self) -> bool;
}

/// Single-threaded budget with a hard node limit.
#[derive(Debug)]
pub struct CountingBudget {
    limit: u64,
    used: Cell<u64>,
}

impl CountingBudget {
    pub fn new(limit: u64) -> Self {
        CountingBudget {
            limit,
            used: Cell::new(0),
        }
    }

    pub fn used(&self) -> u64 {
        self.used.get().min(self.limit)
    }
}

impl NodeBudget for CountingBudget {
    fn try_visit(&self) -> bool {
        let u = self.used.get() + 1;
        self.used.set(u);
        u <= self.limit
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Upper bound on every column entry; defaults to `floor(sqrt(max diagonal))`.
    pub max_column_entry: Option<i64>,
    pub node_limit: u64,
    /// Exact vectors in the kernel of the input; every column must be orthogonal to them.
    pub kernel: Vec<Vec<Scalar>>,
    /// Rejects nodes whose residual is not positive semidefinite.
    pub psd_pruning: bool,
}

pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_column_entry: None,
            node_limit: DEFAULT_NODE_LIMIT,
            kernel: Vec::new(),
            psd_pruning: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    Exhausted,
    Limit,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::Limit => "limit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub certificate: Option<CpFactorization>,
    pub nodes_visited: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchResult {
    Found(CpFactorization),
    Exhausted,
    Limit,
}

/// Scales rational kernel vectors to primitive integer vectors.
pub fn integer_kernel(kernel: &[Vec<Scalar>]) -> Result<Vec<Vec<i64>>> {
    kernel
        .iter()
        .map(|v| {
            let rats = v
                .iter()
                .map(|x| x.as_rational().cloned())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::InvalidArgument("kernel vectors must be rational".into()))?;
            let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let ints: Vec<BigInt> = rats
                .iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            let g = if g.is_zero() { BigInt::one() } else { g };
            ints.iter()
                .map(|x| (x / &g).to_i64())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::InvalidArgument("kernel entries too large".into()))
        })
        .collect()
}

/// Prepared search over one integer matrix.
#[derive(Clone, Debug)]
pub struct IntegerSearch {
    n: usize,
    a: Vec<i64>,
    kernel: Vec<Vec<i64>>,
    /// Coordinates where every kernel vector vanishes.
    kernel_free: Vec<bool>,
    max_entry: i64,
    psd_pruning: bool,
}

struct Node<'a> {
    search: &'a IntegerSearch,
    budget: &'a dyn NodeBudget,
    r: Vec<i64>,
    cols: Vec<Vec<i64>>,
}

impl IntegerSearch {
    /// Checks the preconditions: integer entries, DNN, kernel vectors in the kernel.
    pub fn new(a: &SymMatrix, cfg: &SearchConfig) -> Result<Self> {
        if cfg.node_limit == 0 {
            return Err(Error::InvalidArgument("node limit must be positive".into()));
        }
        let n = a.dim();
        let mut flat = Vec::with_capacity(n * n);
        for row in a.rows() {
            for v in row {
                flat.push(v.to_i64().ok_or_else(|| {
                    Error::InvalidArgument(format!("entry {v} is not a machine integer"))
                })?);
            }
        }
        if !dnn_check(a).is_dnn() {
            return Err(Error::InvalidArgument(
                "matrix is not doubly nonnegative".into(),
            ));
        }
        for v in &cfg.kernel {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            if !a.mul_vec(v).iter().all(Zero::is_zero) {
                return Err(Error::InvalidArgument(
                    "supplied kernel vector is not in the kernel".into(),
                ));
            }
        }
        let kernel = integer_kernel(&cfg.kernel)?;
        let kernel_free = (0..n).map(|i| kernel.iter().all(|k| k[i] == 0)).collect();
        let max_diag = (0..n).map(|i| flat[i * n + i]).max().unwrap_or(0);
        let max_entry = cfg
            .max_column_entry
            .unwrap_or((isqrt(max_diag as u64) as i64).max(1));
        if max_entry < 1 {
            return Err(Error::InvalidArgument(
                "column entry bound must be at least 1".into(),
            ));
        }
        Ok(IntegerSearch {
            n,
            a: flat,
            kernel,
            kernel_free,
            max_entry,
            psd_pruning: cfg.psd_pruning,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn pivot(&self, r: &[i64]) -> Option<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| r[i * n + j] > 0)
    }

    /// All admissible columns for pivot `(p, q)`, in lexicographically
    /// decreasing order, not exceeding `prev` lexicographically.
    fn candidates(&self, r: &[i64], p: usize, q: usize, prev: Option<&[i64]>) -> Vec<Vec<i64>> {
        let n = self.n;
        let cap: Vec<i64> = (0..n)
            .map(|a| self.max_entry.min(isqrt(r[a * n + a].max(0) as u64) as i64))
            .collect();
        // suffix[k][a]: range of sum_{b >= a} k_b u_b over the box 0 <= u <= cap.
        let suffix: Vec<Vec<(i64, i64)>> = self
            .kernel
            .iter()
            .map(|k| {
                let mut s = vec![(0, 0); n + 1];
                for a in (0..n).rev() {
                    let t = k[a] * cap[a];
                    s[a] = (s[a + 1].0 + t.min(0), s[a + 1].1 + t.max(0));
                }
                s
            })
            .collect();
        let mut out = Vec::new();
        let mut u = vec![0i64; n];
        let mut dots = vec![0i64; self.kernel.len()];
        self.fill(
            r, p, q, prev, &cap, &suffix, 0, true, &mut u, &mut dots, &mut out,
        );
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        &self,
        r: &[i64],
        p: usize,
        q: usize,
        prev: Option<&[i64]>,
        cap: &[i64],
        suffix: &[Vec<(i64, i64)>],
        a: usize,
        tight: bool,
        u: &mut [i64],
        dots: &mut [i64],
        out: &mut Vec<Vec<i64>>,
    ) {
        let n = self.n;
        if a == n {
            if dots.iter().all(|&d| d == 0) {
                out.push(u.to_vec());
            }
            return;
        }
        let mut hi = cap[a];
        for b in 0..a {
            if u[b] > 0 {
                hi = hi.min(r[b * n + a] / u[b]);
            }
        }
        if tight {
            if let Some(prev) = prev {
                hi = hi.min(prev[a]);
            }
        }
        let lo = if a == p || a == q { 1 } else { 0 };
        let mut v = hi;
        while v >= lo {
            let feasible = self.kernel.iter().enumerate().all(|(ki, k)| {
                let d = dots[ki] + k[a] * v;
                let (rlo, rhi) = suffix[ki][a + 1];
                -d >= rlo && -d <= rhi
            });
            if feasible {
                u[a] = v;
                for (ki, k) in self.kernel.iter().enumerate() {
                    dots[ki] += k[a] * v;
                }
                let still_tight = tight && prev.is_some_and(|pr| pr[a] == v);
                self.fill(r, p, q, prev, cap, suffix, a + 1, still_tight, u, dots, out);
                for (ki, k) in self.kernel.iter().enumerate() {
                    dots[ki] -= k[a] * v;
                }
                u[a] = 0;
            }
            v -= 1;
        }
    }

    /// Columns available at the root; empty when the input has no positive off-diagonal entry.
    pub fn root_branches(&self) -> Vec<Vec<i64>> {
        match self.pivot(&self.a) {
            Some((p, q)) => self.candidates(&self.a, p, q, None),
            None => Vec::new(),
        }
    }

    /// Full search from the root.
    pub fn run(&self, budget: &dyn NodeBudget) -> BranchResult {
        let mut node = Node {
            search: self,
            budget,
            r: self.a.clone(),
            cols: Vec::new(),
        };
        node.visit(None)
    }

    /// Search restricted to factorizations whose largest root-pivot column is `branch`.
    pub fn run_branch(&self, branch: &[i64], budget: &dyn NodeBudget) -> BranchResult {
        let Some(pq) = self.pivot(&self.a) else {
            return self.run(budget);
        };
        let mut node = Node {
            search: self,
            budget,
            r: self.a.clone(),
            cols: Vec::new(),
        };
        node.apply(branch, 1);
        node.cols.push(branch.to_vec());
        node.visit(Some((pq, branch.to_vec())))
    }

    fn finish(&self, r: &[i64], cols: &[Vec<i64>]) -> Option<CpFactorization> {
        let n = self.n;
        let mut f = CpFactorization::new(n);
        for c in cols {
            let support = c.iter().map(|&v| Scalar::from_int(v)).collect();
            f.push(Atom::new(Scalar::one(), support).ok()?).ok()?;
        }
        for a in 0..n {
            let d = r[a * n + a];
            if d == 0 {
                continue;
            }
            if !self.kernel_free[a] {
                return None;
            }
            for s in four_squares(d as u64) {
                f.push(Atom::sparse(n, Scalar::one(), &[(a, Scalar::from_int(s as i64))]).ok()?)
                    .ok()?;
            }
        }
        f.mark_integral().ok()?;
        Some(f)
    }
}

impl Node<'_> {
    fn apply(&mut self, u: &[i64], sign: i64) {
        let n = self.search.n;
        for a in 0..n {
            if u[a] == 0 {
                continue;
            }
            for b in 0..n {
                if u[b] != 0 {
                    self.r[a * n + b] -= sign * u[a] * u[b];
                }
            }
        }
    }

    /// A positive diagonal entry that no admissible column can reach.
    fn stranded(&self) -> bool {
        let s = self.search;
        let n = s.n;
        (0..n).any(|a| {
            !s.kernel_free[a]
                && self.r[a * n + a] > 0
                && (0..n).all(|b| b == a || self.r[a * n + b] == 0)
        })
    }

    fn residual_is_psd(&self) -> bool {
        let n = self.search.n;
        let m = SymMatrix::from_fn(n, |i, j| Scalar::from_int(self.r[i * n + j]));
        ldl_certify(&m).is_psd()
    }

    fn visit(&mut self, bound: Option<((usize, usize), Vec<i64>)>) -> BranchResult {
        if !self.budget.try_visit() {
            return BranchResult::Limit;
        }
        let s = self.search;
        if self.stranded() || (s.psd_pruning && !self.residual_is_psd()) {
            return BranchResult::Exhausted;
        }
        let Some((p, q)) = s.pivot(&self.r) else {
            return match s.finish(&self.r, &self.cols) {
                Some(f) => BranchResult::Found(f),
                None => BranchResult::Exhausted,
            };
        };
        let prev = bound
            .as_ref()
            .filter(|(pq, _)| *pq == (p, q))
            .map(|(_, u)| u.as_slice());
        for u in s.candidates(&self.r, p, q, prev) {
            self.apply(&u, 1);
            self.cols.push(u);
            let res = self.visit(Some(((p, q), self.cols.last().unwrap().clone())));
            let u = self.cols.pop().unwrap();
            self.apply(&u, -1);
            if res != BranchResult::Exhausted {
                return res;
            }
        }
        BranchResult::Exhausted
    }
}

/// Sequential search with the configured node limit. A found certificate is
/// re-verified exactly before it is returned.
pub fn integer_cp_search(a: &SymMatrix, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let search = IntegerSearch::new(a, cfg)?;
    let budget = CountingBudget::new(cfg.node_limit);
    let result = search.run(&budget);
    let nodes_visited = budget.used();
    Ok(match result {
        BranchResult::Found(f) => {
            let report = verify(a, &f, &cfg.kernel)?;
            if !report.passed() {
                return Err(Error::InternalContradiction(
                    "search certificate failed verification".into(),
                ));
            }
            SearchOutcome {
                status: SearchStatus::Found,
                certificate: Some(f),
                nodes_visited,
            }
        }
        BranchResult::Exhausted => SearchOutcome {
            status: SearchStatus::Exhausted,
            certificate: None,
            nodes_visited,
        },
        BranchResult::Limit => SearchOutcome {
            status: SearchStatus::Limit,
            certificate: None,
            nodes_visited,
        },
    })
}
