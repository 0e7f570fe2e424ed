//! Parallel driver for the integer search over root branches.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use edmcp_core::integer::{
    integer_cp_search, BranchResult, IntegerSearch, NodeBudget, SearchConfig, SearchOutcome,
    SearchStatus,
};
use edmcp_core::{Result, SymMatrix};

struct SharedBudget<'a> {
    used: &'a AtomicU64,
    limit: u64,
    best_found: &'a AtomicUsize,
    branch: usize,
}

impl NodeBudget for SharedBudget<'_> {
    fn try_visit(&self) -> bool {
        if self.best_found.load(Ordering::Relaxed) < self.branch {
            return false;
        }
        self.used.fetch_add(1, Ordering::Relaxed) < self.limit
    }
}

/// Runs the search on `jobs` threads, one root branch at a time per thread.
///
/// A found branch cancels only branches after it, and the lowest-index found
/// branch is reported, so the certificate does not depend on scheduling.
#[allow(clippy::result_large_err)]
pub fn parallel_search(a: &SymMatrix, cfg: &SearchConfig, jobs: usize) -> Result<SearchOutcome> {
    let search = IntegerSearch::new(a, cfg)?;
    let branches = search.root_branches();
    if jobs <= 1 || branches.len() <= 1 {
        return integer_cp_search(a, cfg);
    }
    // The root node itself.
    let used = AtomicU64::new(1);
    let best_found = AtomicUsize::new(usize::MAX);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<BranchResult>>> = Mutex::new(vec![None; branches.len()]);
    if cfg.node_limit >= 1 {
        thread::scope(|s| {
            for _ in 0..jobs.min(branches.len()) {
                s.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= branches.len() || best_found.load(Ordering::Relaxed) < k {
                        break;
                    }
                    let budget = SharedBudget {
                        used: &used,
                        limit: cfg.node_limit,
                        best_found: &best_found,
                        branch: k,
                    };
                    let r = search.run_branch(&branches[k], &budget);
                    if matches!(r, BranchResult::Found(_)) {
                        best_found.fetch_min(k, Ordering::Relaxed);
                    }
                    results.lock().unwrap()[k] = Some(r);
                });
            }
        });
    }
    let results = results.into_inner().unwrap();
    let nodes_visited = used.load(Ordering::Relaxed).min(cfg.node_limit);
    let best = best_found.load(Ordering::Relaxed);
    let (status, certificate) = if best != usize::MAX {
        let Some(BranchResult::Found(f)) = results[best].clone() else {
            unreachable!("best branch recorded without a certificate");
        };
        (SearchStatus::Found, Some(f))
    } else if results
        .iter()
        .all(|r| matches!(r, Some(BranchResult::Exhausted)))
    {
        (SearchStatus::Exhausted, None)
    } else {
        (SearchStatus::Limit, None)
    };
    Ok(SearchOutcome {
        status,
        certificate,
        nodes_visited,
    })
}
