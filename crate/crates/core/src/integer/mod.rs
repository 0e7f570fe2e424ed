//! Integer completely positive factorizations.

mod ei;
mod search;
mod smalln;
mod squares;

pub use ei::{build_ei, ei_factor, jordan_sum_factorize, tau_sum_example, Compression};
pub use search::{
    integer_cp_search, integer_kernel, BranchResult, CountingBudget, IntegerSearch, NodeBudget,
    SearchConfig, SearchOutcome, SearchStatus, DEFAULT_NODE_LIMIT,
};
pub use smalln::{smalln_certificate, SmallnCertificate};
pub use squares::four_squares;
