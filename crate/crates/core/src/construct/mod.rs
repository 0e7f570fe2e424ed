//! Factorization constructions for `A_n + g(n) I`.

mod arrow;
mod bipartite;
mod dd;
mod inductive;
mod lrl;
mod optimal;
pub mod region;

pub use arrow::{arrow_factorize, build_qn, build_rn, double_arrow_factorize};
pub use bipartite::bipartite_edge_factorize;
pub use dd::dd_factorize;
pub use inductive::inductive_factorize;
pub use lrl::{inverse_cube_entry, lrl_factorize, LrlPair, LRL_R};
pub use optimal::{optimal_even, optimal_factorize, optimal_odd, OptimalPieces};
