//! Factorization data model, exact verification and structural checks.

mod model;
mod numeric;
mod structure;
mod verify;

pub use model::{gram, Atom, CpFactorization};
pub use numeric::{to_numeric, NumericFactor};
pub use structure::{
    cp_graph_check, special_hypothesis_check, GraphVerdict, DEFAULT_CYCLE_DIM_BOUND,
};
pub use verify::{dnn_check, verify, Discrepancy, DnnVerdict, VerificationReport};
