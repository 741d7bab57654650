//! Simultaneous and dual Bad(i, j) checkers, the linear-form transference
//! bounds with a bounded witness search, and the two reductions between the
//! forms.

mod checks;
mod transfer;

pub use checks::{
    check_dual, check_simultaneous, dist_to_int, dual_defect, dual_ok, max_term, simultaneous_ok, DualRange,
    DualResult, SimultaneousResult,
};
pub use transfer::{
    dual_from_simultaneous, is_dual_witness, is_simultaneous_witness, simultaneous_constant, simultaneous_from_dual,
    transfer_bounds, transfer_witness_search, DualWitness, SearchOutcome, SimultaneousWitness, TransferBounds,
    TransferenceProblem,
};
