//! Incremental CDCL SAT solving with assumptions and a model-admissibility
//! callback, plus Tseitin translation and sequential-counter cardinality
//! constraints.

mod cardinality;
mod solver;
mod tseitin;

pub use cardinality::{cardinality_eq, cardinality_ge, cardinality_le};
pub use solver::{Admissibility, Lit, SolveResult, SolverInstance, Var};
pub use tseitin::TseitinContext;
