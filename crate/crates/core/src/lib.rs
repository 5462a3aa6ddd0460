//! Search and enumeration of graphs modulo isomorphism under
//! exists-forall constraints.
//!
//! The pieces, bottom up:
//! - [`graph`]: graphs, partially defined graphs, permutations, cell orders,
//!   edge-list and graph6 I/O
//! - [`symmetry`]: lexicographic canonicity checks and symmetry-breaking
//!   clause extraction
//! - [`circuit`]: and/or circuits, 2-QBF prefixes, substitution, evaluation,
//!   simplification
//! - [`qcir`]: the QCIR-G14 subset used for instance exchange
//! - [`sat`]: incremental CDCL solving with assumptions and a
//!   model-admissibility callback, Tseitin translation, cardinality counters
//! - [`cegar`]: the CEGAR 2-QBF engine with dynamic symmetry breaking and
//!   solution enumeration over free variables
//! - [`encoders`]: static minimality encoding and the benchmark graph-search
//!   families
//! - [`oracle`]: independent brute-force reference implementations

pub mod cegar;
pub mod circuit;
pub mod encoders;
pub mod graph;
pub mod oracle;
pub mod qcir;
pub mod sat;
pub mod symmetry;
