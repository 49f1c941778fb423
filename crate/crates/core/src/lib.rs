//! Exact triangle and clique counting on degree-bounded graphs.
//!
//! The crate computes the extremal bound `q*C(d+1, t) + C(r, t)` for graphs
//! on `n = q(d+1) + r` vertices with maximum degree `d`, produces peeling
//! certificates showing a concrete graph respects it, and exhaustively checks
//! small cases, including which graphs attain the bound.

pub mod bounds;
pub mod certifier;
pub mod counting;
pub mod enumerator;
pub mod format;
pub mod graph;

pub use bounds::{gls_bound, BoundParams, BoundsError};
pub use certifier::{peel, verify_certificate, PeelCertificate, PeelStep, Verification};
pub use counting::{count_cliques, count_triangles, full_report, CountError, CountsReport};
pub use enumerator::{canonical_form, enumerate_and_verify, EnumerationConfig, EnumerationReport};
pub use graph::{Backend, Graph, GraphError, VertexSet};
