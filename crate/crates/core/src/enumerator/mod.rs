//! Exhaustive search over small degree-bounded graphs, extremal
//! constructions, and random test inputs.
//!
//! [`enumerate_and_verify`] visits every labeled graph on `n` vertices with
//! maximum degree at most `d` by backtracking over the `C(n, 2)` vertex
//! pairs in lexicographic order, adding an edge only while both endpoints
//! are below the cap. The first few pairs split the search into subtrees
//! that can run on a thread pool; their results are merged in subtree order,
//! so the report does not depend on the job count.

mod canonical;
mod random;

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{gls_bound, BoundParams, BoundsError};
use crate::counting::{self, CountError};
use crate::format::write_graph6;
use crate::graph::Graph;

pub use canonical::{canonical_form, CanonicalForm, MAX_CANONICAL_N};
pub use random::{default_proposal_budget, random_bounded_graph, random_bounded_graph_with_budget};

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 8;

/// Environment variable overriding [`DEFAULT_EXHAUSTIVE_LIMIT`].
pub const EXHAUSTIVE_LIMIT_ENV: &str = "TRIDENT_MAX_EXHAUSTIVE_N";

/// Rows are single `u64` words, so no search can exceed this.
const SEARCH_MAX_N: usize = 64;

/// Pairs fixed before the search is split into independent subtrees.
const SPLIT_SLOTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("exhaustive search on n = {n} exceeds the limit of {limit}")]
    ExhaustiveLimitExceeded { n: usize, limit: usize },
    #[error("canonical form needs n <= {limit}, got {n}")]
    TooLargeForCanonicalization { n: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("no vertex of {graph6} has nonpositive neighborhood slack (minimum {min_slack})")]
    NeighborhoodBoundViolated { graph6: String, min_slack: i128 },
    #[error("clique counters disagree on {graph6}: {direct} vs {report}")]
    CountMismatch { graph6: String, direct: u128, report: u128 },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationConfig {
    /// Largest `n` accepted.
    pub max_n: usize,
    pub jobs: usize,
    /// Run the full counting report on every visited graph, checking the
    /// neighborhood identity and the existence of a nonpositive-slack vertex.
    pub check_identities: bool,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig { max_n: DEFAULT_EXHAUSTIVE_LIMIT, jobs: 1, check_identities: true }
    }
}

impl EnumerationConfig {
    /// Defaults with `max_n` taken from `TRIDENT_MAX_EXHAUSTIVE_N` when set.
    pub fn from_env() -> Result<Self, EnumError> {
        let mut config = EnumerationConfig::default();
        if let Ok(raw) = std::env::var(EXHAUSTIVE_LIMIT_ENV) {
            config.max_n = raw.trim().parse().map_err(|_| {
                EnumError::InvalidArgument(format!("{EXHAUSTIVE_LIMIT_ENV}={raw:?} is not an integer"))
            })?;
        }
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniquenessVerdict {
    /// The extremal set is a single isomorphism class, the predicted one.
    UniqueAsPredicted,
    /// More than one class attains the maximum (expected when `r <= 2`).
    MultipleExtremal,
    /// No uniqueness prediction for this clique size.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub d: usize,
    pub t: usize,
    pub q: u64,
    pub r: u64,
    pub bound: u128,
    pub graphs_enumerated: u64,
    pub max_cliques_found: u128,
    pub violation_found: bool,
    /// Labeled graphs attaining the maximum.
    pub labeled_extremal: u64,
    /// Canonical graph6 forms of the extremal graphs, sorted.
    pub extremal_graphs: Vec<CanonicalForm>,
    pub uniqueness_verdict: UniquenessVerdict,
    /// Whether the extremal classes are exactly the predicted family
    /// `qK_{d+1} + H`; `None` when no prediction applies.
    pub matches_prediction: Option<bool>,
}

/// Disjoint union, vertices of `parts[i]` following those of `parts[..i]`.
pub fn disjoint_union(parts: &[&Graph]) -> Graph {
    let mut edges = Vec::new();
    let mut base = 0;
    for part in parts {
        edges.extend(part.edges().map(|(u, v)| (u + base, v + base)));
        base += part.n();
    }
    Graph::new(base, edges).expect("union of valid graphs")
}

fn blocks_plus(params: &BoundParams, tail: &Graph) -> Graph {
    let block = Graph::complete(params.d as usize + 1);
    let mut parts: Vec<&Graph> = vec![&block; params.q as usize];
    parts.push(tail);
    disjoint_union(&parts)
}

/// `q` disjoint copies of `K_{d+1}` followed by `K_r`, where
/// `n = q(d+1) + r`.
pub fn build_extremal(n: usize, d: usize) -> Result<Graph, EnumError> {
    let params = BoundParams::new(n as u64, d as u64, 3)?;
    Ok(blocks_plus(&params, &Graph::complete(params.r as usize)))
}

/// Canonical forms of `qK_{d+1} + H` over every graph `H` on `r` vertices.
fn predicted_family(params: &BoundParams) -> Result<BTreeSet<CanonicalForm>, EnumError> {
    let r = params.r as usize;
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << pairs.len() {
        let edges = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p);
        let tail = Graph::new(r, edges).expect("pairs are in range");
        out.insert(canonical_form(&blocks_plus(params, &tail))?);
    }
    Ok(out)
}

#[derive(Clone)]
struct State {
    rows: [u64; SEARCH_MAX_N],
    degree: [u32; SEARCH_MAX_N],
}

#[derive(Default)]
struct Subtree {
    graphs: u64,
    max: u128,
    extremal: Vec<Vec<u64>>,
}

struct Search<'a> {
    n: usize,
    d: u32,
    t: usize,
    slots: Vec<(usize, usize)>,
    check: bool,
    /// Largest count seen by any subtree; graphs below it are not kept.
    floor: &'a AtomicU64,
}

impl Search<'_> {
    fn prefixes(&self, k: usize, end: usize, state: &mut State, out: &mut Vec<State>) {
        if k == end {
            out.push(state.clone());
            return;
        }
        let (i, j) = self.slots[k];
        if state.degree[i] < self.d && state.degree[j] < self.d {
            toggle(state, i, j, true);
            self.prefixes(k + 1, end, state, out);
            toggle(state, i, j, false);
        }
        self.prefixes(k + 1, end, state, out);
    }

    fn descend(&self, k: usize, state: &mut State, out: &mut Subtree) -> Result<(), EnumError> {
        if k == self.slots.len() {
            return self.visit(state, out);
        }
        let (i, j) = self.slots[k];
        if state.degree[i] < self.d && state.degree[j] < self.d {
            toggle(state, i, j, true);
            self.descend(k + 1, state, out)?;
            toggle(state, i, j, false);
        }
        self.descend(k + 1, state, out)
    }

    fn visit(&self, state: &State, out: &mut Subtree) -> Result<(), EnumError> {
        let rows = &state.rows[..self.n];
        let graph = Graph::from_rows_unchecked(self.n, rows);
        let count = counting::count_cliques(&graph, self.t)?;
        if self.check {
            let report = counting::full_report(&graph)?;
            if self.t == 3 && report.triangle_count != count {
                return Err(EnumError::CountMismatch {
                    graph6: write_graph6(&graph),
                    direct: count,
                    report: report.triangle_count,
                });
            }
            if let Some((_, slack)) = report.min_slack(graph.degrees()) {
                if slack > 0 {
                    return Err(EnumError::NeighborhoodBoundViolated {
                        graph6: write_graph6(&graph),
                        min_slack: slack,
                    });
                }
            }
        }
        out.graphs += 1;
        if count > out.max || out.graphs == 1 {
            out.max = count;
            out.extremal.clear();
        }
        let floor = self.floor.fetch_max(count as u64, Ordering::Relaxed).max(count as u64);
        if count == out.max && count as u64 >= floor {
            out.extremal.push(rows.to_vec());
        }
        Ok(())
    }
}

#[inline]
fn toggle(state: &mut State, i: usize, j: usize, on: bool) {
    if on {
        state.rows[i] |= 1 << j;
        state.rows[j] |= 1 << i;
        state.degree[i] += 1;
        state.degree[j] += 1;
    } else {
        state.rows[i] &= !(1 << j);
        state.rows[j] &= !(1 << i);
        state.degree[i] -= 1;
        state.degree[j] -= 1;
    }
}

/// Exhaustively checks the `t`-clique bound on all labeled graphs with `n`
/// vertices and maximum degree at most `d`.
pub fn enumerate_and_verify(
    n: usize,
    d: usize,
    t: usize,
    config: &EnumerationConfig,
) -> Result<EnumerationReport, EnumError> {
    let limit = config.max_n.min(SEARCH_MAX_N);
    if n > limit {
        return Err(EnumError::ExhaustiveLimitExceeded { n, limit });
    }
    if config.jobs == 0 {
        return Err(EnumError::InvalidArgument("jobs must be at least 1".into()));
    }
    let (params, bound) = gls_bound(n as u64, d as u64, t as u64)?;

    let floor = AtomicU64::new(0);
    let search = Search {
        n,
        d: d.min(u32::MAX as usize) as u32,
        t,
        slots: (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
        check: config.check_identities,
        floor: &floor,
    };
    let split = search.slots.len().min(SPLIT_SLOTS);
    let mut roots = Vec::new();
    let mut start = State { rows: [0; SEARCH_MAX_N], degree: [0; SEARCH_MAX_N] };
    search.prefixes(0, split, &mut start, &mut roots);

    let run = |root: &State| -> Result<Subtree, EnumError> {
        let mut state = root.clone();
        let mut out = Subtree::default();
        search.descend(split, &mut state, &mut out)?;
        Ok(out)
    };
    let results: Vec<Result<Subtree, EnumError>> = if config.jobs == 1 {
        roots.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| EnumError::ThreadPool(e.to_string()))?;
        pool.install(|| roots.par_iter().map(run).collect())
    };

    let mut graphs_enumerated = 0u64;
    let mut max = 0u128;
    let mut subtrees = Vec::with_capacity(results.len());
    for result in results {
        let subtree = result?;
        graphs_enumerated += subtree.graphs;
        if subtree.graphs > 0 {
            max = max.max(subtree.max);
        }
        subtrees.push(subtree);
    }
    let mut labeled_extremal = 0u64;
    let mut extremal = BTreeSet::new();
    for subtree in subtrees.iter().filter(|s| s.graphs > 0 && s.max == max) {
        for rows in &subtree.extremal {
            labeled_extremal += 1;
            extremal.insert(canonical_form(&Graph::from_rows_unchecked(n, rows))?);
        }
    }

    let (uniqueness_verdict, matches_prediction) = if t == 3 {
        let predicted = if params.r >= 3 {
            BTreeSet::from([canonical_form(&build_extremal(n, d)?)?])
        } else {
            predicted_family(&params)?
        };
        let verdict = if extremal.len() == 1 && extremal == predicted {
            UniquenessVerdict::UniqueAsPredicted
        } else {
            UniquenessVerdict::MultipleExtremal
        };
        (verdict, Some(extremal == predicted))
    } else {
        (UniquenessVerdict::NotApplicable, None)
    };

    Ok(EnumerationReport {
        n,
        d,
        t,
        q: params.q,
        r: params.r,
        bound,
        graphs_enumerated,
        max_cliques_found: max,
        violation_found: max > bound,
        labeled_extremal,
        extremal_graphs: extremal.into_iter().collect(),
        uniqueness_verdict,
        matches_prediction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms(graphs: &[Graph]) -> Vec<CanonicalForm> {
        let set: BTreeSet<_> = graphs.iter().map(|g| canonical_form(g).unwrap()).collect();
        set.into_iter().collect()
    }

    #[test]
    fn extremal_constructions() {
        let g = build_extremal(6, 3).unwrap();
        assert_eq!(counting::count_triangles(&g).unwrap(), 4);
        assert_eq!(g.edge_count(), 7);
        let g = build_extremal(11, 3).unwrap();
        assert_eq!(counting::count_triangles(&g).unwrap(), 9);
        let g = build_extremal(5, 4).unwrap();
        assert_eq!(g, Graph::complete(5));
        assert_eq!(counting::count_triangles(&g).unwrap(), 10);
        assert!(build_extremal(0, 3).is_err());
        assert!(build_extremal(3, 0).is_err());
    }

    #[test]
    fn k4_cell_is_unique() {
        let report = enumerate_and_verify(4, 3, 3, &EnumerationConfig::default()).unwrap();
        assert_eq!(report.graphs_enumerated, 64);
        assert_eq!(report.max_cliques_found, 4);
        assert_eq!(report.extremal_graphs, forms(&[Graph::complete(4)]));
        assert_eq!(report.uniqueness_verdict, UniquenessVerdict::UniqueAsPredicted);
        assert!(!report.violation_found);
    }

    #[test]
    fn seven_vertices_cubic_cap() {
        let report = enumerate_and_verify(7, 3, 3, &EnumerationConfig::default()).unwrap();
        assert_eq!(report.max_cliques_found, 5);
        assert_eq!(report.extremal_graphs, forms(&[build_extremal(7, 3).unwrap()]));
        assert_eq!(report.uniqueness_verdict, UniquenessVerdict::UniqueAsPredicted);
        assert_eq!(report.matches_prediction, Some(true));
    }

    #[test]
    fn six_vertices_cubic_cap_has_two_classes() {
        let report = enumerate_and_verify(6, 3, 3, &EnumerationConfig::default()).unwrap();
        assert_eq!(report.max_cliques_found, 4);
        let k4 = Graph::complete(4);
        let expected = forms(&[
            disjoint_union(&[&k4, &Graph::complete(2)]),
            disjoint_union(&[&k4, &Graph::edgeless(2)]),
        ]);
        assert_eq!(report.extremal_graphs, expected);
        assert_eq!(report.uniqueness_verdict, UniquenessVerdict::MultipleExtremal);
        assert_eq!(report.matches_prediction, Some(true));
    }

    #[test]
    fn jobs_do_not_change_the_report() {
        let one = enumerate_and_verify(6, 4, 3, &EnumerationConfig::default()).unwrap();
        let config = EnumerationConfig { jobs: 3, ..EnumerationConfig::default() };
        assert_eq!(enumerate_and_verify(6, 4, 3, &config).unwrap(), one);
    }

    #[test]
    fn limits_and_arguments() {
        let config = EnumerationConfig { max_n: 5, ..EnumerationConfig::default() };
        assert_eq!(
            enumerate_and_verify(6, 2, 3, &config).unwrap_err(),
            EnumError::ExhaustiveLimitExceeded { n: 6, limit: 5 }
        );
        assert!(enumerate_and_verify(4, 0, 3, &EnumerationConfig::default()).is_err());
        assert!(enumerate_and_verify(4, 2, 2, &EnumerationConfig::default()).is_err());
        let zero_jobs = EnumerationConfig { jobs: 0, ..EnumerationConfig::default() };
        assert!(enumerate_and_verify(4, 2, 3, &zero_jobs).is_err());
    }

    #[test]
    fn report_json_uses_kebab_verdicts() {
        let report = enumerate_and_verify(3, 2, 3, &EnumerationConfig::default()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["uniqueness_verdict"], "unique-as-predicted");
        assert_eq!(json["extremal_graphs"][0], "Bw");
        let back: EnumerationReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }
}
