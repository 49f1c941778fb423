//! Peeling certificates.
//!
//! [`peel`] repeatedly picks a vertex `v` whose closed neighborhood meets at
//! most `C(d(v)+1, 3)` triangles and deletes `N[v]`, recording each step.
//! Because `T(G) = T(G - N[v]) + |T_{N[v]}|`, the recorded removals sum to
//! the triangle count, and the per-step accounting shows the total never
//! exceeds `q*C(d+1, 3) + C(r, 3)`.
//!
//! [`verify_certificate`] replays the recorded vertices against the graph
//! and re-derives every number with its own brute-force counter (or, for
//! larger graphs, the two-count decomposition), so it shares no code with the
//! marking path `peel` uses to choose vertices.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bounds::{self, binomial, merge_bound, BoundsError};
use crate::counting::{self, CountError};
use crate::format::write_edge_list;
use crate::graph::{Graph, GraphError, VertexSet};

/// Digest used for `input_hash` and the certificate seal.
pub const DIGEST_ALGORITHM: &str = "sha256";

/// Graphs up to this size are checked with the cubic brute-force counter.
pub const BRUTE_FORCE_MAX_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("graph has maximum degree {max_degree}, above the declared d = {d}")]
    DegreeExceeded { max_degree: usize, d: u64 },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelStep {
    /// Index in the graph left by the previous steps.
    pub chosen_vertex: usize,
    /// Index in the input graph.
    pub original_vertex: usize,
    pub degree_at_choice: usize,
    pub triangles_removed: u128,
    pub remaining_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateHeader {
    pub digest_algorithm: String,
    pub input_hash: String,
    pub n: u64,
    pub d: u64,
    pub q: u64,
    pub r: u64,
    pub bound: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTotals {
    pub step_count: usize,
    pub total_triangles: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelCertificate {
    pub header: CertificateHeader,
    pub steps: Vec<PeelStep>,
    pub totals: CertificateTotals,
    /// Digest over the header, steps and totals.
    pub seal: String,
}

impl PeelCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Seal computed over the current contents.
    pub fn compute_seal(&self) -> String {
        let body = serde_json::to_string(&(&self.header, &self.steps, &self.totals))
            .expect("certificate serializes");
        sha256_hex(body.as_bytes())
    }

    /// Recomputes and stores the seal.
    pub fn reseal(&mut self) {
        self.seal = self.compute_seal();
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest of the canonical edge-list serialization of `g`.
pub fn input_hash(g: &Graph) -> String {
    sha256_hex(write_edge_list(g).as_bytes())
}

/// Vertex minimizing `|T_{N[v]}| - C(d(v)+1, 3)`, ties broken by smaller
/// degree and then smaller index. Its slack is never positive.
pub fn select_vertex(g: &Graph) -> Result<usize, GraphError> {
    select_from(g, &counting::per_vertex_meeting(g)).map(|(v, _)| v)
}

fn select_from(g: &Graph, meeting: &[u128]) -> Result<(usize, u128), GraphError> {
    (0..g.n())
        .min_by_key(|&v| (counting::neighborhood_slack(meeting[v], g.degree(v)), g.degree(v), v))
        .map(|v| (v, meeting[v]))
        .ok_or(GraphError::EmptyGraph)
}

/// Runs the neighborhood-peeling induction on `g` with degree cap `d`.
pub fn peel(g: &Graph, d: u64) -> Result<PeelCertificate, CertError> {
    let max_degree = g.max_degree()?;
    if max_degree as u64 > d {
        return Err(CertError::DegreeExceeded { max_degree, d });
    }
    let (params, bound) = bounds::gls_bound(g.n() as u64, d, 3)?;

    let mut steps = Vec::new();
    let mut current = g.clone();
    let mut original: Vec<usize> = (0..g.n()).collect();
    let mut total: u128 = 0;
    while current.n() > 0 {
        let meeting = counting::per_vertex_meeting(&current);
        let (v, removed) = select_from(&current, &meeting)?;
        let closed = current.closed_neighborhood(v)?;
        let next = current.delete_vertices(&closed)?;
        steps.push(PeelStep {
            chosen_vertex: v,
            original_vertex: original[v],
            degree_at_choice: current.degree(v),
            triangles_removed: removed,
            remaining_vertices: next.graph.n(),
        });
        total = total.checked_add(removed).ok_or(CountError::Overflow("certificate total"))?;
        original = next.original.iter().map(|&i| original[i]).collect();
        current = next.graph;
    }

    let mut cert = PeelCertificate {
        header: CertificateHeader {
            digest_algorithm: DIGEST_ALGORITHM.to_string(),
            input_hash: input_hash(g),
            n: params.n,
            d: params.d,
            q: params.q,
            r: params.r,
            bound,
        },
        totals: CertificateTotals { step_count: steps.len(), total_triangles: total },
        steps,
        seal: String::new(),
    };
    cert.reseal();
    Ok(cert)
}

/// Both sides of the per-step accounting
/// `C(k,3) + bound(n - k) <= bound(n)` for a removed closed neighborhood of
/// size `k`, evaluated through [`merge_bound`] in the two cases `k <= r`
/// and `k > r`.
pub fn step_accounting(n: u64, d: u64, k: u64) -> Result<(u128, u128), BoundsError> {
    if k == 0 || k > d + 1 || k > n {
        return Err(BoundsError::InvalidArgument(format!(
            "closed neighborhood of size {k} impossible for n = {n}, d = {d}"
        )));
    }
    let lhs = binomial(k as i64, 3)?
        .checked_add(bounds::gls_value(n - k, d, 3)?)
        .ok_or(BoundsError::Overflow("step accounting"))?;
    let block = d + 1;
    let (q, r) = (n / block, n % block);
    let full = binomial(block as i64, 3)?;
    let rhs = if k <= r {
        // q full blocks survive; the partial block shrinks from r to r - k
        let merged = merge_bound(r - k, k, r)?;
        full.checked_mul(q as u128)
            .and_then(|x| x.checked_add(merged))
            .ok_or(BoundsError::Overflow("step accounting"))?
    } else {
        // one full block is broken: d + 1 + r - k vertices of it remain
        let merged = merge_bound(block + r - k, k, block)?;
        full.checked_mul(q as u128 - 1)
            .and_then(|x| x.checked_add(merged))
            .ok_or(BoundsError::Overflow("step accounting"))?
    };
    debug_assert_eq!(rhs, bounds::gls_value(n, d, 3)?);
    Ok((lhs, rhs))
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    UnsupportedDigest,
    HashMismatch,
    HeaderMismatch,
    DegreeExceeded,
    VertexOutOfRange,
    OriginalVertexMismatch,
    DegreeMismatch,
    StepBoundViolated,
    MeetingMismatch,
    DecompositionViolated,
    AccountingViolated,
    RemainingMismatch,
    NotExhausted,
    StepCountMismatch,
    TotalMismatch,
    BoundExceeded,
    SealMismatch,
}

impl FailureReason {
    pub fn code(self) -> &'static str {
        match self {
            FailureReason::UnsupportedDigest => "unsupported digest",
            FailureReason::HashMismatch => "hash mismatch",
            FailureReason::HeaderMismatch => "header mismatch",
            FailureReason::DegreeExceeded => "degree exceeded",
            FailureReason::VertexOutOfRange => "vertex out of range",
            FailureReason::OriginalVertexMismatch => "original vertex mismatch",
            FailureReason::DegreeMismatch => "degree mismatch",
            FailureReason::StepBoundViolated => "step bound violated",
            FailureReason::MeetingMismatch => "meeting count mismatch",
            FailureReason::DecompositionViolated => "decomposition violated",
            FailureReason::AccountingViolated => "accounting violated",
            FailureReason::RemainingMismatch => "remaining mismatch",
            FailureReason::NotExhausted => "graph not exhausted",
            FailureReason::StepCountMismatch => "step count mismatch",
            FailureReason::TotalMismatch => "total mismatch",
            FailureReason::BoundExceeded => "bound exceeded",
            FailureReason::SealMismatch => "seal mismatch",
        }
    }
}

/// First failed check: the step index (if the failure is inside the replay)
/// and the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub step: Option<usize>,
    pub reason: FailureReason,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "{} at step {i}", self.reason.code()),
            None => f.write_str(self.reason.code()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Valid,
    Invalid(Failure),
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verification::Valid)
    }

    pub fn failure(&self) -> Option<&Failure> {
        match self {
            Verification::Valid => None,
            Verification::Invalid(f) => Some(f),
        }
    }
}

/// Independent counters for the replay.
mod oracle {
    use crate::graph::{Graph, VertexSet};

    pub fn triangles(g: &Graph) -> u128 {
        meeting(g, None)
    }

    /// Triangles of `g` with a vertex in `set` (all triangles when `None`).
    pub fn meeting(g: &Graph, set: Option<&VertexSet>) -> u128 {
        let n = g.n();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                if !g.has_edge(a, b) {
                    continue;
                }
                for c in b + 1..n {
                    if g.has_edge(a, c) && g.has_edge(b, c) {
                        let touches = set.is_none_or(|s| s.contains(a) || s.contains(b) || s.contains(c));
                        count += touches as u128;
                    }
                }
            }
        }
        count
    }
}

fn triangles_for_replay(g: &Graph) -> Result<u128, CountError> {
    if g.n() <= BRUTE_FORCE_MAX_N {
        Ok(oracle::triangles(g))
    } else {
        counting::count_triangles(g)
    }
}

/// Replays `cert` against `g`. Never panics on well-formed input; the first
/// failed check is reported.
pub fn verify_certificate(g: &Graph, cert: &PeelCertificate) -> Verification {
    match check(g, cert) {
        Ok(()) => Verification::Valid,
        Err(failure) => Verification::Invalid(failure),
    }
}

fn fail(step: Option<usize>, reason: FailureReason) -> Failure {
    Failure { step, reason }
}

fn check(g: &Graph, cert: &PeelCertificate) -> Result<(), Failure> {
    let header = &cert.header;
    let ensure = |ok: bool, step: Option<usize>, reason| if ok { Ok(()) } else { Err(fail(step, reason)) };

    ensure(header.digest_algorithm == DIGEST_ALGORITHM, None, FailureReason::UnsupportedDigest)?;
    ensure(header.input_hash == input_hash(g), None, FailureReason::HashMismatch)?;
    ensure(header.n == g.n() as u64, None, FailureReason::HeaderMismatch)?;
    let (params, bound) = bounds::gls_bound(header.n, header.d, 3)
        .map_err(|_| fail(None, FailureReason::HeaderMismatch))?;
    ensure(
        (params.q, params.r, bound) == (header.q, header.r, header.bound),
        None,
        FailureReason::HeaderMismatch,
    )?;
    let d = header.d;
    let max_degree = g.max_degree().map_err(|_| fail(None, FailureReason::HeaderMismatch))?;
    ensure(max_degree as u64 <= d, None, FailureReason::DegreeExceeded)?;

    let input_triangles =
        triangles_for_replay(g).map_err(|_| fail(None, FailureReason::TotalMismatch))?;

    let mut current = g.clone();
    let mut current_triangles = input_triangles;
    let mut original: Vec<usize> = (0..g.n()).collect();
    let mut removed_sum: u128 = 0;
    for (i, step) in cert.steps.iter().enumerate() {
        let at = Some(i);
        // steps recorded past an empty graph
        ensure(current.n() > 0, at, FailureReason::NotExhausted)?;
        let v = step.chosen_vertex;
        ensure(v < current.n(), at, FailureReason::VertexOutOfRange)?;
        ensure(original[v] == step.original_vertex, at, FailureReason::OriginalVertexMismatch)?;
        let degree = current.degree(v);
        ensure(degree == step.degree_at_choice, at, FailureReason::DegreeMismatch)?;

        let cap = binomial(degree as i64 + 1, 3).map_err(|_| fail(at, FailureReason::StepBoundViolated))?;
        ensure(step.triangles_removed <= cap, at, FailureReason::StepBoundViolated)?;

        let closed: VertexSet = current.closed_neighborhood(v).map_err(|_| fail(at, FailureReason::VertexOutOfRange))?;
        let next = current.delete_vertices(&closed).map_err(|_| fail(at, FailureReason::VertexOutOfRange))?;
        let next_triangles =
            triangles_for_replay(&next.graph).map_err(|_| fail(at, FailureReason::MeetingMismatch))?;
        let meeting = if current.n() <= BRUTE_FORCE_MAX_N {
            oracle::meeting(&current, Some(&closed))
        } else {
            current_triangles
                .checked_sub(next_triangles)
                .ok_or_else(|| fail(at, FailureReason::DecompositionViolated))?
        };
        ensure(meeting == step.triangles_removed, at, FailureReason::MeetingMismatch)?;
        ensure(
            next_triangles.checked_add(meeting) == Some(current_triangles),
            at,
            FailureReason::DecompositionViolated,
        )?;

        let (lhs, rhs) = step_accounting(current.n() as u64, d, degree as u64 + 1)
            .map_err(|_| fail(at, FailureReason::AccountingViolated))?;
        ensure(lhs <= rhs, at, FailureReason::AccountingViolated)?;
        ensure(next.graph.n() == step.remaining_vertices, at, FailureReason::RemainingMismatch)?;

        removed_sum = removed_sum
            .checked_add(step.triangles_removed)
            .ok_or_else(|| fail(at, FailureReason::TotalMismatch))?;
        original = next.original.iter().map(|&j| original[j]).collect();
        current = next.graph;
        current_triangles = next_triangles;
    }
    ensure(current.n() == 0, None, FailureReason::NotExhausted)?;
    ensure(cert.totals.step_count == cert.steps.len(), None, FailureReason::StepCountMismatch)?;
    ensure(
        cert.totals.total_triangles == removed_sum && removed_sum == input_triangles,
        None,
        FailureReason::TotalMismatch,
    )?;
    ensure(cert.totals.total_triangles <= header.bound, None, FailureReason::BoundExceeded)?;
    ensure(cert.seal == cert.compute_seal(), None, FailureReason::SealMismatch)?;
    Ok(())
}
