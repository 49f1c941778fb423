//! Exact counting of triangles, t-cliques, closed-neighborhood triangle
//! counts `|T_{N[v]}|`, and the quadruple statistic `|W(G)|`.
//!
//! Dense graphs use bitset row intersections. Sparse graphs orient every
//! edge from the lower to the higher `(degree, index)` rank and intersect
//! sorted out-neighborhoods, which bounds every out-degree by `sqrt(2m)`.
//!
//! [`full_report`] ties the counts together through the identity
//! `6 * sum_v |T_{N[v]}| + |W(G)| = sum_v d(v)^3`, which holds on every
//! graph, so a mismatch is an implementation bug.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::binomial;
use crate::graph::{merge_intersection_count, BitIter, Graph, GraphError, VertexSet};

/// Below this many vertices the per-vertex loops run sequentially.
const PARALLEL_MIN_VERTICES: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("clique size must be at least 1, got {0}")]
    InvalidCliqueSize(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("counting identity violated: omega {omega} + w {w} != degree cube sum {cubes}")]
    IdentityViolation { omega: u128, w: u128, cubes: u128 },
}

/// Everything the neighborhood identity relates, for one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsReport {
    pub triangle_count: u128,
    pub per_vertex_meeting: Vec<u128>,
    pub w_count: u128,
    pub degree_cube_sum: u128,
    pub omega_count: u128,
}

impl CountsReport {
    /// Vertex minimizing `|T_{N[v]}| - C(d(v)+1, 3)` and that slack, ties to
    /// the smaller index. `None` for the empty graph.
    pub fn min_slack(&self, degrees: &[usize]) -> Option<(usize, i128)> {
        self.per_vertex_meeting
            .iter()
            .zip(degrees)
            .enumerate()
            .map(|(v, (&m, &d))| (v, neighborhood_slack(m, d)))
            .min_by_key(|&(v, s)| (s, v))
    }
}

/// `|T_{N[v]}| - C(d(v)+1, 3)`; some vertex of every nonempty graph has
/// slack at most zero.
pub fn neighborhood_slack(meeting: u128, degree: usize) -> i128 {
    let cap = binomial(degree as i64 + 1, 3).expect("C(d+1, 3) fits for any usize degree");
    meeting as i128 - cap as i128
}

fn checked_total<I: Iterator<Item = u128>>(mut parts: I, what: &'static str) -> Result<u128, CountError> {
    parts.try_fold(0u128, |acc, x| acc.checked_add(x)).ok_or(CountError::Overflow(what))
}

fn per_vertex<F>(n: usize, f: F) -> Vec<u128>
where
    F: Fn(usize) -> u128 + Sync + Send,
{
    if n < PARALLEL_MIN_VERTICES {
        (0..n).map(f).collect()
    } else {
        (0..n).into_par_iter().map(f).collect()
    }
}

/// Popcount of `a & b` restricted to bit positions strictly above `v`.
#[inline]
fn and_count_above(a: &[u64], b: &[u64], v: usize) -> u64 {
    let first = v / 64;
    let head = (a[first] & b[first]) & (!0u64).checked_shl(v as u32 % 64 + 1).unwrap_or(0);
    let mut count = head.count_ones() as u64;
    for w in first + 1..a.len() {
        count += (a[w] & b[w]).count_ones() as u64;
    }
    count
}

#[inline]
fn mask_above(row: &[u64], v: usize, out: &mut [u64]) {
    out.copy_from_slice(row);
    let first = v / 64;
    for w in out.iter_mut().take(first) {
        *w = 0;
    }
    out[first] &= (!0u64).checked_shl(v as u32 % 64 + 1).unwrap_or(0);
}

/// Edges oriented from lower to higher `(degree, index)` rank, each
/// out-list sorted by vertex index.
struct Oriented {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Oriented {
    fn new(g: &Graph) -> Oriented {
        let rank_less = |u: usize, v: usize| (g.degree(u), u) < (g.degree(v), v);
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut targets = Vec::with_capacity(g.edge_count());
        offsets.push(0);
        for u in 0..g.n() {
            targets.extend(g.neighbors(u).filter(|&v| rank_less(u, v)).map(|v| v as u32));
            offsets.push(targets.len());
        }
        Oriented { offsets, targets }
    }

    #[inline]
    fn out(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }
}

/// Exact number of triangles.
pub fn count_triangles(g: &Graph) -> Result<u128, CountError> {
    let n = g.n();
    let parts = if g.dense_row(0).is_some() {
        per_vertex(n, |u| {
            let ru = g.dense_row(u).unwrap();
            let mut t = 0u64;
            for v in BitIter::new(ru).filter(|&v| v > u) {
                t += and_count_above(ru, g.dense_row(v).unwrap(), v);
            }
            t as u128
        })
    } else {
        let oriented = Oriented::new(g);
        per_vertex(n, |u| {
            let out_u = oriented.out(u);
            out_u
                .iter()
                .map(|&v| merge_intersection_count(out_u, oriented.out(v as usize)) as u128)
                .sum()
        })
    };
    checked_total(parts.into_iter(), "triangle count")
}

/// Exact number of `t`-vertex cliques. `t = 1` gives `n`, `t = 2` the edge
/// count.
pub fn count_cliques(g: &Graph, t: usize) -> Result<u128, CountError> {
    match t {
        0 => return Err(CountError::InvalidCliqueSize(0)),
        1 => return Ok(g.n() as u128),
        2 => return Ok(g.edge_count() as u128),
        3 => return count_triangles(g),
        _ => {}
    }
    let n = g.n();
    let parts = if let Some(words) = g.dense_row(0).map(<[u64]>::len) {
        per_vertex(n, |v| {
            let mut stack = vec![vec![0u64; words]; t - 1];
            mask_above(g.dense_row(v).unwrap(), v, &mut stack[0]);
            extend_dense(g, &mut stack, 0, t - 1)
        })
    } else {
        let oriented = Oriented::new(g);
        per_vertex(n, |v| {
            let mut stack: Vec<Vec<u32>> = vec![Vec::new(); t - 1];
            stack[0].extend_from_slice(oriented.out(v));
            extend_sparse(&oriented, &mut stack, 0, t - 1)
        })
    };
    checked_total(parts.into_iter(), "clique count")
}

/// Counts ways to pick `remaining` more vertices from the candidate set at
/// `stack[level]`, each adjacent to all previously chosen ones.
fn extend_dense(g: &Graph, stack: &mut [Vec<u64>], level: usize, remaining: usize) -> u128 {
    if remaining == 1 {
        return stack[level].iter().map(|w| w.count_ones() as u128).sum();
    }
    let (head, tail) = stack.split_at_mut(level + 1);
    let cand = &head[level];
    let mut total = 0;
    for w in BitIter::new(cand) {
        let next = &mut tail[0];
        mask_above(g.dense_row(w).unwrap(), w, next);
        for (x, c) in next.iter_mut().zip(cand.iter()) {
            *x &= c;
        }
        if next.iter().any(|&x| x != 0) {
            total += extend_dense(g, tail, 0, remaining - 1);
        }
    }
    total
}

fn extend_sparse(o: &Oriented, stack: &mut [Vec<u32>], level: usize, remaining: usize) -> u128 {
    if remaining == 1 {
        return stack[level].len() as u128;
    }
    let (head, tail) = stack.split_at_mut(level + 1);
    let cand = &head[level];
    let mut total = 0;
    for &w in cand.iter() {
        let next = &mut tail[0];
        next.clear();
        intersect_into(cand, o.out(w as usize), next);
        if !next.is_empty() {
            total += extend_sparse(o, tail, 0, remaining - 1);
        }
    }
    total
}

fn intersect_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// All triangles as sorted vertex triples.
fn list_triangles(g: &Graph) -> Vec<[u32; 3]> {
    let n = g.n();
    let mut out = Vec::new();
    if g.dense_row(0).is_some() {
        let words = g.dense_row(0).unwrap().len();
        let mut common = vec![0u64; words];
        for u in 0..n {
            let ru = g.dense_row(u).unwrap();
            for v in BitIter::new(ru).filter(|&v| v > u) {
                mask_above(g.dense_row(v).unwrap(), v, &mut common);
                for (c, r) in common.iter_mut().zip(ru) {
                    *c &= r;
                }
                out.extend(BitIter::new(&common).map(|w| [u as u32, v as u32, w as u32]));
            }
        }
    } else {
        let oriented = Oriented::new(g);
        let mut common = Vec::new();
        for u in 0..n {
            let out_u = oriented.out(u);
            for &v in out_u {
                common.clear();
                intersect_into(out_u, oriented.out(v as usize), &mut common);
                for &w in &common {
                    let mut tri = [u as u32, v, w];
                    tri.sort_unstable();
                    out.push(tri);
                }
            }
        }
    }
    out
}

/// `|T_{N[v]}|` for every vertex, by marking each triangle once per closed
/// neighborhood it touches.
pub fn per_vertex_meeting(g: &Graph) -> Vec<u128> {
    let n = g.n();
    let triangles = list_triangles(g);
    if triangles.is_empty() {
        return vec![0; n];
    }
    // incidence lists: triangle ids per vertex
    let mut offsets = vec![0usize; n + 1];
    for tri in &triangles {
        for &x in tri {
            offsets[x as usize + 1] += 1;
        }
    }
    for v in 0..n {
        offsets[v + 1] += offsets[v];
    }
    let mut fill = offsets.clone();
    let mut incident = vec![0u32; offsets[n]];
    for (id, tri) in triangles.iter().enumerate() {
        for &x in tri {
            incident[fill[x as usize]] = id as u32;
            fill[x as usize] += 1;
        }
    }

    per_vertex(n, |v| {
        let in_closed = |x: u32| x as usize == v || g.has_edge(x as usize, v);
        let mut count = 0u128;
        for u in std::iter::once(v).chain(g.neighbors(v)) {
            for &id in &incident[offsets[u]..offsets[u + 1]] {
                // count the triangle at its smallest member inside N[v]
                let first = triangles[id as usize].iter().copied().find(|&x| in_closed(x));
                if first == Some(u as u32) {
                    count += 1;
                }
            }
        }
        count
    })
}

/// `|T_{N[v]}|`: triangles with at least one vertex in `N[v]`.
pub fn triangles_meeting(g: &Graph, v: usize) -> Result<u128, CountError> {
    let closed = g.closed_neighborhood(v)?;
    let mut count = 0u128;
    for u in closed.iter() {
        for a in g.neighbors(u) {
            for b in g.neighbors(u).filter(|&b| b > a) {
                if !g.has_edge(a, b) {
                    continue;
                }
                let mut tri = [u, a, b];
                tri.sort_unstable();
                if tri.iter().copied().find(|&x| closed.contains(x)) == Some(u) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// `|T_{N[v]}|` as `T(G) - T(G - N[v])`.
pub fn triangles_meeting_by_decomposition(g: &Graph, v: usize) -> Result<u128, CountError> {
    let closed: VertexSet = g.closed_neighborhood(v)?;
    let rest = g.delete_vertices(&closed)?;
    let all = count_triangles(g)?;
    let outside = count_triangles(&rest.graph)?;
    all.checked_sub(outside).ok_or(CountError::Overflow("neighborhood decomposition"))
}

/// `|W(G)|`: ordered `(x, u, v, w)` with `u, v, w` all adjacent to `x` and
/// pairwise non-adjacent, repeats allowed.
///
/// Per center `x` of degree `k`, inclusion-exclusion over the three pair
/// constraints gives `k^3 - 6 e k + 3 sum_u c(xu)^2 - 6 T_x`, where `e` is
/// the edge count inside `N(x)`, `c(xu)` the common neighbors of `x` and `u`,
/// and `T_x` the triangles inside `N(x)`. Summing `T_x` over `x` counts every
/// 4-clique four times.
pub fn count_w(g: &Graph) -> Result<u128, CountError> {
    let per_center: Vec<Option<i128>> = {
        let f = |x: usize| -> Option<i128> {
            let k = g.degree(x) as i128;
            let mut c_sum: i128 = 0;
            let mut c_sq: i128 = 0;
            for u in g.neighbors(x) {
                let c = g.common_neighbor_count(x, u) as i128;
                c_sum += c;
                c_sq = c_sq.checked_add(c * c)?;
            }
            let e = c_sum / 2;
            k.checked_pow(3)?
                .checked_sub(e.checked_mul(k)?.checked_mul(6)?)?
                .checked_add(c_sq.checked_mul(3)?)
        };
        if g.n() < PARALLEL_MIN_VERTICES {
            (0..g.n()).map(f).collect()
        } else {
            (0..g.n()).into_par_iter().map(f).collect()
        }
    };
    let mut total: i128 = 0;
    for part in per_center {
        total = part.and_then(|p| total.checked_add(p)).ok_or(CountError::Overflow("w count"))?;
    }
    let k4 = count_cliques(g, 4)?;
    let k4_term = i128::try_from(k4)
        .ok()
        .and_then(|k| k.checked_mul(24))
        .ok_or(CountError::Overflow("w count"))?;
    let w = total.checked_sub(k4_term).ok_or(CountError::Overflow("w count"))?;
    u128::try_from(w).map_err(|_| CountError::Overflow("w count went negative"))
}

/// `sum_v d(v)^3`.
pub fn degree_cube_sum(g: &Graph) -> Result<u128, CountError> {
    checked_total(
        g.degrees().iter().map(|&d| (d as u128).pow(3)),
        "degree cube sum",
    )
}

/// All counts for `g`, with the neighborhood identity checked before return.
pub fn full_report(g: &Graph) -> Result<CountsReport, CountError> {
    let triangle_count = count_triangles(g)?;
    let per_vertex_meeting = per_vertex_meeting(g);
    let w_count = count_w(g)?;
    let degree_cube_sum = degree_cube_sum(g)?;
    let omega_count = checked_total(per_vertex_meeting.iter().copied(), "omega count")?
        .checked_mul(6)
        .ok_or(CountError::Overflow("omega count"))?;
    if omega_count.checked_add(w_count) != Some(degree_cube_sum) {
        return Err(CountError::IdentityViolation { omega: omega_count, w: w_count, cubes: degree_cube_sum });
    }
    Ok(CountsReport { triangle_count, per_vertex_meeting, w_count, degree_cube_sum, omega_count })
}
