//! Brute-force reference counters. They only use `has_edge`, `degree` and
//! `n`, never the library's counting paths.

#![allow(dead_code)]

use trident::Graph;

pub fn triangles(g: &Graph) -> u128 {
    cliques(g, 3)
}

/// t-subsets inducing complete graphs, by enumerating all subsets.
pub fn cliques(g: &Graph, t: usize) -> u128 {
    fn go(g: &Graph, start: usize, chosen: &mut Vec<usize>, t: usize) -> u128 {
        if chosen.len() == t {
            return 1;
        }
        let mut total = 0;
        for v in start..g.n() {
            if chosen.iter().all(|&u| g.has_edge(u, v)) {
                chosen.push(v);
                total += go(g, v + 1, chosen, t);
                chosen.pop();
            }
        }
        total
    }
    go(g, 0, &mut Vec::new(), t)
}

/// Triangles with a vertex in N[v].
pub fn meeting(g: &Graph, v: usize) -> u128 {
    let n = g.n();
    let closed = |x: usize| x == v || g.has_edge(x, v);
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) && (closed(a) || closed(b) || closed(c)) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// |W(G)| by looping over every 4-tuple.
pub fn w_quadruples(g: &Graph) -> u128 {
    let n = g.n();
    let mut count = 0;
    for x in 0..n {
        for u in 0..n {
            if !g.has_edge(u, x) {
                continue;
            }
            for v in 0..n {
                if !g.has_edge(v, x) || g.has_edge(u, v) {
                    continue;
                }
                for w in 0..n {
                    if g.has_edge(w, x) && !g.has_edge(u, w) && !g.has_edge(v, w) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Every labeled graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = all_pairs(n);
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p);
        Graph::new(n, edges).unwrap()
    })
}

pub fn binom(k: u128, j: u128) -> u128 {
    if k < j {
        return 0;
    }
    (0..j).fold(1, |acc, i| acc * (k - i) / (i + 1))
}

/// `meeting(g, v)` for every v, listing triangles once by brute force.
pub fn meeting_all(g: &Graph) -> Vec<u128> {
    let n = g.n();
    let mut found = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    found.push([a, b, c]);
                }
            }
        }
    }
    (0..n)
        .map(|v| found.iter().filter(|t| t.iter().any(|&x| x == v || g.has_edge(x, v))).count() as u128)
        .collect()
}
