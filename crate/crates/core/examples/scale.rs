//! Times triangle counting and peeling on large seeded random graphs.
//!
//! `cargo run --release -p trident-core --example scale -- [n_count] [n_peel]`

use std::time::Instant;

use trident::enumerator::random_bounded_graph;
use trident::{count_triangles, peel, verify_certificate};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n_count = args.next().unwrap_or(1_000_000);
    let n_peel = args.next().unwrap_or(10_000);

    let start = Instant::now();
    let g = random_bounded_graph(n_count, 16, 0);
    println!("generated n={} m={} in {:.2?}", g.n(), g.edge_count(), start.elapsed());
    let start = Instant::now();
    let t = count_triangles(&g).unwrap();
    println!("triangles={t} in {:.2?}", start.elapsed());

    let g = random_bounded_graph(n_peel, 16, 0);
    let start = Instant::now();
    let cert = peel(&g, 16).unwrap();
    println!(
        "peel n={} steps={} total={} bound={} in {:.2?}",
        g.n(),
        cert.steps.len(),
        cert.totals.total_triangles,
        cert.header.bound,
        start.elapsed()
    );
    let start = Instant::now();
    let verdict = verify_certificate(&g, &cert);
    println!("verify valid={} in {:.2?}", verdict.is_valid(), start.elapsed());
}
