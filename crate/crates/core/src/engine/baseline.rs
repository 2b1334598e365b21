//! Vertex-centric evaluation with row-major tables: for every vertex, every
//! parent color set and every split, walk the neighbor list.

use super::{Counters, Engine};
use crate::color_index::SplitTable;
use crate::graph::Graph;
use crate::kernels::row_ranges;
use crate::table::CountTable;

pub(super) fn compute(
    engine: &Engine,
    graph: &Graph,
    split: &SplitTable,
    active: &CountTable,
    passive: &CountTable,
    out: &mut CountTable,
) -> Counters {
    let n = graph.n();
    let cols = out.cols();
    let passive_cols = passive.cols();
    let splits_per_row = (cols * split.splits_per_parent()) as u64;
    let passive_values = passive.values();

    let ranges = row_ranges(n, engine.config().workers);
    let mut parts = Vec::with_capacity(ranges.len());
    let mut rest = out.values_mut();
    for range in ranges {
        let (chunk, tail) = std::mem::take(&mut rest).split_at_mut(range.len() * cols);
        parts.push((range, chunk));
        rest = tail;
    }

    engine.run_parts(parts, |(range, chunk)| {
        let mut counters = Counters::default();
        for (r, i) in range.enumerate() {
            let row_out = &mut chunk[r * cols..(r + 1) * cols];
            let active_row = active.row(i);
            let nbrs = graph.neighbors(i);
            for (is, slot) in row_out.iter_mut().enumerate() {
                let mut sum = 0.0;
                for &(ia, ip) in split.splits(is) {
                    let a = active_row[ia as usize];
                    let ip = ip as usize;
                    for &j in nbrs {
                        sum += a * passive_values[j * passive_cols + ip];
                    }
                }
                *slot = sum;
            }
            let deg = nbrs.len() as u64;
            counters.neighbor_traversals += splits_per_row;
            counters.edge_visits += splits_per_row * deg;
            counters.flops += 2 * splits_per_row * deg;
        }
        counters
    })
}
