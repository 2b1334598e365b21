//! Linear-algebra evaluation: passive neighbor sums as batched
//! adjacency x dense-block products, accumulation as one element-wise
//! multiply-accumulate per (parent, active, passive) color triple.

use super::{Counters, Engine};
use crate::color_index::SplitTable;
use crate::graph::Graph;
use crate::kernels::{ema, row_ranges, split_block, split_rows, BatchBuffer};
use crate::table::CountTable;

pub(super) fn compute(
    engine: &Engine,
    graph: &Graph,
    split: &SplitTable,
    active: &CountTable,
    passive: &mut CountTable,
    out: &mut CountTable,
) -> Counters {
    let n = graph.n();
    let nnz = 2 * graph.m() as u64;
    let ranges = row_ranges(n, engine.config().workers);
    let passive_cols = passive.cols();
    let batch = engine.config().batch.clamp(1, passive_cols);
    let mut counters = Counters::default();

    let mut buf = BatchBuffer::with_capacity(n, batch);
    for first in (0..passive_cols).step_by(batch) {
        let width = batch.min(passive_cols - first);
        buf.load(passive, first, width);
        let block = &mut passive.values_mut()[first * n..(first + width) * n];
        let buf = &buf;
        engine.run_parts(split_block(block, n, &ranges), |mut y| {
            crate::kernels::spmm_csc(graph.csc(), buf, &mut y);
            Counters::default()
        });
        counters.neighbor_traversals += (width * n) as u64;
        counters.edge_visits += width as u64 * nnz;
        counters.flops += width as u64 * nnz;
    }

    let passive = &*passive;
    for ip in 0..passive_cols {
        let p = passive.column(ip);
        for &(is, ia) in split.passive_group(ip) {
            let a = active.column(ia as usize);
            let dst = out.column_mut(is as usize);
            if ranges.len() == 1 {
                ema(dst, a, p);
            } else {
                let parts: Vec<_> = ranges.iter().cloned().zip(split_rows(dst, &ranges)).collect();
                engine.run_parts(parts, |(range, piece)| {
                    ema(piece, &a[range.clone()], &p[range]);
                    Counters::default()
                });
            }
            counters.flops += 2 * n as u64;
        }
    }
    counters
}
