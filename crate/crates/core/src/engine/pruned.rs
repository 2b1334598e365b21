//! Pruned evaluation: each passive column's neighbor sums are computed once
//! (through a |V| buffer, written back over the passive table) and then
//! shared by every split that uses that passive color set.

use super::{Counters, Engine};
use crate::color_index::SplitTable;
use crate::graph::Graph;
use crate::kernels::{row_ranges, split_block, split_rows};
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
    let mut counters = Counters::default();

    let mut buf = vec![0.0f64; n];
    for ip in 0..passive.cols() {
        let column = passive.column(ip);
        let parts: Vec<_> = ranges.iter().cloned().zip(split_rows(&mut buf, &ranges)).collect();
        engine.run_parts(parts, |(range, piece)| {
            for (slot, i) in piece.iter_mut().zip(range) {
                *slot = graph.neighbors(i).iter().fold(0.0, |acc, &j| acc + column[j]);
            }
            Counters::default()
        });
        passive.column_mut(ip).copy_from_slice(&buf);
        counters.neighbor_traversals += n as u64;
        counters.edge_visits += nnz;
        counters.flops += nnz;
    }

    let passive = &*passive;
    let mut blocks = split_block(out.values_mut(), n, &ranges);
    for ip in 0..passive.cols() {
        let group = split.passive_group(ip);
        let sums = passive.column(ip);
        let parts: Vec<_> = blocks.iter_mut().collect();
        engine.run_parts(parts, |block| {
            let start = block.row_start;
            for &(is, ia) in group {
                let a = active.column(ia as usize);
                let dst = &mut block.columns[is as usize];
                for (r, slot) in dst.iter_mut().enumerate() {
                    *slot += a[start + r] * sums[start + r];
                }
            }
            Counters::default()
        });
        counters.flops += 2 * (group.len() * n) as u64;
    }
    counters
}
