//! Sparse adjacency x dense block products and element-wise
//! multiply-accumulate, the two kernels behind the vectorized engine.
//!
//! Kernels never spawn work themselves. Callers split the row space with
//! [`row_ranges`] and hand each worker the matching output views.

use std::ops::Range;

use crate::graph::Csc;
use crate::table::CountTable;

/// Row-major `rows x width` staging buffer holding a batch of table columns,
/// so that one neighbor's values for the whole batch sit contiguously.
#[derive(Clone, Debug)]
pub struct BatchBuffer {
    rows: usize,
    width: usize,
    data: Vec<f64>,
}

impl BatchBuffer {
    pub fn with_capacity(rows: usize, max_width: usize) -> Self {
        BatchBuffer {
            rows,
            width: 0,
            data: Vec::with_capacity(rows * max_width),
        }
    }

    pub fn from_row_major(rows: usize, width: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * width, "buffer shape mismatch");
        BatchBuffer { rows, width, data }
    }

    /// Copies columns `first..first + width` of a column-major table.
    pub fn load(&mut self, table: &CountTable, first: usize, width: usize) {
        assert_eq!(table.rows(), self.rows);
        assert!(first + width <= table.cols());
        self.width = width;
        self.data.clear();
        self.data.resize(self.rows * width, 0.0);
        for z in 0..width {
            let col = table.column(first + z);
            for (i, &v) in col.iter().enumerate() {
                self.data[i * width + z] = v;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }
}

/// Mutable view of rows `row_start..row_start + len` across a run of
/// consecutive columns of a column-major table.
#[derive(Debug)]
pub struct ColumnBlockMut<'a> {
    pub row_start: usize,
    pub columns: Vec<&'a mut [f64]>,
}

impl ColumnBlockMut<'_> {
    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn row_count(&self) -> usize {
        self.columns.first().map_or(0, |c| c.len())
    }
}

/// Splits `0..n` into `parts` contiguous, nearly equal ranges (fewer when
/// `n < parts`; always at least one).
pub fn row_ranges(n: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.clamp(1, n.max(1));
    let base = n / parts;
    let extra = n % parts;
    let mut start = 0;
    (0..parts)
        .map(|p| {
            let len = base + usize::from(p < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// Cuts a single column into the given contiguous row ranges.
pub fn split_rows<'a>(mut column: &'a mut [f64], ranges: &[Range<usize>]) -> Vec<&'a mut [f64]> {
    let mut out = Vec::with_capacity(ranges.len());
    for r in ranges {
        let (head, tail) = std::mem::take(&mut column).split_at_mut(r.len());
        out.push(head);
        column = tail;
    }
    out
}

/// Cuts a contiguous column-major block (`data.len() / rows` columns) into
/// one [`ColumnBlockMut`] per row range.
pub fn split_block<'a>(data: &'a mut [f64], rows: usize, ranges: &[Range<usize>]) -> Vec<ColumnBlockMut<'a>> {
    let mut blocks: Vec<ColumnBlockMut<'a>> = ranges
        .iter()
        .map(|r| ColumnBlockMut {
            row_start: r.start,
            columns: Vec::new(),
        })
        .collect();
    if rows == 0 {
        return blocks;
    }
    for column in data.chunks_mut(rows) {
        for (block, piece) in blocks.iter_mut().zip(split_rows(column, ranges)) {
            block.columns.push(piece);
        }
    }
    blocks
}

/// `Y(i, z) = sum over j in N(i) of X(j, z)` for the rows covered by `y`.
///
/// `A` is symmetric, so column `i` of the CSC matrix lists the neighbors of
/// row `i`; each row gathers its neighbors in ascending id order.
pub fn spmm_csc(a: &Csc, x: &BatchBuffer, y: &mut ColumnBlockMut<'_>) {
    let width = x.width();
    assert_eq!(x.rows(), a.n(), "X row count must match A");
    assert_eq!(y.width(), width, "X and Y batch widths differ");
    let len = y.row_count();
    assert!(y.row_start + len <= a.n(), "Y rows exceed A");
    match width {
        16 => spmm_fixed::<16>(a, x, y),
        8 => spmm_fixed::<8>(a, x, y),
        4 => spmm_fixed::<4>(a, x, y),
        _ => spmm_any(a, x, y),
    }
}

fn spmm_fixed<const W: usize>(a: &Csc, x: &BatchBuffer, y: &mut ColumnBlockMut<'_>) {
    for r in 0..y.row_count() {
        let mut acc = [0.0f64; W];
        for &j in a.column(y.row_start + r) {
            let row: &[f64; W] = x.row(j).try_into().expect("batch width");
            for z in 0..W {
                acc[z] += row[z];
            }
        }
        for (col, &s) in y.columns.iter_mut().zip(&acc) {
            col[r] = s;
        }
    }
}

fn spmm_any(a: &Csc, x: &BatchBuffer, y: &mut ColumnBlockMut<'_>) {
    let mut acc = vec![0.0f64; x.width()];
    for r in 0..y.row_count() {
        acc.fill(0.0);
        for &j in a.column(y.row_start + r) {
            for (s, &v) in acc.iter_mut().zip(x.row(j)) {
                *s += v;
            }
        }
        for (col, &s) in y.columns.iter_mut().zip(&acc) {
            col[r] = s;
        }
    }
}

/// `out(i) += a(i) * p(i)`.
#[inline]
pub fn ema(out: &mut [f64], a: &[f64], p: &[f64]) {
    assert!(
        out.len() == a.len() && a.len() == p.len(),
        "ema length mismatch: {} / {} / {}",
        out.len(),
        a.len(),
        p.len()
    );
    for ((o, &x), &y) in out.iter_mut().zip(a).zip(p) {
        *o += x * y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use proptest::prelude::*;

    fn spmm_full(g: &Graph, x: &BatchBuffer) -> Vec<Vec<f64>> {
        let n = g.n();
        let mut out = vec![0.0; n * x.width()];
        let ranges = row_ranges(n, 3);
        for mut block in split_block(&mut out, n, &ranges) {
            spmm_csc(g.csc(), x, &mut block);
        }
        out.chunks(n).map(<[f64]>::to_vec).collect()
    }

    #[test]
    fn spmm_examples() {
        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        let x = BatchBuffer::from_row_major(2, 1, vec![1.0, 2.0]);
        assert_eq!(spmm_full(&edge, &x), vec![vec![2.0, 1.0]]);

        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let x = BatchBuffer::from_row_major(3, 1, vec![1.0, 2.0, 3.0]);
        assert_eq!(spmm_full(&k3, &x), vec![vec![5.0, 4.0, 3.0]]);

        let x = BatchBuffer::from_row_major(3, 2, vec![0.0; 6]);
        assert_eq!(spmm_full(&k3, &x), vec![vec![0.0; 3]; 2]);
    }

    #[test]
    fn ema_examples() {
        let mut out = vec![0.0, 0.0];
        ema(&mut out, &[1.0, 2.0], &[3.0, 4.0]);
        assert_eq!(out, vec![3.0, 8.0]);
        ema(&mut out, &[1.0, 2.0], &[0.0, 0.0]);
        assert_eq!(out, vec![3.0, 8.0]);
        ema(&mut out, &[1.0, 2.0], &[3.0, 4.0]);
        assert_eq!(out, vec![6.0, 16.0]);
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn ema_rejects_mismatch() {
        ema(&mut [0.0; 2], &[1.0], &[1.0, 2.0]);
    }

    #[test]
    #[should_panic(expected = "widths differ")]
    fn spmm_rejects_mismatch() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let x = BatchBuffer::from_row_major(2, 2, vec![0.0; 4]);
        let mut out = vec![0.0; 2];
        let mut blocks = split_block(&mut out, 2, &row_ranges(2, 1));
        spmm_csc(g.csc(), &x, &mut blocks[0]);
    }

    #[test]
    fn row_ranges_cover_exactly() {
        for n in 0..20 {
            for parts in 1..10 {
                let r = row_ranges(n, parts);
                assert!(!r.is_empty());
                assert_eq!(r[0].start, 0);
                assert_eq!(r.last().unwrap().end, n);
                assert!(r.windows(2).all(|w| w[0].end == w[1].start));
                let lens: Vec<usize> = r.iter().map(|x| x.len()).collect();
                assert!(lens.iter().max().unwrap() - lens.iter().min().unwrap() <= 1);
            }
        }
    }

    #[test]
    fn degree_vector_from_ones() {
        let g = Graph::from_edges(6, [(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (1, 2)]).unwrap();
        let x = BatchBuffer::from_row_major(6, 1, vec![1.0; 6]);
        let y = spmm_full(&g, &x);
        let degrees: Vec<f64> = (0..6).map(|v| g.degree(v) as f64).collect();
        assert_eq!(y[0], degrees);
    }

    proptest! {
        #[test]
        fn ema_is_commutative_and_linear(
            cols in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0, 0.0f64..10.0), 1..50),
            scale in 0.5f64..4.0,
        ) {
            let a: Vec<f64> = cols.iter().map(|c| c.0).collect();
            let p: Vec<f64> = cols.iter().map(|c| c.1).collect();
            let q: Vec<f64> = cols.iter().map(|c| c.2).collect();
            let n = a.len();

            let mut ap = vec![0.0; n];
            let mut pa = vec![0.0; n];
            ema(&mut ap, &a, &p);
            ema(&mut pa, &p, &a);
            prop_assert_eq!(&ap, &pa);

            let sum: Vec<f64> = p.iter().zip(&q).map(|(x, y)| x + y).collect();
            let mut lhs = vec![0.0; n];
            ema(&mut lhs, &a, &sum);
            let mut rhs = vec![0.0; n];
            ema(&mut rhs, &a, &p);
            ema(&mut rhs, &a, &q);
            for (l, r) in lhs.iter().zip(&rhs) {
                prop_assert!((l - r).abs() <= 1e-12 * l.abs().max(1.0));
            }

            let scaled: Vec<f64> = a.iter().map(|x| x * scale).collect();
            let mut s1 = vec![0.0; n];
            ema(&mut s1, &scaled, &p);
            for (s, base) in s1.iter().zip(&ap) {
                prop_assert!((s - scale * base).abs() <= 1e-12 * s.abs().max(1.0));
            }
        }
    }
}
