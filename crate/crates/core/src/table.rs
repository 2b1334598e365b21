//! Dense count tables, vertex colorings and the memory budget estimate.
//!
//! Colorings are drawn from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`; colors are `gen_range(0..k)` in vertex order.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::template::PartitionPlan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    RowMajor,
    ColumnMajor,
}

/// `rows x cols` table of colorful rooted counts for one sub-template.
#[derive(Clone, Debug, PartialEq)]
pub struct CountTable {
    pub node: usize,
    rows: usize,
    cols: usize,
    layout: Layout,
    values: Vec<f64>,
}

impl CountTable {
    pub fn zeros(node: usize, rows: usize, cols: usize, layout: Layout) -> Self {
        CountTable {
            node,
            rows,
            cols,
            layout,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    #[inline]
    fn offset(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.rows && col < self.cols);
        match self.layout {
            Layout::RowMajor => row * self.cols + col,
            Layout::ColumnMajor => col * self.rows + row,
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[self.offset(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        let at = self.offset(row, col);
        self.values[at] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Contiguous column; column-major tables only.
    #[inline]
    pub fn column(&self, col: usize) -> &[f64] {
        assert_eq!(self.layout, Layout::ColumnMajor);
        &self.values[col * self.rows..(col + 1) * self.rows]
    }

    #[inline]
    pub fn column_mut(&mut self, col: usize) -> &mut [f64] {
        assert_eq!(self.layout, Layout::ColumnMajor);
        &mut self.values[col * self.rows..(col + 1) * self.rows]
    }

    /// Contiguous row; row-major tables only.
    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        assert_eq!(self.layout, Layout::RowMajor);
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn all_finite_non_negative(&self) -> bool {
        self.values.iter().all(|v| v.is_finite() && *v >= 0.0)
    }

    /// Debug dump as `vertex,column,value` lines. Zero entries are skipped.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["vertex", "column", "value"])?;
        for row in 0..self.rows {
            for col in 0..self.cols {
                let v = self.get(row, col);
                if v != 0.0 {
                    w.write_record([row.to_string(), col.to_string(), v.to_string()])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<u8>,
    pub seed: u64,
}

impl Coloring {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

pub fn random_coloring(n: usize, k: usize, seed: u64) -> Coloring {
    assert!((1..=u8::MAX as usize).contains(&k), "k = {k} colors");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors = (0..n).map(|_| rng.random_range(0..k) as u8).collect();
    Coloring { colors, seed }
}

/// Leaf table: entry `(i, c)` is 1 iff vertex `i` has color `c`.
pub fn init_leaf_table(node: usize, coloring: &Coloring, k: usize, layout: Layout) -> CountTable {
    let mut table = CountTable::zeros(node, coloring.len(), k, layout);
    for (i, &c) in coloring.colors.iter().enumerate() {
        debug_assert!((c as usize) < k);
        table.set(i, c as usize, 1.0);
    }
    table
}

fn binom(a: usize, b: usize) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1u64, |acc, i| acc * (a - i) as u64 / (i + 1) as u64)
}

/// Peak bytes of simultaneously live count tables for one iteration.
///
/// Tables are allocated when their node is reached in `dp_order` and freed
/// right after their parent is computed; while computing a parent both
/// children and the parent table are live.
pub fn estimate_bytes(plan: &PartitionPlan, n: usize, k: usize) -> u64 {
    let cols = |id: usize| binom(k, plan.node(id).size());
    let mut live = 0u64;
    let mut peak = 0u64;
    for &id in &plan.dp_order {
        live += cols(id);
        peak = peak.max(live);
        let node = plan.node(id);
        for child in [node.active, node.passive].into_iter().flatten() {
            live -= cols(child);
        }
    }
    8 * n as u64 * peak
}
