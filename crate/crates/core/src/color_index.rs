//! Combinadic indexing of color sets.
//!
//! A sorted color set `c_1 < c_2 < ... < c_h` drawn from `0..k` maps to
//! `C(c_1, 1) + C(c_2, 2) + ... + C(c_h, h)`, a bijection onto
//! `0..C(k, h)`. Count tables use this index as their column number.

use crate::error::{Error, Result};

/// Largest supported template size / color count.
pub const MAX_COLORS: usize = 20;

#[derive(Clone, Debug)]
pub struct ColorIndexer {
    k: usize,
    /// `binom[a][b] = C(a, b)` for `0 <= a, b <= k`, zero when `b > a`.
    binom: Vec<Vec<u64>>,
}

impl ColorIndexer {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k > MAX_COLORS {
            return Err(Error::Config(format!("color count {k} outside 1..={MAX_COLORS}")));
        }
        let mut binom = vec![vec![0u64; k + 1]; k + 1];
        for a in 0..=k {
            binom[a][0] = 1;
            for b in 1..=a {
                binom[a][b] = binom[a - 1][b - 1] + binom[a - 1][b];
            }
        }
        Ok(ColorIndexer { k, binom })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `C(a, b)`; zero when `b > a`.
    #[inline]
    pub fn binom(&self, a: usize, b: usize) -> usize {
        if b > a {
            0
        } else {
            self.binom[a][b] as usize
        }
    }

    /// Number of color sets of size `h`.
    pub fn set_count(&self, h: usize) -> usize {
        self.binom(self.k, h)
    }

    pub fn index_of(&self, colors: &[usize]) -> Result<usize> {
        if colors.len() > self.k {
            return Err(Error::ColorSet(format!(
                "{} colors exceed k = {}",
                colors.len(),
                self.k
            )));
        }
        let mut index = 0;
        for (i, &c) in colors.iter().enumerate() {
            if c >= self.k {
                return Err(Error::ColorSet(format!("color {c} >= k = {}", self.k)));
            }
            if i > 0 && colors[i - 1] >= c {
                return Err(Error::ColorSet(format!("colors not strictly increasing: {colors:?}")));
            }
            index += self.binom(c, i + 1);
        }
        Ok(index)
    }

    pub fn set_of(&self, index: usize, h: usize) -> Result<Vec<usize>> {
        let count = self.binom(self.k, h);
        if index >= count {
            return Err(Error::ColorSet(format!(
                "index {index} out of range for C({}, {h}) = {count}",
                self.k
            )));
        }
        let mut colors = vec![0; h];
        let mut rest = index;
        let mut upper = self.k;
        // Greedy from the largest position: c_i is the largest c with C(c, i) <= rest.
        for i in (1..=h).rev() {
            let mut c = upper - 1;
            while self.binom(c, i) > rest {
                c -= 1;
            }
            colors[i - 1] = c;
            rest -= self.binom(c, i);
            upper = c;
        }
        Ok(colors)
    }
}

/// Every way of splitting each parent color set between an active and a
/// passive child.
///
/// `pairs` is laid out by parent index: entries
/// `[is * per_parent, (is + 1) * per_parent)` hold `(I_a, I_p)` for parent
/// color set `is`. `by_passive` regroups the same triples by passive index,
/// each group holding `(I_s, I_a)` partners.
#[derive(Clone, Debug)]
pub struct SplitTable {
    pub size: usize,
    pub active_size: usize,
    pub passive_size: usize,
    per_parent: usize,
    pairs: Vec<(u32, u32)>,
    passive_offsets: Vec<usize>,
    passive_partners: Vec<(u32, u32)>,
}

impl SplitTable {
    pub fn build(indexer: &ColorIndexer, size: usize, active_size: usize) -> Result<Self> {
        if active_size == 0 || active_size >= size || size > indexer.k() {
            return Err(Error::InvalidSplit(format!(
                "active child of size {active_size} in a sub-template of size {size} (k = {})",
                indexer.k()
            )));
        }
        let k = indexer.k();
        let passive_size = size - active_size;
        let parents = indexer.set_count(size);
        let per_parent = indexer.binom(size, active_size);
        // Positions within a parent set, enumerated with the same combinadic order.
        let local = ColorIndexer::new(size)?;
        let position_sets: Vec<Vec<usize>> = (0..per_parent)
            .map(|j| local.set_of(j, active_size))
            .collect::<Result<_>>()?;

        let mut pairs = Vec::with_capacity(parents * per_parent);
        let mut active = Vec::with_capacity(active_size);
        let mut passive = Vec::with_capacity(passive_size);
        for is in 0..parents {
            let parent = indexer.set_of(is, size)?;
            for positions in &position_sets {
                active.clear();
                passive.clear();
                let mut next = positions.iter().peekable();
                for (pos, &c) in parent.iter().enumerate() {
                    if next.peek() == Some(&&pos) {
                        next.next();
                        active.push(c);
                    } else {
                        passive.push(c);
                    }
                }
                let ia = indexer.index_of(&active)?;
                let ip = indexer.index_of(&passive)?;
                pairs.push((ia as u32, ip as u32));
            }
        }

        let passive_cols = indexer.set_count(passive_size);
        let mut counts = vec![0usize; passive_cols + 1];
        for &(_, ip) in &pairs {
            counts[ip as usize + 1] += 1;
        }
        for i in 0..passive_cols {
            counts[i + 1] += counts[i];
        }
        let passive_offsets = counts.clone();
        let mut fill = counts;
        let mut passive_partners = vec![(0u32, 0u32); pairs.len()];
        for (slot, &(ia, ip)) in pairs.iter().enumerate() {
            let is = (slot / per_parent) as u32;
            passive_partners[fill[ip as usize]] = (is, ia);
            fill[ip as usize] += 1;
        }
        debug_assert!((0..passive_cols)
            .all(|ip| passive_offsets[ip + 1] - passive_offsets[ip]
                == indexer.binom(k - passive_size, size - passive_size)));

        Ok(SplitTable {
            size,
            active_size,
            passive_size,
            per_parent,
            pairs,
            passive_offsets,
            passive_partners,
        })
    }

    pub fn parent_count(&self) -> usize {
        self.pairs.len() / self.per_parent
    }

    pub fn passive_count(&self) -> usize {
        self.passive_offsets.len() - 1
    }

    /// Splits per parent color set, `C(|T_s|, |T_{s,a}|)`.
    pub fn splits_per_parent(&self) -> usize {
        self.per_parent
    }

    pub fn total_splits(&self) -> usize {
        self.pairs.len()
    }

    /// `(I_a, I_p)` pairs for parent color set `is`.
    #[inline]
    pub fn splits(&self, is: usize) -> &[(u32, u32)] {
        &self.pairs[is * self.per_parent..(is + 1) * self.per_parent]
    }

    /// `(I_s, I_a)` partners sharing passive color set `ip`, in ascending `I_s`.
    #[inline]
    pub fn passive_group(&self, ip: usize) -> &[(u32, u32)] {
        &self.passive_partners[self.passive_offsets[ip]..self.passive_offsets[ip + 1]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn index_examples() {
        let ix = ColorIndexer::new(3).unwrap();
        assert_eq!(ix.index_of(&[0, 1]).unwrap(), 0);
        assert_eq!(ix.index_of(&[0, 2]).unwrap(), 1);
        assert_eq!(ix.index_of(&[1, 2]).unwrap(), 2);
        assert_eq!(ix.set_of(0, 2).unwrap(), vec![0, 1]);
        assert_eq!(ix.set_of(2, 2).unwrap(), vec![1, 2]);
        assert_eq!(ix.index_of(&[]).unwrap(), 0);
        assert_eq!(ix.set_of(0, 0).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn top_set_is_last_index() {
        for k in 1..=MAX_COLORS {
            let ix = ColorIndexer::new(k).unwrap();
            for h in 0..=k {
                let top: Vec<usize> = (k - h..k).collect();
                assert_eq!(ix.set_of(ix.set_count(h) - 1, h).unwrap(), top);
            }
        }
    }

    #[test]
    fn contract_violations() {
        let ix = ColorIndexer::new(4).unwrap();
        assert!(ix.index_of(&[2, 1]).is_err());
        assert!(ix.index_of(&[1, 1]).is_err());
        assert!(ix.index_of(&[0, 4]).is_err());
        assert!(ix.set_of(6, 2).is_err());
        assert!(ColorIndexer::new(0).is_err());
        assert!(ColorIndexer::new(MAX_COLORS + 1).is_err());
    }

    #[test]
    fn binomials_are_exact_at_max_k() {
        let ix = ColorIndexer::new(MAX_COLORS).unwrap();
        assert_eq!(ix.binom(20, 10), 184_756);
        assert_eq!(ix.binom(3, 5), 0);
    }

    #[test]
    fn split_table_example() {
        let ix = ColorIndexer::new(3).unwrap();
        let st = SplitTable::build(&ix, 2, 1).unwrap();
        assert_eq!(st.splits(0), &[(0, 1), (1, 0)]);
        assert_eq!(st.splits_per_parent(), 2);
        // Passive {0} pairs with parents {0,1} (I_s = 0) and {0,2} (I_s = 1).
        let group = st.passive_group(0);
        assert_eq!(group.len(), 2);
        assert_eq!(group.iter().map(|&(is, _)| is).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(st.passive_count(), 3);
    }

    #[test]
    fn split_rejects_empty_passive() {
        let ix = ColorIndexer::new(3).unwrap();
        assert!(SplitTable::build(&ix, 2, 2).is_err());
        assert!(SplitTable::build(&ix, 2, 0).is_err());
        assert!(SplitTable::build(&ix, 4, 1).is_err());
    }

    #[test]
    fn bijective_for_small_k() {
        for k in 1..=12 {
            let ix = ColorIndexer::new(k).unwrap();
            let mut seen: Vec<Vec<bool>> = (0..=k).map(|h| vec![false; ix.set_count(h)]).collect();
            for mask in 0u32..(1 << k) {
                let set: Vec<usize> = (0..k).filter(|&c| mask >> c & 1 == 1).collect();
                let h = set.len();
                let i = ix.index_of(&set).unwrap();
                assert!(!seen[h][i], "index {i} repeated for k={k} h={h}");
                seen[h][i] = true;
                assert_eq!(ix.set_of(i, h).unwrap(), set);
            }
            assert!(seen.iter().flatten().all(|&s| s));
        }
    }

    proptest! {
        #[test]
        fn splits_are_consistent(k in 2usize..=9, size_pick in 0usize..100, active_pick in 0usize..100) {
            let size = 2 + size_pick % (k - 1);
            let active = 1 + active_pick % (size - 1);
            let ix = ColorIndexer::new(k).unwrap();
            let st = SplitTable::build(&ix, size, active).unwrap();
            prop_assert_eq!(st.parent_count(), ix.binom(k, size));
            let l = ix.binom(k - (size - active), active);
            for is in 0..st.parent_count() {
                let parent = ix.set_of(is, size).unwrap();
                prop_assert_eq!(st.splits(is).len(), ix.binom(size, active));
                for &(ia, ip) in st.splits(is) {
                    let a = ix.set_of(ia as usize, active).unwrap();
                    let p = ix.set_of(ip as usize, size - active).unwrap();
                    prop_assert!(a.iter().all(|c| !p.contains(c)));
                    let mut union: Vec<usize> = a.iter().chain(&p).copied().collect();
                    union.sort_unstable();
                    prop_assert_eq!(&union, &parent);
                }
            }
            for ip in 0..st.passive_count() {
                let group = st.passive_group(ip);
                prop_assert_eq!(group.len(), l);
                for &(is, ia) in group {
                    prop_assert!(st.splits(is as usize).contains(&(ia, ip as u32)));
                }
            }
        }
    }
}
