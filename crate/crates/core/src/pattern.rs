use std::collections::BTreeSet;

/// A `{0, *}` matrix stored as the set of starred positions (0-based).
///
/// Stars are not bounds-checked on construction so that malformed input can
/// be reported by [`crate::system::StructuredSystem::validate`] instead of
/// being rejected piecemeal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsityPattern {
    rows: usize,
    cols: usize,
    stars: BTreeSet<(usize, usize)>,
}

impl SparsityPattern {
    pub fn empty(rows: usize, cols: usize) -> Self {
        SparsityPattern {
            rows,
            cols,
            stars: BTreeSet::new(),
        }
    }

    pub fn from_stars<I>(rows: usize, cols: usize, stars: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        SparsityPattern {
            rows,
            cols,
            stars: stars.into_iter().collect(),
        }
    }

    /// Builds a pattern from 1-based `(row, col)` pairs. Zero indices are
    /// mapped to `usize::MAX` so they surface as out-of-range.
    pub fn from_one_based<I>(rows: usize, cols: usize, stars: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let shift = |k: usize| k.checked_sub(1).unwrap_or(usize::MAX);
        Self::from_stars(rows, cols, stars.into_iter().map(|(r, c)| (shift(r), shift(c))))
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Self::from_stars(
            rows,
            cols,
            (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))),
        )
    }

    pub fn diagonal(n: usize) -> Self {
        Self::from_stars(n, n, (0..n).map(|i| (i, i)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.stars.contains(&(row, col))
    }

    /// Starred positions in row-major order.
    pub fn stars(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.stars.iter().copied()
    }

    pub fn one_based_stars(&self) -> Vec<[usize; 2]> {
        self.stars.iter().map(|&(r, c)| [r + 1, c + 1]).collect()
    }

    pub fn out_of_range(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.stars
            .iter()
            .copied()
            .filter(move |&(r, c)| r >= self.rows || c >= self.cols)
    }

    pub fn transpose(&self) -> Self {
        Self::from_stars(self.cols, self.rows, self.stars.iter().map(|&(r, c)| (c, r)))
    }

    /// Keeps the listed rows and columns, renumbered in the given order.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut row_pos = vec![None; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            row_pos[r] = Some(k);
        }
        let mut col_pos = vec![None; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = Some(k);
        }
        let stars = self.stars.iter().filter_map(|&(r, c)| {
            let nr = *row_pos.get(r)?;
            let nc = *col_pos.get(c)?;
            Some((nr?, nc?))
        });
        Self::from_stars(rows.len(), cols.len(), stars)
    }

    /// Row indices starred in column `col`.
    pub fn column(&self, col: usize) -> impl Iterator<Item = usize> + '_ {
        self.stars
            .iter()
            .filter(move |&&(_, c)| c == col)
            .map(|&(r, _)| r)
    }

    /// Per-column lists of starred rows.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for &(r, c) in &self.stars {
            if c < self.cols {
                cols[c].push(r);
            }
        }
        cols
    }

    /// Per-row lists of starred columns.
    pub fn row_lists(&self) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.rows];
        for &(r, c) in &self.stars {
            if r < self.rows {
                rows[r].push(c);
            }
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_based_round_trip() {
        let p = SparsityPattern::from_one_based(2, 3, [(1, 3), (2, 1), (1, 3)]);
        assert_eq!(p.len(), 2);
        assert!(p.contains(0, 2));
        assert_eq!(p.one_based_stars(), vec![[1, 3], [2, 1]]);
    }

    #[test]
    fn zero_index_is_out_of_range() {
        let p = SparsityPattern::from_one_based(2, 2, [(0, 1)]);
        assert_eq!(p.out_of_range().count(), 1);
    }

    #[test]
    fn restrict_renumbers_in_order() {
        let p = SparsityPattern::from_stars(3, 3, [(0, 0), (1, 2), (2, 1)]);
        let r = p.restrict(&[0, 1, 2], &[2]);
        assert_eq!((r.rows(), r.cols()), (3, 1));
        assert_eq!(r.stars().collect::<Vec<_>>(), vec![(1, 0)]);
        let e = p.restrict(&[0, 1, 2], &[]);
        assert_eq!(e.cols(), 0);
        assert!(e.is_empty());
    }

    #[test]
    fn transpose_swaps_shape() {
        let p = SparsityPattern::from_stars(2, 4, [(0, 3), (1, 0)]);
        let t = p.transpose();
        assert_eq!((t.rows(), t.cols()), (4, 2));
        assert!(t.contains(3, 0) && t.contains(0, 1));
        assert_eq!(t.transpose(), p);
    }
}
