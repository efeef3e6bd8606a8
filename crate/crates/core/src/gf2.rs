//! Bit-packed linear algebra over `F_2`.
//!
//! Rows pivot on their lowest set bit. [`IncrementalSpan`] keeps its rows in reduced
//! echelon form, so reducing a vector costs one XOR per pivot bit it contains.

use std::fmt;

use crate::{Error, Result};

const BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(BITS)
}

/// A bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in indices {
            row.flip(i);
        }
        row
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
        )
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / BITS] >> (i % BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % BITS);
        if value {
            self.words[i / BITS] |= mask;
        } else {
            self.words[i / BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / BITS] ^= 1u64 << (i % BITS);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.next_one(0)
    }

    /// Lowest set bit at position `>= from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut w = from / BITS;
        let mut word = self.words[w] & (!0u64 << (from % BITS));
        loop {
            if word != 0 {
                return Some(w * BITS + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * BITS + bit)
            })
        })
    }

    /// Grows to `len` bits, padding with zeros.
    pub fn resize(&mut self, len: usize) {
        assert!(len >= self.len);
        self.words.resize(words_for(len), 0);
        self.len = len;
    }

    pub fn dot(&self, other: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Concatenation `self | other`.
    pub fn concat(&self, other: &BitRow) -> BitRow {
        let mut out = BitRow::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Bits `start..end` as a new row.
    pub fn slice(&self, start: usize, end: usize) -> BitRow {
        BitRow::from_indices(
            end - start,
            self.ones()
                .skip_while(|&i| i < start)
                .take_while(|&i| i < end)
                .map(|i| i - start),
        )
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

/// A dense matrix over `F_2` stored by rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    rows: Vec<BitRow>,
    ncols: usize,
}

impl Gf2Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            rows: vec![BitRow::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitRow>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {ncols} columns",
                r.len()
            )));
        }
        Ok(Self { rows, ncols })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(nrows: usize, columns: &[BitRow]) -> Result<Self> {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != nrows {
                return Err(Error::Dimension(format!(
                    "column of length {} in a matrix with {nrows} rows",
                    col.len()
                )));
            }
            for i in col.ones() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitRow> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn push_row(&mut self, row: BitRow) -> Result<()> {
        if row.len() != self.ncols {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {} columns",
                row.len(),
                self.ncols
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.ncols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.ncols != other.nrows() {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = BitRow::zeros(other.ncols);
                for k in row.ones() {
                    out.xor_assign(&other.rows[k]);
                }
                out
            })
            .collect();
        Ok(Gf2Matrix {
            rows,
            ncols: other.ncols,
        })
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &BitRow) -> Result<BitRow> {
        if v.len() != self.ncols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.ncols
            )));
        }
        Ok(BitRow::from_bools(
            &self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>(),
        ))
    }

    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.nrows() != other.nrows() || self.ncols != other.ncols {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
        Ok(out)
    }

    /// Brings the matrix to reduced row echelon form in place, dropping zero rows.
    /// Returns the pivot column of each remaining row, strictly increasing.
    pub fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut top = 0;
        let words = words_for(self.ncols);
        for w in 0..words {
            for b in 0..BITS {
                let col = w * BITS + b;
                if col >= self.ncols || top == self.rows.len() {
                    break;
                }
                let mask = 1u64 << b;
                let Some(found) = (top..self.rows.len()).find(|&i| self.rows[i].words[w] & mask != 0)
                else {
                    continue;
                };
                self.rows.swap(top, found);
                let (head, tail) = self.rows.split_at_mut(top);
                let (pivot, rest) = tail.split_first_mut().unwrap();
                for row in head.iter_mut().chain(rest.iter_mut()) {
                    if row.words[w] & mask != 0 {
                        for (a, p) in row.words[w..].iter_mut().zip(&pivot.words[w..]) {
                            *a ^= p;
                        }
                    }
                }
                pivots.push(col);
                top += 1;
            }
        }
        self.rows.truncate(top);
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Basis of `{ v : M v = 0 }`.
    pub fn kernel(&self) -> Vec<BitRow> {
        let mut m = self.clone();
        let pivots = m.reduce();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitRow::zeros(self.ncols);
                v.set(f, true);
                for (row, &p) in m.rows.iter().zip(&pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// Rank of the span of `rows`.
pub fn rank_of(ncols: usize, rows: &[BitRow]) -> usize {
    Gf2Matrix {
        rows: rows.to_vec(),
        ncols,
    }
    .reduce()
    .len()
}

/// Basis of the intersection of the row spaces of `a` and `b`.
pub fn intersect(ncols: usize, a: &[BitRow], b: &[BitRow]) -> Result<Vec<BitRow>> {
    if a.iter().chain(b).any(|r| r.len() != ncols) {
        return Err(Error::Dimension("rows of different lengths".into()));
    }
    // Zassenhaus: reduce [a | a] and [b | 0]; rows with vanishing left half span A ∩ B.
    let zero = BitRow::zeros(ncols);
    let rows: Vec<BitRow> = a
        .iter()
        .map(|r| r.concat(r))
        .chain(b.iter().map(|r| r.concat(&zero)))
        .collect();
    let mut m = Gf2Matrix::from_rows(2 * ncols, rows)?;
    let pivots = m.reduce();
    Ok(m.rows
        .iter()
        .zip(&pivots)
        .filter(|(_, &p)| p >= ncols)
        .map(|(r, _)| r.slice(ncols, 2 * ncols))
        .collect())
}

/// A growing subspace of `F_2^ncols` in reduced echelon form.
///
/// With tracking enabled each echelon row carries the combination of inserted vectors
/// that produces it.
#[derive(Clone)]
pub struct IncrementalSpan {
    ncols: usize,
    rows: Vec<BitRow>,
    pivots: Vec<usize>,
    row_of_pivot: Vec<u32>,
    pivot_mask: BitRow,
    combos: Option<Vec<BitRow>>,
    inserted: usize,
}

const NO_ROW: u32 = u32::MAX;

impl IncrementalSpan {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_pivot: vec![NO_ROW; ncols],
            pivot_mask: BitRow::zeros(ncols),
            combos: None,
            inserted: 0,
        }
    }

    pub fn with_tracking(ncols: usize) -> Self {
        Self {
            combos: Some(Vec::new()),
            ..Self::new(ncols)
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors inserted so far.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn is_tracking(&self) -> bool {
        self.combos.is_some()
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    #[inline]
    pub fn is_pivot(&self, col: usize) -> bool {
        self.row_of_pivot[col] != NO_ROW
    }

    /// The echelon row whose pivot is `col`.
    pub fn pivot_row(&self, col: usize) -> Option<&BitRow> {
        match self.row_of_pivot[col] {
            NO_ROW => None,
            r => Some(&self.rows[r as usize]),
        }
    }

    fn check(&self, v: &BitRow) -> Result<()> {
        if v.len() != self.ncols {
            Err(Error::Dimension(format!(
                "vector of length {} in a span of {} columns",
                v.len(),
                self.ncols
            )))
        } else {
            Ok(())
        }
    }

    /// Clears every pivot bit of `v`. Returns the echelon rows used.
    fn eliminate(&self, v: &mut BitRow) -> Vec<u32> {
        let mut used = Vec::new();
        for w in 0..v.words.len() {
            let mut hits = v.words[w] & self.pivot_mask.words[w];
            while hits != 0 {
                let col = w * BITS + hits.trailing_zeros() as usize;
                hits &= hits - 1;
                let r = self.row_of_pivot[col];
                v.xor_assign(&self.rows[r as usize]);
                used.push(r);
            }
        }
        used
    }

    /// Inserts `v`. Returns the new pivot column if the rank grew.
    pub fn insert(&mut self, v: BitRow) -> Result<Option<usize>> {
        self.check(&v)?;
        let index = self.inserted;
        self.inserted += 1;
        let mut v = v;
        let used = self.eliminate(&mut v);
        let Some(pivot) = v.first_one() else {
            return Ok(None);
        };
        let mut combo = self.combos.as_ref().map(|combos| {
            let mut c = BitRow::zeros(self.inserted);
            for &r in &used {
                let mut prev = combos[r as usize].clone();
                prev.resize(self.inserted);
                c.xor_assign(&prev);
            }
            c.flip(index);
            c
        });
        // keep the echelon reduced: clear the new pivot from earlier rows
        let w = pivot / BITS;
        let mask = 1u64 << (pivot % BITS);
        for (r, row) in self.rows.iter_mut().enumerate() {
            if row.words[w] & mask != 0 {
                row.xor_assign(&v);
                if let (Some(combos), Some(c)) = (self.combos.as_mut(), combo.as_mut()) {
                    let rc = &mut combos[r];
                    rc.resize(self.inserted);
                    rc.xor_assign(c);
                }
            }
        }
        self.row_of_pivot[pivot] = self.rows.len() as u32;
        self.pivot_mask.set(pivot, true);
        self.pivots.push(pivot);
        self.rows.push(v);
        if let (Some(combos), Some(c)) = (self.combos.as_mut(), combo.take()) {
            combos.push(c);
        }
        Ok(Some(pivot))
    }

    /// Writes `v = residual + element of the span`. The residual has no pivot bits. The
    /// combination, when tracking, lists the inserted vectors summing to that element.
    pub fn reduce_vector(&self, v: &BitRow) -> Result<(BitRow, Option<BitRow>)> {
        self.check(v)?;
        let mut residual = v.clone();
        let used = self.eliminate(&mut residual);
        let combo = self.combos.as_ref().map(|combos| {
            let mut c = BitRow::zeros(self.inserted);
            for &r in &used {
                let mut prev = combos[r as usize].clone();
                prev.resize(self.inserted);
                c.xor_assign(&prev);
            }
            c
        });
        Ok((residual, combo))
    }

    pub fn contains(&self, v: &BitRow) -> Result<bool> {
        Ok(self.reduce_vector(v)?.0.is_zero())
    }

    /// `Some(combination)` when `v` lies in the span; the combination is empty unless
    /// tracking is on.
    pub fn member(&self, v: &BitRow) -> Result<Option<BitRow>> {
        let (residual, combo) = self.reduce_vector(v)?;
        Ok(residual
            .is_zero()
            .then(|| combo.unwrap_or_else(|| BitRow::zeros(0))))
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rows(rng: &mut ChaCha8Rng, n: usize, ncols: usize, density: f64) -> Vec<Vec<bool>> {
        (0..n)
            .map(|_| (0..ncols).map(|_| rng.gen_bool(density)).collect())
            .collect()
    }

    fn pack(rows: &[Vec<bool>]) -> Vec<BitRow> {
        rows.iter().map(|r| BitRow::from_bools(r)).collect()
    }

    #[test]
    fn identity_and_duplicates() {
        assert_eq!(Gf2Matrix::identity(3).rank(), 3);
        let r = BitRow::from_indices(5, [1, 3]);
        assert_eq!(rank_of(5, &[r.clone(), r]), 1);
    }

    #[test]
    fn reduce_is_rref() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rows = random_rows(&mut rng, 30, 70, 0.3);
        let mut m = Gf2Matrix::from_rows(70, pack(&rows)).unwrap();
        let pivots = m.reduce();
        assert!(pivots.windows(2).all(|p| p[0] < p[1]));
        for (i, &p) in pivots.iter().enumerate() {
            assert_eq!(m.rows()[i].first_one(), Some(p));
            for (j, row) in m.rows().iter().enumerate() {
                assert_eq!(row.get(p), i == j);
            }
        }
    }

    #[test]
    fn agrees_with_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in 0..500 {
            let nrows = rng.gen_range(1..=200);
            let ncols = rng.gen_range(1..=200);
            let density = [0.02, 0.1, 0.5][case % 3];
            let rows = random_rows(&mut rng, nrows, ncols, density);
            let packed = pack(&rows);
            let m = Gf2Matrix::from_rows(ncols, packed.clone()).unwrap();
            assert_eq!(m.rank(), naive::rank(&rows, ncols), "case {case}");

            let mut span = IncrementalSpan::new(ncols);
            for r in &packed {
                span.insert(r.clone()).unwrap();
            }
            assert_eq!(span.rank(), m.rank());
            let v: Vec<bool> = (0..ncols).map(|_| rng.gen_bool(0.5)).collect();
            assert_eq!(
                span.contains(&BitRow::from_bools(&v)).unwrap(),
                naive::in_span(&rows, &v)
            );

            for k in m.kernel() {
                assert!(naive::apply(&rows, &k.to_bools()).iter().all(|b| !b));
            }
            assert_eq!(m.kernel().len() + m.rank(), ncols);
        }
    }

    #[test]
    fn products_agree_with_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let (n, k, l) = (rng.gen_range(1..80), rng.gen_range(1..80), rng.gen_range(1..80));
            let a = random_rows(&mut rng, n, k, 0.3);
            let b = random_rows(&mut rng, k, l, 0.3);
            let ma = Gf2Matrix::from_rows(k, pack(&a)).unwrap();
            let mb = Gf2Matrix::from_rows(l, pack(&b)).unwrap();
            let prod = ma.mul(&mb).unwrap();
            let t = mb.transpose();
            for i in 0..n {
                for j in 0..l {
                    let bit = (0..k).filter(|&x| a[i][x] && b[x][j]).count() % 2 == 1;
                    assert_eq!(prod.get(i, j), bit);
                }
            }
            for x in 0..k {
                for j in 0..l {
                    assert_eq!(t.get(j, x), b[x][j]);
                }
            }
            let v: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
            assert_eq!(ma.apply(&BitRow::from_bools(&v)).unwrap().to_bools(), naive::apply(&a, &v));
        }
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let m = Gf2Matrix::zeros(3, 4);
        assert_eq!(m.kernel().len(), 4);
    }

    #[test]
    fn tracked_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows = pack(&random_rows(&mut rng, 40, 60, 0.2));
        let mut span = IncrementalSpan::with_tracking(60);
        let mut last = 0;
        for r in &rows {
            span.insert(r.clone()).unwrap();
            assert!(span.rank() - last <= 1);
            last = span.rank();
        }
        assert_eq!(span.member(&BitRow::zeros(60)).unwrap().unwrap().count_ones(), 0);
        assert!(span.member(&rows[5]).unwrap().is_some());
        for _ in 0..50 {
            let v = BitRow::from_bools(&(0..60).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
            let (residual, combo) = span.reduce_vector(&v).unwrap();
            let combo = combo.unwrap();
            let mut rebuilt = residual.clone();
            for i in combo.ones() {
                rebuilt.xor_assign(&rows[i]);
            }
            assert_eq!(rebuilt, v);
            assert!(residual.ones().all(|c| !span.is_pivot(c)));
        }
        assert!(span.insert(BitRow::zeros(3)).is_err());
    }

    #[test]
    fn intersection_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..40);
            let (na, nb) = (rng.gen_range(0..n + 3), rng.gen_range(0..n + 3));
            let a = pack(&random_rows(&mut rng, na, n, 0.3));
            let b = pack(&random_rows(&mut rng, nb, n, 0.3));
            let both: Vec<BitRow> = a.iter().chain(&b).cloned().collect();
            let cap = intersect(n, &a, &b).unwrap();
            assert_eq!(
                rank_of(n, &a) + rank_of(n, &b),
                rank_of(n, &both) + rank_of(n, &cap)
            );
            let sa = {
                let mut s = IncrementalSpan::new(n);
                a.iter().for_each(|r| {
                    s.insert(r.clone()).unwrap();
                });
                s
            };
            assert!(cap.iter().all(|v| sa.contains(v).unwrap()));
        }
        let v = vec![BitRow::from_indices(4, [0, 2]), BitRow::from_indices(4, [1])];
        assert_eq!(rank_of(4, &intersect(4, &v, &v).unwrap()), 2);
    }
}
