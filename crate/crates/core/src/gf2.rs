//! Dense linear algebra over GF(2).
//!
//! Matrices are stored row-major with 64 entries packed per word; column `j`
//! of a row lives in bit `j % 64` of word `j / 64`. Addition is XOR and all
//! arithmetic is mod 2.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Upper bound on the number of columns a matrix may have.
pub const MAX_COLS: usize = 1024;

const WORD_BITS: usize = 64;

pub(crate) fn ensure_cols(cols: usize) -> Result<()> {
    if cols > MAX_COLS {
        return Err(Error::Shape(format!(
            "{cols} columns exceeds the limit of {MAX_COLS}"
        )));
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    /// # Panics
    ///
    /// Panics if `cols` exceeds [`MAX_COLS`].
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_COLS, "{cols} columns exceeds {MAX_COLS}");
        let stride = cols.div_ceil(WORD_BITS);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix with at most 64 columns from packed rows; bit `j` of a
    /// row is column `j`.
    pub fn from_u64_rows(cols: usize, rows: &[u64]) -> Self {
        assert!(cols <= WORD_BITS);
        let mut m = Self::zeros(rows.len(), cols);
        let mask = low_mask(cols);
        for (r, &bits) in rows.iter().enumerate() {
            if m.stride > 0 {
                m.data[r * m.stride] = bits & mask;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) out of bounds");
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) out of bounds");
        let word = &mut self.data[r * self.stride + c / WORD_BITS];
        let bit = 1u64 << (c % WORD_BITS);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// Row `r` packed into a single word. Only valid for matrices with at
    /// most 64 columns.
    pub fn row_u64(&self, r: usize) -> u64 {
        assert!(self.cols <= WORD_BITS, "row_u64 needs at most 64 columns");
        if self.stride == 0 {
            0
        } else {
            self.data[r * self.stride]
        }
    }

    pub fn set_row_u64(&mut self, r: usize, bits: u64) {
        assert!(self.cols <= WORD_BITS, "set_row_u64 needs at most 64 columns");
        if self.stride > 0 {
            self.data[r * self.stride] = bits & low_mask(self.cols);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// XOR `other` into `self` in place.
    pub fn xor_assign(&mut self, other: &Gf2Matrix) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn mul(&self, rhs: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (dst, src) = (r * out.stride, k * rhs.stride);
                    for w in 0..out.stride {
                        out.data[dst + w] ^= rhs.data[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        Gf2Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::Shape(format!(
                "hstack of {} rows with {} rows",
                self.rows, rhs.rows
            )));
        }
        ensure_cols(self.cols + rhs.cols)?;
        Ok(Gf2Matrix::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                rhs.get(r, c - self.cols)
            }
        }))
    }

    /// Vertical concatenation of `self` above `rhs`.
    pub fn vstack(&self, rhs: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "vstack of {} columns with {} columns",
                self.cols, rhs.cols
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows + rhs.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&rhs.data);
        Ok(out)
    }

    pub fn select_columns(&self, columns: &[usize]) -> Result<Gf2Matrix> {
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Index(format!(
                "column {bad} of a matrix with {} columns",
                self.cols
            )));
        }
        Ok(Gf2Matrix::from_fn(self.rows, columns.len(), |r, c| {
            self.get(r, columns[c])
        }))
    }

    pub fn column_range(&self, start: usize, end: usize) -> Result<Gf2Matrix> {
        let cols: Vec<usize> = (start..end).collect();
        self.select_columns(&cols)
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.eliminate(false)
    }

    /// Reduced row echelon form with leftmost pivot, topmost row selection.
    pub fn rref(&self) -> RowSpace {
        let mut work = self.clone();
        let dim = work.eliminate(true);
        work.rows = dim;
        work.data.truncate(dim * work.stride);
        RowSpace { canon: work }
    }

    /// Gaussian elimination in place; returns the rank. Pivot rows end up at
    /// the top in increasing pivot-column order. With `reduce` every pivot
    /// column is cleared above its pivot as well.
    fn eliminate(&mut self, reduce: bool) -> usize {
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(found) = (pivot_row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(found, pivot_row);
            let start = if reduce { 0 } else { pivot_row + 1 };
            for r in start..self.rows {
                if r != pivot_row && self.get(r, col) {
                    self.xor_row_into(pivot_row, r);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.stride {
            let v = self.data[src * self.stride + w];
            self.data[dst * self.stride + w] ^= v;
        }
    }

    fn check_same_shape(&self, other: &Gf2Matrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn row_string(&self, r: usize) -> String {
        (0..self.cols)
            .map(|c| if self.get(r, c) { '1' } else { '0' })
            .collect()
    }

    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows).map(|r| self.row_string(r)).collect()
    }
}

fn low_mask(bits: usize) -> u64 {
    if bits >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Parses rows of `0`/`1` characters separated by whitespace, `/`, `;` or
/// `,`. The empty string parses to a 0x0 matrix.
impl FromStr for Gf2Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s
            .split(|c: char| c.is_whitespace() || matches!(c, '/' | ';' | ','))
            .filter(|r| !r.is_empty())
            .collect();
        let cols = rows.first().map_or(0, |r| r.len());
        ensure_cols(cols)?;
        let mut m = Gf2Matrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    other => {
                        return Err(Error::Parse(format!("unexpected character {other:?}")))
                    }
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            f.write_str(&self.row_string(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix({}x{} [{}])", self.rows, self.cols, self.row_strings().join("/"))
    }
}

impl Serialize for Gf2Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Gf2Matrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("bits", &self.row_strings())?;
        st.end()
    }
}

/// A row space in canonical (reduced row echelon) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct RowSpace {
    canon: Gf2Matrix,
}

impl RowSpace {
    pub fn dim(&self) -> usize {
        self.canon.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.canon.cols()
    }

    pub fn canon(&self) -> &Gf2Matrix {
        &self.canon
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|r| {
                (0..self.canon.cols())
                    .find(|&c| self.canon.get(r, c))
                    .expect("canonical rows are nonzero")
            })
            .collect()
    }

    /// The vector whose coordinates in the canonical basis are the bits of
    /// `coords` (bit `t` selects canonical row `t`).
    pub fn vector(&self, coords: u64) -> Gf2Matrix {
        let mut v = Gf2Matrix::zeros(1, self.ambient_dim());
        for t in 0..self.dim() {
            if (coords >> t) & 1 == 1 {
                for (w, src) in v.data.iter_mut().zip(self.canon.row_words(t)) {
                    *w ^= src;
                }
            }
        }
        v
    }

    /// Membership test for a single row vector (1 x ambient).
    pub fn contains(&self, row: &Gf2Matrix) -> bool {
        assert_eq!(row.shape(), (1, self.ambient_dim()));
        let mut v = row.clone();
        for (r, pivot) in self.pivots().into_iter().enumerate() {
            if v.get(0, pivot) {
                for (w, src) in v.data.iter_mut().zip(self.canon.row_words(r)) {
                    *w ^= src;
                }
            }
        }
        v.is_zero()
    }
}

/// `particular ⊕ span(homogeneous)`: every member of a solution set of a
/// linear system over GF(2).
#[derive(Clone, Debug)]
pub struct AffineSolutionSet {
    particular: Gf2Matrix,
    homogeneous: Vec<Gf2Matrix>,
}

impl AffineSolutionSet {
    pub fn particular(&self) -> &Gf2Matrix {
        &self.particular
    }

    pub fn homogeneous_basis(&self) -> &[Gf2Matrix] {
        &self.homogeneous
    }

    pub fn dim(&self) -> usize {
        self.homogeneous.len()
    }

    pub fn size(&self) -> BigUint {
        BigUint::one() << self.dim()
    }

    /// Member selected by the low `dim` bits of `index`.
    pub fn member(&self, index: u64) -> Gf2Matrix {
        let mut m = self.particular.clone();
        for (t, h) in self.homogeneous.iter().enumerate() {
            if t < 64 && (index >> t) & 1 == 1 {
                m.xor_assign(h).expect("same shape");
            }
        }
        m
    }

    /// All members in binary-counter order of their selector index.
    pub fn members(&self) -> impl Iterator<Item = Gf2Matrix> + '_ {
        assert!(self.dim() < 64, "solution set too large to iterate");
        (0..(1u64 << self.dim())).map(move |i| self.member(i))
    }
}

/// All `T` with `T * a = I` and `T` zero wherever `forced_zero` is set.
///
/// `a` must be `m x n`; `forced_zero` is shaped like `T`, i.e. `n x m`. Each
/// row of `T` is an independent system, so the homogeneous basis consists of
/// matrices with a single nonzero row.
pub fn solve_constrained_left_inverses(
    a: &Gf2Matrix,
    forced_zero: &Gf2Matrix,
) -> Result<AffineSolutionSet> {
    let (m, n) = a.shape();
    if forced_zero.shape() != (n, m) {
        return Err(Error::Shape(format!(
            "zero pattern is {}x{}, expected {n}x{m}",
            forced_zero.rows(),
            forced_zero.cols()
        )));
    }
    ensure_cols(n + m)?;
    let mut particular = Gf2Matrix::zeros(n, m);
    let mut homogeneous = Vec::new();

    for j in 0..n {
        let free: Vec<usize> = (0..m).filter(|&p| !forced_zero.get(j, p)).collect();
        let k = free.len();
        // [ a restricted to free rows | tracking identity ]
        let mut aug = Gf2Matrix::from_fn(k, n + k, |q, c| {
            if c < n {
                a.get(free[q], c)
            } else {
                c - n == q
            }
        });
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..n {
            let Some(found) = (pivot_row..k).find(|&r| aug.get(r, col)) else {
                continue;
            };
            aug.swap_rows(found, pivot_row);
            for r in pivot_row + 1..k {
                if aug.get(r, col) {
                    aug.xor_row_into(pivot_row, r);
                }
            }
            pivots.push((col, pivot_row));
            pivot_row += 1;
        }

        let mut target = Gf2Matrix::zeros(1, n + k);
        target.set(0, j, true);
        for &(col, r) in &pivots {
            if target.get(0, col) {
                for w in 0..target.stride {
                    target.data[w] ^= aug.data[r * aug.stride + w];
                }
            }
        }
        if (0..n).any(|c| target.get(0, c)) {
            return Err(Error::NoSolution(format!(
                "row {} of T cannot satisfy T*A = I under the zero pattern",
                j + 1
            )));
        }
        for (q, &col) in free.iter().enumerate().take(k) {
            if target.get(0, n + q) {
                particular.set(j, col, true);
            }
        }
        for r in pivot_row..k {
            let mut h = Gf2Matrix::zeros(n, m);
            for (q, &col) in free.iter().enumerate().take(k) {
                if aug.get(r, n + q) {
                    h.set(j, col, true);
                }
            }
            homogeneous.push(h);
        }
    }

    Ok(AffineSolutionSet {
        particular,
        homogeneous,
    })
}

/// Number of unordered bases of a `dim`-dimensional space over GF(2):
/// `(1/dim!) * prod_{i<dim} (2^dim - 2^i)`.
pub fn count_bases(dim: usize) -> BigUint {
    let full = BigUint::one() << dim;
    let mut ordered = BigUint::one();
    for i in 0..dim {
        ordered *= &full - (BigUint::one() << i);
    }
    let mut factorial = BigUint::one();
    for i in 2..=dim {
        factorial *= BigUint::from(i);
    }
    ordered / factorial
}

/// Every unordered basis of `space`, each exactly once.
///
/// Space vectors are numbered by their coordinates in the canonical basis
/// (see [`RowSpace::vector`]); bases are emitted as strictly increasing
/// coordinate tuples in lexicographic order. Refuses when the number of bases
/// exceeds `cap`.
pub fn enumerate_bases(space: &RowSpace, cap: u64) -> Result<BasisIter<'_>> {
    let dim = space.dim();
    if dim >= 63 {
        return Err(Error::cap("basis enumeration", format!("dimension {dim}"), "62"));
    }
    let count = count_bases(dim);
    if count > BigUint::from(cap) {
        return Err(Error::cap("basis enumeration", format!("{count} bases"), cap));
    }
    Ok(BasisIter::new(space))
}

/// Depth-first walk over increasing coordinate tuples, pruning any prefix
/// that is already dependent.
pub struct BasisIter<'a> {
    space: &'a RowSpace,
    limit: u64,
    chosen: Vec<u64>,
    // reduced copy of chosen[d], and the leading bit it occupies
    reduced: Vec<(u32, u64)>,
    next: u64,
    done: bool,
}

impl<'a> BasisIter<'a> {
    fn new(space: &'a RowSpace) -> Self {
        Self {
            space,
            limit: 1u64 << space.dim(),
            chosen: Vec::new(),
            reduced: Vec::new(),
            next: 1,
            done: false,
        }
    }

    fn reduce_vector(&self, mut v: u64) -> u64 {
        // Reduced vectors have distinct leading bits; eliminate from the top.
        let mut basis: Vec<(u32, u64)> = self.reduced.clone();
        basis.sort_unstable_by_key(|b| std::cmp::Reverse(b.0));
        for (lead, b) in basis {
            if (v >> lead) & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    fn push(&mut self, v: u64) -> bool {
        let r = self.reduce_vector(v);
        if r == 0 {
            return false;
        }
        self.chosen.push(v);
        self.reduced.push((63 - r.leading_zeros(), r));
        true
    }

    fn pop(&mut self) -> Option<u64> {
        self.reduced.pop();
        self.chosen.pop()
    }

    /// Coordinate tuple of the next basis, without materializing vectors.
    pub fn next_coords(&mut self) -> Option<Vec<u64>> {
        let dim = self.space.dim();
        if self.done {
            return None;
        }
        if dim == 0 {
            self.done = true;
            return Some(Vec::new());
        }
        loop {
            if self.next >= self.limit {
                match self.pop() {
                    Some(last) => {
                        self.next = last + 1;
                        continue;
                    }
                    None => {
                        self.done = true;
                        return None;
                    }
                }
            }
            let v = self.next;
            self.next += 1;
            if self.push(v) {
                if self.chosen.len() == dim {
                    let out = self.chosen.clone();
                    self.pop();
                    return Some(out);
                }
                self.next = v + 1;
            }
        }
    }
}

impl Iterator for BasisIter<'_> {
    type Item = Gf2Matrix;

    fn next(&mut self) -> Option<Gf2Matrix> {
        let coords = self.next_coords()?;
        let mut out = Gf2Matrix::zeros(coords.len(), self.space.ambient_dim());
        for (r, &c) in coords.iter().enumerate() {
            let v = self.space.vector(c);
            let stride = out.stride;
            out.data[r * stride..(r + 1) * stride].copy_from_slice(&v.data);
        }
        Some(out)
    }
}

/// Rank of a small matrix given as packed rows, destroying the input.
pub fn rank_of_rows(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let v = rows[i];
        if v == 0 {
            continue;
        }
        rank += 1;
        let low = v & v.wrapping_neg();
        for r in rows.iter_mut().skip(i + 1) {
            if *r & low != 0 {
                *r ^= v;
            }
        }
    }
    rank
}
