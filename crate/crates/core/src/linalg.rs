//! Exact Gaussian elimination over `F_l`.

use crate::arith::pow_mod;

/// Incrementally maintained reduced row echelon form over `F_l`.
///
/// Rows are fed one at a time; `push` reports whether the row enlarged the
/// span. `l` must be a prime below `2^32` so that products fit in a `u64`.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    l: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivot_cols: Vec<usize>,
    pivot_row_of: Vec<Option<usize>>,
}

impl RowEchelon {
    pub fn new(l: u64, width: usize) -> Self {
        RowEchelon {
            l,
            width,
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            pivot_row_of: vec![None; width],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Adds a row given as `(column, value)` pairs; values are reduced mod `l`
    /// and repeated columns accumulate.
    pub fn push_sparse(&mut self, entries: &[(usize, u64)]) -> bool {
        let mut row = vec![0u64; self.width];
        for &(c, v) in entries {
            row[c] = (row[c] + v % self.l) % self.l;
        }
        self.push(row)
    }

    pub fn push(&mut self, mut row: Vec<u64>) -> bool {
        assert_eq!(row.len(), self.width, "row width");
        let l = self.l;
        if self.is_full() {
            return false;
        }
        for x in row.iter_mut() {
            *x %= l;
        }
        for c in 0..self.width {
            let v = row[c];
            if v == 0 {
                continue;
            }
            if let Some(pr) = self.pivot_row_of[c] {
                let pivot = &self.rows[pr];
                let f = l - v;
                for (x, &y) in row.iter_mut().zip(pivot).skip(c) {
                    if y != 0 {
                        *x = (*x + f * y) % l;
                    }
                }
            }
        }
        let Some(lead) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = pow_mod(row[lead], l - 2, l);
        for x in row.iter_mut().skip(lead) {
            *x = *x * inv % l;
        }
        for other in self.rows.iter_mut() {
            let v = other[lead];
            if v != 0 {
                let f = l - v;
                for (x, &y) in other.iter_mut().zip(&row).skip(lead) {
                    if y != 0 {
                        *x = (*x + f * y) % l;
                    }
                }
            }
        }
        self.pivot_row_of[lead] = Some(self.rows.len());
        self.pivot_cols.push(lead);
        self.rows.push(row);
        true
    }
}

/// Rank of a dense matrix over `F_l`.
pub fn rank_mod_prime(l: u64, width: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> usize {
    let mut ech = RowEchelon::new(l, width);
    for row in rows {
        if ech.is_full() {
            break;
        }
        ech.push(row);
    }
    ech.rank()
}
