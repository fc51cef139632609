//! The domination partial order on columns and boards.
//!
//! `B ≥ B'` when some bijection of columns pairs every column of `B` with a
//! column of `B'` it dominates. Deciding it is a perfect-matching question
//! on the helper graph with an edge `(i, j)` whenever `Cᵢ ≥ C'ⱼ`.

use crate::game::{Board, Column, GameError};
use crate::matching::matching_size;

/// Padded componentwise comparison of two columns.
pub fn column_geq(a: &Column, b: &Column) -> bool {
    a.dominates(b)
}

/// Whether `a ≥ b` in the board order. Both boards must have the same
/// number of columns.
pub fn board_geq(a: &Board, b: &Board) -> Result<bool, GameError> {
    if a.columns().len() != b.columns().len() {
        return Err(GameError::BoardMismatch(format!(
            "cannot compare boards with {} and {} columns",
            a.columns().len(),
            b.columns().len()
        )));
    }
    Ok(geq_unchecked(a, b))
}

pub(crate) fn geq_unchecked(a: &Board, b: &Board) -> bool {
    let n = a.columns().len();
    if a.chip_count() < b.chip_count() {
        return false;
    }
    let mut adj = Vec::with_capacity(n);
    for ca in a.columns() {
        let row: Vec<usize> = b
            .columns()
            .iter()
            .enumerate()
            .filter(|(_, cb)| ca.dominates(cb))
            .map(|(j, _)| j)
            .collect();
        if row.is_empty() {
            return false;
        }
        adj.push(row);
    }
    matching_size(&adj, n) == n
}
