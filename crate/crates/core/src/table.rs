//! Shared validation for square multiplication tables.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({row}, {col}) is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
}

/// Checks that `table` is square with entries in range and flattens it row-major.
pub fn flatten_square(table: &[Vec<usize>]) -> Result<(usize, Vec<usize>), TableError> {
    let order = table.len();
    if order == 0 {
        return Err(TableError::Empty);
    }
    let mut flat = Vec::with_capacity(order * order);
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != order {
            return Err(TableError::NotSquare {
                row,
                len: entries.len(),
                order,
            });
        }
        for (col, &value) in entries.iter().enumerate() {
            if value >= order {
                return Err(TableError::EntryOutOfRange {
                    row,
                    col,
                    value,
                    order,
                });
            }
            flat.push(value);
        }
    }
    Ok((order, flat))
}

/// First triple witnessing non-associativity of a flat table, if any.
pub fn associativity_witness(order: usize, flat: &[usize]) -> Option<(usize, usize, usize)> {
    let mul = |a: usize, b: usize| flat[a * order + b];
    itertools::iproduct!(0..order, 0..order, 0..order)
        .find(|&(a, b, c)| mul(mul(a, b), c) != mul(a, mul(b, c)))
}
