use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_COUNT: usize = 1 << 31;

/// Row-mode dimensions `I_1..I_M` and column-mode dimensions `J_1..J_N` of a tensor.
///
/// Either group may be empty (its product is 1), but not both.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EinsteinShape {
    row_modes: Vec<usize>,
    col_modes: Vec<usize>,
}

fn checked_product(modes: &[usize]) -> Result<usize> {
    modes.iter().try_fold(1usize, |acc, &d| {
        if d == 0 {
            return Err(Error::InvalidShape("mode dimension must be at least 1".into()));
        }
        acc.checked_mul(d)
            .filter(|&p| p <= MAX_COUNT)
            .ok_or_else(|| Error::InvalidShape(format!("mode product exceeds 2^31 for {modes:?}")))
    })
}

impl EinsteinShape {
    pub fn new(row_modes: Vec<usize>, col_modes: Vec<usize>) -> Result<Self> {
        if row_modes.is_empty() && col_modes.is_empty() {
            return Err(Error::InvalidShape("tensor must have at least one mode".into()));
        }
        let rows = checked_product(&row_modes)?;
        let cols = checked_product(&col_modes)?;
        if rows.checked_mul(cols).is_none() {
            return Err(Error::InvalidShape("entry count overflows".into()));
        }
        Ok(Self { row_modes, col_modes })
    }

    /// Shape `(modes, modes)` of an operator acting on `modes`.
    pub fn square(modes: &[usize]) -> Result<Self> {
        Self::new(modes.to_vec(), modes.to_vec())
    }

    pub fn row_modes(&self) -> &[usize] {
        &self.row_modes
    }

    pub fn col_modes(&self) -> &[usize] {
        &self.col_modes
    }

    pub fn row_count(&self) -> usize {
        self.row_modes.iter().product()
    }

    pub fn col_count(&self) -> usize {
        self.col_modes.iter().product()
    }

    pub fn len(&self) -> usize {
        self.row_count() * self.col_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_square(&self) -> bool {
        self.row_modes == self.col_modes
    }

    pub fn order(&self) -> usize {
        self.row_modes.len() + self.col_modes.len()
    }

    pub fn transposed(&self) -> Self {
        Self { row_modes: self.col_modes.clone(), col_modes: self.row_modes.clone() }
    }

    /// Linear row position (0-based) of a 0-based row multi-index, first mode fastest.
    pub fn row_linear(&self, index: &[usize]) -> usize {
        linearize(&self.row_modes, index)
    }

    pub fn col_linear(&self, index: &[usize]) -> usize {
        linearize(&self.col_modes, index)
    }

    /// Flat buffer position of the entry `(rows, cols)`.
    pub fn flat_index(&self, rows: &[usize], cols: &[usize]) -> usize {
        self.row_linear(rows) + self.col_linear(cols) * self.row_count()
    }
}

fn linearize(modes: &[usize], index: &[usize]) -> usize {
    assert_eq!(modes.len(), index.len(), "multi-index has wrong order");
    let mut stride = 1;
    let mut lin = 0;
    for (&d, &i) in modes.iter().zip(index) {
        assert!(i < d, "index {i} out of range for mode of size {d}");
        lin += i * stride;
        stride *= d;
    }
    lin
}

/// Inverse of the linearization: 0-based multi-index of a linear position.
pub fn delinearize(modes: &[usize], mut lin: usize) -> Vec<usize> {
    modes
        .iter()
        .map(|&d| {
            let i = lin % d;
            lin /= d;
            i
        })
        .collect()
}

impl fmt::Display for EinsteinShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}x{:?}", self.row_modes, self.col_modes)
    }
}
