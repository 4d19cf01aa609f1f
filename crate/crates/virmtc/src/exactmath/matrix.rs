use num_integer::Integer;

use super::cyclo::CycloNumber;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("ragged rows: row {row} has {got} entries, expected {want}")]
    Ragged { row: usize, got: usize, want: usize },
}

/// Dense matrix of cyclotomic numbers sharing one modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    entries: Vec<CycloNumber>,
}

impl ExactMatrix {
    /// Lifts every entry to the lcm of the input moduli.
    pub fn from_rows(rows: Vec<Vec<CycloNumber>>) -> Result<Self, MatrixError> {
        let want = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != want {
                return Err(MatrixError::Ragged { row: i, got: r.len(), want });
            }
        }
        let modulus = rows.iter().flatten().fold(1u32, |m, x| m.lcm(&x.modulus()));
        let nrows = rows.len();
        let entries = rows.into_iter().flatten().map(|x| x.lift(modulus)).collect();
        Ok(ExactMatrix { rows: nrows, cols: want, modulus, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycloNumber) -> Self {
        let grid = (0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect();
        Self::from_rows(grid).expect("rectangular by construction")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[CycloNumber] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Principal-style restriction to the given row and column index lists.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_float(&self) -> Vec<Vec<(f64, f64)>> {
        (0..self.rows).map(|i| self.row(i).iter().map(CycloNumber::float_eval).collect()).collect()
    }
}
