//! Integer degree matrices.
//!
//! A degree matrix records the degrees of the entries of a matrix of forms.
//! It is *homogeneous* when every entry splits as `u[i] + v[j]` for a row
//! potential `u` and a column potential `v`; this is the same as asking every
//! 2x2 block `[[a, b], [c, e]]` to satisfy `a + e = b + c`. Potentials are
//! normalized so that `v[0] = 0`.
//!
//! Row and column permutations only change the sign of a determinant, so
//! every question asked in this crate is posed on the *well-ordered* form:
//! rows sorted by non-increasing potential, columns by non-decreasing
//! potential.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Largest absolute entry accepted by [`DegreeMatrix::from_rows`].
pub const MAX_ENTRY: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row}, {col}) = {value} exceeds the bound {MAX_ENTRY}")]
    EntryOutOfRange { row: usize, col: usize, value: i64 },
    /// The 2x2 block on rows `rows` and columns `cols` breaks `a + e = b + c`.
    #[error("not homogeneous: 2x2 block on rows {rows:?} and columns {cols:?} violates a+e = b+c")]
    NotHomogeneous {
        rows: (usize, usize),
        cols: (usize, usize),
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected an (n-1)xn matrix, got {rows}x{cols}")]
    NotHilbertBurchShape { rows: usize, cols: usize },
    #[error("matrix is not well-ordered")]
    NotWellOrdered,
    #[error("row has {found} entries, expected {expected}")]
    RowLength { expected: usize, found: usize },
    /// `row[j] + a[j]` is not constant, so the row cannot extend the matrix
    /// homogeneously.
    #[error("row is incompatible with the minor degrees: row[{col}] + a[{col}] = {found}, expected {expected}")]
    IncompatibleRow {
        col: usize,
        expected: i64,
        found: i64,
    },
    #[error("row index {index} out of range for {rows} rows")]
    RowOutOfRange { index: usize, rows: usize },
}

/// A homogeneous integer matrix together with its potentials.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
    row_potential: Vec<i64>,
    col_potential: Vec<i64>,
}

/// Row and column potentials of a homogeneous grid, with `col[0] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potentials {
    pub row: Vec<i64>,
    pub col: Vec<i64>,
}

/// Computes the potentials of a rectangular grid, or reports a 2x2 block
/// violating homogeneity.
///
/// An empty list of rows is the 0x0 matrix.
pub fn potentials(grid: &[Vec<i64>]) -> Result<Potentials, MatrixError> {
    let cols = grid.first().map_or(0, Vec::len);
    for (i, row) in grid.iter().enumerate() {
        if row.len() != cols {
            return Err(MatrixError::Ragged {
                row: i,
                expected: cols,
                found: row.len(),
            });
        }
    }
    if grid.is_empty() || cols == 0 {
        return Ok(Potentials {
            row: vec![0; grid.len()],
            col: vec![0; cols],
        });
    }
    let row: Vec<i64> = grid.iter().map(|r| r[0]).collect();
    let col: Vec<i64> = grid[0].iter().map(|&x| x - grid[0][0]).collect();
    for (i, r) in grid.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            if x != row[i] + col[j] {
                return Err(MatrixError::NotHomogeneous {
                    rows: (0, i),
                    cols: (0, j),
                });
            }
        }
    }
    Ok(Potentials { row, col })
}

impl DegreeMatrix {
    /// Builds a matrix from its rows, checking shape, entry bound and
    /// homogeneity.
    pub fn from_rows(grid: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let cols = grid.first().map_or(0, Vec::len);
        Self::with_shape(grid, cols)
    }

    /// Like [`from_rows`](Self::from_rows), but with an explicit column count
    /// so that `0 x cols` matrices can be expressed.
    pub fn with_shape(grid: &[Vec<i64>], cols: usize) -> Result<Self, MatrixError> {
        for (i, row) in grid.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &value) in row.iter().enumerate() {
                if value.abs() > MAX_ENTRY {
                    return Err(MatrixError::EntryOutOfRange {
                        row: i,
                        col: j,
                        value,
                    });
                }
            }
        }
        let pot = potentials(grid)?;
        Ok(Self::from_potentials(pot.row, pot.col))
    }

    /// Builds `m[i][j] = row[i] + col[j]`, renormalizing so that `col[0] = 0`.
    pub fn from_potentials(mut row: Vec<i64>, mut col: Vec<i64>) -> Self {
        if let Some(&shift) = col.first() {
            col.iter_mut().for_each(|v| *v -= shift);
            row.iter_mut().for_each(|u| *u += shift);
        }
        let (rows, cols) = (row.len(), col.len());
        let entries = row
            .iter()
            .flat_map(|&u| col.iter().map(move |&v| u + v))
            .collect();
        DegreeMatrix {
            rows,
            cols,
            entries,
            row_potential: row,
            col_potential: col,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row_potential(&self) -> &[i64] {
        &self.row_potential
    }

    pub fn col_potential(&self) -> &[i64] {
        &self.col_potential
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Rows non-increasing downward, columns non-decreasing rightward.
    pub fn is_well_ordered(&self) -> bool {
        self.row_potential.windows(2).all(|w| w[0] >= w[1])
            && self.col_potential.windows(2).all(|w| w[0] <= w[1])
    }

    /// The main diagonal `m[k][k]`, `k < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rows.min(self.cols))
            .map(|k| self.get(k, k))
            .collect()
    }

    /// Sum of the main-diagonal transversal. For a square homogeneous matrix
    /// every transversal has this sum.
    pub fn transversal_sum(&self) -> i64 {
        self.diagonal().iter().sum()
    }

    /// Transversal sum along a permutation of the columns.
    pub fn permuted_sum(&self, sigma: &[usize]) -> i64 {
        sigma.iter().enumerate().map(|(i, &j)| self.get(i, j)).sum()
    }

    /// Drops row `i` (0-based).
    pub fn without_row(&self, i: usize) -> DegreeMatrix {
        let mut row = self.row_potential.clone();
        row.remove(i);
        DegreeMatrix::from_potentials(row, self.col_potential.clone())
    }

    /// Drops column `j` (0-based).
    pub fn without_col(&self, j: usize) -> DegreeMatrix {
        let mut col = self.col_potential.clone();
        col.remove(j);
        DegreeMatrix::from_potentials(self.row_potential.clone(), col)
    }

    /// The submatrix on the given rows and columns, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> DegreeMatrix {
        DegreeMatrix::from_potentials(
            rows.iter().map(|&i| self.row_potential[i]).collect(),
            cols.iter().map(|&j| self.col_potential[j]).collect(),
        )
    }
}

impl fmt::Debug for DegreeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DegreeMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for DegreeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "[ {} ]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A well-ordered matrix and the permutations that produced it:
/// row `k` of `matrix` is row `row_perm[k]` of the input, and likewise for
/// columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub matrix: DegreeMatrix,
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

/// Sorts rows by non-increasing and columns by non-decreasing potential.
/// Ties keep their original relative order.
pub fn canonicalize(m: &DegreeMatrix) -> Canonical {
    let mut row_perm: Vec<usize> = (0..m.rows).collect();
    row_perm.sort_by_key(|&i| std::cmp::Reverse(m.row_potential[i]));
    let mut col_perm: Vec<usize> = (0..m.cols).collect();
    col_perm.sort_by_key(|&j| m.col_potential[j]);
    Canonical {
        matrix: m.select(&row_perm, &col_perm),
        row_perm,
        col_perm,
    }
}

/// Parses and canonicalizes a raw grid in one step.
pub fn canonicalize_grid(grid: &[Vec<i64>]) -> Result<Canonical, MatrixError> {
    Ok(canonicalize(&DegreeMatrix::from_rows(grid)?))
}

/// A well-ordered square degree matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WellOrderedSquare {
    base: DegreeMatrix,
    degree: i64,
}

impl WellOrderedSquare {
    pub fn new(base: DegreeMatrix) -> Result<Self, MatrixError> {
        if !base.is_square() {
            return Err(MatrixError::NotSquare {
                rows: base.rows,
                cols: base.cols,
            });
        }
        if !base.is_well_ordered() {
            return Err(MatrixError::NotWellOrdered);
        }
        let degree = base.transversal_sum();
        Ok(WellOrderedSquare { base, degree })
    }

    /// Canonicalizes a square homogeneous grid.
    pub fn from_rows(grid: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let canon = canonicalize_grid(grid)?;
        Self::new(canon.matrix)
    }

    pub fn matrix(&self) -> &DegreeMatrix {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.base.rows
    }

    /// The common value of all transversal sums.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn into_matrix(self) -> DegreeMatrix {
        self.base
    }
}

/// A well-ordered `(n-1) x n` degree Hilbert-Burch matrix, with the degrees
/// `a` of its maximal minors and the shifts `b`, so that `q[i][j] = b[i] - a[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DhbMatrix {
    base: DegreeMatrix,
    minor_degrees: Vec<i64>,
    shifts: Vec<i64>,
}

impl DhbMatrix {
    pub fn new(base: DegreeMatrix) -> Result<Self, MatrixError> {
        if base.rows + 1 != base.cols {
            return Err(MatrixError::NotHilbertBurchShape {
                rows: base.rows,
                cols: base.cols,
            });
        }
        if !base.is_well_ordered() {
            return Err(MatrixError::NotWellOrdered);
        }
        let minor_degrees = minor_degrees(&base);
        let shifts = (0..base.rows)
            .map(|i| minor_degrees[0] + base.get(i, 0))
            .collect();
        Ok(DhbMatrix {
            base,
            minor_degrees,
            shifts,
        })
    }

    /// Canonicalizes an `(n-1) x n` homogeneous grid.
    pub fn from_rows(grid: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let canon = canonicalize_grid(grid)?;
        Self::new(canon.matrix)
    }

    pub fn matrix(&self) -> &DegreeMatrix {
        &self.base
    }

    /// Number of columns (= number of generators).
    pub fn n(&self) -> usize {
        self.base.cols
    }

    /// `a[j]`: degree of the minor with column `j` erased. Non-increasing.
    pub fn minor_degrees(&self) -> &[i64] {
        &self.minor_degrees
    }

    /// `b[i] = a[j] + q[i][j]` for any `j`. Non-increasing.
    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    /// `q[k][k] >= 0` for every `k`.
    pub fn diagonal_non_negative(&self) -> bool {
        self.base.diagonal().iter().all(|&x| x >= 0)
    }

    /// `max_k q[k][k] > 0`.
    pub fn max_diagonal_positive(&self) -> bool {
        self.base.diagonal().iter().any(|&x| x > 0)
    }

    /// The matrix is the dHB matrix of a non-empty zero-dimensional scheme.
    pub fn is_valid(&self) -> bool {
        self.diagonal_non_negative() && self.max_diagonal_positive()
    }
}

/// Degrees of the maximal minors of an `(n-1) x n` well-ordered matrix:
/// the diagonal transversal sum with column `j` erased.
pub fn minor_degrees(q: &DegreeMatrix) -> Vec<i64> {
    let diag: Vec<i64> = (0..q.rows).map(|k| q.get(k, k)).collect();
    let upper: Vec<i64> = (0..q.rows).map(|k| q.get(k, k + 1)).collect();
    (0..q.cols)
        .map(|j| diag[..j].iter().sum::<i64>() + upper[j..].iter().sum::<i64>())
        .collect()
}

/// Inserts `row` into `q` keeping the result well-ordered. The row lands
/// after every existing row of equal or larger potential. Returns the square
/// matrix and the 0-based index of the inserted row.
pub fn insert_row_sorted(
    q: &DhbMatrix,
    row: &[i64],
) -> Result<(WellOrderedSquare, usize), MatrixError> {
    let n = q.n();
    if row.len() != n {
        return Err(MatrixError::RowLength {
            expected: n,
            found: row.len(),
        });
    }
    let a = q.minor_degrees();
    let level = row[0] + a[0];
    if let Some(j) = (1..n).find(|&j| row[j] + a[j] != level) {
        return Err(MatrixError::IncompatibleRow {
            col: j,
            expected: level,
            found: row[j] + a[j],
        });
    }
    let position = q.shifts().iter().take_while(|&&b| b >= level).count();
    let base = q.matrix();
    let mut potentials = base.row_potential().to_vec();
    // row[j] = u + v[j] with v[0] = 0
    potentials.insert(position, row[0]);
    let square = DegreeMatrix::from_potentials(potentials, base.col_potential().to_vec());
    Ok((WellOrderedSquare::new(square)?, position))
}

/// Result of erasing one row of a square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasedRow {
    pub candidate: DhbMatrix,
    /// `r[k][k] >= 0` for every `k`.
    pub diag_well_formed: bool,
    /// `max_k r[k][k] > 0`; false means the scheme would be empty.
    pub max_diag_positive: bool,
}

impl ErasedRow {
    pub fn is_valid(&self) -> bool {
        self.diag_well_formed && self.max_diag_positive
    }
}

/// Erases row `i` (0-based) of a well-ordered square matrix.
pub fn erase_row(m: &WellOrderedSquare, i: usize) -> Result<ErasedRow, MatrixError> {
    if i >= m.size() {
        return Err(MatrixError::RowOutOfRange {
            index: i,
            rows: m.size(),
        });
    }
    let candidate = DhbMatrix::new(m.matrix().without_row(i))?;
    Ok(ErasedRow {
        diag_well_formed: candidate.diagonal_non_negative(),
        max_diag_positive: candidate.max_diagonal_positive(),
        candidate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn remark_matrix() -> Vec<Vec<i64>> {
        vec![
            vec![0, 1, 10, 11],
            vec![-1, 0, 9, 10],
            vec![-5, -4, 5, 6],
            vec![-8, -7, 2, 3],
        ]
    }

    fn two_by_three() -> DhbMatrix {
        DhbMatrix::from_rows(&[vec![2, 3, 5], vec![1, 2, 4]]).unwrap()
    }

    fn four_by_five() -> DhbMatrix {
        DhbMatrix::from_rows(&[
            vec![1, 1, 3, 3, 3],
            vec![1, 1, 3, 3, 3],
            vec![0, 0, 2, 2, 2],
            vec![-1, -1, 1, 1, 1],
        ])
        .unwrap()
    }

    #[test]
    fn potentials_examples() {
        let p = potentials(&[vec![2, 3, 5], vec![1, 2, 4]]).unwrap();
        assert_eq!(p.row, vec![2, 1]);
        assert_eq!(p.col, vec![0, 1, 3]);

        let p = potentials(&remark_matrix()).unwrap();
        assert_eq!(p.row, vec![0, -1, -5, -8]);
        assert_eq!(p.col, vec![0, 1, 10, 11]);

        let err = potentials(&[vec![1, 2], vec![2, 2]]).unwrap_err();
        assert_eq!(
            err,
            MatrixError::NotHomogeneous {
                rows: (0, 1),
                cols: (0, 1)
            }
        );
    }

    #[test]
    fn rejects_ragged_and_huge() {
        assert!(matches!(
            DegreeMatrix::from_rows(&[vec![1, 2], vec![3]]),
            Err(MatrixError::Ragged { row: 1, .. })
        ));
        assert!(matches!(
            DegreeMatrix::from_rows(&[vec![1, MAX_ENTRY + 1]]),
            Err(MatrixError::EntryOutOfRange { col: 1, .. })
        ));
    }

    #[test]
    fn canonicalize_examples() {
        let c = canonicalize_grid(&[vec![-1, 2], vec![1, 4]]).unwrap();
        assert_eq!(c.matrix.to_rows(), vec![vec![1, 4], vec![-1, 2]]);
        assert_eq!(c.row_perm, vec![1, 0]);
        assert_eq!(c.col_perm, vec![0, 1]);

        let c = canonicalize_grid(&[vec![2, 3, 5], vec![1, 2, 4]]).unwrap();
        assert_eq!(c.row_perm, vec![0, 1]);
        assert_eq!(c.col_perm, vec![0, 1, 2]);

        let c = canonicalize_grid(&[vec![4, 1], vec![2, -1]]).unwrap();
        assert_eq!(c.matrix.to_rows(), vec![vec![1, 4], vec![-1, 2]]);
        assert_eq!(c.col_perm, vec![1, 0]);
        assert_eq!(c.matrix.col_potential(), &[0, 3]);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(
            WellOrderedSquare::from_rows(&remark_matrix())
                .unwrap()
                .degree(),
            8
        );
        assert_eq!(
            WellOrderedSquare::from_rows(&[vec![5]]).unwrap().degree(),
            5
        );
        let m =
            WellOrderedSquare::from_rows(&[vec![2, 3, 5], vec![1, 2, 4], vec![-3, -2, 0]]).unwrap();
        assert_eq!(m.degree(), 4);
        assert_eq!(WellOrderedSquare::from_rows(&[]).unwrap().degree(), 0);
    }

    #[test]
    fn minor_degrees_and_shifts() {
        let q = two_by_three();
        assert_eq!(q.minor_degrees(), &[7, 6, 4]);
        assert_eq!(q.shifts(), &[9, 8]);

        let q = four_by_five();
        assert_eq!(q.minor_degrees(), &[7, 7, 5, 5, 5]);
        assert_eq!(q.shifts(), &[8, 8, 7, 6]);

        let q = DhbMatrix::from_rows(&[vec![2, 2]]).unwrap();
        assert_eq!(q.minor_degrees(), &[2, 2]);
        assert_eq!(q.shifts(), &[4]);

        let q = DhbMatrix::from_rows(&[vec![3, 5]]).unwrap();
        assert_eq!(q.shifts(), &[8]);
    }

    #[test]
    fn insert_examples() {
        let (m, pos) = insert_row_sorted(&two_by_three(), &[-3, -2, 0]).unwrap();
        assert_eq!(pos, 2);
        assert_eq!(
            m.matrix().to_rows(),
            vec![vec![2, 3, 5], vec![1, 2, 4], vec![-3, -2, 0]]
        );

        let (m, pos) = insert_row_sorted(&four_by_five(), &[-1, -1, 1, 1, 1]).unwrap();
        assert_eq!(pos, 4);
        assert_eq!(
            m.matrix().to_rows(),
            vec![
                vec![1, 1, 3, 3, 3],
                vec![1, 1, 3, 3, 3],
                vec![0, 0, 2, 2, 2],
                vec![-1, -1, 1, 1, 1],
                vec![-1, -1, 1, 1, 1],
            ]
        );

        let q = DhbMatrix::from_rows(&[vec![2, 2]]).unwrap();
        let (m, pos) = insert_row_sorted(&q, &[1, 1]).unwrap();
        assert_eq!(pos, 1);
        assert_eq!(m.matrix().to_rows(), vec![vec![2, 2], vec![1, 1]]);

        // ties with the top row land after it
        let (_, pos) = insert_row_sorted(&two_by_three(), &[2, 3, 5]).unwrap();
        assert_eq!(pos, 1);
    }

    #[test]
    fn insert_rejects_incompatible_rows() {
        assert!(matches!(
            insert_row_sorted(&two_by_three(), &[0, 0]),
            Err(MatrixError::RowLength {
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            insert_row_sorted(&two_by_three(), &[0, 0, 0]),
            Err(MatrixError::IncompatibleRow { col: 1, .. })
        ));
    }

    #[test]
    fn erase_examples() {
        let m = WellOrderedSquare::from_rows(&remark_matrix()).unwrap();
        let e = erase_row(&m, 0).unwrap();
        assert_eq!(e.candidate.matrix().get(0, 0), -1);
        assert!(!e.diag_well_formed);
        assert!(!e.is_valid());

        let m =
            WellOrderedSquare::from_rows(&[vec![2, 3, 5], vec![1, 2, 4], vec![0, 1, 3]]).unwrap();
        assert_eq!(m.degree(), 7);
        let e = erase_row(&m, 2).unwrap();
        assert_eq!(e.candidate, two_by_three());
        assert!(e.is_valid());

        let m = WellOrderedSquare::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(m.degree(), 0);
        for i in 0..2 {
            let e = erase_row(&m, i).unwrap();
            assert!(!e.max_diag_positive);
        }
        assert!(erase_row(&m, 2).is_err());
    }

    #[test]
    fn one_by_one_erases_to_empty_row() {
        let m = WellOrderedSquare::from_rows(&[vec![3]]).unwrap();
        let e = erase_row(&m, 0).unwrap();
        assert_eq!(e.candidate.n(), 1);
        assert_eq!(e.candidate.minor_degrees(), &[0]);
        assert!(e.candidate.shifts().is_empty());
        assert!(!e.max_diag_positive);
    }
}
