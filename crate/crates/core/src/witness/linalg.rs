//! Dense linear algebra over `F_p`: determinants, interpolation, and an
//! incremental row echelon form for rank computations.

use super::field::PrimeField;

/// Determinant by Gaussian elimination. Consumes the matrix.
pub fn det(mut a: Vec<Vec<u64>>, f: &PrimeField) -> u64 {
    let n = a.len();
    let mut acc = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            acc = f.neg(acc);
        }
        let pivot = a[c][c];
        acc = f.mul(acc, pivot);
        let inv = f.inv(pivot);
        for r in c + 1..n {
            if a[r][c] == 0 {
                continue;
            }
            let factor = f.mul(a[r][c], inv);
            let (top, bottom) = a.split_at_mut(r);
            let src = &top[c];
            for (x, &y) in bottom[0][c..].iter_mut().zip(&src[c..]) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
    }
    acc
}

/// Coefficients (constant term first) of the unique polynomial of degree
/// below `ys.len()` taking value `ys[k]` at `k = 0, 1, ...`.
pub fn interpolate(ys: &[u64], f: &PrimeField) -> Vec<u64> {
    let n = ys.len();
    // Newton divided differences on the nodes 0..n
    let mut c = ys.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let span = f.inv(level as u64 % f.modulus());
            c[k] = f.mul(f.sub(c[k], c[k - 1]), span);
        }
    }
    // Horner in the Newton basis: p = c0 + (x - 0)(c1 + (x - 1)(c2 + ...))
    let mut poly = vec![0u64; n];
    for k in (0..n).rev() {
        // poly <- poly * (x - k) + c[k]
        let node = f.from_i64(k as i64);
        let mut next = vec![0u64; n];
        for (i, &coef) in poly.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            if i + 1 < n {
                next[i + 1] = f.add(next[i + 1], coef);
            }
            next[i] = f.sub(next[i], f.mul(coef, node));
        }
        next[0] = f.add(next[0], c[k]);
        poly = next;
    }
    poly
}

/// Index of the highest non-zero coefficient, or `None` for the zero polynomial.
pub fn poly_degree(poly: &[u64]) -> Option<usize> {
    poly.iter().rposition(|&c| c != 0)
}

/// Row echelon form built one row at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    width: usize,
    /// `pivots[c]` is the stored row whose leading entry (equal to 1) sits in column `c`.
    pivots: Vec<Option<Vec<u64>>>,
    rank: usize,
}

impl Echelon {
    pub fn new(width: usize, field: PrimeField) -> Self {
        Echelon {
            field,
            width,
            pivots: vec![None; width],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.width
    }

    /// Adds `row` to the span. Returns whether the rank went up.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        assert_eq!(row.len(), self.width, "row width");
        let f = self.field;
        for c in 0..self.width {
            let x = row[c];
            if x == 0 {
                continue;
            }
            match &self.pivots[c] {
                Some(stored) => {
                    for (y, &s) in row[c..].iter_mut().zip(&stored[c..]) {
                        if s != 0 {
                            *y = f.sub(*y, f.mul(x, s));
                        }
                    }
                }
                None => {
                    let inv = f.inv(x);
                    for y in row[c..].iter_mut() {
                        *y = f.mul(*y, inv);
                    }
                    self.pivots[c] = Some(row);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    /// Whether `row` already lies in the span. Leaves the echelon unchanged.
    pub fn contains(&self, row: &[u64]) -> bool {
        !self.clone().insert(row.to_vec())
    }
}
