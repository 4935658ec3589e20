//! Decision procedures.
//!
//! [`representable`] answers whether a general plane curve of degree `d` is
//! the determinant of a matrix of forms with a given degree matrix. On the
//! well-ordered form the answer is yes exactly when
//!
//! 1. every diagonal entry `m[k][k]` is non-negative, and
//! 2. whenever a subdiagonal entry `m[k][k-1]` is negative, the trailing block
//!    obtained by erasing the first `k-1` rows and columns has degree `0` or `d`.
//!
//! [`contains_subscheme`] reduces the question "does a general curve of
//! degree `d` contain a scheme with dHB matrix `Q`" to the first one by
//! appending the row `(d - a[1], ..., d - a[n])`.
//!
//! Indices reported in a [`Decision`] count from 1, following the usual
//! `m[k][k-1]` convention, so `k` runs over `1..=n`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::degmatrix::{
    canonicalize, insert_row_sorted, DegreeMatrix, DhbMatrix, MatrixError, WellOrderedSquare,
};
use crate::resolution::BettiData;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("matrix has negative degree {0}")]
    NegativeDegree(i64),
    #[error("curve degree must be at least 1, got {0}")]
    NonPositiveCurveDegree(i64),
    /// Some `q[k][k] < 0`: no scheme has this dHB matrix.
    #[error("not a valid dHB matrix: q[{k}][{k}] < 0")]
    InvalidDhb { k: usize },
    /// Every `q[k][k] = 0`: the degeneracy locus is empty.
    #[error("dHB matrix describes the empty scheme (all diagonal entries are 0)")]
    EmptySchemeDegenerate,
    #[error("expected a 2x2 matrix, got {rows}x{cols}")]
    Not2x2 { rows: usize, cols: usize },
    /// The resolution has a generator and a syzygy of equal degree.
    #[error(
        "resolution is not numerically minimal: degree {0} is both a generator and a syzygy degree"
    )]
    NotMinimal(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reason {
    Ok,
    /// `d = 0` and the diagonal vanishes: the determinant is a general constant.
    DegreeZeroTrivial,
    /// `m[k][k] < 0`: the determinant is identically zero.
    DiagonalNegative {
        k: usize,
    },
    /// `m[k][k-1] < 0` and the trailing block from `k` has degree
    /// `block_degree` outside `{0, d}`: the determinant factors.
    SubdiagonalBlockDegree {
        k: usize,
        block_degree: i64,
    },
}

impl Reason {
    pub fn code(&self) -> &'static str {
        match self {
            Reason::Ok => "OK",
            Reason::DegreeZeroTrivial => "DegreeZeroTrivial",
            Reason::DiagonalNegative { .. } => "DiagonalNegative",
            Reason::SubdiagonalBlockDegree { .. } => "SubdiagonalBlockDegree",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub reason: Reason,
    /// Degree of `normalized`.
    pub degree: i64,
    /// The well-ordered square matrix the conditions were checked on.
    pub normalized: DegreeMatrix,
    /// 1-based position of the appended row, for subscheme questions.
    pub inserted_row: Option<usize>,
    /// `(k, e)` for every negative subdiagonal entry `m[k][k-1]`, with `e` the
    /// degree of the trailing block from `k`.
    pub trailing_degrees: Vec<(usize, i64)>,
}

/// Checks both conditions on an already well-ordered square matrix.
fn check_conditions(m: &WellOrderedSquare) -> (Verdict, Reason, Vec<(usize, i64)>) {
    let mat = m.matrix();
    let d = m.degree();
    let diag = mat.diagonal();
    let n = diag.len();

    // trailing[k] = sum of diag[k..]
    let mut trailing = vec![0i64; n + 1];
    for k in (0..n).rev() {
        trailing[k] = trailing[k + 1] + diag[k];
    }
    let trailing_degrees: Vec<(usize, i64)> = (1..n)
        .filter(|&k| mat.get(k, k - 1) < 0)
        .map(|k| (k + 1, trailing[k]))
        .collect();

    if let Some(k) = diag.iter().position(|&x| x < 0) {
        return (
            Verdict::No,
            Reason::DiagonalNegative { k: k + 1 },
            trailing_degrees,
        );
    }
    if let Some(&(k, e)) = trailing_degrees.iter().find(|&&(_, e)| e != 0 && e != d) {
        return (
            Verdict::No,
            Reason::SubdiagonalBlockDegree { k, block_degree: e },
            trailing_degrees,
        );
    }
    let reason = if d == 0 {
        Reason::DegreeZeroTrivial
    } else {
        Reason::Ok
    };
    (Verdict::Yes, reason, trailing_degrees)
}

fn decide_square(
    m: WellOrderedSquare,
    inserted_row: Option<usize>,
) -> Result<Decision, DecideError> {
    if m.degree() < 0 {
        return Err(DecideError::NegativeDegree(m.degree()));
    }
    let (verdict, reason, trailing_degrees) = check_conditions(&m);
    Ok(Decision {
        verdict,
        reason,
        degree: m.degree(),
        normalized: m.into_matrix(),
        inserted_row,
        trailing_degrees,
    })
}

/// Is a general form of degree `d` the determinant of a matrix of forms with
/// degree matrix `m`? `m` is canonicalized first.
pub fn representable(m: &DegreeMatrix) -> Result<Decision, DecideError> {
    let square = WellOrderedSquare::new(canonicalize(m).matrix)?;
    decide_square(square, None)
}

/// The closed-form answer for 2x2 matrices: yes iff `m[1][1]` is `0` or `d`,
/// or `m[2][1] >= 0`.
pub fn representable_2x2(m: &DegreeMatrix) -> Result<Decision, DecideError> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(DecideError::Not2x2 {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let square = WellOrderedSquare::new(canonicalize(m).matrix)?;
    let d = square.degree();
    if d < 0 {
        return Err(DecideError::NegativeDegree(d));
    }
    let mat = square.matrix();
    let (m11, m21, m22) = (mat.get(0, 0), mat.get(1, 0), mat.get(1, 1));
    let yes = m11 == 0 || m11 == d || m21 >= 0;
    let reason = if yes {
        if d == 0 {
            Reason::DegreeZeroTrivial
        } else {
            Reason::Ok
        }
    } else if m11 < 0 {
        Reason::DiagonalNegative { k: 1 }
    } else if m22 < 0 {
        Reason::DiagonalNegative { k: 2 }
    } else {
        Reason::SubdiagonalBlockDegree {
            k: 2,
            block_degree: m22,
        }
    };
    let trailing_degrees = if m21 < 0 { vec![(2, m22)] } else { Vec::new() };
    Ok(Decision {
        verdict: if yes { Verdict::Yes } else { Verdict::No },
        reason,
        degree: d,
        normalized: square.into_matrix(),
        inserted_row: None,
        trailing_degrees,
    })
}

fn require_valid(q: &DhbMatrix) -> Result<(), DecideError> {
    if let Some(k) = q.matrix().diagonal().iter().position(|&x| x < 0) {
        return Err(DecideError::InvalidDhb { k: k + 1 });
    }
    if !q.max_diagonal_positive() {
        return Err(DecideError::EmptySchemeDegenerate);
    }
    Ok(())
}

/// The square matrix obtained by appending `(d - a[j])_j` to `q`, and the
/// 0-based index where it landed.
pub fn augmented_matrix(q: &DhbMatrix, d: i64) -> Result<(WellOrderedSquare, usize), DecideError> {
    let row: Vec<i64> = q.minor_degrees().iter().map(|&a| d - a).collect();
    Ok(insert_row_sorted(q, &row)?)
}

/// Does a general plane curve of degree `d` contain a zero-dimensional
/// scheme whose dHB matrix is `q`?
pub fn contains_subscheme(q: &DhbMatrix, d: i64) -> Result<Decision, DecideError> {
    if d < 1 {
        return Err(DecideError::NonPositiveCurveDegree(d));
    }
    require_valid(q)?;
    let (square, position) = augmented_matrix(q, d)?;
    decide_square(square, Some(position + 1))
}

/// Which range of the shifts `d` falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CorollaryCase {
    /// `d >= b[1]`.
    AboveShifts,
    /// `d < b[n-1]`.
    BelowShifts,
    /// `b[i-1] > d >= b[i]`; `i` is 1-based.
    Between { i: usize },
}

impl CorollaryCase {
    pub fn tag(&self) -> &'static str {
        match self {
            CorollaryCase::AboveShifts => "i",
            CorollaryCase::BelowShifts => "ii",
            CorollaryCase::Between { .. } => "iii",
        }
    }
}

/// Closed-form answer for a numerically minimal `q`, by the position of `d`
/// among the shifts. The decision carries the same certificate that
/// [`contains_subscheme`] would produce, but its verdict and reason are
/// derived from the minor degrees and shifts alone.
pub fn corollary_case(q: &DhbMatrix, d: i64) -> Result<(Decision, CorollaryCase), DecideError> {
    if d < 1 {
        return Err(DecideError::NonPositiveCurveDegree(d));
    }
    require_valid(q)?;
    let betti = BettiData::from_dhb(q);
    if let Some(shared) = betti.shared_degree() {
        return Err(DecideError::NotMinimal(shared));
    }
    let a = q.minor_degrees();
    let b = q.shifts();
    let m = q.matrix();
    let n = q.n();
    // 0-based helpers over the rows of q
    let diag = |k: usize| m.get(k, k);
    let upper = |k: usize| m.get(k, k + 1);
    let sub = |k: usize| m.get(k, k - 1);

    let (case, reason) = if d >= b[0] {
        (CorollaryCase::AboveShifts, Reason::Ok)
    } else if d < b[n - 2] {
        // new row at the bottom; diagonal q[0..n-1], then d - a[n-1]
        let last = d - a[n - 1];
        let trailing_from = |k: usize| (k..n - 1).map(diag).sum::<i64>() + last;
        let reason = if last < 0 {
            Reason::DiagonalNegative { k: n }
        } else if let Some(k) = (1..n - 1).find(|&k| sub(k) < 0) {
            Reason::SubdiagonalBlockDegree {
                k: k + 1,
                block_degree: trailing_from(k),
            }
        } else if d != a[n - 1] && d < a[n - 2] {
            Reason::SubdiagonalBlockDegree {
                k: n,
                block_degree: last,
            }
        } else {
            Reason::Ok
        };
        (CorollaryCase::BelowShifts, reason)
    } else {
        // b[r-1] > d >= b[r] with r the 0-based row where the new row lands
        let r = (1..n - 1)
            .find(|&r| b[r - 1] > d && d >= b[r])
            .expect("shifts bracket d");
        let tail = (d - a[r]) + (r..n - 1).map(upper).sum::<i64>();
        let reason = if let Some(k) = (1..r).find(|&k| sub(k) < 0) {
            Reason::SubdiagonalBlockDegree {
                k: k + 1,
                block_degree: (k..r).map(diag).sum::<i64>() + tail,
            }
        } else if d < a[r - 1] {
            Reason::SubdiagonalBlockDegree {
                k: r + 1,
                block_degree: tail,
            }
        } else {
            Reason::Ok
        };
        (CorollaryCase::Between { i: r + 1 }, reason)
    };

    let (square, position) = augmented_matrix(q, d)?;
    let (_, _, trailing_degrees) = check_conditions(&square);
    let decision = Decision {
        verdict: if reason == Reason::Ok {
            Verdict::Yes
        } else {
            Verdict::No
        },
        reason,
        degree: square.degree(),
        normalized: square.into_matrix(),
        inserted_row: Some(position + 1),
        trailing_degrees,
    };
    Ok((decision, case))
}

/// The least `d` from which on a general curve of degree `d` contains a
/// scheme with dHB matrix `q`: the first `d` with a positive answer at which
/// the Hilbert function has reached the degree of the scheme. It never
/// exceeds `b[1]`.
pub fn stable_threshold(q: &DhbMatrix) -> Result<i64, DecideError> {
    require_valid(q)?;
    let betti = BettiData::from_dhb(q);
    let degree = betti.scheme_degree_unchecked();
    let top = q.shifts()[0];
    for d in 1..=top {
        if betti.hilbert_function(d) == degree && contains_subscheme(q, d)?.verdict.is_yes() {
            return Ok(d);
        }
    }
    unreachable!("a valid dHB matrix is contained in a general curve of degree b[1]")
}

/// Decisions for every `d` in `1..=dmax`.
pub fn scan(q: &DhbMatrix, dmax: i64) -> Result<Vec<(i64, Decision)>, DecideError> {
    require_valid(q)?;
    (1..=dmax)
        .into_par_iter()
        .map(|d| contains_subscheme(q, d).map(|dec| (d, dec)))
        .collect()
}

/// Tally of decisions over all well-ordered `n x n` matrices of degree
/// `degree` with entries in `[-bound, bound]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub total: usize,
    pub yes: usize,
    pub no: usize,
    pub by_reason: BTreeMap<String, usize>,
}

/// Non-increasing sequences of length `len` with values in `[lo, hi]`.
fn non_increasing(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn go(len: usize, lo: i64, hi: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let top = prefix.last().copied().unwrap_or(hi);
        for x in (lo..=top).rev() {
            prefix.push(x);
            go(len, lo, hi, prefix, out);
            prefix.pop();
        }
    }
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    if lo <= hi {
        go(len, lo, hi, &mut Vec::new(), &mut out);
    }
    out
}

pub fn census(n: usize, degree: i64, bound: i64) -> Census {
    if n == 0 {
        let mut c = Census::default();
        if degree == 0 {
            c.total = 1;
            c.yes = 1;
            c.by_reason
                .insert(Reason::DegreeZeroTrivial.code().to_string(), 1);
        }
        return c;
    }
    let rows = non_increasing(n, -bound, bound);
    rows.par_iter()
        .map(|u| {
            let mut c = Census::default();
            // v[0] = 0 <= v[1] <= ... <= v[n-1], with u[0] + v[n-1] <= bound
            let vmax = bound - u[0];
            for mut v in non_increasing(n - 1, 0, vmax) {
                v.reverse();
                v.insert(0, 0);
                if u.iter().sum::<i64>() + v.iter().sum::<i64>() != degree {
                    continue;
                }
                let m = DegreeMatrix::from_potentials(u.clone(), v);
                let dec = representable(&m).expect("degree is fixed and non-negative");
                c.total += 1;
                match dec.verdict {
                    Verdict::Yes => c.yes += 1,
                    Verdict::No => c.no += 1,
                }
                *c.by_reason
                    .entry(dec.reason.code().to_string())
                    .or_default() += 1;
            }
            c
        })
        .reduce(Census::default, |mut acc, c| {
            acc.total += c.total;
            acc.yes += c.yes;
            acc.no += c.no;
            for (k, v) in c.by_reason {
                *acc.by_reason.entry(k).or_default() += v;
            }
            acc
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> DegreeMatrix {
        DegreeMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn dhb(rows: &[&[i64]]) -> DhbMatrix {
        DhbMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn two_by_three() -> DhbMatrix {
        dhb(&[&[2, 3, 5], &[1, 2, 4]])
    }

    fn four_by_five() -> DhbMatrix {
        dhb(&[
            &[1, 1, 3, 3, 3],
            &[1, 1, 3, 3, 3],
            &[0, 0, 2, 2, 2],
            &[-1, -1, 1, 1, 1],
        ])
    }

    #[test]
    fn remark_matrix_is_representable() {
        let m = mat(&[
            &[0, 1, 10, 11],
            &[-1, 0, 9, 10],
            &[-5, -4, 5, 6],
            &[-8, -7, 2, 3],
        ]);
        let d = representable(&m).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        assert_eq!(d.degree, 8);
        assert_eq!(d.trailing_degrees, vec![(2, 8), (3, 8)]);
    }

    #[test]
    fn obstructions() {
        let d = representable(&mat(&[&[2, 3, 8], &[-3, -2, 3], &[-4, -3, 2]])).unwrap();
        assert_eq!(d.reason, Reason::DiagonalNegative { k: 2 });

        let d = representable(&mat(&[&[1, 3], &[-1, 1]])).unwrap();
        assert_eq!(
            d.reason,
            Reason::SubdiagonalBlockDegree {
                k: 2,
                block_degree: 1
            }
        );

        let d = representable(&mat(&[&[2, 3], &[-1, 0]])).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
    }

    #[test]
    fn degree_zero() {
        let d = representable(&mat(&[&[0, 1], &[-1, 0]])).unwrap();
        assert_eq!(d.reason, Reason::DegreeZeroTrivial);
        // the first column is forced to zero, so the determinant vanishes
        let d = representable(&mat(&[&[-1, 2], &[-2, 1]])).unwrap();
        assert_eq!(d.reason, Reason::DiagonalNegative { k: 1 });
        assert!(matches!(
            representable(&mat(&[&[-1, 0], &[-2, -1]])),
            Err(DecideError::NegativeDegree(-2))
        ));
        let d = representable(&DegreeMatrix::from_rows(&[]).unwrap()).unwrap();
        assert_eq!(d.reason, Reason::DegreeZeroTrivial);
    }

    #[test]
    fn two_by_two_examples() {
        for (m, yes) in [
            (mat(&[&[1, 1], &[1, 1]]), true),
            (mat(&[&[1, 3], &[-1, 1]]), false),
            (mat(&[&[3, 5], &[-2, 0]]), true),
        ] {
            let fast = representable_2x2(&m).unwrap();
            assert_eq!(fast.verdict.is_yes(), yes);
            assert_eq!(fast, representable(&m).unwrap());
        }
        assert!(representable_2x2(&mat(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn subscheme_examples() {
        let d = contains_subscheme(&two_by_three(), 4).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        assert_eq!(d.inserted_row, Some(3));

        let d = contains_subscheme(&two_by_three(), 5).unwrap();
        assert_eq!(
            d.reason,
            Reason::SubdiagonalBlockDegree {
                k: 3,
                block_degree: 1
            }
        );

        let d = contains_subscheme(&four_by_five(), 6).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        assert_eq!(d.inserted_row, Some(5));

        let d = contains_subscheme(&dhb(&[&[2, 2]]), 3).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
    }

    #[test]
    fn subscheme_errors() {
        let bad = dhb(&[&[-1, 0, 9, 10], &[-5, -4, 5, 6], &[-8, -7, 2, 3]]);
        assert_eq!(
            contains_subscheme(&bad, 8),
            Err(DecideError::InvalidDhb { k: 1 })
        );
        let empty = dhb(&[&[0, 1]]);
        assert_eq!(
            contains_subscheme(&empty, 3),
            Err(DecideError::EmptySchemeDegenerate)
        );
        assert_eq!(
            contains_subscheme(&two_by_three(), 0),
            Err(DecideError::NonPositiveCurveDegree(0))
        );
        // below a[n] the procedure itself says no
        let d = contains_subscheme(&two_by_three(), 2).unwrap();
        assert_eq!(d.reason, Reason::DiagonalNegative { k: 3 });
    }

    #[test]
    fn corollary_examples() {
        let (d, case) = corollary_case(&two_by_three(), 4).unwrap();
        assert_eq!(
            (case, d.verdict),
            (CorollaryCase::BelowShifts, Verdict::Yes)
        );
        let (d, case) = corollary_case(&two_by_three(), 5).unwrap();
        assert_eq!((case, d.verdict), (CorollaryCase::BelowShifts, Verdict::No));
        assert_eq!(
            d.reason,
            contains_subscheme(&two_by_three(), 5).unwrap().reason
        );
        let (d, case) = corollary_case(&two_by_three(), 9).unwrap();
        assert_eq!(
            (case, d.verdict),
            (CorollaryCase::AboveShifts, Verdict::Yes)
        );
        let (_, case) = corollary_case(&two_by_three(), 8).unwrap();
        assert_eq!(case, CorollaryCase::Between { i: 2 });
        assert_eq!(
            corollary_case(&four_by_five(), 6),
            Err(DecideError::NotMinimal(7))
        );
    }

    #[test]
    fn corollary_bottom_case_needs_subdiagonal() {
        // four collinear points plus one more: a = (4,2,2), b = (5,3)
        let q = dhb(&[&[1, 3, 3], &[-1, 1, 1]]);
        assert_eq!(q.minor_degrees(), &[4, 2, 2]);
        let (fast, case) = corollary_case(&q, 2).unwrap();
        assert_eq!(case, CorollaryCase::BelowShifts);
        assert_eq!(fast.verdict, Verdict::No);
        assert_eq!(fast, contains_subscheme(&q, 2).unwrap());
    }

    #[test]
    fn thresholds() {
        assert_eq!(stable_threshold(&two_by_three()).unwrap(), 7);
        assert_eq!(stable_threshold(&dhb(&[&[2, 2]])).unwrap(), 2);
        assert_eq!(stable_threshold(&four_by_five()).unwrap(), 6);
    }

    #[test]
    fn scans() {
        let verdicts: Vec<bool> = scan(&two_by_three(), 9)
            .unwrap()
            .into_iter()
            .map(|(_, d)| d.verdict.is_yes())
            .collect();
        assert_eq!(
            verdicts,
            vec![false, false, false, true, false, true, true, true, true]
        );
        let verdicts: Vec<bool> = scan(&dhb(&[&[1, 1]]), 3)
            .unwrap()
            .into_iter()
            .map(|(_, d)| d.verdict.is_yes())
            .collect();
        assert_eq!(verdicts, vec![true, true, true]);
        let last = scan(&four_by_five(), 6).unwrap().pop().unwrap();
        assert!(last.1.verdict.is_yes());
    }

    #[test]
    fn census_counts_every_matrix_once() {
        let c = census(2, 3, 3);
        assert_eq!(c.total, c.yes + c.no);
        assert_eq!(c.by_reason.values().sum::<usize>(), c.total);
        // brute force over u1 >= u2 in [-3,3], 0 <= v2, entries bounded
        let mut count = 0;
        for u1 in -3..=3i64 {
            for u2 in -3..=u1 {
                for v2 in 0..=3i64 {
                    if u1 + v2 <= 3 && u1 + u2 + v2 == 3 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(c.total, count);
    }
}
