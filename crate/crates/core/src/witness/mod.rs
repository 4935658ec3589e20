//! Randomized verification over a prime field.
//!
//! Matrices of random forms with a prescribed degree matrix are sampled and
//! their determinants measured by restriction to random lines. For subscheme
//! questions the maximal minors of the sampled Hilbert-Burch matrix are
//! computed exactly and the graded pieces of the ideal they generate are
//! compared against the predicted Hilbert function.
//!
//! Every trial draws from its own ChaCha stream (`seed`, trial index), so a
//! report is reproducible from its seed alone.

pub mod field;
pub mod form;
pub mod linalg;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::decide::{augmented_matrix, contains_subscheme, representable, DecideError, Reason};
use crate::degmatrix::{DegreeMatrix, DhbMatrix};
use crate::resolution::{monomial_count, BettiData};

pub use field::{PrimeField, DEFAULT_PRIME};
pub use form::Form;
use linalg::{interpolate, poly_degree, Echelon};

/// Largest matrix handled by the cofactor expansion.
pub const MAX_MINOR_SIZE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("prime {prime} is too small: need p > {needed}")]
    FieldTooSmall { prime: u64, needed: i64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected an (n-1)xn matrix, got {rows}x{cols}")]
    NotMaximalMinorShape { rows: usize, cols: usize },
    #[error("matrix of size {0} exceeds the cofactor expansion limit of {MAX_MINOR_SIZE}")]
    TooLarge(usize),
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Decide(#[from] DecideError),
}

/// A matrix of forms realizing a degree matrix.
#[derive(Clone, Debug)]
pub struct FormMatrix {
    degrees: DegreeMatrix,
    entries: Vec<Vec<Form>>,
}

impl FormMatrix {
    pub fn degrees(&self) -> &DegreeMatrix {
        &self.degrees
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.degrees.cols()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }

    pub fn eval(&self, f: &PrimeField, point: [u64; 3]) -> Vec<Vec<u64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.eval(f, point)).collect())
            .collect()
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> FormMatrix {
        FormMatrix {
            degrees: self.degrees.select(rows, cols),
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    pub fn without_row(&self, i: usize) -> FormMatrix {
        let rows: Vec<usize> = (0..self.rows()).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols()).collect();
        self.select(&rows, &cols)
    }
}

/// Random forms of the prescribed degrees; negative slots are zero.
pub fn sample_matrix<R: Rng + ?Sized>(m: &DegreeMatrix, f: &PrimeField, rng: &mut R) -> FormMatrix {
    let entries = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let deg = m.get(i, j);
                    if deg < 0 {
                        Form::zero(deg)
                    } else {
                        Form::random(deg, f, rng)
                    }
                })
                .collect()
        })
        .collect();
    FormMatrix {
        degrees: m.clone(),
        entries,
    }
}

/// The affine line `λ ↦ p + λ·q` through two random points.
#[derive(Clone, Copy, Debug)]
pub struct Line {
    pub p: [u64; 3],
    pub q: [u64; 3],
}

impl Line {
    pub fn random<R: Rng + ?Sized>(f: &PrimeField, rng: &mut R) -> Line {
        let mut pt = || [f.random(rng), f.random(rng), f.random(rng)];
        Line { p: pt(), q: pt() }
    }

    pub fn at(&self, f: &PrimeField, lambda: u64) -> [u64; 3] {
        [0, 1, 2].map(|k| f.add(self.p[k], f.mul(lambda, self.q[k])))
    }
}

/// `Σ_i max(0, max_j m[i][j])`: no determinant of forms with these degrees
/// can have larger degree.
pub fn degree_bound(m: &DegreeMatrix) -> i64 {
    (0..m.rows())
        .map(|i| m.row(i).iter().copied().max().unwrap_or(0).max(0))
        .sum()
}

/// Values of `det N` along `line` at `λ = 0..=bound`.
fn det_values(n: &FormMatrix, line: &Line, bound: i64, f: &PrimeField) -> Vec<u64> {
    (0..=bound as u64)
        .map(|lambda| linalg::det(n.eval(f, line.at(f, lambda)), f))
        .collect()
}

/// Degree in `λ` of the restriction to `line`, or `None` if it vanishes.
pub fn restricted_degree(n: &FormMatrix, line: &Line, f: &PrimeField) -> Option<i64> {
    let bound = degree_bound(n.degrees());
    poly_degree(&interpolate(&det_values(n, line, bound, f), f)).map(|d| d as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LineDegree {
    IdenticallyZero,
    ObservedDegree(i64),
}

/// Maximum degree of `det N` restricted to `lines` random lines.
pub fn det_degree_on_lines<R: Rng + ?Sized>(
    n: &FormMatrix,
    lines: usize,
    f: &PrimeField,
    rng: &mut R,
) -> Result<LineDegree, WitnessError> {
    if n.rows() != n.cols() {
        return Err(WitnessError::NotSquare {
            rows: n.rows(),
            cols: n.cols(),
        });
    }
    if lines == 0 {
        return Err(WitnessError::NoTrials);
    }
    let bound = degree_bound(n.degrees());
    check_field(f, bound)?;
    let best = (0..lines)
        .filter_map(|_| restricted_degree(n, &Line::random(f, rng), f))
        .max();
    Ok(best.map_or(LineDegree::IdenticallyZero, LineDegree::ObservedDegree))
}

fn check_field(f: &PrimeField, needed: i64) -> Result<(), WitnessError> {
    if (f.modulus() as i64) <= needed {
        return Err(WitnessError::FieldTooSmall {
            prime: f.modulus(),
            needed,
        });
    }
    Ok(())
}

/// Determinants of the leading `rows` rows against every `rows`-subset of
/// columns, indexed by column bitmask.
fn leading_minors(n: &FormMatrix, rows: usize, f: &PrimeField) -> Vec<Option<Form>> {
    let cols = n.cols();
    let u = n.degrees().row_potential();
    let v = n.degrees().col_potential();
    let mut layer: Vec<Option<Form>> = vec![None; 1 << cols];
    layer[0] = Some(Form::from_coeffs(0, vec![1]));
    let mut row_degree = 0;
    for r in 0..rows {
        row_degree += u[r];
        let mut next: Vec<Option<Form>> = vec![None; 1 << cols];
        for (mask, minor) in layer.iter().enumerate() {
            let Some(minor) = minor else { continue };
            for c in (0..cols).filter(|&c| mask & (1 << c) == 0) {
                let target = mask | (1 << c);
                let slot = next[target].get_or_insert_with(|| {
                    let deg = row_degree
                        + (0..cols)
                            .filter(|&j| target & (1 << j) != 0)
                            .map(|j| v[j])
                            .sum::<i64>();
                    Form::zero(deg)
                });
                let entry = n.entry(r, c);
                if entry.degree() < 0 || minor.degree() < 0 || entry.is_zero() || minor.is_zero() {
                    continue;
                }
                let pos = (target & ((1 << c) - 1)).count_ones() as usize;
                slot.add_assign(&entry.mul(minor, f), (r + pos) % 2 == 1, f);
            }
        }
        layer = next;
    }
    layer
}

/// The full trivariate determinant of a square matrix of forms.
pub fn determinant(n: &FormMatrix, f: &PrimeField) -> Result<Form, WitnessError> {
    if n.rows() != n.cols() {
        return Err(WitnessError::NotSquare {
            rows: n.rows(),
            cols: n.cols(),
        });
    }
    if n.rows() > MAX_MINOR_SIZE {
        return Err(WitnessError::TooLarge(n.rows()));
    }
    let size = n.rows();
    let mut minors = leading_minors(n, size, f);
    Ok(minors[(1 << size) - 1]
        .take()
        .expect("full column set is reached"))
}

/// Signed maximal minors of an `(n-1) x n` matrix: entry `j` is `(-1)^j`
/// times the determinant with column `j` erased.
pub fn maximal_minors(a: &FormMatrix, f: &PrimeField) -> Result<Vec<Form>, WitnessError> {
    let n = a.cols();
    if a.rows() + 1 != n {
        return Err(WitnessError::NotMaximalMinorShape {
            rows: a.rows(),
            cols: n,
        });
    }
    if n > MAX_MINOR_SIZE {
        return Err(WitnessError::TooLarge(n));
    }
    let mut minors = leading_minors(a, n - 1, f);
    let full = (1usize << n) - 1;
    Ok((0..n)
        .map(|j| {
            let m = minors[full ^ (1 << j)]
                .take()
                .expect("every (n-1)-subset is reached");
            if j % 2 == 1 {
                m.neg(f)
            } else {
                m
            }
        })
        .collect())
}

/// Echelon form of the degree-`t` piece of the ideal generated by `gens`.
pub fn ideal_piece(gens: &[Form], t: i64, f: &PrimeField) -> Echelon {
    let mut e = Echelon::new(monomial_count(t) as usize, *f);
    for g in gens {
        if g.degree() < 0 || g.degree() > t || g.is_zero() {
            continue;
        }
        for alpha in form::monomials((t - g.degree()) as usize) {
            if e.is_full() {
                return e;
            }
            e.insert(g.shifted(alpha));
        }
    }
    e
}

/// `dim_F (I)_t` for the ideal generated by `gens`.
pub fn ideal_dim(gens: &[Form], t: i64, f: &PrimeField) -> usize {
    if t < 0 {
        return 0;
    }
    ideal_piece(gens, t, f).rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub trial: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    pub seed: u64,
    pub prime: u64,
    pub trials: usize,
    pub verdict_checked: String,
    pub reason: String,
    /// Restricted determinant degree per trial; `None` when it vanished.
    pub observed_degrees: Vec<Option<i64>>,
    /// `P(t) - dim I_t` for `t = 0..=b[1]`, from the first trial.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hf_profile: Vec<i64>,
    /// Restricted degrees of the leading and trailing blocks per trial.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub block_splits: Vec<(Option<i64>, Option<i64>)>,
    pub mismatches: Vec<Mismatch>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Fraction of trials with no mismatch attributed to them.
    pub fn trial_success_rate(&self) -> f64 {
        let mut bad: Vec<usize> = self
            .mismatches
            .iter()
            .map(|m| m.trial)
            .filter(|&t| t < self.trials)
            .collect();
        bad.sort_unstable();
        bad.dedup();
        1.0 - bad.len() as f64 / self.trials as f64
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

struct RepTrial {
    degree: Option<i64>,
    split: Option<(Option<i64>, Option<i64>)>,
    problems: Vec<String>,
}

/// Samples `trials` matrices with degree matrix `m` (after well-ordering)
/// and checks that their determinants behave as the decision predicts.
pub fn verify_representable(
    m: &DegreeMatrix,
    trials: usize,
    f: &PrimeField,
    seed: u64,
) -> Result<WitnessReport, WitnessError> {
    if trials == 0 {
        return Err(WitnessError::NoTrials);
    }
    let decision = representable(m)?;
    let mat = &decision.normalized;
    let d = decision.degree;
    let bound = degree_bound(mat);
    check_field(f, bound)?;
    let size = mat.rows();

    let outcomes: Vec<RepTrial> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let n = sample_matrix(mat, f, &mut rng);
            let line = Line::random(f, &mut rng);
            let full = det_values(&n, &line, bound, f);
            let degree = poly_degree(&interpolate(&full, f)).map(|x| x as i64);
            let mut problems = Vec::new();
            let mut split = None;
            match decision.reason {
                Reason::Ok | Reason::DegreeZeroTrivial => {
                    if degree.is_some_and(|x| x > d) {
                        problems.push(format!("restricted degree {} exceeds {d}", degree.unwrap()));
                    }
                }
                Reason::DiagonalNegative { k } => {
                    if let Some(x) = degree {
                        problems.push(format!(
                            "m[{k}][{k}] < 0 but the determinant has degree {x} on a line"
                        ));
                    }
                }
                Reason::SubdiagonalBlockDegree { k, block_degree: e } => {
                    let lead: Vec<usize> = (0..k - 1).collect();
                    let trail: Vec<usize> = (k - 1..size).collect();
                    let nl = n.select(&lead, &lead);
                    let nt = n.select(&trail, &trail);
                    let vl = det_values(&nl, &line, bound, f);
                    let vt = det_values(&nt, &line, bound, f);
                    if full
                        .iter()
                        .zip(vl.iter().zip(&vt))
                        .any(|(&x, (&l, &t))| x != f.mul(l, t))
                    {
                        problems.push(format!(
                            "determinant is not the product of the blocks split at row {k}"
                        ));
                    }
                    let dl = poly_degree(&interpolate(&vl, f)).map(|x| x as i64);
                    let dt = poly_degree(&interpolate(&vt, f)).map(|x| x as i64);
                    if dl.is_some_and(|x| x > d - e) || dt.is_some_and(|x| x > e) {
                        problems.push(format!(
                            "block degrees {dl:?}, {dt:?} exceed {} + {e}",
                            d - e
                        ));
                    }
                    split = Some((dl, dt));
                }
            }
            RepTrial {
                degree,
                split,
                problems,
            }
        })
        .collect();

    let mut mismatches: Vec<Mismatch> = outcomes
        .iter()
        .enumerate()
        .flat_map(|(trial, o)| {
            o.problems.iter().map(move |p| Mismatch {
                trial,
                message: p.clone(),
            })
        })
        .collect();
    match decision.reason {
        Reason::Ok | Reason::DegreeZeroTrivial => {
            if !outcomes.iter().any(|o| o.degree == Some(d)) {
                mismatches.push(Mismatch {
                    trial: trials,
                    message: format!("degree {d} never observed in {trials} trials (seed {seed})"),
                });
            }
        }
        Reason::SubdiagonalBlockDegree { k, block_degree: e } => {
            // The split is only forced when both blocks are themselves general.
            let lead: Vec<usize> = (0..k - 1).collect();
            let trail: Vec<usize> = (k - 1..size).collect();
            let blocks_general = [mat.select(&lead, &lead), mat.select(&trail, &trail)]
                .iter()
                .all(|b| representable(b).is_ok_and(|dec| dec.verdict.is_yes()));
            let wanted = (Some(d - e), Some(e));
            if blocks_general && !outcomes.iter().any(|o| o.split == Some(wanted)) {
                mismatches.push(Mismatch {
                    trial: trials,
                    message: format!(
                        "split {} + {e} never observed in {trials} trials (seed {seed})",
                        d - e
                    ),
                });
            }
        }
        Reason::DiagonalNegative { .. } => {}
    }

    Ok(WitnessReport {
        seed,
        prime: f.modulus(),
        trials,
        verdict_checked: decision.verdict.as_str().to_string(),
        reason: decision.reason.code().to_string(),
        observed_degrees: outcomes.iter().map(|o| o.degree).collect(),
        hf_profile: Vec::new(),
        block_splits: outcomes.iter().filter_map(|o| o.split).collect(),
        mismatches,
    })
}

struct SubTrial {
    degree: Option<i64>,
    hf: Vec<i64>,
    problems: Vec<String>,
}

/// Samples the matrix obtained by appending a row for degree `d` to `q`.
/// Every trial checks the Hilbert function of the minor ideal up to `b[1]`;
/// when the decision is yes it also checks that the determinant has degree
/// `d` on a random line and lies in the degree-`d` piece of the minor ideal.
pub fn verify_subscheme(
    q: &DhbMatrix,
    d: i64,
    trials: usize,
    f: &PrimeField,
    seed: u64,
) -> Result<WitnessReport, WitnessError> {
    if trials == 0 {
        return Err(WitnessError::NoTrials);
    }
    let decision = contains_subscheme(q, d)?;
    let (square, pos) = augmented_matrix(q, d)?;
    let size = square.size();
    if size > MAX_MINOR_SIZE {
        return Err(WitnessError::TooLarge(size));
    }
    let mat = square.matrix();
    let bound = degree_bound(mat);
    check_field(f, bound)?;
    let betti = BettiData::from_dhb(q);
    let top = betti.syz()[0];
    let yes = decision.verdict.is_yes();

    let outcomes: Vec<SubTrial> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let n = sample_matrix(mat, f, &mut rng);
            let line = Line::random(f, &mut rng);
            let mut problems = Vec::new();

            let a = n.without_row(pos);
            let minors = maximal_minors(&a, f).expect("size checked");
            let hf: Vec<i64> = (0..=top)
                .map(|t| monomial_count(t) - ideal_dim(&minors, t, f) as i64)
                .collect();
            for (t, &h) in hf.iter().enumerate() {
                let want = betti.hilbert_function(t as i64);
                if h != want {
                    problems.push(format!("HF({t}) = {h}, expected {want}"));
                }
            }

            let values = det_values(&n, &line, bound, f);
            let degree = poly_degree(&interpolate(&values, f)).map(|x| x as i64);
            if yes {
                let det = determinant(&n, f).expect("size checked");
                let on_line: Vec<u64> = (0..=bound as u64)
                    .map(|l| det.eval(f, line.at(f, l)))
                    .collect();
                if on_line != values {
                    problems.push(
                        "determinant does not commute with restriction to a line".to_string(),
                    );
                }
                if degree != Some(d) {
                    problems.push(format!(
                        "restricted determinant has degree {degree:?}, expected {d}"
                    ));
                }
                if !ideal_piece(&minors, d, f).contains(det.coeffs()) {
                    problems.push(format!(
                        "determinant is not in the degree-{d} piece of the minor ideal"
                    ));
                }
            }
            SubTrial {
                degree,
                hf,
                problems,
            }
        })
        .collect();

    let mismatches = outcomes
        .iter()
        .enumerate()
        .flat_map(|(trial, o)| {
            o.problems.iter().map(move |p| Mismatch {
                trial,
                message: p.clone(),
            })
        })
        .collect();
    Ok(WitnessReport {
        seed,
        prime: f.modulus(),
        trials,
        verdict_checked: decision.verdict.as_str().to_string(),
        reason: decision.reason.code().to_string(),
        observed_degrees: outcomes.iter().map(|o| o.degree).collect(),
        hf_profile: outcomes[0].hf.clone(),
        block_splits: Vec::new(),
        mismatches,
    })
}
