//! Numerical invariants of a zero-dimensional scheme `Z` in the plane with
//! resolution
//!
//! ```text
//! 0 -> ⊕ O(-b_i) -> ⊕ O(-a_j) -> I_Z -> 0      (n-1 syzygies, n generators)
//! ```
//!
//! The Hilbert function of `Z` is the Euler characteristic of the
//! resolution: `HF(t) = P(t) - Σ P(t - a_j) + Σ P(t - b_i)`, where
//! `P(x) = (x+2)(x+1)/2` is the number of monomials of degree `x` in three
//! variables and `P(x) = 0` for `x < 0`.

use serde::Serialize;
use thiserror::Error;

use crate::degmatrix::{DegreeMatrix, DhbMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("{gens} generators need {} syzygies, got {syz}", gens.saturating_sub(1))]
    LengthMismatch { gens: usize, syz: usize },
    #[error("generator degrees sum to {gens}, syzygy degrees to {syz}")]
    DegreeSumMismatch { gens: i64, syz: i64 },
    /// A single generator: the ideal is principal, not of a finite scheme.
    #[error("resolution has no syzygies, so the scheme is not zero-dimensional")]
    NotZeroDimensional,
    #[error("(Σb² - Σa²)/2 is not an integer")]
    NonIntegral,
    #[error("scheme degree {0} is not positive")]
    NonPositive(i64),
    #[error("h-vector {0:?} is not admissible")]
    InadmissibleHVector(Vec<i64>),
    #[error("h-vector has a negative entry")]
    NegativeEntry,
}

/// Number of monomials of degree `x` in three variables.
pub fn monomial_count(x: i64) -> i64 {
    if x < 0 {
        0
    } else {
        (x + 2) * (x + 1) / 2
    }
}

/// Generator degrees `a` (n values) and syzygy degrees `b` (n-1 values), both
/// kept non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BettiData {
    gens: Vec<i64>,
    syz: Vec<i64>,
}

impl BettiData {
    pub fn new(mut gens: Vec<i64>, mut syz: Vec<i64>) -> Result<Self, ResolutionError> {
        if gens.len() != syz.len() + 1 {
            return Err(ResolutionError::LengthMismatch {
                gens: gens.len(),
                syz: syz.len(),
            });
        }
        if syz.is_empty() {
            return Err(ResolutionError::NotZeroDimensional);
        }
        let (sa, sb) = (gens.iter().sum::<i64>(), syz.iter().sum::<i64>());
        if sa != sb {
            return Err(ResolutionError::DegreeSumMismatch { gens: sa, syz: sb });
        }
        gens.sort_unstable_by(|x, y| y.cmp(x));
        syz.sort_unstable_by(|x, y| y.cmp(x));
        Ok(BettiData { gens, syz })
    }

    /// Reads `a` and `b` off a dHB matrix with at least one row.
    pub fn from_dhb(q: &DhbMatrix) -> Self {
        assert!(q.n() >= 2, "a dHB matrix with no rows has no syzygies");
        BettiData {
            gens: q.minor_degrees().to_vec(),
            syz: q.shifts().to_vec(),
        }
    }

    /// The well-ordered dHB matrix `q[i][j] = b[i] - a[j]`.
    pub fn to_dhb(&self) -> DhbMatrix {
        let row = self.syz.clone();
        let col = self.gens.iter().map(|&a| -a).collect();
        DhbMatrix::new(DegreeMatrix::from_potentials(row, col))
            .expect("sorted Betti data give a well-ordered (n-1)xn matrix")
    }

    pub fn gens(&self) -> &[i64] {
        &self.gens
    }

    pub fn syz(&self) -> &[i64] {
        &self.syz
    }

    /// `(Σ b² - Σ a²) / 2`, which must be a positive integer.
    pub fn scheme_degree(&self) -> Result<i64, ResolutionError> {
        let twice = self.syz.iter().map(|b| b * b).sum::<i64>()
            - self.gens.iter().map(|a| a * a).sum::<i64>();
        if twice % 2 != 0 {
            return Err(ResolutionError::NonIntegral);
        }
        if twice <= 0 {
            return Err(ResolutionError::NonPositive(twice / 2));
        }
        Ok(twice / 2)
    }

    pub(crate) fn scheme_degree_unchecked(&self) -> i64 {
        (self.syz.iter().map(|b| b * b).sum::<i64>() - self.gens.iter().map(|a| a * a).sum::<i64>())
            / 2
    }

    pub fn hilbert_function(&self, t: i64) -> i64 {
        if t < 0 {
            return 0;
        }
        monomial_count(t)
            - self
                .gens
                .iter()
                .map(|&a| monomial_count(t - a))
                .sum::<i64>()
            + self.syz.iter().map(|&b| monomial_count(t - b)).sum::<i64>()
    }

    /// `h⁰(I_Z(t))`: the dimension of the degree-`t` part of the ideal.
    pub fn h0_ideal(&self, t: i64) -> i64 {
        monomial_count(t) - self.hilbert_function(t)
    }

    /// `b[1] - 2`; the Hilbert function equals the degree from here on.
    pub fn stabilization_bound(&self) -> i64 {
        self.syz[0] - 2
    }

    /// A generator degree that is also a syzygy degree, if any.
    pub fn shared_degree(&self) -> Option<i64> {
        self.gens.iter().copied().find(|a| self.syz.contains(a))
    }

    /// No generator degree equals a syzygy degree.
    pub fn is_numerically_minimal(&self) -> bool {
        self.shared_degree().is_none()
    }

    /// Cancels every pair of equal generator and syzygy degrees.
    pub fn minimalize(&self) -> Result<BettiData, ResolutionError> {
        let mut gens = self.gens.clone();
        let mut syz = Vec::with_capacity(self.syz.len());
        for &b in &self.syz {
            match gens.iter().position(|&a| a == b) {
                Some(idx) => {
                    gens.remove(idx);
                }
                None => syz.push(b),
            }
        }
        BettiData::new(gens, syz)
    }

    /// First difference of the Hilbert function, up to the stabilization
    /// bound.
    pub fn hvector(&self) -> HVector {
        let last = self.stabilization_bound().max(0);
        let h = (0..=last)
            .map(|t| self.hilbert_function(t) - self.hilbert_function(t - 1))
            .collect();
        HVector::new(h).expect("valid Betti data have a non-negative h-vector")
    }

    /// `dim I(d) = dim T + h⁰(I_Z(d)) - 1` for the incidence variety of
    /// degree-`d` curves through schemes of a stratum `T`, and whether the
    /// necessary dominance condition `dim T >= HF(d)` holds.
    pub fn incidence_dimension(&self, stratum_dim: i64, d: i64) -> IncidenceDimension {
        IncidenceDimension {
            dimension: stratum_dim + self.h0_ideal(d) - 1,
            dominance_possible: stratum_dim >= self.hilbert_function(d),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceDimension {
    pub dimension: i64,
    pub dominance_possible: bool,
}

/// A finitely supported sequence of non-negative integers, stored without
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HVector(Vec<i64>);

impl HVector {
    pub fn new(mut h: Vec<i64>) -> Result<Self, ResolutionError> {
        if h.iter().any(|&x| x < 0) {
            return Err(ResolutionError::NegativeEntry);
        }
        while h.last() == Some(&0) {
            h.pop();
        }
        Ok(HVector(h))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Partial sums: the Hilbert function for `t = 0..len`.
    pub fn hilbert_function(&self) -> Vec<i64> {
        self.0
            .iter()
            .scan(0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    /// `HF(t)` for any `t`.
    pub fn hilbert_function_at(&self, t: i64) -> i64 {
        if t < 0 {
            return 0;
        }
        self.0.iter().take(t as usize + 1).sum()
    }
}

/// Two-variable Macaulay growth: `h[0] = 1`, `h[t+1] <= h[t] + 1`, and
/// `h[t+1] <= h[t]` as soon as `h[t] <= t`. With a curve degree `d`,
/// additionally `h[t] <= d`.
pub fn is_admissible_hvector(h: &[i64], curve_degree: Option<i64>) -> bool {
    if h.first() != Some(&1) || h.iter().any(|&x| x < 0) {
        return false;
    }
    if let Some(d) = curve_degree {
        if h.iter().any(|&x| x > d) {
            return false;
        }
    }
    h.windows(2).enumerate().all(|(t, w)| {
        let bound = if w[0] <= t as i64 { w[0] } else { w[0] + 1 };
        w[1] <= bound
    })
}

/// The cancellation-free Betti numbers of an h-vector, read off the
/// coefficients of `(1 - s)² Σ h[t] sᵗ = 1 - Σ s^{a_j} + Σ s^{b_i}`.
pub fn generic_betti(h: &HVector) -> Result<BettiData, ResolutionError> {
    let v = h.values();
    if !is_admissible_hvector(v, None) {
        return Err(ResolutionError::InadmissibleHVector(v.to_vec()));
    }
    let at = |t: i64| -> i64 {
        if t < 0 {
            0
        } else {
            v.get(t as usize).copied().unwrap_or(0)
        }
    };
    let mut gens = Vec::new();
    let mut syz = Vec::new();
    for t in 1..=(v.len() as i64 + 1) {
        let c = at(t) - 2 * at(t - 1) + at(t - 2);
        if c < 0 {
            gens.extend(std::iter::repeat_n(t, (-c) as usize));
        } else if c > 0 {
            syz.extend(std::iter::repeat_n(t, c as usize));
        }
    }
    BettiData::new(gens, syz)
}
