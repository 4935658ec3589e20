//! Linear series on a general plane curve.
//!
//! On a smooth plane curve `C` of degree `d` the canonical series is cut by
//! curves of degree `d - 3`, so for a divisor `D` (viewed as a scheme in the
//! plane with Hilbert function `HF`) and any `t`
//!
//! ```text
//! h⁰(O_C(t) - D) = P(t) - P(t - d) - HF(t)
//! ```
//!
//! and Riemann-Roch turns questions about `D + zH` into conditions on
//! `HF(d - 3 - z)`. A complete `g^r_δ` requires `h⁰(K - D) = r - δ + g`,
//! i.e. a fixed value of `HF(d - 3)`.

use serde::Serialize;
use thiserror::Error;

use crate::decide::{contains_subscheme, DecideError, Decision};
use crate::resolution::{
    generic_betti, is_admissible_hvector, monomial_count, BettiData, HVector, ResolutionError,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("curve degree must be at least 4, got {0}")]
    CurveDegree(i64),
    #[error("divisor degree must be positive, got {0}")]
    DivisorDegree(i64),
    #[error("series dimension must be non-negative, got {0}")]
    SeriesDim(i64),
    /// `h⁰(K - D)` would be negative or exceed the number of adjoint curves.
    #[error("no complete g^{r}_{delta} can exist: h0(K-D) would be {speciality}")]
    InfeasibleQuery { r: i64, delta: i64, speciality: i64 },
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Decide(#[from] DecideError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum PropertyKind {
    /// `D + zH` is non-special.
    Nonspecial,
    /// `D + zH` is effective.
    Effective,
}

/// A property of `D + zH`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftedProperty {
    pub shift: i64,
    pub kind: PropertyKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesQuery {
    pub curve_degree: i64,
    pub divisor_degree: i64,
    pub series_dim: i64,
    pub properties: Vec<ShiftedProperty>,
}

impl SeriesQuery {
    fn validate(&self) -> Result<(), SeriesError> {
        if self.curve_degree < 4 {
            return Err(SeriesError::CurveDegree(self.curve_degree));
        }
        if self.divisor_degree < 1 {
            return Err(SeriesError::DivisorDegree(self.divisor_degree));
        }
        if self.series_dim < 0 {
            return Err(SeriesError::SeriesDim(self.series_dim));
        }
        Ok(())
    }
}

pub fn genus(d: i64) -> i64 {
    (d - 1) * (d - 2) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", content = "value", rename_all = "camelCase")]
pub enum Bound {
    Equal(i64),
    AtMost(i64),
}

/// A condition on `HF(level)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HfConstraint {
    pub level: i64,
    pub bound: Bound,
}

impl HfConstraint {
    pub fn holds(&self, hf_at_level: i64) -> bool {
        match self.bound {
            Bound::Equal(v) => hf_at_level == v,
            Bound::AtMost(v) => hf_at_level <= v,
        }
    }

    pub fn holds_for(&self, h: &HVector) -> bool {
        self.holds(h.hilbert_function_at(self.level))
    }
}

/// The completeness condition and one condition per requested property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesConstraints {
    pub genus: i64,
    pub complete: HfConstraint,
    pub properties: Vec<HfConstraint>,
}

/// `h⁰(O_C(t) - D) = 0` expressed on the Hilbert function, for `t < 0` this
/// always holds.
fn curve_sections(t: i64, d: i64) -> i64 {
    monomial_count(t) - monomial_count(t - d)
}

pub fn hf_constraints(q: &SeriesQuery) -> Result<SeriesConstraints, SeriesError> {
    q.validate()?;
    let d = q.curve_degree;
    let delta = q.divisor_degree;
    let g = genus(d);
    let adjoint = d - 3;
    // h⁰(K - D) for a complete g^r_δ
    let speciality = q.series_dim - delta + g;
    if speciality < 0 || speciality > monomial_count(adjoint) {
        return Err(SeriesError::InfeasibleQuery {
            r: q.series_dim,
            delta,
            speciality,
        });
    }
    let complete = HfConstraint {
        level: adjoint,
        bound: Bound::Equal(monomial_count(adjoint) - speciality),
    };
    let properties = q
        .properties
        .iter()
        .map(|p| {
            let t = adjoint - p.shift;
            let bound = match p.kind {
                // h⁰(K - D - zH) = 0
                PropertyKind::Nonspecial => Bound::Equal(curve_sections(t, d)),
                // δ + zd - g + 1 + h⁰(K - D - zH) > 0
                PropertyKind::Effective => {
                    Bound::AtMost(curve_sections(t, d) + delta + p.shift * d - g)
                }
            };
            HfConstraint { level: t, bound }
        })
        .collect();
    Ok(SeriesConstraints {
        genus: g,
        complete,
        properties,
    })
}

/// Every admissible h-vector of total `total` with entries at most
/// `curve_degree` that satisfies all `constraints`. Sorted lexicographically
/// in decreasing order.
pub fn enumerate_hvectors(
    total: i64,
    constraints: &[HfConstraint],
    curve_degree: i64,
) -> Vec<HVector> {
    struct Search<'a> {
        total: i64,
        constraints: &'a [HfConstraint],
        cap: i64,
        out: Vec<HVector>,
    }

    impl Search<'_> {
        // `h` is non-empty with partial sum `sum`
        fn extend(&mut self, h: &mut Vec<i64>, sum: i64) {
            let t = h.len() as i64 - 1;
            if self
                .constraints
                .iter()
                .any(|c| c.level == t && !c.holds(sum))
            {
                return;
            }
            if sum == self.total {
                // from here on HF is constant
                if self
                    .constraints
                    .iter()
                    .all(|c| c.level <= t || c.holds(sum))
                {
                    self.out
                        .push(HVector::new(h.clone()).expect("non-negative"));
                }
                return;
            }
            let last = *h.last().expect("starts at h[0] = 1");
            let growth = if last <= t { last } else { last + 1 };
            let top = growth.min(self.cap).min(self.total - sum);
            for next in (1..=top).rev() {
                h.push(next);
                self.extend(h, sum + next);
                h.pop();
            }
        }
    }

    if total < 1 || curve_degree < 1 {
        return Vec::new();
    }
    // constraints below level 0 only see HF = 0
    if constraints.iter().any(|c| c.level < 0 && !c.holds(0)) {
        return Vec::new();
    }
    let mut search = Search {
        total,
        constraints,
        cap: curve_degree,
        out: Vec::new(),
    };
    search.extend(&mut vec![1], 1);
    search.out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRow {
    pub hvector: HVector,
    pub betti: BettiData,
    pub decision: Decision,
    /// One flag per query property, in order.
    pub properties: Vec<bool>,
}

impl SeriesRow {
    pub fn exists_on_general_curve(&self) -> bool {
        self.decision.verdict.is_yes()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesAnswer {
    pub genus: i64,
    /// `None` when no complete series of this kind can exist.
    pub constraints: Option<SeriesConstraints>,
    pub rows: Vec<SeriesRow>,
}

/// Lists the Hilbert functions a divisor of a complete `g^r_δ` can have, and
/// for each whether a general curve of degree `d` carries such a divisor
/// (judged on the generic Betti numbers of the h-vector).
pub fn analyze(q: &SeriesQuery) -> Result<SeriesAnswer, SeriesError> {
    let constraints = match hf_constraints(q) {
        Ok(c) => c,
        Err(SeriesError::InfeasibleQuery { .. }) => {
            return Ok(SeriesAnswer {
                genus: genus(q.curve_degree),
                constraints: None,
                rows: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let hvectors = enumerate_hvectors(q.divisor_degree, &[constraints.complete], q.curve_degree);
    let mut rows = Vec::with_capacity(hvectors.len());
    for h in hvectors {
        debug_assert!(is_admissible_hvector(h.values(), Some(q.curve_degree)));
        let betti = generic_betti(&h)?;
        let decision = contains_subscheme(&betti.to_dhb(), q.curve_degree)?;
        let properties = constraints
            .properties
            .iter()
            .map(|c| c.holds_for(&h))
            .collect();
        rows.push(SeriesRow {
            hvector: h,
            betti,
            decision,
            properties,
        });
    }
    Ok(SeriesAnswer {
        genus: constraints.genus,
        constraints: Some(constraints),
        rows,
    })
}
