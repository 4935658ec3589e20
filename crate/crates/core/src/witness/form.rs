//! Dense ternary forms over `F_p`.
//!
//! Coefficients of a degree-`m` form are stored in graded lexicographic
//! order with `x > y > z`: `x^m, x^{m-1}y, x^{m-1}z, x^{m-2}y², ..., z^m`.
//! The monomial `x^a y^b z^c` sits at index `(m-a)(m-a+1)/2 + (m-a-b)`.

use rand::Rng;

use super::field::PrimeField;

/// Number of monomials of degree `m` in three variables (0 for `m < 0`).
pub fn monomial_count(m: i64) -> usize {
    if m < 0 {
        0
    } else {
        let m = m as usize;
        (m + 2) * (m + 1) / 2
    }
}

#[inline]
pub fn monomial_index(m: usize, a: usize, b: usize) -> usize {
    let r = m - a;
    r * (r + 1) / 2 + (r - b)
}

/// Exponents `(a, b, c)` of the degree-`m` monomials, in storage order.
pub fn monomials(m: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(monomial_count(m as i64));
    for a in (0..=m).rev() {
        for b in (0..=m - a).rev() {
            out.push([a, b, m - a - b]);
        }
    }
    out
}

/// A homogeneous form of a fixed degree. A form of negative degree is the
/// zero form with no coefficients; it stands for an entry whose degree
/// forces it to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    degree: i64,
    coeffs: Vec<u64>,
}

impl Form {
    pub fn zero(degree: i64) -> Self {
        Form {
            degree,
            coeffs: vec![0; monomial_count(degree)],
        }
    }

    pub fn from_coeffs(degree: i64, coeffs: Vec<u64>) -> Self {
        assert_eq!(
            coeffs.len(),
            monomial_count(degree),
            "coefficient count for degree {degree}"
        );
        Form { degree, coeffs }
    }

    /// Independent uniform coefficients.
    pub fn random<R: Rng + ?Sized>(degree: i64, field: &PrimeField, rng: &mut R) -> Self {
        let coeffs = (0..monomial_count(degree))
            .map(|_| field.random(rng))
            .collect();
        Form { degree, coeffs }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, field: &PrimeField, point: [u64; 3]) -> u64 {
        if self.degree < 0 {
            return 0;
        }
        let m = self.degree as usize;
        let powers: Vec<Vec<u64>> = point
            .iter()
            .map(|&x| {
                let mut p = Vec::with_capacity(m + 1);
                let mut acc = 1;
                for _ in 0..=m {
                    p.push(acc);
                    acc = field.mul(acc, x);
                }
                p
            })
            .collect();
        let mut acc = 0;
        let mut idx = 0;
        for a in (0..=m).rev() {
            for b in (0..=m - a).rev() {
                let c = self.coeffs[idx];
                if c != 0 {
                    let mono =
                        field.mul(field.mul(powers[0][a], powers[1][b]), powers[2][m - a - b]);
                    acc = field.add(acc, field.mul(c, mono));
                }
                idx += 1;
            }
        }
        acc
    }

    pub fn mul(&self, other: &Form, field: &PrimeField) -> Form {
        let degree = self.degree + other.degree;
        let mut out = Form::zero(degree);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let (m1, m2) = (self.degree as usize, other.degree as usize);
        let m = m1 + m2;
        let right = monomials(m2);
        for (ea, &ca) in monomials(m1).iter().zip(&self.coeffs) {
            if ca == 0 {
                continue;
            }
            for (eb, &cb) in right.iter().zip(&other.coeffs) {
                if cb == 0 {
                    continue;
                }
                let k = monomial_index(m, ea[0] + eb[0], ea[1] + eb[1]);
                out.coeffs[k] = field.add(out.coeffs[k], field.mul(ca, cb));
            }
        }
        out
    }

    /// `self += other`, or `self -= other` when `negate`; both must have the same degree.
    pub fn add_assign(&mut self, other: &Form, negate: bool, field: &PrimeField) {
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degrees"
        );
        for (x, &y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x = if negate {
                field.sub(*x, y)
            } else {
                field.add(*x, y)
            };
        }
    }

    pub fn neg(mut self, field: &PrimeField) -> Form {
        for c in &mut self.coeffs {
            *c = field.neg(*c);
        }
        self
    }

    /// Coefficients of `x^α · self` in degree `degree + |α|`.
    pub fn shifted(&self, alpha: [usize; 3]) -> Vec<u64> {
        let m = self.degree as usize;
        let target = m + alpha[0] + alpha[1] + alpha[2];
        let mut out = vec![0; monomial_count(target as i64)];
        for (e, &c) in monomials(m).iter().zip(&self.coeffs) {
            out[monomial_index(target, e[0] + alpha[0], e[1] + alpha[1])] = c;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn indexing_matches_enumeration() {
        for m in 0..8 {
            let monos = monomials(m);
            assert_eq!(monos.len(), monomial_count(m as i64));
            for (i, e) in monos.iter().enumerate() {
                assert_eq!(monomial_index(m, e[0], e[1]), i);
            }
        }
        assert_eq!(monomials(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(monomial_count(2), 6);
        assert_eq!(monomial_count(5), 21);
        assert_eq!(monomial_count(-1), 0);
    }

    #[test]
    fn product_evaluates_pointwise() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Form::random(3, &f, &mut rng);
        let b = Form::random(4, &f, &mut rng);
        let ab = a.mul(&b, &f);
        assert_eq!(ab.degree(), 7);
        for _ in 0..5 {
            let p = [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)];
            assert_eq!(ab.eval(&f, p), f.mul(a.eval(&f, p), b.eval(&f, p)));
        }
    }

    #[test]
    fn shifting_is_multiplication_by_a_monomial() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = Form::random(2, &f, &mut rng);
        let mut mono = Form::zero(3);
        mono.coeffs[monomial_index(3, 1, 2)] = 1; // x y²
        assert_eq!(g.shifted([1, 2, 0]), g.mul(&mono, &f).coeffs);
    }

    #[test]
    fn negative_degree_is_zero() {
        let f = PrimeField::new(7).unwrap();
        let z = Form::zero(-3);
        assert!(z.is_zero());
        assert_eq!(z.eval(&f, [1, 2, 3]), 0);
        let prod = z.mul(&Form::from_coeffs(0, vec![5]), &f);
        assert_eq!(prod.degree(), -3);
    }
}
