//! Sparse Laurent polynomials with exact rational coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Rat;

/// Map exponent -> coefficient; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rat::one())
    }

    /// c * v^e.
    pub fn monomial(exp: i64, coeff: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.coeffs.iter()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, coeff: &Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add_assign(&mut self, other: &LaurentPoly) {
        for (&e, c) in &other.coeffs {
            self.add_term(e, c);
        }
    }

    pub fn sub_assign(&mut self, other: &LaurentPoly) {
        for (&e, c) in &other.coeffs {
            self.add_term(e, &(-c.clone()));
        }
    }

    /// self += c * other.
    pub fn add_scaled(&mut self, other: &LaurentPoly, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (&e, k) in &other.coeffs {
            self.add_term(e, &(c * k));
        }
    }

    /// self += v^shift * other.
    pub fn add_shifted(&mut self, other: &LaurentPoly, shift: i64) {
        for (&e, c) in &other.coeffs {
            self.add_term(e + shift, c);
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &other.coeffs {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    /// Value at v = 1: the sum of all coefficients.
    pub fn eval_at_one(&self) -> Rat {
        self.coeffs.values().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(Rat::is_integer)
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*v")?,
                _ => write!(f, "{c}*v^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn v_pow(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(e, rat_int(1))
    }

    #[test]
    fn no_zero_coefficients_survive() {
        let mut p = v_pow(2);
        p.add_term(2, &rat_int(-1));
        assert!(p.is_zero());
    }

    #[test]
    fn multiplication_adds_exponents() {
        // (v + v^-1)^2 = v^2 + 2 + v^-2
        let mut p = v_pow(1);
        p.add_assign(&v_pow(-1));
        let sq = p.mul(&p);
        assert_eq!(sq.coeff(2), rat_int(1));
        assert_eq!(sq.coeff(0), rat_int(2));
        assert_eq!(sq.coeff(-2), rat_int(1));
        assert_eq!(sq.eval_at_one(), rat_int(4));
    }

    #[test]
    fn exponent_range() {
        let mut p = v_pow(3);
        p.add_assign(&v_pow(-2));
        assert_eq!(p.min_exp(), Some(-2));
        assert_eq!(p.max_exp(), Some(3));
    }
}
