//! Packed exponent vectors.
//!
//! A monomial in at most 15 variables is stored in a `u128`: the top byte
//! holds the total degree and byte `14 - i` holds the exponent of variable
//! `i`. Integer comparison of the packed words is then exactly the graded
//! lexicographic order, and multiplication is integer addition.

use crate::error::{AlgebraError, AlgebraResult};

pub const MAX_VARS: usize = 15;
const TOTAL_SHIFT: u32 = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u128);

#[inline]
fn shift(var: usize) -> u32 {
    debug_assert!(var < MAX_VARS);
    ((MAX_VARS - 1 - var) * 8) as u32
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(index: usize) -> Monomial {
        Monomial((1u128 << shift(index)) | (1u128 << TOTAL_SHIFT))
    }

    pub fn from_exponents(exps: &[u32]) -> AlgebraResult<Monomial> {
        if exps.len() > MAX_VARS {
            return Err(AlgebraError::TooManyVariables {
                max: MAX_VARS,
                got: exps.len(),
            });
        }
        let total: u32 = exps.iter().sum();
        if total > 255 {
            return Err(AlgebraError::DegreeOverflow);
        }
        let mut word = (total as u128) << TOTAL_SHIFT;
        for (i, &e) in exps.iter().enumerate() {
            word |= (e as u128) << shift(i);
        }
        Ok(Monomial(word))
    }

    #[inline]
    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> shift(var)) & 0xff) as u32
    }

    #[inline]
    pub fn total_degree(self) -> u32 {
        (self.0 >> TOTAL_SHIFT) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn checked_mul(self, other: Monomial) -> AlgebraResult<Monomial> {
        if self.total_degree() + other.total_degree() > 255 {
            return Err(AlgebraError::DegreeOverflow);
        }
        Ok(Monomial(self.0 + other.0))
    }

    pub fn divides(self, other: Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exponent(i) <= other.exponent(i))
    }

    pub fn checked_div(self, divisor: Monomial) -> Option<Monomial> {
        if divisor.divides(self) {
            Some(Monomial(self.0 - divisor.0))
        } else {
            None
        }
    }

    pub fn pow(self, e: u32) -> AlgebraResult<Monomial> {
        let total = self.total_degree() * e;
        if total > 255 {
            return Err(AlgebraError::DegreeOverflow);
        }
        Ok(Monomial(self.0 * e as u128))
    }

    /// Componentwise minimum.
    pub fn gcd(self, other: Monomial) -> Monomial {
        let exps: Vec<u32> = (0..MAX_VARS)
            .map(|i| self.exponent(i).min(other.exponent(i)))
            .collect();
        Monomial::from_exponents(&exps).expect("gcd of valid monomials is valid")
    }

    /// The same monomial with variable `var` removed.
    pub fn without(self, var: usize) -> Monomial {
        let e = self.exponent(var) as u128;
        Monomial(self.0 - (e << shift(var)) - (e << TOTAL_SHIFT))
    }

    /// Multiplies by `var^e`.
    pub fn with_power(self, var: usize, e: u32) -> AlgebraResult<Monomial> {
        if self.total_degree() + e > 255 {
            return Err(AlgebraError::DegreeOverflow);
        }
        Ok(Monomial(
            self.0 + ((e as u128) << shift(var)) + ((e as u128) << TOTAL_SHIFT),
        ))
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;

    /// Product; panics on degree overflow, which no computation in this
    /// crate can reach at supported sizes.
    #[inline]
    fn mul(self, other: Monomial) -> Monomial {
        assert!(
            self.total_degree() + other.total_degree() <= 255,
            "monomial degree overflow"
        );
        Monomial(self.0 + other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_order_is_grlex() {
        let x = Monomial::var(0);
        let y = Monomial::var(1);
        let x2 = x * x;
        let xy = x * y;
        let y3 = y.pow(3).unwrap();
        assert!(x > y);
        assert!(x2 > xy);
        assert!(y3 > x2);
        assert!(Monomial::ONE < y);
    }

    #[test]
    fn divide_and_strip() {
        let m = Monomial::from_exponents(&[2, 0, 3]).unwrap();
        let d = Monomial::from_exponents(&[1, 0, 3]).unwrap();
        assert_eq!(m.checked_div(d), Some(Monomial::var(0)));
        assert_eq!(d.checked_div(m), None);
        assert_eq!(m.without(2), Monomial::from_exponents(&[2]).unwrap());
        assert_eq!(m.total_degree(), 5);
        assert_eq!(
            Monomial::var(1).with_power(1, 2).unwrap(),
            Monomial::from_exponents(&[0, 3]).unwrap()
        );
    }

    #[test]
    fn overflow_is_reported() {
        let big = Monomial::from_exponents(&[200]).unwrap();
        assert_eq!(big.checked_mul(big), Err(AlgebraError::DegreeOverflow));
    }
}
