//! Multivariate power series truncated by total degree.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, AlgebraResult};
use crate::exactalg::monomial::Monomial;
use crate::exactalg::poly::{ratio, Coeff, MultiPoly};
use crate::exactalg::varset::{ensure_same, VarSet};

/// A polynomial known modulo all monomials of total degree `>= order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: u32,
    poly: MultiPoly,
}

impl TruncatedSeries {
    pub fn new(poly: MultiPoly, order: u32) -> Self {
        TruncatedSeries {
            poly: poly.truncate(order),
            order,
        }
    }

    pub fn constant(vars: &Arc<VarSet>, c: Coeff, order: u32) -> Self {
        Self::new(MultiPoly::constant(vars, c), order)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.poly.vars()
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn coefficient(&self, m: Monomial) -> Coeff {
        self.poly.coefficient(m)
    }

    fn common_order(&self, rhs: &Self) -> AlgebraResult<u32> {
        ensure_same(self.vars(), rhs.vars())?;
        Ok(self.order.min(rhs.order))
    }

    pub fn add(&self, rhs: &Self) -> AlgebraResult<Self> {
        let order = self.common_order(rhs)?;
        Ok(Self::new(&self.poly + &rhs.poly, order))
    }

    pub fn sub(&self, rhs: &Self) -> AlgebraResult<Self> {
        let order = self.common_order(rhs)?;
        Ok(Self::new(&self.poly - &rhs.poly, order))
    }

    pub fn mul(&self, rhs: &Self) -> AlgebraResult<Self> {
        let order = self.common_order(rhs)?;
        Ok(TruncatedSeries {
            poly: truncated_product(&self.poly, &rhs.poly, order),
            order,
        })
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        TruncatedSeries {
            poly: self.poly.scale(c),
            order: self.order,
        }
    }

    /// Same series known to a lower order.
    pub fn with_order(&self, order: u32) -> Self {
        Self::new(self.poly.clone(), order.min(self.order))
    }

    /// Multiplicative inverse by Newton iteration.
    pub fn inverse(&self) -> AlgebraResult<Self> {
        let c0 = self.poly.constant_term();
        if c0.is_zero() {
            return Err(AlgebraError::NotInvertible);
        }
        let vars = Arc::clone(self.vars());
        let mut g = MultiPoly::constant(&vars, c0.recip());
        let two = MultiPoly::from_int(&vars, 2);
        let mut prec = 1;
        while prec < self.order {
            prec = (2 * prec).min(self.order);
            let fg = truncated_product(&self.poly.truncate(prec), &g, prec);
            g = truncated_product(&g, &(&two - &fg), prec);
        }
        Ok(TruncatedSeries {
            poly: g,
            order: self.order,
        })
    }

    pub fn div(&self, rhs: &Self) -> AlgebraResult<Self> {
        self.mul(&rhs.inverse()?)
    }

    /// Square root with the positive root of the constant term, via the
    /// Newton iteration for the inverse square root.
    pub fn sqrt(&self) -> AlgebraResult<Self> {
        let c0 = self.poly.constant_term();
        let root = rational_sqrt(&c0).ok_or(AlgebraError::ConstantTermNotSquare)?;
        let vars = Arc::clone(self.vars());
        let mut r = MultiPoly::constant(&vars, root.recip());
        let three = MultiPoly::from_int(&vars, 3);
        let half = ratio(1, 2);
        let mut prec = 1;
        while prec < self.order {
            prec = (2 * prec).min(self.order);
            let r2 = truncated_product(&r, &r, prec);
            let sr2 = truncated_product(&self.poly.truncate(prec), &r2, prec);
            r = truncated_product(&r, &(&three - &sr2), prec).scale(&half);
        }
        Ok(TruncatedSeries {
            poly: truncated_product(&self.poly, &r, self.order),
            order: self.order,
        })
    }

    /// Exact division by a monomial; the result is known to `order - deg m`.
    pub fn div_monomial(&self, m: Monomial) -> AlgebraResult<Self> {
        let d = m.total_degree();
        let order = self.order.saturating_sub(d);
        let divisor = MultiPoly::monomial(self.vars(), m, Coeff::one());
        let q = self.poly.exact_divide(&divisor)?;
        Ok(Self::new(q, order))
    }
}

/// Positive rational square root, if one exists.
pub fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    if !c.is_positive() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Product keeping only monomials of total degree below `order`.
pub fn truncated_product(a: &MultiPoly, b: &MultiPoly, order: u32) -> MultiPoly {
    let vars = a.vars();
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero(vars);
    }
    // Terms are sorted by descending degree; walk `b` from the low end.
    let bt = b.terms();
    let integral = a.has_integer_coefficients() && b.has_integer_coefficients();
    if integral {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (ma, ca) in a.terms() {
            let da = ma.total_degree();
            if da >= order {
                continue;
            }
            for (mb, cb) in bt.iter().rev() {
                if da + mb.total_degree() >= order {
                    break;
                }
                *acc.entry(*ma * *mb).or_insert_with(BigInt::zero) += ca.numer() * cb.numer();
            }
        }
        return MultiPoly::from_terms(
            vars,
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Coeff::from_integer(c))),
        );
    }
    let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
    for (ma, ca) in a.terms() {
        let da = ma.total_degree();
        if da >= order {
            continue;
        }
        for (mb, cb) in bt.iter().rev() {
            if da + mb.total_degree() >= order {
                break;
            }
            *acc.entry(*ma * *mb).or_insert_with(Coeff::zero) += ca * cb;
        }
    }
    MultiPoly::from_terms(vars, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::rat;

    #[test]
    fn sqrt_of_one_and_binomial() {
        let vs = VarSet::new(["x"]).unwrap();
        let one = TruncatedSeries::constant(&vs, rat(1), 6);
        assert_eq!(one.sqrt().unwrap(), one);
        let x = MultiPoly::var(&vs, 0);
        let s = TruncatedSeries::new(&MultiPoly::one(&vs) + &x.scale(&rat(2)), 4);
        let r = s.sqrt().unwrap();
        let expect = &(&(&MultiPoly::one(&vs) + &x) - &x.pow(2).scale(&ratio(1, 2)))
            + &x.pow(3).scale(&ratio(1, 2));
        assert_eq!(r.poly(), &expect);
        assert_eq!(r.mul(&r).unwrap(), s);
    }

    #[test]
    fn nonsquare_constant_is_rejected() {
        let vs = VarSet::new(["x"]).unwrap();
        let s = TruncatedSeries::constant(&vs, rat(2), 3);
        assert_eq!(s.sqrt(), Err(AlgebraError::ConstantTermNotSquare));
        let s = TruncatedSeries::constant(&vs, ratio(9, 4), 3);
        assert_eq!(s.sqrt().unwrap().poly().constant_value(), Some(ratio(3, 2)));
    }

    #[test]
    fn inverse_of_geometric() {
        let vs = VarSet::new(["x", "y"]).unwrap();
        let x = MultiPoly::var(&vs, 0);
        let y = MultiPoly::var(&vs, 1);
        let d = TruncatedSeries::new(&MultiPoly::one(&vs) - &(&x + &y), 7);
        let inv = d.inverse().unwrap();
        assert_eq!(inv.mul(&d).unwrap().poly(), &MultiPoly::one(&vs));
        // coefficient of x^3 y^3 in 1/(1-x-y) is C(6,3)
        let m = Monomial::from_exponents(&[3, 3]).unwrap();
        assert_eq!(inv.coefficient(m), rat(20));
    }
}
