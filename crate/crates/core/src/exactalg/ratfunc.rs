//! Canonical quotients of polynomials.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, AlgebraResult};
use crate::exactalg::gcd::poly_gcd;
use crate::exactalg::monomial::Monomial;
use crate::exactalg::poly::{Coeff, MultiPoly};
use crate::exactalg::varset::{ensure_same, VarSet};

/// `num / den` in canonical form: `den` has coprime integer coefficients
/// and a positive leading coefficient, and `gcd(num, den) = 1`. Equal
/// rational functions therefore have identical fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    /// Reduces `num / den` to canonical form.
    pub fn new(num: MultiPoly, den: MultiPoly) -> AlgebraResult<Self> {
        ensure_same(num.vars(), den.vars())?;
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.vars()));
        }
        let g = poly_gcd(&num, &den)?;
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_divide(&g)?, den.exact_divide(&g)?)
        };
        Ok(Self::from_coprime(num, den))
    }

    /// Builds from a pair already known to be coprime; only the scalar
    /// normalization of the denominator is applied.
    pub fn from_coprime(num: MultiPoly, den: MultiPoly) -> Self {
        let (unit, den) = den.primitive();
        let num = num.scale(&unit.recip());
        RationalFunction { num, den }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn zero(vars: &Arc<VarSet>) -> Self {
        Self::from_poly(MultiPoly::zero(vars))
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::from_poly(MultiPoly::one(vars))
    }

    pub fn constant(vars: &Arc<VarSet>, c: Coeff) -> Self {
        Self::from_poly(MultiPoly::constant(vars, c))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn into_polynomial(self) -> AlgebraResult<MultiPoly> {
        if self.is_polynomial() {
            Ok(self.num)
        } else {
            Err(AlgebraError::NotAPolynomial)
        }
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Re-runs canonicalization; a no-op on values built by this module.
    pub fn canonicalize(&self) -> AlgebraResult<Self> {
        Self::new(self.num.clone(), self.den.clone())
    }

    pub fn checked_add(&self, rhs: &Self) -> AlgebraResult<Self> {
        ensure_same(self.vars(), rhs.vars())?;
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.den == rhs.den {
            return Self::new(&self.num + &rhs.num, self.den.clone());
        }
        let g = poly_gcd(&self.den, &rhs.den)?;
        let left = rhs.den.exact_divide(&g)?;
        let right = self.den.exact_divide(&g)?;
        let num = &(&self.num * &left) + &(&rhs.num * &right);
        Self::new(num, &self.den * &left)
    }

    pub fn checked_sub(&self, rhs: &Self) -> AlgebraResult<Self> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Self) -> AlgebraResult<Self> {
        ensure_same(self.vars(), rhs.vars())?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(self.vars()));
        }
        // Cross cancellation keeps both factors small.
        let g1 = poly_gcd(&self.num, &rhs.den)?;
        let g2 = poly_gcd(&rhs.num, &self.den)?;
        let n1 = self.num.exact_divide(&g1)?;
        let d2 = rhs.den.exact_divide(&g1)?;
        let n2 = rhs.num.exact_divide(&g2)?;
        let d1 = self.den.exact_divide(&g2)?;
        Ok(Self::from_coprime(&n1 * &n2, &d1 * &d2))
    }

    pub fn recip(&self) -> AlgebraResult<Self> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> AlgebraResult<Self> {
        self.checked_mul(&rhs.recip()?)
    }

    pub fn pow(&self, e: i32) -> AlgebraResult<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(Self::from_coprime(base.num.pow(e), base.den.pow(e)))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn substitute(&self, subst: &Substitution) -> AlgebraResult<Self> {
        ensure_same(self.vars(), &subst.source)?;
        let den = subst.apply_poly(&self.den);
        if den.is_zero() {
            return Err(AlgebraError::DenominatorVanishes);
        }
        let num = subst.apply_poly(&self.num);
        if subst.is_signed_permutation() {
            // Ring automorphisms preserve coprimality.
            return Ok(Self::from_coprime(num, den));
        }
        Self::new(num, den)
    }

    /// Evaluates at a full point; fails if the denominator vanishes there.
    pub fn eval(&self, point: &[Coeff]) -> AlgebraResult<Coeff> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(AlgebraError::DenominatorVanishes);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    pub fn rebase(&self, target: &Arc<VarSet>) -> AlgebraResult<Self> {
        Ok(Self::from_coprime(
            self.num.rebase(target)?,
            self.den.rebase(target)?,
        ))
    }
}

/// The value at `var = 0`. Canonical form has cancelled common factors, so
/// a denominator vanishing at zero is a genuine pole.
pub fn rational_limit_at_zero(f: &RationalFunction, var: usize) -> AlgebraResult<RationalFunction> {
    let name = f.vars().name(var).to_string();
    let zero = Coeff::zero();
    let den = f.den().specialize(var, &zero);
    let num = f.num().specialize(var, &zero);
    if den.is_zero() {
        if num.is_zero() {
            return Err(AlgebraError::IndeterminateInternal(name));
        }
        return Err(AlgebraError::PoleAtZero(name));
    }
    RationalFunction::new(num, den)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_add(rhs).expect("rational function addition")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_sub(rhs)
            .expect("rational function subtraction")
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_mul(rhs)
            .expect("rational function multiplication")
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("rational function division")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// A ring map from polynomials over `source` to polynomials over `target`,
/// given by the image of every source variable.
#[derive(Clone, Debug)]
pub struct Substitution {
    source: Arc<VarSet>,
    target: Arc<VarSet>,
    images: Vec<MultiPoly>,
    signed_permutation: bool,
}

impl Substitution {
    /// Variables without a binding map to the same-named target variable.
    pub fn new(
        source: &Arc<VarSet>,
        target: &Arc<VarSet>,
        bindings: &HashMap<String, MultiPoly>,
    ) -> AlgebraResult<Self> {
        for name in bindings.keys() {
            source.require(name)?;
        }
        let mut images = Vec::with_capacity(source.len());
        for name in source.names() {
            let image = match bindings.get(name) {
                Some(p) => {
                    ensure_same(p.vars(), target)?;
                    p.clone()
                }
                None => MultiPoly::var(target, target.require(name)?),
            };
            images.push(image);
        }
        Ok(Self::from_images(source, target, images))
    }

    /// The substitution on a single variable set.
    pub fn on(vars: &Arc<VarSet>, bindings: &HashMap<String, MultiPoly>) -> AlgebraResult<Self> {
        Self::new(vars, vars, bindings)
    }

    pub fn identity(vars: &Arc<VarSet>) -> Self {
        let images = (0..vars.len()).map(|i| MultiPoly::var(vars, i)).collect();
        Self::from_images(vars, vars, images)
    }

    pub fn from_images(source: &Arc<VarSet>, target: &Arc<VarSet>, images: Vec<MultiPoly>) -> Self {
        assert_eq!(images.len(), source.len(), "one image per source variable");
        let mut seen = vec![false; target.len()];
        let signed_permutation = source.len() == target.len()
            && images.iter().all(|p| match p.terms() {
                [(m, c)] if m.total_degree() == 1 && c.abs().is_one() => {
                    let v = (0..target.len()).find(|&v| m.exponent(v) == 1).unwrap();
                    !std::mem::replace(&mut seen[v], true)
                }
                _ => false,
            });
        Substitution {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images,
            signed_permutation,
        }
    }

    pub fn source(&self) -> &Arc<VarSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VarSet> {
        &self.target
    }

    pub fn image(&self, var: usize) -> &MultiPoly {
        &self.images[var]
    }

    pub fn is_signed_permutation(&self) -> bool {
        self.signed_permutation
    }

    pub fn apply_poly(&self, p: &MultiPoly) -> MultiPoly {
        if self.signed_permutation {
            return self.apply_signed_permutation(p);
        }
        let mut powers: Vec<Vec<MultiPoly>> =
            vec![vec![MultiPoly::one(&self.target)]; self.source.len()];
        let mut acc = MultiPoly::zero(&self.target);
        for (m, c) in p.terms() {
            let mut term = MultiPoly::constant(&self.target, c.clone());
            for (v, table) in powers.iter_mut().enumerate() {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                while table.len() <= e {
                    let next = table.last().unwrap() * &self.images[v];
                    table.push(next);
                }
                term = &term * &table[e];
            }
            acc = &acc + &term;
        }
        acc
    }

    fn apply_signed_permutation(&self, p: &MultiPoly) -> MultiPoly {
        let map: Vec<(usize, bool)> = self
            .images
            .iter()
            .map(|img| {
                let (m, c) = &img.terms()[0];
                let v = (0..self.target.len())
                    .find(|&v| m.exponent(v) == 1)
                    .unwrap();
                (v, c.is_negative())
            })
            .collect();
        let mut terms = Vec::with_capacity(p.len());
        let mut exps = vec![0u32; self.target.len()];
        for (m, c) in p.terms() {
            exps.iter_mut().for_each(|e| *e = 0);
            let mut negative = false;
            for (v, &(w, neg)) in map.iter().enumerate() {
                let e = m.exponent(v);
                exps[w] = e;
                negative ^= neg && e % 2 == 1;
            }
            let mono = Monomial::from_exponents(&exps).expect("same degree");
            terms.push((mono, if negative { -c } else { c.clone() }));
        }
        MultiPoly::from_terms(&self.target, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::rat;

    fn vars() -> Arc<VarSet> {
        VarSet::new(["a1", "a2", "a3", "a4", "h", "z"]).unwrap()
    }

    #[test]
    fn canonical_sign_and_cancellation() {
        let vs = vars();
        let a1 = MultiPoly::var(&vs, 0);
        let a2 = MultiPoly::var(&vs, 1);
        let h = MultiPoly::var(&vs, 4);
        let f = RationalFunction::new(
            &(&a1 - &a2) * &h,
            (&(&a2 - &a1) * &(&h + &a1)).scale(&rat(2)),
        )
        .unwrap();
        assert_eq!(f.to_string(), "(-1/2*h)/(a1 + h)");
        assert_eq!(f.canonicalize().unwrap(), f);
    }

    #[test]
    fn limit_examples() {
        let vs = vars();
        let z = MultiPoly::var(&vs, 5);
        let one = MultiPoly::one(&vs);
        let zz = RationalFunction::new(z.clone(), z.clone()).unwrap();
        assert!(rational_limit_at_zero(&zz, 5)
            .unwrap()
            .constant_value()
            .unwrap()
            .is_one());
        let g = RationalFunction::new(one.clone(), &one + &z).unwrap();
        assert!(rational_limit_at_zero(&g, 5)
            .unwrap()
            .constant_value()
            .unwrap()
            .is_one());
        let pole = RationalFunction::new(one, z).unwrap();
        assert_eq!(
            rational_limit_at_zero(&pole, 5),
            Err(AlgebraError::PoleAtZero("z".into()))
        );
    }

    #[test]
    fn substitution_into_three_factors() {
        let vs = vars();
        let a = |i| MultiPoly::var(&vs, i);
        let h = a(4);
        let z = a(5);
        let d = &(&(&(&a(0) - &a(1)) - &h) * &(&(&a(0) - &a(2)) - &h)) * &(&(&a(0) - &a(3)) - &h);
        let f = RationalFunction::new(MultiPoly::one(&vs), d).unwrap();
        let mut b = HashMap::new();
        for s in 1..=4 {
            b.insert(format!("a{s}"), (&z * &h).scale(&rat(s)));
        }
        let g = f.substitute(&Substitution::on(&vs, &b).unwrap()).unwrap();
        let one = MultiPoly::one(&vs);
        let expect_den = &(&(&h.pow(3) * &(&one + &z)) * &(&one + &z.scale(&rat(2))))
            * &(&one + &z.scale(&rat(3)));
        let expect = RationalFunction::new(-&one, expect_den).unwrap();
        assert_eq!(g, expect);
        assert_eq!(f.substitute(&Substitution::identity(&vs)).unwrap(), f);
    }

    #[test]
    fn evaluation_at_origin() {
        let vs = vars();
        let p = &(&MultiPoly::var(&vs, 4) + &MultiPoly::var(&vs, 1)) - &MultiPoly::var(&vs, 0);
        let mut b = HashMap::new();
        for s in 1..=4 {
            b.insert(format!("a{s}"), MultiPoly::zero(&vs));
        }
        let g = RationalFunction::from_poly(p)
            .substitute(&Substitution::on(&vs, &b).unwrap())
            .unwrap();
        assert_eq!(g.to_string(), "h");
    }

    #[test]
    fn vanishing_denominator_is_reported() {
        let vs = vars();
        let f = RationalFunction::new(
            MultiPoly::one(&vs),
            &MultiPoly::var(&vs, 0) - &MultiPoly::var(&vs, 1),
        )
        .unwrap();
        let mut b = HashMap::new();
        b.insert("a1".to_string(), MultiPoly::var(&vs, 1));
        assert_eq!(
            f.substitute(&Substitution::on(&vs, &b).unwrap()),
            Err(AlgebraError::DenominatorVanishes)
        );
    }

    #[test]
    fn signed_permutation_keeps_canonical_form() {
        let vs = vars();
        let a = |i| MultiPoly::var(&vs, i);
        let f = RationalFunction::new(&a(0) + &a(4), &(&a(1) - &a(3)) * &(&a(2) + &a(4))).unwrap();
        let images = vec![-&a(3), -&a(2), -&a(1), -&a(0), a(4), a(5)];
        let s = Substitution::from_images(&vs, &vs, images.clone());
        assert!(s.is_signed_permutation());
        let fast = f.substitute(&s).unwrap();
        let slow = RationalFunction::new(s.apply_poly(f.num()), s.apply_poly(f.den())).unwrap();
        assert_eq!(fast, slow);
    }
}
