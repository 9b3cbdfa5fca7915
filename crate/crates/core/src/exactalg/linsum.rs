//! Sums of fractions whose denominators are products of linear forms.
//!
//! Every denominator met in localization and path sums factors into
//! polynomials of total degree one. Keeping the factorization explicit
//! means the common denominator is an lcm of multisets and cancellation is
//! trial division by each factor, so no general gcd is ever needed.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AlgebraError, AlgebraResult};
use crate::exactalg::poly::{coeff_mod, mul_mod, pow_mod, Coeff, MultiPoly, MOD_P};
use crate::exactalg::ratfunc::RationalFunction;
use crate::exactalg::varset::{ensure_same, VarSet};

/// `num * prod(content) / prod(den)` where content and den are multisets of
/// primitive, positive-leading forms of total degree one. Linear factors of
/// the numerator are kept unexpanded in `content` for as long as they are
/// shared by every summand. After every operation no den factor divides
/// `num` and content and den are disjoint.
#[derive(Clone, Debug)]
pub struct LinearFractionSum {
    vars: Arc<VarSet>,
    num: MultiPoly,
    content: BTreeMap<MultiPoly, u32>,
    den: BTreeMap<MultiPoly, u32>,
}

fn power_product(vars: &Arc<VarSet>, factors: &BTreeMap<MultiPoly, u32>) -> MultiPoly {
    factors
        .iter()
        .fold(MultiPoly::one(vars), |acc, (f, &e)| &acc * &f.pow(e))
}

/// Splits linear factors into a scalar and primitive positive-leading forms.
fn normalize(
    vars: &Arc<VarSet>,
    factors: &[MultiPoly],
) -> AlgebraResult<(Coeff, BTreeMap<MultiPoly, u32>)> {
    let mut scale = Coeff::one();
    let mut out = BTreeMap::new();
    for f in factors {
        ensure_same(vars, f.vars())?;
        if f.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if f.is_constant() {
            scale *= f.constant_value().unwrap();
            continue;
        }
        if f.total_degree() != 1 {
            return Err(AlgebraError::NonLinearFactor(f.to_string()));
        }
        let (unit, pp) = f.primitive();
        scale *= unit;
        *out.entry(pp).or_insert(0) += 1;
    }
    Ok((scale, out))
}

impl LinearFractionSum {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        LinearFractionSum {
            vars: Arc::clone(vars),
            num: MultiPoly::zero(vars),
            content: BTreeMap::new(),
            den: BTreeMap::new(),
        }
    }

    /// The fraction `num / prod(factors)`; factors must have total degree
    /// one (a constant term is allowed).
    pub fn term(num: MultiPoly, factors: &[MultiPoly]) -> AlgebraResult<Self> {
        let vars = Arc::clone(num.vars());
        let (scale, den) = normalize(&vars, factors)?;
        let mut out = LinearFractionSum {
            vars,
            num: num.scale(&(Coeff::one() / scale)),
            content: BTreeMap::new(),
            den,
        };
        out.cancel();
        Ok(out)
    }

    /// `prod(num_factors) / prod(den_factors)` with every factor linear; the
    /// numerator stays factored.
    pub fn factored(
        vars: &Arc<VarSet>,
        num_factors: &[MultiPoly],
        den_factors: &[MultiPoly],
    ) -> AlgebraResult<Self> {
        if num_factors.iter().any(|f| f.is_zero()) {
            return Ok(Self::zero(vars));
        }
        let (top, content) = normalize(vars, num_factors)?;
        let (bottom, den) = normalize(vars, den_factors)?;
        let mut out = LinearFractionSum {
            vars: Arc::clone(vars),
            num: MultiPoly::constant(vars, top / bottom),
            content,
            den,
        };
        out.cancel();
        Ok(out)
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        LinearFractionSum {
            vars: Arc::clone(num.vars()),
            num,
            content: BTreeMap::new(),
            den: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// The expanded numerator.
    pub fn numerator(&self) -> MultiPoly {
        if self.content.is_empty() {
            self.num.clone()
        } else {
            &self.num * &power_product(&self.vars, &self.content)
        }
    }

    /// Denominator factors with multiplicities.
    pub fn factors(&self) -> &BTreeMap<MultiPoly, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add_assign(&mut self, other: &Self) -> AlgebraResult<()> {
        ensure_same(&self.vars, &other.vars)?;
        if other.num.is_zero() {
            return Ok(());
        }
        if self.num.is_zero() {
            *self = other.clone();
            return Ok(());
        }
        // Numerator factors common to both stay factored; the rest are
        // multiplied into the residual numerators.
        let mut common = BTreeMap::new();
        let mut lift_self: BTreeMap<MultiPoly, u32> = BTreeMap::new();
        let mut lift_other: BTreeMap<MultiPoly, u32> = BTreeMap::new();
        for (f, &e) in &self.content {
            let theirs = other.content.get(f).copied().unwrap_or(0);
            if theirs.min(e) > 0 {
                common.insert(f.clone(), theirs.min(e));
            }
            if e > theirs {
                lift_self.insert(f.clone(), e - theirs);
            }
        }
        for (f, &e) in &other.content {
            let mine = self.content.get(f).copied().unwrap_or(0);
            if e > mine {
                lift_other.insert(f.clone(), e - mine);
            }
        }
        let mut den = self.den.clone();
        for (f, &e) in &other.den {
            let mine = self.den.get(f).copied().unwrap_or(0);
            if e > mine {
                *lift_self.entry(f.clone()).or_insert(0) += e - mine;
                den.insert(f.clone(), e);
            }
        }
        for (f, &e) in &self.den {
            let theirs = other.den.get(f).copied().unwrap_or(0);
            if e > theirs {
                *lift_other.entry(f.clone()).or_insert(0) += e - theirs;
            }
        }
        self.num = &(&self.num * &power_product(&self.vars, &lift_self))
            + &(&other.num * &power_product(&self.vars, &lift_other));
        self.content = common;
        self.den = den;
        self.cancel();
        Ok(())
    }

    pub fn mul_assign(&mut self, other: &Self) -> AlgebraResult<()> {
        ensure_same(&self.vars, &other.vars)?;
        self.num = &self.num * &other.num;
        for (f, &e) in &other.content {
            *self.content.entry(f.clone()).or_insert(0) += e;
        }
        for (f, &e) in &other.den {
            *self.den.entry(f.clone()).or_insert(0) += e;
        }
        self.cancel();
        Ok(())
    }

    pub fn scale(&mut self, c: &Coeff) {
        self.num = self.num.scale(c);
        if c.is_zero() {
            self.den.clear();
            self.content.clear();
        }
    }

    /// Divides out every denominator factor that divides the numerator.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            self.content.clear();
            return;
        }
        let shared: Vec<MultiPoly> = self
            .content
            .keys()
            .filter(|f| self.den.contains_key(*f))
            .cloned()
            .collect();
        for f in shared {
            let (c, d) = (self.content[&f], self.den[&f]);
            let m = c.min(d);
            for (map, e) in [(&mut self.content, c), (&mut self.den, d)] {
                if e == m {
                    map.remove(&f);
                } else {
                    map.insert(f.clone(), e - m);
                }
            }
        }
        if self.den.is_empty() {
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let factors: Vec<MultiPoly> = self.den.keys().cloned().collect();
        for f in factors {
            loop {
                if !vanishes_on_hyperplane(&self.num, &f, &mut rng) {
                    break;
                }
                match self.num.exact_divide(&f) {
                    Ok(q) => {
                        self.num = q;
                        let e = self.den.get_mut(&f).unwrap();
                        *e -= 1;
                        if *e == 0 {
                            self.den.remove(&f);
                            break;
                        }
                    }
                    Err(_) => break,
                }
            }
        }
    }

    /// Product of the denominator factors.
    pub fn denominator(&self) -> MultiPoly {
        power_product(&self.vars, &self.den)
    }

    /// The canonical rational function; no gcd is needed because every
    /// factor is irreducible and none divides the numerator.
    pub fn to_rational(&self) -> RationalFunction {
        RationalFunction::from_coprime(self.numerator(), self.denominator())
    }
}

/// Randomized test of `f | p` for a linear `f`, evaluated mod a prime:
/// false means `f` certainly does not divide; true is confirmed by exact
/// division by the caller.
fn vanishes_on_hyperplane(p: &MultiPoly, f: &MultiPoly, rng: &mut ChaCha8Rng) -> bool {
    let nvars = p.vars().len();
    let Some(solve) = (0..nvars).find(|&v| f.degree_in(v) == 1) else {
        return true;
    };
    let mut point: Vec<u64> = (0..nvars).map(|_| rng.gen_range(0..MOD_P)).collect();
    point[solve] = 0;
    let (Some(coeff), Some(rest)) = (
        coeff_mod(&f.coefficient(crate::exactalg::monomial::Monomial::var(solve))),
        f.eval_mod(&point),
    ) else {
        return true;
    };
    if coeff == 0 {
        return true;
    }
    point[solve] = mul_mod(MOD_P - rest, pow_mod(coeff, MOD_P - 2)) % MOD_P;
    p.eval_mod(&point).is_none_or(|v| v == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_fractions_recombine() {
        let vs = VarSet::new(["x", "y"]).unwrap();
        let x = MultiPoly::var(&vs, 0);
        let y = MultiPoly::var(&vs, 1);
        let one = MultiPoly::one(&vs);
        // 1/(x (x+y)) + 1/(y (x+y)) = 1/(x y)
        let mut s = LinearFractionSum::term(one.clone(), &[x.clone(), &x + &y]).unwrap();
        s.add_assign(&LinearFractionSum::term(one.clone(), &[y.clone(), &x + &y]).unwrap())
            .unwrap();
        let expect = RationalFunction::new(one, &x * &y).unwrap();
        assert_eq!(s.to_rational(), expect);
    }

    #[test]
    fn negated_factors_merge() {
        let vs = VarSet::new(["x", "y"]).unwrap();
        let x = MultiPoly::var(&vs, 0);
        let y = MultiPoly::var(&vs, 1);
        let one = MultiPoly::one(&vs);
        let mut s = LinearFractionSum::term(one.clone(), &[&x - &y]).unwrap();
        s.add_assign(&LinearFractionSum::term(one.clone(), &[&y - &x]).unwrap())
            .unwrap();
        assert!(s.is_zero());
        assert!(s.factors().is_empty());
    }

    #[test]
    fn factored_numerators_cancel() {
        let vs = VarSet::new(["x", "y"]).unwrap();
        let x = MultiPoly::var(&vs, 0);
        let y = MultiPoly::var(&vs, 1);
        // x (x+y) / (x y) + (x+y) / x = (x+y)(x+y) / (x y)
        let mut s = LinearFractionSum::factored(&vs, &[x.clone(), &x + &y], &[x.clone(), y.clone()]).unwrap();
        assert_eq!(s.factors().len(), 1);
        s.add_assign(&LinearFractionSum::factored(&vs, &[&x + &y], std::slice::from_ref(&x)).unwrap())
            .unwrap();
        let xy = &x + &y;
        assert_eq!(s.to_rational(), RationalFunction::new(&xy * &xy, &x * &y).unwrap());
        assert_eq!(s.numerator(), &xy * &xy);
        assert!(LinearFractionSum::factored(&vs, &[MultiPoly::zero(&vs)], &[x]).unwrap().is_zero());
    }

    #[test]
    fn rejects_quadratic_factor() {
        let vs = VarSet::new(["x"]).unwrap();
        let x = MultiPoly::var(&vs, 0);
        assert!(matches!(
            LinearFractionSum::term(MultiPoly::one(&vs), &[&x * &x]),
            Err(AlgebraError::NonLinearFactor(_))
        ));
    }

    #[test]
    fn affine_factors_in_one_variable() {
        let vs = VarSet::new(["z"]).unwrap();
        let z = MultiPoly::var(&vs, 0);
        let one = MultiPoly::one(&vs);
        // z/(z (1+z)) - 1/(1+z) = 0
        let mut s = LinearFractionSum::term(z.clone(), &[z.clone(), &one + &z]).unwrap();
        s.add_assign(&LinearFractionSum::term(-&one, &[&one + &z]).unwrap())
            .unwrap();
        assert!(s.is_zero());
    }
}
