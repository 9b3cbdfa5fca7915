//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{AlgebraError, AlgebraResult};
use crate::exactalg::monomial::Monomial;
use crate::exactalg::varset::{ensure_same, VarSet};

pub type Coeff = BigRational;

pub fn rat(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A polynomial stored as nonzero terms sorted by descending graded-lex
/// monomial. The zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Arc<VarSet>,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms
            .cmp(&other.terms)
            .then_with(|| self.vars.cmp(&other.vars))
    }
}

impl MultiPoly {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        MultiPoly {
            vars: Arc::clone(vars),
            terms: Vec::new(),
        }
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, Coeff::one())
    }

    pub fn constant(vars: &Arc<VarSet>, c: Coeff) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::ONE, c)]
        };
        MultiPoly {
            vars: Arc::clone(vars),
            terms,
        }
    }

    pub fn from_int(vars: &Arc<VarSet>, c: i64) -> Self {
        Self::constant(vars, rat(c))
    }

    pub fn var(vars: &Arc<VarSet>, index: usize) -> Self {
        assert!(index < vars.len(), "variable index out of range");
        MultiPoly {
            vars: Arc::clone(vars),
            terms: vec![(Monomial::var(index), Coeff::one())],
        }
    }

    pub fn var_named(vars: &Arc<VarSet>, name: &str) -> AlgebraResult<Self> {
        Ok(Self::var(vars, vars.require(name)?))
    }

    pub fn monomial(vars: &Arc<VarSet>, m: Monomial, c: Coeff) -> Self {
        Self::from_terms(vars, std::iter::once((m, c)))
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I>(vars: &Arc<VarSet>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut map: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(Coeff::zero) += c;
        }
        Self::from_map(vars, map)
    }

    fn from_map(vars: &Arc<VarSet>, map: BTreeMap<Monomial, Coeff>) -> Self {
        let terms = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MultiPoly {
            vars: Arc::clone(vars),
            terms,
        }
    }

    /// Trusts that `terms` is sorted descending with no zeros or repeats.
    pub(crate) fn from_sorted(vars: &Arc<VarSet>, terms: Vec<(Monomial, Coeff)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MultiPoly {
            vars: Arc::clone(vars),
            terms,
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The constant value, if the polynomial is constant.
    pub fn constant_value(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Coeff::zero(),
        }
    }

    pub fn coefficient(&self, m: Monomial) -> Coeff {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Coeff::zero())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Coeff {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Coeff::zero)
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .first()
            .map(|(m, _)| m.total_degree())
            .unwrap_or(0)
    }

    pub fn min_total_degree(&self) -> u32 {
        self.terms
            .last()
            .map(|(m, _)| m.total_degree())
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.total_degree() == self.min_total_degree()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(var))
            .max()
            .unwrap_or(0)
    }

    /// Total degree counting only the listed variables.
    pub fn degree_in_vars(&self, vars: &[usize]) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| vars.iter().map(|&v| m.exponent(v)).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&v| self.terms.iter().any(|(m, _)| m.exponent(v) > 0))
            .collect()
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn checked_add(&self, rhs: &Self) -> AlgebraResult<Self> {
        ensure_same(&self.vars, &rhs.vars)?;
        Ok(self.merge(rhs, false))
    }

    pub fn checked_sub(&self, rhs: &Self) -> AlgebraResult<Self> {
        ensure_same(&self.vars, &rhs.vars)?;
        Ok(self.merge(rhs, true))
    }

    pub fn checked_mul(&self, rhs: &Self) -> AlgebraResult<Self> {
        ensure_same(&self.vars, &rhs.vars)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn merge(&self, rhs: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(
            b[j..]
                .iter()
                .map(|(m, c)| (*m, if negate { -c } else { c.clone() })),
        );
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: out,
        }
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.vars);
        }
        if rhs.terms.len() == 1 {
            return self.mul_term(rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        let integral = self.has_integer_coefficients() && rhs.has_integer_coefficients();
        if integral {
            let mut acc: HashMap<Monomial, BigInt> =
                HashMap::with_capacity(self.terms.len() * rhs.terms.len() / 2 + 1);
            for (ma, ca) in &self.terms {
                let ca = ca.numer();
                for (mb, cb) in &rhs.terms {
                    let prod = ca * cb.numer();
                    match acc.entry(*ma * *mb) {
                        std::collections::hash_map::Entry::Occupied(mut e) => {
                            *e.get_mut() += prod;
                        }
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(prod);
                        }
                    }
                }
            }
            let mut terms: Vec<(Monomial, Coeff)> = acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Coeff::from_integer(c)))
                .collect();
            terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
            return Self::from_sorted(&self.vars, terms);
        }
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(*ma * *mb).or_insert_with(Coeff::zero) += ca * cb;
            }
        }
        let mut terms: Vec<(Monomial, Coeff)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        Self::from_sorted(&self.vars, terms)
    }

    /// Multiplies by a single term `c * m`.
    pub fn mul_term(&self, m: Monomial, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, tc)| (*t * m, tc * c))
            .collect();
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms,
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.mul_term(Monomial::ONE, c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / divisor`, or `NotDivisible` if a remainder
    /// would be left.
    pub fn exact_divide(&self, divisor: &Self) -> AlgebraResult<Self> {
        ensure_same(&self.vars, &divisor.vars)?;
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        let (lead_m, lead_c) = &divisor.terms[0];
        if divisor.terms.len() == 1 {
            let inv = lead_c.recip();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let q = m.checked_div(*lead_m).ok_or(AlgebraError::NotDivisible)?;
                terms.push((q, c * &inv));
            }
            return Ok(Self::from_sorted(&self.vars, terms));
        }
        if self.total_degree() < divisor.total_degree()
            || self.min_total_degree() < divisor.min_total_degree()
        {
            return Err(AlgebraError::NotDivisible);
        }
        let rest = &divisor.terms[1..];
        if lead_c.is_integer()
            && lead_c.numer().magnitude().is_one()
            && self.has_integer_coefficients()
            && divisor.has_integer_coefficients()
        {
            return self.exact_divide_integral(divisor);
        }
        let inv = lead_c.recip();
        let mut rem: BTreeMap<Monomial, Coeff> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.checked_div(*lead_m).ok_or(AlgebraError::NotDivisible)?;
            let qc = c * &inv;
            for (dm, dc) in rest {
                let key = qm * *dm;
                let delta = &qc * dc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Ok(Self::from_sorted(&self.vars, quotient))
    }

    /// Division over Z by a divisor with leading coefficient +-1.
    fn exact_divide_integral(&self, divisor: &Self) -> AlgebraResult<Self> {
        let (lead_m, lead_c) = &divisor.terms[0];
        let negate = lead_c.is_negative();
        let rest: Vec<(Monomial, BigInt)> = divisor.terms[1..]
            .iter()
            .map(|(m, c)| (*m, c.numer().clone()))
            .collect();
        let mut rem: BTreeMap<Monomial, BigInt> = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer().clone()))
            .collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.checked_div(*lead_m).ok_or(AlgebraError::NotDivisible)?;
            let qc = if negate { -c } else { c };
            for (dm, dc) in &rest {
                let delta = &qc * dc;
                match rem.entry(qm * *dm) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, Coeff::from_integer(qc)));
        }
        Ok(Self::from_sorted(&self.vars, quotient))
    }

    /// Replaces variable `from` by variable `into`, i.e. restricts to the
    /// diagonal `from = into`.
    pub fn identify_vars(&self, from: usize, into: usize) -> Self {
        Self::from_terms(
            &self.vars,
            self.terms.iter().map(|(m, c)| {
                let moved = m
                    .without(from)
                    .with_power(into, m.exponent(from))
                    .expect("degree bound");
                (moved, c.clone())
            }),
        )
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_divide(self).is_ok()
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn content(&self) -> Coeff {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Coeff::zero();
        }
        BigRational::new(num, den)
    }

    /// Splits `self = unit * pp` where `pp` has coprime integer coefficients
    /// and a positive leading coefficient.
    pub fn primitive(&self) -> (Coeff, Self) {
        if self.is_zero() {
            return (Coeff::one(), self.clone());
        }
        let mut unit = self.content();
        if self.leading_coeff().is_negative() {
            unit = -unit;
        }
        let inv = unit.recip();
        (unit, self.scale(&inv))
    }

    /// The primitive part with positive leading coefficient.
    pub fn normalized(&self) -> Self {
        self.primitive().1
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::ONE;
        };
        it.fold(*first, |acc, (m, _)| acc.gcd(*m))
    }

    /// Replaces variable `var` by the constant `value`.
    pub fn specialize(&self, var: usize, value: &Coeff) -> Self {
        if value.is_zero() {
            let terms = self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(var) == 0)
                .cloned()
                .collect();
            return MultiPoly {
                vars: Arc::clone(&self.vars),
                terms,
            };
        }
        let mut powers: Vec<Coeff> = vec![Coeff::one()];
        Self::from_terms(
            &self.vars,
            self.terms.iter().map(|(m, c)| {
                let e = m.exponent(var) as usize;
                while powers.len() <= e {
                    let next = powers.last().unwrap() * value;
                    powers.push(next);
                }
                (m.without(var), c * &powers[e])
            }),
        )
    }

    /// Evaluates at a full point (one value per variable).
    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        assert_eq!(point.len(), self.vars.len(), "point has wrong arity");
        let mut cache: Vec<Vec<Coeff>> = vec![vec![Coeff::one()]; point.len()];
        let mut total = Coeff::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, value) in point.iter().enumerate() {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                let table = &mut cache[v];
                while table.len() <= e {
                    let next = table.last().unwrap() * value;
                    table.push(next);
                }
                term *= &table[e];
            }
            total += term;
        }
        total
    }

    /// Evaluates modulo the prime `MOD_P`; `None` if some coefficient
    /// denominator vanishes mod p.
    pub fn eval_mod(&self, point: &[u64]) -> Option<u64> {
        assert_eq!(point.len(), self.vars.len(), "point has wrong arity");
        let mut cache: Vec<Vec<u64>> = vec![vec![1]; point.len()];
        let mut total = 0u64;
        for (m, c) in &self.terms {
            let mut term = coeff_mod(c)?;
            for (v, &value) in point.iter().enumerate() {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                let table = &mut cache[v];
                while table.len() <= e {
                    let next = mul_mod(*table.last().unwrap(), value);
                    table.push(next);
                }
                term = mul_mod(term, table[e]);
            }
            total = add_mod(total, term);
        }
        Some(total)
    }

    /// Coefficients as a polynomial in `var`: entry `d` multiplies `var^d`
    /// and no longer contains `var`.
    pub fn to_univariate(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exponent(var) as usize].push((m.without(var), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut ts| {
                ts.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
                MultiPoly::from_sorted(&self.vars, ts)
            })
            .collect()
    }

    pub fn from_univariate(vars: &Arc<VarSet>, var: usize, coeffs: &[MultiPoly]) -> Self {
        let mut terms = Vec::new();
        for (d, c) in coeffs.iter().enumerate() {
            for (m, k) in c.terms() {
                debug_assert_eq!(m.exponent(var), 0);
                terms.push((
                    m.with_power(var, d as u32).expect("degree overflow"),
                    k.clone(),
                ));
            }
        }
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MultiPoly::from_sorted(vars, terms)
    }

    /// Dense coefficient vector of a polynomial in at most the single
    /// variable `var`.
    pub fn univariate_coeffs(&self, var: usize) -> Vec<Coeff> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Coeff::zero(); deg + 1];
        for (m, c) in &self.terms {
            debug_assert_eq!(m.total_degree(), m.exponent(var));
            out[m.exponent(var) as usize] = c.clone();
        }
        out
    }

    pub fn from_univariate_coeffs(vars: &Arc<VarSet>, var: usize, coeffs: &[Coeff]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| {
                (
                    Monomial::ONE
                        .with_power(var, d as u32)
                        .expect("degree overflow"),
                    c.clone(),
                )
            })
            .collect();
        MultiPoly::from_sorted(vars, terms)
    }

    /// Keeps only terms of total degree below `order`.
    pub fn truncate(&self, order: u32) -> Self {
        let start = self
            .terms
            .partition_point(|(m, _)| m.total_degree() >= order);
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms[start..].to_vec(),
        }
    }

    /// Moves the polynomial to another variable set with the same names
    /// in (possibly) different positions. Names absent from `target` must
    /// not occur.
    pub fn rebase(&self, target: &Arc<VarSet>) -> AlgebraResult<Self> {
        let mut map = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            map.push(target.index_of(name));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, slot) in map.iter().enumerate() {
                let e = m.exponent(i);
                if e == 0 {
                    continue;
                }
                match slot {
                    Some(j) => exps[*j] = e,
                    None => {
                        return Err(AlgebraError::UnknownVariable(self.vars.name(i).to_string()))
                    }
                }
            }
            terms.push((Monomial::from_exponents(&exps)?, c.clone()));
        }
        Ok(Self::from_terms(target, terms))
    }

    /// Canonical text form, e.g. `3*a1^2*h - 2*a2`.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &VarSet, m: Monomial) -> fmt::Result {
    let mut first = true;
    for v in 0..vars.len() {
        let e = m.exponent(v);
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", vars.name(v))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// The Mersenne prime 2^61 - 1 used for probabilistic pretests.
pub const MOD_P: u64 = (1 << 61) - 1;

pub fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MOD_P {
        s - MOD_P
    } else {
        s
    }
}

pub fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn bigint_mod(v: &BigInt) -> u64 {
    if let Some(small) = v.to_i64() {
        return small.rem_euclid(MOD_P as i64) as u64;
    }
    let r = v.mod_floor(&BigInt::from(MOD_P));
    u64::try_from(r).expect("reduced below the modulus")
}

/// Image of a rational in Z/p, `None` when the denominator is divisible by p.
pub fn coeff_mod(c: &Coeff) -> Option<u64> {
    let num = bigint_mod(c.numer());
    if c.denom().is_one() {
        return Some(num);
    }
    let den = bigint_mod(c.denom());
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, pow_mod(den, MOD_P - 2)))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, &self.vars, *m)?;
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    /// Panics when the variable sets differ; use `checked_add` otherwise.
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Product of a list of polynomials; `one` for the empty list.
pub fn product<'a, I>(vars: &Arc<VarSet>, factors: I) -> MultiPoly
where
    I: IntoIterator<Item = &'a MultiPoly>,
{
    factors
        .into_iter()
        .fold(MultiPoly::one(vars), |acc, f| &acc * f)
}
