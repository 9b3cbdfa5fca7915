//! The closed integer formula for the integrals and its k = 1, k = 2
//! specializations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::combinat::{binomial, factorial_table, weak_compositions};
use crate::error::{EnvelopeError, Result};
use crate::geometry::FixedPoint;
use crate::localize::{IntegralValue, Method};

/// The multiset {j_m - j_l : l < m} of a tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMultiset {
    pub values: Vec<i64>,
}

impl DeltaMultiset {
    pub fn of(j: &[usize]) -> Self {
        let mut values = Vec::new();
        for l in 0..j.len() {
            for m in l + 1..j.len() {
                values.push(j[m] as i64 - j[l] as i64);
            }
        }
        DeltaMultiset { values }
    }
}

/// e_m of a multiset of integers.
pub fn elementary_symmetric(m: usize, values: &[i64]) -> Result<BigInt> {
    if m > values.len() {
        return Err(EnvelopeError::OutOfRange(format!(
            "e_{m} of {} values",
            values.len()
        )));
    }
    // e[r] after processing a prefix; standard one-pass recurrence.
    let mut e = vec![BigInt::zero(); m + 1];
    e[0] = BigInt::one();
    for &v in values {
        for r in (1..=m).rev() {
            let add = &e[r - 1] * v;
            e[r] += add;
        }
    }
    Ok(e.swap_remove(m))
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn int_pow(base: i64, e: usize) -> BigInt {
    // 0^0 = 1
    num_traits::pow(BigInt::from(base), e)
}

/// G_lambda(j - i, j) = (-1)^lambda / (i-1)! * sum_p (-1)^{i-1-p} C(i-1, p)
/// (p + j - i)^{lambda + i - 1}.
pub fn g_term(lambda: usize, i: usize, j: usize) -> BigRational {
    assert!(i >= 1 && j >= i, "g_term needs 1 <= i <= j");
    let mut sum = BigInt::zero();
    for p in 0..i {
        let t = binomial(i - 1, p) * int_pow((p + j - i) as i64, lambda + i - 1);
        sum += sign((i - 1 - p) as i64) * t;
    }
    let fact = factorial_table(i)[i - 1].clone();
    BigRational::new(sign(lambda as i64) * sum, fact)
}

/// The inner factor of B_J as displayed, with 1/((i-1-p)! p!) weights.
fn printed_factor(lambda: usize, i: usize, j: i64, facts: &[BigInt]) -> BigRational {
    let mut acc = BigRational::zero();
    for p in 0..i {
        let base = p as i64 + j - i as i64;
        let num = sign(p as i64) * int_pow(base, i + lambda - 1);
        acc += BigRational::new(num, &facts[i - 1 - p] * &facts[p]);
    }
    acc
}

/// Ordered tuples of distinct entries in 1..=n with j_r >= i_r.
pub fn ordered_tuples(p: &FixedPoint) -> Vec<Vec<usize>> {
    let n = p.n();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p.k());
    fn rec(i: &[usize], n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let r = cur.len();
        if r == i.len() {
            out.push(cur.clone());
            return;
        }
        for v in i[r]..=n {
            if !cur.contains(&v) {
                cur.push(v);
                rec(i, n, cur, out);
                cur.pop();
            }
        }
    }
    rec(p.indices(), n, &mut cur, &mut out);
    out
}

/// A_J = (-1)^{|J|} e_top(Delta(J)) prod 1/((n - j_r)! (j_r - i_r)!).
pub fn a_coefficient(p: &FixedPoint, j: &[usize], facts: &[BigInt]) -> BigRational {
    let n = p.n();
    let delta = DeltaMultiset::of(j);
    let top = elementary_symmetric(delta.values.len(), &delta.values).expect("top degree");
    let weight: usize = j.iter().sum();
    let mut den = BigInt::one();
    for (&jr, &ir) in j.iter().zip(p.indices()) {
        den *= &facts[n - jr] * &facts[jr - ir];
    }
    BigRational::new(sign(weight as i64) * top, den)
}

/// B_J exactly as displayed.
pub fn b_coefficient(p: &FixedPoint, j: &[usize], facts: &[BigInt]) -> BigRational {
    let (n, k) = (p.n(), p.k());
    let delta = DeltaMultiset::of(j);
    let c2 = delta.values.len();
    let base = (k * (n - k + 1)) as i64 - p.weight() as i64;
    let mut total = BigRational::zero();
    for d in 0..=c2 {
        let e = elementary_symmetric(c2 - d, &delta.values).expect("in range");
        if e.is_zero() || base + (d as i64) < 0 {
            continue;
        }
        let mut inner = BigRational::zero();
        for lam in weak_compositions((base + d as i64) as usize, k) {
            let mut prod = BigRational::one();
            for s in 0..k {
                prod *= printed_factor(lam[s], p.indices()[s], j[s] as i64, facts);
                if prod.is_zero() {
                    break;
                }
            }
            inner += prod;
        }
        total += BigRational::from_integer(sign(d as i64) * e) * inner;
    }
    total
}

/// B_J assembled from g_term, without the (-1)^d factor.
pub fn b_coefficient_via_g(p: &FixedPoint, j: &[usize]) -> BigRational {
    let (n, k) = (p.n(), p.k());
    let delta = DeltaMultiset::of(j);
    let c2 = delta.values.len();
    let base = (k * (n - k + 1)) as i64 - p.weight() as i64;
    let mut total = BigRational::zero();
    for d in 0..=c2 {
        let e = elementary_symmetric(c2 - d, &delta.values).expect("in range");
        if e.is_zero() || base + (d as i64) < 0 {
            continue;
        }
        let mut inner = BigRational::zero();
        for lam in weak_compositions((base + d as i64) as usize, k) {
            let prod = (0..k).fold(BigRational::one(), |acc, s| {
                acc * g_term(lam[s], p.indices()[s], j[s])
            });
            inner += prod;
        }
        total += BigRational::from_integer(e) * inner;
    }
    total
}

/// h^{k(n-k)} times the integral of Stab(p), from the closed formula.
pub fn closed_form_integral(p: &FixedPoint) -> Result<IntegralValue> {
    let (n, k) = (p.n(), p.k());
    let facts = factorial_table(2 * n + 2);
    let sum: BigRational = ordered_tuples(p)
        .par_iter()
        .map(|j| a_coefficient(p, j, &facts) * b_coefficient(p, j, &facts))
        .reduce(BigRational::zero, |a, b| a + b);
    let s = sign((k * (n - k)) as i64 - p.weight() as i64);
    IntegralValue::new(p.clone(), BigRational::from_integer(s) * sum, Method::Closed)
}

/// The same value through g_term: (-1)^{|I|} sum_J A_J B^G_J.
pub fn closed_form_via_g(p: &FixedPoint) -> Result<IntegralValue> {
    let n = p.n();
    let facts = factorial_table(2 * n + 2);
    let sum: BigRational = ordered_tuples(p)
        .iter()
        .map(|j| a_coefficient(p, j, &facts) * b_coefficient_via_g(p, j))
        .fold(BigRational::zero(), |a, b| a + b);
    let s = sign(p.weight() as i64);
    IntegralValue::new(p.clone(), BigRational::from_integer(s) * sum, Method::Closed)
}

fn inv_factorial(m: i64, facts: &[BigInt]) -> BigRational {
    // 1/Gamma(m+1), which vanishes at negative integers.
    if m < 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::one(), facts[m as usize].clone())
    }
}

/// The k = 2 formula, defined for n >= 3 and i1, i2 >= 1 (equal indices
/// allowed). `None` outside that range.
pub fn gr2_closed_form(i1: i64, i2: i64, n: i64) -> Option<BigRational> {
    if n < 3 || i1 < 1 || i2 < 1 {
        return None;
    }
    let facts = factorial_table((n.max(i1).max(i2)) as usize + 1);
    let pre = BigRational::from_integer(&facts[(n - 2) as usize] * &facts[(n - 3) as usize])
        * inv_factorial(i1 - 1, &facts)
        * inv_factorial(i2 - 1, &facts)
        * inv_factorial(n - i1, &facts)
        * inv_factorial(n - i2, &facts);
    let poly = -3 * i1 + i2 - i1 * i1 + 4 * i1 * i2 - i2 * i2
        + n * (2 * (i1 - 2 * i2 + 1) + (i2 - i1) * (i2 - i1))
        + n * n * (i2 - i1);
    Some(pre * BigRational::from_integer(poly.into()))
}

/// N(n, k) = C(n,k) C(n,k-1) / n.
pub fn narayana(n: usize, k: usize) -> Result<BigInt> {
    if n == 0 || k == 0 || k > n {
        return Err(EnvelopeError::OutOfRange(format!("N({n},{k})")));
    }
    Ok(binomial(n, k) * binomial(n, k - 1) / n)
}

/// Whether a rational is a strictly positive integer.
pub fn is_positive_integer(v: &BigRational) -> bool {
    v.is_integer() && v.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::binomial_u64;
    use crate::exactalg::{rat, TruncatedSeries, VarSet, MultiPoly};
    use crate::geometry::enumerate_fixed_points;

    fn value(n: usize, idx: &[usize]) -> BigRational {
        closed_form_integral(&FixedPoint::new(n, idx.to_vec()).unwrap())
            .unwrap()
            .scaled
    }

    #[test]
    fn elementary_symmetric_small() {
        assert_eq!(elementary_symmetric(0, &[5, 7]).unwrap(), BigInt::one());
        assert_eq!(elementary_symmetric(1, &[1, 2, 3]).unwrap(), BigInt::from(6));
        assert_eq!(elementary_symmetric(3, &[1, 2, 3]).unwrap(), BigInt::from(6));
        assert!(elementary_symmetric(4, &[1, 2, 3]).is_err());
    }

    #[test]
    fn generating_identity_for_delta() {
        // sum_d e_{top-d}(Delta) u^d = prod (u + delta) at u = 0..4
        let tuples = [[1usize, 2, 5], [2, 3, 4], [1, 4, 6], [3, 5, 9]];
        for j in tuples {
            let d = DeltaMultiset::of(&j);
            let top = d.values.len();
            for u in 0..5i64 {
                let lhs: BigInt = (0..=top)
                    .map(|k| elementary_symmetric(top - k, &d.values).unwrap() * u.pow(k as u32))
                    .sum();
                let rhs: BigInt = d.values.iter().map(|&v| BigInt::from(u + v)).product();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn g_term_first_index() {
        for lam in 0..5 {
            for j in 1..6 {
                let expect = BigInt::from(-(j as i64 - 1)).pow(lam as u32);
                assert_eq!(g_term(lam, 1, j), BigRational::from_integer(expect));
            }
        }
    }

    /// prod_{t=a}^{b-1} 1/(1 + t w) as a series in w = 1/u.
    fn gamma_ratio_series(a: usize, b: usize, order: u32) -> Vec<BigRational> {
        let vs = VarSet::new(["w"]).unwrap();
        let w = MultiPoly::var(&vs, 0);
        let mut acc = TruncatedSeries::constant(&vs, rat(1), order);
        for t in a..b {
            let f = TruncatedSeries::new(&MultiPoly::one(&vs) + &w.scale(&rat(t as i64)), order);
            acc = acc.mul(&f.inverse().unwrap()).unwrap();
        }
        acc.poly().univariate_coeffs(0)
    }

    #[test]
    fn g_term_matches_gamma_ratio_expansion() {
        for i in 1..5 {
            for j in i..i + 4 {
                let coeffs = gamma_ratio_series(j - i, j, 4);
                for lam in 0..4 {
                    let c = coeffs.get(lam).cloned().unwrap_or_else(BigRational::zero);
                    assert_eq!(g_term(lam, i, j), c, "lambda={lam} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn g_term_asymptotics_at_large_u() {
        let (i, j) = (3usize, 5usize);
        for u in [1000i64, 10_000, 100_000] {
            let u = BigRational::from_integer(u.into());
            let exact = (j - i..j).fold(BigRational::one(), |acc, t| {
                acc * &u / (&u + BigRational::from_integer((t as i64).into()))
            });
            let approx = (0..4).fold(BigRational::zero(), |acc, lam| {
                acc + g_term(lam, i, j) / num_traits::pow(u.clone(), lam)
            });
            let err = (exact - approx).abs() * num_traits::pow(u.clone(), 4);
            // The scaled error tends to |G_4|.
            assert!(err < g_term(4, i, j).abs() * rat(2));
        }
        assert_eq!(g_term(0, 3, 5), BigRational::one());
    }

    #[test]
    fn binomial_rows() {
        for n in 2..=8 {
            for i in 1..=n {
                assert_eq!(value(n, &[i]), rat(binomial_u64(n - 1, i - 1) as i64));
            }
        }
    }

    #[test]
    fn gr25_triangle() {
        assert_eq!(value(5, &[2, 4]), rat(10));
        assert_eq!(value(5, &[2, 3]), rat(4));
        assert_eq!(value(5, &[1, 5]), rat(2));
    }

    #[test]
    fn printed_and_g_routes_agree() {
        let facts = factorial_table(20);
        for (n, k) in [(4, 2), (5, 2), (5, 3), (6, 3)] {
            for p in enumerate_fixed_points(n, k).unwrap() {
                let flip = BigRational::from_integer(sign((k * (n - k)) as i64));
                for j in ordered_tuples(&p).iter().take(12) {
                    assert_eq!(b_coefficient_via_g(&p, j), &flip * b_coefficient(&p, j, &facts));
                }
                assert_eq!(closed_form_via_g(&p).unwrap(), closed_form_integral(&p).unwrap());
            }
        }
    }

    #[test]
    fn gr2_formula_examples() {
        assert_eq!(gr2_closed_form(2, 3, 5), Some(rat(4)));
        assert_eq!(gr2_closed_form(1, 3, 4), Some(rat(3)));
        assert_eq!(gr2_closed_form(1, 2, 4), Some(rat(1)));
        assert_eq!(gr2_closed_form(1, 1, 4), Some(rat(0)));
        assert_eq!(gr2_closed_form(2, 2, 4), Some(rat(-2)));
        assert_eq!(gr2_closed_form(1, 2, 2), None);
    }

    #[test]
    fn narayana_rows_are_catalan() {
        assert_eq!(narayana(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(narayana(1, 1).unwrap(), BigInt::one());
        // Dyck paths by brute force over all up/down words.
        fn dyck(n: usize) -> u64 {
            (0u32..1 << (2 * n))
                .filter(|w| {
                    let mut height = 0i32;
                    for b in 0..2 * n {
                        height += if w >> b & 1 == 1 { 1 } else { -1 };
                        if height < 0 {
                            return false;
                        }
                    }
                    height == 0
                })
                .count() as u64
        }
        for n in 1..=8 {
            let total: BigInt = (1..=n).map(|k| narayana(n, k).unwrap()).sum();
            assert_eq!(total, BigInt::from(dyck(n)));
        }
        assert!(narayana(3, 4).is_err());
    }
}
