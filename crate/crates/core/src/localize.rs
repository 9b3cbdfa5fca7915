//! Equivariant localization sums and their nonequivariant limits.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::permutations_with_sign;
use crate::error::{EnvelopeError, Result};
use crate::exactalg::{
    rat, rational_limit_at_zero, Coeff, LinearFractionSum, MultiPoly, RationalFunction,
    Substitution, VarSet,
};
use crate::geometry::{
    attracting_leq, enumerate_fixed_points, forms_product, tangent_forms, Chamber, FixedPoint,
    FormRing, Grassmannian, LinearForm,
};
use crate::report::{CheckReport, Level};
use crate::weightfn::{restriction_in, restriction_summands};

/// Default bound on C(n,k) * 2k(n-k) for the full multivariate method.
pub const DEFAULT_MAX_COST: u64 = 360;

/// How an integral was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Z,
    Full,
    Closed,
    Paths,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Z => "z",
            Method::Full => "full",
            Method::Closed => "closed",
            Method::Paths => "paths",
        };
        f.write_str(s)
    }
}

/// The value of h^{k(n-k)} times the integral of Stab(p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralValue {
    pub point: FixedPoint,
    #[serde(serialize_with = "as_string")]
    pub scaled: BigRational,
    pub method: Method,
}

fn as_string<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl IntegralValue {
    /// Wraps a value, rejecting non-integers.
    pub fn new(point: FixedPoint, scaled: BigRational, method: Method) -> Result<Self> {
        if !scaled.is_integer() {
            return Err(EnvelopeError::NonIntegerResult(format!(
                "{point} via {method}: {scaled}"
            )));
        }
        Ok(IntegralValue {
            point,
            scaled,
            method,
        })
    }
}

/// Sum over fixed points of restriction / tangent Euler class.
#[derive(Clone, Debug)]
pub struct LocalizationSum {
    pub point: FixedPoint,
    pub chamber: Chamber,
    pub value: RationalFunction,
}

/// Fixed points J whose restriction can be nonzero: tau^-1 J >= tau^-1 I.
pub fn support(p: &FixedPoint, c: &Chamber) -> Vec<FixedPoint> {
    let inv = c.inverse();
    let base = inv.apply_point(p);
    enumerate_fixed_points(p.n(), p.k())
        .expect("valid point")
        .into_iter()
        .filter(|j| attracting_leq(&base, &inv.apply_point(j)).expect("same Grassmannian"))
        .collect()
}

/// The localization sum in factored form, in any ring the forms embed into.
pub fn localization_in<R: FormRing>(
    ring: &R,
    p: &FixedPoint,
    c: &Chamber,
) -> Result<LinearFractionSum> {
    let terms: Vec<LinearFractionSum> = support(p, c)
        .par_iter()
        .map(|j| {
            let mut f = restriction_in(ring, p, c, j)?;
            let den: Vec<MultiPoly> = tangent_forms(j).iter().map(|t| ring.embed(t)).collect();
            f.mul_assign(&LinearFractionSum::factored(ring.ring(), &[], &den)?)?;
            Ok(f)
        })
        .collect::<Result<_>>()?;
    // Lexicographic accumulation keeps intermediate sizes reproducible.
    let mut acc = LinearFractionSum::zero(ring.ring());
    for t in &terms {
        acc.add_assign(t)?;
    }
    Ok(acc)
}

pub fn localization_sum(gr: &Grassmannian, p: &FixedPoint, c: &Chamber) -> Result<LocalizationSum> {
    Ok(LocalizationSum {
        point: p.clone(),
        chamber: c.clone(),
        value: localization_in(gr, p, c)?.to_rational(),
    })
}

/// The univariate ring used after a_s -> s z h and h -> 1.
pub fn z_ring() -> Arc<VarSet> {
    VarSet::new(["z"]).expect("one variable")
}

/// The image of a linear form under a_s -> s z h, divided by h.
pub fn z_factor(zr: &Arc<VarSet>, f: &LinearForm) -> MultiPoly {
    let (slope, constant) = f.z_image();
    &MultiPoly::var(zr, 0).scale(&rat(slope)) + &MultiPoly::from_int(zr, constant)
}

/// Accumulates products of linear forms over products of linear forms in
/// Q(z) after the substitution, checking that each term carries exactly
/// h^{-k(n-k)} so that the h-scaled sum is free of h.
pub fn z_accumulate<'a, I>(zr: &Arc<VarSet>, dim: usize, terms: I) -> Result<RationalFunction>
where
    I: IntoIterator<Item = (&'a [LinearForm], Vec<&'a [LinearForm]>)>,
{
    let mut acc = LinearFractionSum::zero(zr);
    for (num, dens) in terms {
        let den_count: usize = dens.iter().map(|d| d.len()).sum();
        if den_count != num.len() + dim {
            return Err(EnvelopeError::LimitDoesNotExist(format!(
                "term has h-degree {} instead of -{dim}",
                num.len() as i64 - den_count as i64
            )));
        }
        let numer = num
            .iter()
            .fold(MultiPoly::one(zr), |acc, f| &acc * &z_factor(zr, f));
        if numer.is_zero() {
            continue;
        }
        let den: Vec<MultiPoly> = dens
            .iter()
            .flat_map(|d| d.iter())
            .map(|f| z_factor(zr, f))
            .collect();
        acc.add_assign(&LinearFractionSum::term(numer, &den)?)?;
    }
    Ok(acc.to_rational())
}

/// h^{k(n-k)} times the localization sum after a_s -> s z h, as an element
/// of Q(z).
pub fn z_substituted_sum(gr: &Grassmannian, p: &FixedPoint) -> Result<RationalFunction> {
    let zr = z_ring();
    let id = Chamber::identity(gr.n());
    let js = support(p, &id);
    let parts: Vec<(Vec<crate::weightfn::Summand>, Vec<LinearForm>)> = js
        .iter()
        .map(|j| (restriction_summands(p, j, &id), tangent_forms(j)))
        .collect();
    let terms = parts.iter().flat_map(|(summands, tangent)| {
        summands
            .iter()
            .map(move |s| (s.num.as_slice(), vec![s.den.as_slice(), tangent.as_slice()]))
    });
    z_accumulate(&zr, gr.base_dim(), terms)
}

/// The z -> 0 limit of an h-free element of Q(z), required to be an integer.
pub fn z_limit(point: &FixedPoint, f: &RationalFunction, method: Method) -> Result<IntegralValue> {
    let lim = rational_limit_at_zero(f, 0)
        .map_err(|e| EnvelopeError::LimitDoesNotExist(format!("{point} via {method}: {e}")))?;
    let value = lim.constant_value().expect("univariate limit is constant");
    IntegralValue::new(point.clone(), value, method)
}

pub fn integral_via_z_limit(gr: &Grassmannian, p: &FixedPoint) -> Result<IntegralValue> {
    let f = z_substituted_sum(gr, p)?;
    z_limit(p, &f, Method::Z)
}

/// The cost measure C(n,k) * 2k(n-k) guarding the multivariate method.
pub fn full_cost(gr: &Grassmannian) -> u64 {
    crate::combinat::binomial_u64(gr.n(), gr.k()) * 2 * gr.base_dim() as u64
}

/// Sets every a_i to 0 in a canonical localization value and scales by
/// h^{k(n-k)}; the result must be a constant.
pub fn nonequivariant_limit(gr: &Grassmannian, f: &RationalFunction) -> Result<BigRational> {
    let mut g = f.clone();
    for v in 0..gr.n() {
        g = rational_limit_at_zero(&g, v)
            .map_err(|e| EnvelopeError::LimitDoesNotExist(e.to_string()))?;
    }
    let scale = RationalFunction::from_poly(gr.h().pow(gr.base_dim() as u32));
    let scaled = g.checked_mul(&scale)?;
    scaled
        .constant_value()
        .ok_or_else(|| EnvelopeError::LimitDoesNotExist(format!("h does not cancel: {scaled}")))
}

pub fn integral_full_multivariate(
    gr: &Grassmannian,
    p: &FixedPoint,
    max_cost: u64,
) -> Result<IntegralValue> {
    let cost = full_cost(gr);
    if cost > max_cost {
        return Err(EnvelopeError::CostBoundExceeded {
            cost,
            bound: max_cost,
        });
    }
    let sum = localization_sum(gr, p, &Chamber::identity(gr.n()))?;
    let value = nonequivariant_limit(gr, &sum.value)?;
    IntegralValue::new(p.clone(), value, Method::Full)
}

/// The multivariate substitution a_s -> s z h into a rational function of
/// (a, h), scaled by h^{k(n-k)}; the result must be free of h and is
/// returned in Q(z).
pub fn substitute_z(gr: &Grassmannian, f: &RationalFunction) -> Result<RationalFunction> {
    let zh = VarSet::new(["z", "h"])?;
    let z = MultiPoly::var(&zh, 0);
    let h = MultiPoly::var(&zh, 1);
    let mut images: Vec<MultiPoly> = (1..=gr.n())
        .map(|s| (&z * &h).scale(&rat(s as i64)))
        .collect();
    images.push(h.clone());
    let sub = Substitution::from_images(gr.vars(), &zh, images);
    let g = f.substitute(&sub)?;
    let scaled = g.checked_mul(&RationalFunction::from_poly(h.pow(gr.base_dim() as u32)))?;
    if scaled.num().degree_in(1) != 0 || scaled.den().degree_in(1) != 0 {
        return Err(EnvelopeError::LimitDoesNotExist(format!(
            "h survives the substitution: {scaled}"
        )));
    }
    Ok(scaled.rebase(&z_ring())?)
}

/// Relabeling side of chamber dependence: the sum for chamber tau equals
/// tau applied to the standard-chamber sum of tau^-1(p).
pub fn chamber_covariance_check(gr: &Grassmannian, p: &FixedPoint, tau: &Chamber) -> CheckReport {
    let mut report = CheckReport::new(
        format!("chamber covariance for {p}, tau = {:?}", tau.perm()),
        Level::Theorem,
    );
    let run = || -> Result<bool> {
        let lhs = localization_sum(gr, p, tau)?.value;
        let pre = tau.inverse().apply_point(p);
        let base = localization_sum(gr, &pre, &Chamber::identity(gr.n()))?.value;
        let rhs = base.substitute(&tau.substitution(gr))?;
        Ok(lhs == rhs)
    };
    match run() {
        Ok(true) => report.pass(),
        Ok(false) => report.fail(format!("{p}: the two sides differ")),
        Err(e) => report.error(e.to_string()),
    }
    report
}

/// The pieces of the combined-numerator argument for one fixed point J.
struct CombinedTerm {
    /// N'_J V_J V_{J^c} with the sign from reordering the tangent weights.
    numer: MultiPoly,
    /// D'_J V^h_{J,J^c} as linear forms.
    den: Vec<LinearForm>,
}

fn vandermonde(gr: &Grassmannian, idx: &[usize]) -> MultiPoly {
    let mut acc = MultiPoly::one(gr.vars());
    for (l, &x) in idx.iter().enumerate() {
        for &y in &idx[l + 1..] {
            acc = &acc * &gr.diff(x, y);
        }
    }
    acc
}

fn combined_term(
    gr: &Grassmannian,
    p: &FixedPoint,
    j: &FixedPoint,
) -> Result<Option<CombinedTerm>> {
    let n = gr.n();
    let k = gr.k();
    let jx = j.indices();
    let mut nj = MultiPoly::zero(gr.vars());
    for (sigma, sign) in permutations_with_sign(k) {
        let mut forms = Vec::new();
        for (r, &i) in p.indices().iter().enumerate() {
            let x = jx[sigma[r]];
            forms.extend((1..i).map(|alpha| LinearForm::diff(n, alpha, x)));
            forms.extend((i + 1..=n).map(|beta| LinearForm::diff_h(n, x, beta)));
        }
        for l in 0..k {
            for m in l + 1..k {
                forms.push(LinearForm::diff_h(n, jx[sigma[m]], jx[sigma[l]]));
            }
        }
        let term = forms_product(gr, &forms);
        nj = if sign > 0 { &nj + &term } else { &nj - &term };
    }
    if nj.is_zero() {
        return Ok(None);
    }
    let vj = vandermonde(gr, jx);
    let n_prime = nj.exact_divide(&vj)?;
    let comp = j.complement();
    let swaps = comp
        .iter()
        .map(|&v| jx.iter().filter(|&&s| v > s).count())
        .sum::<usize>();
    let mut numer = &(&n_prime * &vj) * &vandermonde(gr, &comp);
    if swaps % 2 == 1 {
        numer = -&numer;
    }
    let mut den = Vec::new();
    for l in 0..k {
        for m in l + 1..k {
            den.push(LinearForm::diff_h(n, jx[l], jx[m]));
            den.push(LinearForm::diff_h(n, jx[m], jx[l]));
        }
    }
    for &v in &comp {
        for &s in jx {
            den.push(LinearForm::diff_h(n, s, v));
        }
    }
    Ok(Some(CombinedTerm { numer, den }))
}

/// The combined numerator of the resummed localization sum over the lcm
/// of the h-shifted denominators, together with the factors of that lcm.
pub fn combined_numerator(
    gr: &Grassmannian,
    p: &FixedPoint,
) -> Result<(MultiPoly, Vec<LinearForm>)> {
    let terms: Vec<CombinedTerm> = gr
        .fixed_points()
        .par_iter()
        .map(|j| combined_term(gr, p, j))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut lcm: Vec<LinearForm> = terms.iter().flat_map(|t| t.den.iter().cloned()).collect();
    lcm.sort();
    lcm.dedup();
    let parts: Vec<MultiPoly> = terms
        .par_iter()
        .map(|t| {
            let mut acc = t.numer.clone();
            for f in lcm.iter().filter(|f| !t.den.contains(f)) {
                acc = &acc * &f.to_poly(gr);
            }
            acc
        })
        .collect();
    let total = parts
        .iter()
        .fold(MultiPoly::zero(gr.vars()), |acc, q| &acc + q);
    Ok((total, lcm))
}

/// Checks that the full Vandermonde divides the combined numerator, that
/// the quotient reproduces the localization sum, and that the numerator
/// vanishes on three random diagonals a_x = a_y.
pub fn vandermonde_divisibility_check(gr: &Grassmannian, p: &FixedPoint) -> CheckReport {
    let mut report = CheckReport::new(format!("Vandermonde divisibility for {p}"), Level::Theorem);
    let (numer, lcm) = match combined_numerator(gr, p) {
        Ok(v) => v,
        Err(e) => {
            report.error(e.to_string());
            return report;
        }
    };
    let all: Vec<usize> = (1..=gr.n()).collect();
    let v = vandermonde(gr, &all);
    match numer.exact_divide(&v) {
        Ok(q) => {
            report.pass();
            let den: Vec<MultiPoly> = lcm.iter().map(|f| f.to_poly(gr)).collect();
            let resummed = LinearFractionSum::term(q, &den).map(|t| t.to_rational());
            let direct = localization_sum(gr, p, &Chamber::identity(gr.n())).map(|s| s.value);
            match (resummed, direct) {
                (Ok(a), Ok(b)) if a == b => report.pass(),
                (Ok(_), Ok(_)) => report.fail(format!(
                    "{p}: resummed value differs from the localization sum"
                )),
                (Err(e), _) => report.error(e.to_string()),
                (_, Err(e)) => report.error(e.to_string()),
            }
        }
        Err(_) => report.fail(format!("{p}: combined numerator not divisible by V")),
    }
    let mut pairs: Vec<(usize, usize)> = (1..=gr.n())
        .flat_map(|x| (x + 1..=gr.n()).map(move |y| (x, y)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(p.weight() as u64 * 131 + gr.n() as u64);
    pairs.shuffle(&mut rng);
    for &(x, y) in pairs.iter().take(3) {
        if numer.identify_vars(y - 1, x - 1).is_zero() {
            report.pass();
        } else {
            report.fail(format!("{p}: numerator does not vanish at a{x} = a{y}"));
        }
    }
    report
}

/// h^{k(n-k)} times the integral for every fixed point, via the z-limit.
pub fn integral_table(gr: &Grassmannian) -> Result<Vec<IntegralValue>> {
    gr.fixed_points()
        .par_iter()
        .map(|p| integral_via_z_limit(gr, p))
        .collect()
}

/// Whether a rational is a (big) integer equal to `n`.
pub fn equals_int(v: &BigRational, n: i64) -> bool {
    v == &BigRational::from_integer(n.into())
}

#[allow(dead_code)]
fn is_one(v: &Coeff) -> bool {
    v.is_one() && !v.is_zero()
}
