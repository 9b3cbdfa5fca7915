//! Multivariate gcd by content extraction and a primitive pseudo-remainder
//! sequence in one main variable, recursing on the coefficients.

use num_traits::One;

use crate::error::AlgebraResult;
use crate::exactalg::monomial::Monomial;
use crate::exactalg::poly::{Coeff, MultiPoly};
use crate::exactalg::varset::ensure_same;

/// Greatest common divisor normalized to coprime integer coefficients and
/// a positive leading coefficient. `gcd(0, p)` is `p` normalized and
/// `gcd(0, 0)` is zero.
pub fn poly_gcd(lhs: &MultiPoly, rhs: &MultiPoly) -> AlgebraResult<MultiPoly> {
    ensure_same(lhs.vars(), rhs.vars())?;
    Ok(gcd_inner(lhs, rhs))
}

fn gcd_inner(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.vars());
    }
    // Pull out the common monomial factor first.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(mb);
    let a = strip_monomial(a, ma);
    let b = strip_monomial(b, mb);
    let mono = MultiPoly::monomial(a.vars(), mg, Coeff::one());
    if a.is_constant() || b.is_constant() {
        return mono;
    }
    if a.len() == b.len() && a.normalized() == b.normalized() {
        return (&mono * &a).normalized();
    }
    let g = gcd_no_monomial(&a, &b);
    (&mono * &g).normalized()
}

fn strip_monomial(p: &MultiPoly, m: Monomial) -> MultiPoly {
    if m.is_one() {
        return p.clone();
    }
    let terms = p
        .terms()
        .iter()
        .map(|(t, c)| {
            (
                t.checked_div(m).expect("monomial content divides"),
                c.clone(),
            )
        })
        .collect();
    MultiPoly::from_sorted(p.vars(), terms)
}

fn gcd_no_monomial(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let sa = a.support();
    let sb = b.support();
    // A variable in only one argument cannot occur in the gcd: replace that
    // argument by its content with respect to the variable.
    if let Some(&v) = sa.iter().find(|v| !sb.contains(v)) {
        return gcd_inner(&content_in(a, v), b);
    }
    if let Some(&v) = sb.iter().find(|v| !sa.contains(v)) {
        return gcd_inner(a, &content_in(b, v));
    }
    if sa.is_empty() {
        return MultiPoly::one(a.vars());
    }
    if a.exact_divide(b).is_ok() {
        return b.normalized();
    }
    if b.exact_divide(a).is_ok() {
        return a.normalized();
    }
    // Main variable: the one of lowest combined degree keeps the PRS short.
    let v = *sa
        .iter()
        .min_by_key(|&&v| a.degree_in(v) + b.degree_in(v))
        .expect("nonempty support");
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let cg = gcd_inner(&ca, &cb);
    let pa = a.exact_divide(&ca).expect("content divides");
    let pb = b.exact_divide(&cb).expect("content divides");
    let g = primitive_prs(&pa, &pb, v);
    &cg * &g
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let coeffs = p.to_univariate(var);
    let mut nonzero: Vec<&MultiPoly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    // Smallest first: the running gcd collapses fastest.
    nonzero.sort_by_key(|c| (c.total_degree(), c.len()));
    let mut g = MultiPoly::zero(p.vars());
    for c in nonzero {
        g = gcd_inner(&g, c);
        if g.is_constant() {
            return MultiPoly::one(p.vars());
        }
    }
    g
}

/// Primitive part with respect to `var` (content removed, sign and scalar
/// normalized).
fn primitive_in(p: &MultiPoly, var: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    p.exact_divide(&c).expect("content divides").normalized()
}

/// Pseudo-remainder of `a` by `b` in `var`.
fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let db = b.degree_in(var);
    let coeffs_b = b.to_univariate(var);
    let lb = coeffs_b.last().expect("nonzero divisor").clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.to_univariate(var).pop().expect("nonzero");
        let shift = Monomial::ONE
            .with_power(var, dr - db)
            .expect("degree overflow");
        let t = &lr.mul_term(shift, &Coeff::one()) * b;
        r = &(&lb * &r) - &t;
    }
    r
}

fn primitive_prs(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let (mut f, mut g) = if a.degree_in(var) >= b.degree_in(var) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if g.is_zero() {
            return primitive_in(&f, var);
        }
        if g.degree_in(var) == 0 {
            return MultiPoly::one(a.vars());
        }
        let r = pseudo_remainder(&f, &g, var);
        f = g;
        g = primitive_in(&r, var);
    }
}

/// True when `gcd(a, b)` is a constant.
pub fn coprime(a: &MultiPoly, b: &MultiPoly) -> AlgebraResult<bool> {
    Ok(poly_gcd(a, b)?.is_constant())
}
