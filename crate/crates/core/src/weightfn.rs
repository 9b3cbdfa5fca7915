//! Weight functions, their restrictions to fixed points, and the GKM and
//! stable-envelope axiom checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::combinat::permutations_with_sign;
use crate::error::{EnvelopeError, Result};
use crate::exactalg::{LinearFractionSum, MultiPoly, RationalFunction, VarSet};
use crate::geometry::{
    attracting_leq, repelling_euler_class, Chamber, FixedPoint, FormRing, Grassmannian, LinearForm,
    MomentGraph,
};
use crate::report::{CheckReport, Level};

/// One term of the symmetrization after t_r has been set to a_{j_r}:
/// a product of linear forms over a product of linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub num: Vec<LinearForm>,
    pub den: Vec<LinearForm>,
}

fn standard_summands(p: &FixedPoint, j: &FixedPoint) -> Vec<Summand> {
    let n = p.n();
    let k = p.k();
    let mut out = Vec::new();
    for (sigma, _) in permutations_with_sign(k) {
        let mut num = Vec::with_capacity(k * (n - 1));
        let mut vanishes = false;
        for (r, &i) in p.indices().iter().enumerate() {
            let x = j.indices()[sigma[r]];
            for alpha in 1..i {
                if alpha == x {
                    vanishes = true;
                }
                num.push(LinearForm::diff(n, alpha, x));
            }
            for beta in i + 1..=n {
                num.push(LinearForm::diff_h(n, x, beta));
            }
        }
        if vanishes {
            continue;
        }
        let mut den = Vec::with_capacity(k * (k - 1));
        for l in 0..k {
            for m in l + 1..k {
                let (x, y) = (j.indices()[sigma[l]], j.indices()[sigma[m]]);
                den.push(LinearForm::diff(n, x, y));
                den.push(LinearForm::diff_h(n, x, y));
            }
        }
        out.push(Summand { num, den });
    }
    out
}

/// The nonvanishing summands of W_c(p_I)|_{p_J}. For a chamber tau this is
/// tau applied to the standard summands of (tau^-1 I, tau^-1 J).
pub fn restriction_summands(p: &FixedPoint, j: &FixedPoint, c: &Chamber) -> Vec<Summand> {
    if c.is_identity() {
        return standard_summands(p, j);
    }
    let inv = c.inverse();
    standard_summands(&inv.apply_point(p), &inv.apply_point(j))
        .into_iter()
        .map(|s| Summand {
            num: s.num.iter().map(|f| f.relabel(c)).collect(),
            den: s.den.iter().map(|f| f.relabel(c)).collect(),
        })
        .collect()
}

/// W_c(p_I)|_{p_J}, summed termwise; must be a polynomial.
pub fn restrict(
    gr: &Grassmannian,
    p: &FixedPoint,
    c: &Chamber,
    j: &FixedPoint,
) -> Result<MultiPoly> {
    restrict_in(gr, p, c, j)
}

/// The restriction computed in any ring the linear forms embed into.
///
/// Each summand is a product over rows r of a factor depending on the value
/// x_r = j_{sigma(r)} assigned to that row, times pair factors for r < r'.
/// Summing row by row over subsets of J already used needs 2^k partial sums
/// instead of k! full terms.
pub fn restrict_in<R: FormRing>(
    ring: &R,
    p: &FixedPoint,
    c: &Chamber,
    j: &FixedPoint,
) -> Result<MultiPoly> {
    Ok(restriction_in(ring, p, c, j)?.numerator())
}

/// The restriction as a fraction sum with its linear factors still
/// factored; the denominator is checked to be trivial.
pub fn restriction_in<R: FormRing>(
    ring: &R,
    p: &FixedPoint,
    c: &Chamber,
    j: &FixedPoint,
) -> Result<LinearFractionSum> {
    let inv = c.inverse();
    let (p0, j0) = (inv.apply_point(p), inv.apply_point(j));
    let n = p.n();
    let k = p.k();
    let embed = |f: LinearForm| {
        if c.is_identity() {
            ring.embed(&f)
        } else {
            ring.embed(&f.relabel(c))
        }
    };
    let row_factor = |r: usize, x: usize| -> Option<Vec<LinearForm>> {
        let i = p0.indices()[r];
        if x < i {
            return None;
        }
        let mut forms: Vec<LinearForm> = (1..i).map(|alpha| LinearForm::diff(n, alpha, x)).collect();
        forms.extend((i + 1..=n).map(|beta| LinearForm::diff_h(n, x, beta)));
        Some(forms)
    };
    let js = j0.indices();
    let mut layer: BTreeMap<u32, LinearFractionSum> = BTreeMap::new();
    layer.insert(0, LinearFractionSum::from_poly(MultiPoly::one(ring.ring())));
    // Rows from the last one down keep the partial sums much smaller.
    for r in (0..k).rev() {
        let mut next: BTreeMap<u32, LinearFractionSum> = BTreeMap::new();
        for (&used, g) in &layer {
            for (slot, &x) in js.iter().enumerate() {
                if used & (1 << slot) != 0 {
                    continue;
                }
                let Some(forms) = row_factor(r, x) else { continue };
                let num: Vec<MultiPoly> = forms.into_iter().map(&embed).collect();
                let mut den = Vec::with_capacity(2 * r);
                for (other, &y) in js.iter().enumerate() {
                    if used & (1 << other) != 0 {
                        den.push(embed(LinearForm::diff(n, x, y)));
                        den.push(embed(LinearForm::diff_h(n, x, y)));
                    }
                }
                let mut term = LinearFractionSum::factored(ring.ring(), &num, &den)?;
                term.mul_assign(g)?;
                next.entry(used | (1 << slot))
                    .or_insert_with(|| LinearFractionSum::zero(ring.ring()))
                    .add_assign(&term)?;
            }
        }
        layer = next;
    }
    let Some(acc) = layer.into_values().next() else {
        return Ok(LinearFractionSum::zero(ring.ring()));
    };
    if !acc.factors().is_empty() {
        return Err(EnvelopeError::NonPolynomialRestriction);
    }
    Ok(acc)
}

/// The restriction summed term by term over all permutations.
pub fn restrict_termwise<R: FormRing>(
    ring: &R,
    p: &FixedPoint,
    c: &Chamber,
    j: &FixedPoint,
) -> Result<MultiPoly> {
    let mut acc = LinearFractionSum::zero(ring.ring());
    for s in restriction_summands(p, j, c) {
        let num = ring.embed_product(&s.num);
        let den: Vec<MultiPoly> = s.den.iter().map(|f| ring.embed(f)).collect();
        acc.add_assign(&LinearFractionSum::term(num, &den)?)?;
    }
    if !acc.factors().is_empty() {
        return Err(EnvelopeError::NonPolynomialRestriction);
    }
    Ok(acc.numerator())
}

/// W_c(p_I) as a rational function of t_1..t_k, a_1..a_n, h.
#[derive(Clone, Debug)]
pub struct WeightFunction {
    pub point: FixedPoint,
    pub chamber: Chamber,
    pub expr: RationalFunction,
}

/// The ring t_1..t_k, a_1..a_n, h.
pub fn weight_ring(n: usize, k: usize) -> Result<Arc<VarSet>> {
    let mut names: Vec<String> = (1..=k).map(|i| format!("t{i}")).collect();
    names.extend((1..=n).map(|i| format!("a{i}")));
    names.push("h".into());
    Ok(VarSet::new(names)?)
}

pub fn weight_function(p: &FixedPoint, c: &Chamber) -> Result<WeightFunction> {
    let n = p.n();
    let k = p.k();
    let vars = weight_ring(n, k)?;
    let t = |r: usize| MultiPoly::var(&vars, r);
    let a = |i: usize| MultiPoly::var(&vars, k + i - 1);
    let h = MultiPoly::var(&vars, k + n);
    let base = c.inverse().apply_point(p);
    let mut acc = LinearFractionSum::zero(&vars);
    for (sigma, _) in permutations_with_sign(k) {
        let mut num = MultiPoly::one(&vars);
        for (r, &i) in base.indices().iter().enumerate() {
            let tr = t(sigma[r]);
            for alpha in 1..i {
                num = &num * &(&a(c.apply(alpha)) - &tr);
            }
            for beta in i + 1..=n {
                num = &num * &(&(&tr - &a(c.apply(beta))) + &h);
            }
        }
        let mut den = Vec::new();
        for l in 0..k {
            for m in l + 1..k {
                let d = &t(sigma[l]) - &t(sigma[m]);
                den.push(&d + &h);
                den.push(d);
            }
        }
        acc.add_assign(&LinearFractionSum::term(num, &den)?)?;
    }
    Ok(WeightFunction {
        point: p.clone(),
        chamber: c.clone(),
        expr: acc.to_rational(),
    })
}

impl WeightFunction {
    pub fn restrict(&self, gr: &Grassmannian, j: &FixedPoint) -> Result<MultiPoly> {
        restrict(gr, &self.point, &self.chamber, j)
    }
}

/// All restrictions of one stable envelope.
#[derive(Clone, Debug)]
pub struct StabClass {
    pub point: FixedPoint,
    pub chamber: Chamber,
    pub restrictions: BTreeMap<FixedPoint, MultiPoly>,
}

pub fn stab_class(gr: &Grassmannian, p: &FixedPoint, c: &Chamber) -> Result<StabClass> {
    let points = gr.fixed_points();
    let values: Vec<MultiPoly> = points
        .par_iter()
        .map(|j| restrict(gr, p, c, j))
        .collect::<Result<_>>()?;
    Ok(StabClass {
        point: p.clone(),
        chamber: c.clone(),
        restrictions: points.into_iter().zip(values).collect(),
    })
}

/// Every stable envelope for the chamber, in lexicographic order of points.
pub fn stab_matrix(gr: &Grassmannian, c: &Chamber) -> Result<Vec<StabClass>> {
    gr.fixed_points()
        .iter()
        .map(|p| stab_class(gr, p, c))
        .collect()
}

/// On each edge, a_q - a_s must divide the difference of the restrictions
/// at its endpoints.
pub fn gkm_check(gr: &Grassmannian, s: &StabClass, g: &MomentGraph) -> CheckReport {
    let mut report = CheckReport::new(format!("GKM relations for {}", s.point), Level::Theorem);
    for e in &g.edges {
        let (Some(fa), Some(fb)) = (s.restrictions.get(&e.source), s.restrictions.get(&e.target))
        else {
            report.error(format!(
                "missing restriction on edge {}-{}",
                e.source, e.target
            ));
            continue;
        };
        let diff = fa - fb;
        if diff.exact_divide(&gr.diff(e.q, e.s)).is_ok() {
            report.pass();
        } else {
            report.fail(format!(
                "{} - {} not divisible by {}",
                e.source, e.target, e.zero_section
            ));
        }
    }
    report
}

/// The three axioms: support, normalization and degree.
pub fn axiom_check(gr: &Grassmannian, s: &StabClass, c: &Chamber) -> CheckReport {
    let mut report = CheckReport::new(
        format!("stable envelope axioms for {}", s.point),
        Level::Theorem,
    );
    let inv = c.inverse();
    let base = inv.apply_point(&s.point);
    let a_vars: Vec<usize> = (0..gr.n()).collect();
    let dim = gr.base_dim() as u32;
    for (j, f) in &s.restrictions {
        let above = attracting_leq(&base, &inv.apply_point(j)).expect("same Grassmannian");
        if !above && !f.is_zero() {
            report.fail(format!("support: restriction to {j} is nonzero"));
            continue;
        }
        if j == &s.point {
            let e = repelling_euler_class(gr, j, c);
            if f != &e {
                report.fail(format!("normalization at {j}: {f} != {e}"));
                continue;
            }
        } else if !f.is_zero() && f.degree_in_vars(&a_vars) >= dim {
            report.fail(format!(
                "degree: a-degree of restriction to {j} is not below {dim}"
            ));
            continue;
        }
        report.pass();
    }
    report
}
