//! The Gr2-simplex: layers of k = 2 integrals, their four-neighbor
//! recurrences, the layer polynomials and the reduced simplex, and the
//! generating functions B and F.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::{closed_form_integral, gr2_closed_form, narayana};
use crate::error::{EnvelopeError, Result};
use crate::exactalg::{rat, Coeff, Monomial, MultiPoly, TruncatedSeries, VarSet};
use crate::geometry::{enumerate_fixed_points, FixedPoint, Grassmannian};
use crate::localize::integral_via_z_limit;
use crate::report::{CheckReport, Level};

/// Where layer entries come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayerSource {
    /// The general closed formula.
    ClosedForm,
    /// The k = 2 specialization of the closed formula.
    Gr2Formula,
    /// The z-limit of the localization sum.
    Localization,
}

/// One n-level of the simplex, keyed by (i1, i2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexLayer {
    pub n: usize,
    pub extended: bool,
    pub entries: BTreeMap<(usize, usize), BigRational>,
}

impl SimplexLayer {
    /// The entry at (i1, i2), zero where the layer has none.
    pub fn get(&self, i1: i64, i2: i64) -> BigRational {
        if i1 < 1 || i2 < 1 {
            return BigRational::zero();
        }
        self.entries
            .get(&(i1 as usize, i2 as usize))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Row index i2 - i1; row 1 is the consecutive diagonal.
    pub fn row(i1: usize, i2: usize) -> usize {
        i2 - i1
    }

    /// NE-SW diagonal index.
    pub fn diagonal(_i1: usize, i2: usize) -> usize {
        i2
    }

    /// Rows from the apex down, each ordered by i1.
    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        let top = self.n - 1;
        let bottom = if self.extended { 0 } else { 1 };
        (bottom..=top)
            .rev()
            .map(|r| {
                (1..=self.n - r)
                    .filter_map(|i1| self.entries.get(&(i1, i1 + r)).cloned())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for SimplexLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect();
        let width = rows.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        let longest = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        for (idx, row) in rows.iter().enumerate() {
            let pad = (longest - row.len()) * (width + 1) / 2;
            let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            let line = format!("{}{}", " ".repeat(pad), cells.join(" "));
            if idx + 1 < rows.len() {
                writeln!(f, "{}", line.trim_end())?;
            } else {
                write!(f, "{}", line.trim_end())?;
            }
        }
        Ok(())
    }
}

pub fn build_layer(n: usize, source: LayerSource) -> Result<SimplexLayer> {
    if n < 2 {
        return Err(EnvelopeError::InvalidDimensions { n, k: 2 });
    }
    let mut entries = BTreeMap::new();
    if n == 2 {
        entries.insert((1, 2), BigRational::one());
        return Ok(SimplexLayer {
            n,
            extended: false,
            entries,
        });
    }
    let gr = Grassmannian::new(n, 2)?;
    let values: Vec<((usize, usize), BigRational)> = gr
        .fixed_points()
        .par_iter()
        .map(|p| {
            let (i1, i2) = (p.indices()[0], p.indices()[1]);
            let v = match source {
                LayerSource::ClosedForm => closed_form_integral(p)?.scaled,
                LayerSource::Gr2Formula => {
                    gr2_closed_form(i1 as i64, i2 as i64, n as i64).expect("n >= 3")
                }
                LayerSource::Localization => integral_via_z_limit(&gr, p)?.scaled,
            };
            Ok(((i1, i2), v))
        })
        .collect::<Result<_>>()?;
    entries.extend(values);
    Ok(SimplexLayer {
        n,
        extended: false,
        entries,
    })
}

/// The layer with i1 = i2 allowed, from the k = 2 formula.
pub fn build_extended_layer(n: usize) -> Result<SimplexLayer> {
    if n < 3 {
        return Err(EnvelopeError::InvalidDimensions { n, k: 2 });
    }
    let mut entries = BTreeMap::new();
    for i1 in 1..=n {
        for i2 in i1..=n {
            let v = gr2_closed_form(i1 as i64, i2 as i64, n as i64).expect("n >= 3");
            entries.insert((i1, i2), v);
        }
    }
    Ok(SimplexLayer {
        n,
        extended: true,
        entries,
    })
}

/// Values of any (k+1)-simplex layer, for export; no recurrence is implied.
pub fn build_layer_k(n: usize, k: usize, source: LayerSource) -> Result<Vec<(FixedPoint, BigRational)>> {
    let gr = Grassmannian::new(n, k)?;
    gr.fixed_points()
        .par_iter()
        .map(|p| {
            let v = match source {
                LayerSource::Localization => integral_via_z_limit(&gr, p)?.scaled,
                _ => closed_form_integral(p)?.scaled,
            };
            Ok((p.clone(), v))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeighborMode {
    WithException,
    Extended,
}

/// Sum of the four upper neighbors of (i1, i2) in `lo`.
pub fn four_neighbor_sum(lo: &SimplexLayer, i1: usize, i2: usize) -> BigRational {
    let (a, b) = (i1 as i64, i2 as i64);
    lo.get(a, b) + lo.get(a - 1, b) + lo.get(a, b - 1) + lo.get(a - 1, b - 1)
}

fn narayana_or_zero(n: usize, k: usize) -> BigInt {
    narayana(n, k).unwrap_or_else(|_| BigInt::zero())
}

pub fn four_neighbor_check(lo: &SimplexLayer, hi: &SimplexLayer, mode: NeighborMode) -> CheckReport {
    let name = match mode {
        NeighborMode::WithException => format!("four-neighbor recurrence, layer {} over {}", hi.n, lo.n),
        NeighborMode::Extended => format!("extended recurrence, layer {} over {}", hi.n, lo.n),
    };
    let mut report = CheckReport::new(name, Level::Theorem);
    if hi.n != lo.n + 1 {
        report.error(format!("layers {} and {} are not adjacent", lo.n, hi.n));
        return report;
    }
    let n = hi.n;
    for (&(i1, i2), value) in &hi.entries {
        let expect = match mode {
            NeighborMode::WithException if i2 == i1 + 1 && i1 > 1 => {
                if n <= 3 {
                    continue;
                }
                BigRational::from_integer(narayana_or_zero(n - 2, i1) + narayana_or_zero(n - 2, i1 - 1))
            }
            NeighborMode::WithException => four_neighbor_sum(lo, i1, i2),
            NeighborMode::Extended => {
                // Neighbors are read from the formula itself, which is also
                // defined just below the diagonal.
                let m = lo.n as i64;
                let (a, b) = (i1 as i64, i2 as i64);
                [(a, b), (a - 1, b), (a, b - 1), (a - 1, b - 1)]
                    .iter()
                    .filter_map(|&(x, y)| gr2_closed_form(x, y, m))
                    .fold(BigRational::zero(), |acc, v| acc + v)
            }
        };
        if &expect == value {
            report.pass();
        } else {
            report.fail(format!("<{i1},{i2}>_{n} = {value}, expected {expect}"));
        }
    }
    report
}

/// The polynomial ring in a, b, c used for layer polynomials.
pub fn abc_ring() -> Arc<VarSet> {
    VarSet::new(["a", "b", "c"]).expect("three variables")
}

/// A layer read as a homogeneous polynomial of degree n - 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerPolynomial {
    pub n: usize,
    pub poly: MultiPoly,
}

/// <i1,i2>_n is the coefficient of a^{i1-1} b^{i2-i1-1} c^{n-i2}.
pub fn layer_monomial(n: usize, i1: usize, i2: usize) -> Monomial {
    Monomial::from_exponents(&[(i1 - 1) as u32, (i2 - i1 - 1) as u32, (n - i2) as u32])
        .expect("small exponents")
}

pub fn layer_to_polynomial(layer: &SimplexLayer) -> LayerPolynomial {
    let vs = abc_ring();
    let poly = MultiPoly::from_terms(
        &vs,
        layer
            .entries
            .iter()
            .filter(|((i1, i2), _)| i2 > i1)
            .map(|(&(i1, i2), v)| (layer_monomial(layer.n, i1, i2), v.clone())),
    );
    LayerPolynomial { n: layer.n, poly }
}

/// a + 2b + c
pub fn reduction_divisor() -> MultiPoly {
    let vs = abc_ring();
    &(&MultiPoly::var(&vs, 0) + &MultiPoly::var(&vs, 1).scale(&rat(2))) + &MultiPoly::var(&vs, 2)
}

pub fn reduce_layer(lp: &LayerPolynomial) -> Result<LayerPolynomial> {
    let poly = lp.poly.exact_divide(&reduction_divisor())?;
    Ok(LayerPolynomial { n: lp.n, poly })
}

/// xi_{l,r,c}: coefficient of a^{r-c} b^{l-r} c^{c-1} in the reduced
/// polynomial of layer l + 2; zero outside 1 <= c <= r <= l.
pub fn xi(reduced: &LayerPolynomial, r: i64, c: i64) -> Coeff {
    let l = reduced.n as i64 - 2;
    if c < 1 || r < c || r > l {
        return Coeff::zero();
    }
    let m = Monomial::from_exponents(&[(r - c) as u32, (l - r) as u32, (c - 1) as u32])
        .expect("small exponents");
    reduced.poly.coefficient(m)
}

/// Divisibility of every layer polynomial by a + 2b + c up to `n_max`.
pub fn divisibility_check(n_max: usize, source: LayerSource) -> (CheckReport, Vec<LayerPolynomial>) {
    let mut report = CheckReport::new(format!("divisibility by a+2b+c, n <= {n_max}"), Level::Conjecture);
    let mut reduced = Vec::new();
    for n in 3..=n_max {
        let lp = match build_layer(n, source) {
            Ok(layer) => layer_to_polynomial(&layer),
            Err(e) => {
                report.error(e.to_string());
                continue;
            }
        };
        match reduce_layer(&lp) {
            Ok(r) => {
                report.pass();
                reduced.push(r);
            }
            Err(_) => report.fail(format!("layer {n} is not divisible")),
        }
    }
    (report, reduced)
}

pub fn reduced_recurrence_check(n_max: usize, source: LayerSource) -> CheckReport {
    let mut report = CheckReport::new(format!("reduced recurrence, n <= {n_max}"), Level::Conjecture);
    let (div, reduced) = divisibility_check(n_max, source);
    if !div.passed() {
        report.merge(div);
        return report;
    }
    for pair in reduced.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let l = hi.n as i64 - 2;
        for r in 1..=l {
            for c in 1..=r {
                let expect = xi(lo, r, c) + xi(lo, r - 1, c) + xi(lo, r - 1, c - 1) + xi(lo, r - 2, c - 1);
                let got = xi(hi, r, c);
                if got == expect {
                    report.pass();
                } else {
                    report.fail(format!("xi_({l},{r},{c}) = {got}, expected {expect}"));
                }
            }
        }
    }
    report
}

/// The ring x, y, z of the generating functions.
pub fn xyz_ring() -> Arc<VarSet> {
    VarSet::new(["x", "y", "z"]).expect("three variables")
}

/// x^l y^r z^k -> a^{r-k} b^{l-r} c^{k-1}; `None` when an exponent would be
/// negative.
pub fn xyz_to_abc(l: u32, r: u32, k: u32) -> Option<(u32, u32, u32)> {
    if k == 0 || r < k || l < r {
        return None;
    }
    Some((r - k, l - r, k - 1))
}

pub fn abc_to_xyz(a: u32, b: u32, c: u32) -> (u32, u32, u32) {
    let k = c + 1;
    let r = a + k;
    (b + r, r, k)
}

/// Both generating functions as truncated series in x, y, z.
#[derive(Clone, Debug)]
pub struct GeneratingFunctions {
    pub order: u32,
    pub b: TruncatedSeries,
    pub f: TruncatedSeries,
    /// (1 - w(1+z) - sqrt(...)) / (2w) with w = xy.
    pub narayana: TruncatedSeries,
}

pub fn generating_functions(order: u32) -> Result<GeneratingFunctions> {
    let vs = xyz_ring();
    let x = MultiPoly::var(&vs, 0);
    let y = MultiPoly::var(&vs, 1);
    let z = MultiPoly::var(&vs, 2);
    let one = MultiPoly::one(&vs);
    let w = &x * &y;
    let series = |p: MultiPoly| TruncatedSeries::new(p, order);
    let lin = &one - &(&w * &(&one + &z));
    let disc = &(&lin * &lin) - &(&(&w * &w) * &z).scale(&rat(4));
    let root = series(disc).sqrt()?;
    let q = series(lin).sub(&root)?;
    let xyz = &w * &z;
    let yz_half = (&y * &z).scale(&Coeff::new(1.into(), 2.into()));
    let numer = series(xyz.clone()).sub(&q.mul(&series(yz_half))?)?;
    let unit = &one - &(&(&x * &(&one + &y)) * &(&one + &(&y * &z)));
    let b = numer.mul(&series(unit).inverse()?)?;
    let pre = &(&w + &x.scale(&rat(2))) + &xyz;
    let f = series(xyz).add(&b.mul(&series(pre))?)?;
    let narayana = q.div_monomial(Monomial::from_exponents(&[1, 1, 0])?)?.scale(&Coeff::new(1.into(), 2.into()));
    Ok(GeneratingFunctions { order, b, f, narayana })
}

/// Coefficient of x^{n-1} y^{n-(i2-i1)} z^{i1} in F.
pub fn generating_function_coeff(gf: &GeneratingFunctions, n: usize, i1: usize, i2: usize) -> Result<Coeff> {
    if gf.order as usize <= 3 * n {
        return Err(EnvelopeError::InsufficientOrder {
            order: gf.order,
            needed: 3 * n as u32 + 1,
        });
    }
    let m = Monomial::from_exponents(&[(n - 1) as u32, (n - (i2 - i1)) as u32, i1 as u32])?;
    Ok(gf.f.poly().coefficient(m))
}

/// F-coefficients against layer entries for 2 <= n <= n_max.
pub fn generating_function_check(gf: &GeneratingFunctions, n_max: usize, source: LayerSource) -> CheckReport {
    let mut report = CheckReport::new(format!("F coefficients, n <= {n_max}"), Level::Conjecture);
    for n in 2..=n_max {
        let layer = match build_layer(n, source) {
            Ok(l) => l,
            Err(e) => {
                report.error(e.to_string());
                continue;
            }
        };
        for (&(i1, i2), v) in &layer.entries {
            match generating_function_coeff(gf, n, i1, i2) {
                Ok(c) if &c == v => report.pass(),
                Ok(c) => report.fail(format!("<{i1},{i2}>_{n} = {v}, coefficient {c}")),
                Err(e) => report.error(e.to_string()),
            }
        }
    }
    report
}

/// The Narayana sub-series of B against narayana(l, c) for l <= l_max.
pub fn narayana_series_check(gf: &GeneratingFunctions, l_max: usize) -> CheckReport {
    let mut report = CheckReport::new(format!("Narayana series, l <= {l_max}"), Level::Internal);
    // Dividing by xy costs two orders of the truncation.
    if (gf.order as usize) <= 3 * l_max + 3 {
        report.error(
            EnvelopeError::InsufficientOrder {
                order: gf.order,
                needed: 3 * l_max as u32 + 4,
            }
            .to_string(),
        );
        return report;
    }
    for l in 1..=l_max {
        for c in 0..=l + 1 {
            let m = Monomial::from_exponents(&[l as u32, l as u32, c as u32]).expect("small");
            let got = gf.narayana.poly().coefficient(m);
            let expect = narayana(l, c).unwrap_or_else(|_| BigInt::zero());
            if got == BigRational::from_integer(expect.clone()) {
                report.pass();
            } else {
                report.fail(format!("N({l},{c}) = {expect}, series gives {got}"));
            }
        }
    }
    report
}

/// entry(i1, i2) = entry(n+1-i2, n+1-i1).
pub fn symmetry_check(layer: &SimplexLayer) -> CheckReport {
    let mut report = CheckReport::new(format!("left-right symmetry, layer {}", layer.n), Level::Internal);
    let n = layer.n;
    for (&(i1, i2), v) in &layer.entries {
        let mirror = layer.get((n + 1 - i2) as i64, (n + 1 - i1) as i64);
        if &mirror == v {
            report.pass();
        } else {
            report.fail(format!("<{i1},{i2}>_{n} = {v} but mirror is {mirror}"));
        }
    }
    report
}

/// The k = 2 layer's points, in lexicographic order.
pub fn layer_points(n: usize) -> Result<Vec<FixedPoint>> {
    enumerate_fixed_points(n, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly;

    fn ints(row: &[i64]) -> Vec<BigRational> {
        row.iter().map(|&v| rat(v)).collect()
    }

    #[test]
    fn small_layers() {
        let l4 = build_layer(4, LayerSource::Gr2Formula).unwrap();
        assert_eq!(l4.rows(), vec![ints(&[2]), ints(&[3, 3]), ints(&[1, 2, 1])]);
        let l5 = build_layer(5, LayerSource::ClosedForm).unwrap();
        assert_eq!(
            l5.rows(),
            vec![ints(&[2]), ints(&[5, 5]), ints(&[4, 10, 4]), ints(&[1, 4, 4, 1])]
        );
        assert_eq!(build_layer(2, LayerSource::ClosedForm).unwrap().get(1, 2), rat(1));
        assert_eq!(l4.to_string(), "  2\n 3 3\n1 2 1");
    }

    #[test]
    fn middle_of_layer_five() {
        let l4 = build_layer(4, LayerSource::Gr2Formula).unwrap();
        assert_eq!(four_neighbor_sum(&l4, 2, 4), rat(10));
        // Without the exception the bottom row fails: 4 != 1 + 2 + 3.
        assert_eq!(four_neighbor_sum(&l4, 2, 3), rat(1 + 2 + 3));
        let l5 = build_layer(5, LayerSource::Gr2Formula).unwrap();
        assert!(four_neighbor_check(&l4, &l5, NeighborMode::WithException).passed());
    }

    #[test]
    fn extended_row_and_recurrence() {
        let e4 = build_extended_layer(4).unwrap();
        let diag: Vec<BigRational> = (1..=4).map(|i| e4.get(i, i)).collect();
        assert_eq!(diag, ints(&[0, -2, -2, 0]));
        let e5 = build_extended_layer(5).unwrap();
        assert_eq!(e4.get(2, 3) + e4.get(1, 3) + e4.get(2, 2) + e4.get(1, 2), rat(4));
        assert!(four_neighbor_check(&e4, &e5, NeighborMode::Extended).passed());
    }

    #[test]
    fn layer_polynomials_and_reduction() {
        let vs = abc_ring();
        let lp3 = layer_to_polynomial(&build_layer(3, LayerSource::ClosedForm).unwrap());
        assert_eq!(lp3.poly, parse_poly("a + 2b + c", &vs).unwrap());
        let lp4 = layer_to_polynomial(&build_layer(4, LayerSource::ClosedForm).unwrap());
        assert_eq!(lp4.poly, parse_poly("(a+2b+c)(a+b+c)", &vs).unwrap());
        let lp5 = layer_to_polynomial(&build_layer(5, LayerSource::ClosedForm).unwrap());
        assert_eq!(
            reduce_layer(&lp5).unwrap().poly,
            parse_poly("a^2+2*a*b+3*a*c+b^2+2*b*c+c^2", &vs).unwrap()
        );
        assert!(reduce_layer(&lp3).unwrap().poly.is_one());
    }

    #[test]
    fn reduced_overlay_entry() {
        let lp6 = layer_to_polynomial(&build_layer(6, LayerSource::Gr2Formula).unwrap());
        let r6 = reduce_layer(&lp6).unwrap();
        // 8abc sits at l = 4, r = 3, c = 2.
        assert_eq!(xi(&r6, 3, 2), rat(8));
        assert!(reduced_recurrence_check(8, LayerSource::Gr2Formula).passed());
    }

    #[test]
    fn bijection_round_trip() {
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let (l, r, k) = abc_to_xyz(a, b, c);
                    assert_eq!(xyz_to_abc(l, r, k), Some((a, b, c)));
                }
            }
        }
        assert_eq!(xyz_to_abc(1, 2, 1), None);
    }

    #[test]
    fn generating_function_examples() {
        let gf = generating_functions(16).unwrap();
        assert_eq!(generating_function_coeff(&gf, 4, 2, 3).unwrap(), rat(2));
        assert_eq!(generating_function_coeff(&gf, 5, 2, 4).unwrap(), rat(10));
        assert!(generating_function_coeff(&gf, 6, 2, 4).is_err());
        // (xy)^2 z coefficient of the square root is -2.
        let w2z = Monomial::from_exponents(&[2, 2, 1]).unwrap();
        assert_eq!(gf.narayana.poly().coefficient(Monomial::from_exponents(&[1, 1, 1]).unwrap()), rat(1));
        let vs = xyz_ring();
        let x = MultiPoly::var(&vs, 0);
        let y = MultiPoly::var(&vs, 1);
        let z = MultiPoly::var(&vs, 2);
        let one = MultiPoly::one(&vs);
        let w = &x * &y;
        let lin = &one - &(&w * &(&one + &z));
        let disc = &(&lin * &lin) - &(&(&w * &w) * &z).scale(&rat(4));
        let root = TruncatedSeries::new(disc, 8).sqrt().unwrap();
        assert_eq!(root.poly().coefficient(w2z), rat(-2));
        assert!(narayana_series_check(&gf, 4).passed());
    }

    #[test]
    fn layers_are_symmetric() {
        for n in 3..=8 {
            assert!(symmetry_check(&build_layer(n, LayerSource::Gr2Formula).unwrap()).passed());
        }
    }
}
