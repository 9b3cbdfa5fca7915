//! Torus-fixed points of T*Gr(k,n), chambers, tangent weights and the
//! moment graph, plus partitions in the (n-k) x k box.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{EnvelopeError, Result};
use crate::exactalg::{
    product, rat, Coeff, Monomial, MultiPoly, RationalFunction, Substitution, VarSet,
};

/// Largest n for which the weight-function ring (t, a, h) still fits.
pub const MAX_N: usize = 12;

/// The ring data shared by every computation on T*Gr(k,n): variables
/// `a1..an, h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grassmannian {
    n: usize,
    k: usize,
    vars: Arc<VarSet>,
}

impl Grassmannian {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n || n > MAX_N {
            return Err(EnvelopeError::InvalidDimensions { n, k });
        }
        let mut names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
        names.push("h".into());
        let vars = VarSet::new(names)?;
        Ok(Grassmannian { n, k, vars })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Complex dimension of the base, k(n-k).
    pub fn base_dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// The variable a_i, 1-based.
    pub fn a(&self, i: usize) -> MultiPoly {
        MultiPoly::var(&self.vars, i - 1)
    }

    pub fn h(&self) -> MultiPoly {
        MultiPoly::var(&self.vars, self.n)
    }

    pub fn h_index(&self) -> usize {
        self.n
    }

    /// a_x - a_y
    pub fn diff(&self, x: usize, y: usize) -> MultiPoly {
        &self.a(x) - &self.a(y)
    }

    /// a_x - a_y + h
    pub fn diff_h(&self, x: usize, y: usize) -> MultiPoly {
        &self.diff(x, y) + &self.h()
    }

    pub fn fixed_points(&self) -> Vec<FixedPoint> {
        enumerate_fixed_points(self.n, self.k).expect("validated dimensions")
    }

    pub fn point(&self, indices: &[usize]) -> Result<FixedPoint> {
        let p = FixedPoint::new(self.n, indices.to_vec())?;
        if p.k() != self.k {
            return Err(EnvelopeError::MismatchedPoints);
        }
        Ok(p)
    }

    pub fn partitions(&self) -> Vec<BoxPartition> {
        enumerate_partitions(self.n, self.k)
    }
}

/// A strictly increasing k-subset of {1..n}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedPoint {
    n: usize,
    indices: Vec<usize>,
}

impl FixedPoint {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        let ok = !indices.is_empty()
            && indices.len() < n
            && indices.windows(2).all(|w| w[0] < w[1])
            && indices[0] >= 1
            && *indices.last().unwrap() <= n;
        if !ok {
            return Err(EnvelopeError::InvalidFixedPoint { n, indices });
        }
        Ok(FixedPoint { n, indices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// |I| = i_1 + ... + i_k
    pub fn weight(&self) -> usize {
        self.indices.iter().sum()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Indices of {1..n} not in the subset.
    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| !self.contains(i)).collect()
    }

    /// The subset {n+1-i}.
    pub fn reversed(&self) -> FixedPoint {
        let mut idx: Vec<usize> = self.indices.iter().map(|&i| self.n + 1 - i).collect();
        idx.sort_unstable();
        FixedPoint {
            n: self.n,
            indices: idx,
        }
    }

    /// Compact label, e.g. `13`, or `1,10` once an index has two digits.
    pub fn label(&self) -> String {
        if self.n < 10 {
            self.indices.iter().map(|i| i.to_string()).collect()
        } else {
            self.indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.label())
    }
}

impl Serialize for FixedPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices.serialize(s)
    }
}

/// All k-subsets of {1..n} in lexicographic order.
pub fn enumerate_fixed_points(n: usize, k: usize) -> Result<Vec<FixedPoint>> {
    if k == 0 || k >= n {
        return Err(EnvelopeError::InvalidDimensions { n, k });
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(FixedPoint {
            n,
            indices: cur.clone(),
        });
        // Advance the rightmost index that still has room.
        let Some(pos) = (0..k).rev().find(|&r| cur[r] < n - (k - 1 - r)) else {
            return Ok(out);
        };
        cur[pos] += 1;
        for r in pos + 1..k {
            cur[r] = cur[r - 1] + 1;
        }
    }
}

/// Componentwise order: `I <= J` iff `i_r <= j_r` for all r.
pub fn attracting_leq(i: &FixedPoint, j: &FixedPoint) -> Result<bool> {
    if i.n != j.n || i.k() != j.k() {
        return Err(EnvelopeError::MismatchedPoints);
    }
    Ok(i.indices.iter().zip(&j.indices).all(|(a, b)| a <= b))
}

/// A permutation of {1..n}; the identity is the standard chamber
/// a_1 <= ... <= a_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chamber {
    perm: Vec<usize>,
}

impl Chamber {
    /// `perm[i-1]` is the image of i (1-based values).
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n + 1];
        for &p in &perm {
            if p == 0 || p > n || std::mem::replace(&mut seen[p], true) {
                return Err(EnvelopeError::InvalidChamber(perm));
            }
        }
        Ok(Chamber { perm })
    }

    pub fn identity(n: usize) -> Self {
        Chamber {
            perm: (1..=n).collect(),
        }
    }

    /// `count` pseudo-random chambers, reproducible from `seed`.
    pub fn random(n: usize, count: usize, seed: u64) -> Vec<Chamber> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let mut perm: Vec<usize> = (1..=n).collect();
                perm.shuffle(&mut rng);
                Chamber { perm }
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i - 1]
    }

    pub fn inverse(&self) -> Chamber {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        Chamber { perm: inv }
    }

    /// tau(I) = {tau(i)} sorted.
    pub fn apply_point(&self, p: &FixedPoint) -> FixedPoint {
        let mut idx: Vec<usize> = p.indices.iter().map(|&i| self.apply(i)).collect();
        idx.sort_unstable();
        FixedPoint {
            n: p.n,
            indices: idx,
        }
    }

    /// The ring map a_i -> a_tau(i), h -> h.
    pub fn substitution(&self, gr: &Grassmannian) -> Substitution {
        let mut images: Vec<MultiPoly> = (1..=gr.n()).map(|i| gr.a(self.apply(i))).collect();
        images.push(gr.h());
        Substitution::from_images(gr.vars(), gr.vars(), images)
    }
}

/// An integer linear form c_1 a_1 + .. + c_n a_n + c_h h.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    a: Vec<i64>,
    h: i64,
}

impl LinearForm {
    pub fn new(a: Vec<i64>, h: i64) -> Self {
        LinearForm { a, h }
    }

    pub fn zero(n: usize) -> Self {
        LinearForm {
            a: vec![0; n],
            h: 0,
        }
    }

    /// a_x - a_y
    pub fn diff(n: usize, x: usize, y: usize) -> Self {
        let mut a = vec![0; n];
        a[x - 1] += 1;
        a[y - 1] -= 1;
        LinearForm { a, h: 0 }
    }

    /// a_x - a_y + h
    pub fn diff_h(n: usize, x: usize, y: usize) -> Self {
        let mut f = Self::diff(n, x, y);
        f.h = 1;
        f
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a_coeffs(&self) -> &[i64] {
        &self.a
    }

    pub fn h_coeff(&self) -> i64 {
        self.h
    }

    pub fn is_zero(&self) -> bool {
        self.h == 0 && self.a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        LinearForm {
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
            h: self.h + other.h,
        }
    }

    pub fn to_poly(&self, gr: &Grassmannian) -> MultiPoly {
        let mut terms: Vec<(Monomial, Coeff)> = self
            .a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (Monomial::var(i), rat(c)))
            .collect();
        if self.h != 0 {
            terms.push((Monomial::var(gr.h_index()), rat(self.h)));
        }
        MultiPoly::from_terms(gr.vars(), terms)
    }

    /// The image under a_s -> s z h divided by h, i.e. with h = 1:
    /// (sum_s s c_s) z + c_h.
    pub fn z_image(&self) -> (i64, i64) {
        let slope = self
            .a
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as i64 + 1) * c)
            .sum();
        (slope, self.h)
    }

    /// Relabels a_i -> a_tau(i).
    pub fn relabel(&self, tau: &Chamber) -> LinearForm {
        let mut a = vec![0; self.a.len()];
        for (i, &c) in self.a.iter().enumerate() {
            a[tau.apply(i + 1) - 1] = c;
        }
        LinearForm { a, h: self.h }
    }

    /// The map a_i -> -a_{n+1-i}, h -> h.
    pub fn reflect(&self) -> LinearForm {
        LinearForm {
            a: self.a.iter().rev().map(|c| -c).collect(),
            h: self.h,
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(i64, String)> = self
            .a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (c, format!("a{}", i + 1)))
            .collect();
        if self.h != 0 {
            parts.push((self.h, "h".into()));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (idx, (c, name)) in parts.iter().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            if idx == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{name}")?;
        }
        Ok(())
    }
}

pub fn forms_product(gr: &Grassmannian, forms: &[LinearForm]) -> MultiPoly {
    gr.embed_product(forms)
}

/// Writes `f` as c * prod of h, a_x - a_y (x < y) and a_x - a_y + h, when
/// it factors that way. Zero gives `None`.
pub fn factor_into_forms(gr: &Grassmannian, f: &MultiPoly) -> Option<(Coeff, Vec<LinearForm>)> {
    if f.is_zero() {
        return None;
    }
    let n = gr.n();
    let mut candidates = vec![LinearForm::new(vec![0; n], 1)];
    for x in 1..=n {
        for y in 1..=n {
            if x < y {
                candidates.push(LinearForm::diff(n, x, y));
            }
            if x != y {
                candidates.push(LinearForm::diff_h(n, x, y));
            }
        }
    }
    let mut rest = f.clone();
    let mut out = Vec::new();
    for c in candidates {
        let p = c.to_poly(gr);
        while rest.total_degree() > 0 {
            match rest.exact_divide(&p) {
                Ok(q) => {
                    rest = q;
                    out.push(c.clone());
                }
                Err(_) => break,
            }
        }
    }
    rest.constant_value().map(|c| (c, out))
}

/// The short notation (xy) = a_x - a_y, (xy)_h = a_x - a_y + h.
pub fn short_form(f: &LinearForm) -> String {
    let pos: Vec<usize> = (0..f.n()).filter(|&i| f.a_coeffs()[i] == 1).collect();
    let neg: Vec<usize> = (0..f.n()).filter(|&i| f.a_coeffs()[i] == -1).collect();
    match (pos.as_slice(), neg.as_slice(), f.h_coeff()) {
        ([], [], 1) => "h".into(),
        ([x], [y], 0) if f.a_coeffs().iter().filter(|&&c| c != 0).count() == 2 => {
            format!("({}{})", x + 1, y + 1)
        }
        ([x], [y], 1) if f.a_coeffs().iter().filter(|&&c| c != 0).count() == 2 => {
            format!("({}{})_h", x + 1, y + 1)
        }
        _ => format!("({f})"),
    }
}

/// A polynomial ring that linear forms in (a, h) map into.
pub trait FormRing: Sync {
    fn ring(&self) -> &Arc<VarSet>;

    fn embed(&self, f: &LinearForm) -> MultiPoly;

    fn embed_product(&self, forms: &[LinearForm]) -> MultiPoly {
        let polys: Vec<MultiPoly> = forms.iter().map(|f| self.embed(f)).collect();
        product(self.ring(), &polys)
    }
}

impl FormRing for Grassmannian {
    fn ring(&self) -> &Arc<VarSet> {
        &self.vars
    }

    fn embed(&self, f: &LinearForm) -> MultiPoly {
        f.to_poly(self)
    }
}

/// The affine chart h = 1, a_1 = 0 with variables a2..an.
///
/// Everything summed in this crate is homogeneous in (a, h) and depends on
/// the a's only through differences, so a function is determined by its
/// restriction to the chart. Large equality checks run here.
#[derive(Clone, Debug)]
pub struct Chart {
    n: usize,
    vars: Arc<VarSet>,
}

impl Chart {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_N).contains(&n) {
            return Err(EnvelopeError::InvalidDimensions { n, k: 1 });
        }
        let vars = VarSet::new((2..=n).map(|i| format!("a{i}")))?;
        Ok(Chart { n, vars })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Restricts a rational function on the full ring of `gr` to the chart.
    pub fn restrict(&self, gr: &Grassmannian, f: &RationalFunction) -> Result<RationalFunction> {
        let mut images = vec![MultiPoly::zero(&self.vars)];
        images.extend((1..self.n).map(|i| MultiPoly::var(&self.vars, i - 1)));
        images.push(MultiPoly::one(&self.vars));
        let sub = Substitution::from_images(gr.vars(), &self.vars, images);
        Ok(f.substitute(&sub)?)
    }
}

impl FormRing for Chart {
    fn ring(&self) -> &Arc<VarSet> {
        &self.vars
    }

    fn embed(&self, f: &LinearForm) -> MultiPoly {
        let mut terms: Vec<(Monomial, Coeff)> = f
            .a_coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (Monomial::var(i - 1), rat(c)))
            .collect();
        if f.h_coeff() != 0 {
            terms.push((Monomial::ONE, rat(f.h_coeff())));
        }
        MultiPoly::from_terms(&self.vars, terms)
    }
}

/// Tangent weights (a_v - a_s), (a_s - a_v + h) for v not in I, s in I.
pub fn tangent_forms(p: &FixedPoint) -> Vec<LinearForm> {
    let n = p.n();
    let mut out = Vec::with_capacity(2 * p.k() * (n - p.k()));
    for v in p.complement() {
        for &s in p.indices() {
            out.push(LinearForm::diff(n, v, s));
            out.push(LinearForm::diff_h(n, s, v));
        }
    }
    out
}

pub fn tangent_euler_class(gr: &Grassmannian, p: &FixedPoint) -> MultiPoly {
    forms_product(gr, &tangent_forms(p))
}

/// The repelling (`repelling = true`) or attracting half of the tangent
/// weights in the standard chamber.
fn half_forms(p: &FixedPoint, repelling: bool) -> Vec<LinearForm> {
    let n = p.n();
    let mut out = Vec::with_capacity(p.k() * (n - p.k()));
    for q in p.complement() {
        for &s in p.indices() {
            let zero_section = q < s;
            out.push(if zero_section == repelling {
                LinearForm::diff(n, q, s)
            } else {
                LinearForm::diff_h(n, s, q)
            });
        }
    }
    out
}

fn chamber_half_forms(p: &FixedPoint, c: &Chamber, repelling: bool) -> Vec<LinearForm> {
    if c.is_identity() {
        return half_forms(p, repelling);
    }
    let pre = c.inverse().apply_point(p);
    half_forms(&pre, repelling)
        .iter()
        .map(|f| f.relabel(c))
        .collect()
}

/// Weights of N_- at p; other chambers by relabeling a_i -> a_tau(i).
pub fn repelling_forms(p: &FixedPoint, c: &Chamber) -> Vec<LinearForm> {
    chamber_half_forms(p, c, true)
}

pub fn attracting_forms(p: &FixedPoint, c: &Chamber) -> Vec<LinearForm> {
    chamber_half_forms(p, c, false)
}

pub fn repelling_euler_class(gr: &Grassmannian, p: &FixedPoint, c: &Chamber) -> MultiPoly {
    forms_product(gr, &repelling_forms(p, c))
}

/// The complementary half: repelling * attracting = tangent.
pub fn attracting_euler_class(gr: &Grassmannian, p: &FixedPoint, c: &Chamber) -> MultiPoly {
    forms_product(gr, &attracting_forms(p, c))
}

/// An edge of the moment graph, oriented from `source` (which contains
/// `s`) to `target` = source - {s} + {q}.
#[derive(Clone, Debug, Serialize)]
pub struct MomentEdge {
    pub source: FixedPoint,
    pub target: FixedPoint,
    pub s: usize,
    pub q: usize,
    /// a_q - a_s
    #[serde(serialize_with = "display_string")]
    pub zero_section: MultiPoly,
    /// a_s - a_q + h
    #[serde(serialize_with = "display_string")]
    pub cotangent: MultiPoly,
    /// The endpoint the 0-section flow of the cocharacter (z, z^2, ..)
    /// contracts toward: the one holding min(s, q).
    pub attracts_to: FixedPoint,
}

fn display_string<S: Serializer, T: fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentGraph {
    pub n: usize,
    pub k: usize,
    pub vertices: Vec<FixedPoint>,
    pub edges: Vec<MomentEdge>,
}

impl MomentGraph {
    pub fn neighbors(&self, p: &FixedPoint) -> Vec<&FixedPoint> {
        self.edges
            .iter()
            .filter_map(|e| {
                if &e.source == p {
                    Some(&e.target)
                } else if &e.target == p {
                    Some(&e.source)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Edges join subsets sharing k-1 elements; each is listed once, from its
/// lexicographically smaller endpoint.
pub fn build_moment_graph(gr: &Grassmannian) -> MomentGraph {
    let vertices = gr.fixed_points();
    let mut edges = Vec::new();
    for (a, i) in vertices.iter().enumerate() {
        for j in &vertices[a + 1..] {
            let only_i: Vec<usize> = i
                .indices
                .iter()
                .copied()
                .filter(|x| !j.contains(*x))
                .collect();
            if only_i.len() != 1 {
                continue;
            }
            let s = only_i[0];
            let q = *j.indices.iter().find(|x| !i.contains(**x)).unwrap();
            let attracts_to = if s < q { i.clone() } else { j.clone() };
            edges.push(MomentEdge {
                source: i.clone(),
                target: j.clone(),
                s,
                q,
                zero_section: gr.diff(q, s),
                cotangent: gr.diff_h(s, q),
                attracts_to,
            });
        }
    }
    MomentGraph {
        n: gr.n(),
        k: gr.k(),
        vertices,
        edges,
    }
}

/// A partition inside the (n-k) x k rectangle: at most n-k rows, each of
/// length at most k. Stored without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxPartition {
    n: usize,
    k: usize,
    parts: Vec<usize>,
}

impl BoxPartition {
    pub fn new(n: usize, k: usize, parts: Vec<usize>) -> Result<Self> {
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        let rows = n.saturating_sub(k);
        let fits = parts.len() <= rows
            && parts.windows(2).all(|w| w[0] >= w[1])
            && parts.first().is_none_or(|&p| p <= k);
        if k == 0 || k >= n || !fits {
            return Err(EnvelopeError::PartitionOutOfBox {
                parts,
                rows,
                cols: k,
            });
        }
        Ok(BoxPartition { n, k, parts })
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, Vec::new())
    }

    pub fn full(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, vec![k; n.saturating_sub(k)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.n - self.k
    }

    pub fn cols(&self) -> usize {
        self.k
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Length of row r (1-based), zero past the last part.
    pub fn part(&self, r: usize) -> usize {
        self.parts.get(r - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Whether box (row r, column c), 1-based, lies in the diagram.
    pub fn contains(&self, r: usize, c: usize) -> bool {
        c >= 1 && c <= self.part(r)
    }

    /// Column lengths, padded with zeros to length k.
    pub fn conjugate_parts(&self) -> Vec<usize> {
        (1..=self.k)
            .map(|c| self.parts.iter().filter(|&&p| p >= c).count())
            .collect()
    }

    /// The conjugate, which fits the transposed box of T*Gr(n-k, n).
    pub fn conjugate(&self) -> BoxPartition {
        BoxPartition::new(self.n, self.n - self.k, self.conjugate_parts())
            .expect("conjugate fits the transposed box")
    }

    /// The complement in the rectangle, rotated by 180 degrees.
    pub fn complement(&self) -> BoxPartition {
        let rows = self.rows();
        let parts = (1..=rows)
            .map(|r| self.k - self.part(rows + 1 - r))
            .collect();
        BoxPartition::new(self.n, self.k, parts).expect("complement fits")
    }
}

impl fmt::Display for BoxPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for BoxPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

/// All partitions in the box, in lexicographic order of part lists.
pub fn enumerate_partitions(n: usize, k: usize) -> Vec<BoxPartition> {
    fn rec(rows_left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if rows_left == 0 {
            return;
        }
        for p in 1..=max {
            cur.push(p);
            rec(rows_left - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(n - k, k, &mut Vec::new(), &mut raw);
    raw.sort();
    raw.into_iter()
        .map(|parts| BoxPartition::new(n, k, parts).expect("generated inside the box"))
        .collect()
}

/// Omega(lambda) = lambda^t + (k, k-1, .., 1), sorted ascending.
pub fn omega(lam: &BoxPartition) -> FixedPoint {
    let k = lam.k;
    let mut idx: Vec<usize> = lam
        .conjugate_parts()
        .iter()
        .enumerate()
        .map(|(r, &c)| c + k - r)
        .collect();
    idx.sort_unstable();
    FixedPoint {
        n: lam.n,
        indices: idx,
    }
}

/// The partition with omega(lambda) = p.
pub fn omega_inverse(p: &FixedPoint) -> BoxPartition {
    let k = p.k();
    // Descending i_r minus (k, .., 1) gives the conjugate.
    let conj: Vec<usize> = p
        .indices
        .iter()
        .rev()
        .enumerate()
        .map(|(r, &i)| i - (k - r))
        .collect();
    let parts = (1..=p.n - k)
        .map(|row| conj.iter().filter(|&&c| c >= row).count())
        .collect();
    BoxPartition::new(p.n, k, parts).expect("inverse lands in the box")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_factorization() {
        let gr = Grassmannian::new(4, 1).unwrap();
        let f = crate::exactalg::parse_poly("-h*(a3-a2+h)*(a4-a3+h)*(a1-a2)", gr.vars()).unwrap();
        let (c, forms) = factor_into_forms(&gr, &f).unwrap();
        let mut names: Vec<String> = forms.iter().map(short_form).collect();
        names.sort();
        assert_eq!(c, rat(-1));
        assert_eq!(names, ["(12)", "(32)_h", "(43)_h", "h"]);
        assert!(factor_into_forms(&gr, &parse_poly_sum(&gr)).is_none());
        assert_eq!(Chamber::random(5, 3, 7), Chamber::random(5, 3, 7));
    }

    fn parse_poly_sum(gr: &Grassmannian) -> MultiPoly {
        crate::exactalg::parse_poly("a1^2 + a2^2", gr.vars()).unwrap()
    }

    fn labels(ps: &[FixedPoint]) -> Vec<String> {
        ps.iter().map(|p| p.label()).collect()
    }

    #[test]
    fn fixed_points_in_lex_order() {
        assert_eq!(
            labels(&enumerate_fixed_points(4, 1).unwrap()),
            ["1", "2", "3", "4"]
        );
        assert_eq!(
            labels(&enumerate_fixed_points(4, 2).unwrap()),
            ["12", "13", "14", "23", "24", "34"]
        );
        assert_eq!(enumerate_fixed_points(5, 2).unwrap().len(), 10);
        assert!(enumerate_fixed_points(3, 3).is_err());
        assert!(enumerate_fixed_points(3, 0).is_err());
    }

    #[test]
    fn invalid_points_are_rejected() {
        assert!(FixedPoint::new(4, vec![2, 2]).is_err());
        assert!(FixedPoint::new(4, vec![0, 2]).is_err());
        assert!(FixedPoint::new(4, vec![3, 5]).is_err());
        assert!(FixedPoint::new(4, vec![3, 1]).is_err());
    }

    #[test]
    fn tangent_class_of_first_point_of_p3() {
        let gr = Grassmannian::new(4, 1).unwrap();
        let p = gr.point(&[1]).unwrap();
        let expect = product(
            gr.vars(),
            &[
                gr.diff(2, 1),
                gr.diff_h(1, 2),
                gr.diff(3, 1),
                gr.diff_h(1, 3),
                gr.diff(4, 1),
                gr.diff_h(1, 4),
            ],
        );
        assert_eq!(tangent_euler_class(&gr, &p), expect);
        assert_eq!(expect.total_degree(), 6);
    }

    #[test]
    fn repelling_classes_of_p3() {
        let gr = Grassmannian::new(4, 1).unwrap();
        let id = Chamber::identity(4);
        let e1 = repelling_euler_class(&gr, &gr.point(&[1]).unwrap(), &id);
        let want1 = product(
            gr.vars(),
            &[gr.diff_h(1, 2), gr.diff_h(1, 3), gr.diff_h(1, 4)],
        );
        assert_eq!(e1, want1);
        let e4 = repelling_euler_class(&gr, &gr.point(&[4]).unwrap(), &id);
        let want4 = product(gr.vars(), &[gr.diff(1, 4), gr.diff(2, 4), gr.diff(3, 4)]);
        assert_eq!(e4, want4);
    }

    #[test]
    fn halves_multiply_to_tangent() {
        for (n, k) in [(4, 1), (4, 2), (5, 2), (5, 3)] {
            let gr = Grassmannian::new(n, k).unwrap();
            for c in [
                Chamber::identity(n),
                Chamber::new((1..=n).rev().collect()).unwrap(),
            ] {
                for p in gr.fixed_points() {
                    let prod =
                        &repelling_euler_class(&gr, &p, &c) * &attracting_euler_class(&gr, &p, &c);
                    assert_eq!(prod, tangent_euler_class(&gr, &p));
                }
            }
        }
    }

    #[test]
    fn componentwise_order() {
        let p = |v: Vec<usize>| FixedPoint::new(4, v).unwrap();
        assert!(attracting_leq(&p(vec![1, 3]), &p(vec![2, 4])).unwrap());
        assert!(!attracting_leq(&p(vec![1, 3]), &p(vec![1, 2])).unwrap());
        let above: Vec<String> = enumerate_fixed_points(4, 2)
            .unwrap()
            .into_iter()
            .filter(|j| attracting_leq(&p(vec![1, 3]), j).unwrap())
            .map(|j| j.label())
            .collect();
        assert_eq!(above, ["13", "14", "23", "24", "34"]);
    }

    #[test]
    fn moment_graph_degrees() {
        let g = build_moment_graph(&Grassmannian::new(2, 1).unwrap());
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].zero_section.to_string(), "-a1 + a2");
        let gr = Grassmannian::new(4, 2).unwrap();
        let g = build_moment_graph(&gr);
        assert_eq!(g.vertices.len(), 6);
        let nb: Vec<String> = g
            .neighbors(&gr.point(&[1, 2]).unwrap())
            .iter()
            .map(|p| p.label())
            .collect();
        assert_eq!(nb, ["13", "14", "23", "24"]);
        let gr = Grassmannian::new(5, 2).unwrap();
        let g = build_moment_graph(&gr);
        for v in &g.vertices {
            assert_eq!(g.neighbors(v).len(), 6);
        }
        for e in &g.edges {
            assert_eq!(&e.zero_section + &e.cotangent, gr.h());
        }
    }

    #[test]
    fn omega_examples() {
        let lam = BoxPartition::new(4, 2, vec![1]).unwrap();
        assert_eq!(lam.conjugate_parts(), [1, 0]);
        assert_eq!(omega(&lam).indices(), [1, 3]);
        assert_eq!(omega(&BoxPartition::empty(5, 2).unwrap()).indices(), [1, 2]);
        assert_eq!(omega(&BoxPartition::full(5, 2).unwrap()).indices(), [4, 5]);
    }

    #[test]
    fn complement_and_conjugate() {
        let lam = BoxPartition::new(4, 2, vec![1]).unwrap();
        assert_eq!(lam.complement().parts(), [2, 1]);
        assert_eq!(lam.complement().complement(), lam);
        let mu = BoxPartition::new(6, 2, vec![2, 1, 1]).unwrap();
        assert_eq!(mu.conjugate().parts(), [3, 1]);
        assert_eq!(mu.conjugate().conjugate(), mu);
        assert!(BoxPartition::new(4, 2, vec![3]).is_err());
        assert!(BoxPartition::new(4, 2, vec![1, 1, 1]).is_err());
        assert!(BoxPartition::new(4, 2, vec![1, 2]).is_err());
    }
}
