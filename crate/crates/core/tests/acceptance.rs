//! One pass/fail line per acceptance criterion, each with its exact
//! tolerance and runtime limit. Run with `--nocapture` to see the lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use envelope_core::closedform::{closed_form_integral, narayana};
use envelope_core::exactalg::{parse_poly, parse_rational, MultiPoly, RationalFunction, VarSet};
use envelope_core::geometry::{
    build_moment_graph, enumerate_partitions, omega, omega_inverse, BoxPartition, Chamber,
    FixedPoint, Grassmannian,
};
use envelope_core::localize::{
    chamber_covariance_check, integral_via_z_limit, localization_sum,
    vandermonde_divisibility_check, IntegralValue,
};
use envelope_core::paths::{
    enumerate_paths, multisets_match_under_alpha, path_conjecture_checks, path_count_check,
    path_sum, path_sum_limit, path_weights, weights_match_under_alpha, BoxPath, DEFAULT_MAX_BOXES,
};
use envelope_core::report::{CheckReport, Status};
use envelope_core::simplex::{
    abc_ring, build_extended_layer, build_layer, divisibility_check, four_neighbor_check,
    generating_function_check, generating_functions, narayana_series_check,
    reduced_recurrence_check, LayerSource, NeighborMode,
};
use envelope_core::weightfn::{axiom_check, gkm_check, stab_matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// Outcome of one criterion: its problems, empty when it holds.
type Outcome = Vec<String>;

struct Criterion {
    id: u32,
    what: &'static str,
    limit: Duration,
    /// Set when the criterion cannot hold as stated; the reason is printed
    /// and the failure itself is asserted, so a change in either direction
    /// is noticed.
    expected_failure: Option<&'static str>,
    run: fn() -> Outcome,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn report_problems(out: &mut Outcome, r: &CheckReport) {
    if !r.passed() || r.cases == 0 {
        out.push(format!("{r}: {:?} {:?}", r.failures, r.errors));
    }
}

fn pascal(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::from(1)]];
    for m in 1..n {
        let prev = &rows[m - 1];
        let mut row = vec![BigInt::from(1); m + 1];
        for i in 1..m {
            row[i] = &prev[i - 1] + &prev[i];
        }
        rows.push(row);
    }
    rows
}

fn canonical(expr: &str, vars: &std::sync::Arc<VarSet>) -> String {
    parse_rational(expr, vars).unwrap().to_canonical_string()
}

// Criterion 1 data: the four displayed sums over T*P^3.
const P3_SUMS: [&str; 4] = [
    "-1/((-h+a1-a2)*(-h+a1-a3)*(-h+a1-a4))",
    "(3*h^2-3*h*a1-a1^2-h*a2+2*h*a3-a1*a3+2*h*a4-a1*a4+a3*a4)\
     /((h+a2-a1)*(h+a3-a1)*(h+a3-a2)*(h+a4-a3)*(h+a4-a2))",
    "(3*h^2-2*h*a1-2*h*a2+a1*a2+h*a3+3*h*a4-a1*a4-a2*a4+a4^2)\
     /((h+a3-a1)*(h+a3-a2)*(h+a4-a1)*(h+a4-a2)*(h+a4-a3))",
    "1/((h-a1+a4)*(h+a4-a2)*(h+a4-a3))",
];

/// The second display with the sign of a1^2 flipped and (h+a4-a3) read as
/// (h+a4-a1); this is what a direct recomputation from the displayed
/// matrix and tangent weights gives.
const P3_SECOND_CORRECTED: &str = "(3*h^2-3*h*a1+a1^2-h*a2+2*h*a3-a1*a3+2*h*a4-a1*a4+a3*a4)\
     /((h+a2-a1)*(h+a3-a1)*(h+a3-a2)*(h+a4-a1)*(h+a4-a2))";

fn criterion_1() -> Outcome {
    let mut out = Vec::new();
    let gr = Grassmannian::new(4, 1).unwrap();
    let id = Chamber::identity(4);
    for (i, expr) in P3_SUMS.iter().enumerate() {
        let p = FixedPoint::new(4, vec![i + 1]).unwrap();
        let got = localization_sum(&gr, &p, &id).unwrap().value.to_canonical_string();
        if got != canonical(expr, gr.vars()) {
            out.push(format!("sum for p{} differs from the display: {got}", i + 1));
        }
        if i == 1 && got != canonical(P3_SECOND_CORRECTED, gr.vars()) {
            out.push("sum for p2 differs from the corrected display".into());
        }
        let limit = integral_via_z_limit(&gr, &p).unwrap().scaled;
        if limit != int([1, 3, 3, 1][i]) {
            out.push(format!("limit for p{} is {limit}", i + 1));
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Vec::new();
    let binom = pascal(8);
    for n in 2..=8 {
        let gr = Grassmannian::new(n, 1).unwrap();
        for p in gr.fixed_points() {
            let i = p.indices()[0];
            let expect = BigRational::from_integer(binom[n - 1][i - 1].clone());
            let z = integral_via_z_limit(&gr, &p).unwrap().scaled;
            let c = closed_form_integral(&p).unwrap().scaled;
            if z != expect || c != expect {
                out.push(format!("n={n}, i={i}: z {z}, closed {c}, expected {expect}"));
            }
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let mut out = Vec::new();
    let expected: [(usize, Vec<Vec<i64>>); 2] = [
        (4, vec![vec![2], vec![3, 3], vec![1, 2, 1]]),
        (5, vec![vec![2], vec![5, 5], vec![4, 10, 4], vec![1, 4, 4, 1]]),
    ];
    for (n, rows) in expected {
        let layer = build_layer(n, LayerSource::Localization).unwrap();
        let want: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        if layer.rows() != want {
            out.push(format!("Gr(2,{n}) triangle:\n{layer}"));
        }
    }
    out
}

/// Every integral in the range of criteria 4 and 5; a method that errors
/// (including on a non-integer value) is recorded as a problem.
fn criterion_4_values() -> (Vec<(FixedPoint, Vec<IntegralValue>)>, Outcome) {
    let mut all = Vec::new();
    let mut errors = Vec::new();
    for (k, n_lo) in [(1, 2), (2, 3), (3, 4)] {
        for n in n_lo..=6 {
            let gr = Grassmannian::new(n, k).unwrap();
            for p in gr.fixed_points() {
                let mut vals = vec![integral_via_z_limit(&gr, &p), closed_form_integral(&p)];
                if k <= 2 {
                    vals.push(path_sum_limit(&omega_inverse(&p)));
                }
                let mut ok = Vec::new();
                for v in vals {
                    match v {
                        Ok(v) => ok.push(v),
                        Err(e) => errors.push(format!("Gr({k},{n}) {p}: {e}")),
                    }
                }
                all.push((p, ok));
            }
        }
    }
    (all, errors)
}

fn criterion_4() -> Outcome {
    let (values, mut out) = criterion_4_values();
    out.extend(
        values
            .into_iter()
            .filter(|(_, vals)| vals.iter().any(|v| v.scaled != vals[0].scaled))
            .map(|(p, vals)| {
                let s: Vec<String> = vals.iter().map(|v| format!("{} {}", v.method, v.scaled)).collect();
                format!("Gr({},{}) {p}: {}", p.k(), p.n(), s.join(", "))
            }),
    );
    out
}

fn criterion_5() -> Outcome {
    let (values, mut out) = criterion_4_values();
    out.extend(values.into_iter().flat_map(|(p, vals)| {
        vals.into_iter()
            .filter(|v| !v.scaled.is_integer())
            .map(move |v| format!("{p} via {}: {}", v.method, v.scaled))
    }));
    out
}

/// Short notation to a polynomial string: h, (xy) = a_x - a_y,
/// (xy)_h = a_x - a_y + h, juxtaposed for products.
fn expand_short(entry: &str) -> String {
    if entry == "0" {
        return "0".into();
    }
    let mut factors = Vec::new();
    let mut rest = entry;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('h') {
            factors.push("h".to_string());
            rest = r;
            continue;
        }
        let body = &rest[1..3];
        let (x, y) = (&body[..1], &body[1..]);
        rest = &rest[4..];
        if let Some(r) = rest.strip_prefix("_h") {
            factors.push(format!("(a{x}-a{y}+h)"));
            rest = r;
        } else {
            factors.push(format!("(a{x}-a{y})"));
        }
    }
    factors.join("*")
}

const P3_MATRIX: [[&str; 4]; 4] = [
    ["(12)_h(13)_h(14)_h", "h(23)_h(24)_h", "h(32)_h(34)_h", "h(42)_h(43)_h"],
    ["0", "(12)(23)_h(24)_h", "h(13)(34)_h", "h(14)(43)_h"],
    ["0", "0", "(13)(23)(34)_h", "h(14)(24)"],
    ["0", "0", "0", "(14)(24)(34)"],
];

fn criterion_6() -> Outcome {
    let mut out = Vec::new();
    for (k, n_lo) in [(1, 2), (2, 3)] {
        for n in n_lo..=5 {
            let gr = Grassmannian::new(n, k).unwrap();
            let c = Chamber::identity(n);
            let graph = build_moment_graph(&gr);
            for s in stab_matrix(&gr, &c).unwrap() {
                report_problems(&mut out, &axiom_check(&gr, &s, &c));
                report_problems(&mut out, &gkm_check(&gr, &s, &graph));
            }
        }
    }
    let gr = Grassmannian::new(4, 1).unwrap();
    let classes = stab_matrix(&gr, &Chamber::identity(4)).unwrap();
    for (row, s) in P3_MATRIX.iter().zip(&classes) {
        for (entry, (j, got)) in row.iter().zip(&s.restrictions) {
            let want = parse_poly(&expand_short(entry), gr.vars()).unwrap();
            if &want != got {
                out.push(format!("Stab{}|{j} = {got}, displayed {entry}", s.point));
            }
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let mut out = Vec::new();
    for (k, n_lo) in [(1, 2), (2, 3)] {
        for n in n_lo..=5 {
            let gr = Grassmannian::new(n, k).unwrap();
            for tau in Chamber::random(n, 10, 2024 + n as u64) {
                for p in gr.fixed_points() {
                    report_problems(&mut out, &chamber_covariance_check(&gr, &p, &tau));
                }
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let mut out = Vec::new();
    for (k, n_lo) in [(1, 2), (2, 3)] {
        for n in n_lo..=5 {
            let gr = Grassmannian::new(n, k).unwrap();
            for p in gr.fixed_points() {
                report_problems(&mut out, &vandermonde_divisibility_check(&gr, &p));
            }
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let mut out = Vec::new();
    let mut lo = build_layer(3, LayerSource::Localization).unwrap();
    for n in 4..=10 {
        let hi = build_layer(n, LayerSource::Localization).unwrap();
        report_problems(&mut out, &four_neighbor_check(&lo, &hi, NeighborMode::WithException));
        let ext = build_extended_layer(n).unwrap();
        report_problems(&mut out, &four_neighbor_check(&lo, &ext, NeighborMode::Extended));
        lo = hi;
    }
    let bottom = build_extended_layer(4).unwrap().rows().pop().unwrap();
    if bottom != [int(0), int(-2), int(-2), int(0)] {
        out.push(format!("extended bottom row of layer 4: {bottom:?}"));
    }
    out
}

fn criterion_10() -> Outcome {
    let mut out = Vec::new();
    let r = reduced_recurrence_check(12, LayerSource::Localization);
    if r.status() != Status::ConjectureSupported || r.cases == 0 {
        out.push(format!("{r}"));
    }
    let printed = [
        "1",
        "a+b+c",
        "a^2+2*a*b+3*a*c+b^2+2*b*c+c^2",
        "a^3+3*a^2*b+3*a*b^2+b^3+6*a^2*c+8*a*b*c+3*b^2*c+6*a*c^2+3*b*c^2+c^3",
    ];
    let vs = abc_ring();
    let (_, reduced) = divisibility_check(6, LayerSource::Localization);
    if reduced.len() != printed.len() {
        out.push(format!("{} reduced layers for n = 3..6", reduced.len()));
    }
    for (lp, expr) in reduced.iter().zip(printed) {
        let want: MultiPoly = parse_poly(expr, &vs).unwrap();
        if lp.poly != want {
            out.push(format!("reduced layer {}: {}", lp.n, lp.poly));
        }
    }
    out
}

fn criterion_11() -> Outcome {
    let mut out = Vec::new();
    let gf = generating_functions(30).unwrap();
    report_problems(&mut out, &generating_function_check(&gf, 8, LayerSource::Localization));
    report_problems(&mut out, &narayana_series_check(&gf, 8));
    let binom = pascal(10);
    for (l, row) in binom.iter().enumerate().take(9).skip(1) {
        for c in 1..=l {
            let direct = &row[c] * &row[c - 1] / BigInt::from(l);
            if narayana(l, c).unwrap() != direct {
                out.push(format!("N({l},{c}) != {direct}"));
            }
        }
    }
    out
}

fn criterion_12() -> Outcome {
    let mut out = Vec::new();
    for n in 2..=9 {
        for k in 1..n {
            if k * (n - k) > 8 {
                continue;
            }
            match path_conjecture_checks(n, k, DEFAULT_MAX_BOXES) {
                Ok(r) => {
                    for rep in [&r.sum_vs_localization, &r.complement] {
                        if rep.status() != Status::ConjectureSupported {
                            out.push(format!("{rep}"));
                        }
                    }
                }
                Err(e) => out.push(format!("Gr({k},{n}): {e}")),
            }
        }
    }
    let gr = Grassmannian::new(4, 2).unwrap();
    let lam = BoxPartition::new(4, 2, vec![1]).unwrap();
    let listed: BTreeSet<Vec<(usize, usize)>> = [
        [(1, 1), (2, 1), (1, 2), (2, 2)],
        [(1, 1), (1, 2), (2, 1), (2, 2)],
        [(2, 1), (1, 1), (1, 2), (2, 2)],
        [(2, 1), (1, 2), (1, 1), (2, 2)],
        [(2, 1), (1, 2), (2, 2), (1, 1)],
        [(1, 2), (1, 1), (2, 1), (2, 2)],
        [(1, 2), (2, 1), (1, 1), (2, 2)],
        [(1, 2), (2, 1), (2, 2), (1, 1)],
    ]
    .iter()
    .map(|p| p.to_vec())
    .collect();
    let found: BTreeSet<Vec<(usize, usize)>> = enumerate_paths(&lam).into_iter().map(|p| p.boxes).collect();
    if found != listed {
        out.push(format!("paths to (1): {found:?}"));
    }
    let first = BoxPath {
        boxes: vec![(1, 1), (2, 1), (1, 2), (2, 2)],
    };
    let factors: Vec<MultiPoly> = path_weights(&first, 4, 2)
        .unwrap()
        .iter()
        .map(|f| f.to_poly(&gr))
        .collect();
    let displayed: Vec<MultiPoly> = ["h+a3-a2", "h-a2+a4", "h-a1+a4", "2*h-a2-a1+a3+a4"]
        .iter()
        .map(|s| parse_poly(s, gr.vars()).unwrap())
        .collect();
    if factors != displayed {
        out.push(format!("single-path factors: {factors:?}"));
    }
    let v = path_sum(&lam).unwrap().to_canonical_string();
    let want = canonical(
        "(3*h^2-2*h*a1-h*a2+a1*a2+h*a3-a2*a3+2*h*a4-a1*a4+a3*a4)\
         /((h+a2-a1)*(h+a3-a1)*(h+a4-a1)*(h+a3-a2)*(h+a4-a2)*(h+a4-a3))",
        gr.vars(),
    );
    if v != want {
        out.push(format!("V((1)) = {v}"));
    }
    out
}

fn small_poly(vs: std::sync::Arc<VarSet>) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-3i32..=3, 0u32..3, 0u32..3, 0u32..2), 1..5).prop_map(move |terms| {
        let s: Vec<String> = terms
            .iter()
            .map(|(c, x, y, z)| format!("({c})*a1^{x}*a2^{y}*h^{z}"))
            .collect();
        parse_poly(&s.join(" + "), &vs).unwrap()
    })
}

fn criterion_13() -> Outcome {
    let mut out = Vec::new();
    let gr = Grassmannian::new(2, 1).unwrap();
    let vs = gr.vars().clone();
    let mut runner = TestRunner::new(Config {
        cases: 128,
        failure_persistence: None,
        ..Config::default()
    });
    let pairs = (small_poly(vs.clone()), small_poly(vs.clone()));
    let idem = runner.run(&pairs, |(p, q)| {
        prop_assume!(!q.is_zero());
        let s = RationalFunction::new(p, q).unwrap().to_canonical_string();
        prop_assert_eq!(canonical(&s, &vs), s);
        Ok(())
    });
    if let Err(e) = idem {
        out.push(format!("canonical form: {e}"));
    }
    let div = runner.run(&pairs, |(p, q)| {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).exact_divide(&q).unwrap(), p);
        Ok(())
    });
    if let Err(e) = div {
        out.push(format!("exact division: {e}"));
    }
    for n in 2..=8 {
        for k in 1..n {
            let images: BTreeSet<FixedPoint> = enumerate_partitions(n, k)
                .iter()
                .map(|lam| {
                    if omega_inverse(&omega(lam)) != *lam {
                        out.push(format!("omega is not invertible at {lam}"));
                    }
                    omega(lam)
                })
                .collect();
            let points: BTreeSet<FixedPoint> = Grassmannian::new(n, k).unwrap().fixed_points().into_iter().collect();
            if images != points {
                out.push(format!("omega is not onto for Gr({k},{n})"));
            }
        }
    }
    for n in 2..=9 {
        for k in 1..n {
            if k * (n - k) <= 9 {
                report_problems(&mut out, &path_count_check(n, k));
            }
        }
    }
    let lam = BoxPartition::new(4, 2, vec![1]).unwrap();
    if multisets_match_under_alpha(&lam) {
        out.push("multiset sequences for (1) map under alpha term by term".into());
    }
    if !weights_match_under_alpha(&lam).unwrap() {
        out.push("weight lists for (1) do not match under alpha".into());
    }
    out
}

fn criteria() -> Vec<Criterion> {
    let c = |id, what, secs, run| Criterion {
        id,
        what,
        limit: Duration::from_secs(secs),
        expected_failure: None,
        run,
    };
    vec![
        Criterion {
            expected_failure: Some(
                "the second displayed sum has a sign slip on a1^2 and (h+a4-a3) for (h+a4-a1); \
                 the computed sum equals the corrected display",
            ),
            ..c(1, "T*P^3 sums match the displays exactly; limits 1,3,3,1", 1, criterion_1)
        },
        c(2, "k=1 integrals are C(n-1,i-1), n <= 8, z-limit and closed form", 5, criterion_2),
        c(3, "Gr(2,4) and Gr(2,5) triangles", 10, criterion_3),
        c(4, "z-limit = closed form (= path limit for k <= 2), n <= 6", 180, criterion_4),
        c(5, "integrality over the range of criterion 4", 180, criterion_5),
        c(6, "axioms and GKM relations, n <= 5, k <= 2; T*P^3 matrix", 30, criterion_6),
        c(7, "chamber covariance for 10 random chambers, n <= 5, k <= 2", 60, criterion_7),
        c(8, "Vandermonde divisibility, n <= 5, k <= 2", 120, criterion_8),
        c(9, "four-neighbor and extended recurrences, n <= 10; extended row", 30, criterion_9),
        c(10, "divisibility and reduced recurrence, n <= 12; reduced layers 3..6", 30, criterion_10),
        c(11, "generating function coefficients at order 30, n <= 8; Narayana", 60, criterion_11),
        c(12, "path conjectures for k(n-k) <= 8; worked V((1))", 120, criterion_12),
        c(13, "property suites", 120, criterion_13),
    ]
}

#[test]
fn acceptance_criteria() {
    let mut unexpected = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let problems = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.limit;
        let ok = problems.is_empty() && in_time;
        println!(
            "criterion {:>2}: {} [{:.2?} / limit {:?}] {}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            elapsed,
            c.limit,
            c.what
        );
        for p in &problems {
            println!("    {p}");
        }
        if !in_time {
            println!("    over the runtime limit");
        }
        match (c.expected_failure, ok) {
            (None, true) => {}
            (None, false) => unexpected.push(c.id),
            (Some(why), false) => {
                println!("    expected failure: {why}");
                // Only the known discrepancy may remain.
                if !in_time || problems.len() != 1 {
                    unexpected.push(c.id);
                }
            }
            (Some(_), true) => {
                println!("    expected to fail but passed");
                unexpected.push(c.id);
            }
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcomes: {unexpected:?}");
}
