use std::collections::BTreeMap;

use envelope_core::closedform::{closed_form_integral, closed_form_via_g};
use envelope_core::geometry::{
    build_moment_graph, factor_into_forms, omega_inverse, short_form, BoxPartition, Chamber,
    FixedPoint, Grassmannian,
};
use envelope_core::localize::{
    chamber_covariance_check, integral_full_multivariate, integral_via_z_limit, localization_sum,
    vandermonde_divisibility_check, IntegralValue, Method, DEFAULT_MAX_COST,
};
use envelope_core::paths::{
    all_path_weights, enumerate_paths, path_conjecture_checks, path_count_check, path_sum,
    path_sum_limit, DEFAULT_MAX_BOXES,
};
use envelope_core::report::{CheckReport, Level};
use envelope_core::simplex::{
    build_extended_layer, build_layer, build_layer_k, divisibility_check, four_neighbor_check,
    generating_function_check, generating_function_coeff, generating_functions,
    narayana_series_check, reduced_recurrence_check, LayerSource, NeighborMode, SimplexLayer,
};
use envelope_core::exactalg::MultiPoly;
use envelope_core::weightfn::{axiom_check, gkm_check, stab_matrix};
use num_traits::One;
use serde_json::json;

use crate::output::{Fatal, Output, Run};
use crate::{Cli, Command, Format, MethodArg, PathsArgs, SimplexArgs, Suite, VerifyArgs};

type CmdResult = Result<Output, Fatal>;

pub fn run(cli: &Cli) -> CmdResult {
    let format = cli.global.format;
    match &cli.command {
        Command::Integral {
            n,
            k,
            point,
            method,
            sum,
        } => integral(format, *n, *k, point, *method, *sum),
        Command::Table { n, k, method } => table(format, *n, *k, *method),
        Command::Simplex(args) => simplex(format, args),
        Command::ReducedSimplex { n_max } => simplex(
            format,
            &SimplexArgs {
                n_max: *n_max,
                k: 2,
                reduced: true,
                extended: false,
            },
        ),
        Command::GfCoeff { n, i1, i2, order } => gf_coeff(format, *n, *i1, *i2, *order),
        Command::Paths(args) => paths(format, args),
        Command::StabMatrix { n, k, chamber } => stab(format, *n, *k, chamber.as_deref()),
        Command::MomentGraph { n, k } => moment_graph(format, *n, *k),
        Command::Verify(args) => verify(format, args),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>, Fatal> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Fatal::usage(format!("invalid {what} entry '{t}'")))
        })
        .collect()
}

fn max_cost() -> Result<u64, Fatal> {
    match std::env::var("ENVELOPE_MAX_COST") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Fatal::usage(format!("ENVELOPE_MAX_COST must be an integer, got '{v}'"))),
        Err(_) => Ok(DEFAULT_MAX_COST),
    }
}

fn one_method(gr: &Grassmannian, p: &FixedPoint, m: Method) -> Result<IntegralValue, Fatal> {
    Ok(match m {
        Method::Z => integral_via_z_limit(gr, p)?,
        Method::Closed => closed_form_integral(p)?,
        Method::Full => integral_full_multivariate(gr, p, max_cost()?)?,
        Method::Paths => path_sum_limit(&omega_inverse(p))?,
    })
}

/// Every method that applies at this size, in a fixed order.
fn applicable(gr: &Grassmannian) -> Result<Vec<Method>, Fatal> {
    let mut ms = vec![Method::Z, Method::Closed];
    if envelope_core::localize::full_cost(gr) <= max_cost()? {
        ms.push(Method::Full);
    }
    if gr.base_dim() <= DEFAULT_MAX_BOXES {
        ms.push(Method::Paths);
    }
    Ok(ms)
}

/// Values for one point; with `all`, every applicable method plus the
/// second closed-form route, and an agreement check.
fn point_values(
    gr: &Grassmannian,
    p: &FixedPoint,
    method: MethodArg,
    agree: &mut CheckReport,
) -> Result<Vec<IntegralValue>, Fatal> {
    let single = |m| one_method(gr, p, m).map(|v| vec![v]);
    match method {
        MethodArg::Z => single(Method::Z),
        MethodArg::Full => single(Method::Full),
        MethodArg::Closed => single(Method::Closed),
        MethodArg::Paths => single(Method::Paths),
        MethodArg::All => {
            let mut vals = Vec::new();
            for m in applicable(gr)? {
                match one_method(gr, p, m) {
                    Ok(v) => vals.push(v),
                    Err(e) => agree.error(format!("{p} via {m}: {}", e.message)),
                }
            }
            match closed_form_via_g(p) {
                Ok(v) if vals.first().is_some_and(|f| f.scaled != v.scaled) => {
                    agree.fail(format!("{p}: closed form routes differ"))
                }
                Ok(_) => {}
                Err(e) => agree.error(format!("{p} via g: {e}")),
            }
            match vals.iter().find(|v| v.scaled != vals[0].scaled) {
                Some(v) => agree.fail(format!(
                    "{p}: {} gives {}, {} gives {}",
                    vals[0].method, vals[0].scaled, v.method, v.scaled
                )),
                None => agree.pass(),
            }
            Ok(vals)
        }
    }
}

fn point_arg(gr: &Grassmannian, s: &str) -> Result<FixedPoint, Fatal> {
    Ok(gr.point(&parse_list(s, "point")?)?)
}

fn integral(format: Format, n: usize, k: usize, point: &str, method: MethodArg, sum: bool) -> CmdResult {
    let gr = Grassmannian::new(n, k)?;
    let p = point_arg(&gr, point)?;
    let mut run = Run::new(
        "integral",
        json!({"n": n, "k": k, "point": p, "method": format!("{method:?}").to_lowercase(), "sum": sum}),
    );
    let mut agree = CheckReport::new("integral methods agree", Level::Internal);
    let vals = point_values(&gr, &p, method, &mut agree)?;
    let mut body = String::new();
    if sum {
        let s = localization_sum(&gr, &p, &Chamber::identity(n))?;
        let text = s.value.to_canonical_string();
        body.push_str(&format!("sum {p} = {text}\n"));
        run.push(json!({"point": p, "localization_sum": text}));
    }
    for v in &vals {
        body.push_str(&format!("{p} {} = {}\n", v.method, v.scaled));
        run.push(v);
    }
    if method == MethodArg::All {
        run.check(agree);
    }
    Ok(run.finish(format, body))
}

fn table(format: Format, n: usize, k: usize, method: MethodArg) -> CmdResult {
    let gr = Grassmannian::new(n, k)?;
    let mut run = Run::new(
        "table",
        json!({"n": n, "k": k, "method": format!("{method:?}").to_lowercase()}),
    );
    let mut agree = CheckReport::new("integral methods agree", Level::Internal);
    let mut values = Vec::new();
    for p in gr.fixed_points() {
        let vals = point_values(&gr, &p, method, &mut agree)?;
        let v = vals
            .into_iter()
            .next()
            .ok_or_else(|| Fatal::internal(format!("no method produced a value for {p}")))?;
        values.push(v);
    }
    let body = match format {
        Format::Csv => {
            let mut s = String::from("point,value\n");
            for v in &values {
                let idx: Vec<String> = v.point.indices().iter().map(|i| i.to_string()).collect();
                s.push_str(&format!("{},{}\n", idx.join(" "), v.scaled));
            }
            s
        }
        _ if k == 1 => {
            let vs: Vec<String> = values.iter().map(|v| v.scaled.to_string()).collect();
            format!("{}\n", vs.join(" "))
        }
        _ if k == 2 => {
            let entries = values
                .iter()
                .map(|v| ((v.point.indices()[0], v.point.indices()[1]), v.scaled.clone()))
                .collect();
            let layer = SimplexLayer {
                n,
                extended: false,
                entries,
            };
            format!("{layer}\n")
        }
        _ => values
            .iter()
            .map(|v| format!("{} {}\n", v.point, v.scaled))
            .collect(),
    };
    for v in &values {
        run.push(v);
    }
    if method == MethodArg::All {
        run.check(agree);
    }
    Ok(run.finish(format, body))
}

fn simplex(format: Format, args: &SimplexArgs) -> CmdResult {
    let SimplexArgs {
        n_max,
        k,
        reduced,
        extended,
    } = *args;
    let mut run = Run::new(
        if reduced { "reduced-simplex" } else { "simplex" },
        json!({"n_max": n_max, "k": k, "reduced": reduced, "extended": extended}),
    );
    let mut body = String::new();
    if reduced {
        if k != 2 {
            return Err(Fatal::usage("the reduced simplex is defined for k = 2 only"));
        }
        let (report, polys) = divisibility_check(n_max, LayerSource::ClosedForm);
        for lp in polys {
            body.push_str(&format!("n = {}: {}\n", lp.n, lp.poly));
            run.push(json!({"n": lp.n, "reduced": lp.poly.to_string()}));
        }
        run.check(report);
        return Ok(run.finish(format, body));
    }
    if k == 2 {
        let start = if extended { 3 } else { 2 };
        for n in start..=n_max {
            let layer = if extended {
                build_extended_layer(n)?
            } else {
                build_layer(n, LayerSource::ClosedForm)?
            };
            body.push_str(&format!("n = {n}\n{layer}\n"));
            let entries: Vec<_> = layer
                .entries
                .iter()
                .map(|(&(i1, i2), v)| json!({"point": [i1, i2], "value": v.to_string()}))
                .collect();
            run.push(json!({"n": n, "entries": entries}));
        }
    } else {
        if extended {
            return Err(Fatal::usage("the extended simplex is defined for k = 2 only"));
        }
        for n in k.max(1)..=n_max {
            let vals = build_layer_k(n, k, LayerSource::ClosedForm)?;
            body.push_str(&format!("n = {n}\n"));
            let mut entries = Vec::new();
            for (p, v) in vals {
                body.push_str(&format!("{p} {v}\n"));
                entries.push(json!({"point": p, "value": v.to_string()}));
            }
            run.push(json!({"n": n, "entries": entries}));
        }
    }
    Ok(run.finish(format, body))
}

fn gf_coeff(format: Format, n: usize, i1: usize, i2: usize, order: Option<u32>) -> CmdResult {
    if !(1 <= i1 && i1 < i2 && i2 <= n) {
        return Err(Fatal::usage(format!("need 1 <= i1 < i2 <= n, got {i1}, {i2}, {n}")));
    }
    let order = order.unwrap_or(3 * n as u32 + 1);
    let gf = generating_functions(order)?;
    let c = generating_function_coeff(&gf, n, i1, i2)?;
    let mut run = Run::new("gf-coeff", json!({"n": n, "i1": i1, "i2": i2, "order": order}));
    run.push(json!({"coefficient": c.to_string()}));
    Ok(run.finish(format, format!("{c}\n")))
}

fn paths(format: Format, args: &PathsArgs) -> CmdResult {
    let (n, k) = (args.n, args.k);
    Grassmannian::new(n, k)?;
    let lam = BoxPartition::new(n, k, parse_list(&args.partition, "partition")?)?;
    let mode = if args.list {
        "list"
    } else if args.verify44 {
        "verify44"
    } else if args.verify45 {
        "verify45"
    } else {
        "sum"
    };
    let mut run = Run::new("paths", json!({"n": n, "k": k, "partition": lam, "mode": mode}));
    let mut body = String::new();
    match mode {
        "list" => {
            let paths = enumerate_paths(&lam);
            let weights = all_path_weights(&lam)?;
            for (path, ws) in paths.iter().zip(&weights) {
                let boxes: Vec<String> = path.boxes.iter().map(|(r, c)| format!("({r},{c})")).collect();
                let forms: Vec<String> = ws.iter().map(|w| format!("({w})")).collect();
                body.push_str(&format!("{} : {}\n", boxes.join(" "), forms.join("")));
                run.push(json!({
                    "boxes": path.boxes,
                    "weights": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                }));
            }
            body.push_str(&format!("{} paths\n", paths.len()));
        }
        "sum" => {
            let v = path_sum(&lam)?.to_canonical_string();
            let limit = path_sum_limit(&lam)?;
            body.push_str(&format!("V{lam} = {v}\nlimit = {}\n", limit.scaled));
            run.push(json!({"sum": v, "limit": limit.scaled.to_string()}));
        }
        _ => {
            let reports = path_conjecture_checks(n, k, DEFAULT_MAX_BOXES)?;
            run.check(if mode == "verify44" {
                reports.sum_vs_localization
            } else {
                reports.complement
            });
        }
    }
    Ok(run.finish(format, body))
}

/// `c * forms` in short notation, e.g. `h(23)_h(24)_h`.
fn short_poly(gr: &Grassmannian, f: &MultiPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    match factor_into_forms(gr, f) {
        Some((c, forms)) => {
            let body: String = forms.iter().map(short_form).collect();
            let prefix = if c.is_one() {
                String::new()
            } else if c == -envelope_core::exactalg::rat(1) {
                "-".into()
            } else {
                c.to_string()
            };
            if body.is_empty() {
                c.to_string()
            } else {
                format!("{prefix}{body}")
            }
        }
        None => format!("({f})"),
    }
}

fn stab(format: Format, n: usize, k: usize, chamber: Option<&str>) -> CmdResult {
    let gr = Grassmannian::new(n, k)?;
    let c = match chamber {
        Some(s) => {
            let perm = parse_list(s, "chamber")?;
            if perm.len() != n {
                return Err(Fatal::usage(format!("chamber must permute 1..{n}")));
            }
            Chamber::new(perm)?
        }
        None => Chamber::identity(n),
    };
    let classes = stab_matrix(&gr, &c)?;
    let mut run = Run::new("stab-matrix", json!({"n": n, "k": k, "chamber": c}));
    let mut body = String::new();
    for s in &classes {
        let cells: Vec<String> = s.restrictions.values().map(|f| short_poly(&gr, f)).collect();
        body.push_str(&format!("Stab{}: {}\n", s.point, cells.join(" | ")));
        let restrictions: BTreeMap<String, String> = s
            .restrictions
            .iter()
            .map(|(j, f)| (j.label(), f.to_string()))
            .collect();
        run.push(json!({"point": s.point, "short": cells, "restrictions": restrictions}));
    }
    Ok(run.finish(format, body))
}

fn moment_graph(format: Format, n: usize, k: usize) -> CmdResult {
    let gr = Grassmannian::new(n, k)?;
    let g = build_moment_graph(&gr);
    let mut run = Run::new("moment-graph", json!({"n": n, "k": k}));
    let vs: Vec<String> = g.vertices.iter().map(|v| v.to_string()).collect();
    let mut body = format!("vertices: {}\n", vs.join(" "));
    for e in &g.edges {
        body.push_str(&format!(
            "{} -- {}  zero section {}  cotangent {}  attracts to {}\n",
            e.source, e.target, e.zero_section, e.cotangent, e.attracts_to
        ));
    }
    run.push(&g);
    Ok(run.finish(format, body))
}

fn need_nk(args: &VerifyArgs) -> Result<Grassmannian, Fatal> {
    match (args.n, args.k) {
        (Some(n), Some(k)) => Ok(Grassmannian::new(n, k)?),
        _ => Err(Fatal::usage("this suite needs n and k")),
    }
}

fn verify(format: Format, args: &VerifyArgs) -> CmdResult {
    let suite = format!("{:?}", args.suite).to_lowercase();
    let mut run = Run::new(
        "verify",
        json!({"suite": suite, "n": args.n, "k": args.k, "n_max": args.n_max, "taus": args.taus, "seed": args.seed}),
    );
    match args.suite {
        Suite::Axioms => {
            let gr = need_nk(args)?;
            let c = Chamber::identity(gr.n());
            let graph = build_moment_graph(&gr);
            let mut ax = CheckReport::new(format!("stable envelope axioms, Gr({},{})", gr.k(), gr.n()), Level::Theorem);
            let mut gkm = CheckReport::new(format!("GKM relations, Gr({},{})", gr.k(), gr.n()), Level::Theorem);
            for s in stab_matrix(&gr, &c)? {
                ax.merge(axiom_check(&gr, &s, &c));
                gkm.merge(gkm_check(&gr, &s, &graph));
            }
            run.check(ax);
            run.check(gkm);
        }
        Suite::Covariance => {
            let gr = need_nk(args)?;
            let mut r = CheckReport::new(format!("chamber covariance, Gr({},{})", gr.k(), gr.n()), Level::Theorem);
            for tau in Chamber::random(gr.n(), args.taus, args.seed) {
                for p in gr.fixed_points() {
                    r.merge(chamber_covariance_check(&gr, &p, &tau));
                }
            }
            run.check(r);
        }
        Suite::Vandermonde => {
            let gr = need_nk(args)?;
            let mut r = CheckReport::new(format!("Vandermonde divisibility, Gr({},{})", gr.k(), gr.n()), Level::Theorem);
            for p in gr.fixed_points() {
                r.merge(vandermonde_divisibility_check(&gr, &p));
            }
            run.check(r);
        }
        Suite::Integrals => {
            let gr = need_nk(args)?;
            let mut agree = CheckReport::new(format!("integral methods agree, Gr({},{})", gr.k(), gr.n()), Level::Internal);
            for p in gr.fixed_points() {
                point_values(&gr, &p, MethodArg::All, &mut agree)?;
            }
            run.check(agree);
        }
        Suite::Simplex => {
            let n_max = args.n_max;
            if n_max < 3 {
                return Err(Fatal::usage("--n-max must be at least 3"));
            }
            // Layer 2 is a single entry; the recurrences start at layer 4.
            let mut plain = CheckReport::new(format!("four-neighbor recurrence, 4 <= n <= {n_max}"), Level::Theorem);
            let mut ext = CheckReport::new(format!("extended recurrence, 4 <= n <= {n_max}"), Level::Theorem);
            let mut lo = build_layer(3, LayerSource::Localization)?;
            for n in 4..=n_max {
                let hi = build_layer(n, LayerSource::Localization)?;
                plain.merge(four_neighbor_check(&lo, &hi, NeighborMode::WithException));
                ext.merge(four_neighbor_check(&lo, &build_extended_layer(n)?, NeighborMode::Extended));
                lo = hi;
            }
            run.check(plain);
            run.check(ext);
            run.check(reduced_recurrence_check(n_max, LayerSource::ClosedForm));
            let gf = generating_functions(3 * n_max as u32 + 4)?;
            run.check(generating_function_check(&gf, n_max, LayerSource::ClosedForm));
            run.check(narayana_series_check(&gf, n_max));
        }
        Suite::Paths => {
            let gr = need_nk(args)?;
            let reports = path_conjecture_checks(gr.n(), gr.k(), DEFAULT_MAX_BOXES)?;
            run.check(reports.sum_vs_localization);
            run.check(reports.complement);
            run.check(path_count_check(gr.n(), gr.k()));
        }
    }
    Ok(run.finish(format, String::new()))
}
