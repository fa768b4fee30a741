use crate::render::{cell, rat_str, render_csv, render_pairs, render_table, sig12, Sink};
use crate::{Failure, Format};
use avgdist_core::arith::{parse_rational, rat, to_f64};
use avgdist_core::bounds::{
    beta_star, chang_gap, eta, noise_bounds, phi, psi, theta, w1_upper, wm_upper, BetaStar,
    BoundValue, W1Mode,
};
use avgdist_core::code::{distance_distribution, BinaryCode};
use avgdist_core::krawtchouk::KrawtchoukTable;
use avgdist_core::lp::{
    build_avgdist_dual, build_avgdist_primal, build_weight_dual, build_weight_primal,
    check_feasibility, dual_objective, fwy_certificate, improved_certificate,
    min_avgdist_lower_bound, simplex_solve, DualCertificate, LowerBoundMode, SolveStatus,
};
use avgdist_core::oracle::{
    max_fourier_weight_exhaustive, min_avg_distance_exhaustive, noise_extremes_exhaustive,
    verify_duality_sweep,
};
use avgdist_core::{Error, Int, Rational};
use num::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

const GRID_CAP: usize = 10_000;

fn half() -> Rational {
    rat(1, 2)
}

fn grid_points(spec: &str) -> Result<Vec<Rational>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::usage(format!("grid must be lo:hi:step, got {spec:?}")));
    }
    let lo = parse_rational(parts[0])?;
    let hi = parse_rational(parts[1])?;
    let step = parse_rational(parts[2])?;
    if step <= Rational::zero() {
        return Err(Failure::usage("grid step must be positive"));
    }
    if lo <= Rational::zero() || hi > half() || lo > hi {
        return Err(Failure::usage("grid densities must sit inside (0, 1/2] with lo <= hi"));
    }
    let count = ((&hi - &lo) / &step).floor().to_integer();
    if count >= Int::from(GRID_CAP) {
        return Err(Failure {
            code: 3,
            message: format!("size guard: grid with more than {GRID_CAP} points refused"),
        });
    }
    let mut out = Vec::new();
    let mut a = lo;
    while a <= hi {
        out.push(a.clone());
        a += &step;
    }
    Ok(out)
}

/// One M or one a; decimal a snaps to the nearest dyadic M / 2^n
/// (ties to even M) and the snap is echoed on stderr.
fn resolve_density(
    n: usize,
    m_flag: Option<u64>,
    a_flag: Option<&str>,
) -> Result<(u64, Rational), Failure> {
    if n == 0 || n > 63 {
        return Err(Failure::usage(format!("n = {n} outside [1:63]")));
    }
    let cells = Int::one() << n;
    match (m_flag, a_flag) {
        (Some(m), None) => {
            if m == 0 {
                return Err(Failure::usage("M must be at least 1"));
            }
            if Int::from(m) > cells {
                return Err(Failure::usage(format!("M = {m} above 2^{n}")));
            }
            Ok((m, Rational::new(Int::from(m), cells)))
        }
        (None, Some(s)) => {
            let a = parse_rational(s)?;
            if a <= Rational::zero() || a > Rational::one() {
                return Err(Failure::usage(format!("a = {s} outside (0, 1]")));
            }
            let scaled = &a * Rational::from(cells.clone());
            let m_int = if scaled.is_integer() {
                scaled.to_integer()
            } else {
                let snapped = round_half_even(&scaled);
                let snapped = snapped.max(Int::one()).min(cells.clone());
                let a_snap = Rational::new(snapped.clone(), cells.clone());
                eprintln!("note: a = {s} snapped to {snapped}/2^{n} = {a_snap} (M = {snapped})");
                snapped
            };
            let m = m_int.to_u64().expect("M fits u64 for n <= 63");
            Ok((m, Rational::new(m_int, cells)))
        }
        _ => Err(Failure::usage("exactly one of --M and --a is required")),
    }
}

fn round_half_even(v: &Rational) -> Int {
    let fl = v.floor().to_integer();
    let frac = v - Rational::from(fl.clone());
    if frac > half() {
        fl + 1
    } else if frac < half() {
        fl
    } else if (&fl % 2i32).is_zero() {
        fl
    } else {
        fl + 1
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialization");
    s.push('\n');
    s
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serialization");
    s.push('\n');
    s
}

const BOUND_COLUMNS: [&str; 7] =
    ["a", "fwy_gap", "improved_gap", "chang_gap", "hyper_gap", "eta", "w1_upper"];

fn bound_row(a: &Rational) -> Result<Vec<String>, Failure> {
    Ok(vec![
        rat_str(a),
        cell(&BoundValue::Exact(a.recip() / rat(4, 1))),
        cell(&phi(a)?),
        sig12(chang_gap(a)?),
        sig12(psi(a)?),
        cell(&eta(a)?),
        cell(&w1_upper(a, W1Mode::Combined)?),
    ])
}

/// Subcube points (codimension i) and the Hamming-ball family at
/// dimension n, both with their exact gap n/2 - D.
fn code_points(n: usize) -> Result<Vec<(&'static str, Rational, Rational)>, Failure> {
    if n == 0 || n > 16 {
        return Err(Failure::usage(format!("code points need n in [1:16], got {n}")));
    }
    let mut rows = Vec::new();
    for i in 1..=n {
        rows.push(("subcube", rat(1, 1 << i), rat(i as i64, 2)));
    }
    for r in 0..=n {
        let ball = BinaryCode::hamming_ball(n, r)?;
        let d = distance_distribution(&ball)?.average();
        rows.push(("ball", ball.density(), rat(n as i64, 2) - d));
    }
    Ok(rows)
}

pub fn run_bounds(
    grid: &str,
    n: Option<usize>,
    format: Format,
    sink: &Sink,
) -> Result<(), Failure> {
    let points = grid_points(grid)?;
    let mut rows = Vec::with_capacity(points.len());
    for a in &points {
        rows.push(bound_row(a)?);
    }
    let codes = n.map(code_points).transpose()?;
    let text = match format {
        Format::Csv => {
            let mut out = render_csv(&BOUND_COLUMNS, &rows);
            if let Some(codes) = &codes {
                out.push('\n');
                let code_rows: Vec<Vec<String>> = codes
                    .iter()
                    .map(|(k, a, g)| vec![k.to_string(), rat_str(a), rat_str(g)])
                    .collect();
                out.push_str(&render_csv(&["kind", "a", "gap"], &code_rows));
            }
            out
        }
        Format::Table => {
            let mut out = render_table(&BOUND_COLUMNS, &rows);
            if let Some(codes) = &codes {
                out.push('\n');
                let code_rows: Vec<Vec<String>> = codes
                    .iter()
                    .map(|(k, a, g)| vec![k.to_string(), rat_str(a), rat_str(g)])
                    .collect();
                out.push_str(&render_table(&["kind", "a", "gap"], &code_rows));
            }
            out
        }
        Format::Json => {
            let grid_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = serde_json::Map::new();
                    for (name, value) in BOUND_COLUMNS.iter().zip(r) {
                        obj.insert(name.to_string(), Value::String(value.clone()));
                    }
                    Value::Object(obj)
                })
                .collect();
            let mut top = json!({ "grid": grid_rows });
            if let Some(codes) = &codes {
                let code_rows: Vec<Value> = codes
                    .iter()
                    .map(|(k, a, g)| json!({ "kind": k, "a": rat_str(a), "gap": rat_str(g) }))
                    .collect();
                top["codes"] = Value::Array(code_rows);
            }
            json_text(&top)
        }
    };
    sink.write(&text)?;
    Ok(())
}

pub fn run_figure1(grid: &str, n: usize, format: Format, sink: &Sink) -> Result<(), Failure> {
    let points = grid_points(grid)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let curve =
        |rows: &mut Vec<Vec<String>>, name: &str, f: &mut dyn FnMut(&Rational) -> Result<String, Failure>| {
            for a in &points {
                match f(a) {
                    Ok(v) => rows.push(vec![name.to_string(), rat_str(a), v]),
                    Err(e) => return Err(e),
                }
            }
            Ok(())
        };
    curve(&mut rows, "fwy", &mut |a| Ok(rat_str(&(a.recip() / rat(4, 1)))))?;
    curve(&mut rows, "improved", &mut |a| Ok(cell(&phi(a)?)))?;
    curve(&mut rows, "chang", &mut |a| Ok(sig12(chang_gap(a)?)))?;
    curve(&mut rows, "hyper", &mut |a| Ok(sig12(psi(a)?)))?;
    for i in 1..=6 {
        rows.push(vec!["subcube".into(), rat_str(&rat(1, 1 << i)), rat_str(&rat(i, 2))]);
    }
    for (kind, a, gap) in code_points(n)? {
        if kind == "ball" {
            rows.push(vec!["ball".into(), rat_str(&a), rat_str(&gap)]);
        }
    }
    let header = ["series", "a", "gap"];
    let text = match format {
        Format::Csv => render_csv(&header, &rows),
        Format::Table => render_table(&header, &rows),
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "series": r[0], "a": r[1], "gap": r[2] }))
                .collect();
            json_text(&Value::Array(items))
        }
    };
    sink.write(&text)?;
    Ok(())
}

pub fn run_lp(
    n: usize,
    m_flag: Option<u64>,
    a_flag: Option<&str>,
    m: usize,
    dual: bool,
    format: Format,
    sink: &Sink,
) -> Result<(), Failure> {
    if n > 14 {
        return Err(Error::size_guard(
            format!("exact LP solve at n = {n}"),
            "tableau entries up to C(n, n/2) digits".to_string(),
        )
        .into());
    }
    let (m_size, a) = resolve_density(n, m_flag, a_flag)?;
    if m == 0 || m > n {
        return Err(Failure::usage(format!("weight level m = {m} outside [1:{n}]")));
    }
    let table = KrawtchoukTable::new(n);
    let spec = match (m, dual) {
        (1, false) => build_avgdist_primal(&table, &a)?,
        (1, true) => build_avgdist_dual(&table, &a)?,
        (_, false) => build_weight_primal(&table, &a, m)?,
        (_, true) => build_weight_dual(&table, &a, m)?,
    };
    let sol = simplex_solve(&spec)?;
    if sol.status != SolveStatus::Optimal {
        return Err(Failure {
            code: 4,
            message: format!("LP unexpectedly {:?} at n = {n}, a = {a}", sol.status),
        });
    }
    let opt = sol.optimum.expect("optimal value");
    let point = sol.point.expect("optimal point");
    let problem = match (m, dual) {
        (1, false) => "Lambda (primal)".to_string(),
        (1, true) => "LambdaBar (dual)".to_string(),
        (_, false) => format!("Phi_{m} (primal)"),
        (_, true) => format!("PhiBar_{m} (dual)"),
    };
    // strong duality holds, so either optimum feeds the distance bound
    let bound = (m == 1)
        .then(|| rat(n as i64, 2) + half() - a.recip() / rat(2, 1) + &opt / rat(2, 1));
    let point_strings: Vec<String> = point.iter().map(rat_str).collect();
    let text = match format {
        Format::Json => {
            let mut v = json!({
                "n": n,
                "m_size": m_size,
                "a": rat_str(&a),
                "level": m,
                "dual": dual,
                "problem": problem,
                "optimum": rat_str(&opt),
                "point": point_strings,
                "pivots": sol.pivot_count,
            });
            if let Some(b) = &bound {
                v["distance_bound"] = Value::String(rat_str(b));
            }
            json_text(&v)
        }
        Format::Table => {
            let mut pairs = vec![
                ("n", n.to_string()),
                ("M", m_size.to_string()),
                ("a", rat_str(&a)),
                ("problem", problem),
                ("optimum", rat_str(&opt)),
                ("point", point_strings.join(" ")),
                ("pivots", sol.pivot_count.to_string()),
            ];
            if let Some(b) = &bound {
                pairs.push(("distance_bound", rat_str(b)));
            }
            render_pairs(&pairs)
        }
        Format::Csv => {
            return Err(Failure::usage("lp emits a single record; use table or json"))
        }
    };
    sink.write(&text)?;
    Ok(())
}

fn resolve_beta(s: &str, a: Option<&Rational>) -> Result<Rational, Failure> {
    if s == "star" {
        let a = a.ok_or_else(|| Failure::usage("--beta star needs --a"))?;
        match beta_star(a)? {
            BetaStar::Interior(v) => Rational::from_float(v.to_f64())
                .ok_or_else(|| Failure::usage("beta*(a) is not finite here")),
            BetaStar::Boundary => Err(Failure::usage(
                "beta* sits on the boundary for a >= 1/4; pass an explicit --beta",
            )),
        }
    } else {
        Ok(parse_rational(s)?)
    }
}

pub fn run_certificate(
    n: usize,
    beta_flag: Option<&str>,
    fwy: bool,
    m: usize,
    a_flag: Option<&str>,
    format: Format,
    sink: &Sink,
) -> Result<(), Failure> {
    if n > 512 {
        return Err(Error::size_guard(
            format!("certificate check at n = {n}"),
            "a full (n+1)^2 table of exact Krawtchouk values".to_string(),
        )
        .into());
    }
    let a = a_flag.map(parse_rational).transpose()?;
    let cert: DualCertificate = if fwy {
        if m == 0 || m > n {
            return Err(Failure::usage(format!("weight level m = {m} outside [1:{n}]")));
        }
        fwy_certificate(n, m)?
    } else {
        if m != 1 {
            return Err(Failure::usage(
                "--m only applies to --fwy; the two-degree certificate lives at weight 1",
            ));
        }
        let beta = resolve_beta(beta_flag.expect("clap guarantees --beta"), a.as_ref())?;
        improved_certificate(n, &beta)?
    };
    let table = KrawtchoukTable::new(n);
    let report = check_feasibility(&cert, &table)?;
    let objective = match &a {
        Some(a) => Some(dual_objective(&cert, &table, a)?),
        None => None,
    };
    // theta(a) is the n -> infinity target of the weight-1 objective
    let theta_val = match (&objective, &a) {
        (Some(_), Some(a)) if cert.m == 1 => Some(theta(a)?.to_f64()),
        _ => None,
    };
    let excess = match (&objective, theta_val) {
        (Some(obj), Some(t)) => Some(to_f64(obj) - t),
        _ => None,
    };
    let support: Vec<(usize, &Rational)> = (1..=n)
        .filter(|&j| !cert.x[j - 1].is_zero())
        .map(|j| (j, &cert.x[j - 1]))
        .collect();
    let text = match format {
        Format::Json => {
            let cert_value: Value =
                serde_json::from_str(&cert.to_json()).expect("certificate serialization");
            let mut v = json!({
                "certificate": cert_value,
                "feasible": report.feasible,
                "violations": serde_json::to_value(&report.violations).expect("violations"),
                "negative_entries": report.negative_entries,
            });
            if let Some(obj) = &objective {
                v["objective"] = Value::String(rat_str(obj));
            }
            if let Some(t) = theta_val {
                v["theta"] = Value::String(sig12(t));
            }
            if let Some(e) = excess {
                v["excess"] = Value::String(sig12(e));
            }
            json_text(&v)
        }
        Format::Table => {
            let mut pairs = vec![
                ("n", n.to_string()),
                ("m", cert.m.to_string()),
                (
                    "support",
                    support
                        .iter()
                        .map(|(j, x)| format!("x_{j} = {x}"))
                        .collect::<Vec<_>>()
                        .join(", "),
                ),
                ("feasible", report.feasible.to_string()),
                (
                    "violations",
                    if report.violations.is_empty() {
                        "none".to_string()
                    } else {
                        report
                            .violations
                            .iter()
                            .map(|v| format!("i = {} (slack {})", v.i, v.slack))
                            .collect::<Vec<_>>()
                            .join(", ")
                    },
                ),
            ];
            if let Some(obj) = &objective {
                pairs.push(("objective", rat_str(obj)));
            }
            if let Some(t) = theta_val {
                pairs.push(("theta", sig12(t)));
            }
            if let Some(e) = excess {
                pairs.push(("excess", sig12(e)));
            }
            render_pairs(&pairs)
        }
        Format::Csv => {
            return Err(Failure::usage("certificate emits a single record; use table or json"))
        }
    };
    sink.write(&text)?;
    Ok(())
}

fn within_upper(value: &Rational, bound: &BoundValue) -> bool {
    match bound {
        BoundValue::Exact(b) => value <= b,
        BoundValue::Approx(b) => to_f64(value) <= b + 1e-9,
    }
}

fn within_lower(value: &Rational, bound: &BoundValue) -> bool {
    match bound {
        BoundValue::Exact(b) => value >= b,
        BoundValue::Approx(b) => to_f64(value) >= b - 1e-9,
    }
}

pub fn run_oracle(
    n: Option<usize>,
    m_flag: Option<u64>,
    a_flag: Option<&str>,
    weights: Option<usize>,
    noise: Option<&str>,
    sweep: Option<usize>,
    sink: &Sink,
) -> Result<(), Failure> {
    if let Some(n_max) = sweep {
        let report = verify_duality_sweep(n_max)?;
        let mut text = report.to_json_lines();
        text.push('\n');
        sink.write(&text)?;
        return Ok(());
    }
    let n = n.ok_or_else(|| Failure::usage("--n is required"))?;
    let (m_size, a) = resolve_density(n, m_flag, a_flag)?;
    // complement trick: levels >= 1 and the shifted agreement probability
    // only see min(a, 1 - a)
    let (aa, shift) = if a <= half() {
        (a.clone(), Rational::zero())
    } else {
        (Rational::one() - &a, rat(2, 1) * &a - Rational::one())
    };

    if let Some(m) = weights {
        if m == 0 {
            return Err(Failure::usage("weight level m must be at least 1"));
        }
        let found = max_fourier_weight_exhaustive(n, m_size, m)?;
        let bound = if aa.is_zero() {
            BoundValue::Exact(Rational::zero())
        } else if m == 1 {
            w1_upper(&aa, W1Mode::Combined)?
        } else {
            BoundValue::Exact(wm_upper(&aa, m)?)
        };
        let ok = within_upper(&found.optimum, &bound);
        let record = json!({
            "kind": "weight",
            "n": n,
            "m_size": m_size,
            "a": rat_str(&a),
            "level": m,
            "optimum": rat_str(&found.optimum),
            "witness": found.witness.to_text(),
            "explored": found.explored,
            "upper_bound": cell(&bound),
            "within_bound": ok,
        });
        sink.write(&json_line(&record))?;
        if !ok {
            return Err(Failure {
                code: 4,
                message: format!("weight maximum exceeds its bound at n = {n}, M = {m_size}, m = {m}"),
            });
        }
        return Ok(());
    }

    if let Some(rho_text) = noise {
        let rho = parse_rational(rho_text)?;
        let extremes = noise_extremes_exhaustive(n, m_size, &rho)?;
        let bounds = noise_bounds(&aa, &rho)?;
        let lo_ok = within_lower(&(&extremes.min - &shift), &bounds.lower);
        let hi_ok = within_upper(&(&extremes.max - &shift), &bounds.upper);
        let record = json!({
            "kind": "noise",
            "n": n,
            "m_size": m_size,
            "a": rat_str(&a),
            "rho": rat_str(&rho),
            "min": rat_str(&extremes.min),
            "max": rat_str(&extremes.max),
            "min_witness": extremes.min_witness.to_text(),
            "max_witness": extremes.max_witness.to_text(),
            "explored": extremes.explored,
            "theta_minus": cell(&bounds.lower),
            "theta_plus": cell(&bounds.upper),
            "within_bounds": lo_ok && hi_ok,
        });
        sink.write(&json_line(&record))?;
        if !(lo_ok && hi_ok) {
            return Err(Failure {
                code: 4,
                message: format!("agreement extremes escape their bounds at n = {n}, M = {m_size}"),
            });
        }
        return Ok(());
    }

    let found = min_avg_distance_exhaustive(n, m_size)?;
    let closed_form = rat(n as i64, 2) - a.recip() / rat(4, 1);
    let lp_bound = if n >= 2 && a <= half() {
        Some(min_avgdist_lower_bound(n, &a, LowerBoundMode::Simplex)?)
    } else {
        None
    };
    let bound_ok = lp_bound.as_ref().map(|b| &found.optimum >= b);
    let witness: Vec<String> = found
        .witness
        .words()
        .iter()
        .map(|&w| found.witness.word_string(w))
        .collect();
    let mut record = json!({
        "kind": "distance",
        "n": n,
        "m_size": m_size,
        "a": rat_str(&a),
        "optimum": rat_str(&found.optimum),
        "witness": witness,
        "explored": found.explored,
        "symmetry_reduced": found.symmetry_reduced,
        "closed_form_bound": rat_str(&closed_form),
        "equality_closed_form": found.optimum == closed_form,
    });
    if let Some(b) = &lp_bound {
        record["lp_bound"] = Value::String(rat_str(b));
        record["lp_bound_ok"] = Value::Bool(bound_ok == Some(true));
    }
    sink.write(&json_line(&record))?;
    if bound_ok == Some(false) {
        return Err(Failure {
            code: 4,
            message: format!("exhaustive minimum undercuts the LP bound at n = {n}, M = {m_size}"),
        });
    }
    Ok(())
}
