use std::path::PathBuf;

use jensenlab::numeric::{rat_floor, Ball, Rat};
use jensenlab::poly::TaylorJet;
use jensenlab::roots::Status;
use jensenlab::specialfn::{xi_taylor_cached, JetCache, XiJetRequest};
use jensenlab::theorems::{
    bound_theorem1, bound_theorem1_ball, bound_theorem4, bound_theorem4_ball, quartic_cos_jet, scan_jensen_grid,
    scan_theorem2, strip_constants, verify_corollary_suite, verify_theorem3, verify_theorem4, Mode, ScanResult,
    SuiteReport, Theorem2Report, Theorem4Report, TrialConfig,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::settings::{RunConfig, Settings};
use crate::table::{ball_triple, opt, Table};
use crate::{CliError, Scan, Verify, EXIT_COUNTEREXAMPLE, EXIT_INDETERMINATE, EXIT_OK};

pub struct Output {
    pub table: Table,
    pub exit: u8,
    /// Human-readable lines for stderr.
    pub diagnostics: Vec<String>,
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("jensenlab"))
}

fn xi_jet(cfg: &RunConfig, order: usize, diag: &mut Vec<String>) -> Result<TaylorJet<Ball>, CliError> {
    let req = XiJetRequest::new(order, cfg.precision_bits, cfg.method);
    let cache = cfg.cache_dir.clone().or_else(default_cache_dir).map(JetCache::new);
    let (jet, hit) = xi_taylor_cached(&req, cache.as_ref())?;
    if let Some(c) = &cache {
        diag.push(format!("cache {}: {}", if hit { "hit" } else { "miss" }, c.path_for(&req).display()));
    }
    Ok(jet)
}

pub fn xi_coeffs(cfg: &RunConfig) -> Result<Output, CliError> {
    let mut diagnostics = Vec::new();
    let order = cfg.order_or(8);
    let jet = xi_jet(cfg, order, &mut diagnostics)?;
    let mut t = Table::new("xi-jet/1", &["k", "mid", "rad", "method", "prec"]);
    t.comment(format!("Xi^(k)(0) enclosures, k = 0..{order}"));
    for (k, v) in jet.values().iter().enumerate() {
        let [m, r, p] = ball_triple(v);
        t.push(vec![k.to_string(), m, r, cfg.method.to_string(), p]);
    }
    Ok(Output { table: t, exit: EXIT_OK, diagnostics })
}

fn mode(s: &Settings) -> Result<Mode, CliError> {
    match s.raw("mode").unwrap_or("exact") {
        "exact" => Ok(Mode::Exact),
        "ball" => Ok(Mode::Ball),
        m => Err(usage(format!("--mode `{m}`: expected exact or ball"))),
    }
}

fn trial_config(cfg: &RunConfig, s: &Settings) -> Result<TrialConfig, CliError> {
    let delta_sq = s.delta_sq("0.5")?;
    let cap = rat_floor(&(Rat::from_integer(1.into()) / &delta_sq)).to_usize().unwrap_or(usize::MAX);
    Ok(TrialConfig {
        seed: cfg.seed,
        trials: s.get("trials", 100usize)?,
        deg_p: s.range("deg", (1, 6))?,
        deg_q: s.range("deg-q", (1, cap.clamp(1, 4)))?,
        delta_sq,
        prec: cfg.precision_bits,
        mode: mode(s)?,
    })
}

fn verdict_line(name: &str, counterexamples: usize, indeterminate: usize, trials: usize) -> (u8, String) {
    let (code, word) = if counterexamples > 0 {
        (EXIT_COUNTEREXAMPLE, "FAIL")
    } else if indeterminate > 0 {
        (EXIT_INDETERMINATE, "INDETERMINATE")
    } else {
        (EXIT_OK, "PASS")
    };
    (code, format!("{name}: {word} ({trials} trials, {counterexamples} counterexamples, {indeterminate} indeterminate)"))
}

fn kv(t: &mut Table, k: &str, v: impl ToString) {
    t.push(vec![k.to_string(), v.to_string()]);
}

fn suite_output(r: &SuiteReport) -> Output {
    let mut t = Table::new("verify-suite/1", &["field", "value"]);
    let (exit, line) = verdict_line(&r.suite, r.counterexamples.len(), r.indeterminate, r.trials);
    kv(&mut t, "suite", &r.suite);
    kv(&mut t, "status", line.split_whitespace().nth(1).unwrap_or(""));
    kv(&mut t, "seed", r.seed);
    kv(&mut t, "trials", r.trials);
    kv(&mut t, "passed", r.passed);
    kv(&mut t, "vacuous", r.vacuous);
    kv(&mut t, "indeterminate", r.indeterminate);
    kv(&mut t, "counterexamples", r.counterexamples.len());
    for n in &r.notes {
        t.comment(n.clone());
    }
    let mut diagnostics = vec![line];
    for (i, c) in r.counterexamples.iter().enumerate() {
        kv(&mut t, &format!("counterexample.{i}.trial"), c.trial);
        kv(&mut t, &format!("counterexample.{i}.detail"), &c.detail);
        kv(&mut t, &format!("counterexample.{i}.p"), c.p.join(" "));
        kv(&mut t, &format!("counterexample.{i}.q"), c.q.join(" "));
        diagnostics.push(format!("  trial {}: {}; P = [{}] Q = [{}]", c.trial, c.detail, c.p.join(", "), c.q.join(", ")));
    }
    Output { table: t, exit, diagnostics }
}

fn theorem4_output(r: &Theorem4Report) -> Output {
    let mut t = Table::new("verify-t4/1", &["field", "value"]);
    let undecided = r.jensen_indeterminate + r.containment_indeterminate + r.gauss_lucas_indeterminate;
    let (exit, line) = verdict_line("theorem4", r.counterexamples.len(), undecided, r.trials);
    kv(&mut t, "status", line.split_whitespace().nth(1).unwrap_or(""));
    kv(&mut t, "T", &r.t);
    kv(&mut t, "seed", r.seed);
    kv(&mut t, "trials", r.trials);
    kv(&mut t, "d_max", r.d_max);
    kv(&mut t, "delta_sq", &r.delta_sq);
    kv(&mut t, "delta_tilde", &r.delta_tilde);
    kv(&mut t, "jensen_checked", r.jensen_checked);
    kv(&mut t, "jensen_hyperbolic", r.jensen_hyperbolic);
    kv(&mut t, "jensen_vacuous", r.jensen_vacuous);
    kv(&mut t, "jensen_indeterminate", r.jensen_indeterminate);
    kv(&mut t, "identities_checked", r.identities_checked);
    kv(&mut t, "identities_exact", r.identities_exact);
    kv(&mut t, "containment_checked", r.containment_checked);
    kv(&mut t, "containment_yes", r.containment_yes);
    kv(&mut t, "containment_indeterminate", r.containment_indeterminate);
    kv(&mut t, "gauss_lucas_pass", r.gauss_lucas_pass);
    kv(&mut t, "gauss_lucas_indeterminate", r.gauss_lucas_indeterminate);
    kv(&mut t, "counterexamples", r.counterexamples.len());
    t.comment("jensen_vacuous counts identically zero Jensen polynomials");
    let mut diagnostics = vec![line];
    for (i, c) in r.counterexamples.iter().enumerate() {
        kv(&mut t, &format!("counterexample.{i}.trial"), c.trial);
        kv(&mut t, &format!("counterexample.{i}.detail"), &c.detail);
        kv(&mut t, &format!("counterexample.{i}.p"), c.p.join(" "));
        diagnostics.push(format!("  trial {}: {}; f = [{}]", c.trial, c.detail, c.p.join(", ")));
    }
    Output { table: t, exit, diagnostics }
}

fn approx(v: &BigInt) -> String {
    v.to_f64().map(|f| format!("{f:e}")).unwrap_or_default()
}

pub fn verify(which: Verify, cfg: &RunConfig, s: &Settings) -> Result<Output, CliError> {
    match which {
        Verify::T3 => Ok(suite_output(&verify_theorem3(&trial_config(cfg, s)?)?)),
        Verify::Corollary => Ok(suite_output(&verify_corollary_suite(&trial_config(cfg, s)?)?)),
        Verify::T4 => {
            let t = s.rat("T", "1")?;
            let mut tc = trial_config(cfg, s)?;
            tc.trials = s.get("trials", 25usize)?;
            Ok(theorem4_output(&verify_theorem4(&tc, &t)?))
        }
        Verify::Bounds => bounds(cfg, s),
    }
}

fn bounds(cfg: &RunConfig, s: &Settings) -> Result<Output, CliError> {
    let prec = cfg.precision_bits;
    let mut t = Table::new("verify-bounds/1", &["quantity", "exact", "ball_route", "approx"]);
    let mut mismatches = Vec::new();
    let want_strip = s.has("T") || !s.has("c");
    if want_strip {
        let tv = s.rat("T", "1/2")?;
        let (a, b) = bound_theorem4(&tv)?;
        let tb = Ball::from_rat(&tv, prec.max(64 + 2 * tv.numer().bits() as u32));
        let (ab, bb) = bound_theorem4_ball(&tb)?;
        t.push(vec!["strip_degree_bound".into(), a.to_string(), ab.to_string(), approx(&a)]);
        t.push(vec!["half_form_degree_bound".into(), b.to_string(), bb.to_string(), approx(&b)]);
        if a != ab {
            mismatches.push("strip_degree_bound");
        }
        if b != bb {
            mismatches.push("half_form_degree_bound");
        }
        let c = strip_constants(&tv, prec)?;
        let [dm, dr, _] = ball_triple(&c.delta);
        t.push(vec!["delta".into(), format!("sqrt({})", c.delta_sq), format!("{dm} +/- {dr}"), format!("{:e}", c.delta.to_f64())]);
        t.push(vec!["delta_sq".into(), c.delta_sq.to_string(), String::new(), String::new()]);
        let [tm, tr, _] = ball_triple(&c.delta_tilde_ball);
        t.push(vec![
            "delta_tilde".into(),
            c.delta_tilde.to_string(),
            format!("{tm} +/- {tr}"),
            format!("{:e}", c.delta_tilde_ball.to_f64()),
        ]);
        if !c.delta_tilde_ball.contains_rat(&c.delta_tilde) {
            mismatches.push("delta_tilde");
        }
        t.comment(format!("T = {tv}"));
    }
    if s.has("c") {
        let c = s.rat("c", "1")?;
        let n1 = s.get("n1", 0u64)?;
        let (d0, d1) = s.range("d", (1, 1))?;
        for d in d0..=d1 {
            let exact = bound_theorem1(&c, n1, d as u64)?;
            let ball = bound_theorem1_ball(&Ball::from_rat(&c, prec), n1, d as u64, prec)?;
            // the ball route may land one above an exact integer threshold
            if ball != exact && ball != &exact + 1u32 {
                mismatches.push("degree_threshold");
            }
            t.push(vec![format!("degree_threshold(d={d})"), exact.to_string(), ball.to_string(), approx(&exact)]);
        }
        t.comment(format!("c = {c}, n1 = {n1}"));
    }
    let (exit, status) = if mismatches.is_empty() {
        (EXIT_OK, "bounds: PASS (exact and ball routes agree)".to_string())
    } else {
        (EXIT_COUNTEREXAMPLE, format!("bounds: FAIL (routes disagree on {})", mismatches.join(", ")))
    };
    Ok(Output { table: t, exit, diagnostics: vec![status] })
}

enum Jet {
    Exact(TaylorJet<Rat>),
    Ball(TaylorJet<Ball>),
}

fn load_jet(source: &str, needed: usize, cfg: &RunConfig, diag: &mut Vec<String>) -> Result<Jet, CliError> {
    let m = cfg.order_or(needed);
    Ok(match source {
        "exp" => Jet::Exact(TaylorJet::exp(m)),
        "cos" => Jet::Exact(TaylorJet::cos(m)),
        "quartic-cos" => Jet::Exact(quartic_cos_jet(m)),
        "xi" => Jet::Ball(xi_jet(cfg, m, diag)?),
        "xi0" => {
            let m2 = if cfg.jet_order == 0 { 2 * needed } else { cfg.jet_order };
            Jet::Ball(xi_jet(cfg, m2, diag)?.half_form()?)
        }
        other => return Err(usage(format!("--source `{other}`: expected xi0, xi, exp, cos or quartic-cos"))),
    })
}

pub fn scan(which: Scan, cfg: &RunConfig, s: &Settings) -> Result<Output, CliError> {
    match which {
        Scan::Grid => grid(cfg, s),
        Scan::Theorem2 => theorem2(cfg, s),
    }
}

fn grid(cfg: &RunConfig, s: &Settings) -> Result<Output, CliError> {
    let d = s.range("d", (1, 30))?;
    let n = s.range("n", (0, 10))?;
    let source = s.raw("source").unwrap_or("xi0");
    let mut diagnostics = Vec::new();
    let jet = load_jet(source, n.1 + d.1, cfg, &mut diagnostics)?;
    let r = match (jet, mode(s)?) {
        (Jet::Exact(j), Mode::Exact) => scan_jensen_grid(&j, source, d, n)?,
        (Jet::Exact(j), Mode::Ball) => scan_jensen_grid(&j.to_ball(cfg.precision_bits), source, d, n)?,
        (Jet::Ball(j), _) => scan_jensen_grid(&j, source, d, n)?,
    };
    Ok(grid_output(&r, diagnostics))
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Hyperbolic => "hyperbolic",
        Status::NotHyperbolic => "not_hyperbolic",
        Status::Indeterminate => "indeterminate",
    }
}

fn grid_output(r: &ScanResult, mut diagnostics: Vec<String>) -> Output {
    let mut t = Table::new("jensen-grid/1", &["n", "d", "status", "witness_re", "witness_im", "margin"]);
    t.comment(format!("source = {}", r.label));
    t.comment(format!("caveat: {}", r.caveat));
    let first: Vec<String> =
        r.first_all_hyperbolic_n.iter().map(|(d, n)| format!("{d}:{}", n.map_or("-".into(), |v| v.to_string()))).collect();
    t.comment(format!("first_all_hyperbolic_n (d:n, empirical) = {}", first.join(" ")));
    for c in &r.cells {
        let (wr, wi) = c.witness.map_or((String::new(), String::new()), |(a, b)| (format!("{a:e}"), format!("{b:e}")));
        t.push(vec![c.n.to_string(), c.d.to_string(), status_str(c.status).into(), wr, wi, opt(&c.margin.map(|m| format!("{m:e}")))]);
    }
    let (h, nh, ind) =
        (r.count(Status::Hyperbolic), r.count(Status::NotHyperbolic), r.count(Status::Indeterminate));
    diagnostics.push(format!("grid: {h} hyperbolic, {nh} not hyperbolic, {ind} indeterminate"));
    diagnostics.push(format!("note: {}", r.caveat));
    Output { table: t, exit: if ind > 0 { EXIT_INDETERMINATE } else { EXIT_OK }, diagnostics }
}

fn theorem2(cfg: &RunConfig, s: &Settings) -> Result<Output, CliError> {
    let n = s.range("n", (0, 20))?;
    let c = s.rat("c", "3/2")?;
    let radius = s.rat("radius", "10")?;
    let trunc = s.get("trunc", 70usize)?;
    let source = s.raw("source").unwrap_or("quartic-cos");
    let mut diagnostics = Vec::new();
    let r = match load_jet(source, trunc + n.1, cfg, &mut diagnostics)? {
        Jet::Exact(j) => scan_theorem2(&j, &c, n, &radius, trunc, cfg.precision_bits)?,
        Jet::Ball(j) => scan_theorem2(&j, &c, n, &radius, trunc, cfg.precision_bits)?,
    };
    Ok(theorem2_output(&r, diagnostics))
}

fn theorem2_output(r: &Theorem2Report, mut diagnostics: Vec<String>) -> Output {
    let mut t = Table::new(
        "theorem2-scan/1",
        &[
            "n",
            "threshold",
            "certified_radius",
            "tail_bound",
            "roots_inside",
            "nonreal_inside",
            "violations",
            "undecided",
            "contained",
        ],
    );
    t.comment(format!("source = {}, c = {}, radius = {}, trunc = {}", r.label, r.c, r.radius, r.trunc));
    t.comment("zeros are those of the Taylor truncation inside the certified disk");
    t.comment(format!("caveat: {}", r.caveat));
    t.comment(format!("empirical_n1 = {}", r.empirical_n1.map_or("none".into(), |v| v.to_string())));
    let mut undecided = 0;
    for row in &r.rows {
        if row.contained.is_none() {
            undecided += 1;
        }
        t.push(vec![
            row.n.to_string(),
            format!("{:.6}", row.threshold),
            opt(&row.certified_radius),
            opt(&row.tail_bound.map(|v| format!("{v:e}"))),
            row.roots_inside.to_string(),
            row.nonreal_inside.to_string(),
            row.violations.to_string(),
            row.undecided.to_string(),
            opt(&row.contained),
        ]);
    }
    diagnostics.push(format!(
        "theorem2 scan: empirical n1 = {}, {undecided} undecided rows",
        r.empirical_n1.map_or("none".into(), |v| v.to_string())
    ));
    diagnostics.push(format!("note: {}", r.caveat));
    Output { table: t, exit: if undecided > 0 { EXIT_INDETERMINATE } else { EXIT_OK }, diagnostics }
}
