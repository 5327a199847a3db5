//! End-to-end acceptance run: one timed PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use jensenlab::numeric::{rat, Ball, Rat};
use jensenlab::poly::Poly;
use jensenlab::roots::Status;
use jensenlab::specialfn::{intersect_jets, xi_at_zero_direct, xi_taylor, XiJetRequest, XiMethod};
use jensenlab::theorems::{
    scan_jensen_grid, strip_constants, verify_corollary, verify_corollary_suite, verify_gauss_lucas,
    verify_sector_squaring, verify_theorem3, verify_theorem4, Mode, TrialConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_jensenlab"));
    c.env_remove("JENSENLAB_CACHE");
    c
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Column `col` of the CSV row whose first field is `key`.
fn csv_field(text: &str, key: &str, col: usize) -> Option<String> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f[0] == key)
        .and_then(|f| f.get(col).map(|s| s.to_string()))
}

fn published_constants() -> Check {
    let out = bin().args(["verify", "bounds", "--T", "3e12"]).output().map_err(err)?;
    ensure(out.status.code() == Some(0), format!("exit {:?}", out.status.code()))?;
    let text = String::from_utf8(out.stdout).map_err(err)?;
    let strip = csv_field(&text, "strip_degree_bound", 1).ok_or("strip bound row missing")?;
    let half = csv_field(&text, "half_form_degree_bound", 1).ok_or("half-form bound row missing")?;
    ensure(strip == "36000000000000000000000001", format!("1+4T^2 = {strip}"))?;
    let half_v: num_bigint::BigInt = half.parse().map_err(err)?;
    let nine_e24: num_bigint::BigInt = "9000000000000000000000000".parse().unwrap();
    ensure(half_v >= nine_e24, format!("floor(T^2(1+T^-2/4)^2) = {half}"))?;
    Ok(format!("1+4T^2 = {strip}, half-form bound = {half}"))
}

fn proof_constants() -> Check {
    let c = strip_constants(&rat(1, 2), 256).map_err(err)?;
    ensure(c.delta_sq == rat(1, 2), format!("delta^2 = {}", c.delta_sq))?;
    ensure(c.delta_tilde == rat(1, 1), format!("delta_tilde = {}", c.delta_tilde))?;
    ensure(c.delta_tilde_ball.contains_rat(&rat(1, 1)), "square-root form of delta_tilde excludes 1")?;
    // 2^(-1/2) squared must enclose 1/2, and the ball must be tight
    ensure(c.delta.sqr().contains_rat(&rat(1, 2)), "delta^2 ball excludes 1/2")?;
    ensure(c.delta.rad().to_f64() < 1e-70, "delta ball too wide")?;
    Ok(format!("delta^2 = 1/2 exactly, delta = {:.22}, delta_tilde = 1", c.delta))
}

fn corollary_identity() -> Check {
    let cfg = TrialConfig { seed: 2024, trials: 1000, deg_p: (1, 8), ..Default::default() };
    let suite = verify_corollary_suite(&cfg).map_err(err)?;
    ensure(suite.counterexamples.is_empty(), format!("{} sector-polynomial failures", suite.counterexamples.len()))?;
    // unrestricted random coefficients, including d below deg P
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut failures = 0;
    for _ in 0..1000 {
        let deg = rng.gen_range(0..=8);
        let coeffs: Vec<Rat> = (0..=deg).map(|_| rat(rng.gen_range(-50..=50), rng.gen_range(1..=9))).collect();
        let p = Poly::new(coeffs);
        let d = p.formal_degree() + rng.gen_range(0..=5);
        if !verify_corollary(&p, d, None, 128).map_err(err)?.identity {
            failures += 1;
        }
    }
    ensure(failures == 0, format!("{failures} identity failures on general polynomials"))?;
    Ok("2000 pairs, 0 failures".into())
}

fn theorem3_suite() -> Check {
    let cfg = TrialConfig { seed: 7, trials: 1000, delta_sq: rat(1, 4), deg_q: (1, 4), mode: Mode::Exact, ..Default::default() };
    let r = verify_theorem3(&cfg).map_err(err)?;
    ensure(r.counterexamples.is_empty(), format!("{} counterexamples: {:?}", r.counterexamples.len(), r.counterexamples.first()))?;
    ensure(r.indeterminate == 0, format!("{} indeterminate", r.indeterminate))?;
    Ok(format!("{} trials hyperbolic ({} zero compositions)", r.passed, r.vacuous))
}

fn sector_squaring() -> Check {
    let ds = [rat(1, 100), rat(1, 4), rat(1, 2)];
    let r = verify_sector_squaring(11, 10_000, &ds, 128).map_err(err)?;
    ensure(r.counterexamples.is_empty(), format!("{} disagreements: {:?}", r.counterexamples.len(), r.counterexamples.first()))?;
    Ok(format!("{} samples, 0 disagreements, {} undecided in ball mode", r.trials, r.indeterminate))
}

fn gauss_lucas() -> Check {
    let cfg = TrialConfig { seed: 3, trials: 1000, deg_p: (2, 10), ..Default::default() };
    let r = verify_gauss_lucas(&cfg).map_err(err)?;
    ensure(r.is_clean(), format!("{} failures, {} indeterminate", r.counterexamples.len(), r.indeterminate))?;
    Ok(format!("{} polynomials pass", r.passed))
}

fn theorem4_mechanism() -> Check {
    let mut parts = Vec::new();
    for t in [rat(1, 2), rat(1, 1), rat(5, 1)] {
        let cfg = TrialConfig { seed: 41, trials: 100, deg_p: (1, 6), ..Default::default() };
        let r = verify_theorem4(&cfg, &t).map_err(err)?;
        ensure(r.is_clean(), format!("T = {t}: {r:?}"))?;
        parts.push(format!(
            "T={t}: {} Jensen hyperbolic ({} identically zero), {} identities, {} containments",
            r.jensen_hyperbolic, r.jensen_vacuous, r.identities_exact, r.containment_yes
        ));
    }
    Ok(parts.join("; "))
}

fn xi_cross_validation() -> Check {
    let prec = 200;
    let a = xi_taylor(&XiJetRequest::new(40, prec, XiMethod::PhiMoments)).map_err(err)?;
    let b = xi_taylor(&XiJetRequest::new(40, prec, XiMethod::DirectFactors)).map_err(err)?;
    let both = intersect_jets(a.values(), b.values()).map_err(err)?;
    for (k, v) in both.iter().enumerate() {
        if k % 2 == 0 {
            // at least 50 significant digits survive the intersection
            let rel = v.rad().to_f64() / v.to_f64().abs();
            ensure(rel <= 1e-50, format!("order {k}: relative radius {rel:e}"))?;
        }
    }
    let direct = xi_at_zero_direct(prec).map_err(err)?;
    let x0 = &both[0];
    ensure(x0.overlaps(&direct), "Xi(0) misses the direct formula")?;
    ensure(x0.rad().to_f64() <= 1e-40, format!("Xi(0) radius {:e}", x0.rad().to_f64()))?;
    let anchor = Ball::parse("0.4971207782", 64).unwrap();
    ensure((x0 - &anchor).abs().upper().to_f64() < 1e-10, "Xi(0) far from 0.4971207782")?;
    Ok(format!("orders 0..40 intersect, Xi(0) = {:.30}", x0))
}

fn xi0_grid() -> Check {
    let jet = xi_taylor(&XiJetRequest::new(80, 256, XiMethod::Both)).map_err(err)?;
    let half = jet.half_form().map_err(err)?;
    let r = scan_jensen_grid(&half, "xi0", (1, 30), (0, 10)).map_err(err)?;
    let bad: Vec<_> = r.cells.iter().filter(|c| c.status != Status::Hyperbolic).map(|c| (c.n, c.d, c.status)).collect();
    ensure(bad.is_empty(), format!("{} cells not certified: {:?}", bad.len(), &bad[..bad.len().min(5)]))?;
    Ok(format!("{} cells hyperbolic", r.cells.len()))
}

fn theorem2_scan() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    let path = dir.path().join("t2.csv");
    let out = bin()
        .args(["scan", "theorem2", "--c", "1.5", "--n", "0..20", "--radius", "10", "--trunc", "70"])
        .args(["--out", path.to_str().unwrap()])
        .output()
        .map_err(err)?;
    ensure(out.status.code() == Some(0), format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    let text = std::fs::read_to_string(&path).map_err(err)?;
    ensure(text.lines().any(|l| l.starts_with("# caveat: empirical")), "caveat line missing")?;
    let n1_line = text.lines().find(|l| l.starts_with("# empirical_n1 = ")).ok_or("empirical n1 missing")?;
    let n1: usize = n1_line.trim_start_matches("# empirical_n1 = ").parse().map_err(|_| format!("no empirical n: {n1_line}"))?;
    let mut rows = 0;
    for l in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let f: Vec<&str> = l.split(',').collect();
        let n: usize = f[0].parse().map_err(err)?;
        if n >= n1 {
            ensure(f[8] == "true" && f[6] == "0", format!("row {n} not contained: {l}"))?;
        }
        rows += 1;
    }
    ensure(rows == 21, format!("{rows} rows"))?;
    Ok(format!("empirical n1 = {n1} over n = 0..20 (truncation roots, caveat present)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 published constants", Duration::from_secs(1), published_constants),
        ("2 proof constants", Duration::from_secs(1), proof_constants),
        ("3 corollary identity", Duration::from_secs(30), corollary_identity),
        ("4 composition suite", Duration::from_secs(300), theorem3_suite),
        ("5 sector squaring", Duration::from_secs(60), sector_squaring),
        ("6 Gauss-Lucas suite", Duration::from_secs(120), gauss_lucas),
        ("7 even strip mechanism", Duration::from_secs(300), theorem4_mechanism),
        ("8 Xi jet cross-validation", Duration::from_secs(600), xi_cross_validation),
        ("9 Xi0 Jensen grid", Duration::from_secs(900), xi0_grid),
        ("10 derivative-zero scan", Duration::from_secs(600), theorem2_scan),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, budget, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget {budget:?}")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "{} [{name}] {:.2}s / {}s: {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
