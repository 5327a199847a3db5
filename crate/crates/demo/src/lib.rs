//! WebAssembly bindings for the browser demo. Each entry point takes plain
//! strings from form fields and returns a JSON document; failures come back
//! as `{"error": "..."}`.

use jensenlab::numeric::{rat, Ball, CBall, Dyadic, Rat};
use jensenlab::poly::Poly;
use jensenlab::roots::{all_roots, disk_membership, sector_square_member, sector_square_member_exact, RegionSpec};
use jensenlab::theorems::{bound_theorem1, bound_theorem4, strip_constants, verify_corollary};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

const PREC: u32 = 128;

fn num(s: &str) -> Result<Rat, String> {
    Dyadic::parse_rat(s).ok_or_else(|| format!("`{s}` is not a number"))
}

/// `δ^2` from `δ` written as a number or as `sqrt(r)`.
fn delta_sq(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let d2 = match s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        Some(inner) => num(inner)?,
        None => {
            let d = num(s)?;
            &d * &d
        }
    };
    if d2 <= rat(0, 1) || d2 > rat(1, 1) {
        return Err("delta must lie in (0, 1]".into());
    }
    Ok(d2)
}

fn coeffs(s: &str) -> Result<Poly<Rat>, String> {
    let c = s
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(num)
        .collect::<Result<Vec<_>, _>>()?;
    if c.is_empty() {
        return Err("no coefficients".into());
    }
    Ok(Poly::new(c))
}

fn zeros(p: &Poly<Rat>, region: Option<&RegionSpec>) -> Result<Vec<Value>, String> {
    if p.is_zero() || p.degree().map_err(|e| e.to_string())? == 0 {
        return Ok(vec![]);
    }
    let rs = all_roots(p, PREC).map_err(|e| e.to_string())?;
    Ok(rs
        .disks
        .iter()
        .map(|d| {
            let (re, im) = d.center(rs.prec).to_f64_pair();
            let mut v = json!({ "re": re, "im": im, "radius": d.radius.to_f64(), "multiplicity": d.multiplicity });
            if let Some(r) = region {
                v["in_region"] = json!(disk_membership(d, r, rs.prec));
            }
            v
        })
        .collect())
}

/// `J(P; d)`, its zeros, and whether the sector hypotheses on `P` hold.
pub fn jensen_report(p: &str, d: usize, delta: &str) -> Result<Value, String> {
    let p = coeffs(p)?;
    if d > 64 {
        return Err("d is capped at 64 in the demo".into());
    }
    let d2 = delta_sq(delta)?;
    let r = verify_corollary(&p, d, Some(&d2), PREC).map_err(|e| e.to_string())?;
    let sector = RegionSpec::Sector(Ball::from_rat(&d2, PREC).sqrt().map_err(|e| e.to_string())?);
    let j = p.jet_to(d).jensen(0, d).map_err(|e| e.to_string())?;
    Ok(json!({
        "d": d,
        "delta_sq": d2.to_string(),
        "jensen": r.jensen,
        "identity": r.identity,
        "zeros_in_sector": r.in_sector,
        "within_degree_bound": r.within_degree_bound,
        "hypotheses_hold": r.hypotheses_hold(),
        "verdict": r.verdict,
        "p_zeros": zeros(&p, Some(&sector))?,
        "j_zeros": zeros(&j, None)?,
    }))
}

/// Strip-to-sector constants and degree bounds. Empty strings skip a part.
pub fn bounds_report(t: &str, c: &str, n1: u64, d: u64) -> Result<Value, String> {
    let mut out = json!({});
    if !t.trim().is_empty() {
        let tv = num(t)?;
        let (a, b) = bound_theorem4(&tv).map_err(|e| e.to_string())?;
        let k = strip_constants(&tv, PREC).map_err(|e| e.to_string())?;
        out["strip"] = json!({
            "T": tv.to_string(),
            "degree_bound": a.to_string(),
            "half_form_degree_bound": b.to_string(),
            "delta_sq": k.delta_sq.to_string(),
            "delta": k.delta.to_f64(),
            "delta_tilde": k.delta_tilde.to_string(),
        });
    }
    if !c.trim().is_empty() {
        let cv = num(c)?;
        let m = bound_theorem1(&cv, n1, d).map_err(|e| e.to_string())?;
        out["degree_threshold"] = json!({ "c": cv.to_string(), "n1": n1, "d": d, "value": m.to_string() });
    }
    Ok(out)
}

/// `z ∈ S(δ)` against `z^2` in the right half-sector, exactly and in balls.
pub fn square_report(x: &str, y: &str, delta: &str) -> Result<Value, String> {
    let (x, y) = (num(x)?, num(y)?);
    let d2 = delta_sq(delta)?;
    if d2 > rat(1, 2) {
        return Err("the squaring check needs delta <= 2^(-1/2)".into());
    }
    let exact = sector_square_member_exact(&x, &y, &d2).map_err(|e| e.to_string())?;
    let delta_b = Ball::from_rat(&d2, PREC).sqrt().map_err(|e| e.to_string())?;
    let ball = sector_square_member(&CBall::from_rats(&x, &y, PREC), &delta_b).map_err(|e| e.to_string())?;
    let sq = (&x * &x - &y * &y, rat(2, 1) * &x * &y);
    Ok(json!({
        "z": [x.to_string(), y.to_string()],
        "z_squared": [sq.0.to_string(), sq.1.to_string()],
        "exact": exact,
        "ball": ball,
    }))
}

fn render(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

#[wasm_bindgen]
pub fn jensen(p: &str, d: usize, delta: &str) -> String {
    render(jensen_report(p, d, delta))
}

#[wasm_bindgen]
pub fn bounds(t: &str, c: &str, n1: u32, d: u32) -> String {
    render(bounds_report(t, c, n1 as u64, d as u64))
}

#[wasm_bindgen]
pub fn sector_square(x: &str, y: &str, delta: &str) -> String {
    render(square_report(x, y, delta))
}
