//! On-disk cache for Ξ jets.
//!
//! Plain text, one ball per line as `k sign mantissa_hex exponent rad_man
//! rad_exp prec`, so values round-trip bit-exactly. Files are written to a
//! temporary name and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{Num, Signed, Zero};

use super::xi::{xi_decay_bound, xi_taylor, XiJetRequest};
use crate::numeric::{Ball, Dyadic, Mag};
use crate::poly::{Parity, TaylorJet};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
/// Bumped whenever a change can alter computed enclosures.
pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "-xi1");

#[derive(Clone, Debug)]
pub struct JetCache {
    dir: PathBuf,
}

fn quad_tag(req: &XiJetRequest) -> String {
    match &req.quadrature.u_max {
        Some(u) => format!("{}u{}_{}", req.quadrature.pieces_per_unit, u.numer(), u.denom()),
        None => format!("{}auto", req.quadrature.pieces_per_unit),
    }
}

fn header(req: &XiJetRequest) -> Vec<String> {
    vec![
        "# jensenlab xi jet".to_string(),
        format!("format {FORMAT_VERSION}"),
        format!("order {}", req.order),
        format!("prec {}", req.prec),
        format!("method {}", req.method),
        format!("quadrature {}", quad_tag(req)),
        format!("code_version {CODE_VERSION}"),
        format!("values {}", req.order + 1),
    ]
}

fn encode(k: usize, b: &Ball) -> String {
    let m = b.mid().mantissa();
    let sign = if m.is_zero() {
        "0"
    } else if m.is_negative() {
        "-"
    } else {
        "+"
    };
    let (rm, re) = b.rad().raw();
    format!("{k} {sign} {} {} {rm} {re} {}", m.abs().to_str_radix(16), b.mid().exponent(), b.prec())
}

fn decode(line: &str, k: usize) -> Option<Ball> {
    let f: Vec<&str> = line.split(' ').collect();
    if f.len() != 7 || f[0].parse::<usize>().ok()? != k {
        return None;
    }
    let mag = BigInt::from_str_radix(f[2], 16).ok()?;
    let man = match f[1] {
        "+" => mag,
        "-" => -mag,
        "0" if mag.is_zero() => mag,
        _ => return None,
    };
    let mid = Dyadic::new(man, f[3].parse().ok()?);
    let rad = Mag::from_raw(f[4].parse().ok()?, f[5].parse().ok()?);
    Some(Ball::exact(mid, f[6].parse().ok()?).add_error(rad))
}

/// Radii must certify the sign of every even entry with at least half the
/// requested precision; odd entries must be exact zeros.
fn radii_plausible(values: &[Ball], prec: u32) -> bool {
    let rel = Mag::pow2(-(prec as i64) / 2);
    values.iter().enumerate().all(|(k, v)| {
        if k % 2 == 1 {
            v.is_exact_zero()
        } else {
            !v.contains_zero() && v.rad() <= v.mag_lower().mul(&rel)
        }
    })
}

impl JetCache {
    pub fn new(dir: impl Into<PathBuf>) -> JetCache {
        JetCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, req: &XiJetRequest) -> PathBuf {
        self.dir.join(format!(
            "xi-M{}-p{}-{}-q{}-v{}.jet",
            req.order,
            req.prec,
            req.method,
            quad_tag(req),
            CODE_VERSION
        ))
    }

    /// Cached jet for `req`, `None` on a miss. A file that exists but does
    /// not match the request or fails validation is an error.
    pub fn load(&self, req: &XiJetRequest) -> Result<Option<TaylorJet<Ball>>> {
        let path = self.path_for(req);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let bad = |why: &str| Error::Cache(format!("{}: {why}", path.display()));
        let mut lines = text.lines();
        for want in header(req) {
            if lines.next() != Some(want.as_str()) {
                return Err(bad(&format!("header mismatch, expected `{want}`")));
            }
        }
        let mut values = Vec::with_capacity(req.order + 1);
        for k in 0..=req.order {
            let line = lines.next().ok_or_else(|| bad("truncated"))?;
            values.push(decode(line, k).ok_or_else(|| bad(&format!("malformed row {k}")))?);
        }
        if lines.next() != Some("end") || lines.next().is_some() {
            return Err(bad("missing end marker"));
        }
        if !radii_plausible(&values, req.prec) {
            return Err(bad("stored radii fail validation"));
        }
        let jet = TaylorJet::new(values, Parity::Even, "Xi")?.with_order_hint(1.0).with_decay(xi_decay_bound());
        Ok(Some(jet))
    }

    pub fn store(&self, req: &XiJetRequest, jet: &TaylorJet<Ball>) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(req);
        let mut body = header(req).join("\n");
        body.push('\n');
        for (k, v) in jet.values().iter().enumerate() {
            body.push_str(&encode(k, v));
            body.push('\n');
        }
        body.push_str("end\n");
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

/// Jet from the cache when a valid entry exists, otherwise computed and
/// stored. The flag reports a cache hit.
pub fn xi_taylor_cached(req: &XiJetRequest, cache: Option<&JetCache>) -> Result<(TaylorJet<Ball>, bool)> {
    let Some(cache) = cache else {
        return Ok((xi_taylor(req)?, false));
    };
    if let Ok(Some(jet)) = cache.load(req) {
        return Ok((jet, true));
    }
    let jet = xi_taylor(req)?;
    cache.store(req, &jet)?;
    Ok((jet, false))
}
