//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns JSON strings so the same functions run
//! natively under `cargo test`. Errors come back as plain messages.

use evpkit::geometry::{gap, rolewicz_check, NormTag};
use evpkit::io;
use evpkit::oracle::{audit, scan_maximal};
use evpkit::principle::ekeland_point;
use evpkit::random::{random_instance, InstanceParams};
use evpkit::{Instance, Rational};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

const ROLEWICZ_TRIALS: usize = 300;

fn load(instance: &str) -> Result<Instance, String> {
    io::parse_instance(instance).map_err(|e| e.to_string())
}

fn positive(s: &str, what: &str) -> Result<Rational, String> {
    let q: Rational = s.trim().parse().map_err(|e| format!("{what}: {e}"))?;
    if q.is_positive() {
        Ok(q)
    } else {
        Err(format!("{what} must be positive"))
    }
}

fn values(inst: &Instance) -> Vec<Vec<f64>> {
    (0..inst.len())
        .map(|i| inst.f(i).components().iter().map(Rational::to_f64).collect())
        .collect()
}

/// Random two-dimensional instance with `points` points.
#[wasm_bindgen]
pub fn random_instance_json(seed: u32, points: u32) -> String {
    let n = points.clamp(1, 40) as usize;
    let params = InstanceParams {
        min_points: n,
        max_points: n,
        ..Default::default()
    };
    let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(seed.into()), &params);
    io::instance_to_json(&inst)
}

/// Greedy Ekeland chain from `start`, audited.
#[wasm_bindgen]
pub fn solve(instance: &str, start: u32, scale: &str) -> Result<String, String> {
    let inst = load(instance)?;
    let scale = positive(scale, "scale")?;
    let cert = ekeland_point(&inst, start as usize, &scale).map_err(|e| e.to_string())?;
    let report = audit(&inst, &cert);
    Ok(json!({
        "labels": inst.space().labels(),
        "values": values(&inst),
        "chain": cert.points(),
        "x_bar": cert.x_bar,
        "trace": cert.scalar_trace.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "y_star": cert.scalarizer.y_star.to_string(),
        "audit": report.overall,
        "report": report.to_string(),
    })
    .to_string())
}

/// Every point with no strict successor.
#[wasm_bindgen]
pub fn scan(instance: &str, scale: &str) -> Result<String, String> {
    let inst = load(instance)?;
    let scale = positive(scale, "scale")?;
    let maximal = scan_maximal(&inst, &scale).map_err(|e| e.to_string())?;
    Ok(json!({
        "labels": inst.space().labels(),
        "values": values(&inst),
        "maximal": maximal,
    })
    .to_string())
}

/// Gap of `D + K`, the scalarizer, and the monotone-norm check.
#[wasm_bindgen]
pub fn analyze(instance: &str, norm: &str) -> Result<String, String> {
    let inst = load(instance)?;
    let norm: NormTag = norm.parse()?;
    let g = gap(inst.cone(), inst.dset(), norm).map_err(|e| e.to_string())?;
    let verdict = rolewicz_check(inst.cone(), norm, ROLEWICZ_TRIALS, 0x5eed);
    Ok(json!({
        "norm": norm.to_string(),
        "gap": g.to_string(),
        "y_star": inst.scalarizer().y_star.to_string(),
        "rolewicz": verdict.to_string(),
    })
    .to_string())
}
