//! Browser bindings for three interactive views: the linear-tax frontier, a
//! single two-bracket policy, and the logarithmic-utility `β` sweep.
//!
//! Results cross the boundary as flat `Float64Array`s; the page slices them
//! into records. The plain-Rust functions are kept separate so they can be
//! tested natively.

use taxfrontier::{
    optimal_linear_closed_form, respond_quadratic, welfare_two_bracket, LinearMoments, LogModel,
    SkillDistribution, TaxPolicy,
};
use wasm_bindgen::prelude::*;

fn skills(lower: f64, upper: f64) -> Result<SkillDistribution, String> {
    SkillDistribution::uniform(lower, upper).map_err(|e| e.to_string())
}

/// `[β*, α*, U*, σ*, V*]` followed by `[β, U, σ]` for `steps` samples of
/// `β ∈ [0, 1]`.
pub fn linear_frontier_values(lower: f64, upper: f64, steps: usize, c: f64) -> Result<Vec<f64>, String> {
    let d = skills(lower, upper)?;
    let m = LinearMoments::of(&d).map_err(|e| e.to_string())?;
    let (beta, w) = optimal_linear_closed_form(c, &m).map_err(|e| e.to_string())?;
    let mut out = vec![beta, (1.0 - beta) * beta * m.second, w.mean_utility, w.sigma_u, w.v];
    let curve = taxfrontier::frontier::frontier_linear_moments(&m, steps.max(2)).map_err(|e| e.to_string())?;
    for s in curve.samples {
        out.extend([s.sweep, s.welfare.mean_utility, s.welfare.sigma_u]);
    }
    Ok(out)
}

/// `[α, U, σ, V, n1, n2, n3]` followed by `[n, u*(n)]` for `samples` skills
/// spread over the support.
pub fn two_bracket_values(
    lower: f64,
    upper: f64,
    beta1: f64,
    beta2: f64,
    y1: f64,
    c: f64,
    samples: usize,
) -> Result<Vec<f64>, String> {
    let d = skills(lower, upper)?;
    let e = welfare_two_bracket(beta1, beta2, y1, &d, c).map_err(|e| e.to_string())?;
    let p: TaxPolicy = e.policy;
    let (n1, n2, n3) = p
        .thresholds()
        .map(|t| (t.n1, t.n2, t.n3))
        .unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    let mut out = vec![p.alpha, e.welfare.mean_utility, e.welfare.sigma_u, e.welfare.v, n1, n2, n3];
    let samples = samples.max(2);
    for i in 0..samples {
        let n = lower + (upper - lower) * i as f64 / (samples - 1) as f64;
        let o = respond_quadratic(&p, n).map_err(|e| e.to_string())?;
        out.extend([n, o.utility]);
    }
    Ok(out)
}

/// `[β, α, U, σ, V]` for `β = step, 2·step, … < 1`.
pub fn log_curve_values(leisure_weight: f64, skill_max: f64, step: f64, c: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0 && step < 0.5) {
        return Err(format!("beta step must lie in (0, 0.5), got {step}"));
    }
    let model = LogModel::new(leisure_weight, skill_max).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    let mut i = 1;
    loop {
        let beta = i as f64 * step;
        if beta >= 1.0 - 1e-12 {
            break;
        }
        let e = model.welfare(beta, c).map_err(|e| e.to_string())?;
        out.extend([beta, e.balance.alpha, e.welfare.mean_utility, e.welfare.sigma_u, e.welfare.v]);
        i += 1;
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn linear_frontier(lower: f64, upper: f64, steps: usize, c: f64) -> Result<Vec<f64>, JsError> {
    linear_frontier_values(lower, upper, steps, c).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn two_bracket(
    lower: f64,
    upper: f64,
    beta1: f64,
    beta2: f64,
    y1: f64,
    c: f64,
    samples: usize,
) -> Result<Vec<f64>, JsError> {
    two_bracket_values(lower, upper, beta1, beta2, y1, c, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn log_curve(leisure_weight: f64, skill_max: f64, step: f64, c: f64) -> Result<Vec<f64>, JsError> {
    log_curve_values(leisure_weight, skill_max, step, c).map_err(|e| JsError::new(&e))
}
