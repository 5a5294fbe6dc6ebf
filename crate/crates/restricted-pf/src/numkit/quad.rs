use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

use super::complex::pi;
use crate::error::{Error, Result};

type Rule = Arc<Vec<(Float, Float)>>;

fn cache() -> &'static Mutex<HashMap<(usize, u32), Rule>> {
    static C: OnceLock<Mutex<HashMap<(usize, u32), Rule>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize, prec: u32) -> Rule {
    if let Some(r) = cache().lock().unwrap().get(&(n, prec)) {
        return r.clone();
    }
    let wp = prec + 32;
    let mut rule = Vec::with_capacity(n);
    let pi = pi(wp);
    for i in 0..n {
        // Tricomi initial guess
        let g = ((4 * i + 3) as f64) / ((4 * n + 2) as f64);
        let mut x = Float::with_val(wp, &pi * g).cos();
        let mut dp = Float::new(wp);
        for _ in 0..100 {
            let (p, d) = legendre(n, &x);
            let dx = Float::with_val(wp, &p / &d);
            x -= &dx;
            dp = d;
            if dx.is_zero() || dx.get_exp().unwrap_or(i32::MIN) < -(wp as i32 - 4) {
                let (_, d) = legendre(n, &x);
                dp = d;
                break;
            }
        }
        let x2 = Float::with_val(wp, x.square_ref());
        let one_m = Float::with_val(wp, 1) - x2;
        let w = Float::with_val(wp, 2) / (one_m * Float::with_val(wp, dp.square_ref()));
        rule.push((Float::with_val(prec, &x), Float::with_val(prec, w)));
    }
    let r = Arc::new(rule);
    cache().lock().unwrap().insert((n, prec), r.clone());
    r
}

fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let wp = x.prec();
    let mut p0 = Float::with_val(wp, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(wp, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(wp, &p0 * (k - 1) as u32);
        let p2 = (a - b) / k as u32;
        p0 = p1;
        p1 = p2;
    }
    let x2 = Float::with_val(wp, x.square_ref());
    let num = Float::with_val(wp, x * &p1) - &p0;
    let d = Float::with_val(wp, num * n as u32) / (x2 - 1u32);
    (p1, d)
}

/// ∫_a^b f on one panel with an n-point rule.
pub fn gl_panel<F>(f: &F, a: &Float, b: &Float, n: usize) -> Result<Float>
where
    F: Fn(&Float) -> Result<Float>,
{
    let prec = a.prec().min(b.prec());
    let rule = gauss_legendre(n, prec);
    let half = Float::with_val(prec, Float::with_val(prec, b - a) / 2u32);
    let mid = Float::with_val(prec, Float::with_val(prec, b + a) / 2u32);
    let mut acc = Float::new(prec);
    for (x, w) in rule.iter() {
        let t = Float::with_val(prec, &half * x) + &mid;
        acc += Float::with_val(prec, f(&t)? * w);
    }
    Ok(acc * half)
}

/// Composite Gauss–Legendre on [a, b]; panels double until two passes agree to `tol`.
pub fn integrate<F>(f: &F, a: &Float, b: &Float, tol: &Float) -> Result<Float>
where
    F: Fn(&Float) -> Result<Float>,
{
    let prec = a.prec().min(b.prec());
    let order = ((prec as usize) / 6).clamp(20, 80);
    let mut panels = 1usize;
    let mut prev: Option<Float> = None;
    let mut last = f64::INFINITY;
    for _ in 0..9 {
        let h = Float::with_val(prec, Float::with_val(prec, b - a) / panels as u32);
        let mut acc = Float::new(prec);
        for i in 0..panels {
            let lo = Float::with_val(prec, &h * i as u32) + a;
            let hi = Float::with_val(prec, &h * (i + 1) as u32) + a;
            acc += gl_panel(f, &lo, &hi, order)?;
        }
        if let Some(p) = &prev {
            let d = Float::with_val(prec, &acc - p).abs();
            last = d.to_f64();
            if d <= *tol {
                return Ok(acc);
            }
        }
        prev = Some(acc);
        panels *= 2;
    }
    Err(Error::NonConvergence { what: "quadrature".into(), residual: last })
}
