//! Bounds for t ↦ Re p_d(ct) along rays c = 1 + iv.

use std::f64::consts::PI;

use rug::Float;

use super::{p_d, p_d_deriv, p_d_second};
use crate::error::{Error, Result};
use crate::numkit::APComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayDeriv {
    First,
    Second,
}

fn polar(v: f64) -> (f64, f64) {
    (v.hypot(1.0), v.atan())
}

// (min, max) of cos(2πmt) or sin(2πmt) over [x0, x1]
fn trig_range(sine: bool, m: usize, x0: f64, x1: f64) -> (f64, f64) {
    let f = |t: f64| if sine { (2.0 * PI * m as f64 * t).sin() } else { (2.0 * PI * m as f64 * t).cos() };
    let (mut lo, mut hi) = (f(x0).min(f(x1)), f(x0).max(f(x1)));
    let mf = m as f64;
    // extrema at t = (k + off)/m
    let (off_max, off_min) = if sine { (0.25, 0.75) } else { (0.0, 0.5) };
    let has = |off: f64| {
        let k = (x0 * mf - off).ceil();
        (k + off) / mf <= x1
    };
    if has(off_max) {
        hi = 1.0;
    }
    if has(off_min) {
        lo = -1.0;
    }
    (lo, hi)
}

// lower bound of x·y for x ∈ [xl, xh], y ∈ [yl, yh]
fn prod_lo(xl: f64, xh: f64, yl: f64, yh: f64) -> f64 {
    (xl * yl).min(xl * yh).min(xh * yl).min(xh * yh)
}

struct Env {
    v1: f64,
    v2: f64,
    r1: f64,
    r2: f64,
    s1: f64,
    s2: f64,
    c1: f64,
    c2: f64,
}

impl Env {
    fn new(v1: f64, v2: f64) -> Self {
        let (r1, th1) = polar(v1);
        let (r2, th2) = polar(v2);
        Env { v1, v2, r1, r2, s1: th1.sin(), s2: th2.sin(), c1: th1.cos(), c2: th2.cos() }
    }
}

/// Lower bound for the first or second t-derivative of Re p_d(ct), uniformly for v ∈ [v_lo, v_hi]
/// and t ∈ [t_lo, t_hi], using L−1 explicit Fourier terms and n equal segments.
#[allow(clippy::too_many_arguments)]
pub fn ray_deriv_bounds(
    d: i64,
    v_lo: f64,
    v_hi: f64,
    t_lo: f64,
    t_hi: f64,
    l: usize,
    n: usize,
    which: RayDeriv,
) -> Result<f64> {
    if !(v_lo > 0.0 && v_lo <= v_hi) || l < 2 || n == 0 || !(t_lo > 0.0 && t_lo < t_hi) {
        return Err(Error::Range("ray_deriv_bounds: need 0 < v_lo <= v_hi, L >= 2, n >= 1, 0 < t_lo < t_hi".into()));
    }
    let e = Env::new(v_lo, v_hi);
    let k0 = PI * (24 * d + 1) as f64;
    let h = (t_hi - t_lo) / n as f64;
    let mut best = f64::INFINITY;
    for j in 0..n {
        let x0 = t_lo + h * j as f64;
        let x1 = if j + 1 == n { t_hi } else { x0 + h };
        let b = match which {
            RayDeriv::Second => second_segment(&e, k0, x0, x1, l),
            RayDeriv::First => first_segment(&e, k0, x0, x1, l),
        };
        best = best.min(b);
    }
    Ok(best)
}

fn second_segment(e: &Env, k0: f64, x0: f64, x1: f64, l: usize) -> f64 {
    // −k0 sinθ/(6ρt³)
    let mut acc = if k0 >= 0.0 { -k0 * e.s2 / (6.0 * e.r1 * x0.powi(3)) } else { -k0 * e.s1 / (6.0 * e.r2 * x1.powi(3)) };
    for m in 1..l {
        let mf = m as f64;
        let a_lo = |t: f64| {
            (-2.0 * PI * mf * e.v2 * t).exp()
                * (2.0 / (mf * t * t) + e.s1 * (2.0 * PI * e.r1 / t + 1.0 / (mf * mf * PI * e.r2 * t.powi(3))))
        };
        let a_hi = |t: f64| {
            (-2.0 * PI * mf * e.v1 * t).exp()
                * (2.0 / (mf * t * t) + e.s2 * (2.0 * PI * e.r2 / t + 1.0 / (mf * mf * PI * e.r1 * t.powi(3))))
        };
        let b_lo = |t: f64| {
            (-2.0 * PI * mf * e.v2 * t).exp() * e.c2 * (2.0 * PI * e.r1 / t - 1.0 / (mf * mf * PI * e.r1 * t.powi(3)))
        };
        let b_hi = |t: f64| {
            (-2.0 * PI * mf * e.v1 * t).exp() * e.c1 * (2.0 * PI * e.r2 / t - 1.0 / (mf * mf * PI * e.r2 * t.powi(3)))
        };
        let (cl, ch) = trig_range(false, m, x0, x1);
        let (sl, sh) = trig_range(true, m, x0, x1);
        acc += prod_lo(a_lo(x1), a_hi(x0), cl, ch);
        acc += prod_lo(b_lo(x1), b_hi(x0), sl, sh);
    }
    acc - tail2(e, l, x0)
}

fn tail2(e: &Env, l: usize, t: f64) -> f64 {
    let lf = l as f64;
    let g = (-2.0 * PI * lf * e.v1 * t).exp() / (1.0 - (-2.0 * PI * e.v1 * t).exp());
    g * (1.0 / (PI * e.r1 * lf * lf * t.powi(3)) + 2.0 / (lf * t * t) + 2.0 * PI * e.r2 / t)
}

fn first_segment(e: &Env, k0: f64, x0: f64, x1: f64, l: usize) -> f64 {
    let mut acc = if k0 >= 0.0 { k0 * e.s1 / (12.0 * e.r2 * x1 * x1) } else { k0 * e.s2 / (12.0 * e.r1 * x0 * x0) };
    for m in 1..l {
        let mf = m as f64;
        let c_lo = |t: f64| (-2.0 * PI * mf * e.v2 * t).exp() * (1.0 / (mf * t) + e.s1 / (mf * mf * 2.0 * PI * e.r2 * t * t));
        let c_hi = |t: f64| (-2.0 * PI * mf * e.v1 * t).exp() * (1.0 / (mf * t) + e.s2 / (mf * mf * 2.0 * PI * e.r1 * t * t));
        let d_lo = |t: f64| (-2.0 * PI * mf * e.v2 * t).exp() * e.c2 / (mf * mf * 2.0 * PI * e.r2 * t * t);
        let d_hi = |t: f64| (-2.0 * PI * mf * e.v1 * t).exp() * e.c1 / (mf * mf * 2.0 * PI * e.r1 * t * t);
        let (cl, ch) = trig_range(false, m, x0, x1);
        let (sl, sh) = trig_range(true, m, x0, x1);
        // −C cos = C·(−cos)
        acc += prod_lo(c_lo(x1), c_hi(x0), -ch, -cl);
        acc += prod_lo(d_lo(x1), d_hi(x0), sl, sh);
    }
    let lf = l as f64;
    let g = (-2.0 * PI * lf * e.v1 * x0).exp() / (1.0 - (-2.0 * PI * e.v1 * x0).exp());
    acc - g * (1.0 / (2.0 * PI * e.r1 * lf * lf * x0 * x0) + 1.0 / (lf * x0))
}

/// Re p_d(ct) and its first two t-derivatives at a single point.
pub fn ray_exact(d: i64, v: f64, t: f64, prec: u32) -> Result<(f64, f64, f64)> {
    let c = APComplex::from_f64(prec, 1.0, v);
    let z = &c * &APComplex::from_real(Float::with_val(prec, t));
    let f = p_d(d, &z)?.re.to_f64();
    let f1 = (&c * &p_d_deriv(d, &z)?).re.to_f64();
    let f2 = (&c.square() * &p_d_second(d, &z)?).re.to_f64();
    Ok((f, f1, f2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellClass {
    Dec,
    Inc,
    Convex,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct CellBound {
    pub t0: f64,
    pub t1: f64,
    pub d1: (f64, f64),
    pub d2: (f64, f64),
    pub class: CellClass,
}

/// sup over t ≥ t0 of |f^{(k)}(t)| for f(t) = Re p_d(ct), fixed v ≠ 0.
fn deriv_sup(d: i64, v: f64, t0: f64, k: u32) -> f64 {
    let (rho, _) = polar(v);
    let k0 = if v > 0.0 {
        PI * PI * (1 + 24 * d) as f64 / 6.0
    } else {
        let s = t0.floor() + 0.5;
        PI * PI / 3.0 + 4.0 * PI * PI * d as f64 - 2.0 * PI * PI * s * s
    };
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let mut acc = k0.abs() / (2.0 * PI * rho) * fact(k) / t0.powi(k as i32 + 1);
    let b = 2.0 * PI * v.abs() * t0;
    // Σ_m e^{−bm}/(2πm²ρ) Σ_j C(k,j)|κ|^{k−j} j!/t^{j+1}, |κ| = 2πmρ
    let term = |m: f64| {
        let kap = 2.0 * PI * m * rho;
        let mut s = 0.0;
        for j in 0..=k {
            let binom = fact(k) / (fact(j) * fact(k - j));
            s += binom * kap.powi((k - j) as i32) * fact(j) / t0.powi(j as i32 + 1);
        }
        (-b * m).exp() * s / (2.0 * PI * m * m * rho)
    };
    let mut m = 1.0;
    loop {
        let tm = term(m);
        acc += tm;
        if tm < 1e-18 * acc || m > 1e6 {
            // remaining terms shrink at least geometrically once m > k/b
            let ratio = ((m + 1.0) / m).powi(k as i32) * (-b).exp();
            if ratio < 0.9 {
                acc += tm * ratio / (1.0 - ratio);
                break;
            }
        }
        m += 1.0;
    }
    acc
}

/// Encloses f′ and f″ on [t0, t1] by a midpoint evaluation plus a mean-value remainder.
pub fn ray_cell_bounds(d: i64, v: f64, t0: f64, t1: f64, prec: u32) -> Result<CellBound> {
    if v == 0.0 || t0 <= 0.0 || t1 <= t0 {
        return Err(Error::Range("ray_cell_bounds: need v != 0 and 0 < t0 < t1".into()));
    }
    if v < 0.0 && t0.floor() != t1.floor() {
        return Err(Error::Range("ray_cell_bounds: cell crosses a branch cut".into()));
    }
    let tm = 0.5 * (t0 + t1);
    let r = 0.5 * (t1 - t0);
    let (_, f1, f2) = ray_exact(d, v, tm, prec)?;
    let s2 = deriv_sup(d, v, t0, 2);
    let s3 = deriv_sup(d, v, t0, 3);
    // evaluation slack
    let eps = 1e-12;
    let d1 = (f1 - r * s2 - eps, f1 + r * s2 + eps);
    let d2 = (f2 - r * s3 - eps, f2 + r * s3 + eps);
    let class = if d1.1 < 0.0 {
        CellClass::Dec
    } else if d1.0 > 0.0 {
        CellClass::Inc
    } else if d2.0 > 0.0 {
        CellClass::Convex
    } else {
        CellClass::Unknown
    };
    Ok(CellBound { t0, t1, d1, d2, class })
}

/// Covers [t_lo, t_hi] with classified cells, bisecting unknown cells up to `max_depth` times.
pub fn classify_ray(d: i64, v: f64, t_lo: f64, t_hi: f64, cells: usize, max_depth: u32, prec: u32) -> Result<Vec<CellBound>> {
    use rayon::prelude::*;
    let h = (t_hi - t_lo) / cells as f64;
    let parts: Vec<Result<Vec<CellBound>>> = (0..cells)
        .into_par_iter()
        .map(|j| {
            let a = t_lo + h * j as f64;
            let b = if j + 1 == cells { t_hi } else { a + h };
            classify_cell(d, v, a, b, max_depth, prec)
        })
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn classify_cell(d: i64, v: f64, a: f64, b: f64, depth: u32, prec: u32) -> Result<Vec<CellBound>> {
    let c = ray_cell_bounds(d, v, a, b, prec)?;
    if c.class != CellClass::Unknown || depth == 0 {
        return Ok(vec![c]);
    }
    let m = 0.5 * (a + b);
    let mut left = classify_cell(d, v, a, m, depth - 1, prec)?;
    left.extend(classify_cell(d, v, m, b, depth - 1, prec)?);
    Ok(left)
}

/// True when every cell is classified and no increasing cell precedes a decreasing one,
/// so f has a unique interior critical point which is a minimum.
pub fn unique_minimum(cells: &[CellBound]) -> bool {
    let mut seen_inc = false;
    for c in cells {
        match c.class {
            CellClass::Unknown => return false,
            CellClass::Inc => seen_inc = true,
            CellClass::Dec if seen_inc => return false,
            _ => {}
        }
    }
    true
}
