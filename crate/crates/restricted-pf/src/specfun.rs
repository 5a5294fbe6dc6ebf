//! Dilogarithm, its zeros on continued branches, Clausen's integral, cot/ρ derivatives.

use std::sync::{Mutex, OnceLock};

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::numkit::{bernoulli_over_factorial, pi, APComplex};

const GUARD: u32 = 24;

fn zeta2(prec: u32) -> Float {
    let p = pi(prec);
    Float::with_val(prec, p.square_ref()) / 6u32
}

/// Principal branch of Li₂. Points on the cut (1, ∞) take the limit from above.
pub fn dilog(z: &APComplex) -> APComplex {
    let p = z.prec();
    let wp = p + GUARD;
    let mut z = z.with_prec(wp);
    if z.im.is_zero() && z.re > 1 {
        z.im = Float::new(wp);
    }
    li2_any(&z).with_prec(p)
}

fn li2_any(z: &APComplex) -> APComplex {
    let wp = z.prec();
    if z.is_zero() {
        return APComplex::zero(wp);
    }
    if z.im.is_zero() && z.re == 1 {
        return APComplex::from_real(zeta2(wp));
    }
    if z.norm_sqr() > 1 {
        // Li2(z) = -Li2(1/z) - π²/6 - log²(-z)/2
        let inv = li2_unit(&z.recip());
        let l = (-z).ln();
        let half_l2 = l.square().scale_f64(0.5);
        let z2 = APComplex::from_real(zeta2(wp));
        return -(inv + z2 + half_l2);
    }
    li2_unit(z)
}

fn li2_unit(z: &APComplex) -> APComplex {
    let wp = z.prec();
    if z.norm_sqr() <= 0.25 {
        return li2_direct(z);
    }
    if z.re > 0.5 {
        if z.im.is_zero() && z.re == 1 {
            return APComplex::from_real(zeta2(wp));
        }
        // Li2(z) = -Li2(1-z) + π²/6 - log z log(1-z)
        let one = APComplex::one(wp);
        let w = &one - z;
        let core = if w.norm_sqr() <= 0.25 { li2_direct(&w) } else { li2_bernoulli(&w) };
        let prod = &z.ln() * &w.ln();
        let z2 = APComplex::from_real(zeta2(wp));
        return &(&z2 - &core) - &prod;
    }
    li2_bernoulli(z)
}

fn li2_direct(z: &APComplex) -> APComplex {
    let wp = z.prec();
    let mut acc = APComplex::zero(wp);
    let mut zn = z.clone();
    let mut n: u64 = 1;
    loop {
        let term = zn.scale(&(Float::with_val(wp, 1) / Float::with_val(wp, n * n)));
        acc += &term;
        if term.is_zero() || term.abs().get_exp().unwrap_or(i32::MIN) < acc.abs().get_exp().unwrap_or(0) - wp as i32 - 2 {
            break;
        }
        zn = &zn * z;
        n += 1;
        if n > 20 * wp as u64 {
            break;
        }
    }
    acc
}

// Σ B_n u^{n+1}/(n+1)! with u = -log(1-z)
fn li2_bernoulli(z: &APComplex) -> APComplex {
    let wp = z.prec();
    let one = APComplex::one(wp);
    let u = -(&one - z).ln();
    let u2 = u.square();
    // n = 0 and n = 1 terms
    let mut acc = &u - &u2.scale_f64(0.25);
    let mut upow = &u2 * &u; // u^{n+1} for n = 2
    let mut n = 2usize;
    loop {
        let c = bernoulli_over_factorial(n, wp);
        let term = upow.scale(&(c / Float::with_val(wp, n + 1)));
        acc += &term;
        if term.is_zero() || term.abs().get_exp().unwrap_or(i32::MIN) < acc.abs().get_exp().unwrap_or(0) - wp as i32 - 2 {
            break;
        }
        upow = &upow * &u2;
        n += 2;
        if n > 8 * wp as usize {
            break;
        }
    }
    acc
}

/// Li₂(z) + 4π²A + 2πiB·log z, principal logarithm.
pub fn dilog_continued(z: &APComplex, a: i64, b: i64) -> APComplex {
    let p = z.prec();
    let pi = pi(p);
    let four_pi2 = Float::with_val(p, pi.square_ref()) * 4u32;
    let mut v = dilog(z);
    v.re += Float::with_val(p, &four_pi2 * a);
    let l = z.ln();
    let two_pi_b = Float::with_val(p, &pi * (2 * b));
    v += l.mul_i().scale(&two_pi_b);
    v
}

/// A zero w(A, B) of the continued dilogarithm.
#[derive(Clone, Debug)]
pub struct DilogZero {
    pub a: i64,
    pub b: i64,
    pub w: APComplex,
    pub residual: Float,
}

fn known_seed(a: i64, b: i64) -> Option<(f64, f64)> {
    match (a, b) {
        (0, -1) => Some((0.916198, -0.182459)),
        (0, -2) => Some((0.968482, -0.109531)),
        (1, -3) => Some((-0.459473, -0.848535)),
        _ => None,
    }
}

/// Newton's method for Li₂(w) + 4π²A + 2πiB log w = 0.
pub fn dilog_zero(a: i64, b: i64, prec: u32) -> Result<DilogZero> {
    if b == 0 || 2 * a <= -b.abs() || 2 * a > b.abs() {
        return Err(Error::Range(format!("no zero w({a},{b}): need B != 0 and -|B|/2 < A <= |B|/2")));
    }
    let wp = prec + 32;
    let mut seeds = Vec::new();
    if let Some(s) = known_seed(a, b) {
        seeds.push(APComplex::from_f64(wp, s.0, s.1));
    }
    seeds.extend(grid_seeds(a, b));
    let tol_bits = prec as i32 - 16;
    let mut best = f64::INFINITY;
    for seed in seeds {
        match newton(a, b, seed, wp, tol_bits) {
            Ok(w) => {
                let w = w.with_prec(prec);
                let residual = dilog_continued(&w.with_prec(wp), a, b).abs();
                return Ok(DilogZero { a, b, w, residual: Float::with_val(prec, residual) });
            }
            Err(r) => best = best.min(r),
        }
    }
    Err(Error::NonConvergence { what: format!("dilog_zero({a},{b})"), residual: best })
}

fn newton(a: i64, b: i64, seed: APComplex, wp: u32, tol_bits: i32) -> std::result::Result<APComplex, f64> {
    let mut w = seed.with_prec(wp);
    let one = APComplex::one(wp);
    let two_pi_b = APComplex::from_real(Float::with_val(wp, pi(wp) * (2 * b))).mul_i();
    let mut last = f64::INFINITY;
    for _ in 0..200 {
        let f = dilog_continued(&w, a, b);
        let r = f.abs();
        last = r.to_f64();
        if r.is_zero() || r.get_exp().unwrap_or(i32::MIN) < -tol_bits - 8 {
            return Ok(w);
        }
        let fp = &(&two_pi_b - &(&one - &w).ln()) / &w;
        if fp.is_zero() {
            return Err(last);
        }
        let mut step = &f / &fp;
        // damp long steps
        let sa = step.abs().to_f64();
        if sa > 0.25 {
            step = step.scale_f64(0.25 / sa);
        }
        w = &w - &step;
        if w.is_zero() || !w.re.is_finite() || !w.im.is_finite() {
            return Err(last);
        }
    }
    Err(last)
}

fn grid_seeds(a: i64, b: i64) -> Vec<APComplex> {
    let p = 64;
    let mut scored: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..40 {
        for j in 0..40 {
            let x = -2.0 + 4.0 * (i as f64 + 0.5) / 40.0;
            let y = -2.0 + 4.0 * (j as f64 + 0.5) / 40.0;
            let z = APComplex::from_f64(p, x, y);
            let v = dilog_continued(&z, a, b).abs().to_f64();
            if v.is_finite() {
                scored.push((v, x, y));
            }
        }
    }
    scored.sort_by(|l, r| l.0.total_cmp(&r.0));
    scored.into_iter().take(6).map(|(_, x, y)| APComplex::from_f64(p, x, y)).collect()
}

/// Cl₂(θ) = Σ sin(nθ)/n² = Im Li₂(e^{iθ}).
pub fn clausen(theta: &Float) -> Float {
    let p = theta.prec();
    let wp = p + GUARD;
    let twopi = Float::with_val(wp, pi(wp) * 2u32);
    let mut t = Float::with_val(wp, theta);
    // reduce to (-π, π]
    let k = Float::with_val(wp, &t / &twopi).round();
    t -= Float::with_val(wp, &twopi * &k);
    if t.is_zero() {
        return Float::new(p);
    }
    let z = APComplex::cis(&t);
    Float::with_val(p, li2_any(&z).im)
}

fn cot_polys() -> &'static Mutex<Vec<Vec<Integer>>> {
    static C: OnceLock<Mutex<Vec<Vec<Integer>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(vec![vec![Integer::new(), Integer::from(1)]]))
}

/// Coefficients (ascending) of P_d with cot^{(d)} = P_d(cot).
pub fn cot_poly(d: usize) -> Vec<Integer> {
    let mut c = cot_polys().lock().unwrap();
    while c.len() <= d {
        let prev = c.last().unwrap();
        // P' (x) · (-1 - x²)
        let deriv: Vec<Integer> = (1..prev.len()).map(|i| Integer::from(&prev[i] * i as u32)).collect();
        let mut next = vec![Integer::new(); deriv.len() + 2];
        for (i, a) in deriv.iter().enumerate() {
            next[i] -= a;
            next[i + 2] -= a;
        }
        while next.len() > 1 && next.last().is_some_and(|x| *x == 0) {
            next.pop();
        }
        c.push(next);
    }
    c[d].clone()
}

fn is_pole(z: &APComplex) -> bool {
    let s = z.sin().abs();
    s.is_zero() || s.get_exp().unwrap_or(i32::MIN) < -(z.prec() as i32 - 10)
}

/// d-th derivative of cot at z.
pub fn cot_deriv(d: usize, z: &APComplex) -> Result<APComplex> {
    if is_pole(z) {
        return Err(Error::Pole(format!("cot at {z}")));
    }
    let c = z.cot();
    let poly = cot_poly(d);
    let p = z.prec();
    let mut acc = APComplex::zero(p);
    for a in poly.iter().rev() {
        acc = &acc * &c;
        acc.re += Float::with_val(p, a);
    }
    Ok(acc)
}

/// d-th derivative of ρ(z) = log(sin z / z).
pub fn rho_deriv(d: usize, z: &APComplex) -> Result<APComplex> {
    let p = z.prec();
    if z.norm_sqr() < 1 {
        return Ok(rho_series(d, z));
    }
    if is_pole(z) {
        return Err(Error::Pole(format!("rho at {z}")));
    }
    if d == 0 {
        return Ok((&z.sin() / z).ln());
    }
    let c = cot_deriv(d - 1, z)?;
    let fact = Float::with_val(p, Integer::from(Integer::factorial((d - 1) as u32)));
    let mut t = z.powi(-(d as i64)).scale(&fact);
    if (d - 1) % 2 == 1 {
        t = -t;
    }
    Ok(&c - &t)
}

// log(sin z/z) = Σ_{n≥1} (-1)^n 2^{2n} B_{2n}/(2n (2n)!) z^{2n}
fn rho_series(d: usize, z: &APComplex) -> APComplex {
    let p = z.prec();
    let wp = p + 16;
    let z = z.with_prec(wp);
    let mut acc = APComplex::zero(wp);
    let n0 = d.div_ceil(2).max(1);
    let z2 = z.square();
    let mut zp = z.powi((2 * n0 - d) as i64);
    let mut n = n0;
    loop {
        let b = bernoulli_over_factorial(2 * n, wp);
        let mut c = b;
        c <<= (2 * n) as u32;
        c /= (2 * n) as u32;
        if n % 2 == 1 {
            c = -c;
        }
        // falling factorial (2n)!/(2n-d)!
        let mut ff = Integer::from(1);
        for i in 0..d {
            ff *= (2 * n - i) as u64;
        }
        let term = zp.scale(&Float::with_val(wp, c * ff));
        acc += &term;
        let small = term.is_zero() || term.abs().get_exp().unwrap_or(i32::MIN) < acc.abs().get_exp().unwrap_or(-(wp as i32)) - wp as i32 - 2;
        if (small && n > n0 + 2) || n > 4 * wp as usize {
            break;
        }
        zp = &zp * &z2;
        n += 1;
    }
    acc.with_prec(p)
}
