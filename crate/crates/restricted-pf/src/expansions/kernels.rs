//! Correction kernels g_ℓ and relatives, the u-coefficients, prefactors and the φ series.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numkit::{bernoulli_over_factorial, pi, APComplex};
use crate::specfun::{cot_deriv, dilog};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelFamily {
    /// g_ℓ
    G,
    /// g*_ℓ
    GStar,
    /// g̃_ℓ
    GTilde,
    /// g_ℓ(2^{−(2ℓ−1)} − 1)
    GC,
    /// g_ℓ − g*_ℓ + 2^{2ℓ−1}(2g*_ℓ − g_ℓ)
    GD,
}

fn pi_c(prec: u32) -> APComplex {
    APComplex::from_real(pi(prec))
}

fn bf(ell: usize, prec: u32) -> Float {
    bernoulli_over_factorial(2 * ell, prec)
}

fn g_plain(ell: usize, z: &APComplex) -> Result<APComplex> {
    let p = z.prec();
    let w = &pi_c(p) * z;
    let c = cot_deriv(2 * ell - 2, &w)?;
    Ok((&w.powi(2 * ell as i64 - 1) * &c).scale(&-bf(ell, p)))
}

fn g_star(ell: usize, z: &APComplex) -> Result<APComplex> {
    let p = z.prec();
    let w = (&pi_c(p) * z).scale_f64(0.5);
    let arg = (&pi_c(p) * &(z - &APComplex::one(p))).scale_f64(0.5);
    let c = cot_deriv(2 * ell - 2, &arg)?;
    Ok((&w.powi(2 * ell as i64 - 1) * &c).scale(&-bf(ell, p)))
}

fn g_tilde(ell: usize, z: &APComplex) -> Result<APComplex> {
    let p = z.prec();
    let w = &pi_c(p) * z;
    let c1 = cot_deriv(2 * ell - 1, &w)?;
    let c0 = cot_deriv(2 * ell - 2, &w)?;
    let brace = &(&w * &c1) + &c0.scale_f64((2 * ell - 1) as f64);
    Ok((&w.powi(2 * ell as i64 - 1) * &brace).scale(&bf(ell, p)))
}

pub fn g_kernel(family: KernelFamily, ell: usize, z: &APComplex) -> Result<APComplex> {
    if ell == 0 {
        return Err(Error::Range("kernel index starts at 1".into()));
    }
    let p = z.prec();
    let two_pow = Float::with_val(p, Float::i_exp(1, 2 * ell as i32 - 1));
    match family {
        KernelFamily::G => g_plain(ell, z),
        KernelFamily::GStar => g_star(ell, z),
        KernelFamily::GTilde => g_tilde(ell, z),
        KernelFamily::GC => {
            let f = Float::with_val(p, two_pow.recip_ref()) - 1u32;
            Ok(g_plain(ell, z)?.scale(&f))
        }
        KernelFamily::GD => {
            let g = g_plain(ell, z)?;
            let gs = g_star(ell, z)?;
            let inner = &gs.scale_f64(2.0) - &g;
            Ok(&(&g - &gs) + &inner.scale(&two_pow))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UKind {
    C,
    Cstar,
    D,
}

impl UKind {
    fn family(self) -> KernelFamily {
        match self {
            UKind::C => KernelFamily::G,
            UKind::Cstar => KernelFamily::GC,
            UKind::D => KernelFamily::GD,
        }
    }

    /// The first-order term λ(z) that joins the ℓ = 1 kernel.
    pub fn lambda(self, sigma: i64, z: &APComplex) -> APComplex {
        let p = z.prec();
        let piz = (&pi_c(p) * z).mul_i();
        match self {
            UKind::C => piz.scale_f64((2 * sigma) as f64),
            UKind::Cstar => piz.scale_f64((16 * sigma + 1) as f64 / 8.0),
            UKind::D => piz.scale_f64(sigma as f64),
        }
    }
}

// V_n: coefficient of x^n in λx + Σ_ℓ k_ℓ x^{2ℓ−1}
fn v_terms(kind: UKind, sigma: i64, jmax: usize, z: &APComplex) -> Result<Vec<APComplex>> {
    let p = z.prec();
    let mut v = vec![APComplex::zero(p); jmax + 1];
    if jmax == 0 {
        return Ok(v);
    }
    v[1] = kind.lambda(sigma, z);
    let mut ell = 1;
    while 2 * ell - 1 <= jmax {
        v[2 * ell - 1] += g_kernel(kind.family(), ell, z)?;
        ell += 1;
    }
    Ok(v)
}

/// u_0, …, u_jmax at z: coefficients of exp(λx + Σ_ℓ k_ℓ x^{2ℓ−1}).
pub fn u_series(kind: UKind, sigma: i64, jmax: usize, z: &APComplex) -> Result<Vec<APComplex>> {
    let p = z.prec();
    let v = v_terms(kind, sigma, jmax, z)?;
    let mut u = vec![APComplex::one(p)];
    for j in 1..=jmax {
        let mut acc = APComplex::zero(p);
        for n in 1..=j {
            if v[n].is_zero() {
                continue;
            }
            acc += (&v[n] * &u[j - n]).scale_f64(n as f64);
        }
        u.push(acc.scale_rat(&Rational::from((1, j as u64))));
    }
    Ok(u)
}

/// u_j at z by summing over m₁ + 3m₂ + 5m₃ + … = j.
pub fn u_coeff(kind: UKind, sigma: i64, j: usize, z: &APComplex) -> Result<APComplex> {
    let p = z.prec();
    let v = v_terms(kind, sigma, j, z)?;
    // y[ℓ−1] multiplies weight 2ℓ−1
    let y: Vec<APComplex> = (1..=j).step_by(2).map(|w| v[w].clone()).collect();
    let mut total = APComplex::zero(p);
    compositions(&y, 0, j, APComplex::one(p), &mut total);
    Ok(total)
}

fn compositions(y: &[APComplex], idx: usize, rest: usize, acc: APComplex, total: &mut APComplex) {
    if rest == 0 {
        *total += &acc;
        return;
    }
    if idx >= y.len() {
        return;
    }
    let w = 2 * idx + 1;
    let mut term = acc;
    let mut m = 0usize;
    loop {
        compositions(y, idx + 1, rest - m * w, term.clone(), total);
        if (m + 1) * w > rest {
            break;
        }
        m += 1;
        term = (&term * &y[idx]).scale_rat(&Rational::from((1, m as u64)));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefactor {
    /// (z/(2 sin πz))^{1/2} e^{−πiz/2}, strip 2 < Re z < 5/2
    QC,
    /// e^{−3πi/4} √z, strip 3 < Re z < 7/2
    QCstar,
    /// (z/(2 sin(π(z−1)/2)))^{1/2} e^{−πi(z+3)/4}, strip 1 < Re z < 3/2
    QD,
    /// 2 sin(π(z−1)/2)·(z/(2 sin(π(z−1)/2)))^{1/2} e^{πi(z−1)/4}, strip 1 < Re z < 3/2
    QDstar,
}

impl Prefactor {
    pub fn strip(self) -> (f64, f64) {
        match self {
            Prefactor::QC => (2.0, 2.5),
            Prefactor::QCstar => (3.0, 3.5),
            Prefactor::QD | Prefactor::QDstar => (1.0, 1.5),
        }
    }
}

pub fn prefactor(kind: Prefactor, z: &APComplex) -> Result<APComplex> {
    let (lo, hi) = kind.strip();
    if !(z.re > lo && z.re < hi) {
        return Err(Error::Range(format!("prefactor {kind:?} needs {lo} < Re z < {hi}, got {z}")));
    }
    let p = z.prec();
    let pic = pi_c(p);
    let one = APComplex::one(p);
    Ok(match kind {
        Prefactor::QC => {
            let s = (&pic * z).sin().scale_f64(2.0);
            let r = (z / &s).sqrt();
            &r * &(&pic * z).mul_i().scale_f64(-0.5).exp()
        }
        Prefactor::QCstar => {
            let ph = APComplex::from_real(Float::with_val(p, &pic.re * -0.75f64)).mul_i().exp();
            &ph * &z.sqrt()
        }
        Prefactor::QD => {
            let s = (&pic * &(z - &one)).scale_f64(0.5).sin().scale_f64(2.0);
            let r = (z / &s).sqrt();
            let three = APComplex::from_int(p, 3);
            &r * &(&pic * &(z + &three)).mul_i().scale_f64(-0.25).exp()
        }
        Prefactor::QDstar => {
            let s = (&pic * &(z - &one)).scale_f64(0.5).sin().scale_f64(2.0);
            let r = (z / &s).sqrt();
            &(&s * &r) * &(&pic * &(z - &one)).mul_i().scale_f64(0.25).exp()
        }
    })
}

/// φ_{σ,ℓ}(z), the coefficient of N^{−ℓ} in the cotangent-sum factor of the ℰ terms.
pub fn phi_series(sigma: i64, ell: usize, z: &APComplex) -> Result<APComplex> {
    let p = z.prec();
    let wp = p + 16;
    let z = z.with_prec(wp);
    let pi = pi(wp);
    let pic = APComplex::from_real(pi.clone());
    let two_pi_i = pic.scale_f64(2.0).mul_i();
    let pi2 = Float::with_val(wp, pi.square_ref());
    let out = match ell {
        0 => {
            let x = (&two_pi_i * &z).exp();
            let li = dilog(&x);
            let l = (&APComplex::one(wp) - &x).ln();
            let c = APComplex::from_real(Float::with_val(wp, &pi2 / 6u32) + Float::with_val(wp, &pi2 * 6u32));
            let num = &(&c - &li) - &(&(&two_pi_i * &z) * &l);
            num.scale(&Float::with_val(wp, Float::with_val(wp, &pi2 * 4u32).recip_ref()))
        }
        1 => {
            let z2 = z.square();
            // z² cot(πz)/(4i) = −i z² cot(πz)/4
            let a = (&z2 * &(&pic * &z).cot()).mul_i().scale_f64(-0.25);
            let b = z2.scale_f64(0.25);
            // −5z/(4πi) = 5iz/(4π)
            let c = z.mul_i().scale(&Float::with_val(wp, Float::with_val(wp, 5) / (pi.clone() * 4u32)));
            &(&a + &b) + &c
        }
        _ if ell % 2 == 1 => APComplex::zero(wp),
        _ => {
            let k = ell / 2;
            let gt = g_kernel(KernelFamily::GTilde, k, &z)?;
            let mut v = &(&z * &gt) / &two_pi_i;
            if ell == 2 {
                v -= &z.square().scale_f64(sigma as f64);
            }
            v
        }
    };
    Ok(out.with_prec(p))
}
