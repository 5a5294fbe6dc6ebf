//! Wojdylo's formula for the saddle-point coefficients a_{2s}.

use rug::{Float, Rational};

use super::{series_radius, SaddleContext};
use crate::error::{Error, Result};
use crate::numkit::{bell_table, binomial_rat, taylor_coeffs, APComplex, TruncSeries};

/// Γ(s + 1/2)
pub fn gamma_half(s: usize, prec: u32) -> Float {
    let x = Float::with_val(prec, s) + 0.5f64;
    x.gamma()
}

/// Precomputed phase data for repeated a_{2s} evaluations with different q.
#[derive(Clone, Debug)]
pub struct Wojdylo {
    smax: usize,
    front: APComplex,
    /// p₀^{−k} for k ≤ 3·smax
    p0_inv_pow: Vec<APComplex>,
    /// bell[j][i] = B̂_{i,j}(p₁, p₂, …)
    bell: Vec<Vec<APComplex>>,
}

impl Wojdylo {
    /// `pseries` is p around the saddle (its linear coefficient is ignored), `omega` the path direction.
    pub fn new(pseries: &TruncSeries, omega: &APComplex, smax: usize) -> Result<Self> {
        let p0 = pseries.coeff(2);
        if p0.is_zero() {
            return Err(Error::Pole("p0 = 0: not a simple saddle".into()));
        }
        let need = 2 * smax + 3;
        if pseries.order() < need {
            return Err(Error::InsufficientArgs { needed: need, got: pseries.order() });
        }
        let prec = p0.prec();
        let root = (&omega.square() * &p0).sqrt();
        let front = omega / &root.scale_f64(2.0);
        let args: Vec<APComplex> = (1..=2 * smax).map(|k| pseries.coeff(k + 2)).collect();
        let bell = if args.is_empty() { vec![vec![APComplex::one(prec)]] } else { bell_table(2 * smax, &args) };
        let inv = p0.recip();
        let mut p0_inv_pow = vec![APComplex::one(prec)];
        for k in 1..=3 * smax + 1 {
            let next = &p0_inv_pow[k - 1] * &inv;
            p0_inv_pow.push(next);
        }
        Ok(Wojdylo { smax, front, p0_inv_pow, bell })
    }

    pub fn a2s(&self, q: &TruncSeries, s: usize) -> Result<APComplex> {
        if s > self.smax {
            return Err(Error::InsufficientArgs { needed: s, got: self.smax });
        }
        if q.order() < 2 * s + 1 {
            return Err(Error::InsufficientArgs { needed: 2 * s + 1, got: q.order() });
        }
        let prec = self.front.prec();
        let alpha = Rational::from((-(2 * s as i64) - 1, 2));
        let mut acc = APComplex::zero(prec);
        for i in 0..=2 * s {
            let qi = q.coeff(2 * s - i);
            if qi.is_zero() {
                continue;
            }
            let mut inner = APComplex::zero(prec);
            for j in 0..=i {
                let b = &self.bell[j][i];
                if b.is_zero() {
                    continue;
                }
                let c = binomial_rat(&alpha, j);
                inner += (&self.p0_inv_pow[s + j] * b).scale_rat(&c);
            }
            acc += &qi * &inner;
        }
        Ok(&self.front * &acc)
    }

    /// Γ(s+1/2)·a_{2s} for s < count.
    pub fn terms(&self, q: &TruncSeries, count: usize) -> Result<Vec<APComplex>> {
        let prec = self.front.prec();
        (0..count).map(|s| Ok(self.a2s(q, s)?.scale(&gamma_half(s, prec)))).collect()
    }
}

pub fn wojdylo_a2s(pseries: &TruncSeries, qseries: &TruncSeries, omega: &APComplex, s: usize) -> Result<APComplex> {
    Wojdylo::new(pseries, omega, s)?.a2s(qseries, s)
}

/// Γ(s+1/2)·a_{2s}(q) for s < terms at the context's saddle, so that
/// ∫ e^{−Np}q dz ≈ 2e^{−Np(z*)} Σ_s out[s]/N^{s+1/2}.
pub fn steepest_expansion<F>(ctx: &SaddleContext, q: F, terms: usize) -> Result<Vec<APComplex>>
where
    F: Fn(&APComplex) -> Result<APComplex>,
{
    if terms == 0 {
        return Ok(Vec::new());
    }
    let w = Wojdylo::new(&ctx.pseries, &ctx.omega, terms - 1)?;
    let r = series_radius(&ctx.zstar, None);
    let qs = taylor_coeffs(q, &ctx.zstar, &r, 2 * terms)?;
    w.terms(&qs, terms)
}
