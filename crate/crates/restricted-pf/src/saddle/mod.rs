//! The phase functions p_d, their saddle points, polygonal paths through them and the
//! saddle-point expansion coefficients.

pub mod path;
pub mod ray;
pub mod wojdylo;

use rug::Float;

use crate::error::{Error, Result};
use crate::numkit::{pi, taylor_coeffs, APComplex, TruncSeries};
use crate::specfun::{dilog, dilog_zero};

pub use path::{build_path, verify_path, PathKind, PathSpec, VerifyReport};
pub use ray::{ray_cell_bounds, ray_deriv_bounds, ray_exact, CellBound, RayDeriv};
pub use wojdylo::{gamma_half, steepest_expansion, wojdylo_a2s, Wojdylo};

/// Taylor order used for the phase series when none is requested.
pub const DEFAULT_SERIES_ORDER: usize = 24;

fn two_pi_i(prec: u32) -> APComplex {
    APComplex::from_real(Float::with_val(prec, pi(prec) * 2u32)).mul_i()
}

fn on_cut(z: &APComplex) -> bool {
    z.is_zero() || (z.re.is_integer() && z.im <= 0)
}

fn check_off_cut(z: &APComplex) -> Result<()> {
    if on_cut(z) {
        return Err(Error::Pole(format!("p_d on a branch cut at {z}")));
    }
    Ok(())
}

/// Li₂(e^{2πiz}) and e^{2πiz} at working precision.
fn li2_exp(z: &APComplex, wp: u32) -> (APComplex, APComplex) {
    let zz = z.with_prec(wp);
    let x = (&two_pi_i(wp) * &zz).exp();
    (dilog(&x), x)
}

fn const_term(d: i64, wp: u32) -> APComplex {
    // Li₂(1) + 4π²d
    let p2 = Float::with_val(wp, pi(wp).square_ref());
    let c = Float::with_val(wp, &p2 / 6u32) + Float::with_val(wp, &p2 * (4 * d));
    APComplex::from_real(c)
}

/// p_d(z) = (−Li₂(e^{2πiz}) + Li₂(1) + 4π²d)/(2πiz).
pub fn p_d(d: i64, z: &APComplex) -> Result<APComplex> {
    check_off_cut(z)?;
    let p = z.prec();
    let wp = p + 16;
    let (li, _) = li2_exp(z, wp);
    let num = &const_term(d, wp) - &li;
    let den = &two_pi_i(wp) * &z.with_prec(wp);
    Ok((&num / &den).with_prec(p))
}

/// p_d′ from 2πiz²p_d′(z) = Li₂(e^{2πiz}) − Li₂(1) − 4π²d + 2πiz·log(1 − e^{2πiz}).
pub fn p_d_deriv(d: i64, z: &APComplex) -> Result<APComplex> {
    check_off_cut(z)?;
    let p = z.prec();
    let wp = p + 16;
    let zz = z.with_prec(wp);
    let (li, x) = li2_exp(z, wp);
    let tpi = two_pi_i(wp);
    let l = (&APComplex::one(wp) - &x).ln();
    let num = &(&li - &const_term(d, wp)) + &(&(&tpi * &zz) * &l);
    let den = &tpi * &zz.square();
    Ok((&num / &den).with_prec(p))
}

/// p″(z) = −(2p′(z) + 2πi e^{2πiz}/(1 − e^{2πiz}))/z
pub fn p_d_second(d: i64, z: &APComplex) -> Result<APComplex> {
    let p = z.prec();
    let wp = p + 16;
    let zz = z.with_prec(wp);
    let d1 = p_d_deriv(d, &zz)?;
    let x = (&two_pi_i(wp) * &zz).exp();
    let frac = &(&two_pi_i(wp) * &x) / &(&APComplex::one(wp) - &x);
    let s = &d1.scale_f64(2.0) + &frac;
    Ok((-&(&s / &zz)).with_prec(p))
}

/// Distance from z to the cut set ⋃ₙ (−i∞, n].
pub fn cut_distance(z: &APComplex) -> f64 {
    let (x, y) = z.to_c64();
    let mut best = f64::INFINITY;
    for n in [x.floor(), x.ceil()] {
        let dx = x - n;
        let dist = if y >= 0.0 { dx.hypot(y) } else { dx.abs() };
        best = best.min(dist);
    }
    best
}

/// Radius for Cauchy-sum Taylor expansions at z that stays inside `strip` and away from the cuts.
pub fn series_radius(z: &APComplex, strip: Option<(f64, f64)>) -> Float {
    let mut r = cut_distance(z);
    if let Some((lo, hi)) = strip {
        let x = z.to_c64().0;
        r = r.min(x - lo).min(hi - x);
    }
    Float::with_val(z.prec(), 0.4 * r)
}

#[derive(Clone, Debug)]
pub struct SaddleContext {
    pub d: i64,
    pub m: i64,
    pub zstar: APComplex,
    /// w(d, −m)
    pub w: APComplex,
    /// p_d around zstar
    pub pseries: TruncSeries,
    /// path direction through zstar
    pub omega: APComplex,
}

impl SaddleContext {
    /// |p_d′(z*)|
    pub fn residual(&self) -> Result<Float> {
        Ok(p_d_deriv(self.d, &self.zstar)?.abs())
    }

    /// p_d(z*), equal to log w.
    pub fn value(&self) -> APComplex {
        self.pseries.coeff(0)
    }

    /// p₀, the quadratic Taylor coefficient at z*.
    pub fn p0(&self) -> APComplex {
        self.pseries.coeff(2)
    }
}

pub fn saddle_point(d: i64, m: i64, prec: u32) -> Result<SaddleContext> {
    saddle_point_with_order(d, m, prec, DEFAULT_SERIES_ORDER)
}

/// z* = m + log(1 − w(d,−m))/(2πi), with its p_d series to the given order.
pub fn saddle_point_with_order(d: i64, m: i64, prec: u32, order: usize) -> Result<SaddleContext> {
    let wp = prec + 32;
    let wz = dilog_zero(d, -m, wp)?;
    let w = wz.w;
    let l = (&APComplex::one(wp) - &w).ln();
    let zstar = &APComplex::from_int(wp, m) + &(&l / &two_pi_i(wp));
    let zs = zstar.with_prec(prec);
    let r = series_radius(&zs, None);
    let pseries = taylor_coeffs(|z| p_d(d, z), &zs, &r, order)?;
    let res = p_d_deriv(d, &zstar)?.abs();
    if res.get_exp().unwrap_or(i32::MIN) > -(prec as i32 - 40) {
        return Err(Error::NonConvergence { what: format!("saddle ({d},{m})"), residual: res.to_f64() });
    }
    Ok(SaddleContext { d, m, omega: zs.clone(), zstar: zs, w: w.with_prec(prec), pseries })
}
