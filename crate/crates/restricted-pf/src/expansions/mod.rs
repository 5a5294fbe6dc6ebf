//! Asymptotic expansions of the subset sums over C′, C*, D and E as series in 1/N
//! around a saddle-point exponential.

pub mod kernels;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numkit::{pi, shift_series_basis, taylor_coeffs_multi, APComplex};
use crate::rademacher::{subset_sum, SubsetTag};
use crate::saddle::{gamma_half, saddle_point_with_order, series_radius, Wojdylo};

pub use kernels::{g_kernel, phi_series, prefactor, u_coeff, u_series, KernelFamily, Prefactor, UKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionKind {
    C2,
    C2Star,
    D1Odd,
    D1Even,
    E1,
}

impl ExpansionKind {
    pub const ALL: [ExpansionKind; 5] =
        [ExpansionKind::C2, ExpansionKind::C2Star, ExpansionKind::D1Odd, ExpansionKind::D1Even, ExpansionKind::E1];

    pub fn name(self) -> &'static str {
        match self {
            ExpansionKind::C2 => "C2",
            ExpansionKind::C2Star => "C2*",
            ExpansionKind::D1Odd => "D1-odd",
            ExpansionKind::D1Even => "D1-even",
            ExpansionKind::E1 => "E1",
        }
    }

    /// (d, m) of the saddle.
    pub fn saddle(self) -> (i64, i64) {
        match self {
            ExpansionKind::C2 | ExpansionKind::E1 => (0, 2),
            ExpansionKind::C2Star => (1, 3),
            ExpansionKind::D1Odd | ExpansionKind::D1Even => (0, 1),
        }
    }

    fn half_phase(self) -> bool {
        matches!(self, ExpansionKind::D1Odd | ExpansionKind::D1Even)
    }

    pub fn subset(self) -> SubsetTag {
        match self {
            ExpansionKind::C2 => SubsetTag::Cprime,
            ExpansionKind::C2Star => SubsetTag::Cstar,
            ExpansionKind::D1Odd | ExpansionKind::D1Even => SubsetTag::D,
            ExpansionKind::E1 => SubsetTag::E,
        }
    }

    /// Required parity of N, if any.
    pub fn parity(self) -> Option<i64> {
        match self {
            ExpansionKind::D1Odd => Some(1),
            ExpansionKind::D1Even => Some(0),
            _ => None,
        }
    }

    /// The D1 expansion matching the parity of N; other kinds unchanged.
    pub fn for_n(self, n: i64) -> Self {
        match self {
            ExpansionKind::D1Odd | ExpansionKind::D1Even if n % 2 == 0 => ExpansionKind::D1Even,
            ExpansionKind::D1Odd | ExpansionKind::D1Even => ExpansionKind::D1Odd,
            k => k,
        }
    }

    fn ukind(self) -> UKind {
        match self {
            ExpansionKind::C2 | ExpansionKind::E1 => UKind::C,
            ExpansionKind::C2Star => UKind::Cstar,
            _ => UKind::D,
        }
    }

    fn prefactor(self) -> Prefactor {
        match self {
            ExpansionKind::C2 | ExpansionKind::E1 => Prefactor::QC,
            ExpansionKind::C2Star => Prefactor::QCstar,
            ExpansionKind::D1Odd => Prefactor::QD,
            ExpansionKind::D1Even => Prefactor::QDstar,
        }
    }

    pub fn calibration_ns(self) -> [i64; 2] {
        match self {
            ExpansionKind::D1Odd => [401, 403],
            ExpansionKind::D1Even => [400, 402],
            _ => [400, 401],
        }
    }
}

impl std::fmt::Display for ExpansionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExpansionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', ' '], "-").as_str() {
            "c2" | "c" | "cprime" => Ok(ExpansionKind::C2),
            "c2*" | "c2star" | "c2-star" | "cstar" => Ok(ExpansionKind::C2Star),
            "d1-odd" | "d1odd" | "d" | "d1" => Ok(ExpansionKind::D1Odd),
            "d1-even" | "d1even" => Ok(ExpansionKind::D1Even),
            "e1" | "e" => Ok(ExpansionKind::E1),
            _ => Err(Error::Range(format!("unknown expansion {s}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Calibration {
    pub ns: [i64; 2],
    /// summed |approx − direct| with the sign kept and with it flipped
    pub err_kept: f64,
    pub err_flipped: f64,
    pub flipped: bool,
}

#[derive(Clone, Debug)]
pub struct ExpansionResult {
    pub kind: ExpansionKind,
    pub sigma: i64,
    pub zstar: APComplex,
    /// the exponential base: w(d, −m), or √w for D1
    pub w: APComplex,
    pub log_w: APComplex,
    /// coefficients of w^{−N}/N^{t+2}
    pub coeffs: Vec<APComplex>,
    pub closed_form: APComplex,
    /// +1 if coeffs[0] ≈ closed_form, −1 if ≈ −closed_form
    pub closed_form_sign: i32,
    pub calibration: Option<Calibration>,
}

impl ExpansionResult {
    pub fn prec(&self) -> u32 {
        self.zstar.prec()
    }

    /// Re[w^{−N} N^{−2} Σ_{t<m} c_t N^{−t}]
    pub fn eval(&self, n: i64, m: usize) -> Result<Float> {
        if m == 0 || m > self.coeffs.len() {
            return Err(Error::InsufficientArgs { needed: m.max(1), got: self.coeffs.len() });
        }
        if n < 1 {
            return Err(Error::Range(format!("N = {n}")));
        }
        if let Some(par) = self.kind.parity() {
            if n.rem_euclid(2) != par {
                return Err(Error::Range(format!("{} needs N of parity {par}, got {n}", self.kind)));
            }
        }
        let p = self.prec();
        let nf = Float::with_val(p, n);
        let inv = Float::with_val(p, nf.recip_ref());
        // Horner in 1/N
        let mut acc = APComplex::zero(p);
        for c in self.coeffs[..m].iter().rev() {
            acc = &acc.scale(&inv) + c;
        }
        let e = (-&self.log_w.scale(&nf)).exp();
        let inv2 = Float::with_val(p, inv.square_ref());
        Ok((&e * &acc).scale(&inv2).re)
    }

    /// |w^{−N} c_t/N^{t+2}|, the size of the term dropped when truncating at m = t.
    pub fn term_abs(&self, n: i64, t: usize) -> Result<f64> {
        let c = self.coeffs.get(t).ok_or(Error::InsufficientArgs { needed: t + 1, got: self.coeffs.len() })?;
        let p = self.prec();
        let nf = Float::with_val(p, n);
        let mag = (-Float::with_val(p, &self.log_w.re * &nf)).exp() * c.abs();
        Ok((mag / nf.pow(t as u32 + 2)).to_f64())
    }

    /// Compares the two signs against direct sums at two mid-size N and keeps the better one.
    pub fn calibrate(&mut self) -> Result<&Calibration> {
        let p = self.prec();
        let ns = self.kind.calibration_ns();
        let m = self.coeffs.len().min(3);
        let (mut kept, mut flipped) = (0.0, 0.0);
        for n in ns {
            let direct = subset_sum(self.kind.subset(), self.sigma, n, p)?.re;
            let a = self.eval(n, m)?;
            kept += Float::with_val(p, &a - &direct).abs().to_f64();
            flipped += Float::with_val(p, &a + &direct).abs().to_f64();
        }
        let flip = flipped < kept;
        if flip {
            for c in self.coeffs.iter_mut() {
                *c = -&*c;
            }
            self.closed_form_sign = -self.closed_form_sign;
        }
        self.calibration = Some(Calibration { ns, err_kept: kept, err_flipped: flipped, flipped: flip });
        Ok(self.calibration.as_ref().expect("just set"))
    }
}

/// Amplitudes A_0, …, A_tmax at z: the N^{−j} coefficients of the integrand's slowly varying part.
fn amplitudes(kind: ExpansionKind, sigma: i64, tmax: usize, z: &APComplex) -> Result<Vec<APComplex>> {
    let q = prefactor(kind.prefactor(), z)?;
    let q = match kind {
        ExpansionKind::C2Star | ExpansionKind::D1Even => q.mul_i(),
        _ => q,
    };
    let u = u_series(kind.ukind(), sigma, tmax, z)?;
    if kind != ExpansionKind::E1 {
        return Ok(u.iter().map(|uj| &q * uj).collect());
    }
    let phi: Vec<APComplex> = (0..=tmax).map(|k| phi_series(sigma, k, z)).collect::<Result<_>>()?;
    Ok((0..=tmax)
        .map(|j| {
            let mut s = APComplex::zero(z.prec());
            for k in 0..=j {
                s += &phi[k] * &u[j - k];
            }
            &q * &s
        })
        .collect())
}

/// Closed form of the leading coefficient, up to sign.
fn leading_closed_form(kind: ExpansionKind, z: &APComplex) -> APComplex {
    let p = z.prec();
    let e = z.scale(&pi(p)).mul_i().scale_f64(-1.0).exp(); // e^{−πiz}
    match kind {
        ExpansionKind::C2 => (z * &e).scale_f64(-0.5),
        ExpansionKind::C2Star => (z * &e).scale_f64(-0.25),
        ExpansionKind::E1 => (z * &e).scale_f64(-1.5),
        ExpansionKind::D1Odd | ExpansionKind::D1Even => {
            let one = APComplex::one(p);
            let f = if kind == ExpansionKind::D1Odd { &e - &one } else { &e + &one };
            z * &(&e * &f).scale_f64(2.0).sqrt()
        }
    }
}

/// Coefficients c_0, …, c_tmax of the expansion, checked against the closed-form leading term.
/// The overall sign is left as produced by principal branches; see [`ExpansionResult::calibrate`].
pub fn coeff_table(kind: ExpansionKind, sigma: i64, tmax: usize, prec: u32) -> Result<ExpansionResult> {
    let wp = prec + 64;
    let (d, m) = kind.saddle();
    let ctx = saddle_point_with_order(d, m, wp, 2 * tmax + 4)?;
    let zs = ctx.zstar.clone();
    let pval = ctx.value();
    let (pseries, log_w) = if kind.half_phase() {
        let h = APComplex::from_f64(wp, 0.5, 0.0);
        (ctx.pseries.scale(&h), pval.scale_f64(0.5))
    } else {
        (ctx.pseries.clone(), pval.clone())
    };
    let r = series_radius(&zs, Some(kind.prefactor().strip()));
    let qs = taylor_coeffs_multi(|z| amplitudes(kind, sigma, tmax, z), &zs, &r, 2 * tmax + 2)?;
    let wj = Wojdylo::new(&pseries, &ctx.omega, tmax)?;
    let gam: Vec<Float> = (0..=tmax).map(|s| gamma_half(s, wp)).collect();
    let mut beta = Vec::with_capacity(tmax + 1);
    for t in 0..=tmax {
        let mut acc = APComplex::zero(wp);
        for s in 0..=t {
            acc += wj.a2s(&qs[t - s], s)?.scale(&gam[s]);
        }
        beta.push(acc);
    }

    let half_exp = |x: &APComplex| (-&x.scale_f64(0.5)).exp();
    let coeffs: Vec<APComplex> = match kind {
        ExpansionKind::C2 => beta,
        ExpansionKind::E1 => beta.iter().map(|b| b.scale_f64(2.0)).collect(),
        ExpansionKind::C2Star => {
            // basis w^{−(N+1/2)}/(N+1/2)^{t+2}
            let f = half_exp(&pval).scale_f64(0.5);
            let cc: Vec<APComplex> = beta.iter().map(|b| &f * b).collect();
            shift_series_basis(&cc, &Rational::from((1, 2)))
        }
        ExpansionKind::D1Odd => beta.iter().map(|b| b.scale_f64(-2.0)).collect(),
        ExpansionKind::D1Even => {
            // basis √w^{−(N+1)}/(N+1)^{t+2}
            let f = half_exp(&pval).scale_f64(-2.0);
            let dd: Vec<APComplex> = beta.iter().map(|b| &f * b).collect();
            shift_series_basis(&dd, &Rational::from(1))
        }
    };

    let closed = leading_closed_form(kind, &zs);
    let c0 = &coeffs[0];
    let gap = (&c0.square() - &closed.square()).abs() / closed.square().abs();
    if gap.get_exp().unwrap_or(i32::MIN) > -((prec / 2) as i32) && !gap.is_zero() {
        return Err(Error::Gate(format!("{kind} leading term: relative gap {:e} in the squares", gap.to_f64())));
    }
    let sign = if (c0 - &closed).abs() < (c0 + &closed).abs() { 1 } else { -1 };

    let w = log_w.exp();
    Ok(ExpansionResult {
        kind,
        sigma,
        zstar: zs.with_prec(prec),
        w: w.with_prec(prec),
        log_w: log_w.with_prec(prec),
        coeffs: coeffs.iter().map(|c| c.with_prec(prec)).collect(),
        closed_form: closed.with_prec(prec),
        closed_form_sign: sign,
        calibration: None,
    })
}

/// Coefficient table with its sign calibrated against direct sums.
pub fn calibrated_table(kind: ExpansionKind, sigma: i64, tmax: usize, prec: u32) -> Result<ExpansionResult> {
    let mut r = coeff_table(kind, sigma, tmax, prec)?;
    r.calibrate()?;
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub kind: ExpansionKind,
    pub n: i64,
    /// approximation using the first m coefficients, m = 1, 2, …
    pub approx: Vec<Float>,
    pub direct: Float,
}

impl Comparison {
    pub fn rel_err(&self, m: usize) -> f64 {
        let p = self.direct.prec();
        let d = Float::with_val(p, &self.approx[m - 1] - &self.direct).abs();
        (d / self.direct.clone().abs()).to_f64()
    }
}

/// Truncations m = 1..=mmax at N against the direct subset sum.
pub fn compare(res: &ExpansionResult, n: i64, mmax: usize) -> Result<Comparison> {
    let approx = (1..=mmax).map(|m| res.eval(n, m)).collect::<Result<Vec<_>>>()?;
    let direct = subset_sum(res.kind.subset(), res.sigma, n, res.prec())?.re;
    Ok(Comparison { kind: res.kind, n, approx, direct })
}
