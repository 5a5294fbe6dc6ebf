use rug::ops::Pow;
use rug::{Float, Rational};

use super::comb::binomial_rat;
use super::complex::{pi, APComplex};
use crate::error::{Error, Result};

/// Σ coeffs[n] (z - center)^n, truncated at `order()` terms.
#[derive(Clone, Debug)]
pub struct TruncSeries {
    pub center: APComplex,
    pub coeffs: Vec<APComplex>,
}

impl TruncSeries {
    pub fn new(center: APComplex, coeffs: Vec<APComplex>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        TruncSeries { center, coeffs }
    }

    pub fn constant(center: APComplex, c: APComplex, order: usize) -> Self {
        let p = c.prec();
        let mut coeffs = vec![APComplex::zero(p); order];
        coeffs[0] = c;
        TruncSeries { center, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn prec(&self) -> u32 {
        self.coeffs[0].prec()
    }

    pub fn coeff(&self, n: usize) -> APComplex {
        self.coeffs.get(n).cloned().unwrap_or_else(|| APComplex::zero(self.prec()))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(order.max(1));
        TruncSeries { center: self.center.clone(), coeffs: c }
    }

    pub fn add(&self, o: &TruncSeries) -> Self {
        let n = self.order().min(o.order());
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect();
        TruncSeries { center: self.center.clone(), coeffs }
    }

    pub fn scale(&self, c: &APComplex) -> Self {
        TruncSeries { center: self.center.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &TruncSeries) -> Self {
        let n = self.order().min(o.order());
        let p = self.prec().min(o.prec());
        let mut out = vec![APComplex::zero(p); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                out[i + j] += &self.coeffs[i] * &o.coeffs[j];
            }
        }
        TruncSeries { center: self.center.clone(), coeffs: out }
    }

    /// exp of the series, via f' = f·s'.
    pub fn exp(&self) -> Self {
        let n = self.order();
        let p = self.prec();
        let mut out = vec![APComplex::zero(p); n];
        out[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = APComplex::zero(p);
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc += (&self.coeffs[j] * &out[k - j]).scale_f64(j as f64);
            }
            out[k] = acc.scale(&(Float::with_val(p, 1) / Float::with_val(p, k)));
        }
        TruncSeries { center: self.center.clone(), coeffs: out }
    }

    pub fn eval(&self, z: &APComplex) -> APComplex {
        let t = z - &self.center;
        let mut acc = APComplex::zero(self.prec());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &t) + c;
        }
        acc
    }
}

/// Taylor coefficients of `f` around `center` by trapezoidal Cauchy sums on a circle.
pub fn taylor_coeffs<F>(f: F, center: &APComplex, radius: &Float, order: usize) -> Result<TruncSeries>
where
    F: Fn(&APComplex) -> Result<APComplex>,
{
    let mut v = taylor_coeffs_multi(|z| Ok(vec![f(z)?]), center, radius, order)?;
    Ok(v.remove(0))
}

/// Vector-valued variant: one sample of `f` serves every component.
pub fn taylor_coeffs_multi<F>(f: F, center: &APComplex, radius: &Float, order: usize) -> Result<Vec<TruncSeries>>
where
    F: Fn(&APComplex) -> Result<Vec<APComplex>>,
{
    let prec = center.prec();
    let order = order.max(1);
    let tol_bits = (prec - prec / 8) as i32;
    let mut n = (4 * order).max(16);
    let mut prev: Option<Vec<Vec<APComplex>>> = None;
    let mut last_res = f64::INFINITY;
    for _ in 0..7 {
        let (scaled, fmax) = circle_pass(&f, center, radius, order, n)?;
        if let Some(pv) = &prev {
            let mut diff = Float::new(prec);
            for (a, b) in scaled.iter().zip(pv) {
                for (x, y) in a.iter().zip(b) {
                    let d = (x - y).abs();
                    if d > diff {
                        diff = d;
                    }
                }
            }
            let scale = if fmax.is_zero() { Float::with_val(prec, 1) } else { fmax };
            let rel = Float::with_val(prec, &diff / &scale);
            last_res = rel.to_f64();
            if rel.is_zero() || rel.get_exp().unwrap_or(i32::MIN) < -tol_bits {
                return Ok(unscale(scaled, center, radius));
            }
        }
        prev = Some(scaled);
        n *= 2;
    }
    Err(Error::NonConvergence { what: "taylor_coeffs".into(), residual: last_res })
}

// Returns c_k r^k for each component, and max |f| on the circle.
fn circle_pass<F>(f: &F, center: &APComplex, radius: &Float, order: usize, n: usize) -> Result<(Vec<Vec<APComplex>>, Float)>
where
    F: Fn(&APComplex) -> Result<Vec<APComplex>>,
{
    let prec = center.prec();
    let twopi = Float::with_val(prec, pi(prec) * 2u32);
    let mut acc: Vec<Vec<APComplex>> = Vec::new();
    let mut fmax = Float::new(prec);
    let inv_n = Float::with_val(prec, 1) / Float::with_val(prec, n);
    for j in 0..n {
        let theta = Float::with_val(prec, &twopi * j) / Float::with_val(prec, n);
        let e = APComplex::cis(&theta);
        let z = center + &e.scale(radius);
        let vals = f(&z)?;
        if acc.is_empty() {
            acc = vec![vec![APComplex::zero(prec); order]; vals.len()];
        }
        let einv = e.conj();
        for (c, v) in vals.iter().enumerate() {
            let a = v.abs();
            if a > fmax {
                fmax = a;
            }
            let mut w = v.clone();
            for slot in acc[c].iter_mut() {
                *slot += &w;
                w = &w * &einv;
            }
        }
    }
    for comp in acc.iter_mut() {
        for slot in comp.iter_mut() {
            *slot = slot.scale(&inv_n);
        }
    }
    Ok((acc, fmax))
}

fn unscale(scaled: Vec<Vec<APComplex>>, center: &APComplex, radius: &Float) -> Vec<TruncSeries> {
    let prec = center.prec();
    let rinv = Float::with_val(prec, 1) / radius;
    scaled
        .into_iter()
        .map(|comp| {
            let mut rk = Float::with_val(prec, 1);
            let coeffs = comp
                .into_iter()
                .map(|c| {
                    let v = c.scale(&rk);
                    rk *= &rinv;
                    v
                })
                .collect();
            TruncSeries::new(center.clone(), coeffs)
        })
        .collect()
}

/// Converts Σ α_j/(N+a)^{j+2} into Σ β_t/N^{t+2}.
pub fn shift_series_basis(alphas: &[APComplex], a: &Rational) -> Vec<APComplex> {
    let Some(first) = alphas.first() else { return Vec::new() };
    let prec = first.prec();
    (0..alphas.len())
        .map(|t| {
            let mut acc = APComplex::zero(prec);
            for (j, aj) in alphas.iter().enumerate().take(t + 1) {
                let r = t - j;
                let b = binomial_rat(&Rational::from(-(j as i64) - 2), r);
                let apow = a.clone().pow(r as i32);
                acc += aj.scale_rat(&(b * apow));
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    #[test]
    fn exp_taylor() {
        let c = APComplex::zero(P);
        let s = taylor_coeffs(|z| Ok(z.exp()), &c, &Float::with_val(P, 0.5), 12).unwrap();
        let mut fact = Float::with_val(P, 1);
        for k in 0..12 {
            if k > 0 {
                fact *= k;
            }
            let want = Float::with_val(P, 1) / &fact;
            let err = Float::with_val(P, &s.coeffs[k].re - &want).abs();
            assert!(err.get_exp().unwrap_or(i32::MIN) < -(P as i32 - 40), "k={k}");
            assert!(s.coeffs[k].im.clone().abs() < 1e-60);
        }
    }

    #[test]
    fn sin_taylor_within_precision() {
        let c = APComplex::zero(P);
        let s = taylor_coeffs(|z| Ok(z.sin()), &c, &Float::with_val(P, 1), 9).unwrap();
        let want = [0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0, 0.0, -1.0 / 5040.0, 0.0];
        for (k, w) in want.iter().enumerate() {
            assert!((s.coeffs[k].re.to_f64() - w).abs() < 1e-15);
        }
        let err = Float::with_val(P, &s.coeffs[3].re + Float::with_val(P, 1) / 6u32).abs();
        assert!(err.get_exp().unwrap_or(i32::MIN) < -(P as i32 - 8));
    }

    #[test]
    fn geometric_taylor() {
        let c = APComplex::zero(P);
        let one = APComplex::one(P);
        let s = taylor_coeffs(|z| Ok((&one - z).recip()), &c, &Float::with_val(P, 0.4), 10).unwrap();
        for k in 0..10 {
            assert!((s.coeffs[k].re.to_f64() - 1.0).abs() < 1e-40);
        }
    }

    #[test]
    fn series_exp_matches_direct() {
        let c = APComplex::zero(P);
        let s = TruncSeries::new(c.clone(), vec![APComplex::from_f64(P, 0.2, 0.1), APComplex::from_f64(P, 1.0, 0.0), APComplex::from_f64(P, 0.0, 0.5), APComplex::zero(P), APComplex::zero(P), APComplex::zero(P)]);
        let e = s.exp();
        let z = APComplex::from_f64(P, 0.01, 0.0);
        let direct = s.eval(&z).exp();
        assert!((&e.eval(&z) - &direct).abs().to_f64() < 1e-11);
    }

    #[test]
    fn shift_identity_and_known() {
        let al: Vec<APComplex> = [1.0, 2.0, 3.0].iter().map(|&x| APComplex::from_f64(P, x, 0.0)).collect();
        let b = shift_series_basis(&al, &Rational::new());
        for (x, y) in al.iter().zip(&b) {
            assert_eq!(x, y);
        }
        let al = vec![APComplex::one(P), APComplex::zero(P), APComplex::zero(P)];
        let b = shift_series_basis(&al, &Rational::from((1, 2)));
        let want = [1.0, -1.0, 0.75];
        for (x, w) in b.iter().zip(want) {
            assert!((x.re.to_f64() - w).abs() < 1e-30);
        }
    }

    #[test]
    fn shift_a1_matches_alternating_binomials() {
        let al: Vec<APComplex> = (0..6).map(|x| APComplex::from_f64(P, 1.0 + x as f64, -0.5 * x as f64)).collect();
        let b = shift_series_basis(&al, &Rational::from(1));
        for t in 0..6usize {
            let mut acc = APComplex::zero(P);
            for j in 0..=t {
                let bin = rug::Integer::from(rug::Integer::binomial_u((t + 1) as u32, (j + 1) as u32));
                let s = if (t - j) % 2 == 0 { 1 } else { -1 };
                acc += al[j].scale(&Float::with_val(P, bin * s));
            }
            assert!((&acc - &b[t]).abs().to_f64() < 1e-40);
        }
    }

    #[test]
    fn shift_roundtrip_numeric() {
        let al: Vec<APComplex> = [1.3, -0.7, 2.1, 0.4, -1.1].iter().map(|&x| APComplex::from_f64(P, x, 0.0)).collect();
        let a = Rational::from((1, 2));
        let b = shift_series_basis(&al, &a);
        for n in [50.0f64, 100.0, 200.0] {
            let lhs: f64 = al.iter().enumerate().map(|(j, x)| x.re.to_f64() / (n + 0.5).powi(j as i32 + 2)).sum();
            let rhs: f64 = b.iter().enumerate().map(|(j, x)| x.re.to_f64() / n.powi(j as i32 + 2)).sum();
            // next omitted term is O(N^{-7})
            assert!((lhs - rhs).abs() < 50.0 / n.powi(7));
        }
    }
}
