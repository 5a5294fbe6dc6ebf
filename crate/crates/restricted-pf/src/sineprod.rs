//! Sine products ∏_m(θ) = ∏_{j≤m} 2 sin(πjθ), lattice sums S(m;h,k) and the minimal pair D(h,k).

use rug::Float;

use crate::error::{Error, Result};
use crate::numkit::quad::integrate;
use crate::numkit::{bernoulli_number, bernoulli_over_factorial, pi, APComplex};
use crate::specfun::{clausen, cot_deriv, rho_deriv};

/// R_Δ for Δ = 0.006.
pub const R_DELTA: f64 = 131.0;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_hk(h: i64, k: i64) -> Result<()> {
    if k < 2 || h < 1 || h >= k || gcd(h, k) != 1 {
        return Err(Error::Range(format!("need 1 <= h < k with gcd(h,k)=1, got h={h} k={k}")));
    }
    Ok(())
}

/// 2 sin(π r/den), with r reduced mod 2·den first.
fn two_sin_frac(r: i64, den: i64, prec: u32) -> Float {
    let r = r.rem_euclid(2 * den);
    let x = Float::with_val(prec, pi(prec) * r) / den;
    Float::with_val(prec, x.sin()) * 2u32
}

/// ∏_{j=1}^m 2 sin(π j num/den) for arbitrary rational θ = num/den.
pub fn sine_product_frac(num: i64, den: i64, m: u64, prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 1);
    for j in 1..=m as i64 {
        acc *= two_sin_frac(j * num, den, prec);
    }
    acc
}

/// ∏_m^{-1}(num/den).
pub fn sine_product_recip(num: i64, den: i64, m: u64, prec: u32) -> Float {
    Float::with_val(prec, 1) / sine_product_frac(num, den, m, prec)
}

#[derive(Clone, Debug)]
pub struct SineProduct {
    pub value: Float,
    /// true when some factor vanishes (k | jh), in which case `value` is exactly 0
    pub zero_factor: bool,
}

pub fn sine_product(h: i64, k: i64, m: u64, prec: u32) -> Result<SineProduct> {
    check_hk(h, k)?;
    if m >= k as u64 {
        return Ok(SineProduct { value: Float::new(prec), zero_factor: true });
    }
    Ok(SineProduct { value: sine_product_frac(h, k, m, prec), zero_factor: false })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPair {
    pub beta0: i64,
    pub gamma0: i64,
    pub d: i64,
    pub unique: bool,
}

/// Minimal |βγ| over Z(h,k); ties go to the smallest γ, then to β > 0.
pub fn min_pair(h: i64, k: i64) -> Result<MinPair> {
    check_hk(h, k)?;
    let mut best: Option<(i64, i64, i64)> = None;
    let mut count = 0;
    for b in 1..k {
        for beta in [b, -b] {
            let gamma = (beta * h).rem_euclid(k);
            let d = beta.abs() * gamma;
            let cand = (d, gamma, beta);
            match best {
                None => {
                    best = Some(cand);
                    count = 1;
                }
                Some((bd, bg, bb)) => {
                    if d < bd {
                        best = Some(cand);
                        count = 1;
                    } else if d == bd {
                        count += 1;
                        if gamma < bg || (gamma == bg && beta > 0 && bb < 0) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
    }
    let (d, gamma0, beta0) = best.expect("k >= 2");
    Ok(MinPair { beta0, gamma0, d, unique: count == 1 })
}

/// S(m;h,k) = Σ_{Z(h,k)} sin(2πmγ/k)/|βγ|
pub fn s_sum(m: i64, h: i64, k: i64, prec: u32) -> Result<Float> {
    check_hk(h, k)?;
    let mut acc = Float::new(prec);
    let twopi = Float::with_val(prec, pi(prec) * 2u32);
    for b in 1..k {
        for beta in [b, -b] {
            let gamma = (beta * h).rem_euclid(k);
            let arg = Float::with_val(prec, &twopi * (m * gamma).rem_euclid(k)) / k;
            acc += Float::with_val(prec, arg.sin()) / (b * gamma);
        }
    }
    Ok(acc)
}

/// Estimate Cl₂(2πmγ₀/k)/(2πD) of (1/k) log|∏_m^{-1}(h/k)| and its error budget (16.05 + (√2/π) log k)/√k.
pub fn log_product_estimate(m: i64, h: i64, k: i64, prec: u32) -> Result<(Float, Float)> {
    let mp = min_pair(h, k)?;
    let pi = pi(prec);
    let arg = Float::with_val(prec, &pi * 2u32) * (m * mp.gamma0).rem_euclid(k) / k;
    let est = clausen(&arg) / (Float::with_val(prec, &pi * 2u32) * mp.d);
    Ok((est, psi_budget(k, prec)))
}

/// The literal reading Cl₂(2πmγ₀h/k)/(2πD).
pub fn log_product_estimate_literal(m: i64, h: i64, k: i64, prec: u32) -> Result<Float> {
    let mp = min_pair(h, k)?;
    let pi = pi(prec);
    let arg = Float::with_val(prec, &pi * 2u32) * (m * mp.gamma0 * h).rem_euclid(k) / k;
    Ok(clausen(&arg) / (Float::with_val(prec, &pi * 2u32) * mp.d))
}

pub fn psi_budget(k: i64, prec: u32) -> Float {
    let lk = Float::with_val(prec, k).ln();
    let s2 = Float::with_val(prec, 2).sqrt();
    let t = Float::with_val(prec, &s2 / &pi(prec)) * lk + 16.05;
    t / Float::with_val(prec, k).sqrt()
}

/// (1/k) log|∏_m(h/k)| for m = 0..k-1.
pub fn log_products(h: i64, k: i64, prec: u32) -> Result<Vec<Float>> {
    check_hk(h, k)?;
    let mut out = Vec::with_capacity(k as usize);
    let mut acc = Float::new(prec);
    out.push(acc.clone());
    for j in 1..k {
        let s = two_sin_frac(j * h, k, prec);
        acc += Float::with_val(prec, s.abs_ref()).ln();
        out.push(Float::with_val(prec, &acc / k));
    }
    Ok(out)
}

/// Ψ(h,k) = max_m (1/k)|log|∏_m(h/k)||.
pub fn psi(h: i64, k: i64, prec: u32) -> Result<Float> {
    let v = log_products(h, k, prec)?;
    Ok(v.into_iter().map(|x| x.abs()).fold(Float::new(prec), |a, b| if b > a { b } else { a }))
}

/// max_m (1/k) log|∏_m^{-1}(h/k)|, no absolute value.
pub fn psi_signed(h: i64, k: i64, prec: u32) -> Result<Float> {
    let v = log_products(h, k, prec)?;
    Ok(v.into_iter().map(|x| -x).fold(Float::new(prec), |a, b| if b > a { b } else { a }))
}

/// Slack of the uniform log-product estimate: min over (h,m) of budget − |LHS − estimate|.
pub fn psi_min_slack(k: i64, prec: u32) -> Result<(Float, i64, i64)> {
    let budget = psi_budget(k, prec);
    let mut worst: Option<(Float, i64, i64)> = None;
    for h in 1..k {
        if gcd(h, k) != 1 {
            continue;
        }
        let lp = log_products(h, k, prec)?;
        for m in 0..k {
            let (est, _) = log_product_estimate(m, h, k, prec)?;
            let lhs = Float::with_val(prec, -&lp[m as usize]);
            let slack = Float::with_val(prec, &budget - Float::with_val(prec, lhs - est).abs());
            if worst.as_ref().is_none_or(|w| slack < w.0) {
                worst = Some((slack, h, m));
            }
        }
    }
    worst.ok_or_else(|| Error::Range(format!("no coprime h for k={k}")))
}

/// c(h) = h^{1/2} exp(π²h/18 + 1/6)/2
pub fn c_h(h: i64, prec: u32) -> Float {
    let pi = pi(prec);
    let e = Float::with_val(prec, pi.square_ref()) * h / 18u32 + Float::with_val(prec, 1) / 6u32;
    Float::with_val(prec, h).sqrt() * e.exp() / 2u32
}

/// Euler–Maclaurin pieces of ∏_m^{-1}(h/k): the closed main term and T_L, so that
/// ∏_m^{-1} = main · exp(−T_L).
#[derive(Clone, Debug)]
pub struct EmTerms {
    pub main: Float,
    pub tl: Float,
}

pub fn sine_product_em(h: i64, k: i64, m: i64, l: usize, prec: u32) -> Result<EmTerms> {
    check_hk(h, k)?;
    if m < 1 || m * h >= k || l < 1 {
        return Err(Error::Range(format!("need 1 <= m < k/h and L >= 1 (m={m}, h={h}, k={k}, L={l})")));
    }
    let main = em_main_recip(h, k, m, l, prec)?;
    let tl = em_remainder(h, k, m, l, prec)?;
    Ok(EmTerms { main, tl })
}

/// (θ/(2 sin πmθ))^{1/2} exp(Cl₂(2πmθ)/(2πθ)) exp(−Σ_{ℓ<L} B_{2ℓ}/(2ℓ)! (πθ)^{2ℓ−1} cot^{(2ℓ−2)}(πmθ))
pub fn em_main_recip(h: i64, k: i64, m: i64, l: usize, prec: u32) -> Result<Float> {
    let pi = pi(prec);
    let theta = Float::with_val(prec, h) / k;
    let pt = Float::with_val(prec, &pi * &theta);
    let pmt = Float::with_val(prec, &pt * m);
    let s = Float::with_val(prec, pmt.sin_ref()) * 2u32;
    let pre = Float::with_val(prec, &theta / &s).sqrt();
    let cl = clausen(&Float::with_val(prec, &pmt * 2u32));
    let e1 = Float::with_val(prec, cl / (Float::with_val(prec, &pt * 2u32)));
    let mut corr = Float::new(prec);
    let z = APComplex::from_real(pmt.clone());
    for ell in 1..l {
        let b = bernoulli_over_factorial(2 * ell, prec);
        let c = cot_deriv(2 * ell - 2, &z)?.re;
        corr += b * Float::with_val(prec, pt.pow_ref_i(2 * ell as i32 - 1)) * c;
    }
    Ok(pre * Float::with_val(prec, e1 - corr).exp())
}

trait PowI {
    fn pow_ref_i(&self, n: i32) -> Float;
}

impl PowI for Float {
    fn pow_ref_i(&self, n: i32) -> Float {
        use rug::ops::Pow;
        self.clone().pow(n)
    }
}

fn bernoulli_poly_float(n: usize, prec: u32) -> Vec<Float> {
    // ascending coefficients of B_n(t)
    let mut c = vec![Float::new(prec); n + 1];
    let mut binom = rug::Integer::from(1);
    for k in 0..=n {
        c[n - k] = Float::with_val(prec, bernoulli_number(k) * &binom);
        binom *= n - k;
        binom /= k + 1;
    }
    c
}

fn horner(c: &[Float], t: &Float) -> Float {
    let mut acc = Float::new(t.prec());
    for a in c.iter().rev() {
        acc *= t;
        acc += a;
    }
    acc
}

/// T_L(m, h/k) by quadrature on each unit interval, plus the tail integral in closed form.
pub fn em_remainder(h: i64, k: i64, m: i64, l: usize, prec: u32) -> Result<Float> {
    let wp = prec + 32;
    let pi = pi(wp);
    let theta = Float::with_val(wp, h) / k;
    let pt = Float::with_val(wp, &pi * &theta);
    let bp = bernoulli_poly_float(2 * l, wp);
    let b2l = Float::with_val(wp, bernoulli_number(2 * l));
    let fact = Float::with_val(wp, rug::Integer::from(rug::Integer::factorial(2 * l as u32)));
    let tol = Float::with_val(wp, Float::with_val(wp, 1) >> (prec + 4));
    let mut first = Float::new(wp);
    for j in 0..m {
        let f = |x: &Float| -> Result<Float> {
            let frac = Float::with_val(wp, x - j);
            let per = Float::with_val(wp, &b2l - horner(&bp, &frac));
            let y = APComplex::from_real(Float::with_val(wp, x * &pt));
            let r = rho_deriv(2 * l, &y)?.re;
            Ok(per * r)
        };
        first += integrate(&f, &Float::with_val(wp, j), &Float::with_val(wp, j + 1), &tol)?;
    }
    first = first / &fact * Float::with_val(wp, pt.pow_ref_i(2 * l as i32));
    let tail = em_tail(m, l, wp);
    Ok(Float::with_val(prec, first + tail))
}

/// ∫_0^∞ (B_{2L} − B_{2L}({x}))/(2L (x+m)^{2L}) dx
/// = log Γ(m) − (m−½)log m + m − ½ log 2π − Σ_{j<L} B_{2j}/(2j(2j−1)m^{2j−1}).
pub fn em_tail(m: i64, l: usize, prec: u32) -> Float {
    let mf = Float::with_val(prec, m);
    let lg = Float::with_val(prec, mf.ln_gamma_ref());
    let lm = Float::with_val(prec, mf.ln_ref());
    let half = Float::with_val(prec, 0.5);
    let mut acc = lg - Float::with_val(prec, &mf - &half) * lm + &mf;
    let l2pi = Float::with_val(prec, pi(prec) * 2u32).ln();
    acc -= l2pi / 2u32;
    for j in 1..l {
        let b = Float::with_val(prec, bernoulli_number(2 * j));
        let den = Float::with_val(prec, mf.pow_ref_i(2 * j as i32 - 1)) * ((2 * j) * (2 * j - 1)) as u32;
        acc -= b / den;
    }
    acc
}

/// Prop 4.5 region: mh/k ≤ δ or 1/2 − δ ≤ mh/k < 1.
pub fn gprop_applies(h: i64, k: i64, m: i64, delta: f64) -> bool {
    let r = (m * h) as f64 / k as f64;
    r <= delta || (0.5 - delta <= r && r < 1.0)
}

/// Identities relating products at the half points.
#[derive(Clone, Copy, Debug)]
pub enum HalfIdentity {
    /// ∏^{-1}(2/k; a+(k−1)/2) = (−1)^a/√k · ∏^{-1}(1/k;2a)/∏^{-1}(2/k;a)
    TwoOverK { k: i64, a: i64 },
    /// four-factor decomposition of ∏^{-1}((k−1)/2k; m), m even
    KMinusOneOverTwoK { k: i64, m: i64 },
    /// ∏^{-1}((k−1)/2k; N−1−k) = 2(−1)^{(N−k)/2+1} sin(π(N/k−1)/2) ∏^{-1}((k−1)/2k; N−k), N odd
    ParityShift { k: i64, n: i64 },
}

/// Relative residual |lhs − rhs|/|lhs| of the identity.
pub fn half_identities(id: HalfIdentity, prec: u32) -> Result<Float> {
    let r = |num: i64, den: i64, m: i64| sine_product_recip(num, den, m as u64, prec);
    let (lhs, rhs) = match id {
        HalfIdentity::TwoOverK { k, a } => {
            if k % 2 == 0 || k < 3 || a < 0 || a > (k - 1) / 2 {
                return Err(Error::Range(format!("TwoOverK needs odd k >= 3 and 0 <= a <= (k-1)/2 (k={k}, a={a})")));
            }
            let lhs = r(2, k, a + (k - 1) / 2);
            let sign = if a % 2 == 0 { 1 } else { -1 };
            let rhs = r(1, k, 2 * a) / r(2, k, a) / Float::with_val(prec, k).sqrt() * sign;
            (lhs, rhs)
        }
        HalfIdentity::KMinusOneOverTwoK { k, m } => {
            if k % 2 == 0 || m % 2 != 0 || m < 0 || m >= k {
                return Err(Error::Range(format!("needs odd k and even 0 <= m < k (k={k}, m={m})")));
            }
            let lhs = r(k - 1, 2 * k, m);
            let half = r(1, k, m / 2);
            let rhs = r(1, k, m) / r(1, 2 * k, m) * Float::with_val(prec, half.square_ref()) / r(2, k, m / 2);
            (lhs, rhs)
        }
        HalfIdentity::ParityShift { k, n } => {
            if n % 2 == 0 || k % 2 == 0 || k >= n {
                return Err(Error::Range(format!("needs odd N, odd k < N (k={k}, N={n})")));
            }
            let lhs = r(k - 1, 2 * k, n - 1 - k);
            let sign = if ((n - k) / 2 + 1) % 2 == 0 { 1 } else { -1 };
            let arg = Float::with_val(prec, pi(prec) * (n - k)) / (2 * k);
            let rhs = Float::with_val(prec, arg.sin()) * 2u32 * sign * r(k - 1, 2 * k, n - k);
            (lhs, rhs)
        }
    };
    let d = Float::with_val(prec, &lhs - &rhs).abs();
    Ok(d / lhs.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    #[test]
    fn product_examples() {
        assert_eq!(sine_product(1, 5, 0, P).unwrap().value, 1);
        let v = sine_product(1, 5, 4, P).unwrap().value;
        assert!((v - 5u32).abs() < 1e-70);
        let v = sine_product(2, 7, 3, P).unwrap().value;
        let s7 = Float::with_val(P, 7).sqrt();
        assert!((v - s7).abs() < 1e-70);
        assert!(sine_product(1, 5, 5, P).unwrap().zero_factor);
        assert!(sine_product(2, 4, 1, P).is_err());
    }

    #[test]
    fn full_product_identity() {
        // ∏_{k-1}(h/k) = (-1)^{(h-1)(k-1)/2} k
        for k in 2..=60i64 {
            for h in 1..k {
                if gcd(h, k) != 1 {
                    continue;
                }
                let v = sine_product(h, k, (k - 1) as u64, P).unwrap().value;
                let sign = if ((h - 1) * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };
                assert!((v - k * sign).abs() < 1e-60, "h={h} k={k}");
            }
        }
    }

    #[test]
    fn min_pairs() {
        for k in [5, 11, 101] {
            assert_eq!(min_pair(1, k).unwrap().d, 1);
            assert_eq!(min_pair(k - 1, k).unwrap().d, 1);
        }
        assert_eq!(min_pair(2, 7).unwrap().d, 2);
        let mp = min_pair(3, 7).unwrap();
        assert_eq!((mp.beta0, mp.gamma0, mp.d), (-2, 1, 2));
        // uniqueness whenever D < sqrt(k/2)
        for k in [31i64, 101, 211] {
            for h in 1..k {
                if gcd(h, k) == 1 {
                    let mp = min_pair(h, k).unwrap();
                    if ((mp.d * mp.d) as f64) < k as f64 / 2.0 {
                        assert!(mp.unique, "h={h} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn s_sum_values() {
        assert!(s_sum(0, 3, 7, P).unwrap().is_zero());
        // brute force over Z(3,7)
        let mut want = 0.0;
        for b in 1..7i64 {
            for beta in [b, -b] {
                let g = (beta * 3).rem_euclid(7);
                want += (2.0 * std::f64::consts::PI * 3.0 * g as f64 / 7.0).sin() / (b * g) as f64;
            }
        }
        assert!((s_sum(3, 3, 7, P).unwrap().to_f64() - want).abs() < 1e-13);
        // S(m;1,k) ≈ Cl2(2πm/k)
        let k = 101i64;
        let bound = (15.06 + 2.0 * 2f64.sqrt() * (k as f64).ln()) / (k as f64).sqrt();
        for m in 0..k {
            let s = s_sum(m, 1, k, P).unwrap().to_f64();
            let c = clausen(&Float::with_val(P, 2.0 * std::f64::consts::PI * m as f64 / k as f64)).to_f64();
            assert!((s - c).abs() <= bound);
        }
    }

    #[test]
    fn log_products_vs_s_sum() {
        // |(1/k) log|∏^{-1}_m| − S/(2π)| ≤ 40.18 log²k / k
        for k in [11i64, 31, 101] {
            let lk = (k as f64).ln();
            let bound = 40.18 * lk * lk / k as f64;
            for h in 1..k {
                if gcd(h, k) != 1 {
                    continue;
                }
                let lp = log_products(h, k, 64).unwrap();
                for m in 0..k {
                    let s = s_sum(m, h, k, 64).unwrap().to_f64();
                    let diff = (-lp[m as usize].to_f64() - s / (2.0 * std::f64::consts::PI)).abs();
                    assert!(diff <= bound, "h={h} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn psi_budget_holds() {
        for k in [101i64, 211] {
            let (slack, h, m) = psi_min_slack(k, 128).unwrap();
            assert!(slack > 0, "k={k} h={h} m={m}");
        }
    }

    #[test]
    fn estimate_trivial_cases() {
        let (e, _) = log_product_estimate(0, 5, 101, P).unwrap();
        assert!(e.is_zero());
        let (e, _) = log_product_estimate(7, 1, 101, P).unwrap();
        let want = clausen(&(Float::with_val(P, pi(P) * 14u32) / 101u32)) / (pi(P) * 2u32);
        assert!(Float::with_val(P, e - want).abs() < 1e-70);
    }

    #[test]
    fn psi_values() {
        let v = psi(1, 2, P).unwrap();
        let want = Float::with_val(P, 2).ln() / 2u32;
        assert!(Float::with_val(P, v - want).abs() < 1e-70);
        // the plotted values are the signed maximum
        assert!((psi_signed(2, 101, P).unwrap().to_f64() - 0.061391).abs() < 5e-7);
        assert!((psi_signed(50, 101, P).unwrap().to_f64() - 0.0612263).abs() < 5e-8);
        assert!(psi(2, 101, P).unwrap() > psi_signed(2, 101, P).unwrap());
    }

    #[test]
    fn literal_estimate_differs() {
        // with γ₀h the error does not decay; with γ₀ it is 0.04445 at k=101
        let k = 101;
        let (mut good, mut bad) = (0f64, 0f64);
        for h in 1..k {
            let lp = log_products(h, k, 64).unwrap();
            for m in 0..k {
                let t = -lp[m as usize].to_f64();
                good = good.max((t - log_product_estimate(m, h, k, 64).unwrap().0.to_f64()).abs());
                bad = bad.max((t - log_product_estimate_literal(m, h, k, 64).unwrap().to_f64()).abs());
            }
        }
        assert!((good - 0.04445).abs() < 1e-4, "{good}");
        assert!(bad > 0.3, "{bad}");
    }

    #[test]
    fn cor27_bound() {
        let k = 101;
        let budget = psi_budget(k, 64).to_f64();
        let cl = clausen(&Float::with_val(64, std::f64::consts::PI / 3.0)).to_f64();
        for h in 1..k {
            let d = min_pair(h, k).unwrap().d;
            let b = cl / (2.0 * std::f64::consts::PI * d as f64) + budget;
            assert!(psi(h, k, 64).unwrap().to_f64() <= b);
        }
    }

    #[test]
    fn em_identity_is_exact() {
        for (h, k, m, l) in [(1i64, 13i64, 5i64, 1usize), (2, 15, 4, 2), (1, 40, 30, 3), (3, 20, 6, 1)] {
            let t = sine_product_em(h, k, m, l, 128).unwrap();
            let lhs = sine_product_recip(h, k, m as u64, 128);
            let rhs = t.main * Float::with_val(128, -t.tl).exp();
            let rel = Float::with_val(128, (lhs.clone() - rhs) / lhs).abs();
            assert!(rel < 1e-30, "h={h} k={k} m={m} L={l} rel={rel}");
        }
    }

    #[test]
    fn t1_bound() {
        for (h, k) in [(1i64, 30i64), (2, 31), (3, 29)] {
            let bound = std::f64::consts::PI.powi(2) * h as f64 / 18.0 + 1.0 / 12.0;
            for m in 1..=((k - 1) / h) {
                if m * h >= k {
                    break;
                }
                let t = sine_product_em(h, k, m, 1, 96).unwrap();
                assert!(t.tl.to_f64().abs() <= bound, "h={h} k={k} m={m}");
            }
        }
    }

    #[test]
    fn em_main_matches_for_large_arguments() {
        // h=2, k=801, m=199: main term agrees with the exact product far inside e^{WN/2}
        let (h, k, n) = (2i64, 801i64, 1000i64);
        let m = n - k;
        let l = (std::f64::consts::PI * std::f64::consts::E * 0.006 * n as f64 / h as f64).floor() as usize;
        let main = em_main_recip(h, k, m, l, P).unwrap();
        let exact = sine_product_recip(h, k, m as u64, P);
        let err = Float::with_val(P, &main - &exact).abs().to_f64();
        assert!(err < (0.05 * n as f64 / 2.0).exp());
        assert!(err / exact.to_f64().abs() < 1e-30);
    }

    #[test]
    fn gprop_bound_holds() {
        let (w, delta) = (0.05, 0.01);
        for k in [101i64, 211] {
            for h in 1..6i64 {
                if gcd(h, k) != 1 {
                    continue;
                }
                let bound = c_h(h, 64).to_f64() * (k as f64 * w / h as f64).exp();
                for m in 0..k {
                    if gprop_applies(h, k, m, delta) {
                        let v = sine_product_recip(h, k, m as u64, 64).to_f64();
                        assert!(v <= bound, "h={h} k={k} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn half_identities_hold() {
        for a in 0..=3 {
            assert!(half_identities(HalfIdentity::TwoOverK { k: 7, a }, P).unwrap() < 1e-70);
        }
        let v = sine_product_recip(2, 7, 3, P);
        assert!(Float::with_val(P, v - Float::with_val(P, 7).sqrt().recip()).abs() < 1e-70);
        for m in [0, 2, 4, 10, 12] {
            assert!(half_identities(HalfIdentity::KMinusOneOverTwoK { k: 13, m }, P).unwrap() < 1e-70);
        }
        assert!(half_identities(HalfIdentity::ParityShift { k: 11, n: 15 }, P).unwrap() < 1e-70);
        assert!(half_identities(HalfIdentity::ParityShift { k: 11, n: 16 }, P).is_err());
        assert!(half_identities(HalfIdentity::KMinusOneOverTwoK { k: 13, m: 3 }, P).is_err());
    }
}
