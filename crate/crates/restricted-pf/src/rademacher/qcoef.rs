use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::farey::FareyFrac;
use crate::error::{Error, Result};
use crate::numkit::{bernoulli_number, bernoulli_poly, binomial_rat, pi, APComplex};
use crate::sineprod::sine_product_recip;

/// Largest N for which the exact recursion runs unless asked otherwise.
pub const EXACT_CAP: i64 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QMethod {
    ExactRecursion,
    SimplePole,
    DoublePole,
    LogSeries,
}

#[derive(Clone, Debug)]
pub struct QValue {
    pub frac: FareyFrac,
    pub sigma: i64,
    pub n: i64,
    pub value: APComplex,
    pub method: QMethod,
}

/// e^{πi num/den}
pub fn phase(num: i64, den: i64, prec: u32) -> APComplex {
    let r = num.rem_euclid(2 * den);
    let x = Float::with_val(prec, pi(prec) * r) / den;
    APComplex::cis(&x)
}

fn frac(h: i64, k: i64) -> Result<FareyFrac> {
    FareyFrac::new(h, k).ok_or_else(|| Error::Range(format!("{h}/{k} is not a reduced fraction in [0,1)")))
}

/// E_k(N,m;r) for 0 ≤ m < N, 0 ≤ r < k, indexed [m][r].
pub type EkTable = Arc<Vec<Vec<Rational>>>;

fn ek_cache() -> &'static Mutex<HashMap<(i64, i64), EkTable>> {
    static C: OnceLock<Mutex<HashMap<(i64, i64), EkTable>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn ek_table(n: i64, k: i64) -> EkTable {
    if let Some(t) = ek_cache().lock().unwrap().get(&(n, k)) {
        return t.clone();
    }
    let ku = k as usize;
    let mmax = (n.max(1) - 1) as usize;
    let mut prev = vec![vec![Rational::new(); ku]; mmax + 1];
    prev[0][0] = Rational::from(1);
    // B_a(j/k) k^{a-1}/a! is independent of the level
    let base: Vec<Vec<Rational>> = (0..=mmax)
        .map(|a| {
            let fa = Integer::from(Integer::factorial(a as u32));
            let kp = Rational::from(Integer::from(k).pow(a as u32)) / Rational::from(k);
            (0..ku).map(|j| bernoulli_poly(a, &Rational::from((j as i64, k))) * &kp / Rational::from(&fa)).collect()
        })
        .collect();
    for level in 1..=n {
        let mut next = vec![vec![Rational::new(); ku]; mmax + 1];
        let mut npow = Rational::from(1);
        for a in 0..=mmax {
            let coef: Vec<Rational> = base[a].iter().map(|b| Rational::from(b * &npow)).collect();
            for mp in 0..=(mmax - a) {
                let row = &prev[mp];
                for (src, e) in row.iter().enumerate() {
                    if e.cmp0().is_eq() {
                        continue;
                    }
                    // r - level·j ≡ src
                    for (j, c) in coef.iter().enumerate() {
                        if c.cmp0().is_eq() {
                            continue;
                        }
                        let r = (src as i64 + level * j as i64).rem_euclid(k) as usize;
                        next[mp + a][r] += Rational::from(e * c);
                    }
                }
            }
            npow *= level;
        }
        prev = next;
    }
    let t = Arc::new(prev);
    ek_cache().lock().unwrap().insert((n, k), t.clone());
    t
}

/// Q via the exact rational recursion; N is capped at `cap`.
pub fn q_exact_capped(h: i64, k: i64, sigma: i64, n: i64, prec: u32, cap: i64) -> Result<QValue> {
    let f = frac(h, k)?;
    if k > n || n < 1 {
        return Err(Error::Range(format!("need k <= N (k={k}, N={n})")));
    }
    if n > cap {
        return Err(Error::Range(format!("exact recursion capped at N <= {cap}")));
    }
    let t = ek_table(n, k);
    let mut acc = APComplex::zero(prec);
    let nu = n as usize;
    for r in 0..k {
        let mut inner = Rational::new();
        let mut sp = Rational::from(1);
        for j in 0..nu {
            let e = &t[nu - 1 - j][r as usize];
            if e.cmp0().is_ne() {
                inner += Rational::from(e * &sp);
            }
            sp *= Rational::from((sigma, j as i64 + 1));
        }
        if inner.cmp0().is_ne() {
            let z = phase(2 * (r + sigma) * h, k, prec);
            acc += z.scale_rat(&inner);
        }
    }
    let mut scale = Rational::from((1, Integer::from(Integer::factorial(n as u32))));
    if n % 2 == 1 {
        scale = -scale;
    }
    Ok(QValue { frac: f, sigma, n, value: acc.scale_rat(&scale), method: QMethod::ExactRecursion })
}

pub fn q_exact(h: i64, k: i64, sigma: i64, n: i64, prec: u32) -> Result<QValue> {
    q_exact_capped(h, k, sigma, n, prec, EXACT_CAP)
}

/// Simple pole, N/2 < k ≤ N.
pub fn q_simple(h: i64, k: i64, sigma: i64, n: i64, prec: u32) -> Result<QValue> {
    let f = frac(h, k)?;
    if !(2 * k > n && k <= n) {
        return Err(Error::Range(format!("simple pole needs N/2 < k <= N (k={k}, N={n})")));
    }
    let wp = prec + 16;
    let p1 = phase(-h * (n * n + n - 4 * sigma), 2 * k, wp);
    let p2 = phase(2 * n * h + n + h + k - h * k, 2, wp);
    let prod = sine_product_recip(h, k, (n - k) as u64, wp);
    let mut v = (&p1 * &p2).scale(&prod);
    v = v.scale(&(Float::with_val(wp, 1) / Float::with_val(wp, k * k)));
    if k % 2 == 0 {
        v = -v;
    }
    Ok(QValue { frac: f, sigma, n, value: v.with_prec(prec), method: QMethod::SimplePole })
}

/// Double pole, N/3 < k ≤ N/2.
pub fn q_double(h: i64, k: i64, sigma: i64, n: i64, prec: u32) -> Result<QValue> {
    let f = frac(h, k)?;
    if !(3 * k > n && 2 * k <= n) {
        return Err(Error::Range(format!("double pole needs N/3 < k <= N/2 (k={k}, N={n})")));
    }
    let wp = prec + 16;
    // Σ_{k∤m} m/(1 − ζ^{hm}) with 1/(1 − e^{iθ}) = 1/2 + (i/2) cot(θ/2)
    let mut s = APComplex::zero(wp);
    let pi = pi(wp);
    for m in 1..=n {
        if m % k == 0 {
            continue;
        }
        let r = (h * m).rem_euclid(k);
        let x = Float::with_val(wp, &pi * r) / k;
        let cot = Float::with_val(wp, x.tan()).recip();
        s += APComplex::from_parts(Float::with_val(wp, 0.5), cot / 2u32).scale(&Float::with_val(wp, m));
    }
    let bracket = APComplex::from_rational(wp, &Rational::from((n * (n + 1) - 3 * k - 2 * sigma, 2))) - s;
    // ∏_{j≤N-2k} 1/(1 − ζ^{hj}); 1 − e^{iθ} = −2i sin(θ/2) e^{iθ/2}
    let m2 = n - 2 * k;
    let mag = sine_product_recip(h, k, m2 as u64, wp);
    // phase of ∏ (−i e^{πi hj/k})^{-1} = ∏ i e^{−πi hj/k}
    let tot = h * m2 * (m2 + 1) / 2;
    let ph = &phase(m2, 2, wp) * &phase(-tot, k, wp);
    let lead = phase(2 * sigma * h, k, wp);
    let mut v = &(&lead * &bracket) * &ph;
    v = v.scale(&mag);
    v = -v.scale(&(Float::with_val(wp, 1) / Float::with_val(wp, 2 * k * k * k * k)));
    Ok(QValue { frac: f, sigma, n, value: v.with_prec(prec), method: QMethod::DoublePole })
}

/// φ(N,k,σ) by the finite cotangent sum.
pub fn phi_direct(n: i64, k: i64, sigma: i64, prec: u32) -> APComplex {
    let wp = prec + 16;
    let pi = pi(wp);
    let mut s = Float::new(wp);
    for j in 1..=n {
        if j % k == 0 {
            continue;
        }
        let x = Float::with_val(wp, &pi * j) / k;
        let cot = Float::with_val(wp, x.tan_ref()).recip();
        s += x * cot;
    }
    let re = Float::with_val(wp, n * n + n - 4 * sigma) / (4 * k * k);
    let im = -s / Float::with_val(wp, &pi * (2 * k));
    APComplex::from_parts(re, im).with_prec(prec)
}

fn series_recip(a: &[APComplex], order: usize) -> Vec<APComplex> {
    let p = a[0].prec();
    let inv0 = a[0].recip();
    let mut b = vec![APComplex::zero(p); order];
    b[0] = inv0.clone();
    for i in 1..order {
        let mut acc = APComplex::zero(p);
        for j in 1..=i.min(a.len() - 1) {
            acc += &a[j] * &b[i - j];
        }
        b[i] = -(&acc * &inv0);
    }
    b
}

fn series_mul(a: &[APComplex], b: &[APComplex], order: usize) -> Vec<APComplex> {
    let p = a[0].prec();
    let mut out = vec![APComplex::zero(p); order];
    for (i, ai) in a.iter().enumerate().take(order) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Q from the Laurent expansion at h/k: every factor is expanded in t = z − h/k and the
/// coefficient of t^{s−1} is read off. Valid for any pole order.
pub fn q_logseries(h: i64, k: i64, sigma: i64, n: i64, prec: u32) -> Result<QValue> {
    let f = frac(h, k)?;
    if k > n || n < 1 {
        return Err(Error::Range(format!("need k <= N (k={k}, N={n})")));
    }
    let wp = prec + 32 + 2 * n as u32;
    let s = (n / k) as usize;
    let order = s;
    let twopii = APComplex::from_parts(Float::new(wp), Float::with_val(wp, pi(wp) * 2u32));
    // e^{2πiσt}
    let mut acc: Vec<APComplex> = Vec::with_capacity(order);
    {
        let x = twopii.scale(&Float::with_val(wp, sigma));
        let mut term = APComplex::one(wp);
        for i in 0..order {
            acc.push(term.clone());
            term = (&term * &x).scale(&(Float::with_val(wp, 1) / Float::with_val(wp, i + 1)));
        }
    }
    for m in 1..=n {
        let x = twopii.scale(&Float::with_val(wp, m));
        if m % k == 0 {
            // t/(1 − e^{xt}) = −(1/x) Σ B_j (xt)^j/j!
            let mut fac = Vec::with_capacity(order);
            let mut xp = x.recip();
            let mut fact = Integer::from(1);
            for j in 0..order {
                if j > 0 {
                    fact *= j;
                }
                let b = bernoulli_number(j) / Rational::from(&fact);
                fac.push(-xp.scale_rat(&b));
                xp = &xp * &x;
            }
            acc = series_mul(&acc, &fac, order);
        } else if order > 1 {
            // 1/(1 − c e^{xt})
            let c = phase(2 * h * m, k, wp);
            let mut den = Vec::with_capacity(order);
            let mut term = c.clone();
            for j in 0..order {
                if j == 0 {
                    den.push(APComplex::one(wp) - &c);
                } else {
                    term = (&term * &x).scale(&(Float::with_val(wp, 1) / Float::with_val(wp, j)));
                    den.push(-term.clone());
                }
            }
            acc = series_mul(&acc, &series_recip(&den, order), order);
        } else {
            let c = phase(2 * h * m, k, wp);
            let inv = (APComplex::one(wp) - &c).recip();
            for a in acc.iter_mut() {
                *a = &*a * &inv;
            }
        }
    }
    let lead = phase(2 * sigma * h, k, wp);
    let v = &(&twopii * &lead) * &acc[order - 1];
    Ok(QValue { frac: f, sigma, n, value: v.with_prec(prec), method: QMethod::LogSeries })
}

/// Cheapest applicable formula: simple pole, double pole, otherwise the Laurent expansion.
pub fn q_auto(h: i64, k: i64, sigma: i64, n: i64, prec: u32) -> Result<QValue> {
    if 2 * k > n {
        q_simple(h, k, sigma, n, prec)
    } else if 3 * k > n {
        q_double(h, k, sigma, n, prec)
    } else {
        q_logseries(h, k, sigma, n, prec)
    }
}

/// C_{hkℓ}(N) = Σ_σ binom(ℓ−1,σ−1) (−e^{2πih/k})^{ℓ−σ} Q_{hkσ}(N)
pub fn c_coeff_with<F>(h: i64, k: i64, ell: i64, n: i64, prec: u32, q: F) -> Result<APComplex>
where
    F: Fn(i64, i64, i64, i64, u32) -> Result<QValue>,
{
    if ell < 1 || ell > n / k {
        return Err(Error::Range(format!("need 1 <= ell <= N/k (ell={ell}, N={n}, k={k})")));
    }
    let z = -phase(2 * h, k, prec);
    let mut acc = APComplex::zero(prec);
    for sigma in 1..=ell {
        let b = binomial_rat(&Rational::from(ell - 1), (sigma - 1) as usize);
        let qv = q(h, k, sigma, n, prec)?.value;
        acc += (&z.powi(ell - sigma) * &qv).scale_rat(&b);
    }
    Ok(acc)
}

pub fn c_coeff(h: i64, k: i64, ell: i64, n: i64, prec: u32) -> Result<APComplex> {
    let exact_ok = n <= EXACT_CAP;
    c_coeff_with(h, k, ell, n, prec, |h, k, s, n, p| if exact_ok { q_exact(h, k, s, n, p) } else { q_logseries(h, k, s, n, p) })
}

/// C_{01ℓ}(N) from the Stirling–Bernoulli composition sum.
pub fn c01_formula(ell: i64, n: i64) -> Result<Rational> {
    if ell < 1 || ell > n {
        return Err(Error::Range(format!("need 1 <= ell <= N (ell={ell}, N={n})")));
    }
    let total = (n - ell) as usize;
    let nu = n as usize;
    let fact = |m: usize| Integer::from(Integer::factorial(m as u32));
    // w[i][j] = B_j i^j / j! for parts i = 1..N
    let w: Vec<Vec<Rational>> = (0..=nu)
        .map(|i| {
            (0..=total)
                .map(|j| bernoulli_number(j) * Rational::from(Integer::from(i).pow(j as u32)) / Rational::from(fact(j)))
                .collect()
        })
        .collect();
    // poly[t] = Σ over j_1..j_N with Σ = t of Π w[i][j_i]
    let mut poly = vec![Rational::new(); total + 1];
    poly[0] = Rational::from(1);
    for wi in w.iter().skip(1) {
        let mut next = vec![Rational::new(); total + 1];
        for (a, pa) in poly.iter().enumerate() {
            if pa.cmp0().is_eq() {
                continue;
            }
            for (j, wj) in wi.iter().enumerate().take(total + 1 - a) {
                if wj.cmp0().is_ne() {
                    next[a + j] += Rational::from(pa * wj);
                }
            }
        }
        poly = next;
    }
    let l = ell as usize;
    let mut acc = Rational::new();
    for j0 in 0..=total {
        let st = crate::numkit::stirling_subset(l + j0, l);
        let term = Rational::from(st) / Rational::from(fact(l - 1 + j0)) * &poly[total - j0];
        acc += term;
    }
    acc *= Rational::from(fact(l - 1)) / Rational::from(fact(nu));
    if n % 2 == 1 {
        acc = -acc;
    }
    Ok(acc)
}

/// Partitions of n into at most N parts.
pub fn partition_count(big_n: i64, n: i64) -> Integer {
    let nu = n.max(0) as usize;
    let mut p = vec![Integer::new(); nu + 1];
    p[0] = Integer::from(1);
    for part in 1..=big_n.max(0) as usize {
        for t in part..=nu {
            let add = p[t - part].clone();
            p[t] += add;
        }
    }
    p[nu].clone()
}

/// Coefficient of q^n in Σ C_{hkℓ}/(q − e^{2πih/k})^ℓ.
pub fn reconstruct_from_pf(big_n: i64, n: i64, prec: u32) -> Result<APComplex> {
    let mut acc = APComplex::zero(prec);
    for f in super::farey::farey(big_n) {
        let (h, k) = (f.h, f.k);
        for ell in 1..=big_n / k {
            let c = c_coeff(h, k, ell, big_n, prec)?;
            // (q − ζ)^{−ℓ} = (−ζ)^{−ℓ} Σ binom(n+ℓ−1, ℓ−1) ζ^{−n} q^n
            let zinv = phase(-2 * h * (ell + n), k, prec);
            let sign = if ell % 2 == 0 { 1 } else { -1 };
            let b = Integer::from(Integer::binomial_u((n + ell - 1) as u32, (ell - 1) as u32)) * sign;
            acc += (&c * &zinv).scale_rat(&Rational::from(b));
        }
    }
    Ok(acc)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rademacher::farey::farey;

    const P: u32 = 256;

    fn close(a: &APComplex, b: &APComplex, bits: i32) -> bool {
        let d = (a - b).abs();
        let scale = a.abs().max(&b.abs()).clone().max(&Float::with_val(64, 1)).clone();
        d <= Float::with_val(64, scale) * Float::with_val(64, Float::i_exp(1, -bits))
    }

    #[test]
    fn ek_base_cases() {
        let t = ek_table(0, 3);
        assert_eq!(t[0][0], 1);
        let t = ek_table(1, 1);
        assert_eq!(t[0][0], 1);
    }

    #[test]
    fn q_small_values() {
        let q = q_exact(0, 1, 1, 1, P).unwrap().value;
        assert!(close(&q, &APComplex::from_int(P, -1), 240));
        let s = &q_exact(0, 1, 1, 2, P).unwrap().value + &q_exact(1, 2, 1, 2, P).unwrap().value;
        assert!(s.abs() < Float::with_val(64, Float::i_exp(1, -240)));
    }

    #[test]
    fn simple_matches_exact() {
        let a = q_exact(1, 5, 1, 8, P).unwrap().value;
        let b = q_simple(1, 5, 1, 8, P).unwrap().value;
        assert!(close(&a, &b, 200));
        for sigma in 1..=3 {
            for f in farey(12).into_iter().filter(|f| 2 * f.k > 12) {
                let a = q_exact(f.h, f.k, sigma, 12, P).unwrap().value;
                let b = q_simple(f.h, f.k, sigma, 12, P).unwrap().value;
                assert!(close(&a, &b, 200), "{f} sigma={sigma}");
                let mag = sine_product_recip(f.h, f.k, (12 - f.k) as u64, P).abs() / (f.k * f.k);
                assert!(Float::with_val(P, b.abs() - mag).abs() < 1e-60);
            }
        }
    }

    #[test]
    fn double_matches_exact() {
        let a = q_exact(1, 5, 1, 12, P).unwrap().value;
        let b = q_double(1, 5, 1, 12, P).unwrap().value;
        assert!(close(&a, &b, 200));
        // |Q| = |φ ∏^{-1}|/(2k²) for h = 1
        let phi = phi_direct(12, 5, 1, P);
        let mag = (&phi.abs() * sine_product_recip(1, 5, 2, P).abs()) / 50u32;
        assert!(Float::with_val(P, b.abs() - mag).abs() < 1e-60);
    }

    #[test]
    fn logseries_matches_exact() {
        for n in [6i64, 9, 13] {
            for f in farey(n) {
                let a = q_exact(f.h, f.k, 2, n, P).unwrap().value;
                let b = q_logseries(f.h, f.k, 2, n, P).unwrap().value;
                assert!(close(&a, &b, 200), "{f} N={n}");
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let n = 14;
        for f in farey(n).into_iter().filter(|f| f.h > 0) {
            let a = q_logseries(f.h, f.k, 1, n, P).unwrap().value;
            let b = q_logseries(f.k - f.h, f.k, 1, n, P).unwrap().value;
            assert!(close(&a, &b.conj(), 200), "{f}");
        }
    }

    #[test]
    fn c01_closed_form() {
        assert_eq!(c01_formula(1, 1).unwrap(), -1);
        for n in 1..=8i64 {
            let f = Rational::from((1, Integer::from(Integer::factorial(n as u32))));
            let want = if n % 2 == 0 { f } else { -f };
            assert_eq!(c01_formula(n, n).unwrap(), want);
            for ell in 1..=n {
                let c = c_coeff(0, 1, ell, n, P).unwrap();
                let want = APComplex::from_rational(P, &c01_formula(ell, n).unwrap());
                assert!(close(&c, &want, 200), "ell={ell} N={n}");
            }
        }
        let c = c_coeff(1, 2, 1, 6, P).unwrap();
        assert!(c.im.clone().abs() < 1e-60);
    }

    #[test]
    fn partitions() {
        assert_eq!(partition_count(3, 4), 4);
        assert_eq!(partition_count(7, 0), 1);
        assert_eq!(partition_count(100, 100), Integer::from(190569292u64));
        for n in 0..=30 {
            let r = reconstruct_from_pf(5, n, P).unwrap();
            let want = APComplex::from_rational(P, &Rational::from(partition_count(5, n)));
            assert!((&r - &want).abs() < Float::with_val(64, Float::i_exp(1, -180)), "n={n}");
        }
    }

    #[test]
    fn polynomial_in_sigma() {
        // N-th finite difference in σ of e^{−2πiσh/k} Q vanishes
        let n = 7;
        for f in [FareyFrac { h: 1, k: 3 }, FareyFrac { h: 2, k: 5 }, FareyFrac { h: 0, k: 1 }] {
            let vals: Vec<APComplex> = (0..=n)
                .map(|s| &phase(-2 * s * f.h, f.k, P) * &q_exact(f.h, f.k, s, n, P).unwrap().value)
                .collect();
            let mut acc = APComplex::zero(P);
            for (i, v) in vals.iter().enumerate() {
                let b = Integer::from(Integer::binomial_u(n as u32, i as u32));
                let sgn = if (n as usize - i) % 2 == 0 { 1 } else { -1 };
                acc += v.scale_rat(&Rational::from(b * sgn));
            }
            assert!(acc.abs() < 1e-60, "{f}");
        }
    }
}
