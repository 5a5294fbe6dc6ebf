use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::complex::{pi, APComplex};
use crate::error::{Error, Result};

pub type APRat = Rational;

fn bern_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// B_n with B_1 = -1/2.
pub fn bernoulli_number(n: usize) -> Rational {
    if n > 1 && n % 2 == 1 {
        return Rational::new();
    }
    let mut cache = bern_cache().lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        let b = if m > 1 && m % 2 == 1 {
            Rational::new()
        } else {
            // sum_{k<m} binom(m+1,k) B_k + (m+1) B_m = 0
            let mut acc = Rational::new();
            let mut binom = Integer::from(1);
            for (k, bk) in cache.iter().enumerate() {
                if bk.cmp0().is_ne() {
                    acc += Rational::from(&binom * bk);
                }
                binom *= m + 1 - k;
                binom /= k + 1;
            }
            -acc / Rational::from(m + 1)
        };
        cache.push(b);
    }
    cache[n].clone()
}

fn bern_float_cache() -> &'static Mutex<HashMap<(usize, u32), Float>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Float>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// B_n / n! as a float. Large even n go through ζ(n).
pub fn bernoulli_over_factorial(n: usize, prec: u32) -> Float {
    if n == 0 {
        return Float::with_val(prec, 1);
    }
    if n == 1 {
        return Float::with_val(prec, -0.5);
    }
    if n % 2 == 1 {
        return Float::new(prec);
    }
    if let Some(v) = bern_float_cache().lock().unwrap().get(&(n, prec)) {
        return v.clone();
    }
    let v = if n <= 60 {
        let f = Integer::from(Integer::factorial(n as u32));
        Float::with_val(prec, bernoulli_number(n) / Rational::from(f))
    } else {
        let wp = prec + 16;
        let z = Float::with_val(wp, Float::zeta_u(n as u32));
        let tp = Float::with_val(wp, pi(wp) * 2u32);
        let den = Float::with_val(wp, tp.pow(n as u32));
        let mut v = Float::with_val(wp, z * 2u32) / den;
        if (n / 2) % 2 == 0 {
            v = -v;
        }
        Float::with_val(prec, v)
    };
    bern_float_cache().lock().unwrap().insert((n, prec), v.clone());
    v
}

/// B_a(x) = Σ_k binom(a,k) B_k x^{a-k}
pub fn bernoulli_poly(a: usize, x: &Rational) -> Rational {
    let mut acc = Rational::new();
    let mut binom = Integer::from(1);
    let mut xp = Rational::from(1);
    // iterate k downward so that x^{a-k} grows
    let mut terms = Vec::with_capacity(a + 1);
    for k in 0..=a {
        terms.push(binom.clone());
        binom *= a - k;
        binom /= k + 1;
    }
    for k in (0..=a).rev() {
        let bk = bernoulli_number(k);
        if bk.cmp0().is_ne() {
            acc += Rational::from(&terms[k] * &bk) * &xp;
        }
        xp *= x;
    }
    acc
}

/// Stirling numbers of the second kind.
pub fn stirling_subset(n: usize, m: usize) -> Integer {
    if m > n {
        return Integer::new();
    }
    let mut row = vec![Integer::from(1)];
    for i in 1..=n {
        let mut next = vec![Integer::new(); i + 1];
        for j in 1..=i {
            let mut v = Integer::from(&row.get(j).cloned().unwrap_or_default() * j);
            v += &row[j - 1];
            next[j] = v;
        }
        row = next;
    }
    row[m].clone()
}

pub fn binomial_general(alpha: &APComplex, r: usize) -> APComplex {
    let p = alpha.prec();
    let mut acc = APComplex::one(p);
    for i in 0..r {
        let t = alpha - &APComplex::from_int(p, i as i64);
        acc = &acc * &t;
        acc = acc.scale(&(Float::with_val(p, 1) / Float::with_val(p, i + 1)));
    }
    acc
}

pub fn binomial_rat(alpha: &Rational, r: usize) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..r {
        acc *= Rational::from(alpha - Rational::from(i));
        acc /= Rational::from(i + 1);
    }
    acc
}

/// Coefficient of x^i in (p_1 x + p_2 x^2 + ...)^j, with `args[0] = p_1`.
pub fn partial_ordinary_bell(i: usize, j: usize, args: &[APComplex]) -> Result<APComplex> {
    let prec = args.first().map(|a| a.prec()).unwrap_or(64);
    if j == 0 {
        return Ok(if i == 0 { APComplex::one(prec) } else { APComplex::zero(prec) });
    }
    if i < j {
        return Ok(APComplex::zero(prec));
    }
    let need = i - j + 1;
    if args.len() < need {
        return Err(Error::InsufficientArgs { needed: need, got: args.len() });
    }
    let table = bell_table(i, &args[..need]);
    Ok(table[j][i].clone())
}

/// table[j][i] = B̂_{i,j}(args) for 0 <= j <= i <= max_i. Missing args count as zero.
pub fn bell_table(max_i: usize, args: &[APComplex]) -> Vec<Vec<APComplex>> {
    let prec = args.first().map(|a| a.prec()).unwrap_or(64);
    let zero = APComplex::zero(prec);
    let mut out = Vec::with_capacity(max_i + 1);
    let mut cur = vec![zero.clone(); max_i + 1];
    cur[0] = APComplex::one(prec);
    out.push(cur.clone());
    for _ in 1..=max_i {
        let mut next = vec![zero.clone(); max_i + 1];
        for (a, ca) in cur.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (m, pm) in args.iter().enumerate() {
                let deg = a + m + 1;
                if deg > max_i {
                    break;
                }
                next[deg] += ca * pm;
            }
        }
        out.push(next.clone());
        cur = next;
    }
    out
}
