use rug::Float;

use crate::error::Result;
use crate::sineprod::{sine_product_recip, sine_product};

/// ξ₁, ξ₂, ξ₃ for a lower bound K on k.
#[derive(Clone, Debug)]
pub struct Xi {
    pub xi1: Float,
    pub xi2: Float,
    pub xi3: Float,
}

impl Xi {
    pub fn product(&self) -> Float {
        Float::with_val(self.xi1.prec(), &self.xi1 * &self.xi2) * &self.xi3
    }
}

/// α(Y) = (e^Y − 1)/Y
pub fn alpha(y: &Float) -> Float {
    Float::with_val(y.prec(), y.exp_m1_ref()) / y
}

/// β(Y) = 2 + Y(1 − cot(Y/2))/2
pub fn beta(y: &Float) -> Float {
    let p = y.prec();
    let half = Float::with_val(p, y / 2u32);
    let cot = Float::with_val(p, half.tan_ref()).recip();
    Float::with_val(p, 1 - cot) * half + 2u32
}

/// γ(Y) = log(1/(1 − Y))/Y
pub fn gamma(y: &Float) -> Float {
    let p = y.prec();
    -Float::with_val(p, (-y.clone()).ln_1p()) / y
}

pub fn xi(big_k: i64, prec: u32) -> Xi {
    let lam = Float::with_val(prec, big_k) / 8u32 + 0.5;
    let y = Float::with_val(prec, 1) / (Float::with_val(prec, &lam * big_k));
    let xi1 = beta(&y);
    let xi2 = alpha(&y);
    let y3 = Float::with_val(prec, &xi2 / (lam * 4u32));
    let xi3 = gamma(&y3);
    Xi { xi1, xi2, xi3 }
}

fn tail_product(h: i64, k: i64, n: i64, prec: u32) -> Result<Float> {
    let s = n / k;
    sine_product(h, k, 0, prec)?;
    Ok(sine_product_recip(h, k, (n - s * k) as u64, prec).abs())
}

/// 3/k³ exp(N(2 + log(1 + 3k/4))/k + |σ|/N) |∏^{-1}(h/k; N − sk)|
pub fn q_bound(h: i64, k: i64, sigma: i64, n: i64, prec: u32) -> Result<Float> {
    let prod = tail_product(h, k, n, prec)?;
    let l = Float::with_val(prec, Float::with_val(prec, k * 3) / 4u32).ln_1p() + 2u32;
    let e = Float::with_val(prec, l * n) / k + Float::with_val(prec, sigma.abs()) / n;
    Ok(e.exp() * prod * 3u32 / Float::with_val(prec, k * k * k))
}

/// 9/k³ exp(N(2 + log(ξ₁/2 + ξ₁ξ₂ξ₃k/8))/k + |σ|/N) |∏^{-1}(h/k; N − sk)|, for K ≤ k.
pub fn q_bound_refined(big_k: i64, h: i64, k: i64, sigma: i64, n: i64, prec: u32) -> Result<Float> {
    if big_k < 2 || big_k > k {
        return Err(crate::Error::Range(format!("need 2 <= K <= k (K={big_k}, k={k})")));
    }
    let x = xi(big_k, prec);
    let prod = tail_product(h, k, n, prec)?;
    let inner = Float::with_val(prec, &x.xi1 / 2u32) + x.product() * k / 8u32;
    let l = inner.ln() + 2u32;
    let e = Float::with_val(prec, l * n) / k + Float::with_val(prec, sigma.abs()) / n;
    Ok(e.exp() * prod * 9u32 / Float::with_val(prec, k * k * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rademacher::qcoef::q_auto;

    #[test]
    fn xi_triples() {
        for (k, x1, x123) in [(2, 1.37065, 2.64070), (61, 1.00101, 1.01778), (82, 1.00057, 1.01297), (101, 1.00038, 1.01041)] {
            let x = xi(k, 128);
            assert!((x.xi1.to_f64() - x1).abs() < 5e-6, "K={k}");
            assert!((x.product().to_f64() - x123).abs() < 5e-6, "K={k}");
        }
    }

    #[test]
    fn envelope_limits() {
        let y = Float::with_val(128, 1e-20);
        for v in [alpha(&y), beta(&y), gamma(&y)] {
            assert!((v.to_f64() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bound_dominates_q50() {
        for k in 2..=50 {
            let q = q_auto(1, k, 1, 50, 192).unwrap().value.abs();
            let b = q_bound(1, k, 1, 50, 192).unwrap();
            assert!(q <= b, "k={k}");
            if k >= 2 {
                let r = q_bound_refined(2, 1, k, 1, 50, 192).unwrap();
                assert!(q <= r, "refined k={k}");
            }
        }
    }
}
