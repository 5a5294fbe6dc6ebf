//! Saddle-point coefficients for e^{-N(z² + z³/3)} compared with the integral over [-1, 1].

use restricted_pf::numkit::{quad::integrate, APComplex, TruncSeries};
use restricted_pf::saddle::Wojdylo;
use rug::ops::Pow;
use rug::{Float, Rational};

fn main() -> restricted_pf::Result<()> {
    let prec = 128;
    let zero = APComplex::zero(prec);
    let mut c = vec![zero.clone(); 14];
    c[2] = APComplex::one(prec);
    c[3] = APComplex::from_rational(prec, &Rational::from((1, 3)));
    let p = TruncSeries::new(zero.clone(), c);
    let mut qc = vec![zero.clone(); 12];
    qc[0] = APComplex::one(prec);
    let q = TruncSeries::new(zero, qc);
    let terms = Wojdylo::new(&p, &APComplex::one(prec), 4)?.terms(&q, 4)?;
    for (s, t) in terms.iter().enumerate() {
        println!("a_{} = {}", 2 * s, t);
    }
    let tol = Float::with_val(prec, Float::i_exp(1, -100));
    for n in [50u32, 200, 800] {
        let f = |x: &Float| {
            let x2 = Float::with_val(prec, x.square_ref());
            let x3 = Float::with_val(prec, &x2 * x);
            Ok(Float::with_val(prec, -((x2 + x3 / 3u32) * n)).exp())
        };
        let exact = integrate(&f, &Float::with_val(prec, -1), &Float::with_val(prec, 1), &tol)?;
        let mut approx = Float::new(prec);
        print!("N={n}:");
        for (s, t) in terms.iter().enumerate() {
            approx += Float::with_val(prec, &t.re * 2u32) / Float::with_val(prec, n).pow(Float::with_val(prec, s as f64 + 0.5));
            print!("  S={} err {:.2e}", s + 1, Float::with_val(prec, &exact - &approx).abs().to_f64());
        }
        println!();
    }
    Ok(())
}
