//! Zeros of the continued dilogarithm and the exponential rates they give.

use restricted_pf::numkit::fmt_float;
use restricted_pf::specfun::dilog_zero;

fn main() -> restricted_pf::Result<()> {
    for (a, b) in [(0, -1), (0, -2), (0, -3), (1, -3)] {
        let z = dilog_zero(a, b, 256)?;
        let rate = -z.w.abs().ln();
        println!(
            "w({a},{b}) = {}  |residual| {:.2e}  -log|w| = {}",
            z.w,
            z.residual.to_f64(),
            fmt_float(&rate, 12)
        );
    }
    Ok(())
}
