//! Sine products and the normalized log-size Ψ(h, k).

use restricted_pf::sineprod::{min_pair, psi_signed, sine_product, psi_min_slack};

fn main() -> restricted_pf::Result<()> {
    let k = 101;
    for h in [2, 3, 10, 50] {
        let mp = min_pair(h, k)?;
        let p = sine_product(h, k, 20, 128)?;
        println!("h={h}: Ψ = {:.6}  product(20) = {:.6e}  min pair {:?}", psi_signed(h, k, 128)?.to_f64(), p.value.to_f64(), mp);
    }
    let (slack, h, m) = psi_min_slack(k, 128)?;
    println!("smallest slack against the uniform bound at k={k}: {:.4} (h={h}, m={m})", slack.to_f64());
    Ok(())
}
