//! The ξ constants and how tight the Q bound is at N = 50.

use restricted_pf::rademacher::{q_auto, q_bound, xi};

fn main() -> restricted_pf::Result<()> {
    for big_k in [2, 61, 82, 101] {
        let x = xi(big_k, 128);
        println!(
            "K={big_k}: ξ1 {:.5} ξ2 {:.5} ξ3 {:.5} product {:.5}",
            x.xi1.to_f64(),
            x.xi2.to_f64(),
            x.xi3.to_f64(),
            x.product().to_f64()
        );
    }
    for k in [2, 5, 10, 25, 50] {
        let q = q_auto(1, k, 1, 50, 128)?.value.abs();
        let b = q_bound(1, k, 1, 50, 128)?;
        println!("k={k}: |Q| {:.4e}  bound {:.4e}", q.to_f64(), b.to_f64());
    }
    Ok(())
}
