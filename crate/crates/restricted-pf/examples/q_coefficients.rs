//! Partial-fraction coefficients by every available method, and the partition counts they rebuild.

use restricted_pf::rademacher::{
    c_coeff, farey, partition_count, q_double, q_exact, q_logseries, q_simple, reconstruct_from_pf,
};

fn main() -> restricted_pf::Result<()> {
    let n = 12;
    for f in farey(n).into_iter().filter(|f| f.k > 3) {
        let (h, k) = (f.h, f.k);
        let exact = q_exact(h, k, 1, n, 192)?.value;
        let log = q_logseries(h, k, 1, n, 192)?.value;
        let pole = if 2 * k > n {
            Some(q_simple(h, k, 1, n, 192)?.value)
        } else if 3 * k > n {
            Some(q_double(h, k, 1, n, 192)?.value)
        } else {
            None
        };
        let gap = (&exact - &log).abs().to_f64();
        let pole_gap = pole.map_or("n/a".to_string(), |p| format!("{:.1e}", (&exact - &p).abs().to_f64()));
        println!("Q_{{{h},{k},1}}({n}) = {exact}  log-series gap {gap:.1e}  pole formula gap {pole_gap}");
    }
    println!("C_{{1,3,1}}(12) = {}", c_coeff(1, 3, 1, 12, 192)?);
    for m in [10, 20, 30] {
        let r = reconstruct_from_pf(6, m, 192)?;
        println!("p_6({m}) = {}  rebuilt {}", partition_count(6, m), r);
    }
    Ok(())
}
