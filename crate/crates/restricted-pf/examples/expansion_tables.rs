//! Truncated saddle-point expansions against direct subset sums.

use restricted_pf::expansions::{calibrated_table, compare, ExpansionKind};

fn main() -> restricted_pf::Result<()> {
    let cases = [
        (ExpansionKind::C2, [800, 1000]),
        (ExpansionKind::C2Star, [800, 1000]),
        (ExpansionKind::D1Even, [1000, 1000]),
        (ExpansionKind::D1Odd, [1001, 1001]),
        (ExpansionKind::E1, [800, 1000]),
    ];
    for (kind, ns) in cases {
        let res = calibrated_table(kind, 1, 3, 256)?;
        let cal = res.calibration.as_ref().unwrap();
        println!("{kind}: sign {} (errors {:.3e} kept, {:.3e} flipped)", if cal.flipped { "flipped" } else { "kept" }, cal.err_kept, cal.err_flipped);
        let mut seen = Vec::new();
        for n in ns {
            if seen.contains(&n) {
                continue;
            }
            seen.push(n);
            let cmp = compare(&res, n, 4)?;
            let row: Vec<String> = cmp.approx.iter().map(|a| format!("{:.6e}", a.to_f64())).collect();
            println!("  N={n}: {}  direct {:.6e}", row.join("  "), cmp.direct.to_f64());
        }
    }
    Ok(())
}
