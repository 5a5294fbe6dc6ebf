//! Saddle points of p_d and certification of the four steepest-descent paths.

use restricted_pf::saddle::{build_path, saddle_point, verify_path, PathKind};

fn main() -> restricted_pf::Result<()> {
    for (d, m) in [(0, 1), (0, 2), (0, 3), (1, 3)] {
        let s = saddle_point(d, m, 256)?;
        println!("z*({d},{m}) = {}  |p'| {:.1e}", s.zstar, s.residual()?.to_f64());
    }
    for kind in PathKind::ALL {
        let path = build_path(kind, 128)?;
        let r = verify_path(&path, path.d)?;
        println!("path {}: ok={} margin {:.3e} cells {}", kind.name(), r.ok, r.margin, r.cells);
    }
    Ok(())
}
