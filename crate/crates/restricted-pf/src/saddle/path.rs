//! The polygonal paths a → ac → bc → b through the four saddle points, and their verification.

use std::f64::consts::PI;

use rayon::prelude::*;
use rug::Float;

use super::ray::{classify_ray, unique_minimum, CellBound, CellClass};
use super::{p_d, saddle_point};
use crate::error::{Error, Result};
use crate::numkit::APComplex;
use crate::specfun::dilog;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathKind {
    P,
    Q,
    R,
    S,
}

impl PathKind {
    pub const ALL: [PathKind; 4] = [PathKind::P, PathKind::Q, PathKind::R, PathKind::S];

    /// (d, m) of the saddle the path runs through.
    pub fn saddle(self) -> (i64, i64) {
        match self {
            PathKind::P => (0, 1),
            PathKind::Q => (0, 2),
            PathKind::R => (0, 3),
            PathKind::S => (1, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PathKind::P => "P",
            PathKind::Q => "Q",
            PathKind::R => "R",
            PathKind::S => "S",
        }
    }
}

impl std::str::FromStr for PathKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P" => Ok(PathKind::P),
            "Q" => Ok(PathKind::Q),
            "R" => Ok(PathKind::R),
            "S" => Ok(PathKind::S),
            _ => Err(Error::Range(format!("unknown path {s}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PathSpec {
    pub kind: PathKind,
    pub d: i64,
    pub zstar: APComplex,
    /// a, ac, bc, b
    pub vertices: Vec<APComplex>,
    /// index of the segment carrying zstar
    pub saddle_index: usize,
    pub a: f64,
    pub b: f64,
    pub v: f64,
}

/// Vertices a, ac, bc, b with c = 1 + i·Im z*/Re z*, a = m + 0.01, b = m + 0.49.
pub fn build_path(kind: PathKind, prec: u32) -> Result<PathSpec> {
    let (d, m) = kind.saddle();
    let ctx = saddle_point(d, m, prec)?;
    let z = ctx.zstar;
    let vf = Float::with_val(prec, &z.im / &z.re);
    let c = APComplex::from_parts(Float::with_val(prec, 1), vf.clone());
    let a = m as f64 + 0.01;
    let b = m as f64 + 0.49;
    let ar = APComplex::from_f64(prec, a, 0.0);
    let br = APComplex::from_f64(prec, b, 0.0);
    let vertices = vec![ar.clone(), &ar * &c, &br * &c, br];
    Ok(PathSpec { kind, d, zstar: z, vertices, saddle_index: 1, a, b, v: vf.to_f64() })
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub cells: usize,
    pub max_depth: u32,
    pub disk: f64,
    pub prec: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples: 1000, cells: 64, max_depth: 10, disk: 1e-3, prec: 128 }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    /// min Re(p_d(z) − p_d(z*)) over sampled path points outside the disk at z*
    pub margin: f64,
    /// Re(−p_d(z*))
    pub saddle_value: f64,
    /// largest monotone-envelope bound for Re(−p_d) over side segments in the upper half-plane
    pub side_bound: Option<f64>,
    /// largest sampled Re(−p_d) on the side segments
    pub side_max: f64,
    pub cells: usize,
    pub failed_segment: Option<usize>,
}

pub fn verify_path(path: &PathSpec, d: i64) -> Result<VerifyReport> {
    verify_path_with(path, d, &VerifyOptions::default())
}

pub fn verify_path_with(path: &PathSpec, d: i64, opt: &VerifyOptions) -> Result<VerifyReport> {
    let prec = opt.prec;
    let zs = path.zstar.with_prec(prec);
    let pstar = p_d(d, &zs)?.re.to_f64();
    let saddle_value = -pstar;
    let mut failed = None;

    // middle segment: certified unique minimum
    let cells: Vec<CellBound> = classify_ray(d, path.v, path.a, path.b, opt.cells, opt.max_depth, prec)?;
    if !unique_minimum(&cells) {
        failed = Some(1);
    }
    let tstar = zs.re.to_f64();
    let zero_cell = cells.iter().find(|c| c.t0 <= tstar && tstar <= c.t1);
    if !matches!(zero_cell.map(|c| c.class), Some(CellClass::Convex)) {
        failed = failed.or(Some(1));
    }

    let (a, b, v) = (path.a, path.b, path.v);
    let n = opt.samples.max(2);
    let seg_point = |seg: usize, s: f64| -> (f64, f64) {
        match seg {
            0 => (a, a * v * s),
            1 => {
                let t = a + (b - a) * s;
                (t, t * v)
            }
            _ => (b, b * v * (1.0 - s)),
        }
    };
    let zst = zs.to_c64();
    let mut margin = f64::INFINITY;
    let mut side_max = f64::NEG_INFINITY;
    for seg in 0..3 {
        let vals: Vec<Result<Option<f64>>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let (x, y) = seg_point(seg, i as f64 / (n - 1) as f64);
                if (x - zst.0).hypot(y - zst.1) < opt.disk {
                    return Ok(None);
                }
                let z = APComplex::from_f64(prec, x, y);
                Ok(Some(p_d(d, &z)?.re.to_f64()))
            })
            .collect();
        for r in vals {
            if let Some(re_p) = r? {
                let gap = re_p - pstar;
                margin = margin.min(gap);
                if gap <= 0.0 {
                    failed = failed.or(Some(seg));
                }
                if seg != 1 {
                    side_max = side_max.max(-re_p);
                }
            }
        }
    }

    let mut side_bound: Option<f64> = None;
    let mut envelope_ok = true;
    for (seg, x) in [(0usize, a), (2, b)] {
        let ymax = x * v;
        if ymax <= 0.0 {
            continue;
        }
        match side_envelope_adaptive(d, x, ymax, saddle_value, prec)? {
            Some(bd) => {
                side_bound = Some(side_bound.map_or(bd, |s: f64| s.max(bd)));
                if bd >= saddle_value {
                    failed = failed.or(Some(seg));
                }
            }
            None => envelope_ok = false,
        }
    }
    if !envelope_ok {
        side_bound = None;
    }

    Ok(VerifyReport {
        ok: failed.is_none() && margin > 0.0,
        margin,
        saddle_value,
        side_bound,
        side_max,
        cells: cells.len(),
        failed_segment: failed,
    })
}

// f(y) = y(Li₂(1) + 4π²d − Re Li₂(e^{2πiz})), g(y) = x·Im Li₂(e^{2πiz}), z = x + iy
fn fg(d: i64, x: f64, y: f64, prec: u32) -> (f64, f64) {
    let z = APComplex::from_f64(prec, x, y);
    let tpi = APComplex::from_real(Float::with_val(prec, crate::numkit::pi(prec) * 2u32)).mul_i();
    let li = dilog(&(&tpi * &z).exp());
    let k = PI * PI / 6.0 + 4.0 * PI * PI * d as f64;
    (y * (k - li.re.to_f64()), x * li.im.to_f64())
}

/// Upper bound for Re(−p_d(x+iy)) on y ∈ [y0, y1], valid when f is nondecreasing and g nonincreasing there.
pub fn side_envelope(d: i64, x: f64, y0: f64, y1: f64, prec: u32) -> f64 {
    let num = fg(d, x, y1, prec).0 + fg(d, x, y0, prec).1;
    let den = if num >= 0.0 { x * x + y0 * y0 } else { x * x + y1 * y1 };
    num / (2.0 * PI * den)
}

/// Checks the monotonicity hypotheses on a sample grid and refines the cover of [0, ymax]
/// until the envelope drops below `target` (or 1024 pieces). None if the hypotheses fail.
pub fn side_envelope_adaptive(d: i64, x: f64, ymax: f64, target: f64, prec: u32) -> Result<Option<f64>> {
    let n = 200;
    let vals: Vec<(f64, f64)> =
        (0..=n).into_par_iter().map(|i| fg(d, x, ymax * i as f64 / n as f64, prec)).collect();
    let monotone = vals.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 <= w[0].1);
    if !monotone {
        return Ok(None);
    }
    let mut k = 4;
    loop {
        let h = ymax / k as f64;
        let bound = (0..k)
            .into_par_iter()
            .map(|i| side_envelope(d, x, h * i as f64, h * (i + 1) as f64, prec))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        if bound < target || k >= 1024 {
            if !bound.is_finite() {
                return Err(Error::Range("side envelope".into()));
            }
            return Ok(Some(bound));
        }
        k *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_slopes() {
        for (k, v) in [(PathKind::P, 0.216279), (PathKind::Q, 0.156728), (PathKind::R, 0.125269), (PathKind::S, -0.027027)] {
            let p = build_path(k, 128).unwrap();
            assert!((p.v - v).abs() < 5e-7, "{k:?} {}", p.v);
            assert_eq!(p.vertices.len(), 4);
        }
    }

    #[test]
    fn q_side_envelopes_match_quoted_values() {
        // x = 2.01 split at Y/3, x = 2.49 in one piece, Y = 0.16x
        let y = 2.01 * 0.16;
        let e1 = side_envelope(0, 2.01, 0.0, y / 3.0, 128);
        let e2 = side_envelope(0, 2.01, y / 3.0, y, 128);
        let e3 = side_envelope(0, 2.49, 0.0, 2.49 * 0.16, 128);
        assert!((e1 - 0.0232).abs() < 5e-5, "{e1}");
        assert!((e2 - 0.0226).abs() < 5e-5, "{e2}");
        // quoted as ≈ 0.021, an upper rounding
        assert!(e3 > 0.019 && e3 <= 0.021, "{e3}");
        assert!(e1.max(e2).max(e3) < 0.024);
    }

    #[test]
    fn all_paths_verify() {
        for k in PathKind::ALL {
            let p = build_path(k, 128).unwrap();
            let r = verify_path(&p, p.d).unwrap();
            assert!(r.ok, "{k:?} {r:?}");
            assert!(r.margin > 0.0);
            assert!(r.side_max < r.saddle_value);
        }
    }

    #[test]
    fn q_side_bound_below_024() {
        let p = build_path(PathKind::Q, 128).unwrap();
        let r = verify_path(&p, 0).unwrap();
        assert!(r.side_bound.unwrap() < 0.024, "{r:?}");
        assert!((r.saddle_value - 0.0256706).abs() < 5e-8);
    }

    #[test]
    fn wrong_phase_fails() {
        // the Q path through z1 does not pass through a saddle of p_1
        let p = build_path(PathKind::Q, 128).unwrap();
        let r = verify_path(&p, 1).unwrap();
        assert!(!r.ok);
        assert!(r.failed_segment.is_some());
    }
}
