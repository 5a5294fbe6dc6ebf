use rayon::prelude::*;
use rug::Float;

use super::args::{BoundsTarget, QMethodArg, RunConfig, VerifyTarget};
use super::output::Report;
use super::CliError;
use crate::expansions::{calibrated_table, ExpansionKind, ExpansionResult};
use crate::numkit::{fmt_float, pi, APComplex};
use crate::rademacher::{
    c_coeff, q_auto, q_bound, q_bound_refined, q_double, q_exact, q_logseries, q_simple, subset_sum, xi, zero_sum,
    SubsetTag,
};
use crate::saddle::{build_path, saddle_point, verify_path, PathKind};
use crate::sineprod::{half_identities, min_pair, psi, psi_signed, sine_product, psi_budget, HalfIdentity};
use crate::specfun::{clausen, dilog_zero};

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
}

impl Ctx<'_> {
    fn p(&self) -> u32 {
        self.cfg.bits
    }

    fn f(&self, x: &Float) -> String {
        fmt_float(x, self.cfg.digits)
    }

    fn f64s(&self, x: f64) -> String {
        format!("{x:.6e}")
    }

    fn base(&self, cmd: &str, cols: &[&str]) -> Report {
        let mut r = Report::new(cmd, cols);
        r.meta("bits", self.cfg.bits);
        r.meta("digits", self.cfg.digits);
        r
    }
}

fn neg_log_abs(w: &APComplex) -> Float {
    -w.abs().ln()
}

pub fn zeros(c: &Ctx, a: i64, b: i64) -> Result<Report, CliError> {
    let z = dilog_zero(a, b, c.p())?;
    let u = neg_log_abs(&z.w);
    let half = Float::with_val(c.p(), &u / 2u32);
    let mut r = c.base("zeros", &["A", "B", "re", "im", "residual", "neg_log_abs", "half_neg_log_abs"]);
    r.row(vec![a.to_string(), b.to_string(), c.f(&z.w.re), c.f(&z.w.im), c.f64s(z.residual.to_f64()), c.f(&u), c.f(&half)]);
    Ok(r)
}

pub fn saddles(c: &Ctx, d: i64, m: i64) -> Result<Report, CliError> {
    let s = saddle_point(d, m, c.p())?;
    let mut r = c.base("saddles", &["d", "m", "re", "im", "w_re", "w_im", "residual", "neg_log_abs_w", "p0_re", "p0_im"]);
    let p0 = s.p0();
    r.row(vec![
        d.to_string(),
        m.to_string(),
        c.f(&s.zstar.re),
        c.f(&s.zstar.im),
        c.f(&s.w.re),
        c.f(&s.w.im),
        c.f64s(s.residual()?.to_f64()),
        c.f(&neg_log_abs(&s.w)),
        c.f(&p0.re),
        c.f(&p0.im),
    ]);
    Ok(r)
}

pub fn qcoeff(c: &Ctx, h: i64, k: i64, method: QMethodArg) -> Result<Report, CliError> {
    let n = c.cfg.single_n()?;
    let s = c.cfg.sigma;
    let q = match method {
        QMethodArg::Auto => q_auto(h, k, s, n, c.p()),
        QMethodArg::Exact => q_exact(h, k, s, n, c.p()),
        QMethodArg::Simple => q_simple(h, k, s, n, c.p()),
        QMethodArg::Double => q_double(h, k, s, n, c.p()),
        QMethodArg::Logseries => q_logseries(h, k, s, n, c.p()),
    }?;
    let mut r = c.base("qcoeff", &["h", "k", "sigma", "N", "method", "re", "im"]);
    r.row(vec![
        h.to_string(),
        k.to_string(),
        s.to_string(),
        n.to_string(),
        format!("{:?}", q.method),
        c.f(&q.value.re),
        c.f(&q.value.im),
    ]);
    Ok(r)
}

pub fn ccoeff(c: &Ctx, h: i64, k: i64, ell: i64) -> Result<Report, CliError> {
    let n = c.cfg.single_n()?;
    let v = c_coeff(h, k, ell, n, c.p())?;
    let mut r = c.base("ccoeff", &["h", "k", "ell", "N", "re", "im"]);
    r.row(vec![h.to_string(), k.to_string(), ell.to_string(), n.to_string(), c.f(&v.re), c.f(&v.im)]);
    Ok(r)
}

fn parse_subset(s: &str) -> Result<Option<SubsetTag>, CliError> {
    let l = s.to_ascii_lowercase();
    Ok(Some(match l.as_str() {
        "all" | "zero" => return Ok(None),
        "a" => SubsetTag::A,
        "c" => SubsetTag::C,
        "cprime" | "c'" => SubsetTag::Cprime,
        "cstar" | "c*" => SubsetTag::Cstar,
        "d" => SubsetTag::D,
        "e" => SubsetTag::E,
        _ => match l.strip_prefix('b').and_then(|k| k.parse::<i64>().ok()) {
            Some(k) if k >= 1 => SubsetTag::B(k),
            _ => return Err(CliError::Usage(format!("unknown subset {s}"))),
        },
    }))
}

pub fn sums(c: &Ctx, subset: &str) -> Result<Report, CliError> {
    let tag = parse_subset(subset)?;
    let mut r = c.base("sums", &["subset", "sigma", "N", "members", "re", "im"]);
    let ns = c.cfg.n.clone().ok_or_else(|| CliError::Usage("--N is required".into()))?;
    for n in ns {
        let (count, v) = match tag {
            Some(t) => (t.members(n).len(), subset_sum(t, c.cfg.sigma, n, c.p())?),
            None => (crate::rademacher::farey(n).len(), zero_sum(n, c.cfg.sigma, c.p())?),
        };
        r.row(vec![subset.to_string(), c.cfg.sigma.to_string(), n.to_string(), count.to_string(), c.f(&v.re), c.f(&v.im)]);
    }
    Ok(r)
}

fn table_kind(which: u8) -> Result<(ExpansionKind, [i64; 2]), CliError> {
    Ok(match which {
        1 => (ExpansionKind::C2, [800, 1000]),
        2 => (ExpansionKind::C2Star, [800, 1000]),
        3 => (ExpansionKind::D1Even, [1000, 1001]),
        4 => (ExpansionKind::E1, [800, 1000]),
        _ => return Err(CliError::Usage(format!("table must be 1..=4, got {which}"))),
    })
}

pub fn table(c: &Ctx, which: u8) -> Result<Report, CliError> {
    let (kind, default_ns) = table_kind(which)?;
    let ns = c.cfg.n.clone().unwrap_or_else(|| default_ns.to_vec());
    let mmax = c.cfg.m.unwrap_or(4);
    let tmax = c.cfg.tmax;
    if mmax == 0 || mmax > tmax + 1 {
        return Err(CliError::Usage(format!("need 1 <= m <= tmax+1 = {}", tmax + 1)));
    }
    for &n in &ns {
        if n < 1 {
            return Err(CliError::Usage(format!("N must be positive, got {n}")));
        }
        if n < 400 {
            eprintln!("warning: N = {n} is below the range (N >= 400) where the expansions are accurate");
        }
    }
    let mut kinds: Vec<ExpansionKind> = Vec::new();
    for &n in &ns {
        let k = kind.for_n(n);
        if !kinds.contains(&k) {
            kinds.push(k);
        }
    }
    let tables: Vec<ExpansionResult> =
        kinds.iter().map(|&k| calibrated_table(k, c.cfg.sigma, tmax, c.p())).collect::<Result<_, _>>()?;
    let mut cols: Vec<String> = vec!["N".into()];
    cols.extend((1..=mmax).map(|m| format!("m={m}")));
    cols.push("direct".into());
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut r = c.base("table", &col_refs);
    r.meta("table", which);
    r.meta("sigma", c.cfg.sigma);
    r.meta("tmax", tmax);
    for t in &tables {
        let cal = t.calibration.as_ref().expect("calibrated");
        r.meta(
            &format!("sign[{}]", t.kind),
            format!("{} (N={}/{}: err {:.3e} kept, {:.3e} flipped)", if cal.flipped { "flipped" } else { "kept" }, cal.ns[0], cal.ns[1], cal.err_kept, cal.err_flipped),
        );
    }
    let rows: Vec<Result<Vec<String>, CliError>> = ns
        .par_iter()
        .map(|&n| {
            let k = kind.for_n(n);
            let t = tables.iter().find(|t| t.kind == k).expect("built above");
            let mut row = vec![n.to_string()];
            for m in 1..=mmax {
                row.push(c.f(&t.eval(n, m)?));
            }
            let direct = subset_sum(k.subset(), c.cfg.sigma, n, c.p())?.re;
            row.push(c.f(&direct));
            Ok(row)
        })
        .collect();
    for row in rows {
        r.row(row?);
    }
    Ok(r)
}

pub fn figure(c: &Ctx, which: u8) -> Result<Report, CliError> {
    let p = c.p();
    match which {
        1 => {
            let k = 101;
            let budget = psi_budget(k, p);
            let cl = clausen(&Float::with_val(p, pi(p) / 3u32));
            let two_pi = Float::with_val(p, pi(p) * 2u32);
            let mut r = c.base("figure", &["h", "psi", "psi_abs", "bound"]);
            r.meta("k", k);
            let rows: Vec<Result<Vec<String>, CliError>> = (1..k)
                .into_par_iter()
                .map(|h| {
                    let v = psi_signed(h, k, p)?;
                    let va = psi(h, k, p)?;
                    let d = min_pair(h, k)?.d;
                    let bound = Float::with_val(p, &cl / Float::with_val(p, &two_pi * d)) + &budget;
                    Ok(vec![h.to_string(), c.f(&v), c.f(&va), c.f(&bound)])
                })
                .collect();
            for row in rows {
                r.row(row?);
            }
            Ok(r)
        }
        2 => {
            let n = 50;
            let mut r = c.base("figure", &["k", "log_Qstar", "log_absQ"]);
            r.meta("N", n);
            r.meta("h", 1);
            r.meta("sigma", 1);
            let rows: Vec<Result<Vec<String>, CliError>> = (2..=n)
                .into_par_iter()
                .map(|k| {
                    let b = q_bound(1, k, 1, n, p)?.ln();
                    let q = q_auto(1, k, 1, n, p)?.value.abs().ln();
                    Ok(vec![k.to_string(), c.f(&b), c.f(&q)])
                })
                .collect();
            for row in rows {
                r.row(row?);
            }
            Ok(r)
        }
        _ => Err(CliError::Usage(format!("figure must be 1 or 2, got {which}"))),
    }
}

pub fn bounds(c: &Ctx, what: BoundsTarget, big_k: &str) -> Result<(Report, bool), CliError> {
    let p = c.p();
    match what {
        BoundsTarget::Xi => {
            let ks = super::args::parse_n_list(big_k)?;
            let mut r = c.base("bounds", &["K", "xi1", "xi2", "xi3", "xi123"]);
            for k in ks {
                if k < 1 {
                    return Err(CliError::Usage(format!("K must be positive, got {k}")));
                }
                let x = xi(k, p);
                r.row(vec![k.to_string(), c.f(&x.xi1), c.f(&x.xi2), c.f(&x.xi3), c.f(&x.product())]);
            }
            Ok((r, true))
        }
        BoundsTarget::Q => {
            let n = c.cfg.n.as_ref().map(|_| c.cfg.single_n()).transpose()?.unwrap_or(50);
            let sigma = c.cfg.sigma;
            let mut r = c.base("bounds", &["k", "abs_Q", "bound", "bound_refined", "ok"]);
            r.meta("N", n);
            r.meta("sigma", sigma);
            let rows: Vec<Result<(Vec<String>, bool), CliError>> = (2..=n)
                .into_par_iter()
                .map(|k| {
                    let q = q_auto(1, k, sigma, n, p)?.value.abs();
                    let b = q_bound(1, k, sigma, n, p)?;
                    let br = q_bound_refined(k, 1, k, sigma, n, p)?;
                    let ok = q <= b && q <= br;
                    Ok((vec![k.to_string(), c.f(&q), c.f(&b), c.f(&br), ok.to_string()], ok))
                })
                .collect();
            let mut all = true;
            for row in rows {
                let (row, ok) = row?;
                all &= ok;
                r.row(row);
            }
            Ok((r, all))
        }
    }
}

pub fn verify(c: &Ctx, target: VerifyTarget) -> Result<(Report, bool), CliError> {
    let p = c.p();
    let mut r = c.base("verify", &["check", "case", "value", "threshold", "pass"]);
    let mut all = true;
    let mut push = |r: &mut Report, check: &str, case: String, value: String, thr: String, ok: bool| {
        all &= ok;
        r.row(vec![check.into(), case, value, thr, ok.to_string()]);
    };
    let want = |t: VerifyTarget| target == t || target == VerifyTarget::All;

    if want(VerifyTarget::Paths) {
        let reports: Vec<Result<(PathKind, crate::saddle::VerifyReport), CliError>> = PathKind::ALL
            .par_iter()
            .map(|&k| {
                let path = build_path(k, 128)?;
                Ok((k, verify_path(&path, path.d)?))
            })
            .collect();
        for rep in reports {
            let (k, v) = rep?;
            let side = v.side_bound.map_or("none".to_string(), |b| format!("{b:.6e}"));
            push(&mut r, "path", format!("{} side_bound={side} saddle={:.7}", k.name(), v.saddle_value), format!("{:.6e}", v.margin), "margin>0".into(), v.ok);
        }
    }

    if want(VerifyTarget::ZeroSum) {
        let ns = c.cfg.n.clone().unwrap_or_else(|| vec![10]);
        let thr_bits = p as i32 - 56;
        let thr = Float::with_val(p, Float::i_exp(1, -thr_bits));
        for n in ns {
            let s = zero_sum(n, c.cfg.sigma, p)?.abs();
            let ok = s < thr;
            push(&mut r, "zero-sum", format!("N={n} sigma={}", c.cfg.sigma), c.f64s(s.to_f64()), format!("2^-{thr_bits}"), ok);
        }
    }

    if want(VerifyTarget::Identities) {
        let ids = [
            HalfIdentity::TwoOverK { k: 101, a: 20 },
            HalfIdentity::KMinusOneOverTwoK { k: 101, m: 40 },
            HalfIdentity::ParityShift { k: 101, n: 151 },
        ];
        let thr = Float::with_val(p, Float::i_exp(1, -(p as i32 - 40)));
        for id in ids {
            let v = half_identities(id, p)?;
            let ok = v < thr;
            push(&mut r, "half-identity", format!("{id:?}"), c.f64s(v.to_f64()), format!("2^-{}", p - 40), ok);
        }
        let tmax = c.cfg.tmax.clamp(3, 12);
        let ct = calibrated_table(ExpansionKind::C2, c.cfg.sigma, tmax, p)?;
        let et = calibrated_table(ExpansionKind::E1, c.cfg.sigma, tmax, p)?;
        for t in 0..=3 {
            let d = (&et.coeffs[t] - &ct.coeffs[t].scale_f64(3.0)).abs().to_f64();
            let thr = if t == 0 { 1e-20 } else { 1e-15 };
            push(&mut r, "e_t-3c_t", format!("t={t} sigma={}", c.cfg.sigma), c.f64s(d), format!("{thr:e}"), d < thr);
        }
    }
    Ok((r, all))
}

pub fn sineprod(c: &Ctx, h: i64, k: i64, m: u64) -> Result<Report, CliError> {
    let p = c.p();
    let sp = sine_product(h, k, m, p)?;
    let mp = min_pair(h, k)?;
    let ps = psi(h, k, p)?;
    let mut r = c.base("sineprod", &["h", "k", "m", "product", "log_abs_over_k", "D", "beta0", "gamma0", "psi"]);
    let log = if sp.zero_factor {
        "-inf".to_string()
    } else {
        c.f(&(sp.value.clone().abs().ln() / Float::with_val(p, k)))
    };
    r.row(vec![
        h.to_string(),
        k.to_string(),
        m.to_string(),
        c.f(&sp.value),
        log,
        mp.d.to_string(),
        mp.beta0.to_string(),
        mp.gamma0.to_string(),
        c.f(&ps),
    ]);
    Ok(r)
}
