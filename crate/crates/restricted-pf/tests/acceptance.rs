//! Acceptance runner: one PASS/FAIL line per criterion. Exits nonzero if any fails.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::ops::Pow;
use rug::{Float, Rational};

use restricted_pf::expansions::{calibrated_table, compare, ExpansionKind};
use restricted_pf::numkit::{pi, quad::integrate, APComplex, TruncSeries};
use restricted_pf::rademacher::{
    farey, partition_count, q_auto, q_bound, q_double, q_exact, q_logseries, q_simple, reconstruct_from_pf, xi,
    zero_sum,
};
use restricted_pf::saddle::{build_path, ray_deriv_bounds, verify_path, wojdylo_a2s, PathKind, RayDeriv, Wojdylo};
use restricted_pf::sineprod::psi_min_slack;
use restricted_pf::specfun::dilog_zero;

const P: u32 = 256;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

/// True when x rounds to the printed literal: |x − v| ≤ half a unit in its last printed digit.
fn matches_printed(x: f64, printed: &str) -> bool {
    let v: f64 = printed.parse().unwrap();
    let mant = printed.split(['e', 'E']).next().unwrap();
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let sig = digits.trim_start_matches('0').len().max(1) as i32;
    let e10 = v.abs().log10().floor() as i32;
    let half_ulp = 0.5 * 10f64.powi(e10 - sig + 1);
    (x - v).abs() <= half_ulp * (1.0 + 1e-12)
}

/// Rows of (N, printed m=1..4, printed direct) checked against the expansion and direct sum.
fn table_check(kind: ExpansionKind, rows: &[(i64, [&str; 4], &str)]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, cols, direct) in rows {
        let t0 = Instant::now();
        let k = kind.for_n(*n);
        let res = match calibrated_table(k, 1, 3, P) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("{k}: {e}")),
        };
        let cmp = match compare(&res, *n, 4) {
            Ok(c) => c,
            Err(e) => return outcome(false, format!("N={n}: {e}")),
        };
        let mut bad = Vec::new();
        for (m, want) in cols.iter().enumerate() {
            let got = cmp.approx[m].to_f64();
            if !matches_printed(got, want) {
                bad.push(format!("m={} {got:.7e}≠{want}", m + 1));
            }
        }
        let d = cmp.direct.to_f64();
        if !matches_printed(d, direct) {
            bad.push(format!("direct {d:.7e}≠{direct}"));
        }
        let secs = t0.elapsed().as_secs_f64();
        if secs > 600.0 {
            bad.push(format!("runtime {secs:.0}s"));
        }
        ok &= bad.is_empty();
        detail.push(if bad.is_empty() {
            format!("N={n} direct {d:.7e} ({secs:.1}s)")
        } else {
            format!("N={n} {}", bad.join(", "))
        });
    }
    outcome(ok, detail.join("; "))
}

fn c1() -> Outcome {
    table_check(
        ExpansionKind::C2,
        &[
            (800, ["293.204", "301.757", "303.016", "303.119"], "303.112"),
            (1000, ["-263123", "-261461", "-261486", "-261493"], "-261493"),
        ],
    )
}

fn c2() -> Outcome {
    table_check(
        ExpansionKind::C2Star,
        &[
            (800, ["1.43938e6", "1.39381e6", "1.3934e6", "1.39341e6"], "1.39341e6"),
            (1000, ["1.7278e9", "1.74062e9", "1.74028e9", "1.74028e9"], "1.74028e9"),
        ],
    )
}

fn c3() -> Outcome {
    table_check(
        ExpansionKind::D1Even,
        &[
            (1000, ["-1.7713e9", "-1.7785e9", "-1.7778e9", "-1.77778e9"], "-1.77778e9"),
            (1001, ["-2.10996e9", "-2.11483e9", "-2.1142e9", "-2.11418e9"], "-2.11418e9"),
        ],
    )
}

fn c4() -> Outcome {
    table_check(
        ExpansionKind::E1,
        &[
            (800, ["879.611", "905.272", "909.048", "909.358"], "909.337"),
            (1000, ["-789369", "-784383", "-784458", "-784480"], "-784480"),
        ],
    )
}

fn c5() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    let tol = Float::with_val(64, 1e-40);
    let mut logs = Vec::new();
    for (a, b, re, im) in [(0, -1, 0.916198, -0.182459), (0, -2, 0.968482, -0.109531), (1, -3, -0.459473, -0.848535)] {
        match dilog_zero(a, b, P) {
            Ok(z) => {
                let (x, y) = z.w.to_c64();
                let good = (x - re).abs() < 5e-7 && (y - im).abs() < 5e-7 && z.residual < tol;
                ok &= good;
                let u = -z.w.abs().ln().to_f64();
                logs.push(u);
                detail.push(format!("w({a},{b}) res {:.1e}", z.residual.to_f64()));
            }
            Err(e) => return outcome(false, format!("w({a},{b}): {e}")),
        }
    }
    for (got, want) in [(logs[0], 0.068076), (logs[1], 0.0256706), (logs[2], 0.0356795), (logs[0] / 2.0, 0.0340381)] {
        ok &= (got - want).abs() < 5e-6;
        detail.push(format!("{got:.7}"));
    }
    outcome(ok, detail.join(", "))
}

fn close_bits(a: &APComplex, b: &APComplex, bits: i32) -> bool {
    let scale = a.abs().max(&b.abs()).clone().max(&Float::with_val(64, 1)).clone();
    (a - b).abs() <= scale * Float::with_val(64, Float::i_exp(1, -bits))
}

fn c6() -> Outcome {
    let mut fails = Vec::new();
    let t160 = Float::with_val(64, Float::i_exp(1, -160));
    for big_n in 1..=8 {
        for n in 0..=30 {
            let want = APComplex::from_rational(P, &Rational::from(partition_count(big_n, n)));
            match reconstruct_from_pf(big_n, n, P) {
                Ok(r) if (&r - &want).abs() < t160 => {}
                _ => fails.push(format!("pf N={big_n} n={n}")),
            }
        }
    }
    let t200 = Float::with_val(64, Float::i_exp(1, -200));
    let mut zs = 0;
    for big_n in 1..=12i64 {
        // the identity needs σ < N(N+1)/2
        for sigma in (1..=3).filter(|&s| big_n * (big_n + 1) / 2 > s) {
            zs += 1;
            match zero_sum(big_n, sigma, P) {
                Ok(s) if s.abs() < t200 => {}
                _ => fails.push(format!("zero-sum N={big_n} σ={sigma}")),
            }
        }
    }
    let mut triples = 0;
    for big_n in 1..=24i64 {
        for f in farey(big_n) {
            let (h, k) = (f.h, f.k);
            let a = q_exact(h, k, 1, big_n, P);
            let b = q_logseries(h, k, 1, big_n, P);
            let c = if 2 * k > big_n {
                Some(q_simple(h, k, 1, big_n, P))
            } else if 3 * k > big_n {
                Some(q_double(h, k, 1, big_n, P))
            } else {
                None
            };
            let (Ok(a), Ok(b)) = (a, b) else {
                fails.push(format!("Q {h}/{k} N={big_n} error"));
                continue;
            };
            let mut good = close_bits(&a.value, &b.value, 160);
            if let Some(c) = c {
                triples += 1;
                good &= c.map(|c| close_bits(&a.value, &c.value, 160)).unwrap_or(false);
            }
            if !good {
                fails.push(format!("Q {h}/{k} N={big_n}"));
            }
        }
    }
    let ok = fails.is_empty();
    outcome(ok, if ok { format!("248 reconstructions, {zs} zero sums, {triples} pole-formula triples") } else { fails.join(", ") })
}

fn c7() -> Outcome {
    let mut fails = Vec::new();
    for k in 2..=50 {
        let q = q_auto(1, k, 1, 50, P).map(|v| v.value.abs());
        let b = q_bound(1, k, 1, 50, P);
        match (q, b) {
            (Ok(q), Ok(b)) if q <= b => {}
            _ => fails.push(format!("Q bound k={k}")),
        }
    }
    let slack = match psi_min_slack(101, P) {
        Ok((s, _, _)) => s.to_f64(),
        Err(e) => return outcome(false, e.to_string()),
    };
    if slack < 0.0 {
        fails.push(format!("Ψ budget slack {slack}"));
    }
    for (k, x1, x2, x3) in [
        (2, 1.37065, 1.42160, 1.35524),
        (61, 1.00101, 1.00101, 1.01572),
        (82, 1.00057, 1.00057, 1.01182),
        (101, 1.00038, 1.00038, 1.00965),
    ] {
        let x = xi(k, P);
        let good = [(&x.xi1, x1), (&x.xi2, x2), (&x.xi3, x3)].iter().all(|(a, b)| (a.to_f64() - b).abs() < 5e-6);
        if !good {
            fails.push(format!("ξ K={k}"));
        }
    }
    let ok = fails.is_empty();
    outcome(ok, if ok { format!("49 Q bounds, min budget slack {slack:.4}, 4 ξ triples") } else { fails.join(", ") })
}

fn c8() -> Outcome {
    let b2 = ray_deriv_bounds(0, 0.15, 0.16, 2.0, 2.35, 3, 10, RayDeriv::Second);
    let b1 = ray_deriv_bounds(0, 0.15, 0.16, 2.35, 2.5, 3, 10, RayDeriv::First);
    let (Ok(b2), Ok(b1)) = (b2, b1) else { return outcome(false, "ray bounds error") };
    let mut ok = b2 > 0.09 && b1 > 0.03;
    let mut detail = vec![format!("f''≥{b2:.4}, f'≥{b1:.4}")];
    for k in PathKind::ALL {
        let r = build_path(k, 128).and_then(|p| verify_path(&p, p.d));
        match r {
            Ok(r) => {
                ok &= r.ok && r.margin > 0.0;
                detail.push(format!("{} margin {:.2e}", k.name(), r.margin));
            }
            Err(e) => return outcome(false, format!("{}: {e}", k.name())),
        }
    }
    outcome(ok, detail.join(", "))
}

fn c9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let cplx = |rng: &mut StdRng| APComplex::from_f64(P, rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let tol = Float::with_val(P, Float::i_exp(1, -180));
    let zero = APComplex::zero(P);
    let mut worst = 0f64;
    let mut ok = true;
    for _ in 0..20 {
        let mut p0 = cplx(&mut rng);
        while p0.abs() < 0.2 {
            p0 = cplx(&mut rng);
        }
        let (p1, p2) = (cplx(&mut rng), cplx(&mut rng));
        let (q0, q1, q2) = (cplx(&mut rng), cplx(&mut rng), cplx(&mut rng));
        let omega = cplx(&mut rng);
        let ps = TruncSeries::new(zero.clone(), vec![zero.clone(), zero.clone(), p0.clone(), p1.clone(), p2.clone()]);
        let qs = TruncSeries::new(zero.clone(), vec![q0.clone(), q1.clone(), q2.clone()]);
        let front = &omega / &(&omega.square() * &p0).sqrt().scale_f64(2.0);
        let (Ok(a0), Ok(a2)) = (wojdylo_a2s(&ps, &qs, &omega, 0), wojdylo_a2s(&ps, &qs, &omega, 1)) else {
            return outcome(false, "a2s error");
        };
        let w0 = &front * &q0;
        let t1 = &q2 / &p0;
        let t2 = (&(&(&p1 * &q1) + &(&p2 * &q0)) / &p0.square()).scale_f64(-1.5);
        let t3 = (&(&p1.square() * &q0) / &p0.powi(3)).scale_f64(15.0 / 8.0);
        let w2 = &front * &(&(&t1 + &t2) + &t3);
        let e0 = (&a0 - &w0).abs();
        let e2 = (&a2 - &w2).abs() / (Float::with_val(P, 1) + w2.abs());
        ok &= e0 < tol && e2 < tol;
        worst = worst.max(e0.to_f64()).max(e2.to_f64());
    }

    // p = z², q = 1: 2Γ(1/2)a₀/√N = √(π/N)
    let mut c = vec![zero.clone(); 8];
    c[2] = APComplex::one(P);
    let ps = TruncSeries::new(zero.clone(), c);
    let mut qc = vec![zero.clone(); 6];
    qc[0] = APComplex::one(P);
    let qs = TruncSeries::new(zero.clone(), qc);
    let Ok(w) = Wojdylo::new(&ps, &APComplex::one(P), 2) else { return outcome(false, "gaussian setup") };
    let Ok(t) = w.terms(&qs, 3) else { return outcome(false, "gaussian terms") };
    for n in [10u32, 100, 1000] {
        let approx = Float::with_val(P, &t[0].re * 2u32) / Float::with_val(P, n).sqrt();
        let exact = Float::with_val(P, pi(P) / n).sqrt();
        ok &= Float::with_val(P, approx - exact).abs() < 1e-70;
    }
    ok &= t[1].abs() < 1e-70 && t[2].abs() < 1e-70;

    // e^{−N(z² + z³/3)}: error after S terms falls like N^{−S−1/2}
    let prec = 128;
    let z = APComplex::zero(prec);
    let mut c = vec![z.clone(); 12];
    c[2] = APComplex::one(prec);
    c[3] = APComplex::from_rational(prec, &Rational::from((1, 3)));
    let ps = TruncSeries::new(z.clone(), c);
    let mut qc = vec![z.clone(); 10];
    qc[0] = APComplex::one(prec);
    let qs = TruncSeries::new(z, qc);
    let s_terms = 2;
    let t = Wojdylo::new(&ps, &APComplex::one(prec), s_terms).and_then(|w| w.terms(&qs, s_terms));
    let Ok(t) = t else { return outcome(false, "cubic toy") };
    let mut errs = Vec::new();
    for n in [200u32, 400, 800] {
        let f = |x: &Float| {
            let x2 = Float::with_val(prec, x.square_ref());
            let x3 = Float::with_val(prec, &x2 * x);
            Ok(Float::with_val(prec, -((x2 + x3 / 3u32) * n)).exp())
        };
        let tol = Float::with_val(prec, Float::i_exp(1, -100));
        let Ok(exact) = integrate(&f, &Float::with_val(prec, -1), &Float::with_val(prec, 1), &tol) else {
            return outcome(false, "quadrature");
        };
        let mut approx = Float::new(prec);
        for (s, ts) in t.iter().enumerate() {
            approx += Float::with_val(prec, &ts.re * 2u32) / Float::with_val(prec, n).pow(Float::with_val(prec, s as f64 + 0.5));
        }
        errs.push(Float::with_val(prec, exact - approx).abs().to_f64());
    }
    let want = 2f64.powf(s_terms as f64 + 0.5);
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    ok &= ratios.iter().all(|r| (r / want - 1.0).abs() < 0.3);
    outcome(ok, format!("worst a₀/a₂ gap {worst:.1e}, cubic error ratios {:.3}, {:.3} (expect {want:.3})", ratios[0], ratios[1]))
}

fn c10() -> Outcome {
    let (Ok(c), Ok(e)) = (calibrated_table(ExpansionKind::C2, 1, 3, P), calibrated_table(ExpansionKind::E1, 1, 3, P)) else {
        return outcome(false, "coefficient tables");
    };
    let mut ok = true;
    let mut res = Vec::new();
    for t in 0..=3 {
        let d = (&e.coeffs[t] - &c.coeffs[t].scale_f64(3.0)).abs().to_f64();
        ok &= d < if t == 0 { 1e-20 } else { 1e-15 };
        res.push(format!("t={t}: {d:.1e}"));
    }
    outcome(ok, res.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("C2 table", c1),
        ("C2* table", c2),
        ("D1 table", c3),
        ("E1 table", c4),
        ("dilogarithm zeros", c5),
        ("exactness suite", c6),
        ("bounds suite", c7),
        ("path certification", c8),
        ("Wojdylo gate", c9),
        ("e_t = 3c_t", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = f();
        let tag = if o.ok { "PASS" } else { "FAIL" };
        if !o.ok {
            failed += 1;
        }
        println!("{tag} {:>2} {name}: {} [{:.1}s]", i + 1, o.detail, t0.elapsed().as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
