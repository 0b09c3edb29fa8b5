//! Acceptance suite. Prints one PASS/FAIL line per criterion with its
//! runtime and the measured quantities. Exits non-zero on failure only when
//! `ARCOPUC_ACCEPTANCE_STRICT=1`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use arcopuc::asymptotics::{szego_h_asym, AsymContext, Regime};
use arcopuc::equilibrium::{band_edge, tilde_wrappers, xi_critical, EquilibriumData};
use arcopuc::fourext::{
    discrete_norm_sqr, error_function, eval_extension, project, project_with, FourierCoeffSeq,
};
use arcopuc::opuc::{
    expansion_coeffs, gram_schmidt_oracle, point_on_circle, r_quantities, szego_system, KernelTable,
};
use arcopuc::params_lattice::{lattice_nodes, t_set};
use arcopuc::study::{compare_at, compare_on_arc, loglog_fit, ArcGrid};
use arcopuc::{make_params, ExtendedComplex, ExtendedReal, ExtensionParams, Rational};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<Outcome, String>;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn params(p: u64, q: u64, md: usize, n: usize) -> ExtensionParams {
    make_params(Rational::new(p, q).unwrap(), md, n).unwrap()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run(id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Check) -> bool {
    let t = Instant::now();
    let res = f();
    let el = t.elapsed();
    let (pass, detail) = match res {
        Ok(o) => (o.pass && el <= budget, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {id:>2} {verdict} {name} [{:.3?} of {:.0?}] {detail}",
        el, budget
    );
    pass
}

fn criterion_1() -> Check {
    let a = 5.0 * PI / 6.0;
    let t = Instant::now();
    let b1 = band_edge(a, 32.0 / 25.0).map_err(err)?;
    let b2 = band_edge(a, 7.0).map_err(err)?;
    let el = t.elapsed();
    let ok = (b1 - 1.389).abs() <= 0.002 && (b2 - 2.604).abs() <= 0.002 && el < Duration::from_millis(1);
    Ok(Outcome::new(ok, format!("beta(32/25)={b1:.6} beta(7)={b2:.6} compute={el:.1?}")))
}

fn criterion_2() -> Check {
    let v0 = EquilibriumData::new(PI / 2.0, 2.0).map_err(err)?.log_transform_l(PI / 2.0).map_err(err)?;
    let mut worst = v0.abs();
    for xi in [2.0, 5.0] {
        let eq = EquilibriumData::new(PI, xi).map_err(err)?;
        for phi in [0.0, 1.0, 2.0] {
            worst = worst.max(eq.log_transform_l(phi).map_err(err)?.abs());
        }
    }
    Ok(Outcome::new(worst < 1e-9, format!("|L(pi/2;pi/2,2)|={:.2e} max|L|={worst:.2e}", v0.abs())))
}

fn criterion_3() -> Check {
    let mut ok = true;
    let mut checked = 0;
    let mut skipped = vec![];
    let (mut w_mass, mut w_flat, mut w_l, mut w_band) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut min_sat = f64::INFINITY;
    let mut max_ell = f64::NEG_INFINITY;
    for (an, ad, aname) in [(1.0, 3.0, "pi/3"), (1.0, 2.0, "pi/2"), (5.0, 6.0, "5pi/6")] {
        let alpha = PI * an / ad;
        for xi in [1.5, 2.0, 7.0] {
            if xi * alpha <= PI {
                skipped.push(format!("({aname},{xi})"));
                continue;
            }
            checked += 1;
            let eq = EquilibriumData::new(alpha, xi).map_err(err)?;
            w_mass = w_mass.max((eq.total_mass().map_err(err)? - 1.0).abs());
            let (b, a) = (eq.beta, eq.alpha);
            for i in 1..10 {
                let th = b + (a - b) * i as f64 / 10.0;
                w_flat = w_flat.max((eq.density_rho(th).map_err(err)? - xi / (2.0 * PI)).abs());
            }
            max_ell = max_ell.max(eq.ell);
            w_l = w_l.max((eq.ell - 2.0 * eq.log_transform_l(b).map_err(err)?).abs());
            for i in 0..20 {
                let phi = b * i as f64 / 19.0;
                w_band = w_band.max((2.0 * eq.log_transform_l(phi).map_err(err)? - eq.ell).abs());
            }
            let mut params_lat = vec![];
            let spacing = 2.0 * PI / (xi * 40.0);
            let mut th = b + 0.5 * spacing;
            while th < a {
                params_lat.push(th);
                th += spacing;
            }
            for th in params_lat {
                min_sat = min_sat.min(2.0 * eq.log_transform_l(th).map_err(err)? - eq.ell);
            }
        }
    }
    ok &= w_mass <= 1e-10 && w_flat <= 1e-12 && max_ell < 0.0 && w_l < 1e-8 && w_band < 1e-9 && min_sat > 0.0;
    Ok(Outcome::new(
        ok,
        format!(
            "{checked} feasible cases; |mass-1|={w_mass:.1e} |rho-xi/2pi|={w_flat:.1e} max l={max_ell:.4} \
             |l-2L(beta)|={w_l:.1e} band |2L-l|={w_band:.1e} min sat 2L-l={min_sat:.2e}; \
             skipped {} (xi*alpha<=pi admits no constrained measure)",
            skipped.join(" ")
        ),
    ))
}

fn criterion_4() -> Check {
    let mut worst = 0.0f64;
    for (p, q) in [(2, 1), (6, 5)] {
        for n in [25, 35] {
            let pr = params(p, q, 15, n);
            let s = szego_system(&pr, 15).map_err(err)?;
            let g = gram_schmidt_oracle(&pr, 15).map_err(err)?;
            for j in 0..=15 {
                for i in 0..=j {
                    let c = s.coeffs[j][i];
                    let d = (c - g.coeffs[j][i]).abs().to_f64() / c.abs().to_f64().max(1.0);
                    worst = worst.max(d);
                }
            }
        }
    }
    Ok(Outcome::new(worst <= 1e-20, format!("max coefficient discrepancy {worst:.2e}")))
}

fn criterion_5() -> Check {
    let grid = [(8usize, 21usize), (12, 31), (16, 41)];
    let outer_pts = [
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, 1.5),
        Complex64::new(-1.6, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, -0.4),
        Complex64::new(0.3, -0.3),
    ];
    let ms: Vec<f64> = grid.iter().map(|g| g.0 as f64).collect();
    let (mut band, mut sat, mut outer) = (vec![], vec![], vec![]);
    let (mut rho_lit, mut rho_alt, mut hr_lit, mut hr_lat, mut h_abs) = (vec![], vec![], vec![], vec![], vec![]);
    for &(md, n) in &grid {
        let p = params(2, 1, md, n);
        let sys = szego_system(&p, md + 1).map_err(err)?;
        let ctx = AsymContext::new(&p).map_err(err)?;
        let max_env = |g: ArcGrid, r: Regime| -> std::result::Result<f64, String> {
            let rows = compare_on_arc(&sys, &ctx, &g.angles(&ctx, 41), Some(r)).map_err(err)?;
            Ok(rows.iter().map(|r| r.envelope_error).fold(0.0, f64::max))
        };
        band.push(max_env(ArcGrid::Band, Regime::Band)?);
        sat.push(max_env(ArcGrid::Saturated, Regime::Saturated)?);
        let mut o = 0.0f64;
        for &z in &outer_pts {
            let row = compare_at(&sys, &ctx, z).map_err(err)?;
            if row.regime() != Regime::Outer {
                return Err(format!("{z} classified as {}", row.regime()));
            }
            o = o.max(row.rel_error);
        }
        outer.push(o);

        let eq = &ctx.eq;
        let c = (eq.beta / 2.0).cos();
        let sign = if md % 2 == 0 { 1.0 } else { -1.0 };
        let rho = sys.rho_j(md).to_f64();
        rho_lit.push((sign * rho - c).abs());
        rho_alt.push((-sign * rho - c).abs());
        let ratio = (sys.h[md + 1] / sys.h[md]).to_f64();
        hr_lit.push((ratio - eq.ell.exp()).abs());
        let eq1 = EquilibriumData::new(p.alpha, p.m as f64 / (md + 1) as f64).map_err(err)?;
        let formula = szego_h_asym(&eq1, md + 1).h / szego_h_asym(eq, md).h;
        hr_lat.push((ratio - formula).abs());
        h_abs.push(sys.h[md].to_f64() / szego_h_asym(eq, md).h);
    }
    let slope = |ys: &[f64]| loglog_fit(&ms, ys).map(|f| f.slope).unwrap_or(f64::NAN);
    let in_rate = |s: f64| (-1.5..=-0.5).contains(&s);
    let c_stable = |ys: &[f64]| {
        let cs: Vec<f64> = ys.iter().zip(&ms).map(|(y, m)| y * m).collect();
        let (lo, hi) = cs.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
        (cs, lo > 0.0 && hi / lo <= 3.0)
    };
    let (sb, ss, so) = (slope(&band), slope(&sat), slope(&outer));
    let (rho_c, rho_stable) = c_stable(&rho_lit);
    let (hr_c, hr_stable) = c_stable(&hr_lit);
    let (sr, sh) = (slope(&rho_lit), slope(&hr_lit));
    let rho_ok = rho_stable && in_rate(sr);
    let hr_ok = hr_stable && in_rate(sh);
    let pass = in_rate(sb) && in_rate(ss) && in_rate(so) && rho_ok && hr_ok;
    let (alt_c, _) = c_stable(&rho_alt);
    let f = |v: &[f64]| v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(",");
    Ok(Outcome::new(
        pass,
        format!(
            "band slope {sb:.2} [{}]; saturated slope {ss:.2} [{}]; outer slope {so:.2} [{}]; \
             (-1)^M rho_M vs cos(beta/2): diffs [{}] slope {sr:.2} M*diff [{}]; \
             h ratio vs e^l: diffs [{}] slope {sh:.2} M*diff [{}]; \
             diagnostics: -(-1)^M rho_M M*diff [{}], h ratio vs same-lattice formula ratio [{}], h_M/h_asym [{}]",
            f(&band), f(&sat), f(&outer), f(&rho_lit), f(&rho_c), f(&hr_lit), f(&hr_c),
            f(&alt_c), f(&hr_lat), f(&h_abs)
        ),
    ))
}

fn criterion_6() -> Check {
    let p = params(2, 1, 40, 41);
    let sys = szego_system(&p, 40).map_err(err)?;
    let ctx = AsymContext::new(&p).map_err(err)?;
    let (b, a) = (ctx.eq.beta, ctx.eq.alpha);
    let lo = b + 2.0 * (a - b) / 3.0;
    let half = PI / p.m as f64;
    let nodes: Vec<f64> = lattice_nodes(&p).angles.into_iter().filter(|&t| t > lo).collect();
    let (mut w_rec, mut w_asym) = (0.0f64, 0.0f64);
    for &t in &nodes {
        let pts = [t, t - half, (t + half).min(a)];
        let rows = compare_on_arc(&sys, &ctx, &pts, None).map_err(err)?;
        let mid_rec = rows[1].exact.norm().min(rows[2].exact.norm());
        let mid_asym = rows[1].asym.value.norm().min(rows[2].asym.value.norm());
        w_rec = w_rec.max(rows[0].exact.norm() / mid_rec);
        w_asym = w_asym.max(rows[0].asym.value.norm() / mid_asym);
    }
    Ok(Outcome::new(
        !nodes.is_empty() && w_rec <= 1e-6 && w_asym <= 1e-6,
        format!(
            "b=2 N=41 M=40 beta={b:.4}; {} nodes in ({lo:.4}, {a:.4}); max node/midpoint ratio recursion {w_rec:.2e}, asymptotic {w_asym:.2e}",
            nodes.len()
        ),
    ))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20241016);
    // (a) vanishing on t(M)
    let mut w_zero = 0.0f64;
    for (bp, bq, md, n) in [(2, 1, 10, 25), (2, 1, 11, 25), (6, 5, 9, 35)] {
        let p = params(bp, bq, md, n);
        let sys = szego_system(&p, md).map_err(err)?;
        let t = KernelTable::new(&sys, md).map_err(err)?;
        for k in t_set(md) {
            for i in 0..21 {
                let x = -0.5 + i as f64 / 20.0;
                w_zero = w_zero.max(t.error_term(k, x).map_err(err)?.norm());
            }
        }
    }
    // (b) the simple bound, and (c) three independent evaluation paths
    let p = params(2, 1, 11, 25);
    let sys = szego_system(&p, 24).map_err(err)?;
    let t = KernelTable::new(&sys, 11).map_err(err)?;
    let m0 = p.m0;
    let mut w_bound = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let k = rng.gen_range(m0 - 40..=m0 + 11 + 40);
        let x: f64 = rng.gen_range(-0.5..=0.5);
        let v = t.error_term(k, x).map_err(err)?.norm();
        w_bound = w_bound.max(v / t.simple_bound(x));
    }
    let mut w_paths = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(11..=24i64);
        let k = m0 + n;
        let x: f64 = rng.gen_range(-0.5..=0.5);
        let w = point_on_circle(&p, x);
        let def = t.error_term_direct(k, x);
        let cd = match t.closed_form(n, w) {
            Some(c) => (w.powi(n) - c).to_c64(),
            None => continue,
        };
        let tail = t.error_term_tail(k, x).ok_or("tail path unavailable")?;
        let s = t.simple_bound(x);
        w_paths = w_paths.max((def - cd).norm() / s).max((def - tail).norm() / s).max((cd - tail).norm() / s);
    }
    // (d) two-sided estimate with fitted constants
    let mut sandwich = vec![];
    let mut sand_ok = true;
    for l in [1i64, 2] {
        let mut per_m = vec![];
        for (md, n) in [(11usize, 17usize), (15, 23)] {
            let p = params(2, 1, md, n);
            let sys = szego_system(&p, md).map_err(err)?;
            let t = KernelTable::new(&sys, md).map_err(err)?;
            let eq = EquilibriumData::new(p.alpha, p.xi).map_err(err)?;
            let k = (md as i64 - 1) / 2 + l;
            let scale = (md as f64).powi(l as i32) * (md as f64 * eq.ell / 2.0).exp();
            let bt = p.b_f64() * eq.beta / (2.0 * PI);
            let mut rs = vec![];
            for i in 0..41 {
                let x = -0.9 * bt + 1.8 * bt * i as f64 / 40.0;
                let w = point_on_circle(&p, x);
                let phi = (sys.eval_x(md, w).abs() / sys.phi_scale(md)).to_f64();
                rs.push(t.error_term(k, x).map_err(err)?.norm() / (scale * phi));
            }
            let lo = rs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = rs.iter().copied().fold(0.0, f64::max);
            per_m.push((md, lo, hi));
        }
        let c = per_m.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        let d = per_m.iter().map(|v| v.2).fold(0.0, f64::max);
        sand_ok &= c > 0.0 && d.is_finite() && d / c <= 100.0;
        sandwich.push(format!(
            "l={l}: c={c:.3e} d={d:.3e} ({})",
            per_m.iter().map(|(m, lo, hi)| format!("M={m} [{lo:.3e},{hi:.3e}]")).collect::<Vec<_>>().join(" ")
        ));
    }
    let pass = w_zero <= 1e-14 && w_bound <= 1.0 + 1e-12 && w_paths <= 1e-12 && sand_ok;
    Ok(Outcome::new(
        pass,
        format!(
            "max |B^k| on t(M) {w_zero:.2e}; max |B^k|/bound over 1000 draws {w_bound:.4}; \
             three-path spread {w_paths:.2e}; sandwich on band {}",
            sandwich.join("; ")
        ),
    ))
}

fn rel(a: ExtendedReal, b: ExtendedReal, scale: f64) -> f64 {
    (a - b).abs().to_f64() / scale.abs().max(f64::MIN_POSITIVE)
}

fn criterion_8() -> Check {
    let p = params(2, 1, 12, 25);
    let sys = szego_system(&p, 16).map_err(err)?;
    let mut w = [0.0f64; 5];
    let mut bound_ratio = 0.0f64;
    for md in 1..=12usize {
        let h = sys.h[md];
        let (_, rs0) = r_quantities(&sys, md, 0);
        w[0] = w[0].max(rel(rs0, h, h.to_f64()));
        for k in 0..=p.m as i64 {
            let (r, _) = r_quantities(&sys, md, k);
            bound_ratio = bound_ratio.max(r.abs().to_f64() / h.sqrt().to_f64());
        }
        let x1 = expansion_coeffs(&sys, md + 1);
        let closed = sys.rho_j(1) - (1..=md).map(|i| sys.rho_j(i + 1) * sys.rho_j(i)).fold(ExtendedReal::ZERO, |a, b| a + b);
        w[3] = w[3].max(rel(x1[md], closed, closed.to_f64().abs().max(1.0)));
        for k in 0..=4i64 {
            let (_, rs) = r_quantities(&sys, md, k);
            let (r_next, _) = r_quantities(&sys, md, k + 1);
            let (r_up, _) = r_quantities(&sys, md + 1, k);
            let rho = sys.rho_j(md + 1);
            let rec = (r_next - r_up) / rho;
            w[1] = w[1].max(rel(rs, rec, r_next.to_f64().abs().max(r_up.to_f64().abs()) / rho.to_f64().abs()));
            let xs = expansion_coeffs(&sys, md + k as usize);
            let want = xs[md] * h;
            w[4] = w[4].max(rel(rs, want, h.to_f64()));
        }
    }
    w[2] = bound_ratio;
    let pass = w[0] <= 1e-16 && w[1] <= 1e-16 && bound_ratio <= 1.0 && w[3] <= 1e-16 && w[4] <= 1e-16;
    Ok(Outcome::new(
        pass,
        format!(
            "b=2 N=25 M<=12 k<=4: r*_(M,0) vs h_M {:.1e}; recurrence {:.1e}; max |r_(M,k)|/sqrt(h_M) {:.4}; \
             x_(M+1,M) closed form {:.1e}; r*_(M,k) vs x_(M+k,M) h_M {:.1e}",
            w[0], w[1], w[2], w[3], w[4]
        ),
    ))
}

fn criterion_9() -> Check {
    let mut worst = 0.0f64;
    let mut parts = vec![];
    for (num, den, name) in [(1.0, 2.0, "pi/2"), (2.0, 3.0, "2pi/3"), (3.0, 4.0, "3pi/4"), (5.0, 6.0, "5pi/6")] {
        let a = PI * num / den;
        let xi = xi_critical(a).map_err(err)?;
        let d = (xi - PI / (PI - a)).abs();
        worst = worst.max(d);
        parts.push(format!("{name}: {xi:.6} (diff {d:.1e})"));
    }
    Ok(Outcome::new(worst < 1e-3, parts.join("; ")))
}

fn samples_of(p: &ExtensionParams, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    lattice_nodes(p).nodes_x.iter().map(|&x| f(x)).collect()
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut w_mode = 0.0f64;
    for (bp, bq, md, n) in [(2, 1, 8, 25), (2, 1, 11, 25), (6, 5, 9, 35)] {
        let p = params(bp, bq, md, n);
        let sys = szego_system(&p, md - 1).map_err(err)?;
        for k in t_set(md) {
            let f = |x: f64| Complex64::from_polar(1.0, 2.0 * PI * k as f64 * x / p.b_f64());
            let a = project_with(&sys, &samples_of(&p, f)).map_err(err)?;
            for (kk, c) in a.fourier_f64() {
                let want = if kk == k { 1.0 } else { 0.0 };
                w_mode = w_mode.max((c - want).norm());
            }
            for i in 0..11 {
                let x = -0.5 + i as f64 / 10.0;
                w_mode = w_mode.max(error_function(&a, f, x).norm());
            }
        }
    }
    // Bessel inequality on random data, with equality exactly when M = N.
    let mut bessel_ok = true;
    let mut min_gap = f64::INFINITY;
    let mut square_gap = 0.0f64;
    for (md, n) in [(5, 25), (12, 25), (25, 25), (9, 9)] {
        let p = params(2, 1, md, n);
        for _ in 0..5 {
            let s: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let a = project(&p, &s).map_err(err)?;
            let norm = discrete_norm_sqr(&s);
            let gap = (norm - a.energy()) / norm;
            if md == n {
                square_gap = square_gap.max(gap.abs());
            } else {
                bessel_ok &= gap >= -1e-14;
                min_gap = min_gap.min(gap);
            }
        }
    }
    bessel_ok &= min_gap > 1e-6 && square_gap < 1e-12;
    // Idempotence.
    let p = params(2, 1, 8, 25);
    let lat = lattice_nodes(&p);
    let f = |x: f64| Complex64::new((3.0 * x).sin() + x * x, (2.0 * x).cos());
    let a = project(&p, &samples_of(&p, f)).map_err(err)?;
    let again: Vec<Complex64> = lat.nodes_x.iter().map(|&x| eval_extension(&a, x)).collect();
    let a2 = project(&p, &again).map_err(err)?;
    let w_idem = a
        .coeffs_ortho
        .iter()
        .zip(&a2.coeffs_ortho)
        .map(|(u, v)| (*u - *v).abs().to_f64())
        .fold(0.0, f64::max);
    // Error-series identity for a finitely supported coefficient sequence.
    let p = params(2, 1, 7, 25);
    let sys = szego_system(&p, 7).map_err(err)?;
    let table = KernelTable::new(&sys, 7).map_err(err)?;
    let seq = FourierCoeffSeq::finite([
        (-9, Complex64::new(0.2, -0.1)),
        (-7, Complex64::new(0.5, 0.1)),
        (0, Complex64::new(1.0, 0.0)),
        (5, Complex64::new(-0.3, 0.2)),
        (9, Complex64::new(0.05, 0.0)),
        (14, Complex64::new(0.0, 0.02)),
    ]);
    let fx = |x: f64| seq.eval(2.0, x);
    let a = project_with(&sys, &samples_of(&p, fx)).map_err(err)?;
    let mut w_series = 0.0f64;
    for i in 0..21 {
        let x = -0.5 + i as f64 / 20.0;
        let e = error_function(&a, fx, x);
        let phase = point_on_circle(&p, x).powi(p.m0).to_c64();
        let mut s = Complex64::new(0.0, 0.0);
        for (&k, &c) in &seq.a {
            s += c * table.error_term(k, x).map_err(err)?;
        }
        w_series = w_series.max((e - phase * s).norm());
    }
    let pass = w_mode <= 1e-12 && bessel_ok && w_idem <= 1e-13 && w_series <= 1e-10;
    Ok(Outcome::new(
        pass,
        format!(
            "in-space modes {w_mode:.1e}; Bessel min relative gap {min_gap:.2e} (M<N), |gap| {square_gap:.1e} (M=N); \
             idempotence {w_idem:.1e}; error-series identity {w_series:.1e}"
        ),
    ))
}

fn criterion_11() -> Check {
    let b = 6.0 / 5.0;
    let lt = |xt: f64, x: f64| tilde_wrappers(b, xt, x).map(|v| (v.beta_tilde, v.l_tilde)).map_err(err);
    let mut flat = 0.0f64;
    let mut min_step = f64::INFINITY;
    for xt in [1.5, 2.0, 3.0, 6.0] {
        let (bt, l0) = lt(xt, 0.0)?;
        for i in 1..=20 {
            flat = flat.max((lt(xt, bt * i as f64 / 20.0)?.1 - l0).abs());
        }
        let mut prev = lt(xt, bt)?.1;
        for i in 1..=20 {
            let x = bt + (0.5 - bt) * i as f64 / 20.0;
            let v = lt(xt, x)?.1;
            min_step = min_step.min(v - prev);
            prev = v;
        }
    }
    let xts = [1.5, 2.0, 3.0, 5.0, 6.0, 8.0];
    let mut band_vals = vec![];
    let mut end_vals = vec![];
    for &xt in &xts {
        band_vals.push(lt(xt, 0.0)?.1);
        end_vals.push(lt(xt, 0.5)?.1);
    }
    let band_inc = band_vals.windows(2).all(|w| w[1] > w[0]);
    let end_dec = end_vals.windows(2).all(|w| w[1] < w[0]);
    let end2 = lt(2.0, 0.5)?.1;
    let mut max6 = f64::NEG_INFINITY;
    for i in 0..=50 {
        max6 = max6.max(lt(6.0, 0.5 * i as f64 / 50.0)?.1);
    }
    let pass = flat < 1e-9 && min_step > 0.0 && band_inc && end_dec && end2 > 0.0 && max6 < 0.0;
    let f = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(",");
    Ok(Outcome::new(
        pass,
        format!(
            "b=6/5: band flatness {flat:.1e}; min step on [beta~,1/2] {min_step:.2e}; \
             band value at xi~={xts:?}: [{}]; endpoint value: [{}]; L~(1/2) at xi~=2: {end2:.4}; max L~ at xi~=6: {max6:.4}",
            f(&band_vals),
            f(&end_vals)
        ),
    ))
}

fn main() {
    // Warm-up so that criterion 1 does not pay for lazy initialisation.
    let _ = band_edge(PI / 2.0, 3.0);
    let _ = ExtendedComplex::ONE;
    let s = Duration::from_secs;
    let results = [
        run(1, "band-edge values", Duration::from_millis(1000), criterion_1),
        run(2, "vanishing of L in the symmetric cases", s(1), criterion_2),
        run(3, "equilibrium consistency", s(30), criterion_3),
        run(4, "recursion versus Gram-Schmidt", s(30), criterion_4),
        run(5, "asymptotic rate suite", s(180), criterion_5),
        run(6, "node vanishing in the saturated region", s(30), criterion_6),
        run(7, "error-term suite", s(60), criterion_7),
        run(8, "moment identities", s(30), criterion_8),
        run(9, "critical density", s(10), criterion_9),
        run(10, "projection contract", s(30), criterion_10),
        run(11, "shape of L~", s(60), criterion_11),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 && std::env::var("ARCOPUC_ACCEPTANCE_STRICT").as_deref() == Ok("1") {
        std::process::exit(1);
    }
}
