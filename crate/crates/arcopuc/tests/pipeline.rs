//! Cross-module checks through the public API.

use std::f64::consts::PI;

use arcopuc::asymptotics::{szego_h_asym, AsymContext, Regime};
use arcopuc::equilibrium::{band_edge, EquilibriumData};
use arcopuc::fourext::{eval_extension, project, ExtensionApprox};
use arcopuc::opuc::szego_system;
use arcopuc::params_lattice::lattice_nodes;
use arcopuc::study::{compare_on_arc, ArcGrid};
use arcopuc::{make_params, OpucSystem, Rational};
use num_complex::Complex64;

fn params(p: u64, q: u64, md: usize, n: usize) -> arcopuc::ExtensionParams {
    make_params(Rational::new(p, q).unwrap(), md, n).unwrap()
}

#[test]
fn context_uses_the_measure_of_its_parameters() {
    let p = params(6, 5, 10, 35);
    let ctx = AsymContext::new(&p).unwrap();
    let beta = band_edge(p.alpha, p.xi).unwrap();
    assert!((ctx.eq.beta - beta).abs() < 1e-14);
    assert!((ctx.eq.alpha - 5.0 * PI / 6.0).abs() < 1e-15);
    let eq = EquilibriumData::new(p.alpha, p.xi).unwrap();
    assert!((eq.ell - ctx.eq.ell).abs() < 1e-15);
}

#[test]
fn norms_approach_their_asymptotics() {
    // N/M held near 5/2: h_M / h_asym tends to one from below.
    let mut last = 0.0;
    for (md, n) in [(8usize, 21usize), (16, 41), (24, 61), (32, 81)] {
        let p = params(2, 1, md, n);
        let sys = szego_system(&p, md).unwrap();
        let eq = EquilibriumData::new(p.alpha, p.xi).unwrap();
        let r = sys.h[md].to_f64() / szego_h_asym(&eq, md).h;
        assert!(r > last && r < 1.0, "M={md}: {r}");
        last = r;
    }
    assert!(last > 0.99);
}

#[test]
fn reflection_parameter_tracks_half_band_cosine() {
    for (md, n) in [(8usize, 21usize), (16, 41), (24, 61)] {
        let p = params(2, 1, md, n);
        let sys = szego_system(&p, md).unwrap();
        let eq = EquilibriumData::new(p.alpha, p.xi).unwrap();
        let rho = sys.rho_j(md).to_f64();
        let want = szego_h_asym(&eq, md).rho;
        assert!((rho - want).abs() * (md as f64) < 0.1, "M={md}: {rho} vs {want}");
    }
}

#[test]
fn band_comparison_at_moderate_degree() {
    let p = params(2, 1, 20, 51);
    let sys = szego_system(&p, 20).unwrap();
    let ctx = AsymContext::new(&p).unwrap();
    let rows = compare_on_arc(&sys, &ctx, &ArcGrid::Band.angles(&ctx, 31), None).unwrap();
    assert!(rows.iter().all(|r| r.regime() == Regime::Band));
    assert!(rows.iter().all(|r| r.envelope_error < 0.01), "{:?}", rows.iter().map(|r| r.envelope_error).collect::<Vec<_>>());
}

#[test]
fn serialized_objects_round_trip() {
    let p = params(6, 5, 9, 35);
    let sys = szego_system(&p, 9).unwrap();
    let back = OpucSystem::from_json(&sys.to_json()).unwrap();
    assert_eq!(back.coeffs, sys.coeffs);
    assert_eq!(back.h, sys.h);

    let f = |x: f64| Complex64::new(1.0 / (1.5 - x), x * x);
    let s: Vec<Complex64> = lattice_nodes(&p).nodes_x.iter().map(|&x| f(x)).collect();
    let a = project(&p, &s).unwrap();
    let b = ExtensionApprox::from_json(&a.to_json()).unwrap();
    assert_eq!(a, b);
    for x in [-0.5, 0.0, 0.37] {
        assert_eq!(eval_extension(&a, x), eval_extension(&b, x));
    }
}

#[test]
fn smooth_data_converge_under_oversampling() {
    let f = |x: f64| Complex64::new((2.0 * x).exp(), 0.0);
    let mut errs = vec![];
    for md in [5usize, 9, 13] {
        let n = 4 * md + 1;
        let p = params(2, 1, md, n);
        let s: Vec<Complex64> = lattice_nodes(&p).nodes_x.iter().map(|&x| f(x)).collect();
        let a = project(&p, &s).unwrap();
        let e = (0..101)
            .map(|i| {
                let x = -0.5 + i as f64 / 100.0;
                (f(x) - eval_extension(&a, x)).norm()
            })
            .fold(0.0, f64::max);
        errs.push(e);
    }
    assert!(errs.windows(2).all(|w| w[1] < 0.2 * w[0]), "{errs:?}");
}
