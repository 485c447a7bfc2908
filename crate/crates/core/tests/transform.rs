use std::sync::Arc;
use std::time::Instant;

use pinchlab::kernel::kernel_difference_at_zero;
use pinchlab::special::{integrate, Domain, Endpoints, QuadratureSpec, TailDecay};
use pinchlab::transform::{
    cylinder_trace_check, geometric_side, identity_term, resolvent_g, resolvent_g_bound, resolvent_h,
    resolvent_triple, transform_chain, transform_roundtrip, ChainInput, ChainSpec, ExpBound, Lengths, RealFn,
    SpectralDecay, TraceConfig,
};
use pinchlab::zeta::log_deriv_factor;
use pinchlab::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn inverse_square() -> RealFn {
    Arc::new(|t: f64| Ok(c((1.0 + t).powi(-2), 0.0)))
}

#[test]
fn fourier_pair_of_the_resolvent() {
    let (s, xi) = (c(2.0, 0.0), 0.7);
    let spec = QuadratureSpec::with_tolerances(1e-13, 1e-14).with_decay(TailDecay::Exponential(1.5));
    let r = integrate(|u| 2.0 * resolvent_g(s, u) * (xi * u).cos(), Domain::UpperTail(0.0), Endpoints::REGULAR, &spec)
        .unwrap();
    assert!((r.value - resolvent_h(s, xi)).norm() < 1e-8);
}

#[test]
fn selberg_transform_of_the_kernel() {
    // mpmath: ∫_w^∞ k_2(t)/√(t-w) dt at w = e^u + e^{-u} - 2, u ∈ {0.5, 1.5}
    let q = |w: f64| {
        let kern = pinchlab::kernel::ResolventKernel::new(c(2.0, 0.0), 1e-13).unwrap();
        let spec = QuadratureSpec::with_tolerances(1e-12, 1e-14).with_decay(TailDecay::Algebraic(2.5));
        integrate(|t| kern.eval_auto(t).unwrap() / (t - w).sqrt(), Domain::UpperTail(w), Endpoints::lower(0.5), &spec)
            .unwrap()
            .value
    };
    for (u, want) in [(0.5, 0.157_455_517_580_34), (1.5, 0.035_133_074_853_954_8)] {
        let w = pinchlab::transform::w_of_u(u);
        assert!((q(w).re - want).abs() < 1e-10, "{u}");
        assert!((resolvent_g(c(2.0, 0.0), u).re - want).abs() < 1e-12);
    }
}

#[test]
fn resolvent_triple_consistency() {
    let (s, s0) = (c(2.0, 0.0), c(3.0, 0.0));
    let triple = resolvent_triple(s, s0).unwrap();
    let chain = transform_chain(
        ChainInput::H {
            h: triple.h.clone(),
            decay: SpectralDecay::Algebraic(4.0),
            rho: 1.0,
        },
        ChainSpec { tol: 1e-8 },
    )
    .unwrap();
    for t in [0.5, 2.0, 10.0] {
        let want = triple.k(t).unwrap();
        let got = chain.k(t).unwrap();
        assert!((want - got).norm() < 1e-6, "{t}: {want} {got}");
    }
    for u in [0.3, 1.0, 4.0] {
        assert!((chain.g(u).unwrap() - triple.g(u).unwrap()).norm() < 1e-8);
    }
}

#[test]
fn round_trip_on_inverse_square() {
    let ts: Vec<f64> = (0..=40).map(|i| 0.5 * i as f64).collect();
    let start = Instant::now();
    let r = transform_roundtrip(inverse_square(), 1.0, 1.0, &ts, ChainSpec::default()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(r.sup_residual < 1e-6, "{}", r.sup_residual);
    assert!(elapsed < 10.0, "{elapsed}");
}

#[test]
fn forward_chain_closed_forms() {
    // Q(w) = (π/2)(1+w)^{-3/2}, g(u) = (π/2)(2 cosh u - 1)^{-3/2}
    let t = transform_chain(
        ChainInput::K {
            k: inverse_square(),
            rho: 1.0,
            strip: 1.0,
        },
        ChainSpec::default(),
    )
    .unwrap();
    let half_pi = std::f64::consts::FRAC_PI_2;
    for w in [0.0, 0.7, 5.0] {
        assert!((t.q(w).unwrap().re - half_pi * (1.0 + w).powf(-1.5)).abs() < 1e-10);
        assert!((t.dq(w).unwrap().re + 1.5 * half_pi * (1.0 + w).powf(-2.5)).abs() < 1e-8);
    }
    assert!(t.q(1e3).unwrap().norm() < 1e-4);
    for u in [0.0, 1.0, 3.0] {
        assert!((t.g(u).unwrap().re - half_pi * (2.0 * u.cosh() - 1.0).powf(-1.5)).abs() < 1e-10);
    }
    assert!((t.h(0.8).unwrap() - t.h(-0.8).unwrap()).norm() < 1e-14);
}

#[test]
fn decay_violations_are_reported() {
    let slow: RealFn = Arc::new(|t: f64| Ok(c((1.0 + t).powf(-1.2), 0.0)));
    assert!(transform_chain(ChainInput::K { k: slow, rho: 1.0, strip: 1.0 }, ChainSpec::default()).is_err());
    let flat: RealFn = Arc::new(|xi: f64| Ok(c(1.0 / (1.0 + xi * xi), 0.0)));
    let input = ChainInput::H {
        h: flat,
        decay: SpectralDecay::Exponential(1.0),
        rho: 1.0,
    };
    assert!(transform_chain(input, ChainSpec::default()).is_err());
}

#[test]
fn identity_term_matches_kernel_difference() {
    let v = identity_term(c(2.0, 0.0), c(3.0, 0.0)).unwrap();
    let k = kernel_difference_at_zero(c(2.0, 0.0), c(3.0, 0.0)).unwrap();
    assert!((v - k).norm() < 1e-8, "{v} {k}");
    assert!((v.re - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-10);
    let (s, s0) = (c(1.4, 0.6), c(2.5, -0.3));
    let v = identity_term(s, s0).unwrap();
    assert!((v - kernel_difference_at_zero(s, s0).unwrap()).norm() < 1e-8);
}

#[test]
fn geometric_side_matches_log_derivative() {
    let (ell, s, s0) = (1.0, c(2.0, 0.0), c(3.0, 0.0));
    let g = |u: f64| Ok(resolvent_g(s, u) - resolvent_g(s0, u));
    let geo = geometric_side(Lengths::Single(ell), &g, resolvent_g_bound(s, s0), 1e-13).unwrap();
    let zs = log_deriv_factor(ell, s, 1e-15).unwrap().k_sum / (2.0 * s - 1.0);
    let z0 = log_deriv_factor(ell, s0, 1e-15).unwrap().k_sum / (2.0 * s0 - 1.0);
    assert!((geo.value - (zs - z0)).norm() < 1e-8);
}

#[test]
fn geometric_tail_bounds_decrease() {
    let s = c(2.0, 0.0);
    let g = |u: f64| Ok(resolvent_g(s, u));
    let b = ExpBound {
        constant: 1.0 / 3.0,
        rate: 1.5,
    };
    let mut last = f64::INFINITY;
    let mut last_value = 0.0;
    for tol in [1e-4, 1e-6, 1e-8, 1e-10] {
        let r = geometric_side(Lengths::Single(0.7), &g, b, tol).unwrap();
        assert!(r.tail_bound < last && r.value.re > last_value);
        (last, last_value) = (r.tail_bound, r.value.re);
    }
}

#[test]
fn cylinder_trace_formula() {
    let (s, s0) = (c(2.0, 0.0), c(3.0, 0.0));
    let r = cylinder_trace_check(1.0, &TraceConfig::new(s, s0, 1.0).unwrap()).unwrap();
    assert!(r.residual < 1e-6, "{r:?}");
    let other = cylinder_trace_check(1.0, &TraceConfig::new(s, s0, 0.5).unwrap()).unwrap();
    assert!((r.lhs - other.lhs).norm() < 1e-10, "{} {}", r.lhs, other.lhs);
}

#[test]
fn trace_sides_under_conjugation() {
    let (s, s0) = (c(1.8, 0.4), c(3.0, -0.2));
    let a = cylinder_trace_check(0.8, &TraceConfig::new(s, s0, 1.0).unwrap()).unwrap();
    let b = cylinder_trace_check(0.8, &TraceConfig::new(s.conj(), s0.conj(), 1.0).unwrap()).unwrap();
    assert!((a.lhs - b.lhs.conj()).norm() < 1e-10);
    assert!((a.rhs - b.rhs.conj()).norm() < 1e-12);
    assert!(a.residual < 1e-6, "{a:?}");
}

#[test]
fn resolvent_triple_bounds() {
    let t = resolvent_triple(c(2.0, 0.0), c(3.0, 0.0)).unwrap();
    let us: Vec<f64> = (0..=40).map(|i| 0.5 * i as f64).collect();
    let ts = [0.0, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0];
    let (gmax, kmax) = t.bound_samples(&us, &ts).unwrap();
    assert!(gmax <= 1.0 / 3.0 + 1e-15, "{gmax}");
    assert!(kmax < 1.0, "{kmax}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn resolvent_triple_is_even(xi in -20.0f64..20.0, sr in 0.6f64..4.0, si in -2.0f64..2.0) {
        let t = resolvent_triple(c(sr, si), c(3.0, 0.0)).unwrap();
        prop_assert_eq!(t.h(xi).unwrap(), t.h(-xi).unwrap());
        prop_assert_eq!(t.g(xi).unwrap(), t.g(-xi).unwrap());
    }

    #[test]
    fn g_decays_at_the_declared_rate(u in 0.0f64..30.0, sr in 1.05f64..4.0, si in -2.0f64..2.0) {
        let (s, s0) = (c(sr, si), c(4.5, 0.0));
        let t = resolvent_triple(s, s0).unwrap();
        let b = resolvent_g_bound(s, s0);
        prop_assert!(t.g(u).unwrap().norm() <= b.constant * (-b.rate * u).exp() * (1.0 + 1e-12));
        prop_assert!(t.g(u).unwrap().norm() * ((0.5 + t.rho) * u).exp() <= b.constant * (1.0 + 1e-12));
    }

    #[test]
    fn identity_term_is_antisymmetric(sr in 0.7f64..3.0, si in -1.0f64..1.0, s0r in 0.7f64..3.0) {
        let (s, s0) = (c(sr, si), c(s0r, 0.0));
        let a = identity_term(s, s0).unwrap();
        let b = identity_term(s0, s).unwrap();
        prop_assert!((a + b).norm() < 1e-12);
    }
}
