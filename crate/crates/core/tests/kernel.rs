use pinchlab::hyperbolic::{sigma, CylinderPoint};
use pinchlab::kernel::{
    cylinder_kernel, hilbert_schmidt_sides, point_pair_k, remainder_a_tail_bound, remainder_integral,
    KernelMethod, ResolventKernel,
};
use pinchlab::special::riemann_zeta_real;
use pinchlab::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn series_and_quadrature_agree_with_reference_grid() {
    // mpmath quadrature of (4^{s-1}/π)∫₀¹(x(1-x))^{s-1}(4x+t)^{-s}dx
    let grid = [
        (c(0.75, 0.0), 0.2, c(0.318_845_299_135_706_03, 0.0)),
        (c(0.75, 0.0), 1.0, c(0.194_181_228_281_406_66, 0.0)),
        (c(0.75, 0.0), 7.0, c(0.074_375_915_790_483_3, 0.0)),
        (c(1.5, 0.0), 0.2, c(0.155_774_537_123_478_5, 0.0)),
        (c(1.5, 0.0), 1.0, c(0.062_575_768_364_293_92, 0.0)),
        (c(1.5, 0.0), 7.0, c(0.009_480_805_954_642_548, 0.0)),
        (c(2.0, 1.0), 0.2, c(0.078_489_060_842_031_42, -0.063_607_378_955_432_42)),
        (c(2.0, 1.0), 1.0, c(0.010_800_102_230_720_677, -0.028_913_093_188_025_872)),
        (c(2.0, 1.0), 7.0, c(-0.001_928_677_135_643_242_7, -0.001_627_811_620_495_226)),
    ];
    for (s, t, want) in grid {
        let a = point_pair_k(s, t, KernelMethod::Series, 1e-13).unwrap();
        let b = point_pair_k(s, t, KernelMethod::Quadrature, 1e-12).unwrap();
        assert!((a - b).norm() < 1e-10, "{s} {t}: {a} vs {b}");
        assert!((a - want).norm() < 1e-12, "{s} {t}: {a} vs {want}");
    }
}

#[test]
fn kernel_decays_like_power() {
    let k = ResolventKernel::new(c(1.5, 0.0), 1e-12).unwrap();
    let mut ratios = Vec::new();
    for e in 2..=6 {
        let t = 10f64.powi(e);
        ratios.push(k.eval(t, KernelMethod::Series).unwrap().norm() * t.powf(1.5));
    }
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    assert!(max < 1.0, "{ratios:?}");
    // t^{s} k_s(t) → Γ(s)²/(4π Γ(2s)) 4^s
    let limit = 4f64.powf(1.5) * (std::f64::consts::PI / 8.0) / (4.0 * std::f64::consts::PI);
    assert!((ratios[4] - limit).abs() < 1e-5);
}

#[test]
fn cylinder_kernel_is_symmetric() {
    let s = c(1.5, 0.0);
    let pts = [(0.1, -0.7, 0.45, 1.3), (0.9, 2.0, 0.2, 0.5), (0.3, -1.1, -2.4, -0.2)];
    for (x1, a1, x2, a2) in pts {
        let p = CylinderPoint::new(x1, a1);
        let q = CylinderPoint::new(x2, a2);
        let u = cylinder_kernel(1.0, s, &p, &q, 1e-12).unwrap();
        let v = cylinder_kernel(1.0, s, &q, &p, 1e-12).unwrap();
        assert!((u.value - v.value).norm() < 1e-10);
    }
}

#[test]
fn cylinder_kernel_converges_as_ell_shrinks() {
    let s = c(1.5, 0.0);
    let sup = |ell: f64| {
        let mut m: f64 = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                let p = CylinderPoint::new(0.0, 0.5 + 0.375 * i as f64);
                let q = CylinderPoint::new(0.3, 0.5 + 0.375 * j as f64);
                let a = cylinder_kernel(ell, s, &p, &q, 1e-10).unwrap().value;
                let b = cylinder_kernel(0.0, s, &p, &q, 1e-10).unwrap().value;
                m = m.max((a - b).norm());
            }
        }
        m
    };
    let (far, near) = (sup(0.1), sup(0.01));
    assert!(far > near && near > 0.0, "{far} {near}");
}

#[test]
fn single_term_dominates_far_out() {
    let s = c(1.5, 0.0);
    let p = CylinderPoint::new(0.0, 1e3);
    let q = CylinderPoint::new(0.0, 1e3 + 0.5);
    let sum = cylinder_kernel(1.0, s, &p, &q, 1e-12).unwrap();
    let k0 = point_pair_k(s, sigma(1.0, &p, &q).unwrap(), KernelMethod::Quadrature, 1e-12).unwrap();
    let others = (sum.value - k0).norm();
    // The n ≠ 0 terms, led by 2 k_s(4 sinh²(1/2)·10⁶) ≈ 4.4e-10.
    let direct: f64 = (1..=6)
        .map(|n| {
            let q = CylinderPoint::new(n as f64, 1e3 + 0.5);
            2.0 * point_pair_k(s, sigma(1.0, &p, &q).unwrap(), KernelMethod::Series, 1e-12).unwrap().re
        })
        .sum();
    assert!((others - direct).abs() < 2e-12, "{others} {direct}");
    assert!(others < 1e-9 * k0.norm());
    assert!(cylinder_kernel(1.0, s, &p, &p, 1e-12).is_err());
}

#[test]
fn cusp_components_do_not_interact() {
    let p = CylinderPoint::new(0.0, 1.0);
    let q = CylinderPoint::new(0.2, -1.0);
    assert_eq!(cylinder_kernel(0.0, c(1.5, 0.0), &p, &q, 1e-10).unwrap().value, c(0.0, 0.0));
}

#[test]
fn remainder_properties() {
    let b = remainder_a_tail_bound(1.5, 10.0).unwrap();
    assert!(b <= riemann_zeta_real(3.0).unwrap() * 1e-2);
    // Direct estimate of ∫_10^∞ for s = 1.5, ℓ = 1 stays below the bound.
    let tail = remainder_integral(1.0, c(1.5, 0.0), 10.0, 1e-9).unwrap();
    assert!(tail.value.re > 0.0 && tail.value.re <= b);

    let r1 = remainder_integral(1.0, c(2.0, 0.0), 1.0, 1e-9).unwrap();
    let r2 = remainder_integral(1.0, c(2.0, 0.0), 2.0, 1e-9).unwrap();
    assert!(r2.value.re < r1.value.re);

    let s = c(1.5, 0.0);
    let at = |ell: f64| remainder_integral(ell, s, 1.0, 1e-9).unwrap().value;
    let zero = at(0.0);
    assert!((at(0.05) - zero).norm() < (at(0.2) - zero).norm());
}

#[test]
fn hilbert_schmidt_at_slow_decay() {
    // mpmath: ∫₀¹ (Σ_m (A + ρ(u+m)²)^{-1})² du, ρ = a1a2, A = 1 + (a1-a2)²/ρ
    let want = 1.855_188_797_197_247_9;
    let (lhs, rhs) = hilbert_schmidt_sides(0.0, 0.2, 2.4, 1.0).unwrap();
    assert!(lhs >= want && lhs < want * (1.0 + 1e-6), "{lhs}");
    assert!(lhs <= rhs);
    for ell in [0.05, 0.5] {
        let (lhs, rhs) = hilbert_schmidt_sides(ell, 0.2, 2.4, 1.0).unwrap();
        assert!(lhs <= rhs, "{ell}: {lhs} {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn hilbert_schmidt_inequality(ell in prop_oneof![Just(0.0), 0.05f64..2.0],
                                  a1 in 0.2f64..3.0, a2 in -3.0f64..3.0, r in 1.0f64..3.0) {
        prop_assume!(a2.abs() > 0.2);
        let (lhs, rhs) = hilbert_schmidt_sides(ell, a1, a2, r).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9), "{lhs} > {rhs}");
    }
}
