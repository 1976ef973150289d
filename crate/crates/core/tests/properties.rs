use std::f64::consts::PI;

use chermite::hermite::{
    chp_eval, chp_eval_recurrence, chp_poly, chp_poly_rodrigues, chp_zero_value, diagonal_laguerre_check, laguerre_eval,
    magnetic_laplacian_apply, EvalPoint,
};
use chermite::kernels::{self, HeatArgs, KernelArgs, TruncationSpec};
use chermite::numeric::{factorial, format_complex, format_real, parse_complex, rel_err};
use chermite::quadrature::{self, QuadratureRule};
use chermite::tripoly::{Monomial, TriPoly};
use chermite::verify::{run_suite, IdentityId, SampleSpec};
use chermite::C64;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn disc(r: f64) -> impl Strategy<Value = C64> {
    (0.0..=1.0f64, 0.0..(2.0 * PI)).prop_map(move |(s, th)| C64::from_polar(r * s.sqrt(), th))
}

fn nu_range() -> impl Strategy<Value = f64> {
    0.25..=2.0f64
}

fn trunc(m: usize) -> TruncationSpec {
    TruncationSpec::new(m, 1e-10).unwrap()
}

/// `(u, v)` with `uv` real and `scale·|uv| ≤ bound`.
fn real_product_pair(scale: f64, bound: f64) -> impl Strategy<Value = (C64, C64)> {
    (0.0..=0.9f64, 0.0..=1.0f64, 0.0..(2.0 * PI), any::<bool>()).prop_map(move |(ru, frac, th, neg)| {
        let cap = if ru > 0.0 { (bound / (scale * ru)).min(0.9) } else { 0.9 };
        let rv = frac * cap * if neg { -1.0 } else { 1.0 };
        (C64::from_polar(ru, th), C64::from_polar(rv, -th))
    })
}

/// `Σ |c| ν^k |z|^{a+b}` over the terms `c ν^k z^a z̄^b` of `poly`.
fn term_scale(poly: &TriPoly, z: C64, nu: f64) -> f64 {
    poly.terms()
        .map(|(mono, c)| c.to_f64().unwrap().abs() * nu.powi(mono.nu as i32) * z.norm().powi((mono.z + mono.zbar) as i32))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_symmetry(m in 0u32..=15, n in 0u32..=15, z in disc(3.0), nu in 0.25..=4.0f64) {
        let p = EvalPoint::new(z, nu).unwrap();
        let a = chp_eval(n, m, p);
        let b = chp_eval(m, n, p).conj();
        prop_assert!(rel_err(a, b) <= 1e-13, "{a} vs {b}");
    }

    /// The error is measured against the natural size of the value: the
    /// explicit sum with every term replaced by its modulus. Near a zero of the
    /// Laguerre factor the value itself can be many orders smaller than that.
    #[test]
    fn evaluators_match_exact_sum_at_term_scale(
        (m, n) in (0u32..=20).prop_flat_map(|m| (Just(m), 0..=20 - m)),
        z in disc(4.0),
        nu_idx in 0usize..3,
    ) {
        let nu = [0.25, 1.0, 4.0][nu_idx];
        let poly = chp_poly(m, n);
        let exact = poly.eval_exact(z, nu);
        let scale = term_scale(&poly, z, nu);
        let p = EvalPoint::new(z, nu).unwrap();
        for v in [chp_eval(m, n, p), chp_eval_recurrence(m, n, p)] {
            prop_assert!((v - exact).norm() <= 1e-13 * (1.0 + scale), "H_{m},{n}({z}; {nu}): {v} vs {exact}");
        }
    }

    #[test]
    fn zero_value_is_exact(m in 0u32..=12, n in 0u32..=12, nu in 0.25..=4.0f64) {
        let at_zero = chp_eval(m, n, EvalPoint::new(C64::new(0.0, 0.0), nu).unwrap());
        prop_assert_eq!(at_zero, chp_zero_value(m, n, nu).unwrap());
        if m != n {
            prop_assert_eq!(at_zero, C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn diagonal_laguerre(m in 0u32..=15, z in disc(1.4), nu in nu_range()) {
        let p = EvalPoint::new(z, nu).unwrap();
        let (h, l) = diagonal_laguerre_check(m, p);
        let scale = factorial(m as usize) * nu.powi(m as i32);
        prop_assert!(rel_err(h / scale, l / scale) <= 1e-11);
        let direct = laguerre_eval(m, 0.0, nu * z.norm_sqr()) * if m % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(rel_err(h / scale, C64::new(direct, 0.0)) <= 1e-11);
    }

    #[test]
    fn mehler2_exchange_symmetry(
        (u, v) in real_product_pair(1.0, 0.4),
        z in disc(1.0),
        w in disc(1.0),
        nu in 0.25..=1.2f64,
        nu_p in 0.25..=1.2f64,
    ) {
        let a = KernelArgs { u, v, z, w, nu, nu_prime: nu_p };
        let base = kernels::mehler2_closed(&a).unwrap();
        let swapped = kernels::mehler2_closed(&KernelArgs { z: w, w: z, nu: nu_p, nu_prime: nu, ..a }).unwrap();
        prop_assert!(rel_err(base, swapped) <= 1e-13);
        let mirrored = kernels::mehler2_closed(&KernelArgs { u: v, v: u, z: z.conj(), w: w.conj(), ..a }).unwrap();
        prop_assert!(rel_err(base, mirrored) <= 1e-13);
    }

    #[test]
    fn mehler1_hermitian(u in -0.9..=0.9f64, z in disc(1.5), w in disc(1.5), nu in nu_range()) {
        let a = KernelArgs { u: C64::new(u, 0.0), z, w, nu, ..KernelArgs::default() };
        let zw = kernels::mehler1_closed(&a).unwrap();
        let wz = kernels::mehler1_closed(&KernelArgs { z: w, w: z, ..a }).unwrap();
        prop_assert!(rel_err(zw.conj(), wz) <= 1e-13);
    }

    #[test]
    fn mehler1_laguerre_route(u in -0.6..=0.6f64, z in disc(1.0), w in disc(1.0), nu in nu_range()) {
        let a = KernelArgs { u: C64::new(u, 0.0), z, w, nu, ..KernelArgs::default() };
        let closed = kernels::mehler1_closed(&a).unwrap();
        let lag = kernels::mehler1_laguerre_series(u, z, w, nu, trunc(80)).unwrap();
        prop_assert!(rel_err(lag.value, closed) <= 1e-9);
    }

    #[test]
    fn heat_kernel_on_diagonal_is_positive(t in 0.05..=20.0f64, z in disc(3.0), nu in 0.25..=4.0f64) {
        let k = kernels::heat_kernel_closed(&HeatArgs { t, z, z0: z, nu }).unwrap();
        prop_assert!(k.re > 0.0);
        prop_assert!(k.im.abs() <= 1e-14 * k.re);
    }

    #[test]
    fn heat_series_matches_closed(
        t_idx in 0usize..3,
        nu_idx in 0usize..3,
        z in disc(1.0),
        z0 in disc(1.0),
    ) {
        let a = HeatArgs { t: [0.5, 1.0, 2.0][t_idx], nu: [0.5, 1.0, 2.0][nu_idx], z, z0 };
        let s = kernels::heat_kernel_series(&a, trunc(120)).unwrap();
        prop_assert!(rel_err(s.value, kernels::heat_kernel_closed(&a).unwrap()) <= 1e-9);
    }

    #[test]
    fn generating_functions_at_m40(
        u in disc(0.5),
        v in disc(0.5),
        z in disc(1.5),
        w in disc(1.0),
        nu in nu_range(),
        mp in 0u32..=4,
    ) {
        let t = TruncationSpec::new(40, 1e-9).unwrap();
        let a = KernelArgs { u, v, z, w, nu, ..KernelArgs::default() };
        let s = kernels::egf_series(&a, t).unwrap();
        prop_assert!(rel_err(s.value, kernels::egf_closed(&a).unwrap()) <= 1e-9);
        let s = kernels::gf_single_series(mp, u, w, nu, t).unwrap();
        prop_assert!(rel_err(s.value, kernels::gf_single_closed(mp, u, w, nu).unwrap()) <= 1e-9);
    }

    #[test]
    fn mehler2_series_matches_closed(
        (u, v) in real_product_pair(1.0, 0.3),
        z in disc(1.0),
        w in disc(1.0),
        nu in 0.25..=1.0f64,
        nu_p in 0.25..=1.0f64,
    ) {
        let a = KernelArgs { u, v, z, w, nu, nu_prime: nu_p };
        let s = kernels::mehler2_series(&a, trunc(60)).unwrap();
        prop_assert!(rel_err(s.value, kernels::mehler2_closed(&a).unwrap()) <= 1e-9);
    }

    #[test]
    fn gaussian_quadrature_is_exact(
        g_idx in 0usize..3,
        alpha in disc(2.0),
        beta in disc(2.0),
    ) {
        let gamma = [0.5, 1.0, 2.0][g_idx];
        let rule = QuadratureRule::new(64, gamma).unwrap();
        let closed = quadrature::gaussian_integral_closed(gamma, alpha, beta).unwrap();
        let plane = rule.integrate_plane(|xi| (-gamma * xi.norm_sqr() + alpha * xi + beta * xi.conj()).exp());
        prop_assert!(rel_err(plane, closed) <= 1e-10, "{plane} vs {closed}");
        let weighted = quadrature::gaussian_integral_quad(gamma, alpha, beta, &rule).unwrap();
        prop_assert!(rel_err(weighted, closed) <= 1e-10);
    }

    #[test]
    fn real_round_trip_at_17_digits(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite() && x != 0.0);
        let back: f64 = format_real(x, 17).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn complex_round_trip_at_17_digits(re in any::<f64>(), im in any::<f64>()) {
        prop_assume!(re.is_finite() && im.is_finite());
        let z = C64::new(re, im);
        let back = parse_complex(&format_complex(z, 17)).unwrap();
        prop_assert_eq!(back.re, re);
        prop_assert_eq!(back.im, im);
    }

    #[test]
    fn wirtinger_product_rule(
        a in (0u32..4, 0u32..4, 0u32..3, -5i64..5),
        b in (0u32..4, 0u32..4, 0u32..3, -5i64..5),
    ) {
        let p = TriPoly::monomial(a.3, Monomial::new(a.0, a.1, a.2)) + TriPoly::z();
        let q = TriPoly::monomial(b.3, Monomial::new(b.0, b.1, b.2)) - TriPoly::zbar();
        prop_assert_eq!((&p * &q).d_z(), &p.d_z() * &q + &p * &q.d_z());
        prop_assert_eq!((&p * &q).d_zbar(), &p.d_zbar() * &q + &p * &q.d_zbar());
        prop_assert_eq!(p.d_z().d_zbar(), p.d_zbar().d_z());
    }
}

/// On a fixed grid, both evaluators agree with the exact sum at term scale,
/// and `chp_eval` is also relatively accurate wherever the value is not
/// dwarfed by its terms.
#[test]
fn evaluators_match_exact_sum_on_grid() {
    let radii = [0.5, 1.0, 2.0, 3.0, 4.0];
    let angles = [0.0, 0.7, 2.1, 3.9];
    for &nu in &[0.25, 1.0, 4.0] {
        for m in 0..=20u32 {
            for n in 0..=(20 - m) {
                let poly = chp_poly(m, n);
                for &r in &radii {
                    for &th in &angles {
                        let z = C64::from_polar(r, th);
                        let exact = poly.eval_exact(z, nu);
                        let scale = term_scale(&poly, z, nu);
                        let p = EvalPoint::new(z, nu).unwrap();
                        let got = chp_eval(m, n, p);
                        let rec = chp_eval_recurrence(m, n, p);
                        let at = format!("H_{m},{n}({z}; {nu})");
                        assert!((got - exact).norm() <= 1e-13 * (1.0 + scale), "{at}: {got} vs {exact}");
                        assert!((rec - exact).norm() <= 1e-13 * (1.0 + scale), "{at}: {rec} vs {exact}");
                        if exact.norm() >= 1e-3 * scale {
                            assert!(rel_err(got, exact) <= 1e-12, "{at}: {got} vs {exact}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn eigen_equation_is_exact_up_to_ten() {
    for m in 0..=10 {
        for n in 0..=10 {
            let h = chp_poly(m, n);
            let rhs = h.mul_monomial(Monomial::new(0, 0, 1)).scale(&m.into());
            assert_eq!(magnetic_laplacian_apply(&h), rhs, "m={m}, n={n}");
        }
    }
}

#[test]
fn leading_term_and_degree() {
    for m in 0..=12 {
        for n in 0..=12 {
            let h = chp_poly(m, n);
            assert_eq!(h.zz_degree(), Some(m + n));
            assert_eq!(h.coeff(Monomial::new(m, n, m + n)), 1.into());
        }
    }
}

#[test]
fn rodrigues_agrees_with_explicit_sum() {
    for m in 0..=6 {
        for n in 0..=6 {
            assert_eq!(chp_poly_rodrigues(m, n), chp_poly(m, n), "m={m}, n={n}");
        }
    }
}

#[test]
fn suites_are_deterministic() {
    let spec = SampleSpec { seed: 42, samples_per_identity: 3, ids: IdentityId::ALL.to_vec(), max_order: None };
    let a = run_suite(&spec);
    let b = run_suite(&spec);
    assert_eq!(a.to_json_lines(), b.to_json_lines());
    assert!(a.all_expected());
}
