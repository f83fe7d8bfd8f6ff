use mvthresh::cheb::*;
use proptest::prelude::*;

fn kappa_strategy() -> impl Strategy<Value = u32> {
    (1u32..=6).prop_map(|h| 2 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn pell_identity(n in 1u32..60, x in -1.0f64..1.0) {
        let t = cheb_t(n, x);
        let u = cheb_u(n - 1, x);
        let lhs = t * t - (x * x - 1.0) * u * u;
        prop_assert!((lhs - 1.0).abs() < 1e-9 * (1.0 + u * u));
    }

    #[test]
    fn t4_factorization(x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let lhs = cheb_t(4, x) - cheb_t(4, y);
        let rhs = 8.0 * (x - y) * (x + y) * (x * x + y * y - 1.0);
        prop_assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn t6_factorization(x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let lhs = cheb_t(6, x) - cheb_t(6, y);
        let rhs = 2.0 * (x - y) * (x + y)
            * (4.0 * x * x - 4.0 * x * y + 4.0 * y * y - 3.0)
            * (4.0 * x * x + 4.0 * x * y + 4.0 * y * y - 3.0);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    /// Equal `T_kappa` levels stay equal for every multiple of `kappa`.
    #[test]
    fn tcos_equal_levels_propagate(
        kappa in kappa_strategy(),
        x in -0.999f64..0.999,
        jw in 1u32..=12,
        alpha in 1u32..8,
    ) {
        let j = 1 + (jw - 1) % kappa;
        let well = Well::new(kappa, j).unwrap();
        let y = inv_t_on_well(well, cheb_t(kappa, x), RootOpts::default()).unwrap();
        prop_assert!((cheb_t(alpha * kappa, x) - cheb_t(alpha * kappa, y)).abs() < 1e-9 * alpha as f64 * kappa as f64);
    }

    /// Equal levels make every bracket of `U_{alpha kappa - 1}` and
    /// `U_{beta kappa - 1}` vanish.
    #[test]
    fn corollary_equiv_brackets_vanish(
        kappa in kappa_strategy(),
        x in -0.999f64..0.999,
        jw in 1u32..=12,
        alpha in 1u32..6,
        beta in 1u32..6,
    ) {
        let j = 1 + (jw - 1) % kappa;
        let well = Well::new(kappa, j).unwrap();
        let y = inv_t_on_well(well, cheb_t(kappa, x), RootOpts::default()).unwrap();
        let (a, b) = (alpha * kappa - 1, beta * kappa - 1);
        let br = bracket(cheb_u(a, x), cheb_u(a, y), cheb_u(b, x), cheb_u(b, y));
        let scale = (a as f64 + 1.0) * (b as f64 + 1.0);
        prop_assert!(br.abs() < 1e-8 * scale, "bracket {br}");
    }

    /// `[U_{2 kappa - 1}, U_{kappa - 1}] = 2 U(x) U(y) (T(x) - T(y))`, so the
    /// bracket vanishes only on equal levels or zeros of `U_{kappa - 1}`.
    #[test]
    fn corollary_equiv_converse(kappa in kappa_strategy(), x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let (k1, k2) = (kappa - 1, 2 * kappa - 1);
        let br = bracket(cheb_u(k2, x), cheb_u(k2, y), cheb_u(k1, x), cheb_u(k1, y));
        let want = 2.0 * cheb_u(k1, x) * cheb_u(k1, y) * (cheb_t(kappa, x) - cheb_t(kappa, y));
        prop_assert!((br - want).abs() < 1e-9 * (1.0 + want.abs()));
    }

    #[test]
    fn inverse_round_trip(kappa in kappa_strategy(), jw in 1u32..=12, s in 0.0f64..1.0) {
        let j = 1 + (jw - 1) % kappa;
        let well = Well::new(kappa, j).unwrap();
        let (a, b) = well.endpoints();
        let x = a + s * (b - a);
        let y = inv_t_on_well(well, cheb_t(kappa, x), RootOpts::default()).unwrap();
        prop_assert!((y - x).abs() < 1e-8, "x = {x}, y = {y}");
        prop_assert!(well.contains(y, 1e-12));
    }

    /// `T_kappa` is monotone on each well, increasing iff `j` is odd.
    #[test]
    fn variations_on_wells(kappa in kappa_strategy(), jw in 1u32..=12, s in 0.01f64..0.98) {
        let j = 1 + (jw - 1) % kappa;
        let well = Well::new(kappa, j).unwrap();
        let (a, b) = well.endpoints();
        let x0 = a + s * (b - a);
        let x1 = x0 + 0.01 * (b - a);
        let up = cheb_t(kappa, x1) > cheb_t(kappa, x0);
        prop_assert_eq!(up, j % 2 == 1);
        prop_assert_eq!(well.increasing(), j % 2 == 1);
    }

    #[test]
    fn derivative_identities(kappa in kappa_strategy(), x in -0.99f64..0.99) {
        let h = 1e-6;
        let fd_t = (cheb_t(kappa, x + h) - cheb_t(kappa, x - h)) / (2.0 * h);
        prop_assert!((cheb_t_prime(kappa, x) - fd_t).abs() < 1e-5 * kappa as f64 * kappa as f64);
        let fd_u = (cheb_u(kappa - 1, x + h) - cheb_u(kappa - 1, x - h)) / (2.0 * h);
        let want = (kappa as f64 * cheb_t(kappa, x) - x * cheb_u(kappa - 1, x)) / (x * x - 1.0);
        prop_assert!((cheb_u_prime(kappa, x) - want).abs() < 1e-9 * (1.0 + want.abs()));
        prop_assert!((fd_u - want).abs() < 1e-4 * (1.0 + want.abs()));
    }
}

#[test]
fn extrema_at_cosine_levels() {
    for kappa in [2u32, 4, 6, 8, 10] {
        for j in 0..=kappa as i64 {
            let c = cos_level(kappa, j);
            let want = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert!((cheb_t(kappa, c) - want).abs() < 1e-12);
        }
        assert_eq!(cheb_t(kappa, 1.0), 1.0);
    }
}
