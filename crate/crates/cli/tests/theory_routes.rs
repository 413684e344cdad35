//! Cross-route agreement: the exact-series scan, the Gaussian scan, and the
//! closed form must pick the same minimum window on the reference grids.

use rlnc_broadcast_cli::reproduce::{theory_min_k, TABLE_EPSILONS};

#[test]
fn three_routes_agree_on_the_reference_grids() {
    // (file, receivers, p) columns of the three fixed minimum-window grids.
    let columns = [
        (500u64, 6u32, 0.2),
        (500, 6, 0.8),
        (10_000, 6, 0.2),
        (10_000, 50, 0.2),
        (400, 3, 0.4),
        (2_000, 3, 0.4),
    ];
    for (f, n, p) in columns {
        for eps in TABLE_EPSILONS {
            // The one grid cell whose published row disagrees across routes:
            // at (F=500, p=0.8, eps=10%) the exact series needs 5% of F
            // where the Gaussian routes settle at 4%.
            let exact_series_diverges = f == 500 && p == 0.8 && eps == 0.10;
            let cell = theory_min_k(f, n, p, eps).unwrap();
            assert_eq!(
                cell.gauss_k, cell.closed_k,
                "Gaussian scan vs closed form at F={f} N={n} p={p} eps={eps}"
            );
            if exact_series_diverges {
                assert_eq!(cell.negbin_k, 25);
                assert_eq!(cell.closed_k, 20);
            } else {
                assert_eq!(
                    cell.negbin_k, cell.closed_k,
                    "series scan vs closed form at F={f} N={n} p={p} eps={eps}"
                );
            }
        }
    }
}
