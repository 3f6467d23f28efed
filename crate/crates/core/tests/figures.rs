//! Figure-data generators checked against the behavior they are meant to show.

use std::f64::consts::{FRAC_PI_4, PI};

use birefringence::oracle::{compare_grid, quadrature_field, region_grid, QuadratureSpec};
use birefringence::pulse::{find_extrema, Region};
use birefringence::sweeps::{evolution_frames, profile_set, timeshift_map, Axis, CsvTable, GridSpec, MARKER_NONE};
use birefringence::{CrystalMedium, GaussianPulse};
use rand::{Rng, SeedableRng};

const BETA: f64 = 0.21 * PI;

fn column_max(t: &CsvTable, name: &str) -> (f64, usize) {
    let marker = t.column_values("marker");
    t.column_values(name)
        .unwrap()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| marker.as_ref().is_none_or(|m| m[*i] == MARKER_NONE as f64))
        .fold((f64::NEG_INFINITY, 0), |acc, (i, v)| if v > acc.0 { (v, i) } else { acc })
}

#[test]
fn profile_heights_order_with_width() {
    let m = CrystalMedium::from_mean(1.30, 0.15).unwrap();
    let axis = Axis::new(-1.0, 1.5, 2501).unwrap();
    let t = profile_set(&m, BETA, &[2.6, 1.6, 0.6], &axis).unwrap();
    let (h26, _) = column_max(&t, "f_mu_2.6");
    let (h16, _) = column_max(&t, "f_mu_1.6");
    let (h06, _) = column_max(&t, "f_mu_0.6");
    assert!(h26 > h16 && h16 > h06, "{h26} {h16} {h06}");
}

#[test]
fn retarded_peak_fades_for_broad_pulses() {
    let narrow = find_extrema(BETA, 2.6, 0.15).unwrap();
    let r = narrow.retarded_peak.unwrap();
    assert!(r.f / narrow.advanced_peak.f > 0.1);

    let broad = find_extrema(BETA, 0.6, 0.15).unwrap();
    let r = broad.retarded_peak.unwrap();
    assert!(r.f / broad.advanced_peak.f < 1e-3);
}

#[test]
fn diagonal_profile_is_symmetric() {
    let m = CrystalMedium::from_mean(1.30, 0.15).unwrap();
    let axis = Axis::new(-2.0, 2.0, 401).unwrap();
    let t = profile_set(&m, FRAC_PI_4, &[2.0], &axis).unwrap();
    let f = t.column_values("f_mu_2").unwrap();
    for i in 0..401 {
        assert!((f[i] - f[400 - i]).abs() < 1e-14);
    }
}

#[test]
fn timeshift_map_reflection_identity() {
    let m = CrystalMedium::from_mean(1.25, 0.15).unwrap();
    let grid = GridSpec::fig3(41, 0.4).unwrap();
    let t = timeshift_map(&m, &grid);
    let tau = t.column_values("tau").unwrap();
    let sing = t.column_values("is_singular").unwrap();
    let dkd = t.column_values("dkd").unwrap();
    let n = 41;
    for i in 0..n {
        let mirror = n - 1 - i;
        // central Δkd = π column
        let j = 20;
        assert!((dkd[i * n + j] - PI).abs() < 1e-12);
        if i == mirror || sing[i * n + j] == 1.0 {
            continue;
        }
        let sum = tau[i * n + j] + tau[mirror * n + j];
        assert!((sum - 2.0 * (m.n_bar() - 1.0)).abs() < 1e-9, "row {i}: {sum}");
    }
    // β = π/4 row: cos 2β = 0 (up to rounding of the grid node)
    let row = 20;
    for j in 0..n {
        if sing[row * n + j] == 0.0 {
            assert!((tau[row * n + j] - (m.n_bar() - 1.0)).abs() < 1e-9);
        }
    }
}

#[test]
fn evolution_frames_show_advanced_peak() {
    let m = CrystalMedium::from_mean(1.35, 0.5).unwrap();
    let p = GaussianPulse::tuned(&m, 0, 4.0).unwrap();
    let x_axis = Axis::new(-60.0, 60.0, 24_001).unwrap();
    let times = [-30.0, 0.5, 30.0];
    let t = evolution_frames(&m, BETA, &p, &times, &x_axis).unwrap();
    let n = x_axis.n;
    let filtered = t.column_values("f_filtered").unwrap();
    let free = t.column_values("f_freespace").unwrap();
    let xs = t.column_values("x").unwrap();

    // before the crystal both curves are the same pulse
    for i in 0..n {
        if xs[i] < 0.0 {
            assert!((filtered[i] - free[i]).abs() < 1e-12);
        }
    }

    // well after transit the filtered peak leads the vacuum peak
    let late = 2 * n..3 * n;
    let argmax = |v: &[f64]| {
        late.clone()
            .max_by(|&a, &b| v[a].total_cmp(&v[b]))
            .map(|i| xs[i])
            .unwrap()
    };
    let x_filtered = argmax(&filtered);
    let x_free = argmax(&free);
    assert!(x_filtered > x_free + 0.5, "{x_filtered} vs {x_free}");
    let expected = {
        let peaks = find_extrema(BETA, p.mu(&m), m.delta_n()).unwrap();
        30.0 + peaks.advanced_peak.xi - (m.n_bar() - 1.0)
    };
    assert!((x_filtered - expected).abs() < 0.01);
}

#[test]
fn in_crystal_frame_matches_quadrature() {
    let m = CrystalMedium::from_mean(1.35, 0.5).unwrap();
    let p = GaussianPulse::tuned(&m, 0, 4.0).unwrap();
    let x_axis = Axis::new(0.05, 0.95, 10).unwrap();
    let t = evolution_frames(&m, BETA, &p, &[0.7], &x_axis).unwrap();
    let filtered = t.column_values("f_filtered").unwrap();
    let spec = QuadratureSpec::default();
    for (i, x) in x_axis.values().enumerate() {
        assert_eq!(Region::of(x, &m), Region::Inside);
        let q = quadrature_field(x, 0.7, &m, BETA, &p, &spec).unwrap();
        assert!((q.norm_sqr() - filtered[i]).abs() < 1e-10);
    }
}

#[test]
fn oracle_fuzz() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
    let spec = QuadratureSpec::default();
    for _ in 0..20 {
        let n_o = rng.gen_range(1.0..2.0);
        let m = CrystalMedium::with_width(n_o, n_o + rng.gen_range(0.05..0.8), rng.gen_range(0.5..2.0)).unwrap();
        let beta = rng.gen_range(0.0..PI);
        let pulse = if rng.gen_bool(0.5) {
            GaussianPulse::tuned(&m, rng.gen_range(0..4), rng.gen_range(0.3..5.0)).unwrap()
        } else {
            GaussianPulse::new(rng.gen_range(1.0..30.0), rng.gen_range(0.1..20.0)).unwrap()
        };
        let grid = region_grid(&m, &pulse, 20);
        let r = compare_grid(&grid, &m, beta, &pulse, &spec).unwrap();
        assert!(r.max_abs_error < 1e-7, "{m:?} {pulse:?}: {r:?}");
    }
}
