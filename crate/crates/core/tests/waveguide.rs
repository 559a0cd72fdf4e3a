use cqed_core::constants::{C0, EPS0, MU0};
use cqed_core::waveguide::{cpw_params, line_params, parallel_plate_params, reference_cpw, WaveguideGeometry, WaveguideParams};
use proptest::prelude::*;

/// Rows `[C′ (1e-10 F/m), v/c, ε_eff, L′ (1e-7 H/m), C_eff (1e-10 F/m), Z (Ω), Z_st (Ω)]`.
const FULL_MODEL: [f64; 7] = [1.44, 0.434, 5.30, 2.36, 2.49, 30.8, 40.5];
const EQUAL_LAYERS: [f64; 7] = [1.54, 0.409, 5.99, 4.54, 1.47, 55.6, 54.3];
const TWO_HALF_PLANES: [f64; 7] = [1.55, 0.398, 6.3, 8.32, 0.84, 99.4, 73.0];

fn columns(p: &WaveguideParams) -> [f64; 7] {
    [p.c_line / 1e-10, p.v / C0, p.eps_eff, p.l_line / 1e-7, p.c_eff / 1e-10, p.z, p.z_static]
}

fn assert_row(p: &WaveguideParams, row: &[f64; 7]) {
    for (i, (got, want)) in columns(p).iter().zip(row).enumerate() {
        assert!((got / want - 1.0).abs() < 0.01, "column {i}: {got} vs {want}");
    }
}

#[test]
fn full_model_row() {
    assert_row(&cpw_params(&reference_cpw()).unwrap(), &FULL_MODEL);
}

#[test]
fn equal_layer_row() {
    let WaveguideGeometry::Cpw { w, s, h1, h2, eps1_rel, .. } = reference_cpw() else { unreachable!() };
    let g = WaveguideGeometry::Cpw { w, s, h1, h2, eps1_rel, eps2_rel: eps1_rel };
    assert_row(&cpw_params(&g).unwrap(), &EQUAL_LAYERS);
}

#[test]
fn two_half_planes_row() {
    let g = WaveguideGeometry::CpwTwoHalfPlanes { w: 10e-6, s: 6.6e-6, eps1_rel: 11.6 };
    assert_row(&line_params(&g).unwrap(), &TWO_HALF_PLANES);
}

#[test]
fn parallel_plate_examples() {
    let plate = |e1: f64, e2: f64, d1: f64, d2: f64| {
        parallel_plate_params(&WaveguideGeometry::ParallelPlate { width: 2e-3, d1, d2, eps1_rel: e1, eps2_rel: e2 }).unwrap()
    };
    let vacuum = plate(1.0, 1.0, 1e-4, 3e-4);
    assert!((vacuum.v / C0 - 1.0).abs() < 1e-12);
    assert!((vacuum.c_line / (EPS0 * 2e-3 / 4e-4) - 1.0).abs() < 1e-12);
    let uniform = plate(4.0, 4.0, 1e-4, 3e-4);
    assert!((1.0 / (uniform.l_line * uniform.c_line).sqrt() / uniform.v - 1.0).abs() < 1e-12);
    assert!((uniform.v - 1.0 / (MU0 * 4.0 * EPS0).sqrt()).abs() < 1e-6 * uniform.v);
    let mixed = plate(2.0, 1.0, 1e-4, 1e-4);
    let direct = (1.25 / (1.5 * MU0 * EPS0)).sqrt();
    assert!((mixed.v / direct - 1.0).abs() < 1e-12, "{} vs {direct}", mixed.v);
}

#[test]
fn invalid_geometries_are_rejected() {
    let bad = [
        WaveguideGeometry::Cpw { w: -1e-6, s: 1e-6, h1: 1e-4, h2: 1e-7, eps1_rel: 11.6, eps2_rel: 3.78 },
        WaveguideGeometry::Cpw { w: 1e-5, s: 1e-6, h1: 1e-4, h2: 1e-7, eps1_rel: 0.5, eps2_rel: 3.78 },
        WaveguideGeometry::CpwTwoHalfPlanes { w: 1e-5, s: 0.0, eps1_rel: 2.0 },
        WaveguideGeometry::ParallelPlate { width: 1e-3, d1: f64::NAN, d2: 1e-4, eps1_rel: 1.0, eps2_rel: 1.0 },
    ];
    for g in bad {
        assert!(line_params(&g).is_err(), "{g:?}");
    }
    assert!(cpw_params(&WaveguideGeometry::ParallelPlate { width: 1.0, d1: 1.0, d2: 1.0, eps1_rel: 1.0, eps2_rel: 1.0 }).is_err());
}

#[test]
fn reference_velocity_decreases_with_substrate_permittivity() {
    let WaveguideGeometry::Cpw { w, s, h1, h2, eps2_rel, .. } = reference_cpw() else { unreachable!() };
    for layer in [Some(eps2_rel), None] {
        let v: Vec<f64> = (0..=76)
            .map(|k| {
                let e1 = 1.0 + 0.25 * k as f64;
                let g = WaveguideGeometry::Cpw { w, s, h1, h2, eps1_rel: e1, eps2_rel: layer.unwrap_or(e1) };
                cpw_params(&g).unwrap().v
            })
            .collect();
        assert!(v.windows(2).all(|p| p[1] < p[0]), "{layer:?}");
    }
}

#[test]
fn geometry_json_round_trip() {
    let text = serde_json::to_string(&reference_cpw()).unwrap();
    assert!(text.contains("\"model\":\"cpw\""));
    let back: WaveguideGeometry = serde_json::from_str(&text).unwrap();
    assert_eq!(back, reference_cpw());
}

fn cpw() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (1e-6..50e-6f64, 1e-6..50e-6f64, 50e-6..1e-3f64, 10e-9..5e-6f64)
}

proptest! {
    #[test]
    fn vacuum_reduction((w, s, h1, h2) in cpw(), d1 in 1e-6..1e-3f64, d2 in 1e-6..1e-3f64) {
        let geometries = [
            WaveguideGeometry::Cpw { w, s, h1, h2, eps1_rel: 1.0, eps2_rel: 1.0 },
            WaveguideGeometry::CpwTwoHalfPlanes { w, s, eps1_rel: 1.0 },
            WaveguideGeometry::ParallelPlate { width: w, d1, d2, eps1_rel: 1.0, eps2_rel: 1.0 },
        ];
        for g in geometries {
            let p = line_params(&g).unwrap();
            prop_assert!((p.v / C0 - 1.0).abs() < 1e-10);
            prop_assert!((p.z / p.z_static - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn effective_capacitance_identity((w, s, h1, h2) in cpw(), e1 in 1.0..20.0f64, e2 in 1.0..20.0f64) {
        let p = cpw_params(&WaveguideGeometry::Cpw { w, s, h1, h2, eps1_rel: e1, eps2_rel: e2 }).unwrap();
        prop_assert!((p.c_eff * p.l_line * p.v * p.v - 1.0).abs() < 1e-14);
        prop_assert!(p.v <= C0 * (1.0 + 1e-12));
        prop_assert!([p.c_line, p.l_line, p.v, p.eps_eff, p.c_eff, p.z, p.z_static].iter().all(|&x| x > 0.0));
    }

    #[test]
    fn two_half_plane_velocity_decreases_with_permittivity(w in 1e-6..50e-6f64, s in 1e-6..50e-6f64, e1 in 1.0..20.0f64, step in 0.01..5.0f64) {
        let v = |e: f64| line_params(&WaveguideGeometry::CpwTwoHalfPlanes { w, s, eps1_rel: e }).unwrap().v;
        prop_assert!(v(e1 + step) < v(e1));
    }
}
