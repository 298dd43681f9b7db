use std::collections::HashSet;

use hsr_core::maps::{bundled_grid, bundled_shape_table, load_grid, load_shape_table, Dataset};
use hsr_core::{pressures_for_shape_and_stiffness, shape_for_pressures, stiffness_at, Error, GridLabel};
use proptest::prelude::*;

#[test]
fn every_phi_has_four_distinct_stiffness_settings() {
    let table = bundled_shape_table();
    for block in table.blocks() {
        let pairs: HashSet<(u64, u64)> = block.iter().map(|r| (r.p1.to_bits(), r.p2.to_bits())).collect();
        let ks: HashSet<u64> = block.iter().map(|r| r.k.to_bits()).collect();
        assert!(pairs.len() >= 4 && ks.len() >= 4, "phi {}", block[0].phi);
    }
}

#[test]
fn backbone_stiffer_at_every_shared_cell() {
    let with = bundled_grid(GridLabel::WithBackbone);
    let without = bundled_grid(GridLabel::WithoutBackbone);
    for (i, j, k) in with.cells() {
        let other = without.cell(i, j).expect("same measured pattern");
        assert!(k > other, "({i}, {j}): {k} vs {other}");
    }
}

#[test]
fn bundled_data_directory_matches_embedded_copy() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    assert_eq!(Dataset::load_dir(dir).unwrap(), Dataset::bundled());
}

#[test]
fn diagnostics_name_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table1_with_backbone.csv");
    std::fs::write(&path, "p1_bar,p2_bar,k_nm_per_rad\n0.0,0.0,0.52\n0.0,0.5,0.50\n").unwrap();
    let err = load_grid(&path).unwrap_err();
    assert!(matches!(err, Error::Parse { .. }));
    assert!(err.to_string().contains("decreases"), "{err}");

    let path = dir.path().join("shape.csv");
    std::fs::write(&path, "phi_rad,p1_bar,p2_bar,k_nm_per_rad\n0.4,0.5,1.86,oops\n").unwrap();
    let err = load_shape_table(&path).unwrap_err();
    assert!(err.to_string().contains("row 2"), "{err}");
}

#[test]
fn shape_between_rows_is_bracketed() {
    let table = bundled_shape_table();
    for block in table.blocks().collect::<Vec<_>>().windows(2) {
        for (a, b) in block[0].iter().zip(block[1]) {
            let phi = shape_for_pressures(&table, a.p1, 0.5 * (a.p2 + b.p2)).unwrap();
            assert!(phi > a.phi - 1e-12 && phi < b.phi + 1e-12, "{phi}");
        }
    }
}

proptest! {
    #[test]
    fn solved_pressures_lie_between_rows(phi in 0.4..=1.0f64, s in 0.0..=1.0f64) {
        let table = bundled_shape_table();
        let block = table.block_at(phi).unwrap();
        let k = block[0].k + s * (block[3].k - block[0].k);
        let (p1, p2) = pressures_for_shape_and_stiffness(&table, phi, k).unwrap();
        prop_assert!((0.5 - 1e-12..=1.25 + 1e-12).contains(&p1));
        prop_assert!(p2 >= block[0].p2 - 1e-12 && p2 <= block[3].p2 + 1e-12);
    }

    #[test]
    fn interpolated_stiffness_stays_within_cell_bounds(p1 in 0.0..=3.0f64, t in 0.0..=1.0f64) {
        let grid = bundled_grid(GridLabel::WithoutBackbone);
        let p2 = p1 + t * (3.0 - p1);
        let k = stiffness_at(&grid, p1, p2).unwrap();
        prop_assert!((0.39..=1.39).contains(&k));
    }
}
