//! The space-efficient 7-mosaic layout catalog, re-derived from first
//! principles and compared with the shipped table.

use knot_mosaic::layouts::{building_blocks, derive_layouts, layout_catalog, tile_bounds};

fn main() {
    let (lo, hi) = tile_bounds(7).unwrap();
    println!("7-mosaic tile numbers lie in {lo}..={hi}");
    let report = derive_layouts();
    println!(
        "derivation: {} first-two-row options, {} outer shells, {} layouts",
        report.first_two_row_options, report.outer_shells, report.layouts.len()
    );
    for layout in layout_catalog() {
        println!("\nlayout {} ({} non-blank tiles):\n{}", layout.id, layout.non_blank_count, layout.mosaic);
    }
    assert_eq!(report.layouts.len(), layout_catalog().len());
    println!("corner building blocks: {}", building_blocks().len());
}
