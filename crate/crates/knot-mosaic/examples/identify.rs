//! Identify the knot depicted by a mosaic via exact polynomial invariants.

use knot_mosaic::invariants::{fingerprint_mosaic, to_diagram_code};
use knot_mosaic::knottable::builtin_table;
use knot_mosaic::mosaic::parse_mosaic;

fn main() {
    let default = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/cinquefoil_17.txt");
    let path = std::env::args().nth(1).unwrap_or_else(|| default.to_string());
    let m = parse_mosaic(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let code = to_diagram_code(&m).unwrap();
    let fp = fingerprint_mosaic(&m).unwrap();
    println!("tiles: {}", m.non_blank_count());
    println!("crossings: {}", m.crossing_count());
    println!("jones: {}", fp.jones);
    println!("alexander: {}", fp.alexander);
    println!("determinant: {}", fp.determinant);
    let names = builtin_table().identify_code(&code, &fp);
    println!("identified: {names:?}");
}
