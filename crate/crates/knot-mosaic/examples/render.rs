//! Parse a mosaic file and draw it as ASCII art and SVG.

use knot_mosaic::cli::{render_ascii, render_svg};
use knot_mosaic::mosaic::parse_mosaic;

fn main() {
    let default = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/trefoil_4.txt");
    let path = std::env::args().nth(1).unwrap_or_else(|| default.to_string());
    let m = parse_mosaic(&std::fs::read_to_string(&path).unwrap()).unwrap();
    println!("{}", render_ascii(&m));
    let svg = render_svg(&m).unwrap();
    let out = std::env::temp_dir().join("mosaic.svg");
    std::fs::write(&out, svg).unwrap();
    println!("SVG written to {}", out.display());
}
