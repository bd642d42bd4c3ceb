//! Exact invariants straight from a planar diagram code.

use knot_mosaic::invariants::{
    alexander, determinant, homfly_canonical, jones, kauffman_canonical, parse_pd, signature_abs,
};

fn main() {
    // figure-eight knot
    let code = parse_pd("[[4 2 5 1][8 6 1 5][6 3 7 4][2 7 3 8]]").unwrap();
    println!("jones: {}", jones(&code).unwrap());
    println!("alexander: {}", alexander(&code));
    println!("determinant: {}", determinant(&code));
    println!("|signature|: {}", signature_abs(&code).unwrap());
    println!("homfly: {}", homfly_canonical(&code));
    println!("kauffman: {}", kauffman_canonical(&code));
}
