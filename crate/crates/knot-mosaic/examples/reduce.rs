//! Reduce an inefficient mosaic: the 19-tile cinquefoil drops to the
//! minimal 17 tiles with its invariants unchanged.

use knot_mosaic::invariants::fingerprint_mosaic;
use knot_mosaic::mosaic::parse_mosaic;
use knot_mosaic::moves::reduce;

fn main() {
    let text = include_str!("../tests/fixtures/cinquefoil_19.txt");
    let m = parse_mosaic(text).unwrap();
    let before = fingerprint_mosaic(&m).unwrap();
    println!("before ({} tiles):\n{}", m.non_blank_count(), m);
    let outcome = reduce(&m, 100);
    for (name, anchor) in &outcome.steps {
        println!("applied {name} at {anchor:?}");
    }
    println!("after ({} tiles):\n{}", outcome.mosaic.non_blank_count(), outcome.mosaic);
    let after = fingerprint_mosaic(&outcome.mosaic).unwrap();
    assert_eq!(before, after, "reduction must preserve the knot");
    println!("fingerprint unchanged: jones {}", after.jones);
}
