//! The survey's pruning stage: links, composites, and reducible diagrams
//! are discarded with a verifiable witness.

use knot_mosaic::mosaic::parse_mosaic;
use knot_mosaic::search::{prune, Prune};

fn main() {
    let granny = include_str!("../tests/fixtures/granny_composite.txt");
    let trefoil = include_str!("../tests/fixtures/trefoil_4.txt");
    for (name, text) in [("granny", granny), ("trefoil", trefoil)] {
        let m = parse_mosaic(text).unwrap();
        match prune(&m) {
            Prune::Keep => println!("{name}: kept"),
            Prune::Discard(reason) => println!("{name}: discarded ({reason:?})"),
        }
    }
}
