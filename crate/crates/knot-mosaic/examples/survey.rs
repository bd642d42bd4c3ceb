//! Run the 27-tile survey over the three simplest layouts and print the
//! resulting knot names, with prior-work exclusions applied.

use knot_mosaic::knottable::{builtin_exclusions, builtin_table};
use knot_mosaic::search::{run_survey, surviving_names};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let layouts: Vec<usize> =
        if args.is_empty() { vec![1, 2, 3] } else { args.iter().map(|a| a.parse().unwrap()).collect() };
    let table = builtin_table();
    let exclusions = builtin_exclusions();
    let t0 = std::time::Instant::now();
    let results = run_survey(&layouts, 9, &table, &exclusions).unwrap();
    eprintln!("{} results in {:.1?}", results.len(), t0.elapsed());
    let names = surviving_names(&results);
    println!("{} knots with mosaic number 7 and tile number 27:", names.len());
    for name in &names {
        println!("  {name}");
    }
    for r in results.iter().filter(|r| !r.flags.is_empty()) {
        eprintln!("flagged {:?}: {:?}", r.knot, r.flags);
    }
}
