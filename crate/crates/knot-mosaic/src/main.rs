fn main() { knot_mosaic::cli::run() }
