//! Command-line surface: validate, render, reduce, identify, enumerate, and
//! verify, plus ASCII/SVG renderers usable as library functions.
//!
//! Exit codes are distinct per failure class:
//! 0 success / claim holds, 1 operation failed (validation violation, failed
//! claim, no identification), 2 usage errors (from clap), 3 file I/O errors,
//! 4 knot-table or exclusion-list load failures, 5 malformed mosaic input.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::invariants::{fingerprint_mosaic, to_diagram_code};
use crate::knottable::{
    builtin_exclusions, builtin_table, load_exclusions, load_table_file, KnotTable,
};
use crate::layouts::{derive_layouts, layout_catalog, tile_bounds};
use crate::mosaic::{parse_mosaic, Mosaic};
use crate::moves::reduce;
use crate::search::{run_survey, surviving_names, write_jsonl};
use crate::tiles::{Cell, Side, Tile};

/// Environment variable naming a default knot-table CSV used when `--table`
/// is not given. Without either, the built-in table ships with the binary.
pub const TABLE_ENV: &str = "KNOT_MOSAIC_TABLE";

const EXIT_FAIL: i32 = 1;
const EXIT_IO: i32 = 3;
const EXIT_TABLE: i32 = 4;
const EXIT_INPUT: i32 = 5;

#[derive(Parser)]
#[command(name = "knot-mosaic", version, about = "Knot mosaic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a mosaic file is suitably connected.
    Validate {
        /// Mosaic file (rows of tile tokens; `#` starts a comment).
        file: PathBuf,
    },
    /// Draw a mosaic as ASCII art or SVG.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply tile-count/crossing-reducing moves until stuck or out of budget.
    Reduce {
        file: PathBuf,
        /// Maximum number of moves to apply.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Name the knot depicted by a mosaic and print its invariants as JSON.
    Identify {
        file: PathBuf,
        /// Knot table CSV (default: $KNOT_MOSAIC_TABLE, then the built-in table).
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Run the fill-prune-identify survey over catalog layouts.
    Enumerate {
        /// Comma-separated layout ids from the catalog.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        layouts: Vec<usize>,
        #[arg(long, default_value_t = 9)]
        min_crossings: usize,
        #[arg(long)]
        table: Option<PathBuf>,
        /// Exclusion list CSV (default: built-in list of >=9-crossing knots
        /// already known to fit a 6-mosaic with at most 27 tiles).
        #[arg(long)]
        exclude: Option<PathBuf>,
        /// Worker threads (default: all cores). Output is jobs-insensitive.
        #[arg(long)]
        jobs: Option<usize>,
        /// JSONL output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a headline claim and report pass/fail with a diff.
    Verify {
        #[arg(long, value_enum)]
        claim: Claim,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        exclude: Option<PathBuf>,
        /// Layouts to survey (claim `survey` only); lets long runs be sharded.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        layouts: Vec<usize>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Claim {
    /// Tile-count bounds for space-efficient n-mosaics, n = 4..=9.
    Bounds,
    /// The derived layout catalog matches the shipped one.
    Layouts,
    /// The 27-tile survey yields exactly the expected 60 knots.
    Survey,
}

/// Entry point for the binary: parses `std::env::args` and exits.
pub fn run() -> ! {
    let cli = Cli::parse();
    std::process::exit(dispatch(cli.command));
}

fn dispatch(cmd: Command) -> i32 {
    match cmd {
        Command::Validate { file } => cmd_validate(&file),
        Command::Render { file, format, out } => cmd_render(&file, format, out.as_deref()),
        Command::Reduce { file, budget } => cmd_reduce(&file, budget),
        Command::Identify { file, table } => cmd_identify(&file, table.as_deref()),
        Command::Enumerate { layouts, min_crossings, table, exclude, jobs, out } => {
            cmd_enumerate(&layouts, min_crossings, table.as_deref(), exclude.as_deref(), jobs, out.as_deref())
        }
        Command::Verify { claim, table, exclude, layouts, jobs } => {
            cmd_verify(claim, table.as_deref(), exclude.as_deref(), &layouts, jobs)
        }
    }
}

fn read_mosaic(path: &Path) -> Result<Mosaic, i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_IO
    })?;
    parse_mosaic(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_INPUT
    })
}

fn load_table(path: Option<&Path>) -> Result<KnotTable, i32> {
    let from_env = std::env::var_os(TABLE_ENV).map(PathBuf::from);
    let path = path.map(Path::to_path_buf).or(from_env);
    match path {
        None => Ok(builtin_table()),
        Some(p) => load_table_file(&p).map_err(|e| {
            eprintln!("error: cannot load knot table {}: {e}", p.display());
            EXIT_TABLE
        }),
    }
}

fn load_excludes(path: Option<&Path>) -> Result<Vec<String>, i32> {
    match path {
        None => Ok(builtin_exclusions()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                eprintln!("error: cannot load exclusion list {}: {e}", p.display());
                EXIT_TABLE
            })?;
            Ok(load_exclusions(&text))
        }
    }
}

fn cmd_validate(file: &Path) -> i32 {
    let m = match read_mosaic(file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    println!("size: {0}x{0}", m.n());
    println!("non-blank tiles: {}", m.non_blank_count());
    println!("crossings: {}", m.crossing_count());
    println!("deterministic: {}", m.is_deterministic());
    match m.is_suitably_connected() {
        Ok(()) => {
            println!("suitably connected: yes");
            0
        }
        Err(((r, c), side)) => {
            println!("suitably connected: no");
            println!("violation: tile at row {r}, column {c} has an unmatched connection point on its {side:?} side");
            EXIT_FAIL
        }
    }
}

fn cmd_render(file: &Path, format: Format, out: Option<&Path>) -> i32 {
    let m = match read_mosaic(file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let rendered = match format {
        Format::Ascii => render_ascii(&m),
        Format::Svg => match render_svg(&m) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
        },
    };
    match out {
        None => {
            print!("{rendered}");
            0
        }
        Some(p) => match std::fs::write(p, rendered) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", p.display());
                EXIT_IO
            }
        },
    }
}

fn cmd_reduce(file: &Path, budget: usize) -> i32 {
    let m = match read_mosaic(file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let outcome = reduce(&m, budget);
    for (name, (r, c)) in &outcome.steps {
        eprintln!("applied {name} at ({r}, {c})");
    }
    if outcome.budget_exhausted {
        eprintln!("warning: move budget exhausted before reaching a fixed point");
    }
    eprintln!(
        "non-blank tiles: {} -> {}",
        m.non_blank_count(),
        outcome.mosaic.non_blank_count()
    );
    print!("{}", outcome.mosaic);
    0
}

fn cmd_identify(file: &Path, table: Option<&Path>) -> i32 {
    let m = match read_mosaic(file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let table = match load_table(table) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let code = match to_diagram_code(&m) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let fp = match fingerprint_mosaic(&m) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let names = table.identify_code(&code, &fp);
    let obj = serde_json::json!({
        "names": names,
        "tiles": m.non_blank_count(),
        "crossings": m.crossing_count(),
        "jones": fp.jones,
        "alexander": fp.alexander,
        "determinant": fp.determinant.to_string(),
    });
    println!("{}", serde_json::to_string_pretty(&obj).unwrap());
    if names_empty(&obj) {
        eprintln!("no matching knot in the table");
        EXIT_FAIL
    } else {
        0
    }
}

fn names_empty(obj: &serde_json::Value) -> bool {
    obj["names"].as_array().map_or(true, |a| a.is_empty())
}

fn configure_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        // Ignore failure: the global pool can only be initialized once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn cmd_enumerate(
    layouts: &[usize],
    min_crossings: usize,
    table: Option<&Path>,
    exclude: Option<&Path>,
    jobs: Option<usize>,
    out: Option<&Path>,
) -> i32 {
    let table = match load_table(table) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let excludes = match load_excludes(exclude) {
        Ok(x) => x,
        Err(code) => return code,
    };
    configure_jobs(jobs);
    let results = match run_survey(layouts, min_crossings, &table, &excludes) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    };
    let write_result = match out {
        None => write_jsonl(&results, std::io::stdout().lock()),
        Some(p) => match std::fs::File::create(p) {
            Ok(f) => write_jsonl(&results, std::io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", p.display());
                return EXIT_IO;
            }
        },
    };
    if let Err(e) = write_result {
        eprintln!("error: {e}");
        return EXIT_IO;
    }
    eprintln!("{} results", results.len());
    0
}

fn cmd_verify(
    claim: Claim,
    table: Option<&Path>,
    exclude: Option<&Path>,
    layouts: &[usize],
    jobs: Option<usize>,
) -> i32 {
    match claim {
        Claim::Bounds => verify_bounds(),
        Claim::Layouts => verify_layouts(),
        Claim::Survey => verify_survey(table, exclude, layouts, jobs),
    }
}

fn verify_bounds() -> i32 {
    let expected = [(4usize, (12, 12)), (5, (17, 17)), (6, (22, 32)), (7, (27, 41)), (8, (32, 60)), (9, (37, 73))];
    let mut ok = true;
    for (n, want) in expected {
        match tile_bounds(n) {
            Ok(got) if got == want => println!("n={n}: tile number in {}..={} (ok)", got.0, got.1),
            Ok(got) => {
                println!("n={n}: got {got:?}, expected {want:?} (MISMATCH)");
                ok = false;
            }
            Err(e) => {
                println!("n={n}: error: {e}");
                ok = false;
            }
        }
    }
    verdict("bounds", ok)
}

fn verify_layouts() -> i32 {
    let report = derive_layouts();
    let catalog = layout_catalog();
    let mut ok = true;
    let mut check = |label: &str, got: usize, want: usize| {
        let pass = got == want;
        println!("{label}: {got} (expected {want}){}", if pass { "" } else { " MISMATCH" });
        ok &= pass;
    };
    check("first-two-row options", report.first_two_row_options, 4);
    check("outer shells", report.outer_shells, 20);
    check("derived layouts", report.layouts.len(), catalog.len());
    let counts: Vec<usize> = catalog.iter().map(|l| l.non_blank_count).collect();
    let distinct: BTreeSet<usize> = counts.iter().copied().collect();
    check("distinct tile counts", distinct.len(), 9);
    check("27-tile layouts", counts.iter().filter(|&&c| c == 27).count(), 3);
    for (d, c) in report.layouts.iter().zip(catalog) {
        if d.mosaic.to_string() != c.mosaic.to_string() {
            println!("layout {} differs from the derived one", c.id);
            ok = false;
        }
    }
    verdict("layouts", ok)
}

fn verify_survey(
    table: Option<&Path>,
    exclude: Option<&Path>,
    layouts: &[usize],
    jobs: Option<usize>,
) -> i32 {
    let table = match load_table(table) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let excludes = match load_excludes(exclude) {
        Ok(x) => x,
        Err(code) => return code,
    };
    configure_jobs(jobs);
    let results = match run_survey(layouts, 9, &table, &excludes) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    };
    let got = surviving_names(&results);
    let want: BTreeSet<String> = expected_survey_names();
    let full_run = [1usize, 2, 3].iter().all(|l| layouts.contains(l));
    let missing: Vec<&String> = want.difference(&got).collect();
    let extra: Vec<&String> = got.difference(&want).collect();
    println!("surveyed layouts {layouts:?}: {} knots", got.len());
    let mut ok = true;
    if !extra.is_empty() {
        println!("unexpected names: {extra:?}");
        ok = false;
    }
    if full_run {
        if !missing.is_empty() {
            println!("missing names: {missing:?}");
            ok = false;
        }
    } else if !missing.is_empty() {
        println!("note: partial run; {} expected names not (yet) seen", missing.len());
    }
    verdict("survey", ok)
}

/// The sixty knots expected to survive the full three-layout survey.
pub fn expected_survey_names() -> BTreeSet<String> {
    include_str!("../data/expected27.csv")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

fn verdict(claim: &str, ok: bool) -> i32 {
    if ok {
        println!("claim {claim}: PASS");
        0
    } else {
        println!("claim {claim}: FAIL");
        EXIT_FAIL
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Draw a mosaic as ASCII art, one 3x3 character block per tile. Arcs are
/// slashes, segments are `-`/`|`, and at a crossing the under-strand is
/// interrupted by the over-strand's character in the center.
pub fn render_ascii(m: &Mosaic) -> String {
    let n = m.n();
    let mut rows = vec![vec![' '; 3 * n]; 3 * n];
    for (r, c) in m.positions() {
        let pat = ascii_tile(m.get(r, c));
        for (dr, line) in pat.iter().enumerate() {
            for (dc, ch) in line.chars().enumerate() {
                rows[3 * r + dr][3 * c + dc] = ch;
            }
        }
    }
    let mut out = String::new();
    for row in rows {
        let line: String = row.into_iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn ascii_tile(cell: Cell) -> [&'static str; 3] {
    match cell {
        Cell::Det(t) => match t {
            Tile::T0 => ["   ", "   ", "   "],
            Tile::T1 => ["   ", "\\  ", " \\ "],
            Tile::T2 => ["   ", "  /", " / "],
            Tile::T3 => [" \\ ", "  \\", "   "],
            Tile::T4 => [" / ", "/  ", "   "],
            Tile::T5 => ["   ", "---", "   "],
            Tile::T6 => [" | ", " | ", " | "],
            // center shows the over-strand; the under-strand is the gapped one
            Tile::T9 => [" | ", "---", " | "],
            Tile::T10 => [" | ", "-|-", " | "],
            Tile::T7 => [" / ", "/ /", " / "],
            Tile::T8 => [" \\ ", "\\ \\", " \\ "],
        },
        Cell::FourCp => [" | ", "-#-", " | "],
        Cell::Crossing => [" | ", "-X-", " | "],
        Cell::SegOrArc => ["   ", " ? ", "   "],
    }
}

/// Render a deterministic mosaic as SVG. Arcs are quarter circles; at each
/// crossing the under-strand is drawn in two pieces with a fixed-ratio gap
/// around the over-strand. Every drawn element carries class `strand`, so
/// the element count reflects the mosaic's connection-point topology:
/// one element per arc or segment, three per crossing tile.
pub fn render_svg(m: &Mosaic) -> Result<String, crate::Error> {
    if !m.is_deterministic() {
        return Err(crate::Error::Invalid(
            "SVG rendering requires a deterministic mosaic".into(),
        ));
    }
    const S: f64 = 40.0; // tile size in user units
    const GAP: f64 = 0.18; // under-strand gap, as a fraction of the tile size
    let n = m.n();
    let mut body = String::new();
    let mut emit = |d: String| {
        body.push_str(&format!(
            "  <path class=\"strand\" d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"3\"/>\n"
        ));
    };
    for (r, c) in m.positions() {
        let (x, y) = (c as f64 * S, r as f64 * S);
        let mid = |side: Side| -> (f64, f64) {
            match side {
                Side::Top => (x + S / 2.0, y),
                Side::Right => (x + S, y + S / 2.0),
                Side::Bottom => (x + S / 2.0, y + S),
                Side::Left => (x, y + S / 2.0),
            }
        };
        let arc = |a: Side, b: Side| -> String {
            let (x0, y0) = mid(a);
            let (x1, y1) = mid(b);
            // sweep chosen so the quarter circle bends through the tile corner
            // shared by the two sides
            let sweep = match (a, b) {
                (Side::Top, Side::Left) | (Side::Left, Side::Bottom) => 1,
                (Side::Bottom, Side::Right) | (Side::Right, Side::Top) => 1,
                _ => 0,
            };
            format!("M {x0} {y0} A {r} {r} 0 0 {sweep} {x1} {y1}", r = S / 2.0)
        };
        let line = |a: Side, b: Side| -> String {
            let (x0, y0) = mid(a);
            let (x1, y1) = mid(b);
            format!("M {x0} {y0} L {x1} {y1}")
        };
        // the under-strand stops short of the tile center on both sides
        let under = |a: Side, b: Side| -> [String; 2] {
            let (cx, cy) = (x + S / 2.0, y + S / 2.0);
            let halt = |sx: f64, sy: f64| {
                (cx + (sx - cx) * 2.0 * GAP, cy + (sy - cy) * 2.0 * GAP)
            };
            let (x0, y0) = mid(a);
            let (x1, y1) = mid(b);
            let (gx0, gy0) = halt(x0, y0);
            let (gx1, gy1) = halt(x1, y1);
            [format!("M {x0} {y0} L {gx0} {gy0}"), format!("M {x1} {y1} L {gx1} {gy1}")]
        };
        let Cell::Det(t) = m.get(r, c) else { unreachable!() };
        match t {
            Tile::T0 => {}
            Tile::T1 => emit(arc(Side::Left, Side::Bottom)),
            Tile::T2 => emit(arc(Side::Bottom, Side::Right)),
            Tile::T3 => emit(arc(Side::Right, Side::Top)),
            Tile::T4 => emit(arc(Side::Top, Side::Left)),
            Tile::T5 => emit(line(Side::Left, Side::Right)),
            Tile::T6 => emit(line(Side::Top, Side::Bottom)),
            Tile::T7 => {
                emit(arc(Side::Top, Side::Left));
                emit(arc(Side::Bottom, Side::Right));
            }
            Tile::T8 => {
                emit(arc(Side::Right, Side::Top));
                emit(arc(Side::Left, Side::Bottom));
            }
            Tile::T9 => {
                emit(line(Side::Left, Side::Right));
                for d in under(Side::Top, Side::Bottom) {
                    emit(d);
                }
            }
            Tile::T10 => {
                emit(line(Side::Top, Side::Bottom));
                for d in under(Side::Left, Side::Right) {
                    emit(d);
                }
            }
        }
    }
    let size = n as f64 * S;
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size} {size}\" \
         width=\"{size}\" height=\"{size}\">\n{body}</svg>\n"
    ))
}
