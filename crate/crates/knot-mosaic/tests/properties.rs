//! Randomized property tests for the polynomial engine and mosaic algebra.

use knot_mosaic::invariants::{alexander, determinant, jones, LaurentPoly};
use knot_mosaic::knottable::builtin_table;
use knot_mosaic::mosaic::{parse_mosaic, CanonLevel, SYMMETRIES};
use knot_mosaic::tiles::{Cell, Tile};

use proptest::prelude::*;

fn poly(terms: Vec<(i64, i128)>) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (e, c) in terms {
        p.add_term(e, c);
    }
    p
}

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec(((-12i64..12), (-9i128..9)), 0..6).prop_map(poly)
}

proptest! {
    #[test]
    fn laurent_arithmetic_is_a_commutative_ring(
        a in arb_poly(), b in arb_poly(), c in arb_poly()
    ) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), LaurentPoly::zero());
        prop_assert_eq!(a.mul(&LaurentPoly::one()), a.clone());
    }

    #[test]
    fn table_codes_satisfy_knot_polynomial_laws(idx in 0usize..500) {
        let table = builtin_table();
        let r = &table.records[idx % table.len()];
        // the Jones polynomial of any knot evaluates to 1 at t = 1
        // (shift to nonnegative exponents first; a power of 1 is 1)
        let j = jones(&r.code).unwrap();
        prop_assert_eq!(j.mul_monomial(1, -j.min_exp().unwrap_or(0)).eval_int(1), 1);
        // knot determinants are odd
        prop_assert_eq!(determinant(&r.code) % 2, 1);
        // Alexander polynomials are palindromic up to sign and a unit
        let a = alexander(&r.code);
        let fwd = a.mul_monomial(1, -a.min_exp().unwrap_or(0));
        let rev = a.invert_variable();
        let rev = rev.mul_monomial(1, -rev.min_exp().unwrap_or(0));
        prop_assert!(fwd == rev || fwd == rev.neg());
    }

    #[test]
    fn canonical_form_is_symmetry_invariant(which in 0usize..8, flips in 0u32..16) {
        // start from the trefoil and vary crossing signs for diversity
        let mut m = parse_mosaic("0 2 1 0\n2 10 9 1\n3 9 7 4\n0 3 4 0\n").unwrap();
        let crossings: Vec<(usize, usize)> = m
            .positions()
            .filter(|&(r, c)| m.get(r, c).is_crossing_like())
            .collect();
        for (i, &(r, c)) in crossings.iter().enumerate() {
            if flips >> i & 1 == 1 {
                m.set(r, c, m.get(r, c).switch_crossing());
            }
        }
        let g = SYMMETRIES[which];
        let lhs = m.canonical_form(CanonLevel::Diagram).to_string();
        let rhs = m.transform(g).canonical_form(CanonLevel::Diagram).to_string();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_parse_roundtrip(mask in 0u32..65536) {
        // blur some determined tiles into their wildcard classes; parsing the
        // rendered text must reproduce the same cells token for token
        let mut m = parse_mosaic("0 2 1 0\n2 10 9 1\n3 9 7 4\n0 3 4 0\n").unwrap();
        for (i, (r, c)) in m.positions().collect::<Vec<_>>().into_iter().enumerate() {
            if mask >> i & 1 == 0 {
                continue;
            }
            if let Cell::Det(t) = m.get(r, c) {
                if t.is_crossing() {
                    m.set(r, c, Cell::Crossing);
                } else if t == Tile::T7 || t == Tile::T8 {
                    m.set(r, c, Cell::FourCp);
                } else if t == Tile::T5 || t == Tile::T6 {
                    m.set(r, c, Cell::SegOrArc);
                }
            }
        }
        let text = m.to_string();
        let back = parse_mosaic(&text).unwrap();
        prop_assert_eq!(back.cells(), m.cells());
        for tok in text.split_whitespace() {
            prop_assert!(Cell::parse(tok).is_ok());
        }
    }
}
