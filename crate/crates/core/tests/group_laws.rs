mod common;

use std::collections::HashSet;

use common::*;
use nv_raag::dyadic::{Dyadic, Point};
use nv_raag::nv::{validate_pattern, Element, Piece};
use proptest::prelude::*;

fn element(n: usize, max_pieces: usize) -> impl Strategy<Value = Element> {
    any::<u64>().prop_map(move |seed| random_element(&mut rng(seed), n, max_pieces))
}

fn element_any_dim() -> impl Strategy<Value = Element> {
    (1usize..=3).prop_flat_map(|n| element(n, 12))
}

fn same_dim_pair() -> impl Strategy<Value = (Element, Element)> {
    (1usize..=3).prop_flat_map(|n| (element(n, 12), element(n, 12)))
}

fn same_dim_triple() -> impl Strategy<Value = (Element, Element, Element)> {
    (1usize..=3).prop_flat_map(|n| (element(n, 8), element(n, 8), element(n, 8)))
}

fn eq(a: &Element, b: &Element) -> bool {
    a.equals(b).unwrap()
}

fn agree_on_grid(a: &Element, b: &Element, depth: u32) -> bool {
    let (oa, ob) = (Oracle::new(a), Oracle::new(b));
    grid(a.dim(), depth)
        .iter()
        .all(|x| oa.apply(x) == ob.apply(x))
}

fn r1(addr: &str) -> nv_raag::Rectangle {
    rect(&[addr])
}

fn el1(pairs: &[(&str, &str)]) -> Element {
    Element::new(
        pairs
            .iter()
            .map(|(d, r)| Piece::new(r1(d), r1(r)))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn identity_laws(f in element_any_dim()) {
        let id = Element::identity(f.dim());
        prop_assert!(eq(&f.compose(&id).unwrap(), &f));
        prop_assert!(eq(&id.compose(&f).unwrap(), &f));
        prop_assert!(eq(&f, &f));
    }

    #[test]
    fn inverse_laws(f in element_any_dim()) {
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
        prop_assert!(f.inverse().compose(&f).unwrap().is_identity());
        prop_assert_eq!(f.inverse().inverse(), f.clone());
        prop_assert_eq!(f.compose(&f.inverse()).unwrap().reduce().len(), 1);
    }

    #[test]
    fn associativity((a, b, c) in same_dim_triple()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(eq(&left, &right));
    }

    #[test]
    fn compose_is_valid_and_bounded((f, g) in same_dim_pair()) {
        let fg = f.compose(&g).unwrap();
        prop_assert!(validate_pattern(&fg.domain_pattern()).is_ok());
        prop_assert!(validate_pattern(&fg.range_pattern()).is_ok());
        prop_assert!(fg.len() <= f.len() * g.len());
    }

    #[test]
    fn compose_follows_the_point_law((f, g) in same_dim_pair()) {
        let fg = Oracle::new(&f.compose(&g).unwrap());
        let (of, og) = (Oracle::new(&f), Oracle::new(&g));
        let depth = if f.dim() == 3 { 3 } else { 5 };
        for x in grid(f.dim(), depth) {
            prop_assert_eq!(fg.apply(&x), og.apply(&of.apply(&x)));
        }
    }

    #[test]
    fn apply_matches_linear_search(f in element_any_dim()) {
        let depth = if f.dim() == 3 { 3 } else { 5 };
        let oracle = Oracle::new(&f);
        for x in grid(f.dim(), depth) {
            let p = from_fixed(&x);
            let image = f.apply(&p).unwrap();
            prop_assert_eq!(to_fixed(&image), oracle.apply(&x));
            prop_assert_eq!(f.inverse().apply(&image).unwrap(), p);
        }
    }

    #[test]
    fn apply_is_injective_on_depth_four_points(f in (1usize..=2).prop_flat_map(|n| element(n, 12))) {
        let images: HashSet<Point> = grid(f.dim(), 4)
            .iter()
            .map(|x| f.apply(&from_fixed(x)).unwrap())
            .collect();
        prop_assert_eq!(images.len(), 1 << (4 * f.dim()));
    }

    #[test]
    fn refinement_keeps_the_map(f in element_any_dim(), piece in any::<prop::sample::Index>(), axis in any::<prop::sample::Index>()) {
        let refined = f.refine_piece(piece.index(f.len()), axis.index(f.dim())).unwrap();
        prop_assert!(refined.validate().is_ok());
        prop_assert_eq!(refined.len(), f.len() + 1);
        prop_assert!(eq(&refined, &f) && eq(&f, &refined));
        prop_assert!(agree_on_grid(&refined, &f, 3));
    }

    #[test]
    fn equality_ignores_refinement((f, g) in same_dim_pair(), piece in any::<prop::sample::Index>()) {
        let before = eq(&f, &g);
        let g2 = g.refine_piece(piece.index(g.len()), 0).unwrap();
        prop_assert_eq!(eq(&f, &g2), before);
        prop_assert_eq!(eq(&g2, &f), before);
        if before {
            prop_assert!(agree_on_grid(&f, &g, 3));
        }
    }

    #[test]
    fn reduce_keeps_the_map_and_is_idempotent(f in element_any_dim()) {
        let r = f.reduce();
        prop_assert!(r.validate().is_ok());
        prop_assert!(r.len() <= f.len());
        prop_assert!(eq(&r, &f));
        prop_assert_eq!(r.reduce(), r);
    }

    #[test]
    fn text_round_trip(f in element_any_dim()) {
        prop_assert_eq!(f.to_string().parse::<Element>().unwrap(), f);
    }
}

#[test]
fn swap_of_halves() {
    let f = el1(&[("0", "1"), ("1", "0")]);
    let x = Point(vec![Dyadic::new(1u32, 2)]);
    assert_eq!(f.apply(&x).unwrap(), Point(vec![Dyadic::new(3u32, 2)]));
    assert!(!eq(&f, &Element::identity(1)));
    assert!(f.compose(&f).unwrap().is_identity());
}

#[test]
fn squaring_a_contraction_obeys_the_point_law() {
    let f = el1(&[("0", "00"), ("10", "01"), ("11", "1")]);
    let ff = f.compose(&f).unwrap();
    let (of, off) = (Oracle::new(&f), Oracle::new(&ff));
    for x in grid(1, 6) {
        assert_eq!(off.apply(&x), of.apply(&of.apply(&x)));
    }
    assert!(eq(&ff.reduce(), &ff));
}

#[test]
fn refining_the_identity() {
    let two = Element::identity(1).refine_piece(0, 0).unwrap();
    assert_eq!(two, el1(&[("0", "0"), ("1", "1")]));
    assert!(eq(&two, &Element::identity(1)));
    assert_eq!(two.reduce(), Element::identity(1));
    assert!(Element::identity(1).refine_piece(1, 0).is_err());
    assert!(Element::identity(1).refine_piece(0, 1).is_err());
}

#[test]
fn inverse_of_identity() {
    for n in 1..=3 {
        assert_eq!(Element::identity(n).inverse(), Element::identity(n));
    }
}
