//! Invariants over generated inputs.

use proptest::prelude::*;

use cshift::fds::{cylinders_to_trie, trie_complement, trie_intersect, trie_to_cylinders, trie_union};
use cshift::gallery::{self, Params};
use cshift::hbc::{xi, xi_inverse};
use cshift::point::{Length, Point, Sym};
use cshift::text;
use cshift::topology::{cyl_contains, Cylinder};

fn word(max: usize) -> impl Strategy<Value = Vec<Sym>> {
    prop::collection::vec(-4i64..10, 0..=max)
}

fn point() -> impl Strategy<Value = Point> {
    prop_oneof![
        word(6).prop_map(Point::finite),
        (word(4), prop::collection::vec(-4i64..10, 1..=3)).prop_map(|(a, b)| Point::evp(a, b)),
    ]
}

fn cylinder() -> impl Strategy<Value = Cylinder> {
    (word(3), prop::collection::vec(-2i64..7, 0..=2)).prop_map(|(b, e)| Cylinder::new(b, e))
}

/// A point of gallery shift `h`: a descent from a start letter, then
/// letters up to `k`.
fn h_point() -> impl Strategy<Value = Point> {
    (2i64..12, prop::collection::vec(1i64..=2, 0..6), prop::collection::vec(1i64..=2, 1..4)).prop_map(
        |(start, low, period)| {
            let mut pre: Vec<Sym> = (2..=start).rev().collect();
            pre.extend(low);
            Point::evp(pre, period)
        },
    )
}

proptest! {
    #[test]
    fn shift_is_drop_first(p in point()) {
        let q = p.shift();
        for n in 1..12 {
            prop_assert_eq!(q.at(n), p.at(n + 1));
        }
    }

    #[test]
    fn point_text_roundtrip(p in point()) {
        let back = text::parse_point(&p.to_string()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn cylinder_union_trie_agrees(cs in prop::collection::vec(cylinder(), 1..4), p in point()) {
        let t = cylinders_to_trie(&cs);
        let direct = cs.iter().any(|c| cyl_contains(c, &p));
        prop_assert_eq!(*t.eval(&p), direct);
        let back = trie_to_cylinders(&t).unwrap();
        prop_assert_eq!(back.iter().any(|c| cyl_contains(c, &p)), direct);
    }

    #[test]
    fn de_morgan(a in prop::collection::vec(cylinder(), 1..3), b in prop::collection::vec(cylinder(), 1..3), p in point()) {
        let (x, y) = (cylinders_to_trie(&a), cylinders_to_trie(&b));
        let lhs = trie_complement(&trie_union(&x, &y));
        let rhs = trie_intersect(&trie_complement(&x), &trie_complement(&y));
        prop_assert_eq!(*lhs.eval(&p), *rhs.eval(&p));
        prop_assert_eq!(*trie_complement(&trie_complement(&x)).eval(&p), *x.eval(&p));
    }

    #[test]
    fn xi_roundtrip_and_commute(p in point(), m in 1usize..4) {
        prop_assume!(p.length() >= Length::Finite(m));
        let q = xi(m, &p).unwrap();
        prop_assert_eq!(xi_inverse(m, &q).unwrap(), p.clone());
        if p.shift().length() >= Length::Finite(m) {
            prop_assert_eq!(xi(m, &p.shift()).unwrap(), q.shift());
        }
    }

    #[test]
    fn h_commutes_with_shift(p in h_point()) {
        let code = gallery::code_h(Params::default()).unwrap();
        prop_assert!(code.domain.contains_point(&p));
        let lhs = code.apply(&p.shift()).unwrap();
        let rhs = code.apply(&p).unwrap().shift();
        prop_assert_eq!(lhs, rhs);
    }
}
