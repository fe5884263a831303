//! Generalized cylinders `Z(x, F)` and a falsifier for convergence claims.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::point::{join, Letter, Point, Sym};
use crate::shiftspace::ShiftPresentation;
use crate::symset::SymSet;

/// Points extending `base` whose next coordinate is not in `excluded`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub base: Vec<Sym>,
    /// Sorted, duplicate-free.
    pub excluded: Vec<Sym>,
}

impl Cylinder {
    pub fn new(base: impl Into<Vec<Sym>>, excluded: impl IntoIterator<Item = Sym>) -> Self {
        let mut excluded: Vec<Sym> = excluded.into_iter().collect();
        excluded.sort_unstable();
        excluded.dedup();
        Cylinder { base: base.into(), excluded }
    }

    pub fn of_word(base: impl Into<Vec<Sym>>) -> Self {
        Self::new(base, [])
    }

    pub fn whole() -> Self {
        Self::new(Vec::new(), [])
    }

    pub fn excluded_set(&self) -> SymSet {
        self.excluded.iter().copied().collect()
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.base.is_empty() { String::new() } else { format!("[{}]", join(&self.base, |a| a.to_string())) };
        if self.excluded.is_empty() {
            write!(f, "Z({base})")
        } else {
            let sep = if base.is_empty() { "; " } else { " ; " };
            write!(f, "Z({base}{sep}{{{}}})", join(&self.excluded, |a| a.to_string()))
        }
    }
}

pub fn cyl_contains(c: &Cylinder, p: &Point) -> bool {
    let agrees = c.base.iter().enumerate().all(|(i, &a)| p.at(i + 1) == Letter::Sym(a));
    agrees
        && match p.at(c.base.len() + 1) {
            Letter::Sym(a) => c.excluded.binary_search(&a).is_err(),
            Letter::Empty => true,
        }
}

pub fn cyl_length(c: &Cylinder) -> usize {
    c.base.len() + usize::from(!c.excluded.is_empty())
}

/// Basic neighbourhoods of `p`. For an infinite point: the cylinders of its
/// prefixes of length `1..=max_len`. For a finite point: `Z(p, F)` for every
/// `F` of at most `max_excl` letters taken from the first `max_excl` letters
/// of the shift (or of the naturals), plus cylinders of its shorter prefixes.
pub fn basic_nbhds(
    p: &Point,
    max_len: usize,
    max_excl: usize,
    shift: Option<&ShiftPresentation>,
) -> Vec<Cylinder> {
    match p {
        Point::Evp { .. } => (1..=max_len).map(|k| Cylinder::of_word(p.prefix(k))).collect(),
        Point::Finite(w) => {
            let letters = shift.map_or_else(|| SymSet::at_least(1), |s| s.letters().clone());
            let pool: Vec<Sym> = match letters.elements() {
                Some(e) => e.into_iter().take(max_excl).collect(),
                None => letters.nearest(0, max_excl),
            };
            let mut out = Vec::new();
            for mask in 0u64..(1u64 << pool.len().min(16)) {
                let f: Vec<Sym> = pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
                if f.len() <= max_excl {
                    out.push(Cylinder::new(w.clone(), f));
                }
            }
            for k in 1..w.len().min(max_len + 1) {
                out.push(Cylinder::of_word(w[..k].to_vec()));
            }
            out
        }
    }
}

type Generator = dyn Fn(usize) -> std::result::Result<Point, String> + Send + Sync;

/// A sequence of points `i -> x^i` (indices from 1) with a claimed limit.
#[derive(Clone)]
pub struct PointFamily {
    pub name: String,
    pub generator: Arc<Generator>,
    pub claimed_limit: Point,
}

impl fmt::Debug for PointFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointFamily({}, limit {})", self.name, self.claimed_limit)
    }
}

impl PointFamily {
    pub fn new(
        name: impl Into<String>,
        claimed_limit: Point,
        generator: impl Fn(usize) -> std::result::Result<Point, String> + Send + Sync + 'static,
    ) -> Self {
        PointFamily { name: name.into(), generator: Arc::new(generator), claimed_limit }
    }

    pub fn member(&self, i: usize) -> Result<Point> {
        (self.generator)(i).map_err(|reason| Error::Generator { index: i, reason })
    }

    /// The family `i -> f(x^i)` with claimed limit `f(limit)`.
    pub fn push_forward(
        &self,
        f: impl Fn(&Point) -> Result<Point> + Send + Sync + Clone + 'static,
    ) -> Result<PointFamily> {
        let limit = f(&self.claimed_limit)?;
        let inner = self.generator.clone();
        Ok(PointFamily {
            name: format!("image of {}", self.name),
            claimed_limit: limit,
            generator: Arc::new(move |i| {
                let x = inner(i)?;
                f(&x).map_err(|e| e.to_string())
            }),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Convergence {
    Consistent,
    /// The cylinder contains the claimed limit, but the member at `index`
    /// and at least half of the members between `index / 2` and `index` lie
    /// outside it.
    Refuted { cylinder: Cylinder, index: usize },
}

impl Convergence {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Convergence::Refuted { .. })
    }
}

/// Looks for a neighbourhood of the claimed limit that the family keeps
/// leaving. A refutation is evidence, not proof, of non-convergence; a
/// consistent verdict proves nothing.
pub fn check_convergence(f: &PointFamily, nbhd_budget: usize, index_budget: usize) -> Result<Convergence> {
    check_convergence_with(f, nbhd_budget, index_budget, Exec::default())
}

pub fn check_convergence_with(
    f: &PointFamily,
    nbhd_budget: usize,
    index_budget: usize,
    exec: Exec,
) -> Result<Convergence> {
    if nbhd_budget == 0 || index_budget == 0 {
        return Err(Error::Precondition("budgets must be positive".into()));
    }
    let indices: Vec<usize> = (1..=index_budget).collect();
    let members: Vec<Result<Point>> = par::map(exec, &indices, |&i| f.member(i));
    let members: Vec<Point> = members.into_iter().collect::<Result<_>>()?;
    let limit = &f.claimed_limit;
    let last = &members[index_budget - 1];

    let mut candidates = basic_nbhds(limit, nbhd_budget, 2, None);
    if let Point::Finite(w) = limit {
        candidates.push(Cylinder::of_word(w.clone()));
        if let Letter::Sym(a) = last.at(w.len() + 1) {
            candidates.push(Cylinder::new(w.clone(), [a]));
        }
    }
    let lo = (index_budget / 2).max(1);
    let tail = &members[lo - 1..];
    for c in candidates {
        debug_assert!(cyl_contains(&c, limit));
        if cyl_contains(&c, last) {
            continue;
        }
        let outside = tail.iter().filter(|x| !cyl_contains(&c, x)).count();
        if 2 * outside >= tail.len() {
            return Ok(Convergence::Refuted { cylinder: c, index: index_budget });
        }
    }
    Ok(Convergence::Consistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn membership_examples() {
        assert!(cyl_contains(&Cylinder::whole(), &Point::evp(vec![4], vec![1, 2])));
        assert!(!cyl_contains(&Cylinder::new(vec![], [1, 2]), &Point::finite(vec![2])));
        assert!(cyl_contains(&Cylinder::of_word(vec![1]), &Point::evp(vec![1], vec![5])));
        // a finite point of length |base| belongs even with exclusions
        assert!(cyl_contains(&Cylinder::new(vec![1], [5]), &Point::finite(vec![1])));
    }

    #[test]
    fn length_examples() {
        assert_eq!(cyl_length(&Cylinder::of_word(vec![1, 2])), 2);
        assert_eq!(cyl_length(&Cylinder::new(vec![1, 2], [9])), 3);
        assert_eq!(cyl_length(&Cylinder::whole()), 0);
    }

    #[test]
    fn display() {
        assert_eq!(Cylinder::new(vec![1, 2], [4, 3]).to_string(), "Z([1,2] ; {3,4})");
        assert_eq!(Cylinder::of_word(vec![1, 2]).to_string(), "Z([1,2])");
        assert_eq!(Cylinder::new(vec![], [3]).to_string(), "Z(; {3})");
        assert_eq!(Cylinder::whole().to_string(), "Z()");
    }

    #[test]
    fn neighbourhood_examples() {
        let n = basic_nbhds(&Point::empty(), 0, 2, None);
        assert!(n.contains(&Cylinder::new(vec![], [1])));
        assert!(n.contains(&Cylinder::new(vec![], [2])));
        let n = basic_nbhds(&Point::evp(vec![], vec![1]), 3, 0, None);
        assert_eq!(n, vec![Cylinder::of_word(vec![1]), Cylinder::of_word(vec![1, 1]), Cylinder::of_word(vec![1, 1, 1])]);
        let n = basic_nbhds(&Point::finite(vec![2]), 1, 1, None);
        assert!(n.contains(&Cylinder::new(vec![2], [1])));
        let p = Point::finite(vec![3, 4]);
        assert!(basic_nbhds(&p, 3, 3, None).iter().all(|c| cyl_contains(c, &p)));
    }

    #[test]
    fn convergence_examples() {
        let escaping = PointFamily::new("i", Point::empty(), |i| Ok(Point::finite(vec![i as Sym])));
        assert_eq!(check_convergence(&escaping, 4, 64).unwrap(), Convergence::Consistent);
        let constant = PointFamily::new("1^inf", Point::empty(), |_| Ok(Point::evp(vec![], vec![1])));
        match check_convergence(&constant, 4, 64).unwrap() {
            Convergence::Refuted { cylinder, .. } => assert_eq!(cylinder, Cylinder::new(vec![], [1])),
            v => panic!("{v:?}"),
        }
        let tails = PointFamily::new("1i", Point::finite(vec![1]), |i| Ok(Point::finite(vec![1, i as Sym])));
        assert_eq!(check_convergence(&tails, 4, 64).unwrap(), Convergence::Consistent);
        let prefixes = PointFamily::new("1^i 2", Point::evp(vec![], vec![1]), |i| {
            Ok(Point::evp(vec![1; i], vec![2]))
        });
        assert_eq!(check_convergence(&prefixes, 4, 64).unwrap(), Convergence::Consistent);
    }

    #[test]
    fn generator_failure_is_an_error() {
        let bad = PointFamily::new("bad", Point::empty(), |i| if i == 3 { Err("boom".into()) } else { Ok(Point::empty()) });
        assert!(matches!(check_convergence(&bad, 1, 5), Err(Error::Generator { index: 3, .. })));
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        let w = prop::collection::vec(1i64..5, 0..6);
        prop_oneof![
            w.clone().prop_map(Point::finite),
            (w, prop::collection::vec(1i64..5, 1..4)).prop_map(|(a, b)| Point::evp(a, b)),
        ]
    }

    proptest! {
        #[test]
        fn prefix_cylinders_contain_point(p in arb_point(), k in 0usize..10) {
            let k = match p.length() { crate::point::Length::Finite(l) => k.min(l), _ => k };
            prop_assert!(cyl_contains(&Cylinder::of_word(p.prefix(k)), &p));
            prop_assert!(cyl_contains(&Cylinder::whole(), &p));
        }

        #[test]
        fn longer_cylinders_are_smaller(
            base in prop::collection::vec(1i64..4, 0..3),
            ext in prop::collection::vec(1i64..4, 0..3),
            f in prop::collection::vec(1i64..4, 0..2),
            g in prop::collection::vec(1i64..4, 0..2),
            p in arb_point(),
        ) {
            let small_base: Vec<Sym> = base.iter().chain(ext.iter()).copied().collect();
            let big = Cylinder::new(base.clone(), f.clone());
            let small = Cylinder::new(small_base, f.iter().chain(g.iter()).copied());
            // the longer base must pass through the shorter cylinder
            prop_assume!(ext.is_empty() || !f.contains(&ext[0]));
            if cyl_contains(&small, &p) {
                prop_assert!(cyl_contains(&big, &p));
            }
        }
    }
}
