//! Sets of symbols as finite unions of integer intervals.
//!
//! Every alphabet in this crate is a subset of the integers, so the letter
//! sets that show up in follower sets, trie guards and excluded sets are all
//! representable as sorted, disjoint, non-adjacent closed intervals. The
//! bounds `i64::MIN` and `i64::MAX` stand for minus and plus infinity.

use std::fmt;

use crate::point::{Letter, Sym};

pub const NEG_INF: Sym = i64::MIN;
pub const POS_INF: Sym = i64::MAX;

/// A set of symbols. Intervals are inclusive, sorted and merged.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymSet {
    spans: Vec<(Sym, Sym)>,
}

impl SymSet {
    pub fn empty() -> Self {
        SymSet { spans: Vec::new() }
    }

    pub fn all() -> Self {
        SymSet { spans: vec![(NEG_INF, POS_INF)] }
    }

    pub fn range(lo: Sym, hi: Sym) -> Self {
        if lo > hi {
            Self::empty()
        } else {
            SymSet { spans: vec![(lo, hi)] }
        }
    }

    pub fn at_least(lo: Sym) -> Self {
        Self::range(lo, POS_INF)
    }

    pub fn at_most(hi: Sym) -> Self {
        Self::range(NEG_INF, hi)
    }

    pub fn singleton(a: Sym) -> Self {
        Self::range(a, a)
    }

    pub fn from_spans(spans: impl IntoIterator<Item = (Sym, Sym)>) -> Self {
        let mut v: Vec<(Sym, Sym)> = spans.into_iter().filter(|(a, b)| a <= b).collect();
        v.sort();
        let mut out: Vec<(Sym, Sym)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            if let Some(last) = out.last_mut() {
                if lo <= last.1.saturating_add(1) {
                    last.1 = last.1.max(hi);
                    continue;
                }
            }
            out.push((lo, hi));
        }
        SymSet { spans: out }
    }

    pub fn spans(&self) -> &[(Sym, Sym)] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn contains(&self, a: Sym) -> bool {
        // spans are sorted, binary search on the lower bound
        let idx = self.spans.partition_point(|&(lo, _)| lo <= a);
        idx > 0 && self.spans[idx - 1].1 >= a
    }

    pub fn is_finite(&self) -> bool {
        self.spans.iter().all(|&(lo, hi)| lo != NEG_INF && hi != POS_INF)
    }

    /// Number of elements, `None` when infinite.
    pub fn count(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        Some(
            self.spans
                .iter()
                .map(|&(lo, hi)| (hi as i128 - lo as i128 + 1) as u64)
                .sum(),
        )
    }

    pub fn min(&self) -> Option<Sym> {
        self.spans.first().and_then(|&(lo, _)| (lo != NEG_INF).then_some(lo))
    }

    pub fn max(&self) -> Option<Sym> {
        self.spans.last().and_then(|&(_, hi)| (hi != POS_INF).then_some(hi))
    }

    pub fn bounded_below(&self) -> bool {
        self.is_empty() || self.spans[0].0 != NEG_INF
    }

    pub fn bounded_above(&self) -> bool {
        self.is_empty() || self.spans[self.spans.len() - 1].1 != POS_INF
    }

    pub fn union(&self, other: &SymSet) -> SymSet {
        SymSet::from_spans(self.spans.iter().chain(other.spans.iter()).copied())
    }

    pub fn intersect(&self, other: &SymSet) -> SymSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.spans.len() && j < other.spans.len() {
            let (a0, a1) = self.spans[i];
            let (b0, b1) = other.spans[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        SymSet { spans: out }
    }

    pub fn complement(&self) -> SymSet {
        let mut out = Vec::new();
        let mut cursor = Some(NEG_INF);
        for &(lo, hi) in &self.spans {
            if let Some(c) = cursor {
                if lo > c {
                    out.push((c, lo - 1));
                }
            }
            cursor = if hi == POS_INF { None } else { Some(hi + 1) };
        }
        if let Some(c) = cursor {
            out.push((c, POS_INF));
        }
        SymSet { spans: out }
    }

    pub fn difference(&self, other: &SymSet) -> SymSet {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &SymSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn intersects(&self, other: &SymSet) -> bool {
        !self.intersect(other).is_empty()
    }

    /// Translate every element by `by`; infinite ends stay infinite.
    pub fn offset(&self, by: i64) -> SymSet {
        let mv = |x: Sym| match x {
            NEG_INF | POS_INF => x,
            _ => x.saturating_add(by).clamp(NEG_INF + 1, POS_INF - 1),
        };
        SymSet::from_spans(self.spans.iter().map(|&(lo, hi)| (mv(lo), mv(hi))))
    }

    /// Elements of a finite set in increasing order.
    pub fn elements(&self) -> Option<Vec<Sym>> {
        if !self.is_finite() {
            return None;
        }
        Some(self.spans.iter().flat_map(|&(lo, hi)| lo..=hi).collect())
    }

    /// Up to `n` elements ordered by distance to `center` (ties: smaller first).
    pub fn nearest(&self, center: Sym, n: usize) -> Vec<Sym> {
        let mut cands = Vec::new();
        for &(lo, hi) in &self.spans {
            let c = center.clamp(lo, hi);
            let lo_w = c.saturating_sub(n as i64).max(lo);
            let hi_w = c.saturating_add(n as i64).min(hi);
            cands.extend(lo_w..=hi_w);
        }
        cands.sort_by_key(|&x| ((x as i128 - center as i128).abs(), x));
        cands.dedup();
        cands.truncate(n);
        cands
    }

    /// The `i`-th element (0-based) of a sequence of distinct elements that
    /// leaves every finite set. `upward` selects the direction when the set
    /// is unbounded both ways. Returns `None` if the set is bounded in the
    /// requested direction.
    pub fn escaping(&self, i: u64, upward: bool) -> Option<Sym> {
        if upward {
            let &(lo, hi) = self.spans.last()?;
            if hi != POS_INF {
                return None;
            }
            let base = if lo == NEG_INF { 0 } else { lo };
            Some(base.saturating_add(i as i64))
        } else {
            let &(lo, hi) = self.spans.first()?;
            if lo != NEG_INF {
                return None;
            }
            let base = if hi == POS_INF { 0 } else { hi };
            Some(base.saturating_sub(i as i64))
        }
    }

    /// Directions in which the set is unbounded: `true` for up, `false` for down.
    pub fn escape_directions(&self) -> Vec<bool> {
        let mut d = Vec::new();
        if !self.bounded_above() {
            d.push(true);
        }
        if !self.bounded_below() {
            d.push(false);
        }
        d
    }

    /// Points where membership changes, used to pick class representatives.
    pub fn boundaries(&self) -> Vec<Sym> {
        let mut b = Vec::new();
        for &(lo, hi) in &self.spans {
            if lo != NEG_INF {
                b.push(lo);
                b.push(lo - 1);
            }
            if hi != POS_INF {
                b.push(hi);
                b.push(hi + 1);
            }
        }
        b
    }
}

impl FromIterator<Sym> for SymSet {
    fn from_iter<T: IntoIterator<Item = Sym>>(iter: T) -> Self {
        SymSet::from_spans(iter.into_iter().map(|a| (a, a)))
    }
}

impl fmt::Debug for SymSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SymSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &(lo, hi)) in self.spans.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match (lo, hi) {
                (NEG_INF, POS_INF) => write!(f, "..")?,
                (NEG_INF, h) => write!(f, "..{h}")?,
                (l, POS_INF) => write!(f, "{l}..")?,
                (l, h) if l == h => write!(f, "{l}")?,
                (l, h) => write!(f, "{l}..{h}")?,
            }
        }
        write!(f, "}}")
    }
}

/// A set of letters: symbols plus possibly the empty letter.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LetterSet {
    pub syms: SymSet,
    pub empty: bool,
}

impl LetterSet {
    pub fn none() -> Self {
        LetterSet { syms: SymSet::empty(), empty: false }
    }

    pub fn everything() -> Self {
        LetterSet { syms: SymSet::all(), empty: true }
    }

    pub fn only_empty() -> Self {
        LetterSet { syms: SymSet::empty(), empty: true }
    }

    pub fn of_syms(syms: SymSet) -> Self {
        LetterSet { syms, empty: false }
    }

    pub fn letter(l: Letter) -> Self {
        match l {
            Letter::Sym(a) => Self::of_syms(SymSet::singleton(a)),
            Letter::Empty => Self::only_empty(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty() && !self.empty
    }

    pub fn contains(&self, l: &Letter) -> bool {
        match l {
            Letter::Sym(a) => self.syms.contains(*a),
            Letter::Empty => self.empty,
        }
    }

    pub fn union(&self, o: &LetterSet) -> LetterSet {
        LetterSet { syms: self.syms.union(&o.syms), empty: self.empty || o.empty }
    }

    pub fn intersect(&self, o: &LetterSet) -> LetterSet {
        LetterSet { syms: self.syms.intersect(&o.syms), empty: self.empty && o.empty }
    }

    pub fn complement(&self) -> LetterSet {
        LetterSet { syms: self.syms.complement(), empty: !self.empty }
    }

    pub fn difference(&self, o: &LetterSet) -> LetterSet {
        self.intersect(&o.complement())
    }

    pub fn is_subset(&self, o: &LetterSet) -> bool {
        self.difference(o).is_empty()
    }

    /// One member of the set, preferring symbols close to zero.
    pub fn representative(&self) -> Option<Letter> {
        if let Some(&a) = self.syms.nearest(0, 1).first() {
            return Some(Letter::Sym(a));
        }
        self.empty.then_some(Letter::Empty)
    }
}

impl fmt::Display for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            write!(f, "{}+empty", self.syms)
        } else {
            write!(f, "{}", self.syms)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_set() -> impl Strategy<Value = SymSet> {
        prop::collection::vec((-20i64..20, 0i64..6, any::<bool>(), any::<bool>()), 0..4).prop_map(
            |v| {
                SymSet::from_spans(v.into_iter().map(|(lo, len, ninf, pinf)| {
                    (if ninf && lo < -15 { NEG_INF } else { lo }, if pinf && lo > 15 { POS_INF } else { lo + len })
                }))
            },
        )
    }

    proptest! {
        #[test]
        fn algebra_matches_pointwise(a in small_set(), b in small_set()) {
            let u = a.union(&b);
            let i = a.intersect(&b);
            let c = a.complement();
            for x in -40i64..40 {
                prop_assert_eq!(u.contains(x), a.contains(x) || b.contains(x));
                prop_assert_eq!(i.contains(x), a.contains(x) && b.contains(x));
                prop_assert_eq!(c.contains(x), !a.contains(x));
            }
            prop_assert_eq!(c.complement(), a);
        }
    }

    #[test]
    fn finiteness_and_count() {
        assert_eq!(SymSet::range(1, 5).count(), Some(5));
        assert!(!SymSet::at_least(1).is_finite());
        assert_eq!(SymSet::at_least(3).complement(), SymSet::at_most(2));
        assert!(SymSet::all().complement().is_empty());
        assert_eq!(SymSet::empty().complement(), SymSet::all());
    }

    #[test]
    fn offset_keeps_infinite_ends() {
        let s = SymSet::at_least(4).offset(-1);
        assert_eq!(s, SymSet::at_least(3));
        assert_eq!(SymSet::at_most(-2).offset(1), SymSet::at_most(-1));
    }

    #[test]
    fn escaping_sequences() {
        let s = SymSet::at_least(5);
        assert_eq!(s.escaping(0, true), Some(5));
        assert_eq!(s.escaping(3, true), Some(8));
        assert_eq!(s.escaping(0, false), None);
        assert_eq!(SymSet::all().escape_directions(), vec![true, false]);
    }

    #[test]
    fn nearest_prefers_center() {
        assert_eq!(SymSet::at_least(1).nearest(0, 3), vec![1, 2, 3]);
        assert_eq!(SymSet::all().nearest(0, 3), vec![0, -1, 1]);
    }
}
