//! One-step transition rules over infinite alphabets.
//!
//! Several interesting shifts need infinitely many forbidden words, so they
//! are given by a transition relation instead. Every rule answers follower and
//! predecessor queries exactly, both for single letters and for whole letter
//! sets; the set versions are what make reachability over an infinite
//! alphabet decidable.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::point::{Alphabet, Sym};
use crate::symset::SymSet;

pub trait EdgeRule: Send + Sync + fmt::Debug {
    /// Text form used by the literal grammar.
    fn literal(&self) -> String;

    /// Letters that occur in some infinite point.
    fn letters(&self) -> SymSet;

    /// Letters `b` with `ab` admissible, restricted to `letters()`.
    fn follower(&self, a: Sym) -> SymSet;

    fn predecessor(&self, b: Sym) -> SymSet;

    /// Union of `follower(a)` over `a` in `s`.
    fn followers_of_set(&self, s: &SymSet) -> SymSet;

    fn predecessors_of_set(&self, s: &SymSet) -> SymSet;

    /// Letters whose follower set is infinite.
    fn iep_letters(&self) -> SymSet;

    /// Letters where the rule changes behaviour.
    fn explicit_letters(&self) -> Vec<Sym>;

    /// Whether the set of forbidden two-letter words is finite.
    fn forbidden_pairs_finite(&self) -> bool {
        false
    }

    fn allows(&self, a: Sym, b: Sym) -> bool {
        self.follower(a).contains(b)
    }
}

#[cfg(test)]
fn union_over_finite(s: &SymSet, f: impl Fn(Sym) -> SymSet) -> SymSet {
    s.elements()
        .expect("finite set")
        .into_iter()
        .fold(SymSet::empty(), |acc, a| acc.union(&f(a)))
}

/// `A = N` partitioned into blocks `{2i-1, 2i}`; a letter may only be
/// followed by a letter of its own block.
#[derive(Debug, Clone, Copy)]
pub struct Blocks;

fn block_of(a: Sym) -> SymSet {
    let i = (a + 1).div_euclid(2);
    SymSet::range(2 * i - 1, 2 * i)
}

impl Blocks {
    fn blocks_meeting(s: &SymSet) -> SymSet {
        let s = s.intersect(&SymSet::at_least(1));
        SymSet::from_spans(s.spans().iter().map(|&(lo, hi)| {
            let l = block_of(lo).min().unwrap();
            let h = if hi == crate::symset::POS_INF { hi } else { block_of(hi).max().unwrap() };
            (l, h)
        }))
    }
}

impl EdgeRule for Blocks {
    fn literal(&self) -> String {
        "gallery:b".into()
    }
    fn letters(&self) -> SymSet {
        SymSet::at_least(1)
    }
    fn follower(&self, a: Sym) -> SymSet {
        if a < 1 {
            return SymSet::empty();
        }
        block_of(a)
    }
    fn predecessor(&self, b: Sym) -> SymSet {
        self.follower(b)
    }
    fn followers_of_set(&self, s: &SymSet) -> SymSet {
        Self::blocks_meeting(s)
    }
    fn predecessors_of_set(&self, s: &SymSet) -> SymSet {
        Self::blocks_meeting(s)
    }
    fn iep_letters(&self) -> SymSet {
        SymSet::empty()
    }
    fn explicit_letters(&self) -> Vec<Sym> {
        vec![1, 2, 3]
    }
}

/// `A = N`, `x_{i+1} >= x_i - 1`.
#[derive(Debug, Clone, Copy)]
pub struct Drift;

impl EdgeRule for Drift {
    fn literal(&self) -> String {
        "gallery:c".into()
    }
    fn letters(&self) -> SymSet {
        SymSet::at_least(1)
    }
    fn follower(&self, a: Sym) -> SymSet {
        if a < 1 {
            return SymSet::empty();
        }
        SymSet::at_least((a - 1).max(1))
    }
    fn predecessor(&self, b: Sym) -> SymSet {
        if b < 1 {
            return SymSet::empty();
        }
        SymSet::range(1, b + 1)
    }
    fn followers_of_set(&self, s: &SymSet) -> SymSet {
        match s.intersect(&self.letters()).spans().first() {
            Some(&(lo, _)) => self.follower(lo),
            None => SymSet::empty(),
        }
    }
    fn predecessors_of_set(&self, s: &SymSet) -> SymSet {
        let s = s.intersect(&self.letters());
        if s.is_empty() {
            return SymSet::empty();
        }
        match s.max() {
            Some(m) => SymSet::range(1, m + 1),
            None => SymSet::at_least(1),
        }
    }
    fn iep_letters(&self) -> SymSet {
        SymSet::at_least(1)
    }
    fn explicit_letters(&self) -> Vec<Sym> {
        vec![1, 2]
    }
}

/// The transition rules of the signed example: `a <= -2` is followed by
/// `a + 1`, `-1` by any `b >= 0`, and `a >= 0` by itself. `top` bounds the
/// alphabet from above when present.
#[derive(Debug, Clone, Copy)]
pub struct Climb {
    pub top: Option<Sym>,
}

impl Climb {
    fn cap(&self) -> SymSet {
        match self.top {
            Some(k) => SymSet::at_most(k),
            None => SymSet::all(),
        }
    }
}

impl EdgeRule for Climb {
    fn literal(&self) -> String {
        match self.top {
            None => "gallery:f".into(),
            Some(k) => format!("gallery:g(k={k})"),
        }
    }
    fn letters(&self) -> SymSet {
        self.cap()
    }
    fn follower(&self, a: Sym) -> SymSet {
        if !self.cap().contains(a) {
            return SymSet::empty();
        }
        let f = if a <= -2 {
            SymSet::singleton(a + 1)
        } else if a == -1 {
            SymSet::at_least(0)
        } else {
            SymSet::singleton(a)
        };
        f.intersect(&self.cap())
    }
    fn predecessor(&self, b: Sym) -> SymSet {
        if !self.cap().contains(b) {
            return SymSet::empty();
        }
        if b <= -1 {
            SymSet::singleton(b - 1)
        } else {
            [-1, b].into_iter().collect()
        }
    }
    fn followers_of_set(&self, s: &SymSet) -> SymSet {
        let s = s.intersect(&self.cap());
        let mut out = s.intersect(&SymSet::at_most(-2)).offset(1);
        out = out.union(&s.intersect(&SymSet::at_least(0)));
        if s.contains(-1) {
            out = out.union(&SymSet::at_least(0));
        }
        out.intersect(&self.cap())
    }
    fn predecessors_of_set(&self, s: &SymSet) -> SymSet {
        let s = s.intersect(&self.cap());
        let nonneg = s.intersect(&SymSet::at_least(0));
        let mut out = s.intersect(&SymSet::at_most(-1)).offset(-1).union(&nonneg);
        if !nonneg.is_empty() {
            out = out.union(&SymSet::singleton(-1));
        }
        out
    }
    fn iep_letters(&self) -> SymSet {
        match self.top {
            None => SymSet::singleton(-1),
            Some(_) => SymSet::empty(),
        }
    }
    fn explicit_letters(&self) -> Vec<Sym> {
        let mut v = vec![-2, -1, 0, 1];
        if let Some(k) = self.top {
            v.push(k);
        }
        v
    }
}

/// `A = N`; a letter above `k` is followed by its predecessor. A letter at
/// most `k` is followed by anything (`Descend::Free`) or by letters below `k`
/// (`Descend::Below`).
#[derive(Debug, Clone, Copy)]
pub struct Descend {
    pub k: Sym,
    pub below: bool,
}

impl Descend {
    pub fn free(k: Sym) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidPresentation(format!("k must be positive, got {k}")));
        }
        Ok(Descend { k, below: false })
    }

    /// Needs `k >= 2` so that the low letters still have followers.
    pub fn below(k: Sym) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidPresentation(format!("k must be at least 2, got {k}")));
        }
        Ok(Descend { k, below: true })
    }

    fn low_targets(&self) -> SymSet {
        if self.below {
            SymSet::range(1, self.k - 1)
        } else {
            SymSet::at_least(1)
        }
    }
}

impl EdgeRule for Descend {
    fn literal(&self) -> String {
        if self.below {
            format!("gallery:i(k={})", self.k)
        } else {
            format!("gallery:h(k={})", self.k)
        }
    }
    fn letters(&self) -> SymSet {
        SymSet::at_least(1)
    }
    fn follower(&self, a: Sym) -> SymSet {
        if a < 1 {
            SymSet::empty()
        } else if a > self.k {
            SymSet::singleton(a - 1)
        } else {
            self.low_targets()
        }
    }
    fn predecessor(&self, b: Sym) -> SymSet {
        if b < 1 {
            return SymSet::empty();
        }
        let mut out = if b + 1 > self.k { SymSet::singleton(b + 1) } else { SymSet::empty() };
        if self.low_targets().contains(b) {
            out = out.union(&SymSet::range(1, self.k));
        }
        out
    }
    fn followers_of_set(&self, s: &SymSet) -> SymSet {
        let s = s.intersect(&self.letters());
        let mut out = s.intersect(&SymSet::at_least(self.k + 1)).offset(-1);
        if s.intersects(&SymSet::range(1, self.k)) {
            out = out.union(&self.low_targets());
        }
        out
    }
    fn predecessors_of_set(&self, s: &SymSet) -> SymSet {
        let s = s.intersect(&self.letters());
        let mut out = s.intersect(&SymSet::at_least(self.k)).offset(1);
        if s.intersects(&self.low_targets()) {
            out = out.union(&SymSet::range(1, self.k));
        }
        out
    }
    fn iep_letters(&self) -> SymSet {
        if self.below {
            SymSet::empty()
        } else {
            SymSet::range(1, self.k)
        }
    }
    fn explicit_letters(&self) -> Vec<Sym> {
        (1..=self.k + 1).collect()
    }
}

/// A transition table over finitely many letter classes. Letters not listed
/// in any class form the remainder class `rest`. A pair of classes is either
/// fully allowed or fully forbidden.
#[derive(Debug, Clone)]
pub struct ClassTable {
    names: Vec<String>,
    classes: Vec<SymSet>,
    allowed: Vec<Vec<bool>>,
    alive: Vec<bool>,
}

impl ClassTable {
    /// `classes` must be pairwise disjoint subsets of the alphabet; the
    /// remainder class is appended under the name `rest`. Pairs in `allowed`
    /// index into the class list, with `classes.len()` meaning `rest`.
    pub fn new(
        alphabet: Alphabet,
        classes: Vec<(String, SymSet)>,
        allowed: &[(usize, usize)],
    ) -> Result<Self> {
        let universe = alphabet.symbols();
        let mut covered = SymSet::empty();
        let mut names = Vec::new();
        let mut sets = Vec::new();
        for (name, set) in classes {
            if !set.is_subset(&universe) {
                return Err(Error::InvalidPresentation(format!("class {name} leaves the alphabet")));
            }
            if covered.intersects(&set) {
                return Err(Error::InvalidPresentation(format!("class {name} overlaps another class")));
            }
            covered = covered.union(&set);
            names.push(name);
            sets.push(set);
        }
        names.push("rest".into());
        sets.push(universe.difference(&covered));
        let n = sets.len();
        let mut table = vec![vec![false; n]; n];
        for &(a, b) in allowed {
            if a >= n || b >= n {
                return Err(Error::InvalidPresentation(format!("class index out of range in {a} -> {b}")));
            }
            table[a][b] = true;
        }
        // greatest fixpoint: classes with an infinite path
        let mut alive: Vec<bool> = sets.iter().map(|s| !s.is_empty()).collect();
        loop {
            let next: Vec<bool> =
                (0..n).map(|i| alive[i] && (0..n).any(|j| table[i][j] && alive[j])).collect();
            if next == alive {
                break;
            }
            alive = next;
        }
        Ok(ClassTable { names, classes: sets, allowed: table, alive })
    }

    pub fn class_names(&self) -> &[String] {
        &self.names
    }

    pub fn class_sets(&self) -> &[SymSet] {
        &self.classes
    }

    pub fn allowed_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.classes.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.allowed[i][j])
            .collect()
    }

    fn class_of(&self, a: Sym) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(a))
    }

    fn targets(&self, i: usize) -> SymSet {
        (0..self.classes.len())
            .filter(|&j| self.allowed[i][j] && self.alive[j])
            .fold(SymSet::empty(), |acc, j| acc.union(&self.classes[j]))
    }

    fn sources(&self, j: usize) -> SymSet {
        (0..self.classes.len())
            .filter(|&i| self.allowed[i][j] && self.alive[i])
            .fold(SymSet::empty(), |acc, i| acc.union(&self.classes[i]))
    }
}

impl EdgeRule for ClassTable {
    fn literal(&self) -> String {
        let mut s = String::from("table {");
        for (i, name) in self.names.iter().enumerate().take(self.names.len() - 1) {
            s.push_str(&format!(" class {name} = {};", self.classes[i]));
        }
        for (a, b) in self.allowed_pairs() {
            s.push_str(&format!(" {} -> {};", self.names[a], self.names[b]));
        }
        s.push_str(" }");
        s
    }
    fn letters(&self) -> SymSet {
        (0..self.classes.len())
            .filter(|&i| self.alive[i])
            .fold(SymSet::empty(), |acc, i| acc.union(&self.classes[i]))
    }
    fn follower(&self, a: Sym) -> SymSet {
        match self.class_of(a) {
            Some(i) if self.alive[i] => self.targets(i),
            _ => SymSet::empty(),
        }
    }
    fn predecessor(&self, b: Sym) -> SymSet {
        match self.class_of(b) {
            Some(j) if self.alive[j] => self.sources(j),
            _ => SymSet::empty(),
        }
    }
    fn followers_of_set(&self, s: &SymSet) -> SymSet {
        (0..self.classes.len())
            .filter(|&i| self.alive[i] && self.classes[i].intersects(s))
            .fold(SymSet::empty(), |acc, i| acc.union(&self.targets(i)))
    }
    fn predecessors_of_set(&self, s: &SymSet) -> SymSet {
        (0..self.classes.len())
            .filter(|&j| self.alive[j] && self.classes[j].intersects(s))
            .fold(SymSet::empty(), |acc, j| acc.union(&self.sources(j)))
    }
    fn iep_letters(&self) -> SymSet {
        (0..self.classes.len())
            .filter(|&i| self.alive[i] && !self.targets(i).is_finite())
            .fold(SymSet::empty(), |acc, i| acc.union(&self.classes[i]))
    }
    fn explicit_letters(&self) -> Vec<Sym> {
        self.classes.iter().flat_map(|c| c.boundaries()).collect()
    }
    fn forbidden_pairs_finite(&self) -> bool {
        let n = self.classes.len();
        let dead_finite = (0..n).all(|i| self.alive[i] || self.classes[i].is_finite());
        dead_finite
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    !(self.alive[i] && self.alive[j] && !self.allowed[i][j])
                        || self.classes[i].is_finite()
                        || self.classes[j].is_finite()
                })
            })
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    self.allowed[i][j] || !self.alive[i] || !self.alive[j] || {
                        self.classes[i].is_finite() && self.classes[j].is_finite()
                    }
                })
            })
    }
}

/// Named transition rules accepted by the literal grammar.
pub fn named_rule(name: &str, k: Option<Sym>) -> Result<Arc<dyn EdgeRule>> {
    let k = k.unwrap_or(2);
    Ok(match name {
        "b" => Arc::new(Blocks),
        "c" => Arc::new(Drift),
        "f" => Arc::new(Climb { top: None }),
        "g" => Arc::new(Climb { top: Some(k) }),
        "h" => Arc::new(Descend::free(k)?),
        "i" => Arc::new(Descend::below(k)?),
        other => return Err(Error::InvalidPresentation(format!("unknown named rule {other}"))),
    })
}
