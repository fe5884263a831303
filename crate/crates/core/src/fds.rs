//! Finitely defined sets as decision tries.
//!
//! A trie reads coordinates `x_1, x_2, ...` of a point. Each branch node
//! lists disjoint letter guards (interval sets of symbols, possibly with the
//! empty letter) and a default child for every other letter, so a finite
//! trie decides membership for every point of a shift over a countable
//! alphabet. Sets that need unbounded lookahead use [`PredicateSet`].

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::point::{Letter, Point, Sym};
use crate::shiftspace::ShiftPresentation;
use crate::symset::{LetterSet, SymSet, NEG_INF, POS_INF};
use crate::topology::Cylinder;

/// Leaf labels of a trie.
pub trait Label: Clone + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    fn render(&self) -> String;
}

impl Label for bool {
    fn render(&self) -> String {
        if *self { "in" } else { "out" }.into()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node<L> {
    Leaf(L),
    Branch { edges: Vec<(LetterSet, Node<L>)>, default: Box<Node<L>> },
}

/// Letters not covered by any of the guards.
fn rest_of(edges: &[(LetterSet, Node<impl Sized>)]) -> LetterSet {
    edges.iter().fold(LetterSet::everything(), |acc, (g, _)| acc.difference(g))
}

impl<L: Label> Node<L> {
    pub fn branch(edges: Vec<(LetterSet, Node<L>)>, default: Node<L>) -> Self {
        Node::Branch { edges, default: Box::new(default) }
    }

    /// Every region of the node with its child: the guards, then the
    /// default region (when nonempty).
    pub fn regions(&self) -> Vec<(LetterSet, &Node<L>)> {
        match self {
            Node::Leaf(_) => vec![(LetterSet::everything(), self)],
            Node::Branch { edges, default } => {
                let mut v: Vec<(LetterSet, &Node<L>)> = edges.iter().map(|(g, c)| (g.clone(), c)).collect();
                let r = rest_of(edges);
                if !r.is_empty() {
                    v.push((r, default));
                }
                v
            }
        }
    }

    fn step(&self, l: &Letter) -> &Node<L> {
        match self {
            Node::Leaf(_) => self,
            Node::Branch { edges, default } => {
                edges.iter().find(|(g, _)| g.contains(l)).map_or(default, |(_, c)| c)
            }
        }
    }

    /// The label reached when every remaining coordinate is empty.
    pub fn resolve_empty(&self) -> &L {
        let mut n = self;
        loop {
            match n {
                Node::Leaf(l) => return l,
                _ => n = n.step(&Letter::Empty),
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Branch { edges, default } => {
                1 + edges.iter().map(|(_, c)| c.depth()).chain([default.depth()]).max().unwrap_or(0)
            }
        }
    }

    pub fn map<M: Label>(&self, f: &impl Fn(&L) -> M) -> Node<M> {
        match self {
            Node::Leaf(l) => Node::Leaf(f(l)),
            Node::Branch { edges, default } => Node::Branch {
                edges: edges.iter().map(|(g, c)| (g.clone(), c.map(f))).collect(),
                default: Box::new(default.map(f)),
            },
        }
    }

    /// Canonical shape: no empty guards, subtrees after an empty letter
    /// collapsed to their label, edges with equal children merged, edges
    /// equal to the default dropped, and constant nodes collapsed.
    pub fn normalize(self) -> Self {
        let (edges, default) = match self {
            Node::Leaf(_) => return self,
            Node::Branch { edges, default } => (edges, default.normalize()),
        };
        let mut split: Vec<(LetterSet, Node<L>)> = Vec::new();
        let mut taken = LetterSet::of_syms(SymSet::empty());
        for (g, c) in edges {
            // first match wins, so later guards lose what earlier ones took
            let g = g.difference(&taken);
            taken = taken.union(&g);
            if g.is_empty() {
                continue;
            }
            let c = c.normalize();
            if g.empty && !matches!(c, Node::Leaf(_)) {
                split.push((LetterSet::only_empty(), Node::Leaf(c.resolve_empty().clone())));
                if !g.syms.is_empty() {
                    split.push((LetterSet::of_syms(g.syms), c));
                }
            } else {
                split.push((g, c));
            }
        }
        if rest_of(&split).empty && !matches!(default, Node::Leaf(_)) {
            split.push((LetterSet::only_empty(), Node::Leaf(default.resolve_empty().clone())));
        }
        let mut merged: Vec<(LetterSet, Node<L>)> = Vec::new();
        for (g, c) in split {
            if let Some(m) = merged.iter_mut().find(|(_, d)| *d == c) {
                m.0 = m.0.union(&g);
            } else {
                merged.push((g, c));
            }
        }
        let mut default = default;
        if rest_of(&merged).is_empty() && !merged.is_empty() {
            default = merged.remove(0).1;
        }
        merged.retain(|(_, c)| *c != default);
        if merged.is_empty() {
            return default;
        }
        merged.sort_by(|a, b| guard_key(&a.0).cmp(&guard_key(&b.0)));
        Node::Branch { edges: merged, default: Box::new(default) }
    }

    /// Leaf paths as guard sequences with their labels.
    pub fn paths(&self) -> Vec<(Vec<LetterSet>, L)> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.collect_paths(&mut stack, &mut out);
        out
    }

    fn collect_paths(&self, stack: &mut Vec<LetterSet>, out: &mut Vec<(Vec<LetterSet>, L)>) {
        match self {
            Node::Leaf(l) => out.push((stack.clone(), l.clone())),
            Node::Branch { .. } => {
                for (g, c) in self.regions() {
                    stack.push(g);
                    c.collect_paths(stack, out);
                    stack.pop();
                }
            }
        }
    }
}

fn guard_key(g: &LetterSet) -> (Vec<(Sym, Sym)>, bool) {
    (g.syms.spans().to_vec(), g.empty)
}

/// Pointwise combination of two tries.
pub fn product<A: Label, B: Label, C: Label>(a: &Node<A>, b: &Node<B>, f: &impl Fn(&A, &B) -> C) -> Node<C> {
    product_raw(a, b, f).normalize()
}

fn product_raw<A: Label, B: Label, C: Label>(a: &Node<A>, b: &Node<B>, f: &impl Fn(&A, &B) -> C) -> Node<C> {
    if let (Node::Leaf(x), Node::Leaf(y)) = (a, b) {
        return Node::Leaf(f(x, y));
    }
    let ra = a.regions();
    let rb = b.regions();
    let mut edges = Vec::new();
    for (ga, ca) in &ra {
        for (gb, cb) in &rb {
            let g = ga.intersect(gb);
            if !g.is_empty() {
                edges.push((g, product_raw(ca, cb, f)));
            }
        }
    }
    let default = edges.pop().map(|(_, c)| c).expect("regions cover every letter");
    Node::Branch { edges, default: Box::new(default) }
}

/// A decision trie with leaf labels `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trie<L> {
    pub root: Node<L>,
}

impl<L: Label> Trie<L> {
    pub fn new(root: Node<L>) -> Self {
        Trie { root: root.normalize() }
    }

    pub fn leaf(l: L) -> Self {
        Trie { root: Node::Leaf(l) }
    }

    /// Label for the point read from coordinate `n` on, with the number of
    /// coordinates consulted.
    pub fn eval_at(&self, p: &Point, n: usize) -> (&L, usize) {
        let mut node = &self.root;
        let mut used = 0;
        loop {
            match node {
                Node::Leaf(l) => return (l, used),
                _ => {
                    used += 1;
                    node = node.step(&p.at(n + used - 1));
                }
            }
        }
    }

    pub fn eval(&self, p: &Point) -> &L {
        self.eval_at(p, 1).0
    }

    /// Label for a finite prefix, or `None` if the prefix is too short.
    pub fn eval_prefix(&self, letters: &[Letter]) -> Option<&L> {
        let mut node = &self.root;
        for l in letters {
            if let Node::Leaf(x) = node {
                return Some(x);
            }
            node = node.step(l);
        }
        match node {
            Node::Leaf(x) => Some(x),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn anticipation(&self) -> usize {
        self.depth().max(1) - 1
    }

    pub fn map<M: Label>(&self, f: impl Fn(&L) -> M) -> Trie<M> {
        Trie::new(self.root.map(&f))
    }

    pub fn paths(&self) -> Vec<(Vec<LetterSet>, L)> {
        self.root.paths()
    }

    /// Labels carried by some point of `shift`, each with one guard path
    /// realizing it.
    pub fn labels_in(&self, shift: &ShiftPresentation) -> Vec<(Vec<LetterSet>, L)> {
        self.paths().into_iter().filter(|(g, _)| shift.region_nonempty(g)).collect()
    }
}

impl<L: Label> fmt::Display for Node<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf(l) => write!(f, "{}", l.render()),
            Node::Branch { edges, default } => {
                write!(f, "{{")?;
                for (g, c) in edges {
                    write!(f, "{}:{}, ", render_guard(g), c)?;
                }
                write!(f, "_:{default}}}")
            }
        }
    }
}

impl<L: Label> fmt::Display for Trie<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

/// Guard key syntax: `1|3..5|9..|empty`.
pub fn render_guard(g: &LetterSet) -> String {
    let mut parts: Vec<String> = g
        .syms
        .spans()
        .iter()
        .map(|&(lo, hi)| match (lo, hi) {
            (NEG_INF, POS_INF) => "..".to_string(),
            (NEG_INF, h) => format!("..{h}"),
            (l, POS_INF) => format!("{l}.."),
            (l, h) if l == h => l.to_string(),
            (l, h) => format!("{l}..{h}"),
        })
        .collect();
    if g.empty {
        parts.push("empty".into());
    }
    parts.join("|")
}

/// Trie of `Z(base, excluded)` over the full shift.
pub fn cylinder_to_trie(c: &Cylinder) -> Trie<bool> {
    let mut node = if c.excluded.is_empty() {
        Node::Leaf(true)
    } else {
        Node::branch(vec![(LetterSet::of_syms(c.excluded_set()), Node::Leaf(false))], Node::Leaf(true))
    };
    for &a in c.base.iter().rev() {
        node = Node::branch(vec![(LetterSet::of_syms(SymSet::singleton(a)), node)], Node::Leaf(false));
    }
    Trie::new(node)
}

pub fn cylinders_to_trie(cs: &[Cylinder]) -> Trie<bool> {
    cs.iter().fold(Trie::leaf(false), |acc, c| trie_union(&acc, &cylinder_to_trie(c)))
}

pub fn trie_union(a: &Trie<bool>, b: &Trie<bool>) -> Trie<bool> {
    Trie { root: product(&a.root, &b.root, &|x, y| *x || *y) }
}

pub fn trie_intersect(a: &Trie<bool>, b: &Trie<bool>) -> Trie<bool> {
    Trie { root: product(&a.root, &b.root, &|x, y| *x && *y) }
}

pub fn trie_complement(a: &Trie<bool>) -> Trie<bool> {
    a.map(|x| !x)
}

/// Whether no point of `shift` lies in the set.
pub fn is_empty_in(t: &Trie<bool>, shift: &ShiftPresentation) -> bool {
    t.paths().into_iter().filter(|(_, l)| *l).all(|(g, _)| !shift.region_nonempty(&g))
}

/// Equality of the two sets restricted to `shift`.
pub fn equivalent_in(a: &Trie<bool>, b: &Trie<bool>, shift: &ShiftPresentation) -> bool {
    let x = Trie { root: product(&a.root, &b.root, &|x, y| x != y) };
    is_empty_in(&x, shift)
}

/// Equality of the two sets on the full shift over all integers.
pub fn equivalent(a: &Trie<bool>, b: &Trie<bool>) -> bool {
    product(&a.root, &b.root, &|x, y| x != y) == Node::Leaf(false)
}

/// The set `{x : σ(x) in t}`.
pub fn preimage_under_shift<L: Label>(t: &Trie<L>) -> Trie<L> {
    Trie::new(Node::branch(Vec::new(), t.root.clone()))
}

/// Exact check of `σ(C ∩ Λ) ⊆ C`.
pub fn shift_invariant_exact(t: &Trie<bool>, shift: &ShiftPresentation) -> bool {
    let escaping = trie_intersect(t, &trie_complement(&preimage_under_shift(t)));
    is_empty_in(&escaping, shift)
}

/// Letters that can be followed (within `shift`) by a realization of the
/// guard sequence `path`: the set of `a` with `a, path...` realizable.
pub fn lead_letters(shift: &ShiftPresentation, path: &[LetterSet]) -> SymSet {
    let letters = shift.letters();
    let iep = shift.iep_letters();
    // back[j]: letters allowed at path position j with a realizable continuation
    let mut next: Option<SymSet> = None;
    for j in (0..path.len()).rev() {
        let empties_after = path[j + 1..].iter().all(|g| g.empty);
        let mut ok = match &next {
            None => letters.clone(),
            Some(n) => shift.predecessors_of_set(n),
        };
        if next.is_some() && empties_after && path[j + 1].empty {
            ok = ok.union(&iep);
        }
        next = Some(path[j].syms.intersect(letters).intersect(&ok));
    }
    let mut lead = match &next {
        Some(n) => shift.predecessors_of_set(n),
        None => letters.clone(),
    };
    if path.first().is_some_and(|g| g.empty) && path.iter().all(|g| g.empty) {
        lead = lead.union(&iep);
    }
    lead.intersect(letters)
}

/// Letters that occur at position `pos` (0-based) of some point of `shift`
/// whose coordinates lie in the given guards.
pub fn position_letters(shift: &ShiftPresentation, guards: &[LetterSet], pos: usize) -> SymSet {
    if guards.is_empty() {
        return position_letters(shift, &[LetterSet::everything()], pos);
    }
    let letters = shift.letters();
    let back = |j: usize| -> SymSet {
        let here = guards[j].syms.intersect(letters);
        if j + 1 < guards.len() {
            here.intersect(&lead_letters(shift, &guards[j + 1..]))
        } else {
            here
        }
    };
    let mut cur = back(0);
    for j in 1..=pos.min(guards.len().saturating_sub(1)) {
        cur = shift.followers_of_set(&cur).intersect(&back(j));
    }
    if pos >= guards.len() {
        for _ in guards.len()..=pos {
            cur = shift.followers_of_set(&cur);
        }
    }
    cur
}

/// Writes the in-region of `t` within `shift` as a finite union of
/// generalized cylinders, or reports that the decomposition needs
/// infinitely many of them.
pub fn decompose(t: &Trie<bool>, shift: &ShiftPresentation) -> Result<Vec<Cylinder>> {
    let mut out = Vec::new();
    decompose_at(&t.root, &mut Vec::new(), shift, &mut out)?;
    Ok(out)
}

fn decompose_at(node: &Node<bool>, p: &mut Vec<Sym>, shift: &ShiftPresentation, out: &mut Vec<Cylinder>) -> Result<()> {
    let follow = shift.follower(p).map_err(|_| Error::NotRepresentable("prefix outside the language".into()))?;
    let is_point = shift.has_iep_at(p);
    let mut u = LetterSet::none();
    for (g, child) in node.regions() {
        let syms = g.syms.intersect(&follow);
        if g.empty && is_point && *child.resolve_empty() {
            u.empty = true;
        }
        match child {
            Node::Leaf(true) => u.syms = u.syms.union(&syms),
            Node::Leaf(false) => {}
            Node::Branch { .. } => {
                if syms.is_empty() {
                    continue;
                }
                let keep = child
                    .paths()
                    .into_iter()
                    .filter(|(_, l)| *l)
                    .fold(SymSet::empty(), |acc, (path, _)| acc.union(&lead_letters(shift, &path)))
                    .intersect(&syms);
                let Some(letters) = keep.elements() else {
                    return Err(Error::NotRepresentable(format!(
                        "infinitely many letters {keep} after prefix {p:?} lead to a deeper decision"
                    )));
                };
                for a in letters {
                    p.push(a);
                    decompose_at(child, p, shift, out)?;
                    p.pop();
                }
            }
        }
    }
    if u.is_empty() {
        return Ok(());
    }
    let rest = follow.difference(&u.syms);
    if u.empty {
        // the finite point p itself belongs, so only Z(p, F) can cover it
        if let Some(f) = rest.elements() {
            out.push(Cylinder::new(p.clone(), f));
            return Ok(());
        }
    } else if let Some(e) = u.syms.elements() {
        for a in e {
            let mut w = p.clone();
            w.push(a);
            out.push(Cylinder::of_word(w));
        }
        return Ok(());
    } else if !is_point {
        if let Some(f) = rest.elements() {
            out.push(Cylinder::new(p.clone(), f));
            return Ok(());
        }
    }
    Err(Error::NotRepresentable(format!("letters {u} after prefix {p:?}")))
}

/// Normal form over the full shift on the integers.
pub fn trie_to_cylinders(t: &Trie<bool>) -> Result<Vec<Cylinder>> {
    decompose(t, &ShiftPresentation::full(crate::point::Alphabet::Integers))
}

/// Verdict of a membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    In,
    Out,
    NeedMore,
}

type Decider = dyn Fn(&[Letter]) -> Decision + Send + Sync;

/// A set decided by a rule on finite prefixes, consulting at most `fuel`
/// coordinates.
#[derive(Clone)]
pub struct PredicateSet {
    pub name: String,
    pub fuel: usize,
    pub decide: Arc<Decider>,
}

impl fmt::Debug for PredicateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PredicateSet({}, fuel {})", self.name, self.fuel)
    }
}

impl PredicateSet {
    pub fn new(name: impl Into<String>, fuel: usize, decide: impl Fn(&[Letter]) -> Decision + Send + Sync + 'static) -> Self {
        PredicateSet { name: name.into(), fuel, decide: Arc::new(decide) }
    }

    pub fn member(&self, p: &Point) -> Membership {
        let mut prefix = Vec::new();
        for n in 1..=self.fuel {
            prefix.push(p.at(n));
            match (self.decide)(&prefix) {
                Decision::In => return Membership::In,
                Decision::Out => return Membership::Out,
                Decision::NeedMore => {}
            }
        }
        Membership::Unknown
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

impl Membership {
    fn of(b: bool) -> Self {
        if b { Membership::In } else { Membership::Out }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Anticipation {
    Finite(usize),
    Infinite,
    Unknown,
}

/// A finitely defined set.
#[derive(Clone, Debug)]
pub enum Fds {
    Trie(Trie<bool>),
    Pred { set: PredicateSet, unbounded: bool },
}

fn lift(a: &Fds) -> PredicateSet {
    match a {
        Fds::Pred { set, .. } => set.clone(),
        Fds::Trie(t) => {
            let t = t.clone();
            PredicateSet::new(t.to_string(), t.depth().max(1), move |prefix| match t.eval_prefix(prefix) {
                Some(true) => Decision::In,
                Some(false) => Decision::Out,
                None => Decision::NeedMore,
            })
        }
    }
}

fn combine(a: &Fds, b: &Fds, and: bool) -> Fds {
    let (x, y) = (lift(a), lift(b));
    let name = format!("{} {} {}", x.name, if and { "and" } else { "or" }, y.name);
    let fuel = x.fuel.max(y.fuel);
    let unbounded = matches!(a, Fds::Pred { unbounded: true, .. }) || matches!(b, Fds::Pred { unbounded: true, .. });
    let set = PredicateSet::new(name, fuel, move |prefix| {
        let (u, v) = ((x.decide)(prefix), (y.decide)(prefix));
        let (hit, miss) = if and { (Decision::In, Decision::Out) } else { (Decision::Out, Decision::In) };
        if u == miss || v == miss {
            miss
        } else if u == hit && v == hit {
            hit
        } else {
            Decision::NeedMore
        }
    });
    Fds::Pred { set, unbounded }
}

impl Fds {
    pub fn member(&self, p: &Point) -> Membership {
        match self {
            Fds::Trie(t) => Membership::of(*t.eval(p)),
            Fds::Pred { set, .. } => set.member(p),
        }
    }

    pub fn anticipation(&self) -> Anticipation {
        match self {
            Fds::Trie(t) => Anticipation::Finite(t.anticipation()),
            Fds::Pred { unbounded: true, .. } => Anticipation::Infinite,
            Fds::Pred { .. } => Anticipation::Unknown,
        }
    }

    pub fn complement(&self) -> Fds {
        match self {
            Fds::Trie(t) => Fds::Trie(trie_complement(t)),
            Fds::Pred { set, unbounded } => {
                let d = set.decide.clone();
                let set = PredicateSet::new(format!("not {}", set.name), set.fuel, move |prefix| match d(prefix) {
                    Decision::In => Decision::Out,
                    Decision::Out => Decision::In,
                    Decision::NeedMore => Decision::NeedMore,
                });
                Fds::Pred { set, unbounded: *unbounded }
            }
        }
    }

    pub fn union(&self, other: &Fds) -> Fds {
        match (self, other) {
            (Fds::Trie(a), Fds::Trie(b)) => Fds::Trie(trie_union(a, b)),
            _ => combine(self, other, false),
        }
    }

    pub fn intersect(&self, other: &Fds) -> Fds {
        match (self, other) {
            (Fds::Trie(a), Fds::Trie(b)) => Fds::Trie(trie_intersect(a, b)),
            _ => combine(self, other, true),
        }
    }

    pub fn as_trie(&self) -> Option<&Trie<bool>> {
        match self {
            Fds::Trie(t) => Some(t),
            Fds::Pred { .. } => None,
        }
    }
}

pub fn trie_to_cylinders_fds(s: &Fds) -> Result<Vec<Cylinder>> {
    match s {
        Fds::Trie(t) => trie_to_cylinders(t),
        Fds::Pred { set, .. } => Err(Error::NotRepresentable(format!("predicate set {}", set.name))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftInvariance {
    HoldsOnSamples,
    Counterexample(Point),
}

/// Tests `σ(C) ⊆ C` on finite points of `shift` up to length `depth` and on
/// `samples` random points.
pub fn fds_shift_invariant<R: Rng>(
    s: &Fds,
    shift: &ShiftPresentation,
    depth: usize,
    samples: usize,
    rng: &mut R,
) -> ShiftInvariance {
    let mut pts = shift.enumerate_finite_points(depth, 4);
    pts.extend(shift.sample_points(samples, 20, rng));
    for p in pts {
        if s.member(&p) == Membership::In && s.member(&p.shift()) == Membership::Out {
            return ShiftInvariance::Counterexample(p);
        }
    }
    ShiftInvariance::HoldsOnSamples
}

/// The set of example c) of finitely defined sets: points starting with
/// `k` copies of `k` for some `k`. Its anticipation is unbounded.
pub fn runs_of_own_value(fuel: usize) -> Fds {
    let set = PredicateSet::new("runs-of-own-value", fuel, |prefix| {
        let Letter::Sym(k) = prefix[0] else { return Decision::Out };
        if k < 1 {
            return Decision::Out;
        }
        for (i, l) in prefix.iter().enumerate().take(k as usize) {
            if *l != Letter::Sym(k) {
                return Decision::Out;
            }
            if i + 1 == k as usize {
                return Decision::In;
            }
        }
        Decision::NeedMore
    });
    Fds::Pred { set, unbounded: true }
}

/// Cache of per-prefix follower sets, shared by repeated region queries.
#[derive(Default)]
pub struct FollowerCache {
    map: HashMap<Vec<Sym>, SymSet>,
}

impl FollowerCache {
    pub fn follower(&mut self, shift: &ShiftPresentation, w: &[Sym]) -> Result<SymSet> {
        if let Some(s) = self.map.get(w) {
            return Ok(s.clone());
        }
        let s = shift.follower(w)?;
        self.map.insert(w.to_vec(), s.clone());
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Alphabet;
    use crate::rules::{Blocks, Climb};
    use crate::topology::cyl_contains;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(a: Sym) -> LetterSet {
        LetterSet::of_syms(SymSet::singleton(a))
    }

    #[test]
    fn cylinder_tries() {
        let t = cylinder_to_trie(&Cylinder::new(vec![], [1, 2]));
        assert_eq!(t.to_string(), "{1..2:out, _:in}");
        assert!(t.eval(&Point::empty()));
        let t = cylinder_to_trie(&Cylinder::of_word(vec![1, 2]));
        assert_eq!(t.to_string(), "{1:{2:in, _:out}, _:out}");
        let t = cylinder_to_trie(&Cylinder::new(vec![1], [5]));
        assert_eq!(t.to_string(), "{1:{5:out, _:in}, _:out}");
        assert!(t.eval(&Point::finite(vec![1])));
        assert!(!t.eval(&Point::finite(vec![1, 5])));
    }

    #[test]
    fn membership_examples() {
        let z = Fds::Trie(cylinder_to_trie(&Cylinder::new(vec![], [1, 2])));
        assert_eq!(z.member(&Point::finite(vec![3, 1])), Membership::In);
        let second_is = |a| Trie::new(Node::branch(vec![], Node::branch(vec![(sym(a), Node::Leaf(true))], Node::Leaf(false))));
        assert!(second_is(4).eval(&Point::evp(vec![], vec![4])));
        assert_eq!(runs_of_own_value(10).member(&Point::finite(vec![2, 2])), Membership::In);
        assert_eq!(runs_of_own_value(10).member(&Point::finite(vec![3, 3])), Membership::Out);
        assert_eq!(runs_of_own_value(3).member(&Point::evp(vec![], vec![5])), Membership::Unknown);
    }

    #[test]
    fn anticipation_of_cylinders() {
        let w = vec![3, 1, 4];
        assert_eq!(cylinder_to_trie(&Cylinder::of_word(w.clone())).anticipation(), 2);
        assert_eq!(cylinder_to_trie(&Cylinder::new(w, [7])).anticipation(), 3);
        assert_eq!(Trie::leaf(true).anticipation(), 0);
        assert_eq!(runs_of_own_value(5).anticipation(), Anticipation::Infinite);
    }

    #[test]
    fn boolean_algebra() {
        let s = Fds::Trie(cylinder_to_trie(&Cylinder::new(vec![2], [3])));
        let whole = Fds::Trie(Trie::leaf(true));
        let u = s.union(&s.complement());
        assert!(equivalent(u.as_trie().unwrap(), whole.as_trie().unwrap()));
        assert_eq!(whole.complement().as_trie().unwrap(), &Trie::leaf(false));
        let z1 = cylinder_to_trie(&Cylinder::new(vec![], [1]));
        assert_eq!(Fds::Trie(trie_complement(&z1)).member(&Point::finite(vec![1])), Membership::In);
        let both = trie_intersect(&cylinder_to_trie(&Cylinder::of_word(vec![1])), &z1);
        assert_eq!(both, Trie::leaf(false));
        assert_eq!(trie_complement(&trie_complement(&z1)), z1);
    }

    #[test]
    fn decomposition_examples() {
        let c = Cylinder::new(vec![1], [5]);
        assert_eq!(trie_to_cylinders(&cylinder_to_trie(&c)).unwrap(), vec![c]);
        assert_eq!(trie_to_cylinders(&Trie::leaf(true)).unwrap(), vec![Cylinder::whole()]);
        let a = 9;
        let t = trie_union(
            &cylinder_to_trie(&Cylinder::of_word(vec![1, a])),
            &cylinder_to_trie(&Cylinder::new(vec![], [1])),
        );
        assert_eq!(trie_to_cylinders(&t).unwrap(), vec![Cylinder::of_word(vec![1, a]), Cylinder::new(vec![], [1])]);
        // x_2 = 1 over the full integer shift needs infinitely many cylinders
        let second = Trie::new(Node::branch(vec![], Node::branch(vec![(sym(1), Node::Leaf(true))], Node::Leaf(false))));
        assert!(trie_to_cylinders(&second).is_err());
        // but within the block shift only the block of 1 precedes it
        let b = ShiftPresentation::edges(Alphabet::Naturals, Arc::new(Blocks)).unwrap();
        let cs = decompose(&second, &b).unwrap();
        assert_eq!(cs, vec![Cylinder::of_word(vec![1, 1]), Cylinder::of_word(vec![2, 1])]);
        assert!(equivalent_in(&cylinders_to_trie(&cs), &second, &b));
    }

    #[test]
    fn relative_equivalence() {
        let f = ShiftPresentation::edges(Alphabet::Integers, Arc::new(Climb { top: None })).unwrap();
        // within f, a point starting with -1 never has a negative second letter
        let a = cylinder_to_trie(&Cylinder::of_word(vec![-1]));
        let b = cylinder_to_trie(&Cylinder::new(vec![-1], (-5..0).collect::<Vec<_>>()));
        assert!(equivalent_in(&a, &b, &f));
        assert!(!equivalent(&a, &b));
    }

    #[test]
    fn shift_invariance() {
        let b = ShiftPresentation::edges(Alphabet::Naturals, Arc::new(Blocks)).unwrap();
        let only_empty = Trie::new(Node::branch(vec![(LetterSet::only_empty(), Node::Leaf(true))], Node::Leaf(false)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(fds_shift_invariant(&Fds::Trie(only_empty.clone()), &b, 3, 100, &mut rng), ShiftInvariance::HoldsOnSamples);
        assert!(shift_invariant_exact(&only_empty, &b));
        let full = ShiftPresentation::full(Alphabet::Naturals);
        let z1 = Fds::Trie(cylinder_to_trie(&Cylinder::of_word(vec![1])));
        assert!(matches!(fds_shift_invariant(&z1, &full, 2, 50, &mut rng), ShiftInvariance::Counterexample(_)));
        assert!(!shift_invariant_exact(z1.as_trie().unwrap(), &full));
        assert_eq!(fds_shift_invariant(&Fds::Trie(Trie::leaf(true)), &full, 2, 50, &mut rng), ShiftInvariance::HoldsOnSamples);
    }

    #[test]
    fn union_matches_disjunction() {
        let ts: Vec<Trie<bool>> = (1..=3).map(|a| cylinder_to_trie(&Cylinder::of_word(vec![a]))).collect();
        let u = ts.iter().fold(Trie::leaf(false), |acc, t| trie_union(&acc, t));
        let full = ShiftPresentation::full(Alphabet::Naturals);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in full.sample_points(100, 5, &mut rng) {
            let expect = (1..=3).any(|a| cyl_contains(&Cylinder::of_word(vec![a]), &p));
            assert_eq!(*u.eval(&p), expect, "{p}");
        }
    }
}
