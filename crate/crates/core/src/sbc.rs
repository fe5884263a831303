//! Sliding block codes: a local rule applied at every coordinate.
//!
//! The rule is either a decision trie whose leaves name the output letter,
//! or a computable rule on finite windows with a fuel bound. Trie leaves may
//! copy a consumed letter through a short chain of arithmetic maps, which is
//! how codes over infinite alphabets stay finite.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fds::{self, Decision, Fds, Label, Node, PredicateSet, Trie};
use crate::point::{Alphabet, Letter, Point, Sym, Symbol};
use crate::shiftspace::ShiftPresentation;
use crate::symset::{LetterSet, SymSet, NEG_INF, POS_INF};

/// Arithmetic step applied to a copied letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    /// `x -> ceil(x / 2)`
    HalfUp,
    Offset(i64),
}

impl Prim {
    pub fn apply(self, x: Sym) -> Sym {
        match self {
            Prim::HalfUp => (x + 1).div_euclid(2),
            Prim::Offset(c) => x + c,
        }
    }

    /// `{x : apply(x) in s}`
    pub fn preimage(self, s: &SymSet) -> SymSet {
        match self {
            Prim::Offset(c) => s.offset(-c),
            Prim::HalfUp => SymSet::from_spans(s.spans().iter().map(|&(lo, hi)| {
                let l = if lo == NEG_INF { NEG_INF } else { 2 * lo - 1 };
                let h = if hi == POS_INF { POS_INF } else { 2 * hi };
                (l, h)
            })),
        }
    }

    /// Image of a set.
    pub fn image(self, s: &SymSet) -> SymSet {
        match self {
            Prim::Offset(c) => s.offset(c),
            Prim::HalfUp => SymSet::from_spans(s.spans().iter().map(|&(lo, hi)| {
                let l = if lo == NEG_INF { NEG_INF } else { self.apply(lo) };
                let h = if hi == POS_INF { POS_INF } else { self.apply(hi) };
                (l, h)
            })),
        }
    }
}

/// Output of a rule leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OutLabel {
    Const(Letter),
    /// The consumed letter at index `pos` (0 is the current coordinate),
    /// passed through `chain`.
    Map { chain: Vec<Prim>, pos: usize },
}

impl OutLabel {
    pub fn id(pos: usize) -> Self {
        OutLabel::Map { chain: Vec::new(), pos }
    }

    pub fn eval(&self, consumed: &[Letter]) -> Letter {
        match self {
            OutLabel::Const(l) => *l,
            OutLabel::Map { chain, pos } => match consumed.get(*pos) {
                Some(Letter::Sym(x)) => Letter::Sym(chain.iter().fold(*x, |v, p| p.apply(v))),
                _ => Letter::Empty,
            },
        }
    }

    pub fn chain_preimage(chain: &[Prim], s: &SymSet) -> SymSet {
        chain.iter().rev().fold(s.clone(), |acc, p| p.preimage(&acc))
    }

    pub fn chain_image(chain: &[Prim], s: &SymSet) -> SymSet {
        chain.iter().fold(s.clone(), |acc, p| p.image(&acc))
    }
}

impl Label for OutLabel {
    fn render(&self) -> String {
        match self {
            OutLabel::Const(Letter::Sym(a)) => a.to_string(),
            OutLabel::Const(Letter::Empty) => "empty".into(),
            OutLabel::Map { chain, pos } => {
                let mut parts: Vec<String> = chain
                    .iter()
                    .map(|p| match p {
                        Prim::HalfUp => "halfup".to_string(),
                        Prim::Offset(c) => format!("offset({c})"),
                    })
                    .collect();
                if parts.is_empty() {
                    parts.push("id".into());
                }
                format!("{}@{pos}", parts.join("."))
            }
        }
    }
}

type RuleFn = dyn Fn(&[Letter]) -> Option<Letter> + Send + Sync;

/// A rule on finite windows: `None` asks for a longer window.
#[derive(Clone)]
pub struct ComputableRule {
    pub name: String,
    pub fuel: usize,
    pub unbounded: bool,
    pub f: Arc<RuleFn>,
}

impl fmt::Debug for ComputableRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComputableRule({}, fuel {})", self.name, self.fuel)
    }
}

impl ComputableRule {
    pub fn new(
        name: impl Into<String>,
        fuel: usize,
        unbounded: bool,
        f: impl Fn(&[Letter]) -> Option<Letter> + Send + Sync + 'static,
    ) -> Self {
        ComputableRule { name: name.into(), fuel, unbounded, f: Arc::new(f) }
    }

    pub fn eval_at(&self, p: &Point, n: usize) -> Result<(Letter, usize)> {
        let mut window = Vec::new();
        for k in 0..self.fuel {
            window.push(p.at(n + k));
            if let Some(l) = (self.f)(&window) {
                return Ok((l, k + 1));
            }
        }
        Err(Error::FuelExhausted(self.fuel))
    }
}

#[derive(Clone, Debug)]
pub enum LocalRule {
    Trie(Trie<OutLabel>),
    Computable(ComputableRule),
}

/// A map that computes each output coordinate from the input read from the
/// same coordinate on.
pub trait Code: Send + Sync {
    type Out: Symbol;
    fn domain(&self) -> &ShiftPresentation;
    fn coord(&self, p: &Point, n: usize) -> Result<Letter<Self::Out>>;
}

#[derive(Clone, Debug)]
pub struct SlidingBlockCode {
    pub name: String,
    pub domain: ShiftPresentation,
    pub codomain: Alphabet,
    pub rule: LocalRule,
}

impl Code for SlidingBlockCode {
    type Out = Sym;
    fn domain(&self) -> &ShiftPresentation {
        &self.domain
    }
    fn coord(&self, p: &Point, n: usize) -> Result<Letter> {
        Ok(self.coord_counted(p, n)?.0)
    }
}

impl SlidingBlockCode {
    pub fn new(name: impl Into<String>, domain: ShiftPresentation, codomain: Alphabet, rule: LocalRule) -> Self {
        SlidingBlockCode { name: name.into(), domain, codomain, rule }
    }

    pub fn from_trie(name: impl Into<String>, domain: ShiftPresentation, codomain: Alphabet, root: Node<OutLabel>) -> Self {
        Self::new(name, domain, codomain, LocalRule::Trie(Trie::new(root)))
    }

    /// Output coordinate `n` and the number of input coordinates consulted.
    pub fn coord_counted(&self, p: &Point, n: usize) -> Result<(Letter, usize)> {
        match &self.rule {
            LocalRule::Trie(t) => {
                let (label, used) = t.eval_at(p, n);
                let consumed = p.window(n, used.max(label_reach(label)));
                Ok((label.eval(&consumed), used))
            }
            LocalRule::Computable(r) => r.eval_at(p, n),
        }
    }

    pub fn trie(&self) -> Option<&Trie<OutLabel>> {
        match &self.rule {
            LocalRule::Trie(t) => Some(t),
            LocalRule::Computable(_) => None,
        }
    }

    /// `None` for computable rules.
    pub fn anticipation(&self) -> Option<usize> {
        self.trie().map(Trie::anticipation)
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        apply(self, p)
    }

    /// `C_a`: the points whose image starts with `a`.
    pub fn fiber(&self, a: &Letter) -> Fds {
        match &self.rule {
            LocalRule::Trie(t) => Fds::Trie(fiber_trie(t, a)),
            LocalRule::Computable(r) => {
                let (r, a) = (r.clone(), *a);
                let set = PredicateSet::new(format!("fiber {a} of {}", r.name), r.fuel, move |prefix| match (r.f)(prefix) {
                    Some(b) if b == a => Decision::In,
                    Some(_) => Decision::Out,
                    None => Decision::NeedMore,
                });
                Fds::Pred { set, unbounded: false }
            }
        }
    }
}

fn label_reach(l: &OutLabel) -> usize {
    match l {
        OutLabel::Const(_) => 0,
        OutLabel::Map { pos, .. } => pos + 1,
    }
}

/// Set trie of the points whose leaf label evaluates to `a`.
pub fn fiber_trie(t: &Trie<OutLabel>, a: &Letter) -> Trie<bool> {
    let mut acc = Trie::leaf(false);
    for (mut guards, label) in t.paths() {
        let hit = match (&label, a) {
            (OutLabel::Const(b), _) => b == a,
            (OutLabel::Map { chain, pos }, Letter::Sym(v)) => {
                while guards.len() <= *pos {
                    guards.push(LetterSet::everything());
                }
                let pre = OutLabel::chain_preimage(chain, &SymSet::singleton(*v));
                guards[*pos] = guards[*pos].intersect(&LetterSet::of_syms(pre));
                true
            }
            (OutLabel::Map { pos, .. }, Letter::Empty) => {
                while guards.len() <= *pos {
                    guards.push(LetterSet::everything());
                }
                guards[*pos] = guards[*pos].intersect(&LetterSet::only_empty());
                true
            }
        };
        if hit && guards.iter().all(|g| !g.is_empty()) {
            acc = fds::trie_union(&acc, &path_trie(&guards));
        }
    }
    acc
}

/// Set trie of the points whose coordinates lie in the given guards.
pub fn path_trie(guards: &[LetterSet]) -> Trie<bool> {
    let mut node = Node::Leaf(true);
    for g in guards.iter().rev() {
        node = Node::branch(vec![(g.clone(), node)], Node::Leaf(false));
    }
    Trie::new(node)
}

/// Image of a point under a code. Eventually periodic inputs give exact
/// eventually periodic (or finite) outputs because the rule commutes with
/// the shift.
pub fn apply<C: Code + ?Sized>(c: &C, p: &Point) -> Result<Point<C::Out>> {
    if !c.domain().contains_point(p) {
        return Err(Error::OutsideDomain);
    }
    apply_with(p, |q, n| c.coord(q, n))
}

/// Image of a point under any shift-commuting coordinate rule `coord`,
/// computed from one preperiod and one period.
pub fn apply_with<S: Symbol>(p: &Point, coord: impl Fn(&Point, usize) -> Result<Letter<S>>) -> Result<Point<S>> {
    let (pre_len, period_len) = match p {
        Point::Finite(w) => (w.len(), 1),
        Point::Evp { pre, period } => (pre.len(), period.len()),
    };
    let out: Vec<Letter<S>> = (1..=pre_len + period_len).map(|n| coord(p, n)).collect::<Result<_>>()?;
    assemble(out, pre_len)
}

/// Builds a point from the coordinates `1..pre_len` followed by one period.
fn assemble<S: Symbol>(out: Vec<Letter<S>>, pre_len: usize) -> Result<Point<S>> {
    let first_empty = out.iter().position(Letter::is_empty);
    if let Some(i) = first_empty {
        if out[i..].iter().any(|l| !l.is_empty()) {
            return Err(Error::InvalidCode("output has a symbol after an empty coordinate".into()));
        }
        let w = out[..i].iter().map(|l| l.sym().cloned().unwrap()).collect::<Vec<_>>();
        return Ok(Point::finite(w));
    }
    let syms: Vec<S> = out.into_iter().map(|l| l.sym().cloned().unwrap()).collect();
    Ok(Point::evp(syms[..pre_len].to_vec(), syms[pre_len..].to_vec()))
}

/// Structural and sampled checks of the code axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub prefix_free: bool,
    pub total: bool,
    pub upsilon_suffix_closed: bool,
    pub c_empty_invariant: bool,
    pub fibers_finitely_defined: bool,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.prefix_free && self.total && self.upsilon_suffix_closed && self.c_empty_invariant && self.fibers_finitely_defined
    }
}

fn is_empty_label(l: &OutLabel) -> bool {
    matches!(l, OutLabel::Const(Letter::Empty))
}

/// For every leaf path with output `empty`, each suffix that is itself a
/// complete leaf path also outputs `empty`.
fn upsilon_closed(t: &Trie<OutLabel>) -> bool {
    fn walk(node: &Node<OutLabel>, guards: &[LetterSet]) -> bool {
        match node {
            Node::Leaf(l) => !guards.is_empty() || is_empty_label(l) || matches!(l, OutLabel::Map { .. }),
            Node::Branch { .. } => {
                let Some((g, rest)) = guards.split_first() else { return true };
                node.regions().into_iter().all(|(r, c)| r.intersect(g).is_empty() || walk(c, rest))
            }
        }
    }
    t.paths()
        .into_iter()
        .filter(|(_, l)| is_empty_label(l))
        .all(|(guards, _)| (1..guards.len()).all(|s| walk(&t.root, &guards[s..])))
}

pub fn validate<R: Rng>(code: &SlidingBlockCode, samples: usize, rng: &mut R) -> ValidationReport {
    match &code.rule {
        LocalRule::Trie(t) => ValidationReport {
            prefix_free: true,
            total: true,
            upsilon_suffix_closed: upsilon_closed(t),
            c_empty_invariant: fds::shift_invariant_exact(&fiber_trie(t, &Letter::Empty), &code.domain),
            fibers_finitely_defined: true,
        },
        LocalRule::Computable(r) => {
            let mut pts = code.domain.enumerate_finite_points(3, 3);
            pts.extend(code.domain.sample_points(samples, 20, rng));
            pts.extend(code.domain.representatives().into_iter().filter_map(|a| code.domain.complete(&[a], 0, 100)));
            let total = pts.iter().all(|p| r.eval_at(p, 1).is_ok());
            let inv = fds::fds_shift_invariant(&code.fiber(&Letter::Empty), &code.domain, 3, samples, rng);
            ValidationReport {
                prefix_free: true,
                total,
                upsilon_suffix_closed: true,
                c_empty_invariant: inv == fds::ShiftInvariance::HoldsOnSamples,
                fibers_finitely_defined: total,
            }
        }
    }
}

/// A rule given as an explicit table of words, checked for prefix-freeness.
#[derive(Clone, Debug)]
pub struct WordTable {
    pub words: Vec<(Vec<Letter>, OutLabel)>,
}

impl WordTable {
    pub fn prefix_free(&self) -> bool {
        self.words.iter().enumerate().all(|(i, (u, _))| {
            self.words.iter().enumerate().all(|(j, (v, _))| i == j || !v.starts_with(u))
        })
    }

    /// Trie with the table's words; unlisted letters fall to `otherwise`.
    pub fn to_trie(&self, otherwise: OutLabel) -> Result<Trie<OutLabel>> {
        if !self.prefix_free() {
            return Err(Error::InvalidCode("rule words are not prefix-free".into()));
        }
        fn build(words: &[(&[Letter], &OutLabel)], otherwise: &OutLabel) -> Node<OutLabel> {
            if let Some((_, l)) = words.iter().find(|(w, _)| w.is_empty()) {
                return Node::Leaf((*l).clone());
            }
            if words.is_empty() {
                return Node::Leaf(otherwise.clone());
            }
            let mut heads: Vec<Letter> = words.iter().map(|(w, _)| w[0]).collect();
            heads.sort();
            heads.dedup();
            let edges = heads
                .into_iter()
                .map(|h| {
                    let sub: Vec<(&[Letter], &OutLabel)> =
                        words.iter().filter(|(w, _)| w[0] == h).map(|(w, l)| (&w[1..], *l)).collect();
                    (LetterSet::letter(h), build(&sub, otherwise))
                })
                .collect();
            Node::branch(edges, Node::Leaf(otherwise.clone()))
        }
        let ws: Vec<(&[Letter], &OutLabel)> = self.words.iter().map(|(w, l)| (w.as_slice(), l)).collect();
        Ok(Trie::new(build(&ws, &otherwise)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail(Point),
}

impl Check {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }
}

/// `Φ(σx) = σΦ(x)` on every sample.
pub fn check_shift_commute<S: Symbol>(f: impl Fn(&Point) -> Result<Point<S>>, samples: &[Point]) -> Result<Check> {
    for p in samples {
        if f(&p.shift())? != f(p)?.shift() {
            return Ok(Check::Fail(p.clone()));
        }
    }
    Ok(Check::Pass)
}

/// If `σ^period(p) = p` then `σ^period(Φ(p)) = Φ(p)`.
pub fn check_period_preserved<C: Code + ?Sized>(c: &C, p: &Point, period: usize) -> Result<bool> {
    if period == 0 || p.shift_n(period) != *p {
        return Err(Error::Precondition(format!("{p} does not have period {period}")));
    }
    let img = apply(c, p)?;
    Ok(img.shift_n(period) == img)
}

/// The image of the empty sequence is empty or a constant sequence; returns
/// its letter.
pub fn check_empty_image_constant<C: Code<Out = Sym> + ?Sized>(c: &C) -> Result<Letter> {
    if !c.domain().contains_point(&Point::empty()) {
        return Err(Error::Precondition("the empty sequence is not in the domain".into()));
    }
    match apply(c, &Point::empty())? {
        Point::Finite(w) if w.is_empty() => Ok(Letter::Empty),
        Point::Evp { pre, period } if pre.is_empty() && period.len() == 1 => Ok(Letter::Sym(period[0])),
        other => Err(Error::InvalidCode(format!("image of the empty sequence is {other}, not constant"))),
    }
}

/// When `Φ(Ø) = Ø`, images of finite points are no longer than the points.
pub fn check_length_bound<C: Code<Out = Sym> + ?Sized>(c: &C, samples: &[Point]) -> Result<Check> {
    if apply(c, &Point::empty())? != Point::empty() {
        return Err(Error::Precondition("the empty sequence is not mapped to itself".into()));
    }
    for p in samples.iter().filter(|p| p.is_finite()) {
        if apply(c, p)?.length() > p.length() {
            return Ok(Check::Fail(p.clone()));
        }
    }
    Ok(Check::Pass)
}

/// Evidence that a map needs more than `depth + 1` coordinates: two points
/// agreeing on coordinates `n..=n+depth` whose images differ at `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: usize,
    pub p: Point,
    pub q: Point,
}

type MapFn = dyn Fn(&Point) -> Result<Point> + Send + Sync;

/// A point map given only as a procedure.
#[derive(Clone)]
pub struct BlackBox {
    pub name: String,
    pub f: Arc<MapFn>,
}

impl fmt::Debug for BlackBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlackBox({})", self.name)
    }
}

impl BlackBox {
    pub fn new(name: impl Into<String>, f: impl Fn(&Point) -> Result<Point> + Send + Sync + 'static) -> Self {
        BlackBox { name: name.into(), f: Arc::new(f) }
    }

    pub fn call(&self, p: &Point) -> Result<Point> {
        (self.f)(p)
    }
}

/// Searches the candidate points for a [`Witness`] at some coordinate
/// `n <= width`. Candidates where `f` fails are skipped. Finding nothing
/// proves nothing.
pub fn falsify_sliding_block(f: &BlackBox, candidates: &[Point], depth: usize, width: usize) -> Option<Witness> {
    let images: Vec<(Point, Point)> =
        candidates.iter().filter_map(|p| f.call(p).ok().map(|img| (p.clone(), img))).collect();
    for n in 1..=width.max(1) {
        let mut seen: HashMap<Vec<Letter>, (Letter, usize)> = HashMap::new();
        for (i, (p, img)) in images.iter().enumerate() {
            let key = p.window(n, depth + 1);
            let out = img.at(n);
            match seen.get(&key) {
                Some(&(o, j)) if o != out => {
                    return Some(Witness { n, p: images[j].0.clone(), q: p.clone() });
                }
                Some(_) => {}
                None => {
                    seen.insert(key, (out, i));
                }
            }
        }
    }
    None
}

/// Points of `shift` for falsifier searches: samples, the constant-ish
/// completions of many start letters, and tail variants of sample prefixes.
pub fn falsifier_candidates<R: Rng>(shift: &ShiftPresentation, samples: usize, depth: usize, rng: &mut R) -> Vec<Point> {
    let mut pts = shift.sample_points(samples, 20, rng);
    let mut starts = shift.letters().nearest(0, 2 * depth + 8);
    starts.extend(shift.representatives());
    for a in starts {
        for choice in 0..3 {
            pts.extend(shift.complete(&[a], choice, 200));
        }
    }
    let base = pts.clone();
    for p in &base {
        for k in 1..=depth + 2 {
            let w = p.prefix(k);
            if w.len() < k {
                break;
            }
            for choice in 0..3 {
                pts.extend(shift.complete(&w, choice, 200));
            }
            if shift.has_iep_at(&w) {
                pts.push(Point::finite(w));
            }
        }
    }
    pts.extend(shift.enumerate_finite_points(3, 3));
    pts.sort();
    pts.dedup();
    pts
}

/// Letters splitting the behaviour of both rules, for composition.
fn composition_atoms(phi: &Trie<OutLabel>, psi: &Trie<OutLabel>) -> Vec<SymSet> {
    let mut splitters: Vec<SymSet> = Vec::new();
    let phi_paths = phi.paths();
    for (gs, _) in &phi_paths {
        splitters.extend(gs.iter().map(|g| g.syms.clone()));
    }
    let psi_guards: Vec<SymSet> = psi.paths().into_iter().flat_map(|(gs, _)| gs.into_iter().map(|g| g.syms)).collect();
    for (_, l) in &phi_paths {
        match l {
            OutLabel::Map { chain, .. } => {
                for g in &psi_guards {
                    splitters.push(OutLabel::chain_preimage(chain, g));
                }
            }
            OutLabel::Const(_) => {}
        }
    }
    let mut atoms = vec![SymSet::all()];
    for s in splitters {
        atoms = atoms
            .iter()
            .flat_map(|a| [a.intersect(&s), a.difference(&s)])
            .filter(|a| !a.is_empty())
            .collect();
    }
    atoms
}

/// The code `Ψ ∘ Φ`, built as a complete trie over letter classes of depth
/// at most the sum of the two rule depths. Fails with `FuelExhausted` when
/// the trie would need more than `node_budget` nodes.
pub fn compose(phi: &SlidingBlockCode, psi: &SlidingBlockCode, node_budget: usize) -> Result<SlidingBlockCode> {
    let (Some(tp), Some(tq)) = (phi.trie(), psi.trie()) else {
        return Err(Error::Precondition("composition needs trie rules".into()));
    };
    if phi.codomain != psi.domain.alphabet() {
        return Err(Error::Precondition("codomain and domain alphabets differ".into()));
    }
    let atoms = composition_atoms(tp, tq);
    let depth = (tp.depth().max(1) + tq.depth().max(1)) - 1;
    let mut classes: Vec<(LetterSet, Letter)> =
        atoms.iter().map(|a| (LetterSet::of_syms(a.clone()), Letter::Sym(a.nearest(0, 1)[0]))).collect();
    classes.push((LetterSet::only_empty(), Letter::Empty));
    let mut budget = node_budget;
    let root = compose_node(tp, tq, &classes, &mut Vec::new(), depth, &mut budget)?;
    Ok(SlidingBlockCode::from_trie(
        format!("{} then {}", phi.name, psi.name),
        phi.domain.clone(),
        psi.codomain,
        root,
    ))
}

fn compose_node(
    tp: &Trie<OutLabel>,
    tq: &Trie<OutLabel>,
    classes: &[(LetterSet, Letter)],
    reps: &mut Vec<Letter>,
    depth: usize,
    budget: &mut usize,
) -> Result<Node<OutLabel>> {
    if *budget == 0 {
        return Err(Error::FuelExhausted(0));
    }
    *budget -= 1;
    if reps.len() == depth || reps.last().is_some_and(Letter::is_empty) {
        return Ok(Node::Leaf(compose_label(tp, tq, reps)));
    }
    let mut edges = Vec::new();
    for (g, r) in classes {
        reps.push(*r);
        edges.push((g.clone(), compose_node(tp, tq, classes, reps, depth, budget)?));
        reps.pop();
    }
    let default = edges.pop().unwrap().1;
    Ok(Node::branch(edges, default).normalize())
}

/// Label of the composed rule on a window of class representatives.
fn compose_label(tp: &Trie<OutLabel>, tq: &Trie<OutLabel>, reps: &[Letter]) -> OutLabel {
    let padded = |from: usize| -> Point {
        let w: Vec<Sym> = reps[from..].iter().map_while(|l| l.sym().copied()).collect();
        Point::finite(w)
    };
    // Φ's label at each output coordinate j (0-based), relative to the window
    let phi_at = |j: usize| -> OutLabel {
        if j >= reps.len() {
            return OutLabel::Const(tp.eval(&Point::empty()).eval(&[]));
        }
        let label = tp.eval(&padded(j)).clone();
        match label {
            OutLabel::Map { chain, pos } => OutLabel::Map { chain, pos: pos + j },
            c => c,
        }
    };
    let phi_letters: Vec<Letter> = (0..tq.depth().max(1)).map(|j| phi_at(j).eval(reps)).collect();
    let phi_word: Vec<Sym> = phi_letters.iter().map_while(|l| l.sym().copied()).collect();
    match tq.eval(&Point::finite(phi_word)).clone() {
        OutLabel::Const(c) => OutLabel::Const(c),
        OutLabel::Map { chain, pos } => match phi_at(pos) {
            OutLabel::Const(Letter::Sym(b)) => OutLabel::Const(Letter::Sym(chain.iter().fold(b, |v, p| p.apply(v)))),
            OutLabel::Const(Letter::Empty) => OutLabel::Const(Letter::Empty),
            OutLabel::Map { chain: c1, pos: p1 } => {
                OutLabel::Map { chain: c1.into_iter().chain(chain).collect(), pos: p1 }
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Blocks;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shift_code(domain: ShiftPresentation) -> SlidingBlockCode {
        let inner = Node::branch(vec![(LetterSet::only_empty(), Node::Leaf(OutLabel::Const(Letter::Empty)))], Node::Leaf(OutLabel::id(1)));
        let root = Node::branch(vec![(LetterSet::only_empty(), Node::Leaf(OutLabel::Const(Letter::Empty)))], inner);
        SlidingBlockCode::from_trie("shift", domain.clone(), domain.alphabet(), root)
    }

    fn halving() -> SlidingBlockCode {
        let root = Node::branch(
            vec![(LetterSet::only_empty(), Node::Leaf(OutLabel::Const(Letter::Empty)))],
            Node::Leaf(OutLabel::Map { chain: vec![Prim::HalfUp], pos: 0 }),
        );
        SlidingBlockCode::from_trie("halving", ShiftPresentation::full(Alphabet::Naturals), Alphabet::Naturals, root)
    }

    fn identity(domain: ShiftPresentation) -> SlidingBlockCode {
        let root = Node::branch(vec![(LetterSet::only_empty(), Node::Leaf(OutLabel::Const(Letter::Empty)))], Node::Leaf(OutLabel::id(0)));
        SlidingBlockCode::from_trie("identity", domain.clone(), domain.alphabet(), root)
    }

    #[test]
    fn apply_examples() {
        let s = shift_code(ShiftPresentation::full(Alphabet::Naturals));
        assert_eq!(s.apply(&Point::finite(vec![1, 2, 3])).unwrap(), Point::finite(vec![2, 3]));
        assert_eq!(halving().apply(&Point::evp(vec![], vec![3])).unwrap(), Point::evp(vec![], vec![2]));
        assert_eq!(halving().apply(&Point::empty()).unwrap(), Point::empty());
        assert_eq!(halving().apply(&Point::finite(vec![4, 2])).unwrap(), Point::finite(vec![2, 1]));
        assert_eq!(s.anticipation(), Some(1));
        assert_eq!(s.apply(&Point::finite(vec![0])), Err(Error::OutsideDomain));
    }

    #[test]
    fn validation_of_shift_code() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = validate(&shift_code(ShiftPresentation::full(Alphabet::Naturals)), 50, &mut rng);
        assert!(r.all_pass(), "{r:?}");
        let t = WordTable {
            words: vec![
                (vec![Letter::Sym(1)], OutLabel::Const(Letter::Sym(1))),
                (vec![Letter::Sym(1), Letter::Sym(2)], OutLabel::Const(Letter::Sym(2))),
            ],
        };
        assert!(!t.prefix_free());
        assert!(t.to_trie(OutLabel::Const(Letter::Empty)).is_err());
    }

    #[test]
    fn fibers_of_shift_code() {
        let full = ShiftPresentation::full(Alphabet::Naturals);
        let s = shift_code(full.clone());
        let f7 = s.fiber(&Letter::Sym(7));
        assert_eq!(f7.member(&Point::finite(vec![3, 7])), fds::Membership::In);
        assert_eq!(f7.member(&Point::finite(vec![7, 3])), fds::Membership::Out);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in full.sample_points(300, 10, &mut rng) {
            let img = s.apply(&p).unwrap().at(1);
            assert_eq!(s.fiber(&img).member(&p), fds::Membership::In);
        }
        let b = ShiftPresentation::edges(Alphabet::Naturals, Arc::new(Blocks)).unwrap();
        let e = shift_code(b.clone()).fiber(&Letter::Empty);
        // inside the block shift the only point with x_2 empty is the empty sequence
        let only = path_trie(&[LetterSet::only_empty()]);
        assert!(fds::equivalent_in(e.as_trie().unwrap(), &only, &b));
    }

    #[test]
    fn corollaries() {
        let h = halving();
        assert!(check_period_preserved(&h, &Point::evp(vec![], vec![3, 5]), 2).unwrap());
        assert!(check_period_preserved(&h, &Point::empty(), 1).unwrap());
        assert!(check_period_preserved(&h, &Point::evp(vec![1], vec![5]), 1).is_err());
        assert_eq!(check_empty_image_constant(&h).unwrap(), Letter::Empty);
        let samples = vec![Point::finite(vec![1, 2]), Point::empty(), Point::finite(vec![4, 2])];
        assert!(check_length_bound(&shift_code(ShiftPresentation::full(Alphabet::Naturals)), &samples).unwrap().passed());
    }

    #[test]
    fn shift_commutation() {
        let full = ShiftPresentation::full(Alphabet::Naturals);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts = full.sample_points(200, 10, &mut rng);
        for c in [shift_code(full.clone()), halving()] {
            assert!(check_shift_commute(|p| c.apply(p), &pts).unwrap().passed());
        }
        // adds 1 to the first coordinate only
        let bump = |p: &Point| -> Result<Point> {
            Ok(match p {
                Point::Finite(w) if !w.is_empty() => {
                    let mut v = w.clone();
                    v[0] += 1;
                    Point::finite(v)
                }
                Point::Evp { pre, period } => {
                    let mut w = pre.clone();
                    w.extend(period);
                    w[0] += 1;
                    Point::evp(w, period.clone())
                }
                other => other.clone(),
            })
        };
        assert!(!check_shift_commute(bump, &pts).unwrap().passed());
    }

    #[test]
    fn falsifier_on_shift_finds_nothing() {
        let full = ShiftPresentation::full(Alphabet::Naturals);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = shift_code(full.clone());
        let bb = BlackBox::new("shift", move |p| s.apply(p));
        let cands = falsifier_candidates(&full, 100, 3, &mut rng);
        assert_eq!(falsify_sliding_block(&bb, &cands, 1, 4), None);
        assert!(falsify_sliding_block(&bb, &cands, 0, 4).is_some());
    }

    #[test]
    fn composition() {
        let full = ShiftPresentation::full(Alphabet::Naturals);
        let s = shift_code(full.clone());
        let ss = compose(&s, &s, 10_000).unwrap();
        assert_eq!(ss.apply(&Point::finite(vec![1, 2, 3])).unwrap(), Point::finite(vec![3]));
        assert!(ss.anticipation().unwrap() <= 2);
        let hh = compose(&halving(), &halving(), 10_000).unwrap();
        assert_eq!(hh.apply(&Point::evp(vec![], vec![7])).unwrap(), Point::evp(vec![], vec![2]));
        let hi = compose(&halving(), &identity(full.clone()), 10_000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in full.sample_points(200, 30, &mut rng) {
            assert_eq!(hi.apply(&p).unwrap(), halving().apply(&p).unwrap());
            assert_eq!(ss.apply(&p).unwrap(), p.shift_n(2));
        }
        assert!(matches!(compose(&s, &s, 2), Err(Error::FuelExhausted(_))));
    }
}
