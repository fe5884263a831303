//! The nine worked examples: shifts, codes, maps that are not codes, and
//! inverses, together with the properties each one is known to have.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chl::{
    certify_t1, certify_t2, empirical_continuity, family_catalog, output_letters, verify_witness, ChlBudget, ContinuityVerdict,
};
use crate::error::{Error, Result};
use crate::fds::Node;
use crate::point::{Alphabet, Letter, Point, Sym};
use crate::rules::{Blocks, Climb, Descend, Drift};
use crate::par::{self, Exec};
use crate::sbc::{
    apply_with, check_shift_commute, falsifier_candidates, falsify_sliding_block, validate, BlackBox, ComputableRule, LocalRule,
    OutLabel, Prim, SlidingBlockCode,
};
use crate::topology::PointFamily;
use crate::shiftspace::ShiftPresentation;
use crate::symset::{LetterSet, SymSet};

/// Parameters the examples leave open.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub k: Sym,
    pub d: Sym,
}

impl Default for Params {
    fn default() -> Self {
        Params { k: 2, d: 3 }
    }
}

/// Fuel for the computable rules of examples b), c) and e).
pub const RULE_FUEL: usize = 4096;

fn leaf_const(a: Sym) -> Node<OutLabel> {
    Node::Leaf(OutLabel::Const(Letter::Sym(a)))
}

fn leaf_empty() -> Node<OutLabel> {
    Node::Leaf(OutLabel::Const(Letter::Empty))
}

fn guard(s: SymSet) -> LetterSet {
    LetterSet::of_syms(s)
}

pub fn full_naturals() -> ShiftPresentation {
    ShiftPresentation::full(Alphabet::Naturals)
}

/// The shift map on `domain`: output coordinate `n` is input coordinate
/// `n + 1`.
pub fn shift_code(domain: ShiftPresentation) -> SlidingBlockCode {
    let inner = Node::branch(vec![(LetterSet::only_empty(), leaf_empty())], Node::Leaf(OutLabel::id(1)));
    let root = Node::branch(vec![(LetterSet::only_empty(), leaf_empty())], inner);
    let alphabet = domain.alphabet();
    SlidingBlockCode::from_trie("shift", domain, alphabet, root)
}

pub fn identity_code(domain: ShiftPresentation) -> SlidingBlockCode {
    let root = Node::branch(vec![(LetterSet::only_empty(), leaf_empty())], Node::Leaf(OutLabel::id(0)));
    let alphabet = domain.alphabet();
    SlidingBlockCode::from_trie("identity", domain, alphabet, root)
}

/// Points inside one block `{2i-1, 2i}` of the naturals, plus the empty
/// sequence.
pub fn shift_b() -> ShiftPresentation {
    ShiftPresentation::edges(Alphabet::Naturals, Arc::new(Blocks)).expect("valid rule")
}

fn tail_max(p: &Point, n: usize) -> Letter {
    match p {
        Point::Finite(_) => Letter::Empty,
        Point::Evp { pre, period } => {
            let from_pre = pre.iter().skip(n - 1).max();
            let m = period.iter().max().expect("nonempty period");
            Letter::Sym(*from_pre.map_or(m, |a| a.max(m)))
        }
    }
}

/// `x -> (max_{j>=n} x_j)_n` with the empty letter above every symbol.
pub fn max_map() -> BlackBox {
    BlackBox::new("tail-max", |p| {
        if !shift_b().contains_point(p) {
            return Err(Error::OutsideDomain);
        }
        apply_with(p, |q, n| Ok(tail_max(q, n)))
    })
}

/// The tail maximum written as a rule on finite windows; it only answers
/// once the block's larger letter or the end of the point is seen.
pub fn max_rule_code() -> SlidingBlockCode {
    let rule = ComputableRule::new("tail-max", RULE_FUEL, true, |w| {
        let Letter::Sym(a) = w[0] else { return Some(Letter::Empty) };
        let top = 2 * Prim::HalfUp.apply(a);
        for l in w {
            match l {
                Letter::Empty => return Some(Letter::Empty),
                Letter::Sym(x) if *x == top => return Some(Letter::Sym(top)),
                Letter::Sym(_) => {}
            }
        }
        None
    });
    SlidingBlockCode::new("tail-max", shift_b(), Alphabet::Naturals, LocalRule::Computable(rule))
}

/// `x_{i+1} >= x_i - 1`.
pub fn shift_c() -> ShiftPresentation {
    ShiftPresentation::edges(Alphabet::Naturals, Arc::new(Drift)).expect("valid rule")
}

/// `(Φx)_n = x_{n + x_n}`.
pub fn code_c() -> SlidingBlockCode {
    let rule = ComputableRule::new("jump", RULE_FUEL, true, |w| {
        let Letter::Sym(a) = w[0] else { return Some(Letter::Empty) };
        w.get(a as usize).copied()
    });
    SlidingBlockCode::new("jump", shift_c(), Alphabet::Naturals, LocalRule::Computable(rule))
}

/// `x -> ceil(x / 2)` letterwise on the full shift over the naturals.
pub fn code_d() -> SlidingBlockCode {
    let root = Node::branch(
        vec![(LetterSet::only_empty(), leaf_empty())],
        Node::Leaf(OutLabel::Map { chain: vec![Prim::HalfUp], pos: 0 }),
    );
    SlidingBlockCode::from_trie("halving", full_naturals(), Alphabet::Naturals, root)
}

/// On block `i` the code shifts by `i`, so its anticipation is `i`.
pub fn code_e() -> SlidingBlockCode {
    let rule = ComputableRule::new("block-shift", RULE_FUEL, true, |w| {
        let Letter::Sym(a) = w[0] else { return Some(Letter::Empty) };
        w.get(Prim::HalfUp.apply(a) as usize).copied()
    });
    SlidingBlockCode::new("block-shift", shift_b(), Alphabet::Naturals, LocalRule::Computable(rule))
}

pub fn shift_f() -> ShiftPresentation {
    ShiftPresentation::edges(Alphabet::Integers, Arc::new(Climb { top: None })).expect("valid rule")
}

pub fn code_f() -> SlidingBlockCode {
    let root = Node::branch(
        vec![
            (LetterSet::only_empty(), leaf_const(0)),
            (guard(SymSet::at_most(-1)), leaf_const(-1)),
            (guard(SymSet::singleton(0)), leaf_empty()),
        ],
        Node::Leaf(OutLabel::id(0)),
    );
    SlidingBlockCode::from_trie("signed-collapse", shift_f(), Alphabet::Integers, root)
}

/// Length of the run of `target` starting at coordinate `n`, or `None`
/// when it never ends.
fn run_length(p: &Point, n: usize, target: Letter) -> Option<usize> {
    let horizon = p.structure_len() + 1;
    let mut r = 0;
    while p.at(n + r) == target {
        r += 1;
        if r > horizon {
            return None;
        }
    }
    Some(r)
}

fn checked_inverse(
    name: &str,
    domain: ShiftPresentation,
    coord: impl Fn(&Point, usize) -> Result<Letter> + Send + Sync + 'static,
) -> BlackBox {
    BlackBox::new(name, move |y| {
        let x = apply_with(y, &coord)?;
        if domain.contains_point(&x) {
            Ok(x)
        } else {
            Err(Error::OutsideDomain)
        }
    })
}

/// Inverse of [`code_f`] on its image; a run of `-1` of length `r`
/// decodes to `-r, ..., -1`.
pub fn inverse_f() -> BlackBox {
    checked_inverse("signed-collapse inverse", shift_f(), |y, n| {
        Ok(match y.at(n) {
            Letter::Empty => Letter::Sym(0),
            Letter::Sym(0) => Letter::Empty,
            Letter::Sym(-1) => match run_length(y, n, Letter::Sym(-1)) {
                Some(r) => Letter::Sym(-(r as Sym)),
                None => return Err(Error::OutsideDomain),
            },
            Letter::Sym(a) if a > 0 => Letter::Sym(a),
            Letter::Sym(_) => return Err(Error::OutsideDomain),
        })
    })
}

/// Example g) needs letters at most `k`.
pub fn shift_g(k: Sym) -> ShiftPresentation {
    ShiftPresentation::edges(Alphabet::Integers, Arc::new(Climb { top: Some(k) })).expect("valid rule")
}

pub fn code_g(k: Sym) -> SlidingBlockCode {
    let root = Node::branch(
        vec![
            (LetterSet::only_empty(), leaf_const(0)),
            (guard(SymSet::at_most(-1)), leaf_const(0)),
            (guard(SymSet::singleton(0)), leaf_empty()),
        ],
        Node::Leaf(OutLabel::id(0)),
    );
    SlidingBlockCode::from_trie("bounded-collapse", shift_g(k), Alphabet::Integers, root)
}

/// Inverse of [`code_g`]: it has to know whether a run of zeros ever ends.
pub fn inverse_g(k: Sym) -> BlackBox {
    checked_inverse("bounded-collapse inverse", shift_g(k), |y, n| {
        Ok(match y.at(n) {
            Letter::Empty => Letter::Sym(0),
            Letter::Sym(0) => match run_length(y, n, Letter::Sym(0)) {
                Some(r) => Letter::Sym(-(r as Sym)),
                None => Letter::Empty,
            },
            Letter::Sym(a) if a > 0 => Letter::Sym(a),
            Letter::Sym(_) => return Err(Error::OutsideDomain),
        })
    })
}

pub fn shift_h(k: Sym) -> Result<ShiftPresentation> {
    ShiftPresentation::edges(Alphabet::Naturals, Arc::new(Descend::free(k)?))
}

/// Keeps `x_n` when both `x_n` and `x_{n+1}` are at most `k`, writes `d`
/// otherwise.
pub fn code_h(p: Params) -> Result<SlidingBlockCode> {
    let low = guard(SymSet::range(1, p.k));
    let inner = Node::branch(vec![(low.clone(), Node::Leaf(OutLabel::id(0)))], leaf_const(p.d));
    let root = Node::branch(vec![(low, inner)], leaf_const(p.d));
    Ok(SlidingBlockCode::from_trie("low-pairs", shift_h(p.k)?, Alphabet::Naturals, root))
}

pub fn shift_i(k: Sym) -> Result<ShiftPresentation> {
    ShiftPresentation::edges(Alphabet::Naturals, Arc::new(Descend::below(k)?))
}

fn check_i(p: Params) -> Result<()> {
    if p.d <= p.k {
        return Err(Error::InvalidPresentation(format!("example i) needs d > k, got d = {}, k = {}", p.d, p.k)));
    }
    Ok(())
}

/// Keeps letters up to `k`, writes `d` for the rest.
pub fn code_i(p: Params) -> Result<SlidingBlockCode> {
    check_i(p)?;
    let root = Node::branch(vec![(guard(SymSet::range(1, p.k)), Node::Leaf(OutLabel::id(0)))], leaf_const(p.d));
    Ok(SlidingBlockCode::from_trie("clip", shift_i(p.k)?, Alphabet::Naturals, root))
}

/// Inverse of [`code_i`]: a run of `r` copies of `d` decodes to `k + r`.
pub fn inverse_i(p: Params) -> Result<BlackBox> {
    check_i(p)?;
    let domain = shift_i(p.k)?;
    Ok(checked_inverse("clip inverse", domain, move |y, n| {
        Ok(match y.at(n) {
            Letter::Sym(a) if a <= p.k => Letter::Sym(a),
            Letter::Sym(a) if a == p.d => match run_length(y, n, Letter::Sym(p.d)) {
                Some(r) => Letter::Sym(p.k + r as Sym),
                None => Letter::Empty,
            },
            _ => return Err(Error::OutsideDomain),
        })
    }))
}

/// The code or map a gallery name refers to, with `gallery:x(k=K,d=D)`
/// parameters.
pub fn code_by_name(id: &str, p: Params) -> Result<SlidingBlockCode> {
    match id {
        "a" => Ok(shift_code(full_naturals())),
        "b" => Ok(max_rule_code()),
        "c" => Ok(code_c()),
        "d" => Ok(code_d()),
        "e" => Ok(code_e()),
        "f" => Ok(code_f()),
        "g" => Ok(code_g(p.k)),
        "h" => code_h(p),
        "i" => code_i(p),
        other => Err(Error::InvalidCode(format!("no gallery example {other}"))),
    }
}

/// Domain shift of each example.
pub fn shift_by_name(id: &str, p: Params) -> Result<ShiftPresentation> {
    match id {
        "a" | "d" => Ok(full_naturals()),
        "b" | "e" => Ok(shift_b()),
        "c" => Ok(shift_c()),
        "f" => Ok(shift_f()),
        "g" => Ok(shift_g(p.k)),
        "h" => shift_h(p.k),
        "i" => shift_i(p.k),
        other => Err(Error::InvalidPresentation(format!("no gallery example {other}"))),
    }
}

pub const IDS: [&str; 9] = ["a", "b", "c", "d", "e", "f", "g", "h", "i"];

/// Which map an example is about.
#[derive(Clone, Debug)]
pub enum Subject {
    Code(SlidingBlockCode),
    Map(BlackBox),
}

impl Subject {
    pub fn call(&self, p: &Point) -> Result<Point> {
        match self {
            Subject::Code(c) => c.apply(p),
            Subject::Map(f) => f.call(p),
        }
    }

    fn black_box(&self) -> BlackBox {
        match self {
            Subject::Code(c) => {
                let c = c.clone();
                BlackBox::new(c.name.clone(), move |p| c.apply(p))
            }
            Subject::Map(f) => f.clone(),
        }
    }
}

/// A property an example is known to have. Negative properties pass when
/// a witness is found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    ShiftCommuting,
    EqualsShiftMap,
    AnticipationOne,
    SlidingBlock,
    NotSlidingBlock,
    EmptyFiberTrivial,
    Continuous,
    Discontinuous,
    /// Continuity evidence from convergent families only.
    ContinuousOnFamilies,
    UnboundedAnticipation,
    Onto,
    Injective,
    NotInjective,
    InverseRoundtrip,
    InverseShiftCommuting,
    InverseUnboundedAnticipation,
    InverseContinuousOnFamilies,
    InverseNotSlidingBlock,
    ImageShiftSpace,
    ImageNotShiftSpace,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::ShiftCommuting => "shift-commuting",
            Property::EqualsShiftMap => "equals-shift-map",
            Property::AnticipationOne => "anticipation-one",
            Property::SlidingBlock => "sliding-block-code",
            Property::NotSlidingBlock => "not-sliding-block-code",
            Property::EmptyFiberTrivial => "empty-fiber-trivial",
            Property::Continuous => "continuous",
            Property::Discontinuous => "discontinuous",
            Property::ContinuousOnFamilies => "continuous-on-families",
            Property::UnboundedAnticipation => "unbounded-anticipation",
            Property::Onto => "onto",
            Property::Injective => "injective",
            Property::NotInjective => "not-injective",
            Property::InverseRoundtrip => "inverse-roundtrip",
            Property::InverseShiftCommuting => "inverse-shift-commuting",
            Property::InverseUnboundedAnticipation => "inverse-unbounded-anticipation",
            Property::InverseContinuousOnFamilies => "inverse-continuous-on-families",
            Property::InverseNotSlidingBlock => "inverse-not-sliding-block-code",
            Property::ImageShiftSpace => "image-shift-space",
            Property::ImageNotShiftSpace => "image-not-shift-space",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Unknown(String),
}

/// What the check is expected to return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Pass,
    /// Declared out of reach, with the reason.
    Unknown(&'static str),
}

#[derive(Clone, Debug)]
pub struct Expectation {
    pub property: Property,
    pub expected: Expected,
    /// Short label of the claim in the example list, e.g. `ex-f/not-continuous`.
    pub anchor: &'static str,
}

fn expect(property: Property, anchor: &'static str) -> Expectation {
    Expectation { property, expected: Expected::Pass, anchor }
}

#[derive(Clone, Debug)]
pub struct GalleryCase {
    pub id: &'static str,
    pub params: Params,
    pub shift: ShiftPresentation,
    pub subject: Subject,
    pub inverse: Option<BlackBox>,
    pub expectations: Vec<Expectation>,
    /// Defaults chosen where the example leaves things open.
    pub metadata: Vec<String>,
}

const PARTITION_NOTE: &str = "partition A_i = {2i-1, 2i}";

pub fn build(id: &str) -> Result<GalleryCase> {
    build_with(id, Params::default())
}

pub fn build_with(id: &str, p: Params) -> Result<GalleryCase> {
    use Property::*;
    let params_note = format!("k = {}, d = {}", p.k, p.d);
    let (id, subject, inverse, expectations, metadata): (&'static str, Subject, Option<BlackBox>, Vec<Expectation>, Vec<String>) =
        match id {
            "a" => (
                "a",
                Subject::Code(shift_code(full_naturals())),
                None,
                vec![
                    expect(ShiftCommuting, "ex-a/shift-commuting"),
                    expect(EqualsShiftMap, "ex-a/coincides-with-shift"),
                    expect(AnticipationOne, "ex-a/anticipation-1"),
                    expect(Discontinuous, "ex-a/shift-continuous-iff-column-finite"),
                ],
                vec!["domain: full shift over the naturals".into()],
            ),
            "b" => (
                "b",
                Subject::Map(max_map()),
                None,
                vec![
                    expect(ShiftCommuting, "ex-b/shift-commuting"),
                    expect(EmptyFiberTrivial, "ex-b/empty-fiber"),
                    expect(NotSlidingBlock, "ex-b/not-sliding-block-code"),
                    expect(Discontinuous, "ex-b/not-continuous"),
                ],
                vec![PARTITION_NOTE.into()],
            ),
            "c" => (
                "c",
                Subject::Code(code_c()),
                None,
                vec![
                    expect(ShiftCommuting, "ex-c/sliding-block-code"),
                    expect(SlidingBlock, "ex-c/sliding-block-code"),
                    expect(Discontinuous, "ex-c/not-continuous"),
                    expect(UnboundedAnticipation, "ex-c/unbounded-anticipation"),
                ],
                vec![],
            ),
            "d" => (
                "d",
                Subject::Code(code_d()),
                None,
                vec![
                    expect(ShiftCommuting, "ex-d/sliding-block-code"),
                    expect(SlidingBlock, "ex-d/sliding-block-code"),
                    expect(Onto, "ex-d/onto"),
                    expect(NotInjective, "ex-d/not-one-to-one"),
                    expect(Continuous, "ex-d/continuous"),
                ],
                vec![],
            ),
            "e" => (
                "e",
                Subject::Code(code_e()),
                None,
                vec![
                    expect(ShiftCommuting, "ex-e/sliding-block-code"),
                    expect(SlidingBlock, "ex-e/sliding-block-code"),
                    Expectation {
                        property: Continuous,
                        expected: Expected::Unknown("fibers are not unions of finitely many cylinders in trie form"),
                        anchor: "ex-e/continuous",
                    },
                    expect(ContinuousOnFamilies, "ex-e/continuous"),
                    expect(UnboundedAnticipation, "ex-e/unbounded-anticipation"),
                ],
                vec![PARTITION_NOTE.into(), "block i code: shift by i".into()],
            ),
            "f" => (
                "f",
                Subject::Code(code_f()),
                Some(inverse_f()),
                vec![
                    expect(ShiftCommuting, "ex-f/one-block-code"),
                    expect(SlidingBlock, "ex-f/one-block-code"),
                    expect(Injective, "ex-f/invertible"),
                    expect(InverseRoundtrip, "ex-f/invertible"),
                    expect(Discontinuous, "ex-f/not-continuous"),
                    expect(InverseShiftCommuting, "ex-f/inverse-sliding-block-code"),
                    expect(InverseUnboundedAnticipation, "ex-f/inverse-unbounded-anticipation"),
                ],
                vec!["finite points of the closure derived from the extension property".into()],
            ),
            "g" => (
                "g",
                Subject::Code(code_g(p.k)),
                Some(inverse_g(p.k)),
                vec![
                    expect(ShiftCommuting, "ex-g/one-block-code"),
                    expect(SlidingBlock, "ex-g/one-block-code"),
                    expect(Injective, "ex-g/injective"),
                    expect(InverseRoundtrip, "ex-g/injective"),
                    expect(Continuous, "ex-g/continuous"),
                    expect(InverseNotSlidingBlock, "ex-g/inverse-not-sliding-block-code"),
                    expect(ImageNotShiftSpace, "ex-g/image-not-shift-space"),
                ],
                vec![params_note],
            ),
            "h" => (
                "h",
                Subject::Code(code_h(p)?),
                None,
                vec![
                    expect(ShiftCommuting, "ex-h/two-block-code"),
                    expect(SlidingBlock, "ex-h/two-block-code"),
                    expect(Continuous, "ex-h/continuous"),
                    expect(NotInjective, "ex-h/not-invertible"),
                    expect(ImageShiftSpace, "ex-h/image-shift-space"),
                ],
                vec![params_note],
            ),
            "i" => (
                "i",
                Subject::Code(code_i(p)?),
                Some(inverse_i(p)?),
                vec![
                    expect(ShiftCommuting, "ex-i/one-block-code"),
                    expect(SlidingBlock, "ex-i/one-block-code"),
                    expect(Continuous, "ex-i/continuous"),
                    expect(ImageShiftSpace, "ex-i/image-shift-space"),
                    expect(Injective, "ex-i/invertible"),
                    expect(InverseRoundtrip, "ex-i/invertible"),
                    expect(InverseContinuousOnFamilies, "ex-i/inverse-continuous"),
                    expect(InverseNotSlidingBlock, "ex-i/inverse-not-sliding-block-code"),
                ],
                vec![params_note],
            ),
            other => return Err(Error::InvalidCode(format!("no gallery example {other}"))),
        };
    Ok(GalleryCase { id, params: p, shift: shift_by_name(id, p)?, subject, inverse, expectations, metadata })
}

/// Budgets for [`run_all`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GalleryBudget {
    pub samples: usize,
    /// Largest window the falsifier rules out.
    pub depth: usize,
    pub chl: ChlBudget,
}

impl Default for GalleryBudget {
    fn default() -> Self {
        GalleryBudget { samples: 300, depth: 8, chl: ChlBudget::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportLine {
    pub id: &'static str,
    pub property: Property,
    pub verdict: Verdict,
    pub expected: Expected,
    pub anchor: &'static str,
}

impl ReportLine {
    pub fn ok(&self) -> bool {
        match (&self.expected, &self.verdict) {
            (_, Verdict::Pass) => true,
            (Expected::Unknown(_), Verdict::Unknown(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match (&self.verdict, &self.expected) {
            (Verdict::Pass, _) => "pass".to_string(),
            (Verdict::Unknown(_), Expected::Unknown(_)) => "unknown(declared)".to_string(),
            (Verdict::Unknown(r), _) => format!("unknown({r})"),
            (Verdict::Fail(r), _) => format!("fail({r})"),
        };
        write!(f, "{} {} {} {}", self.id, self.property.as_str(), v, self.anchor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<ReportLine>,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.lines.iter().all(ReportLine::ok)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

fn seed_for(seed: u64, id: &str) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ id.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64))
}

pub fn gallery_samples<R: Rng>(shift: &ShiftPresentation, n: usize, rng: &mut R) -> Vec<Point> {
    let mut pts = shift.enumerate_finite_points(3, 3);
    pts.extend(shift.sample_points(n, 12, rng));
    pts
}

fn pass_if(ok: bool, why: impl FnOnce() -> String) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail(why())
    }
}

/// Two points of `pts` (or of their first-letter variants) with the same
/// image.
fn find_collision(shift: &ShiftPresentation, f: &Subject, pts: &[Point]) -> Option<(Point, Point)> {
    let mut cands: Vec<Point> = pts.to_vec();
    let mut firsts = shift.letters().nearest(0, 6);
    firsts.extend(shift.representatives());
    for p in pts.iter().take(60) {
        let tail = p.shift();
        for &a in &firsts {
            let q = Point::concat(&[a], &tail);
            if shift.contains_point(&q) {
                cands.push(q);
            }
        }
    }
    let mut seen: HashMap<Point, Point> = HashMap::new();
    for p in cands {
        let Ok(img) = f.call(&p) else { continue };
        match seen.get(&img) {
            Some(q) if *q != p => return Some((q.clone(), p)),
            Some(_) => {}
            None => {
                seen.insert(img, p);
            }
        }
    }
    None
}

impl GalleryCase {
    fn code(&self) -> Option<&SlidingBlockCode> {
        match &self.subject {
            Subject::Code(c) => Some(c),
            Subject::Map(_) => None,
        }
    }

    fn continuity(&self, budget: ChlBudget) -> Result<ContinuityVerdict> {
        let code = self.code().ok_or_else(|| Error::Precondition("continuity certificates need a code".into()))?;
        let empty = self.shift.contains_point(&Point::empty()).then(|| code.apply(&Point::empty())).transpose()?;
        match empty {
            Some(Point::Evp { pre, period }) if pre.is_empty() && period.len() == 1 => {
                certify_t2(code, period[0], 3, budget)
            }
            _ => certify_t1(code, budget),
        }
    }

    /// Falsifier witnesses against windows of every width up to `depth`.
    fn needs_every_window(&self, f: &BlackBox, cands: &[Point], depth: usize) -> Verdict {
        for k in 1..=depth {
            if falsify_sliding_block(f, cands, k - 1, 2 * depth + 4).is_none() {
                return Verdict::Fail(format!("no witness against windows of width {k}"));
            }
        }
        Verdict::Pass
    }

    fn image_candidates(&self, cands: &[Point]) -> Vec<Point> {
        let mut imgs: Vec<Point> = cands.iter().filter_map(|p| self.subject.call(p).ok()).collect();
        imgs.sort();
        imgs.dedup();
        imgs
    }

    fn check(&self, property: Property, budget: GalleryBudget, rng: &mut ChaCha8Rng) -> Verdict {
        match self.check_inner(property, budget, rng) {
            Ok(v) => v,
            Err(Error::FuelExhausted(n)) => Verdict::Unknown(format!("fuel {n} exhausted")),
            Err(e) => Verdict::Fail(e.to_string()),
        }
    }

    fn check_inner(&self, property: Property, budget: GalleryBudget, rng: &mut ChaCha8Rng) -> Result<Verdict> {
        use Property::*;
        let samples = gallery_samples(&self.shift, budget.samples, rng);
        let no_code = || Error::Precondition("property needs a code".into());
        let no_inverse = || Error::Precondition("property needs an inverse".into());
        Ok(match property {
            ShiftCommuting => {
                let r = check_shift_commute(|p| self.subject.call(p), &samples)?;
                pass_if(r.passed(), || format!("{r:?}"))
            }
            EqualsShiftMap => {
                let bad = samples.iter().find(|p| self.subject.call(p).ok().as_ref() != Some(&p.shift()));
                pass_if(bad.is_none(), || format!("differs at {}", bad.expect("some")))
            }
            AnticipationOne => {
                let a = self.code().ok_or_else(no_code)?.anticipation();
                pass_if(a == Some(1), || format!("anticipation {a:?}"))
            }
            SlidingBlock => {
                let r = validate(self.code().ok_or_else(no_code)?, budget.samples.min(200), rng);
                pass_if(r.all_pass(), || format!("{r:?}"))
            }
            NotSlidingBlock => {
                let cands = falsifier_candidates(&self.shift, budget.samples, budget.depth, rng);
                self.needs_every_window(&self.subject.black_box(), &cands, budget.depth)
            }
            EmptyFiberTrivial => {
                let bad = samples.iter().find(|p| self.subject.call(p).is_ok_and(|q| q.is_empty_seq()) != p.is_empty_seq());
                pass_if(bad.is_none(), || format!("at {}", bad.expect("some")))
            }
            Continuous => match self.continuity(budget.chl)? {
                v if v.is_continuous() => Verdict::Pass,
                ContinuityVerdict::Unknown(r) => Verdict::Unknown(r),
                v => Verdict::Fail(v.label().into()),
            },
            Discontinuous => match &self.subject {
                Subject::Code(_) => match self.continuity(budget.chl)? {
                    ContinuityVerdict::CertifiedDiscontinuous(w) => {
                        pass_if(verify_witness(&w, budget.chl)?, || "witness did not verify".into())
                    }
                    ContinuityVerdict::Unknown(r) => Verdict::Unknown(r),
                    v => Verdict::Fail(v.label().into()),
                },
                Subject::Map(f) => {
                    let f = f.clone();
                    let fams = family_catalog(&self.shift, budget.chl.families);
                    let r = empirical_continuity(move |p| f.call(p), &fams, budget.chl);
                    pass_if(!r.refuted.is_empty(), || "no family refuted continuity".into())
                }
            },
            ContinuousOnFamilies => {
                let f = self.subject.clone();
                let fams = family_catalog(&self.shift, budget.chl.families);
                let r = empirical_continuity(move |p| f.call(p), &fams, budget.chl);
                pass_if(r.refuted.is_empty() && r.consistent > 0, || format!("{r:?}"))
            }
            UnboundedAnticipation => {
                let cands = falsifier_candidates(&self.shift, budget.samples, budget.depth, rng);
                self.needs_every_window(&self.subject.black_box(), &cands, budget.depth.min(6))
            }
            Onto => {
                // every letter a has preimage 2a
                let bad = samples.iter().find(|y| self.subject.call(&y.map(|a| 2 * a)).ok().as_ref() != Some(*y));
                pass_if(bad.is_none(), || format!("no preimage found for {}", bad.expect("some")))
            }
            Injective => pass_if(find_collision(&self.shift, &self.subject, &samples).is_none(), || "collision".into()),
            NotInjective => {
                pass_if(find_collision(&self.shift, &self.subject, &samples).is_some(), || "no collision".into())
            }
            InverseRoundtrip => {
                let inv = self.inverse.as_ref().ok_or_else(no_inverse)?;
                let bad = samples.iter().find(|p| self.subject.call(p).and_then(|q| inv.call(&q)).ok().as_ref() != Some(*p));
                pass_if(bad.is_none(), || format!("roundtrip fails at {}", bad.expect("some")))
            }
            InverseShiftCommuting => {
                let inv = self.inverse.as_ref().ok_or_else(no_inverse)?;
                let imgs = self.image_candidates(&samples);
                let r = check_shift_commute(|p| inv.call(p), &imgs)?;
                pass_if(r.passed(), || format!("{r:?}"))
            }
            InverseUnboundedAnticipation | InverseNotSlidingBlock => {
                let inv = self.inverse.as_ref().ok_or_else(no_inverse)?;
                let cands = falsifier_candidates(&self.shift, budget.samples, budget.depth, rng);
                let imgs = self.image_candidates(&cands);
                self.needs_every_window(inv, &imgs, budget.depth.min(6))
            }
            InverseContinuousOnFamilies => {
                let inv = self.inverse.clone().ok_or_else(no_inverse)?;
                let f = self.subject.clone();
                let fams: Vec<PointFamily> = family_catalog(&self.shift, budget.chl.families)
                    .iter()
                    .filter_map(|fam| {
                        let f = f.clone();
                        fam.push_forward(move |p| f.call(p)).ok()
                    })
                    .collect();
                let r = empirical_continuity(move |p| inv.call(p), &fams, budget.chl);
                pass_if(r.refuted.is_empty() && r.consistent > 0, || format!("{r:?}"))
            }
            ImageShiftSpace => {
                let code = self.code().ok_or_else(no_code)?;
                let letters = output_letters(code);
                let finite_img = samples.iter().filter_map(|p| code.apply(p).ok()).find(|q| q.is_finite());
                // no finite points and finitely many letters: the extension
                // property holds vacuously
                pass_if(letters.as_ref().is_some_and(SymSet::is_finite) && finite_img.is_none(), || {
                    format!("letters {letters:?}, finite image {finite_img:?}")
                })
            }
            ImageNotShiftSpace => {
                let code = self.code().ok_or_else(no_code)?;
                let letters = output_letters(code).ok_or_else(no_code)?;
                let mut cands = samples.clone();
                cands.extend(self.shift.representatives().into_iter().map(|a| Point::evp(vec![], vec![a])));
                let empty_preimage =
                    cands.iter().find(|p| self.shift.contains_point(p) && code.apply(p).is_ok_and(|q| q.is_empty_seq()));
                // the empty sequence is in the image but has only the
                // finitely many image letters as followers
                pass_if(letters.is_finite() && empty_preimage.is_some(), || format!("letters {letters}"))
            }
        })
    }

    /// Evaluates a single property with the case's seeded generator.
    pub fn check_one(&self, property: Property, budget: GalleryBudget, seed: u64) -> Verdict {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(seed, self.id));
        self.check(property, budget, &mut rng)
    }

    pub fn run(&self, budget: GalleryBudget, seed: u64) -> Vec<ReportLine> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(seed, self.id));
        self.expectations
            .iter()
            .map(|e| ReportLine {
                id: self.id,
                property: e.property,
                verdict: self.check(e.property, budget, &mut rng),
                expected: e.expected.clone(),
                anchor: e.anchor,
            })
            .collect()
    }
}

/// Evaluates every expectation of the selected cases (all when `ids` is
/// empty), one case per task.
pub fn run_all(ids: &[&str], p: Params, budget: GalleryBudget, seed: u64) -> Result<Report> {
    run_all_with(ids, p, budget, seed, Exec::default())
}

/// [`run_all`] with the case-level execution mode chosen by the caller.
pub fn run_all_with(ids: &[&str], p: Params, budget: GalleryBudget, seed: u64, exec: Exec) -> Result<Report> {
    let ids: Vec<&str> = if ids.is_empty() { IDS.to_vec() } else { ids.to_vec() };
    let cases = ids.iter().map(|id| build_with(id, p)).collect::<Result<Vec<_>>>()?;
    let lines = par::map(exec, &cases, |c| c.run(budget, seed));
    Ok(Report { lines: lines.into_iter().flatten().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        let d = code_d();
        assert_eq!(d.apply(&Point::evp(vec![], vec![6])).unwrap(), Point::evp(vec![], vec![3]));
        let f = code_f();
        // (-3,-2,-1) is a finite point; the empty tail maps to 0s
        assert_eq!(f.apply(&Point::finite(vec![-3, -2, -1])).unwrap(), Point::evp(vec![-1, -1, -1], vec![0]));
        assert_eq!(f.apply(&Point::evp(vec![-3, -2, -1], vec![5])).unwrap(), Point::evp(vec![-1, -1, -1], vec![5]));
        let i = code_i(Params { k: 2, d: 3 }).unwrap();
        assert_eq!(i.apply(&Point::evp(vec![5, 4, 3, 2], vec![1])).unwrap().at(1), Letter::Sym(3));
        assert!(code_i(Params { k: 2, d: 2 }).is_err());
        let h = code_h(Params::default()).unwrap();
        assert_eq!(h.apply(&Point::evp(vec![2, 1, 4, 3, 2], vec![1])).unwrap(), Point::evp(vec![2, 3, 3, 3, 2], vec![1]));
        let g = code_g(2);
        assert_eq!(g.apply(&Point::empty()).unwrap(), Point::evp(vec![], vec![0]));
        let c = code_c();
        assert_eq!(c.apply(&Point::evp(vec![3, 2], vec![1])).unwrap(), Point::evp(vec![], vec![1]));
        let m = max_map();
        assert_eq!(m.call(&Point::evp(vec![2, 1], vec![1])).unwrap(), Point::evp(vec![2], vec![1]));
        assert_eq!(m.call(&Point::empty()).unwrap(), Point::empty());
        let e = code_e();
        assert_eq!(e.apply(&Point::evp(vec![3, 4, 3], vec![4])).unwrap(), Point::evp(vec![3], vec![4]));
    }

    #[test]
    fn inverses_roundtrip() {
        let f = code_f();
        let fi = inverse_f();
        let g = code_g(2);
        let gi = inverse_g(2);
        let p = Params::default();
        let i = code_i(p).unwrap();
        let ii = inverse_i(p).unwrap();
        let pts_f = [
            Point::finite(vec![-3, -2, -1]),
            Point::evp(vec![-2, -1], vec![4]),
            Point::evp(vec![-1], vec![0]),
            Point::evp(vec![], vec![7]),
            Point::empty(),
        ];
        for x in pts_f {
            assert_eq!(fi.call(&f.apply(&x).unwrap()).unwrap(), x);
        }
        for x in [Point::evp(vec![-2, -1], vec![1]), Point::evp(vec![-1], vec![0]), Point::empty(), Point::evp(vec![], vec![2])] {
            assert_eq!(gi.call(&g.apply(&x).unwrap()).unwrap(), x);
        }
        for x in [Point::evp(vec![6, 5, 4, 3, 2], vec![1]), Point::evp(vec![], vec![1]), Point::empty()] {
            assert_eq!(ii.call(&i.apply(&x).unwrap()).unwrap(), x);
        }
        assert!(fi.call(&Point::evp(vec![4], vec![0])).is_err());
    }

    #[test]
    fn every_expectation_holds() {
        let r = run_all(&[], Params::default(), GalleryBudget::default(), 7).unwrap();
        assert!(r.all_ok(), "{r}");
        assert!(r.lines.iter().any(|l| l.id == "e" && matches!(l.verdict, Verdict::Unknown(_))));
        let again = run_all(&[], Params::default(), GalleryBudget::default(), 7).unwrap();
        assert_eq!(r.to_string(), again.to_string());
    }
}
