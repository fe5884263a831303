//! Continuity certificates for sliding block codes.
//!
//! A code is certified continuous when every fiber over an output letter is
//! written as a finite union of generalized cylinders (and, when the empty
//! sequence maps to a constant sequence, when finitely many fibers are
//! nonempty and the sets `F_M` exist). It is certified discontinuous when a
//! convergent family of points is found whose images leave a neighbourhood
//! of the image of the limit.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::fds::{self, Trie};
use crate::par::{self, Exec};
use crate::point::{Letter, Point, Sym};
use crate::sbc::{fiber_trie, Code, OutLabel, SlidingBlockCode};
use crate::shiftspace::ShiftPresentation;
use crate::symset::{LetterSet, SymSet};
use crate::topology::{check_convergence, cyl_contains, Convergence, Cylinder, PointFamily};

/// Search limits for certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChlBudget {
    /// Cylinder length used when testing convergence.
    pub nbhd: usize,
    /// Family members examined per convergence test.
    pub index: usize,
    /// Families tried by the witness search.
    pub families: usize,
    /// Words examined by each `F_M` verification.
    pub words: usize,
}

impl Default for ChlBudget {
    fn default() -> Self {
        ChlBudget { nbhd: 4, index: 24, families: 400, words: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberEvidence {
    pub letter: String,
    pub cylinders: Vec<Cylinder>,
}

/// `M -> F_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMTable {
    pub d: Sym,
    pub entries: Vec<(usize, Vec<Sym>)>,
}

/// A family converging to its claimed limit whose images do not converge
/// to the image of the limit.
#[derive(Clone, Debug)]
pub struct DiscontinuityWitness {
    pub family: PointFamily,
    pub image: PointFamily,
    pub cylinder: Cylinder,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub enum ContinuityVerdict {
    CertifiedContinuous { evidence: Vec<FiberEvidence>, fm_table: Option<FMTable> },
    CertifiedDiscontinuous(Box<DiscontinuityWitness>),
    Unknown(String),
}

impl ContinuityVerdict {
    pub fn is_continuous(&self) -> bool {
        matches!(self, ContinuityVerdict::CertifiedContinuous { .. })
    }

    pub fn is_discontinuous(&self) -> bool {
        matches!(self, ContinuityVerdict::CertifiedDiscontinuous(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            ContinuityVerdict::CertifiedContinuous { .. } => "certified-continuous",
            ContinuityVerdict::CertifiedDiscontinuous(_) => "certified-discontinuous",
            ContinuityVerdict::Unknown(_) => "unknown",
        }
    }
}

impl fmt::Display for ContinuityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict = {}", self.label())?;
        match self {
            ContinuityVerdict::CertifiedContinuous { evidence, fm_table } => {
                for e in evidence {
                    let cyls: Vec<String> = e.cylinders.iter().map(|c| c.to_string()).collect();
                    writeln!(f, "fiber {} = [{}]", e.letter, cyls.join(", "))?;
                }
                if let Some(t) = fm_table {
                    for (m, set) in &t.entries {
                        let s: Vec<String> = set.iter().map(|a| a.to_string()).collect();
                        writeln!(f, "F_{m} = {{{}}}  # d = {}", s.join(","), t.d)?;
                    }
                }
            }
            ContinuityVerdict::CertifiedDiscontinuous(w) => {
                writeln!(f, "family = {}", w.family.name)?;
                writeln!(f, "limit = {}", w.family.claimed_limit)?;
                writeln!(f, "image-limit = {}", w.image.claimed_limit)?;
                writeln!(f, "refuting-cylinder = {}", w.cylinder)?;
                let shown = w.index.min(6);
                for i in 1..=shown {
                    if let (Ok(x), Ok(y)) = (w.family.member(i), w.image.member(i)) {
                        writeln!(f, "member {i} = {x} -> {y}")?;
                    }
                }
                if let (Ok(x), Ok(y)) = (w.family.member(w.index), w.image.member(w.index)) {
                    writeln!(f, "member {} = {x} -> {y}", w.index)?;
                }
            }
            ContinuityVerdict::Unknown(reason) => writeln!(f, "reason = {reason}")?,
        }
        Ok(())
    }
}

/// What certification needs to know about a code.
pub trait FiberSource: Sync {
    fn domain(&self) -> &ShiftPresentation;
    /// Whether the empty sequence maps to itself (vacuously true when the
    /// domain does not contain it).
    fn fixes_empty(&self) -> Result<bool>;
    /// Fibers over a representative list of output letters, or the reason
    /// the fibers are not available as tries.
    fn letter_fibers(&self) -> std::result::Result<Vec<(String, Trie<bool>)>, String>;
    /// The code as a map on symbol points, for the witness search.
    fn as_code(&self) -> Option<&SlidingBlockCode> {
        None
    }
}

fn representatives_of(s: &SymSet) -> Vec<Sym> {
    if let Some(e) = s.elements() {
        if e.len() <= 12 {
            return e;
        }
    }
    let mut v = s.nearest(0, 4);
    v.extend(s.boundaries().into_iter().filter(|&a| s.contains(a)));
    for up in s.escape_directions() {
        for i in [0, 1, 7, 30] {
            v.extend(s.escaping(i, up));
        }
    }
    v.sort_unstable();
    v.dedup();
    v
}

/// Output letters of the realizable leaves of a trie rule, exactly.
pub fn output_letters(code: &SlidingBlockCode) -> Option<SymSet> {
    let t = code.trie()?;
    let mut out = SymSet::empty();
    for (guards, label) in t.paths() {
        if !code.domain.region_nonempty(&guards) {
            continue;
        }
        match label {
            OutLabel::Const(Letter::Sym(b)) => out = out.union(&SymSet::singleton(b)),
            OutLabel::Const(Letter::Empty) => {}
            OutLabel::Map { chain, pos } => {
                let s = fds::position_letters(&code.domain, &guards, pos);
                out = out.union(&OutLabel::chain_image(&chain, &s));
            }
        }
    }
    Some(out)
}

impl FiberSource for SlidingBlockCode {
    fn domain(&self) -> &ShiftPresentation {
        &self.domain
    }

    fn fixes_empty(&self) -> Result<bool> {
        if !self.domain.contains_point(&Point::empty()) {
            return Ok(true);
        }
        Ok(self.apply(&Point::empty())? == Point::empty())
    }

    fn letter_fibers(&self) -> std::result::Result<Vec<(String, Trie<bool>)>, String> {
        let Some(t) = self.trie() else {
            return Err("fiber not trie-representable".into());
        };
        let letters = output_letters(self).expect("trie rule");
        Ok(representatives_of(&letters)
            .into_iter()
            .map(|a| (a.to_string(), fiber_trie(t, &Letter::Sym(a))))
            .collect())
    }

    fn as_code(&self) -> Option<&SlidingBlockCode> {
        Some(self)
    }
}

/// Writes each fiber as cylinders and checks the cylinders reproduce it.
fn certify_fibers(
    domain: &ShiftPresentation,
    fibers: Vec<(String, Trie<bool>)>,
) -> std::result::Result<Vec<FiberEvidence>, String> {
    let results = par::map(Exec::default(), &fibers, |(letter, t)| match fds::decompose(t, domain) {
        Ok(cylinders) => {
            if fds::equivalent_in(&fds::cylinders_to_trie(&cylinders), t, domain) {
                Ok(FiberEvidence { letter: letter.clone(), cylinders })
            } else {
                Err(format!("cylinders for fiber {letter} do not reproduce it"))
            }
        }
        Err(e) => Err(format!("fiber {letter}: {e}")),
    });
    results.into_iter().collect()
}

/// Whether every piece of evidence reproduces the corresponding fiber.
pub fn recheck_evidence(src: &dyn FiberSource, evidence: &[FiberEvidence]) -> bool {
    let Ok(fibers) = src.letter_fibers() else { return false };
    fibers.len() == evidence.len()
        && fibers.iter().zip(evidence).all(|((l, t), e)| {
            *l == e.letter && fds::equivalent_in(&fds::cylinders_to_trie(&e.cylinders), t, src.domain())
        })
}

/// Certificate for the case where the empty sequence is fixed.
pub fn certify_t1(src: &dyn FiberSource, budget: ChlBudget) -> Result<ContinuityVerdict> {
    let fixes = src.fixes_empty()?;
    let reason = match src.letter_fibers() {
        Ok(fibers) => match certify_fibers(src.domain(), fibers) {
            Ok(evidence) if fixes => {
                return Ok(ContinuityVerdict::CertifiedContinuous { evidence, fm_table: None });
            }
            Ok(_) => String::new(),
            Err(r) => r,
        },
        Err(r) => r,
    };
    if let Some(code) = src.as_code() {
        if let Some(w) = find_discontinuity(code, budget)? {
            return Ok(ContinuityVerdict::CertifiedDiscontinuous(Box::new(w)));
        }
    }
    if !fixes {
        return Err(Error::HypothesisNotMet("the empty sequence is not mapped to itself".into()));
    }
    Ok(ContinuityVerdict::Unknown(reason))
}

/// Certificate for the case where the empty sequence maps to `d d d ...`.
pub fn certify_t2(code: &SlidingBlockCode, d: Sym, m_max: usize, budget: ChlBudget) -> Result<ContinuityVerdict> {
    if !code.domain.contains_point(&Point::empty()) {
        return Err(Error::HypothesisNotMet("the domain does not contain the empty sequence".into()));
    }
    let img = code.apply(&Point::empty())?;
    if img != Point::evp(vec![], vec![d]) {
        return Err(Error::HypothesisNotMet(format!("the empty sequence maps to {img}, not to the constant {d}")));
    }
    let mut reasons = Vec::new();
    let mut evidence = Vec::new();
    let mut table = FMTable { d, entries: Vec::new() };
    match code.letter_fibers().and_then(|f| certify_fibers(&code.domain, f)) {
        Ok(e) => evidence = e,
        Err(r) => reasons.push(r),
    }
    if code.trie().is_some() {
        let letters = output_letters(code).expect("trie rule");
        if !letters.is_finite() {
            reasons.push(format!("infinitely many nonempty fibers, over {letters}"));
        }
        for m in 1..=m_max {
            match find_fm(code, d, m) {
                Some(f) => {
                    let by_classes = verify_fm_classes(code, d, m, &f, budget.words);
                    let by_brute = verify_fm_brute(code, d, m, &f, budget.words);
                    if by_classes == Some(true) && by_brute == Some(true) {
                        table.entries.push((m, f));
                    } else {
                        reasons.push(format!(
                            "F_{m} verification: classes {by_classes:?}, brute force {by_brute:?}"
                        ));
                        break;
                    }
                }
                None => {
                    reasons.push(format!("no finite F_{m}"));
                    break;
                }
            }
        }
    }
    if reasons.is_empty() {
        return Ok(ContinuityVerdict::CertifiedContinuous { evidence, fm_table: Some(table) });
    }
    if let Some(w) = find_discontinuity(code, budget)? {
        return Ok(ContinuityVerdict::CertifiedDiscontinuous(Box::new(w)));
    }
    Ok(ContinuityVerdict::Unknown(reasons.join("; ")))
}

/// The least set `F` with `σ^{n-1}(Z(Ø, F) ∩ Λ) ⊆ C_d` for `1 <= n <= m`:
/// the first letters of points that leave `C_d` within `m` shifts. `None`
/// when that set is infinite or the rule is not a trie.
pub fn find_fm(code: &SlidingBlockCode, d: Sym, m: usize) -> Option<Vec<Sym>> {
    let t = code.trie()?;
    let outside = fds::trie_complement(&fiber_trie(t, &Letter::Sym(d)));
    let mut bad = SymSet::empty();
    for (path, inside) in outside.paths() {
        if !inside {
            continue;
        }
        for n in 1..=m {
            let mut guards = vec![LetterSet::everything(); n - 1];
            guards.extend(path.iter().cloned());
            bad = bad.union(&fds::position_letters(&code.domain, &guards, 0));
        }
    }
    bad.elements()
}

/// Cut points separating the behaviour classes of the rule and the shift.
fn class_cuts(code: &SlidingBlockCode, f: &[Sym], d: Sym) -> Vec<Sym> {
    let mut cuts: BTreeSet<Sym> = f.iter().copied().collect();
    cuts.insert(d);
    cuts.extend(code.domain.explicit_letters().elements().unwrap_or_default());
    cuts.extend(code.domain.letters().boundaries());
    if let Some(t) = code.trie() {
        for (guards, _) in t.paths() {
            for g in guards {
                cuts.extend(g.syms.boundaries());
            }
        }
    }
    cuts.into_iter().collect()
}

/// Representatives of each class of `s` cut at `cuts`.
fn class_reps(s: &SymSet, cuts: &[Sym]) -> Vec<Sym> {
    let mut pieces: Vec<SymSet> = Vec::new();
    let mut lo = Sym::MIN;
    for &c in cuts {
        if c > lo {
            pieces.push(SymSet::from_spans([(lo, c - 1)]));
        }
        pieces.push(SymSet::singleton(c));
        lo = c.saturating_add(1);
    }
    pieces.push(SymSet::from_spans([(lo, Sym::MAX)]));
    let mut out = Vec::new();
    for p in pieces {
        let part = s.intersect(&p);
        for &(a, b) in part.spans() {
            let (a_inf, b_inf) = (a == Sym::MIN, b == Sym::MAX);
            match (a_inf, b_inf) {
                (false, false) => out.extend([a, a.saturating_add(1).min(b), b.saturating_sub(1).max(a), b]),
                (false, true) => out.extend([a, a + 1, a + 37]),
                (true, false) => out.extend([b, b - 1, b - 37]),
                (true, true) => out.extend([0, 1, -1, 37, -37]),
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn outputs_d(t: &Trie<OutLabel>, word: &[Letter], d: Sym, m: usize) -> bool {
    let need = m + t.depth() + 1;
    let mut w = word.to_vec();
    while w.len() < need {
        w.push(Letter::Empty);
    }
    (0..m).all(|n| match t.eval_prefix(&w[n..]) {
        Some(label) => label.eval(&w[n..]) == Letter::Sym(d),
        None => false,
    })
}

/// Checks `F` on one word per tuple of letter classes. `None` when the
/// word budget runs out.
pub fn verify_fm_classes(code: &SlidingBlockCode, d: Sym, m: usize, f: &[Sym], budget: usize) -> Option<bool> {
    let t = code.trie()?;
    let shift = &code.domain;
    let cuts = class_cuts(code, f, d);
    let len = m + t.depth();
    let excluded: SymSet = f.iter().copied().collect();
    let starts = class_reps(&shift.letters().difference(&excluded), &cuts);
    let mut count = 0usize;
    let mut stack: Vec<Vec<Sym>> = starts.into_iter().map(|a| vec![a]).collect();
    while let Some(w) = stack.pop() {
        count += 1;
        if count > budget {
            return None;
        }
        let letters: Vec<Letter> = w.iter().map(|&a| Letter::Sym(a)).collect();
        if shift.has_iep_at(&w) {
            let mut fin = letters.clone();
            fin.push(Letter::Empty);
            if !outputs_d(t, &fin, d, m) {
                return Some(false);
            }
        }
        if w.len() >= len {
            if !outputs_d(t, &letters, d, m) {
                return Some(false);
            }
            continue;
        }
        let follow = shift.follower(&w).ok()?;
        for b in class_reps(&follow, &cuts) {
            let mut v = w.clone();
            v.push(b);
            stack.push(v);
        }
    }
    Some(true)
}

/// Checks `F` by evaluating the code on actual points: every start letter
/// in a window around the explicit letters plus two far letters per
/// unbounded direction, all continuations inside that window, and a few
/// completions of each word.
pub fn verify_fm_brute(code: &SlidingBlockCode, d: Sym, m: usize, f: &[Sym], budget: usize) -> Option<bool> {
    let t = code.trie()?;
    let shift = &code.domain;
    let letters = shift.letters();
    let explicit = shift.explicit_letters().elements().unwrap_or_default();
    let mut window: BTreeSet<Sym> = letters.nearest(0, f.len() + 2 * explicit.len() + 12).into_iter().collect();
    for up in letters.escape_directions() {
        window.extend(letters.escaping(60, up));
        window.extend(letters.escaping(61, up));
    }
    let window: SymSet = window.into_iter().collect();
    let len = m + t.depth();
    let check = |p: &Point| (1..=m).all(|n| matches!(code.coord(p, n), Ok(Letter::Sym(x)) if x == d));
    let mut count = 0usize;
    let mut stack: Vec<Vec<Sym>> =
        window.elements()?.into_iter().filter(|a| f.binary_search(a).is_err()).map(|a| vec![a]).collect();
    while let Some(w) = stack.pop() {
        count += 1;
        if count > budget {
            return None;
        }
        if shift.has_iep_at(&w) && !check(&Point::finite(w.clone())) {
            return Some(false);
        }
        if w.len() >= len {
            for choice in 0..2 {
                if let Some(p) = shift.complete(&w, choice, 300) {
                    if !check(&p) {
                        return Some(false);
                    }
                }
            }
            continue;
        }
        let follow = shift.follower(&w).ok()?;
        let mut next: BTreeSet<Sym> = follow.intersect(&window).elements()?.into_iter().collect();
        next.extend(follow.nearest(*w.last().expect("nonempty"), 2));
        for b in next {
            let mut v = w.clone();
            v.push(b);
            stack.push(v);
        }
    }
    Some(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tail {
    Finite,
    Min,
    Max,
    Near(usize),
}

const TAILS: [Tail; 5] = [Tail::Finite, Tail::Min, Tail::Max, Tail::Near(0), Tail::Near(1)];

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Finite => write!(f, "stop"),
            Tail::Min => write!(f, "smallest continuation"),
            Tail::Max => write!(f, "largest continuation"),
            Tail::Near(c) => write!(f, "continuation {c}"),
        }
    }
}

/// Extends `w` by always picking the least (or greatest) allowed letter,
/// until the last letters repeat.
fn extreme_completion(shift: &ShiftPresentation, w: &[Sym], least: bool, max_steps: usize) -> Option<Point> {
    let m = shift.memory().max(1);
    let mut s = w.to_vec();
    let mut seen = std::collections::HashMap::new();
    for _ in 0..max_steps {
        if s.len() >= m {
            let state = s[s.len() - m..].to_vec();
            if let Some(&t) = seen.get(&state) {
                let p = Point::evp(s[..t].to_vec(), s[t..].to_vec());
                return shift.contains_point(&p).then_some(p);
            }
            seen.insert(state, s.len());
        }
        let f = shift.follower(&s).ok()?;
        let last = s.last().copied().unwrap_or(0);
        let b = if least { f.min() } else { f.max() }.or_else(|| f.nearest(last, 1).first().copied())?;
        s.push(b);
    }
    None
}

fn finish(shift: &ShiftPresentation, w: &[Sym], tail: Tail) -> Option<Point> {
    match tail {
        Tail::Finite => shift.has_iep_at(w).then(|| Point::finite(w.to_vec())),
        Tail::Min => extreme_completion(shift, w, true, 5000),
        Tail::Max => extreme_completion(shift, w, false, 5000),
        Tail::Near(c) => shift.complete(w, c, 5000),
    }
}

fn escaping_family(shift: &ShiftPresentation, base: Vec<Sym>, up: bool, tail: Tail) -> PointFamily {
    let limit = Point::finite(base.clone());
    let s = shift.clone();
    let dir = if up { "up" } else { "down" };
    PointFamily::new(format!("{limit} then a letter escaping {dir}, then {tail}"), limit, move |i| {
        let follow = s.follower(&base).map_err(|e| e.to_string())?;
        let a = follow.escaping(i as u64 - 1, up).ok_or("no escaping letter")?;
        let mut w = base.clone();
        w.push(a);
        finish(&s, &w, tail).ok_or_else(|| "no admissible tail".to_string())
    })
}

fn extension_family(shift: &ShiftPresentation, limit: Point, tail: Tail) -> PointFamily {
    let s = shift.clone();
    let p = limit.clone();
    PointFamily::new(format!("prefixes of {limit} then a different letter, then {tail}"), limit, move |i| {
        let prefix = p.prefix(i);
        let follow = s.follower(&prefix).map_err(|e| e.to_string())?;
        let own = match p.at(i + 1) {
            Letter::Sym(a) => SymSet::singleton(a),
            Letter::Empty => SymSet::empty(),
        };
        let center = prefix.last().copied().unwrap_or(0);
        let b = *follow.difference(&own).nearest(center, 1).first().ok_or("no other letter")?;
        let mut w = prefix;
        w.push(b);
        finish(&s, &w, tail).ok_or_else(|| "no admissible tail".to_string())
    })
}

/// Families of points of `shift` in the three shapes convergence can take:
/// first letters escaping towards the empty sequence, a frozen prefix
/// followed by escaping letters towards a finite point, and longer and
/// longer prefixes of an infinite point.
pub fn family_catalog(shift: &ShiftPresentation, limit: usize) -> Vec<PointFamily> {
    let mut out = Vec::new();
    let mut finite_limits: Vec<Vec<Sym>> = Vec::new();
    if !shift.letters().is_finite() {
        finite_limits.push(Vec::new());
    }
    for p in shift.enumerate_finite_points(2, 3) {
        if let Point::Finite(w) = p {
            if !w.is_empty() {
                finite_limits.push(w);
            }
        }
    }
    for base in &finite_limits {
        let Ok(follow) = shift.follower(base) else { continue };
        for up in follow.escape_directions() {
            for tail in TAILS {
                out.push(escaping_family(shift, base.clone(), up, tail));
            }
        }
    }
    let mut limits: Vec<Point> = Vec::new();
    for a in shift.representatives().into_iter().take(12) {
        for tail in [Tail::Min, Tail::Max, Tail::Near(0), Tail::Near(1)] {
            if let Some(p) = finish(shift, &[a], tail) {
                if !limits.contains(&p) {
                    limits.push(p);
                }
            }
        }
    }
    for p in limits {
        for tail in [Tail::Finite, Tail::Min, Tail::Near(0)] {
            out.push(extension_family(shift, p.clone(), tail));
        }
    }
    out.truncate(limit);
    out
}

/// Whether the family converges and its image under `f` does not.
fn refute_with(
    family: &PointFamily,
    f: impl Fn(&Point) -> Result<Point> + Send + Sync + Clone + 'static,
    budget: ChlBudget,
) -> Option<DiscontinuityWitness> {
    match check_convergence(family, budget.nbhd, budget.index) {
        Ok(Convergence::Consistent) => {}
        _ => return None,
    }
    let image = family.push_forward(f).ok()?;
    match check_convergence(&image, budget.nbhd, budget.index) {
        Ok(Convergence::Refuted { cylinder, index }) => {
            let w = DiscontinuityWitness { family: family.clone(), image, cylinder, index };
            persists(&w).then_some(w)
        }
        _ => None,
    }
}

/// Far members of the image family stay outside the refuting cylinder. A
/// code with long anticipation can look discontinuous on the first few
/// members only.
fn persists(w: &DiscontinuityWitness) -> bool {
    [4, 16, 64].iter().all(|k| match w.image.member(w.index * k) {
        Ok(y) => !cyl_contains(&w.cylinder, &y),
        Err(_) => false,
    })
}

/// Searches the family catalog for a discontinuity witness.
pub fn find_discontinuity(code: &SlidingBlockCode, budget: ChlBudget) -> Result<Option<DiscontinuityWitness>> {
    let families = family_catalog(&code.domain, budget.families);
    let c = code.clone();
    let f = move |p: &Point| c.apply(p);
    Ok(par::find_map_first(Exec::default(), &families, |fam| refute_with(fam, f.clone(), budget)))
}

/// Re-runs both convergence tests of a witness.
pub fn verify_witness(w: &DiscontinuityWitness, budget: ChlBudget) -> Result<bool> {
    let input = check_convergence(&w.family, budget.nbhd, budget.index)?;
    let image = check_convergence(&w.image, budget.nbhd, budget.index)?;
    Ok(input == Convergence::Consistent && image.is_refuted() && persists(w))
}

#[derive(Clone, Debug, Default)]
pub struct EmpiricalReport {
    /// Convergent families whose images were also consistent.
    pub consistent: usize,
    pub refuted: Vec<(String, Cylinder)>,
    /// Families that failed to generate or did not converge.
    pub skipped: usize,
}

/// Pushes convergent families through `f` and looks for images that do
/// not converge to the image of the limit.
pub fn empirical_continuity(
    f: impl Fn(&Point) -> Result<Point> + Send + Sync + Clone + 'static,
    families: &[PointFamily],
    budget: ChlBudget,
) -> EmpiricalReport {
    let verdicts = par::map(Exec::default(), families, |fam| {
        match check_convergence(fam, budget.nbhd, budget.index) {
            Ok(Convergence::Consistent) => {}
            _ => return None,
        }
        let image = fam.push_forward(f.clone()).ok()?;
        match check_convergence(&image, budget.nbhd, budget.index).ok()? {
            Convergence::Consistent => Some(None),
            Convergence::Refuted { cylinder, index } => {
                let w = DiscontinuityWitness { family: fam.clone(), image, cylinder, index };
                if persists(&w) {
                    Some(Some((fam.name.clone(), w.cylinder)))
                } else {
                    Some(None)
                }
            }
        }
    });
    let mut r = EmpiricalReport::default();
    for v in verdicts {
        match v {
            None => r.skipped += 1,
            Some(None) => r.consistent += 1,
            Some(Some(x)) => r.refuted.push(x),
        }
    }
    r
}

/// Continuity of the shift map on `s`.
pub fn sigma_continuity(s: &ShiftPresentation) -> bool {
    s.classify().column_finite
}
