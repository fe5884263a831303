//! Shift spaces given by a finite list of forbidden words or by a one-step
//! transition rule.
//!
//! Follower and predecessor sets are returned as interval sets, which covers
//! both the finite/cofinite descriptors of forbidden-word shifts and the
//! half-line follower sets of the transition-rule shifts. Over an infinite
//! alphabet, a forbidden-word shift only distinguishes the letters that occur
//! in forbidden words; every other letter ("generic") behaves identically,
//! which is what makes the queries below decidable.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::point::{Alphabet, Point, Sym};
use crate::rules::EdgeRule;
use crate::symset::{LetterSet, SymSet};

#[derive(Clone, Debug)]
pub enum Rule {
    Forbidden(Vec<Vec<Sym>>),
    Edges(Arc<dyn EdgeRule>),
}

#[derive(Debug)]
struct Derived {
    letters: SymSet,
    /// Forbidden words with redundant ones (containing another as a factor) removed.
    words: Vec<Vec<Sym>>,
    max_len: usize,
    explicit: SymSet,
    generic: bool,
    /// Extendable windows of length `window`, used when every letter is explicit.
    good: HashSet<Vec<Sym>>,
    window: usize,
}

#[derive(Clone, Debug)]
pub struct ShiftPresentation {
    alphabet: Alphabet,
    rule: Rule,
    derived: Arc<Derived>,
}

impl PartialEq for ShiftPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && match (&self.rule, &other.rule) {
                (Rule::Forbidden(a), Rule::Forbidden(b)) => a == b,
                (Rule::Edges(a), Rule::Edges(b)) => a.literal() == b.literal(),
                _ => false,
            }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub is_sft: bool,
    pub m_step: Option<usize>,
    pub row_finite: bool,
    pub column_finite: bool,
}

fn has_factor(w: &[Sym], f: &[Sym]) -> bool {
    f.len() <= w.len() && w.windows(f.len()).any(|x| x == f)
}

impl ShiftPresentation {
    pub fn full(alphabet: Alphabet) -> Self {
        Self::forbidden(alphabet, Vec::new()).expect("full shift")
    }

    pub fn forbidden(alphabet: Alphabet, words: Vec<Vec<Sym>>) -> Result<Self> {
        for w in &words {
            if w.is_empty() {
                return Err(Error::InvalidPresentation("forbidden words must be nonempty".into()));
            }
            if let Some(&a) = w.iter().find(|&&a| !alphabet.contains(a)) {
                return Err(Error::LetterOutsideAlphabet(a));
            }
        }
        let mut pruned: Vec<Vec<Sym>> = Vec::new();
        for w in &words {
            let redundant = words.iter().any(|v| v != w && has_factor(w, v))
                || pruned.contains(w);
            if !redundant {
                pruned.push(w.clone());
            }
        }
        let explicit: SymSet = pruned.iter().flatten().copied().collect();
        let generic = !alphabet.symbols().is_subset(&explicit);
        let max_len = pruned.iter().map(Vec::len).max().unwrap_or(0);
        let mut d = Derived {
            letters: SymSet::empty(),
            words: pruned,
            max_len,
            explicit,
            generic,
            good: HashSet::new(),
            window: max_len.saturating_sub(1).max(1),
        };
        if !generic {
            d.good = good_windows(&d, &alphabet);
        }
        let singles: SymSet = d.words.iter().filter(|w| w.len() == 1).map(|w| w[0]).collect();
        d.letters = if generic {
            alphabet.symbols().difference(&singles)
        } else {
            let syms = alphabet.symbols().elements().unwrap_or_default();
            syms.into_iter().filter(|&a| suffix_clean(&d, &[a]) && extendable(&d, &alphabet, &[a])).collect()
        };
        Ok(ShiftPresentation { alphabet, rule: Rule::Forbidden(words), derived: Arc::new(d) })
    }

    pub fn edges(alphabet: Alphabet, rule: Arc<dyn EdgeRule>) -> Result<Self> {
        let letters = rule.letters();
        if !letters.is_subset(&alphabet.symbols()) {
            return Err(Error::InvalidPresentation(format!(
                "rule {} uses letters outside {alphabet}",
                rule.literal()
            )));
        }
        let d = Derived {
            letters,
            words: Vec::new(),
            max_len: 2,
            explicit: rule.explicit_letters().into_iter().collect(),
            generic: false,
            good: HashSet::new(),
            window: 1,
        };
        Ok(ShiftPresentation { alphabet, rule: Rule::Edges(rule), derived: Arc::new(d) })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// Letters occurring in points of the shift.
    pub fn letters(&self) -> &SymSet {
        &self.derived.letters
    }

    /// Length of the windows the rule looks at, minus one.
    pub fn memory(&self) -> usize {
        match self.rule {
            Rule::Forbidden(_) => self.derived.max_len.saturating_sub(1),
            Rule::Edges(_) => 1,
        }
    }

    /// Letters where the presentation changes behaviour.
    pub fn explicit_letters(&self) -> &SymSet {
        &self.derived.explicit
    }

    fn check_letters(&self, w: &[Sym]) -> Result<()> {
        match w.iter().find(|&&a| !self.alphabet.contains(a)) {
            Some(&a) => Err(Error::LetterOutsideAlphabet(a)),
            None => Ok(()),
        }
    }

    fn in_language(&self, w: &[Sym]) -> bool {
        match &self.rule {
            Rule::Edges(r) => {
                !self.derived.letters.is_empty()
                    && w.iter().all(|&a| self.derived.letters.contains(a))
                    && w.windows(2).all(|p| r.allows(p[0], p[1]))
            }
            Rule::Forbidden(_) => {
                let d = &self.derived;
                let clean = (1..=w.len()).all(|k| suffix_clean(d, &w[..k]));
                clean && (d.generic || extendable(d, &self.alphabet, w))
            }
        }
    }

    pub fn block_in_language(&self, w: &[Sym]) -> Result<bool> {
        self.check_letters(w)?;
        Ok(self.in_language(w))
    }

    /// `{b : wb in the language}`.
    pub fn follower(&self, w: &[Sym]) -> Result<SymSet> {
        if !self.block_in_language(w)? {
            return Err(Error::NotInLanguage);
        }
        Ok(self.follower_unchecked(w))
    }

    fn follower_unchecked(&self, w: &[Sym]) -> SymSet {
        let d = &self.derived;
        if w.is_empty() {
            return d.letters.clone();
        }
        match &self.rule {
            Rule::Edges(r) => r.follower(*w.last().unwrap()),
            Rule::Forbidden(_) => {
                let mut ext = w.to_vec();
                ext.push(0);
                let last = ext.len() - 1;
                if d.generic {
                    let blocked: SymSet = d
                        .explicit
                        .elements()
                        .unwrap_or_default()
                        .into_iter()
                        .filter(|&b| {
                            ext[last] = b;
                            !suffix_clean(d, &ext)
                        })
                        .collect();
                    d.letters.difference(&blocked)
                } else {
                    d.letters
                        .elements()
                        .unwrap_or_default()
                        .into_iter()
                        .filter(|&b| {
                            ext[last] = b;
                            suffix_clean(d, &ext) && extendable(d, &self.alphabet, &ext)
                        })
                        .collect()
                }
            }
        }
    }

    /// `{b : bw in the language}`.
    pub fn predecessor(&self, w: &[Sym]) -> Result<SymSet> {
        if !self.block_in_language(w)? {
            return Err(Error::NotInLanguage);
        }
        let d = &self.derived;
        if w.is_empty() {
            return Ok(d.letters.clone());
        }
        Ok(match &self.rule {
            Rule::Edges(r) => r.predecessor(w[0]),
            Rule::Forbidden(_) => {
                let cands = if d.generic { d.explicit.clone() } else { d.letters.clone() };
                let ok: SymSet = cands
                    .elements()
                    .unwrap_or_default()
                    .into_iter()
                    .filter(|&b| {
                        let mut bw = Vec::with_capacity(w.len() + 1);
                        bw.push(b);
                        bw.extend_from_slice(w);
                        self.in_language(&bw)
                    })
                    .collect();
                if d.generic {
                    d.letters.difference(&d.explicit).union(&ok)
                } else {
                    ok
                }
            }
        })
    }

    /// Whether `w`, read as a finite sequence, satisfies the infinite
    /// extension property (so belongs to the shift).
    pub fn has_iep_at(&self, w: &[Sym]) -> bool {
        if self.check_letters(w).is_err() || !self.in_language(w) {
            return false;
        }
        !self.follower_unchecked(w).is_finite()
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        match p {
            Point::Finite(w) => self.has_iep_at(w),
            Point::Evp { pre, period } => {
                let reps = match self.rule {
                    Rule::Edges(_) => 2,
                    Rule::Forbidden(_) => self.derived.max_len + 1,
                };
                let n = pre.len() + reps * period.len();
                let w = p.prefix(n);
                if self.check_letters(&w).is_err() {
                    return false;
                }
                match &self.rule {
                    Rule::Edges(r) => {
                        w.iter().all(|&a| self.derived.letters.contains(a))
                            && w.windows(2).all(|x| r.allows(x[0], x[1]))
                    }
                    Rule::Forbidden(_) => (1..=w.len()).all(|k| suffix_clean(&self.derived, &w[..k])),
                }
            }
        }
    }

    /// Letters `a` such that the one-letter sequence `a` is a finite point.
    pub fn iep_letters(&self) -> SymSet {
        match &self.rule {
            Rule::Edges(r) => r.iep_letters(),
            Rule::Forbidden(_) => {
                if self.alphabet.is_infinite() {
                    self.derived.letters.clone()
                } else {
                    SymSet::empty()
                }
            }
        }
    }

    /// Union of the follower sets of the letters in `s`. Exact for transition
    /// rules and one-step forbidden lists; for longer forbidden words it is
    /// the union of one-letter followers, an over-approximation.
    pub fn followers_of_set(&self, s: &SymSet) -> SymSet {
        self.set_step(s, true)
    }

    pub fn predecessors_of_set(&self, s: &SymSet) -> SymSet {
        self.set_step(s, false)
    }

    fn set_step(&self, s: &SymSet, forward: bool) -> SymSet {
        let d = &self.derived;
        let s = s.intersect(&d.letters);
        if s.is_empty() {
            return s;
        }
        match &self.rule {
            Rule::Edges(r) => {
                if forward {
                    r.followers_of_set(&s)
                } else {
                    r.predecessors_of_set(&s)
                }
            }
            Rule::Forbidden(_) => {
                if d.generic && !s.is_subset(&d.explicit) {
                    return d.letters.clone();
                }
                s.elements()
                    .unwrap_or_default()
                    .into_iter()
                    .map(|a| {
                        if forward {
                            self.follower_unchecked(&[a])
                        } else {
                            self.predecessor(&[a]).unwrap_or_default()
                        }
                    })
                    .fold(SymSet::empty(), |acc, x| acc.union(&x))
            }
        }
    }

    /// Whether some point `x` of the shift has `x_i` in `guards[i-1]` for
    /// every `i` (coordinates past the end of a finite point are empty).
    pub fn region_nonempty(&self, guards: &[LetterSet]) -> bool {
        match &self.rule {
            Rule::Edges(_) => self.region_edges(guards),
            Rule::Forbidden(_) => self.region_forbidden(guards),
        }
    }

    fn region_edges(&self, guards: &[LetterSet]) -> bool {
        let iep = self.iep_letters();
        let mut reach: Option<SymSet> = None;
        for (i, g) in guards.iter().enumerate() {
            if g.empty && guards[i + 1..].iter().all(|h| h.empty) {
                let ends_here = match &reach {
                    None => !self.derived.letters.is_finite(),
                    Some(r) => r.intersects(&iep),
                };
                if ends_here {
                    return true;
                }
            }
            let next = match &reach {
                None => self.derived.letters.intersect(&g.syms),
                Some(r) => self.followers_of_set(r).intersect(&g.syms),
            };
            if next.is_empty() {
                return false;
            }
            reach = Some(next);
        }
        true
    }

    fn region_forbidden(&self, guards: &[LetterSet]) -> bool {
        let d = &self.derived;
        let mut atoms = vec![d.letters.clone()];
        let mut split = |x: &SymSet| {
            atoms = atoms
                .iter()
                .flat_map(|a| [a.intersect(x), a.difference(x)])
                .filter(|a| !a.is_empty())
                .collect();
        };
        for g in guards {
            split(&g.syms);
        }
        for a in d.explicit.elements().unwrap_or_default() {
            split(&SymSet::singleton(a));
        }
        let reps: Vec<(SymSet, Sym)> =
            atoms.into_iter().map(|a| { let r = a.nearest(0, 1)[0]; (a, r) }).collect();
        let mut failed = HashSet::new();
        let mut word = Vec::new();
        self.region_dfs(guards, &reps, &mut word, &mut failed)
    }

    fn region_dfs(
        &self,
        guards: &[LetterSet],
        reps: &[(SymSet, Sym)],
        word: &mut Vec<Sym>,
        failed: &mut HashSet<(usize, Vec<Sym>)>,
    ) -> bool {
        let d = &self.derived;
        let pos = word.len();
        if pos == guards.len() {
            return true;
        }
        let g = &guards[pos];
        if g.empty && guards[pos + 1..].iter().all(|h| h.empty) && self.has_iep_at(word) {
            return true;
        }
        let keep = d.max_len.max(d.window);
        let key = (pos, word[word.len().saturating_sub(keep)..].to_vec());
        if failed.contains(&key) {
            return false;
        }
        for (atom, r) in reps {
            if !atom.is_subset(&g.syms) {
                continue;
            }
            word.push(*r);
            let ok = suffix_clean(d, word) && (d.generic || extendable(d, &self.alphabet, word));
            if ok && self.region_dfs(guards, reps, word, failed) {
                word.pop();
                return true;
            }
            word.pop();
        }
        failed.insert(key);
        false
    }

    /// Whether some finite point of length exactly `j` exists.
    pub fn has_finite_point_of_length(&self, j: usize) -> bool {
        if j == 0 {
            return !self.derived.letters.is_finite();
        }
        match &self.rule {
            Rule::Forbidden(_) => self.alphabet.is_infinite() && !self.derived.letters.is_empty(),
            Rule::Edges(_) => {
                let mut r = self.iep_letters();
                for _ in 1..j {
                    if r.is_empty() {
                        return false;
                    }
                    r = self.predecessors_of_set(&r);
                }
                !r.is_empty()
            }
        }
    }

    /// Whether every finite point has length less than `m`.
    pub fn finite_lengths_below(&self, m: usize) -> bool {
        // shifting a longer finite point gives one of length exactly m
        !self.has_finite_point_of_length(m)
    }

    pub fn classify(&self) -> Classification {
        match &self.rule {
            Rule::Forbidden(_) => {
                let finite = !self.alphabet.is_infinite() || self.derived.letters.is_empty();
                Classification {
                    is_sft: true,
                    m_step: Some(self.memory()),
                    row_finite: finite,
                    column_finite: finite,
                }
            }
            Rule::Edges(r) => {
                let reps = self.representatives();
                Classification {
                    is_sft: r.forbidden_pairs_finite(),
                    m_step: Some(1),
                    row_finite: reps.iter().all(|&a| r.follower(a).is_finite()),
                    column_finite: reps.iter().all(|&a| r.predecessor(a).is_finite()),
                }
            }
        }
    }

    /// A finite list of letters covering every behaviour class: explicit
    /// letters and their neighbours, plus a few letters far out in each
    /// unbounded direction.
    pub fn representatives(&self) -> Vec<Sym> {
        let l = &self.derived.letters;
        let mut v: Vec<Sym> = Vec::new();
        for a in self.derived.explicit.elements().unwrap_or_default() {
            v.extend([a - 1, a, a + 1]);
        }
        v.extend(l.nearest(0, 3));
        for b in l.boundaries() {
            v.push(b);
        }
        for up in l.escape_directions() {
            for i in [0, 1, 2, 7, 30, 200] {
                v.extend(l.escaping(i, up));
            }
        }
        v.retain(|&a| l.contains(a));
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Finite points of length at most `max_len`, extending each word by up
    /// to `reps` letters per step.
    pub fn enumerate_finite_points(&self, max_len: usize, reps: usize) -> Vec<Point> {
        const CAP: usize = 5000;
        let mut out = Vec::new();
        let mut level: Vec<Vec<Sym>> = vec![Vec::new()];
        for len in 0..=max_len {
            for w in &level {
                if self.has_iep_at(w) {
                    out.push(Point::finite(w.clone()));
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for w in &level {
                let f = self.follower_unchecked(w);
                let center = w.last().copied().unwrap_or(0);
                for b in choose(&f, reps, center) {
                    let mut v = w.clone();
                    v.push(b);
                    next.push(v);
                    if next.len() >= CAP {
                        break;
                    }
                }
            }
            level = next;
        }
        out
    }

    /// Extends `w` to an eventually periodic point by always taking the
    /// `choice`-th letter (by distance to the previous one) among the
    /// allowed continuations, stopping once a window repeats.
    pub fn complete(&self, w: &[Sym], choice: usize, max_steps: usize) -> Option<Point> {
        if !self.block_in_language(w).ok()? {
            return None;
        }
        let m = self.derived.window.max(self.memory()).max(1);
        let mut s = w.to_vec();
        let mut seen: std::collections::HashMap<Vec<Sym>, usize> = Default::default();
        for _ in 0..max_steps {
            if s.len() >= m {
                let state = s[s.len() - m..].to_vec();
                if let Some(&t) = seen.get(&state) {
                    let p = Point::evp(s[..t].to_vec(), s[t..].to_vec());
                    return self.contains_point(&p).then_some(p);
                }
                seen.insert(state, s.len());
            }
            let f = self.follower_unchecked(&s);
            let center = s.last().copied().unwrap_or(0);
            let cands = choose(&f, choice + 1, center);
            let b = *cands.get(choice).or(cands.last())?;
            s.push(b);
        }
        None
    }

    /// Seeded mix of finite and eventually periodic points of the shift.
    /// Letters are drawn near zero, within `spread`.
    pub fn sample_points<R: Rng>(&self, n: usize, spread: i64, rng: &mut R) -> Vec<Point> {
        let mut out = Vec::with_capacity(n);
        let has_finite = !self.iep_letters().is_empty() || !self.derived.letters.is_finite();
        let mut attempts = 0;
        while out.len() < n && attempts < 50 * n + 100 {
            attempts += 1;
            let len = rng.gen_range(0..=6);
            let mut w: Vec<Sym> = Vec::new();
            let mut center = rng.gen_range(-spread..=spread);
            for _ in 0..len {
                let f = self.follower_unchecked(&w);
                let cands = choose(&f, 6, center);
                if cands.is_empty() {
                    break;
                }
                let b = cands[rng.gen_range(0..cands.len())];
                w.push(b);
                center = b + rng.gen_range(-3..=3);
            }
            let want_finite = has_finite && rng.gen_bool(0.4);
            if want_finite {
                if self.has_iep_at(&w) {
                    out.push(Point::finite(w));
                }
            } else if let Some(p) = self.complete(&w, rng.gen_range(0..3), 200) {
                out.push(p);
            }
        }
        out
    }
}

/// Up to `n` members of `set`: all of them if there are at most `n`,
/// otherwise the ones closest to `center`.
pub fn choose(set: &SymSet, n: usize, center: Sym) -> Vec<Sym> {
    match set.elements() {
        Some(e) if e.len() <= n => e,
        _ => set.nearest(center, n),
    }
}

fn suffix_clean(d: &Derived, w: &[Sym]) -> bool {
    !d.words.iter().any(|f| w.ends_with(f))
}

fn extendable(d: &Derived, alphabet: &Alphabet, w: &[Sym]) -> bool {
    if d.generic {
        return true;
    }
    let m = d.window;
    if w.len() >= m {
        return d.good.contains(&w[w.len() - m..]);
    }
    let syms = alphabet.symbols().elements().unwrap_or_default();
    syms.iter().any(|&b| {
        let mut v = w.to_vec();
        v.push(b);
        suffix_clean(d, &v) && extendable(d, alphabet, &v)
    })
}

/// Windows of length `d.window` (over a finite alphabet) that start an
/// infinite admissible sequence: the greatest set of clean windows closed
/// under having a clean successor window.
fn good_windows(d: &Derived, alphabet: &Alphabet) -> HashSet<Vec<Sym>> {
    let syms = alphabet.symbols().elements().unwrap_or_default();
    let m = d.window;
    let mut states: Vec<Vec<Sym>> = vec![Vec::new()];
    for _ in 0..m {
        states = states
            .iter()
            .flat_map(|s| {
                syms.iter().filter_map(move |&b| {
                    let mut v = s.clone();
                    v.push(b);
                    suffix_clean(d, &v).then_some(v)
                })
            })
            .collect();
    }
    let mut good: HashSet<Vec<Sym>> = states.into_iter().collect();
    loop {
        let keep: HashSet<Vec<Sym>> = good
            .iter()
            .filter(|q| {
                syms.iter().any(|&b| {
                    let mut v = (*q).clone();
                    v.push(b);
                    suffix_clean(d, &v) && good.contains(&v[1..])
                })
            })
            .cloned()
            .collect();
        if keep.len() == good.len() {
            return good;
        }
        good = keep;
    }
}

impl fmt::Display for ShiftPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "shift {{ alphabet = {}; ", self.alphabet)?;
        match &self.rule {
            Rule::Forbidden(ws) => {
                let body: Vec<String> = ws
                    .iter()
                    .map(|w| format!("[{}]", w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "forbidden = [{}]", body.join(","))?;
            }
            Rule::Edges(r) => write!(f, "edges = {}", r.literal())?,
        }
        write!(f, " }}")
    }
}
