//! Higher block codes: recoding a point as the sequence of its overlapping
//! windows of length `M`.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::chl::FiberSource;
use crate::error::{Error, Result};
use crate::fds::Trie;
use crate::point::{Letter, Point, Sym};
use crate::sbc::{apply_with, falsify_sliding_block, path_trie, BlackBox, Code};
use crate::shiftspace::{choose, ShiftPresentation};
use crate::symset::{LetterSet, SymSet};

pub type BlockLetter = Vec<Sym>;

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Precondition("block length must be positive".into()));
    }
    Ok(())
}

fn window_block(p: &Point, n: usize, m: usize) -> Letter<BlockLetter> {
    let w = p.window(n, m);
    if w.iter().all(|l| !l.is_empty()) {
        Letter::Sym(w.into_iter().map(|l| *l.sym().expect("symbol")).collect())
    } else {
        Letter::Empty
    }
}

/// `Ξ^(M)`: coordinate `i` is the block `x_i .. x_{i+M-1}`, or the empty
/// letter if the block runs past the end of `p`.
pub fn xi(m: usize, p: &Point) -> Result<Point<BlockLetter>> {
    check_m(m)?;
    apply_with(p, |q, n| Ok(window_block(q, n, m)))
}

/// Undoes [`xi`] on points of length at least `m`: heads of the blocks,
/// followed by the tail of the last block for finite points.
pub fn xi_inverse(m: usize, q: &Point<BlockLetter>) -> Result<Point> {
    check_m(m)?;
    let syms: Vec<&BlockLetter> = q.symbols().collect();
    if let Some(b) = syms.iter().find(|b| b.len() != m) {
        return Err(Error::MalformedPoint(format!("block {b:?} does not have length {m}")));
    }
    let consistent = |a: &BlockLetter, b: &BlockLetter| a[1..] == b[..m - 1];
    match q {
        Point::Finite(blocks) => {
            if blocks.windows(2).any(|w| !consistent(&w[0], &w[1])) {
                return Err(Error::MalformedPoint("consecutive blocks do not overlap".into()));
            }
            let Some(last) = blocks.last() else { return Ok(Point::empty()) };
            let mut x: Vec<Sym> = blocks.iter().map(|b| b[0]).collect();
            x.extend_from_slice(&last[1..]);
            Ok(Point::finite(x))
        }
        Point::Evp { pre, period } => {
            let all: Vec<&BlockLetter> = pre.iter().chain(period).chain(period.first()).collect();
            if all.windows(2).any(|w| !consistent(w[0], w[1])) {
                return Err(Error::MalformedPoint("consecutive blocks do not overlap".into()));
            }
            Ok(Point::evp(pre.iter().map(|b| b[0]).collect::<Vec<_>>(), period.iter().map(|b| b[0]).collect::<Vec<_>>()))
        }
    }
}

/// `Ξ^(M)` as a code on a given shift.
#[derive(Clone, Debug)]
pub struct XiCode {
    pub m: usize,
    pub domain: ShiftPresentation,
}

impl XiCode {
    pub fn new(domain: ShiftPresentation, m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(XiCode { m, domain })
    }

    /// Block letters reachable from the shift's representative letters,
    /// taking a few continuations per step.
    pub fn sample_blocks(&self, limit: usize) -> Vec<BlockLetter> {
        let mut level: Vec<Vec<Sym>> = self.domain.representatives().into_iter().map(|a| vec![a]).collect();
        for _ in 1..self.m {
            let mut next = Vec::new();
            for w in &level {
                let Ok(f) = self.domain.follower(w) else { continue };
                for b in choose(&f, 2, *w.last().expect("nonempty")) {
                    let mut v = w.clone();
                    v.push(b);
                    next.push(v);
                }
            }
            level = next;
        }
        level.truncate(limit);
        level
    }
}

impl Code for XiCode {
    type Out = BlockLetter;
    fn domain(&self) -> &ShiftPresentation {
        &self.domain
    }
    fn coord(&self, p: &Point, n: usize) -> Result<Letter<BlockLetter>> {
        Ok(window_block(p, n, self.m))
    }
}

impl FiberSource for XiCode {
    fn domain(&self) -> &ShiftPresentation {
        &self.domain
    }
    fn fixes_empty(&self) -> Result<bool> {
        Ok(true)
    }
    fn letter_fibers(&self) -> std::result::Result<Vec<(String, Trie<bool>)>, String> {
        Ok(self
            .sample_blocks(40)
            .into_iter()
            .map(|b| {
                let guards: Vec<LetterSet> = b.iter().map(|&a| LetterSet::of_syms(SymSet::singleton(a))).collect();
                (format!("{:?}", b).replace(' ', ""), path_trie(&guards))
            })
            .collect())
    }
}

/// `Λ^(M)`: block letters are the words of length `M` of the base language,
/// and `[a_1..a_M] -> [b_1..b_M]` is allowed when the blocks overlap and
/// `a_1 .. a_M b_M` is in the base language.
#[derive(Clone, Debug)]
pub struct HigherPresentation {
    pub base: ShiftPresentation,
    pub m: usize,
}

/// Followers of a word of the higher presentation: every block
/// `shared ++ [a]` with `a` in `last`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFollowers {
    pub shared: Vec<Sym>,
    pub last: SymSet,
}

pub fn higher_presentation(base: &ShiftPresentation, m: usize) -> Result<HigherPresentation> {
    check_m(m)?;
    Ok(HigherPresentation { base: base.clone(), m })
}

impl HigherPresentation {
    pub fn letter_ok(&self, b: &[Sym]) -> bool {
        b.len() == self.m && self.base.block_in_language(b).unwrap_or(false)
    }

    pub fn edge_ok(&self, a: &[Sym], b: &[Sym]) -> bool {
        if !(self.letter_ok(a) && self.letter_ok(b)) || a[1..] != b[..self.m - 1] {
            return false;
        }
        let mut w = a.to_vec();
        w.push(b[self.m - 1]);
        self.base.block_in_language(&w).unwrap_or(false)
    }

    fn unblock(&self, blocks: &[BlockLetter]) -> Option<Vec<Sym>> {
        if blocks.iter().any(|b| b.len() != self.m) || blocks.windows(2).any(|w| w[0][1..] != w[1][..self.m - 1]) {
            return None;
        }
        let mut x: Vec<Sym> = blocks.iter().map(|b| b[0]).collect();
        if let Some(last) = blocks.last() {
            x.extend_from_slice(&last[1..]);
        }
        Some(x)
    }

    pub fn word_in_language(&self, blocks: &[BlockLetter]) -> bool {
        self.unblock(blocks).is_some_and(|w| self.base.block_in_language(&w).unwrap_or(false))
    }

    /// Followers of a nonempty word of the higher language.
    pub fn follower(&self, blocks: &[BlockLetter]) -> Result<BlockFollowers> {
        if blocks.is_empty() {
            return Err(Error::Precondition("followers of the empty word are all block letters".into()));
        }
        let w = self.unblock(blocks).ok_or(Error::NotInLanguage)?;
        let last = self.base.follower(&w)?;
        Ok(BlockFollowers { shared: w[w.len() - (self.m - 1)..].to_vec(), last })
    }

    pub fn contains_point(&self, q: &Point<BlockLetter>) -> bool {
        if q.is_empty_seq() {
            return self.base.contains_point(&Point::empty());
        }
        match xi_inverse(self.m, q) {
            Ok(x) => self.base.contains_point(&x) && xi(self.m, &x).is_ok_and(|y| y == *q),
            Err(_) => false,
        }
    }

    /// Finite points of `Λ^(M)` other than the empty sequence exist exactly
    /// when some block letter has the infinite extension property.
    pub fn has_nonempty_finite_point(&self) -> bool {
        self.base.has_finite_point_of_length(self.m)
    }

    /// Checks the infinite extension property of `Λ^(M)` at the images of
    /// sampled finite points: their followers must be infinite, and the
    /// base points extended by distinct letters must give distinct next
    /// blocks.
    pub fn iep_spot_check(&self, samples: &[Point]) -> bool {
        samples.iter().filter(|p| p.is_finite() && p.structure_len() >= self.m).all(|x| {
            let Ok(Point::Finite(blocks)) = xi(self.m, x) else { return false };
            let Ok(f) = self.follower(&blocks) else { return false };
            if f.last.is_finite() {
                return false;
            }
            let w = x.prefix(x.structure_len());
            let next: Vec<Option<BlockLetter>> = f
                .last
                .nearest(0, 4)
                .into_iter()
                .map(|a| {
                    let mut v = w.clone();
                    v.push(a);
                    let y = self.base.complete(&v, 0, 300)?;
                    let q = xi(self.m, &y).ok()?;
                    self.contains_point(&q).then(|| q.at(blocks.len() + 1).sym().cloned()).flatten()
                })
                .collect();
            let mut distinct: Vec<BlockLetter> = next.iter().flatten().cloned().collect();
            distinct.sort();
            distinct.dedup();
            next.iter().all(Option::is_some) && distinct.len() == next.len()
        })
    }
}

impl fmt::Display for HigherPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "higher(m = {}) of {}", self.m, self.base)
    }
}

/// The three equivalent statements about finite points and `Ξ^(M)`,
/// each computed by its own route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupRecord {
    /// Every finite point is shorter than `M` (`None` when the exact query
    /// and the enumeration disagree).
    pub sup_len_lt_m: Option<bool>,
    /// No finite point of length at least `M` was found among enumerated
    /// and sampled points.
    pub lambda_star_fin_trivial: bool,
    /// The falsifier found no evidence that the inverse needs more than a
    /// bounded window.
    pub inverse_is_sbc: bool,
}

impl SupRecord {
    pub fn agree(&self) -> bool {
        self.sup_len_lt_m == Some(self.lambda_star_fin_trivial) && self.lambda_star_fin_trivial == self.inverse_is_sbc
    }
}

fn base_samples<R: Rng>(s: &ShiftPresentation, m: usize, n: usize, rng: &mut R) -> Vec<Point> {
    let mut pts = s.enumerate_finite_points(m + 2, 3);
    pts.extend(s.sample_points(n, 12, rng));
    let cut: Vec<Point> = pts
        .iter()
        .flat_map(|p| (1..=m + 3).map(move |k| p.prefix(k)))
        .filter(|w| s.has_iep_at(w))
        .map(Point::finite)
        .collect();
    pts.extend(cut);
    pts.sort();
    pts.dedup();
    pts
}

/// The inverse of `Ξ^(M)` as a map on block points, re-encoded as symbol
/// points so that the falsifier can handle it. Block letters are numbered
/// in order of first appearance.
fn inverse_witness(s: &ShiftPresentation, m: usize, pts: &[Point]) -> bool {
    let mut pts = pts.to_vec();
    let tails: Vec<Point> = pts
        .iter()
        .filter(|p| p.is_finite())
        .flat_map(|p| (1..p.structure_len()).map(move |k| p.shift_n(k)))
        .collect();
    pts.extend(tails);
    pts.sort();
    pts.dedup();
    let images: Vec<Point<BlockLetter>> =
        pts.iter().filter(|p| p.length() >= crate::point::Length::Finite(m)).filter_map(|p| xi(m, p).ok()).collect();
    let mut codes: HashMap<BlockLetter, Sym> = HashMap::new();
    for q in &images {
        for b in q.symbols() {
            let next = codes.len() as Sym + 1;
            codes.entry(b.clone()).or_insert(next);
        }
    }
    let decode: HashMap<Sym, BlockLetter> = codes.iter().map(|(b, &c)| (c, b.clone())).collect();
    let encoded: Vec<Point> = images.iter().map(|q| q.map(|b| codes[b])).collect();
    let base = s.clone();
    let inverse = BlackBox::new("higher block inverse", move |p| {
        let q = p.map(|c| decode.get(c).cloned().unwrap_or_default());
        let x = xi_inverse(m, &q)?;
        if base.contains_point(&x) {
            Ok(x)
        } else {
            Err(Error::OutsideDomain)
        }
    });
    falsify_sliding_block(&inverse, &encoded, 2, m + 4).is_some()
}

pub fn check_hbc_corollary_sup<R: Rng>(s: &ShiftPresentation, m: usize, rng: &mut R) -> Result<SupRecord> {
    check_m(m)?;
    let pts = base_samples(s, m, 300, rng);
    let exact = s.finite_lengths_below(m);
    let long_finite = pts.iter().any(|p| p.is_finite() && p.structure_len() >= m);
    let sup_len_lt_m = if exact && long_finite { None } else { Some(exact) };
    Ok(SupRecord {
        sup_len_lt_m,
        lambda_star_fin_trivial: !long_finite,
        inverse_is_sbc: !inverse_witness(s, m, &pts),
    })
}

/// Injectivity of `Ξ^(M)` on samples against row-finiteness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowFiniteRecord {
    pub row_finite: bool,
    pub injective_on_samples: bool,
    /// Two distinct points with the same image, when one was found.
    pub collision: Option<(Point, Point)>,
    /// `Ξ^(M)` followed by its inverse is the identity on the samples
    /// (checked only for row-finite shifts).
    pub roundtrip_ok: bool,
}

impl RowFiniteRecord {
    pub fn equivalence_holds(&self) -> bool {
        self.row_finite == self.injective_on_samples && self.roundtrip_ok
    }
}

/// For `M = 1` the code is a relabeling and injective on every shift, so
/// the equivalence with row-finiteness only concerns `M >= 2`.
pub fn check_hbc_corollary_rowfinite<R: Rng>(
    s: &ShiftPresentation,
    m: usize,
    samples: usize,
    rng: &mut R,
) -> Result<RowFiniteRecord> {
    check_m(m)?;
    let row_finite = s.classify().row_finite;
    let pts = base_samples(s, m, samples, rng);
    let mut seen: HashMap<Point<BlockLetter>, Point> = HashMap::new();
    let mut collision = None;
    for p in &pts {
        let q = xi(m, p)?;
        match seen.get(&q) {
            Some(other) if other != p => {
                collision = Some((other.clone(), p.clone()));
                break;
            }
            Some(_) => {}
            None => {
                seen.insert(q, p.clone());
            }
        }
    }
    let roundtrip_ok = !row_finite || pts.iter().all(|p| xi(m, p).and_then(|q| xi_inverse(m, &q)).is_ok_and(|x| x == *p));
    Ok(RowFiniteRecord { row_finite, injective_on_samples: collision.is_none(), collision, roundtrip_ok })
}
