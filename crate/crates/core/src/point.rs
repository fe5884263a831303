//! Letters, words and points of the full shift over a countable alphabet.
//!
//! A point is either a finite sequence (padded on the right by the empty
//! letter) or an eventually periodic infinite sequence. Eventually periodic
//! points are kept in canonical form so equality is structural.

use std::fmt;
use std::hash::Hash;

use crate::symset::SymSet;

/// Symbol of a base alphabet.
pub type Sym = i64;

/// Anything usable as a symbol: base letters and higher-block letters.
pub trait Symbol: Clone + Ord + Hash + fmt::Debug + Send + Sync + 'static {}
impl<T: Clone + Ord + Hash + fmt::Debug + Send + Sync + 'static> Symbol for T {}

/// The alphabet of a full shift. Symbols are identified with integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `{0, 1, ..., n-1}`
    Finite(u32),
    /// `{1, 2, 3, ...}`
    Naturals,
    /// All integers.
    Integers,
}

impl Alphabet {
    pub fn symbols(&self) -> SymSet {
        match *self {
            Alphabet::Finite(n) => SymSet::range(0, n as i64 - 1),
            Alphabet::Naturals => SymSet::at_least(1),
            Alphabet::Integers => SymSet::all(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, Alphabet::Finite(_))
    }

    pub fn contains(&self, a: Sym) -> bool {
        self.symbols().contains(a)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Finite(n) => write!(f, "finite({n})"),
            Alphabet::Naturals => write!(f, "naturals"),
            Alphabet::Integers => write!(f, "integers"),
        }
    }
}

/// A coordinate of a point: a symbol or the empty letter.
///
/// The derived order puts `Empty` after every symbol. Operations that rely on
/// that convention say so; everything else only uses the order for
/// deterministic enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter<S = Sym> {
    Sym(S),
    Empty,
}

impl<S> Letter<S> {
    pub fn is_empty(&self) -> bool {
        matches!(self, Letter::Empty)
    }

    pub fn sym(&self) -> Option<&S> {
        match self {
            Letter::Sym(s) => Some(s),
            Letter::Empty => None,
        }
    }
}

impl<S: fmt::Display> fmt::Display for Letter<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Sym(s) => write!(f, "{s}"),
            Letter::Empty => write!(f, "empty"),
        }
    }
}

/// Length of a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(usize),
    Infinite,
}

/// A point of the full shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point<S = Sym> {
    /// `(w_1 ... w_k, empty, empty, ...)`; the empty word is the empty sequence.
    Finite(Vec<S>),
    /// `pre` followed by `period` repeated forever, in canonical form.
    Evp { pre: Vec<S>, period: Vec<S> },
}

fn primitive_root_len<S: PartialEq>(w: &[S]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&p| n % p == 0 && (p..n).all(|i| w[i] == w[i - p]))
        .unwrap_or(n)
}

impl<S: Symbol> Point<S> {
    pub fn empty() -> Self {
        Point::Finite(Vec::new())
    }

    pub fn finite(w: impl Into<Vec<S>>) -> Self {
        Point::Finite(w.into())
    }

    /// Builds an eventually periodic point and canonicalizes it.
    ///
    /// Panics on an empty period.
    pub fn evp(pre: impl Into<Vec<S>>, period: impl Into<Vec<S>>) -> Self {
        let period = period.into();
        assert!(!period.is_empty(), "period of an eventually periodic point must be nonempty");
        Point::Evp { pre: pre.into(), period }.canonical()
    }

    /// Primitive period, minimal preperiod.
    pub fn canonical(self) -> Self {
        match self {
            Point::Finite(w) => Point::Finite(w),
            Point::Evp { mut pre, mut period } => {
                let p = primitive_root_len(&period);
                period.truncate(p);
                while let Some(last) = pre.last() {
                    if *last == period[period.len() - 1] {
                        pre.pop();
                        period.rotate_right(1);
                    } else {
                        break;
                    }
                }
                Point::Evp { pre, period }
            }
        }
    }

    pub fn is_empty_seq(&self) -> bool {
        matches!(self, Point::Finite(w) if w.is_empty())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Point::Finite(_))
    }

    pub fn length(&self) -> Length {
        match self {
            Point::Finite(w) => Length::Finite(w.len()),
            Point::Evp { .. } => Length::Infinite,
        }
    }

    /// Coordinate `n` (1-based); the empty letter past the end of a finite point.
    pub fn at(&self, n: usize) -> Letter<S> {
        assert!(n >= 1, "coordinates are 1-based");
        let i = n - 1;
        match self {
            Point::Finite(w) => w.get(i).cloned().map_or(Letter::Empty, Letter::Sym),
            Point::Evp { pre, period } => {
                if i < pre.len() {
                    Letter::Sym(pre[i].clone())
                } else {
                    Letter::Sym(period[(i - pre.len()) % period.len()].clone())
                }
            }
        }
    }

    /// The first `k` coordinates, stopping early at the end of a finite point.
    pub fn prefix(&self, k: usize) -> Vec<S> {
        (1..=k).map_while(|n| self.at(n).sym().cloned()).collect()
    }

    /// Coordinates `1..=k` including trailing empty letters.
    pub fn window(&self, start: usize, len: usize) -> Vec<Letter<S>> {
        (start..start + len).map(|n| self.at(n)).collect()
    }

    pub fn shift(&self) -> Self {
        match self {
            Point::Finite(w) => Point::Finite(w.iter().skip(1).cloned().collect()),
            Point::Evp { pre, period } => {
                if pre.is_empty() {
                    let mut p = period.clone();
                    p.rotate_left(1);
                    Point::Evp { pre: Vec::new(), period: p }
                } else {
                    Point::Evp { pre: pre[1..].to_vec(), period: period.clone() }.canonical()
                }
            }
        }
    }

    pub fn shift_n(&self, n: usize) -> Self {
        match self {
            Point::Finite(w) => Point::Finite(w.iter().skip(n).cloned().collect()),
            Point::Evp { pre, period } => {
                if n <= pre.len() {
                    Point::Evp { pre: pre[n..].to_vec(), period: period.clone() }.canonical()
                } else {
                    let r = (n - pre.len()) % period.len();
                    let mut p = period.clone();
                    p.rotate_left(r);
                    Point::Evp { pre: Vec::new(), period: p }
                }
            }
        }
    }

    /// Prefixes `w` to the point. Concatenating with the empty sequence is a no-op.
    pub fn concat(w: &[S], p: &Point<S>) -> Self {
        match p {
            Point::Finite(v) => Point::Finite(w.iter().chain(v.iter()).cloned().collect()),
            Point::Evp { pre, period } => Point::Evp {
                pre: w.iter().chain(pre.iter()).cloned().collect(),
                period: period.clone(),
            }
            .canonical(),
        }
    }

    /// Number of coordinates needed before the point's behaviour repeats:
    /// the length for finite points, preperiod plus period otherwise.
    pub fn structure_len(&self) -> usize {
        match self {
            Point::Finite(w) => w.len(),
            Point::Evp { pre, period } => pre.len() + period.len(),
        }
    }

    /// Every symbol occurring in the point.
    pub fn symbols(&self) -> impl Iterator<Item = &S> {
        let (a, b): (&[S], &[S]) = match self {
            Point::Finite(w) => (w, &[]),
            Point::Evp { pre, period } => (pre, period),
        };
        a.iter().chain(b.iter())
    }

    pub fn map<T: Symbol>(&self, f: impl Fn(&S) -> T) -> Point<T> {
        match self {
            Point::Finite(w) => Point::Finite(w.iter().map(&f).collect()),
            Point::Evp { pre, period } => {
                Point::evp(pre.iter().map(&f).collect::<Vec<_>>(), period.iter().map(&f).collect::<Vec<_>>())
            }
        }
    }
}

/// Structural equality of canonical points.
pub fn point_eq<S: Symbol>(p: &Point<S>, q: &Point<S>) -> bool {
    p == q
}

/// Formats a word as `a,b,c` using `fmt` for each symbol.
pub(crate) fn join<S>(w: &[S], f: impl Fn(&S) -> String) -> String {
    w.iter().map(f).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Point<Sym> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(w) => write!(f, "[{}]", join(w, |a| a.to_string())),
            Point::Evp { pre, period } => write!(
                f,
                "[{}|{}]",
                join(pre, |a| a.to_string()),
                join(period, |a| a.to_string())
            ),
        }
    }
}

/// Points over block letters, written `[[1,2],[2,3]]`.
impl fmt::Display for Point<Vec<Sym>> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let block = |b: &Vec<Sym>| format!("[{}]", join(b, |a| a.to_string()));
        match self {
            Point::Finite(w) => write!(f, "[{}]", join(w, block)),
            Point::Evp { pre, period } => write!(f, "[{}|{}]", join(pre, block), join(period, block)),
        }
    }
}
