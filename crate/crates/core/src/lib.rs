//! One-sided shift spaces over countable alphabets, sliding block codes with
//! variable anticipation, and certifiers for their continuity.

pub mod chl;
pub mod error;
pub mod fds;
pub mod gallery;
pub mod hbc;
pub mod par;
pub mod point;
pub mod rules;
pub mod sbc;
pub mod shiftspace;
pub mod symset;
pub mod text;
pub mod topology;

pub use error::{Error, Result};
pub use point::{Alphabet, Length, Letter, Point, Sym};
pub use shiftspace::ShiftPresentation;
pub use symset::{LetterSet, SymSet};
