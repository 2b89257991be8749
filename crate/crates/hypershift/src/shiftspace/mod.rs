//! Words, shift-space descriptions, and resolution-bounded languages.

pub mod language;
pub mod spec;
pub mod word;

pub use language::{generate_language, substitution_orbit_prefix, Language};
pub use spec::ShiftSpaceSpec;
pub use word::{metric_distance, rat_string, shift_word, Rat, Symbol, Word, MAX_ALPHABET};
