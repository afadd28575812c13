//! Dictionary-based compression of Prolog programs.

pub mod backend;
pub mod bench;
pub mod codec;
pub mod dictionary;
pub mod normalizer;
pub mod reader;
pub mod stats;
pub mod term;
pub mod writer;

pub use term::Term;
