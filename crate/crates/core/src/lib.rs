//! Pebble transducers, finite-state transducers, bounded pushdown
//! compressors and LZ78, together with descriptional-complexity tools and
//! explicit sequence constructions for measuring depth gaps on finite
//! prefixes.

pub mod complexity;
pub mod constructions;
pub mod fst;
pub mod lz78;
pub mod pebble;
pub mod profiles;
pub mod pushdown;
pub mod sequences;
pub mod textfmt;
pub mod words;

pub use fst::FstMachine;
pub use pebble::PebbleMachine;
pub use pushdown::PdcMachine;
pub use words::{BitStreamSource, BitWord};
