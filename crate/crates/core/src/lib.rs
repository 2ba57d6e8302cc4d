//! Abelian and additive complexity of morphic and automatic sequences.
//!
//! The crate generates prefixes of morphic words, counts their factors up
//! to abelian or additive equivalence, evaluates automata with output and
//! linear representations over positional numeration systems, converts
//! bounded linear representations into automata, and searches for
//! abelian and additive powers.

pub mod complexity;
pub mod automata;
pub mod exec;
pub mod fixtures;
pub mod linrep;
pub mod numeration;
pub mod powers;
pub mod word;
