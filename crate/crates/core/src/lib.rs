//! Word cobordisms and the grammar formalisms interpreted in them.

pub mod acg;
pub mod boundary;
pub mod cowordism;
pub mod grammar;
pub mod multiword;
pub mod lambda;
pub mod laws;
pub mod llg;
pub mod mcfg;
pub mod mll;
pub mod word;

pub use boundary::Boundary;
pub use cowordism::Cowordism;
pub use multiword::{Edge, Multiword};
pub use word::{Alphabet, CyclicWord, Token, Word};
