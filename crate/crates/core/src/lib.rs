//! Permutation groups, F2 linear algebra, typed simplicial complexes and
//! discrete Morse collapses, with the computations on Conway's group Co3
//! and on p-subgroup complexes of small groups built from them.

pub mod co3;
pub mod complex;
pub mod gf2;
pub mod morse;
pub mod oracle;
pub mod perm;
pub mod radical;
pub mod report;
