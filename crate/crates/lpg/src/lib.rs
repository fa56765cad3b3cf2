//! Decision procedures for equations in n-periodic lattice-ordered pregroups.

pub mod cli;
pub mod decide;
pub mod diagram;
pub mod fnz;
pub mod lexfn;
pub mod oracle;
pub mod search;
pub mod spacing;
pub mod term;
pub mod wreath;
