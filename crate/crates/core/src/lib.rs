//! Hypergraphs of lattice segments: exact covering, matching and coloring
//! numbers, fractional relaxations, extremal constructions and searches.

pub mod cli;
pub mod constructions;
pub mod geometry;
pub mod hypergraph;
pub mod io;
pub mod lp;
pub mod rational;
pub mod search;
pub mod solvers;
