//! File formats, generators, the LP emitter and the command-line front end
//! for `popmax-core`.

pub mod cli;
pub mod format;
pub mod gen;
pub mod lp;
