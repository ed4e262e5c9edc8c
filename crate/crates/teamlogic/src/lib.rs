//! File formats, the equivalence harness and the command-line interface
//! for `teamlogic-core`.

pub mod cli;
pub mod equiv;
pub mod fixtures;
pub mod io;
