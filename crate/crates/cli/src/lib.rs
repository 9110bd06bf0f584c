//! Library behind the `inertia` command: the input format, the commands and
//! their verification suites.

pub mod commands;
pub mod input;
pub mod suites;
pub mod table;
