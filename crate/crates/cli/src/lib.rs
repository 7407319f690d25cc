//! IO companion to the core simulator: the line-oriented graph/config text
//! format, JSON-lines trace and report files, DOT frame export, and the
//! plumbing behind the `misfill` command line tool.

pub mod dot;
pub mod format;
pub mod jsonl;
pub mod ops;
