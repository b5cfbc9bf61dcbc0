//! Built-in scenarios and report rendering for the `csco` command-line
//! tool. The numerical machinery lives in `csco-core`; this crate only
//! knows how to name scenarios and print results.

pub mod builtin;
pub mod render;
