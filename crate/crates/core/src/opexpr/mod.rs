//! Operator expressions and scenario files.
//!
//! Scenarios declare a subsystem layout (an ordered list of spins) and two
//! named sets of observables written in a small expression language:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ("^" uint)?
//! atom   := number | "i" | "Id" | gen "(" uint ")" | "(" expr ")" | "-" atom
//! gen    := Sx | Sy | Sz | Sp | Sm | X | Y | Z
//! ```
//!
//! Generator leaves name a 1-based subsystem; `X`, `Y`, `Z` are the Pauli
//! matrices (`2·Sx` etc.) and are only legal on spin-1/2 subsystems.
//! Evaluation embeds every leaf into the full tensor-product space and then
//! combines full-space matrices, so products of generators on the same
//! subsystem mean ordinary operator products.

mod ast;
mod eval;
mod layout;
mod parser;
mod scenario;
mod spin;

pub use ast::{Generator, OperatorExpr};
pub use eval::evaluate_expr;
pub use layout::{SubsystemLayout, DEFAULT_MAX_DIM};
pub use parser::parse_operator_expr;
pub use scenario::{parse_scenario, parse_scenario_with_max_dim, Bipartition, NamedExpr, Scenario};
pub use spin::{spin_generators, SpinGenerators};
