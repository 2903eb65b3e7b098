//! Decision rule systems and decision trees over them.
//!
//! A [`RuleSystem`] is a set of rules `(a_i=δ)∧…→σ`. A [`DecisionTree`]
//! solves one of six problems for it (`AR`, `AD`, `SR` and their extended
//! variants that accept `*` as an attribute value). The [`solver`] finds the
//! minimum depth of such a tree exactly; [`generators`] builds the extremal
//! systems behind the depth bounds in [`bounds`]; [`audit`] checks all of it
//! against each other.

pub mod assignment;
pub mod audit;
pub mod bounds;
pub mod cover;
pub mod dsl;
pub mod error;
pub mod fixtures;
pub mod generators;
pub mod rule;
pub mod solver;
pub mod surgery;
pub mod system;
pub mod tree;
pub mod tree_io;
pub mod verify;

pub use assignment::Assignment;
pub use error::{Error, Result};
pub use rule::{is_consistent, AttrId, DecisionRule, Equation, Value};
pub use system::{Mode, Restriction, RuleSystem, SystemProfile};
pub use tree::{CompletePath, DecisionTree, Edge, Node, ProblemKind, Semantics, Variant};
