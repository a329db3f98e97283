//! Hypersets as pointed directed graphs under the Anti-Foundation Axiom.
//!
//! A pointed directed graph ([`System`]) pictures a set; bisimilar pictures
//! depict the same set, and every picture collapses to a canonical minimal
//! form ([`HyperSet`]). On top of the set layer sits a finitary modal logic
//! (satisfaction, characteristic formulas, observational equivalence) and a
//! classifier for registries of events as strong or weak virtual realities.

pub mod bisim;
pub mod cli;
pub mod equations;
pub mod error;
pub mod gen;
pub mod hyperset;
pub mod modal;
pub mod repl;
pub mod system;
pub mod vr;

pub use bisim::{bisimilar, canonicalize, naive_bisim, quotient, refine_partition, Partition, SystemMap};
pub use equations::{parse_system, Equations};
pub use error::{Error, Pos, Result};
pub use hyperset::{decorate, mostowski_collapse, solve_equations, HyperSet};
pub use modal::{
    char_formula, char_formula_with_budget, modally_equivalent, modally_equivalent_with_budget,
    normalize, parse_formula, satisfies, Formula,
};
pub use system::{NodeId, System, SystemRepr};
pub use vr::{
    classification_report, classify_event, classify_universe, embed_check, second_order,
    ClassificationReport, Event, EventClass, RegistryRepr, SecondOrderEvent, UniverseClass,
    UniverseRegistry,
};
