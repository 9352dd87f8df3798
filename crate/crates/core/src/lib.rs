//! Explicit-state model checking of alternating-time temporal logic with
//! knowledge and unconditional state fairness, under full observability
//! (global strategies) and partial observability (uniform strategies).

pub mod amf;
pub mod bitset;
pub mod eval;
pub mod fixtures;
pub mod fo;
pub mod formula;
pub mod gen;
pub mod model;
pub mod oracle;
pub mod pairset;
pub mod po;
pub mod result;

pub use amf::{load_model, parse_amf, print_model, AmfError};
pub use bitset::{BitSet, StateSet};
pub use eval::{eval_fo, eval_po, Checker, EvalError, Semantics};
pub use formula::{negate_path, parse_formula, Formula, PathFormula, PathKind, SyntaxError};
pub use gen::{random_model, random_spec, GenConfig};
pub use model::{
    build_model, completes, AgentDecl, Coalition, CoalitionAction, CoalitionView, GlobalState, JointAction, Model,
    ModelError, ModelSpec, TransitionDecl,
};
pub use oracle::{Oracle, OracleError};
pub use pairset::PairSet;
pub use po::{count_uniform, split, uniform_bound, PoAlgorithm, PoEngine, PoOptions};
pub use result::{CheckResult, Diagnostics, Witness, WitnessEntry};
