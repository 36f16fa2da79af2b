//! First-order formulas: syntax, parsing, evaluation, sentence builders and translations.

mod eval;
mod formula;
mod parser;
mod sentences;
mod translate;

pub(crate) use eval::eval_unchecked;
pub use eval::{eval, Assignment};
pub use formula::{Formula, Var};
pub use parser::{check_against, parse_formula, parse_order_formula};
pub use sentences::{
    build_alpha, build_phi, build_phi_capped, build_psi, build_psi_capped, build_psi_n, build_psi_n_capped,
    DEFAULT_PHI_CAP,
};
pub use translate::{
    all_vars, permute_formula, reduce_duplicate_relations, star_translate, substitute, OrderDefinitions, Reduction,
    SymbolTranslation,
};
