//! Relational correspondents of modal reduction principles.

mod compile;
mod eval;
mod term;

use thiserror::Error;

pub use compile::{
    alba_output, alba_type_a, alba_type_b, correspondent, correspondent_raw, lift_inequality, lift_term,
    modality_symbol, normalize, normalize_inequality, rel_term, translate_tau, translate_tau_inequality,
    PureInequality, Role, Row,
};
pub use eval::{eval_term, ineq_holds, language_of, pair_labels, IneqOutcome};
pub use term::{parse_rel_inequality, parse_rel_term, Carrier, Lang, Op, RelInequality, RelTerm, Sort, Sym};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorrespondError {
    #[error("parse error at offset {offset}: expected {expected}, found {found}")]
    Parse { offset: usize, expected: String, found: String },
    #[error("`{term}` is not a {lang} term")]
    Language { term: String, lang: Lang },
    #[error("`{0}` mixes symbols or operators of different languages")]
    MixedLanguages(String),
    #[error("`{0}` fits several languages; pass one explicitly")]
    AmbiguousLanguage(String),
    #[error("ill-sorted PRel term `{term}`: {left} against {right}")]
    Sort { term: String, left: Sort, right: Sort },
    #[error("string `{string}` cannot play role {role:?}")]
    RoleMismatch { string: String, role: Role },
    #[error("`{0}` is not a Sahlqvist mrp")]
    NotSahlqvist(String),
    #[error("term `{term}` cannot be evaluated on a {frame} frame")]
    FrameMismatch { term: String, frame: &'static str },
}
