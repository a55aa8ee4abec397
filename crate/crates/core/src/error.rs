use thiserror::Error;

/// Errors raised while loading inputs or evaluating runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown speech act label `{0}`")]
    UnknownAct(String),

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("invalid field `{field}`: {message}")]
    InvalidField {
        field: &'static str,
        message: String,
    },

    #[error("dialogue is empty")]
    EmptyDialogue,

    #[error("plan library: {0}")]
    Library(String),

    #[error("matching rules: {0}")]
    Rules(String),

    #[error("dialogue `{dialogue}` utterance {utterance}: {message}")]
    Gold {
        dialogue: String,
        utterance: usize,
        message: String,
    },

    #[error(
        "gold file for `{dialogue}` has {gold} entries but the dialogue has {sentences} sentences"
    )]
    GoldLength {
        dialogue: String,
        gold: usize,
        sentences: usize,
    },

    #[error("graph-structured stack: unknown element {0}")]
    UnknownElement(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
