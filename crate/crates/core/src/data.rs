//! Shipped plan library, matching rules and evaluation corpus.

pub const DEFAULT_LIBRARY: &str = include_str!("../data/library.json");
pub const DEFAULT_RULES: &str = include_str!("../data/rules.json");

/// A bundled dialogue with its gold annotations.
#[derive(Debug, Clone, Copy)]
pub struct BundledDialogue {
    pub name: &'static str,
    pub dialogue: &'static str,
    pub gold: &'static str,
    /// Whether suggestions are negotiated in parallel.
    pub parallel: bool,
}

macro_rules! bundled {
    ($name:literal, $parallel:expr) => {
        BundledDialogue {
            name: $name,
            dialogue: include_str!(concat!("../data/corpus/", $name, ".jsonl")),
            gold: include_str!(concat!("../data/corpus/", $name, ".gold.jsonl")),
            parallel: $parallel,
        }
    };
}

pub const BUNDLED_CORPUS: &[BundledDialogue] = &[
    bundled!("figure2", true),
    bundled!("figure1", true),
    bundled!("three-options", true),
    bundled!("two-threads", true),
    bundled!("rejections", true),
    bundled!("linear-confirm", false),
    bundled!("clarification", false),
];
