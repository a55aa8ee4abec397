//! Plan-based speech-act recognition for scheduling-negotiation dialogues.
//!
//! Each sentence arrives as an interlingua frame. Matching rules give it an
//! ordered list of candidate speech acts; the inference engine chains each
//! candidate up a library of discourse plan operators and attaches the first
//! chain the attentional state licenses. Where the chain lands decides the
//! act. Two attentional models are provided: a strict stack over the active
//! path, and a graph-structured stack that keeps parallel threads of a
//! negotiation in focus together.

pub mod attention;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod inference_engine;
pub mod interlingua;
pub mod plan_library;
pub mod speech_acts;
pub mod temporal;

pub use attention::{FocusState, Heuristic, PlanTree};
pub use error::{Error, Result};
pub use evaluation::{
    evaluate_corpus, render_table, score_sentence, CorpusReport, GoldAnnotation, Outcome,
};
pub use inference_engine::{
    process_corpus, process_dialogue, EngineConfig, ProcessedDialogue, Session,
};
pub use interlingua::{
    load_matching_rules, parse_dialogue, Dialogue, InterlinguaFrame, MatchingRule, TimeExpression,
};
pub use plan_library::{load_plan_library, PlanLibrary};
pub use speech_acts::{parse_act, SpeechAct};
