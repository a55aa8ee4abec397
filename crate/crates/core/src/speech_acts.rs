//! The closed speech-act taxonomy and the weaker-form relation between acts.
//!
//! A weaker form is a less committal act that an utterance performing the
//! stronger act also performs: every acceptance also states a constraint on
//! the speaker's schedule, every "yes" acceptance is also an affirmative
//! answer. The relation is stored extensionally; it is not transitively
//! closed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpeechAct {
    Opening,
    Closing,
    Suggest,
    Reject,
    Accept,
    StateConstraint,
    ConfirmAppointment,
    Negate,
    Affirm,
    RequestResponse,
    RequestSuggestion,
    RequestClarification,
    RequestConfirmation,
}

impl SpeechAct {
    pub const ALL: [SpeechAct; 13] = [
        SpeechAct::Opening,
        SpeechAct::Closing,
        SpeechAct::Suggest,
        SpeechAct::Reject,
        SpeechAct::Accept,
        SpeechAct::StateConstraint,
        SpeechAct::ConfirmAppointment,
        SpeechAct::Negate,
        SpeechAct::Affirm,
        SpeechAct::RequestResponse,
        SpeechAct::RequestSuggestion,
        SpeechAct::RequestClarification,
        SpeechAct::RequestConfirmation,
    ];

    /// Canonical label used in every file format.
    pub fn label(self) -> &'static str {
        match self {
            SpeechAct::Opening => "Opening",
            SpeechAct::Closing => "Closing",
            SpeechAct::Suggest => "Suggest",
            SpeechAct::Reject => "Reject",
            SpeechAct::Accept => "Accept",
            SpeechAct::StateConstraint => "State-Constraint",
            SpeechAct::ConfirmAppointment => "Confirm-Appointment",
            SpeechAct::Negate => "Negate",
            SpeechAct::Affirm => "Affirm",
            SpeechAct::RequestResponse => "Request-Response",
            SpeechAct::RequestSuggestion => "Request-Suggestion",
            SpeechAct::RequestClarification => "Request-Clarification",
            SpeechAct::RequestConfirmation => "Request-Confirmation",
        }
    }
}

fn normalize(label: &str) -> String {
    label
        .trim()
        .trim_start_matches('*')
        .chars()
        .map(|c| {
            if c == '_' {
                '-'
            } else {
                c.to_ascii_lowercase()
            }
        })
        .collect()
}

/// Parses a label case-insensitively, treating `_` as `-`. A leading `*`
/// (interlingua token style, e.g. `*suggest`) is tolerated.
pub fn parse_act(label: &str) -> Result<SpeechAct> {
    let wanted = normalize(label);
    SpeechAct::ALL
        .into_iter()
        .find(|act| act.label().to_ascii_lowercase() == wanted)
        .ok_or_else(|| Error::UnknownAct(label.to_string()))
}

impl FromStr for SpeechAct {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_act(s)
    }
}

impl fmt::Display for SpeechAct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for SpeechAct {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for SpeechAct {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        parse_act(&raw).map_err(serde::de::Error::custom)
    }
}

/// The weaker-than relation as `(weaker, stronger)` pairs.
#[derive(Debug, Clone, Copy, Default)]
pub struct StrengthLattice;

impl StrengthLattice {
    pub const PAIRS: [(SpeechAct, SpeechAct); 6] = [
        (SpeechAct::StateConstraint, SpeechAct::Suggest),
        (SpeechAct::StateConstraint, SpeechAct::Reject),
        (SpeechAct::StateConstraint, SpeechAct::Accept),
        (SpeechAct::StateConstraint, SpeechAct::ConfirmAppointment),
        (SpeechAct::Affirm, SpeechAct::Accept),
        (SpeechAct::Negate, SpeechAct::Reject),
    ];

    pub fn pairs(&self) -> &'static [(SpeechAct, SpeechAct)] {
        &Self::PAIRS
    }
}

/// True iff `weaker` is a listed weaker form of `stronger`.
pub fn is_weaker(weaker: SpeechAct, stronger: SpeechAct) -> bool {
    StrengthLattice::PAIRS.contains(&(weaker, stronger))
}

/// All acts that are weaker forms of `stronger`, in taxonomy order.
pub fn weaker_forms(stronger: SpeechAct) -> Vec<SpeechAct> {
    SpeechAct::ALL
        .into_iter()
        .filter(|&a| is_weaker(a, stronger))
        .collect()
}
