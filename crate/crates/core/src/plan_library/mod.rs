//! Discourse-level plan operators.
//!
//! An operator's header names the action it performs; its decomposition is
//! an ordered list of sub-actions, each annotated with how often it may
//! occur. Alternative decompositions of the same action are written as
//! separate operators sharing a header. Operators carrying an `act-label`
//! are where an utterance's inference chain starts.

mod decomposition;

pub use decomposition::{assign_items, is_member, is_viable_prefix};

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interlingua::TimeExpression;
use crate::speech_acts::SpeechAct;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Repetition {
    #[serde(rename = "exactly-1")]
    ExactlyOne,
    #[serde(rename = "0-or-1")]
    ZeroOrOne,
    #[serde(rename = "0-or-more")]
    ZeroOrMore,
    #[serde(rename = "1-or-more")]
    OneOrMore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionItem {
    pub action: String,
    pub annotation: Repetition,
}

impl DecompositionItem {
    pub fn new(action: impl Into<String>, annotation: Repetition) -> Self {
        Self {
            action: action.into(),
            annotation,
        }
    }

    pub fn repeating(&self) -> bool {
        self.annotation.repeating()
    }
}

/// Context check an operator imposes on the node it is attached under.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    #[default]
    None,
    /// Day-level fields present in both expressions must agree.
    SameDay,
    /// `SameDay`, plus compatible time of day and overlapping hour ranges.
    SameOrCompatibleTime,
}

impl Constraint {
    fn is_none(&self) -> bool {
        *self == Constraint::None
    }

    /// An absent expression on either side is compatible with anything.
    pub fn check(self, incoming: Option<&TimeExpression>, anchor: Option<&TimeExpression>) -> bool {
        let (Some(a), Some(b)) = (incoming, anchor) else {
            return true;
        };
        fn agree<T: PartialEq>(x: Option<T>, y: Option<T>) -> bool {
            match (x, y) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            }
        }
        let same_day = agree(a.day_of_week, b.day_of_week)
            && agree(a.month, b.month)
            && agree(a.day_of_month, b.day_of_month)
            && agree(a.week_offset, b.week_offset);
        match self {
            Constraint::None => true,
            Constraint::SameDay => same_day,
            Constraint::SameOrCompatibleTime => {
                let hours_overlap = match (a.hour_start, a.hour_end, b.hour_start, b.hour_end) {
                    (Some(s1), e1, Some(s2), e2) => {
                        s1 <= e2.unwrap_or(s2) && s2 <= e1.unwrap_or(s1)
                    }
                    _ => true,
                };
                same_day && agree(a.time_of_day, b.time_of_day) && hours_overlap
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PlanOperator {
    pub name: String,
    pub header: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub act_label: Option<SpeechAct>,
    #[serde(default, skip_serializing_if = "Constraint::is_none")]
    pub constraint: Constraint,
    #[serde(default)]
    pub decomposition: Vec<DecompositionItem>,
}

impl PlanOperator {
    pub fn mentions(&self, action: &str) -> bool {
        self.decomposition.iter().any(|i| i.action == action)
    }
}

/// Index of an operator inside its library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperatorId(pub usize);

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LibraryFile {
    root: String,
    operators: Vec<PlanOperator>,
}

#[derive(Debug, Clone)]
pub struct PlanLibrary {
    root_action: String,
    operators: Vec<PlanOperator>,
    by_name: HashMap<String, OperatorId>,
}

impl PlanLibrary {
    pub fn new(root_action: impl Into<String>, operators: Vec<PlanOperator>) -> Result<Self> {
        let root_action = root_action.into();
        let mut by_name = HashMap::new();
        for (idx, op) in operators.iter().enumerate() {
            if by_name.insert(op.name.clone(), OperatorId(idx)).is_some() {
                return Err(Error::Library(format!(
                    "duplicate operator name `{}`",
                    op.name
                )));
            }
        }
        let headers: BTreeSet<&str> = operators.iter().map(|o| o.header.as_str()).collect();
        if !headers.contains(root_action.as_str()) {
            return Err(Error::Library(format!(
                "root action `{root_action}` is not the header of any operator"
            )));
        }
        for op in &operators {
            for item in &op.decomposition {
                let terminal = SpeechAct::ALL.iter().any(|a| a.label() == item.action);
                if !headers.contains(item.action.as_str()) && !terminal {
                    return Err(Error::Library(format!(
                        "operator `{}` refers to unknown action `{}`",
                        op.name, item.action
                    )));
                }
            }
        }
        Ok(Self {
            root_action,
            operators,
            by_name,
        })
    }

    pub fn root_action(&self) -> &str {
        &self.root_action
    }

    pub fn operators(&self) -> &[PlanOperator] {
        &self.operators
    }

    pub fn get(&self, id: OperatorId) -> &PlanOperator {
        &self.operators[id.0]
    }

    pub fn find(&self, name: &str) -> Option<OperatorId> {
        self.by_name.get(name).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = OperatorId> + '_ {
        (0..self.operators.len()).map(OperatorId)
    }

    /// First operator whose header is the root action.
    pub fn root_operator(&self) -> OperatorId {
        self.ids()
            .find(|&id| self.get(id).header == self.root_action)
            .expect("validated at construction")
    }

    /// Operators an utterance carrying `act` starts its chain from.
    pub fn operators_for_act(&self, act: SpeechAct) -> Vec<OperatorId> {
        self.ids()
            .filter(|&id| self.get(id).act_label == Some(act))
            .collect()
    }

    /// True iff `action` occurs in some decomposition and every occurrence is
    /// annotated 0-or-more or 1-or-more. Instances of such actions open new
    /// parallel segments; all other attachments answer an existing node.
    pub fn is_repeating_action(&self, action: &str) -> bool {
        let mut seen = false;
        for item in self.operators.iter().flat_map(|o| &o.decomposition) {
            if item.action == action {
                if !item.repeating() {
                    return false;
                }
                seen = true;
            }
        }
        seen
    }

    pub fn to_json(&self) -> String {
        let file = LibraryFile {
            root: self.root_action.clone(),
            operators: self.operators.clone(),
        };
        serde_json::to_string_pretty(&file).expect("library always serializes")
    }
}

/// Parses and validates an operator file.
pub fn load_plan_library(text: &str) -> Result<PlanLibrary> {
    let file: LibraryFile =
        serde_json::from_str(text).map_err(|e| Error::Library(e.to_string()))?;
    PlanLibrary::new(file.root, file.operators)
}

/// True iff `existing + [candidate]` is a prefix of a word of `op`'s
/// decomposition language.
pub fn decomposition_accepts<S: AsRef<str>>(
    op: &PlanOperator,
    existing: &[S],
    candidate: &str,
) -> bool {
    let mut word: Vec<&str> = existing.iter().map(AsRef::as_ref).collect();
    word.push(candidate);
    is_viable_prefix(&op.decomposition, &word)
}

/// True iff `existing` is a full word of `op`'s decomposition language.
pub fn is_complete<S: AsRef<str>>(op: &PlanOperator, existing: &[S]) -> bool {
    is_member(&op.decomposition, existing)
}

/// Operators whose decomposition mentions `action`, in library order.
pub fn chainable_parents<'a>(lib: &'a PlanLibrary, action: &str) -> Vec<&'a PlanOperator> {
    lib.operators
        .iter()
        .filter(|op| op.mentions(action))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DEFAULT_LIBRARY;
    use crate::interlingua::{DayOfWeek, TimeOfDay};

    fn default_lib() -> PlanLibrary {
        load_plan_library(DEFAULT_LIBRARY).unwrap()
    }

    #[test]
    fn default_library_has_negotiate_meeting_with_repeating_suggestions() {
        let lib = default_lib();
        let op = lib.get(lib.find("Negotiate-Meeting").unwrap());
        assert_eq!(
            op.decomposition[0],
            DecompositionItem::new("Suggestion", Repetition::OneOrMore)
        );
        assert!(lib.is_repeating_action("Suggestion"));
        assert!(!lib.is_repeating_action("Response"));
        assert_eq!(lib.root_action(), "Scheduling-Dialogue");
    }

    #[test]
    fn default_library_round_trips() {
        let lib = default_lib();
        assert_eq!(lib.to_json().trim_end(), DEFAULT_LIBRARY.trim_end());
        let again = load_plan_library(&lib.to_json()).unwrap();
        assert_eq!(again.operators(), lib.operators());
    }

    #[test]
    fn every_act_has_a_chain_start() {
        let lib = default_lib();
        for act in SpeechAct::ALL {
            assert!(!lib.operators_for_act(act).is_empty(), "{act}");
        }
    }

    #[test]
    fn rejects_unknown_annotation() {
        let text = r#"{"root":"R","operators":[{"name":"R","header":"R","decomposition":[{"action":"Accept","annotation":"2-or-more"}]}]}"#;
        assert!(load_plan_library(text)
            .unwrap_err()
            .to_string()
            .contains("2-or-more"));
    }

    #[test]
    fn rejects_missing_root_duplicates_and_dangling_actions() {
        let missing = r#"{"root":"Nope","operators":[{"name":"R","header":"R"}]}"#;
        assert!(load_plan_library(missing)
            .unwrap_err()
            .to_string()
            .contains("Nope"));
        let dup =
            r#"{"root":"R","operators":[{"name":"R","header":"R"},{"name":"R","header":"R"}]}"#;
        assert!(load_plan_library(dup)
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
        let dangling = r#"{"root":"R","operators":[{"name":"R","header":"R","decomposition":[{"action":"Ghost","annotation":"exactly-1"}]}]}"#;
        assert!(load_plan_library(dangling)
            .unwrap_err()
            .to_string()
            .contains("Ghost"));
    }

    #[test]
    fn chainable_parent_lookups() {
        let lib = default_lib();
        let headers = |action: &str| -> BTreeSet<String> {
            chainable_parents(&lib, action)
                .into_iter()
                .map(|o| o.header.clone())
                .collect()
        };
        assert_eq!(
            headers("Suggestion"),
            BTreeSet::from(["Negotiate-Meeting".to_string(), "Suggestion".to_string()])
        );
        assert_eq!(headers("Accept"), BTreeSet::from(["Response".to_string()]));
        assert!(chainable_parents(&lib, "unknown-action").is_empty());
    }

    #[test]
    fn decomposition_examples() {
        let op = PlanOperator {
            name: "Negotiate-Meeting".into(),
            header: "Negotiate-Meeting".into(),
            act_label: None,
            constraint: Constraint::None,
            decomposition: vec![
                DecompositionItem::new("Suggestion", Repetition::OneOrMore),
                DecompositionItem::new("Response", Repetition::ZeroOrMore),
            ],
        };
        assert!(decomposition_accepts(&op, &["Suggestion"], "Suggestion"));
        assert!(!decomposition_accepts(
            &op,
            &["Suggestion", "Response"],
            "Suggestion"
        ));
        assert!(!decomposition_accepts::<&str>(&op, &[], "Response"));
        assert!(is_complete(&op, &["Suggestion"]));
        assert!(!is_complete::<&str>(&op, &[]));
        let leaf = PlanOperator {
            decomposition: vec![],
            ..op
        };
        assert!(is_complete::<&str>(&leaf, &[]));
        assert!(!decomposition_accepts::<&str>(&leaf, &[], "Suggestion"));
    }

    #[test]
    fn constraint_checks() {
        let tue = TimeExpression {
            day_of_week: Some(DayOfWeek::Tuesday),
            ..Default::default()
        };
        let wed_morning = TimeExpression {
            day_of_week: Some(DayOfWeek::Wednesday),
            time_of_day: Some(TimeOfDay::Morning),
            ..Default::default()
        };
        let morning = TimeExpression {
            time_of_day: Some(TimeOfDay::Morning),
            ..Default::default()
        };
        let noon_two = TimeExpression {
            hour_start: Some(12),
            hour_end: Some(14),
            ..Default::default()
        };
        let three = TimeExpression {
            hour_start: Some(15),
            ..Default::default()
        };
        assert!(!Constraint::SameDay.check(Some(&tue), Some(&wed_morning)));
        assert!(Constraint::SameDay.check(Some(&morning), Some(&wed_morning)));
        assert!(Constraint::SameDay.check(None, Some(&tue)));
        assert!(Constraint::None.check(Some(&tue), Some(&wed_morning)));
        assert!(!Constraint::SameOrCompatibleTime.check(Some(&noon_two), Some(&three)));
        assert!(Constraint::SameOrCompatibleTime.check(Some(&morning), Some(&wed_morning)));
    }
}
