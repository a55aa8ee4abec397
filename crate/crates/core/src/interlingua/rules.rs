use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::InterlinguaFrame;
use crate::error::{Error, Result};
use crate::speech_acts::SpeechAct;

/// A test on a single frame slot. In rule files the strings `present` and
/// `absent` are reserved; anything else is matched literally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotTest {
    Present,
    Absent,
    Equals(String),
}

impl SlotTest {
    fn check(&self, value: Option<&str>) -> bool {
        match self {
            SlotTest::Present => value.is_some(),
            SlotTest::Absent => value.is_none(),
            SlotTest::Equals(expected) => value == Some(expected.as_str()),
        }
    }
}

impl Serialize for SlotTest {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SlotTest::Present => serializer.serialize_str("present"),
            SlotTest::Absent => serializer.serialize_str("absent"),
            SlotTest::Equals(v) => serializer.serialize_str(v),
        }
    }
}

impl<'de> Deserialize<'de> for SlotTest {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Ok(match raw.as_str() {
            "present" => SlotTest::Present,
            "absent" => SlotTest::Absent,
            _ => SlotTest::Equals(raw),
        })
    }
}

/// Partial predicate over frame slots; unset slots match anything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RulePattern {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<SlotTest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence_type: Option<SlotTest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub who: Option<SlotTest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub when: Option<SlotTest>,
}

impl RulePattern {
    pub fn subsumes(&self, frame: &InterlinguaFrame) -> bool {
        let when = frame.when.as_ref().map(|_| "present");
        let checks = [
            (&self.frame, Some(frame.frame_name.as_str())),
            (&self.sentence_type, Some(frame.sentence_type.label())),
            (&self.who, frame.who.as_deref()),
            (&self.when, when),
        ];
        checks
            .iter()
            .all(|(test, value)| test.as_ref().is_none_or(|t| t.check(*value)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingRule {
    pub pattern: RulePattern,
    pub candidates: Vec<SpeechAct>,
    pub priority: i32,
}

/// Loads a rule file: a JSON array of rules. The result is sorted by
/// descending priority, ties kept in file order.
pub fn load_matching_rules(text: &str) -> Result<Vec<MatchingRule>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut rules: Vec<MatchingRule> =
        serde_json::from_str(text).map_err(|e| Error::Rules(e.to_string()))?;
    for (idx, rule) in rules.iter().enumerate() {
        if rule.candidates.is_empty() {
            return Err(Error::Rules(format!(
                "rule {idx} has an empty candidate list"
            )));
        }
    }
    rules.sort_by_key(|r| std::cmp::Reverse(r.priority));
    Ok(rules)
}

/// Candidate acts from the first (highest-priority) rule whose pattern
/// subsumes the frame, deduplicated in order. No match yields an empty list.
pub fn match_speech_acts(frame: &InterlinguaFrame, rules: &[MatchingRule]) -> Vec<SpeechAct> {
    let Some(rule) = rules.iter().find(|r| r.pattern.subsumes(frame)) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(rule.candidates.len());
    for &act in &rule.candidates {
        if !out.contains(&act) {
            out.push(act);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interlingua::{DayOfWeek, SentenceType, TimeExpression};

    #[test]
    fn sorts_by_priority_stably() {
        let text = r#"[
            {"pattern":{"frame":"*a"},"candidates":["Accept"],"priority":1},
            {"pattern":{"frame":"*b"},"candidates":["Reject"],"priority":5},
            {"pattern":{"frame":"*c"},"candidates":["Suggest"],"priority":1}
        ]"#;
        let rules = load_matching_rules(text).unwrap();
        let firsts: Vec<_> = rules.iter().map(|r| r.candidates[0]).collect();
        assert_eq!(
            firsts,
            vec![SpeechAct::Reject, SpeechAct::Accept, SpeechAct::Suggest]
        );
    }

    #[test]
    fn rejects_unknown_label_and_empty_candidates() {
        let unknown = r#"[{"pattern":{},"candidates":["maybe"],"priority":0}]"#;
        assert!(load_matching_rules(unknown)
            .unwrap_err()
            .to_string()
            .contains("maybe"));
        let empty = r#"[{"pattern":{},"candidates":[],"priority":0}]"#;
        assert!(load_matching_rules(empty).is_err());
    }

    #[test]
    fn empty_file_is_empty_rule_list() {
        assert!(load_matching_rules("").unwrap().is_empty());
        assert!(load_matching_rules("[]").unwrap().is_empty());
    }

    #[test]
    fn presence_absence_and_literal_tests() {
        let rules = load_matching_rules(
            r#"[
            {"pattern":{"frame":"*free","when":"present","who":"*i"},"candidates":["Suggest","Accept","Suggest"],"priority":10},
            {"pattern":{"frame":"*free","when":"absent"},"candidates":["State-Constraint"],"priority":10}
        ]"#,
        )
        .unwrap();
        let with_when = InterlinguaFrame::new(SentenceType::State, "*free")
            .with_who("*i")
            .with_when(TimeExpression {
                day_of_week: Some(DayOfWeek::Tuesday),
                ..Default::default()
            });
        assert_eq!(
            match_speech_acts(&with_when, &rules),
            vec![SpeechAct::Suggest, SpeechAct::Accept]
        );
        let bare = InterlinguaFrame::new(SentenceType::State, "*free");
        assert_eq!(
            match_speech_acts(&bare, &rules),
            vec![SpeechAct::StateConstraint]
        );
        let you = InterlinguaFrame::new(SentenceType::State, "*free")
            .with_who("*you")
            .with_when(TimeExpression {
                day_of_week: Some(DayOfWeek::Tuesday),
                ..Default::default()
            });
        assert!(match_speech_acts(&you, &rules).is_empty());
    }
}
