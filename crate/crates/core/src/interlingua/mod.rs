//! Sentence-level interlingua frames and the dialogue container.
//!
//! Dialogue files are line-delimited JSON, one record per sentence. Records
//! are written back in a fixed key order, so a canonical file survives a
//! parse/serialize cycle byte for byte.

mod rules;

pub use rules::{load_matching_rules, match_speech_acts, MatchingRule, RulePattern, SlotTest};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::speech_acts::SpeechAct;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DayOfWeek {
    Monday,
    Tuesday,
    Wednesday,
    Thursday,
    Friday,
    Saturday,
    Sunday,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Month {
    January,
    February,
    March,
    April,
    May,
    June,
    July,
    August,
    September,
    October,
    November,
    December,
}

impl Month {
    /// Longest length of the month in any year.
    pub fn max_days(self) -> u8 {
        match self {
            Month::February => 29,
            Month::April | Month::June | Month::September | Month::November => 30,
            _ => 31,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeOfDay {
    Morning,
    Afternoon,
    Evening,
}

/// A `*simple-time` frame. Every field is optional but at least one must be set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TimeExpression {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub day_of_week: Option<DayOfWeek>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub month: Option<Month>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub day_of_month: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub week_offset: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_of_day: Option<TimeOfDay>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hour_start: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hour_end: Option<u8>,
}

impl TimeExpression {
    pub fn is_empty(&self) -> bool {
        *self == TimeExpression::default()
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidField {
                field: "when",
                message: "time expression has no fields".into(),
            });
        }
        for (field, hour) in [("hour-start", self.hour_start), ("hour-end", self.hour_end)] {
            if matches!(hour, Some(h) if h > 23) {
                return Err(Error::InvalidField {
                    field,
                    message: format!("{} is outside 0..23", hour.unwrap()),
                });
            }
        }
        if let (Some(start), Some(end)) = (self.hour_start, self.hour_end) {
            if start > end {
                return Err(Error::InvalidField {
                    field: "hour-start",
                    message: format!("hour range {start}..{end} is inverted"),
                });
            }
        }
        if let Some(day) = self.day_of_month {
            let max = self.month.map_or(31, Month::max_days);
            if day == 0 || day > max {
                return Err(Error::InvalidField {
                    field: "day-of-month",
                    message: format!("{day} is not a valid day of the month"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SentenceType {
    State,
    QueryIf,
    QueryRef,
    Fragment,
}

impl SentenceType {
    pub fn label(self) -> &'static str {
        match self {
            SentenceType::State => "state",
            SentenceType::QueryIf => "query-if",
            SentenceType::QueryRef => "query-ref",
            SentenceType::Fragment => "fragment",
        }
    }
}

/// One sentence's semantic representation plus its candidate and final acts.
#[derive(Debug, Clone, PartialEq)]
pub struct InterlinguaFrame {
    pub sentence_type: SentenceType,
    /// Open token set, e.g. `*free`, `*busy`, `*greeting`.
    pub frame_name: String,
    pub who: Option<String>,
    pub when: Option<TimeExpression>,
    /// Ambiguous candidate acts, most plausible first.
    pub a_speech_act: Vec<SpeechAct>,
    pub speech_act: Option<SpeechAct>,
    pub source_text: String,
}

impl InterlinguaFrame {
    pub fn new(sentence_type: SentenceType, frame_name: impl Into<String>) -> Self {
        Self {
            sentence_type,
            frame_name: frame_name.into(),
            who: None,
            when: None,
            a_speech_act: Vec::new(),
            speech_act: None,
            source_text: String::new(),
        }
    }

    pub fn with_who(mut self, who: impl Into<String>) -> Self {
        self.who = Some(who.into());
        self
    }

    pub fn with_when(mut self, when: TimeExpression) -> Self {
        self.when = Some(when);
        self
    }

    pub fn with_candidates(mut self, candidates: impl IntoIterator<Item = SpeechAct>) -> Self {
        self.a_speech_act = candidates.into_iter().collect();
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.source_text = text.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Utterance {
    pub speaker: String,
    pub frame: InterlinguaFrame,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dialogue {
    pub id: String,
    /// The one or two speakers, in order of first appearance.
    pub speakers: Vec<String>,
    pub sentences: Vec<Utterance>,
}

/// One line of a dialogue file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SentenceRecord {
    pub dialogue_id: String,
    pub speaker: String,
    pub sentence_type: SentenceType,
    pub frame: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub who: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub when: Option<TimeExpression>,
    pub text: String,
}

impl SentenceRecord {
    pub fn from_utterance(dialogue_id: &str, utterance: &Utterance) -> Self {
        let frame = &utterance.frame;
        Self {
            dialogue_id: dialogue_id.to_string(),
            speaker: utterance.speaker.clone(),
            sentence_type: frame.sentence_type,
            frame: frame.frame_name.clone(),
            who: frame.who.clone(),
            when: frame.when.clone(),
            text: frame.source_text.clone(),
        }
    }

    fn into_utterance(self) -> Utterance {
        Utterance {
            speaker: self.speaker,
            frame: InterlinguaFrame {
                sentence_type: self.sentence_type,
                frame_name: self.frame,
                who: self.who,
                when: self.when,
                a_speech_act: Vec::new(),
                speech_act: None,
                source_text: self.text,
            },
        }
    }
}

/// Parses a line-delimited dialogue file. Blank lines are skipped; line
/// numbers in errors are 1-based.
pub fn parse_dialogue(text: &str) -> Result<Dialogue> {
    let mut id: Option<String> = None;
    let mut speakers: Vec<String> = Vec::new();
    let mut sentences = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |message: String| Error::Malformed {
            line: line_no,
            message,
        };
        let record: SentenceRecord =
            serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
        if let Some(when) = &record.when {
            when.validate().map_err(|e| malformed(e.to_string()))?;
        }
        if record.frame.trim().is_empty() {
            return Err(malformed("invalid field `frame`: empty frame name".into()));
        }
        match &id {
            None => id = Some(record.dialogue_id.clone()),
            Some(existing) if *existing != record.dialogue_id => {
                return Err(malformed(format!(
                    "invalid field `dialogue-id`: `{}` differs from `{existing}`",
                    record.dialogue_id
                )));
            }
            Some(_) => {}
        }
        if !speakers.contains(&record.speaker) {
            if speakers.len() == 2 {
                return Err(malformed(format!(
                    "invalid field `speaker`: third speaker `{}` in a two-party dialogue",
                    record.speaker
                )));
            }
            speakers.push(record.speaker.clone());
        }
        sentences.push(record.into_utterance());
    }

    match id {
        Some(id) => Ok(Dialogue {
            id,
            speakers,
            sentences,
        }),
        None => Err(Error::EmptyDialogue),
    }
}

/// Writes a dialogue back in canonical form.
pub fn serialize_dialogue(dialogue: &Dialogue) -> String {
    let mut out = String::new();
    for utterance in &dialogue.sentences {
        let record = SentenceRecord::from_utterance(&dialogue.id, utterance);
        out.push_str(&serde_json::to_string(&record).expect("records always serialize"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGURE3: &str = r#"{"dialogue-id":"d","speaker":"S2","sentence-type":"state","frame":"*free","who":"*i","when":{"day-of-week":"wednesday","time-of-day":"morning"},"text":"I could do it Wednesday morning too."}"#;

    #[test]
    fn parses_figure3_record() {
        let d = parse_dialogue(FIGURE3).unwrap();
        let frame = &d.sentences[0].frame;
        assert_eq!(frame.frame_name, "*free");
        assert_eq!(frame.sentence_type, SentenceType::State);
        assert_eq!(frame.who.as_deref(), Some("*i"));
        let when = frame.when.as_ref().unwrap();
        assert_eq!(when.day_of_week, Some(DayOfWeek::Wednesday));
        assert_eq!(when.time_of_day, Some(TimeOfDay::Morning));
        assert!(frame.speech_act.is_none());
        assert!(frame.a_speech_act.is_empty());
    }

    #[test]
    fn parses_frame_without_when() {
        let line = r#"{"dialogue-id":"d","speaker":"A","sentence-type":"state","frame":"*affirmative","text":"yes."}"#;
        let d = parse_dialogue(line).unwrap();
        assert!(d.sentences[0].frame.when.is_none());
    }

    #[test]
    fn rejects_inverted_hour_range_with_line_number() {
        let text = format!(
            "{FIGURE3}\n{}",
            r#"{"dialogue-id":"d","speaker":"S1","sentence-type":"state","frame":"*free","when":{"hour-start":14,"hour-end":12},"text":"x"}"#
        );
        let err = parse_dialogue(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("hour-start"), "{msg}");
    }

    #[test]
    fn rejects_bad_calendar_day_and_empty_when() {
        let bad_day = r#"{"dialogue-id":"d","speaker":"A","sentence-type":"state","frame":"*free","when":{"month":"april","day-of-month":31},"text":"x"}"#;
        assert!(parse_dialogue(bad_day)
            .unwrap_err()
            .to_string()
            .contains("day-of-month"));
        let empty = r#"{"dialogue-id":"d","speaker":"A","sentence-type":"state","frame":"*free","when":{},"text":"x"}"#;
        assert!(parse_dialogue(empty).is_err());
    }

    #[test]
    fn rejects_malformed_json_and_empty_input() {
        let err = parse_dialogue("{not json").unwrap_err();
        assert!(err.to_string().contains("line 1"));
        assert!(matches!(parse_dialogue("\n\n"), Err(Error::EmptyDialogue)));
    }

    #[test]
    fn rejects_third_speaker() {
        let text = [
            r#"{"dialogue-id":"d","speaker":"A","sentence-type":"state","frame":"*x","text":"a"}"#,
            r#"{"dialogue-id":"d","speaker":"B","sentence-type":"state","frame":"*x","text":"b"}"#,
            r#"{"dialogue-id":"d","speaker":"C","sentence-type":"state","frame":"*x","text":"c"}"#,
        ]
        .join("\n");
        assert!(parse_dialogue(&text)
            .unwrap_err()
            .to_string()
            .contains("speaker"));
    }

    #[test]
    fn canonical_record_round_trips() {
        let d = parse_dialogue(FIGURE3).unwrap();
        assert_eq!(serialize_dialogue(&d), format!("{FIGURE3}\n"));
    }
}
