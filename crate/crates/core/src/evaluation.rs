//! Scoring predicted acts against gold annotations.
//!
//! A prediction is correct when it matches a gold act (two equally preferred
//! gold acts are allowed), acceptable when it is a weaker form of a gold
//! act, and incorrect otherwise, including when it is a stronger form of the
//! only correct act.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::attention::Heuristic;
use crate::error::{Error, Result};
use crate::inference_engine::ProcessedDialogue;
use crate::speech_acts::{is_weaker, SpeechAct};

/// Marker for "no antecedent expected" in gold files.
pub const NO_ANTECEDENT: &str = "none";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldAnnotation {
    pub utterance_index: usize,
    pub gold_acts: Vec<SpeechAct>,
    /// Expected antecedent leaf id, or [`NO_ANTECEDENT`].
    pub gold_antecedent: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
struct GoldRecord {
    gold_acts: Vec<SpeechAct>,
    #[serde(default)]
    gold_antecedent: Option<String>,
}

/// Reads a gold file: dialogue records extended with `gold-acts` and an
/// optional `gold-antecedent`. Utterance indices follow line order.
pub fn parse_gold(text: &str) -> Result<Vec<GoldAnnotation>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |message: String| Error::Malformed {
            line: idx + 1,
            message,
        };
        let record: GoldRecord =
            serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
        let acts = &record.gold_acts;
        if acts.is_empty() || acts.len() > 2 || (acts.len() == 2 && acts[0] == acts[1]) {
            return Err(malformed(
                "invalid field `gold-acts`: expected one or two distinct acts".into(),
            ));
        }
        out.push(GoldAnnotation {
            utterance_index: out.len() + 1,
            gold_acts: record.gold_acts,
            gold_antecedent: record.gold_antecedent,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Correct,
    Acceptable,
    Incorrect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceScore {
    pub outcome: Outcome,
    pub via_plan_inference: bool,
}

pub fn score_sentence(predicted: SpeechAct, gold: &GoldAnnotation) -> Outcome {
    if gold.gold_acts.contains(&predicted) {
        Outcome::Correct
    } else if gold.gold_acts.iter().any(|&g| is_weaker(predicted, g)) {
        Outcome::Acceptable
    } else {
        Outcome::Incorrect
    }
}

/// `count / total` as a whole percentage, rounded half up.
pub fn percent(count: usize, total: usize) -> u32 {
    if total == 0 {
        return 0;
    }
    ((200 * count + total) / (2 * total)) as u32
}

/// `count / total` in tenths of a percent, rounded half up.
pub fn percent_tenths(count: usize, total: usize) -> Option<u32> {
    (total > 0).then(|| ((2000 * count + total) / (2 * total)) as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct OutcomeSummary {
    pub total: usize,
    pub percent: u32,
    pub plan_inference: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TemporalAccuracy {
    pub matched: usize,
    pub scorable: usize,
}

impl TemporalAccuracy {
    pub fn tenths(&self) -> Option<u32> {
        percent_tenths(self.matched, self.scorable)
    }
}

impl fmt::Display for TemporalAccuracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tenths() {
            Some(t) => write!(f, "{}.{}", t / 10, t % 10),
            None => f.write_str("n/a"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CorpusReport {
    pub heuristic: Heuristic,
    pub sentences: usize,
    pub correct: OutcomeSummary,
    pub acceptable: OutcomeSummary,
    pub incorrect: OutcomeSummary,
    pub plan_inference: usize,
    pub plan_inference_percent: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temporal: Option<TemporalAccuracy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temporal_percent: Option<String>,
}

impl CorpusReport {
    /// Folds sentence scores into a report. Order does not matter.
    pub fn from_scores(
        heuristic: Heuristic,
        scores: impl IntoIterator<Item = SentenceScore>,
    ) -> Self {
        let mut counts = [(0usize, 0usize); 3];
        let mut sentences = 0;
        for score in scores {
            let slot = match score.outcome {
                Outcome::Correct => 0,
                Outcome::Acceptable => 1,
                Outcome::Incorrect => 2,
            };
            counts[slot].0 += 1;
            counts[slot].1 += usize::from(score.via_plan_inference);
            sentences += 1;
        }
        let summary = |(total, plan_inference): (usize, usize)| OutcomeSummary {
            total,
            percent: percent(total, sentences),
            plan_inference,
        };
        let plan_inference = counts.iter().map(|c| c.1).sum();
        Self {
            heuristic,
            sentences,
            correct: summary(counts[0]),
            acceptable: summary(counts[1]),
            incorrect: summary(counts[2]),
            plan_inference,
            plan_inference_percent: percent(plan_inference, sentences),
            temporal: None,
            temporal_percent: None,
        }
    }

    pub fn with_temporal(mut self, temporal: TemporalAccuracy) -> Self {
        self.temporal_percent = Some(temporal.to_string());
        self.temporal = Some(temporal);
        self
    }

    pub fn summary(&self, outcome: Outcome) -> &OutcomeSummary {
        match outcome {
            Outcome::Correct => &self.correct,
            Outcome::Acceptable => &self.acceptable,
            Outcome::Incorrect => &self.incorrect,
        }
    }
}

fn gold_for<'g>(
    processed: &ProcessedDialogue,
    gold: &'g [GoldAnnotation],
) -> Result<&'g [GoldAnnotation]> {
    if gold.len() != processed.outcomes.len() {
        return Err(Error::GoldLength {
            dialogue: processed.dialogue.id.clone(),
            gold: gold.len(),
            sentences: processed.outcomes.len(),
        });
    }
    Ok(gold)
}

/// Per-sentence scores for one dialogue.
pub fn score_dialogue(
    processed: &ProcessedDialogue,
    gold: &[GoldAnnotation],
) -> Result<Vec<SentenceScore>> {
    let gold = gold_for(processed, gold)?;
    Ok(processed
        .outcomes
        .iter()
        .zip(gold)
        .map(|(o, g)| SentenceScore {
            outcome: score_sentence(o.decision.assigned_act, g),
            via_plan_inference: o.decision.via_plan_inference,
        })
        .collect())
}

/// Scores every dialogue, pairing `processed[i]` with `gold[i]`, and adds
/// temporal-attachment accuracy.
pub fn evaluate_corpus(
    heuristic: Heuristic,
    processed: &[ProcessedDialogue],
    gold: &[Vec<GoldAnnotation>],
) -> Result<CorpusReport> {
    if processed.len() != gold.len() {
        return Err(Error::Gold {
            dialogue: "<corpus>".into(),
            utterance: 0,
            message: format!(
                "{} dialogues but {} gold files",
                processed.len(),
                gold.len()
            ),
        });
    }
    let mut scores = Vec::new();
    for (p, g) in processed.iter().zip(gold) {
        scores.extend(score_dialogue(p, g)?);
    }
    let temporal = temporal_accuracy(processed, gold)?;
    Ok(CorpusReport::from_scores(heuristic, scores).with_temporal(temporal))
}

/// Share of sentences with a time expression, attached via plan inference,
/// whose antecedent leaf matches the gold one. Fallback-path sentences are
/// not scored.
pub fn temporal_accuracy(
    processed: &[ProcessedDialogue],
    gold: &[Vec<GoldAnnotation>],
) -> Result<TemporalAccuracy> {
    let mut acc = TemporalAccuracy {
        matched: 0,
        scorable: 0,
    };
    for (p, g) in processed.iter().zip(gold) {
        let g = gold_for(p, g)?;
        for (outcome, gold) in p.outcomes.iter().zip(g) {
            if !outcome.decision.via_plan_inference || outcome.frame.when.is_none() {
                continue;
            }
            let Some(expected) = &gold.gold_antecedent else {
                return Err(Error::Gold {
                    dialogue: p.dialogue.id.clone(),
                    utterance: outcome.utterance,
                    message: "missing gold-antecedent for a scorable sentence".into(),
                });
            };
            let predicted = outcome.antecedent_node.as_deref().unwrap_or(NO_ANTECEDENT);
            acc.scorable += 1;
            acc.matched += usize::from(predicted == expected);
        }
    }
    Ok(acc)
}

fn cell(summary: &OutcomeSummary) -> String {
    format!(
        "{} total ({}%) {} based on plan inference",
        summary.total, summary.percent, summary.plan_inference
    )
}

/// Aligned plain-text table, one row per report.
pub fn render_table(reports: &[CorpusReport]) -> String {
    let header = [
        "Version",
        "Good",
        "Acceptable",
        "Incorrect",
        "Plan inference",
        "Temporal",
    ];
    let mut rows: Vec<[String; 6]> = vec![header.map(String::from)];
    for r in reports {
        rows.push([
            r.heuristic.display_name().to_string(),
            cell(&r.correct),
            cell(&r.acceptable),
            cell(&r.incorrect),
            format!(
                "{} of {} ({}%)",
                r.plan_inference, r.sentences, r.plan_inference_percent
            ),
            r.temporal
                .map_or_else(|| "n/a".to_string(), |t| format!("{t}")),
        ]);
    }
    let widths: Vec<usize> = (0..6)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(text, &w)| format!("{text:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
