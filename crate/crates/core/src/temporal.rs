//! Filling in under-specified time expressions from the utterance a
//! sentence attaches under.

use serde::{Deserialize, Serialize};

use crate::attention::{NodeIdx, PlanTree};
use crate::interlingua::TimeExpression;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AugmentationRecord {
    pub utterance_index: usize,
    pub before: TimeExpression,
    pub antecedent: TimeExpression,
    pub after: TimeExpression,
    pub antecedent_node: String,
}

/// Field-wise union of two expressions where `current` wins every conflict.
/// Nothing is imported when both name a day of the week and the days
/// differ. The hour range moves as a unit so it can never come out inverted.
pub fn augment_time(current: &TimeExpression, antecedent: &TimeExpression) -> TimeExpression {
    if let (Some(a), Some(b)) = (current.day_of_week, antecedent.day_of_week) {
        if a != b {
            return current.clone();
        }
    }
    let hours_set = current.hour_start.is_some() || current.hour_end.is_some();
    let (hour_start, hour_end) = if hours_set {
        (current.hour_start, current.hour_end)
    } else {
        (antecedent.hour_start, antecedent.hour_end)
    };
    TimeExpression {
        day_of_week: current.day_of_week.or(antecedent.day_of_week),
        month: current.month.or(antecedent.month),
        day_of_month: current.day_of_month.or(antecedent.day_of_month),
        week_offset: current.week_offset.or(antecedent.week_offset),
        time_of_day: current.time_of_day.or(antecedent.time_of_day),
        hour_start,
        hour_end,
    }
}

/// The time expression of the nearest utterance on the path from the
/// attachment node to the root, with the id of the leaf that carries it.
pub fn find_antecedent(tree: &PlanTree, attach_node: NodeIdx) -> Option<(String, TimeExpression)> {
    tree.path_to_root(attach_node).into_iter().find_map(|node| {
        let (leaf, frame) = tree.anchor_frame(node)?;
        let when = frame.when.clone()?;
        Some((tree.node(leaf).id.clone(), when))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DEFAULT_LIBRARY;
    use crate::interlingua::{DayOfWeek, InterlinguaFrame, Month, SentenceType, TimeOfDay};
    use crate::plan_library::load_plan_library;

    fn day(d: DayOfWeek) -> TimeExpression {
        TimeExpression {
            day_of_week: Some(d),
            ..Default::default()
        }
    }

    #[test]
    fn fills_in_month_and_day_for_matching_weekday() {
        let antecedent = TimeExpression {
            day_of_week: Some(DayOfWeek::Tuesday),
            month: Some(Month::April),
            day_of_month: Some(11),
            ..Default::default()
        };
        assert_eq!(
            augment_time(&day(DayOfWeek::Tuesday), &antecedent),
            antecedent
        );
    }

    #[test]
    fn antecedent_adding_nothing_leaves_current() {
        let current = TimeExpression {
            time_of_day: Some(TimeOfDay::Morning),
            ..day(DayOfWeek::Wednesday)
        };
        assert_eq!(augment_time(&current, &day(DayOfWeek::Wednesday)), current);
    }

    #[test]
    fn imports_week_offset() {
        let next_week = TimeExpression {
            week_offset: Some(1),
            ..Default::default()
        };
        let out = augment_time(&day(DayOfWeek::Monday), &next_week);
        assert_eq!(out.day_of_week, Some(DayOfWeek::Monday));
        assert_eq!(out.week_offset, Some(1));
    }

    #[test]
    fn different_weekdays_import_nothing() {
        let antecedent = TimeExpression {
            month: Some(Month::April),
            day_of_month: Some(11),
            ..day(DayOfWeek::Tuesday)
        };
        let current = day(DayOfWeek::Friday);
        assert_eq!(augment_time(&current, &antecedent), current);
    }

    #[test]
    fn hour_range_is_imported_whole() {
        let current = TimeExpression {
            hour_start: Some(14),
            ..Default::default()
        };
        let antecedent = TimeExpression {
            hour_start: Some(9),
            hour_end: Some(11),
            ..Default::default()
        };
        let out = augment_time(&current, &antecedent);
        assert_eq!((out.hour_start, out.hour_end), (Some(14), None));
        out.validate().unwrap();
    }

    #[test]
    fn antecedent_lookup() {
        let lib = load_plan_library(DEFAULT_LIBRARY).unwrap();
        let mut tree = PlanTree::new(&lib);
        let chain = [
            lib.find("Suggest").unwrap(),
            lib.find("Suggestion-By-Suggest").unwrap(),
            lib.find("Negotiate-Meeting").unwrap(),
        ];
        let with_when =
            InterlinguaFrame::new(SentenceType::State, "*free").with_when(TimeExpression {
                month: Some(Month::April),
                day_of_month: Some(11),
                ..day(DayOfWeek::Tuesday)
            });
        let leaf = tree.attach_chain(tree.root(), &chain, with_when);
        let suggestion = tree.node(leaf).parent.unwrap();
        let (id, when) = find_antecedent(&tree, suggestion).unwrap();
        assert_eq!(id, "u1");
        assert_eq!(when.day_of_month, Some(11));
        assert!(find_antecedent(&tree, tree.root()).is_none());

        let bare = InterlinguaFrame::new(SentenceType::State, "*free");
        let leaf2 = tree.attach_chain(tree.node(suggestion).parent.unwrap(), &chain[..2], bare);
        let suggestion2 = tree.node(leaf2).parent.unwrap();
        assert!(find_antecedent(&tree, suggestion2).is_none());
    }
}
