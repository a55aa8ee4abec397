//! Regular-expression evaluation over repetition-annotated decompositions.
//!
//! A decomposition `[a exactly-1, b 0-or-more, c 0-or-1]` denotes the
//! language `a b* c?`. The evaluator runs a small NFA whose states sit
//! between items (`Before(k)`) or inside a repeating item that has already
//! consumed at least one token (`Inside(k)`).

use super::{DecompositionItem, Repetition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum State {
    Before(usize),
    Inside(usize),
}

struct Nfa<'a> {
    items: &'a [DecompositionItem],
}

impl<'a> Nfa<'a> {
    fn index(&self, state: State) -> usize {
        match state {
            State::Before(k) => k,
            State::Inside(k) => self.items.len() + 1 + k,
        }
    }

    fn width(&self) -> usize {
        2 * self.items.len() + 1
    }

    fn close(&self, set: &mut [bool]) {
        let n = self.items.len();
        // Epsilon edges only move rightward, so one left-to-right sweep suffices.
        for k in 0..n {
            if set[self.index(State::Inside(k))] {
                set[self.index(State::Before(k + 1))] = true;
            }
            if set[self.index(State::Before(k))] && self.items[k].annotation.min() == 0 {
                set[self.index(State::Before(k + 1))] = true;
            }
        }
    }

    fn start(&self) -> Vec<bool> {
        let mut set = vec![false; self.width()];
        set[self.index(State::Before(0))] = true;
        self.close(&mut set);
        set
    }

    fn step(&self, set: &[bool], token: &str) -> Vec<bool> {
        let mut next = vec![false; self.width()];
        for (k, item) in self.items.iter().enumerate() {
            if item.action != token {
                continue;
            }
            let live = set[self.index(State::Before(k))] || set[self.index(State::Inside(k))];
            if !live {
                continue;
            }
            if item.annotation.repeating() {
                next[self.index(State::Inside(k))] = true;
            } else if set[self.index(State::Before(k))] {
                next[self.index(State::Before(k + 1))] = true;
            }
        }
        self.close(&mut next);
        next
    }

    fn run<S: AsRef<str>>(&self, word: &[S]) -> Vec<bool> {
        word.iter()
            .fold(self.start(), |set, token| self.step(&set, token.as_ref()))
    }
}

/// True iff `word` is a prefix of some word of the decomposition's language.
pub fn is_viable_prefix<S: AsRef<str>>(items: &[DecompositionItem], word: &[S]) -> bool {
    // Every live NFA state can still reach acceptance by supplying the
    // remaining required items, so liveness is exactly prefix viability.
    Nfa { items }.run(word).into_iter().any(|b| b)
}

/// True iff `word` is a complete word of the decomposition's language.
pub fn is_member<S: AsRef<str>>(items: &[DecompositionItem], word: &[S]) -> bool {
    let nfa = Nfa { items };
    let set = nfa.run(word);
    set[nfa.index(State::Before(items.len()))]
}

/// Assigns each token of a viable prefix to the decomposition item that
/// consumes it. When several parses exist, the one that stays longest in
/// earlier items wins. Returns `None` for non-viable words.
pub fn assign_items<S: AsRef<str>>(items: &[DecompositionItem], word: &[S]) -> Option<Vec<usize>> {
    fn search<S: AsRef<str>>(
        items: &[DecompositionItem],
        word: &[S],
        pos: usize,
        // Item index to resume at and whether it already consumed a token.
        item: usize,
        inside: bool,
        out: &mut Vec<usize>,
    ) -> bool {
        if pos == word.len() {
            return true;
        }
        let token = word[pos].as_ref();
        if item >= items.len() {
            return false;
        }
        let current = &items[item];
        let can_take = !inside || current.annotation.repeating();
        if can_take && current.action == token {
            out.push(item);
            let (next_item, next_inside) = if current.annotation.repeating() {
                (item, true)
            } else {
                (item + 1, false)
            };
            if search(items, word, pos + 1, next_item, next_inside, out) {
                return true;
            }
            out.pop();
        }
        let may_leave = inside || current.annotation.min() == 0;
        may_leave && search(items, word, pos, item + 1, false, out)
    }

    let mut out = Vec::with_capacity(word.len());
    search(items, word, 0, 0, false, &mut out).then_some(out)
}

impl Repetition {
    pub fn min(self) -> usize {
        match self {
            Repetition::ExactlyOne | Repetition::OneOrMore => 1,
            Repetition::ZeroOrOne | Repetition::ZeroOrMore => 0,
        }
    }

    /// Upper bound on occurrences; `None` means unbounded.
    pub fn max(self) -> Option<usize> {
        match self {
            Repetition::ExactlyOne | Repetition::ZeroOrOne => Some(1),
            Repetition::ZeroOrMore | Repetition::OneOrMore => None,
        }
    }

    pub fn repeating(self) -> bool {
        self.max().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(action: &str, annotation: Repetition) -> DecompositionItem {
        DecompositionItem::new(action, annotation)
    }

    fn negotiate() -> Vec<DecompositionItem> {
        vec![
            item("Suggestion", Repetition::OneOrMore),
            item("Response", Repetition::ZeroOrMore),
        ]
    }

    #[test]
    fn prefix_examples() {
        let items = negotiate();
        assert!(is_viable_prefix(&items, &["Suggestion", "Suggestion"]));
        assert!(!is_viable_prefix(
            &items,
            &["Suggestion", "Response", "Suggestion"]
        ));
        assert!(!is_viable_prefix(&items, &["Response"]));
        assert!(is_viable_prefix::<&str>(&items, &[]));
    }

    #[test]
    fn membership_examples() {
        let items = negotiate();
        assert!(is_member(&items, &["Suggestion"]));
        assert!(!is_member::<&str>(&items, &[]));
        assert!(is_member::<&str>(&[], &[]));
        assert!(!is_member(&[], &["Suggestion"]));
    }

    #[test]
    fn assignment_tracks_items() {
        let items = vec![
            item("A", Repetition::ZeroOrOne),
            item("B", Repetition::OneOrMore),
            item("A", Repetition::ZeroOrMore),
        ];
        assert_eq!(
            assign_items(&items, &["A", "B", "B", "A"]),
            Some(vec![0, 1, 1, 2])
        );
        assert_eq!(assign_items(&items, &["B", "A", "A"]), Some(vec![1, 2, 2]));
        assert_eq!(assign_items(&items, &["A", "A"]), None);
    }
}
