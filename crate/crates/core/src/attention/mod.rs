//! Plan trees and the attentional state computed over them.
//!
//! Under the standard heuristic the focus is the active path, a strict
//! stack read off the tree. Under the extended heuristic the focus also
//! holds every adjacent instance of a repeating action on that path, so
//! parallel suggestions stay reachable until their common parent leaves the
//! frontier.

mod focus;
mod gss;
mod tree;

pub use focus::{
    active_path_extended, active_path_standard, FocusCandidate, FocusState, Heuristic,
};
pub use gss::{ElementId, GraphStructuredStack};
pub use tree::{DetachedSegment, NodeIdx, PlanNode, PlanTree};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DEFAULT_LIBRARY;
    use crate::plan_library::{load_plan_library, PlanLibrary};

    fn lib() -> PlanLibrary {
        load_plan_library(DEFAULT_LIBRARY).unwrap()
    }

    fn op(lib: &PlanLibrary, name: &str) -> crate::plan_library::OperatorId {
        lib.find(name).unwrap()
    }

    /// Root / Negotiate-Meeting / n suggestions, each with its Suggest leaf.
    fn parallel_suggestions(lib: &PlanLibrary, n: usize) -> (PlanTree, Vec<NodeIdx>) {
        let mut tree = PlanTree::new(lib);
        let nm = tree.add_child(tree.root(), op(lib, "Negotiate-Meeting"), "nm");
        let mut suggestions = Vec::new();
        for i in 0..n {
            let s = tree.add_child(nm, op(lib, "Suggestion-By-Suggest"), format!("s{i}"));
            tree.add_child(s, op(lib, "Suggest"), format!("s{i}.leaf"));
            suggestions.push(s);
        }
        (tree, suggestions)
    }

    #[test]
    fn single_root_path() {
        let lib = lib();
        let tree = PlanTree::new(&lib);
        assert_eq!(active_path_standard(&tree), vec![tree.root()]);
        assert_eq!(active_path_extended(&tree, &lib), vec![tree.root()]);
    }

    #[test]
    fn standard_path_holds_only_the_rightmost_suggestion() {
        let lib = lib();
        let (tree, s) = parallel_suggestions(&lib, 2);
        let path = active_path_standard(&tree);
        assert!(path.contains(&s[1]));
        assert!(!path.contains(&s[0]));
        assert_eq!(
            path,
            tree.path_to_root(tree.rightmost_descent(tree.root()).pop().unwrap())
        );
    }

    #[test]
    fn extended_path_holds_both_suggestions_rightmost_first() {
        let lib = lib();
        let (tree, s) = parallel_suggestions(&lib, 2);
        let path = active_path_extended(&tree, &lib);
        let rank = |n: NodeIdx| path.iter().position(|&x| x == n).unwrap();
        assert!(rank(s[1]) < rank(s[0]));
        let standard = active_path_standard(&tree);
        assert!(standard.iter().all(|n| path.contains(n)));
    }

    #[test]
    fn three_parallel_suggestions_rank_right_to_left() {
        let lib = lib();
        let (tree, s) = parallel_suggestions(&lib, 3);
        let path = active_path_extended(&tree, &lib);
        let rank = |n: NodeIdx| path.iter().position(|&x| x == n).unwrap();
        assert!(rank(s[2]) < rank(s[1]) && rank(s[1]) < rank(s[0]));
        let window = FocusState::compute(&tree, &lib, Heuristic::Extended, Some(1));
        assert!(window.nodes().any(|n| n == s[1]));
        assert!(!window.nodes().any(|n| n == s[0]));
    }

    #[test]
    fn response_chain_precedes_negotiate_meeting() {
        let lib = lib();
        let (mut tree, s) = parallel_suggestions(&lib, 1);
        let resp = tree.add_child(s[0], op(&lib, "Response-By-Accept"), "r");
        let leaf = tree.add_child(resp, op(&lib, "Accept"), "r.leaf");
        let path = active_path_standard(&tree);
        let nm = tree.node(s[0]).parent.unwrap();
        assert_eq!(path, vec![leaf, resp, s[0], nm, tree.root()]);
        tree.check_invariants(&lib).unwrap();
    }

    #[test]
    fn no_repeating_siblings_means_identical_paths() {
        let lib = lib();
        let mut tree = PlanTree::new(&lib);
        let open = tree.add_child(tree.root(), op(&lib, "Open-Dialogue"), "o");
        tree.add_child(open, op(&lib, "Opening"), "o.leaf");
        assert_eq!(
            active_path_extended(&tree, &lib),
            active_path_standard(&tree)
        );
    }

    #[test]
    fn focus_ranks_are_consecutive() {
        let lib = lib();
        let (tree, _) = parallel_suggestions(&lib, 3);
        for mode in [Heuristic::Standard, Heuristic::Extended] {
            let focus = FocusState::compute(&tree, &lib, mode, None);
            for (i, c) in focus.candidates.iter().enumerate() {
                assert_eq!(c.rank, i);
            }
        }
    }

    #[test]
    fn dump_is_indented_and_stable() {
        let lib = lib();
        let (tree, _) = parallel_suggestions(&lib, 1);
        let dump = tree.dump(&lib);
        assert_eq!(
            dump,
            "root Scheduling-Dialogue\n  nm Negotiate-Meeting\n    s0 Suggestion-By-Suggest\n      s0.leaf Suggest\n"
        );
    }
}
