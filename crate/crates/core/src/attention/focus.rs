use serde::{Deserialize, Serialize};

use super::tree::{NodeIdx, PlanTree};
use crate::plan_library::{assign_items, PlanLibrary};

/// Attentional-state model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Heuristic {
    /// Strict stack: only the active path is in focus.
    Standard,
    /// Graph-structured stack: adjacent instances of repeating actions stay
    /// in focus alongside the active path.
    Extended,
}

impl Heuristic {
    pub fn label(self) -> &'static str {
        match self {
            Heuristic::Standard => "standard",
            Heuristic::Extended => "extended",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Heuristic::Standard => "Standard TST",
            Heuristic::Extended => "Extended TST",
        }
    }
}

impl std::str::FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(Heuristic::Standard),
            "extended" => Ok(Heuristic::Extended),
            other => Err(format!(
                "unknown heuristic `{other}` (expected standard or extended)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FocusCandidate {
    pub node: NodeIdx,
    /// 0 is most salient.
    pub rank: usize,
}

/// Ordered attachment candidates for the next utterance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FocusState {
    pub mode: Heuristic,
    pub candidates: Vec<FocusCandidate>,
}

impl FocusState {
    /// `window` caps how many extra sibling instances each level may add in
    /// extended mode; `None` is unbounded.
    pub fn compute(
        tree: &PlanTree,
        lib: &PlanLibrary,
        mode: Heuristic,
        window: Option<usize>,
    ) -> Self {
        let nodes = match mode {
            Heuristic::Standard => active_path_standard(tree),
            Heuristic::Extended => active_path_windowed(tree, lib, window),
        };
        let candidates = nodes
            .into_iter()
            .enumerate()
            .map(|(rank, node)| FocusCandidate { node, rank })
            .collect();
        Self { mode, candidates }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeIdx> + '_ {
        self.candidates.iter().map(|c| c.node)
    }
}

/// The active path: from the most recently attached leaf up to the root,
/// deepest first. For trees grown only along this path it coincides with
/// the rightmost frontier.
pub fn active_path_standard(tree: &PlanTree) -> Vec<NodeIdx> {
    tree.path_to_root(tree.last_leaf().unwrap_or_else(|| tree.root()))
}

/// The active path, widened at every level whose node fills a repeating
/// decomposition slot: the maximal run of adjacent siblings performing the
/// same action joins the focus, each with its rightmost frontier. Extra
/// instances follow the path node of their level, rightmost first.
pub fn active_path_extended(tree: &PlanTree, lib: &PlanLibrary) -> Vec<NodeIdx> {
    active_path_windowed(tree, lib, None)
}

fn active_path_windowed(tree: &PlanTree, lib: &PlanLibrary, window: Option<usize>) -> Vec<NodeIdx> {
    let mut out = Vec::new();
    for node in active_path_standard(tree) {
        out.push(node);
        for sibling in repeating_run_extras(tree, lib, node)
            .into_iter()
            .take(window.unwrap_or(usize::MAX))
        {
            out.extend(tree.rightmost_descent(sibling));
        }
    }
    out
}

/// Siblings in the same maximal same-action run as `node`, right to left,
/// when `node` fills a repeating slot of its parent.
fn repeating_run_extras(tree: &PlanTree, lib: &PlanLibrary, node: NodeIdx) -> Vec<NodeIdx> {
    let Some(parent) = tree.node(node).parent else {
        return Vec::new();
    };
    let siblings = &tree.node(parent).children;
    let Some(pos) = siblings.iter().position(|&c| c == node) else {
        return Vec::new();
    };
    let actions = tree.child_actions(lib, parent);
    let decomposition = &lib.get(tree.node(parent).operator).decomposition;
    let Some(slots) = assign_items(decomposition, &actions) else {
        return Vec::new();
    };
    if !decomposition[slots[pos]].repeating() {
        return Vec::new();
    }
    let action = actions[pos];
    let mut start = pos;
    while start > 0 && actions[start - 1] == action {
        start -= 1;
    }
    let mut end = pos;
    while end + 1 < actions.len() && actions[end + 1] == action {
        end += 1;
    }
    (start..=end)
        .rev()
        .filter(|&i| i != pos)
        .map(|i| siblings[i])
        .collect()
}
