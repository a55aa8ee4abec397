use std::fmt::Write as _;

use crate::interlingua::InterlinguaFrame;
use crate::plan_library::{is_viable_prefix, OperatorId, PlanLibrary};
use crate::speech_acts::SpeechAct;

/// Arena index of a node within its tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeIdx(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct PlanNode {
    /// Stable identifier: `root`, `u<n>` for the chain leaf of utterance
    /// `n`, `u<n>.<k>` for the chain node `k` levels above that leaf.
    pub id: String,
    pub operator: OperatorId,
    pub parent: Option<NodeIdx>,
    pub children: Vec<NodeIdx>,
    pub utterance: Option<usize>,
    pub frame: Option<InterlinguaFrame>,
}

/// An utterance that took the fallback path and was kept out of the tree.
#[derive(Debug, Clone, PartialEq)]
pub struct DetachedSegment {
    pub utterance: usize,
    pub act: SpeechAct,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct PlanTree {
    nodes: Vec<PlanNode>,
    last_leaf: Option<NodeIdx>,
    next_utterance_index: usize,
    detached: Vec<DetachedSegment>,
}

impl PlanTree {
    pub fn new(lib: &PlanLibrary) -> Self {
        Self::with_root(lib.root_operator())
    }

    pub fn with_root(root: OperatorId) -> Self {
        Self {
            nodes: vec![PlanNode {
                id: "root".into(),
                operator: root,
                parent: None,
                children: Vec::new(),
                utterance: None,
                frame: None,
            }],
            last_leaf: None,
            next_utterance_index: 1,
            detached: Vec::new(),
        }
    }

    pub fn root(&self) -> NodeIdx {
        NodeIdx(0)
    }

    pub fn node(&self, idx: NodeIdx) -> &PlanNode {
        &self.nodes[idx.0]
    }

    pub fn node_mut(&mut self, idx: NodeIdx) -> &mut PlanNode {
        &mut self.nodes[idx.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeIdx, &PlanNode)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeIdx(i), n))
    }

    pub fn find(&self, id: &str) -> Option<NodeIdx> {
        self.nodes().find(|(_, n)| n.id == id).map(|(i, _)| i)
    }

    /// Most recently attached node; the active path starts here.
    pub fn last_leaf(&self) -> Option<NodeIdx> {
        self.last_leaf
    }

    pub fn next_utterance_index(&self) -> usize {
        self.next_utterance_index
    }

    pub fn detached(&self) -> &[DetachedSegment] {
        &self.detached
    }

    pub fn action<'l>(&self, lib: &'l PlanLibrary, idx: NodeIdx) -> &'l str {
        &lib.get(self.node(idx).operator).header
    }

    pub fn child_actions<'l>(&self, lib: &'l PlanLibrary, idx: NodeIdx) -> Vec<&'l str> {
        self.node(idx)
            .children
            .iter()
            .map(|&c| self.action(lib, c))
            .collect()
    }

    /// Appends a child without consulting the decomposition; callers check
    /// acceptability first. The new node becomes the active-path start.
    pub fn add_child(
        &mut self,
        parent: NodeIdx,
        operator: OperatorId,
        id: impl Into<String>,
    ) -> NodeIdx {
        let idx = NodeIdx(self.nodes.len());
        self.nodes.push(PlanNode {
            id: id.into(),
            operator,
            parent: Some(parent),
            children: Vec::new(),
            utterance: None,
            frame: None,
        });
        self.nodes[parent.0].children.push(idx);
        self.last_leaf = Some(idx);
        idx
    }

    /// Grafts an inference chain under `parent`. `chain` lists operators from
    /// the utterance leaf upward; the returned index is the new leaf.
    pub fn attach_chain(
        &mut self,
        parent: NodeIdx,
        chain: &[OperatorId],
        frame: InterlinguaFrame,
    ) -> NodeIdx {
        let utterance = self.next_utterance_index;
        let mut at = parent;
        for (level, &op) in chain.iter().enumerate().rev() {
            let id = if level == 0 {
                format!("u{utterance}")
            } else {
                format!("u{utterance}.{level}")
            };
            at = self.add_child(at, op, id);
        }
        let leaf = self.node_mut(at);
        leaf.utterance = Some(utterance);
        leaf.frame = Some(frame);
        self.next_utterance_index += 1;
        at
    }

    /// Records a fallback-path utterance without touching the tree proper.
    pub fn detach(&mut self, act: SpeechAct, text: impl Into<String>) {
        self.detached.push(DetachedSegment {
            utterance: self.next_utterance_index,
            act,
            text: text.into(),
        });
        self.next_utterance_index += 1;
    }

    /// The frame a node stands for: its own, or that of a first child which
    /// is an utterance leaf (e.g. a Suggestion node headed by its Suggest).
    pub fn anchor_frame(&self, idx: NodeIdx) -> Option<(NodeIdx, &InterlinguaFrame)> {
        let node = self.node(idx);
        if let Some(frame) = &node.frame {
            return Some((idx, frame));
        }
        let &first = node.children.first()?;
        self.node(first).frame.as_ref().map(|f| (first, f))
    }

    /// Path from `idx` up to the root, `idx` first.
    pub fn path_to_root(&self, idx: NodeIdx) -> Vec<NodeIdx> {
        let mut out = vec![idx];
        let mut at = idx;
        while let Some(parent) = self.node(at).parent {
            out.push(parent);
            at = parent;
        }
        out
    }

    /// Rightmost frontier from `idx` downward, `idx` first.
    pub fn rightmost_descent(&self, idx: NodeIdx) -> Vec<NodeIdx> {
        let mut out = vec![idx];
        let mut at = idx;
        while let Some(&last) = self.node(at).children.last() {
            out.push(last);
            at = last;
        }
        out
    }

    /// Checks that every node's child sequence is a viable prefix of its
    /// operator's decomposition and that ids are unique.
    pub fn check_invariants(&self, lib: &PlanLibrary) -> Result<(), String> {
        let mut ids = std::collections::HashSet::new();
        for (idx, node) in self.nodes() {
            if !ids.insert(node.id.as_str()) {
                return Err(format!("duplicate node id `{}`", node.id));
            }
            let actions = self.child_actions(lib, idx);
            let op = lib.get(node.operator);
            if !is_viable_prefix(&op.decomposition, &actions) {
                return Err(format!(
                    "node `{}` ({}) has children {:?} outside its decomposition",
                    node.id, op.name, actions
                ));
            }
            if node.utterance.is_some() != node.frame.is_some() {
                return Err(format!("node `{}` has a frame/utterance mismatch", node.id));
            }
        }
        Ok(())
    }

    /// Indented rendering used by `--dump-tree`.
    pub fn dump(&self, lib: &PlanLibrary) -> String {
        let mut out = String::new();
        self.dump_node(lib, self.root(), 0, &mut out);
        if !self.detached.is_empty() {
            out.push_str("detached:\n");
            for seg in &self.detached {
                let _ = writeln!(out, "  #{} {} {:?}", seg.utterance, seg.act, seg.text);
            }
        }
        out
    }

    fn dump_node(&self, lib: &PlanLibrary, idx: NodeIdx, depth: usize, out: &mut String) {
        let node = self.node(idx);
        let op = lib.get(node.operator);
        let _ = write!(
            out,
            "{:indent$}{} {}",
            "",
            node.id,
            op.name,
            indent = depth * 2
        );
        if let (Some(n), Some(frame)) = (node.utterance, &node.frame) {
            let act = frame.speech_act.map_or("?", SpeechAct::label);
            let _ = write!(out, " [{act}] #{n} {:?}", frame.source_text);
        }
        out.push('\n');
        for &child in &node.children {
            self.dump_node(lib, child, depth + 1, out);
        }
    }
}
