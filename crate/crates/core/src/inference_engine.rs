//! Chains each sentence's candidate acts up the plan library and attaches
//! the first chain the focus licenses.
//!
//! Search order: chains that answer an existing node (their top action is
//! not a repeating slot anywhere in the library, e.g. a Response) are tried
//! before chains that open a new parallel segment (e.g. a fresh Suggestion).
//! Within each class the order is candidate order, then shortest chain,
//! then focus salience. A sentence no chain can attach takes the fallback
//! path: a seeded uniform draw from its candidates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attention::{FocusState, Heuristic, NodeIdx, PlanTree};
use crate::interlingua::{
    match_speech_acts, Dialogue, InterlinguaFrame, MatchingRule, SentenceRecord, TimeExpression,
};
use crate::plan_library::{decomposition_accepts, is_viable_prefix, OperatorId, PlanLibrary};
use crate::speech_acts::SpeechAct;
use crate::temporal::{augment_time, find_antecedent, AugmentationRecord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLink {
    pub operator: OperatorId,
    /// The instantiated action, i.e. the operator's header.
    pub action: String,
}

/// Operator instantiations from the utterance's act upward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceChain {
    pub links: Vec<ChainLink>,
    pub candidate: SpeechAct,
}

impl InferenceChain {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn top(&self) -> &ChainLink {
        self.links.last().expect("chains are never empty")
    }

    pub fn operators(&self) -> Vec<OperatorId> {
        self.links.iter().map(|l| l.operator).collect()
    }

    /// Whether attaching this chain answers an existing node rather than
    /// opening a new instance of a repeating action.
    pub fn is_response(&self, lib: &PlanLibrary) -> bool {
        !lib.is_repeating_action(&self.top().action)
    }
}

/// All chains for the frame's candidates, grouped by candidate order and
/// shortest first within a candidate. Chains stop below the root action;
/// every link must be able to start its parent's decomposition.
pub fn build_chains(frame: &InterlinguaFrame, lib: &PlanLibrary) -> Vec<InferenceChain> {
    let mut out = Vec::new();
    for &candidate in &frame.a_speech_act {
        let mut found: Vec<InferenceChain> = Vec::new();
        let mut pending: Vec<Vec<OperatorId>> = lib
            .operators_for_act(candidate)
            .into_iter()
            .map(|id| vec![id])
            .collect();
        while let Some(ops) = pending.pop() {
            let top = lib.get(*ops.last().unwrap());
            if top.header == lib.root_action() {
                continue;
            }
            for parent in lib.ids() {
                let parent_op = lib.get(parent);
                let revisits = ops.iter().any(|&o| lib.get(o).header == parent_op.header);
                if revisits
                    || parent_op.header == lib.root_action()
                    || !is_viable_prefix(&parent_op.decomposition, &[top.header.as_str()])
                {
                    continue;
                }
                let mut longer = ops.clone();
                longer.push(parent);
                pending.push(longer);
            }
            found.push(InferenceChain {
                links: ops
                    .iter()
                    .map(|&operator| ChainLink {
                        operator,
                        action: lib.get(operator).header.clone(),
                    })
                    .collect(),
                candidate,
            });
        }
        found.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.operators().cmp(&b.operators()))
        });
        out.extend(found);
    }
    out
}

/// Candidate acts with no operator to start a chain from.
pub fn unchainable_candidates(frame: &InterlinguaFrame, lib: &PlanLibrary) -> Vec<SpeechAct> {
    frame
        .a_speech_act
        .iter()
        .copied()
        .filter(|&a| lib.operators_for_act(a).is_empty())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttachmentDecision {
    pub chain: Option<InferenceChain>,
    /// `None` on the fallback path.
    pub attach_node: Option<NodeIdx>,
    pub assigned_act: SpeechAct,
    pub via_plan_inference: bool,
}

/// Scans the focus in salience order for a node whose decomposition accepts
/// the chain's top action and whose context satisfies the top operator's
/// constraint.
pub fn attempt_attach(
    chain: &InferenceChain,
    frame: &InterlinguaFrame,
    focus: &FocusState,
    tree: &PlanTree,
    lib: &PlanLibrary,
) -> Option<AttachmentDecision> {
    let top = chain.top();
    let constraint = lib.get(top.operator).constraint;
    focus.nodes().find_map(|node| {
        let op = lib.get(tree.node(node).operator);
        let existing = tree.child_actions(lib, node);
        if !decomposition_accepts(op, &existing, &top.action) {
            return None;
        }
        let anchor_when = tree.anchor_frame(node).and_then(|(_, f)| f.when.as_ref());
        if !constraint.check(frame.when.as_ref(), anchor_when) {
            return None;
        }
        Some(AttachmentDecision {
            chain: Some(chain.clone()),
            attach_node: Some(node),
            assigned_act: chain.candidate,
            via_plan_inference: true,
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    pub heuristic: Heuristic,
    pub seed: u64,
    /// Cap on extra sibling instances per level in extended mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_window: Option<usize>,
}

impl EngineConfig {
    pub fn new(heuristic: Heuristic, seed: u64) -> Self {
        Self {
            heuristic,
            seed,
            instance_window: None,
        }
    }
}

/// Everything recorded about one processed sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceOutcome {
    /// 1-based position in the dialogue.
    pub utterance: usize,
    /// The frame with candidates, final act and augmented time filled in.
    pub frame: InterlinguaFrame,
    pub decision: AttachmentDecision,
    pub attach_node_id: Option<String>,
    pub augmentation: Option<AugmentationRecord>,
    /// Leaf whose time expression served as antecedent; only set for
    /// sentences that carry a time expression and attached via inference.
    pub antecedent_node: Option<String>,
    /// Empty candidate list and no attachment: labeled State-Constraint.
    pub defaulted: bool,
    pub unchainable: Vec<SpeechAct>,
}

/// Per-dialogue processing state.
#[derive(Debug)]
pub struct Session<'a> {
    lib: &'a PlanLibrary,
    config: EngineConfig,
    tree: PlanTree,
    focus: FocusState,
    rng: ChaCha8Rng,
}

impl<'a> Session<'a> {
    pub fn new(lib: &'a PlanLibrary, config: EngineConfig) -> Self {
        let tree = PlanTree::new(lib);
        let focus = FocusState::compute(&tree, lib, config.heuristic, config.instance_window);
        Self {
            lib,
            config,
            tree,
            focus,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
        }
    }

    pub fn tree(&self) -> &PlanTree {
        &self.tree
    }

    pub fn focus(&self) -> &FocusState {
        &self.focus
    }

    pub fn into_tree(self) -> PlanTree {
        self.tree
    }

    /// Processes one frame whose candidate acts are already filled in.
    pub fn process_sentence(&mut self, mut frame: InterlinguaFrame) -> SentenceOutcome {
        let lib = self.lib;
        let utterance = self.tree.next_utterance_index();
        let chains = build_chains(&frame, lib);
        let unchainable = unchainable_candidates(&frame, lib);

        let found = [true, false].into_iter().find_map(|responses| {
            chains
                .iter()
                .filter(|c| c.is_response(lib) == responses)
                .find_map(|c| attempt_attach(c, &frame, &self.focus, &self.tree, lib))
        });

        let outcome = match found {
            Some(decision) => {
                let node = decision.attach_node.expect("inference decisions attach");
                let mut augmentation = None;
                let mut antecedent_node = None;
                if let Some(current) = frame.when.clone() {
                    if let Some((leaf_id, antecedent)) = find_antecedent(&self.tree, node) {
                        let after = augment_time(&current, &antecedent);
                        augmentation = Some(AugmentationRecord {
                            utterance_index: utterance,
                            before: current,
                            antecedent,
                            after: after.clone(),
                            antecedent_node: leaf_id.clone(),
                        });
                        antecedent_node = Some(leaf_id);
                        frame.when = Some(after);
                    }
                }
                frame.speech_act = Some(decision.assigned_act);
                let chain_ops = decision
                    .chain
                    .as_ref()
                    .expect("inference decisions carry a chain")
                    .operators();
                self.tree.attach_chain(node, &chain_ops, frame.clone());
                SentenceOutcome {
                    utterance,
                    frame,
                    attach_node_id: Some(self.tree.node(node).id.clone()),
                    decision,
                    augmentation,
                    antecedent_node,
                    defaulted: false,
                    unchainable,
                }
            }
            None => {
                let defaulted = frame.a_speech_act.is_empty();
                let assigned = if defaulted {
                    SpeechAct::StateConstraint
                } else {
                    frame.a_speech_act[self.rng.gen_range(0..frame.a_speech_act.len())]
                };
                frame.speech_act = Some(assigned);
                self.tree.detach(assigned, frame.source_text.clone());
                SentenceOutcome {
                    utterance,
                    frame,
                    decision: AttachmentDecision {
                        chain: None,
                        attach_node: None,
                        assigned_act: assigned,
                        via_plan_inference: false,
                    },
                    attach_node_id: None,
                    augmentation: None,
                    antecedent_node: None,
                    defaulted,
                    unchainable,
                }
            }
        };
        self.focus = FocusState::compute(
            &self.tree,
            lib,
            self.config.heuristic,
            self.config.instance_window,
        );
        outcome
    }
}

#[derive(Debug, Clone)]
pub struct ProcessedDialogue {
    pub dialogue: Dialogue,
    pub outcomes: Vec<SentenceOutcome>,
    pub tree: PlanTree,
    pub config: EngineConfig,
}

/// One line of an annotated output file.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct AnnotatedRecord {
    #[serde(flatten)]
    pub input: SentenceRecord,
    pub a_speech_act: Vec<SpeechAct>,
    pub speech_act: SpeechAct,
    pub via_plan_inference: bool,
    pub attach_node_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub augmented_when: Option<TimeExpression>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antecedent_node: Option<String>,
}

impl ProcessedDialogue {
    pub fn annotated_records(&self) -> Vec<AnnotatedRecord> {
        self.dialogue
            .sentences
            .iter()
            .zip(&self.outcomes)
            .map(|(input, outcome)| AnnotatedRecord {
                input: SentenceRecord::from_utterance(&self.dialogue.id, input),
                a_speech_act: outcome.frame.a_speech_act.clone(),
                speech_act: outcome.decision.assigned_act,
                via_plan_inference: outcome.decision.via_plan_inference,
                attach_node_id: outcome.attach_node_id.clone(),
                augmented_when: outcome
                    .augmentation
                    .as_ref()
                    .filter(|a| a.after != a.before)
                    .map(|a| a.after.clone()),
                antecedent_node: outcome.antecedent_node.clone(),
            })
            .collect()
    }

    /// Annotated records as line-delimited JSON.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in self.annotated_records() {
            out.push_str(&serde_json::to_string(&record).expect("records always serialize"));
            out.push('\n');
        }
        out
    }

    pub fn assigned_acts(&self) -> Vec<SpeechAct> {
        self.outcomes
            .iter()
            .map(|o| o.decision.assigned_act)
            .collect()
    }
}

/// Matches every sentence against the rules, then processes the dialogue in
/// order within a fresh session.
pub fn process_dialogue(
    dialogue: &Dialogue,
    lib: &PlanLibrary,
    rules: &[MatchingRule],
    config: EngineConfig,
) -> ProcessedDialogue {
    let mut session = Session::new(lib, config);
    let outcomes = dialogue
        .sentences
        .iter()
        .map(|u| {
            let mut frame = u.frame.clone();
            frame.a_speech_act = match_speech_acts(&frame, rules);
            frame.speech_act = None;
            session.process_sentence(frame)
        })
        .collect();
    ProcessedDialogue {
        dialogue: dialogue.clone(),
        outcomes,
        tree: session.into_tree(),
        config,
    }
}

/// Processes dialogues concurrently; results keep input order.
pub fn process_corpus(
    dialogues: &[Dialogue],
    lib: &PlanLibrary,
    rules: &[MatchingRule],
    config: EngineConfig,
) -> Vec<ProcessedDialogue> {
    dialogues
        .par_iter()
        .map(|d| process_dialogue(d, lib, rules, config))
        .collect()
}
