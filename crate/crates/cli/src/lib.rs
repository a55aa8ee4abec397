//! Batch driver: loads the plan library, rules and dialogues, runs the
//! engine and writes annotated output or a comparison report.
//!
//! Every output starts with a provenance record (heuristic, seed and the
//! SHA-256 of every input) so runs can be reproduced byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use dtst_core::attention::Heuristic;
use dtst_core::data::{BUNDLED_CORPUS, DEFAULT_LIBRARY, DEFAULT_RULES};
use dtst_core::evaluation::{
    evaluate_corpus, parse_gold, render_table, CorpusReport, GoldAnnotation,
};
use dtst_core::inference_engine::{process_corpus, EngineConfig, ProcessedDialogue};
use dtst_core::interlingua::{load_matching_rules, parse_dialogue, Dialogue, MatchingRule};
use dtst_core::plan_library::{load_plan_library, PlanLibrary};

/// Source label used for data compiled into the binary.
pub const BUNDLED: &str = "<bundled>";

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub heuristic: Heuristic,
    pub seed: u64,
    /// `None` selects the shipped library.
    pub plan_library: Option<PathBuf>,
    /// `None` selects the shipped rules.
    pub rules: Option<PathBuf>,
    /// Dialogue files; empty selects the bundled corpus.
    pub inputs: Vec<PathBuf>,
    /// Directory holding `<stem>.gold.jsonl` files. Defaults to each
    /// input's own directory.
    pub gold: Option<PathBuf>,
    pub dump_tree: bool,
    pub report: Option<PathBuf>,
    /// Directory for `cmd_process` output files.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            heuristic: Heuristic::Extended,
            seed: 0,
            plan_library: None,
            rules: None,
            inputs: Vec::new(),
            gold: None,
            dump_tree: false,
            report: None,
            output: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceDigest {
    pub name: String,
    pub source: String,
    pub sha256: String,
}

/// Configuration and input digests embedded in every output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heuristic: Option<Heuristic>,
    pub seed: u64,
    pub plan_library: SourceDigest,
    pub rules: SourceDigest,
    pub inputs: Vec<SourceDigest>,
}

impl Provenance {
    /// The record as `#`-prefixed comment lines.
    pub fn comment_block(&self, title: &str) -> String {
        let mut out = format!("# {title}\n");
        if let Some(h) = self.heuristic {
            out.push_str(&format!("# heuristic: {}\n", h.label()));
        }
        out.push_str(&format!("# seed: {}\n", self.seed));
        let line = |kind: &str, d: &SourceDigest| {
            format!("# {kind}: {} {} sha256:{}\n", d.name, d.source, d.sha256)
        };
        out.push_str(&line("plan-library", &self.plan_library));
        out.push_str(&line("rules", &self.rules));
        for input in &self.inputs {
            out.push_str(&line("input", input));
        }
        out
    }
}

fn sha256(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

struct Loaded {
    text: String,
    digest: SourceDigest,
}

fn load_text(path: Option<&Path>, bundled_name: &str, bundled: &str) -> Result<Loaded> {
    let (name, source, text) = match path {
        Some(p) => {
            let text =
                fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            let name = p.file_name().map_or_else(
                || p.display().to_string(),
                |n| n.to_string_lossy().into_owned(),
            );
            (name, p.display().to_string(), text)
        }
        None => (
            bundled_name.to_string(),
            BUNDLED.to_string(),
            bundled.to_string(),
        ),
    };
    let sha256 = sha256(&text);
    Ok(Loaded {
        text,
        digest: SourceDigest {
            name,
            source,
            sha256,
        },
    })
}

/// One dialogue with its optional gold annotations.
#[derive(Debug, Clone)]
pub struct InputDialogue {
    pub name: String,
    pub dialogue: Dialogue,
    pub gold: Option<Vec<GoldAnnotation>>,
    pub digest: SourceDigest,
}

/// Everything a run needs, loaded and validated.
#[derive(Debug)]
pub struct Resources {
    pub library: PlanLibrary,
    pub rules: Vec<MatchingRule>,
    pub inputs: Vec<InputDialogue>,
    library_digest: SourceDigest,
    rules_digest: SourceDigest,
}

impl Resources {
    /// Loads library, rules and dialogues. Gold files are read when
    /// `with_gold` is set and must exist for every input.
    pub fn load(config: &RunConfig, with_gold: bool) -> Result<Self> {
        let lib = load_text(
            config.plan_library.as_deref(),
            "library.json",
            DEFAULT_LIBRARY,
        )?;
        let library = load_plan_library(&lib.text)
            .with_context(|| format!("invalid plan library {}", lib.digest.source))?;
        let rules_text = load_text(config.rules.as_deref(), "rules.json", DEFAULT_RULES)?;
        let rules = load_matching_rules(&rules_text.text)
            .with_context(|| format!("invalid matching rules {}", rules_text.digest.source))?;

        let mut inputs = Vec::new();
        if config.inputs.is_empty() {
            for b in BUNDLED_CORPUS {
                let dialogue = parse_dialogue(b.dialogue)
                    .with_context(|| format!("bundled dialogue {}", b.name))?;
                let gold = if with_gold {
                    Some(parse_gold(b.gold).with_context(|| format!("bundled gold {}", b.name))?)
                } else {
                    None
                };
                inputs.push(InputDialogue {
                    name: b.name.to_string(),
                    dialogue,
                    gold,
                    digest: SourceDigest {
                        name: format!("{}.jsonl", b.name),
                        source: BUNDLED.to_string(),
                        sha256: sha256(b.dialogue),
                    },
                });
            }
        }
        for path in &config.inputs {
            let loaded = load_text(Some(path), "", "")?;
            let dialogue =
                parse_dialogue(&loaded.text).with_context(|| format!("in {}", path.display()))?;
            let name = dialogue_stem(path);
            let gold = if with_gold {
                let gold_path = gold_path(path, config.gold.as_deref());
                let text = fs::read_to_string(&gold_path)
                    .with_context(|| format!("cannot read gold file {}", gold_path.display()))?;
                Some(parse_gold(&text).with_context(|| format!("in {}", gold_path.display()))?)
            } else {
                None
            };
            inputs.push(InputDialogue {
                name,
                dialogue,
                gold,
                digest: loaded.digest,
            });
        }
        Ok(Self {
            library,
            rules,
            inputs,
            library_digest: lib.digest,
            rules_digest: rules_text.digest,
        })
    }

    pub fn provenance(&self, heuristic: Option<Heuristic>, seed: u64) -> Provenance {
        Provenance {
            heuristic,
            seed,
            plan_library: self.library_digest.clone(),
            rules: self.rules_digest.clone(),
            inputs: self.inputs.iter().map(|i| i.digest.clone()).collect(),
        }
    }

    pub fn run(&self, heuristic: Heuristic, seed: u64) -> Vec<ProcessedDialogue> {
        let dialogues: Vec<Dialogue> = self.inputs.iter().map(|i| i.dialogue.clone()).collect();
        process_corpus(
            &dialogues,
            &self.library,
            &self.rules,
            EngineConfig::new(heuristic, seed),
        )
    }
}

/// File name without `.jsonl`.
fn dialogue_stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.strip_suffix(".jsonl").unwrap_or(&name).to_string()
}

/// `<dir>/<stem>.gold.jsonl`, where `dir` is the gold directory if given and
/// the input's own directory otherwise.
pub fn gold_path(input: &Path, gold_dir: Option<&Path>) -> PathBuf {
    let file = format!("{}.gold.jsonl", dialogue_stem(input));
    match gold_dir {
        Some(dir) => dir.join(file),
        None => input.with_file_name(file),
    }
}

/// A generated file: name relative to the output directory, and contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Annotates every input with one heuristic. Each annotated file opens with
/// a `{"run": ...}` provenance line; tree dumps open with comment lines.
/// Files are written to `config.output` when set.
pub fn cmd_process(config: &RunConfig) -> Result<Vec<OutputFile>> {
    let res = Resources::load(config, false)?;
    let provenance = res.provenance(Some(config.heuristic), config.seed);
    let header = serde_json::to_string(&serde_json::json!({ "run": provenance }))?;
    let mut files = Vec::new();
    for (input, processed) in res
        .inputs
        .iter()
        .zip(res.run(config.heuristic, config.seed))
    {
        files.push(OutputFile {
            name: format!("{}.annotated.jsonl", input.name),
            contents: format!("{header}\n{}", processed.to_jsonl()),
        });
        if config.dump_tree {
            files.push(OutputFile {
                name: format!("{}.tree.txt", input.name),
                contents: format!(
                    "{}{}",
                    provenance.comment_block("plan tree"),
                    processed.tree.dump(&res.library)
                ),
            });
        }
    }
    if let Some(dir) = &config.output {
        write_files(dir, &files)?;
    }
    Ok(files)
}

pub fn write_files(dir: &Path, files: &[OutputFile]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for f in files {
        let path = dir.join(&f.name);
        fs::write(&path, &f.contents)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

/// Structured form of a comparison, for regression diffing.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRecord {
    pub run: Provenance,
    pub reports: Vec<CorpusReport>,
}

/// `<report>.json`, the structured record written beside a text report.
pub fn record_path(report: &Path) -> PathBuf {
    let mut name = report.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Runs both heuristics on the same inputs and seed and renders the
/// two-row comparison, standard first. When `config.report` is set the text
/// goes there and the structured record to [`record_path`] of it.
pub fn cmd_compare(config: &RunConfig) -> Result<String> {
    let res = Resources::load(config, true)?;
    let gold: Vec<Vec<GoldAnnotation>> = res
        .inputs
        .iter()
        .map(|i| i.gold.clone().expect("gold loaded"))
        .collect();
    let mut reports = Vec::new();
    for heuristic in [Heuristic::Standard, Heuristic::Extended] {
        let processed = res.run(heuristic, config.seed);
        reports.push(evaluate_corpus(heuristic, &processed, &gold)?);
    }
    let run = res.provenance(None, config.seed);
    let report = format!(
        "{}{}",
        run.comment_block("heuristic comparison"),
        render_table(&reports)
    );
    if let Some(path) = &config.report {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
        fs::write(path, &report).with_context(|| format!("cannot write {}", path.display()))?;
        let record = serde_json::to_string_pretty(&CompareRecord { run, reports })? + "\n";
        let json_path = record_path(path);
        fs::write(&json_path, record)
            .with_context(|| format!("cannot write {}", json_path.display()))?;
    }
    Ok(report)
}

/// Rejects configurations that cannot run at all.
pub fn validate(config: &RunConfig) -> Result<()> {
    for p in &config.inputs {
        if !p.exists() {
            bail!("input {} does not exist", p.display());
        }
    }
    Ok(())
}
