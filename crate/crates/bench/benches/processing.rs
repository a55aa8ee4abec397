use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use dtst_core::attention::Heuristic;
use dtst_core::data::{BUNDLED_CORPUS, DEFAULT_LIBRARY, DEFAULT_RULES};
use dtst_core::inference_engine::{process_corpus, EngineConfig};
use dtst_core::interlingua::load_matching_rules;
use dtst_core::interlingua::parse_dialogue;
use dtst_core::plan_library::{decomposition_accepts, load_plan_library};

fn corpus(c: &mut Criterion) {
    let lib = load_plan_library(DEFAULT_LIBRARY).unwrap();
    let rules = load_matching_rules(DEFAULT_RULES).unwrap();
    let dialogues: Vec<_> = BUNDLED_CORPUS
        .iter()
        .map(|b| parse_dialogue(b.dialogue).unwrap())
        .collect();
    for mode in [Heuristic::Standard, Heuristic::Extended] {
        c.bench_function(&format!("corpus/{}", mode.label()), |b| {
            b.iter(|| {
                process_corpus(
                    black_box(&dialogues),
                    &lib,
                    &rules,
                    EngineConfig::new(mode, 0),
                )
            })
        });
    }
}

fn decomposition(c: &mut Criterion) {
    let lib = load_plan_library(DEFAULT_LIBRARY).unwrap();
    let op = lib.get(lib.find("Suggestion-By-Request").unwrap());
    let existing = [
        "Request-Suggestion",
        "Suggestion",
        "Suggestion",
        "Suggestion",
        "Inform",
    ];
    c.bench_function("decomposition_accepts", |b| {
        b.iter(|| decomposition_accepts(op, black_box(&existing[..]), black_box("Inform")))
    });
}

criterion_group!(benches, corpus, decomposition);
criterion_main!(benches);
