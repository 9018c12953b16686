use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use w6h_core::storage::{self, ExportFormat, SessionJournal};
use w6h_core::{
    canonical_order, classify, default_graph, default_matrix, enumerate_valid_orders,
    is_valid_order, lint_document, parse_questionnaire, Answer, Interrogative, Mode, ScopeEntry,
    Session,
};

const TS: &str = "2024-01-01T00:00:00Z";

fn ordering(c: &mut Criterion) {
    let g = default_graph();
    let reversed: Vec<Interrogative> = Interrogative::ALL.iter().rev().copied().collect();
    c.bench_function("is_valid_order/canonical", |b| {
        b.iter(|| is_valid_order(&g, black_box(&Interrogative::ALL)))
    });
    c.bench_function("is_valid_order/reversed", |b| {
        b.iter(|| is_valid_order(&g, black_box(&reversed)))
    });
    c.bench_function("canonical_order", |b| {
        b.iter(|| canonical_order(black_box(&g)))
    });
    c.bench_function("enumerate_valid_orders", |b| {
        b.iter(|| enumerate_valid_orders(black_box(&g)))
    });
}

fn linting(c: &mut Criterion) {
    c.bench_function("classify", |b| {
        b.iter(|| {
            classify(black_box(
                "On which data will the application operate and how?",
            ))
        })
    });
    let m = default_matrix();
    let g = default_graph();
    let md = storage::export_questionnaire(&m, "developers", ExportFormat::Markdown).unwrap();
    c.bench_function("lint_document/developers", |b| {
        b.iter(|| lint_document(&parse_questionnaire(black_box(&md)), &g, Some(&m)))
    });
}

fn full_session() -> Session {
    let scope: Vec<ScopeEntry> = default_matrix()
        .groups
        .iter()
        .map(|g| ScopeEntry::group(&g.id))
        .collect();
    Session::create(
        "bench",
        &default_matrix(),
        &default_graph(),
        &scope,
        Mode::Full,
        TS,
    )
    .unwrap()
}

fn sessions(c: &mut Criterion) {
    let fresh = full_session();
    c.bench_function("next_questions/fresh", |b| {
        b.iter(|| black_box(&fresh).next_questions().len())
    });

    let mut journal = SessionJournal::start(full_session());
    for _ in 0..40 {
        let id = journal.session().next_questions()[0].id.clone();
        journal.answer(Answer::new(id, "ok", TS)).unwrap();
    }
    let midway = journal.session().clone();
    c.bench_function("next_questions/midway", |b| {
        b.iter(|| black_box(&midway).next_questions().len())
    });

    let text = journal.log().to_jsonl();
    c.bench_function("replay/40_answers", |b| {
        b.iter(|| {
            storage::EventLog::from_jsonl(black_box(&text))
                .unwrap()
                .replay()
                .unwrap()
        })
    });
}

criterion_group!(benches, ordering, linting, sessions);
criterion_main!(benches);
