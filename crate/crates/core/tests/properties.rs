mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use w6h_core::storage::{self, ExportFormat};
use w6h_core::{
    canonical_order, classify, enumerate_valid_orders, is_valid_order, lint_document,
    parse_questionnaire, unblocked, Concern, Interrogative, InterrogativeSet, Mode, RuleCode,
    ScopeEntry, Session,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn interrogative() -> impl Strategy<Value = Interrogative> {
    (0usize..7).prop_map(|i| Interrogative::ALL[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_agrees_with_sequential_check(seed in any::<u64>()) {
        let g = common::random_graph(&mut rng(seed));
        let valid = enumerate_valid_orders(&g);
        let mut count = 0;
        for perm in enumerate_valid_orders(&w6h_core::PrecedenceGraph::empty("all")) {
            let ok = is_valid_order(&g, &perm).is_empty();
            prop_assert_eq!(ok, valid.binary_search(&perm).is_ok());
            count += ok as usize;
        }
        prop_assert_eq!(count, valid.len());
    }

    #[test]
    fn canonical_order_is_valid_and_minimal(seed in any::<u64>()) {
        let g = common::random_graph(&mut rng(seed));
        let valid = enumerate_valid_orders(&g);
        match canonical_order(&g) {
            Ok(order) => {
                prop_assert!(is_valid_order(&g, &order).is_empty());
                prop_assert_eq!(order, valid[0].to_vec());
            }
            Err(_) => prop_assert!(valid.is_empty()),
        }
    }

    #[test]
    fn unblocked_is_monotone(seed in any::<u64>(), a in 0u8..128, b in 0u8..128) {
        let g = common::random_graph(&mut rng(seed));
        let small = InterrogativeSet::from_bits(a & b);
        let large = InterrogativeSet::from_bits(a | b);
        let lhs = unblocked(&g, small).difference(large);
        prop_assert!(lhs.is_subset(unblocked(&g, large)));
    }

    #[test]
    fn prefixes_of_valid_sequences_are_valid(seed in any::<u64>(), seq in proptest::collection::vec(interrogative(), 0..12)) {
        let g = common::random_satisfiable_graph(&mut rng(seed));
        if is_valid_order(&g, &seq).is_empty() {
            for k in 0..seq.len() {
                prop_assert!(is_valid_order(&g, &seq[..k]).is_empty());
            }
        }
    }

    #[test]
    fn add_concern_is_cell_local(seed in any::<u64>(), which in interrogative(), pick in any::<u8>()) {
        let m = common::random_matrix(&mut rng(seed));
        let group = m.groups[pick as usize % m.groups.len()].id.clone();
        let next = m.add_concern(Concern::new("fresh-concern", "fresh", which, [group.clone()])).unwrap();
        for g in &m.groups {
            for i in Interrogative::ALL {
                let before = m.cell(&g.id, i).len();
                let after = next.cell(&g.id, i).len();
                if g.id == group && i == which {
                    prop_assert_eq!(after, before + 1);
                } else {
                    prop_assert_eq!(m.cell(&g.id, i), next.cell(&g.id, i));
                }
            }
        }
    }

    #[test]
    fn classify_is_deterministic(words in proptest::collection::vec("[a-zA-Z]{1,8}", 0..8), lead in interrogative()) {
        let text = format!("{} {}?", lead.title(), words.join(" "));
        let a = classify(&text).unwrap();
        let b = classify(&text).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.primary, lead);
        prop_assert!(!a.embedded.contains(&lead));
        prop_assert_eq!(classify(&a.raw).unwrap(), a);
    }

    #[test]
    fn lint_order_findings_match_validator(seed in any::<u64>(), seq in proptest::collection::vec(interrogative(), 0..10)) {
        let g = common::random_satisfiable_graph(&mut rng(seed));
        let text: String = seq.iter().map(|i| format!("- {} is asked here?\n", i.title())).collect();
        let doc = parse_questionnaire(&text);
        let findings = lint_document(&doc, &g, None);
        let order = findings.iter().filter(|f| f.code == RuleCode::W6H001).count();
        prop_assert_eq!(order == 0, is_valid_order(&g, &seq).is_empty());
        prop_assert_eq!(order, is_valid_order(&g, &seq).len());
        let question_lines: Vec<usize> = doc.sections.iter().flat_map(|s| s.questions.iter().map(|q| q.line)).collect();
        for f in &findings {
            prop_assert!(question_lines.contains(&f.line));
        }
        if seq.is_empty() {
            prop_assert!(findings.is_empty());
        }
    }

    #[test]
    fn matrix_and_graph_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = common::random_matrix(&mut r);
        let text = storage::save_matrix(&m);
        prop_assert_eq!(storage::load_matrix(&text).unwrap(), m.clone());
        prop_assert_eq!(storage::save_matrix(&m), text);
        let g = common::random_graph(&mut r);
        prop_assert_eq!(storage::load_graph(&storage::save_graph(&g)).unwrap(), g);
    }

    #[test]
    fn exported_markdown_is_a_fixed_point(seed in any::<u64>()) {
        let m = common::random_matrix(&mut rng(seed));
        for g in &m.groups {
            let md = storage::export_questionnaire(&m, &g.id, ExportFormat::Markdown).unwrap();
            let doc = parse_questionnaire(&md);
            let parsed: Vec<String> = doc.sections.iter().flat_map(|s| s.questions.iter().map(|q| q.text.clone())).collect();
            let expected: Vec<String> = Interrogative::ALL
                .iter()
                .flat_map(|&i| m.cell(&g.id, i).into_iter().map(|c| c.prompt()))
                .collect();
            prop_assert_eq!(&parsed, &expected);
            let reparsed = parse_questionnaire(&storage::export_questionnaire(&m, &g.display_name, ExportFormat::Markdown).unwrap());
            prop_assert_eq!(reparsed, doc);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_sessions_keep_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = common::random_matrix(&mut r);
        let g = common::session_graph(&mut r);
        let scope = common::random_scope(&mut r, &m);
        let mode = common::random_mode(&mut r);
        if let Ok(s) = Session::create("s", &m, &g, &scope, mode, common::TS) {
            if let Err(e) = common::run_random_session(&mut r, s) {
                prop_assert!(false, "{}", e);
            }
        }
    }
}

#[test]
fn default_session_full_run_answers_everything() {
    let m = w6h_core::default_matrix();
    let mut s = Session::create(
        "s",
        &m,
        &w6h_core::default_graph(),
        &[ScopeEntry::group("developers")],
        Mode::Full,
        common::TS,
    )
    .unwrap();
    let mut order = Vec::new();
    while let Some(inst) = s.next_questions().first().map(|i| (*i).clone()) {
        order.push(inst.interrogative);
        s.record_answer(w6h_core::Answer::new(&inst.id, "ok", common::TS))
            .unwrap();
    }
    assert_eq!(s.pending_count(), 0);
    assert_eq!(order.len(), 45);
    assert!(
        order.windows(2).all(|w| w[0] <= w[1]),
        "greedy answering follows rank order"
    );
}
