//! Random instance generators and independent checkers shared by the
//! integration tests and the acceptance suite.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use w6h_core::storage::{EventLog, SessionJournal};
use w6h_core::{
    Answer, Concern, DependencyRule, Interrogative, InterrogativeSet, Mode, PatternMatrix,
    PrecedenceGraph, ScopeEntry, Session, StakeholderGroup, Status, Verdict,
};

pub const TS: &str = "2024-01-01T00:00:00Z";
const TAGS: [&str; 3] = ["req-a", "req-b", "link"];
const ITEMS: [&str; 5] = ["Customer", "Order", "Invoice", "Ledger", "Product"];

fn random_subset<R: Rng>(rng: &mut R, pool: &[Interrogative], p: f64) -> InterrogativeSet {
    pool.iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

/// A graph built against a hidden permutation, so it is always satisfiable.
/// Any-of groups may also name interrogatives that come later in the hidden
/// order, as long as each group has one earlier member.
pub fn random_satisfiable_graph<R: Rng>(rng: &mut R) -> PrecedenceGraph {
    let mut hidden = Interrogative::ALL;
    hidden.shuffle(rng);
    let mut rules = Vec::new();
    for (pos, &target) in hidden.iter().enumerate() {
        if pos == 0 || !rng.gen_bool(0.6) {
            continue;
        }
        let earlier = &hidden[..pos];
        let all_of = random_subset(rng, earlier, 0.3);
        let mut used = all_of.with(target);
        let mut any_of = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let anchors: Vec<Interrogative> = earlier
                .iter()
                .copied()
                .filter(|i| !used.contains(*i))
                .collect();
            let Some(&anchor) = anchors.choose(rng) else {
                break;
            };
            let mut group = InterrogativeSet::from([anchor]);
            used.insert(anchor);
            let others: Vec<Interrogative> = Interrogative::ALL
                .into_iter()
                .filter(|i| !used.contains(*i))
                .collect();
            for extra in random_subset(rng, &others, 0.25).iter() {
                group.insert(extra);
                used.insert(extra);
            }
            any_of.push(group);
        }
        if all_of.is_empty() && any_of.is_empty() {
            continue;
        }
        rules.push(
            DependencyRule::new(target, all_of, any_of).expect("generated rule is well formed"),
        );
    }
    PrecedenceGraph::new(format!("rand-{}", rng.gen::<u32>()), rules).expect("one rule per target")
}

/// Arbitrary well-formed rules; may be unsatisfiable.
pub fn random_graph<R: Rng>(rng: &mut R) -> PrecedenceGraph {
    let mut rules = Vec::new();
    for target in Interrogative::ALL {
        if !rng.gen_bool(0.4) {
            continue;
        }
        let others: Vec<Interrogative> = Interrogative::ALL
            .into_iter()
            .filter(|i| *i != target)
            .collect();
        let all_of = random_subset(rng, &others, 0.2);
        let mut used = all_of.with(target);
        let mut any_of = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let free: Vec<Interrogative> = Interrogative::ALL
                .into_iter()
                .filter(|i| !used.contains(*i))
                .collect();
            let group = random_subset(rng, &free, 0.35);
            if group.is_empty() {
                continue;
            }
            used = used.union(group);
            any_of.push(group);
        }
        rules.push(DependencyRule::new(target, all_of, any_of).unwrap());
    }
    PrecedenceGraph::new("arb", rules).unwrap()
}

fn pick_tags<R: Rng>(rng: &mut R) -> Vec<String> {
    TAGS.iter()
        .filter(|_| rng.gen_bool(0.3))
        .map(|t| t.to_string())
        .collect()
}

/// A valid matrix with one to three groups. Which concerns may draw
/// candidates from a who/what concern covering all of their groups.
pub fn random_matrix<R: Rng>(rng: &mut R) -> PatternMatrix {
    let group_count = rng.gen_range(1..=3);
    let groups: Vec<StakeholderGroup> = (0..group_count)
        .map(|g| StakeholderGroup::new(format!("g{g}"), format!("Group {g}")))
        .collect();
    let mut m = PatternMatrix::new(format!("m{}", rng.gen::<u16>()), "1", groups.clone());
    let n = rng.gen_range(0..=16);
    for idx in 0..n {
        let interrogative = Interrogative::ALL[rng.gen_range(0..7)];
        let mut member: Vec<String> = groups
            .iter()
            .filter(|_| rng.gen_bool(0.6))
            .map(|g| g.id.clone())
            .collect();
        if member.is_empty() {
            member.push(groups[rng.gen_range(0..groups.len())].id.clone());
        }
        let mut c = Concern::new(
            format!("c{idx}"),
            format!("concern {idx}"),
            interrogative,
            member,
        )
        .with_tags(pick_tags(rng));
        if rng.gen_bool(0.2) {
            c.question = Some(format!("{} about concern {idx}?", interrogative.title()));
        }
        if rng.gen_bool(0.1) {
            c.tags.insert("function:Billing".into());
        }
        if interrogative == Interrogative::Why && rng.gen_bool(0.4) {
            c.gatekeeper = true;
        }
        if interrogative == Interrogative::Which && rng.gen_bool(0.6) {
            let sources: Vec<&Concern> = m
                .concerns
                .iter()
                .filter(|s| {
                    matches!(s.interrogative, Interrogative::Who | Interrogative::What)
                        && c.groups.is_subset(&s.groups)
                })
                .collect();
            if let Some(s) = sources.choose(rng) {
                c.candidates_from = Some(s.id.clone());
            }
        }
        m = m.add_concern(c).expect("generated concern is valid");
    }
    m
}

pub fn random_scope<R: Rng>(rng: &mut R, m: &PatternMatrix) -> Vec<ScopeEntry> {
    let mut scope = Vec::new();
    for g in &m.groups {
        if rng.gen_bool(0.8) {
            if rng.gen_bool(0.15) {
                scope.push(ScopeEntry::tagged(
                    &g.id,
                    TAGS[rng.gen_range(0..TAGS.len())],
                ));
            } else {
                scope.push(ScopeEntry::group(&g.id));
            }
        }
    }
    scope
}

/// Effective-rule check computed straight from instance statuses.
pub fn emission_is_sound(
    session: &Session,
    inst: &w6h_core::QuestionInstance,
) -> Result<(), String> {
    if inst.status != Status::Pending {
        return Err(format!("{} emitted with status {:?}", inst.id, inst.status));
    }
    let mut answered = [0usize; 7];
    let mut pending = [0usize; 7];
    for i in &session.instances {
        let slot = (i.interrogative.rank() - 1) as usize;
        match i.status {
            Status::Answered => answered[slot] += 1,
            Status::Pending => pending[slot] += 1,
            _ => {}
        }
    }
    let slot = |i: Interrogative| (i.rank() - 1) as usize;
    let satisfied = |i: Interrogative| answered[slot(i)] > 0 && pending[slot(i)] == 0;
    let triage = session.mode == Mode::Triage;

    if triage && inst.gatekeeper {
        if answered[slot(Interrogative::Who)] == 0 || answered[slot(Interrogative::What)] == 0 {
            return Err(format!(
                "gatekeeper {} emitted before who and what were answered",
                inst.id
            ));
        }
    } else if let Some(rule) = session.graph.rule(inst.interrogative) {
        for pre in rule.all_of.iter() {
            if !satisfied(pre) {
                return Err(format!(
                    "{} ({}) emitted with {} unsatisfied",
                    inst.id, inst.interrogative, pre
                ));
            }
        }
        for group in &rule.any_of {
            if !group.iter().any(satisfied) {
                return Err(format!(
                    "{} ({}) emitted with no member of {group} satisfied",
                    inst.id, inst.interrogative
                ));
            }
        }
    }
    if triage
        && !inst.gatekeeper
        && !matches!(inst.interrogative, Interrogative::Who | Interrogative::What)
        && session
            .instances
            .iter()
            .any(|i| i.gatekeeper && i.status == Status::Pending)
    {
        return Err(format!("{} emitted while a gatekeeper is pending", inst.id));
    }
    if let Some(source) = &inst.candidates_from {
        let ok = session
            .instances
            .iter()
            .any(|i| &i.id == source && i.status == Status::Answered);
        if !ok {
            return Err(format!(
                "{} emitted before its candidate source {source} was answered",
                inst.id
            ));
        }
    }
    Ok(())
}

/// Outcome of one randomized session run.
pub struct RunReport {
    pub journal: SessionJournal,
    pub steps: usize,
}

fn candidate_items(session: &Session, inst: &w6h_core::QuestionInstance) -> Vec<String> {
    inst.candidates_from
        .as_deref()
        .and_then(|s| session.answer_for(s))
        .and_then(|a| a.items.clone())
        .unwrap_or_default()
}

/// Drives a session with random answers, skips, verdicts and invalid
/// attempts, checking scheduling invariants after every step.
pub fn run_random_session<R: Rng>(rng: &mut R, session: Session) -> Result<RunReport, String> {
    let mut journal = SessionJournal::start(session);
    let mut retired: Vec<String> = Vec::new();
    let mut steps = 0;
    let max_steps = journal.session().instances.len() * 2 + 4;

    while steps < max_steps {
        steps += 1;
        let s = journal.session().clone();
        let next: Vec<w6h_core::QuestionInstance> =
            s.next_questions().into_iter().cloned().collect();
        for inst in &next {
            emission_is_sound(&s, inst)?;
            if retired.contains(&inst.id) {
                return Err(format!("retired instance {} re-emitted", inst.id));
            }
        }
        for cell in s.coverage().cells {
            if cell.pending + cell.answered + cell.skipped + cell.gated_out != cell.total {
                return Err(format!("coverage not conserved in {cell:?}"));
            }
        }

        let roll: f64 = rng.gen();
        if roll < 0.65 && !next.is_empty() {
            let inst = next.choose(rng).unwrap().clone();
            let mut answer = Answer::new(&inst.id, "answer", TS);
            match inst.interrogative {
                Interrogative::Who | Interrogative::What => {
                    let items: Vec<&str> = ITEMS
                        .iter()
                        .copied()
                        .filter(|_| rng.gen_bool(0.6))
                        .collect();
                    answer = answer.with_items(items);
                }
                Interrogative::Which if inst.candidates_from.is_some() => {
                    let pool = candidate_items(&s, &inst);
                    let items: Vec<String> =
                        pool.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
                    answer = answer.with_items(items);
                }
                Interrogative::Why => {
                    answer = answer.with_verdict(if rng.gen_bool(0.5) {
                        Verdict::Proceed
                    } else {
                        Verdict::NotNeeded
                    });
                }
                _ => {}
            }
            let before: Vec<String> = next
                .iter()
                .map(|i| i.id.clone())
                .filter(|id| *id != inst.id)
                .collect();
            journal
                .answer(answer)
                .map_err(|e| format!("answer to emitted {} failed: {e}", inst.id))?;
            let after: Vec<String> = journal
                .session()
                .next_questions()
                .iter()
                .map(|i| i.id.clone())
                .collect();
            if let Some(lost) = before.iter().find(|id| !after.contains(id)) {
                return Err(format!(
                    "answering {} removed {lost} from the unblocked set",
                    inst.id
                ));
            }
        } else if roll < 0.75 {
            let pending: Vec<String> = s
                .instances
                .iter()
                .filter(|i| i.status == Status::Pending)
                .map(|i| i.id.clone())
                .collect();
            if let Some(id) = pending.choose(rng) {
                journal.skip(id, TS).map_err(|e| e.to_string())?;
                retired.push(id.clone());
            }
        } else if roll < 0.85 {
            let whys: Vec<(String, Verdict)> = s
                .instances
                .iter()
                .filter(|i| i.interrogative == Interrogative::Why && i.status == Status::Answered)
                .filter_map(|i| {
                    s.answer_for(&i.id)
                        .and_then(|a| a.verdict)
                        .map(|v| (i.id.clone(), v))
                })
                .collect();
            if let Some((id, verdict)) = whys.choose(rng) {
                let tag = TAGS[rng.gen_range(0..TAGS.len())];
                journal
                    .gate(id, *verdict, tag, TS)
                    .map_err(|e| e.to_string())?;
                retired.extend(
                    journal
                        .session()
                        .instances
                        .iter()
                        .filter(|i| i.status == Status::GatedOut)
                        .map(|i| i.id.clone()),
                );
            }
        } else {
            // Invalid attempts must fail without touching state.
            let before = journal.clone();
            let blocked: Vec<String> = s
                .instances
                .iter()
                .filter(|i| i.status != Status::Pending || !next.iter().any(|n| n.id == i.id))
                .map(|i| i.id.clone())
                .collect();
            if let Some(id) = blocked.choose(rng) {
                if journal.answer(Answer::new(id, "too early", TS)).is_ok() {
                    return Err(format!("answer to non-askable {id} was accepted"));
                }
            }
            if journal.skip("no-such-instance", TS).is_ok() {
                return Err("skip of unknown instance accepted".into());
            }
            if journal != before {
                return Err("failed operation changed the journal".into());
            }
        }
    }

    let text = journal.log().to_jsonl();
    let replayed = EventLog::from_jsonl(&text)
        .and_then(|log| log.replay())
        .map_err(|e| format!("replay failed: {e}"))?;
    if &replayed != journal.session() {
        return Err("replayed session differs from live state".into());
    }
    if journal.session().mode == Mode::Full {
        let sequence: Vec<Interrogative> = journal
            .session()
            .answers
            .iter()
            .map(|a| {
                journal
                    .session()
                    .instance(&a.instance_id)
                    .unwrap()
                    .interrogative
            })
            .collect();
        let violations = w6h_core::is_valid_order(&journal.session().graph, &sequence);
        if !violations.is_empty() {
            return Err(format!(
                "answer transcript violates the graph: {violations:?}"
            ));
        }
    }
    Ok(RunReport { journal, steps })
}

/// Either a random graph or the default one.
pub fn session_graph<R: Rng>(rng: &mut R) -> PrecedenceGraph {
    if rng.gen_bool(0.3) {
        w6h_core::default_graph()
    } else {
        random_satisfiable_graph(rng)
    }
}

pub fn random_mode<R: Rng>(rng: &mut R) -> Mode {
    if rng.gen_bool(0.5) {
        Mode::Full
    } else {
        Mode::Triage
    }
}
