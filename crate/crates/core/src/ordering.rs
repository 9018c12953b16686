//! Order validation, unblocked sets and canonical ordering over a
//! [`PrecedenceGraph`].

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::graph::PrecedenceGraph;
use crate::interrogative::{Interrogative, InterrogativeSet};

/// An interrogative asked before its prerequisites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderViolation {
    pub position: usize,
    pub interrogative: Interrogative,
    pub unmet_all_of: InterrogativeSet,
    pub unmet_any_of: Vec<InterrogativeSet>,
}

impl OrderViolation {
    /// Human-readable list of what is missing.
    pub fn describe_unmet(&self) -> String {
        let mut parts = Vec::new();
        if !self.unmet_all_of.is_empty() {
            let names: Vec<&str> = self
                .unmet_all_of
                .iter()
                .map(Interrogative::as_str)
                .collect();
            parts.push(format!("requires {}", names.join(", ")));
        }
        for group in &self.unmet_any_of {
            let names: Vec<&str> = group.iter().map(Interrogative::as_str).collect();
            parts.push(format!("requires one of {}", names.join("/")));
        }
        parts.join("; ")
    }
}

/// Checks a sequence against the graph. Only first occurrences are checked;
/// an interrogative counts as asked once its first occurrence has passed.
pub fn is_valid_order(graph: &PrecedenceGraph, sequence: &[Interrogative]) -> Vec<OrderViolation> {
    let mut asked = InterrogativeSet::EMPTY;
    let mut violations = Vec::new();
    for (position, &interrogative) in sequence.iter().enumerate() {
        if asked.contains(interrogative) {
            continue;
        }
        if let Some(rule) = graph.rule(interrogative) {
            let unmet_all_of = rule.unmet_all_of(asked);
            let unmet_any_of = rule.unmet_any_of(asked);
            if !unmet_all_of.is_empty() || !unmet_any_of.is_empty() {
                violations.push(OrderViolation {
                    position,
                    interrogative,
                    unmet_all_of,
                    unmet_any_of,
                });
            }
        }
        asked.insert(interrogative);
    }
    violations
}

/// Interrogatives not yet satisfied whose prerequisites are all satisfied.
pub fn unblocked(graph: &PrecedenceGraph, satisfied: InterrogativeSet) -> InterrogativeSet {
    Interrogative::ALL
        .into_iter()
        .filter(|&i| !satisfied.contains(i) && graph.is_met(i, satisfied))
        .collect()
}

/// The rank-lexicographically smallest valid permutation, built greedily by
/// always taking the lowest-ranked unblocked interrogative.
pub fn canonical_order(graph: &PrecedenceGraph) -> Result<Vec<Interrogative>, ModelError> {
    let mut done = InterrogativeSet::EMPTY;
    let mut order = Vec::with_capacity(7);
    while order.len() < 7 {
        let next = unblocked(graph, done)
            .iter()
            .next()
            .ok_or(ModelError::Unsatisfiable)?;
        done.insert(next);
        order.push(next);
    }
    Ok(order)
}

/// Every valid permutation of the seven interrogatives, in lexicographic
/// rank order, found by checking all 5040.
///
/// Validity is judged from each element's position, not by scanning the
/// sequence, so this can serve as an oracle for [`is_valid_order`].
pub fn enumerate_valid_orders(graph: &PrecedenceGraph) -> Vec<[Interrogative; 7]> {
    let mut valid = Vec::new();
    let mut perm = Interrogative::ALL;
    loop {
        if satisfies_by_position(graph, &perm) {
            valid.push(perm);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    valid
}

fn satisfies_by_position(graph: &PrecedenceGraph, perm: &[Interrogative; 7]) -> bool {
    let mut position = [0usize; 7];
    for (p, i) in perm.iter().enumerate() {
        position[i.index()] = p;
    }
    graph.rules().all(|rule| {
        let at = position[rule.target.index()];
        rule.all_of.iter().all(|pre| position[pre.index()] < at)
            && rule
                .any_of
                .iter()
                .all(|group| group.iter().any(|pre| position[pre.index()] < at))
    })
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    let Some(pivot) = items.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let successor = items
        .iter()
        .rposition(|x| *x > items[pivot])
        .expect("a larger element exists right of the pivot");
    items.swap(pivot, successor);
    items[pivot + 1..].reverse();
    true
}
