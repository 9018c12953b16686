//! Precedence rules between interrogatives.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::interrogative::{Interrogative, InterrogativeSet};
use crate::ordering;

/// Prerequisites of one interrogative: every member of `all_of`, plus at
/// least one member of each `any_of` group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependencyRule {
    pub target: Interrogative,
    #[serde(default)]
    pub all_of: InterrogativeSet,
    #[serde(default)]
    pub any_of: Vec<InterrogativeSet>,
}

impl DependencyRule {
    pub fn new(
        target: Interrogative,
        all_of: InterrogativeSet,
        any_of: Vec<InterrogativeSet>,
    ) -> Result<Self, ModelError> {
        let rule = DependencyRule {
            target,
            all_of,
            any_of,
        };
        rule.check()?;
        Ok(rule)
    }

    pub(crate) fn check(&self) -> Result<(), ModelError> {
        let invalid = |reason: &str| ModelError::InvalidRule {
            target: self.target,
            reason: reason.to_string(),
        };
        if self.all_of.contains(self.target) {
            return Err(invalid("target listed among its own prerequisites"));
        }
        let mut seen = self.all_of;
        for group in &self.any_of {
            if group.is_empty() {
                return Err(invalid("empty any_of group"));
            }
            if group.contains(self.target) {
                return Err(invalid("target listed among its own prerequisites"));
            }
            if seen.intersects(*group) {
                return Err(invalid("interrogative repeated across all_of/any_of"));
            }
            seen = seen.union(*group);
        }
        Ok(())
    }

    /// Every interrogative mentioned by the rule.
    pub fn prerequisites(&self) -> InterrogativeSet {
        self.any_of
            .iter()
            .fold(self.all_of, |acc, group| acc.union(*group))
    }

    pub fn is_met_by(&self, satisfied: InterrogativeSet) -> bool {
        self.all_of.is_subset(satisfied) && self.any_of.iter().all(|g| g.intersects(satisfied))
    }

    pub fn unmet_all_of(&self, satisfied: InterrogativeSet) -> InterrogativeSet {
        self.all_of.difference(satisfied)
    }

    pub fn unmet_any_of(&self, satisfied: InterrogativeSet) -> Vec<InterrogativeSet> {
        self.any_of
            .iter()
            .filter(|g| !g.intersects(satisfied))
            .copied()
            .collect()
    }
}

/// At most one rule per target interrogative. Targets without a rule have
/// no prerequisites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct PrecedenceGraph {
    rules: BTreeMap<Interrogative, DependencyRule>,
    pub version: String,
}

impl PrecedenceGraph {
    pub fn empty(version: impl Into<String>) -> Self {
        PrecedenceGraph {
            rules: BTreeMap::new(),
            version: version.into(),
        }
    }

    pub fn new(
        version: impl Into<String>,
        rules: impl IntoIterator<Item = DependencyRule>,
    ) -> Result<Self, ModelError> {
        let mut graph = Self::empty(version);
        for rule in rules {
            graph.insert_rule(rule)?;
        }
        Ok(graph)
    }

    /// Adds a rule. A second rule for the same target is rejected.
    pub fn insert_rule(&mut self, rule: DependencyRule) -> Result<(), ModelError> {
        rule.check()?;
        if self.rules.contains_key(&rule.target) {
            return Err(ModelError::InvalidRule {
                target: rule.target,
                reason: "more than one rule for this target".into(),
            });
        }
        self.rules.insert(rule.target, rule);
        Ok(())
    }

    pub fn rule(&self, target: Interrogative) -> Option<&DependencyRule> {
        self.rules.get(&target)
    }

    /// Rules in rank order of their targets.
    pub fn rules(&self) -> impl Iterator<Item = &DependencyRule> {
        self.rules.values()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Whether `target` may be asked once `satisfied` have been.
    pub fn is_met(&self, target: Interrogative, satisfied: InterrogativeSet) -> bool {
        self.rule(target).is_none_or(|r| r.is_met_by(satisfied))
    }

    /// Brute-force check over all 5040 permutations.
    pub fn is_satisfiable(&self) -> bool {
        !ordering::enumerate_valid_orders(self).is_empty()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GraphRepr {
    pub version: String,
    pub rules: Vec<DependencyRule>,
}

impl TryFrom<GraphRepr> for PrecedenceGraph {
    type Error = ModelError;

    fn try_from(repr: GraphRepr) -> Result<Self, Self::Error> {
        PrecedenceGraph::new(repr.version, repr.rules)
    }
}

impl From<PrecedenceGraph> for GraphRepr {
    fn from(graph: PrecedenceGraph) -> Self {
        GraphRepr {
            version: graph.version,
            rules: graph.rules.into_values().collect(),
        }
    }
}

/// The built-in graph: only the column dependencies of the default pattern
/// are encoded as hard edges.
pub fn default_graph() -> PrecedenceGraph {
    crate::storage::load_graph(crate::DEFAULT_GRAPH_DOCUMENT)
        .expect("embedded default graph document is well formed")
}
