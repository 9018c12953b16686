//! The seven English interrogatives and compact sets over them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ModelError;

/// One of the seven question words, declared in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interrogative {
    Who,
    What,
    Which,
    Where,
    How,
    Why,
    When,
}

/// Typological category of an interrogative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Major,
    Minor,
    Incidental,
}

impl Interrogative {
    /// All seven, in canonical rank order.
    pub const ALL: [Interrogative; 7] = [
        Interrogative::Who,
        Interrogative::What,
        Interrogative::Which,
        Interrogative::Where,
        Interrogative::How,
        Interrogative::Why,
        Interrogative::When,
    ];

    /// Canonical rank, 1 through 7.
    pub fn rank(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_rank(rank: u8) -> Option<Self> {
        match rank {
            1..=7 => Some(Self::ALL[rank as usize - 1]),
            _ => None,
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }

    pub fn category(self) -> Category {
        match self {
            Interrogative::Who
            | Interrogative::What
            | Interrogative::Which
            | Interrogative::Where => Category::Major,
            Interrogative::How | Interrogative::When => Category::Minor,
            Interrogative::Why => Category::Incidental,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Interrogative::Who => "who",
            Interrogative::What => "what",
            Interrogative::Which => "which",
            Interrogative::Where => "where",
            Interrogative::How => "how",
            Interrogative::Why => "why",
            Interrogative::When => "when",
        }
    }

    /// Capitalized form used in headings and generated prompts.
    pub fn title(self) -> &'static str {
        match self {
            Interrogative::Who => "Who",
            Interrogative::What => "What",
            Interrogative::Which => "Which",
            Interrogative::Where => "Where",
            Interrogative::How => "How",
            Interrogative::Why => "Why",
            Interrogative::When => "When",
        }
    }
}

impl fmt::Display for Interrogative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Interrogative {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|i| i.as_str() == lower)
            .ok_or_else(|| ModelError::UnknownInterrogative(s.to_string()))
    }
}

/// A set of interrogatives stored as a 7-bit mask.
///
/// Iteration yields members in rank order. Serialized as a list of names.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InterrogativeSet(u8);

impl InterrogativeSet {
    pub const EMPTY: InterrogativeSet = InterrogativeSet(0);
    pub const FULL: InterrogativeSet = InterrogativeSet(0b111_1111);

    pub fn new() -> Self {
        Self::EMPTY
    }

    pub fn from_bits(bits: u8) -> Self {
        Self(bits & Self::FULL.0)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn insert(&mut self, i: Interrogative) -> bool {
        let had = self.contains(i);
        self.0 |= 1 << i.index();
        !had
    }

    pub fn remove(&mut self, i: Interrogative) -> bool {
        let had = self.contains(i);
        self.0 &= !(1 << i.index());
        had
    }

    pub fn with(mut self, i: Interrogative) -> Self {
        self.insert(i);
        self
    }

    pub fn contains(self, i: Interrogative) -> bool {
        self.0 & (1 << i.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(self) -> impl Iterator<Item = Interrogative> {
        Interrogative::ALL
            .into_iter()
            .filter(move |i| self.contains(*i))
    }
}

impl FromIterator<Interrogative> for InterrogativeSet {
    fn from_iter<T: IntoIterator<Item = Interrogative>>(iter: T) -> Self {
        let mut set = Self::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl<const N: usize> From<[Interrogative; N]> for InterrogativeSet {
    fn from(items: [Interrogative; N]) -> Self {
        items.into_iter().collect()
    }
}

impl fmt::Debug for InterrogativeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for InterrogativeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(Interrogative::as_str).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

impl Serialize for InterrogativeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for InterrogativeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<Interrogative>::deserialize(deserializer)?;
        let set: InterrogativeSet = items.iter().copied().collect();
        if set.len() != items.len() {
            return Err(serde::de::Error::custom("duplicate interrogative in set"));
        }
        Ok(set)
    }
}
