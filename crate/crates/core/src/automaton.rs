//! Max-min fuzzy automata.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::alphabet::{Alphabet, EventId, EventString};
use crate::error::{Error, Result};
use crate::grade::Grade;
use crate::language::FuzzyLanguage;

/// `G = (Q, E, δ, q₀)` with `δ : Q × E × Q → [0,1]`. Only positive
/// transition grades are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzyAutomaton {
    alphabet: Arc<Alphabet>,
    states: Vec<String>,
    index: BTreeMap<String, usize>,
    initial: usize,
    /// `out[p][event]` lists `(q, δ(p, event, q))`.
    out: Vec<BTreeMap<EventId, Vec<(usize, Grade)>>>,
}

fn valid_state_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.')
}

impl FuzzyAutomaton {
    pub fn new<S, T>(alphabet: Arc<Alphabet>, states: S, initial: &str, transitions: T) -> Result<FuzzyAutomaton>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        T: IntoIterator<Item = (String, EventId, String, Grade)>,
    {
        let mut names = Vec::new();
        let mut index = BTreeMap::new();
        for name in states {
            let name: String = name.into();
            if !valid_state_name(&name) {
                return Err(Error::Syntax(format!("invalid state name `{name}`")));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::DuplicateState(name));
            }
            names.push(name);
        }
        let initial = *index
            .get(initial)
            .ok_or_else(|| Error::UnknownState(initial.to_string()))?;
        let mut out: Vec<BTreeMap<EventId, Vec<(usize, Grade)>>> = vec![BTreeMap::new(); names.len()];
        let mut seen = BTreeSet::new();
        for (from, event, to, grade) in transitions {
            let p = *index.get(&from).ok_or_else(|| Error::UnknownState(from.clone()))?;
            let q = *index.get(&to).ok_or_else(|| Error::UnknownState(to.clone()))?;
            if !alphabet.contains(&event) {
                return Err(Error::UnknownEvent(event.to_string()));
            }
            if !seen.insert((p, event.clone(), q)) {
                return Err(Error::Syntax(format!("transition {from} {event} {to} listed twice")));
            }
            if grade.is_positive() {
                out[p].entry(event).or_default().push((q, grade));
            }
        }
        for row in &mut out {
            for targets in row.values_mut() {
                targets.sort();
            }
        }
        Ok(FuzzyAutomaton {
            alphabet,
            states: names,
            index,
            initial,
            out,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> &str {
        &self.states[self.initial]
    }

    /// `δ(p, a, q)` for a single event.
    pub fn transition(&self, p: &str, event: &EventId, q: &str) -> Result<Grade> {
        let p = self.state(p)?;
        let q = self.state(q)?;
        Ok(self.out[p]
            .get(event)
            .and_then(|ts| ts.iter().find(|(t, _)| *t == q))
            .map(|(_, g)| *g)
            .unwrap_or(Grade::ZERO))
    }

    /// Every stored transition as `(from, event, to, grade)`, sorted by state
    /// declaration order then event.
    pub fn transitions(&self) -> impl Iterator<Item = (&str, &EventId, &str, Grade)> {
        self.out.iter().enumerate().flat_map(move |(p, row)| {
            row.iter().flat_map(move |(e, targets)| {
                targets
                    .iter()
                    .map(move |(q, g)| (self.states[p].as_str(), e, self.states[*q].as_str(), *g))
            })
        })
    }

    fn state(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    /// One max-min step: `v'(q) = ∨_r v(r) ∧ δ(r, a, q)`.
    fn step(&self, vector: &[Grade], event: &EventId) -> Vec<Grade> {
        let mut next = vec![Grade::ZERO; self.states.len()];
        for (r, from) in vector.iter().enumerate() {
            if from.is_zero() {
                continue;
            }
            if let Some(targets) = self.out[r].get(event) {
                for (q, grade) in targets {
                    next[*q] = next[*q].join(from.meet(*grade));
                }
            }
        }
        next
    }

    /// Extended transition `δ(p, w, q)`.
    pub fn extended_transition(&self, p: &str, w: &EventString, q: &str) -> Result<Grade> {
        let p = self.state(p)?;
        let q = self.state(q)?;
        self.alphabet.check_string(w)?;
        let mut vector = vec![Grade::ZERO; self.states.len()];
        vector[p] = Grade::ONE;
        for event in w.events() {
            vector = self.step(&vector, event);
        }
        Ok(vector[q])
    }

    /// `𝓛(G)` restricted to strings of length at most `horizon`.
    ///
    /// Breadth-first over strings, carrying each string's state-possibility
    /// vector; strings whose vector is all zero have no positive extension and
    /// are dropped.
    pub fn generated_language(&self, horizon: usize) -> FuzzyLanguage {
        let mut entries = BTreeMap::new();
        let mut start = vec![Grade::ZERO; self.states.len()];
        start[self.initial] = Grade::ONE;
        entries.insert(EventString::empty(), Grade::ONE);
        let mut frontier = vec![(EventString::empty(), start)];
        for _ in 0..horizon {
            let mut next = Vec::new();
            for (s, vector) in &frontier {
                for event in self.alphabet.events() {
                    let v = self.step(vector, event);
                    let grade = Grade::join_all(v.iter().copied());
                    if grade.is_positive() {
                        let sa = s.extended(event);
                        entries.insert(sa.clone(), grade);
                        next.push((sa, v));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        FuzzyLanguage::from_valid(self.alphabet.clone(), entries)
    }
}

/// The tree automaton of a language: states are the support (named by their
/// string text), the initial state is ε, and `δ(μ, a, μa) = K(μa)`.
pub fn automaton_from_language(k: &FuzzyLanguage) -> Result<FuzzyAutomaton> {
    if k.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let states: Vec<String> = k.support().map(ToString::to_string).collect();
    let transitions: Vec<_> = k
        .entries()
        .iter()
        .filter_map(|(s, grade)| {
            let parent = s.parent()?;
            let event = s.last()?.clone();
            Some((parent.to_string(), event, s.to_string(), *grade))
        })
        .collect();
    FuzzyAutomaton::new(k.alphabet().clone(), states, "eps", transitions)
}
