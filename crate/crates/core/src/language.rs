//! Finite-support fuzzy languages and their algebra.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Alphabet, EventString};
use crate::error::{Error, Result};
use crate::grade::{parse_grade, Grade};

/// A fuzzy language with finite support: either empty, or grading ε at 1
/// with grades non-increasing along extensions. Only positive grades are
/// stored, so the key set is exactly the (prefix-closed) support.
#[derive(Clone, PartialEq, Eq)]
pub struct FuzzyLanguage {
    alphabet: Arc<Alphabet>,
    entries: BTreeMap<EventString, Grade>,
}

impl FuzzyLanguage {
    /// The empty fuzzy language `𝒪`.
    pub fn empty(alphabet: Arc<Alphabet>) -> FuzzyLanguage {
        FuzzyLanguage {
            alphabet,
            entries: BTreeMap::new(),
        }
    }

    /// Validating constructor. Zero grades are dropped; P1/P2 are enforced.
    pub fn build<I>(alphabet: Arc<Alphabet>, entries: I) -> Result<FuzzyLanguage>
    where
        I: IntoIterator<Item = (EventString, Grade)>,
    {
        let mut map = BTreeMap::new();
        for (s, grade) in entries {
            alphabet.check_string(&s)?;
            match map.entry(s) {
                Entry::Occupied(e) => return Err(Error::DuplicateString(e.key().to_string())),
                Entry::Vacant(e) => {
                    e.insert(grade);
                }
            }
        }
        map.retain(|_, g| g.is_positive());
        validate(&map)?;
        Ok(FuzzyLanguage { alphabet, entries: map })
    }

    /// Builds from `(string, grade)` text pairs, e.g. `[("eps", "1"), ("a", "0.9")]`.
    pub fn from_pairs(alphabet: Arc<Alphabet>, pairs: &[(&str, &str)]) -> Result<FuzzyLanguage> {
        let entries = pairs
            .iter()
            .map(|(s, g)| Ok((alphabet.parse_string(s)?, parse_grade(g)?)))
            .collect::<Result<Vec<_>>>()?;
        FuzzyLanguage::build(alphabet, entries)
    }

    /// For maps already known to be valid (outputs of this crate's algorithms).
    pub(crate) fn from_valid(alphabet: Arc<Alphabet>, mut entries: BTreeMap<EventString, Grade>) -> FuzzyLanguage {
        entries.retain(|_, g| g.is_positive());
        debug_assert!(validate(&entries).is_ok(), "internal language invariant broken");
        FuzzyLanguage { alphabet, entries }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Same entries over another alphabet with the same event set.
    pub fn with_alphabet(&self, alphabet: Arc<Alphabet>) -> Result<FuzzyLanguage> {
        if !self.alphabet.same_events(&alphabet) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(FuzzyLanguage {
            alphabet,
            entries: self.entries.clone(),
        })
    }

    /// `K(s)`; 0 outside the support.
    pub fn grade(&self, s: &EventString) -> Grade {
        self.entries.get(s).copied().unwrap_or(Grade::ZERO)
    }

    pub fn entries(&self) -> &BTreeMap<EventString, Grade> {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = &EventString> {
        self.entries.keys()
    }

    pub fn contains(&self, s: &EventString) -> bool {
        self.entries.contains_key(s)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Length of the longest string in the support (0 for `𝒪`).
    pub fn max_len(&self) -> usize {
        self.entries.keys().map(EventString::len).max().unwrap_or(0)
    }

    /// Whether every grade is 0 or 1.
    pub fn is_crisp(&self) -> bool {
        self.entries.values().all(Grade::is_one)
    }

    pub fn union(&self, other: &FuzzyLanguage) -> Result<FuzzyLanguage> {
        union(self, other)
    }

    pub fn intersection(&self, other: &FuzzyLanguage) -> Result<FuzzyLanguage> {
        intersection(self, other)
    }

    pub fn concatenation(&self, other: &FuzzyLanguage) -> Result<FuzzyLanguage> {
        concatenation(self, other)
    }

    pub fn is_sublanguage_of(&self, other: &FuzzyLanguage) -> Result<bool> {
        is_sublanguage(self, other)
    }

    /// First string where `self` exceeds `other`, if any.
    pub(crate) fn first_excess(&self, other: &FuzzyLanguage) -> Option<(&EventString, Grade, Grade)> {
        self.entries
            .iter()
            .map(|(s, g)| (s, *g, other.grade(s)))
            .find(|(_, a, b)| a > b)
    }
}

fn validate(map: &BTreeMap<EventString, Grade>) -> Result<()> {
    if map.is_empty() {
        return Ok(());
    }
    match map.get(&EventString::empty()) {
        Some(g) if g.is_one() => {}
        Some(g) => return Err(Error::P1Violation(g.to_string())),
        None => return Err(Error::P1Violation("0".into())),
    }
    for (s, grade) in map {
        let Some(parent) = s.parent() else { continue };
        let parent_grade = map.get(&parent).copied().unwrap_or(Grade::ZERO);
        if *grade > parent_grade {
            return Err(Error::P2Violation {
                string: s.to_string(),
                grade: grade.to_string(),
                prefix: parent.to_string(),
                prefix_grade: parent_grade.to_string(),
            });
        }
    }
    Ok(())
}

fn same_alphabet(a: &FuzzyLanguage, b: &FuzzyLanguage) -> Result<()> {
    if a.alphabet.same_events(&b.alphabet) {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// `build_language`
pub fn build_language<I>(alphabet: Arc<Alphabet>, entries: I) -> Result<FuzzyLanguage>
where
    I: IntoIterator<Item = (EventString, Grade)>,
{
    FuzzyLanguage::build(alphabet, entries)
}

/// Pointwise join.
pub fn union(a: &FuzzyLanguage, b: &FuzzyLanguage) -> Result<FuzzyLanguage> {
    same_alphabet(a, b)?;
    let mut out = a.entries.clone();
    for (s, g) in &b.entries {
        let slot = out.entry(s.clone()).or_insert(Grade::ZERO);
        *slot = slot.join(*g);
    }
    Ok(FuzzyLanguage::from_valid(a.alphabet.clone(), out))
}

/// Pointwise meet.
pub fn intersection(a: &FuzzyLanguage, b: &FuzzyLanguage) -> Result<FuzzyLanguage> {
    same_alphabet(a, b)?;
    let out = a.entries.iter().map(|(s, g)| (s.clone(), g.meet(b.grade(s)))).collect();
    Ok(FuzzyLanguage::from_valid(a.alphabet.clone(), out))
}

/// `(AB)(ω) = ∨{A(μ) ∧ B(ν) : μν = ω}`. Every ω with a positive grade splits
/// as μν with μ, ν in the supports, so those pairs are the whole candidate set.
pub fn concatenation(a: &FuzzyLanguage, b: &FuzzyLanguage) -> Result<FuzzyLanguage> {
    same_alphabet(a, b)?;
    let mut out: BTreeMap<EventString, Grade> = BTreeMap::new();
    for (mu, ga) in &a.entries {
        for (nu, gb) in &b.entries {
            let slot = out.entry(mu.concat(nu)).or_insert(Grade::ZERO);
            *slot = slot.join(ga.meet(*gb));
        }
    }
    Ok(FuzzyLanguage::from_valid(a.alphabet.clone(), out))
}

/// `A ⊆ B` pointwise.
pub fn is_sublanguage(a: &FuzzyLanguage, b: &FuzzyLanguage) -> Result<bool> {
    same_alphabet(a, b)?;
    Ok(a.first_excess(b).is_none())
}

/// Minimal P1/P2 completion of arbitrary entries: every string is raised to
/// the join of its own grade and the grades of all listed extensions, missing
/// prefixes are added, and ε is set to 1.
pub fn prefix_close_repair<I>(alphabet: Arc<Alphabet>, entries: I) -> Result<FuzzyLanguage>
where
    I: IntoIterator<Item = (EventString, Grade)>,
{
    let mut out: BTreeMap<EventString, Grade> = BTreeMap::new();
    for (s, grade) in entries {
        alphabet.check_string(&s)?;
        if grade.is_zero() {
            continue;
        }
        for prefix in s.prefixes() {
            let slot = out.entry(prefix).or_insert(Grade::ZERO);
            *slot = slot.join(grade);
        }
    }
    if let Some(eps) = out.get_mut(&EventString::empty()) {
        *eps = Grade::ONE;
    }
    Ok(FuzzyLanguage::from_valid(alphabet, out))
}

impl fmt::Debug for FuzzyLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Zadeh-style `{eps:1, a:0.9, a.b:0.8}`.
impl fmt::Display for FuzzyLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, g)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}:{g}")?;
        }
        f.write_str("}")
    }
}
