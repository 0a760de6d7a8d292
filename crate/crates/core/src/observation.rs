//! Natural projection and its fuzzy lifting.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::alphabet::{Alphabet, EventId, EventString};
use crate::error::{Error, Result};
use crate::grade::Grade;
use crate::language::FuzzyLanguage;

/// Natural projection `P : E* → E_o*` for a chosen observable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    alphabet: Arc<Alphabet>,
    observable: BTreeSet<EventId>,
}

impl Projection {
    pub fn new(alphabet: Arc<Alphabet>, observable: BTreeSet<EventId>) -> Result<Projection> {
        if let Some(e) = observable.iter().find(|e| !alphabet.contains(e)) {
            return Err(Error::UnknownEvent(e.to_string()));
        }
        Ok(Projection { alphabet, observable })
    }

    /// The projection onto the alphabet's own `E_o`.
    pub fn of_alphabet(alphabet: &Arc<Alphabet>) -> Projection {
        Projection {
            observable: alphabet.observable().clone(),
            alphabet: alphabet.clone(),
        }
    }

    /// The projection of site `index` (0 or 1).
    pub fn of_site(alphabet: &Arc<Alphabet>, index: usize) -> Result<Projection> {
        let sites = alphabet.sites().ok_or(Error::MissingSites)?;
        Ok(Projection {
            observable: sites[index].observable.clone(),
            alphabet: alphabet.clone(),
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn observable(&self) -> &BTreeSet<EventId> {
        &self.observable
    }

    pub fn observes(&self, e: &EventId) -> bool {
        self.observable.contains(e)
    }

    /// `P(s)` without alphabet checks; callers pass strings from validated
    /// languages.
    pub fn apply(&self, s: &EventString) -> EventString {
        EventString::from_events(
            s.events()
                .iter()
                .filter(|e| self.observable.contains(*e))
                .cloned()
                .collect(),
        )
    }

    /// Groups strings by projection; members stay in canonical order.
    pub fn classes<'a, I>(&self, strings: I) -> BTreeMap<EventString, Vec<EventString>>
    where
        I: IntoIterator<Item = &'a EventString>,
    {
        let mut classes: BTreeMap<EventString, Vec<EventString>> = BTreeMap::new();
        for s in strings {
            classes.entry(self.apply(s)).or_default().push(s.clone());
        }
        for members in classes.values_mut() {
            members.sort();
        }
        classes
    }

    /// The alphabet of projected strings.
    pub fn observed_alphabet(&self) -> Arc<Alphabet> {
        Arc::new(self.alphabet.restricted(&self.observable))
    }
}

/// `P(s)`: erase unobservable events.
pub fn project_string(pr: &Projection, s: &EventString) -> Result<EventString> {
    pr.alphabet.check_string(s)?;
    Ok(pr.apply(s))
}

/// `𝒫(K)(ω) = ∨{K(ω') : P(ω') = ω}`, a language over the observed alphabet.
pub fn project_language(pr: &Projection, k: &FuzzyLanguage) -> FuzzyLanguage {
    let mut out: BTreeMap<EventString, Grade> = BTreeMap::new();
    for (s, grade) in k.entries() {
        let slot = out.entry(pr.apply(s)).or_insert(Grade::ZERO);
        *slot = slot.join(*grade);
    }
    FuzzyLanguage::from_valid(pr.observed_alphabet(), out)
}

/// `𝒫⁻¹(M) ∩ L`, i.e. `ω ↦ M(P(ω)) ∧ L(ω)`, evaluated on `supp(L)`.
pub fn inverse_project_meet(pr: &Projection, m: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<FuzzyLanguage> {
    if !pr.alphabet.same_events(l.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    if let Some(e) = m.alphabet().events().iter().find(|e| !pr.observes(e)) {
        return Err(Error::UnknownEvent(e.to_string()));
    }
    let out = l
        .entries()
        .iter()
        .map(|(s, grade)| (s.clone(), m.grade(&pr.apply(s)).meet(*grade)))
        .collect();
    Ok(FuzzyLanguage::from_valid(l.alphabet().clone(), out))
}
