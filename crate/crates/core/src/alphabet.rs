//! Events, event strings and alphabets with their controllable/observable
//! partitions and optional two-site decentralized split.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Text used for the empty string in files and reports.
pub const EPSILON: &str = "eps";

/// An event name: non-empty, made of ASCII letters, digits and `_`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId(Arc<str>);

impl EventId {
    pub fn new(name: &str) -> Result<EventId> {
        let valid = !name.is_empty() && name != EPSILON && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_');
        if !valid {
            return Err(Error::InvalidEventName(name.to_string()));
        }
        Ok(EventId(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for EventId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

/// A finite sequence of events. Ordered by length first, then
/// lexicographically by event name, which is the canonical order used for
/// every emitted table and witness list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EventString(Vec<EventId>);

impl EventString {
    pub fn empty() -> EventString {
        EventString(Vec::new())
    }

    pub fn from_events(events: Vec<EventId>) -> EventString {
        EventString(events)
    }

    pub fn events(&self) -> &[EventId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self · event`
    pub fn extended(&self, event: &EventId) -> EventString {
        let mut events = Vec::with_capacity(self.0.len() + 1);
        events.extend_from_slice(&self.0);
        events.push(event.clone());
        EventString(events)
    }

    pub fn concat(&self, other: &EventString) -> EventString {
        let mut events = self.0.clone();
        events.extend_from_slice(&other.0);
        EventString(events)
    }

    /// The string without its last event; `None` for ε.
    pub fn parent(&self) -> Option<EventString> {
        if self.0.is_empty() {
            None
        } else {
            Some(EventString(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last(&self) -> Option<&EventId> {
        self.0.last()
    }

    /// All prefixes, shortest (ε) first, including `self`.
    pub fn prefixes(&self) -> impl Iterator<Item = EventString> + '_ {
        (0..=self.0.len()).map(move |n| EventString(self.0[..n].to_vec()))
    }

    /// Parses `eps` or dot-separated event names without alphabet checks.
    pub fn parse_unchecked(text: &str) -> Result<EventString> {
        if text == EPSILON {
            return Ok(EventString::empty());
        }
        text.split('.')
            .map(EventId::new)
            .collect::<Result<Vec<_>>>()
            .map(EventString)
    }
}

impl Ord for EventString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for EventString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EventString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(EPSILON);
        }
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(e.as_str())?;
        }
        Ok(())
    }
}

impl fmt::Debug for EventString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for EventString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Controllable and observable event sets of one local supervisor.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SiteSpec {
    pub controllable: BTreeSet<EventId>,
    pub observable: BTreeSet<EventId>,
}

/// Event set `E` with `E_c`, `E_o`, and optionally exactly two sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    events: BTreeSet<EventId>,
    controllable: BTreeSet<EventId>,
    observable: BTreeSet<EventId>,
    sites: Option<[SiteSpec; 2]>,
}

impl Alphabet {
    pub fn new(
        events: BTreeSet<EventId>,
        controllable: BTreeSet<EventId>,
        observable: BTreeSet<EventId>,
    ) -> Result<Alphabet> {
        for e in controllable.iter().chain(&observable) {
            if !events.contains(e) {
                return Err(Error::UnknownEvent(e.to_string()));
            }
        }
        Ok(Alphabet {
            events,
            controllable,
            observable,
            sites: None,
        })
    }

    /// Convenience constructor from event names.
    pub fn from_names(events: &[&str], controllable: &[&str], observable: &[&str]) -> Result<Alphabet> {
        let set = |names: &[&str]| names.iter().map(|n| EventId::new(n)).collect::<Result<BTreeSet<_>>>();
        let mut all = BTreeSet::new();
        for name in events {
            if !all.insert(EventId::new(name)?) {
                return Err(Error::DuplicateEvent(name.to_string()));
            }
        }
        Alphabet::new(all, set(controllable)?, set(observable)?)
    }

    /// Attaches the two-site split. Each site's sets must lie within the
    /// global ones and together cover them.
    pub fn with_sites(mut self, sites: [SiteSpec; 2]) -> Result<Alphabet> {
        for (i, site) in sites.iter().enumerate() {
            for e in site.controllable.iter().chain(&site.observable) {
                if !self.events.contains(e) {
                    return Err(Error::UnknownEvent(e.to_string()));
                }
            }
            if let Some(e) = site.controllable.difference(&self.controllable).next() {
                return Err(Error::SiteCoverViolation(format!(
                    "site {} controls `{e}`, which is not controllable",
                    i + 1
                )));
            }
            if let Some(e) = site.observable.difference(&self.observable).next() {
                return Err(Error::SiteCoverViolation(format!(
                    "site {} observes `{e}`, which is not observable",
                    i + 1
                )));
            }
        }
        let ctrl: BTreeSet<_> = sites[0].controllable.union(&sites[1].controllable).cloned().collect();
        if ctrl != self.controllable {
            return Err(Error::SiteCoverViolation(
                "site controllable sets do not cover the controllable events".into(),
            ));
        }
        let obs: BTreeSet<_> = sites[0].observable.union(&sites[1].observable).cloned().collect();
        if obs != self.observable {
            return Err(Error::SiteCoverViolation(
                "site observable sets do not cover the observable events".into(),
            ));
        }
        self.sites = Some(sites);
        Ok(self)
    }

    pub fn events(&self) -> &BTreeSet<EventId> {
        &self.events
    }

    pub fn controllable(&self) -> &BTreeSet<EventId> {
        &self.controllable
    }

    pub fn observable(&self) -> &BTreeSet<EventId> {
        &self.observable
    }

    pub fn uncontrollable(&self) -> BTreeSet<EventId> {
        self.events.difference(&self.controllable).cloned().collect()
    }

    pub fn unobservable(&self) -> BTreeSet<EventId> {
        self.events.difference(&self.observable).cloned().collect()
    }

    pub fn sites(&self) -> Option<&[SiteSpec; 2]> {
        self.sites.as_ref()
    }

    pub fn is_controllable(&self, e: &EventId) -> bool {
        self.controllable.contains(e)
    }

    pub fn contains(&self, e: &EventId) -> bool {
        self.events.contains(e)
    }

    /// Languages over alphabets with the same event set are compatible.
    pub fn same_events(&self, other: &Alphabet) -> bool {
        self.events == other.events
    }

    /// The alphabet `E_o` seen through a projection: events, controllables
    /// and observables all restricted to `observable`.
    pub fn restricted(&self, observable: &BTreeSet<EventId>) -> Alphabet {
        let keep = |s: &BTreeSet<EventId>| s.intersection(observable).cloned().collect();
        Alphabet {
            events: keep(&self.events),
            controllable: keep(&self.controllable),
            observable: keep(&self.observable),
            sites: None,
        }
    }

    pub fn event(&self, name: &str) -> Result<EventId> {
        let id = EventId::new(name)?;
        if self.events.contains(&id) {
            Ok(id)
        } else {
            Err(Error::UnknownEvent(name.to_string()))
        }
    }

    /// Parses `eps` or `a.c.d`, rejecting events outside the alphabet.
    pub fn parse_string(&self, text: &str) -> Result<EventString> {
        let s = EventString::parse_unchecked(text)?;
        self.check_string(&s)?;
        Ok(s)
    }

    pub fn check_string(&self, s: &EventString) -> Result<()> {
        match s.events().iter().find(|e| !self.events.contains(*e)) {
            Some(e) => Err(Error::UnknownEvent(e.to_string())),
            None => Ok(()),
        }
    }

    pub fn into_shared(self) -> Arc<Alphabet> {
        Arc::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(names: &[&str]) -> BTreeSet<EventId> {
        names.iter().map(|n| EventId::new(n).unwrap()).collect()
    }

    #[test]
    fn event_names() {
        assert!(EventId::new("a_1").is_ok());
        assert_eq!(EventId::new("").unwrap_err().code(), "INVALID_EVENT_NAME");
        assert_eq!(EventId::new("a-b").unwrap_err().code(), "INVALID_EVENT_NAME");
        assert_eq!(EventId::new("eps").unwrap_err().code(), "INVALID_EVENT_NAME");
    }

    #[test]
    fn strings_parse_and_order() {
        let a = Alphabet::from_names(&["a", "b", "c", "d"], &["a", "b", "c"], &["a", "b", "d"]).unwrap();
        let s = a.parse_string("a.c.d").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_string(), "a.c.d");
        assert_eq!(a.parse_string("eps").unwrap(), EventString::empty());
        assert_eq!(a.parse_string("a.x").unwrap_err().code(), "UNKNOWN_EVENT");
        assert_eq!(a.parse_string("a..b").unwrap_err().code(), "INVALID_EVENT_NAME");

        let mut v: Vec<_> = ["b", "a.c", "eps", "a", "a.b"]
            .iter()
            .map(|t| a.parse_string(t).unwrap())
            .collect();
        v.sort();
        let shown: Vec<_> = v.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["eps", "a", "b", "a.b", "a.c"]);
        assert_eq!(s.parent().unwrap().to_string(), "a.c");
        assert_eq!(s.prefixes().count(), 4);
    }

    #[test]
    fn derived_sets() {
        let a = Alphabet::from_names(&["a", "b", "c", "d"], &["a", "b", "c"], &["a", "b", "d"]).unwrap();
        assert_eq!(a.uncontrollable(), ids(&["d"]));
        assert_eq!(a.unobservable(), ids(&["c"]));
        assert_eq!(
            Alphabet::from_names(&["a"], &["z"], &[]).unwrap_err().code(),
            "UNKNOWN_EVENT"
        );
        assert_eq!(
            Alphabet::from_names(&["a", "a"], &[], &[]).unwrap_err().code(),
            "DUPLICATE_EVENT"
        );
    }

    #[test]
    fn site_validation() {
        let base = Alphabet::from_names(&["a1", "a2", "b1"], &["a1", "a2"], &["a1", "a2", "b1"]).unwrap();
        let site = |c: &[&str], o: &[&str]| SiteSpec {
            controllable: ids(c),
            observable: ids(o),
        };

        let ok = base
            .clone()
            .with_sites([site(&["a1"], &["a1", "b1"]), site(&["a2"], &["a2"])]);
        assert!(ok.is_ok());

        let uncovered = base
            .clone()
            .with_sites([site(&["a1"], &["a1", "b1"]), site(&["a1"], &["a2"])]);
        assert_eq!(uncovered.unwrap_err().code(), "SITE_COVER_VIOLATION");

        let outside = base.with_sites([site(&["a1", "b1"], &["a1", "b1"]), site(&["a2"], &["a2"])]);
        assert_eq!(outside.unwrap_err().code(), "SITE_COVER_VIOLATION");
    }
}
