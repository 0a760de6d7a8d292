//! Controllability, (strong) observability, normality and co-observability
//! checks. Each returns a [`CheckReport`] whose witnesses pin down the
//! violated equation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::alphabet::{Alphabet, EventId, EventString};
use crate::error::{Error, Result};
use crate::grade::Grade;
use crate::language::FuzzyLanguage;
use crate::observation::{project_language, Projection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Controllable,
    Observable,
    StronglyObservable,
    Normal,
    Coobservable,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Controllable => "controllability",
            Property::Observable => "observability",
            Property::StronglyObservable => "strong observability",
            Property::Normal => "normality",
            Property::Coobservable => "co-observability",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessKind {
    Controllability,
    Observability,
    StrongObsCond1,
    StrongObsCond2,
    Normality,
    CoobsCase1,
    CoobsCase2,
    CoobsCase3,
}

impl WitnessKind {
    pub fn code(&self) -> &'static str {
        match self {
            WitnessKind::Controllability => "CONTROLLABILITY",
            WitnessKind::Observability => "OBSERVABILITY",
            WitnessKind::StrongObsCond1 => "STRONG_OBS_COND1",
            WitnessKind::StrongObsCond2 => "STRONG_OBS_COND2",
            WitnessKind::Normality => "NORMALITY",
            WitnessKind::CoobsCase1 => "COOBS_CASE1",
            WitnessKind::CoobsCase2 => "COOBS_CASE2",
            WitnessKind::CoobsCase3 => "COOBS_CASE3",
        }
    }
}

/// One violated equation.
///
/// `strings` holds the offending `s` (and `s'` for pairwise conditions);
/// `lhs`/`rhs` are the two sides that differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub strings: Vec<EventString>,
    pub event: Option<EventId>,
    pub lhs: Grade,
    pub rhs: Grade,
    pub projection_class: Vec<EventString>,
    /// The class join `x*` used on the right-hand side, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_join: Option<Grade>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strings: Vec<String> = self.strings.iter().map(ToString::to_string).collect();
        write!(f, "{} strings=[{}]", self.kind.code(), strings.join(", "))?;
        if let Some(e) = &self.event {
            write!(f, " event={e}")?;
        }
        write!(f, " lhs={} rhs={}", self.lhs, self.rhs)?;
        if let Some(x) = self.class_join {
            write!(f, " class_join={x}")?;
        }
        if !self.projection_class.is_empty() {
            let class: Vec<String> = self.projection_class.iter().map(ToString::to_string).collect();
            write!(f, " class={{{}}}", class.join(", "))?;
        }
        Ok(())
    }
}

/// Verdict plus witnesses; `holds` iff there are no witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub property: Property,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    fn from_witnesses(property: Property, witnesses: Vec<Witness>) -> CheckReport {
        CheckReport {
            property,
            holds: witnesses.is_empty(),
            witnesses,
        }
    }
}

/// A local supervisor's view: what it observes and which events it controls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Site {
    pub projection: Projection,
    pub controllable: BTreeSet<EventId>,
}

impl Site {
    /// Both sites declared on the alphabet.
    pub fn pair_of(alphabet: &Arc<Alphabet>) -> Result<[Site; 2]> {
        let specs = alphabet.sites().ok_or(Error::MissingSites)?;
        let site = |i: usize| Site {
            projection: Projection::new(alphabet.clone(), specs[i].observable.clone())
                .expect("site observables are validated against the alphabet"),
            controllable: specs[i].controllable.clone(),
        };
        Ok([site(0), site(1)])
    }
}

/// `K ⊆ L` over the same events, or the appropriate error.
pub(crate) fn require_sublanguage(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<()> {
    if !k.alphabet().same_events(l.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    match k.first_excess(l) {
        Some((s, a, b)) => Err(Error::NotSublanguage {
            string: s.to_string(),
            lhs: a.to_string(),
            rhs: b.to_string(),
        }),
        None => Ok(()),
    }
}

fn require_projection(pr: &Projection, l: &FuzzyLanguage) -> Result<()> {
    if pr.alphabet().same_events(l.alphabet()) {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// `K(sa) = K(s) ∧ L(sa)` for every `s ∈ supp(K)` and uncontrollable `a`.
pub fn is_controllable(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<CheckReport> {
    require_sublanguage(k, l)?;
    let uncontrollable = l.alphabet().uncontrollable();
    let mut witnesses = Vec::new();
    for (s, ks) in k.entries() {
        for a in &uncontrollable {
            let sa = s.extended(a);
            let lsa = l.grade(&sa);
            if lsa.is_zero() {
                continue;
            }
            let lhs = k.grade(&sa);
            let rhs = ks.meet(lsa);
            if lhs != rhs {
                witnesses.push(Witness {
                    kind: WitnessKind::Controllability,
                    strings: vec![s.clone()],
                    event: Some(a.clone()),
                    lhs,
                    rhs,
                    projection_class: Vec::new(),
                    class_join: None,
                });
            }
        }
    }
    Ok(CheckReport::from_witnesses(Property::Controllable, witnesses))
}

/// Observability via class joins: for each projection class `C` of
/// `supp(K)` and controllable `a`, with `x* = ∨_{t∈C} K(ta)`, every member
/// must satisfy `K(s'a) = K(s') ∧ L(s'a) ∧ x*`. The first failing member per
/// (class, event) is reported.
pub fn is_observable(
    k: &FuzzyLanguage,
    l: &FuzzyLanguage,
    pr: &Projection,
    controllables: &BTreeSet<EventId>,
) -> Result<CheckReport> {
    require_sublanguage(k, l)?;
    require_projection(pr, l)?;
    let mut witnesses = Vec::new();
    for class in pr.classes(k.support()).values() {
        for a in controllables {
            let x_star = Grade::join_all(class.iter().map(|t| k.grade(&t.extended(a))));
            let violation = class.iter().find_map(|s| {
                let sa = s.extended(a);
                let lhs = k.grade(&sa);
                let rhs = k.grade(s).meet(l.grade(&sa)).meet(x_star);
                (lhs != rhs).then_some((s, lhs, rhs))
            });
            if let Some((s, lhs, rhs)) = violation {
                witnesses.push(Witness {
                    kind: WitnessKind::Observability,
                    strings: vec![s.clone()],
                    event: Some(a.clone()),
                    lhs,
                    rhs,
                    projection_class: class.clone(),
                    class_join: Some(x_star),
                });
            }
        }
    }
    witnesses.sort_by(|x, y| (&x.strings, &x.event).cmp(&(&y.strings, &y.event)));
    Ok(CheckReport::from_witnesses(Property::Observable, witnesses))
}

/// Strong observability through its pairwise characterization: for
/// same-class `s, s'` and controllable `a` with `sa, s'a ∈ supp(L)`,
/// (1) `s` is tight iff `s'` is tight, where tight means
/// `K(sa) = K(s) ∧ L(sa)`, and (2) `K(sa) = K(s'a)`.
pub fn is_strongly_observable(
    k: &FuzzyLanguage,
    l: &FuzzyLanguage,
    pr: &Projection,
    controllables: &BTreeSet<EventId>,
) -> Result<CheckReport> {
    require_sublanguage(k, l)?;
    require_projection(pr, l)?;
    let mut witnesses = Vec::new();
    for class in pr.classes(k.support()).values() {
        for a in controllables {
            // (string, K(sa), K(s) ∧ L(sa)) for members with sa ∈ supp(L)
            let members: Vec<_> = class
                .iter()
                .filter_map(|s| {
                    let sa = s.extended(a);
                    let lsa = l.grade(&sa);
                    lsa.is_positive().then(|| (s, k.grade(&sa), k.grade(s).meet(lsa)))
                })
                .collect();
            'pairs: for (i, (s, ksa, cs)) in members.iter().enumerate() {
                for (t, kta, ct) in &members[i + 1..] {
                    let (s_tight, t_tight) = (ksa == cs, kta == ct);
                    let witness = if s_tight != t_tight {
                        let (tight, loose, loose_lhs, loose_rhs) =
                            if s_tight { (s, t, kta, ct) } else { (t, s, ksa, cs) };
                        Some(Witness {
                            kind: WitnessKind::StrongObsCond1,
                            strings: vec![(*tight).clone(), (*loose).clone()],
                            event: Some(a.clone()),
                            lhs: *loose_lhs,
                            rhs: *loose_rhs,
                            projection_class: class.clone(),
                            class_join: None,
                        })
                    } else if ksa != kta {
                        Some(Witness {
                            kind: WitnessKind::StrongObsCond2,
                            strings: vec![(*s).clone(), (*t).clone()],
                            event: Some(a.clone()),
                            lhs: *ksa,
                            rhs: *kta,
                            projection_class: class.clone(),
                            class_join: None,
                        })
                    } else {
                        None
                    };
                    if let Some(w) = witness {
                        witnesses.push(w);
                        break 'pairs;
                    }
                }
            }
        }
    }
    witnesses.sort_by(|x, y| (&x.strings, &x.event).cmp(&(&y.strings, &y.event)));
    Ok(CheckReport::from_witnesses(Property::StronglyObservable, witnesses))
}

/// `K = 𝒫⁻¹[𝒫(K)] ∩ L`, checked on `supp(L)`. Reports the first mismatch in
/// each projection class of `supp(L)`.
pub fn is_normal(k: &FuzzyLanguage, l: &FuzzyLanguage, pr: &Projection) -> Result<CheckReport> {
    require_sublanguage(k, l)?;
    require_projection(pr, l)?;
    let projected = project_language(pr, k);
    let mut witnesses = Vec::new();
    for (observed, class) in pr.classes(l.support()) {
        let bound = projected.grade(&observed);
        let violation = class.iter().find_map(|s| {
            let lhs = k.grade(s);
            let rhs = bound.meet(l.grade(s));
            (lhs != rhs).then_some((s, lhs, rhs))
        });
        if let Some((s, lhs, rhs)) = violation {
            witnesses.push(Witness {
                kind: WitnessKind::Normality,
                strings: vec![s.clone()],
                event: None,
                lhs,
                rhs,
                projection_class: class.clone(),
                class_join: Some(bound),
            });
        }
    }
    witnesses.sort_by(|x, y| x.strings.cmp(&y.strings));
    Ok(CheckReport::from_witnesses(Property::Normal, witnesses))
}

/// `(P_i(s), a) ↦ ∨{K(s_i a) : s_i ∈ supp(K), P_i(s_i) = P_i(s)}`.
pub(crate) fn class_joins(
    k: &FuzzyLanguage,
    pr: &Projection,
    events: &BTreeSet<EventId>,
) -> BTreeMap<(EventString, EventId), Grade> {
    let mut joins: BTreeMap<(EventString, EventId), Grade> = BTreeMap::new();
    for s in k.support() {
        let observed = pr.apply(s);
        for a in events {
            let slot = joins.entry((observed.clone(), a.clone())).or_insert(Grade::ZERO);
            *slot = slot.join(k.grade(&s.extended(a)));
        }
    }
    joins
}

pub(crate) fn require_site_cover(l: &FuzzyLanguage, sites: &[Site; 2]) -> Result<()> {
    let alphabet = l.alphabet();
    for (i, site) in sites.iter().enumerate() {
        require_projection(&site.projection, l)?;
        if let Some(e) = site.controllable.difference(alphabet.controllable()).next() {
            return Err(Error::SiteCoverViolation(format!(
                "site {} controls `{e}`, which is not controllable",
                i + 1
            )));
        }
    }
    let covered: BTreeSet<_> = sites[0].controllable.union(&sites[1].controllable).cloned().collect();
    if &covered != alphabet.controllable() {
        return Err(Error::SiteCoverViolation(
            "site controllable sets do not cover the controllable events".into(),
        ));
    }
    Ok(())
}

/// Two-site co-observability: for `s ∈ supp(K)` and `a ∈ E_1c ∪ E_2c`,
/// `K(sa) = K(s) ∧ L(sa) ∧ J` where `J` is the meet of the class joins of
/// the sites that control `a`.
pub fn is_coobservable(k: &FuzzyLanguage, l: &FuzzyLanguage, sites: &[Site; 2]) -> Result<CheckReport> {
    require_sublanguage(k, l)?;
    require_site_cover(l, sites)?;
    let joins = [
        class_joins(k, &sites[0].projection, &sites[0].controllable),
        class_joins(k, &sites[1].projection, &sites[1].controllable),
    ];
    let controlled: BTreeSet<_> = sites[0].controllable.union(&sites[1].controllable).cloned().collect();
    let mut witnesses = Vec::new();
    for (s, ks) in k.entries() {
        let observed = [sites[0].projection.apply(s), sites[1].projection.apply(s)];
        for a in &controlled {
            let sa = s.extended(a);
            let mut rhs = ks.meet(l.grade(&sa));
            let mut class = Vec::new();
            for i in 0..2 {
                if sites[i].controllable.contains(a) {
                    rhs = rhs.meet(joins[i][&(observed[i].clone(), a.clone())]);
                    class.push(observed[i].clone());
                }
            }
            let lhs = k.grade(&sa);
            if lhs != rhs {
                let kind = match (sites[0].controllable.contains(a), sites[1].controllable.contains(a)) {
                    (true, true) => WitnessKind::CoobsCase1,
                    (true, false) => WitnessKind::CoobsCase2,
                    _ => WitnessKind::CoobsCase3,
                };
                witnesses.push(Witness {
                    kind,
                    strings: vec![s.clone()],
                    event: Some(a.clone()),
                    lhs,
                    rhs,
                    // the observations P_i(s) of the deciding sites
                    projection_class: class,
                    class_join: None,
                });
            }
        }
    }
    Ok(CheckReport::from_witnesses(Property::Coobservable, witnesses))
}
