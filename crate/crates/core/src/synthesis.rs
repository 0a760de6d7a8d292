//! Supervisor synthesis and closed-loop languages, centralized and
//! two-site decentralized.

use std::collections::{BTreeMap, BTreeSet};

use crate::alphabet::{EventId, EventString};
use crate::error::{Error, Result};
use crate::grade::Grade;
use crate::language::FuzzyLanguage;
use crate::observation::Projection;
use crate::predicates::{
    class_joins, is_controllable, is_coobservable, is_observable, require_site_cover, require_sublanguage, Site,
};

/// A partially observable fuzzy supervisor: observed string → enable grade
/// per event. Rows are dense, and events outside `controllable` are pinned
/// to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzySupervisor {
    projection: Projection,
    controllable: BTreeSet<EventId>,
    table: BTreeMap<EventString, BTreeMap<EventId, Grade>>,
}

impl FuzzySupervisor {
    /// Builds a supervisor from sparse rows. Missing controllable entries
    /// become 0 and missing uncontrollable entries become 1; an explicit
    /// uncontrollable entry other than 1 is rejected.
    pub fn new<R>(projection: Projection, controllable: BTreeSet<EventId>, rows: R) -> Result<FuzzySupervisor>
    where
        R: IntoIterator<Item = (EventString, BTreeMap<EventId, Grade>)>,
    {
        let alphabet = projection.alphabet().clone();
        if let Some(e) = controllable.iter().find(|e| !alphabet.contains(e)) {
            return Err(Error::UnknownEvent(e.to_string()));
        }
        let mut table = BTreeMap::new();
        for (observed, sparse) in rows {
            alphabet.check_string(&observed)?;
            if let Some(e) = observed.events().iter().find(|e| !projection.observes(e)) {
                return Err(Error::UnknownEvent(format!("{e} (not observable by this supervisor)")));
            }
            let mut row = BTreeMap::new();
            for e in alphabet.events() {
                let grade = match sparse.get(e) {
                    Some(g) if !controllable.contains(e) && !g.is_one() => {
                        return Err(Error::UncontrollablePin {
                            row: observed.to_string(),
                            event: e.to_string(),
                        })
                    }
                    Some(g) => *g,
                    None if controllable.contains(e) => Grade::ZERO,
                    None => Grade::ONE,
                };
                row.insert(e.clone(), grade);
            }
            if let Some(e) = sparse.keys().find(|e| !alphabet.contains(e)) {
                return Err(Error::UnknownEvent(e.to_string()));
            }
            if table.insert(observed.clone(), row).is_some() {
                return Err(Error::DuplicateString(observed.to_string()));
            }
        }
        Ok(FuzzySupervisor {
            projection,
            controllable,
            table,
        })
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    pub fn controllable(&self) -> &BTreeSet<EventId> {
        &self.controllable
    }

    pub fn table(&self) -> &BTreeMap<EventString, BTreeMap<EventId, Grade>> {
        &self.table
    }

    pub fn row(&self, observed: &EventString) -> Option<&BTreeMap<EventId, Grade>> {
        self.table.get(observed)
    }

    /// `S[t](a)`, or `None` when `t` is outside the table's domain.
    pub fn enable(&self, observed: &EventString, event: &EventId) -> Option<Grade> {
        self.table.get(observed).map(|row| row[event])
    }

    /// The supervisor enabling every event at 1 on the projections of `supp(L)`.
    pub fn permissive(projection: Projection, controllable: BTreeSet<EventId>, l: &FuzzyLanguage) -> FuzzySupervisor {
        let rows: BTreeSet<_> = l.support().map(|s| projection.apply(s)).collect();
        let events = projection.alphabet().events().clone();
        let table = rows
            .into_iter()
            .map(|t| (t, events.iter().map(|e| (e.clone(), Grade::ONE)).collect()))
            .collect();
        FuzzySupervisor {
            projection,
            controllable,
            table,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Emit the formula supervisor even when the existence conditions fail.
    pub force: bool,
}

/// Rows `S[t](a) = ∨{K(s'a) : s' ∈ supp(K), P(s') = t}` for controllable `a`
/// and 1 otherwise, over `t ∈ P(supp(L))`.
fn formula_supervisor(
    k: &FuzzyLanguage,
    l: &FuzzyLanguage,
    projection: &Projection,
    controllable: &BTreeSet<EventId>,
) -> FuzzySupervisor {
    let joins = class_joins(k, projection, controllable);
    let events = l.alphabet().events();
    let domain: BTreeSet<_> = l.support().map(|s| projection.apply(s)).collect();
    let table = domain
        .into_iter()
        .map(|t| {
            let row = events
                .iter()
                .map(|e| {
                    let grade = if controllable.contains(e) {
                        joins.get(&(t.clone(), e.clone())).copied().unwrap_or(Grade::ZERO)
                    } else {
                        Grade::ONE
                    };
                    (e.clone(), grade)
                })
                .collect();
            (t, row)
        })
        .collect();
    FuzzySupervisor {
        projection: projection.clone(),
        controllable: controllable.clone(),
        table,
    }
}

/// Centralized supervisor achieving `K` when it is controllable and observable.
pub fn synthesize_central(
    k: &FuzzyLanguage,
    l: &FuzzyLanguage,
    projection: &Projection,
    options: SynthesisOptions,
) -> Result<FuzzySupervisor> {
    if k.is_empty() {
        return Err(Error::EmptySpec);
    }
    require_sublanguage(k, l)?;
    let controllable = l.alphabet().controllable();
    if !options.force {
        let report = is_controllable(k, l)?;
        if !report.holds {
            return Err(Error::ConditionViolated(Box::new(report)));
        }
        let report = is_observable(k, l, projection, controllable)?;
        if !report.holds {
            return Err(Error::ConditionViolated(Box::new(report)));
        }
    }
    Ok(formula_supervisor(k, l, projection, controllable))
}

/// Two local supervisors achieving `K` when it is controllable and
/// co-observable. Site `i` controls `E_ic` and observes through `P_i`.
pub fn synthesize_decentralized(
    k: &FuzzyLanguage,
    l: &FuzzyLanguage,
    sites: &[Site; 2],
    options: SynthesisOptions,
) -> Result<(FuzzySupervisor, FuzzySupervisor)> {
    if k.is_empty() {
        return Err(Error::EmptySpec);
    }
    require_sublanguage(k, l)?;
    require_site_cover(l, sites)?;
    if !options.force {
        let report = is_controllable(k, l)?;
        if !report.holds {
            return Err(Error::ConditionViolated(Box::new(report)));
        }
        let report = is_coobservable(k, l, sites)?;
        if !report.holds {
            return Err(Error::ConditionViolated(Box::new(report)));
        }
    }
    Ok((
        formula_supervisor(k, l, &sites[0].projection, &sites[0].controllable),
        formula_supervisor(k, l, &sites[1].projection, &sites[1].controllable),
    ))
}

/// Evaluates `grade(sa) = L(sa) ∧ grade(s) ∧ ⋀_i S_i[P_i(s)](a)` over
/// `supp(L)` in canonical (length-first) order.
pub(crate) fn closed_loop(l: &FuzzyLanguage, supervisors: &[&FuzzySupervisor]) -> Result<FuzzyLanguage> {
    for sup in supervisors {
        if !sup.projection.alphabet().same_events(l.alphabet()) {
            return Err(Error::AlphabetMismatch);
        }
    }
    let mut out: BTreeMap<EventString, Grade> = BTreeMap::new();
    for (s, ls) in l.entries() {
        let Some(parent) = s.parent() else {
            out.insert(s.clone(), *ls);
            continue;
        };
        let event = s.last().expect("non-empty string");
        let mut grade = ls.meet(out.get(&parent).copied().unwrap_or(Grade::ZERO));
        for sup in supervisors {
            let observed = sup.projection.apply(&parent);
            let enable = sup
                .enable(&observed, event)
                .ok_or_else(|| Error::SupervisorDomainGap(observed.to_string()))?;
            grade = grade.meet(enable);
        }
        if grade.is_positive() {
            out.insert(s.clone(), grade);
        }
    }
    Ok(FuzzyLanguage::from_valid(l.alphabet().clone(), out))
}

/// `𝓛^{S_P}`
pub fn closed_loop_central(l: &FuzzyLanguage, supervisor: &FuzzySupervisor) -> Result<FuzzyLanguage> {
    closed_loop(l, &[supervisor])
}

/// `𝓛^{S₁∧S₂}`
pub fn closed_loop_decentralized(
    l: &FuzzyLanguage,
    first: &FuzzySupervisor,
    second: &FuzzySupervisor,
) -> Result<FuzzyLanguage> {
    closed_loop(l, &[first, second])
}

/// Exact pointwise equality of a target and an achieved language.
pub fn verify_achieves(k: &FuzzyLanguage, result: &FuzzyLanguage) -> bool {
    k.entries() == result.entries()
}
