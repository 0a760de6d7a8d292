//! Brute-force references for small instances: exhaustive language
//! enumeration over a grade lattice, extremal-language search, exhaustive
//! supervisor search, definition-level observability checks and set-based
//! checkers for crisp languages.
//!
//! Nothing here is meant to scale; every search is guarded by a budget on
//! the number of candidates it would visit.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::alphabet::{Alphabet, EventId, EventString};
use crate::approximation::GradeLattice;
use crate::error::{Error, Result};
use crate::grade::Grade;
use crate::language::FuzzyLanguage;
use crate::observation::Projection;
use crate::predicates::{is_controllable, is_normal, is_observable, require_sublanguage, Site};
use crate::synthesis::{closed_loop, FuzzySupervisor};

pub const DEFAULT_BUDGET: u64 = 20_000;

fn check_budget(base: usize, digits: usize, budget: u64) -> Result<()> {
    let needed = u32::try_from(digits).ok().and_then(|d| (base as u64).checked_pow(d));
    match needed {
        Some(n) if n <= budget => Ok(()),
        Some(n) => Err(Error::BudgetExceeded {
            needed: n.to_string(),
            budget,
        }),
        None => Err(Error::BudgetExceeded {
            needed: format!("{base}^{digits}"),
            budget,
        }),
    }
}

/// Counts through `base^len` digit vectors, least significant digit last.
struct Odometer {
    base: usize,
    digits: Vec<usize>,
    started: bool,
    done: bool,
}

impl Odometer {
    fn new(base: usize, len: usize) -> Odometer {
        Odometer {
            base,
            digits: vec![0; len],
            started: false,
            done: base == 0 && len > 0,
        }
    }

    fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.base {
                return Some(&self.digits);
            }
            *d = 0;
        }
        self.done = true;
        None
    }
}

/// The search space of [`enumerate_languages`].
#[derive(Clone, Debug)]
pub struct EnumerationSpec {
    alphabet: Arc<Alphabet>,
    universe: Vec<EventString>,
    lattice: GradeLattice,
    budget: u64,
}

impl EnumerationSpec {
    pub fn new<I>(alphabet: Arc<Alphabet>, universe: I, lattice: GradeLattice) -> Result<EnumerationSpec>
    where
        I: IntoIterator<Item = EventString>,
    {
        let universe: BTreeSet<EventString> = universe.into_iter().collect();
        for s in &universe {
            alphabet.check_string(s)?;
            if let Some(parent) = s.parent() {
                if !universe.contains(&parent) {
                    return Err(Error::NotPrefixClosed(s.to_string()));
                }
            }
        }
        if !universe.is_empty() && !universe.contains(&EventString::empty()) {
            return Err(Error::NotPrefixClosed(universe.iter().next().unwrap().to_string()));
        }
        Ok(EnumerationSpec {
            alphabet,
            universe: universe.into_iter().collect(),
            lattice,
            budget: DEFAULT_BUDGET,
        })
    }

    /// `supp(L)` as universe and the grades of `languages` as lattice.
    pub fn over_support(l: &FuzzyLanguage, languages: &[&FuzzyLanguage]) -> EnumerationSpec {
        EnumerationSpec {
            alphabet: l.alphabet().clone(),
            universe: l.support().cloned().collect(),
            lattice: GradeLattice::of(languages),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> EnumerationSpec {
        self.budget = budget;
        self
    }

    pub fn universe(&self) -> &[EventString] {
        &self.universe
    }

    pub fn lattice(&self) -> &GradeLattice {
        &self.lattice
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }
}

/// Iterator over the valid languages of an [`EnumerationSpec`].
pub struct Languages {
    spec: EnumerationSpec,
    parents: Vec<Option<usize>>,
    odometer: Odometer,
}

impl Iterator for Languages {
    type Item = FuzzyLanguage;

    fn next(&mut self) -> Option<FuzzyLanguage> {
        let values = self.spec.lattice.values();
        loop {
            let digits = self.odometer.advance()?;
            let valid = digits.iter().zip(&self.parents).all(|(d, parent)| match parent {
                None => values[*d].is_zero() || values[*d].is_one(),
                Some(p) => *d <= digits[*p],
            });
            if !valid {
                continue;
            }
            let entries = self
                .spec
                .universe
                .iter()
                .zip(digits)
                .filter(|(_, d)| values[**d].is_positive())
                .map(|(s, d)| (s.clone(), values[*d]))
                .collect();
            return Some(FuzzyLanguage::from_valid(self.spec.alphabet.clone(), entries));
        }
    }
}

/// Every valid language with support inside the universe and grades in the
/// lattice, each exactly once, in a fixed order.
pub fn enumerate_languages(spec: &EnumerationSpec) -> Result<Languages> {
    check_budget(spec.lattice.len(), spec.universe.len(), spec.budget)?;
    let position: BTreeMap<&EventString, usize> = spec.universe.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let parents = spec.universe.iter().map(|s| s.parent().map(|p| position[&p])).collect();
    Ok(Languages {
        parents,
        odometer: Odometer::new(spec.lattice.len(), spec.universe.len()),
        spec: spec.clone(),
    })
}

fn pointwise<F>(acc: &mut Option<BTreeMap<EventString, Grade>>, universe: &[EventString], m: &FuzzyLanguage, op: F)
where
    F: Fn(Grade, Grade) -> Grade,
{
    match acc {
        None => *acc = Some(universe.iter().map(|s| (s.clone(), m.grade(s))).collect()),
        Some(map) => {
            for (s, g) in map.iter_mut() {
                *g = op(*g, m.grade(s));
            }
        }
    }
}

fn into_language(alphabet: &Arc<Alphabet>, acc: Option<BTreeMap<EventString, Grade>>) -> FuzzyLanguage {
    let mut entries = acc.unwrap_or_default();
    entries.retain(|_, g| g.is_positive());
    FuzzyLanguage::from_valid(alphabet.clone(), entries)
}

/// Pointwise meet of every lattice-valued `M` with `K ⊆ M ⊆ L` that is
/// controllable and observable.
pub fn brute_infimal_co(k: &FuzzyLanguage, l: &FuzzyLanguage, pr: &Projection, budget: u64) -> Result<FuzzyLanguage> {
    require_sublanguage(k, l)?;
    let spec = EnumerationSpec::over_support(l, &[k, l]).with_budget(budget);
    let controllable = l.alphabet().controllable();
    let mut acc = None;
    for m in enumerate_languages(&spec)? {
        if k.first_excess(&m).is_some() || m.first_excess(l).is_some() {
            continue;
        }
        if is_controllable(&m, l)?.holds && is_observable(&m, l, pr, controllable)?.holds {
            pointwise(&mut acc, spec.universe(), &m, Grade::meet);
        }
    }
    Ok(into_language(l.alphabet(), acc))
}

/// Pointwise join of every lattice-valued `M ⊆ K` that is controllable and
/// normal.
pub fn brute_supremal_cn(k: &FuzzyLanguage, l: &FuzzyLanguage, pr: &Projection, budget: u64) -> Result<FuzzyLanguage> {
    require_sublanguage(k, l)?;
    let spec = EnumerationSpec::over_support(k, &[k, l]).with_budget(budget);
    let mut acc = None;
    for m in enumerate_languages(&spec)? {
        if m.first_excess(k).is_some() {
            continue;
        }
        if is_controllable(&m, l)?.holds && is_normal(&m, l, pr)?.holds {
            pointwise(&mut acc, spec.universe(), &m, Grade::join);
        }
    }
    Ok(into_language(l.alphabet(), acc))
}

/// The supervisor cells that can influence a closed loop on `supp(L)`:
/// `(P(s), a)` for controllable `a` with `sa ∈ supp(L)`.
fn relevant_cells(l: &FuzzyLanguage, pr: &Projection, controllable: &BTreeSet<EventId>) -> Vec<(EventString, EventId)> {
    let mut cells = BTreeSet::new();
    for s in l.support() {
        if let (Some(parent), Some(a)) = (s.parent(), s.last()) {
            if controllable.contains(a) {
                cells.insert((pr.apply(&parent), a.clone()));
            }
        }
    }
    cells.into_iter().collect()
}

fn supervisor_from_cells(
    l: &FuzzyLanguage,
    pr: &Projection,
    controllable: &BTreeSet<EventId>,
    cells: &[(EventString, EventId)],
    grades: &[Grade],
) -> Result<FuzzySupervisor> {
    let mut rows: BTreeMap<EventString, BTreeMap<EventId, Grade>> =
        l.support().map(|s| (pr.apply(s), BTreeMap::new())).collect();
    for ((t, a), g) in cells.iter().zip(grades) {
        rows.entry(t.clone()).or_default().insert(a.clone(), *g);
    }
    FuzzySupervisor::new(pr.clone(), controllable.clone(), rows)
}

// Enable grades are searched in the lattice of K and L only: a closed-loop
// grade is `c ∧ x` with `c` in that lattice, so rounding a shared `x` up to
// the next lattice value leaves every such meet that equals a K-grade intact.

/// Whether some supervisor observing through `pr` achieves exactly `K`.
pub fn brute_supervisor_exists(k: &FuzzyLanguage, l: &FuzzyLanguage, pr: &Projection, budget: u64) -> Result<bool> {
    require_sublanguage(k, l)?;
    let lattice = GradeLattice::of(&[k, l]);
    let controllable = l.alphabet().controllable();
    let cells = relevant_cells(l, pr, controllable);
    check_budget(lattice.len(), cells.len(), budget)?;
    let mut odometer = Odometer::new(lattice.len(), cells.len());
    while let Some(digits) = odometer.advance() {
        let grades: Vec<Grade> = digits.iter().map(|d| lattice.values()[*d]).collect();
        let sup = supervisor_from_cells(l, pr, controllable, &cells, &grades)?;
        if closed_loop(l, &[&sup])? == *k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether some pair of local supervisors achieves exactly `K`.
pub fn brute_decentralized_exists(
    k: &FuzzyLanguage,
    l: &FuzzyLanguage,
    sites: &[Site; 2],
    budget: u64,
) -> Result<bool> {
    require_sublanguage(k, l)?;
    let lattice = GradeLattice::of(&[k, l]);
    let cells = [
        relevant_cells(l, &sites[0].projection, &sites[0].controllable),
        relevant_cells(l, &sites[1].projection, &sites[1].controllable),
    ];
    let split = cells[0].len();
    check_budget(lattice.len(), split + cells[1].len(), budget)?;
    let mut odometer = Odometer::new(lattice.len(), split + cells[1].len());
    while let Some(digits) = odometer.advance() {
        let grades: Vec<Grade> = digits.iter().map(|d| lattice.values()[*d]).collect();
        let first = supervisor_from_cells(
            l,
            &sites[0].projection,
            &sites[0].controllable,
            &cells[0],
            &grades[..split],
        )?;
        let second = supervisor_from_cells(
            l,
            &sites[1].projection,
            &sites[1].controllable,
            &cells[1],
            &grades[split..],
        )?;
        if closed_loop(l, &[&first, &second])? == *k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Solutions of `K(sa) = c ∧ x` for `x ∈ [0,1]`, where `c = K(s) ∧ L(sa)`:
/// `[c, 1]` when `K(sa) = c`, the single point `K(sa)` when it is smaller,
/// and nothing when it is larger. Returned as `(low, high)`.
fn solutions(ksa: Grade, c: Grade) -> Option<(Grade, Grade)> {
    if ksa == c {
        Some((c, Grade::ONE))
    } else if ksa < c {
        Some((ksa, ksa))
    } else {
        None
    }
}

/// Observability checked pair by pair straight from its definition: for
/// same-class `s, s' ∈ supp(K)` and controllable `a` with `sa ∈ supp(K)`,
/// some solution `x` for `s` also solves the equation for `s'`.
pub fn observable_by_definition(
    k: &FuzzyLanguage,
    l: &FuzzyLanguage,
    pr: &Projection,
    controllables: &BTreeSet<EventId>,
) -> Result<bool> {
    require_sublanguage(k, l)?;
    for s in k.support() {
        for t in k.support() {
            if pr.apply(s) != pr.apply(t) {
                continue;
            }
            for a in controllables {
                let (sa, ta) = (s.extended(a), t.extended(a));
                let ksa = k.grade(&sa);
                if ksa.is_zero() {
                    continue;
                }
                let Some((low, high)) = solutions(ksa, k.grade(s).meet(l.grade(&sa))) else {
                    return Ok(false);
                };
                let (kta, ct) = (k.grade(&ta), k.grade(t).meet(l.grade(&ta)));
                // c' ∧ x is monotone in x, so the candidates below cover
                // every value it can take on [low, high]
                let found = [low, high, ct, kta]
                    .into_iter()
                    .filter(|x| low <= *x && *x <= high)
                    .any(|x| ct.meet(x) == kta);
                if !found {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Strong observability from its definition: every solution `x` for `s`
/// must solve the equation for `s'`. By monotonicity of `c' ∧ x` it is
/// enough to test both ends of the solution interval.
pub fn strongly_observable_by_definition(
    k: &FuzzyLanguage,
    l: &FuzzyLanguage,
    pr: &Projection,
    controllables: &BTreeSet<EventId>,
) -> Result<bool> {
    require_sublanguage(k, l)?;
    for s in k.support() {
        for t in k.support() {
            if pr.apply(s) != pr.apply(t) {
                continue;
            }
            for a in controllables {
                let (sa, ta) = (s.extended(a), t.extended(a));
                let ksa = k.grade(&sa);
                if ksa.is_zero() {
                    continue;
                }
                let Some((low, high)) = solutions(ksa, k.grade(s).meet(l.grade(&sa))) else {
                    return Ok(false);
                };
                let (kta, ct) = (k.grade(&ta), k.grade(t).meet(l.grade(&ta)));
                if ct.meet(low) != kta || ct.meet(high) != kta {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The property a crisp reference check decides, with its context.
#[derive(Clone, Copy, Debug)]
pub enum CrispQuery<'a> {
    Controllability,
    Observability(&'a Projection),
    Normality(&'a Projection),
    Coobservability(&'a [Site; 2]),
}

type Word = Vec<String>;

fn crisp_set(m: &FuzzyLanguage) -> Result<BTreeSet<Word>> {
    if !m.is_crisp() {
        return Err(Error::NotCrisp(m.to_string()));
    }
    Ok(m.support()
        .map(|s| s.events().iter().map(|e| e.as_str().to_string()).collect())
        .collect())
}

fn names(events: &BTreeSet<EventId>) -> BTreeSet<String> {
    events.iter().map(|e| e.as_str().to_string()).collect()
}

fn erase(w: &Word, observable: &BTreeSet<String>) -> Word {
    w.iter().filter(|e| observable.contains(*e)).cloned().collect()
}

fn append(w: &Word, e: &str) -> Word {
    let mut out = w.clone();
    out.push(e.to_string());
    out
}

/// Classical set-based verdicts for `{0,1}`-valued `K ⊆ L`, computed on
/// plain word sets without any of the fuzzy machinery.
///
/// * controllability: `K E_uc ∩ L ⊆ K`;
/// * observability: `P(s) = P(s')`, `s, s' ∈ K`, `sa ∈ K`, `s'a ∈ L`,
///   `a ∈ E_c` imply `s'a ∈ K`;
/// * normality: `K = P⁻¹(P(K)) ∩ L`;
/// * co-observability: whenever `s ∈ K`, `sa ∈ L \ K` and `a ∈ E_c`, some
///   site controlling `a` sees no `s' ∈ K` with `P_i(s') = P_i(s)` and
///   `s'a ∈ K`.
pub fn crisp_reference(query: CrispQuery<'_>, k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<bool> {
    let (ks, ls) = (crisp_set(k)?, crisp_set(l)?);
    let alphabet = l.alphabet();
    Ok(match query {
        CrispQuery::Controllability => {
            let uncontrollable = names(&alphabet.uncontrollable());
            ks.iter().all(|s| {
                uncontrollable
                    .iter()
                    .map(|a| append(s, a))
                    .all(|sa| !ls.contains(&sa) || ks.contains(&sa))
            })
        }
        CrispQuery::Observability(pr) => {
            let observable = names(pr.observable());
            let controllable = names(alphabet.controllable());
            ks.iter().all(|s| {
                ks.iter().all(|t| {
                    erase(s, &observable) != erase(t, &observable)
                        || controllable.iter().all(|a| {
                            let (sa, ta) = (append(s, a), append(t, a));
                            !(ks.contains(&sa) && ls.contains(&ta)) || ks.contains(&ta)
                        })
                })
            })
        }
        CrispQuery::Normality(pr) => {
            let observable = names(pr.observable());
            let seen: BTreeSet<Word> = ks.iter().map(|s| erase(s, &observable)).collect();
            ls.iter()
                .filter(|s| seen.contains(&erase(s, &observable)))
                .all(|s| ks.contains(s))
        }
        CrispQuery::Coobservability(sites) => {
            let views: Vec<(BTreeSet<String>, BTreeSet<String>)> = sites
                .iter()
                .map(|site| (names(site.projection.observable()), names(&site.controllable)))
                .collect();
            let controllable = names(alphabet.controllable());
            ks.iter().all(|s| {
                controllable.iter().all(|a| {
                    let sa = append(s, a);
                    if !ls.contains(&sa) || ks.contains(&sa) {
                        return true;
                    }
                    views.iter().any(|(observable, controls)| {
                        controls.contains(a)
                            && ks
                                .iter()
                                .filter(|t| erase(t, observable) == erase(s, observable))
                                .all(|t| !ks.contains(&append(t, a)))
                    })
                })
            })
        }
    })
}
