//! Extremal approximations of a specification: the least controllable and
//! observable superlanguage, the greatest controllable and normal
//! sublanguage, and the supervisory control problem built on the former.
//!
//! Both approximations are monotone fixed-point iterations over the finite
//! grade lattice of the inputs. Every repair step below only assigns a value
//! that any admissible answer is forced to respect, so the iterate stays a
//! pointwise bound of the extremal language and the limit is that language.

use std::collections::{BTreeMap, BTreeSet};

use crate::alphabet::EventString;
use crate::error::{Error, Result};
use crate::grade::Grade;
use crate::language::FuzzyLanguage;
use crate::observation::Projection;
use crate::predicates::require_sublanguage;
use crate::synthesis::{synthesize_central, FuzzySupervisor, SynthesisOptions};

/// The grades occurring in a set of languages, plus 0 and 1, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradeLattice {
    values: Vec<Grade>,
}

impl GradeLattice {
    pub fn of(languages: &[&FuzzyLanguage]) -> GradeLattice {
        let mut set: BTreeSet<Grade> = [Grade::ZERO, Grade::ONE].into();
        for l in languages {
            set.extend(l.entries().values().copied());
        }
        GradeLattice {
            values: set.into_iter().collect(),
        }
    }

    pub fn from_values<I: IntoIterator<Item = Grade>>(values: I) -> GradeLattice {
        let mut set: BTreeSet<Grade> = values.into_iter().collect();
        set.insert(Grade::ZERO);
        set.insert(Grade::ONE);
        GradeLattice {
            values: set.into_iter().collect(),
        }
    }

    pub fn values(&self) -> &[Grade] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, g: &Grade) -> bool {
        self.values.binary_search(g).is_ok()
    }
}

/// Raises `map[s]` to `value` if that is larger. Returns whether it changed.
fn raise(map: &mut BTreeMap<EventString, Grade>, s: EventString, value: Grade) -> bool {
    if value.is_zero() {
        return false;
    }
    let slot = map.entry(s).or_insert(Grade::ZERO);
    if value > *slot {
        *slot = value;
        true
    } else {
        false
    }
}

fn grade_in(map: &BTreeMap<EventString, Grade>, s: &EventString) -> Grade {
    map.get(s).copied().unwrap_or(Grade::ZERO)
}

/// `K↓(CO)`: the least controllable and observable `M` with `K ⊆ M ⊆ L`.
///
/// Starting from `K`, repeat until stable:
/// * for `s ∈ supp(M)`, uncontrollable `a`: raise `M(sa)` to `M(s) ∧ L(sa)`;
/// * for each class `C` of `supp(M)` and controllable `a`, with
///   `x* = ∨_{t∈C} M(ta)`: raise `M(s'a)` to `M(s') ∧ L(s'a) ∧ x*`.
///
/// Raised values never exceed `M(s') ∧ L(s'a)`, so every iterate is a valid
/// language inside `L`.
pub fn infimal_co(k: &FuzzyLanguage, l: &FuzzyLanguage, projection: &Projection) -> Result<FuzzyLanguage> {
    require_sublanguage(k, l)?;
    let alphabet = l.alphabet();
    let uncontrollable = alphabet.uncontrollable();
    let controllable = alphabet.controllable();
    let mut m = k.entries().clone();
    loop {
        let mut changed = false;

        let support: Vec<(EventString, Grade)> = m.iter().map(|(s, g)| (s.clone(), *g)).collect();
        for (s, ms) in &support {
            for a in &uncontrollable {
                let sa = s.extended(a);
                let target = ms.meet(l.grade(&sa));
                changed |= raise(&mut m, sa, target);
            }
        }

        let classes = projection.classes(m.keys());
        for class in classes.values() {
            for a in controllable {
                let x_star = Grade::join_all(class.iter().map(|t| grade_in(&m, &t.extended(a))));
                if x_star.is_zero() {
                    continue;
                }
                for s in class {
                    let sa = s.extended(a);
                    let target = grade_in(&m, s).meet(l.grade(&sa)).meet(x_star);
                    changed |= raise(&mut m, sa, target);
                }
            }
        }

        if !changed {
            break;
        }
    }
    Ok(FuzzyLanguage::from_valid(l.alphabet().clone(), m))
}

/// `K↑(CN)`: the greatest controllable and normal `M ⊆ K`.
///
/// Starting from `K`, repeat until stable:
/// * controllability: if `M(s) ∧ L(sa) > M(sa)` for uncontrollable `a`,
///   lower `M(s)` to `M(sa)`;
/// * normality: in each projection class of `supp(L)` with class maximum
///   `m`, if some `s` has `L(s) ∧ m > M(s)`, lower every member above
///   `M(s)` down to `M(s)`;
/// * prefix repair: `M(st) := M(st) ∧ M(s)`.
///
/// If ε ever drops below 1, no non-empty language qualifies and the answer
/// is `𝒪`.
pub fn supremal_cn(k: &FuzzyLanguage, l: &FuzzyLanguage, projection: &Projection) -> Result<FuzzyLanguage> {
    require_sublanguage(k, l)?;
    let alphabet = l.alphabet();
    let uncontrollable = alphabet.uncontrollable();
    let classes = projection.classes(l.support());
    let empty = FuzzyLanguage::empty(l.alphabet().clone());
    let mut m = k.entries().clone();
    loop {
        let mut changed = false;

        let support: Vec<EventString> = m.keys().cloned().collect();
        for s in &support {
            for a in &uncontrollable {
                let sa = s.extended(a);
                let msa = grade_in(&m, &sa);
                let ms = grade_in(&m, s);
                if ms.meet(l.grade(&sa)) > msa {
                    m.insert(s.clone(), msa);
                    changed = true;
                }
            }
        }

        for class in classes.values() {
            loop {
                let top = Grade::join_all(class.iter().map(|t| grade_in(&m, t)));
                let bound = class
                    .iter()
                    .filter(|s| l.grade(s).meet(top) > grade_in(&m, s))
                    .map(|s| grade_in(&m, s))
                    .min();
                let Some(bound) = bound else { break };
                for t in class {
                    if grade_in(&m, t) > bound {
                        m.insert(t.clone(), bound);
                        changed = true;
                    }
                }
            }
        }

        // canonical order visits every prefix before its extensions
        let keys: Vec<EventString> = m.keys().cloned().collect();
        for s in &keys {
            if let Some(parent) = s.parent() {
                let cap = grade_in(&m, &parent);
                let ms = grade_in(&m, s);
                if ms > cap {
                    m.insert(s.clone(), cap);
                    changed = true;
                }
            }
        }
        m.retain(|_, g| g.is_positive());

        if !m.is_empty() && !grade_in(&m, &EventString::empty()).is_one() {
            return Ok(empty);
        }
        if !changed {
            break;
        }
    }
    Ok(FuzzyLanguage::from_valid(l.alphabet().clone(), m))
}

/// Outcome of the supervisory control problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScpOutcome {
    /// A supervisor whose closed loop is `achieved = L_a↓(CO)`, which lies
    /// between `L_a` and `L_l`.
    Solved {
        supervisor: FuzzySupervisor,
        achieved: FuzzyLanguage,
    },
    /// `L_a↓(CO)` escapes `L_l`; it is returned as evidence.
    NoSolution { infimal: FuzzyLanguage },
}

/// Finds a supervisor with `L_a ⊆ 𝓛^{S_P} ⊆ L_l` when one exists.
pub fn scp(
    minimal: &FuzzyLanguage,
    legal: &FuzzyLanguage,
    l: &FuzzyLanguage,
    projection: &Projection,
) -> Result<ScpOutcome> {
    if minimal.is_empty() {
        return Err(Error::EmptyMinSpec);
    }
    require_sublanguage(minimal, legal).map_err(|e| Error::PreconditionChain(format!("L_a <= L_l: {e}")))?;
    require_sublanguage(legal, l).map_err(|e| Error::PreconditionChain(format!("L_l <= L: {e}")))?;
    let infimal = infimal_co(minimal, l, projection)?;
    if infimal.first_excess(legal).is_some() {
        return Ok(ScpOutcome::NoSolution { infimal });
    }
    let supervisor = synthesize_central(&infimal, l, projection, SynthesisOptions::default())?;
    Ok(ScpOutcome::Solved {
        supervisor,
        achieved: infimal,
    })
}
