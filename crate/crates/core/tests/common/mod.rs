//! Seeded random instances shared by the integration tests and the
//! acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use fdes_core::{
    closed_loop_central, closed_loop_decentralized, Alphabet, EventId, EventString, FuzzyLanguage, FuzzySupervisor,
    Grade, Projection, Site, SiteSpec,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub mod checks;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn parse(alphabet: &Arc<Alphabet>, pairs: &[(&str, &str)]) -> FuzzyLanguage {
    FuzzyLanguage::from_pairs(alphabet.clone(), pairs).unwrap()
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn random_subset<R: Rng>(rng: &mut R, events: &[EventId], p: f64) -> BTreeSet<EventId> {
    events.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

/// 2 to `max_events` events with random controllable and observable sets.
pub fn random_alphabet<R: Rng>(rng: &mut R, max_events: usize) -> Alphabet {
    let max = max_events.min(NAMES.len());
    let n = rng.gen_range(max.min(2)..=max);
    let events: Vec<EventId> = NAMES[..n].iter().map(|e| EventId::new(e).unwrap()).collect();
    let controllable = random_subset(rng, &events, 0.7);
    let observable = random_subset(rng, &events, 0.6);
    Alphabet::new(events.into_iter().collect(), controllable, observable).unwrap()
}

/// Splits `E_c` and `E_o` over two sites; every event goes to one or both.
pub fn random_sites<R: Rng>(rng: &mut R, alphabet: Alphabet) -> Arc<Alphabet> {
    let mut sites = [SiteSpec::default(), SiteSpec::default()];
    for e in alphabet.controllable() {
        let who = rng.gen_range(0..3);
        if who != 1 {
            sites[0].controllable.insert(e.clone());
        }
        if who != 0 {
            sites[1].controllable.insert(e.clone());
        }
    }
    for e in alphabet.observable() {
        let who = rng.gen_range(0..3);
        if who != 1 {
            sites[0].observable.insert(e.clone());
        }
        if who != 0 {
            sites[1].observable.insert(e.clone());
        }
    }
    Arc::new(alphabet.with_sites(sites).unwrap())
}

/// `values` distinct grades in (0, 1] including 1, drawn from tenths.
pub fn random_levels<R: Rng>(rng: &mut R, values: usize) -> Vec<Grade> {
    let mut tenths: Vec<u64> = (1..10).collect();
    tenths.shuffle(rng);
    let mut levels: Vec<Grade> = tenths[..values.saturating_sub(1).min(9)]
        .iter()
        .map(|t| Grade::new(*t, 10).unwrap())
        .collect();
    levels.push(Grade::ONE);
    levels.sort();
    levels
}

/// A random tree-shaped plant with at most `max_support` strings, grades
/// from `levels`.
pub fn random_plant<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    max_support: usize,
    levels: &[Grade],
) -> FuzzyLanguage {
    let events: Vec<EventId> = alphabet.events().iter().cloned().collect();
    let target = rng.gen_range(max_support.div_ceil(2)..=max_support);
    let mut entries: BTreeMap<EventString, Grade> = BTreeMap::new();
    entries.insert(EventString::empty(), Grade::ONE);
    let mut attempts = 0;
    while entries.len() < target && attempts < 10 * max_support {
        attempts += 1;
        let keys: Vec<EventString> = entries.keys().cloned().collect();
        let s = keys.choose(rng).unwrap();
        let sa = s.extended(events.choose(rng).unwrap());
        if entries.contains_key(&sa) {
            continue;
        }
        let cap = entries[s];
        let allowed: Vec<Grade> = levels.iter().copied().filter(|g| *g <= cap).collect();
        entries.insert(sa, *allowed.choose(rng).unwrap());
    }
    FuzzyLanguage::build(alphabet.clone(), entries).unwrap()
}

/// A random `K ⊆ L`; each string is dropped with probability `drop` and
/// otherwise graded at or below both `L(s)` and its parent's grade, half the
/// time exactly at that bound.
pub fn random_sublanguage<R: Rng>(rng: &mut R, l: &FuzzyLanguage, levels: &[Grade], drop: f64) -> FuzzyLanguage {
    let mut entries: BTreeMap<EventString, Grade> = BTreeMap::new();
    for (s, ls) in l.entries() {
        let Some(parent) = s.parent() else {
            entries.insert(s.clone(), Grade::ONE);
            continue;
        };
        let Some(kp) = entries.get(&parent).copied() else {
            continue;
        };
        if rng.gen_bool(drop) {
            continue;
        }
        let cap = kp.meet(*ls);
        if rng.gen_bool(0.5) {
            entries.insert(s.clone(), cap);
            continue;
        }
        let mut allowed: Vec<Grade> = levels.iter().copied().filter(|g| *g <= cap).collect();
        allowed.push(cap);
        entries.insert(s.clone(), *allowed.choose(rng).unwrap());
    }
    FuzzyLanguage::build(l.alphabet().clone(), entries).unwrap()
}

/// `L` with one or two non-ε strings lowered (possibly to 0), descendants
/// capped accordingly.
pub fn trimmed<R: Rng>(rng: &mut R, l: &FuzzyLanguage, levels: &[Grade]) -> FuzzyLanguage {
    let mut entries = l.entries().clone();
    let keys: Vec<EventString> = entries.keys().filter(|s| !s.is_empty()).cloned().collect();
    for _ in 0..rng.gen_range(1..=2) {
        let Some(s) = keys.choose(rng) else { break };
        let mut lower: Vec<Grade> = levels.iter().copied().filter(|g| *g < entries[s]).collect();
        lower.push(Grade::ZERO);
        entries.insert(s.clone(), *lower.choose(rng).unwrap());
    }
    let keys: Vec<EventString> = entries.keys().cloned().collect();
    for s in keys {
        if let Some(parent) = s.parent() {
            let cap = entries.get(&parent).copied().unwrap_or(Grade::ZERO);
            let g = entries.get_mut(&s).unwrap();
            *g = g.meet(cap);
        }
    }
    FuzzyLanguage::build(l.alphabet().clone(), entries).unwrap()
}

/// A random supervisor over the rows `P(supp(L))`.
pub fn random_supervisor<R: Rng>(
    rng: &mut R,
    l: &FuzzyLanguage,
    pr: &Projection,
    controllable: &BTreeSet<EventId>,
    levels: &[Grade],
) -> FuzzySupervisor {
    let rows: BTreeSet<EventString> = l.support().map(|s| pr.apply(s)).collect();
    let mut choices = levels.to_vec();
    choices.push(Grade::ZERO);
    let table = rows.into_iter().map(|t| {
        let row: BTreeMap<EventId, Grade> = controllable
            .iter()
            .map(|e| {
                (
                    e.clone(),
                    if rng.gen_bool(0.3) {
                        Grade::ONE
                    } else {
                        *choices.choose(rng).unwrap()
                    },
                )
            })
            .collect();
        (t, row)
    });
    let table: Vec<_> = table.collect();
    FuzzySupervisor::new(pr.clone(), controllable.clone(), table).unwrap()
}

/// A plant, a specification and the grades they were drawn from.
#[derive(Clone, Debug)]
pub struct Instance {
    pub alphabet: Arc<Alphabet>,
    pub levels: Vec<Grade>,
    pub l: FuzzyLanguage,
    pub k: FuzzyLanguage,
    pub pr: Projection,
}

impl Instance {
    pub fn sites(&self) -> [Site; 2] {
        Site::pair_of(&self.alphabet).unwrap()
    }
}

/// How the specification is drawn.
#[derive(Clone, Copy, Debug)]
pub enum SpecKind {
    /// An arbitrary sublanguage.
    Arbitrary,
    /// The closed loop of a random central supervisor.
    CentralLoop,
    /// The closed loop of a random pair of site supervisors.
    DecentralizedLoop,
    /// The plant with one or two grades lowered.
    Trimmed,
}

pub struct Shape {
    pub max_events: usize,
    pub max_support: usize,
    /// Lattice size including 0 and 1.
    pub lattice: usize,
    pub sites: bool,
    pub crisp: bool,
}

pub fn random_instance<R: Rng>(rng: &mut R, shape: &Shape, kind: SpecKind) -> Instance {
    let base = random_alphabet(rng, shape.max_events);
    let alphabet = if shape.sites || matches!(kind, SpecKind::DecentralizedLoop) {
        random_sites(rng, base)
    } else {
        Arc::new(base)
    };
    let levels = if shape.crisp {
        vec![Grade::ONE]
    } else {
        random_levels(rng, shape.lattice.saturating_sub(1).max(1))
    };
    let l = random_plant(rng, &alphabet, shape.max_support, &levels);
    let pr = Projection::of_alphabet(&alphabet);
    let k = match kind {
        SpecKind::Arbitrary => random_sublanguage(rng, &l, &levels, 0.25),
        SpecKind::CentralLoop => {
            let sup = random_supervisor(rng, &l, &pr, alphabet.controllable(), &levels);
            closed_loop_central(&l, &sup).unwrap()
        }
        SpecKind::Trimmed => trimmed(rng, &l, &levels),
        SpecKind::DecentralizedLoop => {
            let sites = Site::pair_of(&alphabet).unwrap();
            let s1 = random_supervisor(rng, &l, &sites[0].projection, &sites[0].controllable, &levels);
            let s2 = random_supervisor(rng, &l, &sites[1].projection, &sites[1].controllable, &levels);
            closed_loop_decentralized(&l, &s1, &s2).unwrap()
        }
    };
    Instance {
        alphabet,
        levels,
        l,
        k,
        pr,
    }
}
