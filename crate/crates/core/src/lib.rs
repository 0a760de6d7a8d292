//! Supervisory control of fuzzy discrete event systems over max-min fuzzy
//! languages with exact rational grades.

pub mod alphabet;
pub mod approximation;
pub mod automaton;
pub mod error;
pub mod fdl;
pub mod grade;
pub mod language;
pub mod observation;
pub mod oracle;
pub mod predicates;
pub mod synthesis;

pub use alphabet::{Alphabet, EventId, EventString, SiteSpec, EPSILON};
pub use approximation::{infimal_co, scp, supremal_cn, GradeLattice, ScpOutcome};
pub use automaton::{automaton_from_language, FuzzyAutomaton};
pub use error::{Error, Result};
pub use fdl::{emit_fdl, parse_fdl, parse_fdl_repairing, parse_fdl_with, FdlDocument};
pub use grade::{parse_grade, Grade};
pub use language::{
    build_language, concatenation, intersection, is_sublanguage, prefix_close_repair, union, FuzzyLanguage,
};
pub use observation::{inverse_project_meet, project_language, project_string, Projection};
pub use predicates::{
    is_controllable, is_coobservable, is_normal, is_observable, is_strongly_observable, CheckReport, Property, Site,
    Witness, WitnessKind,
};
pub use synthesis::{
    closed_loop_central, closed_loop_decentralized, synthesize_central, synthesize_decentralized, verify_achieves,
    FuzzySupervisor, SynthesisOptions,
};
