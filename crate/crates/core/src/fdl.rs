//! FDL, a line-oriented text format for alphabets, sites, languages,
//! automata and supervisors.
//!
//! ```text
//! # comment
//! [alphabet]
//! events a b c d
//! controllable a b c
//! observable a b d
//!
//! [site 1]
//! controllable a b
//! observable a b d
//!
//! [language K]
//! eps 1
//! a 0.7
//! a.c 2/5
//!
//! [automaton G]
//! states q0 q1
//! initial q0
//! trans q0 a q1 0.9
//!
//! [supervisor S]
//! observable a b d
//! controllable a b c
//! obs eps
//! enable a 0.7
//! ```
//!
//! A document holds at most one alphabet. Documents without one can be
//! parsed against an alphabet supplied by the caller, which is how
//! specification, site and supervisor files share a plant's alphabet.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::alphabet::{Alphabet, EventId, EventString, SiteSpec};
use crate::automaton::FuzzyAutomaton;
use crate::error::{Error, Result};
use crate::grade::{parse_grade, Grade};
use crate::language::{prefix_close_repair, FuzzyLanguage};
use crate::observation::Projection;
use crate::synthesis::FuzzySupervisor;

/// Named entities of one FDL text. Sites, when present, live on the
/// alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FdlDocument {
    pub alphabet: Option<Arc<Alphabet>>,
    pub languages: BTreeMap<String, FuzzyLanguage>,
    pub automata: BTreeMap<String, FuzzyAutomaton>,
    pub supervisors: BTreeMap<String, FuzzySupervisor>,
}

impl FdlDocument {
    pub fn with_alphabet(alphabet: Arc<Alphabet>) -> FdlDocument {
        FdlDocument {
            alphabet: Some(alphabet),
            ..FdlDocument::default()
        }
    }

    pub fn language(&self, name: &str) -> Option<&FuzzyLanguage> {
        self.languages.get(name)
    }

    pub fn automaton(&self, name: &str) -> Option<&FuzzyAutomaton> {
        self.automata.get(name)
    }

    pub fn supervisor(&self, name: &str) -> Option<&FuzzySupervisor> {
        self.supervisors.get(name)
    }
}

/// A whitespace-separated word and its 1-based column.
#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    col: usize,
    text: &'a str,
}

#[derive(Debug)]
struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl Line<'_> {
    fn err(&self, index: usize, e: Error) -> Error {
        let col = self.tokens.get(index).map_or(1, |t| t.col);
        e.at(self.number, col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Alphabet,
    Site(usize),
    Language,
    Automaton,
    Supervisor,
}

#[derive(Debug)]
struct Section<'a> {
    kind: Kind,
    name: String,
    header: usize,
    lines: Vec<Line<'a>>,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    col: text[..s].chars().count() + 1,
                    text: &text[s..i],
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            col: text[..s].chars().count() + 1,
            text: &text[s..],
        });
    }
    tokens
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'-' | b'.'))
}

fn syntax(msg: impl Into<String>) -> Error {
    Error::Syntax(msg.into())
}

fn parse_header(raw: &str, number: usize) -> Result<(Kind, String)> {
    let at = |e: Error| e.at(number, 1);
    let inner = raw
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| at(syntax("section header must look like `[kind name]`")))?;
    let words: Vec<&str> = inner.split_whitespace().collect();
    match words.as_slice() {
        ["alphabet"] => Ok((Kind::Alphabet, String::new())),
        ["site", "1"] => Ok((Kind::Site(0), "1".into())),
        ["site", "2"] => Ok((Kind::Site(1), "2".into())),
        ["site", other] => Err(at(syntax(format!("site index must be 1 or 2, found `{other}`")))),
        [kind @ ("language" | "automaton" | "supervisor"), name] => {
            if !valid_name(name) {
                return Err(at(syntax(format!("invalid {kind} name `{name}`"))));
            }
            let kind = match *kind {
                "language" => Kind::Language,
                "automaton" => Kind::Automaton,
                _ => Kind::Supervisor,
            };
            Ok((kind, name.to_string()))
        }
        [kind, ..] => Err(at(syntax(format!("unknown or malformed section `[{inner}]` ({kind})")))),
        [] => Err(at(syntax("empty section header"))),
    }
}

fn split_sections(text: &str) -> Result<Vec<Section<'_>>> {
    let mut sections: Vec<Section<'_>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split_once('#').map_or(raw, |(before, _)| before);
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            let (kind, name) = parse_header(trimmed, number)?;
            sections.push(Section {
                kind,
                name,
                header: number,
                lines: Vec::new(),
            });
            continue;
        }
        let line = Line {
            number,
            tokens: tokenize(content),
        };
        match sections.last_mut() {
            Some(section) => section.lines.push(line),
            None => return Err(line.err(0, syntax("content outside of any section"))),
        }
    }
    Ok(sections)
}

fn event_set(line: &Line<'_>, alphabet: Option<&Alphabet>) -> Result<BTreeSet<EventId>> {
    let mut set = BTreeSet::new();
    for (i, tok) in line.tokens.iter().enumerate().skip(1) {
        let event = match alphabet {
            Some(a) => a.event(tok.text),
            None => EventId::new(tok.text),
        }
        .map_err(|e| line.err(i, e))?;
        if !set.insert(event) {
            return Err(line.err(i, Error::DuplicateEvent(tok.text.to_string())));
        }
    }
    Ok(set)
}

/// Reads `keyword e1 e2 ...` lines, each keyword at most once.
fn keyed_sets<'a>(
    section: &Section<'a>,
    allowed: &[&str],
    alphabet: Option<&Alphabet>,
) -> Result<BTreeMap<String, (BTreeSet<EventId>, usize)>> {
    let mut out = BTreeMap::new();
    for line in &section.lines {
        let key = line.tokens[0].text;
        if !allowed.contains(&key) {
            return Err(line.err(
                0,
                syntax(format!("unexpected `{key}`, expected one of: {}", allowed.join(", "))),
            ));
        }
        if out.contains_key(key) {
            return Err(line.err(0, syntax(format!("`{key}` given twice"))));
        }
        out.insert(key.to_string(), (event_set(line, alphabet)?, line.number));
    }
    Ok(out)
}

fn parse_alphabet(section: &Section<'_>) -> Result<Alphabet> {
    let sets = keyed_sets(section, &["events", "controllable", "observable"], None)?;
    let (events, _) = sets
        .get("events")
        .cloned()
        .ok_or_else(|| syntax("alphabet needs an `events` line").at(section.header, 1))?;
    let get = |k: &str| sets.get(k).map(|(s, _)| s.clone()).unwrap_or_default();
    Alphabet::new(events, get("controllable"), get("observable")).map_err(|e| {
        let line = match &e {
            Error::UnknownEvent(name) => ["controllable", "observable"]
                .iter()
                .filter_map(|k| sets.get(*k))
                .find(|(s, _)| s.iter().any(|ev| ev.as_str() == name))
                .map_or(section.header, |(_, n)| *n),
            _ => section.header,
        };
        e.at(line, 1)
    })
}

fn parse_site(section: &Section<'_>, alphabet: &Alphabet) -> Result<SiteSpec> {
    let sets = keyed_sets(section, &["controllable", "observable"], Some(alphabet))?;
    let get = |k: &str| sets.get(k).map(|(s, _)| s.clone()).unwrap_or_default();
    Ok(SiteSpec {
        controllable: get("controllable"),
        observable: get("observable"),
    })
}

fn grade_token(line: &Line<'_>, index: usize) -> Result<Grade> {
    let tok = line
        .tokens
        .get(index)
        .ok_or_else(|| line.err(line.tokens.len().saturating_sub(1), syntax("missing grade")))?;
    parse_grade(tok.text).map_err(|e| line.err(index, e))
}

fn expect_len(line: &Line<'_>, len: usize, shape: &str) -> Result<()> {
    if line.tokens.len() == len {
        Ok(())
    } else {
        let index = if line.tokens.len() > len {
            len
        } else {
            line.tokens.len() - 1
        };
        Err(line.err(index, syntax(format!("expected `{shape}`"))))
    }
}

fn parse_language(section: &Section<'_>, alphabet: &Arc<Alphabet>, repair: bool) -> Result<FuzzyLanguage> {
    let mut entries = Vec::new();
    let mut lines: BTreeMap<String, &Line<'_>> = BTreeMap::new();
    for line in &section.lines {
        expect_len(line, 2, "<string> <grade>")?;
        let s = alphabet.parse_string(line.tokens[0].text).map_err(|e| line.err(0, e))?;
        let g = grade_token(line, 1)?;
        if lines.insert(s.to_string(), line).is_some() {
            return Err(line.err(0, Error::DuplicateString(s.to_string())));
        }
        entries.push((s, g));
    }
    if repair {
        return prefix_close_repair(alphabet.clone(), entries);
    }
    // without an `eps` line, report the string whose prefix is unlisted
    let orphan = entries
        .iter()
        .find(|(s, g)| g.is_positive() && s.parent().is_some_and(|p| !lines.contains_key(&p.to_string())));
    if let (false, Some((s, g))) = (lines.contains_key("eps"), orphan) {
        let parent = s.parent().expect("not eps");
        return Err(lines[&s.to_string()].err(
            0,
            Error::P2Violation {
                string: s.to_string(),
                grade: g.to_string(),
                prefix: parent.to_string(),
                prefix_grade: Grade::ZERO.to_string(),
            },
        ));
    }
    FuzzyLanguage::build(alphabet.clone(), entries).map_err(|e| {
        let culprit = match &e {
            Error::P2Violation { string, .. } | Error::DuplicateString(string) => lines.get(string),
            Error::P1Violation(_) => lines.get("eps"),
            _ => None,
        };
        match culprit {
            Some(line) => line.err(0, e),
            None => e.at(section.header, 1),
        }
    })
}

fn parse_automaton(section: &Section<'_>, alphabet: &Arc<Alphabet>) -> Result<FuzzyAutomaton> {
    let mut states: Option<(&Line<'_>, Vec<String>)> = None;
    let mut initial: Option<(&Line<'_>, String)> = None;
    let mut transitions = Vec::new();
    let mut trans_lines = Vec::new();
    for line in &section.lines {
        match line.tokens[0].text {
            "states" => {
                if states.is_some() {
                    return Err(line.err(0, syntax("`states` given twice")));
                }
                states = Some((line, line.tokens[1..].iter().map(|t| t.text.to_string()).collect()));
            }
            "initial" => {
                if initial.is_some() {
                    return Err(line.err(0, syntax("`initial` given twice")));
                }
                expect_len(line, 2, "initial <state>")?;
                initial = Some((line, line.tokens[1].text.to_string()));
            }
            "trans" => {
                expect_len(line, 5, "trans <from> <event> <to> <grade>")?;
                let event = alphabet.event(line.tokens[2].text).map_err(|e| line.err(2, e))?;
                let grade = grade_token(line, 4)?;
                transitions.push((
                    line.tokens[1].text.to_string(),
                    event,
                    line.tokens[3].text.to_string(),
                    grade,
                ));
                trans_lines.push(line);
            }
            other => return Err(line.err(0, syntax(format!("unexpected `{other}` in automaton")))),
        }
    }
    let (states_line, names) = states.ok_or_else(|| syntax("automaton needs a `states` line").at(section.header, 1))?;
    let (initial_line, init) =
        initial.ok_or_else(|| syntax("automaton needs an `initial` line").at(section.header, 1))?;
    FuzzyAutomaton::new(alphabet.clone(), names, &init, transitions.clone()).map_err(|e| {
        let line = match &e {
            Error::UnknownState(name) if *name == init => Some((initial_line, 1)),
            Error::UnknownState(name) => trans_lines
                .iter()
                .find_map(|l| [1, 3].into_iter().find(|i| l.tokens[*i].text == name).map(|i| (*l, i))),
            Error::DuplicateState(_) | Error::Syntax(_) if transitions.is_empty() => Some((states_line, 0)),
            _ => None,
        };
        match line {
            Some((l, i)) => l.err(i, e),
            None => e.at(section.header, 1),
        }
    })
}

fn parse_supervisor(section: &Section<'_>, alphabet: &Arc<Alphabet>) -> Result<FuzzySupervisor> {
    let mut observable = None;
    let mut controllable = None;
    let mut rows: Vec<(EventString, BTreeMap<EventId, Grade>, &Line<'_>)> = Vec::new();
    for line in &section.lines {
        match line.tokens[0].text {
            "observable" | "controllable" => {
                let slot = if line.tokens[0].text == "observable" {
                    &mut observable
                } else {
                    &mut controllable
                };
                if slot.is_some() {
                    return Err(line.err(0, syntax(format!("`{}` given twice", line.tokens[0].text))));
                }
                *slot = Some(event_set(line, Some(alphabet))?);
            }
            "obs" => {
                expect_len(line, 2, "obs <observed-string>")?;
                let t = alphabet.parse_string(line.tokens[1].text).map_err(|e| line.err(1, e))?;
                if rows.iter().any(|(u, _, _)| *u == t) {
                    return Err(line.err(1, Error::DuplicateString(t.to_string())));
                }
                rows.push((t, BTreeMap::new(), line));
            }
            "enable" => {
                expect_len(line, 3, "enable <event> <grade>")?;
                let event = alphabet.event(line.tokens[1].text).map_err(|e| line.err(1, e))?;
                let grade = grade_token(line, 2)?;
                let Some((_, row, _)) = rows.last_mut() else {
                    return Err(line.err(0, syntax("`enable` before any `obs` line")));
                };
                if row.insert(event, grade).is_some() {
                    return Err(line.err(
                        1,
                        syntax(format!("event `{}` enabled twice in one row", line.tokens[1].text)),
                    ));
                }
            }
            other => return Err(line.err(0, syntax(format!("unexpected `{other}` in supervisor")))),
        }
    }
    let observable = observable.unwrap_or_else(|| alphabet.observable().clone());
    let controllable = controllable.unwrap_or_else(|| alphabet.controllable().clone());
    let projection = Projection::new(alphabet.clone(), observable).map_err(|e| e.at(section.header, 1))?;
    let lines: Vec<(EventString, usize)> = rows.iter().map(|(t, _, l)| (t.clone(), l.number)).collect();
    FuzzySupervisor::new(projection, controllable, rows.into_iter().map(|(t, r, _)| (t, r))).map_err(|e| {
        let row = match &e {
            Error::UncontrollablePin { row, .. } => lines.iter().find(|(t, _)| t.to_string() == *row),
            _ => None,
        };
        e.at(row.map_or(section.header, |(_, n)| *n), 1)
    })
}

/// Parses a self-contained document.
pub fn parse_fdl(text: &str) -> Result<FdlDocument> {
    parse_fdl_with(text, None)
}

/// Parses a document, falling back to `context` when it declares no
/// alphabet of its own. Site sections attach to whichever alphabet is used.
pub fn parse_fdl_with(text: &str, context: Option<&Arc<Alphabet>>) -> Result<FdlDocument> {
    parse_document(text, context, false)
}

/// Like [`parse_fdl_with`], but language sections need not satisfy P1/P2:
/// each is completed by [`prefix_close_repair`].
pub fn parse_fdl_repairing(text: &str, context: Option<&Arc<Alphabet>>) -> Result<FdlDocument> {
    parse_document(text, context, true)
}

fn parse_document(text: &str, context: Option<&Arc<Alphabet>>, repair: bool) -> Result<FdlDocument> {
    let sections = split_sections(text)?;

    let mut declared = None;
    let mut site_sections: [Option<&Section<'_>>; 2] = [None, None];
    for section in &sections {
        match section.kind {
            Kind::Alphabet => {
                if declared.is_some() {
                    return Err(syntax("a document holds at most one `[alphabet]`").at(section.header, 1));
                }
                declared = Some(parse_alphabet(section)?);
            }
            Kind::Site(i) => {
                if site_sections[i].is_some() {
                    return Err(syntax(format!("`[site {}]` given twice", i + 1)).at(section.header, 1));
                }
                site_sections[i] = Some(section);
            }
            _ => {}
        }
    }

    let base: Option<Alphabet> = declared.or_else(|| context.map(|a| (**a).clone()));
    let alphabet = match (base, site_sections) {
        (None, [None, None]) => None,
        (None, [first, second]) => {
            let header = first.or(second).map_or(1, |s| s.header);
            return Err(syntax("site sections need an alphabet").at(header, 1));
        }
        (Some(a), [None, None]) => Some(Arc::new(a)),
        (Some(a), [Some(first), Some(second)]) => {
            let sites = [parse_site(first, &a)?, parse_site(second, &a)?];
            Some(Arc::new(a.with_sites(sites).map_err(|e| e.at(first.header, 1))?))
        }
        (Some(_), [first, second]) => {
            let header = first.or(second).map_or(1, |s| s.header);
            return Err(syntax("both `[site 1]` and `[site 2]` are required").at(header, 1));
        }
    };

    let mut doc = FdlDocument {
        alphabet: alphabet.clone(),
        ..FdlDocument::default()
    };
    for section in &sections {
        if matches!(section.kind, Kind::Alphabet | Kind::Site(_)) {
            continue;
        }
        let alphabet = alphabet
            .as_ref()
            .ok_or_else(|| syntax("no `[alphabet]` section to interpret this section").at(section.header, 1))?;
        let duplicate = || {
            syntax(format!(
                "duplicate {} name `{}`",
                section_word(section.kind),
                section.name
            ))
            .at(section.header, 1)
        };
        // keep the location outermost so messages start with it
        let wrap = |e: Error| match e {
            Error::Located { line, column, source } => source.in_entity(section.name.clone()).at(line, column),
            other => other.in_entity(section.name.clone()),
        };
        match section.kind {
            Kind::Language => {
                let l = parse_language(section, alphabet, repair).map_err(wrap)?;
                if doc.languages.insert(section.name.clone(), l).is_some() {
                    return Err(duplicate());
                }
            }
            Kind::Automaton => {
                let g = parse_automaton(section, alphabet).map_err(wrap)?;
                if doc.automata.insert(section.name.clone(), g).is_some() {
                    return Err(duplicate());
                }
            }
            Kind::Supervisor => {
                let s = parse_supervisor(section, alphabet).map_err(wrap)?;
                if doc.supervisors.insert(section.name.clone(), s).is_some() {
                    return Err(duplicate());
                }
            }
            Kind::Alphabet | Kind::Site(_) => unreachable!(),
        }
    }
    Ok(doc)
}

fn section_word(kind: Kind) -> &'static str {
    match kind {
        Kind::Alphabet => "alphabet",
        Kind::Site(_) => "site",
        Kind::Language => "language",
        Kind::Automaton => "automaton",
        Kind::Supervisor => "supervisor",
    }
}

fn join_events<'a, I: IntoIterator<Item = &'a EventId>>(events: I) -> String {
    events.into_iter().map(EventId::as_str).collect::<Vec<_>>().join(" ")
}

fn line(out: &mut String, key: &str, rest: &str) {
    if rest.is_empty() {
        let _ = writeln!(out, "{key}");
    } else {
        let _ = writeln!(out, "{key} {rest}");
    }
}

fn emit_alphabet(out: &mut String, alphabet: &Alphabet) {
    out.push_str("[alphabet]\n");
    line(out, "events", &join_events(alphabet.events()));
    line(out, "controllable", &join_events(alphabet.controllable()));
    line(out, "observable", &join_events(alphabet.observable()));
    if let Some(sites) = alphabet.sites() {
        for (i, site) in sites.iter().enumerate() {
            let _ = writeln!(out, "\n[site {}]", i + 1);
            line(out, "controllable", &join_events(&site.controllable));
            line(out, "observable", &join_events(&site.observable));
        }
    }
}

/// One `[language NAME]` section, strings in (length, lexicographic) order.
pub fn emit_language(name: &str, l: &FuzzyLanguage) -> String {
    let mut out = format!("[language {name}]\n");
    for (s, g) in l.entries() {
        let _ = writeln!(out, "{s} {g}");
    }
    out
}

/// One `[automaton NAME]` section.
pub fn emit_automaton(name: &str, g: &FuzzyAutomaton) -> String {
    let mut out = format!("[automaton {name}]\n");
    line(&mut out, "states", &g.states().join(" "));
    line(&mut out, "initial", g.initial());
    for (p, e, q, grade) in g.transitions() {
        let _ = writeln!(out, "trans {p} {e} {q} {grade}");
    }
    out
}

/// One `[supervisor NAME]` section with dense rows.
pub fn emit_supervisor(name: &str, s: &FuzzySupervisor) -> String {
    let mut out = format!("[supervisor {name}]\n");
    line(&mut out, "observable", &join_events(s.projection().observable()));
    line(&mut out, "controllable", &join_events(s.controllable()));
    for (t, row) in s.table() {
        let _ = writeln!(out, "obs {t}");
        for (e, g) in row {
            let _ = writeln!(out, "enable {e} {g}");
        }
    }
    out
}

/// Canonical text: alphabet and sites, then languages, automata and
/// supervisors, each group sorted by name, sections separated by a blank
/// line.
pub fn emit_fdl(doc: &FdlDocument) -> String {
    let mut parts = Vec::new();
    if let Some(a) = &doc.alphabet {
        let mut out = String::new();
        emit_alphabet(&mut out, a);
        parts.push(out);
    }
    parts.extend(doc.languages.iter().map(|(n, l)| emit_language(n, l)));
    parts.extend(doc.automata.iter().map(|(n, g)| emit_automaton(n, g)));
    parts.extend(doc.supervisors.iter().map(|(n, s)| emit_supervisor(n, s)));
    parts.join("\n")
}
