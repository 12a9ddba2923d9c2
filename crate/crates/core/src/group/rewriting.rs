use std::cmp::Ordering;
use std::collections::VecDeque;
use std::path::Path;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::{Alphabet, GeneratorLabel, GroupModel, Letter, Word};
use crate::error::{Error, Result};
use crate::graph::VertexKey;

/// A finite presentation `<S | R>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    alphabet: Alphabet,
    relators: Vec<Word>,
}

/// JSON form of one generator in a presentation file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub symbol: String,
    #[serde(default)]
    pub inverse: Option<String>,
    #[serde(default)]
    pub involution: bool,
}

/// JSON form of a presentation:
/// `{"generators": [{"symbol": "a", "inverse": "A", "involution": false}], "relators": ["abAB"]}`.
/// A missing `inverse` defaults to the uppercase symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub generators: Vec<GeneratorDoc>,
    pub relators: Vec<String>,
}

fn single_char(s: &str) -> Result<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::invalid(format!("generator symbol {s:?} must be one character"))),
    }
}

impl Presentation {
    pub fn new(name: impl Into<String>, alphabet: Alphabet, relators: &[&str]) -> Result<Self> {
        let mut words = Vec::new();
        for r in relators {
            let w = alphabet.parse_word(r)?;
            if w.is_empty() {
                return Err(Error::invalid("relators must be nonempty"));
            }
            if w.windows(2).any(|p| p[1] == alphabet.inverse(p[0])) {
                return Err(Error::invalid(format!("relator {r:?} is not freely reduced")));
            }
            words.push(w);
        }
        Ok(Presentation {
            name: name.into(),
            alphabet,
            relators: words,
        })
    }

    pub fn from_doc(name: impl Into<String>, doc: &PresentationDoc) -> Result<Self> {
        let mut gens = Vec::new();
        for g in &doc.generators {
            let symbol = single_char(&g.symbol)?;
            let inverse_symbol = match &g.inverse {
                Some(s) => single_char(s)?,
                None if g.involution => symbol,
                None => symbol.to_ascii_uppercase(),
            };
            gens.push(GeneratorLabel {
                symbol,
                inverse_symbol,
                is_involution: g.involution,
            });
        }
        if gens.is_empty() {
            return Err(Error::invalid("presentation has no generators"));
        }
        let alphabet = Alphabet::new(gens)?;
        let rels: Vec<&str> = doc.relators.iter().map(String::as_str).collect();
        Self::new(name, alphabet, &rels)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let doc: PresentationDoc = serde_json::from_str(&text)?;
        Self::from_doc(format!("presentation:{}", path.display()), &doc)
    }

    pub fn to_doc(&self) -> PresentationDoc {
        PresentationDoc {
            generators: self
                .alphabet
                .generators()
                .iter()
                .map(|g| GeneratorDoc {
                    symbol: g.symbol.to_string(),
                    inverse: Some(g.inverse_symbol.to_string()),
                    involution: g.is_involution,
                })
                .collect(),
            relators: self
                .relators
                .iter()
                .map(|r| self.alphabet.format_word(r))
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Longest relator length `M`; involutions count as the relator `s^2`.
    pub fn max_relator_length(&self) -> usize {
        let inv = if self.alphabet.generators().iter().any(|g| g.is_involution) {
            2
        } else {
            0
        };
        self.relators.iter().map(Vec::len).max().unwrap_or(0).max(inv)
    }
}

/// Shortlex order: shorter words first, then lexicographic by letter index.
pub fn shortlex(u: &[Letter], v: &[Letter]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConfluenceStatus {
    Verified,
    Unverified { reason: String },
    /// A word with two distinct irreducible reducts.
    Refuted { word: String, left: String, right: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KbBounds {
    pub max_rule_len: usize,
    pub max_rules: usize,
    /// Cap on critical pairs examined.
    pub max_pairs: usize,
}

impl Default for KbBounds {
    fn default() -> Self {
        KbBounds {
            max_rule_len: 24,
            max_rules: 1000,
            max_pairs: 2_000_000,
        }
    }
}

/// A shortlex-terminating string rewriting system.
#[derive(Clone, Debug)]
pub struct RewritingSystem {
    alphabet: Alphabet,
    rules: Vec<Rule>,
    index: FxHashMap<Word, usize>,
    lengths: Vec<usize>,
    status: ConfluenceStatus,
}

impl RewritingSystem {
    /// Builds a system from rules, checking termination (every rule must
    /// decrease in shortlex) and confluence.
    pub fn from_rules(alphabet: Alphabet, rules: Vec<Rule>) -> Result<Self> {
        for r in &rules {
            if shortlex(&r.lhs, &r.rhs) != Ordering::Greater {
                return Err(Error::invalid(format!(
                    "rule {} -> {} does not decrease in shortlex order",
                    alphabet.format_word(&r.lhs),
                    alphabet.format_word(&r.rhs)
                )));
            }
        }
        let mut rs = Self::unchecked(alphabet, rules);
        rs.status = check_confluence(&rs);
        Ok(rs)
    }

    fn unchecked(alphabet: Alphabet, mut rules: Vec<Rule>) -> Self {
        rules.sort_by(|x, y| shortlex(&x.lhs, &y.lhs));
        rules.dedup_by(|x, y| x.lhs == y.lhs);
        let index = rules
            .iter()
            .enumerate()
            .map(|(i, r)| (r.lhs.clone(), i))
            .collect();
        let mut lengths: Vec<usize> = rules.iter().map(|r| r.lhs.len()).collect();
        lengths.sort_unstable();
        lengths.dedup();
        RewritingSystem {
            alphabet,
            rules,
            index,
            lengths,
            status: ConfluenceStatus::Unverified {
                reason: "not checked".into(),
            },
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Rules sorted by left-hand side in shortlex order.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn status(&self) -> &ConfluenceStatus {
        &self.status
    }

    pub fn is_verified(&self) -> bool {
        self.status == ConfluenceStatus::Verified
    }

    pub fn format_rules(&self) -> Vec<(String, String)> {
        self.rules
            .iter()
            .map(|r| (self.alphabet.format_word(&r.lhs), self.alphabet.format_word(&r.rhs)))
            .collect()
    }

    /// Rewrites to an irreducible word. Letters are shifted onto an output
    /// stack; whenever a suffix of the stack is a left-hand side it is
    /// replaced and the right-hand side is fed back as input.
    pub fn reduce(&self, word: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(word.len());
        let mut input: Vec<Letter> = word.iter().rev().copied().collect();
        while let Some(x) = input.pop() {
            out.push(x);
            for &len in &self.lengths {
                if len > out.len() {
                    break;
                }
                let start = out.len() - len;
                if let Some(&i) = self.index.get(&out[start..]) {
                    out.truncate(start);
                    input.extend(self.rules[i].rhs.iter().rev());
                    break;
                }
            }
        }
        out
    }
}

/// Irreducible form of a word under `rs`.
pub fn normal_form(rs: &RewritingSystem, word: &[Letter]) -> Word {
    rs.reduce(word)
}

fn overlaps(a: &Rule, b: &Rule, out: &mut Vec<(Word, Word, Word)>) {
    let (la, lb) = (&a.lhs, &b.lhs);
    for k in 1..la.len().min(lb.len()) {
        if la[la.len() - k..] == lb[..k] {
            let word = [&la[..], &lb[k..]].concat();
            let left = [&a.rhs[..], &lb[k..]].concat();
            let right = [&la[..la.len() - k], &b.rhs[..]].concat();
            out.push((word, left, right));
        }
    }
    if lb.len() < la.len() {
        for i in 0..=la.len() - lb.len() {
            if la[i..i + lb.len()] == lb[..] {
                let right = [&la[..i], &b.rhs[..], &la[i + lb.len()..]].concat();
                out.push((la.clone(), a.rhs.clone(), right));
            }
        }
    }
}

/// Checks local confluence over all critical pairs. With termination this
/// is confluence.
pub fn check_confluence(rs: &RewritingSystem) -> ConfluenceStatus {
    let mut pairs = Vec::new();
    for a in &rs.rules {
        for b in &rs.rules {
            pairs.clear();
            overlaps(a, b, &mut pairs);
            for (word, left, right) in &pairs {
                let (l, r) = (rs.reduce(left), rs.reduce(right));
                if l != r {
                    return ConfluenceStatus::Refuted {
                        word: rs.alphabet.format_word(word),
                        left: rs.alphabet.format_word(&l),
                        right: rs.alphabet.format_word(&r),
                    };
                }
            }
        }
    }
    ConfluenceStatus::Verified
}

struct Completion {
    rules: Vec<Option<Rule>>,
    index: FxHashMap<Word, usize>,
    lengths: Vec<usize>,
}

impl Completion {
    fn reduce(&self, word: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(word.len());
        let mut input: Vec<Letter> = word.iter().rev().copied().collect();
        while let Some(x) = input.pop() {
            out.push(x);
            for &len in &self.lengths {
                if len > out.len() {
                    break;
                }
                let start = out.len() - len;
                if let Some(&i) = self.index.get(&out[start..]) {
                    out.truncate(start);
                    let rhs = &self.rules[i].as_ref().expect("indexed rule").rhs;
                    input.extend(rhs.iter().rev());
                    break;
                }
            }
        }
        out
    }

    fn refresh_lengths(&mut self) {
        let set: FxHashSet<usize> = self.index.keys().map(Vec::len).collect();
        self.lengths = set.into_iter().collect();
        self.lengths.sort_unstable();
    }

    fn active(&self) -> usize {
        self.index.len()
    }
}

/// Knuth-Bendix completion for shortlex order. Critical pairs are processed
/// first in, first out. If a bound is hit the partial system is returned with
/// status `Unverified`; a `Verified` status is only set after an exhaustive
/// critical-pair check.
pub fn kb_complete(p: &Presentation, bounds: KbBounds) -> Result<RewritingSystem> {
    if bounds.max_rule_len == 0 || bounds.max_rules == 0 {
        return Err(Error::invalid("completion bounds must be positive"));
    }
    let alphabet = p.alphabet().clone();
    let mut pending: VecDeque<(Word, Word)> = VecDeque::new();
    for s in alphabet.letters() {
        pending.push_back((vec![s, alphabet.inverse(s)], Vec::new()));
    }
    for r in p.relators() {
        pending.push_back((r.clone(), Vec::new()));
    }
    let mut kb = Completion {
        rules: Vec::new(),
        index: FxHashMap::default(),
        lengths: Vec::new(),
    };
    let mut examined = 0usize;
    let mut stop: Option<String> = None;
    let mut scratch = Vec::new();
    while let Some((u, v)) = pending.pop_front() {
        examined += 1;
        if examined > bounds.max_pairs {
            stop = Some(format!("more than {} critical pairs", bounds.max_pairs));
            break;
        }
        let (u, v) = (kb.reduce(&u), kb.reduce(&v));
        let (lhs, rhs) = match shortlex(&u, &v) {
            Ordering::Equal => continue,
            Ordering::Greater => (u, v),
            Ordering::Less => (v, u),
        };
        if lhs.len() > bounds.max_rule_len {
            stop = Some(format!(
                "rule {} -> {} is longer than {}",
                alphabet.format_word(&lhs),
                alphabet.format_word(&rhs),
                bounds.max_rule_len
            ));
            break;
        }
        // retire rules whose left side the new rule rewrites
        let mut retired = Vec::new();
        for (i, slot) in kb.rules.iter_mut().enumerate() {
            if let Some(r) = slot {
                if r.lhs.windows(lhs.len()).any(|w| w == &lhs[..]) {
                    retired.push(i);
                    pending.push_back((r.lhs.clone(), r.rhs.clone()));
                }
            }
        }
        for i in retired {
            let r = kb.rules[i].take().expect("active rule");
            kb.index.remove(&r.lhs);
        }
        let id = kb.rules.len();
        kb.index.insert(lhs.clone(), id);
        kb.rules.push(Some(Rule { lhs, rhs }));
        kb.refresh_lengths();
        for i in 0..kb.rules.len() {
            if kb.rules[i].is_some() {
                let rhs = kb.reduce(&kb.rules[i].as_ref().expect("active").rhs);
                kb.rules[i].as_mut().expect("active").rhs = rhs;
            }
        }
        if kb.active() > bounds.max_rules {
            stop = Some(format!("more than {} rules", bounds.max_rules));
            break;
        }
        let new = kb.rules[id].clone().expect("new rule");
        for other in kb.rules.iter().flatten() {
            scratch.clear();
            overlaps(&new, other, &mut scratch);
            if other.lhs != new.lhs {
                overlaps(other, &new, &mut scratch);
            }
            for (_, l, r) in scratch.drain(..) {
                pending.push_back((l, r));
            }
        }
    }
    let rules: Vec<Rule> = kb.rules.into_iter().flatten().collect();
    let mut rs = RewritingSystem::unchecked(alphabet, rules);
    rs.status = match stop {
        Some(reason) => ConfluenceStatus::Unverified { reason },
        None => check_confluence(&rs),
    };
    Ok(rs)
}

/// A group whose elements are the normal forms of a verified confluent
/// rewriting system.
#[derive(Clone, Debug)]
pub struct RewritingModel {
    name: String,
    rs: RewritingSystem,
}

impl RewritingModel {
    /// Refuses systems whose confluence is not verified, since their normal
    /// forms need not be unique.
    pub fn new(name: impl Into<String>, rs: RewritingSystem) -> Result<Self> {
        match rs.status() {
            ConfluenceStatus::Verified => Ok(RewritingModel {
                name: name.into(),
                rs,
            }),
            ConfluenceStatus::Unverified { reason } => Err(Error::Unverified(reason.clone())),
            ConfluenceStatus::Refuted { word, left, right } => Err(Error::Unverified(format!(
                "{word} reduces to both {left} and {right}"
            ))),
        }
    }

    pub fn system(&self) -> &RewritingSystem {
        &self.rs
    }
}

impl GroupModel for RewritingModel {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn alphabet(&self) -> &Alphabet {
        self.rs.alphabet()
    }

    fn identity(&self) -> VertexKey {
        VertexKey::default()
    }

    fn act(&self, g: &VertexKey, s: Letter) -> VertexKey {
        let mut w = g.as_bytes().to_vec();
        w.push(s);
        VertexKey::from_bytes(&self.rs.reduce(&w))
    }

    fn describe(&self, g: &VertexKey) -> String {
        self.rs.alphabet().format_word(g.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(alphabet: Alphabet, rels: &[&str]) -> RewritingSystem {
        let p = Presentation::new("t", alphabet, rels).unwrap();
        kb_complete(&p, KbBounds::default()).unwrap()
    }

    #[test]
    fn free_group_rules_are_cancellations() {
        let a = Alphabet::standard(2);
        let rs = complete(a.clone(), &[]);
        assert!(rs.is_verified());
        assert_eq!(rs.rules().len(), 4);
        let w = a.parse_word("aAb").unwrap();
        assert_eq!(a.format_word(&normal_form(&rs, &w)), "b");
    }

    #[test]
    fn modular_group() {
        let a = Alphabet::new(vec![GeneratorLabel::involution('a'), GeneratorLabel::standard('b')]).unwrap();
        let rs = complete(a.clone(), &["bbb"]);
        assert!(rs.is_verified());
        let nf = |s: &str| a.format_word(&normal_form(&rs, &a.parse_word(s).unwrap()));
        assert_eq!(nf("aabbb"), "e");
        assert_eq!(nf("bbbb"), "b");
        assert_eq!(nf("bb"), "B");
        let w = a.parse_word("abBabab").unwrap();
        let once = normal_form(&rs, &w);
        assert_eq!(normal_form(&rs, &once), once);
    }

    #[test]
    fn abelian_completion() {
        let a = Alphabet::standard(2);
        let rs = complete(a.clone(), &["abAB"]);
        assert!(rs.is_verified());
        let nf = |s: &str| a.format_word(&normal_form(&rs, &a.parse_word(s).unwrap()));
        assert_eq!(nf("babA"), nf("bb"));
    }

    #[test]
    fn bounds_give_unverified() {
        let a = Alphabet::standard(4);
        let p = Presentation::new("t", a, &["abAdcD"]).unwrap();
        let rs = kb_complete(
            &p,
            KbBounds {
                max_rule_len: 10,
                ..KbBounds::default()
            },
        )
        .unwrap();
        assert!(matches!(rs.status(), ConfluenceStatus::Unverified { .. }));
        assert!(RewritingModel::new("t", rs).is_err());
    }

    #[test]
    fn refuted_systems_name_a_witness() {
        let a = Alphabet::standard(2);
        let rules = vec![
            Rule { lhs: vec![0, 2], rhs: vec![2] },
            Rule { lhs: vec![2, 2], rhs: vec![0] },
        ];
        let rs = RewritingSystem::from_rules(a, rules).unwrap();
        assert!(matches!(rs.status(), ConfluenceStatus::Refuted { .. }));
    }

    #[test]
    fn presentation_json() {
        let doc: PresentationDoc = serde_json::from_str(
            r#"{"generators": [{"symbol": "a", "inverse": "A", "involution": false},
                               {"symbol": "b", "involution": false}],
                "relators": ["abAB"]}"#,
        )
        .unwrap();
        let p = Presentation::from_doc("z2", &doc).unwrap();
        assert_eq!(p.max_relator_length(), 4);
        assert_eq!(Presentation::from_doc("z2", &p.to_doc()).unwrap(), p);
        let bad: PresentationDoc =
            serde_json::from_str(r#"{"generators": [{"symbol": "a"}], "relators": ["aA"]}"#).unwrap();
        assert!(Presentation::from_doc("x", &bad).is_err());
    }
}
