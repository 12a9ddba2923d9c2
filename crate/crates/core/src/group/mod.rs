//! Group models whose Cayley graphs serve as neighbor oracles.
//!
//! Elements are represented by canonical keys. Structural models (integer
//! vectors, Heisenberg triples, reduced words, Garside normal forms) compute
//! keys directly; finitely presented groups go through a verified-confluent
//! rewriting system.

pub mod builtin;
mod free;
mod garside;
mod heisenberg;
mod lattice;
mod rewriting;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use builtin::{
    builtin_model, builtin_oracle, builtin_presentation, one_relator_free_basis,
    one_relator_presentation, rewriting_model, GraphDescriptor,
};
pub use free::{FreeBasisModel, FreeGroup, FreeProduct};
pub use garside::{garside_normal_form, BraidModel, GarsideElement, Permutation};
pub use heisenberg::Heisenberg;
pub use lattice::{Hex, Zd};
pub use rewriting::{
    check_confluence, kb_complete, normal_form, ConfluenceStatus, KbBounds, Presentation,
    PresentationDoc, RewritingModel, RewritingSystem, Rule,
};

use crate::error::{Error, Result};
use crate::graph::{bfs, Limits, NeighborOracle, VertexKey};

/// A generator together with its inverse symbol. An involution is its own
/// inverse and contributes a single letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorLabel {
    pub symbol: char,
    pub inverse_symbol: char,
    pub is_involution: bool,
}

impl GeneratorLabel {
    /// Lowercase symbol with the uppercase letter as inverse.
    pub fn standard(symbol: char) -> Self {
        GeneratorLabel {
            symbol,
            inverse_symbol: symbol.to_ascii_uppercase(),
            is_involution: false,
        }
    }

    pub fn involution(symbol: char) -> Self {
        GeneratorLabel {
            symbol,
            inverse_symbol: symbol,
            is_involution: true,
        }
    }
}

/// A letter of the symmetric generating set `S = S^-1`, as an index into an
/// [`Alphabet`].
pub type Letter = u8;

/// A word over an alphabet's letters.
pub type Word = Vec<Letter>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct LetterInfo {
    symbol: char,
    generator: usize,
    inverse: Letter,
}

/// Letters of a symmetric generating set in declaration order: each
/// generator followed by its inverse (involutions contribute one letter).
/// This order also drives shortlex comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    generators: Vec<GeneratorLabel>,
    letters: Vec<LetterInfo>,
}

impl Alphabet {
    pub fn new(generators: Vec<GeneratorLabel>) -> Result<Self> {
        let mut letters = Vec::new();
        let mut seen = BTreeSet::new();
        for (g, label) in generators.iter().enumerate() {
            let mut symbols = vec![label.symbol];
            if !label.is_involution {
                symbols.push(label.inverse_symbol);
            } else if label.inverse_symbol != label.symbol {
                return Err(Error::invalid(format!(
                    "involution {:?} must be its own inverse",
                    label.symbol
                )));
            }
            for s in symbols {
                if matches!(s, 'e' | '1' | '^' | '-') || !s.is_alphanumeric() {
                    return Err(Error::invalid(format!("reserved generator symbol {s:?}")));
                }
                if !seen.insert(s) {
                    return Err(Error::invalid(format!("generator symbol {s:?} declared twice")));
                }
            }
            let base = letters.len() as Letter;
            if label.is_involution {
                letters.push(LetterInfo {
                    symbol: label.symbol,
                    generator: g,
                    inverse: base,
                });
            } else {
                letters.push(LetterInfo {
                    symbol: label.symbol,
                    generator: g,
                    inverse: base + 1,
                });
                letters.push(LetterInfo {
                    symbol: label.inverse_symbol,
                    generator: g,
                    inverse: base,
                });
            }
        }
        if letters.len() > Letter::MAX as usize {
            return Err(Error::invalid("too many generators"));
        }
        Ok(Alphabet {
            generators,
            letters,
        })
    }

    /// `count` generators named `a, b, c, ...` with uppercase inverses.
    pub fn standard(count: usize) -> Self {
        assert!(count <= 25, "at most 25 standard generators");
        let gens = (0..count)
            .map(|i| {
                // skip 'e', which names the identity
                let c = (b'a' + i as u8 + u8::from(i >= 4)) as char;
                GeneratorLabel::standard(c)
            })
            .collect();
        Alphabet::new(gens).expect("standard alphabet")
    }

    pub fn generators(&self) -> &[GeneratorLabel] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.letters.len() as Letter
    }

    pub fn inverse(&self, l: Letter) -> Letter {
        self.letters[l as usize].inverse
    }

    pub fn symbol(&self, l: Letter) -> char {
        self.letters[l as usize].symbol
    }

    /// Index of the generator a letter belongs to.
    pub fn generator_of(&self, l: Letter) -> usize {
        self.letters[l as usize].generator
    }

    /// Whether a letter is a declared generator (as opposed to an inverse).
    pub fn is_positive(&self, l: Letter) -> bool {
        self.generators[self.generator_of(l)].symbol == self.symbol(l)
    }

    pub fn letter(&self, symbol: char) -> Option<Letter> {
        self.letters
            .iter()
            .position(|i| i.symbol == symbol)
            .map(|p| p as Letter)
    }

    /// Parses a word. `e`, `1` or the empty string denote the identity;
    /// whitespace and `.` are ignored; `x^k` repeats a letter (negative `k`
    /// uses the inverse).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() || t == "e" || t == "1" {
            return Ok(Vec::new());
        }
        let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace() && *c != '.').collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let l = self
                .letter(c)
                .ok_or_else(|| Error::invalid(format!("unknown generator {c:?} in {text:?}")))?;
            i += 1;
            let mut reps: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let exp: String = chars[start..i].iter().collect();
                reps = exp
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad exponent in {text:?}")))?;
            }
            let letter = if reps < 0 { self.inverse(l) } else { l };
            for _ in 0..reps.unsigned_abs() {
                out.push(letter);
            }
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "e".into();
        }
        w.iter().map(|&l| self.symbol(l)).collect()
    }

    pub fn inverse_word(&self, w: &[Letter]) -> Word {
        w.iter().rev().map(|&l| self.inverse(l)).collect()
    }
}

/// A group with a finite symmetric generating set, acting on canonical
/// element keys by right multiplication.
///
/// `act(act(g, s), s^-1)` must have the key of `g`; keys are canonical, so
/// two keys are equal iff the elements are.
pub trait GroupModel: Send + Sync {
    fn name(&self) -> String;

    fn alphabet(&self) -> &Alphabet;

    fn identity(&self) -> VertexKey;

    /// Key of `g * s` for the generator letter `s`.
    fn act(&self, g: &VertexKey, s: Letter) -> VertexKey;

    fn describe(&self, g: &VertexKey) -> String;

    /// Key of the element a word represents, evaluated left to right from the
    /// identity.
    fn evaluate(&self, word: &[Letter]) -> VertexKey {
        word.iter()
            .fold(self.identity(), |g, &s| self.act(&g, s))
    }

    fn evaluate_str(&self, text: &str) -> Result<VertexKey> {
        let w = self.alphabet().parse_word(text)?;
        Ok(self.evaluate(&w))
    }
}

/// The Cayley graph of a group model: `g` is adjacent to `g s` for every
/// letter `s`. Duplicate neighbors (from involutions or coinciding
/// generators) are merged and self-loops dropped.
#[derive(Clone)]
pub struct CayleyGraph {
    model: Arc<dyn GroupModel>,
}

impl CayleyGraph {
    pub fn new(model: Arc<dyn GroupModel>) -> Self {
        CayleyGraph { model }
    }

    pub fn model(&self) -> &Arc<dyn GroupModel> {
        &self.model
    }
}

/// The Cayley graph of a model, as a neighbor oracle.
pub fn cayley_oracle(model: Arc<dyn GroupModel>) -> CayleyGraph {
    CayleyGraph::new(model)
}

impl NeighborOracle for CayleyGraph {
    fn descriptor(&self) -> String {
        self.model.name()
    }

    fn origin(&self) -> VertexKey {
        self.model.identity()
    }

    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let mut out: Vec<VertexKey> = Vec::with_capacity(self.model.alphabet().len());
        for s in self.model.alphabet().letters() {
            let w = self.model.act(v, s);
            if &w != v && !out.contains(&w) {
                out.push(w);
            }
        }
        out
    }

    fn valence_bound(&self) -> Option<usize> {
        Some(self.model.alphabet().len())
    }

    fn label(&self, v: &VertexKey) -> String {
        self.model.describe(v)
    }

    fn resolve(&self, text: &str) -> Result<VertexKey> {
        self.model.evaluate_str(text)
    }
}

/// All elements of word length at most `radius`, with their lengths, sorted
/// by key.
pub fn ball(model: Arc<dyn GroupModel>, radius: u32, limits: &Limits) -> Result<Vec<(VertexKey, u32)>> {
    let graph = CayleyGraph::new(model);
    let field = bfs(&graph, &graph.origin(), radius, limits)?;
    Ok(field
        .sorted_entries()
        .into_iter()
        .map(|(k, d)| (k.clone(), d))
        .collect())
}

/// Number of elements at each word length `0..=radius`.
pub fn sphere_sizes(oracle: &dyn NeighborOracle, center: &VertexKey, radius: u32, limits: &Limits) -> Result<Vec<usize>> {
    let field = bfs(oracle, center, radius, limits)?;
    let mut sizes = vec![0; radius as usize + 1];
    for i in 0..field.len() {
        sizes[field.dist_at(i) as usize] += 1;
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_alphabet_skips_e() {
        let a = Alphabet::standard(5);
        let syms: String = a.letters().map(|l| a.symbol(l)).collect();
        assert_eq!(syms, "aAbBcCdDfF");
        assert_eq!(a.inverse(a.letter('d').unwrap()), a.letter('D').unwrap());
    }

    #[test]
    fn word_parsing() {
        let a = Alphabet::standard(2);
        assert_eq!(a.parse_word("e").unwrap(), Vec::<Letter>::new());
        assert_eq!(a.format_word(&a.parse_word("ab^3A").unwrap()), "abbbA");
        assert_eq!(a.format_word(&a.parse_word("b^-2 a").unwrap()), "BBa");
        assert!(a.parse_word("ax").is_err());
        let w = a.parse_word("abAB").unwrap();
        assert_eq!(a.format_word(&a.inverse_word(&w)), "baBA");
    }

    #[test]
    fn involutions_contribute_one_letter() {
        let a = Alphabet::new(vec![GeneratorLabel::involution('a'), GeneratorLabel::standard('b')]).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.inverse(0), 0);
        assert!(Alphabet::new(vec![GeneratorLabel::standard('a'), GeneratorLabel::standard('a')]).is_err());
        assert!(Alphabet::new(vec![GeneratorLabel::standard('e')]).is_err());
    }
}
