use super::{Alphabet, GeneratorLabel, GroupModel, Letter, Word};
use crate::error::{Error, Result};
use crate::graph::VertexKey;

/// Appends `s` to a freely reduced word, cancelling if it ends in `s^-1`.
fn push_reduced(alphabet: &Alphabet, word: &mut Vec<u8>, s: Letter) {
    if word.last() == Some(&alphabet.inverse(s)) {
        word.pop();
    } else {
        word.push(s);
    }
}

/// The free group on `rank` generators. Elements are freely reduced words,
/// keyed by their letters.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    alphabet: Alphabet,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup {
            alphabet: Alphabet::standard(rank),
        }
    }

    pub fn rank(&self) -> usize {
        self.alphabet.generators().len()
    }
}

impl GroupModel for FreeGroup {
    fn name(&self) -> String {
        format!("free:{}", self.rank())
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> VertexKey {
        VertexKey::default()
    }

    fn act(&self, g: &VertexKey, s: Letter) -> VertexKey {
        let mut w = g.as_bytes().to_vec();
        push_reduced(&self.alphabet, &mut w, s);
        VertexKey::from_bytes(&w)
    }

    fn describe(&self, g: &VertexKey) -> String {
        self.alphabet.format_word(g.as_bytes())
    }
}

/// A free product of finite cyclic groups `Z_{o_1} * Z_{o_2} * ...`, each
/// factor generated by one letter. Order-2 generators are involutions.
///
/// Elements are alternating syllable sequences `(factor, exponent)` with
/// `0 < exponent < order`.
#[derive(Clone, Debug)]
pub struct FreeProduct {
    orders: Vec<u8>,
    alphabet: Alphabet,
}

impl FreeProduct {
    pub fn new(orders: &[u32]) -> Result<Self> {
        if orders.is_empty() || orders.len() > 25 {
            return Err(Error::invalid("free product needs 1 to 25 factors"));
        }
        if let Some(o) = orders.iter().find(|&&o| !(2..=255).contains(&o)) {
            return Err(Error::invalid(format!("factor order {o} outside 2..=255")));
        }
        let standard = Alphabet::standard(orders.len());
        let gens = standard
            .generators()
            .iter()
            .zip(orders)
            .map(|(g, &o)| {
                if o == 2 {
                    GeneratorLabel::involution(g.symbol)
                } else {
                    g.clone()
                }
            })
            .collect();
        Ok(FreeProduct {
            orders: orders.iter().map(|&o| o as u8).collect(),
            alphabet: Alphabet::new(gens)?,
        })
    }

    pub fn orders(&self) -> &[u8] {
        &self.orders
    }

    fn syllables(g: &VertexKey) -> Vec<(u8, u8)> {
        g.as_bytes().chunks(2).map(|c| (c[0], c[1])).collect()
    }
}

impl GroupModel for FreeProduct {
    fn name(&self) -> String {
        let o: Vec<String> = self.orders.iter().map(u8::to_string).collect();
        format!("free_product:{}", o.join(","))
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> VertexKey {
        VertexKey::default()
    }

    fn act(&self, g: &VertexKey, s: Letter) -> VertexKey {
        let f = self.alphabet.generator_of(s) as u8;
        let order = self.orders[f as usize] as u32;
        let step = if self.alphabet.is_positive(s) { 1 } else { order - 1 };
        let mut syl = Self::syllables(g);
        match syl.last_mut() {
            Some((lf, e)) if *lf == f => {
                let x = (*e as u32 + step) % order;
                if x == 0 {
                    syl.pop();
                } else {
                    *e = x as u8;
                }
            }
            _ => syl.push((f, step as u8)),
        }
        let bytes: Vec<u8> = syl.iter().flat_map(|&(f, e)| [f, e]).collect();
        VertexKey::from_bytes(&bytes)
    }

    fn describe(&self, g: &VertexKey) -> String {
        let syl = Self::syllables(g);
        if syl.is_empty() {
            return "e".into();
        }
        let mut out = String::new();
        for (f, e) in syl {
            let order = self.orders[f as usize];
            let g = &self.alphabet.generators()[f as usize];
            // write each syllable with its shorter spelling
            let (sym, reps) = if 2 * e <= order {
                (g.symbol, e)
            } else {
                (g.inverse_symbol, order - e)
            };
            out.extend(std::iter::repeat(sym).take(reps as usize));
        }
        out
    }
}

/// A free group on a base alphabet, generated by a second alphabet whose
/// letters act as fixed words in the base. Covers groups that are free with a
/// known free basis but presented with extra generators.
#[derive(Clone, Debug)]
pub struct FreeBasisModel {
    name: String,
    base: Alphabet,
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl FreeBasisModel {
    /// `images[i]` is the base word for the `i`-th generator of `alphabet`.
    pub fn new(
        name: impl Into<String>,
        base: Alphabet,
        alphabet: Alphabet,
        images: &[&str],
    ) -> Result<Self> {
        if images.len() != alphabet.generators().len() {
            return Err(Error::invalid("one image word per generator required"));
        }
        let mut per_letter = vec![Vec::new(); alphabet.len()];
        for (i, text) in images.iter().enumerate() {
            let mut w = Vec::new();
            for l in base.parse_word(text)? {
                push_reduced(&base, &mut w, l);
            }
            if w.is_empty() {
                return Err(Error::invalid(format!("generator image {text:?} is trivial")));
            }
            let sym = alphabet.generators()[i].symbol;
            let l = alphabet.letter(sym).expect("declared generator");
            per_letter[alphabet.inverse(l) as usize] = base.inverse_word(&w);
            per_letter[l as usize] = w;
        }
        Ok(FreeBasisModel {
            name: name.into(),
            base,
            alphabet,
            images: per_letter,
        })
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }
}

impl GroupModel for FreeBasisModel {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> VertexKey {
        VertexKey::default()
    }

    fn act(&self, g: &VertexKey, s: Letter) -> VertexKey {
        let mut w = g.as_bytes().to_vec();
        for &l in &self.images[s as usize] {
            push_reduced(&self.base, &mut w, l);
        }
        VertexKey::from_bytes(&w)
    }

    fn describe(&self, g: &VertexKey) -> String {
        self.base.format_word(g.as_bytes())
    }
}
