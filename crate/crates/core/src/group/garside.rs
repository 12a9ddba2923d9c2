use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Alphabet, GroupModel, Letter};
use crate::error::{Error, Result};
use crate::graph::VertexKey;

/// A permutation braid, stored as the image array of a permutation of
/// `0..n`. Right multiplication by the generator `σ_i` swaps positions
/// `i-1` and `i`.
pub type Permutation = Vec<u8>;

fn identity_perm(n: usize) -> Permutation {
    (0..n as u8).collect()
}

fn delta(n: usize) -> Permutation {
    (0..n as u8).rev().collect()
}

fn is_identity(p: &[u8]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x as usize)
}

fn is_delta(p: &[u8]) -> bool {
    let n = p.len();
    p.iter().enumerate().all(|(i, &x)| n - 1 - i == x as usize)
}

/// Generators `σ_i` with `ℓ(p σ_i) < ℓ(p)`.
fn finishing(p: &[u8], i: usize) -> bool {
    p[i - 1] > p[i]
}

/// Generators `σ_i` with `ℓ(σ_i p) < ℓ(p)`: value `i` precedes value `i-1`.
fn starting(inv: &[u8], i: usize) -> bool {
    inv[i - 1] > inv[i]
}

fn inverse(p: &[u8]) -> Permutation {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

/// Conjugation by `Δ`: `i -> n-1-p(n-1-i)`.
fn flip(p: &[u8]) -> Permutation {
    let n = p.len();
    (0..n).map(|i| (n - 1) as u8 - p[n - 1 - i]).collect()
}

/// Left-weights the pair `(a, b)` in place; returns whether anything moved.
fn left_weight(a: &mut [u8], b: &mut [u8]) -> bool {
    let n = a.len();
    let mut moved = false;
    loop {
        let inv_b = inverse(b);
        let Some(i) = (1..n).find(|&i| starting(&inv_b, i) && !finishing(a, i)) else {
            return moved;
        };
        // a <- a σ_i, b <- σ_i^-1 b
        a.swap(i - 1, i);
        let (p, q) = (inv_b[i - 1] as usize, inv_b[i] as usize);
        b[p] = i as u8;
        b[q] = (i - 1) as u8;
        moved = true;
    }
}

/// Left normal form `Δ^inf A_1 ... A_k` of a braid: each `A_j` is a proper
/// nontrivial permutation braid and every adjacent pair is left-weighted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GarsideElement {
    pub strands: usize,
    pub inf: i32,
    pub factors: Vec<Permutation>,
}

impl GarsideElement {
    pub fn identity(strands: usize) -> Self {
        GarsideElement {
            strands,
            inf: 0,
            factors: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// Right multiplication by `σ_i` (`i > 0`) or `σ_{-i}^-1` (`i < 0`).
    pub fn mul_generator(&mut self, i: i32) {
        let n = self.strands;
        let k = i.unsigned_abs() as usize;
        debug_assert!((1..n).contains(&k));
        if i > 0 {
            let mut s = identity_perm(n);
            s.swap(k - 1, k);
            self.factors.push(s);
        } else {
            // σ_k^-1 = Δ^-1 (Δ σ_k^-1), and A Δ^-1 = Δ^-1 τ(A)
            self.inf -= 1;
            for f in &mut self.factors {
                *f = flip(f);
            }
            let mut x = delta(n);
            x.swap(k - 1, k);
            self.factors.push(x);
        }
        self.normalize();
    }

    fn normalize(&mut self) {
        loop {
            let mut moved = false;
            for j in (1..self.factors.len()).rev() {
                let (left, right) = self.factors.split_at_mut(j);
                moved |= left_weight(&mut left[j - 1], &mut right[0]);
            }
            if !moved {
                break;
            }
        }
        let leading = self.factors.iter().take_while(|f| is_delta(f)).count();
        self.factors.drain(..leading);
        self.inf += leading as i32;
        while self.factors.last().is_some_and(|f| is_identity(f)) {
            self.factors.pop();
        }
    }

    pub fn canonical_key(&self) -> VertexKey {
        let mut w = VertexKey::writer().i32(self.inf);
        for f in &self.factors {
            w = w.bytes(f);
        }
        w.finish()
    }

    pub fn from_key(strands: usize, key: &VertexKey) -> Self {
        let mut r = key.reader();
        let inf = r.i32().expect("braid key");
        let factors = r.rest().chunks(strands).map(<[u8]>::to_vec).collect();
        GarsideElement {
            strands,
            inf,
            factors,
        }
    }
}

impl fmt::Display for GarsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D^{}", self.inf)?;
        for p in &self.factors {
            let s: Vec<String> = p.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, " [{}]", s.join(""))?;
        }
        Ok(())
    }
}

/// Garside normal form of the braid word `σ_{|w_1|}^{±1} σ_{|w_2|}^{±1} ...`
/// on `n` strands (negative entries are inverses).
pub fn garside_normal_form(n: usize, word: &[i32]) -> Result<GarsideElement> {
    if !(2..=32).contains(&n) {
        return Err(Error::invalid(format!("strand count {n} outside 2..=32")));
    }
    let mut g = GarsideElement::identity(n);
    for &i in word {
        if i == 0 || i.unsigned_abs() as usize >= n {
            return Err(Error::invalid(format!(
                "generator index {i} outside 1..={} for {n} strands",
                n - 1
            )));
        }
        g.mul_generator(i);
    }
    Ok(g)
}

/// The braid group `B_n` with Artin generators: letter `a` is `σ_1`, `b` is
/// `σ_2`, and so on; uppercase letters are inverses. Elements are keyed by
/// their Garside normal form.
#[derive(Clone, Debug)]
pub struct BraidModel {
    strands: usize,
    alphabet: Alphabet,
}

impl BraidModel {
    pub fn new(strands: usize) -> Result<Self> {
        if !(2..=26).contains(&strands) {
            return Err(Error::invalid(format!("strand count {strands} outside 2..=26")));
        }
        Ok(BraidModel {
            strands,
            alphabet: Alphabet::standard(strands - 1),
        })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// Signed Artin index of a letter.
    pub fn artin_index(&self, s: Letter) -> i32 {
        let i = self.alphabet.generator_of(s) as i32 + 1;
        if self.alphabet.is_positive(s) {
            i
        } else {
            -i
        }
    }
}

impl GroupModel for BraidModel {
    fn name(&self) -> String {
        format!("braid:{}", self.strands)
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> VertexKey {
        GarsideElement::identity(self.strands).canonical_key()
    }

    fn act(&self, g: &VertexKey, s: Letter) -> VertexKey {
        let mut e = GarsideElement::from_key(self.strands, g);
        e.mul_generator(self.artin_index(s));
        e.canonical_key()
    }

    fn describe(&self, g: &VertexKey) -> String {
        GarsideElement::from_key(self.strands, g).to_string()
    }
}
