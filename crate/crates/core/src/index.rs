//! Exact index combinatorics.
//!
//! An [`Index`] is a tuple of positive exponents `(k_1, ..., k_d)`. Admissible
//! indices are in bijection with binary words starting with `1` and ending
//! with `0` in two ways: the *index* map `λ` cuts a word before every `1`,
//! and the *block index* map `β` drops the leading `1`, appends a `1`, and
//! cuts between equal neighbours. The block decomposition is `bl = β ∘ λ⁻¹`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite sequence of positive integer exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if let Some(pos) = parts.iter().position(|&k| k == 0) {
            return Err(Error::InvalidIndex(format!(
                "part {} is zero in ({})",
                pos + 1,
                join(&parts)
            )));
        }
        Ok(Index(parts))
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    /// `({value}^count)`.
    pub fn repeated(value: u32, count: usize) -> Result<Self> {
        Index::new(vec![value; count])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn height(&self) -> usize {
        self.0.iter().filter(|&&k| k >= 2).count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Empty, or the last part is at least 2.
    pub fn is_admissible(&self) -> bool {
        self.0.last().is_none_or(|&k| k >= 2)
    }

    pub fn is_maximal_height(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|&k| k >= 2)
    }

    pub fn reversed(&self) -> Index {
        Index(self.0.iter().rev().copied().collect())
    }

    /// Parts `[from, to)` as a new index.
    pub fn slice(&self, from: usize, to: usize) -> Index {
        Index(self.0[from..to].to_vec())
    }

    pub fn concat(&self, other: &Index) -> Index {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Index(parts)
    }

    pub fn to_signed(&self) -> SignedIndex {
        SignedIndex(self.0.iter().map(|&k| (k, Sign::Plus)).collect())
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::NotAdmissible(self.to_string()))
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.0))
    }
}

impl FromStr for Index {
    type Err = Error;

    /// Comma-separated positive integers; the empty string (or `()`) is the empty index.
    fn from_str(s: &str) -> Result<Self> {
        let signed: SignedIndex = s.parse()?;
        if signed.parts().iter().any(|&(_, e)| e == Sign::Minus) {
            return Err(Error::Parse(format!("unexpected bar in unsigned index '{s}'")));
        }
        Ok(Index(signed.parts().iter().map(|&(k, _)| k).collect()))
    }
}

fn join(parts: &[u32]) -> String {
    parts
        .iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Sign `ε ∈ {+1, -1}` attached to a part; `Minus` is written as a bar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// An index whose parts carry signs (the alternating MZV argument).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct SignedIndex(Vec<(u32, Sign)>);

impl SignedIndex {
    pub fn new(parts: Vec<(u32, Sign)>) -> Result<Self> {
        if parts.iter().any(|&(k, _)| k == 0) {
            return Err(Error::InvalidIndex("zero part in signed index".into()));
        }
        Ok(SignedIndex(parts))
    }

    pub fn parts(&self) -> &[(u32, Sign)] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&(k, _)| k).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The defining series converges unless the last part is an unbarred 1.
    pub fn is_convergent(&self) -> bool {
        self.0.last() != Some(&(1, Sign::Plus))
    }

    pub fn unsigned(&self) -> Index {
        Index(self.0.iter().map(|&(k, _)| k).collect())
    }

    pub fn is_unsigned(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == Sign::Plus)
    }
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .0
            .iter()
            .map(|&(k, e)| match e {
                Sign::Plus => k.to_string(),
                Sign::Minus => format!("{k}b"),
            })
            .collect::<Vec<_>>()
            .join(",");
        f.write_str(&s)
    }
}

impl FromStr for SignedIndex {
    type Err = Error;

    /// Comma-separated parts, each optionally suffixed with `b` for a bar: `3,3,1,2b`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(t)
            .trim();
        if t.is_empty() {
            return Ok(SignedIndex::default());
        }
        let mut parts = Vec::new();
        for piece in t.split(',') {
            let piece = piece.trim();
            let (digits, sign) = match piece.strip_suffix('b') {
                Some(d) => (d, Sign::Minus),
                None => (piece, Sign::Plus),
            };
            let k: u32 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad index part '{piece}' in '{s}'")))?;
            if k == 0 {
                return Err(Error::Parse(format!("index parts must be positive in '{s}'")));
            }
            parts.push((k, sign));
        }
        Ok(SignedIndex(parts))
    }
}

/// A 0/1 word; members of `𝕎₀,₁` start with 1 and end with 0 (or are empty).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::MalformedWord(format!("{bits:?} contains a non-binary digit")));
        }
        Ok(BinaryWord(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Membership in `𝕎₀,₁`.
    pub fn is_w01(&self) -> bool {
        self.0.is_empty() || (self.0[0] == 1 && *self.0.last().unwrap() == 0)
    }

    fn require_w01(&self) -> Result<()> {
        if self.is_w01() {
            Ok(())
        } else {
            Err(Error::MalformedWord(format!(
                "'{self}' must start with 1 and end with 0"
            )))
        }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .filter(|c| *c != ',' && !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("'{c}' is not a binary digit"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BinaryWord::new(bits)
    }
}

/// Classes of indices; they nest, so [`classify`] returns a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IndexClass {
    /// `𝕀`: last part at least 2 (or empty).
    Admissible,
    /// `𝕀_m.h.`: nonempty, every part at least 2.
    MaximalHeight,
    /// `𝕀_oe`: nonempty, all parts odd except the last, which is even.
    OddOddEven,
    /// `𝕀_≥3`: nonempty, every part at least 3.
    AllAtLeast3,
    /// `𝕀_{1{13}2}`: `(1, ℓ_2, ..., ℓ_{r-1}, 2)` with inner parts in `{1, 3}`.
    OneOneThreeTwo,
}

pub fn measures(idx: &Index) -> (u32, usize, usize) {
    (idx.weight(), idx.depth(), idx.height())
}

/// `λ⁻¹`: each part `k` becomes the block `1, 0^{k-1}`.
pub fn word_of_index(idx: &Index) -> Result<BinaryWord> {
    idx.require_admissible()?;
    let mut bits = Vec::with_capacity(idx.weight() as usize);
    for &k in idx.parts() {
        bits.push(1);
        bits.extend(std::iter::repeat_n(0, k as usize - 1));
    }
    Ok(BinaryWord(bits))
}

/// `λ`: lengths of the pieces obtained by cutting before every 1.
pub fn index_of_word(w: &BinaryWord) -> Result<Index> {
    w.require_w01()?;
    let mut parts: Vec<u32> = Vec::new();
    for &b in w.bits() {
        if b == 1 {
            parts.push(1);
        } else {
            *parts.last_mut().expect("word starts with 1") += 1;
        }
    }
    Ok(Index(parts))
}

/// `β`: run lengths of `s' = (a_2, ..., a_k, 1)` cut between equal neighbours.
pub fn block_index(w: &BinaryWord) -> Result<Index> {
    w.require_w01()?;
    if w.is_empty() {
        return Ok(Index::empty());
    }
    let mut shifted: Vec<u8> = w.bits()[1..].to_vec();
    shifted.push(1);
    let mut parts = vec![1u32];
    for pair in shifted.windows(2) {
        if pair[0] == pair[1] {
            parts.push(1);
        } else {
            *parts.last_mut().unwrap() += 1;
        }
    }
    Ok(Index(parts))
}

/// `β⁻¹`: rebuilds the alternating blocks of `s'` from the back (its last bit is 1).
pub fn word_of_block_index(idx: &Index) -> Result<BinaryWord> {
    idx.require_admissible()?;
    if idx.is_empty() {
        return Ok(BinaryWord::default());
    }
    let total = idx.weight() as usize;
    let mut shifted = vec![0u8; total];
    let mut pos = total;
    let mut last_bit = 1u8;
    for &len in idx.parts().iter().rev() {
        // Block ends with `last_bit` and alternates backwards.
        let mut bit = last_bit;
        for _ in 0..len {
            pos -= 1;
            shifted[pos] = bit;
            bit ^= 1;
        }
        // The previous block ends with the same bit this block starts with.
        last_bit = shifted[pos];
    }
    let mut bits = Vec::with_capacity(total);
    bits.push(1);
    bits.extend_from_slice(&shifted[..total - 1]);
    let w = BinaryWord(bits);
    w.require_w01()?;
    Ok(w)
}

/// Block decomposition `bl = β ∘ λ⁻¹`.
pub fn bl(idx: &Index) -> Result<Index> {
    block_index(&word_of_index(idx)?)
}

/// Inverse block decomposition `λ ∘ β⁻¹`.
pub fn bl_inv(idx: &Index) -> Result<Index> {
    index_of_word(&word_of_block_index(idx)?)
}

/// `bl({2}^{a_0}, 2+b_1, {2}^{a_1}, ..., 2+b_r, {2}^{a_r})` read off directly:
/// `(2a_0+1, {1}^{b_1-1}, 2a_1+3, ..., 2a_{r-1}+3, {1}^{b_r-1}, 2a_r+2)`, or `(2a_0)` when `r = 0`.
pub fn bl_maximal_height_closed_form(a: &[u32], b: &[u32]) -> Result<Index> {
    if a.len() != b.len() + 1 {
        return Err(Error::Parameter(format!(
            "expected {} run lengths a_i for {} values b_i, got {}",
            b.len() + 1,
            b.len(),
            a.len()
        )));
    }
    if b.contains(&0) {
        return Err(Error::Parameter("every b_i must be at least 1".into()));
    }
    let r = b.len();
    if r == 0 {
        if a[0] == 0 {
            return Err(Error::Parameter("r = 0 requires a_0 >= 1".into()));
        }
        return Ok(Index(vec![2 * a[0]]));
    }
    let mut parts = vec![2 * a[0] + 1];
    for i in 0..r {
        parts.extend(std::iter::repeat_n(1, b[i] as usize - 1));
        if i + 1 < r {
            parts.push(2 * a[i + 1] + 3);
        } else {
            parts.push(2 * a[r] + 2);
        }
    }
    Ok(Index(parts))
}

/// Splits a maximal-height index into `(a_0..a_r, b_1..b_r)` for
/// [`bl_maximal_height_closed_form`].
pub fn maximal_height_runs(idx: &Index) -> Result<(Vec<u32>, Vec<u32>)> {
    if !idx.is_maximal_height() {
        return Err(Error::Parameter(format!("({idx}) is not of maximal height")));
    }
    let mut a = vec![0u32];
    let mut b = Vec::new();
    for &k in idx.parts() {
        if k == 2 {
            *a.last_mut().unwrap() += 1;
        } else {
            b.push(k - 2);
            a.push(0);
        }
    }
    Ok((a, b))
}

pub fn classify(idx: &Index) -> BTreeSet<IndexClass> {
    let mut out = BTreeSet::new();
    let p = idx.parts();
    if !idx.is_admissible() {
        return out;
    }
    out.insert(IndexClass::Admissible);
    if idx.is_maximal_height() {
        out.insert(IndexClass::MaximalHeight);
    }
    if let Some((&last, init)) = p.split_last() {
        if last % 2 == 0 && init.iter().all(|k| k % 2 == 1) {
            out.insert(IndexClass::OddOddEven);
        }
        if p.iter().all(|&k| k >= 3) {
            out.insert(IndexClass::AllAtLeast3);
        }
        if p.len() >= 2
            && p[0] == 1
            && last == 2
            && p[1..p.len() - 1].iter().all(|&k| k == 1 || k == 3)
        {
            out.insert(IndexClass::OneOneThreeTwo);
        }
    }
    out
}

/// The bar map: barred exactly on the even parts.
pub fn bar_evens(idx: &Index) -> SignedIndex {
    SignedIndex(
        idx.parts()
            .iter()
            .map(|&k| (k, if k % 2 == 0 { Sign::Minus } else { Sign::Plus }))
            .collect(),
    )
}

pub fn reverse(idx: &Index) -> Index {
    idx.reversed()
}

/// All compositions of `weight` (every part >= `min_part`), in lexicographic order.
pub fn compositions(weight: u32, min_part: u32) -> Vec<Index> {
    fn rec(rest: u32, min_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
        if rest == 0 {
            out.push(Index(cur.clone()));
            return;
        }
        for k in min_part..=rest {
            cur.push(k);
            rec(rest - k, min_part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if weight == 0 {
        out.push(Index::empty());
        return out;
    }
    rec(weight, min_part.max(1), &mut Vec::new(), &mut out);
    out
}

/// Admissible indices of exactly the given weight.
pub fn admissible_of_weight(weight: u32) -> Vec<Index> {
    compositions(weight, 1)
        .into_iter()
        .filter(Index::is_admissible)
        .collect()
}

/// Maximal-height indices with `2 <= weight <= cap`, ordered by weight.
pub fn maximal_height_up_to(cap: u32) -> Vec<Index> {
    (2..=cap).flat_map(|w| compositions(w, 2)).collect()
}

/// Admissible nonempty indices with `2 <= weight <= cap`, ordered by weight.
pub fn admissible_up_to(cap: u32) -> Vec<Index> {
    (2..=cap).flat_map(admissible_of_weight).collect()
}
