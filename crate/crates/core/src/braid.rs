//! Exact computation in the Artin braid groups and the symmetric groups.
//!
//! A [`BraidWord`] stores its letters in diagram order: the leftmost letter is
//! applied first, so `u.compose(&v)` reads "u, then v". Letter `i > 0` is the
//! generator `σ_i` and `-i` its inverse.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("strand mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("expected {expected} widths, got {got}")]
    WidthCount { expected: usize, got: usize },
    #[error("letter {letter} out of range for {strands} strands")]
    LetterOutOfRange { letter: i32, strands: usize },
    #[error("invalid braid literal `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

/// One-line notation: `image[k]` is the final position (1-based) of the strand
/// that starts at position `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(size: usize) -> Self {
        Permutation { image: (1..=size).collect() }
    }

    pub fn from_image(image: Vec<usize>) -> Option<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v > n || seen[v - 1] {
                return None;
            }
            seen[v - 1] = true;
        }
        Some(Permutation { image })
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Where the element `k` (1-based) is sent.
    pub fn apply(&self, k: usize) -> usize {
        self.image[k - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        assert_eq!(self.size(), next.size(), "permutation size mismatch");
        Permutation { image: self.image.iter().map(|&v| next.apply(v)).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.size()];
        for (k, &v) in self.image.iter().enumerate() {
            image[v - 1] = k + 1;
        }
        Permutation { image }
    }

    /// Block sum: later blocks are shifted past earlier ones.
    pub fn block_sum(parts: &[Permutation]) -> Permutation {
        let mut image = Vec::new();
        let mut offset = 0;
        for p in parts {
            image.extend(p.image.iter().map(|&v| v + offset));
            offset += p.size();
        }
        Permutation { image }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.image.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        for &l in &letters {
            let a = l.unsigned_abs() as usize;
            if l == 0 || a >= strands {
                return Err(BraidError::LetterOutOfRange { letter: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    /// `σ_i` (or its inverse when `i < 0`) on `strands` strands.
    pub fn generator(strands: usize, i: i32) -> Result<Self, BraidError> {
        BraidWord::new(strands, vec![i])
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// "self, then other".
    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch { left: self.strands, right: other.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    pub fn permutation(&self) -> Permutation {
        // pos[k]: current position (0-based) of the strand that started at k.
        let n = self.strands;
        let mut at = (0..n).collect::<Vec<_>>(); // at[position] = starting index
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            at.swap(i - 1, i);
        }
        let mut image = vec![0; n];
        for (position, &start) in at.iter().enumerate() {
            image[start] = position + 1;
        }
        Permutation { image }
    }

    /// Dehornoy handle reduction, preceded by the permutation and exponent-sum
    /// rejects.
    pub fn is_trivial(&self) -> bool {
        if self.letters.is_empty() {
            return true;
        }
        if self.exponent_sum() != 0 || !self.permutation().is_identity() {
            return false;
        }
        handle_reduce(self.letters.clone()).is_empty()
    }

    pub fn equals(&self, other: &BraidWord) -> Result<bool, BraidError> {
        Ok(self.compose(&other.inverse())?.is_trivial())
    }

    /// Cabling: the strand ending at position `m` (1-based, at the end of the
    /// word) is replaced by `widths[m - 1]` parallel strands; width 0 deletes it.
    pub fn cable(&self, widths: &[usize]) -> Result<BraidWord, BraidError> {
        if widths.len() != self.strands {
            return Err(BraidError::WidthCount { expected: self.strands, got: widths.len() });
        }
        let perm = self.permutation();
        let start: Vec<usize> = (0..self.strands).map(|k| widths[perm.image[k] - 1]).collect();
        Ok(self.cable_from_start(&start))
    }

    /// Cabling with widths indexed by the strands' starting positions.
    pub fn cable_from_start(&self, widths: &[usize]) -> BraidWord {
        assert_eq!(widths.len(), self.strands, "width count");
        let mut w = widths.to_vec();
        let total: usize = w.iter().sum();
        let mut letters = Vec::new();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            let sign = l.signum();
            let offset: usize = w[..i - 1].iter().sum();
            let (p, q) = (w[i - 1], w[i]);
            for a in (0..p).rev() {
                for b in 0..q {
                    letters.push(sign * (offset + a + b + 1) as i32);
                }
            }
            w.swap(i - 1, i);
        }
        BraidWord { strands: total, letters }
    }

    /// Block direct sum; the k-th summand occupies the strands after those of
    /// the earlier summands.
    pub fn direct_sum(parts: &[BraidWord]) -> BraidWord {
        let mut letters = Vec::new();
        let mut offset = 0i32;
        for p in parts {
            letters.extend(p.letters.iter().map(|&l| l + l.signum() * offset));
            offset += p.strands as i32;
        }
        BraidWord { strands: offset as usize, letters }
    }

    /// Free reduction of adjacent inverse pairs; does not change the element.
    pub fn free_reduced(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord { strands: self.strands, letters: out }
    }
}

fn handle_reduce(mut w: Vec<i32>) -> Vec<i32> {
    // Always reduce the handle whose closing letter comes first: its interior
    // holds no further handle, so the reduction is a permitted one.
    loop {
        let mut found = None;
        'scan: for q in 0..w.len() {
            let i = w[q].abs();
            for p in (0..q).rev() {
                let j = w[p].abs();
                if j < i {
                    break;
                }
                if j == i {
                    if w[p] == -w[q] {
                        found = Some((p, q));
                        break 'scan;
                    }
                    break;
                }
            }
        }
        let Some((p, q)) = found else { return w };
        let e = w[p].signum();
        let i = w[p].abs();
        let mut next = Vec::with_capacity(w.len() + 2 * (q - p));
        next.extend_from_slice(&w[..p]);
        for &x in &w[p + 1..q] {
            if x.abs() == i + 1 {
                next.push(-(i + 1) * e);
                next.push(i * x.signum());
                next.push((i + 1) * e);
            } else {
                next.push(x);
            }
        }
        next.extend_from_slice(&w[q + 1..]);
        w = next;
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{};", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| BraidError::Parse { text: text.to_string(), reason: reason.to_string() };
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| err("expected `{n; letters}`"))?;
        let (n, rest) = inner.split_once(';').ok_or_else(|| err("missing `;`"))?;
        let strands = n.trim().parse::<usize>().map_err(|_| err("bad strand count"))?;
        let letters = rest
            .split_whitespace()
            .map(|t| t.parse::<i32>().map_err(|_| err("bad letter")))
            .collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(strands, letters)
    }
}
