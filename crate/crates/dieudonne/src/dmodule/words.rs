//! Cyclic words on `{f, v}` and their multisets.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiset of primitive cyclic words in canonical rotation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WordMultiset(pub BTreeMap<String, usize>);

fn validate(word: &str) -> Result<()> {
    if word.is_empty() || !word.chars().all(|c| c == 'f' || c == 'v') {
        return Err(Error::Invalid(format!("bad word {word:?}")));
    }
    Ok(())
}

/// Least rotation with `f < v`.
pub fn least_rotation(word: &str) -> String {
    let n = word.len();
    let doubled = format!("{word}{word}");
    (0..n)
        .map(|i| &doubled[i..i + n])
        .min()
        .unwrap_or("")
        .to_string()
}

/// Canonical primitive root and exponent: `word ~ root^k` cyclically.
pub fn primitive_root(word: &str) -> (String, usize) {
    let n = word.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && word[..d].repeat(n / d) == word {
            return (least_rotation(&word[..d]), n / d);
        }
    }
    unreachable!()
}

/// Swap `f <-> v`. With letters read along the basis cycle, the dual basis
/// runs the same way round, so the word is not reversed.
pub fn dual_word(word: &str) -> String {
    let w: String = word
        .chars()
        .map(|c| if c == 'f' { 'v' } else { 'f' })
        .collect();
    least_rotation(&w)
}

/// Expand exponent notation such as `f^2v^2` or `(vf)^2v^2f^2` into letters.
pub fn expand(word: &str) -> Result<String> {
    let chars: Vec<char> = word.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let unit: String = match chars[i] {
            'f' | 'v' => {
                i += 1;
                chars[i - 1].to_string()
            }
            '(' => {
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == ')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced word {word:?}")))?;
                let inner: String = chars[i + 1..i + close].iter().collect();
                i += close + 1;
                expand(&inner)?
            }
            c => return Err(Error::Parse(format!("unexpected {c:?} in word {word:?}"))),
        };
        let mut reps = 1usize;
        if i < chars.len() && chars[i] == '^' {
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            let digits: String = chars[start..end].iter().collect();
            reps = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {word:?}")))?;
            i = end;
        }
        out.push_str(&unit.repeat(reps));
    }
    Ok(out)
}

/// Compact exponent notation: `ffvv -> f^2v^2`.
pub fn compact(word: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = word.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let mut j = i;
        while j < chars.len() && chars[j] == c {
            j += 1;
        }
        if j - i == 1 {
            out.push(c);
        } else {
            out.push_str(&format!("{c}^{}", j - i));
        }
        i = j;
    }
    out
}

impl WordMultiset {
    pub fn new() -> WordMultiset {
        WordMultiset(BTreeMap::new())
    }

    /// Add `mult` copies of `word` (any rotation, possibly a power).
    pub fn add(&mut self, word: &str, mult: usize) -> Result<()> {
        let word = expand(word)?;
        validate(&word)?;
        if mult == 0 {
            return Ok(());
        }
        let (root, k) = primitive_root(&word);
        *self.0.entry(root).or_insert(0) += k * mult;
        Ok(())
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, usize)]) -> Result<WordMultiset> {
        let mut m = WordMultiset::new();
        for (w, k) in pairs {
            m.add(w.as_ref(), *k)?;
        }
        Ok(m)
    }

    /// Parse `"ffvv:1, fv:2"` or `"{f^2v^2:1, fv:2}"`.
    pub fn parse(s: &str) -> Result<WordMultiset> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut m = WordMultiset::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (w, k) = match part.split_once(':') {
                Some((w, k)) => (
                    w.trim(),
                    k.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in {part:?}")))?,
                ),
                None => (part, 1),
            };
            m.add(w, k)?;
        }
        Ok(m)
    }

    pub fn mult(&self, word: &str) -> usize {
        let Ok(w) = expand(word) else { return 0 };
        let (root, k) = primitive_root(&w);
        self.0.get(&root).map_or(0, |&m| m / k)
    }

    /// Total letter count, the dimension of the associated module.
    pub fn dimension(&self) -> usize {
        self.0.iter().map(|(w, k)| w.len() * k).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dual(&self) -> WordMultiset {
        let mut m = WordMultiset::new();
        for (w, &k) in &self.0 {
            *m.0.entry(dual_word(w)).or_insert(0) += k;
        }
        m
    }

    pub fn is_self_dual(&self) -> bool {
        self.dual() == *self
    }

    /// Cyclic `vf` occurrences weighted by multiplicity.
    pub fn a_number(&self) -> usize {
        self.0
            .iter()
            .map(|(w, k)| {
                let b = w.as_bytes();
                let n = b.len();
                let c = (0..n)
                    .filter(|&i| b[i] == b'v' && b[(i + 1) % n] == b'f')
                    .count();
                c * k
            })
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &usize)> {
        self.0.iter()
    }
}

impl fmt::Display for WordMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(w, k)| format!("{}:{k}", compact(w)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(least_rotation("vvff"), "ffvv");
        assert_eq!(primitive_root("fvfv"), ("fv".to_string(), 2));
        assert_eq!(dual_word("ffv"), "fvv");
        // chiral: the mirror image is a different word
        assert_eq!(dual_word("ffvvfv"), "ffvfvv");
        assert_eq!(expand("(vf)^2v^2f^2").unwrap(), "vfvfvvff");
    }

    #[test]
    fn multiset_parse_and_display() {
        let m = WordMultiset::parse("{f^2v^2:1, fv:2}").unwrap();
        assert_eq!(m.to_string(), "{f^2v^2:1, fv:2}");
        assert_eq!(m.dimension(), 8);
        assert_eq!(m.a_number(), 3);
        assert!(m.is_self_dual());
        let n = WordMultiset::parse("fvfv:1").unwrap();
        assert_eq!(n.mult("fv"), 2);
        assert!(!WordMultiset::parse("ffv").unwrap().is_self_dual());
    }
}
