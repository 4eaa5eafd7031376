use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Occupation bitstring over the atoms of a network; bit `k` set means atom
/// `k` is in the Rydberg state.
///
/// The textual form lists atom 0 first, so `"100"` has only atom 0 excited.
/// As a basis index (for the dense engines) atom `k` maps to bit `1 << k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Configuration {
    bits: Vec<bool>,
}

impl Configuration {
    pub fn ground(n: usize) -> Self {
        Self {
            bits: vec![false; n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// All atoms ground except the listed ones.
    pub fn with_excited(n: usize, excited: &[usize]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &k in excited {
            if k >= n {
                return Err(Error::Configuration(format!(
                    "excited atom {k} out of range for {n} atoms"
                )));
            }
            bits[k] = true;
        }
        Ok(Self { bits })
    }

    /// Decode a dense basis index.
    pub fn from_index(index: usize, n: usize) -> Self {
        Self {
            bits: (0..n).map(|k| index >> k & 1 == 1).collect(),
        }
    }

    /// Dense basis index; only meaningful for networks small enough to index.
    pub fn to_index(&self) -> usize {
        assert!(self.bits.len() < usize::BITS as usize);
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &b)| acc | (usize::from(b) << k))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_excited(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn set(&mut self, k: usize, excited: bool) {
        self.bits[k] = excited;
    }

    pub fn flip(&mut self, k: usize) {
        self.bits[k] = !self.bits[k];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn excited(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(k, &b)| b.then_some(k))
    }

    pub fn excitation_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Configuration(format!(
                    "invalid configuration character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }
}

impl From<Configuration> for String {
    fn from(c: Configuration) -> Self {
        c.to_string()
    }
}

impl TryFrom<String> for Configuration {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_follows_atom_order() {
        let c: Configuration = "100".parse().unwrap();
        assert_eq!(c.to_index(), 1);
        let c: Configuration = "011".parse().unwrap();
        assert_eq!(c.to_index(), 6);
        assert_eq!(Configuration::from_index(6, 3), c);
    }

    #[test]
    fn rejects_bad_characters() {
        assert!("10x".parse::<Configuration>().is_err());
        assert!(Configuration::with_excited(2, &[2]).is_err());
    }
}
