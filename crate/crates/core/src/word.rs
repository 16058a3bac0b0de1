//! Degree words naming elements of the composition semigroup.
//!
//! A word `(d_1, …, d_k)` stands for the composition that applies
//! `f_{d_1}` first and `f_{d_k}` last. Letters are bounded by the maximum
//! degree: `1 ≤ d_i ≤ Δ − 1`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("delta must be at least 3, got {0}")]
    DeltaTooSmall(u32),
    #[error("degree word must be nonempty")]
    Empty,
    #[error("letter {index} has degree {degree}, outside 1..={max}")]
    DegreeOutOfRange { index: usize, degree: u32, max: u32 },
    #[error("cannot parse degree word from {0:?}")]
    Parse(String),
}

/// A finite sequence of generator degrees together with the ambient Δ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeWord {
    delta: u32,
    degrees: Vec<u32>,
}

impl DegreeWord {
    pub fn new(delta: u32, degrees: Vec<u32>) -> Result<Self, WordError> {
        if delta < 3 {
            return Err(WordError::DeltaTooSmall(delta));
        }
        if degrees.is_empty() {
            return Err(WordError::Empty);
        }
        for (index, &degree) in degrees.iter().enumerate() {
            if degree < 1 || degree > delta - 1 {
                return Err(WordError::DegreeOutOfRange {
                    index,
                    degree,
                    max: delta - 1,
                });
            }
        }
        Ok(Self { delta, degrees })
    }

    /// Parses a comma-separated list like "1,2,2".
    pub fn parse(delta: u32, text: &str) -> Result<Self, WordError> {
        let degrees = text
            .split(',')
            .map(|part| part.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| WordError::Parse(text.to_string()))?;
        Self::new(delta, degrees)
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn letters(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Product of the letter degrees, the degree of the composition in z.
    pub fn degree_product(&self) -> rug::Integer {
        let mut product = rug::Integer::from(1);
        for &d in &self.degrees {
            product *= d;
        }
        product
    }

    /// Same product as a usize when it fits.
    pub fn degree_product_usize(&self) -> Option<usize> {
        let mut product: usize = 1;
        for &d in &self.degrees {
            product = product.checked_mul(d as usize)?;
        }
        Some(product)
    }

    /// The word made of `n` copies of this one.
    pub fn repeat(&self, n: usize) -> Self {
        assert!(n >= 1);
        let mut degrees = Vec::with_capacity(self.degrees.len() * n);
        for _ in 0..n {
            degrees.extend_from_slice(&self.degrees);
        }
        Self {
            delta: self.delta,
            degrees,
        }
    }

    /// First `len` letters as a word; `len` must be in 1..=len().
    pub fn prefix(&self, len: usize) -> Self {
        assert!(len >= 1 && len <= self.degrees.len());
        Self {
            delta: self.delta,
            degrees: self.degrees[..len].to_vec(),
        }
    }

    /// New word from raw letters sharing this word's Δ.
    pub fn with_letters(&self, letters: Vec<u32>) -> Result<Self, WordError> {
        Self::new(self.delta, letters)
    }
}

impl fmt::Display for DegreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_words() {
        let w = DegreeWord::new(3, vec![1, 2]).unwrap();
        assert_eq!(w.delta(), 3);
        assert_eq!(w.letters(), &[1, 2]);
        assert_eq!(w.degree_product_usize(), Some(2));
    }

    #[test]
    fn rejects_out_of_range_letters() {
        assert!(matches!(
            DegreeWord::new(3, vec![1, 3]),
            Err(WordError::DegreeOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            DegreeWord::new(3, vec![0]),
            Err(WordError::DegreeOutOfRange { index: 0, .. })
        ));
        assert!(matches!(DegreeWord::new(3, vec![]), Err(WordError::Empty)));
        assert!(matches!(
            DegreeWord::new(2, vec![1]),
            Err(WordError::DeltaTooSmall(2))
        ));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let w = DegreeWord::parse(9, "2,8,8").unwrap();
        assert_eq!(w.to_string(), "2,8,8");
        assert_eq!(w.degree_product(), 128);
    }

    #[test]
    fn repeat_and_prefix() {
        let w = DegreeWord::new(3, vec![1, 2]).unwrap();
        let r = w.repeat(3);
        assert_eq!(r.letters(), &[1, 2, 1, 2, 1, 2]);
        assert_eq!(r.prefix(3).letters(), &[1, 2, 1]);
    }
}
