use serde::{Deserialize, Serialize};

use crate::FitError;

/// A multiset of positive integer observations, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Sample {
    values: Vec<u64>,
}

impl Sample {
    /// Smallest sample (and smallest tail) any fit will accept.
    pub const MIN_LEN: usize = 10;

    pub fn new(values: impl IntoIterator<Item = u64>) -> Result<Self, FitError> {
        let mut values: Vec<u64> = values.into_iter().collect();
        if values.contains(&0) {
            return Err(FitError::NonPositive);
        }
        if values.len() < Self::MIN_LEN {
            return Err(FitError::TooSmall(values.len()));
        }
        values.sort_unstable();
        Ok(Sample { values })
    }

    /// Parses the histogram exchange format: one positive integer per line.
    /// Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, FitError> {
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            match line.parse::<u64>() {
                Ok(v) if v > 0 => values.push(v),
                _ => {
                    return Err(FitError::Parse { line: i + 1, value: line.to_string() });
                }
            }
        }
        Sample::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values in ascending order.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Distinct values with their multiplicities, ascending.
    pub fn distinct(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some((last, count)) if *last == v => *count += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    pub(crate) fn tail(&self, xmin: u64) -> Tail {
        let start = self.values.partition_point(|&v| v < xmin);
        Tail::from_sorted(xmin, &self.values[start..])
    }
}

impl TryFrom<Vec<u64>> for Sample {
    type Error = FitError;

    fn try_from(values: Vec<u64>) -> Result<Self, FitError> {
        Sample::new(values)
    }
}

impl From<Sample> for Vec<u64> {
    fn from(s: Sample) -> Self {
        s.values
    }
}

/// The part of a sample at or above `xmin`, reduced to what the likelihoods need.
#[derive(Debug, Clone)]
pub(crate) struct Tail {
    pub xmin: u64,
    pub n: u64,
    pub distinct: Vec<(u64, u64)>,
    pub sum_ln: f64,
    pub sum_x: f64,
}

impl Tail {
    fn from_sorted(xmin: u64, values: &[u64]) -> Self {
        let mut distinct: Vec<(u64, u64)> = Vec::new();
        for &v in values {
            match distinct.last_mut() {
                Some((last, count)) if *last == v => *count += 1,
                _ => distinct.push((v, 1)),
            }
        }
        let sum_ln = distinct.iter().map(|&(v, c)| c as f64 * (v as f64).ln()).sum();
        let sum_x = distinct.iter().map(|&(v, c)| c as f64 * v as f64).sum();
        Tail { xmin, n: values.len() as u64, distinct, sum_ln, sum_x }
    }

    pub fn mean(&self) -> f64 {
        self.sum_x / self.n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_and_short_samples() {
        assert_eq!(Sample::new([1, 2, 0, 4, 5, 6, 7, 8, 9, 10]), Err(FitError::NonPositive));
        assert_eq!(Sample::new([1, 2, 3]), Err(FitError::TooSmall(3)));
    }

    #[test]
    fn parse_line_format() {
        let s = Sample::parse("3\n1\n\n2\n5\n1\n1\n7\n9\n2\n4\n").unwrap();
        assert_eq!(s.values(), &[1, 1, 1, 2, 2, 3, 4, 5, 7, 9]);
        assert_eq!(s.distinct()[0], (1, 3));
        let err = Sample::parse("1\n2\nx\n").unwrap_err();
        assert_eq!(err, FitError::Parse { line: 3, value: "x".into() });
    }

    #[test]
    fn tail_statistics() {
        let s = Sample::new([1, 1, 2, 3, 3, 3, 8, 9, 10, 10]).unwrap();
        let t = s.tail(3);
        assert_eq!(t.n, 7);
        assert_eq!(t.distinct, vec![(3, 3), (8, 1), (9, 1), (10, 2)]);
        assert_eq!(t.sum_x, 46.0);
    }
}
