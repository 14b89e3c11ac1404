use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::Rational;

use super::coalition::Coalition;

/// Nonnegative, nonzero population of player types.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationVector<T = Rational>(Vec<T>);

impl<T: Scalar> PopulationVector<T> {
    pub fn new(x: Vec<T>) -> Result<Self> {
        if x.is_empty() {
            return Err(domain("population vector is empty"));
        }
        if let Some(i) = x.iter().position(|v| v.is_neg()) {
            return Err(domain(format!("population of type {} is negative", i + 1)));
        }
        if x.iter().all(|v| v.is_negligible()) {
            return Err(domain("population vector is zero"));
        }
        Ok(Self(x))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![T::one(); n])
    }

    pub fn indicator(n: usize, s: Coalition) -> Result<Self> {
        Self::new((0..n).map(|i| if s.contains(i) { T::one() } else { T::zero() }).collect())
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &T {
        &self.0[i]
    }

    /// Types with positive population.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].is_pos()).collect()
    }

    pub fn scaled(&self, k: &T) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v.clone() * k.clone()).collect())
    }

    /// `self + d`, which may be zero or leave the orthant.
    pub fn shifted(&self, d: &[T]) -> Result<Self> {
        if d.len() != self.0.len() {
            return Err(domain("direction has the wrong length"));
        }
        Self::new(self.0.iter().zip(d).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let q = Rational::from_int;
        assert!(PopulationVector::new(vec![q(0), q(0)]).is_err());
        assert!(PopulationVector::new(vec![q(1), q(-1)]).is_err());
        let x = PopulationVector::new(vec![q(2), q(0), q(1)]).unwrap();
        assert_eq!(x.support(), vec![0, 2]);
        assert_eq!(PopulationVector::<Rational>::indicator(3, Coalition(0b101)).unwrap(), PopulationVector::new(vec![q(1), q(0), q(1)]).unwrap());
    }
}
