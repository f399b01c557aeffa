use std::ops::Range;

use crate::error::{Error, Result};
use crate::numerics::Field;

/// Strictly increasing nodes with positive multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<T> {
    nodes: Vec<T>,
    mults: Vec<usize>,
}

impl<T: Field> PointSet<T> {
    pub fn new(nodes: Vec<T>, mults: Vec<usize>) -> Result<Self> {
        if nodes.len() != mults.len() {
            return Err(Error::SizeMismatch {
                expected: nodes.len(),
                got: mults.len(),
            });
        }
        if let Some(i) = mults.iter().position(|&m| m == 0) {
            return Err(Error::InvalidPointSet(format!(
                "node {i} has multiplicity 0"
            )));
        }
        for i in 1..nodes.len() {
            if nodes[i] <= nodes[i - 1] {
                return Err(Error::InvalidPointSet(format!(
                    "nodes must be strictly increasing (index {i})"
                )));
            }
        }
        Ok(PointSet { nodes, mults })
    }

    /// Nodes of multiplicity one; input must already be strictly increasing.
    pub fn simple(nodes: Vec<T>) -> Result<Self> {
        let n = nodes.len();
        Self::new(nodes, vec![1; n])
    }

    /// Sort and deduplicate, then give every node multiplicity one.
    pub fn from_unsorted(mut nodes: Vec<T>) -> Self {
        nodes.sort_by(|a, b| a.partial_cmp(b).expect("comparable nodes"));
        nodes.dedup();
        let n = nodes.len();
        PointSet {
            nodes,
            mults: vec![1; n],
        }
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.mults
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total number of interpolation conditions, `sum mu(x)`.
    pub fn total_multiplicity(&self) -> usize {
        self.mults.iter().sum()
    }

    pub fn min(&self) -> Option<&T> {
        self.nodes.first()
    }

    pub fn max(&self) -> Option<&T> {
        self.nodes.last()
    }

    /// Indices of nodes in the open interval `(lo, hi)`.
    pub fn open_range(&self, lo: &T, hi: &T) -> Range<usize> {
        let a = self.nodes.partition_point(|x| x <= lo);
        let b = self.nodes.partition_point(|x| x < hi);
        a..b.max(a)
    }

    /// Number of distinct nodes in `(lo, hi)`.
    pub fn count_open(&self, lo: &T, hi: &T) -> usize {
        self.open_range(lo, hi).len()
    }

    /// Index of the largest node `<= v`.
    pub fn last_at_most(&self, v: &T) -> Option<usize> {
        self.nodes.partition_point(|x| x <= v).checked_sub(1)
    }

    /// Index of `v` if it is a node.
    pub fn position(&self, v: &T) -> Option<usize> {
        let i = self.nodes.partition_point(|x| x < v);
        (i < self.nodes.len() && self.nodes[i] == *v).then_some(i)
    }

    /// Nodes expanded by multiplicity.
    pub fn expanded(&self) -> Vec<T> {
        self.nodes
            .iter()
            .zip(&self.mults)
            .flat_map(|(x, &m)| std::iter::repeat(x.clone()).take(m))
            .collect()
    }

    /// Sub-collection `nodes[range]`.
    pub fn slice(&self, range: Range<usize>) -> PointSet<T> {
        PointSet {
            nodes: self.nodes[range.clone()].to_vec(),
            mults: self.mults[range].to_vec(),
        }
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Result<PointSet<U>> {
        PointSet::new(self.nodes.iter().map(f).collect(), self.mults.clone())
    }
}

/// Values of `f` on a point set of simple nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleFunction<T> {
    pub points: PointSet<T>,
    pub values: Vec<T>,
}

impl<T: Field> SampleFunction<T> {
    pub fn new(points: PointSet<T>, values: Vec<T>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::SizeMismatch {
                expected: points.len(),
                got: values.len(),
            });
        }
        Ok(SampleFunction { points, values })
    }
}

/// Derivative data `f^(j)(x_i)` for `j < mu(x_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteData<T> {
    pub points: PointSet<T>,
    /// `derivs[i][j] = f^(j)(x_i)`, length `mu(x_i)`.
    pub derivs: Vec<Vec<T>>,
}

impl<T: Field> HermiteData<T> {
    pub fn new(points: PointSet<T>, derivs: Vec<Vec<T>>) -> Result<Self> {
        if points.len() != derivs.len() {
            return Err(Error::SizeMismatch {
                expected: points.len(),
                got: derivs.len(),
            });
        }
        for (i, (d, &m)) in derivs.iter().zip(points.multiplicities()).enumerate() {
            if d.len() != m {
                return Err(Error::InvalidPointSet(format!(
                    "node {i}: multiplicity {m} but {} derivative values",
                    d.len()
                )));
            }
        }
        Ok(HermiteData { points, derivs })
    }

    pub fn from_samples(f: &SampleFunction<T>) -> Self {
        HermiteData {
            points: PointSet {
                nodes: f.points.nodes.clone(),
                mults: vec![1; f.points.len()],
            },
            derivs: f.values.iter().map(|v| vec![v.clone()]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn rejects_unsorted_and_zero_multiplicity() {
        assert!(PointSet::simple(vec![q(1), q(1)]).is_err());
        assert!(PointSet::new(vec![q(1), q(2)], vec![1, 0]).is_err());
    }

    #[test]
    fn open_counts() {
        let k = PointSet::simple((0..10).map(q).collect()).unwrap();
        assert_eq!(k.count_open(&q(2), &q(5)), 2);
        assert_eq!(k.count_open(&q(-3), &q(0)), 0);
        assert_eq!(k.count_open(&q(5), &q(2)), 0);
        assert_eq!(k.last_at_most(&q(4)), Some(4));
        assert_eq!(k.last_at_most(&q(-1)), None);
        assert_eq!(k.position(&q(7)), Some(7));
    }
}
