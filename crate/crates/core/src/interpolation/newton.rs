use crate::error::{Error, Result};
use crate::numerics::{Field, Jet};

use super::pointset::HermiteData;

/// Triangular table of confluent divided differences.
#[derive(Clone, Debug)]
pub struct DividedDifferences<T> {
    /// Nodes expanded by multiplicity.
    pub nodes: Vec<T>,
    /// `table[s][i] = f[z_i, ..., z_{i+s}]`.
    pub table: Vec<Vec<T>>,
}

impl<T: Field> DividedDifferences<T> {
    /// Newton coefficients `f[z_0, ..., z_s]`.
    pub fn newton_coefficients(&self) -> Vec<T> {
        self.table.iter().map(|row| row[0].clone()).collect()
    }
}

/// Divided differences of Hermite data; repeated nodes use `f^(s)(x)/s!`.
pub fn divided_differences<T: Field>(data: &HermiteData<T>) -> Result<DividedDifferences<T>> {
    let mut nodes = Vec::new();
    let mut owner = Vec::new();
    for (i, (x, &m)) in data
        .points
        .nodes()
        .iter()
        .zip(data.points.multiplicities())
        .enumerate()
    {
        for _ in 0..m {
            nodes.push(x.clone());
            owner.push(i);
        }
    }
    let n = nodes.len();
    if n == 0 {
        return Err(Error::InvalidPointSet("no interpolation data".into()));
    }
    let facts: Vec<T> = {
        let mut f = vec![T::one()];
        for s in 1..n {
            f.push(f[s - 1].clone() * &T::from_i64(s as i64));
        }
        f
    };
    let mut table: Vec<Vec<T>> = Vec::with_capacity(n);
    table.push(owner.iter().map(|&i| data.derivs[i][0].clone()).collect());
    for s in 1..n {
        let prev = &table[s - 1];
        let mut row = Vec::with_capacity(n - s);
        for i in 0..n - s {
            if owner[i] == owner[i + s] {
                let d = &data.derivs[owner[i]];
                if s >= d.len() {
                    return Err(Error::InsufficientJetOrder {
                        node: owner[i],
                        order: s,
                    });
                }
                row.push(d[s].clone() / facts[s].clone());
            } else {
                let num = prev[i + 1].clone() - &prev[i];
                let den = nodes[i + s].clone() - &nodes[i];
                row.push(num / den);
            }
        }
        table.push(row);
    }
    Ok(DividedDifferences { nodes, table })
}

/// `f[x_0, ..., x_s]` for distinct nodes in the given order.
pub fn divided_difference<T: Field>(nodes: &[T], values: &[T]) -> Result<T> {
    if nodes.len() != values.len() {
        return Err(Error::SizeMismatch {
            expected: nodes.len(),
            got: values.len(),
        });
    }
    if nodes.is_empty() {
        return Err(Error::InvalidPointSet("no interpolation data".into()));
    }
    let mut row = values.to_vec();
    for s in 1..nodes.len() {
        for i in 0..nodes.len() - s {
            let den = nodes[i + s].clone() - &nodes[i];
            if den.is_zero() {
                return Err(Error::DuplicateNode { index: i + s });
            }
            row[i] = (row[i + 1].clone() - &row[i]) / den;
        }
    }
    Ok(row.swap_remove(0))
}

/// A polynomial in Newton form in the local variable `t = (x - center) / radius`.
///
/// `p(x) = sum_s c_s prod_{i<s} (t - t_i)`. Monomial form is the special case
/// with every `t_i = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPolynomial<T> {
    pub center: T,
    pub radius: T,
    /// Local nodes `t_0..t_{d-1}`; length `coeffs.len() - 1`.
    pub nodes: Vec<T>,
    pub coeffs: Vec<T>,
}

impl<T: Field> NewtonPolynomial<T> {
    pub fn zero() -> Self {
        NewtonPolynomial {
            center: T::zero(),
            radius: T::one(),
            nodes: Vec::new(),
            coeffs: vec![T::zero()],
        }
    }

    /// `p(x) = sum_j a_j x^j`.
    pub fn from_monomial(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty());
        NewtonPolynomial {
            center: T::zero(),
            radius: T::one(),
            nodes: vec![T::zero(); coeffs.len() - 1],
            coeffs,
        }
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn local(&self, x: &T) -> T {
        (x.clone() - &self.center) / self.radius.clone()
    }

    pub fn eval(&self, x: &T) -> T {
        let t = self.local(x);
        let d = self.coeffs.len() - 1;
        let mut acc = self.coeffs[d].clone();
        for s in (0..d).rev() {
            acc = acc * &(t.clone() - &self.nodes[s]) + &self.coeffs[s];
        }
        acc
    }

    /// Jet in `x` of order `order` at `x`.
    pub fn eval_jet(&self, x: &T, order: usize) -> Jet<T> {
        let t = self.local(x);
        let tv = Jet::variable(t, order);
        let d = self.coeffs.len() - 1;
        let mut acc = Jet::constant(tv.base.clone(), self.coeffs[d].clone(), order);
        for s in (0..d).rev() {
            let lin = tv.add_scalar(&-self.nodes[s].clone());
            acc = acc.mul(&lin).add_scalar(&self.coeffs[s]);
        }
        let inv = T::one() / self.radius.clone();
        acc.rescale(x.clone(), &inv)
    }

    /// Coefficients of `p` in powers of the local variable `t`.
    pub fn local_monomial(&self) -> Vec<T> {
        let d = self.coeffs.len() - 1;
        let mut acc = vec![self.coeffs[d].clone()];
        for s in (0..d).rev() {
            // acc <- acc * (t - t_s) + c_s
            let mut next = vec![T::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + a;
                next[i] = next[i].clone() - &(a.clone() * &self.nodes[s]);
            }
            next[0] = next[0].clone() + &self.coeffs[s];
            acc = next;
        }
        acc
    }

    /// Coefficients in powers of `x` (expands the affine change of variable).
    pub fn monomial(&self) -> Vec<T> {
        let local = self.local_monomial();
        // t = (x - c)/r ; expand sum a_j t^j by Horner in x
        let inv = T::one() / self.radius.clone();
        let shift = -(self.center.clone() * &inv);
        let mut acc = vec![local[local.len() - 1].clone()];
        for a in local.iter().rev().skip(1) {
            let mut next = vec![T::zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + &(c.clone() * &inv);
                next[i] = next[i].clone() + &(c.clone() * &shift);
            }
            next[0] = next[0].clone() + a;
            acc = next;
        }
        acc
    }

    /// `p^(j)(x)` for a single `j`.
    pub fn derivative_at(&self, x: &T, j: usize) -> T {
        self.eval_jet(x, j).derivative(j)
    }
}

/// Hermite interpolant in a frame chosen from the data hull.
pub fn hermite_interpolant<T: Field>(data: &HermiteData<T>) -> Result<NewtonPolynomial<T>> {
    let nodes = data.points.nodes();
    if nodes.is_empty() {
        return Err(Error::InvalidPointSet("no interpolation data".into()));
    }
    let lo = nodes[0].clone();
    let hi = nodes[nodes.len() - 1].clone();
    let two = T::from_i64(2);
    let center = (lo.clone() + &hi) / two.clone();
    let radius = if hi > lo {
        (hi - &lo) / two
    } else {
        T::one()
    };
    hermite_interpolant_in_frame(data, center, radius)
}

/// Hermite interpolant expressed in `t = (x - center) / radius`.
pub fn hermite_interpolant_in_frame<T: Field>(
    data: &HermiteData<T>,
    center: T,
    radius: T,
) -> Result<NewtonPolynomial<T>> {
    let local_points = data
        .points
        .map(|x| (x.clone() - &center) / radius.clone())?;
    let local_derivs = data
        .derivs
        .iter()
        .map(|d| {
            let mut p = T::one();
            d.iter()
                .enumerate()
                .map(|(j, v)| {
                    if j > 0 {
                        p = p.clone() * &radius;
                    }
                    v.clone() * &p
                })
                .collect()
        })
        .collect();
    let local = HermiteData::new(local_points, local_derivs)?;
    let dd = divided_differences(&local)?;
    let coeffs = dd.newton_coefficients();
    let mut nodes = dd.nodes;
    nodes.pop();
    Ok(NewtonPolynomial {
        center,
        radius,
        nodes,
        coeffs,
    })
}
