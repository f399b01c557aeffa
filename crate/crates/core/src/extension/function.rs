//! Functions given by their jets, and ideals given by zero sets with multiplicities.

use crate::error::{Error, Result};
use crate::interpolation::{NewtonPolynomial, PointSet};
use crate::numerics::{Field, Jet, Real};

/// A smooth function that can report its Taylor jet at any point.
pub trait JetFunction<T>: Send + Sync {
    fn jet(&self, x: &T, order: usize) -> Jet<T>;

    /// Closed support hull, if bounded.
    fn support(&self) -> Option<(T, T)> {
        None
    }
}

impl<T: Field> JetFunction<T> for NewtonPolynomial<T> {
    fn jet(&self, x: &T, order: usize) -> Jet<T> {
        self.eval_jet(x, order)
    }
}

impl<T, F> JetFunction<T> for &F
where
    F: JetFunction<T> + ?Sized,
{
    fn jet(&self, x: &T, order: usize) -> Jet<T> {
        (**self).jet(x, order)
    }

    fn support(&self) -> Option<(T, T)> {
        (**self).support()
    }
}

/// `x -> c`.
#[derive(Clone, Debug)]
pub struct Constant<T>(pub T);

impl<T: Field> JetFunction<T> for Constant<T> {
    fn jet(&self, x: &T, order: usize) -> Jet<T> {
        Jet::constant(x.clone(), self.0.clone(), order)
    }
}

/// `x -> sin(x)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sine;

impl<T: Real> JetFunction<T> for Sine {
    fn jet(&self, x: &T, order: usize) -> Jet<T> {
        Jet::variable(x.clone(), order).sin_cos().0
    }
}

/// `x -> x * phi(x / width)` with the partition bump `phi`; vanishes at `0`.
#[derive(Clone, Debug)]
pub struct ScaledBumpProduct<T> {
    pub width: T,
}

impl<T: Real> JetFunction<T> for ScaledBumpProduct<T> {
    fn jet(&self, x: &T, order: usize) -> Jet<T> {
        let bump = crate::numerics::scaled_patch_jet(x, &self.width, 0, order);
        Jet::variable(x.clone(), order).mul(&bump)
    }

    fn support(&self) -> Option<(T, T)> {
        Some((-self.width.clone(), self.width.clone()))
    }
}

/// `x -> exp(-1/x^2) sin(pi/x)` for `x > 0`, zero otherwise.
///
/// Flat at `0` and zero at every `1/j`, so it lies in the ideal of
/// `{0} u {1/j}` with multiplicity one.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReciprocalZeros;

impl<T: Real> JetFunction<T> for ReciprocalZeros {
    fn jet(&self, x: &T, order: usize) -> Jet<T> {
        if *x <= T::zero() {
            return Jet::zero(x.clone(), order);
        }
        let inv = Jet::variable(x.clone(), order).recip();
        let damp = inv.mul(&inv).neg().exp();
        let pi = T::pi();
        let (s, _) = inv.scale(&pi).sin_cos();
        damp.mul(&s)
    }
}

/// Pointwise difference `a - b`.
pub struct Difference<A, B>(pub A, pub B);

impl<T: Field, A: JetFunction<T>, B: JetFunction<T>> JetFunction<T> for Difference<A, B> {
    fn jet(&self, x: &T, order: usize) -> Jet<T> {
        self.0.jet(x, order).sub(&self.1.jet(x, order))
    }
}

/// Closed ideal of `C^inf(R)` given by a finite zero set with multiplicities:
/// `g` belongs to it when `g^(j)(x) = 0` for `j < mu(x)` at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealSpec<T> {
    pub zeros: PointSet<T>,
}

impl<T: Real> IdealSpec<T> {
    pub fn new(zeros: PointSet<T>) -> Self {
        IdealSpec { zeros }
    }

    /// The whole space (empty zero set).
    pub fn everything() -> Self {
        IdealSpec {
            zeros: PointSet::simple(Vec::new()).expect("empty set is valid"),
        }
    }

    pub fn max_multiplicity(&self) -> usize {
        self.zeros.multiplicities().iter().copied().max().unwrap_or(0)
    }

    /// Checks membership through jets of order `order >= max mu - 1`. A derivative
    /// counts as zero when it is below the type's vanishing tolerance relative to
    /// `1 + max_j |f^(j)(x)|`.
    pub fn check_member(&self, f: &dyn JetFunction<T>, order: usize) -> Result<()> {
        let tol = T::from_f64(T::vanishing_tolerance());
        for (i, (x, &mu)) in self
            .zeros
            .nodes()
            .iter()
            .zip(self.zeros.multiplicities())
            .enumerate()
        {
            let jet = f.jet(x, order.max(mu - 1));
            let scale = T::one() + &jet.max_abs_derivative(jet.order());
            for j in 0..mu {
                let d = jet.derivative(j);
                if d.abs() > tol.clone() * &scale {
                    return Err(Error::NotInIdeal {
                        node: i,
                        order: j,
                        value: d.to_f64(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Scalar;

    #[test]
    fn reciprocal_zeros_vanish_on_the_set() {
        let nodes: Vec<Scalar> = std::iter::once(Scalar::zero())
            .chain((1..=30).rev().map(|j| Scalar::from_ratio(1, j)))
            .collect();
        let ideal = IdealSpec::new(PointSet::simple(nodes).unwrap());
        ideal.check_member(&ReciprocalZeros, 3).unwrap();
        assert!(matches!(
            ideal.check_member(&Constant(Scalar::one()), 0),
            Err(Error::NotInIdeal { node: 0, order: 0, .. })
        ));
    }

    #[test]
    fn sine_membership_fails_off_its_zeros() {
        let ideal = IdealSpec::new(PointSet::simple(vec![0.5f64]).unwrap());
        assert_eq!(
            ideal.check_member(&Sine, 0),
            Err(Error::NotInIdeal {
                node: 0,
                order: 0,
                value: 0.5f64.sin()
            })
        );
        let at_zero = IdealSpec::new(PointSet::new(vec![0.0f64], vec![2]).unwrap());
        assert!(matches!(
            at_zero.check_member(&Sine, 1),
            Err(Error::NotInIdeal { order: 1, .. })
        ));
    }
}
