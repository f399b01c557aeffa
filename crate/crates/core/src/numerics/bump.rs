//! The smooth bump `psi(t) = exp(-1/(1-t^2))` on `(-1, 1)` and the partition
//! of unity `phi(t) = psi(t) / (psi(t-1) + psi(t) + psi(t+1))`.

use super::field::Real;
use super::jet::Jet;

/// Jet of `psi` at `t`, in the variable `t`.
pub fn psi_jet<T: Real>(t: &T, order: usize) -> Jet<T> {
    if t.abs() >= T::one() {
        return Jet::zero(t.clone(), order);
    }
    let v = Jet::variable(t.clone(), order);
    let u = v.mul(&v).neg().add_scalar(&T::one());
    u.recip().neg().exp()
}

/// Jet of `phi` at `t`; `phi` is supported in `(-1, 1)` with `phi(0) = 1`.
pub fn bump_jet<T: Real>(t: &T, order: usize) -> Jet<T> {
    if t.abs() >= T::one() {
        return Jet::zero(t.clone(), order);
    }
    let one = T::one();
    let centre = psi_jet(t, order);
    let mut denom = centre.clone();
    if *t > T::zero() {
        let mut s = psi_jet(&(t.clone() - &one), order);
        s.base = t.clone();
        denom = denom.add(&s);
    } else if *t < T::zero() {
        let mut s = psi_jet(&(t.clone() + &one), order);
        s.base = t.clone();
        denom = denom.add(&s);
    }
    centre.div(&denom)
}

/// Jet at `x` of the patch function `x -> phi(x/width - ell)`.
pub fn scaled_patch_jet<T: Real>(x: &T, width: &T, ell: i64, order: usize) -> Jet<T> {
    let t = x.clone() / width.clone() - T::from_i64(ell);
    let inv = T::one() / width.clone();
    bump_jet(&t, order).rescale(x.clone(), &inv)
}

/// `phi(t)` alone.
pub fn bump_value<T: Real>(t: &T) -> T {
    bump_jet(t, 0).coeffs.swap_remove(0)
}
