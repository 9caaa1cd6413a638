//! Field abstraction for circuit construction and the satisfaction oracle.
//!
//! Circuits are built over a generic prime field so soundness can be checked
//! by exhaustive enumeration over tiny prototype fields ([`ToyField`]) while
//! the proof backend only ever instantiates the real group scalar field.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::ToPrimitive;

use crate::crt::Nat;
use crate::group::{scalar_order, Scalar};

/// A prime field with enough surface for circuit building and evaluation.
pub trait Field:
    Copy
    + Clone
    + PartialEq
    + Eq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(x: u64) -> Self;
    /// Reduce a natural into the field.
    fn from_nat(n: &Nat) -> Self;
    fn to_nat(&self) -> Nat;
    /// The field modulus (the circuit's `p0`).
    fn modulus() -> Nat;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::ZERO
    }
    fn one() -> Self {
        Scalar::ONE
    }
    fn from_u64(x: u64) -> Self {
        Scalar::from_u64(x)
    }
    fn from_nat(n: &Nat) -> Self {
        Scalar::from_nat(n)
    }
    fn to_nat(&self) -> Nat {
        Scalar::to_nat(self)
    }
    fn modulus() -> Nat {
        scalar_order().clone()
    }
}

/// Prototype field `Z_P` with the modulus in the type, small enough for
/// exhaustive sweeps. Only test and oracle code instantiates this.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ToyField<const P: u64>(u64);

impl<const P: u64> ToyField<P> {
    pub fn new(x: u64) -> Self {
        ToyField(x % P)
    }
    pub fn value(&self) -> u64 {
        self.0
    }
}

impl<const P: u64> Add for ToyField<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ToyField((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for ToyField<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ToyField((P + self.0 - rhs.0) % P)
    }
}

impl<const P: u64> Mul for ToyField<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ToyField(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Neg for ToyField<P> {
    type Output = Self;
    fn neg(self) -> Self {
        ToyField((P - self.0) % P)
    }
}

impl<const P: u64> Field for ToyField<P> {
    fn zero() -> Self {
        ToyField(0)
    }
    fn one() -> Self {
        ToyField(1 % P)
    }
    fn from_u64(x: u64) -> Self {
        ToyField::new(x)
    }
    fn from_nat(n: &Nat) -> Self {
        ToyField((n % Nat::from(P)).to_u64().unwrap())
    }
    fn to_nat(&self) -> Nat {
        Nat::from(self.0)
    }
    fn modulus() -> Nat {
        Nat::from(P)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_field_arithmetic() {
        type F = ToyField<13>;
        let a = F::from_u64(9);
        let b = F::from_u64(7);
        assert_eq!(a + b, F::from_u64(3));
        assert_eq!(a - b, F::from_u64(2));
        assert_eq!(a * b, F::from_u64(11));
        assert_eq!(-a, F::from_u64(4));
        assert_eq!(F::modulus(), Nat::from(13u8));
    }
}
