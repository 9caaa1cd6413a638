//! Prime-order group substrate: ristretto255 points, field scalars, and
//! Pedersen commitments (scalar and vector form).
//!
//! The group is a build-time choice. Everything above this module speaks in
//! terms of [`Scalar`], [`GroupElement`] and [`Commitment`]; swapping the
//! curve means reimplementing this module only. ristretto255 gives a
//! prime-order group of order `ℓ = 2^252 + 27742…` (253 bits), canonical
//! 32-byte encodings for both scalars and points, and constant-time
//! arithmetic.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use curve25519_dalek::ristretto::{CompressedRistretto, RistrettoPoint};
use curve25519_dalek::scalar::Scalar as DalekScalar;
use curve25519_dalek::traits::{Identity, MultiscalarMul, VartimeMultiscalarMul};
use num_bigint::BigUint;
use once_cell::sync::Lazy;
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha512};
use thiserror::Error;

use crate::crt::Nat;

/// Bit length of the group order `p0` (`λ0`).
pub const SCALAR_BITS: u32 = 253;

/// Canonical byte width of a scalar encoding: `⌈λ0 / 8⌉`.
pub const SCALAR_BYTES: usize = 32;

/// Canonical byte width of a compressed group element.
pub const POINT_BYTES: usize = 32;

/// The group order `p0 = 2^252 + 27742317777372353535851937790883648493`
/// as an arbitrary-precision natural.
pub fn scalar_order() -> &'static Nat {
    static ORDER: Lazy<Nat> = Lazy::new(|| {
        (BigUint::from(1u8) << 252)
            + BigUint::parse_bytes(b"27742317777372353535851937790883648493", 10).unwrap()
    });
    &ORDER
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("vector of length {got} exceeds generator width {width}")]
    VectorTooWide { got: usize, width: usize },
    #[error("byte string is not a canonical scalar encoding")]
    BadScalar,
    #[error("byte string is not a canonical group element encoding")]
    BadPoint,
    #[error("input truncated: needed {needed} bytes, had {had}")]
    Truncated { needed: usize, had: usize },
}

/// A field element in `[0, p0)`, always held in canonical reduced form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Scalar(pub(crate) DalekScalar);

impl Scalar {
    pub const ZERO: Scalar = Scalar(DalekScalar::ZERO);
    pub const ONE: Scalar = Scalar(DalekScalar::ONE);

    pub fn from_u64(x: u64) -> Scalar {
        Scalar(DalekScalar::from(x))
    }

    /// Reduce an arbitrary natural mod `p0`.
    pub fn from_nat(n: &Nat) -> Scalar {
        let reduced = n % scalar_order();
        let mut le = reduced.to_bytes_le();
        le.resize(32, 0);
        let mut buf = [0u8; 32];
        buf.copy_from_slice(&le);
        Scalar(DalekScalar::from_canonical_bytes(buf).expect("reduced value is canonical"))
    }

    pub fn to_nat(&self) -> Nat {
        BigUint::from_bytes_le(&self.0.to_bytes())
    }

    /// Canonical little-endian encoding, `SCALAR_BYTES` wide.
    pub fn encode(&self) -> [u8; SCALAR_BYTES] {
        self.0.to_bytes()
    }

    /// Rejects non-canonical encodings.
    pub fn decode(bytes: &[u8]) -> Result<Scalar, GroupError> {
        if bytes.len() != SCALAR_BYTES {
            return Err(GroupError::Truncated {
                needed: SCALAR_BYTES,
                had: bytes.len(),
            });
        }
        let mut buf = [0u8; 32];
        buf.copy_from_slice(bytes);
        Option::<DalekScalar>::from(DalekScalar::from_canonical_bytes(buf))
            .map(Scalar)
            .ok_or(GroupError::BadScalar)
    }

    /// Uniform scalar from an injectable RNG.
    pub fn random<R: RngCore + CryptoRng>(rng: &mut R) -> Scalar {
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        Scalar(DalekScalar::from_bytes_mod_order_wide(&wide))
    }

    pub fn invert(&self) -> Scalar {
        debug_assert!(*self != Scalar::ZERO, "inverting zero");
        Scalar(self.0.invert())
    }

    pub fn is_zero(&self) -> bool {
        *self == Scalar::ZERO
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

/// An element of the ristretto255 group.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GroupElement(pub(crate) RistrettoPoint);

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement(RistrettoPoint::identity())
    }

    /// Canonical compressed encoding.
    pub fn encode(&self) -> [u8; POINT_BYTES] {
        self.0.compress().to_bytes()
    }

    /// Rejects non-canonical encodings.
    pub fn decode(bytes: &[u8]) -> Result<GroupElement, GroupError> {
        if bytes.len() != POINT_BYTES {
            return Err(GroupError::Truncated {
                needed: POINT_BYTES,
                had: bytes.len(),
            });
        }
        CompressedRistretto::from_slice(bytes)
            .map_err(|_| GroupError::BadPoint)?
            .decompress()
            .map(GroupElement)
            .ok_or(GroupError::BadPoint)
    }

    /// Domain-separated hash-to-group (Elligator on 64 uniform bytes).
    pub fn hash_to_group(domain: &[u8], msg: &[u8]) -> GroupElement {
        let mut h = Sha512::new();
        h.update((domain.len() as u64).to_le_bytes());
        h.update(domain);
        h.update(msg);
        let digest: [u8; 64] = h.finalize().into();
        GroupElement(RistrettoPoint::from_uniform_bytes(&digest))
    }
}

impl Add for GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: GroupElement) -> GroupElement {
        GroupElement(self.0 + rhs.0)
    }
}

impl Sub for GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: GroupElement) -> GroupElement {
        GroupElement(self.0 - rhs.0)
    }
}

impl Mul<Scalar> for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: Scalar) -> GroupElement {
        GroupElement(self.0 * rhs.0)
    }
}

/// Constant-time multiscalar multiplication; use for anything touching
/// secret exponents.
pub fn msm(scalars: &[Scalar], points: &[GroupElement]) -> GroupElement {
    debug_assert_eq!(scalars.len(), points.len());
    GroupElement(RistrettoPoint::multiscalar_mul(
        scalars.iter().map(|s| s.0),
        points.iter().map(|p| p.0),
    ))
}

/// Variable-time multiscalar multiplication; only for public data
/// (verification equations).
pub fn msm_vartime(scalars: &[Scalar], points: &[GroupElement]) -> GroupElement {
    debug_assert_eq!(scalars.len(), points.len());
    GroupElement(RistrettoPoint::vartime_multiscalar_mul(
        scalars.iter().map(|s| s.0),
        points.iter().map(|p| p.0),
    ))
}

/// A Pedersen commitment: `g^x h^r` for the scalar form, `h^r ∏ gᵢ^xᵢ` for
/// the vector form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Commitment(pub GroupElement);

impl Commitment {
    pub fn encode(&self) -> [u8; POINT_BYTES] {
        self.0.encode()
    }

    pub fn decode(bytes: &[u8]) -> Result<Commitment, GroupError> {
        GroupElement::decode(bytes).map(Commitment)
    }
}

/// Commitment key: generators derived by hash-to-group from a context label,
/// so no party knows their relative discrete logs.
///
/// Two generator families are derived. `g_vec` carries committed vectors;
/// `h_vec` is the disjoint family the circuit argument uses for its
/// right-hand wires and blinding. Both are `width` long.
#[derive(Clone, Debug)]
pub struct PedersenParams {
    pub context_label: Vec<u8>,
    pub g: GroupElement,
    pub h: GroupElement,
    pub g_vec: Vec<GroupElement>,
    pub h_vec: Vec<GroupElement>,
}

const GEN_DOMAIN: &[u8] = b"wvss/gens/v1";

/// Deterministic commitment-key setup for a context label.
pub fn setup(context_label: &[u8], width: usize) -> PedersenParams {
    assert!(width >= 1, "width must be at least 1");
    let tagged = |role: &[u8], idx: u64| {
        let mut msg = Vec::with_capacity(context_label.len() + role.len() + 9);
        msg.extend_from_slice(context_label);
        msg.push(0x1f);
        msg.extend_from_slice(role);
        msg.extend_from_slice(&idx.to_le_bytes());
        GroupElement::hash_to_group(GEN_DOMAIN, &msg)
    };
    PedersenParams {
        context_label: context_label.to_vec(),
        g: tagged(b"g", 0),
        h: tagged(b"h", 0),
        g_vec: (0..width as u64).map(|i| tagged(b"G", i)).collect(),
        h_vec: (0..width as u64).map(|i| tagged(b"H", i)).collect(),
    }
}

/// Default context label used by the sharing protocol.
pub const DEFAULT_CONTEXT: &[u8] = b"wvss-v1";

static SHARED: Lazy<Mutex<HashMap<usize, Arc<PedersenParams>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Process-wide cache of `setup(DEFAULT_CONTEXT, width)`; generating tens of
/// thousands of generators is not free, and provers and verifiers in one
/// process can share them.
pub fn shared_setup(width: usize) -> Arc<PedersenParams> {
    let mut map = SHARED.lock().unwrap();
    if let Some(p) = map.get(&width) {
        return p.clone();
    }
    let params = Arc::new(setup(DEFAULT_CONTEXT, width));
    map.insert(width, params.clone());
    params
}

impl PedersenParams {
    pub fn width(&self) -> usize {
        self.g_vec.len()
    }

    /// Scalar Pedersen commitment `g^x h^r`.
    pub fn commit(&self, x: Scalar, r: Scalar) -> Commitment {
        Commitment(msm(&[x, r], &[self.g, self.h]))
    }

    /// Vector commitment `h^r ∏ gᵢ^xᵢ`. Zero-padding the vector leaves the
    /// value unchanged.
    pub fn commit_vec(&self, xs: &[Scalar], r: Scalar) -> Result<Commitment, GroupError> {
        self.commit_vec_in(&self.g_vec, xs, r)
    }

    /// Vector commitment under the second generator family, `h^r ∏ hᵢ^xᵢ`.
    /// The circuit argument commits right-hand wire vectors this way so it
    /// can bind them on the verification equation's second basis.
    pub fn commit_vec_h(&self, xs: &[Scalar], r: Scalar) -> Result<Commitment, GroupError> {
        self.commit_vec_in(&self.h_vec, xs, r)
    }

    fn commit_vec_in(
        &self,
        gens: &[GroupElement],
        xs: &[Scalar],
        r: Scalar,
    ) -> Result<Commitment, GroupError> {
        if xs.len() > gens.len() {
            return Err(GroupError::VectorTooWide {
                got: xs.len(),
                width: gens.len(),
            });
        }
        let mut scalars = Vec::with_capacity(xs.len() + 1);
        let mut points = Vec::with_capacity(xs.len() + 1);
        scalars.push(r);
        points.push(self.h);
        for (x, gi) in xs.iter().zip(gens.iter()) {
            scalars.push(*x);
            points.push(*gi);
        }
        Ok(Commitment(msm(&scalars, &points)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(7)
    }

    #[test]
    fn order_is_253_bits() {
        assert_eq!(scalar_order().bits(), SCALAR_BITS as u64);
        // the hardcoded order matches the curve library's reduction
        assert_eq!(Scalar::from_nat(scalar_order()), Scalar::ZERO);
        assert_eq!(
            Scalar::from_nat(&(scalar_order() + 1u8)),
            Scalar::ONE
        );
    }

    #[test]
    fn setup_is_deterministic_and_distinct() {
        let a = setup(b"wvss-v1", 4);
        let b = setup(b"wvss-v1", 4);
        assert_eq!(a.g.encode(), b.g.encode());
        assert_eq!(a.h.encode(), b.h.encode());
        for i in 0..4 {
            assert_eq!(a.g_vec[i].encode(), b.g_vec[i].encode());
            assert_eq!(a.h_vec[i].encode(), b.h_vec[i].encode());
        }
        // all generators pairwise distinct
        let mut all: Vec<[u8; 32]> = vec![a.g.encode(), a.h.encode()];
        all.extend(a.g_vec.iter().map(|p| p.encode()));
        all.extend(a.h_vec.iter().map(|p| p.encode()));
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert_ne!(all[i], all[j]);
            }
        }
    }

    #[test]
    fn setup_labels_differ() {
        let a = setup(b"a", 1);
        let b = setup(b"b", 1);
        assert_ne!(a.g_vec[0].encode(), b.g_vec[0].encode());
    }

    #[test]
    fn commit_zero_is_identity_exponent() {
        let p = setup(b"t", 1);
        assert_eq!(
            p.commit(Scalar::ZERO, Scalar::ZERO).0,
            GroupElement::identity()
        );
    }

    #[test]
    fn commit_homomorphism() {
        let p = setup(b"t", 1);
        let mut r = rng();
        for _ in 0..20 {
            let (x, y) = (Scalar::random(&mut r), Scalar::random(&mut r));
            let (rx, ry) = (Scalar::random(&mut r), Scalar::random(&mut r));
            let lhs = Commitment(p.commit(x, rx).0 + p.commit(y, ry).0);
            let rhs = p.commit(x + y, rx + ry);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn commit_wraps_mod_order() {
        let p = setup(b"t", 1);
        let x = Nat::from(12345u64);
        let lifted = &x + scalar_order();
        let r = Scalar::from_u64(9);
        assert_eq!(
            p.commit(Scalar::from_nat(&x), r),
            p.commit(Scalar::from_nat(&lifted), r)
        );
    }

    #[test]
    fn vector_commit_basics() {
        let p = setup(b"t", 3);
        let r = Scalar::from_u64(5);
        // all-zero vector equals the scalar form with x = 0 and g unused
        let zeros = [Scalar::ZERO; 3];
        let via_vec = p.commit_vec(&zeros, r).unwrap();
        assert_eq!(via_vec.0, p.h * r);
        // width-1: g_1^x h^r
        let p1 = setup(b"t", 1);
        let x = Scalar::from_u64(42);
        assert_eq!(
            p1.commit_vec(&[x], r).unwrap().0,
            p1.g_vec[0] * x + p1.h * r
        );
        // permuting a vector changes the commitment
        let xs = [Scalar::from_u64(1), Scalar::from_u64(2), Scalar::from_u64(3)];
        let sx = [Scalar::from_u64(2), Scalar::from_u64(1), Scalar::from_u64(3)];
        assert_ne!(p.commit_vec(&xs, r).unwrap(), p.commit_vec(&sx, r).unwrap());
        // zero padding leaves the value unchanged
        let padded = [xs[0], xs[1], xs[2]];
        let short = p.commit_vec(&padded[..2], r).unwrap();
        let long = p
            .commit_vec(&[xs[0], xs[1], Scalar::ZERO], r)
            .unwrap();
        assert_eq!(short, long);
    }

    #[test]
    fn vector_too_wide() {
        let p = setup(b"t", 2);
        let xs = [Scalar::ONE; 3];
        assert_eq!(
            p.commit_vec(&xs, Scalar::ZERO).unwrap_err(),
            GroupError::VectorTooWide { got: 3, width: 2 }
        );
    }

    #[test]
    fn encodings_round_trip_and_reject() {
        let mut r = rng();
        for _ in 0..10 {
            let s = Scalar::random(&mut r);
            assert_eq!(Scalar::decode(&s.encode()).unwrap(), s);
            let p = GroupElement::hash_to_group(b"t", &s.encode());
            assert_eq!(GroupElement::decode(&p.encode()).unwrap(), p);
        }
        // non-canonical scalar: the order itself
        let mut le = scalar_order().to_bytes_le();
        le.resize(32, 0);
        assert_eq!(Scalar::decode(&le).unwrap_err(), GroupError::BadScalar);
        // bad point bytes
        assert!(GroupElement::decode(&[0xff; 32]).is_err());
    }
}
