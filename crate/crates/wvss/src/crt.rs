//! Integer-side arithmetic: sharing-prime generation, CRT reconstruction,
//! and base-`p0` digit decomposition.
//!
//! Everything here works on exact naturals, never reduced mod the group
//! order. Keeping the integer/field boundary explicit is the point: the
//! wraparound attack lives exactly on that boundary, so share arithmetic and
//! CRT solving stay in ℕ and only cross into the field at well-marked
//! conversion sites.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::group::{scalar_order, Scalar, SCALAR_BITS};

/// Arbitrary-precision natural number.
pub type Nat = BigUint;

/// Largest supported prime bit length (party weight): `⌊(λ0 − 1) / 2⌋`,
/// which keeps `p0 > p² + p` for every sharing prime.
pub const MAX_WEIGHT_BITS: u32 = (SCALAR_BITS - 1) / 2;

/// Miller–Rabin rounds; error probability below `4^-40 = 2^-80`.
const MR_ROUNDS: u32 = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrtError {
    #[error("weight {bits} outside supported range 2..={max}", max = MAX_WEIGHT_BITS)]
    WeightOutOfRange { bits: u32 },
    #[error("moduli are not pairwise coprime")]
    NotCoprime,
    #[error("value does not fit in {digits} base-p0 digits")]
    TooLarge { digits: usize },
    #[error("no prime found in the sampling range")]
    NoPrimeFound,
}

/// A sharing prime of exactly `bit_length` bits (so `2^{w-1} < p < 2^w`).
///
/// Primes are drawn from the top quarter of the `w`-bit range,
/// `[2^w - 2^{w-2}, 2^w)`, so each factor loses less than `log2(4/3) ≈ 0.415`
/// bits against `2^w`. Parameter derivation leans on that bound when it
/// checks the reconstruction margin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharingPrime {
    pub p: Nat,
    pub bit_length: u32,
}

/// Sample a sharing prime of exactly `bit_length` bits.
pub fn gen_prime<R: RngCore + CryptoRng>(
    bit_length: u32,
    rng: &mut R,
) -> Result<SharingPrime, CrtError> {
    if !(2..=MAX_WEIGHT_BITS).contains(&bit_length) {
        return Err(CrtError::WeightOutOfRange { bits: bit_length });
    }
    let w = bit_length as u64;
    let lo = (Nat::one() << w) - (Nat::one() << (w - 2)); // 2^w - 2^{w-2}
    let hi = Nat::one() << w;
    for _ in 0..40_000 {
        let mut cand = rng.gen_biguint_range(&lo, &hi);
        cand |= Nat::one(); // force odd
        if cand < lo {
            continue;
        }
        if is_probable_prime(&cand, rng) {
            debug_assert_eq!(cand.bits(), w);
            return Ok(SharingPrime {
                p: cand,
                bit_length,
            });
        }
    }
    Err(CrtError::NoPrimeFound)
}

/// Miller–Rabin with `MR_ROUNDS` random bases.
pub fn is_probable_prime<R: RngCore + CryptoRng>(n: &Nat, rng: &mut R) -> bool {
    let two = Nat::from(2u8);
    let three = Nat::from(3u8);
    if n < &two {
        return false;
    }
    if *n == two || *n == three {
        return true;
    }
    if n.is_even() {
        return false;
    }
    // n - 1 = d * 2^s with d odd
    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'rounds: for _ in 0..MR_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'rounds;
            }
        }
        return false;
    }
    true
}

/// Modular inverse via extended gcd; `None` when `gcd(a, m) != 1`.
pub fn mod_inverse(a: &Nat, m: &Nat) -> Option<Nat> {
    let a = BigInt::from(a.clone());
    let m_int = BigInt::from(m.clone());
    let ext = a.extended_gcd(&m_int);
    if !ext.gcd.is_one() {
        return None;
    }
    let mut x = ext.x % &m_int;
    if x.is_negative() {
        x += &m_int;
    }
    Some(x.to_biguint().expect("normalized to non-negative"))
}

/// Exact CRT reconstruction: given residues `(sᵢ, pᵢ)` with pairwise coprime
/// moduli, returns the unique `s' < ∏ pᵢ` with `s' ≡ sᵢ (mod pᵢ)`, computed
/// as `Σ sᵢ qᵢ qᵢ' mod P` with `qᵢ = P / pᵢ` and `qᵢ' = qᵢ⁻¹ mod pᵢ`.
pub fn crt_solve(residues: &[(Nat, Nat)]) -> Result<Nat, CrtError> {
    for i in 0..residues.len() {
        for j in i + 1..residues.len() {
            if !residues[i].1.gcd(&residues[j].1).is_one() {
                return Err(CrtError::NotCoprime);
            }
        }
    }
    let p_all: Nat = residues.iter().map(|(_, p)| p.clone()).product();
    let mut acc = Nat::zero();
    for (s_i, p_i) in residues {
        debug_assert!(s_i < p_i, "residue must be reduced");
        let q_i = &p_all / p_i;
        let q_inv = mod_inverse(&q_i, p_i).ok_or(CrtError::NotCoprime)?;
        acc += s_i * &q_i * &q_inv;
    }
    Ok(acc % &p_all)
}

/// `s mod p` with exact integer semantics.
pub fn mod_small(s: &Nat, p: &Nat) -> Nat {
    debug_assert!(*p >= Nat::from(2u8));
    s % p
}

/// Decompose `s < p0^{m+1}` into `m + 1` base-`p0` digits, least significant
/// first.
pub fn decompose_base_p0(s: &Nat, m: usize) -> Result<Vec<Scalar>, CrtError> {
    let p0 = scalar_order();
    let mut rest = s.clone();
    let mut digits = Vec::with_capacity(m + 1);
    for _ in 0..=m {
        let (quot, rem) = rest.div_rem(p0);
        digits.push(Scalar::from_nat(&rem));
        rest = quot;
    }
    if !rest.is_zero() {
        return Err(CrtError::TooLarge { digits: m + 1 });
    }
    Ok(digits)
}

/// Inverse of [`decompose_base_p0`]: `Σ aᵢ p0^i` over the integers.
pub fn recompose_base_p0(digits: &[Scalar]) -> Nat {
    let p0 = scalar_order();
    let mut acc = Nat::zero();
    for d in digits.iter().rev() {
        acc = acc * p0 + d.to_nat();
    }
    acc
}

/// Minimal big-endian bytes with a 32-bit little-endian length prefix; the
/// canonical `Nat` wire form for params files and transcripts.
pub fn write_nat(out: &mut Vec<u8>, n: &Nat) {
    let bytes = n.to_bytes_be();
    let bytes: &[u8] = if n.is_zero() { &[] } else { &bytes };
    out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
    out.extend_from_slice(bytes);
}

/// Inverse of [`write_nat`]; returns the value and the bytes consumed.
pub fn read_nat(input: &[u8]) -> Option<(Nat, usize)> {
    if input.len() < 4 {
        return None;
    }
    let len = u32::from_le_bytes(input[..4].try_into().unwrap()) as usize;
    if input.len() < 4 + len {
        return None;
    }
    let body = &input[4..4 + len];
    // reject non-minimal encodings
    if !body.is_empty() && body[0] == 0 {
        return None;
    }
    Some((Nat::from_bytes_be(body), 4 + len))
}

/// `⌈log2 n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: &Nat) -> usize {
    debug_assert!(!n.is_zero());
    if n.is_one() {
        return 0;
    }
    ((n - 1u8).bits()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(11)
    }

    #[test]
    fn two_bit_prime_is_three() {
        // 2^1 < p < 2^2 leaves only 3
        for seed in 0..5 {
            let mut r = ChaCha20Rng::seed_from_u64(seed);
            assert_eq!(gen_prime(2, &mut r).unwrap().p, Nat::from(3u8));
        }
    }

    #[test]
    fn ten_bit_prime_checks_out_by_trial_division() {
        let mut r = rng();
        for _ in 0..20 {
            let sp = gen_prime(10, &mut r).unwrap();
            let p: u64 = sp.p.to_u64_digits()[0];
            assert!(512 < p && p < 1024);
            let mut d = 2u64;
            while d * d <= p {
                assert_ne!(p % d, 0, "{p} divisible by {d}");
                d += 1;
            }
        }
    }

    #[test]
    fn weight_cap_enforced() {
        let mut r = rng();
        assert_eq!(
            gen_prime(200, &mut r).unwrap_err(),
            CrtError::WeightOutOfRange { bits: 200 }
        );
        assert_eq!(
            gen_prime(1, &mut r).unwrap_err(),
            CrtError::WeightOutOfRange { bits: 1 }
        );
        assert!(gen_prime(MAX_WEIGHT_BITS, &mut r).is_ok());
    }

    #[test]
    fn prime_invariants_hold() {
        let mut r = rng();
        for w in [2u32, 5, 16, 64, 126] {
            let sp = gen_prime(w, &mut r).unwrap();
            assert_eq!(sp.p.bits(), w as u64);
            assert!(sp.p > (Nat::one() << (w - 1)));
            // p0 > p^2 + p
            assert!(*scalar_order() > (&sp.p * &sp.p + &sp.p));
        }
    }

    #[test]
    fn crt_example_from_brute_force() {
        // brute-force scan 0..14 gives 8 for residues (2 mod 3, 3 mod 5)
        let expected = (0u64..15)
            .find(|s| s % 3 == 2 && s % 5 == 3)
            .unwrap();
        assert_eq!(expected, 8);
        let got = crt_solve(&[
            (Nat::from(2u8), Nat::from(3u8)),
            (Nat::from(3u8), Nat::from(5u8)),
        ])
        .unwrap();
        assert_eq!(got, Nat::from(8u8));
    }

    #[test]
    fn crt_zero_and_noncoprime() {
        assert_eq!(
            crt_solve(&[(Nat::zero(), Nat::from(97u8))]).unwrap(),
            Nat::zero()
        );
        assert_eq!(
            crt_solve(&[
                (Nat::one(), Nat::from(4u8)),
                (Nat::one(), Nat::from(6u8))
            ])
            .unwrap_err(),
            CrtError::NotCoprime
        );
    }

    #[test]
    fn mod_small_examples() {
        assert_eq!(
            mod_small(&Nat::from(23u8), &Nat::from(5u8)),
            Nat::from(3u8)
        );
        assert_eq!(mod_small(&Nat::from(8u8), &Nat::from(3u8)), Nat::from(2u8));
        let p = Nat::from(101u8);
        assert_eq!(mod_small(&(&p - 1u8), &p), &p - 1u8);
    }

    #[test]
    fn decompose_examples() {
        let p0 = scalar_order();
        assert_eq!(
            decompose_base_p0(&Nat::zero(), 2).unwrap(),
            vec![Scalar::ZERO; 3]
        );
        let s = Nat::from(5u8) + p0 * 7u8 + p0 * p0 * 2u8;
        let digits = decompose_base_p0(&s, 2).unwrap();
        assert_eq!(
            digits,
            vec![Scalar::from_u64(5), Scalar::from_u64(7), Scalar::from_u64(2)]
        );
        // too large
        let big = p0 * p0 * p0;
        assert!(decompose_base_p0(&big, 2).is_err());
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(&Nat::one()), 0);
        assert_eq!(ceil_log2(&Nat::from(2u8)), 1);
        assert_eq!(ceil_log2(&Nat::from(3u8)), 2);
        assert_eq!(ceil_log2(&Nat::from(4u8)), 2);
        assert_eq!(ceil_log2(&Nat::from(5u8)), 3);
    }

    proptest! {
        #[test]
        fn crt_inverts_sharing_small(s in 0u64..1_000_000) {
            // moduli with product above 10^6
            let ps = [101u64, 103, 107];
            let residues: Vec<(Nat, Nat)> = ps
                .iter()
                .map(|p| (Nat::from(s % p), Nat::from(*p)))
                .collect();
            let p_all: u64 = ps.iter().product();
            let got = crt_solve(&residues).unwrap();
            prop_assert_eq!(got, Nat::from(s % p_all));
        }

        #[test]
        fn decompose_recompose_round_trip(bytes in proptest::collection::vec(any::<u8>(), 1..90)) {
            let s = Nat::from_bytes_be(&bytes);
            let p0 = scalar_order();
            if s < p0 * p0 * p0 {
                let digits = decompose_base_p0(&s, 2).unwrap();
                prop_assert_eq!(recompose_base_p0(&digits), s);
            }
        }

        #[test]
        fn nat_wire_round_trip(bytes in proptest::collection::vec(any::<u8>(), 0..40)) {
            let n = Nat::from_bytes_be(&bytes);
            let mut buf = Vec::new();
            write_nat(&mut buf, &n);
            let (back, used) = read_nat(&buf).unwrap();
            prop_assert_eq!(back, n);
            prop_assert_eq!(used, buf.len());
        }
    }
}
