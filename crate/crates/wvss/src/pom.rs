//! Witness solvers for the congruence circuits, and the non-interactive
//! proof-of-mod prover and verifier built on the circuit argument.
//!
//! Solvers are exact-integer code: they refuse false statements instead of
//! producing witnesses that cannot satisfy the circuit, and they assert the
//! honest decomposition path on true ones.

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::circuits::{emod_ckt, DealLayout, EmodLayout, ModParams, PomSlot, Tail};
use crate::crt::Nat;
use crate::field::Field;
use crate::group::{scalar_order, Commitment, GroupError, PedersenParams, Scalar};
use crate::proof::{
    self, CircuitProof, ProveError, Transcript, VerifyError, WireBlinding, WireCommitments,
};
use crate::r1cs::Witness;

#[derive(Debug, Error)]
pub enum PomError {
    #[error("statement is false: {0}")]
    BadInput(String),
    #[error(transparent)]
    Circuit(#[from] crate::r1cs::CircuitError),
    #[error(transparent)]
    Commit(#[from] GroupError),
    #[error(transparent)]
    Prove(#[from] ProveError),
}

/// Binary decomposition of `v` into `n` bits as the paired wire vectors
/// `(a, b)` with `a ∘ b = 0`; when `v ≥ 2^n` the total fallback
/// `a = (v, 0, …)`, `b = (0, −1, …)` is returned instead.
pub fn decomp<F: Field>(v: &Nat, n: usize) -> (Vec<F>, Vec<F>) {
    let (a, b, _) = decomp_flagged(v, n);
    (a, b)
}

fn decomp_flagged<F: Field>(v: &Nat, n: usize) -> (Vec<F>, Vec<F>, bool) {
    let one = F::one();
    if v.bits() as usize <= n {
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for i in 0..n {
            if v.bit(i as u64) {
                a.push(one);
                b.push(F::zero());
            } else {
                a.push(F::zero());
                b.push(-one);
            }
        }
        (a, b, true)
    } else {
        let mut a = vec![F::zero(); n];
        let mut b = vec![-one; n];
        a[0] = F::from_nat(v);
        b[0] = F::zero();
        (a, b, false)
    }
}

/// `(x − y) mod p0` on naturals already below `p0`.
fn sub_mod(x: &Nat, y: &Nat, p0: &Nat) -> Nat {
    ((x + p0) - y) % p0
}

fn write_group<F: Field>(w: &mut Witness<F>, range: std::ops::Range<usize>, a: Vec<F>, b: Vec<F>) {
    for (i, (av, bv)) in range.zip(a.into_iter().zip(b)) {
        w.a[i] = av;
        w.b[i] = bv;
        w.c[i] = F::zero();
    }
}

/// Fill one congruence slot for the relation `v = s mod p`, where `k` is
/// the exact integer quotient on true statements. With `forged_k` the slot
/// is filled from the given `k` instead (the wraparound dealer's move); the
/// mandatory ranges then cannot hold and the witness is knowingly bad.
pub(crate) fn fill_pom_slot<F: Field>(
    w: &mut Witness<F>,
    slot: &PomSlot,
    mp: &ModParams,
    v: &Nat,
    s: &Nat,
    forged_k: Option<&Nat>,
) -> Result<(), PomError> {
    let p0 = F::modulus();
    let k = match forged_k {
        Some(k) => k.clone(),
        None => {
            if v >= &mp.p {
                return Err(PomError::BadInput(format!("residue {v} not below {}", mp.p)));
            }
            let (k, rem) = (s - v).div_rem(&mp.p);
            if !rem.is_zero() {
                return Err(PomError::BadInput(format!(
                    "{v} != {s} mod {} over the integers",
                    mp.p
                )));
            }
            k
        }
    };
    let strict = forged_k.is_none();
    let q = &mp.q_quot;
    let t = &mp.t_rem;
    let one = Nat::one();

    let (a1, b1, h1) = decomp_flagged::<F>(&(&k % &p0), slot.n2);
    let (a2, b2, h2) = decomp_flagged::<F>(&sub_mod(q, &(&k % &p0), &p0), slot.n2);
    let (a3, b3, h3) = decomp_flagged::<F>(v, slot.n1);
    let (a4, b4, h4) = decomp_flagged::<F>(&sub_mod(&(&mp.p - &one), v, &p0), slot.n1);
    let (a5, b5, h5) = decomp_flagged::<F>(&sub_mod(&(q - &one), &(&k % &p0), &p0), slot.n2);
    let (a6, b6, h6) = decomp_flagged::<F>(&sub_mod(&(t - &one), v, &p0), slot.n1);

    let a_last = a5[0] - b5[0] - F::one();
    let b_last = a6[0] - b6[0] - F::one();
    if strict {
        debug_assert!(h1 && h2 && h3 && h4, "mandatory ranges must be honest");
        debug_assert!(h5 || h6, "one disjunct must hold on a true statement");
        debug_assert!((a_last * b_last).is_zero());
    }
    write_group(w, slot.g1(), a1, b1);
    write_group(w, slot.g2(), a2, b2);
    write_group(w, slot.g3(), a3, b3);
    write_group(w, slot.g4(), a4, b4);
    write_group(w, slot.g5(), a5, b5);
    write_group(w, slot.g6(), a6, b6);
    w.a[slot.last()] = a_last;
    w.b[slot.last()] = b_last;
    // keep the gate identity; the c = 0 row is what catches a forgery
    w.c[slot.last()] = a_last * b_last;
    Ok(())
}

/// Fill every slot of one extended congruence instance: digit slots plus the
/// collapse/chain tail, for residue `v` and digit values `digits[0..=m]`.
pub(crate) fn fill_emod_instance<F: Field>(
    w: &mut Witness<F>,
    layout: &EmodLayout,
    v: &Nat,
    digits: &[Nat],
) -> Result<(), PomError> {
    let mp = &layout.mp;
    if layout.m == 0 {
        return fill_pom_slot(w, &layout.tail_slots[0], mp, v, &digits[0], None);
    }
    let residues: Vec<Nat> = digits.iter().map(|d| d % &mp.p).collect();
    for (j, slot) in layout.digit_slots.iter().enumerate() {
        fill_pom_slot(w, slot, mp, &residues[j], &digits[j], None)?;
    }
    match layout.tail {
        Tail::Collapse => {
            let u: Nat = residues
                .iter()
                .zip(&layout.pow_mod)
                .map(|(r, t)| r * t)
                .sum();
            fill_pom_slot(w, &layout.tail_slots[0], mp, v, &u, None)?;
        }
        Tail::Chain => {
            let mut prev = residues[layout.m].clone();
            for (step, slot) in layout.tail_slots.iter().enumerate() {
                let j = layout.m - 1 - step;
                let v_j = &residues[j] + &mp.t_rem * &prev;
                let v_next = &v_j % &mp.p;
                fill_pom_slot(w, slot, mp, &v_next, &v_j, None)?;
                prev = v_next;
            }
            if &prev != v {
                return Err(PomError::BadInput(format!(
                    "digits fold to {prev}, not {v}"
                )));
            }
        }
        Tail::Direct => unreachable!(),
    }
    Ok(())
}

/// Witness for the base congruence circuit (`v = s mod p`), generic over
/// the field so oracle tests can run at toy scale.
pub fn mod_solve_in<F: Field>(v: &Nat, s: &Nat, p: &Nat) -> Result<Witness<F>, PomError> {
    emod_solve_in(v, std::slice::from_ref(s), p)
}

/// Witness for the extended congruence circuit
/// (`v = Σ digits[i]·p0^i mod p`).
pub fn emod_solve_in<F: Field>(v: &Nat, digits: &[Nat], p: &Nat) -> Result<Witness<F>, PomError> {
    let p0 = F::modulus();
    let mp = ModParams::for_modulus(p, &p0)?;
    validate_emod_statement(v, digits, &mp, &p0)?;
    let layout = EmodLayout::plan(mp, digits.len() - 1, 0);
    let mut w = Witness::zeroed(layout.gates());
    fill_emod_instance(&mut w, &layout, v, digits)?;
    Ok(w)
}

/// Alg.-3-shaped solver at the real field.
pub fn mod_solve(v: &Nat, s: &Nat, p: &Nat) -> Result<Witness<Scalar>, PomError> {
    mod_solve_in(v, s, p)
}

/// Extended solver at the real field.
pub fn emod_solve(v: &Nat, digits: &[Nat], p: &Nat) -> Result<Witness<Scalar>, PomError> {
    emod_solve_in(v, digits, p)
}

fn validate_emod_statement(
    v: &Nat,
    digits: &[Nat],
    mp: &ModParams,
    p0: &Nat,
) -> Result<(), PomError> {
    if digits.is_empty() {
        return Err(PomError::BadInput("no digits".into()));
    }
    if v >= &mp.p {
        return Err(PomError::BadInput(format!("residue {v} not below {}", mp.p)));
    }
    for d in digits {
        if d >= p0 {
            return Err(PomError::BadInput("digit not below p0".into()));
        }
    }
    let mut acc = Nat::zero();
    for d in digits.iter().rev() {
        acc = acc * p0 + d;
    }
    if &(&acc % &mp.p) != v {
        return Err(PomError::BadInput(format!(
            "{v} != value mod {}",
            mp.p
        )));
    }
    Ok(())
}

/// Witness for the full deal circuit: shared digit values
/// (`digits[0] = s_0`) and one residue per party.
pub(crate) fn fill_deal_witness<F: Field>(
    layout: &DealLayout,
    digits: &[Nat],
    shares: &[Nat],
) -> Result<Witness<F>, PomError> {
    let gates = layout.gates();
    let mut w = Witness::zeroed(gates);
    for (party, share) in layout.parties.iter().zip(shares) {
        fill_emod_instance(&mut w, party, share, digits)?;
    }
    Ok(w)
}

/// The broadcast congruence proof: wire commitments plus the circuit
/// argument transcript.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PomProof {
    pub wire_a: Commitment,
    pub wire_b: Commitment,
    pub wire_c: Commitment,
    pub circuit: CircuitProof,
}

impl PomProof {
    /// `A ∥ B ∥ C ∥ circuit proof`, everything in canonical encodings.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.wire_a.encode());
        out.extend_from_slice(&self.wire_b.encode());
        out.extend_from_slice(&self.wire_c.encode());
        self.circuit.encode_into(&mut out);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<PomProof, GroupError> {
        if bytes.len() < 96 {
            return Err(GroupError::Truncated {
                needed: 96,
                had: bytes.len(),
            });
        }
        let wire_a = Commitment::decode(&bytes[0..32])?;
        let wire_b = Commitment::decode(&bytes[32..64])?;
        let wire_c = Commitment::decode(&bytes[64..96])?;
        let (circuit, used) = CircuitProof::decode(&bytes[96..])?;
        if 96 + used != bytes.len() {
            return Err(GroupError::Truncated {
                needed: 96 + used,
                had: bytes.len(),
            });
        }
        Ok(PomProof {
            wire_a,
            wire_b,
            wire_c,
            circuit,
        })
    }

    pub fn group_element_count(&self) -> usize {
        3 + self.circuit.group_element_count()
    }

    pub fn scalar_count(&self) -> usize {
        self.circuit.scalar_count()
    }
}

#[derive(Debug, Error)]
pub enum PomVerifyError {
    #[error("malformed proof: {0}")]
    Malformed(GroupError),
    #[error(transparent)]
    Reject(#[from] VerifyError),
    #[error(transparent)]
    Circuit(#[from] crate::r1cs::CircuitError),
}

const POM_DOMAIN: &[u8] = b"wvss/pom/v1";

/// Seed the proof-of-mod transcript: everything public is absorbed before
/// the wire commitments, and the circuit challenge is squeezed right after
/// them. Binding the whole statement (not just A, B, C) rules out replaying
/// a proof against a different prime or commitment set.
fn pom_transcript(p: &Nat, v_commit: &Commitment, digit_commits: &[Commitment]) -> Transcript {
    let mut t = Transcript::new(POM_DOMAIN);
    t.absorb_nat(b"p0", scalar_order());
    t.absorb_nat(b"p", p);
    t.absorb_u64(b"m", (digit_commits.len() - 1) as u64);
    t.absorb_commitment(b"V", v_commit);
    for a in digit_commits {
        t.absorb_commitment(b"A_i", a);
    }
    t
}

/// Non-interactive prover for the extended congruence relation: commits the
/// solved wires, derives the circuit challenge from the transcript, and
/// proves the resulting circuit. `digits` are the openings of
/// `digit_commits`; `m = digits.len() - 1`.
pub fn ni_pom_prove<R: RngCore + CryptoRng>(
    params: &PedersenParams,
    p: &Nat,
    v: &Scalar,
    r_v: &Scalar,
    digits: &[Scalar],
    r_digits: &[Scalar],
    rng: &mut R,
) -> Result<PomProof, PomError> {
    assert_eq!(digits.len(), r_digits.len());
    let digit_nats: Vec<Nat> = digits.iter().map(|d| d.to_nat()).collect();
    let witness = emod_solve(&v.to_nat(), &digit_nats, p)?;

    let v_commit = params.commit(*v, *r_v);
    let digit_commits: Vec<Commitment> = digits
        .iter()
        .zip(r_digits)
        .map(|(d, r)| params.commit(*d, *r))
        .collect();

    let blinding = WireBlinding::random(rng);
    let wires = WireCommitments::commit(params, &witness, &blinding)?;

    let mut transcript = pom_transcript(p, &v_commit, &digit_commits);
    wires.absorb_into(&mut transcript);
    let z = transcript.challenge_scalar(b"z");
    let ckt = emod_ckt::<Scalar>(p, digits.len() - 1, z)?;

    let mut inputs = Vec::with_capacity(digits.len() + 1);
    inputs.push(*v);
    inputs.extend_from_slice(digits);
    let mut input_blind = Vec::with_capacity(digits.len() + 1);
    input_blind.push(*r_v);
    input_blind.extend_from_slice(r_digits);

    let mut v_commits = Vec::with_capacity(digit_commits.len() + 1);
    v_commits.push(v_commit);
    v_commits.extend_from_slice(&digit_commits);

    let circuit = proof::prove(
        params,
        &ckt,
        &v_commits,
        &inputs,
        &input_blind,
        &witness,
        &wires,
        &blinding,
        &mut transcript,
        rng,
    )?;
    Ok(PomProof {
        wire_a: wires.a,
        wire_b: wires.b,
        wire_c: wires.c,
        circuit,
    })
}

/// Non-interactive verifier: recomputes the challenge, rebuilds the circuit,
/// and checks the argument against the commitments.
pub fn ni_pom_verify(
    params: &PedersenParams,
    p: &Nat,
    v_commit: &Commitment,
    digit_commits: &[Commitment],
    pom: &PomProof,
) -> Result<(), PomVerifyError> {
    let mut transcript = pom_transcript(p, v_commit, digit_commits);
    let wires = WireCommitments {
        a: pom.wire_a,
        b: pom.wire_b,
        c: pom.wire_c,
    };
    wires.absorb_into(&mut transcript);
    let z = transcript.challenge_scalar(b"z");
    let ckt = emod_ckt::<Scalar>(p, digit_commits.len() - 1, z)?;

    let mut v_commits = Vec::with_capacity(digit_commits.len() + 1);
    v_commits.push(*v_commit);
    v_commits.extend_from_slice(digit_commits);

    proof::verify(
        params,
        &ckt,
        &v_commits,
        &wires,
        &pom.circuit,
        &mut transcript,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{mod_ckt, vss_ckt};
    use crate::r1cs::is_satisfied;
    use crate::field::ToyField;
    use num_traits::ToPrimitive;

    type F13 = ToyField<13>;

    #[test]
    fn decomp_examples() {
        let (a, b) = decomp::<F13>(&Nat::from(5u8), 3);
        assert_eq!(a, vec![F13::new(1), F13::new(0), F13::new(1)]);
        assert_eq!(b, vec![F13::new(0), -F13::new(1), F13::new(0)]);
        let (a, b) = decomp::<F13>(&Nat::zero(), 3);
        assert_eq!(a, vec![F13::new(0); 3]);
        assert_eq!(b, vec![-F13::new(1); 3]);
        // fallback
        let (a, b) = decomp::<F13>(&Nat::from(9u8), 3);
        assert_eq!(a, vec![F13::new(9), F13::new(0), F13::new(0)]);
        assert_eq!(b, vec![F13::new(0), -F13::new(1), -F13::new(1)]);
    }

    #[test]
    fn mod_solve_satisfies_for_every_toy_z() {
        let p = Nat::from(3u8);
        for s in 0u64..13 {
            let v = s % 3;
            let w = mod_solve_in::<F13>(&Nat::from(v), &Nat::from(s), &p).unwrap();
            for z in 0u64..13 {
                let ckt = mod_ckt::<F13>(&p, F13::new(z)).unwrap();
                let sat =
                    is_satisfied(&ckt, &[F13::new(v), F13::new(s)], &w).unwrap();
                assert!(sat, "s={s} v={v} z={z}");
            }
        }
    }

    #[test]
    fn mod_solve_toy_walkthrough() {
        // s = 11, v = 2: k = 3, left disjunct honest
        let w = mod_solve_in::<F13>(&Nat::from(2u8), &Nat::from(11u8), &Nat::from(3u8)).unwrap();
        // g1 holds bits of k = 3 at gates 0..3
        assert_eq!(w.a[0], F13::new(1));
        assert_eq!(w.a[1], F13::new(1));
        assert_eq!(w.a[2], F13::new(0));
        // left defect wire (a of the last gate) is zero
        assert_eq!(w.a[16 - 1], F13::new(0));

        // s = 12, v = 0: k = q = 4, right disjunct carries it
        let w = mod_solve_in::<F13>(&Nat::zero(), &Nat::from(12u8), &Nat::from(3u8)).unwrap();
        assert_eq!(w.b[16 - 1], F13::new(0), "right defect must vanish");
        for z in 0u64..13 {
            let ckt = mod_ckt::<F13>(&Nat::from(3u8), F13::new(z)).unwrap();
            assert!(is_satisfied(&ckt, &[F13::new(0), F13::new(12)], &w).unwrap());
        }
    }

    #[test]
    fn mod_solve_rejects_false_statements() {
        assert!(matches!(
            mod_solve_in::<F13>(&Nat::from(1u8), &Nat::from(11u8), &Nat::from(3u8)),
            Err(PomError::BadInput(_))
        ));
    }

    #[test]
    fn emod_toy_horner_walkthrough() {
        // digits (5, 7, 2) over p0 = 13 encode 434; 434 mod 3 = 2
        let digits = [Nat::from(5u8), Nat::from(7u8), Nat::from(2u8)];
        let p = Nat::from(3u8);
        let w = emod_solve_in::<F13>(&Nat::from(2u8), &digits, &p).unwrap();
        for z in 0u64..13 {
            let ckt = emod_ckt::<F13>(&p, 2, F13::new(z)).unwrap();
            let inputs = [F13::new(2), F13::new(5), F13::new(7), F13::new(2)];
            assert!(is_satisfied(&ckt, &inputs, &w).unwrap(), "z={z}");
        }
        // wrong residue is unsatisfiable by the honest solver
        assert!(emod_solve_in::<F13>(&Nat::from(1u8), &digits, &p).is_err());
    }

    #[test]
    fn emod_chain_path_toy() {
        // m = 6 forces the chain tail at p0 = 13, p = 3
        let digits: Vec<Nat> = [5u8, 7, 2, 0, 11, 3, 9].iter().map(|&d| Nat::from(d)).collect();
        let p = Nat::from(3u8);
        let mut acc = Nat::zero();
        for d in digits.iter().rev() {
            acc = acc * Nat::from(13u8) + d;
        }
        let v = (&acc % &p).to_u64().unwrap();
        let w = emod_solve_in::<F13>(&Nat::from(v), &digits, &p).unwrap();
        let mp = ModParams::for_modulus(&p, &Nat::from(13u8)).unwrap();
        let layout = EmodLayout::plan(mp, 6, 0);
        assert_eq!(layout.tail, Tail::Chain);
        for z in [0u64, 1, 5, 12] {
            let ckt = emod_ckt::<F13>(&p, 6, F13::new(z)).unwrap();
            let mut inputs = vec![F13::new(v)];
            inputs.extend(digits.iter().map(|d| F13::from_nat(d)));
            assert!(is_satisfied(&ckt, &inputs, &w).unwrap(), "z={z}");
        }
    }

    #[test]
    fn deal_witness_toy_two_parties() {
        // p0 = 13, primes (2, 3), one digit: digits (s0, a1)
        let primes = [Nat::from(2u8), Nat::from(3u8)];
        let digits = [Nat::from(9u8), Nat::from(4u8)]; // value 9 + 4·13 = 61
        let shares = [Nat::from(61u8 % 2), Nat::from(61u8 % 3)];
        let layout = DealLayout::plan(&primes, 1, &Nat::from(13u8)).unwrap();
        let w = fill_deal_witness::<F13>(&layout, &digits, &shares).unwrap();
        for z in 0u64..13 {
            let ckt = vss_ckt::<F13>(&primes, 1, F13::new(z)).unwrap();
            let inputs = [F13::new(9), F13::new(1), F13::new(1)];
            assert!(is_satisfied(&ckt, &inputs, &w).unwrap(), "z={z}");
        }
        // corrupt one share: satisfaction fails for (almost) every z
        let bad_shares = [Nat::from(0u8), shares[1].clone()];
        let w_bad = fill_deal_witness::<F13>(&layout, &digits, &bad_shares);
        match w_bad {
            Err(_) => {}
            Ok(w_bad) => {
                let mut fails = 0;
                for z in 0u64..13 {
                    let ckt = vss_ckt::<F13>(&primes, 1, F13::new(z)).unwrap();
                    let inputs = [F13::new(9), F13::new(0), F13::new(1)];
                    if !is_satisfied(&ckt, &inputs, &w_bad).unwrap() {
                        fails += 1;
                    }
                }
                assert!(fails >= 11, "corrupted share accepted for too many z");
            }
        }
    }

    #[test]
    fn real_field_solver_random_oracle_loop() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        let p = crate::crt::gen_prime(10, &mut rng).unwrap().p;
        for _ in 0..20 {
            let s_small: u128 = rng.gen();
            let s = Nat::from(s_small);
            let v = &s % &p;
            let w = mod_solve(&v, &s, &p).unwrap();
            for _ in 0..5 {
                let z = Scalar::random(&mut rng);
                let ckt = mod_ckt::<Scalar>(&p, z).unwrap();
                let inputs = [Scalar::from_nat(&v), Scalar::from_nat(&s)];
                assert!(is_satisfied(&ckt, &inputs, &w).unwrap());
            }
        }
    }

    fn pedersen_for_gates(gates: usize) -> std::sync::Arc<PedersenParams> {
        crate::group::shared_setup(gates.next_power_of_two().max(1))
    }

    #[test]
    fn ni_pom_round_trip_small_prime() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(21);
        let p = crate::crt::gen_prime(10, &mut rng).unwrap().p;
        let s = Scalar::random(&mut rng);
        let v = Scalar::from_nat(&(&s.to_nat() % &p));
        let r_v = Scalar::random(&mut rng);
        let r_s = Scalar::random(&mut rng);
        let mp = ModParams::for_modulus(&p, scalar_order()).unwrap();
        let params = pedersen_for_gates(mp.gates_per_slot());
        let proof =
            ni_pom_prove(&params, &p, &v, &r_v, &[s], &[r_s], &mut rng).unwrap();
        let v_commit = params.commit(v, r_v);
        let s_commit = params.commit(s, r_s);
        ni_pom_verify(&params, &p, &v_commit, &[s_commit], &proof).unwrap();

        // against a different prime: reject
        let p2 = crate::crt::gen_prime(11, &mut rng).unwrap().p;
        assert!(ni_pom_verify(&params, &p2, &v_commit, &[s_commit], &proof).is_err());
    }

    #[test]
    fn ni_pom_deterministic_bytes() {
        use rand::SeedableRng;
        let p = Nat::from(997u32);
        let mp = ModParams::for_modulus(&p, scalar_order()).unwrap();
        let params = pedersen_for_gates(mp.gates_per_slot());
        let make = || {
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
            let s = Scalar::from_u64(123456789);
            let v = Scalar::from_nat(&(&s.to_nat() % &p));
            ni_pom_prove(
                &params,
                &p,
                &v,
                &Scalar::from_u64(4),
                &[s],
                &[Scalar::from_u64(6)],
                &mut rng,
            )
            .unwrap()
            .encode()
        };
        assert_eq!(make(), make());
    }

    #[test]
    fn ni_pom_proof_size_formula() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(8);
        let p = crate::crt::gen_prime(10, &mut rng).unwrap().p;
        let mp = ModParams::for_modulus(&p, scalar_order()).unwrap();
        let gates = mp.gates_per_slot();
        let params = pedersen_for_gates(gates);
        let s = Scalar::random(&mut rng);
        let v = Scalar::from_nat(&(&s.to_nat() % &p));
        let proof = ni_pom_prove(
            &params,
            &p,
            &v,
            &Scalar::random(&mut rng),
            &[s],
            &[Scalar::random(&mut rng)],
            &mut rng,
        )
        .unwrap();
        let padded = gates.next_power_of_two();
        let expected = 2 * padded.trailing_zeros() as usize + 8;
        assert_eq!(proof.circuit.group_element_count(), expected);
        assert_eq!(proof.group_element_count(), expected + 3);
        assert_eq!(proof.scalar_count(), 5);
    }

    #[test]
    fn wraparound_forgery_rejected() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(33);
        let p = crate::crt::gen_prime(10, &mut rng).unwrap().p;
        let p0 = scalar_order();
        let mp = ModParams::for_modulus(&p, p0).unwrap();
        let params = pedersen_for_gates(mp.gates_per_slot());

        let s = Scalar::random(&mut rng);
        // wrong residue, still in [0, p)
        let v_forged = Scalar::from_nat(&((&s.to_nat() % &p + 1u8) % &p));
        // the mod-p0-consistent quotient always exists since gcd(p, p0) = 1
        let p_inv = crate::crt::mod_inverse(&p, p0).unwrap();
        let diff = ((&s.to_nat() + p0) - &v_forged.to_nat()) % p0;
        let k_forged = diff * &p_inv % p0;
        // commitment identity holds: v + k'·p = s (mod p0)
        assert_eq!(
            (&v_forged.to_nat() + &k_forged * &p) % p0,
            s.to_nat()
        );

        let layout = EmodLayout::plan(mp.clone(), 0, 0);
        let mut w = Witness::zeroed(layout.gates());
        fill_pom_slot(
            &mut w,
            &layout.tail_slots[0],
            &mp,
            &v_forged.to_nat(),
            &s.to_nat(),
            Some(&k_forged),
        )
        .unwrap();

        let (r_v, r_s) = (Scalar::random(&mut rng), Scalar::random(&mut rng));
        let v_commit = params.commit(v_forged, r_v);
        let s_commit = params.commit(s, r_s);

        let blinding = WireBlinding::random(&mut rng);
        let wires = WireCommitments::commit(&params, &w, &blinding).unwrap();
        let mut transcript = pom_transcript(&p, &v_commit, &[s_commit]);
        wires.absorb_into(&mut transcript);
        let z = transcript.challenge_scalar(b"z");
        let ckt = emod_ckt::<Scalar>(&p, 0, z).unwrap();
        // the forged witness satisfies the integer identity row but not the
        // mandatory ranges
        assert!(!is_satisfied(&ckt, &[v_forged, s], &w).unwrap());
        let circuit = proof::prove_unchecked(
            &params,
            &ckt,
            &[v_commit, s_commit],
            &[v_forged, s],
            &[r_v, r_s],
            &w,
            &wires,
            &blinding,
            &mut transcript,
            &mut rng,
        )
        .unwrap();
        let forged = PomProof {
            wire_a: wires.a,
            wire_b: wires.b,
            wire_c: wires.c,
            circuit,
        };
        assert!(ni_pom_verify(&params, &p, &v_commit, &[s_commit], &forged).is_err());
    }
}
