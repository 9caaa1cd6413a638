//! Weighted-ramp parameter derivation and the non-interactive deal:
//! share, verify, reconstruct, and the exact secrecy-distance oracle.

use std::sync::Arc;

use num_bigint::RandBigInt;
use num_traits::{One, Zero};
use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::circuits::{vss_ckt, DealLayout};
use crate::crt::{self, crt_solve, gen_prime, Nat, SharingPrime, MAX_WEIGHT_BITS};
use crate::group::{
    scalar_order, shared_setup, Commitment, GroupError, PedersenParams, Scalar, SCALAR_BITS,
};
use crate::pom::{fill_deal_witness, PomError};
use crate::proof::{self, CircuitProof, Transcript, WireBlinding, WireCommitments};
use crate::r1cs::Witness;

/// Ramp gap `T − t` used by [`derive_params`]: `2λ0` plus 64 slack bits.
pub const RAMP_GAP_BITS: u64 = 2 * SCALAR_BITS as u64 + 64;

/// Upper bound, in millibits, on `w − log2(p)` for primes sampled from the
/// top quarter of their range (`log2(4/3) ≈ 0.415`).
const PRIME_LOSS_MILLIBITS: u64 = 416;

/// Bits per base-`p0` digit assumed by the digit-count rule. Digits are
/// below `p0`, so only `λ0 − 1` bits are guaranteed.
const DIGIT_BITS_USABLE: u64 = SCALAR_BITS as u64 - 1;

#[derive(Debug, Error)]
pub enum ParamsError {
    #[error("weight {0} outside supported range 2..={max}", max = MAX_WEIGHT_BITS)]
    WeightOutOfRange(u32),
    #[error("reconstruction-threshold ratio must be in (0, 1]")]
    BadRatio,
    #[error(
        "infeasible: {detail} (minimal amplification for the ramp gap: {required_amplification})"
    )]
    Infeasible {
        required_amplification: u32,
        detail: String,
    },
    #[error(transparent)]
    Crt(#[from] crt::CrtError),
}

/// Parameters of one sharing instance.
///
/// `digit_bits` bounds the dealer's randomness: the lift value `a` is drawn
/// below `2^digit_bits` and decomposed into the `m` random digits, so the
/// lifted secret stays below `2^{digit_bits}·p0` and authorized sets can
/// actually reconstruct it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WvssParams {
    pub lambda_sec: u32,
    pub weights: Vec<u32>,
    pub primes: Vec<SharingPrime>,
    /// Number of random digits `a_1..a_m`.
    pub m: usize,
    pub digit_bits: u64,
    pub t_priv: u64,
    pub t_rec: u64,
    pub amplification: u32,
}

impl WvssParams {
    pub fn n_parties(&self) -> usize {
        self.primes.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|w| *w as u64).sum()
    }

    pub fn prime_nats(&self) -> Vec<Nat> {
        self.primes.iter().map(|p| p.p.clone()).collect()
    }

    pub fn deal_layout(&self) -> Result<DealLayout, crate::r1cs::CircuitError> {
        DealLayout::plan(&self.prime_nats(), self.m, scalar_order())
    }

    /// Commitment key wide enough for this instance's circuit.
    pub fn pedersen(&self) -> Result<Arc<PedersenParams>, crate::r1cs::CircuitError> {
        let gates = self.deal_layout()?.gates();
        Ok(shared_setup(gates.next_power_of_two().max(1)))
    }

    /// Weight of a set of party indices (1-based).
    pub fn weight_of(&self, indices: &[u32]) -> u64 {
        indices
            .iter()
            .filter_map(|i| self.weights.get((*i as usize).wrapping_sub(1)))
            .map(|w| *w as u64)
            .sum()
    }
}

fn sample_distinct_primes<R: RngCore + CryptoRng>(
    weights: &[u32],
    rng: &mut R,
) -> Result<Vec<SharingPrime>, ParamsError> {
    let mut primes: Vec<SharingPrime> = Vec::with_capacity(weights.len());
    for &w in weights {
        let mut tries = 0;
        loop {
            let cand = gen_prime(w, rng)?;
            if !primes.iter().any(|p| p.p == cand.p) {
                primes.push(cand);
                break;
            }
            tries += 1;
            if tries > 10_000 {
                return Err(ParamsError::Infeasible {
                    required_amplification: 1,
                    detail: format!("cannot find distinct primes of weight {w}"),
                });
            }
        }
    }
    Ok(primes)
}

/// Derive ramp parameters for the given weights.
///
/// The rule: `T = ⌈ratio·Σw⌉`, `t = T − (2λ0 + 64)`, digit randomness of
/// `t + λ_sec` bits spread over `m = ⌈(t + λ_sec)/(λ0 − 1)⌉` digits. If the
/// privacy threshold comes out non-positive, all weights are amplified by
/// the minimal integer `c`; amplification past the per-party weight cap is
/// an error. Secrecy holds by construction; the reconstruction margin is
/// checked against the worst-case prime slack (`< 0.416` bits per factor).
pub fn derive_params<R: RngCore + CryptoRng>(
    weights: &[u32],
    lambda_sec: u32,
    ratio_t: (u64, u64),
    rng: &mut R,
) -> Result<WvssParams, ParamsError> {
    let (num, den) = ratio_t;
    if num == 0 || den == 0 || num > den {
        return Err(ParamsError::BadRatio);
    }
    if weights.is_empty() {
        return Err(ParamsError::Infeasible {
            required_amplification: 1,
            detail: "no parties".into(),
        });
    }
    for &w in weights {
        if !(2..=MAX_WEIGHT_BITS).contains(&w) {
            return Err(ParamsError::WeightOutOfRange(w));
        }
    }
    let sum_w: u64 = weights.iter().map(|w| *w as u64).sum();
    let w_max = *weights.iter().max().unwrap() as u64;
    let n = weights.len() as u64;

    let threshold = |c: u64| -> u64 { (num * c * sum_w).div_ceil(den) };
    // smallest amplification that leaves the privacy threshold positive
    let mut required = 1u64;
    while threshold(required) < RAMP_GAP_BITS + 1 {
        required += 1;
    }

    // the gap must also cover reconstruction: T − t = gap ≥ λ_sec + λ0 + 1
    // plus the total prime slack — independent of amplification
    let gap_needed_mb = (lambda_sec as u64 + SCALAR_BITS as u64 + 1) * 1000
        + PRIME_LOSS_MILLIBITS * n;
    if RAMP_GAP_BITS * 1000 < gap_needed_mb {
        return Err(ParamsError::Infeasible {
            required_amplification: required as u32,
            detail: format!(
                "ramp gap {RAMP_GAP_BITS} cannot cover lambda_sec + lambda0 + prime slack for {n} parties"
            ),
        });
    }
    if required * w_max > MAX_WEIGHT_BITS as u64 {
        return Err(ParamsError::Infeasible {
            required_amplification: required as u32,
            detail: format!(
                "amplification by {required} pushes weight {w_max} past the cap"
            ),
        });
    }

    let c = required;
    let amp_weights: Vec<u32> = weights.iter().map(|w| w * c as u32).collect();
    let t_rec = threshold(c);
    let t_priv = t_rec - RAMP_GAP_BITS;
    let digit_bits = t_priv + lambda_sec as u64;
    let m = digit_bits.div_ceil(DIGIT_BITS_USABLE) as usize;

    let primes = sample_distinct_primes(&amp_weights, rng)?;
    let params = WvssParams {
        lambda_sec,
        weights: amp_weights,
        primes,
        m,
        digit_bits,
        t_priv,
        t_rec,
        amplification: c as u32,
    };
    debug_assert!(params.digit_bits <= DIGIT_BITS_USABLE * params.m as u64);
    Ok(params)
}

/// Build parameters with explicit thresholds and digit budget, bypassing the
/// ramp derivation. Meant for tests, benchmarks and simulations at sizes
/// where the full ramp analysis cannot hold; structural invariants (prime
/// shapes, digit capacity) are still enforced.
pub fn explicit_params<R: RngCore + CryptoRng>(
    weights: &[u32],
    m: usize,
    digit_bits: u64,
    t_priv: u64,
    t_rec: u64,
    lambda_sec: u32,
    rng: &mut R,
) -> Result<WvssParams, ParamsError> {
    for &w in weights {
        if !(2..=MAX_WEIGHT_BITS).contains(&w) {
            return Err(ParamsError::WeightOutOfRange(w));
        }
    }
    if digit_bits > DIGIT_BITS_USABLE * m as u64 {
        return Err(ParamsError::Infeasible {
            required_amplification: 1,
            detail: format!("{digit_bits} digit bits exceed {m} digits"),
        });
    }
    let primes = sample_distinct_primes(weights, rng)?;
    Ok(WvssParams {
        lambda_sec,
        weights: weights.to_vec(),
        primes,
        m,
        digit_bits,
        t_priv,
        t_rec,
        amplification: 1,
    })
}

/// Broadcast part of a deal: share commitments, wire commitments, and the
/// circuit proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DealProof {
    /// `Y_0` commits the secret; `Y_1..Y_n` commit the shares.
    pub share_commits: Vec<Commitment>,
    pub wires: WireCommitments,
    pub circuit: CircuitProof,
}

/// One party's private opening.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Opening {
    pub index: u32,
    pub share: Scalar,
    pub blinding: Scalar,
}

/// A full deal as the dealer sees it: every opening plus the broadcast
/// proof.
#[derive(Clone, Debug)]
pub struct Deal {
    pub openings: Vec<Opening>,
    pub proof: DealProof,
}

#[derive(Debug, Error)]
pub enum DealError {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Circuit(#[from] crate::r1cs::CircuitError),
    #[error(transparent)]
    Pom(#[from] PomError),
    #[error(transparent)]
    Prove(#[from] proof::ProveError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error)]
pub enum VerifyDealError {
    #[error("deal proof invalid: {0}")]
    ProofInvalid(String),
    #[error("opening does not match the committed share")]
    OpeningMismatch,
    #[error("malformed deal: {0}")]
    Malformed(String),
}

#[derive(Debug, Error)]
pub enum ReconstructError {
    #[error("set weight {have} below reconstruction threshold {need}")]
    Unauthorized { have: u64, need: u64 },
    #[error("reconstruction aborted: {0}")]
    Invalid(String),
}

const DEAL_DOMAIN: &[u8] = b"wvss/deal/v1";

/// Transcript seeding for a deal: the whole parameter set and every share
/// commitment go in before the wire commitments, and the circuit challenge
/// comes right after them.
fn deal_transcript(params: &WvssParams, share_commits: &[Commitment]) -> Transcript {
    let mut t = Transcript::new(DEAL_DOMAIN);
    t.absorb_nat(b"p0", scalar_order());
    t.absorb_u64(b"lambda-sec", params.lambda_sec as u64);
    t.absorb_u64(b"m", params.m as u64);
    t.absorb_u64(b"digit-bits", params.digit_bits);
    t.absorb_u64(b"t-priv", params.t_priv);
    t.absorb_u64(b"t-rec", params.t_rec);
    t.absorb_u64(b"n", params.n_parties() as u64);
    for p in &params.primes {
        t.absorb_nat(b"p_i", &p.p);
    }
    for y in share_commits {
        t.absorb_commitment(b"Y", y);
    }
    t
}

/// Shared tail of dealing: commit everything, derive the challenge, build
/// the circuit, and produce the argument. `checked` decides whether the
/// prover refuses unsatisfied witnesses; the adversarial harness disables
/// it to emit doomed proofs.
#[allow(clippy::too_many_arguments)]
pub(crate) fn finalize_deal<R: RngCore + CryptoRng>(
    params: &WvssParams,
    pedersen: &PedersenParams,
    secret: &Scalar,
    shares: &[Scalar],
    witness: &Witness<Scalar>,
    checked: bool,
    rng: &mut R,
) -> Result<Deal, DealError> {
    let n = params.n_parties();
    let mut values = Vec::with_capacity(n + 1);
    values.push(*secret);
    values.extend_from_slice(shares);
    let blindings: Vec<Scalar> = (0..=n).map(|_| Scalar::random(rng)).collect();
    let share_commits: Vec<Commitment> = values
        .iter()
        .zip(&blindings)
        .map(|(v, r)| pedersen.commit(*v, *r))
        .collect();

    let wire_blinding = WireBlinding::random(rng);
    let wires = WireCommitments::commit(pedersen, witness, &wire_blinding)?;

    let mut transcript = deal_transcript(params, &share_commits);
    wires.absorb_into(&mut transcript);
    let z = transcript.challenge_scalar(b"z");
    let ckt = vss_ckt::<Scalar>(&params.prime_nats(), params.m, z)?;

    let circuit = if checked {
        proof::prove(
            pedersen,
            &ckt,
            &share_commits,
            &values,
            &blindings,
            witness,
            &wires,
            &wire_blinding,
            &mut transcript,
            rng,
        )?
    } else {
        proof::prove_unchecked(
            pedersen,
            &ckt,
            &share_commits,
            &values,
            &blindings,
            witness,
            &wires,
            &wire_blinding,
            &mut transcript,
            rng,
        )?
    };

    let openings = values
        .iter()
        .zip(&blindings)
        .enumerate()
        .map(|(i, (v, r))| Opening {
            index: i as u32,
            share: *v,
            blinding: *r,
        })
        .collect();
    Ok(Deal {
        openings,
        proof: DealProof {
            share_commits,
            wires,
            circuit,
        },
    })
}

/// Compute the honest shares and digit values for a secret.
pub(crate) fn honest_shares<R: RngCore + CryptoRng>(
    params: &WvssParams,
    secret: &Scalar,
    rng: &mut R,
) -> (Vec<Nat>, Vec<Scalar>) {
    let p0 = scalar_order();
    let lift = if params.digit_bits == 0 {
        Nat::zero()
    } else {
        rng.gen_biguint_below(&(Nat::one() << params.digit_bits))
    };
    let mut digit_values = Vec::with_capacity(params.m + 1);
    digit_values.push(secret.to_nat());
    let mut rest = lift;
    for _ in 0..params.m {
        digit_values.push(&rest % p0);
        rest /= p0;
    }
    debug_assert!(rest.is_zero());
    let mut lifted = Nat::zero();
    for d in digit_values.iter().rev() {
        lifted = lifted * p0 + d;
    }
    let shares: Vec<Scalar> = params
        .primes
        .iter()
        .map(|p| Scalar::from_nat(&(&lifted % &p.p)))
        .collect();
    (digit_values, shares)
}

/// Deal a secret: draw the lift randomness, compute the weight-proportional
/// shares, and attach the broadcast proof.
pub fn share<R: RngCore + CryptoRng>(
    params: &WvssParams,
    pedersen: &PedersenParams,
    secret: &Scalar,
    rng: &mut R,
) -> Result<Deal, DealError> {
    let (digit_values, shares) = honest_shares(params, secret, rng);
    let layout = params.deal_layout()?;
    let share_nats: Vec<Nat> = shares.iter().map(|s| s.to_nat()).collect();
    let witness = fill_deal_witness::<Scalar>(&layout, &digit_values, &share_nats)?;
    finalize_deal(params, pedersen, secret, &shares, &witness, true, rng)
}

/// Check the broadcast proof alone: recompute the challenge, rebuild the
/// circuit, verify the argument.
pub fn verify_deal_proof(
    params: &WvssParams,
    pedersen: &PedersenParams,
    proof_part: &DealProof,
) -> Result<(), VerifyDealError> {
    if proof_part.share_commits.len() != params.n_parties() + 1 {
        return Err(VerifyDealError::Malformed(format!(
            "expected {} commitments, got {}",
            params.n_parties() + 1,
            proof_part.share_commits.len()
        )));
    }
    let mut transcript = deal_transcript(params, &proof_part.share_commits);
    proof_part.wires.absorb_into(&mut transcript);
    let z = transcript.challenge_scalar(b"z");
    let ckt = vss_ckt::<Scalar>(&params.prime_nats(), params.m, z)
        .map_err(|e| VerifyDealError::Malformed(e.to_string()))?;
    proof::verify(
        pedersen,
        &ckt,
        &proof_part.share_commits,
        &proof_part.wires,
        &proof_part.circuit,
        &mut transcript,
    )
    .map_err(|e| VerifyDealError::ProofInvalid(e.to_string()))
}

/// Check one party's opening against its commitment.
pub fn verify_opening(
    pedersen: &PedersenParams,
    proof_part: &DealProof,
    opening: &Opening,
) -> Result<(), VerifyDealError> {
    let y = proof_part
        .share_commits
        .get(opening.index as usize)
        .ok_or_else(|| VerifyDealError::Malformed("party index out of range".into()))?;
    if pedersen.commit(opening.share, opening.blinding) != *y {
        return Err(VerifyDealError::OpeningMismatch);
    }
    Ok(())
}

/// Full per-party acceptance: the broadcast proof and this party's opening,
/// reported independently.
pub fn verify_deal(
    params: &WvssParams,
    pedersen: &PedersenParams,
    proof_part: &DealProof,
    opening: &Opening,
) -> Result<(), VerifyDealError> {
    verify_deal_proof(params, pedersen, proof_part)?;
    verify_opening(pedersen, proof_part, opening)
}

/// Reconstruct the secret from an authorized set of openings: re-verifies
/// the proof and every opening, CRT-solves the residues, and reduces mod
/// `p0`.
pub fn reconstruct(
    params: &WvssParams,
    pedersen: &PedersenParams,
    proof_part: &DealProof,
    openings: &[Opening],
) -> Result<Scalar, ReconstructError> {
    let n = params.n_parties() as u32;
    let mut seen = std::collections::BTreeSet::new();
    for o in openings {
        if o.index == 0 || o.index > n {
            return Err(ReconstructError::Invalid(format!(
                "index {} is not a party",
                o.index
            )));
        }
        if !seen.insert(o.index) {
            return Err(ReconstructError::Invalid(format!(
                "duplicate opening for party {}",
                o.index
            )));
        }
    }
    let have: u64 = openings
        .iter()
        .map(|o| params.weights[o.index as usize - 1] as u64)
        .sum();
    if have < params.t_rec {
        return Err(ReconstructError::Unauthorized {
            have,
            need: params.t_rec,
        });
    }
    verify_deal_proof(params, pedersen, proof_part)
        .map_err(|e| ReconstructError::Invalid(e.to_string()))?;
    for o in openings {
        verify_opening(pedersen, proof_part, o)
            .map_err(|_| ReconstructError::Invalid(format!("opening {} rejected", o.index)))?;
    }
    let residues: Vec<(Nat, Nat)> = openings
        .iter()
        .map(|o| {
            (
                o.share.to_nat(),
                params.primes[o.index as usize - 1].p.clone(),
            )
        })
        .collect();
    let lifted = crt_solve(&residues).map_err(|e| ReconstructError::Invalid(e.to_string()))?;
    Ok(Scalar::from_nat(&(lifted % scalar_order())))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SecrecyError {
    #[error("enumeration space {0} exceeds the 10^7 budget")]
    TooLargeToEnumerate(u64),
}

/// Desk-scale CRT parameters for the exact secrecy oracle. No group is
/// involved: this exercises the integer sharing map alone.
#[derive(Clone, Debug)]
pub struct ToyCrtParams {
    pub p0: u64,
    pub primes: Vec<u64>,
    pub l_bound: u64,
}

/// Exact statistical distance, as `numerator / (2·trials)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SecrecyDistance {
    pub numerator: u64,
    pub trials: u64,
}

impl SecrecyDistance {
    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / (2.0 * self.trials as f64)
    }

    /// `SD ≤ num/den`, exactly.
    pub fn le_fraction(&self, num: u64, den: u64) -> bool {
        (self.numerator as u128) * (den as u128) <= 2 * (self.trials as u128) * (num as u128)
    }
}

/// Enumerate the dealer's randomness exhaustively and return the exact
/// statistical distance between the unauthorized share views of `s` and
/// `s_prime`.
pub fn secrecy_distance(
    toy: &ToyCrtParams,
    s: u64,
    s_prime: u64,
    unauthorized: &[usize],
) -> Result<SecrecyDistance, SecrecyError> {
    let space = toy.l_bound.saturating_mul(toy.p0);
    if space > 10_000_000 {
        return Err(SecrecyError::TooLargeToEnumerate(space));
    }
    if unauthorized.is_empty() {
        return Ok(SecrecyDistance {
            numerator: 0,
            trials: toy.l_bound,
        });
    }
    let view_space: u64 = unauthorized.iter().map(|i| toy.primes[*i]).product();
    let tally = |secret: u64| -> Vec<u64> {
        let mut counts = vec![0u64; view_space as usize];
        for a in 0..toy.l_bound {
            let lifted = secret as u128 + a as u128 * toy.p0 as u128;
            let mut key = 0u128;
            for i in unauthorized {
                let p = toy.primes[*i] as u128;
                key = key * p + lifted % p;
            }
            counts[key as usize] += 1;
        }
        counts
    };
    let c1 = tally(s);
    let c2 = tally(s_prime);
    let numerator: u64 = c1
        .iter()
        .zip(&c2)
        .map(|(a, b)| a.abs_diff(*b))
        .sum();
    Ok(SecrecyDistance {
        numerator,
        trials: toy.l_bound,
    })
}

// ------------------------------------------------------------------
// Wire formats
// ------------------------------------------------------------------

impl DealProof {
    /// Canonical binary: 32-bit LE commitment count, `Y_0..Y_n`, the three
    /// wire commitments, then the circuit proof.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.share_commits.len() as u32).to_le_bytes());
        for y in &self.share_commits {
            out.extend_from_slice(&y.encode());
        }
        out.extend_from_slice(&self.wires.a.encode());
        out.extend_from_slice(&self.wires.b.encode());
        out.extend_from_slice(&self.wires.c.encode());
        self.circuit.encode_into(&mut out);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<DealProof, GroupError> {
        if bytes.len() < 4 {
            return Err(GroupError::Truncated {
                needed: 4,
                had: bytes.len(),
            });
        }
        let count = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
        if count == 0 || count > 1_000_000 {
            return Err(GroupError::BadPoint);
        }
        let mut off = 4;
        let next = |bytes: &[u8], off: &mut usize| -> Result<Commitment, GroupError> {
            if bytes.len() < *off + 32 {
                return Err(GroupError::Truncated {
                    needed: *off + 32,
                    had: bytes.len(),
                });
            }
            let c = Commitment::decode(&bytes[*off..*off + 32])?;
            *off += 32;
            Ok(c)
        };
        let mut share_commits = Vec::with_capacity(count);
        for _ in 0..count {
            share_commits.push(next(bytes, &mut off)?);
        }
        let wires = WireCommitments {
            a: next(bytes, &mut off)?,
            b: next(bytes, &mut off)?,
            c: next(bytes, &mut off)?,
        };
        let (circuit, used) = CircuitProof::decode(&bytes[off..])?;
        if off + used != bytes.len() {
            return Err(GroupError::Truncated {
                needed: off + used,
                had: bytes.len(),
            });
        }
        Ok(DealProof {
            share_commits,
            wires,
            circuit,
        })
    }

    /// Total group elements broadcast: `n + 1` share commitments, 3 wire
    /// commitments, and the circuit proof's elements.
    pub fn group_element_count(&self) -> usize {
        self.share_commits.len() + 3 + self.circuit.group_element_count()
    }
}

impl Opening {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(68);
        out.extend_from_slice(&self.index.to_le_bytes());
        out.extend_from_slice(&self.share.encode());
        out.extend_from_slice(&self.blinding.encode());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Opening, GroupError> {
        if bytes.len() != 68 {
            return Err(GroupError::Truncated {
                needed: 68,
                had: bytes.len(),
            });
        }
        Ok(Opening {
            index: u32::from_le_bytes(bytes[0..4].try_into().unwrap()),
            share: Scalar::decode(&bytes[4..36])?,
            blinding: Scalar::decode(&bytes[36..68])?,
        })
    }
}

impl WvssParams {
    /// Structured-text params file.
    pub fn encode_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "wvss-params v1");
        let _ = writeln!(out, "group ristretto255 lambda0 {SCALAR_BITS}");
        let _ = writeln!(out, "lambda-sec {}", self.lambda_sec);
        let _ = writeln!(out, "m {}", self.m);
        let _ = writeln!(out, "digit-bits {}", self.digit_bits);
        let _ = writeln!(out, "t-priv {}", self.t_priv);
        let _ = writeln!(out, "t-rec {}", self.t_rec);
        let _ = writeln!(out, "amplification {}", self.amplification);
        for (w, p) in self.weights.iter().zip(&self.primes) {
            let _ = writeln!(out, "party {w} {}", p.p);
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<WvssParams, String> {
        let mut lines = text.lines();
        if lines.next() != Some("wvss-params v1") {
            return Err("missing params header".into());
        }
        let mut lambda_sec = None;
        let mut m = None;
        let mut digit_bits = None;
        let mut t_priv = None;
        let mut t_rec = None;
        let mut amplification = None;
        let mut weights = Vec::new();
        let mut primes = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().ok_or("empty line")?;
            match key {
                "group" => {
                    let name = parts.next().ok_or("missing group name")?;
                    if name != "ristretto255" {
                        return Err(format!("unsupported group {name}"));
                    }
                }
                "lambda-sec" => {
                    lambda_sec = Some(
                        parts
                            .next()
                            .and_then(|v| v.parse().ok())
                            .ok_or("bad lambda-sec")?,
                    )
                }
                "m" => m = Some(parts.next().and_then(|v| v.parse().ok()).ok_or("bad m")?),
                "digit-bits" => {
                    digit_bits = Some(
                        parts
                            .next()
                            .and_then(|v| v.parse().ok())
                            .ok_or("bad digit-bits")?,
                    )
                }
                "t-priv" => {
                    t_priv = Some(
                        parts
                            .next()
                            .and_then(|v| v.parse().ok())
                            .ok_or("bad t-priv")?,
                    )
                }
                "t-rec" => {
                    t_rec = Some(
                        parts
                            .next()
                            .and_then(|v| v.parse().ok())
                            .ok_or("bad t-rec")?,
                    )
                }
                "amplification" => {
                    amplification = Some(
                        parts
                            .next()
                            .and_then(|v| v.parse().ok())
                            .ok_or("bad amplification")?,
                    )
                }
                "party" => {
                    let w: u32 = parts
                        .next()
                        .and_then(|v| v.parse().ok())
                        .ok_or("bad party weight")?;
                    let p = parts
                        .next()
                        .and_then(|v| Nat::parse_bytes(v.as_bytes(), 10))
                        .ok_or("bad party prime")?;
                    if p.bits() != w as u64 {
                        return Err(format!("prime has {} bits, weight says {w}", p.bits()));
                    }
                    weights.push(w);
                    primes.push(SharingPrime { p, bit_length: w });
                }
                other => return Err(format!("unknown key {other}")),
            }
        }
        Ok(WvssParams {
            lambda_sec: lambda_sec.ok_or("missing lambda-sec")?,
            weights,
            primes,
            m: m.ok_or("missing m")?,
            digit_bits: digit_bits.ok_or("missing digit-bits")?,
            t_priv: t_priv.ok_or("missing t-priv")?,
            t_rec: t_rec.ok_or("missing t-rec")?,
            amplification: amplification.ok_or("missing amplification")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(17)
    }

    #[test]
    fn derive_ethereum_scale_digit_count() {
        // 365 parties of weight 113 total 41,245, close to the staking case
        let weights = vec![113u32; 365];
        let params = derive_params(&weights, 128, (2, 3), &mut rng()).unwrap();
        assert_eq!(params.amplification, 1);
        assert_eq!(params.t_rec, (2 * 41_245u64).div_ceil(3));
        assert_eq!(params.t_rec - params.t_priv, RAMP_GAP_BITS);
        assert!((107..=109).contains(&params.m), "m = {}", params.m);
    }

    #[test]
    fn derive_two_small_parties_reports_minimal_amplification() {
        // gap 570 needs T ≥ 571: c = ceil(571/20) = 29, which blows the cap
        let err = derive_params(&[10, 10], 128, (1, 1), &mut rng()).unwrap_err();
        match err {
            ParamsError::Infeasible {
                required_amplification,
                ..
            } => assert_eq!(required_amplification, 29),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn derive_rejects_overweight_party() {
        assert!(matches!(
            derive_params(&[200], 128, (2, 3), &mut rng()),
            Err(ParamsError::WeightOutOfRange(200))
        ));
    }

    #[test]
    fn params_text_round_trip() {
        let params = explicit_params(&[16, 16, 16], 0, 0, 16, 48, 8, &mut rng()).unwrap();
        let text = params.encode_text();
        let back = WvssParams::parse_text(&text).unwrap();
        assert_eq!(params, back);
        assert!(WvssParams::parse_text("nonsense").is_err());
    }

    #[test]
    fn secrecy_distance_empty_set_is_zero() {
        let toy = ToyCrtParams {
            p0: 2,
            primes: vec![3, 5],
            l_bound: 1 << 10,
        };
        let sd = secrecy_distance(&toy, 0, 1, &[]).unwrap();
        assert_eq!(sd.numerator, 0);
    }

    #[test]
    fn secrecy_distance_singletons_within_bound() {
        let toy = ToyCrtParams {
            p0: 2,
            primes: vec![3, 5],
            l_bound: 1 << 10,
        };
        for s in 0..2u64 {
            for s2 in 0..2u64 {
                for (i, p) in [(0usize, 3u64), (1, 5)] {
                    let sd = secrecy_distance(&toy, s, s2, &[i]).unwrap();
                    assert!(
                        sd.le_fraction(p, 1 << 10),
                        "SD {} > {p}/1024 for ({s},{s2}) at prime {p}",
                        sd.as_f64()
                    );
                    if s == s2 {
                        assert_eq!(sd.numerator, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn secrecy_distance_budget_enforced() {
        let toy = ToyCrtParams {
            p0: 1 << 20,
            primes: vec![3],
            l_bound: 1 << 20,
        };
        assert!(matches!(
            secrecy_distance(&toy, 0, 1, &[0]),
            Err(SecrecyError::TooLargeToEnumerate(_))
        ));
    }

    #[test]
    fn vacuous_bound_case_still_enumerates_exactly() {
        // P_Ā = 15 ≥ L = 8: the bound says nothing, but the oracle still
        // returns an exact distance in [0, 1]
        let toy = ToyCrtParams {
            p0: 2,
            primes: vec![3, 5],
            l_bound: 8,
        };
        let sd = secrecy_distance(&toy, 0, 1, &[0, 1]).unwrap();
        assert!(sd.numerator <= 2 * sd.trials);
        assert!(sd.le_fraction(15, 8));
    }
}
