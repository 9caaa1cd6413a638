//! Cheating-dealer strategies, for simulations and negative tests only.
//!
//! Each constructor produces a structurally well-formed deal whose proof the
//! honest verifier must reject (or, for share tampering, whose victim must
//! report an opening mismatch). The wraparound profile is the classic
//! commitment attack: since `gcd(p, p0) = 1`, a dealer can always find `k'`
//! with `s = v' + k'·p (mod p0)` for an arbitrary wrong share `v'`; the
//! congruence circuit's range constraints are exactly what make that `k'`
//! unusable.

use num_traits::Zero;
use rand::{CryptoRng, RngCore};

use crate::crt::{mod_inverse, Nat};
use crate::group::{scalar_order, PedersenParams, Scalar};
use crate::pom::{fill_emod_instance, fill_pom_slot};
use crate::r1cs::Witness;
use crate::vss::{finalize_deal, honest_shares, Deal, DealError, WvssParams};

/// Dealer behaviours the simulation can exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdversaryProfile {
    Honest,
    /// Deal honestly, then hand party `j` a corrupted opening.
    TamperShare(u32),
    /// Commit a wrong share for party 1 and witness it with the
    /// mod-`p0`-consistent quotient `k'`.
    ForgeWraparound,
    /// Solve party 2's subcircuits (party 1's when alone) against a digit
    /// vector that differs from the registers every other party shares.
    InconsistentDigits,
}

/// Produce a deal under the given adversary profile.
pub fn deal_with_adversary<R: RngCore + CryptoRng>(
    params: &WvssParams,
    pedersen: &PedersenParams,
    secret: &Scalar,
    profile: AdversaryProfile,
    rng: &mut R,
) -> Result<Deal, DealError> {
    match profile {
        AdversaryProfile::Honest => crate::vss::share(params, pedersen, secret, rng),
        AdversaryProfile::TamperShare(j) => {
            let mut deal = crate::vss::share(params, pedersen, secret, rng)?;
            let idx = j as usize;
            assert!(idx >= 1 && idx < deal.openings.len(), "victim out of range");
            deal.openings[idx].share = deal.openings[idx].share + Scalar::ONE;
            Ok(deal)
        }
        AdversaryProfile::ForgeWraparound => forge_wraparound(params, pedersen, secret, rng),
        AdversaryProfile::InconsistentDigits => {
            inconsistent_digits(params, pedersen, secret, rng)
        }
    }
}

fn forge_wraparound<R: RngCore + CryptoRng>(
    params: &WvssParams,
    pedersen: &PedersenParams,
    secret: &Scalar,
    rng: &mut R,
) -> Result<Deal, DealError> {
    let p0 = scalar_order();
    let (digit_values, mut shares) = honest_shares(params, secret, rng);
    let layout = params.deal_layout()?;

    // party 1 gets a consistent-looking but wrong share
    let victim = 0usize;
    let p = &params.primes[victim].p;
    let true_share = shares[victim].to_nat();
    let forged_share = (&true_share + 1u8) % p;
    shares[victim] = Scalar::from_nat(&forged_share);

    let mut witness = Witness::zeroed(layout.gates());
    let share_nats: Vec<Nat> = shares.iter().map(|s| s.to_nat()).collect();
    for (i, party) in layout.parties.iter().enumerate() {
        if i != victim {
            fill_emod_instance(&mut witness, party, &share_nats[i], &digit_values)?;
        }
    }
    // victim instance: digit slots honest, final slot forged via k'
    let party = &layout.parties[victim];
    let mp = &party.mp;
    let p_inv = mod_inverse(p, p0).expect("p coprime to p0");
    let forged_fill = |witness: &mut Witness<Scalar>,
                       slot: &crate::circuits::PomSlot,
                       v: &Nat,
                       s: &Nat|
     -> Result<(), crate::pom::PomError> {
        let diff = ((s + p0) - v) % p0;
        let k_forged = diff * &p_inv % p0;
        debug_assert_eq!((v + &k_forged * p) % p0, s % p0);
        fill_pom_slot(witness, slot, mp, v, s, Some(&k_forged))
    };
    if party.m == 0 {
        forged_fill(
            &mut witness,
            &party.tail_slots[0],
            &forged_share,
            &digit_values[0],
        )?;
    } else {
        let residues: Vec<Nat> = digit_values.iter().map(|d| d % p).collect();
        for (j, slot) in party.digit_slots.iter().enumerate() {
            fill_pom_slot(&mut witness, slot, mp, &residues[j], &digit_values[j], None)?;
        }
        match party.tail {
            crate::circuits::Tail::Collapse => {
                let u: Nat = residues
                    .iter()
                    .zip(&party.pow_mod)
                    .map(|(r, t)| r * t)
                    .sum();
                forged_fill(&mut witness, &party.tail_slots[0], &forged_share, &u)?;
            }
            crate::circuits::Tail::Chain => {
                let mut prev = residues[party.m].clone();
                for (step, slot) in party.tail_slots.iter().enumerate() {
                    let j = party.m - 1 - step;
                    let v_j = &residues[j] + &mp.t_rem * &prev;
                    if j == 0 {
                        forged_fill(&mut witness, slot, &forged_share, &v_j)?;
                    } else {
                        let v_next = &v_j % p;
                        fill_pom_slot(&mut witness, slot, mp, &v_next, &v_j, None)?;
                        prev = v_next;
                    }
                }
            }
            crate::circuits::Tail::Direct => unreachable!(),
        }
    }
    finalize_deal(params, pedersen, secret, &shares, &witness, false, rng)
}

fn inconsistent_digits<R: RngCore + CryptoRng>(
    params: &WvssParams,
    pedersen: &PedersenParams,
    secret: &Scalar,
    rng: &mut R,
) -> Result<Deal, DealError> {
    assert!(
        params.m == 0 || params.n_parties() >= 2,
        "with one party and free digits, divergent digits are just another valid deal"
    );
    let p0 = scalar_order();
    let (digit_values, mut shares) = honest_shares(params, secret, rng);
    let layout = params.deal_layout()?;

    // a second digit vector, differing where it matters: the shared digit
    // when there is one, the committed secret slot otherwise
    let mut rogue_digits = digit_values.clone();
    let tweak = if params.m >= 1 { params.m } else { 0 };
    rogue_digits[tweak] = (&rogue_digits[tweak] + 1u8) % p0;

    // the rogue party's share is consistent with its own digits, so every
    // constraint inside its instance holds; only the cross-instance digit
    // registers (or the secret binding) give it away
    let rogue = layout.parties.len() - 1;
    let mut lifted = Nat::zero();
    for d in rogue_digits.iter().rev() {
        lifted = lifted * p0 + d;
    }
    shares[rogue] = Scalar::from_nat(&(&lifted % &params.primes[rogue].p));

    let share_nats: Vec<Nat> = shares.iter().map(|s| s.to_nat()).collect();
    let mut witness = Witness::zeroed(layout.gates());
    for (i, party) in layout.parties.iter().enumerate() {
        let digits = if i == rogue {
            &rogue_digits
        } else {
            &digit_values
        };
        fill_emod_instance(&mut witness, party, &share_nats[i], digits)?;
    }
    finalize_deal(params, pedersen, secret, &shares, &witness, false, rng)
}
