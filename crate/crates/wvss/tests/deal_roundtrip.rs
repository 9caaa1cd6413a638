//! Full-scale deal → verify → reconstruct exercises, including the
//! adversarial dealer profiles and the wire-format round trips.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use wvss::adversary::{deal_with_adversary, AdversaryProfile};
use wvss::group::Scalar;
use wvss::vss::{
    explicit_params, reconstruct, share, verify_deal, verify_deal_proof, verify_opening,
    DealProof, Opening, ReconstructError, VerifyDealError, WvssParams,
};

/// Four parties heavy enough that any three can carry a full-range secret:
/// 3 primes of 86 bits give ≈ 2^256.7 of CRT capacity, above p0 ≈ 2^253.
fn quorum_params(rng: &mut ChaCha20Rng) -> WvssParams {
    explicit_params(&[86, 86, 86, 86], 0, 0, 86, 258, 16, rng).unwrap()
}

#[test]
fn honest_deal_end_to_end() {
    let mut rng = ChaCha20Rng::seed_from_u64(100);
    let params = quorum_params(&mut rng);
    let pedersen = params.pedersen().unwrap();
    let secret = Scalar::random(&mut rng);
    let deal = share(&params, &pedersen, &secret, &mut rng).unwrap();

    // every party accepts
    for idx in 1..=4u32 {
        verify_deal(
            &params,
            &pedersen,
            &deal.proof,
            &deal.openings[idx as usize],
        )
        .unwrap();
    }
    // every 3-subset and the full set reconstruct the same secret
    for subset in [
        vec![1u32, 2, 3],
        vec![1, 2, 4],
        vec![1, 3, 4],
        vec![2, 3, 4],
        vec![1, 2, 3, 4],
    ] {
        let openings: Vec<Opening> = subset
            .iter()
            .map(|i| deal.openings[*i as usize])
            .collect();
        let got = reconstruct(&params, &pedersen, &deal.proof, &openings).unwrap();
        assert_eq!(got, secret);
    }
}

#[test]
fn degenerate_ramp_shares_are_plain_residues() {
    // m = 0 means no lift randomness at all: s_i = s_0 mod p_i exactly
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    let params = quorum_params(&mut rng);
    let pedersen = params.pedersen().unwrap();
    let secret = Scalar::from_u64(0xdead_beef);
    let deal = share(&params, &pedersen, &secret, &mut rng).unwrap();
    for (i, prime) in params.primes.iter().enumerate() {
        assert_eq!(
            deal.openings[i + 1].share.to_nat(),
            secret.to_nat() % &prime.p
        );
    }
}

#[test]
fn unauthorized_set_refused_without_verification() {
    let mut rng = ChaCha20Rng::seed_from_u64(102);
    let params = quorum_params(&mut rng);
    let pedersen = params.pedersen().unwrap();
    let secret = Scalar::random(&mut rng);
    let deal = share(&params, &pedersen, &secret, &mut rng).unwrap();
    let openings = vec![deal.openings[1], deal.openings[2]];
    match reconstruct(&params, &pedersen, &deal.proof, &openings) {
        Err(ReconstructError::Unauthorized { have, need }) => {
            assert_eq!(have, 172);
            assert_eq!(need, 258);
        }
        other => panic!("expected Unauthorized, got {other:?}"),
    }
}

#[test]
fn tampered_opening_fails_only_at_the_victim() {
    let mut rng = ChaCha20Rng::seed_from_u64(103);
    let params = quorum_params(&mut rng);
    let pedersen = params.pedersen().unwrap();
    let secret = Scalar::random(&mut rng);
    let deal = deal_with_adversary(
        &params,
        &pedersen,
        &secret,
        AdversaryProfile::TamperShare(2),
        &mut rng,
    )
    .unwrap();
    // proof itself is honest
    verify_deal_proof(&params, &pedersen, &deal.proof).unwrap();
    for idx in [1u32, 3, 4] {
        verify_deal(
            &params,
            &pedersen,
            &deal.proof,
            &deal.openings[idx as usize],
        )
        .unwrap();
    }
    assert!(matches!(
        verify_deal(&params, &pedersen, &deal.proof, &deal.openings[2]),
        Err(VerifyDealError::OpeningMismatch)
    ));
    // reconstruction with the bad opening aborts
    let openings = vec![deal.openings[1], deal.openings[2], deal.openings[3]];
    assert!(matches!(
        reconstruct(&params, &pedersen, &deal.proof, &openings),
        Err(ReconstructError::Invalid(_))
    ));
}

#[test]
fn forged_wraparound_deal_rejected() {
    let mut rng = ChaCha20Rng::seed_from_u64(104);
    let params = quorum_params(&mut rng);
    let pedersen = params.pedersen().unwrap();
    let secret = Scalar::random(&mut rng);
    let deal = deal_with_adversary(
        &params,
        &pedersen,
        &secret,
        AdversaryProfile::ForgeWraparound,
        &mut rng,
    )
    .unwrap();
    // the forged opening matches its commitment; only the proof gives it away
    verify_opening(&pedersen, &deal.proof, &deal.openings[1]).unwrap();
    assert!(matches!(
        verify_deal_proof(&params, &pedersen, &deal.proof),
        Err(VerifyDealError::ProofInvalid(_))
    ));
}

#[test]
fn inconsistent_digit_deal_rejected() {
    let mut rng = ChaCha20Rng::seed_from_u64(105);
    let params = quorum_params(&mut rng);
    let pedersen = params.pedersen().unwrap();
    let secret = Scalar::random(&mut rng);
    let deal = deal_with_adversary(
        &params,
        &pedersen,
        &secret,
        AdversaryProfile::InconsistentDigits,
        &mut rng,
    )
    .unwrap();
    assert!(matches!(
        verify_deal_proof(&params, &pedersen, &deal.proof),
        Err(VerifyDealError::ProofInvalid(_))
    ));
}

#[test]
fn chain_tail_deal_proves_and_verifies() {
    // The Horner-chain tail needs a large prime whose power residues sum
    // high enough that the collapsed sum could wrap; search seeds until the
    // plan picks it (m = 4 at 126 bits chains for most primes).
    let mut rng = ChaCha20Rng::seed_from_u64(106);
    let params = (0..64)
        .find_map(|_| {
            let p = explicit_params(&[126], 4, 100, 126, 126, 16, &mut rng).unwrap();
            matches!(p.deal_layout().unwrap().parties[0].tail, wvss::circuits::Tail::Chain)
                .then_some(p)
        })
        .expect("no chain-inducing prime in 64 draws");
    let pedersen = params.pedersen().unwrap();
    let secret = Scalar::random(&mut rng);
    let deal = share(&params, &pedersen, &secret, &mut rng).unwrap();
    verify_deal(&params, &pedersen, &deal.proof, &deal.openings[1]).unwrap();
}

#[test]
fn deal_proof_bytes_round_trip() {
    let mut rng = ChaCha20Rng::seed_from_u64(107);
    let params = quorum_params(&mut rng);
    let pedersen = params.pedersen().unwrap();
    let secret = Scalar::random(&mut rng);
    let deal = share(&params, &pedersen, &secret, &mut rng).unwrap();
    let bytes = deal.proof.encode();
    let back = DealProof::decode(&bytes).unwrap();
    assert_eq!(back, deal.proof);
    verify_deal_proof(&params, &pedersen, &back).unwrap();

    let op_bytes = deal.openings[1].encode();
    assert_eq!(Opening::decode(&op_bytes).unwrap(), deal.openings[1]);

    // broadcast group-element count: (n+1) + 3 + (2·log2(padded) + 8)
    let gates = params.deal_layout().unwrap().gates();
    let padded = gates.next_power_of_two();
    let expected = (4 + 1) + 3 + 2 * padded.trailing_zeros() as usize + 8;
    assert_eq!(deal.proof.group_element_count(), expected);
}

#[test]
fn two_disjoint_quorums_agree() {
    // six parties, reconstruction from two disjoint triples
    let mut rng = ChaCha20Rng::seed_from_u64(108);
    let params = explicit_params(&[90; 6], 0, 0, 90, 265, 16, &mut rng).unwrap();
    let pedersen = params.pedersen().unwrap();
    let secret = Scalar::random(&mut rng);
    let deal = share(&params, &pedersen, &secret, &mut rng).unwrap();
    let a: Vec<Opening> = [1u32, 2, 3].iter().map(|i| deal.openings[*i as usize]).collect();
    let b: Vec<Opening> = [4u32, 5, 6].iter().map(|i| deal.openings[*i as usize]).collect();
    let ra = reconstruct(&params, &pedersen, &deal.proof, &a).unwrap();
    let rb = reconstruct(&params, &pedersen, &deal.proof, &b).unwrap();
    assert_eq!(ra, rb);
    assert_eq!(ra, secret);
}
