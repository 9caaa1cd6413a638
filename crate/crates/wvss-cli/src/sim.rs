//! In-process multi-party simulation: a dealer (possibly adversarial) and
//! `n` parties exchanging serialized messages, each party verifying
//! independently, followed by reconstruction attempts over sampled
//! authorized subsets. Fully deterministic under a seed.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use wvss::adversary::{deal_with_adversary, AdversaryProfile};
use wvss::group::Scalar;
use wvss::vss::{reconstruct, verify_deal, DealProof, Opening, WvssParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyVerdict {
    pub index: u32,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetOutcome {
    pub indices: Vec<u32>,
    pub outcome: String,
}

#[derive(Clone, Debug)]
pub struct SimReport {
    pub profile: String,
    pub secret_hex: String,
    pub verdicts: Vec<PartyVerdict>,
    pub outcomes: Vec<SubsetOutcome>,
}

impl SimReport {
    pub fn all_accept(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict == "accept")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("profile: {}\n", self.profile));
        out.push_str(&format!("secret: {}\n", self.secret_hex));
        for v in &self.verdicts {
            out.push_str(&format!("party {}: {}\n", v.index, v.verdict));
        }
        for o in &self.outcomes {
            out.push_str(&format!("subset {:?}: {}\n", o.indices, o.outcome));
        }
        out
    }
}

pub fn profile_from_str(text: &str) -> Result<AdversaryProfile, String> {
    if text == "honest" {
        return Ok(AdversaryProfile::Honest);
    }
    if text == "forge-wraparound" {
        return Ok(AdversaryProfile::ForgeWraparound);
    }
    if text == "inconsistent-digits" {
        return Ok(AdversaryProfile::InconsistentDigits);
    }
    if let Some(rest) = text.strip_prefix("tamper-share:") {
        let j: u32 = rest.parse().map_err(|_| "bad tamper-share index")?;
        return Ok(AdversaryProfile::TamperShare(j));
    }
    Err(format!(
        "unknown profile {text:?} (honest, tamper-share:<j>, forge-wraparound, inconsistent-digits)"
    ))
}

pub fn profile_name(p: AdversaryProfile) -> String {
    match p {
        AdversaryProfile::Honest => "honest".into(),
        AdversaryProfile::TamperShare(j) => format!("tamper-share:{j}"),
        AdversaryProfile::ForgeWraparound => "forge-wraparound".into(),
        AdversaryProfile::InconsistentDigits => "inconsistent-digits".into(),
    }
}

/// Run the scenario. Messages cross the "network" as canonical bytes: each
/// party re-decodes the broadcast proof and its own opening before
/// verifying.
pub fn simulate(
    params: &WvssParams,
    profile: AdversaryProfile,
    subsets: usize,
    seed: u64,
) -> Result<SimReport, String> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let pedersen = params.pedersen().map_err(|e| e.to_string())?;
    let secret = Scalar::random(&mut rng);
    let deal = deal_with_adversary(params, &pedersen, &secret, profile, &mut rng)
        .map_err(|e| e.to_string())?;

    // broadcast + unicast, serialized
    let proof_wire = deal.proof.encode();
    let opening_wires: Vec<Vec<u8>> = deal.openings.iter().map(|o| o.encode()).collect();

    let n = params.n_parties();
    let mut verdicts = Vec::with_capacity(n);
    for idx in 1..=n as u32 {
        let verdict = (|| -> Result<(), String> {
            let proof = DealProof::decode(&proof_wire).map_err(|e| format!("Malformed: {e}"))?;
            let opening = Opening::decode(&opening_wires[idx as usize])
                .map_err(|e| format!("Malformed: {e}"))?;
            verify_deal(params, &pedersen, &proof, &opening).map_err(|e| {
                use wvss::vss::VerifyDealError::*;
                match e {
                    ProofInvalid(_) => "ProofInvalid".to_string(),
                    OpeningMismatch => "OpeningMismatch".to_string(),
                    Malformed(m) => format!("Malformed: {m}"),
                }
            })
        })();
        verdicts.push(PartyVerdict {
            index: idx,
            verdict: verdict.err().unwrap_or_else(|| "accept".into()),
        });
    }

    // sample authorized subsets: shuffle, take parties until the weight
    // threshold is met
    let mut outcomes = Vec::with_capacity(subsets);
    let proof = DealProof::decode(&proof_wire).map_err(|e| e.to_string())?;
    for _ in 0..subsets {
        let mut order: Vec<u32> = (1..=n as u32).collect();
        order.shuffle(&mut rng);
        let mut picked = Vec::new();
        for idx in order {
            picked.push(idx);
            if params.weight_of(&picked) >= params.t_rec {
                break;
            }
        }
        picked.sort_unstable();
        let openings: Vec<Opening> = picked
            .iter()
            .map(|i| Opening::decode(&opening_wires[*i as usize]).unwrap())
            .collect();
        let outcome = match reconstruct(params, &pedersen, &proof, &openings) {
            Ok(s) => hex::encode(s.encode()),
            Err(e) => match e {
                wvss::vss::ReconstructError::Unauthorized { .. } => "Unauthorized".into(),
                wvss::vss::ReconstructError::Invalid(r) => format!("rejected: {r}"),
            },
        };
        outcomes.push(SubsetOutcome {
            indices: picked,
            outcome,
        });
    }

    Ok(SimReport {
        profile: profile_name(profile),
        secret_hex: hex::encode(secret.encode()),
        verdicts,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use wvss::vss::explicit_params;

    fn params() -> WvssParams {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        explicit_params(&[86, 86, 86, 86], 0, 0, 86, 258, 16, &mut rng).unwrap()
    }

    #[test]
    fn honest_simulation_all_accept_and_agree() {
        let p = params();
        let report = simulate(&p, AdversaryProfile::Honest, 5, 42).unwrap();
        assert!(report.all_accept());
        for o in &report.outcomes {
            assert_eq!(o.outcome, report.secret_hex);
        }
        // deterministic under the seed
        let again = simulate(&p, AdversaryProfile::Honest, 5, 42).unwrap();
        assert_eq!(report.verdicts, again.verdicts);
        assert_eq!(report.outcomes, again.outcomes);
    }

    #[test]
    fn tampered_share_flags_only_the_victim() {
        let p = params();
        let report = simulate(&p, AdversaryProfile::TamperShare(2), 3, 43).unwrap();
        for v in &report.verdicts {
            if v.index == 2 {
                assert_eq!(v.verdict, "OpeningMismatch");
            } else {
                assert_eq!(v.verdict, "accept");
            }
        }
    }

    #[test]
    fn forged_wraparound_rejected_by_everyone() {
        let p = params();
        let report = simulate(&p, AdversaryProfile::ForgeWraparound, 2, 44).unwrap();
        for v in &report.verdicts {
            assert_eq!(v.verdict, "ProofInvalid");
        }
        for o in &report.outcomes {
            assert!(o.outcome.starts_with("rejected"));
        }
    }

    #[test]
    fn profile_parsing() {
        assert_eq!(
            profile_from_str("tamper-share:3").unwrap(),
            AdversaryProfile::TamperShare(3)
        );
        assert!(profile_from_str("bogus").is_err());
    }
}
