//! Stake-table ingestion: CSV parsing, stake-to-weight mapping, and the
//! per-party virtualization that keeps every weight under the prime cap.

use wvss::crt::MAX_WEIGHT_BITS;

/// One row of the stake table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StakeRecord {
    pub entity: String,
    pub eth_staked: u64,
}

/// Aggregate rows that are sums of many independent stakers, not parties;
/// excluded from weight assignment by default (their stake still counts
/// toward the total when computing percentages).
pub const DEFAULT_EXCLUDED: [&str; 2] = ["Other Solo Stakers", "Unidentified"];

/// Parse `entity,eth_staked` CSV (header required; entity names may not
/// contain commas).
pub fn parse_stake_csv(text: &str) -> Result<Vec<StakeRecord>, String> {
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("entity,eth_staked") => {}
        other => return Err(format!("bad CSV header {other:?}")),
    }
    let mut out = Vec::new();
    for (no, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (entity, stake) = line
            .rsplit_once(',')
            .ok_or_else(|| format!("line {}: missing comma", no + 2))?;
        let eth_staked: u64 = stake
            .trim()
            .parse()
            .map_err(|_| format!("line {}: bad stake {stake:?}", no + 2))?;
        out.push(StakeRecord {
            entity: entity.trim().to_string(),
            eth_staked,
        });
    }
    if out.is_empty() {
        return Err("no stake rows".into());
    }
    Ok(out)
}

/// A minimum stake expressed in percent, held exactly as a rational.
#[derive(Clone, Copy, Debug)]
pub struct MinStake {
    pub num: u64,
    pub den: u64,
}

impl MinStake {
    /// Parse a decimal percentage like `0.02`.
    pub fn parse(text: &str) -> Result<MinStake, String> {
        let text = text.trim();
        let (int_part, frac_part) = text.split_once('.').unwrap_or((text, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err("empty minimum stake".into());
        }
        let digits: String = format!("{int_part}{frac_part}");
        let num: u64 = digits.parse().map_err(|_| "bad minimum stake")?;
        let den = 10u64
            .checked_pow(frac_part.len() as u32)
            .ok_or("minimum stake has too many decimals")?;
        if num == 0 {
            return Err("minimum stake must be positive".into());
        }
        // percent → fraction of the total
        Ok(MinStake {
            num,
            den: den * 100,
        })
    }
}

/// Weight assignment for one entity.
#[derive(Clone, Debug)]
pub struct WeightedEntity {
    pub entity: String,
    pub eth_staked: u64,
    /// Stake as a multiple of the minimum stake, rounded (the virtual-party
    /// count a Shamir-style scheme would need).
    pub virtual_shares: u64,
    /// Ramp weight: `round(stake% / min_stake% × base_weight)`.
    pub weight: u64,
    /// Number of capped parties this entity splits into.
    pub share_count: u64,
}

/// Outcome of mapping a stake table onto weights.
#[derive(Clone, Debug)]
pub struct WeightAssignment {
    pub total_eth: u64,
    pub included: Vec<WeightedEntity>,
    pub excluded_below_min: Vec<String>,
    pub excluded_aggregates: Vec<String>,
    pub per_party_cap: u32,
}

/// Map stakes to weights: percentages are taken against the full table
/// total (aggregates included), entities strictly below the minimum stake
/// are dropped, and each remaining entity gets
/// `weight = round(pct / min × base_weight)`, split into parties of at most
/// [`MAX_WEIGHT_BITS`] bits each.
pub fn assign_weights(
    records: &[StakeRecord],
    min_stake: MinStake,
    base_weight: u64,
    excluded: &[&str],
) -> WeightAssignment {
    let total: u128 = records.iter().map(|r| r.eth_staked as u128).sum();
    let cap = MAX_WEIGHT_BITS;
    let mut included = Vec::new();
    let mut excluded_below_min = Vec::new();
    let mut excluded_aggregates = Vec::new();
    for r in records {
        if excluded.contains(&r.entity.as_str()) {
            excluded_aggregates.push(r.entity.clone());
            continue;
        }
        // pct >= min ⟺ stake·den ≥ total·num (percent basis folded into den)
        let meets = (r.eth_staked as u128) * (min_stake.den as u128)
            >= total * (min_stake.num as u128);
        if !meets {
            excluded_below_min.push(r.entity.clone());
            continue;
        }
        let ratio_round = |scale: u128| -> u64 {
            // round(stake·scale / (total·num/den)) with half-up rounding
            let numer = (r.eth_staked as u128) * scale * (min_stake.den as u128);
            let denom = total * (min_stake.num as u128);
            ((2 * numer + denom) / (2 * denom)) as u64
        };
        let virtual_shares = ratio_round(1);
        let weight = ratio_round(base_weight as u128);
        included.push(WeightedEntity {
            entity: r.entity.clone(),
            eth_staked: r.eth_staked,
            virtual_shares,
            weight,
            share_count: weight.div_ceil(cap as u64),
        });
    }
    WeightAssignment {
        total_eth: total as u64,
        included,
        excluded_below_min,
        excluded_aggregates,
        per_party_cap: cap,
    }
}

impl WeightAssignment {
    pub fn total_weight(&self) -> u64 {
        self.included.iter().map(|e| e.weight).sum()
    }

    pub fn total_virtual_shares(&self) -> u64 {
        self.included.iter().map(|e| e.virtual_shares).sum()
    }

    /// Split every entity's weight into parties of at most the cap, as
    /// evenly as possible.
    pub fn party_weights(&self) -> Vec<u32> {
        let cap = self.per_party_cap as u64;
        let mut out = Vec::new();
        for e in &self.included {
            let parts = e.weight.div_ceil(cap);
            let base = e.weight / parts;
            let extra = (e.weight % parts) as usize;
            for i in 0..parts as usize {
                let w = base + if i < extra { 1 } else { 0 };
                out.push(w as u32);
            }
        }
        out
    }
}
