//! Proof-size and runtime sweeps over party count and digit count, with the
//! logarithmic fit the size claim is judged by.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use wvss::group::Scalar;
use wvss::vss::{explicit_params, share, verify_deal_proof};

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub gates: usize,
    pub padded: usize,
    /// Serialized circuit-proof bytes.
    pub proof_bytes: usize,
    /// Full broadcast bytes (share commitments + wires + circuit proof).
    pub deal_bytes: usize,
    pub prove_ms: f64,
    pub verify_ms: f64,
}

/// Run one configuration: weight-16 parties, `m` digits of full range.
pub fn bench_one(n: usize, m: usize, seed: u64) -> Result<BenchRow, String> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let weights = vec![16u32; n];
    let digit_bits = 252 * m as u64;
    let params = explicit_params(&weights, m, digit_bits, 16, 16 * n as u64, 16, &mut rng)
        .map_err(|e| e.to_string())?;
    let gates = params.deal_layout().map_err(|e| e.to_string())?.gates();
    let pedersen = params.pedersen().map_err(|e| e.to_string())?;
    let secret = Scalar::random(&mut rng);

    let t0 = Instant::now();
    let deal = share(&params, &pedersen, &secret, &mut rng).map_err(|e| e.to_string())?;
    let prove_ms = t0.elapsed().as_secs_f64() * 1e3;

    let t1 = Instant::now();
    verify_deal_proof(&params, &pedersen, &deal.proof).map_err(|e| e.to_string())?;
    let verify_ms = t1.elapsed().as_secs_f64() * 1e3;

    Ok(BenchRow {
        n,
        m,
        gates,
        padded: gates.next_power_of_two(),
        proof_bytes: deal.proof.circuit.encode().len(),
        deal_bytes: deal.proof.encode().len(),
        prove_ms,
        verify_ms,
    })
}

/// Sweep the cross product of the two ranges.
pub fn run_bench(n_list: &[usize], m_list: &[usize], seed: u64) -> Result<Vec<BenchRow>, String> {
    let mut rows = Vec::new();
    for (i, &n) in n_list.iter().enumerate() {
        for (j, &m) in m_list.iter().enumerate() {
            rows.push(bench_one(n, m, seed ^ ((i as u64) << 32 | j as u64))?);
        }
    }
    Ok(rows)
}

/// Least-squares fit `y = a + b·log2(x)`, returning `(a, b, r²)`.
pub fn log2_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(x, _)| x.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, y)| *y).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    if sxx == 0.0 || syy == 0.0 {
        return (mean_y, 0.0, if syy == 0.0 { 1.0 } else { 0.0 });
    }
    let b = sxy / sxx;
    let a = mean_y - b * mean_x;
    let r2 = (sxy * sxy) / (sxx * syy);
    (a, b, r2)
}

/// CSV serialization of a sweep.
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,m,gate_count,padded,proof_bytes,deal_bytes,prove_ms,verify_ms\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.2},{:.2}\n",
            r.n, r.m, r.gates, r.padded, r.proof_bytes, r.deal_bytes, r.prove_ms, r.verify_ms
        ));
    }
    out
}
