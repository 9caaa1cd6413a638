//! Zero-knowledge argument that committed inputs satisfy a circuit.
//!
//! The relation proven is exactly the R1CS form: wire vectors `a ∘ b = c`
//! opening the three wire commitments `A = h^{r_a} g⃗^a`, `B = h^{r_b} h⃗^b`,
//! `C = h^{r_c} g⃗^c`, committed inputs `Vⱼ = g^{vⱼ} h^{γⱼ}`, and
//! `W_a·a + W_b·b + W_c·c = W_v·v + k`.
//!
//! It is the inner-product-argument circuit protocol, restructured so the
//! prover's wire commitments are the externally supplied `A, B, C` (they
//! must be fixed before the circuit's own challenge is derived, which is
//! what the congruence layer's soundness rests on) rather than an internal
//! first message. `B` lives on the second generator family so its opening
//! lands on the right-hand side of the verification equation.
//!
//! Over the evaluation variable `x` the prover forms
//!
//! ```text
//! l(x) = a·x + c·x² + y⁻¹∘w_b·x³ + s_L·x⁵        (exponents of g⃗)
//! r(x) = −y⃗ + y⃗∘b·x + w_c·x² + w_a·x³ + y⃗∘s_R·x⁵ (exponents of h'⃗)
//! ```
//!
//! so that `t(x) = ⟨l(x), r(x)⟩` has the Hadamard defect
//! `⟨y⃗, a∘b − c⟩` as its degree-2 coefficient and the full linear
//! constraint `⟨a,w_a⟩+⟨b,w_b⟩+⟨c,w_c⟩` at degree 4. Those two degrees get
//! no free commitment: the verifier pins degree 2 to zero and degree 4 to
//! `⟨w_v, v⟩ + k_u` through the input commitments. The remaining degrees
//! {1,3,5,6,7,8,10} are blinded by `T` commitments, and the evaluated inner
//! product is delegated to the log-size folding argument.
//!
//! Serialized size: `2·⌈log2 G⌉ + 8` group elements (one blinding vector
//! commitment, seven `T`s, two per folding round) and 5 field elements.

use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::group::{
    msm, msm_vartime, Commitment, GroupElement, GroupError, PedersenParams, Scalar,
};
use crate::ipp::{self, IppProof};
use crate::r1cs::{is_satisfied, CircuitSpec, Witness};
pub use crate::transcript::Transcript;

/// Free `t(x)` coefficient degrees carrying a `T` commitment.
const T_DEGREES: [usize; 7] = [1, 3, 5, 6, 7, 8, 10];
/// Degree pinned to zero: the Hadamard defect.
const DEG_HADAMARD: usize = 2;
/// Degree pinned to the linear-constraint value via the input commitments.
const DEG_LINEAR: usize = 4;
const MAX_DEGREE: usize = 10;

#[derive(Debug, Error)]
pub enum ProveError {
    #[error("witness does not satisfy the circuit")]
    UnsatisfiedWitness,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Circuit(#[from] crate::r1cs::CircuitError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("malformed proof: {0}")]
    Malformed(&'static str),
    #[error("proof rejected: {0}")]
    Reject(&'static str),
}

/// Blinding openings for the three wire commitments.
#[derive(Clone, Debug)]
pub struct WireBlinding {
    pub r_a: Scalar,
    pub r_b: Scalar,
    pub r_c: Scalar,
}

impl WireBlinding {
    pub fn random<R: RngCore + CryptoRng>(rng: &mut R) -> WireBlinding {
        WireBlinding {
            r_a: Scalar::random(rng),
            r_b: Scalar::random(rng),
            r_c: Scalar::random(rng),
        }
    }
}

/// The three wire commitments broadcast alongside a circuit proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WireCommitments {
    pub a: Commitment,
    pub b: Commitment,
    pub c: Commitment,
}

impl WireCommitments {
    /// Commit a witness: `a` and `c` under the first generator family, `b`
    /// under the second.
    pub fn commit(
        params: &PedersenParams,
        witness: &Witness<Scalar>,
        blinding: &WireBlinding,
    ) -> Result<WireCommitments, GroupError> {
        Ok(WireCommitments {
            a: params.commit_vec(&witness.a, blinding.r_a)?,
            b: params.commit_vec_h(&witness.b, blinding.r_b)?,
            c: params.commit_vec(&witness.c, blinding.r_c)?,
        })
    }

    pub fn absorb_into(&self, t: &mut Transcript) {
        t.absorb_commitment(b"wires-A", &self.a);
        t.absorb_commitment(b"wires-B", &self.b);
        t.absorb_commitment(b"wires-C", &self.c);
    }
}

/// A serialized-size-stable circuit proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitProof {
    pub s_blind: Commitment,
    pub t_commits: [Commitment; 7],
    pub ipp_l: Vec<GroupElement>,
    pub ipp_r: Vec<GroupElement>,
    pub tau_x: Scalar,
    pub mu: Scalar,
    pub t_hat: Scalar,
    pub ipp_a: Scalar,
    pub ipp_b: Scalar,
}

impl CircuitProof {
    pub fn group_element_count(&self) -> usize {
        8 + 2 * self.ipp_l.len()
    }

    pub fn scalar_count(&self) -> usize {
        5
    }

    /// Wire format: two 32-bit LE counts, then group elements
    /// (`S, T₁..T₇, L₀, R₀, L₁, R₁, …`), then the five scalars.
    pub fn encode_into(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.group_element_count() as u32).to_le_bytes());
        out.extend_from_slice(&(self.scalar_count() as u32).to_le_bytes());
        out.extend_from_slice(&self.s_blind.encode());
        for t in &self.t_commits {
            out.extend_from_slice(&t.encode());
        }
        for (l, r) in self.ipp_l.iter().zip(&self.ipp_r) {
            out.extend_from_slice(&l.encode());
            out.extend_from_slice(&r.encode());
        }
        for s in [self.tau_x, self.mu, self.t_hat, self.ipp_a, self.ipp_b] {
            out.extend_from_slice(&s.encode());
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    /// Decode one proof, returning it and the bytes consumed.
    pub fn decode(bytes: &[u8]) -> Result<(CircuitProof, usize), GroupError> {
        let need = |n: usize, had: usize| GroupError::Truncated { needed: n, had };
        if bytes.len() < 8 {
            return Err(need(8, bytes.len()));
        }
        let n_group = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
        let n_scalar = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        if n_group < 8 || (n_group - 8) % 2 != 0 || n_group > 8 + 2 * 64 {
            return Err(GroupError::BadPoint);
        }
        if n_scalar != 5 {
            return Err(GroupError::BadScalar);
        }
        let total = 8 + 32 * (n_group + n_scalar);
        if bytes.len() < total {
            return Err(need(total, bytes.len()));
        }
        let mut off = 8;
        let mut next_point = || -> Result<GroupElement, GroupError> {
            let p = GroupElement::decode(&bytes[off..off + 32])?;
            off += 32;
            Ok(p)
        };
        let s_blind = Commitment(next_point()?);
        let mut t_commits = [Commitment(GroupElement::identity()); 7];
        for t in t_commits.iter_mut() {
            *t = Commitment(next_point()?);
        }
        let rounds = (n_group - 8) / 2;
        let mut ipp_l = Vec::with_capacity(rounds);
        let mut ipp_r = Vec::with_capacity(rounds);
        for _ in 0..rounds {
            ipp_l.push(next_point()?);
            ipp_r.push(next_point()?);
        }
        let mut next_scalar = || -> Result<Scalar, GroupError> {
            let s = Scalar::decode(&bytes[off..off + 32])?;
            off += 32;
            Ok(s)
        };
        let proof = CircuitProof {
            s_blind,
            t_commits,
            ipp_l,
            ipp_r,
            tau_x: next_scalar()?,
            mu: next_scalar()?,
            t_hat: next_scalar()?,
            ipp_a: next_scalar()?,
            ipp_b: next_scalar()?,
        };
        Ok((proof, total))
    }
}

/// Everything both sides derive from the circuit and the challenges
/// `(y, u)`: flattened constraint weights and power tables.
struct Flattened {
    w_a: Vec<Scalar>,
    w_b: Vec<Scalar>,
    w_c: Vec<Scalar>,
    w_v: Vec<Scalar>,
    k_u: Scalar,
    y_pows: Vec<Scalar>,
    y_inv_pows: Vec<Scalar>,
}

fn flatten(ckt: &CircuitSpec<Scalar>, n: usize, y: Scalar, u: Scalar) -> Flattened {
    let mut w_a = vec![Scalar::ZERO; n];
    let mut w_b = vec![Scalar::ZERO; n];
    let mut w_c = vec![Scalar::ZERO; n];
    let mut w_v = vec![Scalar::ZERO; ckt.n_in];
    let mut k_u = Scalar::ZERO;
    let mut u_pow = u;
    for row in &ckt.rows {
        for (i, coeff) in &row.a {
            w_a[*i] = w_a[*i] + u_pow * *coeff;
        }
        for (i, coeff) in &row.b {
            w_b[*i] = w_b[*i] + u_pow * *coeff;
        }
        for (i, coeff) in &row.c {
            w_c[*i] = w_c[*i] + u_pow * *coeff;
        }
        for (i, coeff) in &row.v {
            w_v[*i] = w_v[*i] + u_pow * *coeff;
        }
        k_u = k_u + u_pow * row.k;
        u_pow = u_pow * u;
    }
    let mut y_pows = Vec::with_capacity(n);
    let mut y_inv_pows = Vec::with_capacity(n);
    let y_inv = y.invert();
    let (mut yp, mut yip) = (Scalar::ONE, Scalar::ONE);
    for _ in 0..n {
        y_pows.push(yp);
        y_inv_pows.push(yip);
        yp = yp * y;
        yip = yip * y_inv;
    }
    Flattened {
        w_a,
        w_b,
        w_c,
        w_v,
        k_u,
        y_pows,
        y_inv_pows,
    }
}

fn absorb_statement(
    t: &mut Transcript,
    ckt: &CircuitSpec<Scalar>,
    v_commits: &[Commitment],
    wires: &WireCommitments,
) {
    t.absorb_bytes(b"proto", b"wvss/ckt-proof/v1");
    t.absorb_u64(b"gates", ckt.m_mul as u64);
    t.absorb_u64(b"rows", ckt.q_cons() as u64);
    t.absorb_u64(b"inputs", ckt.n_in as u64);
    for v in v_commits {
        t.absorb_commitment(b"V", v);
    }
    wires.absorb_into(t);
}

fn padded_gates(m_mul: usize) -> usize {
    m_mul.next_power_of_two().max(1)
}

fn inner(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(Scalar::ZERO, |acc, (x, y)| acc + *x * *y)
}

/// Prove the relation; refuses unsatisfied witnesses up front.
#[allow(clippy::too_many_arguments)]
pub fn prove<R: RngCore + CryptoRng>(
    params: &PedersenParams,
    ckt: &CircuitSpec<Scalar>,
    v_commits: &[Commitment],
    v_vals: &[Scalar],
    v_blind: &[Scalar],
    witness: &Witness<Scalar>,
    wires: &WireCommitments,
    wire_blinding: &WireBlinding,
    transcript: &mut Transcript,
    rng: &mut R,
) -> Result<CircuitProof, ProveError> {
    if !is_satisfied(ckt, v_vals, witness)? {
        return Err(ProveError::UnsatisfiedWitness);
    }
    prove_unchecked(
        params,
        ckt,
        v_commits,
        v_vals,
        v_blind,
        witness,
        wires,
        wire_blinding,
        transcript,
        rng,
    )
}

/// Run the prover without the satisfaction pre-flight. Exists so
/// adversarial harnesses can emit doomed proofs for cheating dealers; honest
/// code paths go through [`prove`].
#[allow(clippy::too_many_arguments)]
pub fn prove_unchecked<R: RngCore + CryptoRng>(
    params: &PedersenParams,
    ckt: &CircuitSpec<Scalar>,
    v_commits: &[Commitment],
    v_vals: &[Scalar],
    v_blind: &[Scalar],
    witness: &Witness<Scalar>,
    wires: &WireCommitments,
    wire_blinding: &WireBlinding,
    transcript: &mut Transcript,
    rng: &mut R,
) -> Result<CircuitProof, ProveError> {
    assert_eq!(v_vals.len(), ckt.n_in);
    assert_eq!(v_blind.len(), ckt.n_in);
    assert_eq!(v_commits.len(), ckt.n_in);
    let n = padded_gates(ckt.m_mul);
    if params.width() < n {
        return Err(ProveError::Group(GroupError::VectorTooWide {
            got: n,
            width: params.width(),
        }));
    }

    absorb_statement(transcript, ckt, v_commits, wires);

    let pad = |v: &[Scalar]| {
        let mut out = v.to_vec();
        out.resize(n, Scalar::ZERO);
        out
    };
    let a = pad(&witness.a);
    let b = pad(&witness.b);
    let c = pad(&witness.c);

    // blinding vectors ride at degree 5 on both sides
    let s_l: Vec<Scalar> = (0..n).map(|_| Scalar::random(rng)).collect();
    let s_r: Vec<Scalar> = (0..n).map(|_| Scalar::random(rng)).collect();
    let rho = Scalar::random(rng);
    let s_blind = {
        let mut scalars = vec![rho];
        scalars.extend_from_slice(&s_l);
        scalars.extend_from_slice(&s_r);
        let mut points = vec![params.h];
        points.extend_from_slice(&params.g_vec[..n]);
        points.extend_from_slice(&params.h_vec[..n]);
        Commitment(msm(&scalars, &points))
    };
    transcript.absorb_commitment(b"S", &s_blind);

    let y = transcript.challenge_scalar(b"y");
    let u = transcript.challenge_scalar(b"u");
    let fl = flatten(ckt, n, y, u);

    // l(x) and r(x) coefficient vectors by degree
    let had = |v: &[Scalar], w: &[Scalar]| -> Vec<Scalar> {
        v.iter().zip(w).map(|(x, y)| *x * *y).collect()
    };
    let l1 = &a;
    let l2 = &c;
    let l3: Vec<Scalar> = had(&fl.y_inv_pows, &fl.w_b);
    let l5 = &s_l;
    let r0: Vec<Scalar> = fl.y_pows.iter().map(|y| -*y).collect();
    let r1: Vec<Scalar> = had(&fl.y_pows, &b);
    let r2 = &fl.w_c;
    let r3 = &fl.w_a;
    let r5: Vec<Scalar> = had(&fl.y_pows, &s_r);

    let l_parts: [(usize, &[Scalar]); 4] = [(1, l1), (2, l2), (3, &l3), (5, l5)];
    let r_parts: [(usize, &[Scalar]); 5] = [(0, &r0), (1, &r1), (2, r2), (3, r3), (5, &r5)];

    let mut t_coeff = [Scalar::ZERO; MAX_DEGREE + 1];
    for (dl, lv) in &l_parts {
        for (dr, rv) in &r_parts {
            let d = dl + dr;
            t_coeff[d] = t_coeff[d] + inner(lv, rv);
        }
    }
    debug_assert!(
        !is_satisfied(ckt, v_vals, witness).unwrap_or(false)
            || (t_coeff[DEG_HADAMARD] == Scalar::ZERO
                && t_coeff[DEG_LINEAR] == inner(&fl.w_v, v_vals) + fl.k_u)
    );

    let mut tau = [Scalar::ZERO; 7];
    let mut t_commits = [Commitment(GroupElement::identity()); 7];
    for (slot, deg) in T_DEGREES.iter().enumerate() {
        tau[slot] = Scalar::random(rng);
        t_commits[slot] = params.commit(t_coeff[*deg], tau[slot]);
        transcript.absorb_commitment(b"T", &t_commits[slot]);
    }

    let x = transcript.challenge_scalar(b"x");
    let mut x_pows = [Scalar::ONE; MAX_DEGREE + 1];
    for i in 1..=MAX_DEGREE {
        x_pows[i] = x_pows[i - 1] * x;
    }

    let mut l_vec = vec![Scalar::ZERO; n];
    for (d, lv) in &l_parts {
        for i in 0..n {
            l_vec[i] = l_vec[i] + lv[i] * x_pows[*d];
        }
    }
    let mut r_vec = vec![Scalar::ZERO; n];
    for (d, rv) in &r_parts {
        for i in 0..n {
            r_vec[i] = r_vec[i] + rv[i] * x_pows[*d];
        }
    }
    let t_hat = inner(&l_vec, &r_vec);
    let mut tau_x = x_pows[DEG_LINEAR] * inner(&fl.w_v, v_blind);
    for (slot, deg) in T_DEGREES.iter().enumerate() {
        tau_x = tau_x + tau[slot] * x_pows[*deg];
    }
    let mu = x * (wire_blinding.r_a + wire_blinding.r_b)
        + x_pows[2] * wire_blinding.r_c
        + x_pows[5] * rho;

    transcript.absorb_scalar(b"t-hat", &t_hat);
    transcript.absorb_scalar(b"tau-x", &tau_x);
    transcript.absorb_scalar(b"mu", &mu);
    let qc = transcript.challenge_scalar(b"q");
    let q_point = params.g * qc;

    let h_prime: Vec<GroupElement> = (0..n)
        .map(|i| params.h_vec[i] * fl.y_inv_pows[i])
        .collect();
    let ipp = ipp::prove(
        params.g_vec[..n].to_vec(),
        h_prime,
        q_point,
        l_vec,
        r_vec,
        transcript,
    );

    Ok(CircuitProof {
        s_blind,
        t_commits,
        ipp_l: ipp.l_terms,
        ipp_r: ipp.r_terms,
        tau_x,
        mu,
        t_hat,
        ipp_a: ipp.a,
        ipp_b: ipp.b,
    })
}

/// Verify a circuit proof against the input and wire commitments.
pub fn verify(
    params: &PedersenParams,
    ckt: &CircuitSpec<Scalar>,
    v_commits: &[Commitment],
    wires: &WireCommitments,
    proof: &CircuitProof,
    transcript: &mut Transcript,
) -> Result<(), VerifyError> {
    if v_commits.len() != ckt.n_in {
        return Err(VerifyError::Malformed("input commitment count"));
    }
    let n = padded_gates(ckt.m_mul);
    if params.width() < n {
        return Err(VerifyError::Malformed("params narrower than circuit"));
    }
    let rounds = n.trailing_zeros() as usize;
    if proof.ipp_l.len() != rounds || proof.ipp_r.len() != rounds {
        return Err(VerifyError::Malformed("wrong folding round count"));
    }

    absorb_statement(transcript, ckt, v_commits, wires);
    transcript.absorb_commitment(b"S", &proof.s_blind);
    let y = transcript.challenge_scalar(b"y");
    let u = transcript.challenge_scalar(b"u");
    let fl = flatten(ckt, n, y, u);
    for t in &proof.t_commits {
        transcript.absorb_commitment(b"T", t);
    }
    let x = transcript.challenge_scalar(b"x");
    let mut x_pows = [Scalar::ONE; MAX_DEGREE + 1];
    for i in 1..=MAX_DEGREE {
        x_pows[i] = x_pows[i - 1] * x;
    }

    // degree check: g^{t̂} h^{τ_x} = Π Tᵢ^{xⁱ} · g^{x⁴·k_u} · Π Vⱼ^{x⁴·w_v[j]}
    {
        let mut scalars = Vec::with_capacity(2 + 7 + v_commits.len());
        let mut points = Vec::with_capacity(scalars.capacity());
        scalars.push(x_pows[DEG_LINEAR] * fl.k_u - proof.t_hat);
        points.push(params.g);
        scalars.push(-proof.tau_x);
        points.push(params.h);
        for (slot, deg) in T_DEGREES.iter().enumerate() {
            scalars.push(x_pows[*deg]);
            points.push(proof.t_commits[slot].0);
        }
        for (j, v) in v_commits.iter().enumerate() {
            scalars.push(x_pows[DEG_LINEAR] * fl.w_v[j]);
            points.push(v.0);
        }
        if msm_vartime(&scalars, &points) != GroupElement::identity() {
            return Err(VerifyError::Reject("degree check failed"));
        }
    }

    transcript.absorb_scalar(b"t-hat", &proof.t_hat);
    transcript.absorb_scalar(b"tau-x", &proof.tau_x);
    transcript.absorb_scalar(b"mu", &proof.mu);
    let qc = transcript.challenge_scalar(b"q");

    let ipp_proof = IppProof {
        l_terms: proof.ipp_l.clone(),
        r_terms: proof.ipp_r.clone(),
        a: proof.ipp_a,
        b: proof.ipp_b,
    };
    let folds = ipp::fold_challenges(&ipp_proof, transcript);
    let s = ipp::s_vector(&folds, n);

    // grand product: A^x B^x C^{x²} S^{x⁵} h^{−μ} Q^{t̂−ab} Π L^{f²} Π R^{f⁻²}
    //                · g⃗^{x³·(y⁻¹∘w_b) − a·s} · h'⃗^{r_pub − b·s_rev} = 1
    let mut scalars = Vec::with_capacity(6 + 2 * rounds + 2 * n);
    let mut points = Vec::with_capacity(scalars.capacity());
    scalars.push(x);
    points.push(wires.a.0);
    scalars.push(x);
    points.push(wires.b.0);
    scalars.push(x_pows[2]);
    points.push(wires.c.0);
    scalars.push(x_pows[5]);
    points.push(proof.s_blind.0);
    scalars.push(-proof.mu);
    points.push(params.h);
    scalars.push(qc * (proof.t_hat - proof.ipp_a * proof.ipp_b));
    points.push(params.g);
    for (f, (lt, rt)) in folds.iter().zip(proof.ipp_l.iter().zip(&proof.ipp_r)) {
        scalars.push(*f * *f);
        points.push(*lt);
        let fi = f.invert();
        scalars.push(fi * fi);
        points.push(*rt);
    }
    for i in 0..n {
        scalars.push(x_pows[3] * fl.y_inv_pows[i] * fl.w_b[i] - proof.ipp_a * s[i]);
        points.push(params.g_vec[i]);
        let r_pub = -fl.y_pows[i] + x_pows[2] * fl.w_c[i] + x_pows[3] * fl.w_a[i];
        scalars.push(fl.y_inv_pows[i] * (r_pub - proof.ipp_b * s[n - 1 - i]));
        points.push(params.h_vec[i]);
    }
    if msm_vartime(&scalars, &points) != GroupElement::identity() {
        return Err(VerifyError::Reject("evaluation check failed"));
    }
    Ok(())
}
