//! Inner-product argument: log-round folding proof that committed vectors
//! `l, r` satisfy `P = g⃗^l h⃗^r Q^{⟨l,r⟩}`.

use crate::group::{msm_vartime, GroupElement, Scalar};
use crate::transcript::Transcript;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IppProof {
    pub l_terms: Vec<GroupElement>,
    pub r_terms: Vec<GroupElement>,
    pub a: Scalar,
    pub b: Scalar,
}

fn inner(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(Scalar::ZERO, |acc, (x, y)| acc + *x * *y)
}

/// Prove over power-of-two length vectors. The caller has blinded `l`/`r`
/// per coordinate, so variable-time group arithmetic leaks nothing useful.
pub(crate) fn prove(
    mut g: Vec<GroupElement>,
    mut h: Vec<GroupElement>,
    q: GroupElement,
    mut l: Vec<Scalar>,
    mut r: Vec<Scalar>,
    transcript: &mut Transcript,
) -> IppProof {
    let mut n = l.len();
    debug_assert!(n.is_power_of_two());
    debug_assert_eq!(n, r.len());
    debug_assert_eq!(n, g.len());
    debug_assert_eq!(n, h.len());

    let rounds = n.trailing_zeros() as usize;
    let mut l_terms = Vec::with_capacity(rounds);
    let mut r_terms = Vec::with_capacity(rounds);

    while n > 1 {
        n /= 2;
        let (l_lo, l_hi) = l.split_at(n);
        let (r_lo, r_hi) = r.split_at(n);
        let (g_lo, g_hi) = g.split_at(n);
        let (h_lo, h_hi) = h.split_at(n);

        let c_l = inner(l_lo, r_hi);
        let c_r = inner(l_hi, r_lo);
        let term_l = {
            let scalars: Vec<Scalar> = l_lo.iter().chain(r_hi).copied().chain([c_l]).collect();
            let points: Vec<GroupElement> = g_hi.iter().chain(h_lo).copied().chain([q]).collect();
            msm_vartime(&scalars, &points)
        };
        let term_r = {
            let scalars: Vec<Scalar> = l_hi.iter().chain(r_lo).copied().chain([c_r]).collect();
            let points: Vec<GroupElement> = g_lo.iter().chain(h_hi).copied().chain([q]).collect();
            msm_vartime(&scalars, &points)
        };
        transcript.absorb_point(b"ipp-L", &term_l);
        transcript.absorb_point(b"ipp-R", &term_r);
        let f = transcript.challenge_scalar(b"ipp-f");
        let f_inv = f.invert();

        let mut l_next = Vec::with_capacity(n);
        let mut r_next = Vec::with_capacity(n);
        let mut g_next = Vec::with_capacity(n);
        let mut h_next = Vec::with_capacity(n);
        for i in 0..n {
            l_next.push(l_lo[i] * f + l_hi[i] * f_inv);
            r_next.push(r_lo[i] * f_inv + r_hi[i] * f);
            g_next.push(msm_vartime(&[f_inv, f], &[g_lo[i], g_hi[i]]));
            h_next.push(msm_vartime(&[f, f_inv], &[h_lo[i], h_hi[i]]));
        }
        l = l_next;
        r = r_next;
        g = g_next;
        h = h_next;
        l_terms.push(term_l);
        r_terms.push(term_r);
    }
    IppProof {
        l_terms,
        r_terms,
        a: l[0],
        b: r[0],
    }
}

/// Replay the round challenges from the transcript.
pub(crate) fn fold_challenges(proof: &IppProof, transcript: &mut Transcript) -> Vec<Scalar> {
    proof
        .l_terms
        .iter()
        .zip(&proof.r_terms)
        .map(|(lt, rt)| {
            transcript.absorb_point(b"ipp-L", lt);
            transcript.absorb_point(b"ipp-R", rt);
            transcript.challenge_scalar(b"ipp-f")
        })
        .collect()
}

/// The per-position verification scalars `s_i = Π f_j^{±1}` (sign is the
/// `(rounds−1−j)`-th bit of `i`). Note `s_{n−1−i} = 1/s_i`.
pub(crate) fn s_vector(folds: &[Scalar], n: usize) -> Vec<Scalar> {
    debug_assert_eq!(1 << folds.len(), n);
    let mut all_inv = Scalar::ONE;
    for f in folds {
        all_inv = all_inv * f.invert();
    }
    let mut s = Vec::with_capacity(n);
    s.push(all_inv);
    for i in 1..n {
        let lg = usize::BITS as usize - 1 - i.leading_zeros() as usize;
        let f = folds[folds.len() - 1 - lg];
        s.push(s[i - (1 << lg)] * f * f);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{msm, setup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn prove_then_check_via_s_vector() {
        let n = 8usize;
        let params = setup(b"ipp-test", n);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let l: Vec<Scalar> = (0..n).map(|_| Scalar::random(&mut rng)).collect();
        let r: Vec<Scalar> = (0..n).map(|_| Scalar::random(&mut rng)).collect();
        let q = params.g;
        let c = inner(&l, &r);

        // P = g^l h^r Q^c
        let mut scalars = l.clone();
        scalars.extend_from_slice(&r);
        scalars.push(c);
        let mut points = params.g_vec.clone();
        points.extend_from_slice(&params.h_vec);
        points.push(q);
        let p = msm(&scalars, &points);

        let mut t = Transcript::new(b"ipp-test");
        let proof = prove(
            params.g_vec.clone(),
            params.h_vec.clone(),
            q,
            l,
            r,
            &mut t,
        );

        let mut tv = Transcript::new(b"ipp-test");
        let folds = fold_challenges(&proof, &mut tv);
        let s = s_vector(&folds, n);

        // P · Π L^{f²} Π R^{f⁻²} == g^{a·s} h^{b·s_rev} Q^{ab}
        let mut check_scalars = Vec::new();
        let mut check_points = Vec::new();
        check_scalars.push(Scalar::ONE);
        check_points.push(p);
        for (f, (lt, rt)) in folds.iter().zip(proof.l_terms.iter().zip(&proof.r_terms)) {
            check_scalars.push(*f * *f);
            check_points.push(*lt);
            let fi = f.invert();
            check_scalars.push(fi * fi);
            check_points.push(*rt);
        }
        for i in 0..n {
            check_scalars.push(-(proof.a * s[i]));
            check_points.push(params.g_vec[i]);
            check_scalars.push(-(proof.b * s[n - 1 - i]));
            check_points.push(params.h_vec[i]);
        }
        check_scalars.push(-(proof.a * proof.b));
        check_points.push(q);
        assert_eq!(
            msm_vartime(&check_scalars, &check_points),
            crate::group::GroupElement::identity()
        );
    }
}
