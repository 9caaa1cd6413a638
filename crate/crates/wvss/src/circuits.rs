//! Circuit builders for range checks, range disjunctions, and the
//! congruence ("proof-of-mod") subcircuits, up to the full deal circuit.
//!
//! The congruence gadget for `v = s mod p` works entirely inside the field:
//! with `p0 = q·p + t`, it bit-constrains `v ∈ [0, p)` and `k = (s − v)/p ∈
//! [0, q]`, then proves the disjunction `k ≤ q − 1 ∨ v ≤ t − 1` through two
//! challenge-weighted polynomials multiplied in one final gate. The
//! disjunction is what rules out the mod-`p0` wraparound: either branch
//! bounds `v + k·p` below `p0`, so the field identity `s = v + k·p` holds
//! over the integers.
//!
//! Builders and witness solvers share the [`PomSlot`] wire layout, so a
//! witness filled by the solver lands exactly on the wires the builder
//! constrained.

use num_integer::Integer;
use num_traits::One;

use crate::crt::{ceil_log2, Nat};
use crate::field::Field;
use crate::r1cs::{CircuitBuilder, CircuitError, CircuitSpec, LinComb, Var};

/// Constants of one congruence subcircuit for a prime `p` inside a field of
/// order `p0`: the split `p0 = q·p + t` and the bit widths `n1` (covers
/// `[0, p)`) and `n2` (covers `[0, q]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModParams {
    pub p: Nat,
    pub q_quot: Nat,
    pub t_rem: Nat,
    pub n1: usize,
    pub n2: usize,
}

impl ModParams {
    /// Derive circuit constants, rejecting primes with `p² + p ≥ p0`.
    pub fn for_modulus(p: &Nat, p0: &Nat) -> Result<ModParams, CircuitError> {
        if p < &Nat::from(2u8) {
            return Err(CircuitError::BadPrimes("modulus below 2".into()));
        }
        if (p * p + p) >= *p0 {
            return Err(CircuitError::PrimeTooLarge);
        }
        let (q, t) = p0.div_rem(p);
        // 2^{n1} >= p makes the two-sided bit ranges pin v to [0, p) exactly;
        // 2^{n2} >= q + 1 keeps k = q representable (the top-residue branch).
        let n1 = ceil_log2(p);
        let n2 = ceil_log2(&(&q + 1u8));
        Ok(ModParams {
            p: p.clone(),
            q_quot: q,
            t_rem: t,
            n1,
            n2,
        })
    }

    pub fn gates_per_slot(&self) -> usize {
        3 * (self.n1 + self.n2) + 1
    }
}

/// Wire layout of one congruence subcircuit: six bit groups and a final
/// disjunction gate, in the fixed order
/// `k | q−k | v | p−1−v | q−1−k | t−1−v | product`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PomSlot {
    pub base: usize,
    pub n1: usize,
    pub n2: usize,
}

impl PomSlot {
    pub fn new(base: usize, mp: &ModParams) -> PomSlot {
        PomSlot {
            base,
            n1: mp.n1,
            n2: mp.n2,
        }
    }

    pub fn gates(&self) -> usize {
        3 * (self.n1 + self.n2) + 1
    }

    pub fn g1(&self) -> std::ops::Range<usize> {
        self.base..self.base + self.n2
    }
    pub fn g2(&self) -> std::ops::Range<usize> {
        self.base + self.n2..self.base + 2 * self.n2
    }
    pub fn g3(&self) -> std::ops::Range<usize> {
        self.base + 2 * self.n2..self.base + 2 * self.n2 + self.n1
    }
    pub fn g4(&self) -> std::ops::Range<usize> {
        self.base + 2 * self.n2 + self.n1..self.base + 2 * self.n2 + 2 * self.n1
    }
    pub fn g5(&self) -> std::ops::Range<usize> {
        self.base + 2 * self.n2 + 2 * self.n1..self.base + 3 * self.n2 + 2 * self.n1
    }
    pub fn g6(&self) -> std::ops::Range<usize> {
        self.base + 3 * self.n2 + 2 * self.n1..self.base + 3 * self.n2 + 3 * self.n1
    }
    pub fn last(&self) -> usize {
        self.base + 3 * (self.n1 + self.n2)
    }

    /// `Σ 2^j · a[gates_j]` for a bit group.
    fn weighted_a<F: Field>(range: std::ops::Range<usize>) -> LinComb<F> {
        let mut e = LinComb::zero();
        let mut w = F::one();
        for i in range {
            e.push(Var::A(i), w);
            w = w + w;
        }
        e
    }

    /// The residue this slot's `v`-bits decompose (`v = Σ 2^j g3_j`).
    pub fn residue_expr<F: Field>(&self) -> LinComb<F> {
        Self::weighted_a(self.g3())
    }

    /// The full value this slot pins down: `v + p·k`, an integer in
    /// `[0, p0)` once the slot's constraints hold. This is how an
    /// uncommitted digit gets a canonical wire representation.
    pub fn register_expr<F: Field>(&self, mp: &ModParams) -> LinComb<F> {
        let p_f = F::from_nat(&mp.p);
        self.residue_expr::<F>()
            .plus(&Self::weighted_a::<F>(self.g1()).scaled(p_f))
    }
}

/// How the `v`-side of a congruence slot is tied down.
#[derive(Clone, Copy, Debug)]
pub enum VSide {
    /// Tied to committed input `i` with an explicit equality row.
    Input(usize),
    /// Left as the slot's own bit decomposition (an intermediate value).
    Internal,
}

/// Append one congruence subcircuit to `ckt`.
///
/// With `s_side = Some(expr)` the slot proves `expr mod p` equals the slot
/// residue; with `None` the slot merely defines a fresh in-range value (used
/// for dealer-chosen digits). Gate cost `3(n1 + n2) + 1`; row cost
/// `5(n1 + n2) + 7` plus one per present side.
pub fn pom_subckt<F: Field>(
    ckt: &mut CircuitBuilder<F>,
    mp: &ModParams,
    z: F,
    s_side: Option<LinComb<F>>,
    v_side: VSide,
) -> PomSlot {
    let slot = PomSlot::new(ckt.alloc_gates(mp.gates_per_slot()), mp);
    let p_f = F::from_nat(&mp.p);
    let q_f = F::from_nat(&mp.q_quot);
    let t_f = F::from_nat(&mp.t_rem);
    let one = F::one();

    let v_expr: LinComb<F> = match v_side {
        VSide::Input(i) => LinComb::input(i),
        VSide::Internal => slot.residue_expr(),
    };

    // s = v + p·k, with k as the g1 bits
    if let Some(s_expr) = s_side {
        let e = PomSlot::weighted_a::<F>(slot.g1())
            .scaled(p_f)
            .plus(&v_expr)
            .minus(&s_expr);
        ckt.constrain_zero(e);
    }
    // k + (q − k) = q
    let mut e = PomSlot::weighted_a::<F>(slot.g1()).plus(&PomSlot::weighted_a::<F>(slot.g2()));
    e.add_const(-q_f);
    ckt.constrain_zero(e);
    // v's bits match the committed input, when there is one
    if let VSide::Input(_) = v_side {
        ckt.constrain_zero(slot.residue_expr::<F>().minus(&v_expr));
    }
    // v + (p − 1 − v) = p − 1
    let mut e = v_expr.clone().plus(&PomSlot::weighted_a::<F>(slot.g4()));
    e.add_const(-(p_f - one));
    ckt.constrain_zero(e);
    // k + (q − 1 − k) = q − 1, the left disjunct's soft range
    let mut e = PomSlot::weighted_a::<F>(slot.g1()).plus(&PomSlot::weighted_a::<F>(slot.g5()));
    e.add_const(-(q_f - one));
    ckt.constrain_zero(e);
    // v + (t − 1 − v) = t − 1, the right disjunct's soft range
    let mut e = v_expr.plus(&PomSlot::weighted_a::<F>(slot.g6()));
    e.add_const(-(t_f - one));
    ckt.constrain_zero(e);
    // hard bit constraints a − b − 1 = 0 on groups 1..4
    for i in slot.g1().chain(slot.g2()).chain(slot.g3()).chain(slot.g4()) {
        let mut e = LinComb::from_var(Var::A(i)).minus(&LinComb::from_var(Var::B(i)));
        e.add_const(-one);
        ckt.constrain_zero(e);
    }
    // challenge-weighted defect polynomials of the two soft groups feed the
    // final gate's two inputs
    for (range, var) in [
        (slot.g5(), Var::A(slot.last())),
        (slot.g6(), Var::B(slot.last())),
    ] {
        let mut e = LinComb::zero();
        let mut zp = F::one();
        for i in range {
            e.push(Var::A(i), zp);
            e.push(Var::B(i), -zp);
            e.add_const(-zp);
            zp = zp * z;
        }
        e = e.minus(&LinComb::from_var(var));
        ckt.constrain_zero(e);
    }
    // every gate output in the slot is zero, including the disjunction gate
    for i in slot.base..=slot.last() {
        ckt.constrain_zero(LinComb::from_var(Var::C(i)));
    }
    slot
}

/// A hard range block: `value ∈ [0, 2^n)` via an honest bit decomposition.
/// Costs `n` gates and `2n + 1` rows.
pub fn range_subckt<F: Field>(
    ckt: &mut CircuitBuilder<F>,
    value: LinComb<F>,
    n: usize,
) -> std::ops::Range<usize> {
    let base = ckt.alloc_gates(n);
    let range = base..base + n;
    let e = PomSlot::weighted_a::<F>(range.clone()).minus(&value);
    ckt.constrain_zero(e);
    for i in range.clone() {
        let mut e = LinComb::from_var(Var::A(i)).minus(&LinComb::from_var(Var::B(i)));
        e.add_const(-F::one());
        ckt.constrain_zero(e);
        ckt.constrain_zero(LinComb::from_var(Var::C(i)));
    }
    range
}

/// A soft range block: the bit shape is allocated and summed, but
/// `a − b − 1 = 0` is not enforced; the per-bit defects are returned for a
/// disjunction gate to consume.
pub fn soft_range_subckt<F: Field>(
    ckt: &mut CircuitBuilder<F>,
    value: LinComb<F>,
    n: usize,
) -> (std::ops::Range<usize>, Vec<LinComb<F>>) {
    let base = ckt.alloc_gates(n);
    let range = base..base + n;
    let e = PomSlot::weighted_a::<F>(range.clone()).minus(&value);
    ckt.constrain_zero(e);
    let mut defects = Vec::with_capacity(n);
    for i in range.clone() {
        ckt.constrain_zero(LinComb::from_var(Var::C(i)));
        let mut d = LinComb::from_var(Var::A(i)).minus(&LinComb::from_var(Var::B(i)));
        d.add_const(-F::one());
        defects.push(d);
    }
    (range, defects)
}

/// The disjunction gate: with challenge `z` drawn after the defect wires are
/// committed, `(Σ zʲ·leftⱼ) · (Σ zʲ·rightⱼ) = 0` accepts iff one side's
/// defects all vanish (up to the usual root set in `z`). One extra gate.
pub fn disjunction_subckt<F: Field>(
    ckt: &mut CircuitBuilder<F>,
    left: &[LinComb<F>],
    right: &[LinComb<F>],
    z: F,
) -> usize {
    let gate = ckt.alloc_gates(1);
    for (defects, var) in [(left, Var::A(gate)), (right, Var::B(gate))] {
        let mut e = LinComb::zero();
        let mut zp = F::one();
        for d in defects {
            e = e.plus(&d.clone().scaled(zp));
            zp = zp * z;
        }
        e = e.minus(&LinComb::from_var(var));
        ckt.constrain_zero(e);
    }
    ckt.constrain_zero(LinComb::from_var(Var::C(gate)));
    gate
}

/// How the digits of an extended congruence circuit are folded back into
/// one residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// `m = 0`: the statement is a single base congruence.
    Direct,
    /// `Σ aᵢ'·tᵢ` stays below `p0`, so one final slot relates it to `v`.
    Collapse,
    /// Horner chain: one slot per step `vⱼ = aⱼ' + t·v'ⱼ₊₁`.
    Chain,
}

/// Slot plan for one extended congruence instance (one party's share in the
/// deal circuit, or a standalone extended proof).
#[derive(Clone, Debug)]
pub struct EmodLayout {
    pub mp: ModParams,
    pub m: usize,
    /// One slot per digit `a_0..a_m` (empty when `m = 0`).
    pub digit_slots: Vec<PomSlot>,
    pub tail: Tail,
    /// `Direct`/`Collapse`: one slot. `Chain`: slots for `v'_{m−1} .. v'_0`.
    pub tail_slots: Vec<PomSlot>,
    /// `p0^i mod p` for `i = 0..=m`.
    pub pow_mod: Vec<Nat>,
}

impl EmodLayout {
    pub fn plan(mp: ModParams, m: usize, base: usize) -> EmodLayout {
        let per = mp.gates_per_slot();
        let mut next = base;
        let mut alloc = |n: usize| {
            let slots: Vec<PomSlot> = (0..n)
                .map(|i| PomSlot {
                    base: next + i * per,
                    n1: mp.n1,
                    n2: mp.n2,
                })
                .collect();
            next += n * per;
            slots
        };
        if m == 0 {
            let tail_slots = alloc(1);
            return EmodLayout {
                mp,
                m,
                digit_slots: Vec::new(),
                tail: Tail::Direct,
                tail_slots,
                pow_mod: Vec::new(),
            };
        }
        // p0^i mod p = t^i mod p, and the exact bound on the collapsed sum
        let p0 = &mp.q_quot * &mp.p + &mp.t_rem;
        let mut pow_mod = Vec::with_capacity(m + 1);
        let mut acc = Nat::one() % &mp.p;
        for _ in 0..=m {
            pow_mod.push(acc.clone());
            acc = (&acc * &mp.t_rem) % &mp.p;
        }
        let pmax = &mp.p - 1u8;
        let u_max: Nat = pow_mod.iter().map(|t| &pmax * t).sum();
        let tail = if u_max < p0 { Tail::Collapse } else { Tail::Chain };
        let digit_slots = alloc(m + 1);
        let tail_slots = match tail {
            Tail::Collapse => alloc(1),
            Tail::Chain => alloc(m),
            Tail::Direct => unreachable!(),
        };
        EmodLayout {
            mp,
            m,
            digit_slots,
            tail,
            tail_slots,
            pow_mod,
        }
    }

    pub fn gates(&self) -> usize {
        (self.digit_slots.len() + self.tail_slots.len()) * self.mp.gates_per_slot()
    }

    pub fn slot_count(&self) -> usize {
        self.digit_slots.len() + self.tail_slots.len()
    }
}

/// How digit `j` enters a party's extended congruence subcircuit.
enum DigitSource<F> {
    Expr(LinComb<F>),
    /// Dealer-chosen digit: the slot itself defines the value.
    Fresh,
}

/// Build one extended congruence instance into `ckt` following `layout`.
/// `digit_source(j)` supplies the committed/shared expression for digit `j`;
/// `v_input` is the committed input index the final residue must equal.
/// Returns the defining slots, indexed by digit.
fn build_emod_instance<F: Field>(
    ckt: &mut CircuitBuilder<F>,
    layout: &EmodLayout,
    z: F,
    mut digit_source: impl FnMut(usize) -> DigitSource<F>,
    v_input: usize,
) {
    let mp = &layout.mp;
    if layout.m == 0 {
        let s_expr = match digit_source(0) {
            DigitSource::Expr(e) => e,
            DigitSource::Fresh => panic!("digit 0 always has a source"),
        };
        let slot = pom_subckt(ckt, mp, z, Some(s_expr), VSide::Input(v_input));
        debug_assert_eq!(slot, layout.tail_slots[0]);
        return;
    }
    // digit slots: a_j' = a_j mod p, or a fresh in-range digit definition
    for j in 0..=layout.m {
        let s_side = match digit_source(j) {
            DigitSource::Expr(e) => Some(e),
            DigitSource::Fresh => None,
        };
        let slot = pom_subckt(ckt, mp, z, s_side, VSide::Internal);
        debug_assert_eq!(slot, layout.digit_slots[j]);
    }
    match layout.tail {
        Tail::Collapse => {
            // v = (Σ a_j'·t_j) mod p in one slot; the sum cannot wrap
            let mut u = LinComb::zero();
            for (j, t_j) in layout.pow_mod.iter().enumerate() {
                u = u.plus(
                    &layout.digit_slots[j]
                        .residue_expr::<F>()
                        .scaled(F::from_nat(t_j)),
                );
            }
            let slot = pom_subckt(ckt, mp, z, Some(u), VSide::Input(v_input));
            debug_assert_eq!(slot, layout.tail_slots[0]);
        }
        Tail::Chain => {
            // v'_m = a'_m; v_j = a'_j + t·v'_{j+1}; v'_0 = v
            let t_f = F::from_nat(&mp.t_rem);
            let mut prev = layout.digit_slots[layout.m].residue_expr::<F>();
            for step in 0..layout.m {
                let j = layout.m - 1 - step;
                let v_j = layout.digit_slots[j]
                    .residue_expr::<F>()
                    .plus(&prev.scaled(t_f));
                let v_side = if j == 0 {
                    VSide::Input(v_input)
                } else {
                    VSide::Internal
                };
                let slot = pom_subckt(ckt, mp, z, Some(v_j), v_side);
                debug_assert_eq!(slot, layout.tail_slots[step]);
                prev = slot.residue_expr();
            }
        }
        Tail::Direct => unreachable!(),
    }
}

/// Base congruence circuit over committed inputs `(v, s)`: satisfiable iff
/// `v = s mod p` with exact integer semantics.
pub fn mod_ckt<F: Field>(p: &Nat, z: F) -> Result<CircuitSpec<F>, CircuitError> {
    emod_ckt(p, 0, z)
}

/// Extended congruence circuit over inputs `(v, a_0, …, a_m)`: satisfiable
/// iff `v = Σ aᵢ·p0^i mod p` over the integers.
pub fn emod_ckt<F: Field>(p: &Nat, m: usize, z: F) -> Result<CircuitSpec<F>, CircuitError> {
    let mp = ModParams::for_modulus(p, &F::modulus())?;
    let layout = EmodLayout::plan(mp, m, 0);
    let mut ckt = CircuitBuilder::new(m + 2);
    build_emod_instance(
        &mut ckt,
        &layout,
        z,
        |j| DigitSource::Expr(LinComb::input(1 + j)),
        0,
    );
    Ok(ckt.finish())
}

/// Slot plan for the full deal circuit.
#[derive(Clone, Debug)]
pub struct DealLayout {
    pub parties: Vec<EmodLayout>,
    pub m: usize,
}

impl DealLayout {
    pub fn plan(primes: &[Nat], m: usize, p0: &Nat) -> Result<DealLayout, CircuitError> {
        if primes.is_empty() {
            return Err(CircuitError::BadPrimes("no parties".into()));
        }
        for (i, p) in primes.iter().enumerate() {
            for other in &primes[i + 1..] {
                if !p.gcd(other).is_one() {
                    return Err(CircuitError::BadPrimes(format!(
                        "moduli {p} and {other} share a factor"
                    )));
                }
            }
        }
        let mut parties = Vec::with_capacity(primes.len());
        let mut base = 0;
        for p in primes {
            let mp = ModParams::for_modulus(p, p0)?;
            let layout = EmodLayout::plan(mp, m, base);
            base += layout.gates();
            parties.push(layout);
        }
        Ok(DealLayout { parties, m })
    }

    pub fn gates(&self) -> usize {
        self.parties.iter().map(|p| p.gates()).sum()
    }
}

/// The deal circuit over committed inputs `(s_0, s_1, …, s_n)`: shared
/// intermediate digits `a_0..a_m` with `a_0 = s_0`, and one extended
/// congruence instance per party proving `s_i = Σ a_j·p0^j mod p_i`.
///
/// Digits `a_1..a_m` are pinned by the first party's digit slots; every
/// other party's instance references those registers, which is what forces
/// all shares to descend from one lifted secret.
pub fn vss_ckt<F: Field>(
    primes: &[Nat],
    m: usize,
    z: F,
) -> Result<CircuitSpec<F>, CircuitError> {
    let layout = DealLayout::plan(primes, m, &F::modulus())?;
    let mut ckt = CircuitBuilder::new(primes.len() + 1);
    for (idx, party) in layout.parties.iter().enumerate() {
        let v_input = idx + 1;
        let first_party = layout.parties.first().unwrap();
        build_emod_instance(
            &mut ckt,
            party,
            z,
            |j| {
                if j == 0 {
                    DigitSource::Expr(LinComb::input(0))
                } else if idx == 0 {
                    DigitSource::Fresh
                } else {
                    DigitSource::Expr(
                        first_party.digit_slots[j].register_expr::<F>(&first_party.mp),
                    )
                }
            },
            v_input,
        );
    }
    let ckt = ckt.finish();
    debug_assert_eq!(ckt.m_mul, layout.gates());
    Ok(ckt)
}
