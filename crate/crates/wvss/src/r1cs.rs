//! Sparse arithmetic-circuit (R1CS) representation and satisfaction oracle.
//!
//! A circuit is a set of multiplication gates `aᵢ · bᵢ = cᵢ` plus linear
//! constraints `W_a·a + W_b·b + W_c·c = W_v·v + k` tying wire values to the
//! committed inputs `v`. Matrices are stored row-sparse with canonical term
//! ordering so two independently built specs compare equal.

use std::fmt::Write as _;

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("prime too large for the field: need p0 > p^2 + p")]
    PrimeTooLarge,
    #[error("bad primes: {0}")]
    BadPrimes(String),
}

/// Which wire vector a linear term addresses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    /// Left input of gate `i`.
    A(usize),
    /// Right input of gate `i`.
    B(usize),
    /// Output of gate `i`.
    C(usize),
    /// Committed input `i`.
    In(usize),
}

/// A linear expression over wires, inputs, and a constant.
#[derive(Clone, Debug)]
pub struct LinComb<F> {
    pub terms: Vec<(Var, F)>,
    pub konst: F,
}

impl<F: Field> LinComb<F> {
    pub fn zero() -> Self {
        LinComb {
            terms: Vec::new(),
            konst: F::zero(),
        }
    }

    pub fn from_var(v: Var) -> Self {
        LinComb {
            terms: vec![(v, F::one())],
            konst: F::zero(),
        }
    }

    pub fn input(i: usize) -> Self {
        Self::from_var(Var::In(i))
    }

    pub fn constant(k: F) -> Self {
        LinComb {
            terms: Vec::new(),
            konst: k,
        }
    }

    pub fn push(&mut self, v: Var, coeff: F) {
        if !coeff.is_zero() {
            self.terms.push((v, coeff));
        }
    }

    pub fn add_const(&mut self, k: F) {
        self.konst = self.konst + k;
    }

    pub fn scaled(mut self, by: F) -> Self {
        for (_, c) in self.terms.iter_mut() {
            *c = *c * by;
        }
        self.konst = self.konst * by;
        self
    }

    pub fn plus(mut self, other: &LinComb<F>) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self.konst = self.konst + other.konst;
        self
    }

    pub fn minus(mut self, other: &LinComb<F>) -> Self {
        for (v, c) in &other.terms {
            self.terms.push((*v, -*c));
        }
        self.konst = self.konst - other.konst;
        self
    }
}

/// One linear constraint in the canonical row form
/// `Σ a·A + Σ b·B + Σ c·C = Σ v·V + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row<F> {
    pub a: Vec<(usize, F)>,
    pub b: Vec<(usize, F)>,
    pub c: Vec<(usize, F)>,
    pub v: Vec<(usize, F)>,
    pub k: F,
}

fn canonicalize<F: Field>(mut terms: Vec<(usize, F)>) -> Vec<(usize, F)> {
    terms.sort_by_key(|(i, _)| *i);
    let mut out: Vec<(usize, F)> = Vec::with_capacity(terms.len());
    for (i, c) in terms {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc = *acc + c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// A full circuit: gate count, committed-input count, and constraint rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitSpec<F> {
    pub m_mul: usize,
    pub n_in: usize,
    pub rows: Vec<Row<F>>,
}

impl<F: Field> CircuitSpec<F> {
    pub fn q_cons(&self) -> usize {
        self.rows.len()
    }

    /// One line per constraint row, sparse triplets; stable across builds of
    /// the same circuit, so prover/verifier derivations can be diffed.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "circuit gates={} inputs={}", self.m_mul, self.n_in);
        let side = |out: &mut String, tag: &str, terms: &[(usize, F)]| {
            for (i, c) in terms {
                let _ = write!(out, " {tag}{i}*{}", c.to_nat());
            }
        };
        for (j, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "row {j}:");
            side(&mut out, "a", &row.a);
            side(&mut out, "b", &row.b);
            side(&mut out, "c", &row.c);
            let _ = write!(out, " =");
            side(&mut out, "v", &row.v);
            let _ = writeln!(out, " k={}", row.k.to_nat());
        }
        out
    }
}

/// Wire assignments for every multiplication gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<F> {
    pub a: Vec<F>,
    pub b: Vec<F>,
    pub c: Vec<F>,
}

impl<F: Field> Witness<F> {
    pub fn zeroed(m_mul: usize) -> Self {
        Witness {
            a: vec![F::zero(); m_mul],
            b: vec![F::zero(); m_mul],
            c: vec![F::zero(); m_mul],
        }
    }
}

/// The satisfaction oracle: `a ∘ b = c` and every row holds, all in the
/// field. This is the reference every circuit builder and every prover
/// witness is tested against.
pub fn is_satisfied<F: Field>(
    ckt: &CircuitSpec<F>,
    inputs: &[F],
    w: &Witness<F>,
) -> Result<bool, CircuitError> {
    if inputs.len() != ckt.n_in {
        return Err(CircuitError::DimensionMismatch(format!(
            "expected {} inputs, got {}",
            ckt.n_in,
            inputs.len()
        )));
    }
    if w.a.len() != ckt.m_mul || w.b.len() != ckt.m_mul || w.c.len() != ckt.m_mul {
        return Err(CircuitError::DimensionMismatch(format!(
            "expected {} wires per vector",
            ckt.m_mul
        )));
    }
    for i in 0..ckt.m_mul {
        if w.a[i] * w.b[i] != w.c[i] {
            return Ok(false);
        }
    }
    let dot = |terms: &[(usize, F)], vals: &[F]| -> F {
        let mut acc = F::zero();
        for (i, coeff) in terms {
            acc = acc + *coeff * vals[*i];
        }
        acc
    };
    for row in &ckt.rows {
        let lhs = dot(&row.a, &w.a) + dot(&row.b, &w.b) + dot(&row.c, &w.c);
        let rhs = dot(&row.v, inputs) + row.k;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Incremental circuit builder used by the gadget constructors.
pub struct CircuitBuilder<F> {
    n_in: usize,
    gates: usize,
    rows: Vec<Row<F>>,
}

impl<F: Field> CircuitBuilder<F> {
    pub fn new(n_in: usize) -> Self {
        CircuitBuilder {
            n_in,
            gates: 0,
            rows: Vec::new(),
        }
    }

    /// Reserve `n` consecutive gates, returning the base index.
    pub fn alloc_gates(&mut self, n: usize) -> usize {
        let base = self.gates;
        self.gates += n;
        base
    }

    pub fn gates(&self) -> usize {
        self.gates
    }

    /// Add the constraint `expr == 0`.
    pub fn constrain_zero(&mut self, expr: LinComb<F>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut c = Vec::new();
        let mut v = Vec::new();
        for (var, coeff) in expr.terms {
            match var {
                Var::A(i) => a.push((i, coeff)),
                Var::B(i) => b.push((i, coeff)),
                Var::C(i) => c.push((i, coeff)),
                // wires = inputs + k form: input terms flip sign
                Var::In(i) => v.push((i, -coeff)),
            }
        }
        self.rows.push(Row {
            a: canonicalize(a),
            b: canonicalize(b),
            c: canonicalize(c),
            v: canonicalize(v),
            k: -expr.konst,
        });
    }

    pub fn finish(self) -> CircuitSpec<F> {
        CircuitSpec {
            m_mul: self.gates,
            n_in: self.n_in,
            rows: self.rows,
        }
    }
}
