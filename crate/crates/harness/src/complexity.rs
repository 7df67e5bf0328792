//! Per-symbol operation counts of the LMS schemes.
//!
//! Counting convention: one complex multiplication (or a real-by-complex
//! scaling) is one multiplication, one complex addition or subtraction is one
//! addition, and conjugation is free. An `M`-term inner product therefore
//! costs `M` multiplications and `M − 1` additions; forming the error
//! `d − x` adds one more addition.

use std::fmt;

use jointrank_core::{ComplexMatrix, ComplexVector, FullRankState, JioState, StepOutput, C64};

/// Additions and multiplications per received symbol.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    pub additions: u64,
    pub multiplications: u64,
}

impl OpCount {
    pub fn new(additions: u64, multiplications: u64) -> Self {
        Self {
            additions,
            multiplications,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    FullRank,
    Proposed,
    Mwf,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::FullRank => "Full-rank",
            Scheme::Proposed => "Proposed",
            Scheme::Mwf => "MWF",
        })
    }
}

/// Closed-form operation counts. The MWF entry accumulates the per-stage
/// cost over stages `d = 1..=D` with stage dimension `M − d`.
pub fn complexity_count(scheme: Scheme, m: u64, d: u64) -> OpCount {
    assert!(m >= d && d >= 1, "need M ≥ D ≥ 1, got M = {m}, D = {d}");
    match scheme {
        Scheme::FullRank => OpCount::new(2 * m, 2 * m + 1),
        Scheme::Proposed => OpCount::new(2 * d * m + d, 3 * d * m + d + 2),
        Scheme::Mwf => (1..=d).fold(OpCount::default(), |acc, stage| {
            let mb = (m - stage) as i128;
            let adds = 2 * mb * mb - 3 * mb + 1;
            let muls = 2 * mb * mb + 5 * mb + 7;
            OpCount::new(acc.additions + adds as u64, acc.multiplications + muls as u64)
        }),
    }
}

/// Arithmetic that tallies what it does.
#[derive(Debug, Clone, Copy, Default)]
pub struct OpCounter {
    pub count: OpCount,
}

impl OpCounter {
    pub fn mul(&mut self, a: C64, b: C64) -> C64 {
        self.count.multiplications += 1;
        a * b
    }

    pub fn scale(&mut self, a: f64, b: C64) -> C64 {
        self.count.multiplications += 1;
        b * a
    }

    pub fn add(&mut self, a: C64, b: C64) -> C64 {
        self.count.additions += 1;
        a + b
    }

    pub fn sub(&mut self, a: C64, b: C64) -> C64 {
        self.count.additions += 1;
        a - b
    }

    /// `aᴴ b`.
    pub fn inner(&mut self, a: impl IntoIterator<Item = C64>, b: impl IntoIterator<Item = C64>) -> C64 {
        let mut terms = a.into_iter().zip(b).map(|(x, y)| self.mul(x.conj(), y)).collect::<Vec<_>>().into_iter();
        let first = terms.next().unwrap_or_default();
        terms.fold(first, |acc, t| self.add(acc, t))
    }
}

/// Result of an instrumented adaptation step.
#[derive(Debug, Clone)]
pub struct CountedStep<S> {
    pub state: S,
    pub output: StepOutput,
    pub ops: OpCount,
}

/// One full-rank LMS step with counted arithmetic.
pub fn instrumented_fullrank_step(state: &FullRankState, r: &ComplexVector, d: C64) -> jointrank_core::Result<CountedStep<FullRankState>> {
    let mut c = OpCounter::default();
    let w = state.weights();
    let x = c.inner(w.iter().copied(), r.iter().copied());
    let e = c.sub(d, x);
    let a = c.scale(state.mu(), e.conj());
    let next = ComplexVector::from_fn(w.len(), |m| {
        let t = c.mul(a, r[m]);
        c.add(w[m], t)
    });
    Ok(CountedStep {
        state: FullRankState::from_weights(next, state.mu())?,
        output: StepOutput { x, e },
        ops: c.count,
    })
}

/// One joint projection/filter LMS step with counted arithmetic, in the
/// straightforward order: reduce, filter, error, then both updates from the
/// old state.
pub fn instrumented_jio_step(state: &JioState, r: &ComplexVector, d: C64) -> jointrank_core::Result<CountedStep<JioState>> {
    let mut c = OpCounter::default();
    let s = state.projection();
    let w = state.weights();
    let (dim, rank) = (s.rows(), s.cols());
    let r_bar = ComplexVector::from_fn(rank, |k| c.inner((0..dim).map(|m| s[(m, k)]), r.iter().copied()));
    let x = c.inner(w.iter().copied(), r_bar.iter().copied());
    let e = c.sub(d, x);
    let a = c.scale(state.mu(), e.conj());
    let w_next = ComplexVector::from_fn(rank, |k| {
        let t = c.mul(a, r_bar[k]);
        c.add(w[k], t)
    });
    let b = c.scale(state.eta(), e.conj());
    let s_next = ComplexMatrix::from_fn(dim, rank, |m, k| {
        let t = c.mul(b, r[m]);
        let t = c.mul(t, w[k].conj());
        c.add(s[(m, k)], t)
    });
    Ok(CountedStep {
        state: JioState::from_parts(s_next, w_next, state.mu(), state.eta())?,
        output: StepOutput { x, e },
        ops: c.count,
    })
}
