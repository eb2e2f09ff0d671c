//! Reduction traces and strategy runners.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::syntax::Term;
use crate::vsc::{classify_usefulness, Redex, RuleLabel, StepError, UsefulnessVerdict};

use super::calculus::Calculus;

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub redex: Redex,
    /// Verdict of the step at its source term (meaningful for e-abs).
    pub verdict: UsefulnessVerdict,
    /// The term after the step.
    pub term: Term,
}

/// A reduction sequence with per-label step counters.
#[derive(Clone, Debug)]
pub struct Trace {
    pub calculus: Calculus,
    pub start: Term,
    pub steps: Vec<TraceStep>,
    /// Set when the strategy ran out of fuel before reaching a normal form.
    pub fuel_exhausted: bool,
}

impl Trace {
    pub fn new(calculus: Calculus, start: Term) -> Trace {
        Trace {
            calculus,
            start,
            steps: Vec::new(),
            fuel_exhausted: false,
        }
    }

    pub fn end(&self) -> &Term {
        self.steps.last().map_or(&self.start, |s| &s.term)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn source_of(&self, i: usize) -> &Term {
        if i == 0 {
            &self.start
        } else {
            &self.steps[i - 1].term
        }
    }

    pub fn count(&self, label: RuleLabel) -> usize {
        self.steps.iter().filter(|s| s.redex.label == label).count()
    }

    /// Steps counted per label, the |d|_a of the trace.
    pub fn counters(&self) -> BTreeMap<RuleLabel, usize> {
        let mut m = BTreeMap::new();
        for s in &self.steps {
            *m.entry(s.redex.label).or_insert(0) += 1;
        }
        m
    }

    pub fn count_gc(&self) -> usize {
        self.steps.iter().filter(|s| s.redex.label.is_gc()).count()
    }

    /// Push one step, computing its verdict at the current end term.
    pub fn push(&mut self, redex: Redex) -> Result<(), StepError> {
        let src = self.end().clone();
        let verdict = classify_usefulness(&src, &redex);
        let term = self.calculus.apply(&src, &redex)?;
        self.steps.push(TraceStep {
            redex,
            verdict,
            term,
        });
        Ok(())
    }

    /// Re-apply every redex from the start, checking validity and that
    /// the stored terms match.
    pub fn validate(&self) -> Result<(), StepError> {
        let mut cur = self.start.clone();
        for step in &self.steps {
            cur = self.calculus.apply(&cur, &step.redex)?;
            if cur != step.term {
                return Err(StepError::Stale(
                    "stored term differs from re-application".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// First redex in the deterministic enumeration order.
    Lo,
    /// Uniformly random redex, reproducible from the seed.
    Random(u64),
    /// Prefer labels in the given order, ties broken by enumeration order.
    Priority(Vec<RuleLabel>),
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "lo" {
            return Ok(Strategy::Lo);
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed
                .parse::<u64>()
                .map(Strategy::Random)
                .map_err(|e| format!("bad random seed: {e}"));
        }
        if s == "random" {
            return Ok(Strategy::Random(0));
        }
        Err(format!("unknown strategy '{s}' (lo, random:SEED)"))
    }
}

/// Repeatedly pick a redex per the strategy until the term is normal or
/// the fuel runs out. Fuel exhaustion is flagged in the trace, not a
/// fault.
pub fn run_strategy(
    t: &Term,
    calculus: Calculus,
    strategy: &Strategy,
    fuel: usize,
) -> Result<Trace, StepError> {
    let mut trace = Trace::new(calculus, t.clone());
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    for _ in 0..fuel {
        let redexes = calculus.enumerate(trace.end())?;
        if redexes.is_empty() {
            return Ok(trace);
        }
        let pick = match strategy {
            Strategy::Lo => redexes[0].clone(),
            Strategy::Random(_) => {
                let rng = rng.as_mut().expect("rng initialized");
                redexes[rng.gen_range(0..redexes.len())].clone()
            }
            Strategy::Priority(order) => {
                let rank = |r: &Redex| {
                    order
                        .iter()
                        .position(|l| *l == r.label)
                        .unwrap_or(order.len())
                };
                redexes
                    .iter()
                    .min_by_key(|r| rank(r))
                    .expect("nonempty")
                    .clone()
            }
        };
        trace.push(pick)?;
    }
    if !calculus.enumerate(trace.end())?.is_empty() {
        trace.fuel_exhausted = true;
    }
    Ok(trace)
}

/// A random trace of at most `max_len` steps, optionally avoiding gc
/// steps, stopping early at normal forms (or when only gc steps remain).
pub fn random_trace(
    t: &Term,
    calculus: Calculus,
    max_len: usize,
    rng: &mut ChaCha8Rng,
    allow_gc: bool,
) -> Result<Trace, StepError> {
    let mut trace = Trace::new(calculus, t.clone());
    for _ in 0..max_len {
        let mut redexes = calculus.enumerate(trace.end())?;
        if !allow_gc {
            redexes.retain(|r| !r.label.is_gc());
        }
        if redexes.is_empty() {
            break;
        }
        let pick = redexes[rng.gen_range(0..redexes.len())].clone();
        trace.push(pick)?;
    }
    Ok(trace)
}

/// A random core trace (for the simulation checks).
pub fn random_core_trace(
    t: &Term,
    max_len: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Trace, StepError> {
    random_trace(t, Calculus::VscCore, max_len, rng, true)
}
