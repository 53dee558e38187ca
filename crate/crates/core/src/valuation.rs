//! Payoff, capacity-weighted prospect values and the value of a project.
//!
//! States of a project are labelled `0..n` with `n ≤ 16`; an event is a
//! bitmask over them. A [`Capacity`] is Choquet's monotone set function,
//! held as an explicit table over all `2^n` events.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest ground set a capacity table may cover.
pub const MAX_STATES: usize = 16;

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A subset of the ground set `{0, .., n-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EventSet(u32);

impl EventSet {
    pub const EMPTY: EventSet = EventSet(0);

    pub fn from_bits(bits: u32) -> Self {
        EventSet(bits)
    }

    pub fn full(states: usize) -> Self {
        EventSet(((1u64 << states) - 1) as u32)
    }

    pub fn from_states(states: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &s in states {
            if s >= MAX_STATES {
                return Err(Error::IndexOutOfRange {
                    index: s,
                    len: MAX_STATES,
                });
            }
            bits |= 1 << s;
        }
        Ok(EventSet(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, state: usize) -> bool {
        state < 32 && self.0 & (1 << state) != 0
    }

    pub fn union(self, other: EventSet) -> EventSet {
        EventSet(self.0 | other.0)
    }

    pub fn intersection(self, other: EventSet) -> EventSet {
        EventSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: EventSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: EventSet) -> bool {
        self.0 & other.0 == 0
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries((0..32).filter(|&s| self.contains(s))).finish()
    }
}

/// Checks that `events` are pairwise disjoint and cover `{0, .., states-1}`.
pub fn is_partition(events: &[EventSet], states: usize) -> bool {
    let mut seen = EventSet::EMPTY;
    for &e in events {
        if !seen.is_disjoint(e) {
            return false;
        }
        seen = seen.union(e);
    }
    seen == EventSet::full(states)
}

/// A monotone set function with `W(∅) = 0` and `W(S) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Capacity {
    states: usize,
    weights: Vec<f64>,
}

impl Capacity {
    /// Builds a capacity from a table indexed by event bitmask.
    pub fn from_table(states: usize, weights: Vec<f64>) -> Result<Self> {
        if states == 0 || states > MAX_STATES {
            return Err(Error::InvalidCapacity("ground set must hold 1 to 16 states"));
        }
        if weights.len() != 1 << states {
            return Err(Error::DimensionMismatch {
                expected: 1 << states,
                found: weights.len(),
            });
        }
        let capacity = Capacity { states, weights };
        capacity.validate()?;
        Ok(capacity)
    }

    pub fn from_fn(states: usize, weight: impl Fn(EventSet) -> f64) -> Result<Self> {
        if states == 0 || states > MAX_STATES {
            return Err(Error::InvalidCapacity("ground set must hold 1 to 16 states"));
        }
        let weights = (0..1u32 << states).map(|b| weight(EventSet(b))).collect();
        Self::from_table(states, weights)
    }

    /// The probability measure with the given atom masses.
    pub fn additive(probabilities: &[f64]) -> Result<Self> {
        Self::from_fn(probabilities.len(), |e| {
            probabilities
                .iter()
                .enumerate()
                .filter(|(s, _)| e.contains(*s))
                .map(|(_, p)| p)
                .sum()
        })
    }

    fn validate(&self) -> Result<()> {
        if self
            .weights
            .iter()
            .any(|w| !w.is_finite() || *w < -WEIGHT_TOLERANCE || *w > 1.0 + WEIGHT_TOLERANCE)
        {
            return Err(Error::InvalidCapacity("weights must lie in [0, 1]"));
        }
        if self.weights[0].abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidCapacity("weight of the empty event must be 0"));
        }
        if (self.weights[self.weights.len() - 1] - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidCapacity("weight of the full event must be 1"));
        }
        // Adding one state at a time covers every inclusion A ⊆ B.
        for bits in 0..self.weights.len() {
            for s in 0..self.states {
                let bigger = bits | (1 << s);
                if bigger != bits && self.weights[bits] > self.weights[bigger] + WEIGHT_TOLERANCE {
                    return Err(Error::InvalidCapacity("capacity is not monotone"));
                }
            }
        }
        Ok(())
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn full(&self) -> EventSet {
        EventSet::full(self.states)
    }

    pub fn weight(&self, event: EventSet) -> f64 {
        self.weights[event.intersection(self.full()).0 as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeKind {
    /// Outcomes of the marketed functions `F`.
    Marketing,
    /// Outcomes of the realized functions `F_R`; may be negative.
    Realized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeSet {
    pub kind: OutcomeKind,
    pub outcomes: Vec<f64>,
}

impl OutcomeSet {
    pub fn new(kind: OutcomeKind, outcomes: Vec<f64>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::Domain("outcome list must not be empty"));
        }
        if outcomes.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("outcomes must be finite"));
        }
        Ok(Self { kind, outcomes })
    }

    pub fn realized(outcomes: Vec<f64>) -> Result<Self> {
        Self::new(OutcomeKind::Realized, outcomes)
    }

    pub fn marketing(outcomes: Vec<f64>) -> Result<Self> {
        Self::new(OutcomeKind::Marketing, outcomes)
    }

    pub fn sum(&self) -> f64 {
        self.outcomes.iter().sum()
    }
}

/// Departments and per-function event partitions of one project.
#[derive(Debug, Clone, PartialEq)]
pub struct OrgStructure {
    pub states: usize,
    pub departments: Vec<EventSet>,
    /// `function_events[i]` is the partition `(A_{i,j})_j` of function `i`.
    pub function_events: Vec<Vec<EventSet>>,
}

impl OrgStructure {
    pub fn new(states: usize, departments: Vec<EventSet>, function_events: Vec<Vec<EventSet>>) -> Result<Self> {
        if states == 0 || states > MAX_STATES {
            return Err(Error::Domain("ground set must hold 1 to 16 states"));
        }
        if !is_partition(&departments, states) {
            return Err(Error::NotAPartition);
        }
        if function_events.iter().any(|events| !is_partition(events, states)) {
            return Err(Error::NotAPartition);
        }
        Ok(Self {
            states,
            departments,
            function_events,
        })
    }

    /// `A_i^α = ∪_j (A_{i,j} ∩ D_α)`.
    fn department_share(&self, function: usize, department: EventSet) -> EventSet {
        self.function_events[function]
            .iter()
            .fold(EventSet::EMPTY, |acc, &a| acc.union(a.intersection(department)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Additivity {
    SubAdditive,
    Additive,
    SuperAdditive,
    Mixed,
}

/// Linear value parameters: one complexity for gains, a smaller one for losses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueParams {
    pub rho: f64,
    pub c_gain: f64,
    pub c_loss: f64,
}

impl ValueParams {
    pub fn new(rho: f64, c_gain: f64, c_loss: f64) -> Result<Self> {
        let params = Self { rho, c_gain, c_loss };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !(self.c_gain > 0.0) || !(self.c_loss > 0.0) {
            return Err(Error::Domain("time cost and complexities must be positive"));
        }
        if self.c_loss > self.c_gain {
            return Err(Error::Domain("loss complexity must not exceed gain complexity"));
        }
        Ok(())
    }
}

/// `P = (1/C) ΣE_i`.
pub fn payoff(outcomes: &OutcomeSet, capability: f64) -> Result<f64> {
    if !(capability > 0.0) {
        return Err(Error::Domain("capability must be positive"));
    }
    Ok(outcomes.sum() / capability)
}

/// `V(g) = Σ_j π_j v(ε_j)` with `π_j = W(A_j)`.
pub fn prospect_value(outcomes: &[(f64, EventSet)], capacity: &Capacity, value: impl Fn(f64) -> f64) -> Result<f64> {
    let events: Vec<EventSet> = outcomes.iter().map(|&(_, a)| a).collect();
    if !is_partition(&events, capacity.states()) {
        return Err(Error::NotAPartition);
    }
    Ok(outcomes
        .iter()
        .map(|&(eps, event)| capacity.weight(event) * value(eps))
        .sum())
}

fn check_ground_set(org: &OrgStructure, capacity: &Capacity) -> Result<()> {
    if org.states != capacity.states() {
        return Err(Error::DimensionMismatch {
            expected: capacity.states(),
            found: org.states,
        });
    }
    Ok(())
}

/// Organizational cumulative capacity `C_org = Σ_i Σ_α Σ_j W(A_{i,j} ∩ D_α)`.
pub fn org_capacity(org: &OrgStructure, capacity: &Capacity) -> Result<f64> {
    check_ground_set(org, capacity)?;
    let mut total = 0.0;
    for events in &org.function_events {
        for &department in &org.departments {
            for &event in events {
                total += capacity.weight(event.intersection(department));
            }
        }
    }
    Ok(total)
}

/// Compares the capacity of each disjoint union with the sum over its parts,
/// first for the cells of every department share `A_i^α`, then for the shares
/// making up each function.
pub fn additivity_check(org: &OrgStructure, capacity: &Capacity) -> Result<Additivity> {
    check_ground_set(org, capacity)?;
    let (mut below, mut above) = (false, false);
    let mut compare = |union: f64, parts: f64| {
        let gap = union - parts;
        if gap < -WEIGHT_TOLERANCE {
            below = true;
        } else if gap > WEIGHT_TOLERANCE {
            above = true;
        }
    };
    for (i, events) in org.function_events.iter().enumerate() {
        let mut shares = 0.0;
        let mut covered = EventSet::EMPTY;
        for &department in &org.departments {
            let share = org.department_share(i, department);
            let cells: f64 = events
                .iter()
                .map(|&a| capacity.weight(a.intersection(department)))
                .sum();
            compare(capacity.weight(share), cells);
            shares += capacity.weight(share);
            covered = covered.union(share);
        }
        compare(capacity.weight(covered), shares);
    }
    Ok(match (below, above) {
        (false, false) => Additivity::Additive,
        (true, false) => Additivity::SubAdditive,
        (false, true) => Additivity::SuperAdditive,
        (true, true) => Additivity::Mixed,
    })
}

/// Profitability complexity `c = ⌈c_org / c_tech⌉`.
pub fn profitability_complexity(c_org: f64, c_tech: u64) -> Result<u64> {
    if c_tech == 0 {
        return Err(Error::Domain("technical component count must be at least 1"));
    }
    if !(c_org >= 0.0) || !c_org.is_finite() {
        return Err(Error::Domain("organizational capacity must be finite and non-negative"));
    }
    Ok(libm::ceil(c_org / c_tech as f64) as u64)
}

/// `v(E) = E ρ / c`, with the steeper loss complexity for `E < 0`.
pub fn outcome_value(outcome: f64, params: &ValueParams) -> f64 {
    if outcome >= 0.0 {
        outcome * params.rho / params.c_gain
    } else {
        outcome * params.rho / params.c_loss
    }
}

/// Value produced by a project: `Σ_i v(E_i^R)`.
pub fn project_value(outcomes: &OutcomeSet, params: &ValueParams) -> Result<f64> {
    params.validate()?;
    if outcomes.kind != OutcomeKind::Realized {
        return Err(Error::Domain("project value is defined on realized outcomes"));
    }
    Ok(outcomes.outcomes.iter().map(|&e| outcome_value(e, params)).sum())
}
