//! Afterstate value learning.
//!
//! The learner plays greedily with respect to the current value function and
//! backs the observed one-step errors into the n-tuple tables. Three update
//! rules are supported — plain temporal difference, temporal coherence
//! (per-weight adaptive rates from accumulated error sign agreement) and
//! Autostep — each in a standard and a delayed form. Delayed forms write each
//! visited state's weights exactly once, h steps late, with the decayed
//! cumulative error.

mod carousel;
mod learner;

pub use carousel::CarouselState;
pub use learner::{EpisodeStats, Learner, UpdateRecorder};

use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use thiserror::Error;

use crate::game::{Board, Move, slide};
use crate::ntuple::{Architecture, NTupleNetwork};

#[derive(Debug, Error, PartialEq)]
pub enum LearnError {
    #[error("lambda must be in [0, 1): got {0}")]
    InvalidLambda(f64),
    #[error("autostep is defined for lambda = 0 only")]
    AutostepNeedsLambdaZero,
    #[error("{name} must be in [0, 1]: got {value}")]
    InvalidRate { name: &'static str, value: f64 },
    #[error("stage exponent must be in 0..=4: got {0}")]
    InvalidStageBits(u8),
    #[error("config stage exponent {config} does not match network {network}")]
    StageMismatch { config: u8, network: u8 },
}

/// Which update rule backs the prediction errors into the tables.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum RuleKind {
    Td,
    Tc,
    Autostep,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Td => "td",
            RuleKind::Tc => "tc",
            RuleKind::Autostep => "autostep",
        }
    }
}

/// Update horizon: errors are propagated to the last h+1 states, keeping the
/// terms with decay weight at least 0.1.
pub fn horizon(lambda: f64) -> Result<usize, LearnError> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(LearnError::InvalidLambda(lambda));
    }
    if lambda == 0.0 {
        return Ok(0);
    }
    let h = (0.1f64.ln() / lambda.ln()).ceil() - 1.0;
    Ok(h.max(0.0) as usize)
}

/// A fully specified learning setup.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct LearningConfig {
    pub rule: RuleKind,
    pub delayed: bool,
    pub lambda: f64,
    /// TD learning rate. 1.0 nullifies the one-step error on states whose
    /// weights are not shared.
    pub alpha: f64,
    /// TC meta learning rate.
    pub beta: f64,
    /// Autostep meta learning rate.
    pub mu: f64,
    /// Autostep normalizer decay (applied as a direct multiplier).
    pub tau: f64,
    /// Autostep initial per-weight step size.
    pub alpha_init: f64,
    /// Stage exponent g: the network has 2^g stages.
    pub stage_bits: u8,
    pub weight_promotion: bool,
    pub carousel: bool,
}

impl Default for LearningConfig {
    fn default() -> Self {
        LearningConfig {
            rule: RuleKind::Tc,
            delayed: true,
            lambda: 0.5,
            alpha: 1.0,
            beta: 1.0,
            mu: 0.1,
            tau: 1e-4,
            alpha_init: 1.0,
            stage_bits: 0,
            weight_promotion: false,
            carousel: false,
        }
    }
}

impl LearningConfig {
    pub fn validate(&self) -> Result<(), LearnError> {
        horizon(self.lambda)?;
        if self.rule == RuleKind::Autostep && self.lambda != 0.0 {
            return Err(LearnError::AutostepNeedsLambdaZero);
        }
        for (name, value) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(LearnError::InvalidRate { name, value });
            }
        }
        if self.mu < 0.0 {
            return Err(LearnError::InvalidRate { name: "mu", value: self.mu });
        }
        if self.tau < 0.0 {
            return Err(LearnError::InvalidRate { name: "tau", value: self.tau });
        }
        if self.alpha_init <= 0.0 || self.alpha_init > 1.0 {
            return Err(LearnError::InvalidRate { name: "alpha_init", value: self.alpha_init });
        }
        if self.stage_bits > 4 {
            return Err(LearnError::InvalidStageBits(self.stage_bits));
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        horizon(self.lambda).expect("validated lambda")
    }
}

/// Greedy action evaluation: the move's reward plus the value of its
/// afterstate. Returns `None` for illegal moves.
pub fn evaluate_action(
    net: &NTupleNetwork,
    board: Board,
    mv: Move,
) -> Option<(f64, Board, u32)> {
    let out = slide(board, mv);
    if !out.legal {
        return None;
    }
    let value = out.reward as f64 + net.evaluate(out.afterstate);
    Some((value, out.afterstate, out.reward))
}

/// Greedy move: the first maximiser of `evaluate_action` in the fixed order
/// up, right, down, left. `None` on terminal boards.
pub fn greedy_move(net: &NTupleNetwork, board: Board) -> Option<(Move, f64, Board, u32)> {
    let mut best: Option<(Move, f64, Board, u32)> = None;
    for mv in Move::ALL {
        if let Some((value, after, reward)) = evaluate_action(net, board, mv) {
            if best.map_or(true, |(_, bv, _, _)| value > bv) {
                best = Some((mv, value, after, reward));
            }
        }
    }
    best
}

/// Per-slot (E, A) error accumulators for temporal coherence, packed into one
/// atomic word so both halves are read and written together.
pub struct PairTable {
    data: Box<[AtomicU64]>,
}

impl PairTable {
    fn zeroed(len: usize) -> PairTable {
        PairTable {
            data: std::iter::repeat_with(|| AtomicU64::new(0)).take(len).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> (f32, f32) {
        let w = self.data[i].load(Ordering::Relaxed);
        (f32::from_bits(w as u32), f32::from_bits((w >> 32) as u32))
    }

    #[inline]
    pub fn set(&self, i: usize, e: f32, a: f32) {
        let w = (e.to_bits() as u64) | ((a.to_bits() as u64) << 32);
        self.data[i].store(w, Ordering::Relaxed);
    }
}

/// Per-slot (step, trace, normalizer) state for Autostep.
pub struct TripleTable {
    data: Box<[AtomicU32]>,
}

impl TripleTable {
    fn filled(len: usize, step_init: f32) -> TripleTable {
        let bits = step_init.to_bits();
        let mut data = Vec::with_capacity(len * 3);
        for _ in 0..len {
            data.push(AtomicU32::new(bits));
            data.push(AtomicU32::new(0));
            data.push(AtomicU32::new(0));
        }
        TripleTable { data: data.into_boxed_slice() }
    }

    pub fn len(&self) -> usize {
        self.data.len() / 3
    }

    #[inline]
    pub fn get(&self, i: usize) -> (f32, f32, f32) {
        (
            f32::from_bits(self.data[3 * i].load(Ordering::Relaxed)),
            f32::from_bits(self.data[3 * i + 1].load(Ordering::Relaxed)),
            f32::from_bits(self.data[3 * i + 2].load(Ordering::Relaxed)),
        )
    }

    #[inline]
    pub fn set(&self, i: usize, step: f32, trace: f32, norm: f32) {
        self.data[3 * i].store(step.to_bits(), Ordering::Relaxed);
        self.data[3 * i + 1].store(trace.to_bits(), Ordering::Relaxed);
        self.data[3 * i + 2].store(norm.to_bits(), Ordering::Relaxed);
    }
}

/// Auxiliary per-weight state of the configured rule, congruent to the value
/// tables. Shared by workers under the same optimistic contract as the
/// network itself.
pub enum AuxTables {
    None,
    Tc(Vec<PairTable>),
    Autostep(Vec<TripleTable>),
}

impl AuxTables {
    pub fn for_config(cfg: &LearningConfig, arch: &Architecture) -> AuxTables {
        let stages = 1usize << cfg.stage_bits;
        match cfg.rule {
            RuleKind::Td => AuxTables::None,
            RuleKind::Tc => AuxTables::Tc(
                arch.tuples
                    .iter()
                    .map(|t| PairTable::zeroed(stages * t.shape.table_len()))
                    .collect(),
            ),
            RuleKind::Autostep => AuxTables::Autostep(
                arch.tuples
                    .iter()
                    .map(|t| TripleTable::filled(stages * t.shape.table_len(), cfg.alpha_init as f32))
                    .collect(),
            ),
        }
    }

    pub fn tc(&self) -> Option<&[PairTable]> {
        match self {
            AuxTables::Tc(t) => Some(t),
            _ => None,
        }
    }

    pub fn autostep(&self) -> Option<&[TripleTable]> {
        match self {
            AuxTables::Autostep(t) => Some(t),
            _ => None,
        }
    }
}
