//! The per-worker episode learner.
//!
//! One `Learner` owns an episode ring buffer of the last h+1 afterstates and
//! drives the configured update rule against a shared network. Several
//! learners may run against the same tables concurrently without locks; torn
//! or lost increments under races are tolerated by design. A single learner
//! with a fixed-seed RNG is bit-reproducible.
//!
//! Update timing:
//!
//! * standard TD scatters each error over the whole horizon window as it
//!   arrives (h+1 writes per visited state);
//! * delayed TD stores errors and writes each state once with the decayed
//!   cumulative error once it falls out of the window;
//! * TC (both forms) accumulates the decayed error per buffered state and
//!   writes V/E/A once per state, so the standard and delayed forms apply
//!   identical per-weight increments on a replayed error sequence;
//! * Autostep runs at lambda = 0, updating the current state's weights with
//!   per-weight step sizes maintained by the published recurrence.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::Rng;

use crate::game::{Board, Move, slide, spawn_random_tile};
use crate::ntuple::{NTupleNetwork, WeightRef, stage_of};

use super::{AuxTables, LearnError, LearningConfig, RuleKind, CarouselState};

/// Outcome summary of one learning episode.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct EpisodeStats {
    pub score: u64,
    pub moves: u32,
    /// Largest tile value reached (e.g. 2048), 0 on an immediate terminal.
    pub max_tile: u32,
    /// Number of stage-increasing transitions observed.
    pub stage_transitions: u32,
}

/// Test support: accumulates, in f64 and per weight slot, every increment the
/// rule emits, before f32 quantisation. Each entry holds (sum, sum of
/// absolute values); the second is the natural scale for relative comparison
/// of two variants whose signed sums may cancel. Used by the
/// replay-equivalence harness to compare standard and delayed variants.
#[derive(Default)]
pub struct UpdateRecorder {
    pub v: HashMap<(u8, u32), (f64, f64)>,
    pub e: HashMap<(u8, u32), (f64, f64)>,
    pub a: HashMap<(u8, u32), (f64, f64)>,
}

impl UpdateRecorder {
    fn add(map: &mut HashMap<(u8, u32), (f64, f64)>, r: WeightRef, inc: f64) {
        let entry = map.entry((r.tuple, r.slot)).or_insert((0.0, 0.0));
        entry.0 += inc;
        entry.1 += inc.abs();
    }

    /// Largest per-weight deviation between two recordings, relative to the
    /// weight's absolute increment mass.
    pub fn max_relative_deviation(
        lhs: &HashMap<(u8, u32), (f64, f64)>,
        rhs: &HashMap<(u8, u32), (f64, f64)>,
    ) -> f64 {
        assert_eq!(lhs.len(), rhs.len(), "different weight sets were touched");
        let mut worst = 0.0f64;
        for (k, &(a, am)) in lhs {
            let &(b, bm) = rhs.get(k).expect("weight touched by one variant only");
            let scale = am.max(bm).max(1e-12);
            worst = worst.max((a - b).abs() / scale);
        }
        worst
    }
}

struct Slot {
    board: Board,
    refs: Vec<WeightRef>,
    /// This state's own prediction error (delayed forms).
    delta: f64,
    /// Decayed error accumulated so far (TC forms).
    pending: f64,
    applied: bool,
}

impl Slot {
    fn empty() -> Slot {
        Slot { board: Board::EMPTY, refs: Vec::new(), delta: 0.0, pending: 0.0, applied: false }
    }
}

pub struct Learner<'a> {
    net: &'a NTupleNetwork,
    aux: &'a AuxTables,
    cfg: LearningConfig,
    h: usize,
    lambda_pow: Vec<f64>,
    inv_views: f64,
    // Ring of the last h+1 afterstates; `head` is the newest occupied slot.
    ring: Vec<Slot>,
    ring_len: usize,
    head: usize,
    // Scratch: candidate refs per move, reused across steps.
    scratch: [Vec<WeightRef>; 4],
    autostep_scratch: Vec<(f64, f64, f64)>,
    recorder: Option<UpdateRecorder>,
}

impl<'a> Learner<'a> {
    pub fn new(
        net: &'a NTupleNetwork,
        aux: &'a AuxTables,
        cfg: LearningConfig,
    ) -> Result<Learner<'a>, LearnError> {
        cfg.validate()?;
        if cfg.stage_bits != net.stage_bits() {
            return Err(LearnError::StageMismatch {
                config: cfg.stage_bits,
                network: net.stage_bits(),
            });
        }
        let h = cfg.horizon();
        let lambda_pow: Vec<f64> = (0..=h as u32).map(|k| cfg.lambda.powi(k as i32)).collect();
        let cap = h + 1;
        Ok(Learner {
            net,
            aux,
            cfg,
            h,
            lambda_pow,
            inv_views: 1.0 / net.view_count() as f64,
            ring: (0..cap).map(|_| Slot::empty()).collect(),
            ring_len: 0,
            head: cap - 1,
            scratch: Default::default(),
            autostep_scratch: Vec::new(),
            recorder: None,
        })
    }

    pub fn config(&self) -> &LearningConfig {
        &self.cfg
    }

    pub fn set_recorder(&mut self, rec: UpdateRecorder) {
        self.recorder = Some(rec);
    }

    pub fn take_recorder(&mut self) -> Option<UpdateRecorder> {
        self.recorder.take()
    }

    /// Ring slot index of the state `age` steps back (0 = newest).
    #[inline]
    fn slot_index(&self, age: usize) -> usize {
        debug_assert!(age < self.ring_len);
        (self.head + self.ring.len() - age) % self.ring.len()
    }

    fn begin_episode(&mut self) {
        self.ring_len = 0;
        self.head = self.ring.len() - 1;
    }

    /// Value of an afterstate through previously collected refs, applying the
    /// weight-promotion hook first when enabled: a stage-σ slot still at the
    /// exact 0.0 sentinel is initialised from the same slot of stage σ-1.
    fn promoted_value(&self, refs: &[WeightRef]) -> f64 {
        if self.cfg.weight_promotion {
            for &r in refs {
                let stage_len = self.net.stage_len(r.tuple as usize) as u32;
                if r.slot >= stage_len && self.net.value_at(r) == 0.0 {
                    let below = WeightRef { tuple: r.tuple, slot: r.slot - stage_len };
                    self.net.set_at(r, self.net.value_at(below));
                }
            }
        }
        self.net.value_of_refs(refs)
    }

    /// Push the chosen afterstate (the move index selects the scratch buffer
    /// holding its refs). The evicted slot must already have been applied.
    fn push_state(&mut self, board: Board, scratch_idx: usize) {
        let cap = self.ring.len();
        self.head = (self.head + 1) % cap;
        if self.ring_len < cap {
            self.ring_len += 1;
        }
        let slot = &mut self.ring[self.head];
        slot.board = board;
        std::mem::swap(&mut slot.refs, &mut self.scratch[scratch_idx]);
        slot.delta = 0.0;
        slot.pending = 0.0;
        slot.applied = false;
    }

    /// Dispatch the prediction error of the newest buffered afterstate.
    fn feed(&mut self, delta: f64) {
        match (self.cfg.rule, self.cfg.delayed) {
            (RuleKind::Td, false) => {
                // Scatter over every state in the window as the error arrives.
                let base = self.cfg.alpha * self.inv_views * delta;
                for age in 0..self.ring_len {
                    let idx = self.slot_index(age);
                    let inc = base * self.lambda_pow[age];
                    let slot = &self.ring[idx];
                    if let Some(rec) = &mut self.recorder {
                        for &r in &slot.refs {
                            UpdateRecorder::add(&mut rec.v, r, inc);
                        }
                    }
                    for &r in &slot.refs {
                        self.net.add_f64_at(r, inc);
                    }
                }
            }
            (RuleKind::Td, true) => {
                self.ring[self.head].delta = delta;
                if self.ring_len == self.ring.len() {
                    let oldest = self.slot_index(self.ring_len - 1);
                    if !self.ring[oldest].applied {
                        let cum = self.cumulative_delta(self.ring_len - 1);
                        self.apply_td_lump(oldest, cum);
                    }
                }
            }
            (RuleKind::Tc, _) => {
                self.ring[self.head].delta = delta;
                for age in 0..self.ring_len {
                    let idx = self.slot_index(age);
                    self.ring[idx].pending += delta * self.lambda_pow[age];
                }
                if self.ring_len == self.ring.len() {
                    let oldest = self.slot_index(self.ring_len - 1);
                    if !self.ring[oldest].applied {
                        let cum = if self.cfg.delayed {
                            self.cumulative_delta(self.ring_len - 1)
                        } else {
                            self.ring[oldest].pending
                        };
                        self.apply_tc_lump(oldest, cum);
                    }
                }
            }
            (RuleKind::Autostep, _) => {
                let head = self.head;
                self.apply_autostep(head, delta);
            }
        }
    }

    /// Decayed cumulative error for the state `age` steps back, from the
    /// stored per-state errors: sum over j of delta[age - j] * lambda^j.
    fn cumulative_delta(&self, age: usize) -> f64 {
        let mut cum = 0.0;
        for j in 0..=age {
            cum += self.ring[self.slot_index(age - j)].delta * self.lambda_pow[j];
        }
        cum
    }

    /// Episode end: apply the trailing states with their truncated sums.
    fn finish_episode(&mut self) {
        match (self.cfg.rule, self.cfg.delayed) {
            (RuleKind::Td, false) | (RuleKind::Autostep, _) => {}
            (RuleKind::Td, true) => {
                for age in (0..self.ring_len).rev() {
                    let idx = self.slot_index(age);
                    if !self.ring[idx].applied {
                        let cum = self.cumulative_delta(age);
                        self.apply_td_lump(idx, cum);
                    }
                }
            }
            (RuleKind::Tc, _) => {
                for age in (0..self.ring_len).rev() {
                    let idx = self.slot_index(age);
                    if !self.ring[idx].applied {
                        let cum = if self.cfg.delayed {
                            self.cumulative_delta(age)
                        } else {
                            self.ring[idx].pending
                        };
                        self.apply_tc_lump(idx, cum);
                    }
                }
            }
        }
        self.ring_len = 0;
    }

    fn apply_td_lump(&mut self, idx: usize, cum: f64) {
        let inc = self.cfg.alpha * self.inv_views * cum;
        let slot = &mut self.ring[idx];
        slot.applied = true;
        if let Some(rec) = &mut self.recorder {
            for &r in &slot.refs {
                UpdateRecorder::add(&mut rec.v, r, inc);
            }
        }
        for &r in &slot.refs {
            self.net.add_f64_at(r, inc);
        }
    }

    fn apply_tc_lump(&mut self, idx: usize, cum: f64) {
        let tables = self.aux.tc().expect("TC aux tables");
        let scale = self.cfg.beta * self.inv_views;
        let slot = &mut self.ring[idx];
        slot.applied = true;
        for &r in &slot.refs {
            let table = &tables[r.tuple as usize];
            let (e, a) = table.get(r.slot as usize);
            let rate = if a != 0.0 { (e.abs() / a) as f64 } else { 1.0 };
            let inc = scale * rate * cum;
            if let Some(rec) = &mut self.recorder {
                UpdateRecorder::add(&mut rec.v, r, inc);
                UpdateRecorder::add(&mut rec.e, r, cum);
                UpdateRecorder::add(&mut rec.a, r, cum.abs());
            }
            self.net.add_f64_at(r, inc);
            table.set(
                r.slot as usize,
                (e as f64 + cum) as f32,
                (a as f64 + cum.abs()) as f32,
            );
        }
    }

    /// One Autostep example: the active slots form a binary feature vector.
    /// Normalizer and step-size updates use the pre-example state, then the
    /// combined step is bounded and the weights and traces move.
    fn apply_autostep(&mut self, idx: usize, delta: f64) {
        let tables = self.aux.autostep().expect("Autostep aux tables");
        let (mu, tau) = (self.cfg.mu, self.cfg.tau);
        let slot = &mut self.ring[idx];
        slot.applied = true;

        self.autostep_scratch.clear();
        let mut step_sum = 0.0f64;
        for &r in &slot.refs {
            let (step, trace, norm) = tables[r.tuple as usize].get(r.slot as usize);
            let corr = delta * trace as f64;
            let norm2 = corr
                .abs()
                .max(norm as f64 + tau * step as f64 * (corr.abs() - norm as f64));
            let mut step2 = step as f64;
            if norm2 != 0.0 {
                step2 *= (mu * corr / norm2).exp();
            }
            step_sum += step2;
            self.autostep_scratch.push((step2, trace as f64, norm2));
        }

        let bound = step_sum.max(1.0);
        for (&r, &(step2, trace, norm2)) in slot.refs.iter().zip(&self.autostep_scratch) {
            let step = step2 / bound;
            let inc = step * delta;
            if let Some(rec) = &mut self.recorder {
                UpdateRecorder::add(&mut rec.v, r, inc);
            }
            self.net.add_f64_at(r, inc);
            let trace2 = trace * (1.0 - step) + inc;
            tables[r.tuple as usize].set(r.slot as usize, step as f32, trace2 as f32, norm2 as f32);
        }
    }

    /// Play one greedy episode from `start`, learning along the way. Stage
    /// transitions are recorded into `carousel` when episode shaping is on.
    pub fn learn_from_episode<R: Rng + ?Sized>(
        &mut self,
        start: Board,
        rng: &mut R,
        carousel: Option<&Mutex<CarouselState>>,
    ) -> EpisodeStats {
        self.begin_episode();
        let mut stats = EpisodeStats::default();
        let mut state = start;
        let mut prev_stage = stage_of(state, self.cfg.stage_bits);

        loop {
            // Greedy selection; candidate values go through the promotion hook.
            let mut best: Option<(usize, f64, Board, u32)> = None;
            for (mi, mv) in Move::ALL.iter().enumerate() {
                let out = slide(state, *mv);
                if !out.legal {
                    continue;
                }
                self.scratch[mi].clear();
                let mut refs = std::mem::take(&mut self.scratch[mi]);
                self.net.weight_refs(out.afterstate, &mut refs);
                let value = out.reward as f64 + self.promoted_value(&refs);
                self.scratch[mi] = refs;
                if best.map_or(true, |(_, bv, _, _)| value > bv) {
                    best = Some((mi, value, out.afterstate, out.reward));
                }
            }
            let Some((mi, _, afterstate, reward)) = best else {
                break; // terminal state
            };

            // Error for the previous afterstate, from fresh table reads.
            if self.ring_len > 0 {
                let prev = self.net.value_of_refs(&self.ring[self.head].refs);
                let next = self.net.value_of_refs(&self.scratch[mi]);
                self.feed(reward as f64 + next - prev);
            }
            self.push_state(afterstate, mi);

            stats.score += reward as u64;
            stats.moves += 1;
            stats.max_tile = stats.max_tile.max(afterstate.max_tile());
            let new_stage = stage_of(afterstate, self.cfg.stage_bits);
            if new_stage > prev_stage {
                stats.stage_transitions += 1;
                if self.cfg.carousel {
                    if let Some(c) = carousel {
                        c.lock().unwrap().record_transition(prev_stage, new_stage, afterstate);
                    }
                }
            }
            prev_stage = new_stage;

            state = spawn_random_tile(afterstate, rng);
        }

        // Terminal update: the remaining return is zero.
        if self.ring_len > 0 {
            let prev = self.net.value_of_refs(&self.ring[self.head].refs);
            self.feed(-prev);
        }
        self.finish_episode();
        stats
    }

    /// Test support: drive the update engine with a fixed sequence of
    /// (afterstate, error) pairs, exactly as `learn_from_episode` would.
    pub fn replay_episode(&mut self, steps: &[(Board, f64)]) {
        self.begin_episode();
        for &(board, delta) in steps {
            self.scratch[0].clear();
            let mut refs = std::mem::take(&mut self.scratch[0]);
            self.net.weight_refs(board, &mut refs);
            self.scratch[0] = refs;
            self.push_state(board, 0);
            self.feed(delta);
        }
        self.finish_episode();
    }
}
