//! Carousel episode scheduling.
//!
//! Training episodes cycle through the game stages: stage 1 starts a fresh
//! game, later stages start from a recorded stage-initial afterstate. A
//! bounded ring of the last 1000 stage-initial afterstates is kept per stage;
//! hitting an empty set (or running past the last stage) restarts the cycle.
//! This oversamples the late game, which ordinary episodes rarely reach.

use rand::Rng;

use crate::game::{Board, initial_state, spawn_random_tile};

const SET_CAPACITY: usize = 1000;

/// Bounded ring of recent boards, evicting oldest, duplicates allowed.
#[derive(Clone, Debug, Default)]
pub(crate) struct StageRing {
    items: Vec<Board>,
    cursor: usize,
}

impl StageRing {
    fn push(&mut self, b: Board) {
        if self.items.len() < SET_CAPACITY {
            self.items.push(b);
        } else {
            self.items[self.cursor] = b;
            self.cursor = (self.cursor + 1) % SET_CAPACITY;
        }
    }

    fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Board> {
        if self.items.is_empty() {
            None
        } else {
            Some(self.items[rng.random_range(0..self.items.len())])
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub(crate) fn items(&self) -> &[Board] {
        &self.items
    }

    pub(crate) fn cursor(&self) -> usize {
        self.cursor
    }

    pub(crate) fn restore(items: Vec<Board>, cursor: usize) -> StageRing {
        StageRing { items, cursor }
    }
}

/// Episode-start scheduler state. The pointer counts 1..=2^g; pointer 1 means
/// a fresh game, pointer p > 1 draws from the recorded initial afterstates of
/// internal stage p - 1.
pub struct CarouselState {
    stage_count: usize,
    pointer: usize,
    sets: Vec<StageRing>,
}

impl CarouselState {
    pub fn new(stage_bits: u8) -> CarouselState {
        assert!(stage_bits <= 4);
        let stage_count = 1usize << stage_bits;
        CarouselState {
            stage_count,
            pointer: 1,
            sets: vec![StageRing::default(); stage_count],
        }
    }

    pub fn stage_count(&self) -> usize {
        self.stage_count
    }

    pub fn pointer(&self) -> usize {
        self.pointer
    }

    /// Record a stage-initial afterstate: `to_stage` was entered from the
    /// directly preceding stage.
    pub fn record_transition(&mut self, from_stage: usize, to_stage: usize, afterstate: Board) {
        if to_stage == from_stage + 1 && to_stage < self.stage_count {
            self.sets[to_stage].push(afterstate);
        }
    }

    /// Start board for the next episode. Fresh game at pointer 1; otherwise a
    /// uniform draw from the pointed stage's set, with a tile spawned on the
    /// stored afterstate. An unexpectedly empty set falls back to a fresh game.
    pub fn next_start<R: Rng + ?Sized>(&self, rng: &mut R) -> Board {
        if self.pointer > 1 {
            if let Some(after) = self.sets[self.pointer - 1].choose(rng) {
                return spawn_random_tile(after, rng);
            }
        }
        initial_state(rng)
    }

    /// Advance the pointer after an episode, restarting at 1 past the last
    /// stage or when the next stage has no recorded starts.
    pub fn advance(&mut self) {
        self.pointer += 1;
        if self.pointer > self.stage_count || self.sets[self.pointer - 1].is_empty() {
            self.pointer = 1;
        }
    }

    pub(crate) fn sets(&self) -> &[StageRing] {
        &self.sets
    }

    pub(crate) fn restore(stage_bits: u8, pointer: usize, sets: Vec<StageRing>) -> CarouselState {
        let stage_count = 1usize << stage_bits;
        assert_eq!(sets.len(), stage_count);
        assert!(pointer >= 1 && pointer <= stage_count);
        CarouselState { stage_count, pointer, sets }
    }
}
