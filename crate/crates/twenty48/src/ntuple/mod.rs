//! N-tuple network function approximator.
//!
//! A network is a set of m tuples, each a fixed sequence of board cells with
//! a lookup table of weights per game stage. The value of a board is the sum
//! of table entries selected by the tile contents under all eight board
//! symmetries (symmetric sampling): 8m table reads, independent of the
//! parameter count.

mod fold;
mod io;
mod registry;

pub use fold::fold_redundant;
pub use io::{load, read_network, save, write_network};
pub use registry::{architecture, architecture_names};

use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

use crate::game::{Board, BOARD_CELLS};

/// Number of distinct cell encodings (`c` in the index formula).
pub const ALPHABET: usize = 16;
/// Board symmetries sampled per evaluation.
pub const VIEWS: usize = 8;

#[derive(Debug, Error)]
pub enum NtupleError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad network file: {0}")]
    Format(String),
    #[error("network file checksum mismatch")]
    CrcMismatch,
    #[error("unknown architecture {0:?}")]
    UnknownArchitecture(String),
    #[error("invalid tuple shape: {0}")]
    InvalidShape(String),
    #[error("redundant tuple {tuple} is not contained in any retained tuple")]
    NotFoldable { tuple: usize },
}

/// The tuple geometries used by the registry architectures.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ShapeKind {
    /// Straight line of 3.
    Line3,
    /// Straight line of 4.
    Line4,
    /// 2x2 square.
    Square22,
    /// 3x2 rectangle.
    Rect33,
    /// Row of 4 plus adjacent row of 2.
    L42,
    /// Row of 4 plus adjacent row of 3.
    L43,
    /// Rows of 4, 2 and 1, stacked.
    L421,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 7] = [
        ShapeKind::Line3,
        ShapeKind::Line4,
        ShapeKind::Square22,
        ShapeKind::Rect33,
        ShapeKind::L42,
        ShapeKind::L43,
        ShapeKind::L421,
    ];

    pub fn len(self) -> usize {
        self.offsets().len()
    }

    pub fn label(self) -> &'static str {
        match self {
            ShapeKind::Line3 => "3",
            ShapeKind::Line4 => "4",
            ShapeKind::Square22 => "22",
            ShapeKind::Rect33 => "33",
            ShapeKind::L42 => "42",
            ShapeKind::L43 => "43",
            ShapeKind::L421 => "421",
        }
    }

    fn offsets(self) -> &'static [(i8, i8)] {
        match self {
            ShapeKind::Line3 => &[(0, 0), (0, 1), (0, 2)],
            ShapeKind::Line4 => &[(0, 0), (0, 1), (0, 2), (0, 3)],
            ShapeKind::Square22 => &[(0, 0), (0, 1), (1, 0), (1, 1)],
            ShapeKind::Rect33 => &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)],
            ShapeKind::L42 => &[(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1)],
            ShapeKind::L43 => &[(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2)],
            ShapeKind::L421 => &[(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0)],
        }
    }

    /// Identify the shape of a cell set by geometry, up to rotation,
    /// reflection and translation.
    pub fn classify(cells: &[u8]) -> Option<ShapeKind> {
        let coords: Vec<(i8, i8)> = cells.iter().map(|&c| ((c / 4) as i8, (c % 4) as i8)).collect();
        for kind in ShapeKind::ALL {
            if kind.len() != cells.len() {
                continue;
            }
            let template = normalized(kind.offsets());
            for t in 0..8 {
                let moved: Vec<(i8, i8)> = coords
                    .iter()
                    .map(|&(r, c)| match t {
                        0 => (r, c),
                        1 => (c, -r),
                        2 => (-r, -c),
                        3 => (-c, r),
                        4 => (r, -c),
                        5 => (-r, c),
                        6 => (c, r),
                        _ => (-c, -r),
                    })
                    .collect();
                if normalized(&moved) == template {
                    return Some(kind);
                }
            }
        }
        None
    }
}

fn normalized(coords: &[(i8, i8)]) -> Vec<(i8, i8)> {
    let min_r = coords.iter().map(|&(r, _)| r).min().unwrap();
    let min_c = coords.iter().map(|&(_, c)| c).min().unwrap();
    let mut out: Vec<(i8, i8)> = coords.iter().map(|&(r, c)| (r - min_r, c - min_c)).collect();
    out.sort_unstable();
    out
}

/// A placed tuple: an ordered sequence of distinct board cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleShape {
    pub kind: ShapeKind,
    pub cells: Vec<u8>,
}

impl TupleShape {
    pub fn new(cells: Vec<u8>) -> Result<TupleShape, NtupleError> {
        if cells.iter().any(|&c| c as usize >= BOARD_CELLS) {
            return Err(NtupleError::InvalidShape(format!("cell out of range in {cells:?}")));
        }
        let mut seen = [false; BOARD_CELLS];
        for &c in &cells {
            if seen[c as usize] {
                return Err(NtupleError::InvalidShape(format!("duplicate cell in {cells:?}")));
            }
            seen[c as usize] = true;
        }
        let kind = ShapeKind::classify(&cells)
            .ok_or_else(|| NtupleError::InvalidShape(format!("unrecognised geometry {cells:?}")))?;
        Ok(TupleShape { kind, cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Lookup table length for one stage: 16^n.
    pub fn table_len(&self) -> usize {
        ALPHABET.pow(self.len() as u32)
    }
}

/// A tuple plus its role in the architecture. Redundant tuples are geometric
/// subsets of a retained tuple and can be folded into it after training.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleDef {
    pub shape: TupleShape,
    pub redundant: bool,
    pub fold_parent: Option<u16>,
}

/// A named, validated list of tuple placements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Architecture {
    pub name: String,
    pub tuples: Vec<TupleDef>,
}

impl Architecture {
    pub fn new(name: impl Into<String>, tuples: Vec<TupleDef>) -> Result<Architecture, NtupleError> {
        if tuples.is_empty() {
            return Err(NtupleError::InvalidShape("architecture has no tuples".into()));
        }
        for t in &tuples {
            if let Some(p) = t.fold_parent {
                if p as usize >= tuples.len() {
                    return Err(NtupleError::InvalidShape(format!(
                        "fold parent {p} out of range"
                    )));
                }
            }
        }
        Ok(Architecture { name: name.into(), tuples })
    }

    pub fn tuple_count(&self) -> usize {
        self.tuples.len()
    }

    /// Table reads per evaluation: 8 views times m tuples.
    pub fn view_count(&self) -> usize {
        VIEWS * self.tuples.len()
    }

    /// Total weight count for `2^stage_bits` stages. Metadata only — nothing
    /// is allocated.
    pub fn parameter_count(&self, stage_bits: u8) -> u64 {
        let stages = 1u64 << stage_bits;
        stages
            * self
                .tuples
                .iter()
                .map(|t| (ALPHABET as u64).pow(t.shape.len() as u32))
                .sum::<u64>()
    }
}

/// Position of the value the network reads at step `tuple_index` of one view:
/// table `tuple`, flat slot `stage * 16^n + index`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct WeightRef {
    pub tuple: u8,
    pub slot: u32,
}

/// One tuple's weights for all stages, stored as `f32` bit patterns behind
/// relaxed atomics so concurrent trainers can read and write without locks.
/// Readers may observe any previously written word (the optimistic
/// parallelism contract); no stronger consistency is promised.
pub struct WeightTable {
    data: Box<[AtomicU32]>,
}

impl WeightTable {
    pub fn zeroed(len: usize) -> WeightTable {
        let data: Box<[AtomicU32]> = std::iter::repeat_with(|| AtomicU32::new(0))
            .take(len)
            .collect();
        WeightTable { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> f32 {
        f32::from_bits(self.data[i].load(Ordering::Relaxed))
    }

    #[inline]
    pub fn set(&self, i: usize, v: f32) {
        self.data[i].store(v.to_bits(), Ordering::Relaxed);
    }

    /// Racy read-modify-write; lost increments under contention are accepted.
    #[inline]
    pub fn add(&self, i: usize, d: f32) {
        self.set(i, self.get(i) + d);
    }

    /// As [`add`](Self::add) but accumulated in f64 and rounded once on store.
    #[inline]
    pub fn add_f64(&self, i: usize, d: f64) {
        self.set(i, (self.get(i) as f64 + d) as f32);
    }
}

/// The network proper: architecture plus per-tuple, per-stage weight tables.
pub struct NTupleNetwork {
    arch: Architecture,
    stage_bits: u8,
    tables: Vec<WeightTable>,
    stage_len: Vec<usize>,
}

/// The eight board symmetries: the four rotations of the board followed by
/// the four rotations of its mirror image. The identity view is first.
#[inline]
pub fn symmetric_views(board: Board) -> [Board; 8] {
    let r1 = board.rotated90();
    let r2 = r1.rotated90();
    let r3 = r2.rotated90();
    let m = board.mirrored();
    let m1 = m.rotated90();
    let m2 = m1.rotated90();
    let m3 = m2.rotated90();
    [board, r1, r2, r3, m, m1, m2, m3]
}

/// The eight views sorted by packed value. Evaluation sums in this order so
/// that symmetric boards produce bit-identical floating-point sums.
#[inline]
fn canonical_views(board: Board) -> [Board; 8] {
    let mut views = symmetric_views(board);
    views.sort_unstable_by_key(|b| b.raw());
    views
}

/// Index of the pattern a tuple sees on `board`: sum of cell encodings times
/// powers of 16, first cell least significant.
#[inline]
pub fn tuple_index(board: Board, cells: &[u8]) -> usize {
    let mut idx = 0usize;
    for (j, &c) in cells.iter().enumerate() {
        idx |= (board.get(c as usize) as usize) << (4 * j);
    }
    idx
}

/// Game stage of a board: a bit per high tile exponent (>= 16 - g) present on
/// the board. With g = 0 every board is stage 0.
#[inline]
pub fn stage_of(board: Board, stage_bits: u8) -> usize {
    debug_assert!(stage_bits <= 4);
    if stage_bits == 0 {
        return 0;
    }
    let threshold = 16 - stage_bits;
    let mut stage = 0usize;
    for i in 0..BOARD_CELLS {
        let e = board.get(i);
        if e >= threshold {
            stage |= 1 << (e - threshold);
        }
    }
    stage
}

impl NTupleNetwork {
    /// Allocate a zero-initialised network. The exact-0.0 initial value doubles
    /// as the "never accessed" sentinel used by weight promotion.
    pub fn zeroed(arch: Architecture, stage_bits: u8) -> NTupleNetwork {
        assert!(stage_bits <= 4, "stage_bits must be in 0..=4");
        let stages = 1usize << stage_bits;
        let stage_len: Vec<usize> = arch.tuples.iter().map(|t| t.shape.table_len()).collect();
        let tables = stage_len.iter().map(|&l| WeightTable::zeroed(stages * l)).collect();
        NTupleNetwork { arch, stage_bits, tables, stage_len }
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    pub fn stage_bits(&self) -> u8 {
        self.stage_bits
    }

    pub fn stage_count(&self) -> usize {
        1 << self.stage_bits
    }

    pub fn parameter_count(&self) -> u64 {
        self.arch.parameter_count(self.stage_bits)
    }

    /// Table reads per evaluation (8m).
    pub fn view_count(&self) -> usize {
        self.arch.view_count()
    }

    pub fn table(&self, tuple: usize) -> &WeightTable {
        &self.tables[tuple]
    }

    /// Per-stage table length of a tuple (16^n).
    pub fn stage_len(&self, tuple: usize) -> usize {
        self.stage_len[tuple]
    }

    #[inline]
    pub fn value_at(&self, r: WeightRef) -> f32 {
        self.tables[r.tuple as usize].get(r.slot as usize)
    }

    #[inline]
    pub fn set_at(&self, r: WeightRef, v: f32) {
        self.tables[r.tuple as usize].set(r.slot as usize, v);
    }

    #[inline]
    pub fn add_at(&self, r: WeightRef, d: f32) {
        self.tables[r.tuple as usize].add(r.slot as usize, d);
    }

    #[inline]
    pub fn add_f64_at(&self, r: WeightRef, d: f64) {
        self.tables[r.tuple as usize].add_f64(r.slot as usize, d);
    }

    /// Value of a board: the sum over all eight views and all tuples of the
    /// selected table entries, read at the board's stage.
    pub fn evaluate(&self, board: Board) -> f64 {
        let stage = stage_of(board, self.stage_bits);
        let views = canonical_views(board);
        let mut sum = 0.0f64;
        for view in views {
            for (i, t) in self.arch.tuples.iter().enumerate() {
                let idx = tuple_index(view, &t.shape.cells);
                sum += self.tables[i].get(stage * self.stage_len[i] + idx) as f64;
            }
        }
        sum
    }

    /// The exact table slots `evaluate` reads, with multiplicity, in the same
    /// order. Appends 8m entries to `out`.
    pub fn weight_refs(&self, board: Board, out: &mut Vec<WeightRef>) {
        let stage = stage_of(board, self.stage_bits);
        let views = canonical_views(board);
        for view in views {
            for (i, t) in self.arch.tuples.iter().enumerate() {
                let idx = tuple_index(view, &t.shape.cells);
                out.push(WeightRef {
                    tuple: i as u8,
                    slot: (stage * self.stage_len[i] + idx) as u32,
                });
            }
        }
    }

    /// Sum of the weights at previously collected refs. Equals `evaluate` for
    /// the board the refs were taken from.
    pub fn value_of_refs(&self, refs: &[WeightRef]) -> f64 {
        refs.iter().map(|&r| self.value_at(r) as f64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line4_net() -> NTupleNetwork {
        let shape = TupleShape::new(vec![0, 1, 2, 3]).unwrap();
        let arch = Architecture::new(
            "test-line4",
            vec![TupleDef { shape, redundant: false, fold_parent: None }],
        )
        .unwrap();
        NTupleNetwork::zeroed(arch, 0)
    }

    #[test]
    fn tuple_index_of_empty_board_is_zero() {
        for kind in ShapeKind::ALL {
            let cells: Vec<u8> = architecture("42-33-4-22-3")
                .unwrap()
                .tuples
                .iter()
                .find(|t| t.shape.kind == kind)
                .map(|t| t.shape.cells.clone())
                .unwrap_or_else(|| (0..kind.len() as u8).collect());
            assert_eq!(tuple_index(Board::EMPTY, &cells), 0);
        }
    }

    #[test]
    fn tuple_index_matches_hand_evaluation() {
        // Straight 4 over exponents [0, 1, 0, 3]: 0 + 1*16 + 0*256 + 3*4096.
        let b = Board::from_exponents([0, 1, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(tuple_index(b, &[0, 1, 2, 3]), 12_304);
    }

    #[test]
    fn populated_table_lookup_reads_back_stored_weight() {
        // A straight 4-tuple over (empty, 2, 8, empty) reads the table entry
        // for index 0 + 1*16 + 3*256 + 0*4096 and returns what is stored there.
        let net = line4_net();
        let b = Board::from_exponents([0, 1, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let idx = tuple_index(b, &[0, 1, 2, 3]);
        assert_eq!(idx, 16 + 3 * 256);
        net.table(0).set(idx, -2.01);
        assert_eq!(net.table(0).get(idx), -2.01);
    }

    #[test]
    fn views_of_symmetric_board_are_identical() {
        let views = symmetric_views(Board::EMPTY);
        assert!(views.iter().all(|&v| v == Board::EMPTY));
        assert_eq!(views[0], Board::EMPTY);
    }

    #[test]
    fn identity_view_is_first() {
        let b = Board::from_exponents([1, 2, 3, 4, 0, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0, 0]);
        assert_eq!(symmetric_views(b)[0], b);
    }

    #[test]
    fn view_set_is_closed_under_the_group() {
        let b = Board::from_exponents([1, 2, 3, 4, 5, 6, 7, 8, 0, 0, 0, 0, 0, 0, 0, 1]);
        let mut base: Vec<u64> = symmetric_views(b).iter().map(|v| v.raw()).collect();
        base.sort_unstable();
        for view in symmetric_views(b) {
            let mut from_view: Vec<u64> = symmetric_views(view).iter().map(|v| v.raw()).collect();
            from_view.sort_unstable();
            assert_eq!(from_view, base);
        }
    }

    #[test]
    fn stage_of_tracks_high_tiles() {
        let with = |e: &[u8]| {
            let mut cells = [0u8; 16];
            for (i, &x) in e.iter().enumerate() {
                cells[i] = x;
            }
            Board::from_exponents(cells)
        };
        // g = 4: threshold exponent 12 (4096).
        assert_eq!(stage_of(with(&[12]), 4), 1);
        assert_eq!(stage_of(with(&[13]), 4), 2);
        assert_eq!(stage_of(with(&[13, 12]), 4), 3);
        assert_eq!(stage_of(with(&[14]), 4), 4);
        assert_eq!(stage_of(with(&[11, 3, 7]), 4), 0);
        // g = 0: single stage.
        assert_eq!(stage_of(with(&[15, 14, 13]), 0), 0);
        // Stage is geometry-free: same tiles anywhere give the same stage.
        let a = Board::EMPTY.with_cell(0, 13);
        let b = Board::EMPTY.with_cell(9, 13);
        assert_eq!(stage_of(a, 3), stage_of(b, 3));
    }

    #[test]
    fn zero_network_evaluates_to_zero() {
        let net = line4_net();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let b = Board::from_raw(rng.random());
            assert_eq!(net.evaluate(b), 0.0);
        }
    }

    #[test]
    fn single_weight_hit_by_one_view_reads_back() {
        let net = line4_net();
        // Asymmetric board: exactly one view maps the top row onto the tuple
        // with this pattern.
        let b = Board::from_exponents([1, 2, 3, 4, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0, 0, 0]);
        let idx = tuple_index(b, &[0, 1, 2, 3]);
        let mut refs = Vec::new();
        net.weight_refs(b, &mut refs);
        let hits = refs.iter().filter(|r| r.slot as usize == idx).count();
        assert_eq!(hits, 1);
        net.table(0).set(idx, 2.5);
        assert_eq!(net.evaluate(b), 2.5);
    }

    #[test]
    fn weight_refs_sum_equals_evaluate() {
        let net = line4_net();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..net.table(0).len() {
            net.table(0).set(i, (i % 97) as f32 * 0.25 - 12.0);
        }
        let mut refs = Vec::new();
        for _ in 0..200 {
            let b = Board::from_raw(rng.random());
            refs.clear();
            net.weight_refs(b, &mut refs);
            assert_eq!(refs.len(), net.view_count());
            assert_eq!(net.value_of_refs(&refs), net.evaluate(b));
        }
    }

    #[test]
    fn empty_board_refs_all_point_at_slot_zero() {
        let net = line4_net();
        let mut refs = Vec::new();
        net.weight_refs(Board::EMPTY, &mut refs);
        assert_eq!(refs.len(), 8);
        assert!(refs.iter().all(|r| r.slot == 0));
    }

    #[test]
    fn evaluate_is_symmetry_invariant() {
        let net = line4_net();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..net.table(0).len() {
            net.table(0).set(i, rng.random::<f32>() * 2.0 - 1.0);
        }
        for _ in 0..500 {
            let b = Board::from_raw(rng.random());
            let v = net.evaluate(b);
            for view in symmetric_views(b) {
                assert_eq!(net.evaluate(view), v);
            }
        }
    }

    #[test]
    fn registry_parameter_counts() {
        assert_eq!(architecture("42-33").unwrap().parameter_count(0), 67_108_864);
        assert_eq!(architecture("42-33").unwrap().parameter_count(4), 1_073_741_824);
        assert_eq!(architecture("421-43").unwrap().parameter_count(0), 1_342_177_280);
    }

    #[test]
    fn registry_tuple_counts_and_shapes() {
        assert_eq!(architecture("42-33").unwrap().tuple_count(), 4);
        assert_eq!(architecture("42-33-5").unwrap().tuple_count(), 5);
        assert_eq!(architecture("421-43").unwrap().tuple_count(), 5);
        assert_eq!(architecture("42-33-4-22").unwrap().tuple_count(), 10);
        assert_eq!(architecture("42-33-4-22-3").unwrap().tuple_count(), 12);
        assert!(architecture("nonesuch").is_err());

        // Redundant tuples must be direct or symmetric subsets of their parent.
        let arch = architecture("42-33-4-22-3").unwrap();
        for t in &arch.tuples {
            if let Some(p) = t.fold_parent {
                assert!(t.redundant);
                let parent = &arch.tuples[p as usize];
                assert!(!parent.redundant);
                assert!(t.shape.len() < parent.shape.len());
            }
        }
    }

    #[test]
    fn shape_classification_survives_symmetry() {
        // A 42 rotated into a column is still a 42.
        assert_eq!(ShapeKind::classify(&[0, 4, 8, 12, 1, 5]), Some(ShapeKind::L42));
        assert_eq!(ShapeKind::classify(&[0, 1, 2, 3]), Some(ShapeKind::Line4));
        assert_eq!(ShapeKind::classify(&[5, 6, 9, 10]), Some(ShapeKind::Square22));
        // An L-pentomino-ish blob is not one of ours.
        assert_eq!(ShapeKind::classify(&[0, 1, 2, 6]), None);
    }

    proptest! {
        #[test]
        fn prop_index_bijective_for_small_tuples(vals in proptest::collection::vec(0u8..16, 3)) {
            // Distinct cell assignments give distinct indices and cover the range.
            let cells = [2u8, 7, 9];
            let mut b = Board::EMPTY;
            for (j, &v) in vals.iter().enumerate() {
                b = b.with_cell(cells[j] as usize, v);
            }
            let idx = tuple_index(b, &cells);
            prop_assert!(idx < ALPHABET.pow(3) as usize);
            // Decode the index back to the assignment.
            for (j, &v) in vals.iter().enumerate() {
                prop_assert_eq!(((idx >> (4 * j)) & 0xF) as u8, v);
            }
        }

        #[test]
        fn prop_views_are_involutions_and_permutations(bits in any::<u64>()) {
            let b = Board::from_raw(bits);
            // Transpose and mirror are involutions; rot90 has order 4.
            prop_assert_eq!(b.transposed().transposed(), b);
            prop_assert_eq!(b.mirrored().mirrored(), b);
            prop_assert_eq!(b.rotated90().rotated90().rotated90().rotated90(), b);
            // Every view preserves the tile multiset.
            let mut base: Vec<u8> = b.exponents().to_vec();
            base.sort_unstable();
            for v in symmetric_views(b) {
                let mut e: Vec<u8> = v.exponents().to_vec();
                e.sort_unstable();
                prop_assert_eq!(&e, &base);
            }
        }

        #[test]
        fn prop_stage_is_symmetry_invariant(bits in any::<u64>(), g in 0u8..5) {
            let b = Board::from_raw(bits);
            let s = stage_of(b, g);
            for v in symmetric_views(b) {
                prop_assert_eq!(stage_of(v, g), s);
            }
        }
    }
}
