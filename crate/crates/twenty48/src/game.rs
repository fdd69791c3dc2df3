//! Exact 2048 game mechanics on a packed 64-bit board.
//!
//! A board is 16 cells, row-major, each holding a tile *exponent* in
//! `[0, 15]`: an empty square is encoded as 0, a square containing value `v`
//! as `log2(v)` (so a 128-tile is stored as 7). Four bits per cell pack the
//! whole board into one `u64`, which makes copies free and lets row moves be
//! table lookups.

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use thiserror::Error;

/// Number of cells on the board.
pub const BOARD_CELLS: usize = 16;
/// Largest representable tile exponent (32768). Merges saturate here.
pub const MAX_EXPONENT: u8 = 15;
/// Probability that a spawned tile is a 4 (exponent 2) rather than a 2.
pub const FOUR_TILE_PROB: f64 = 0.1;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("board text must have 16 tile values, got {0}")]
    CellCount(usize),
    #[error("invalid tile value {0}: must be 0 or a power of two <= 32768")]
    BadTile(u64),
}

/// A 4x4 board packed 4 bits per cell. Cell `4*row + col`, low nibble first.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Board(u64);

impl Board {
    pub const EMPTY: Board = Board(0);

    #[inline]
    pub fn from_raw(bits: u64) -> Board {
        Board(bits)
    }

    #[inline]
    pub fn raw(self) -> u64 {
        self.0
    }

    /// Tile exponent at `cell` (0..16, row-major).
    #[inline]
    pub fn get(self, cell: usize) -> u8 {
        debug_assert!(cell < BOARD_CELLS);
        ((self.0 >> (4 * cell)) & 0xF) as u8
    }

    #[inline]
    pub fn with_cell(self, cell: usize, exponent: u8) -> Board {
        debug_assert!(cell < BOARD_CELLS && exponent <= MAX_EXPONENT);
        let shift = 4 * cell;
        Board((self.0 & !(0xF << shift)) | ((exponent as u64) << shift))
    }

    pub fn from_exponents(cells: [u8; BOARD_CELLS]) -> Board {
        let mut bits = 0u64;
        for (i, &e) in cells.iter().enumerate() {
            assert!(e <= MAX_EXPONENT, "exponent {e} out of range");
            bits |= (e as u64) << (4 * i);
        }
        Board(bits)
    }

    pub fn exponents(self) -> [u8; BOARD_CELLS] {
        let mut out = [0u8; BOARD_CELLS];
        for (i, e) in out.iter_mut().enumerate() {
            *e = self.get(i);
        }
        out
    }

    #[inline]
    pub fn count_empty(self) -> u32 {
        // Mark each zero nibble with a 1 bit, then popcount.
        let mut x = self.0;
        x |= (x >> 2) & 0x3333_3333_3333_3333;
        x |= x >> 1;
        x = !x & 0x1111_1111_1111_1111;
        x.count_ones()
    }

    pub fn empty_cells(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..BOARD_CELLS).filter(move |&i| (bits >> (4 * i)) & 0xF == 0)
    }

    pub fn max_exponent(self) -> u8 {
        (0..BOARD_CELLS).map(|i| self.get(i)).max().unwrap()
    }

    /// Largest tile value on the board (0 if empty).
    pub fn max_tile(self) -> u32 {
        let e = self.max_exponent();
        if e == 0 {
            0
        } else {
            1 << e
        }
    }

    /// Reflect along the main diagonal: cell (r, c) -> (c, r).
    #[inline]
    pub fn transposed(self) -> Board {
        let x = self.0;
        let a1 = x & 0xF0F0_0F0F_F0F0_0F0F;
        let a2 = x & 0x0000_F0F0_0000_F0F0;
        let a3 = x & 0x0F0F_0000_0F0F_0000;
        let a = a1 | (a2 << 12) | (a3 >> 12);
        let b1 = a & 0xFF00_FF00_00FF_00FF;
        let b2 = a & 0x00FF_00FF_0000_0000;
        let b3 = a & 0x0000_0000_FF00_FF00;
        Board(b1 | (b2 >> 24) | (b3 << 24))
    }

    /// Mirror left-right: cell (r, c) -> (r, 3 - c).
    #[inline]
    pub fn mirrored(self) -> Board {
        let x = self.0;
        Board(
            ((x & 0x000F_000F_000F_000F) << 12)
                | ((x & 0x00F0_00F0_00F0_00F0) << 4)
                | ((x & 0x0F00_0F00_0F00_0F00) >> 4)
                | ((x & 0xF000_F000_F000_F000) >> 12),
        )
    }

    /// Rotate a quarter turn clockwise.
    #[inline]
    pub fn rotated90(self) -> Board {
        self.transposed().mirrored()
    }
}

impl fmt::Debug for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Board({:#018x})", self.0)
    }
}

/// Text form: 4 lines of 4 whitespace-separated tile values, 0 for empty.
impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..4 {
            for c in 0..4 {
                if c > 0 {
                    write!(f, " ")?;
                }
                let e = self.get(4 * r + c);
                write!(f, "{}", if e == 0 { 0 } else { 1u32 << e })?;
            }
            if r < 3 {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Parse the text board format: 16 whitespace-separated tile values.
pub fn parse_board(text: &str) -> Result<Board, GameError> {
    let mut cells = [0u8; BOARD_CELLS];
    let mut n = 0;
    for tok in text.split_whitespace() {
        let v: u64 = tok.parse().map_err(|_| GameError::BadTile(u64::MAX))?;
        if n >= BOARD_CELLS {
            n += 1;
            continue;
        }
        cells[n] = if v == 0 {
            0
        } else if v.is_power_of_two() && v <= 1 << MAX_EXPONENT {
            v.trailing_zeros() as u8
        } else {
            return Err(GameError::BadTile(v));
        };
        n += 1;
    }
    if n != BOARD_CELLS {
        return Err(GameError::CellCount(n));
    }
    Ok(Board::from_exponents(cells))
}

/// One of the four sliding directions.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Move {
    Up,
    Right,
    Down,
    Left,
}

impl Move {
    /// All moves in the fixed tie-break order used by greedy play.
    pub const ALL: [Move; 4] = [Move::Up, Move::Right, Move::Down, Move::Left];

    pub fn name(self) -> &'static str {
        match self {
            Move::Up => "up",
            Move::Right => "right",
            Move::Down => "down",
            Move::Left => "left",
        }
    }
}

/// Result of sliding a board: the afterstate (before any tile spawn), the
/// merge reward, and whether anything moved.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MoveOutcome {
    pub afterstate: Board,
    pub reward: u32,
    pub legal: bool,
}

struct MoveTables {
    left: Vec<u16>,
    right: Vec<u16>,
    reward_left: Vec<u32>,
    reward_right: Vec<u32>,
}

/// Slide one 4-cell line toward index 0, merging equal adjacent pairs once,
/// the pair nearest the destination wall first. Returns the new line and the
/// merge reward (sum of created tile values).
fn merge_line(line: [u8; 4]) -> ([u8; 4], u32) {
    let mut out = [0u8; 4];
    let mut merged = [false; 4];
    let mut pos = 0usize;
    let mut reward = 0u32;
    for &v in line.iter().filter(|&&v| v != 0) {
        if pos > 0 && out[pos - 1] == v && !merged[pos - 1] {
            reward += 1u32 << (v + 1);
            out[pos - 1] = (v + 1).min(MAX_EXPONENT);
            merged[pos - 1] = true;
        } else {
            out[pos] = v;
            pos += 1;
        }
    }
    (out, reward)
}

fn row_cells(row: u16) -> [u8; 4] {
    [
        (row & 0xF) as u8,
        ((row >> 4) & 0xF) as u8,
        ((row >> 8) & 0xF) as u8,
        ((row >> 12) & 0xF) as u8,
    ]
}

fn pack_row(cells: [u8; 4]) -> u16 {
    (cells[0] as u16) | ((cells[1] as u16) << 4) | ((cells[2] as u16) << 8) | ((cells[3] as u16) << 12)
}

fn tables() -> &'static MoveTables {
    static TABLES: OnceLock<MoveTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut t = MoveTables {
            left: vec![0; 1 << 16],
            right: vec![0; 1 << 16],
            reward_left: vec![0; 1 << 16],
            reward_right: vec![0; 1 << 16],
        };
        for row in 0..=u16::MAX {
            let cells = row_cells(row);
            let (l, rl) = merge_line(cells);
            t.left[row as usize] = pack_row(l);
            t.reward_left[row as usize] = rl;
            let rev = [cells[3], cells[2], cells[1], cells[0]];
            let (r, rr) = merge_line(rev);
            t.right[row as usize] = pack_row([r[3], r[2], r[1], r[0]]);
            t.reward_right[row as usize] = rr;
        }
        t
    })
}

#[inline]
fn slide_rows(board: Board, to_left: bool) -> (Board, u32) {
    let t = tables();
    let mut out = 0u64;
    let mut reward = 0u32;
    for r in 0..4 {
        let row = ((board.0 >> (16 * r)) & 0xFFFF) as usize;
        let (moved, rew) = if to_left {
            (t.left[row], t.reward_left[row])
        } else {
            (t.right[row], t.reward_right[row])
        };
        out |= (moved as u64) << (16 * r);
        reward += rew;
    }
    (Board(out), reward)
}

/// Slide all tiles in `mv`'s direction. Illegal moves (nothing slides) are
/// reported with `legal == false` and the input board unchanged.
#[inline]
pub fn slide(board: Board, mv: Move) -> MoveOutcome {
    let (afterstate, reward) = match mv {
        Move::Left => slide_rows(board, true),
        Move::Right => slide_rows(board, false),
        Move::Up => {
            let (b, r) = slide_rows(board.transposed(), true);
            (b.transposed(), r)
        }
        Move::Down => {
            let (b, r) = slide_rows(board.transposed(), false);
            (b.transposed(), r)
        }
    };
    MoveOutcome {
        afterstate,
        reward,
        legal: afterstate != board,
    }
}

/// Moves whose slide outcome actually changes the board.
pub fn legal_moves(board: Board) -> Vec<Move> {
    Move::ALL
        .iter()
        .copied()
        .filter(|&m| slide(board, m).legal)
        .collect()
}

/// True iff no move is legal.
pub fn is_terminal(board: Board) -> bool {
    if board.count_empty() > 0 {
        return false;
    }
    Move::ALL.iter().all(|&m| !slide(board, m).legal)
}

/// Place a 2-tile (probability 0.9) or 4-tile (0.1) on a uniformly chosen
/// empty cell. Calling this on a full board is a caller bug.
pub fn spawn_random_tile<R: Rng + ?Sized>(board: Board, rng: &mut R) -> Board {
    let empties = board.count_empty();
    assert!(empties > 0, "spawn_random_tile on a full board");
    let pick = rng.random_range(0..empties);
    let cell = board
        .empty_cells()
        .nth(pick as usize)
        .expect("empty cell index in range");
    let exponent = if rng.random_bool(FOUR_TILE_PROB) { 2 } else { 1 };
    board.with_cell(cell, exponent)
}

/// A fresh game: two random tiles on an empty board.
pub fn initial_state<R: Rng + ?Sized>(rng: &mut R) -> Board {
    let b = spawn_random_tile(Board::EMPTY, rng);
    spawn_random_tile(b, rng)
}
