//! Named tuple-placement registry.
//!
//! Symmetric sampling covers rotations and reflections, so placements only
//! need translation anchors. Anchors follow the usual 2048 tiling: each shape
//! placed at the top-left and shifted down one row. Experiments cite
//! architectures by these names; the placements behind a name never change.

use super::{Architecture, NtupleError, TupleDef, TupleShape};

/// Architecture names accepted by [`architecture`].
pub fn architecture_names() -> &'static [&'static str] {
    &["42-33", "42-33-5", "421-43", "42-33-4-22", "42-33-4-22-3"]
}

fn tuple(cells: &[u8]) -> TupleDef {
    TupleDef {
        shape: TupleShape::new(cells.to_vec()).expect("registry shape is valid"),
        redundant: false,
        fold_parent: None,
    }
}

fn redundant(cells: &[u8], parent: u16) -> TupleDef {
    TupleDef {
        shape: TupleShape::new(cells.to_vec()).expect("registry shape is valid"),
        redundant: true,
        fold_parent: Some(parent),
    }
}

// Base 6-tuple placements (cells are row-major, 4r + c):
//   42 at row 0 cols 0..3 + row 1 cols 0..1, and shifted one row down;
//   33 at rows 0-1 cols 0..2, and shifted one row down.
const T42_A: &[u8] = &[0, 1, 2, 3, 4, 5];
const T42_B: &[u8] = &[4, 5, 6, 7, 8, 9];
const T33_A: &[u8] = &[0, 1, 2, 4, 5, 6];
const T33_B: &[u8] = &[4, 5, 6, 8, 9, 10];
const T33_C: &[u8] = &[8, 9, 10, 12, 13, 14];

/// Look up a named architecture.
pub fn architecture(name: &str) -> Result<Architecture, NtupleError> {
    let tuples = match name {
        // Four 6-tuples: the baseline network.
        "42-33" => vec![tuple(T42_A), tuple(T42_B), tuple(T33_A), tuple(T33_B)],
        // Five 6-tuple variant (adds a third 33 anchored two rows down).
        "42-33-5" => vec![
            tuple(T42_A),
            tuple(T42_B),
            tuple(T33_A),
            tuple(T33_B),
            tuple(T33_C),
        ],
        // Five 7-tuples of the 43 and 421 shapes.
        "421-43" => vec![
            tuple(&[0, 1, 2, 3, 4, 5, 6]),
            tuple(&[4, 5, 6, 7, 8, 9, 10]),
            tuple(&[8, 9, 10, 11, 12, 13, 14]),
            tuple(&[0, 1, 2, 3, 4, 5, 8]),
            tuple(&[4, 5, 6, 7, 8, 9, 12]),
        ],
        // 42-33-5 plus redundant straight-4s and 2x2 squares, each contained
        // in one of the 6-tuples so the tables can be folded after training.
        "42-33-4-22" => redundant_42_33_4_22(),
        // ... plus redundant straight-3s.
        "42-33-4-22-3" => {
            let mut tuples = redundant_42_33_4_22();
            tuples.push(redundant(&[0, 1, 2], 2)); // line 3, row 0 -> 33 A
            tuples.push(redundant(&[4, 5, 6], 3)); // line 3, row 1 -> 33 B
            tuples
        }
        other => return Err(NtupleError::UnknownArchitecture(other.to_string())),
    };
    Architecture::new(name, tuples)
}

fn redundant_42_33_4_22() -> Vec<TupleDef> {
    vec![
        tuple(T42_A),                      // 0
        tuple(T42_B),                      // 1
        tuple(T33_A),                      // 2
        tuple(T33_B),                      // 3
        tuple(T33_C),                      // 4
        redundant(&[0, 1, 2, 3], 0),       // line 4, row 0 -> 42 A
        redundant(&[4, 5, 6, 7], 1),       // line 4, row 1 -> 42 B
        redundant(&[0, 1, 4, 5], 0),       // square at (0,0) -> 42 A
        redundant(&[1, 2, 5, 6], 2),       // square at (0,1) -> 33 A
        redundant(&[5, 6, 9, 10], 3),      // square at (1,1) -> 33 B
    ]
}
