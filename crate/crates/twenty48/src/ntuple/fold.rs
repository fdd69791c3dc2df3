//! Folding redundant tuples into the tuples that contain them.
//!
//! A redundant tuple reads a subset of some retained tuple's cells (possibly
//! after a board symmetry). Because both are sampled under all eight views
//! against shared tables, every entry of the redundant table can be added
//! into the containing table once, after which the redundant tuple can be
//! dropped without changing any evaluation.

use super::{Architecture, NTupleNetwork, NtupleError, TupleDef, symmetric_views};
use crate::game::{Board, BOARD_CELLS};

/// Cell source maps of the eight symmetries: `maps[k][c]` is the input cell
/// whose value view k places at cell `c`.
fn view_source_maps() -> [[u8; BOARD_CELLS]; 8] {
    let mut marker = [0u8; BOARD_CELLS];
    for (i, m) in marker.iter_mut().enumerate() {
        *m = i as u8;
    }
    let views = symmetric_views(Board::from_exponents(marker));
    let mut maps = [[0u8; BOARD_CELLS]; 8];
    for (k, view) in views.iter().enumerate() {
        for c in 0..BOARD_CELLS {
            maps[k][c] = view.get(c);
        }
    }
    maps
}

/// For a redundant tuple, the parent tuple index and, for each digit of the
/// redundant index, the digit position within the parent index.
struct FoldMap {
    parent: usize,
    digit_pos: Vec<usize>,
}

fn find_fold_map(
    arch: &Architecture,
    tuple: usize,
    maps: &[[u8; BOARD_CELLS]; 8],
) -> Result<FoldMap, NtupleError> {
    let red = &arch.tuples[tuple];
    let candidates: Vec<usize> = match red.fold_parent {
        Some(p) => vec![p as usize],
        None => (0..arch.tuples.len())
            .filter(|&i| !arch.tuples[i].redundant)
            .collect(),
    };
    for parent in candidates {
        let parent_cells = &arch.tuples[parent].shape.cells;
        for map in maps {
            let mapped: Vec<u8> = red.shape.cells.iter().map(|&c| map[c as usize]).collect();
            if let Some(digit_pos) = mapped
                .iter()
                .map(|m| parent_cells.iter().position(|p| p == m))
                .collect::<Option<Vec<usize>>>()
            {
                return Ok(FoldMap { parent, digit_pos });
            }
        }
    }
    Err(NtupleError::NotFoldable { tuple })
}

/// Integrate every redundant tuple's table into its containing tuple's table
/// and return a network over only the retained tuples. Evaluation is
/// preserved for every board up to floating-point reassociation.
pub fn fold_redundant(net: &NTupleNetwork) -> Result<NTupleNetwork, NtupleError> {
    let arch = net.arch();
    if arch.tuples.iter().all(|t| !t.redundant) {
        return Ok(copy_network(net, arch.clone()));
    }

    let maps = view_source_maps();
    let retained: Vec<usize> = (0..arch.tuples.len())
        .filter(|&i| !arch.tuples[i].redundant)
        .collect();
    let new_index: Vec<Option<usize>> = {
        let mut v = vec![None; arch.tuples.len()];
        for (new_i, &old_i) in retained.iter().enumerate() {
            v[old_i] = Some(new_i);
        }
        v
    };

    let folded_arch = Architecture::new(
        format!("{}-folded", arch.name),
        retained
            .iter()
            .map(|&i| TupleDef {
                shape: arch.tuples[i].shape.clone(),
                redundant: false,
                fold_parent: None,
            })
            .collect(),
    )?;
    let out = copy_retained(net, folded_arch, &retained);

    for tuple in 0..arch.tuples.len() {
        if !arch.tuples[tuple].redundant {
            continue;
        }
        let fold = find_fold_map(arch, tuple, &maps)?;
        let parent_new = new_index[fold.parent].expect("fold parent is retained");
        let src = net.table(tuple);
        let dst = out.table(parent_new);
        let src_len = net.stage_len(tuple);
        let dst_len = net.stage_len(fold.parent);
        for stage in 0..net.stage_count() {
            let src_base = stage * src_len;
            let dst_base = stage * dst_len;
            for idx in 0..dst_len {
                let mut sub = 0usize;
                for (j, &q) in fold.digit_pos.iter().enumerate() {
                    sub |= ((idx >> (4 * q)) & 0xF) << (4 * j);
                }
                let add = src.get(src_base + sub);
                if add != 0.0 {
                    dst.add(dst_base + idx, add);
                }
            }
        }
    }
    Ok(out)
}

fn copy_network(net: &NTupleNetwork, arch: Architecture) -> NTupleNetwork {
    let all: Vec<usize> = (0..net.arch().tuples.len()).collect();
    copy_retained(net, arch, &all)
}

fn copy_retained(net: &NTupleNetwork, arch: Architecture, retained: &[usize]) -> NTupleNetwork {
    let out = NTupleNetwork::zeroed(arch, net.stage_bits());
    for (new_i, &old_i) in retained.iter().enumerate() {
        let src = net.table(old_i);
        let dst = out.table(new_i);
        for k in 0..src.len() {
            let v = src.get(k);
            if v != 0.0 {
                dst.set(k, v);
            }
        }
    }
    out
}
