//! Direct optimal solvers for instances of width 2 and 3.
//!
//! Strings fall into a handful of shape classes by their concrete
//! positions. Each class has a fixed span and a minimum start cell (a
//! string whose first concrete position is `p` cannot force a cell before
//! `p`), so an optimal text packs the classes in three phases: blocks that
//! may touch cell 1, blocks whose first forced cell is 2, then cell-3-only
//! blocks. Width 3 adds the gapped shape `x◦x`: two of them interleave
//! into four dense cells, and a leftover one can carry a one-cell string
//! in its gap — the best gap tenant is found by trying each candidate.

use crate::error::{Error, Result};

use super::{build_text, SodaInstance, SodaSolution};

fn check_width(inst: &SodaInstance, want: usize) -> Result<()> {
    if inst.sigma() != want {
        return Err(Error::Input(format!(
            "solver handles width {want} only, instance has width {}",
            inst.sigma()
        )));
    }
    Ok(())
}

/// Optimal solve for width-2 instances: dense pairs first, then
/// first-cell singles, then second-cell singles (which can never cover
/// cell 1).
pub fn solve_sigma2(inst: &SodaInstance) -> Result<SodaSolution> {
    check_width(inst, 2)?;
    let (mut doubles, mut heads, mut tails) = (Vec::new(), Vec::new(), Vec::new());
    let mut dropped = false;
    for i in 0..inst.len() {
        match *inst.positions(i) {
            [] => dropped = true,
            [1] => heads.push(i),
            [2] => tails.push(i),
            [1, 2] => doubles.push(i),
            _ => unreachable!("positions are sorted and bounded by the width"),
        }
    }
    let mut offsets = vec![0usize; inst.len()];
    let mut q = 1usize; // next unused text cell
    for &i in &doubles {
        offsets[i] = q - 1;
        q += 2;
    }
    for &i in &heads {
        offsets[i] = q - 1;
        q += 1;
    }
    if !tails.is_empty() {
        q = q.max(2);
    }
    for &i in &tails {
        offsets[i] = q - 2;
        q += 1;
    }
    let mut length = q - 1;
    if dropped {
        length = length.max(2);
    }
    Ok(SodaSolution {
        text: build_text(inst, &offsets, length),
        offsets,
    })
}

/// Which one-cell class plugs the gap of a leftover `x◦x` string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GapFill {
    Nothing,
    Cell1,
    Cell2,
    Cell3,
}

struct Shapes3 {
    cell1: Vec<usize>,   // [1]
    cell2: Vec<usize>,   // [2]
    cell3: Vec<usize>,   // [3]
    front: Vec<usize>,   // [1,2]
    back: Vec<usize>,    // [2,3]
    full: Vec<usize>,    // [1,2,3]
    gapped: Vec<usize>,  // [1,3]
    dropped: bool,
}

/// Packs all width-3 blocks for one gap-fill choice and returns the text
/// length with witness offsets.
fn place_sigma3(n: usize, s: &Shapes3, fill: GapFill) -> (usize, Vec<usize>) {
    let mut offsets = vec![0usize; n];
    let pairs = s.gapped.len() / 2;
    let lone = if s.gapped.len() % 2 == 1 {
        Some(s.gapped[s.gapped.len() - 1])
    } else {
        None
    };
    let (mut cell1, mut cell2, mut cell3) =
        (s.cell1.as_slice(), s.cell2.as_slice(), s.cell3.as_slice());
    let mut filler = None;
    if lone.is_some() {
        match fill {
            GapFill::Nothing => {}
            GapFill::Cell1 => (filler, cell1) = (Some(cell1[0]), &cell1[1..]),
            GapFill::Cell2 => (filler, cell2) = (Some(cell2[0]), &cell2[1..]),
            GapFill::Cell3 => (filler, cell3) = (Some(cell3[0]), &cell3[1..]),
        }
    }
    let mut q = 1usize;
    // Blocks that may cover cell 1.
    for k in 0..pairs {
        offsets[s.gapped[2 * k]] = q - 1; //     cells q, q+2
        offsets[s.gapped[2 * k + 1]] = q; // cells q+1, q+3
        q += 4;
    }
    for &i in &s.front {
        offsets[i] = q - 1;
        q += 2;
    }
    for &i in &s.full {
        offsets[i] = q - 1;
        q += 3;
    }
    if let Some(le) = lone {
        if fill != GapFill::Cell3 {
            offsets[le] = q - 1; // cells q and q+2, gap at q+1
            match (fill, filler) {
                (GapFill::Cell1, Some(t)) => offsets[t] = q,
                (GapFill::Cell2, Some(t)) => offsets[t] = q - 1,
                _ => {}
            }
            q += 3;
        }
    }
    for &i in cell1 {
        offsets[i] = q - 1;
        q += 1;
    }
    // Blocks whose first forced cell is 2.
    let defer_lone = lone.is_some() && fill == GapFill::Cell3;
    if !cell2.is_empty() || !s.back.is_empty() || defer_lone {
        q = q.max(2);
    }
    if defer_lone {
        let le = lone.unwrap();
        offsets[le] = q - 1; // gap at q+1 >= 3
        offsets[filler.unwrap()] = q - 2;
        q += 3;
    }
    for &i in cell2 {
        offsets[i] = q - 2;
        q += 1;
    }
    for &i in &s.back {
        offsets[i] = q - 2;
        q += 2;
    }
    // Cell-3-only strings.
    if !cell3.is_empty() {
        q = q.max(3);
    }
    for &i in cell3 {
        offsets[i] = q - 3;
        q += 1;
    }
    (q - 1, offsets)
}

/// Optimal solve for width-3 instances. Gapped `x◦x` strings are paired
/// up into dense interleaved quads; an odd one out keeps its gap, and
/// every way of lending the gap to a one-cell string (or leaving it
/// empty) is tried.
pub fn solve_sigma3(inst: &SodaInstance) -> Result<SodaSolution> {
    check_width(inst, 3)?;
    let mut s = Shapes3 {
        cell1: Vec::new(),
        cell2: Vec::new(),
        cell3: Vec::new(),
        front: Vec::new(),
        back: Vec::new(),
        full: Vec::new(),
        gapped: Vec::new(),
        dropped: false,
    };
    for i in 0..inst.len() {
        match *inst.positions(i) {
            [] => s.dropped = true,
            [1] => s.cell1.push(i),
            [2] => s.cell2.push(i),
            [3] => s.cell3.push(i),
            [1, 2] => s.front.push(i),
            [2, 3] => s.back.push(i),
            [1, 2, 3] => s.full.push(i),
            [1, 3] => s.gapped.push(i),
            _ => unreachable!("positions are sorted and bounded by the width"),
        }
    }
    let mut options = vec![GapFill::Nothing];
    if s.gapped.len() % 2 == 1 {
        if !s.cell1.is_empty() {
            options.push(GapFill::Cell1);
        }
        if !s.cell2.is_empty() {
            options.push(GapFill::Cell2);
        }
        if !s.cell3.is_empty() {
            options.push(GapFill::Cell3);
        }
    }
    let (mut best_len, mut best_offsets) = (usize::MAX, Vec::new());
    for fill in options {
        let (len, offsets) = place_sigma3(inst.len(), &s, fill);
        if len < best_len {
            (best_len, best_offsets) = (len, offsets);
        }
    }
    let mut length = best_len;
    if s.dropped {
        length = length.max(3);
    }
    Ok(SodaSolution {
        text: build_text(inst, &best_offsets, length),
        offsets: best_offsets,
    })
}
