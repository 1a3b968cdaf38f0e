//! Exhaustive branch-and-bound solver for small alignment instances.
//!
//! Every concrete position of a placed string claims one text cell, and
//! distinct strings carry distinct letters, so placements are feasible
//! exactly when their claimed cells are disjoint. The objective is the
//! largest forced cell; strings whose trailing positions are wildcards may
//! overhang the end of the text. An all-wildcard string claims nothing but
//! still requires the text to be at least one window long.

use crate::error::{Error, Result};

use super::{build_text, SodaInstance, SodaSolution};

/// Default cap on the number of strings the solver will attempt.
pub const DEFAULT_ORACLE_LIMIT: usize = 8;

/// Width cap; together with the string cap it keeps every reachable cell
/// index below 64 so claims fit in one machine word.
const SIGMA_LIMIT: usize = 8;

/// Instances with at least this many placeable strings are split across
/// threads (when the `parallel` feature is on).
const PARALLEL_THRESHOLD: usize = 5;

struct Prepared {
    /// Claim bitmask of each kept string at offset 0 (bit `p-1` per
    /// concrete position `p`), sorted for the search.
    masks: Vec<u64>,
    /// Last concrete position of each kept string, aligned with `masks`.
    effs: Vec<usize>,
    /// `suffix_max_eff[i]` = max of `effs[i..]`; one trailing 0.
    suffix_max_eff: Vec<usize>,
    /// Original index of each kept string, aligned with `masks`.
    kept: Vec<usize>,
    /// Whether any all-wildcard string was present.
    dropped_any: bool,
    /// Sum of `effs` — the length of the stacked placement, an upper bound.
    stacked: usize,
}

fn prepare(inst: &SodaInstance, limit: usize) -> Result<Prepared> {
    if inst.len() > limit {
        return Err(Error::Capacity(format!(
            "{} strings exceed the exhaustive-search limit {limit}",
            inst.len()
        )));
    }
    if inst.sigma() > SIGMA_LIMIT {
        return Err(Error::Capacity(format!(
            "string length {} exceeds the exhaustive-search cap {SIGMA_LIMIT}",
            inst.sigma()
        )));
    }
    // Most-constrained first: descending concrete count, ties by index.
    let mut order: Vec<usize> = (0..inst.len())
        .filter(|&i| !inst.positions(i).is_empty())
        .collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(inst.positions(i).len()), i));
    let masks: Vec<u64> = order
        .iter()
        .map(|&i| {
            inst.positions(i)
                .iter()
                .fold(0u64, |m, &p| m | 1 << (p - 1))
        })
        .collect();
    let effs: Vec<usize> = order
        .iter()
        .map(|&i| *inst.positions(i).last().unwrap())
        .collect();
    let mut suffix_max_eff = vec![0usize; effs.len() + 1];
    for i in (0..effs.len()).rev() {
        suffix_max_eff[i] = effs[i].max(suffix_max_eff[i + 1]);
    }
    let stacked = effs.iter().sum();
    Ok(Prepared {
        masks,
        effs,
        suffix_max_eff,
        dropped_any: order.len() < inst.len(),
        kept: order,
        stacked,
    })
}

struct Search<'a> {
    prep: &'a Prepared,
    best_len: usize,
    best_offsets: Option<Vec<usize>>,
    offsets: Vec<usize>,
}

impl Search<'_> {
    /// Depth-first search over offsets of string `idx` and beyond, given
    /// the cells already claimed and the largest forced cell so far. Only
    /// strict improvements are recorded, and offsets are tried in
    /// ascending order, so the final answer is the lexicographically
    /// smallest among the optimal placements (in search order).
    fn dfs(&mut self, idx: usize, used: u64, max_end: usize) {
        if max_end.max(self.prep.suffix_max_eff[idx]) >= self.best_len {
            return;
        }
        if idx == self.prep.masks.len() {
            self.best_len = max_end;
            self.best_offsets = Some(self.offsets.clone());
            return;
        }
        let eff = self.prep.effs[idx];
        let mut o = 0usize;
        while o + eff < self.best_len {
            let mask = self.prep.masks[idx] << o;
            if used & mask == 0 {
                self.offsets.push(o);
                self.dfs(idx + 1, used | mask, max_end.max(o + eff));
                self.offsets.pop();
            }
            o += 1;
        }
    }
}

fn assemble(inst: &SodaInstance, prep: &Prepared, len: usize, sorted_offsets: &[usize]) -> SodaSolution {
    let mut offsets = vec![0usize; inst.len()];
    for (k, &i) in prep.kept.iter().enumerate() {
        offsets[i] = sorted_offsets[k];
    }
    let length = if prep.dropped_any {
        len.max(inst.sigma())
    } else {
        len
    };
    SodaSolution {
        text: build_text(inst, &offsets, length),
        offsets,
    }
}

/// Single-threaded exhaustive solve. Same contract as
/// [`brute_force_soda`].
pub fn brute_force_soda_seq(inst: &SodaInstance, limit: usize) -> Result<SodaSolution> {
    let prep = prepare(inst, limit)?;
    let mut search = Search {
        prep: &prep,
        best_len: prep.stacked + 1,
        best_offsets: None,
        offsets: Vec::with_capacity(prep.masks.len()),
    };
    search.dfs(0, 0, 0);
    let offsets = search
        .best_offsets
        .expect("the stacked placement is always beaten or matched");
    Ok(assemble(inst, &prep, search.best_len, &offsets))
}

#[cfg(feature = "parallel")]
fn solve_parallel(inst: &SodaInstance, prep: &Prepared) -> SodaSolution {
    use rayon::prelude::*;

    let eff0 = prep.effs[0];
    let best = (0..=prep.stacked - eff0)
        .into_par_iter()
        .filter_map(|o0| {
            let mut search = Search {
                prep,
                best_len: prep.stacked + 1,
                best_offsets: None,
                offsets: vec![o0],
            };
            search.dfs(1, prep.masks[0] << o0, o0 + eff0);
            search.best_offsets.map(|off| (search.best_len, off))
        })
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("offset 0 always yields a candidate");
    assemble(inst, prep, best.0, &best.1)
}

/// Finds a shortest text in which every string of the instance can be
/// placed (clashing letters forbidden, trailing wildcards allowed to
/// overhang) together with one witness offset per string. Deterministic:
/// the returned offsets are the lexicographically smallest optimal ones in
/// most-constrained-first order. Instances beyond `limit` strings or width
/// 8 are refused with a capacity error.
pub fn brute_force_soda(inst: &SodaInstance, limit: usize) -> Result<SodaSolution> {
    #[cfg(feature = "parallel")]
    {
        let prep = prepare(inst, limit)?;
        if prep.masks.len() >= PARALLEL_THRESHOLD {
            return Ok(solve_parallel(inst, &prep));
        }
    }
    brute_force_soda_seq(inst, limit)
}

/// Decides whether the optimal text length is at most `sigma + k`.
pub fn k_soda_decide(inst: &SodaInstance, k: usize) -> Result<bool> {
    let sol = brute_force_soda(inst, DEFAULT_ORACLE_LIMIT)?;
    Ok(sol.length() <= inst.sigma() + k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(sigma: usize, positions: &[&[usize]]) -> SodaInstance {
        SodaInstance::new(sigma, positions.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    /// Dumb reference: try every offset tuple bounded by the stacked
    /// length and keep the best feasible one.
    fn reference_optimum(inst: &SodaInstance) -> usize {
        let kept: Vec<usize> = (0..inst.len())
            .filter(|&i| !inst.positions(i).is_empty())
            .collect();
        let effs: Vec<usize> = kept.iter().map(|&i| *inst.positions(i).last().unwrap()).collect();
        let bound: usize = effs.iter().sum();
        let mut best = bound;
        let mut offsets = vec![0usize; kept.len()];
        loop {
            let mut cells = std::collections::HashSet::new();
            let mut ok = true;
            let mut end = 0usize;
            for (k, &i) in kept.iter().enumerate() {
                for &p in inst.positions(i) {
                    if !cells.insert(offsets[k] + p) {
                        ok = false;
                    }
                }
                end = end.max(offsets[k] + effs[k]);
            }
            if ok {
                best = best.min(end);
            }
            // Odometer over offset tuples in [0, bound]^kept.
            let mut k = 0;
            loop {
                if k == offsets.len() {
                    break;
                }
                offsets[k] += 1;
                if offsets[k] <= bound {
                    break;
                }
                offsets[k] = 0;
                k += 1;
            }
            if k == offsets.len() {
                break;
            }
        }
        let floored = if kept.len() < inst.len() {
            best.max(inst.sigma())
        } else {
            best
        };
        if inst.is_empty() {
            0
        } else {
            floored
        }
    }

    #[test]
    fn all_wildcard_string_forces_one_window() {
        let sol = brute_force_soda(&inst(3, &[&[]]), 8).unwrap();
        assert_eq!(sol.length(), 3);
        assert_eq!(sol.offsets, vec![0]);
        assert_eq!(sol.text, vec![None, None, None]);
    }

    #[test]
    fn alternating_strings_share_one_window() {
        let sol = brute_force_soda(&inst(4, &[&[1, 3], &[2, 4]]), 8).unwrap();
        assert_eq!(sol.length(), 4);
        assert_eq!(sol.offsets, vec![0, 0]);
        assert_eq!(
            sol.text,
            vec![Some(1), Some(2), Some(1), Some(2)]
        );
    }

    #[test]
    fn wildcard_free_strings_concatenate() {
        let sol = brute_force_soda(&inst(2, &[&[1, 2], &[1, 2]]), 8).unwrap();
        assert_eq!(sol.length(), 4);
        assert_eq!(sol.offsets, vec![0, 2]);
    }

    #[test]
    fn empty_instance_needs_no_text() {
        let sol = brute_force_soda(&inst(5, &[]), 8).unwrap();
        assert_eq!(sol.length(), 0);
        assert!(sol.offsets.is_empty());
    }

    #[test]
    fn trailing_wildcards_overhang() {
        let sol = brute_force_soda(&inst(2, &[&[1]]), 8).unwrap();
        assert_eq!(sol.length(), 1);
        let sol = brute_force_soda(&inst(2, &[&[2]]), 8).unwrap();
        assert_eq!(sol.length(), 2);
    }

    #[test]
    fn offsets_are_lexicographically_minimal() {
        let sol = brute_force_soda(&inst(2, &[&[1], &[2]]), 8).unwrap();
        assert_eq!(sol.length(), 2);
        assert_eq!(sol.offsets, vec![0, 0]);
    }

    #[test]
    fn decision_wrapper_compares_against_window_plus_k() {
        assert!(k_soda_decide(&inst(3, &[&[]]), 0).unwrap());
        assert!(!k_soda_decide(&inst(2, &[&[1, 2], &[1, 2]]), 1).unwrap());
        assert!(k_soda_decide(&inst(2, &[&[1, 2], &[1, 2]]), 2).unwrap());
        assert!(k_soda_decide(&inst(4, &[&[1, 3], &[2, 4]]), 0).unwrap());
    }

    #[test]
    fn capacity_guards() {
        let big = SodaInstance::new(2, vec![vec![1]; 9]).unwrap();
        assert!(matches!(
            brute_force_soda(&big, 8),
            Err(Error::Capacity(_))
        ));
        assert!(brute_force_soda(&big, 9).is_ok());
        let wide = SodaInstance::new(9, vec![vec![1]]).unwrap();
        assert!(matches!(
            brute_force_soda(&wide, 8),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn matches_reference_on_all_tiny_instances() {
        // Every instance with up to 2 strings over width 3.
        let masks: Vec<Vec<usize>> = (0..8u32)
            .map(|m| (1..=3).filter(|&p| m >> (p - 1) & 1 == 1).collect())
            .collect();
        for a in &masks {
            let one = SodaInstance::new(3, vec![a.clone()]).unwrap();
            assert_eq!(
                brute_force_soda(&one, 8).unwrap().length(),
                reference_optimum(&one)
            );
            for b in &masks {
                let two = SodaInstance::new(3, vec![a.clone(), b.clone()]).unwrap();
                assert_eq!(
                    brute_force_soda(&two, 8).unwrap().length(),
                    reference_optimum(&two),
                    "{a:?} {b:?}"
                );
            }
        }
    }

    #[test]
    fn matches_reference_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x50da);
        for _ in 0..60 {
            let n = rng.gen_range(1..=4);
            let sigma = rng.gen_range(1..=4);
            let positions: Vec<Vec<usize>> = (0..n)
                .map(|_| (1..=sigma).filter(|_| rng.gen_bool(0.5)).collect())
                .collect();
            let inst = SodaInstance::new(sigma, positions).unwrap();
            assert_eq!(
                brute_force_soda(&inst, 8).unwrap().length(),
                reference_optimum(&inst),
                "{inst:?}"
            );
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xda7a);
        for round in 0..25 {
            let n = rng.gen_range(5..=6);
            let sigma = rng.gen_range(2..=5);
            let positions: Vec<Vec<usize>> = (0..n)
                .map(|_| (1..=sigma).filter(|_| rng.gen_bool(0.6)).collect())
                .collect();
            let inst = SodaInstance::new(sigma, positions).unwrap();
            let par = brute_force_soda(&inst, 8).unwrap();
            let seq = brute_force_soda_seq(&inst, 8).unwrap();
            assert_eq!(par, seq, "round {round}: {inst:?}");
        }
    }

    #[test]
    fn solution_text_matches_offsets() {
        let i = inst(3, &[&[1, 3], &[2], &[]]);
        let sol = brute_force_soda(&i, 8).unwrap();
        assert_eq!(sol.text, build_text(&i, &sol.offsets, sol.length()));
        // Every concrete position must land inside the text.
        for s in 0..i.len() {
            for &p in i.positions(s) {
                assert_eq!(sol.text[sol.offsets[s] + p - 1], Some(s + 1));
            }
        }
    }
}
