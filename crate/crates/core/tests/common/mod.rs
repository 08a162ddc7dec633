//! Independent oracles: brute-force enumeration that shares no code path
//! with the engine under test.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// All sums `b_1 a_1 + ... + b_k a_k` with `b_i >= 0`, `sum b_i = h`,
/// enumerated composition by composition.
pub fn composition_sumset(a: &[i128], h: usize) -> Vec<i128> {
    fn go(a: &[i128], left: usize, acc: i128, out: &mut BTreeSet<i128>) {
        match a.split_first() {
            None => {
                if left == 0 {
                    out.insert(acc);
                }
            }
            Some((&x, rest)) => {
                for b in 0..=left {
                    go(rest, left - b, acc + (b as i128) * x, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(a, h, 0, &mut out);
    out.into_iter().collect()
}

/// Same as [`composition_sumset`] for points of `Z^d` given as coordinate
/// vectors; lexicographic `Vec` ordering is the group order.
pub fn composition_sumset_vec(a: &[Vec<i128>], h: usize) -> Vec<Vec<i128>> {
    fn go(a: &[Vec<i128>], left: usize, acc: Vec<i128>, out: &mut BTreeSet<Vec<i128>>) {
        match a.split_first() {
            None => {
                if left == 0 {
                    out.insert(acc);
                }
            }
            Some((x, rest)) => {
                for b in 0..=left {
                    let next = acc.iter().zip(x).map(|(s, c)| s + (b as i128) * c).collect();
                    go(rest, left - b, next, out);
                }
            }
        }
    }
    let dim = a[0].len();
    let mut out = BTreeSet::new();
    go(a, h, vec![0; dim], &mut out);
    out.into_iter().collect()
}

/// Number of compositions of `h` into `k` nonnegative parts, counted by
/// Pascal's rule rather than a closed form.
pub fn composition_count(h: usize, k: usize) -> u128 {
    // ways[j][r] = compositions of r into j parts
    let mut ways = vec![vec![0u128; h + 1]; k + 1];
    ways[0][0] = 1;
    for j in 1..=k {
        for r in 0..=h {
            ways[j][r] = (0..=r).map(|b| ways[j - 1][r - b]).sum();
        }
    }
    ways[k][h]
}

/// Every `k`-subset of `0..=max`, lexicographic.
pub fn subsets(k: usize, max: i128) -> Vec<Vec<i128>> {
    fn go(start: i128, max: i128, k: usize, cur: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=max {
            cur.push(v);
            go(v + 1, max, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, max, k, &mut Vec::new(), &mut out);
    out
}

fn proportional(s: &[i128], t: &[i128]) -> bool {
    let (sm, tm) = (s[s.len() - 1], t[t.len() - 1]);
    s.iter().zip(t).all(|(x, y)| x * tm == y * sm)
}

/// Canonical classes by orbit: group every `k`-subset of `[0, max]` with
/// minimum 0 by affine equivalence (positive rescaling, optionally after
/// reflection) and keep the lexicographic minimum of each group.
pub fn canonical_by_orbits(k: usize, max: i128) -> Vec<Vec<i128>> {
    let zero_based: Vec<Vec<i128>> = subsets(k, max).into_iter().filter(|s| s[0] == 0).collect();
    let mut reps: Vec<Vec<i128>> = Vec::new();
    for s in &zero_based {
        let top = s[k - 1];
        let mirror: Vec<i128> = s.iter().rev().map(|x| top - x).collect();
        let known = reps.iter().any(|r| proportional(r, s) || proportional(r, &mirror));
        if !known {
            // subsets arrive in lex order, so the first of a class is its minimum
            reps.push(s.clone());
        }
    }
    reps
}

pub fn is_ap(a: &[i128]) -> bool {
    a.len() <= 2 || a.windows(2).all(|w| w[1] - w[0] == a[1] - a[0])
}
