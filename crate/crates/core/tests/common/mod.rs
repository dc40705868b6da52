//! Oracles shared by the integration tests and the acceptance target. They
//! are written from the definitions, without calling the library code they
//! check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use blockgame::game::{Determination, Family};
use blockgame::{BlockVector, FiniteBlockSequence, NormKind, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn two_pow(e: i64) -> Rational {
    let p = Rational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// `k_n` for `δ_n = 2^(-n)`: the least strictly increasing sequence with
/// `2^(-k_n+1) ≤ δ_n`, found by counting upwards.
pub fn k_halving(n: usize) -> u64 {
    let mut prev = 0u64;
    let mut k = 0;
    for m in 0..=n {
        k = prev + 1;
        while two_pow(1 - k as i64) > two_pow(-(m as i64)) {
            k += 1;
        }
        prev = k;
    }
    k
}

/// `‖x‖ ≤ bound`, decided exactly (squares for ell2).
pub fn norm_le(kind: NormKind, x: &BlockVector, bound: &Rational) -> bool {
    let cs: Vec<Rational> = x.iter().map(|(_, c)| c.abs()).collect();
    match kind {
        NormKind::Ell1 => cs.iter().sum::<Rational>() <= *bound,
        NormKind::Sup => cs.iter().all(|c| c <= bound),
        NormKind::Ell2 => {
            !bound.is_negative() && cs.iter().map(|c| c * c).sum::<Rational>() <= bound * bound
        }
    }
}

/// `‖x‖ ≥ bound`.
pub fn norm_ge(kind: NormKind, x: &BlockVector, bound: &Rational) -> bool {
    let cs: Vec<Rational> = x.iter().map(|(_, c)| c.abs()).collect();
    match kind {
        NormKind::Ell1 => cs.iter().sum::<Rational>() >= *bound,
        NormKind::Sup => cs.iter().any(|c| c >= bound) || (bound.is_zero()),
        NormKind::Ell2 => {
            bound.is_negative() || cs.iter().map(|c| c * c).sum::<Rational>() >= bound * bound
        }
    }
}

pub fn sub(a: &BlockVector, b: &BlockVector) -> BlockVector {
    let idx: BTreeSet<usize> = a
        .iter()
        .map(|(i, _)| i)
        .chain(b.iter().map(|(i, _)| i))
        .collect();
    BlockVector::from_pairs(idx.into_iter().filter_map(|i| {
        let c = a.coefficient(i) - b.coefficient(i);
        (!c.is_zero()).then_some((i, c))
    }))
}

/// `x ∈ 𝔇` under the halving tolerance: every coefficient on the support
/// segment `[lo, hi]` is a multiple of `2^(-l(k_i+1))`, `l = hi - lo + 1`,
/// and `‖x‖ ≤ 1`.
pub fn in_net(kind: NormKind, x: &BlockVector) -> bool {
    let (Some(lo), Some(hi)) = (x.min_support(), x.max_support()) else {
        return false;
    };
    let l = (hi - lo + 1) as i64;
    let on_lattice = x.iter().all(|(i, c)| {
        let scaled = c * two_pow(l * (k_halving(i) as i64 + 1));
        scaled.is_integer()
    });
    on_lattice && norm_le(kind, x, &Rational::one())
}

/// Coefficients `μ` with `y = Σ μ_j z_j`, by Gaussian elimination on the
/// dense matrix over the union of supports. `None` if `y` is not in the span.
pub fn solve_span(z: &[BlockVector], y: &BlockVector) -> Option<Vec<Rational>> {
    let rows: Vec<usize> = z
        .iter()
        .flat_map(|v| v.iter().map(|(i, _)| i))
        .chain(y.iter().map(|(i, _)| i))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let cols = z.len();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&i| {
            let mut row: Vec<Rational> = z.iter().map(|v| v.coefficient(i)).collect();
            row.push(y.coefficient(i));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&p| !m[p][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for rr in 0..m.len() {
            if rr != r && !m[rr][c].is_zero() {
                let f = m[rr][c].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[rr].iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut mu = vec![Rational::zero(); cols];
    for (row, &c) in pivots.iter().enumerate() {
        mu[c] = m[row][cols].clone();
    }
    Some(mu)
}

pub fn combine(z: &[BlockVector], mu: &[Rational]) -> BlockVector {
    let mut acc = BlockVector::zero();
    for (v, c) in z.iter().zip(mu) {
        if !c.is_zero() {
            acc = &acc + &v.scale(c);
        }
    }
    acc
}

/// Strictly increasing supports: `max supp y_n < min supp y_{n+1}`.
pub fn is_block(y: &[BlockVector]) -> bool {
    y.iter().all(|v| !v.is_zero())
        && y.windows(2)
            .all(|w| w[0].max_support().unwrap() < w[1].min_support().unwrap())
}

/// `Y ⪯ Z`: `Y` is a block sequence and every `y_n` is in `span(Z)`.
pub fn is_block_subsequence(y: &FiniteBlockSequence, z: &FiniteBlockSequence) -> bool {
    is_block(y.as_slice()) && y.iter().all(|v| solve_span(z.as_slice(), v).is_some())
}

/// Lexicographic scan of the whole box `|t_j| ≤ 2^(e_j)` over `[lo, hi]`
/// under the halving tolerance, keeping tuples with nonzero endpoints inside
/// the unit ball. Calls `visit` in ascending lexicographic order.
pub fn scan_segment(kind: NormKind, lo: usize, hi: usize, mut visit: impl FnMut(&[i128])) {
    let l = hi - lo + 1;
    let e: Vec<u32> = (lo..=hi)
        .map(|i| (l as u64 * (k_halving(i) + 1)) as u32)
        .collect();
    let top = *e.iter().max().unwrap();
    let w: Vec<i128> = e.iter().map(|&x| 1i128 << (top - x)).collect();
    let one = 1i128 << top;
    let budget = match kind {
        NormKind::Ell2 => one * one,
        _ => one,
    };
    let cost = |t: i128, w: i128| match kind {
        NormKind::Ell2 => (t * w) * (t * w),
        _ => t.abs() * w,
    };
    let join = |acc: i128, c: i128| match kind {
        NormKind::Sup => acc.max(c),
        _ => acc + c,
    };
    let bounds: Vec<i128> = e.iter().map(|&x| 1i128 << x).collect();
    let mut t = vec![0i128; l];
    // `acc` is the norm cost of t_0 … t_{j-1}; every box point is visited,
    // only the accumulation is shared between neighbours
    #[allow(clippy::too_many_arguments)]
    fn rec(
        j: usize,
        acc: i128,
        t: &mut [i128],
        bounds: &[i128],
        w: &[i128],
        budget: i128,
        cost: &dyn Fn(i128, i128) -> i128,
        join: &dyn Fn(i128, i128) -> i128,
        visit: &mut dyn FnMut(&[i128]),
    ) {
        let l = t.len();
        let b = bounds[j];
        if j + 1 == l {
            for x in -b..=b {
                if x == 0 {
                    continue;
                }
                if join(acc, cost(x, w[j])) <= budget {
                    t[j] = x;
                    visit(t);
                }
            }
            return;
        }
        for x in -b..=b {
            if j == 0 && x == 0 {
                continue;
            }
            t[j] = x;
            rec(
                j + 1,
                join(acc, cost(x, w[j])),
                t,
                bounds,
                w,
                budget,
                cost,
                join,
                visit,
            );
        }
    }
    rec(0, 0, &mut t, &bounds, &w, budget, &cost, &join, &mut visit);
}

/// The vector with mantissas `t` on `[lo, lo + t.len())` under the lattice
/// of segment length `t.len()`.
pub fn mantissa_vector(lo: usize, t: &[i128]) -> BlockVector {
    let l = t.len() as i64;
    BlockVector::from_pairs(
        t.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(j, &x)| {
                let e = l * (k_halving(lo + j) as i64 + 1);
                (
                    lo + j,
                    Rational::from_integer(BigInt::from(x)) * two_pow(-e),
                )
            }),
    )
}

/// Materialized window `𝔇 ∩ <e_0, …, e_{n-1}>`, for small `n`.
pub fn net_window(kind: NormKind, n: usize) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    for lo in 0..n {
        for hi in lo..n {
            scan_segment(kind, lo, hi, |t| {
                out.insert(mantissa_vector(lo, t).to_canonical());
            });
        }
    }
    out
}

/// Replies to a singleton offer `(c·e_i)` in the discrete game under the
/// halving tolerance: `λe_i` with `λ ∈ 2^(-(k_i+1))ℤ`, `0 < |λ| ≤ 1`, and
/// `i` after the last pick.
pub fn singleton_replies(offer: &BlockVector, last: Option<&BlockVector>) -> Vec<BlockVector> {
    let i = offer.min_support().unwrap();
    assert_eq!(offer.max_support(), Some(i), "singleton offers only");
    if last.is_some_and(|x| x.max_support().unwrap() >= i) {
        return Vec::new();
    }
    let e = k_halving(i) as i64 + 1;
    let r = 1i64 << e;
    (-r..=r)
        .filter(|&t| t != 0)
        .map(|t| {
            BlockVector::from_pairs([(i, Rational::from_integer(BigInt::from(t)) * two_pow(-e))])
        })
        .collect()
}

/// Whether player II wins from `seq` with `rounds` left against every
/// sequence of singleton menu moves.
pub fn minimax(
    seq: &FiniteBlockSequence,
    rounds: usize,
    menu: &[BlockVector],
    family: &dyn Family,
) -> bool {
    match family.decide(seq) {
        Determination::In => return true,
        Determination::Out => return false,
        Determination::Undetermined => {}
    }
    if rounds == 0 {
        return false;
    }
    menu.iter().all(|m| {
        singleton_replies(m, seq.last()).into_iter().any(|o| {
            let mut next = seq.clone();
            next.push(o).unwrap();
            minimax(&next, rounds - 1, menu, family)
        })
    })
}

type Leaf<'a> = dyn FnMut(&[u128], u128, &[u128]) + 'a;

/// Depth-first walk over every assignment of the first 12 elements of
/// `N = {(2n+1)k}` to `{none, M_0, …, M_{k-1}}`, calling `leaf` with the
/// tuple, the expected `L` and its expected mod-k classes.
///
/// For `m ∈ M_i` the interval is `[m - i, m - i + k - 1]`; the walk checks
/// that it is disjoint from the intervals so far and meets `N` only in `m`
/// and reports a violation through `bad` otherwise.
pub struct DisjointWalk {
    pub k: usize,
    elements: Vec<usize>,
    n_mask: u128,
    pub m: Vec<u128>,
    expected: Vec<u128>,
}

impl DisjointWalk {
    pub fn new(k: usize) -> Self {
        let elements: Vec<usize> = (0..12).map(|n| (2 * n + 1) * k).collect();
        let n_mask = (0..128usize)
            .filter(|x| x % (2 * k) == k)
            .fold(0u128, |acc, x| acc | 1 << x);
        DisjointWalk {
            k,
            elements,
            n_mask,
            m: vec![0; k],
            expected: vec![0; k],
        }
    }

    pub fn run(&mut self, leaf: &mut Leaf, bad: &mut dyn FnMut(String)) {
        self.go(0, 0, 0, leaf, bad);
    }

    fn go(&mut self, j: usize, l: u128, rank: usize, leaf: &mut Leaf, bad: &mut dyn FnMut(String)) {
        let k = self.k;
        if j == self.elements.len() {
            leaf(&self.m, l, &self.expected);
            return;
        }
        self.go(j + 1, l, rank, leaf, bad);
        let x = self.elements[j];
        for i in 0..k {
            let lo = x - i;
            let interval = ((1u128 << k) - 1) << lo;
            if interval & l != 0 {
                bad(format!(
                    "k = {k}: I_{x} for M_{i} overlaps an earlier interval"
                ));
                continue;
            }
            if interval & self.n_mask != 1 << x {
                bad(format!("k = {k}: I_{x} ∩ N ≠ {{{x}}}"));
                continue;
            }
            let saved = self.expected.clone();
            // the new interval is the next k elements of L, which cycle
            // through the classes starting at `rank mod k`
            for t in 0..k {
                self.expected[(rank + t) % k] |= 1 << (lo + t);
            }
            self.m[i] |= 1 << x;
            self.go(j + 1, l | interval, rank + k, leaf, bad);
            self.m[i] &= !(1 << x);
            self.expected = saved;
        }
    }
}
