//! Finite windows of the net: every `x ∈ 𝔇` with `supp x ⊆ [0, n)`.
//!
//! Each segment `[lo, hi]` of the window is scanned with an odometer over the
//! integer mantissas `t_i` (`λ_i = t_i·2^(-e_i)`, `e_i = l(k_i+1)`). All
//! arithmetic happens over the common denominator `2^E`, `E = max e_i`, in
//! `i128`; at every depth the admissible range of `t_i` is computed from the
//! norm budget still available, so the cursor never visits a tuple outside
//! the unit ball. This relies on the shipped norms being lattice norms: the
//! norm of a partial tuple never exceeds the norm of its completion.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::ToPrimitive;

use super::{NetConfig, Segment};
use crate::error::{Error, Result};
use crate::norm::NormKind;
use crate::scalar::{floor_nonneg, pow2, Rational};
use crate::vector::BlockVector;

/// Largest lattice exponent the `i128` cursor accepts.
pub const MAX_LATTICE_EXPONENT: u64 = 60;

struct SegmentScan {
    segment: Segment,
    exponents: Vec<u64>,
    /// `2^(E - e_i)`.
    weights: Vec<i128>,
    /// `⌊2C·2^(e_i)⌋`.
    caps: Vec<i128>,
    t: Vec<i128>,
    /// Largest admissible `|t_i|` given the entries before `i`.
    reach: Vec<i128>,
    /// Norm cost of `t_0 … t_i`.
    acc: Vec<i128>,
    budget: i128,
    started: bool,
}

impl SegmentScan {
    fn new(segment: Segment, cfg: &NetConfig) -> Result<Self> {
        let l = segment.len();
        let exponents: Vec<u64> = (segment.lo..=segment.hi)
            .map(|i| cfg.lattice_exponent(i, l))
            .collect();
        let top = *exponents.iter().max().expect("segment is nonempty");
        if top > MAX_LATTICE_EXPONENT {
            return Err(Error::WindowTooLarge(top));
        }
        let weights = exponents.iter().map(|&e| 1i128 << (top - e)).collect();
        let bound = cfg.norm().coefficient_bound();
        let caps = exponents
            .iter()
            .map(|&e| {
                floor_nonneg(&(&bound * pow2(e as i64)))
                    .to_i128()
                    .unwrap_or(i128::MAX)
            })
            .collect();
        let budget = match cfg.norm().kind() {
            NormKind::Ell1 | NormKind::Sup => 1i128 << top,
            NormKind::Ell2 => 1i128 << (2 * top),
        };
        Ok(SegmentScan {
            segment,
            exponents,
            weights,
            caps,
            t: vec![0; l],
            reach: vec![0; l],
            acc: vec![0; l],
            budget,
            started: false,
        })
    }

    fn len(&self) -> usize {
        self.t.len()
    }

    fn is_endpoint(&self, j: usize) -> bool {
        j == 0 || j + 1 == self.len()
    }

    fn cost(kind: NormKind, t: i128, w: i128) -> i128 {
        match kind {
            NormKind::Ell1 | NormKind::Sup => t.abs() * w,
            NormKind::Ell2 => t * t * w * w,
        }
    }

    fn combine(kind: NormKind, acc: i128, cost: i128) -> i128 {
        match kind {
            NormKind::Sup => acc.max(cost),
            NormKind::Ell1 | NormKind::Ell2 => acc + cost,
        }
    }

    fn prior(&self, j: usize) -> i128 {
        if j == 0 {
            0
        } else {
            self.acc[j - 1]
        }
    }

    fn compute_reach(&self, kind: NormKind, j: usize) -> i128 {
        let room = self.budget - self.prior(j);
        let w = self.weights[j];
        let r = match kind {
            NormKind::Ell1 => room / w,
            NormKind::Sup => self.budget / w,
            NormKind::Ell2 => (room / (w * w)).sqrt(),
        };
        r.min(self.caps[j])
    }

    fn set(&mut self, kind: NormKind, j: usize, t: i128) {
        self.t[j] = t;
        self.acc[j] = Self::combine(kind, self.prior(j), Self::cost(kind, t, self.weights[j]));
    }

    fn first_at(&mut self, kind: NormKind, j: usize) -> bool {
        let r = self.compute_reach(kind, j);
        self.reach[j] = r;
        if r == 0 && self.is_endpoint(j) {
            return false;
        }
        self.set(kind, j, -r);
        true
    }

    fn bump_at(&mut self, kind: NormKind, j: usize) -> bool {
        let mut next = self.t[j] + 1;
        if next == 0 && self.is_endpoint(j) {
            next = 1;
        }
        if next > self.reach[j] {
            return false;
        }
        self.set(kind, j, next);
        true
    }

    /// Moves to the next admissible tuple in lexicographic order.
    fn advance(&mut self, kind: NormKind) -> bool {
        let l = self.len() as isize;
        let (mut j, mut descending) = if self.started {
            (l - 1, false)
        } else {
            self.started = true;
            (0, true)
        };
        loop {
            if descending {
                if j == l {
                    return true;
                }
                if self.first_at(kind, j as usize) {
                    j += 1;
                } else {
                    descending = false;
                    j -= 1;
                }
            } else {
                if j < 0 {
                    return false;
                }
                if self.bump_at(kind, j as usize) {
                    j += 1;
                    descending = true;
                } else {
                    j -= 1;
                }
            }
            if j < 0 {
                return false;
            }
        }
    }

    fn vector(&self) -> BlockVector {
        BlockVector::from_pairs(self.t.iter().enumerate().filter(|(_, t)| **t != 0).map(
            |(j, &t)| {
                (
                    self.segment.lo + j,
                    Rational::from_integer(BigInt::from(t)) * pow2(-(self.exponents[j] as i64)),
                )
            },
        ))
    }
}

/// Streaming cursor over the window `[0, n)`: segments ordered by `(lo, hi)`,
/// mantissa tuples ascending within each segment. The resulting order is the
/// canonical order of [`BlockVector::canonical_cmp`].
pub struct NetCursor {
    kind: NormKind,
    segments: Vec<Segment>,
    next_segment: usize,
    scans: Vec<SegmentScan>,
    current: Option<usize>,
}

impl NetCursor {
    pub fn new(n: usize, cfg: &NetConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition(
                "window length must be at least 1".into(),
            ));
        }
        let segments: Vec<Segment> = (0..n)
            .flat_map(|lo| (lo..n).map(move |hi| Segment { lo, hi }))
            .collect();
        let scans = segments
            .iter()
            .map(|&s| SegmentScan::new(s, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(NetCursor {
            kind: cfg.norm().kind(),
            segments,
            next_segment: 0,
            scans,
            current: None,
        })
    }

    /// Steps to the next net element; `false` once the window is exhausted.
    pub fn advance(&mut self) -> bool {
        loop {
            if let Some(s) = self.current {
                if self.scans[s].advance(self.kind) {
                    return true;
                }
                self.current = None;
            }
            if self.next_segment == self.segments.len() {
                return false;
            }
            self.current = Some(self.next_segment);
            self.next_segment += 1;
        }
    }

    fn scan(&self) -> &SegmentScan {
        &self.scans[self.current.expect("cursor is positioned")]
    }

    pub fn segment(&self) -> Segment {
        self.scan().segment
    }

    /// `t_lo … t_hi` of the current element.
    pub fn mantissas(&self) -> &[i128] {
        &self.scan().t
    }

    /// `e_lo … e_hi`, so that `λ_i = t_i·2^(-e_i)`.
    pub fn exponents(&self) -> &[u64] {
        &self.scan().exponents
    }

    pub fn vector(&self) -> BlockVector {
        self.scan().vector()
    }
}

/// [`NetCursor`] as an iterator of vectors.
pub struct NetIter {
    cursor: NetCursor,
}

impl NetIter {
    pub fn new(n: usize, cfg: &NetConfig) -> Result<Self> {
        Ok(NetIter {
            cursor: NetCursor::new(n, cfg)?,
        })
    }
}

impl Iterator for NetIter {
    type Item = BlockVector;

    fn next(&mut self) -> Option<BlockVector> {
        if self.cursor.advance() {
            Some(self.cursor.vector())
        } else {
            None
        }
    }
}

/// The complete, canonically sorted list of `x ∈ 𝔇` with `supp x ⊆ [0, n)`.
pub fn enumerate_net_below(n: usize, cfg: &NetConfig) -> Result<Vec<BlockVector>> {
    Ok(NetIter::new(n, cfg)?.collect())
}

/// `|𝔇 ∩ <(e_i)_{i<n}>|` without materializing the vectors.
pub fn count_net_below(n: usize, cfg: &NetConfig) -> Result<u64> {
    let mut cursor = NetCursor::new(n, cfg)?;
    let mut count = 0u64;
    while cursor.advance() {
        count += 1;
    }
    Ok(count)
}
