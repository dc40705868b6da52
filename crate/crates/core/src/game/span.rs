//! `<z̄>_𝔇`: the net elements in the span of a finite block sequence.
//!
//! A vector `x = Σ_{j∈[a,b]} c_j z_j` with `c_a, c_b ≠ 0` has support segment
//! `[min supp z_a, max supp z_b]` of some length `l`, so `x ∈ 𝔇` forces each
//! `c_j z_j[i]` into `Λ(i, l)`. For fixed `(a, b)` that is a rank-one lattice
//! condition `c_j ∈ g_j·ℤ` per vector, and the norm budget bounds the
//! multiplier. Enumerating `(a, b, u_a … u_b)` with `c_j = u_j g_j` therefore
//! lists `<z̄>_𝔇` exactly, without scanning the whole window below
//! `max supp z̄`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::Result;
use crate::net::NetConfig;
use crate::norm::NormKind;
use crate::scalar::{floor_nonneg, pow2, Rational};
use crate::vector::{BlockVector, FiniteBlockSequence};

fn rational_lcm(a: &Rational, b: &Rational) -> Rational {
    Rational::new(a.numer().lcm(b.numer()), a.denom().gcd(b.denom()))
}

/// First index whose vector is strictly block-after `after`.
fn first_eligible(z: &FiniteBlockSequence, after: Option<&BlockVector>) -> usize {
    let bound = after.and_then(BlockVector::max_support);
    match bound {
        None => 0,
        Some(m) => z
            .iter()
            .position(|v| v.min_support().is_some_and(|lo| lo > m))
            .unwrap_or(z.len()),
    }
}

struct SpanSegment<'a> {
    z: &'a [BlockVector],
    a: usize,
    kind: NormKind,
    /// `g_j`: admissible coefficients are `u·g_j`.
    grids: Vec<Rational>,
    /// Per-vector norm cost of coefficient 1 (`‖z_j‖₁`, `max|z_j|`, `‖z_j‖₂²`).
    weights: Vec<Rational>,
    /// `⌊2C / (g_j·max|z_j|)⌋`.
    caps: Vec<BigInt>,
}

impl<'a> SpanSegment<'a> {
    fn new(z: &'a [BlockVector], a: usize, b: usize, cfg: &NetConfig) -> Self {
        let lo = z[a].min_support().expect("nonzero");
        let hi = z[b].max_support().expect("nonzero");
        let l = hi - lo + 1;
        let kind = cfg.norm().kind();
        let bound = cfg.norm().coefficient_bound();
        let mut grids = Vec::new();
        let mut weights = Vec::new();
        let mut caps = Vec::new();
        for zj in &z[a..=b] {
            let mut g: Option<Rational> = None;
            for (i, c) in zj.iter() {
                let step = pow2(-(cfg.lattice_exponent(i, l) as i64)) / c.abs();
                g = Some(match g {
                    None => step,
                    Some(prev) => rational_lcm(&prev, &step),
                });
            }
            let g = g.expect("nonzero");
            let w = match kind {
                NormKind::Ell1 => zj.iter().map(|(_, c)| c.abs()).sum(),
                NormKind::Sup => zj.max_abs(),
                NormKind::Ell2 => zj.iter().map(|(_, c)| c * c).sum(),
            };
            caps.push(floor_nonneg(&(&bound / (&g * zj.max_abs()))));
            grids.push(g);
            weights.push(w);
        }
        SpanSegment {
            z,
            a,
            kind,
            grids,
            weights,
            caps,
        }
    }

    fn len(&self) -> usize {
        self.grids.len()
    }

    fn is_endpoint(&self, j: usize) -> bool {
        j == 0 || j + 1 == self.len()
    }

    fn cost(&self, j: usize, u: &BigInt) -> Rational {
        let c = Rational::from_integer(u.abs()) * &self.grids[j];
        match self.kind {
            NormKind::Ell1 | NormKind::Sup => c * &self.weights[j],
            NormKind::Ell2 => &c * &c * &self.weights[j],
        }
    }

    fn combine(&self, acc: &Rational, cost: Rational) -> Rational {
        match self.kind {
            NormKind::Sup => acc.clone().max(cost),
            NormKind::Ell1 | NormKind::Ell2 => acc + cost,
        }
    }

    /// Largest `|u_j|` keeping the accumulated cost within the unit budget.
    fn reach(&self, j: usize, acc: &Rational) -> BigInt {
        let one = Rational::one();
        let room = match self.kind {
            NormKind::Sup => one,
            NormKind::Ell1 | NormKind::Ell2 => &one - acc,
        };
        let g = &self.grids[j];
        let r = match self.kind {
            NormKind::Ell1 | NormKind::Sup => floor_nonneg(&(room / (g * &self.weights[j]))),
            NormKind::Ell2 => floor_nonneg(&(room / (g * g * &self.weights[j]))).sqrt(),
        };
        r.min(self.caps[j].clone())
    }

    fn vector(&self, us: &[BigInt]) -> BlockVector {
        BlockVector::from_pairs(
            us.iter()
                .enumerate()
                .filter(|(_, u)| !u.is_zero())
                .flat_map(|(j, u)| {
                    let c = Rational::from_integer(u.clone()) * &self.grids[j];
                    self.z[self.a + j].iter().map(move |(i, x)| (i, x * &c))
                }),
        )
    }

    fn enumerate_into(&self, out: &mut Vec<BlockVector>) {
        let mut us = vec![BigInt::zero(); self.len()];
        self.descend(0, &Rational::zero(), &mut us, out);
    }

    fn descend(&self, j: usize, acc: &Rational, us: &mut Vec<BigInt>, out: &mut Vec<BlockVector>) {
        if j == self.len() {
            out.push(self.vector(us));
            return;
        }
        let r = self.reach(j, acc);
        let mut u = -r.clone();
        while u <= r {
            if !(u.is_zero() && self.is_endpoint(j)) {
                let next = self.combine(acc, self.cost(j, &u));
                us[j] = u.clone();
                self.descend(j + 1, &next, us, out);
            }
            u += 1;
        }
        us[j] = BigInt::zero();
    }
}

/// All `x ∈ 𝔇 ∩ span(z̄)`, optionally only those strictly block-after
/// `after`, in canonical order.
pub fn enumerate_net_in_span(
    z: &FiniteBlockSequence,
    after: Option<&BlockVector>,
    cfg: &NetConfig,
) -> Result<Vec<BlockVector>> {
    let zs = z.as_slice();
    let mut out = Vec::new();
    for a in first_eligible(z, after)..zs.len() {
        for b in a..zs.len() {
            SpanSegment::new(zs, a, b, cfg).enumerate_into(&mut out);
        }
    }
    out.sort_by(|x, y| x.canonical_cmp(y));
    Ok(out)
}

/// The first element of [`enumerate_net_in_span`] without listing the rest.
pub fn first_net_in_span(
    z: &FiniteBlockSequence,
    after: Option<&BlockVector>,
    cfg: &NetConfig,
) -> Result<Option<BlockVector>> {
    let zs = z.as_slice();
    for a in first_eligible(z, after)..zs.len() {
        // support ranges sort by (lo, hi), so the singleton segment comes first
        let single = SpanSegment::new(zs, a, a, cfg);
        let r = single.reach(0, &Rational::zero());
        if !r.is_zero() {
            let lead_positive = zs[a].iter().next().expect("nonzero").1.is_positive();
            let u = if lead_positive { -r } else { r };
            return Ok(Some(single.vector(&[u])));
        }
        for b in a + 1..zs.len() {
            let mut found = Vec::new();
            SpanSegment::new(zs, a, b, cfg).enumerate_into(&mut found);
            if let Some(first) = found.into_iter().min_by(|x, y| x.canonical_cmp(y)) {
                return Ok(Some(first));
            }
        }
    }
    Ok(None)
}

fn random_multiplier<R: Rng + ?Sized>(
    rng: &mut R,
    reach: &BigInt,
    nonzero: bool,
) -> Option<BigInt> {
    let r = reach.to_i128().unwrap_or(i128::MAX / 2);
    if nonzero && r == 0 {
        return None;
    }
    loop {
        let u = rng.gen_range(-r..=r);
        if !(nonzero && u == 0) {
            return Some(BigInt::from(u));
        }
    }
}

/// A random element of `<z̄>_𝔇` block-after `after`, built from one or two
/// consecutive vectors of `z̄`; falls back to [`first_net_in_span`].
pub fn sample_net_in_span<R: Rng + ?Sized>(
    z: &FiniteBlockSequence,
    after: Option<&BlockVector>,
    cfg: &NetConfig,
    rng: &mut R,
) -> Result<Option<BlockVector>> {
    let zs = z.as_slice();
    let start = first_eligible(z, after);
    if start == zs.len() {
        return Ok(None);
    }
    for _ in 0..16 {
        let a = rng.gen_range(start..zs.len());
        let b = if a + 1 < zs.len() && rng.gen_bool(0.5) {
            a + 1
        } else {
            a
        };
        let seg = SpanSegment::new(zs, a, b, cfg);
        let mut acc = Rational::zero();
        let mut us = Vec::with_capacity(seg.len());
        let mut ok = true;
        for j in 0..seg.len() {
            match random_multiplier(rng, &seg.reach(j, &acc), seg.is_endpoint(j)) {
                Some(u) => {
                    acc = seg.combine(&acc, seg.cost(j, &u));
                    us.push(u);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(Some(seg.vector(&us)));
        }
    }
    first_net_in_span(z, after, cfg)
}
