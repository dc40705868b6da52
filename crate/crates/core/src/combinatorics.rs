//! Mod-k splitting of index sets, the interval disjointification that turns
//! pairwise disjoint tuples inside `N = {(2n+1)k}` into tuples respecting the
//! mod-k classes of a single set `L`, and the coefficient transport that
//! rebuilds a k-tuple of block sequences next to a reference tuple.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::{dist_leq_delta, NormPlugin, NormValue};
use crate::scalar::{format_rational, int, serde_rational, Rational};
use crate::tolerance::ToleranceSequence;
use crate::vector::{is_block_subsequence, FiniteBlockSequence};

/// A finite, strictly increasing set of naturals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Sorts and deduplicates.
    pub fn from_unsorted(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        IndexSet(elements)
    }

    pub fn new(elements: Vec<usize>) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(format!(
                "index set is not strictly increasing at {} ≥ {}",
                w[0], w[1]
            )));
        }
        Ok(IndexSet(elements))
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        IndexSet((lo..hi).collect())
    }

    #[inline]
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    #[inline]
    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    #[inline]
    pub fn is_subset(&self, other: &IndexSet) -> bool {
        let mut rest = other.0.iter();
        self.0.iter().all(|x| rest.any(|y| y == x))
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&x| !other.contains(x))
    }

    #[inline]
    pub fn clear(&mut self) {
        self.0.clear();
    }

    /// Appends `x`, which must exceed every element.
    #[inline]
    pub fn push(&mut self, x: usize) -> Result<()> {
        if self.0.last().is_some_and(|&y| y >= x) {
            return Err(Error::Precondition(format!(
                "{x} does not exceed the last element of the index set"
            )));
        }
        self.0.push(x);
        Ok(())
    }

    pub fn without(&self, x: usize) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&y| y != x).collect())
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.0
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Precondition(format!("k = {k}; need k ≥ 2")));
    }
    Ok(())
}

/// `m ∈ N = {(2n+1)k : n ∈ ℕ}`.
#[inline]
pub fn in_odd_multiples(k: usize, m: usize) -> bool {
    m % (2 * k) == k
}

/// The first `count` elements of `N = {(2n+1)k}`.
pub fn odd_multiples(k: usize, count: usize) -> IndexSet {
    IndexSet((0..count).map(|n| (2 * n + 1) * k).collect())
}

/// `L_{i(mod k)} = {l_{kn+i}}` for `i < k`, from the increasing enumeration
/// of `L`. Trailing incomplete blocks follow the same formula.
pub fn mod_k_classes(l: &IndexSet, k: usize) -> Result<Vec<IndexSet>> {
    check_k(k)?;
    let mut classes = Vec::new();
    fill_classes(l.as_slice(), k, &mut classes);
    Ok(classes)
}

fn fill_classes(l: &[usize], k: usize, classes: &mut Vec<IndexSet>) {
    classes.resize_with(k, IndexSet::default);
    for c in classes.iter_mut() {
        c.0.clear();
    }
    for (i, c) in classes.iter_mut().enumerate() {
        c.0.extend((i..l.len()).step_by(k).map(|j| l[j]));
    }
}

/// `(L_i) ∈ ([L]^∞)^k_∘`: each `L_i ⊆ L_{i(mod k)}`.
pub fn in_circ_product(tuple: &[IndexSet], l: &IndexSet, k: usize) -> Result<bool> {
    let classes = mod_k_classes(l, k)?;
    Ok(tuple.len() == k && tuple.iter().zip(&classes).all(|(t, c)| t.is_subset(c)))
}

/// `(L_i) ∈ ([N]^∞)^k_⊥`: pairwise disjoint.
pub fn is_pairwise_disjoint(tuple: &[IndexSet]) -> bool {
    tuple
        .iter()
        .enumerate()
        .all(|(i, a)| tuple[i + 1..].iter().all(|b| a.is_disjoint(b)))
}

/// The output of [`disjointify`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTuplePartition {
    pub k: usize,
    #[serde(rename = "L")]
    pub l: IndexSet,
    pub classes: Vec<IndexSet>,
    /// `m ↦ [m - i_m, m - i_m + k - 1]`, sorted by `m`; a JSON object.
    #[serde(with = "interval_map")]
    pub intervals: Vec<(usize, [usize; 2])>,
}

mod interval_map {
    use std::collections::BTreeMap;

    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(usize, [usize; 2])], s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(v.len()))?;
        for (m, iv) in v {
            map.serialize_entry(m, iv)?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(usize, [usize; 2])>, D::Error> {
        Ok(BTreeMap::<usize, [usize; 2]>::deserialize(d)?
            .into_iter()
            .collect())
    }
}

/// Builds `L = ⋃ I_m` with `I_m = [m - i_m, m - i_m + k - 1]`, where `i_m`
/// is the coordinate holding `m`, and checks `M_i ⊆ L_{i(mod k)}` for every
/// `i`, that the intervals are pairwise disjoint and that `I_m ∩ N = {m}`.
pub fn disjointify(m: &[IndexSet], k: usize) -> Result<KTuplePartition> {
    let mut out = KTuplePartition::default();
    disjointify_into(m, k, &mut out)?;
    Ok(out)
}

/// [`disjointify`] writing into `out`, reusing its buffers. Inputs whose
/// elements satisfy `x + k ≤ 128` go through [`disjointify_masks`].
pub fn disjointify_into(m: &[IndexSet], k: usize, out: &mut KTuplePartition) -> Result<()> {
    check_k(k)?;
    if m.len() != k {
        return Err(Error::LengthMismatch {
            left: m.len(),
            right: k,
        });
    }
    let fits = k < MASK_BITS
        && m.iter()
            .all(|mi| mi.as_slice().last().is_none_or(|&x| x + k <= MASK_BITS));
    if !fits {
        return disjointify_general(m, k, out);
    }
    let masks: Vec<u128> = m
        .iter()
        .map(|mi| mi.iter().fold(0u128, |acc, &x| acc | 1 << x))
        .collect();
    let mut class_masks = vec![0u128; k];
    let l = disjointify_masks(&masks, k, &mut class_masks)?;

    out.k = k;
    out.l.0.clear();
    out.l.0.extend(bits(l));
    out.classes.resize_with(k, IndexSet::default);
    for (c, mask) in out.classes.iter_mut().zip(&class_masks) {
        c.0.clear();
        c.0.extend(bits(*mask));
    }
    out.intervals.clear();
    let union = masks.iter().fold(0, |acc, mi| acc | mi);
    for x in bits(union) {
        let i = masks
            .iter()
            .position(|mi| mi >> x & 1 == 1)
            .expect("x lies in the union");
        out.intervals.push((x, [x - i, x - i + k - 1]));
    }
    Ok(())
}

const MASK_BITS: usize = 128;

fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let x = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(x)
    })
}

/// `N ∩ [0, 128)` as a bitset.
pub fn odd_multiples_mask(k: usize) -> u128 {
    if k >= MASK_BITS {
        return 0;
    }
    // bit k, then copies at every multiple of the period 2k
    let period = 2 * k;
    let mut mask = 1u128 << k;
    let mut width = period;
    while width < MASK_BITS {
        mask |= mask << width;
        width *= 2;
    }
    mask
}

/// Bitset form of [`disjointify`]: bit `x` of `m[i]` marks `x ∈ M_i`, and
/// every element must satisfy `x + k ≤ 128`. Writes the masks of the classes
/// `L_{i(mod k)}` into `classes` and returns `L`.
pub fn disjointify_masks(m: &[u128], k: usize, classes: &mut [u128]) -> Result<u128> {
    check_k(k)?;
    if m.len() != k || classes.len() != k {
        return Err(Error::LengthMismatch {
            left: m.len().max(classes.len()),
            right: k,
        });
    }
    if k >= MASK_BITS {
        return Err(Error::Precondition(format!(
            "k = {k} is too large for 128-bit sets"
        )));
    }
    let n_mask = odd_multiples_mask(k);
    let mut union = 0u128;
    let mut l = 0u128;
    let mut starts = 0u128;
    for (i, &mi) in m.iter().enumerate() {
        if mi >> (MASK_BITS - k + 1) != 0 {
            let x = MASK_BITS - 1 - mi.leading_zeros() as usize;
            return Err(Error::Precondition(format!(
                "{x} + {k} exceeds the 128-bit range"
            )));
        }
        if mi & !n_mask != 0 {
            let x = (mi & !n_mask).trailing_zeros();
            return Err(Error::Precondition(format!(
                "{x} is not an odd multiple of {k}"
            )));
        }
        if union & mi != 0 {
            let x = (union & mi).trailing_zeros();
            let j = m[..i].iter().position(|mj| mj >> x & 1 == 1).unwrap_or(0);
            return Err(Error::Precondition(format!(
                "{x} lies in both M_{j} and M_{i}"
            )));
        }
        union |= mi;
        // lows of one class sit 2k apart, so the product has no carries and
        // runs of one class never meet; only other classes can overlap
        let part = (mi >> i).wrapping_mul((1u128 << k) - 1);
        if l & part != 0 {
            return Err(Error::certification(
                format!("intervals I_m, m ∈ M_{i}"),
                "overlapping",
                "pairwise disjoint",
            ));
        }
        l |= part;
        starts |= mi >> i;
    }
    if l & n_mask != union {
        let x = (l & n_mask & !union).trailing_zeros();
        return Err(Error::certification(
            "L ∩ N",
            format!("contains {x}"),
            "⋃ M_i",
        ));
    }
    // L is a disjoint union of runs of length k, so every run starts at a
    // rank divisible by k and its t-th element lands in class t
    for (t, c) in classes.iter_mut().enumerate() {
        *c = starts << t;
    }
    for (i, (&mi, &ci)) in m.iter().zip(classes.iter()).enumerate() {
        if mi & !ci != 0 {
            let x = (mi & !ci).trailing_zeros();
            return Err(Error::certification(
                format!("M_{i} ⊆ L_{i}(mod {k})"),
                format!("{x} ∉ L_{i}(mod {k})"),
                "inclusion",
            ));
        }
    }
    Ok(l)
}

fn disjointify_general(m: &[IndexSet], k: usize, out: &mut KTuplePartition) -> Result<()> {
    out.k = k;
    let intervals = &mut out.intervals;
    intervals.clear();
    for (i, mi) in m.iter().enumerate() {
        for &x in mi.iter() {
            if !in_odd_multiples(k, x) {
                return Err(Error::Precondition(format!(
                    "{x} is not an odd multiple of {k}"
                )));
            }
            intervals.push((x, [x - i, x - i + k - 1]));
        }
    }
    intervals.sort_unstable_by_key(|e| e.0);
    if let Some(w) = intervals.windows(2).find(|w| w[0].0 == w[1].0) {
        let x = w[0].0;
        return Err(Error::Precondition(format!(
            "{x} lies in both M_{} and M_{}",
            x - w[0].1[0],
            x - w[1].1[0]
        )));
    }

    let l = &mut out.l.0;
    l.clear();
    let mut prev_hi: Option<usize> = None;
    for &(x, [lo, hi]) in intervals.iter() {
        if let Some(p) = prev_hi.filter(|&p| p >= lo) {
            return Err(Error::certification(
                format!("I_{x} overlaps its predecessor"),
                lo,
                p,
            ));
        }
        prev_hi = Some(hi);
        // the neighbours of x in N are x ± 2k
        let below = x.checked_sub(2 * k).filter(|&y| y >= lo);
        let above = Some(x + 2 * k).filter(|&y| y <= hi);
        if let Some(y) = below.or(above) {
            return Err(Error::certification(
                format!("I_{x} ∩ N"),
                format!("contains {y}"),
                format!("{{{x}}}"),
            ));
        }
        l.extend(lo..hi + 1);
    }
    fill_classes(&out.l.0, k, &mut out.classes);
    for (i, (mi, c)) in m.iter().zip(&out.classes).enumerate() {
        if !mi.is_subset(c) {
            return Err(Error::certification(
                format!("M_{i} ⊆ L_{i}(mod {k})"),
                format!("{:?}", mi.as_slice()),
                format!("{:?}", c.as_slice()),
            ));
        }
    }
    Ok(())
}

/// For `|L| ≥ k+1`, a subset `L' = L ∖ {l_0}` and a tuple in
/// `([L']^∞)^k_∘ ∖ ([L]^∞)^k_∘`: dropping `l_0` shifts every element into
/// the neighbouring class.
pub fn non_heredity_witness(l: &IndexSet, k: usize) -> Result<Option<(IndexSet, Vec<IndexSet>)>> {
    check_k(k)?;
    if l.len() < k + 1 {
        return Ok(None);
    }
    let l_prime = l.without(l.as_slice()[0]);
    let tuple = mod_k_classes(&l_prime, k)?;
    if !in_circ_product(&tuple, &l_prime, k)? || in_circ_product(&tuple, l, k)? {
        return Err(Error::certification(
            "non-heredity witness",
            "not separating",
            "separating",
        ));
    }
    Ok(Some((l_prime, tuple)))
}

/// `(Z|_{L_{i(mod k)}})_{i<k}`.
pub fn block_mod_k_restriction(
    z: &FiniteBlockSequence,
    l: &IndexSet,
    k: usize,
) -> Result<Vec<FiniteBlockSequence>> {
    mod_k_classes(l, k)?
        .iter()
        .map(|c| z.restrict(c.as_slice()))
        .collect()
}

/// Bounds checked for one `v^i_n`.
#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionEntry {
    pub coordinate: usize,
    pub n: usize,
    /// `F^i_n`, as indices into `W`.
    pub support: Vec<usize>,
    #[serde(with = "serde_rational")]
    pub lambda_max: Rational,
    /// `2C`.
    #[serde(with = "serde_rational")]
    pub lambda_bound: Rational,
    pub error: NormValue,
    /// `2C Σ_{j∈F} δ'_j`.
    #[serde(with = "serde_rational")]
    pub sum_bound: Rational,
    /// `4C δ'_n`.
    #[serde(with = "serde_rational")]
    pub tail_bound: Rational,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub tuple: Vec<FiniteBlockSequence>,
    pub entries: Vec<ReconstructionEntry>,
}

/// Rebuilds `V_i = (Σ_{j∈F^i_n} λ_j v_j)_n` from `w^i_n = Σ_{j∈F^i_n} λ_j w_j`,
/// where `F^i_n` ranges over `W`-indices `≡ i (mod k)`.
///
/// Requires `dist(V, W) ≤ Δ'`, a summable `Δ'`, `‖w_j‖ = 1` and
/// `‖w^i_n‖ ≤ 1`. Every `|λ_j| ≤ 2C` and
/// `‖v^i_n - w^i_n‖ ≤ 2C Σ_F δ'_j ≤ 4Cδ'_n ≤ δ_n` is checked exactly.
pub fn reconstruct_tuple(
    v: &FiniteBlockSequence,
    w: &FiniteBlockSequence,
    w_tuple: &[FiniteBlockSequence],
    delta_prime: &ToleranceSequence,
    delta: &ToleranceSequence,
    norm: &NormPlugin,
) -> Result<Reconstruction> {
    let k = w_tuple.len();
    check_k(k)?;
    delta_prime.check_summable()?;
    if !dist_leq_delta(v, w, delta_prime, norm)? {
        return Err(Error::Precondition("dist(V, W) exceeds Δ'".into()));
    }
    for (j, wj) in w.iter().enumerate() {
        if !norm.norm(wj).eq_rational(&Rational::one()) {
            return Err(Error::Precondition(format!(
                "‖w_{j}‖ = {} is not 1",
                norm.norm(wj)
            )));
        }
    }
    let c = norm.basis_constant();
    let lambda_bound = int(2) * c;
    let all = IndexSet::range(0, w.len());
    let classes = mod_k_classes(&all, k)?;

    let mut tuple = Vec::with_capacity(k);
    let mut entries = Vec::new();
    for (i, wi) in w_tuple.iter().enumerate() {
        let board_w = w.restrict(classes[i].as_slice())?;
        let board_v = v.restrict(classes[i].as_slice())?;
        let mut out = Vec::with_capacity(wi.len());
        for (n, win) in wi.iter().enumerate() {
            if !norm.in_unit_ball(win) {
                return Err(Error::OutsideUnitBall(format!("w^{i}_{n} = {win}")));
            }
            let lambdas = board_w.span_coefficients(win).ok_or_else(|| {
                Error::NotInSpan(format!("w^{i}_{n} is not in the span of W|_ℕ_{i}(mod {k})"))
            })?;
            let support: Vec<usize> = lambdas
                .iter()
                .enumerate()
                .filter(|(_, l)| !l.is_zero())
                .map(|(p, _)| classes[i].as_slice()[p])
                .collect();
            let lambda_max = lambdas
                .iter()
                .map(|l| l.abs())
                .max()
                .unwrap_or_else(Rational::zero);
            if lambda_max > lambda_bound {
                return Err(Error::certification(
                    format!("max |λ_j| for w^{i}_{n}"),
                    format_rational(&lambda_max),
                    format_rational(&lambda_bound),
                ));
            }
            let vin = board_v.combine(lambdas.iter().enumerate().filter(|(_, l)| !l.is_zero()));
            let error = norm.norm(&(&vin - win));
            let sum: Rational = support.iter().map(|&j| delta_prime.delta(j)).sum();
            let sum_bound = &lambda_bound * sum;
            let tail_bound = int(4) * c * delta_prime.delta(n);
            let delta_n = delta.delta(n);
            if !error.le(&sum_bound) {
                return Err(Error::certification(
                    format!("‖v^{i}_{n} - w^{i}_{n}‖"),
                    &error,
                    format_rational(&sum_bound),
                ));
            }
            if sum_bound > tail_bound {
                return Err(Error::certification(
                    format!("2C Σ δ'_j over F^{i}_{n}"),
                    format_rational(&sum_bound),
                    format_rational(&tail_bound),
                ));
            }
            if tail_bound > delta_n {
                return Err(Error::certification(
                    format!("4Cδ'_{n}"),
                    format_rational(&tail_bound),
                    format_rational(&delta_n),
                ));
            }
            entries.push(ReconstructionEntry {
                coordinate: i,
                n,
                support,
                lambda_max,
                lambda_bound: lambda_bound.clone(),
                error,
                sum_bound,
                tail_bound,
                delta: delta_n,
                pass: true,
            });
            out.push(vin);
        }
        tuple.push(FiniteBlockSequence::new(out)?);
    }
    Ok(Reconstruction { tuple, entries })
}

/// Some member `(V_i)` of `family` has `V_i ⪯ U_i` for every `i`.
pub fn upward_closure_member(
    u_tuple: &[FiniteBlockSequence],
    family: &[Vec<FiniteBlockSequence>],
) -> bool {
    family.iter().any(|member| {
        member.len() == u_tuple.len()
            && member
                .iter()
                .zip(u_tuple)
                .all(|(v, u)| is_block_subsequence(v, u))
    })
}
