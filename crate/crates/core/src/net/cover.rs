//! The Δ-block covering: pair up consecutive net vectors, then round any
//! unit-ball block subsequence of the paired board back onto the net.

use serde::Serialize;

use super::{round_to_net, NetConfig};
use crate::error::{Error, Result};
use crate::norm::NormValue;
use crate::scalar::{format_rational, pow2, serde_rational, Rational};
use crate::vector::{BlockVector, FiniteBlockSequence};

/// Iterator adapter yielding `z_j = z̃_{2j} + z̃_{2j+1}`. A trailing unpaired
/// input is dropped.
pub struct Covering<I> {
    inner: I,
}

impl<I: Iterator<Item = BlockVector>> Covering<I> {
    pub fn new(inner: I) -> Self {
        Covering { inner }
    }
}

impl<I: Iterator<Item = BlockVector>> Iterator for Covering<I> {
    type Item = BlockVector;

    fn next(&mut self) -> Option<BlockVector> {
        let a = self.inner.next()?;
        let b = self.inner.next()?;
        Some(&a + &b)
    }
}

/// Finite form of [`Covering`]: `2m` inputs give `m` outputs.
pub fn covering_sequence(board: &FiniteBlockSequence) -> FiniteBlockSequence {
    let paired: Vec<BlockVector> = Covering::new(board.iter().cloned()).collect();
    FiniteBlockSequence::new(paired).expect("sums of consecutive blocks stay block-ordered")
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringEntry {
    pub index: usize,
    /// `m_1^i = min supp_Z̃(u_i)`.
    pub m1: usize,
    pub error: NormValue,
    /// `2^(-k_{m_1^i}+1)`.
    #[serde(with = "serde_rational")]
    pub claim_bound: Rational,
    /// `2^(-k_i+1)`.
    #[serde(with = "serde_rational")]
    pub index_bound: Rational,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CoveringCertificate {
    pub entries: Vec<CoveringEntry>,
}

impl CoveringCertificate {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Rounds every `u_i` onto `<Z̃>_𝔇` and certifies
/// `‖u_i - ũ_i‖ ≤ 2^(-k_{m_1^i}+1) ≤ 2^(-k_i+1) ≤ δ_i`, including the
/// index inequality `m_1^i ≥ i` the middle step needs.
pub fn verify_covering(
    u: &FiniteBlockSequence,
    z: &FiniteBlockSequence,
    board: &FiniteBlockSequence,
    cfg: &NetConfig,
) -> Result<(FiniteBlockSequence, CoveringCertificate)> {
    if 2 * z.len() > board.len() {
        return Err(Error::Precondition(format!(
            "covering board of length {} needs {} net vectors, got {}",
            z.len(),
            2 * z.len(),
            board.len()
        )));
    }
    for (j, zj) in z.iter().enumerate() {
        let expected = &board.as_slice()[2 * j] + &board.as_slice()[2 * j + 1];
        if zj != &expected {
            return Err(Error::Precondition(format!(
                "z_{j} is not z̃_{} + z̃_{}",
                2 * j,
                2 * j + 1
            )));
        }
    }
    let mut rounded = Vec::with_capacity(u.len());
    let mut entries = Vec::with_capacity(u.len());
    for (i, ui) in u.iter().enumerate() {
        if !z.spans(ui) {
            return Err(Error::NotInSpan(format!("u_{i} = {ui}")));
        }
        let r = round_to_net(ui, board, cfg)?;
        let claim_bound = pow2(1 - cfg.k(r.m1) as i64);
        let index_bound = pow2(1 - cfg.k(i) as i64);
        let delta = cfg.delta().delta(i);
        if r.m1 < i {
            return Err(Error::certification(format!("m_1^{i} ≥ {i}"), r.m1, i));
        }
        if !r.error_norm.le(&claim_bound) {
            return Err(Error::certification(
                format!("‖u_{i} - ũ_{i}‖"),
                &r.error_norm,
                format_rational(&claim_bound),
            ));
        }
        if claim_bound > index_bound {
            return Err(Error::certification(
                format!("2^(-k_m1+1) for u_{i}"),
                format_rational(&claim_bound),
                format_rational(&index_bound),
            ));
        }
        if index_bound > delta {
            return Err(Error::certification(
                format!("2^(-k_{i}+1)"),
                format_rational(&index_bound),
                format_rational(&delta),
            ));
        }
        entries.push(CoveringEntry {
            index: i,
            m1: r.m1,
            error: r.error_norm,
            claim_bound,
            index_bound,
            delta,
            pass: true,
        });
        rounded.push(r.rounded);
    }
    let rounded = FiniteBlockSequence::new(rounded)?;
    Ok((rounded, CoveringCertificate { entries }))
}
