//! Finitely supported vectors over a countable basis `(e_n)` and finite
//! block sequences.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational};

/// `Σ λ_n e_n` with finitely many nonzero `λ_n`. Zero coefficients are never
/// stored, so the key set is exactly the support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BlockVector {
    coefficients: BTreeMap<usize, Rational>,
}

impl BlockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        Self::from_pairs([(i, Rational::from_integer(1.into()))])
    }

    /// Builds a vector from `(index, coefficient)` pairs. Repeated indices
    /// are summed; zero results are dropped.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut coefficients: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in pairs {
            *coefficients.entry(i).or_insert_with(Rational::zero) += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        BlockVector { coefficients }
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.coefficients
            .get(&i)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn get(&self, i: usize) -> Option<&Rational> {
        self.coefficients.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coefficients.iter().map(|(i, c)| (*i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coefficients.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn min_support(&self) -> Option<usize> {
        self.coefficients.keys().next().copied()
    }

    pub fn max_support(&self) -> Option<usize> {
        self.coefficients.keys().next_back().copied()
    }

    /// `[min supp, max supp]`, or `None` for the zero vector.
    pub fn support_range(&self) -> Option<(usize, usize)> {
        Some((self.min_support()?, self.max_support()?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BlockVector {
            coefficients: self.coefficients.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    /// Largest `|λ_i|`.
    pub fn max_abs(&self) -> Rational {
        self.coefficients
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Canonical text form: sorted `index:numerator/denominator` entries.
    pub fn to_canonical(&self) -> Vec<String> {
        self.iter()
            .map(|(i, c)| format!("{i}:{}", format_rational(c)))
            .collect()
    }

    pub fn from_canonical<S: AsRef<str>>(entries: &[S]) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for entry in entries {
            let entry = entry.as_ref();
            let (i, c) = entry
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("malformed entry {entry:?}")))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("malformed index in {entry:?}")))?;
            let c = parse_rational(c)?;
            if seen.insert(i, c).is_some() {
                return Err(Error::Parse(format!("duplicate index {i}")));
            }
        }
        Ok(Self::from_pairs(seen))
    }

    /// Order used for net listings: support range first, then coefficients
    /// index by index over that range (absent entries count as zero).
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        match (self.support_range(), other.support_range()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| {
                for i in a.0..=a.1 {
                    let ord = self.coefficient(i).cmp(&other.coefficient(i));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

impl fmt::Display for BlockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_canonical().join(", "))
    }
}

impl Add for &BlockVector {
    type Output = BlockVector;
    fn add(self, rhs: &BlockVector) -> BlockVector {
        BlockVector::from_pairs(self.iter().chain(rhs.iter()).map(|(i, c)| (i, c.clone())))
    }
}

impl Sub for &BlockVector {
    type Output = BlockVector;
    fn sub(self, rhs: &BlockVector) -> BlockVector {
        BlockVector::from_pairs(
            self.iter()
                .map(|(i, c)| (i, c.clone()))
                .chain(rhs.iter().map(|(i, c)| (i, -c))),
        )
    }
}

impl Neg for &BlockVector {
    type Output = BlockVector;
    fn neg(self) -> BlockVector {
        BlockVector {
            coefficients: self.coefficients.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }
}

impl Serialize for BlockVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.to_canonical())
    }
}

impl<'de> Deserialize<'de> for BlockVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<String>::deserialize(d)?;
        BlockVector::from_canonical(&entries).map_err(serde::de::Error::custom)
    }
}

/// `x < y`: `max supp x < min supp y`. Both vectors must be nonzero.
pub fn block_less(x: &BlockVector, y: &BlockVector) -> Result<bool> {
    match (x.max_support(), y.min_support()) {
        (Some(a), Some(b)) => Ok(a < b),
        _ => Err(Error::ZeroVector),
    }
}

/// A finite sequence of nonzero vectors with `x_i < x_{i+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteBlockSequence {
    vectors: Vec<BlockVector>,
}

impl FiniteBlockSequence {
    pub fn new(vectors: Vec<BlockVector>) -> Result<Self> {
        for (i, v) in vectors.iter().enumerate() {
            if v.is_zero() {
                return Err(Error::ZeroVector);
            }
            if i > 0 && !block_less(&vectors[i - 1], v)? {
                return Err(Error::NotBlockOrdered(i - 1, i));
            }
        }
        Ok(FiniteBlockSequence { vectors })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `(e_0, …, e_{len-1})`.
    pub fn standard_basis(len: usize) -> Self {
        FiniteBlockSequence {
            vectors: (0..len).map(BlockVector::basis).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&BlockVector> {
        self.vectors.get(i)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BlockVector> {
        self.vectors.iter()
    }

    pub fn as_slice(&self) -> &[BlockVector] {
        &self.vectors
    }

    pub fn into_vec(self) -> Vec<BlockVector> {
        self.vectors
    }

    pub fn last(&self) -> Option<&BlockVector> {
        self.vectors.last()
    }

    pub fn push(&mut self, v: BlockVector) -> Result<()> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        if let Some(last) = self.vectors.last() {
            if !block_less(last, &v)? {
                return Err(Error::NotBlockOrdered(
                    self.vectors.len() - 1,
                    self.vectors.len(),
                ));
            }
        }
        self.vectors.push(v);
        Ok(())
    }

    /// `x̄ ⌢ ȳ`.
    pub fn concat(&self, other: &FiniteBlockSequence) -> Result<Self> {
        let mut out = self.clone();
        for v in other.iter() {
            out.push(v.clone())?;
        }
        Ok(out)
    }

    /// Contiguous subrange; always block-ordered.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        FiniteBlockSequence {
            vectors: self.vectors[range].to_vec(),
        }
    }

    /// `Z|_L` for a strictly increasing index list.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let mut out = Vec::with_capacity(indices.len());
        for (pos, &i) in indices.iter().enumerate() {
            if pos > 0 && indices[pos - 1] >= i {
                return Err(Error::Precondition(format!(
                    "restriction indices must be strictly increasing at position {pos}"
                )));
            }
            let v = self.vectors.get(i).ok_or_else(|| {
                Error::Precondition(format!(
                    "index {i} out of range for a sequence of length {}",
                    self.len()
                ))
            })?;
            out.push(v.clone());
        }
        Ok(FiniteBlockSequence { vectors: out })
    }

    /// Coefficients `λ_j` with `y = Σ λ_j z_j`, or `None` if `y` is outside
    /// the span. The supports of the `z_j` are pairwise disjoint, so each
    /// `λ_j` is read off one coordinate and the remainder is checked exactly.
    pub fn span_coefficients(&self, y: &BlockVector) -> Option<Vec<Rational>> {
        let mut coeffs = Vec::with_capacity(self.len());
        let mut covered = 0usize;
        for z in &self.vectors {
            let (lead, z_lead) = z.iter().next().expect("block vectors are nonzero");
            let lambda = match y.get(lead) {
                Some(y_lead) => y_lead / z_lead,
                None => Rational::zero(),
            };
            for (i, zi) in z.iter() {
                let expected = zi * &lambda;
                let actual = y.coefficient(i);
                if expected != actual {
                    return None;
                }
                if !actual.is_zero() {
                    covered += 1;
                }
            }
            coeffs.push(lambda);
        }
        if covered != y.support_len() {
            return None;
        }
        Some(coeffs)
    }

    pub fn spans(&self, y: &BlockVector) -> bool {
        self.span_coefficients(y).is_some()
    }

    /// Indices `j` with nonzero expansion coefficient (`supp_Z(y)`).
    pub fn relative_support(&self, y: &BlockVector) -> Option<Vec<usize>> {
        let coeffs = self.span_coefficients(y)?;
        Some(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, _)| j)
                .collect(),
        )
    }

    /// `Σ_j λ_j z_j` for the given `(j, λ_j)` pairs.
    pub fn combine<'a, I>(&self, coeffs: I) -> BlockVector
    where
        I: IntoIterator<Item = (usize, &'a Rational)>,
    {
        BlockVector::from_pairs(
            coeffs
                .into_iter()
                .flat_map(|(j, c)| self.vectors[j].iter().map(move |(i, z)| (i, z * c))),
        )
    }
}

impl<'a> IntoIterator for &'a FiniteBlockSequence {
    type Item = &'a BlockVector;
    type IntoIter = std::slice::Iter<'a, BlockVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.vectors.iter()
    }
}

impl fmt::Display for FiniteBlockSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vectors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for FiniteBlockSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vectors.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteBlockSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let vectors = Vec::<BlockVector>::deserialize(d)?;
        FiniteBlockSequence::new(vectors).map_err(serde::de::Error::custom)
    }
}

/// `ȳ ⪯ z̄`: every `y_n` lies in the span of `z̄`.
pub fn is_block_subsequence(y: &FiniteBlockSequence, z: &FiniteBlockSequence) -> bool {
    y.iter().all(|v| z.spans(v))
}
