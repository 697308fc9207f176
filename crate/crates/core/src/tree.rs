//! Subproduct tree of 2x2 polynomial transition matrices.
//!
//! `M^(i,i+1) = [[0, 1], [c_{i+1}, a_{i+1} x + b_{i+1}]]` advances
//! `(F_{i-1}, F_i)` to `(F_i, F_{i+1})`, and `M^(i,j)` is the product
//! `M^(j-1,j) ... M^(i,i+1)`. For `n = 2^d` the node at level `j`, position `i`
//! is `L^(j,i) = M^(2^{d-j} i + 1, 2^{d-j} (i+1) + 1)`. Level `d - 1` holds the
//! leaves, and the rightmost node of every level is never built because the
//! expansion ascent does not read it.

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::poly::{self, ntt, DensePoly, MulThresholds};
use crate::recurrence::{Recurrence, RecurrenceFamily};

/// A 2x2 matrix of polynomials, entries stored row-major.
///
/// Entry `(u, v)` of a product of `s` elementary matrices has degree at most
/// `s - 2 + u + v`, and is stored with exactly that declared length plus one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    entries: [DensePoly; 4],
}

impl TransitionMatrix {
    pub fn new(m00: DensePoly, m01: DensePoly, m10: DensePoly, m11: DensePoly) -> Self {
        TransitionMatrix {
            entries: [m00, m01, m10, m11],
        }
    }

    pub fn identity(field: &PrimeField) -> Self {
        let one = DensePoly::constant(field.one());
        Self::new(one.clone(), DensePoly::default(), DensePoly::default(), one)
    }

    /// `M^(i,i+1)` from validated coefficients; needs `rec.len() >= i + 1`.
    pub fn elementary(rec: &Recurrence, i: usize) -> Self {
        let k = i + 1;
        Self::new(
            DensePoly::default(),
            DensePoly::constant(Fp(1)),
            DensePoly::constant(rec.c(k)),
            DensePoly::new(vec![rec.b(k), rec.a(k)]),
        )
    }

    #[inline]
    pub fn entry(&self, u: usize, v: usize) -> &DensePoly {
        &self.entries[2 * u + v]
    }

    /// `self * rhs`.
    pub fn mul(&self, field: &PrimeField, rhs: &TransitionMatrix) -> Result<TransitionMatrix> {
        let short = self
            .entries
            .iter()
            .chain(&rhs.entries)
            .map(DensePoly::len)
            .filter(|&l| l > 0)
            .min()
            .unwrap_or(0);
        if short >= MulThresholds::default().karatsuba {
            return self.mul_shared_transforms(field, rhs);
        }
        let mut out: [DensePoly; 4] = Default::default();
        for u in 0..2 {
            for v in 0..2 {
                let mut acc = DensePoly::default();
                for w in 0..2 {
                    let p = poly::mul(field, self.entry(u, w), rhs.entry(w, v))?;
                    acc.add_assign(field, &p);
                }
                out[2 * u + v] = acc;
            }
        }
        Ok(TransitionMatrix { entries: out })
    }

    /// Same product, transforming each of the eight operands once and
    /// summing in the transformed domain: 8 forward and 4 inverse transforms
    /// instead of 16 and 8.
    fn mul_shared_transforms(
        &self,
        field: &PrimeField,
        rhs: &TransitionMatrix,
    ) -> Result<TransitionMatrix> {
        let prod_len = |a: &DensePoly, b: &DensePoly| {
            if a.is_empty() || b.is_empty() {
                0
            } else {
                a.len() + b.len() - 1
            }
        };
        let mut lens = [0usize; 4];
        for u in 0..2 {
            for v in 0..2 {
                lens[2 * u + v] = (0..2)
                    .map(|w| prod_len(self.entry(u, w), rhs.entry(w, v)))
                    .max()
                    .unwrap_or(0);
            }
        }
        let max_len = lens.iter().copied().max().unwrap_or(0);
        let plan = ntt::NttPlan::get(field, ntt::transform_len(max_len))?;
        let spec = |p: &DensePoly| (!p.is_empty()).then(|| plan.spectrum(field, p.coeffs()));
        let left: Vec<Option<Vec<Fp>>> = self.entries.iter().map(spec).collect();
        let right: Vec<Option<Vec<Fp>>> = rhs.entries.iter().map(spec).collect();

        let mut out: [DensePoly; 4] = Default::default();
        for u in 0..2 {
            for v in 0..2 {
                let mut acc = vec![Fp::ZERO; plan.len()];
                for w in 0..2 {
                    if let (Some(x), Some(y)) = (&left[2 * u + w], &right[2 * w + v]) {
                        ntt::NttPlan::pointwise_accumulate(field, &mut acc, x, y);
                    }
                }
                plan.inverse_of_products(field, &mut acc);
                acc.truncate(lens[2 * u + v]);
                out[2 * u + v] = DensePoly::new(acc);
            }
        }
        Ok(TransitionMatrix { entries: out })
    }
}

/// `M^(i,i+1)` for the given family.
pub fn transition(
    field: &PrimeField,
    family: &RecurrenceFamily,
    i: usize,
) -> Result<TransitionMatrix> {
    let rec = family.sample(field, i + 1)?;
    Ok(TransitionMatrix::elementary(&rec, i))
}

/// Level-indexed storage; `levels[j]` holds `L^(j,i)` for `0 <= i <= 2^j - 2`.
#[derive(Clone, Debug)]
pub struct SubproductTree {
    depth: u32,
    levels: Vec<Vec<TransitionMatrix>>,
}

impl SubproductTree {
    /// Builds the tree for `n = 2^d`, `d >= 1`, from at least `n - 1`
    /// validated triples.
    pub fn build(field: &PrimeField, rec: &Recurrence, n: usize) -> Result<SubproductTree> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "subproduct tree size must be a power of two >= 2, got {n}"
            )));
        }
        if rec.len() + 1 < n {
            return Err(Error::FamilyTooShort {
                needed: n - 1,
                available: rec.len(),
            });
        }
        let depth = n.trailing_zeros();
        let d = depth as usize;
        let mut levels: Vec<Vec<TransitionMatrix>> = vec![Vec::new(); d];

        let leaves = (0..(n / 2).saturating_sub(1))
            .map(|i| {
                let lower = TransitionMatrix::elementary(rec, 2 * i + 1);
                let upper = TransitionMatrix::elementary(rec, 2 * i + 2);
                upper.mul(field, &lower)
            })
            .collect::<Result<Vec<_>>>()?;
        levels[d - 1] = leaves;

        for j in (1..d.saturating_sub(1)).rev() {
            let below = &levels[j + 1];
            let nodes = (0..(1usize << j) - 1)
                .map(|i| below[2 * i + 1].mul(field, &below[2 * i]))
                .collect::<Result<Vec<_>>>()?;
            levels[j] = nodes;
        }
        Ok(SubproductTree { depth, levels })
    }

    /// `d = log2(n)`.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn size(&self) -> usize {
        1 << self.depth
    }

    /// Stored nodes at level `j`.
    pub fn level(&self, j: usize) -> &[TransitionMatrix] {
        &self.levels[j]
    }

    /// `L^(j,i)`; `None` for the pruned rightmost node and out-of-range indices.
    pub fn node(&self, j: usize, i: usize) -> Option<&TransitionMatrix> {
        self.levels.get(j).and_then(|l| l.get(i))
    }

    pub fn stored_nodes(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

/// Samples `n - 1` triples and builds the tree.
pub fn build_tree(
    field: &PrimeField,
    family: &RecurrenceFamily,
    n: usize,
) -> Result<SubproductTree> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "subproduct tree size must be a power of two >= 2, got {n}"
        )));
    }
    let rec = family.sample(field, n - 1)?;
    SubproductTree::build(field, &rec, n)
}
