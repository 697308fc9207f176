//! Conversion from an orthogonal basis to the monomial basis and its
//! transpose, in `O(M(n) log n)` operations.
//!
//! Writing `A = sum_i [alpha_{2i} alpha_{2i+1}] M^(1,2i+1) [F_0 F_1]^t`, the
//! expansion climbs the subproduct tree with
//! `v^(j,i) = v^(j+1,2i) + v^(j+1,2i+1) L^(j+1,2i)` starting from the pairs
//! `v^(d-1,i) = [alpha_{2i} alpha_{2i+1}]`, and finishes with
//! `A = v_0 F_0 + v_1 F_1`. The transposed map runs the same data flow
//! backwards: truncated copies for left children, transposed products for
//! right children.

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::poly::{self, ntt, DensePoly, MulThresholds};
use crate::recurrence::{Recurrence, RecurrenceFamily};
use crate::tree::{SubproductTree, TransitionMatrix};

/// Length bound of `v_0` at level `j` of a depth-`d` tree.
#[inline]
pub fn delta(d: u32, j: u32) -> usize {
    (1usize << (d - j)).saturating_sub(3) + 1
}

/// Length bound of `v_1` at level `j` of a depth-`d` tree.
#[inline]
pub fn delta_prime(d: u32, j: u32) -> usize {
    (1usize << (d - j)) - 1
}

/// Precomputed state for conversions of a fixed size `n` with a fixed family.
///
/// The tree is immutable once built, so an `Expander` can be shared between
/// threads and reused for any number of `expand`/`expand_transposed` calls.
#[derive(Clone, Debug)]
pub struct Expander {
    field: PrimeField,
    n: usize,
    /// `F_1 = a_1 x + b_1`; `None` when `n < 2`.
    f1: Option<DensePoly>,
    tree: Option<SubproductTree>,
}

impl Expander {
    pub fn new(field: &PrimeField, family: &RecurrenceFamily, n: usize) -> Result<Expander> {
        let rec = family.sample(field, n.saturating_sub(1))?;
        Expander::from_recurrence(field, &rec, n)
    }

    /// Uses the first `n - 1` triples of `rec`; indices between `n` and the
    /// padded power of two get the filler triple `(1, 0, 1)`, which only ever
    /// multiplies zero coefficients.
    pub fn from_recurrence(field: &PrimeField, rec: &Recurrence, n: usize) -> Result<Expander> {
        if rec.len() + 1 < n {
            return Err(Error::FamilyTooShort {
                needed: n - 1,
                available: rec.len(),
            });
        }
        let f1 = (n >= 2).then(|| DensePoly::new(vec![rec.b(1), rec.a(1)]));
        let size = padded_size(n);
        let tree = if size >= 4 {
            let rec = rec.prefix(n - 1).padded(field, size - 1);
            Some(SubproductTree::build(field, &rec, size)?)
        } else {
            None
        };
        Ok(Expander {
            field: *field,
            n,
            f1,
            tree,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn tree(&self) -> Option<&SubproductTree> {
        self.tree.as_ref()
    }

    /// Monomial coefficients of `sum alpha_i F_i`, length `n`.
    pub fn expand(&self, alpha: &[Fp]) -> Result<DensePoly> {
        self.check_len(alpha.len())?;
        let k = &self.field;
        match self.n {
            0 => return Ok(DensePoly::default()),
            1 => return Ok(DensePoly::constant(alpha[0])),
            2 => {
                let f1 = self.f1.as_ref().expect("n >= 2");
                let mut out = f1.scaled(k, alpha[1]);
                out.coeffs_mut()[0] = k.add(out.coeff(0), alpha[0]);
                return Ok(out);
            }
            _ => {}
        }
        let tree = self.tree.as_ref().expect("tree exists for n > 2");
        let d = tree.depth();
        let size = tree.size();

        let mut level: Vec<(DensePoly, DensePoly)> = (0..size / 2)
            .map(|i| {
                let at = |t: usize| alpha.get(t).copied().unwrap_or(Fp::ZERO);
                (
                    DensePoly::constant(at(2 * i)),
                    DensePoly::constant(at(2 * i + 1)),
                )
            })
            .collect();

        for j in (0..d - 1).rev() {
            let (len0, len1) = (delta(d, j), delta_prime(d, j));
            let nodes = tree.level(j as usize + 1);
            let mut next = Vec::with_capacity(level.len() / 2);
            let mut pairs = level.into_iter();
            for i in 0..(1usize << j) {
                let (l0, l1) = pairs.next().expect("left child");
                let (r0, r1) = pairs.next().expect("right child");
                let (mut v0, mut v1) = row_times_matrix(k, &r0, &r1, &nodes[2 * i])?;
                v0.add_assign(k, &l0);
                v1.add_assign(k, &l1);
                debug_assert!(v0.coeffs().iter().skip(len0).all(|c| c.is_zero()));
                debug_assert!(v1.coeffs().iter().skip(len1).all(|c| c.is_zero()));
                v0.resize(len0);
                v1.resize(len1);
                next.push((v0, v1));
            }
            level = next;
        }

        let (v0, v1) = level.pop().expect("root");
        let f1 = self.f1.as_ref().expect("n >= 2");
        let mut out = poly::mul(k, &v1, f1)?;
        out.add_assign(k, &v0);
        debug_assert!(out.coeffs().iter().skip(self.n).all(|c| c.is_zero()));
        out.resize(self.n);
        Ok(out)
    }

    /// `F_n^t u`: entry `j` is `sum_i u_i coeff(F_j, i)`.
    pub fn expand_transposed(&self, u: &[Fp]) -> Result<Vec<Fp>> {
        self.check_len(u.len())?;
        let k = &self.field;
        match self.n {
            0 => return Ok(Vec::new()),
            1 => return Ok(vec![u[0]]),
            2 => {
                let f1 = self.f1.as_ref().expect("n >= 2");
                let w1 = k.add(k.mul(u[0], f1.coeff(0)), k.mul(u[1], f1.coeff(1)));
                return Ok(vec![u[0], w1]);
            }
            _ => {}
        }
        let tree = self.tree.as_ref().expect("tree exists for n > 2");
        let d = tree.depth();
        let size = tree.size();

        let a = DensePoly::new(u.to_vec());
        let f0 = DensePoly::constant(k.one());
        let f1 = self.f1.as_ref().expect("n >= 2");
        let mut level = vec![(
            poly::mul_transposed(k, &a, &f0, delta(d, 0))?,
            poly::mul_transposed(k, &a, f1, delta_prime(d, 0))?,
        )];

        for j in 0..d - 1 {
            let (len0, len1) = (delta(d, j + 1), delta_prime(d, j + 1));
            let nodes = tree.level(j as usize + 1);
            let mut next = vec![(DensePoly::default(), DensePoly::default()); 2 * level.len()];
            for i in (0..(1usize << j)).rev() {
                let (x0, x1) = &level[i];
                next[2 * i] = (x0.truncated(len0), x1.truncated(len1));
                next[2 * i + 1] =
                    transposed_row_times_matrix(k, x0, x1, &nodes[2 * i], len0, len1)?;
            }
            level = next;
        }

        let mut out = Vec::with_capacity(size);
        for (v0, v1) in &level {
            out.push(v0.coeff(0));
            out.push(v1.coeff(0));
        }
        out.truncate(self.n);
        Ok(out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {len}",
                self.n
            )));
        }
        Ok(())
    }
}

fn padded_size(n: usize) -> usize {
    n.next_power_of_two().max(2)
}

/// `[r0 r1] * L`, i.e. `(r0 L00 + r1 L10, r0 L01 + r1 L11)`.
fn row_times_matrix(
    field: &PrimeField,
    r0: &DensePoly,
    r1: &DensePoly,
    l: &TransitionMatrix,
) -> Result<(DensePoly, DensePoly)> {
    let short = r0.len().min(r1.len()).min(l.entry(0, 0).len());
    if short < MulThresholds::default().karatsuba {
        let mut v0 = poly::mul(field, r0, l.entry(0, 0))?;
        v0.add_assign(field, &poly::mul(field, r1, l.entry(1, 0))?);
        let mut v1 = poly::mul(field, r0, l.entry(0, 1))?;
        v1.add_assign(field, &poly::mul(field, r1, l.entry(1, 1))?);
        return Ok((v0, v1));
    }
    let len_of = |a: &DensePoly, b: &DensePoly| a.len() + b.len() - 1;
    let out0 = len_of(r0, l.entry(0, 0)).max(len_of(r1, l.entry(1, 0)));
    let out1 = len_of(r0, l.entry(0, 1)).max(len_of(r1, l.entry(1, 1)));
    let plan = ntt::NttPlan::get(field, ntt::transform_len(out0.max(out1)))?;
    let s0 = plan.spectrum(field, r0.coeffs());
    let s1 = plan.spectrum(field, r1.coeffs());
    let mut result = Vec::with_capacity(2);
    for (col, out_len) in [(0, out0), (1, out1)] {
        let mut acc = vec![Fp::ZERO; plan.len()];
        let e0 = plan.spectrum(field, l.entry(0, col).coeffs());
        ntt::NttPlan::pointwise_accumulate(field, &mut acc, &s0, &e0);
        let e1 = plan.spectrum(field, l.entry(1, col).coeffs());
        ntt::NttPlan::pointwise_accumulate(field, &mut acc, &s1, &e1);
        plan.inverse_of_products(field, &mut acc);
        acc.truncate(out_len);
        result.push(DensePoly::new(acc));
    }
    let v1 = result.pop().expect("two columns");
    let v0 = result.pop().expect("two columns");
    Ok((v0, v1))
}

/// Transpose of `row_times_matrix` with output lengths `(k0, k1)`:
/// `(mul^t(x0, L00, k0) + mul^t(x1, L01, k0), mul^t(x0, L10, k1) + mul^t(x1, L11, k1))`.
fn transposed_row_times_matrix(
    field: &PrimeField,
    x0: &DensePoly,
    x1: &DensePoly,
    l: &TransitionMatrix,
    k0: usize,
    k1: usize,
) -> Result<(DensePoly, DensePoly)> {
    let short = x0.len().min(x1.len()).min(l.entry(0, 0).len());
    if short < MulThresholds::default().karatsuba {
        let mut w0 = poly::mul_transposed(field, x0, l.entry(0, 0), k0)?;
        w0.add_assign(field, &poly::mul_transposed(field, x1, l.entry(0, 1), k0)?);
        let mut w1 = poly::mul_transposed(field, x0, l.entry(1, 0), k1)?;
        w1.add_assign(field, &poly::mul_transposed(field, x1, l.entry(1, 1), k1)?);
        return Ok((w0, w1));
    }
    // mul^t(x, B, k) is the slice [m, m + k) of x * rev(B, m + 1). Reversing
    // both multiplicands of a row at a common length P aligns the slices at
    // [P - 1, P - 1 + k), so each row needs a single inverse transform.
    let p0 = l.entry(0, 0).len().max(l.entry(0, 1).len());
    let p1 = l.entry(1, 0).len().max(l.entry(1, 1).len());
    // Coefficients of x at or past k + P - 1 cannot reach the slice.
    let x_len = (k0 + p0 - 1).max(k1 + p1 - 1);
    let plan = ntt::NttPlan::get(field, ntt::transform_len(x_len + p0.max(p1) - 1))?;
    let s0 = plan.spectrum(field, x0.truncated(x_len).coeffs());
    let s1 = plan.spectrum(field, x1.truncated(x_len).coeffs());
    let reversed = |b: &DensePoly, width: usize| {
        let mut c = b.truncated(width).into_coeffs();
        c.reverse();
        c
    };
    let mut result = Vec::with_capacity(2);
    for (u, p, k) in [(0, p0, k0), (1, p1, k1)] {
        let mut acc = vec![Fp::ZERO; plan.len()];
        let e0 = plan.spectrum(field, &reversed(l.entry(u, 0), p));
        ntt::NttPlan::pointwise_accumulate(field, &mut acc, &s0, &e0);
        let e1 = plan.spectrum(field, &reversed(l.entry(u, 1), p));
        ntt::NttPlan::pointwise_accumulate(field, &mut acc, &s1, &e1);
        plan.inverse_of_products(field, &mut acc);
        result.push(DensePoly::new(acc[p - 1..p - 1 + k].to_vec()));
    }
    let w1 = result.pop().expect("two rows");
    let w0 = result.pop().expect("two rows");
    Ok((w0, w1))
}

/// `sum alpha_i F_i` on the monomial basis, for `n = alpha.len()`.
pub fn expand(field: &PrimeField, family: &RecurrenceFamily, alpha: &[Fp]) -> Result<DensePoly> {
    Expander::new(field, family, alpha.len())?.expand(alpha)
}

/// `F_n^t u` for `n = u.len()`.
pub fn expand_transposed(
    field: &PrimeField,
    family: &RecurrenceFamily,
    u: &[Fp],
) -> Result<Vec<Fp>> {
    Expander::new(field, family, u.len())?.expand_transposed(u)
}
