//! Radix-2 number-theoretic transform.
//!
//! The forward transform is decimation-in-frequency (natural order in,
//! bit-reversed order out) and the inverse is decimation-in-time (bit-reversed
//! in, natural out), so no explicit permutation is ever performed. Twiddles are
//! kept in Montgomery form; multiplying a canonical value by a Montgomery
//! twiddle with `mont_mul` yields a canonical value, so data stays canonical
//! throughout.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};

pub(crate) struct NttPlan {
    len: usize,
    /// `fwd[h + j] = w_{2h}^j * R` for every stage half-width `h`.
    fwd: Vec<u64>,
    inv: Vec<u64>,
    /// `len^{-1} * R^2 mod p`, applied with `mont_mul` after a pointwise
    /// Montgomery product and the inverse transform.
    scale: u64,
}

thread_local! {
    static PLANS: RefCell<HashMap<(u64, usize), Rc<NttPlan>>> = RefCell::new(HashMap::new());
}

impl NttPlan {
    pub(crate) fn get(field: &PrimeField, len: usize) -> Result<Rc<NttPlan>> {
        debug_assert!(len.is_power_of_two());
        if len > field.ntt_capacity() {
            return Err(Error::NttCapacity {
                required: len,
                capacity: field.ntt_capacity(),
            });
        }
        let key = (field.modulus(), len);
        if let Some(plan) = PLANS.with(|p| p.borrow().get(&key).cloned()) {
            return Ok(plan);
        }
        let plan = Rc::new(NttPlan::build(field, len)?);
        PLANS.with(|p| p.borrow_mut().insert(key, plan.clone()));
        Ok(plan)
    }

    fn build(field: &PrimeField, len: usize) -> Result<NttPlan> {
        let mut fwd = vec![0u64; len.max(2)];
        let mut inv = vec![0u64; len.max(2)];
        let mut h = 1;
        while h < len {
            let w = field.root_of_unity(2 * h as u64)?;
            let w_inv = field.inv(w)?;
            let (mut x, mut y) = (field.one(), field.one());
            for j in 0..h {
                fwd[h + j] = field.to_mont(x.0);
                inv[h + j] = field.to_mont(y.0);
                x = field.mul(x, w);
                y = field.mul(y, w_inv);
            }
            h *= 2;
        }
        let len_inv = field.inv(field.elem(len as u64))?;
        let r2 = field.to_mont(field.to_mont(1));
        let scale = field.mul(len_inv, Fp(r2)).0;
        Ok(NttPlan {
            len,
            fwd,
            inv,
            scale,
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn forward(&self, field: &PrimeField, data: &mut [Fp]) {
        debug_assert_eq!(data.len(), self.len);
        let p = field.modulus();
        let mut h = self.len / 2;
        while h >= 1 {
            let tw = &self.fwd[h..2 * h];
            for block in data.chunks_exact_mut(2 * h) {
                let (lo, hi) = block.split_at_mut(h);
                for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                    let (a, b) = (u.0, v.0);
                    let s = a + b;
                    u.0 = if s >= p { s - p } else { s };
                    let d = if a >= b { a - b } else { a + p - b };
                    v.0 = field.mont_mul(d, w);
                }
            }
            h /= 2;
        }
    }

    /// Inverse transform without the final `1/len` scaling.
    fn inverse_unscaled(&self, field: &PrimeField, data: &mut [Fp]) {
        debug_assert_eq!(data.len(), self.len);
        let p = field.modulus();
        let mut h = 1;
        while h < self.len {
            let tw = &self.inv[h..2 * h];
            for block in data.chunks_exact_mut(2 * h) {
                let (lo, hi) = block.split_at_mut(h);
                for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                    let a = u.0;
                    let b = field.mont_mul(v.0, w);
                    let s = a + b;
                    u.0 = if s >= p { s - p } else { s };
                    v.0 = if a >= b { a - b } else { a + p - b };
                }
            }
            h *= 2;
        }
    }

    /// Inverse of a spectrum produced by [`NttPlan::pointwise_accumulate`].
    pub(crate) fn inverse_of_products(&self, field: &PrimeField, data: &mut [Fp]) {
        self.inverse_unscaled(field, data);
        for x in data.iter_mut() {
            x.0 = field.mont_mul(x.0, self.scale);
        }
    }

    /// `acc[i] += a[i] * b[i] / R`. The `1/R` factor is undone by
    /// [`NttPlan::inverse_of_products`].
    pub(crate) fn pointwise_accumulate(field: &PrimeField, acc: &mut [Fp], a: &[Fp], b: &[Fp]) {
        for ((c, x), y) in acc.iter_mut().zip(a).zip(b) {
            *c = field.add(*c, Fp(field.mont_mul(x.0, y.0)));
        }
    }

    /// Zero-padded copy of `coeffs`, transformed.
    pub(crate) fn spectrum(&self, field: &PrimeField, coeffs: &[Fp]) -> Vec<Fp> {
        debug_assert!(coeffs.len() <= self.len);
        let mut buf = vec![Fp::ZERO; self.len];
        buf[..coeffs.len()].copy_from_slice(coeffs);
        self.forward(field, &mut buf);
        buf
    }
}

/// Transform length for a product of the given result length.
pub(crate) fn transform_len(result_len: usize) -> usize {
    result_len.next_power_of_two().max(1)
}
