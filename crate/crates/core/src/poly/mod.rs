//! Dense univariate polynomials over a prime field.
//!
//! Lengths are explicit: a `DensePoly` of length `k` is an element of the space
//! of polynomials of degree `< k`, and trailing zeros are kept. Transposed
//! multiplication depends on these declared lengths, not on actual degrees.

pub(crate) mod ntt;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};

use ntt::NttPlan;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DensePoly {
    coeffs: Vec<Fp>,
}

impl DensePoly {
    pub fn new(coeffs: Vec<Fp>) -> Self {
        DensePoly { coeffs }
    }

    /// The zero polynomial with declared length `len`.
    pub fn zeros(len: usize) -> Self {
        DensePoly {
            coeffs: vec![Fp::ZERO; len],
        }
    }

    pub fn constant(c: Fp) -> Self {
        DensePoly { coeffs: vec![c] }
    }

    /// `x^i` with declared length `i + 1`.
    pub fn monomial(field: &PrimeField, i: usize) -> Self {
        let mut p = Self::zeros(i + 1);
        p.coeffs[i] = field.one();
        p
    }

    /// Reduces each integer into the field.
    pub fn from_u64s(field: &PrimeField, values: &[u64]) -> Self {
        DensePoly {
            coeffs: values.iter().map(|&v| field.elem(v)).collect(),
        }
    }

    pub fn from_i64s(field: &PrimeField, values: &[i64]) -> Self {
        DensePoly {
            coeffs: values.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Fp] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fp> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the declared length.
    #[inline]
    pub fn coeff(&self, i: usize) -> Fp {
        self.coeffs.get(i).copied().unwrap_or(Fp::ZERO)
    }

    /// Actual degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Changes the declared length, truncating or padding with zeros.
    pub fn resize(&mut self, len: usize) {
        self.coeffs.resize(len, Fp::ZERO);
    }

    /// `self mod x^len`, padded to exactly `len` coefficients.
    pub fn truncated(&self, len: usize) -> DensePoly {
        let mut c = self.coeffs[..len.min(self.len())].to_vec();
        c.resize(len, Fp::ZERO);
        DensePoly { coeffs: c }
    }

    /// Adds `other` in place, growing the declared length if needed.
    pub fn add_assign(&mut self, field: &PrimeField, other: &DensePoly) {
        if other.len() > self.len() {
            self.resize(other.len());
        }
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = field.add(*a, b);
        }
    }

    pub fn scaled(&self, field: &PrimeField, c: Fp) -> DensePoly {
        DensePoly {
            coeffs: self.coeffs.iter().map(|&a| field.mul(a, c)).collect(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &PrimeField, x: Fp) -> Fp {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, &c| field.mul_add(c, acc, x))
    }
}

impl From<Vec<Fp>> for DensePoly {
    fn from(coeffs: Vec<Fp>) -> Self {
        DensePoly { coeffs }
    }
}

/// Size cut-offs for the multiplication backends, measured on the shorter
/// operand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MulThresholds {
    /// Below this, schoolbook.
    pub schoolbook: usize,
    /// Below this (and at least `schoolbook`), Karatsuba; NTT otherwise.
    pub karatsuba: usize,
}

impl Default for MulThresholds {
    fn default() -> Self {
        MulThresholds {
            schoolbook: 32,
            karatsuba: 512,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulBackend {
    Schoolbook,
    Karatsuba,
    Ntt,
}

impl MulThresholds {
    pub fn select(&self, len_a: usize, len_b: usize) -> MulBackend {
        let short = len_a.min(len_b);
        if short < self.schoolbook {
            MulBackend::Schoolbook
        } else if short < self.karatsuba {
            MulBackend::Karatsuba
        } else {
            MulBackend::Ntt
        }
    }
}

/// Product `a * b` of declared length `len(a) + len(b) - 1` (zero if either is
/// empty), using the default backend thresholds.
pub fn mul(field: &PrimeField, a: &DensePoly, b: &DensePoly) -> Result<DensePoly> {
    mul_with(field, a, b, MulThresholds::default())
}

pub fn mul_with(
    field: &PrimeField,
    a: &DensePoly,
    b: &DensePoly,
    thresholds: MulThresholds,
) -> Result<DensePoly> {
    mul_backend(field, a, b, thresholds.select(a.len(), b.len()))
}

pub fn mul_backend(
    field: &PrimeField,
    a: &DensePoly,
    b: &DensePoly,
    backend: MulBackend,
) -> Result<DensePoly> {
    if a.is_empty() || b.is_empty() {
        return Ok(DensePoly::default());
    }
    let coeffs = match backend {
        MulBackend::Schoolbook => schoolbook(field, &a.coeffs, &b.coeffs),
        MulBackend::Karatsuba => karatsuba(field, &a.coeffs, &b.coeffs),
        MulBackend::Ntt => ntt_mul(field, &a.coeffs, &b.coeffs)?,
    };
    Ok(DensePoly { coeffs })
}

/// `a * b mod x^len`, padded to exactly `len` coefficients.
pub fn mul_trunc(
    field: &PrimeField,
    a: &DensePoly,
    b: &DensePoly,
    len: usize,
) -> Result<DensePoly> {
    let a = a.truncated(len.min(a.len()));
    let b = b.truncated(len.min(b.len()));
    Ok(mul(field, &a, &b)?.truncated(len))
}

fn schoolbook(field: &PrimeField, a: &[Fp], b: &[Fp]) -> Vec<Fp> {
    let n = a.len() + b.len() - 1;
    let limit = field.lazy_limit();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lo = k.saturating_sub(b.len() - 1);
        let hi = k.min(a.len() - 1);
        let mut acc = 0u128;
        let mut pending = 0;
        for i in lo..=hi {
            acc += a[i].0 as u128 * b[k - i].0 as u128;
            pending += 1;
            if pending == limit {
                acc %= field.modulus() as u128;
                pending = 0;
            }
        }
        out.push(field.reduce_wide(acc));
    }
    out
}

const KARATSUBA_BASE: usize = 32;

fn karatsuba(field: &PrimeField, a: &[Fp], b: &[Fp]) -> Vec<Fp> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = vec![Fp::ZERO; a.len() + b.len() - 1];
    for (chunk_idx, chunk) in long.chunks(short.len()).enumerate() {
        let offset = chunk_idx * short.len();
        let part = if chunk.len() == short.len() {
            karatsuba_balanced(field, chunk, short)
        } else {
            karatsuba(field, short, chunk)
        };
        for (o, p) in out[offset..].iter_mut().zip(part) {
            *o = field.add(*o, p);
        }
    }
    out
}

fn karatsuba_balanced(field: &PrimeField, a: &[Fp], b: &[Fp]) -> Vec<Fp> {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    if n < KARATSUBA_BASE {
        return schoolbook(field, a, b);
    }
    let h = n.div_ceil(2);
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);

    let z0 = karatsuba_balanced(field, a0, b0);
    let z2 = karatsuba_balanced(field, a1, b1);

    let mut sa = a0.to_vec();
    let mut sb = b0.to_vec();
    for (s, &x) in sa.iter_mut().zip(a1) {
        *s = field.add(*s, x);
    }
    for (s, &x) in sb.iter_mut().zip(b1) {
        *s = field.add(*s, x);
    }
    let mut z1 = karatsuba_balanced(field, &sa, &sb);
    for (m, &x) in z1.iter_mut().zip(&z0) {
        *m = field.sub(*m, x);
    }
    for (m, &x) in z1.iter_mut().zip(&z2) {
        *m = field.sub(*m, x);
    }

    let mut out = vec![Fp::ZERO; 2 * n - 1];
    out[..z0.len()].copy_from_slice(&z0);
    for (o, &x) in out[2 * h..].iter_mut().zip(&z2) {
        *o = x;
    }
    for (o, &x) in out[h..].iter_mut().zip(&z1) {
        *o = field.add(*o, x);
    }
    out
}

fn ntt_mul(field: &PrimeField, a: &[Fp], b: &[Fp]) -> Result<Vec<Fp>> {
    let n = a.len() + b.len() - 1;
    let plan = NttPlan::get(field, ntt::transform_len(n))?;
    let fa = plan.spectrum(field, a);
    let fb = plan.spectrum(field, b);
    let mut acc = vec![Fp::ZERO; plan.len()];
    NttPlan::pointwise_accumulate(field, &mut acc, &fa, &fb);
    plan.inverse_of_products(field, &mut acc);
    acc.truncate(n);
    Ok(acc)
}

/// Reversal `x^{m-1} F(1/x)` with declared length `m`.
pub fn rev(f: &DensePoly, m: usize) -> Result<DensePoly> {
    if let Some(deg) = f.degree() {
        if deg >= m {
            return Err(Error::InvalidArgument(format!(
                "cannot reverse a polynomial of degree {deg} at length {m}"
            )));
        }
    }
    let mut c = f.truncated(m).coeffs;
    c.reverse();
    Ok(DensePoly { coeffs: c })
}

/// Inverse of `f` as a power series, modulo `x^k`, by Newton iteration
/// `g <- g (2 - f g)` with doubling precision.
pub fn series_inv(field: &PrimeField, f: &DensePoly, k: usize) -> Result<DensePoly> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "series precision must be positive".into(),
        ));
    }
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Err(Error::NotInvertible);
    }

    let mut precisions = Vec::new();
    let mut t = k;
    while t > 1 {
        precisions.push(t);
        t = t.div_ceil(2);
    }

    let mut g = DensePoly::constant(field.inv(c0)?);
    for &t in precisions.iter().rev() {
        let fg = mul_trunc(field, &f.truncated(t), &g, t)?;
        let mut corr = DensePoly::new(fg.coeffs.iter().map(|&c| field.neg(c)).collect());
        corr.coeffs[0] = field.add(corr.coeffs[0], field.elem(2));
        g = mul_trunc(field, &g, &corr, t)?;
    }
    Ok(g)
}

/// Transpose of multiplication by `b`, viewed as a map from polynomials of
/// length `k` to polynomials of length `k + m` where `m = len(b) - 1`.
///
/// Computed as `(a * rev(b, m + 1) mod x^{k+m}) div x^m`. Coefficients of `a`
/// at or beyond `k + m` do not influence the result.
pub fn mul_transposed(
    field: &PrimeField,
    a: &DensePoly,
    b: &DensePoly,
    k: usize,
) -> Result<DensePoly> {
    if b.is_empty() {
        return Err(Error::InvalidArgument(
            "transposed multiplicand must have positive declared length".into(),
        ));
    }
    let m = b.len() - 1;
    if k == 0 {
        return Ok(DensePoly::default());
    }
    let a = a.truncated(k + m);
    let mut rb = b.coeffs.clone();
    rb.reverse();
    let prod = mul(field, &a, &DensePoly::new(rb))?;
    let mut out = prod.coeffs;
    out.drain(..m);
    out.truncate(k);
    out.resize(k, Fp::ZERO);
    Ok(DensePoly { coeffs: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f() -> PrimeField {
        PrimeField::default()
    }

    fn naive_mul(k: &PrimeField, a: &[Fp], b: &[Fp]) -> Vec<Fp> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![Fp::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(x, y));
            }
        }
        out
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = DensePoly> {
        prop::collection::vec(any::<u64>(), 0..=max_len)
            .prop_map(|v| DensePoly::from_u64s(&PrimeField::default(), &v))
    }

    fn dot(k: &PrimeField, a: &[Fp], b: &[Fp]) -> Fp {
        a.iter()
            .zip(b)
            .fold(k.zero(), |acc, (&x, &y)| k.mul_add(acc, x, y))
    }

    #[test]
    fn small_products() {
        let k = f();
        let zero = DensePoly::default();
        let b = DensePoly::from_u64s(&k, &[1, 2, 3]);
        assert!(mul(&k, &zero, &b).unwrap().is_empty());
        let lhs = DensePoly::from_i64s(&k, &[1, 1]);
        let rhs = DensePoly::from_i64s(&k, &[1, -1]);
        let prod = mul(&k, &lhs, &rhs).unwrap();
        assert_eq!(prod, DensePoly::from_u64s(&k, &[1, 0, k.modulus() - 1]));
    }

    #[test]
    fn backends_agree_on_large_inputs() {
        let k = f();
        for (la, lb) in [(700, 700), (1000, 513), (64, 2000), (1, 900), (513, 512)] {
            let a =
                DensePoly::from_u64s(&k, &(0..la as u64).map(|i| i * 7 + 3).collect::<Vec<_>>());
            let b =
                DensePoly::from_u64s(&k, &(0..lb as u64).map(|i| i * i + 1).collect::<Vec<_>>());
            let s = mul_backend(&k, &a, &b, MulBackend::Schoolbook).unwrap();
            assert_eq!(s, mul_backend(&k, &a, &b, MulBackend::Karatsuba).unwrap());
            assert_eq!(s, mul_backend(&k, &a, &b, MulBackend::Ntt).unwrap());
            assert_eq!(s.len(), la + lb - 1);
        }
    }

    #[test]
    fn ntt_capacity_error() {
        let k = PrimeField::new(crate::field::TEST_MODULUS).unwrap();
        let a = DensePoly::zeros(200);
        assert!(matches!(
            mul_backend(&k, &a, &a, MulBackend::Ntt),
            Err(Error::NttCapacity { .. })
        ));
        // Karatsuba needs no roots of unity.
        assert_eq!(
            mul_backend(&k, &a, &a, MulBackend::Karatsuba)
                .unwrap()
                .len(),
            399
        );
    }

    #[test]
    fn threshold_dispatch() {
        let t = MulThresholds::default();
        assert_eq!(t.select(31, 1000), MulBackend::Schoolbook);
        assert_eq!(t.select(32, 1000), MulBackend::Karatsuba);
        assert_eq!(t.select(511, 511), MulBackend::Karatsuba);
        assert_eq!(t.select(512, 600), MulBackend::Ntt);
    }

    #[test]
    fn reversal() {
        let k = f();
        let one = DensePoly::constant(k.one());
        assert_eq!(rev(&one, 1).unwrap(), one);
        let p = DensePoly::from_u64s(&k, &[5, 9]);
        assert_eq!(rev(&p, 2).unwrap(), DensePoly::from_u64s(&k, &[9, 5]));
        assert_eq!(rev(&p, 3).unwrap(), DensePoly::from_u64s(&k, &[0, 9, 5]));
        assert!(rev(&p, 1).is_err());
        // Trailing zeros beyond m are fine.
        let q = DensePoly::from_u64s(&k, &[4, 0, 0]);
        assert_eq!(rev(&q, 1).unwrap(), DensePoly::from_u64s(&k, &[4]));
    }

    #[test]
    fn series_inverse_examples() {
        let k = f();
        let one = DensePoly::constant(k.one());
        assert_eq!(
            series_inv(&k, &one, 5).unwrap(),
            DensePoly::from_u64s(&k, &[1, 0, 0, 0, 0])
        );
        let f1 = DensePoly::from_i64s(&k, &[1, -1]);
        assert_eq!(
            series_inv(&k, &f1, 4).unwrap(),
            DensePoly::from_u64s(&k, &[1, 1, 1, 1])
        );
        let bad = DensePoly::from_u64s(&k, &[0, 1]);
        assert_eq!(series_inv(&k, &bad, 3), Err(Error::NotInvertible));
        assert!(series_inv(&k, &one, 0).is_err());
    }

    #[test]
    fn transposed_examples() {
        let k = f();
        let a = DensePoly::from_u64s(&k, &[3, 5, 7]);
        let one = DensePoly::constant(k.one());
        assert_eq!(
            mul_transposed(&k, &a, &one, 2).unwrap(),
            DensePoly::from_u64s(&k, &[3, 5])
        );
        let b = DensePoly::from_u64s(&k, &[1, 1]);
        assert_eq!(
            mul_transposed(&k, &a, &b, 2).unwrap(),
            DensePoly::from_u64s(&k, &[8, 12])
        );
        assert!(mul_transposed(&k, &a, &DensePoly::default(), 2).is_err());
    }

    /// Matrix of multiplication by `b` from length `k` to length `k + m`,
    /// probed on unit vectors, compared against the probed transposed map.
    #[test]
    #[allow(clippy::needless_range_loop)]
    fn transposed_matrix_equals_transpose() {
        let k = f();
        for m in 0..=16usize {
            for kk in 1..=16usize {
                let b = DensePoly::from_u64s(
                    &k,
                    &(0..=m as u64)
                        .map(|i| 3 * i * i + i + 1)
                        .collect::<Vec<_>>(),
                );
                let mut forward = vec![vec![Fp::ZERO; kk]; kk + m];
                for col in 0..kk {
                    let e = DensePoly::monomial(&k, col);
                    let img = mul(&k, &e, &b).unwrap();
                    for row in 0..kk + m {
                        forward[row][col] = img.coeff(row);
                    }
                }
                for row in 0..kk + m {
                    let e = DensePoly::monomial(&k, row);
                    let img = mul_transposed(&k, &e, &b, kk).unwrap();
                    assert_eq!(img.len(), kk);
                    for col in 0..kk {
                        assert_eq!(img.coeff(col), forward[row][col], "m={m} k={kk}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn backends_agree(a in arb_poly(64), b in arb_poly(64)) {
            let k = f();
            let expect = naive_mul(&k, a.coeffs(), b.coeffs());
            for backend in [MulBackend::Schoolbook, MulBackend::Karatsuba, MulBackend::Ntt] {
                let got = mul_backend(&k, &a, &b, backend).unwrap();
                prop_assert_eq!(got.coeffs(), &expect[..]);
            }
        }

        #[test]
        fn mul_commutative_associative(a in arb_poly(40), b in arb_poly(40), c in arb_poly(40)) {
            let k = f();
            prop_assert_eq!(mul(&k, &a, &b).unwrap(), mul(&k, &b, &a).unwrap());
            let left = mul(&k, &mul(&k, &a, &b).unwrap(), &c).unwrap();
            let right = mul(&k, &a, &mul(&k, &b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn rev_is_involution(a in arb_poly(30), extra in 0usize..4) {
            let m = a.len() + extra;
            prop_assume!(m > 0);
            let r = rev(&rev(&a, m).unwrap(), m).unwrap();
            prop_assert_eq!(r, a.truncated(m));
        }

        #[test]
        fn series_inverse_property(mut a in arb_poly(80), k_prec in 1usize..200) {
            let k = f();
            if a.is_empty() { a = DensePoly::constant(k.one()); }
            if a.coeff(0).is_zero() { a.coeffs_mut()[0] = k.one(); }
            let g = series_inv(&k, &a, k_prec).unwrap();
            prop_assert_eq!(g.len(), k_prec);
            let prod = mul_trunc(&k, &a, &g, k_prec).unwrap();
            prop_assert_eq!(prod, DensePoly::monomial(&k, 0).truncated(k_prec));
            let half = k_prec.div_ceil(2);
            prop_assert_eq!(g.truncated(half), series_inv(&k, &a, half).unwrap());
        }

        #[test]
        fn transposed_bilinear_identity(u in arb_poly(40), b in arb_poly(20), w_seed in any::<u64>()) {
            let k = f();
            prop_assume!(!b.is_empty() && !u.is_empty());
            let kk = u.len();
            let m = b.len() - 1;
            let w = DensePoly::from_u64s(&k, &(0..(kk + m) as u64).map(|i| w_seed.wrapping_mul(i + 1) ^ i).collect::<Vec<_>>());
            let ub = mul(&k, &u, &b).unwrap().truncated(kk + m);
            let lhs = dot(&k, ub.coeffs(), w.coeffs());
            let rhs = dot(&k, u.coeffs(), mul_transposed(&k, &w, &b, kk).unwrap().coeffs());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
