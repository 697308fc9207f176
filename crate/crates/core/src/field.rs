//! Arithmetic in `Z/pZ` for word-sized primes.
//!
//! Elements are always stored as canonical residues in `[0, p)`. Multiplication
//! goes through a Montgomery reduction internally, but every value that leaves
//! this module is canonical again.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `119 * 2^23 + 1`, the default modulus. Supports transforms up to `2^23`.
pub const DEFAULT_MODULUS: u64 = 998_244_353;

/// Small prime used for exhaustive tests.
pub const TEST_MODULUS: u64 = 257;

/// Moduli must stay below this bound so that lazy sums of products fit in `u128`.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Minimum two-adic valuation of `p - 1` for a modulus to count as NTT-friendly.
pub const MIN_NTT_TWO_ADICITY: u32 = 20;

/// An element of `Z/pZ` in canonical form.
///
/// The modulus is carried by the [`PrimeField`] that produced the element.
#[repr(transparent)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp(pub(crate) u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime field `Z/pZ` together with the constants needed for fast
/// reduction and for power-of-two roots of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    two_adicity: u32,
    /// Primitive `2^two_adicity`-th root of unity.
    max_root: u64,
    /// `p^{-1} mod 2^64`.
    mont_inv: u64,
    /// `2^128 mod p`.
    r2: u64,
    /// Number of products of canonical residues that can be summed in a `u128`.
    lazy_limit: usize,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField::new(DEFAULT_MODULUS).expect("default modulus is prime")
    }
}

impl PrimeField {
    /// Builds the field for an odd prime `p < 2^62`.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) {
            return Err(Error::InvalidModulus {
                modulus: p,
                reason: "must be an odd prime".into(),
            });
        }
        if p >= MAX_MODULUS {
            return Err(Error::InvalidModulus {
                modulus: p,
                reason: "must be below 2^62".into(),
            });
        }
        if !is_prime(p) {
            return Err(Error::InvalidModulus {
                modulus: p,
                reason: "not prime".into(),
            });
        }

        let two_adicity = (p - 1).trailing_zeros();

        // Newton iteration for p^{-1} mod 2^64; each step doubles the correct bits.
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;

        let max_prod = (p - 1) as u128 * (p - 1) as u128;
        let lazy_limit = (u128::MAX / max_prod).min(1 << 20) as usize;

        let mut field = PrimeField {
            p,
            two_adicity,
            max_root: 1,
            mont_inv: inv,
            r2,
            lazy_limit,
        };

        // Any quadratic non-residue z gives z^((p-1)/2^s) of exact order 2^s.
        let half = (p - 1) / 2;
        let mut z = 2u64;
        while field.pow(Fp(z), half).0 != p - 1 {
            z += 1;
        }
        field.max_root = field.pow(Fp(z), (p - 1) >> two_adicity).0;
        Ok(field)
    }

    /// Like [`PrimeField::new`], but also requires `2^20 | p - 1`.
    pub fn ntt_friendly(p: u64) -> Result<Self> {
        let field = Self::new(p)?;
        if field.two_adicity < MIN_NTT_TWO_ADICITY {
            return Err(Error::InvalidModulus {
                modulus: p,
                reason: format!(
                    "p - 1 is divisible only by 2^{}, need 2^{MIN_NTT_TWO_ADICITY}",
                    field.two_adicity
                ),
            });
        }
        Ok(field)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Two-adic valuation of `p - 1`.
    #[inline]
    pub fn two_adicity(&self) -> u32 {
        self.two_adicity
    }

    /// Largest power-of-two transform length supported by this modulus.
    pub fn ntt_capacity(&self) -> usize {
        let log = self.two_adicity.min(usize::BITS - 2);
        1usize << log
    }

    #[inline]
    pub(crate) fn lazy_limit(&self) -> usize {
        self.lazy_limit
    }

    /// Reduces an arbitrary `u64` into the field.
    #[inline]
    pub fn elem(&self, x: u64) -> Fp {
        Fp(x % self.p)
    }

    pub fn from_i64(&self, x: i64) -> Fp {
        let r = x.rem_euclid(self.p as i64) as u64;
        Fp(r)
    }

    /// Canonical residue check: returns `Some` only when `x < p`.
    pub fn checked_elem(&self, x: u64) -> Option<Fp> {
        (x < self.p).then_some(Fp(x))
    }

    /// Parses an unsigned decimal string in canonical form: digits only, no
    /// leading zeros, value below `p`.
    pub fn parse_canonical(&self, s: &str) -> Result<Fp> {
        let bad = |reason: &str| Error::InvalidArgument(format!("field element {s:?}: {reason}"));
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("expected an unsigned decimal integer"));
        }
        if s.len() > 1 && s.starts_with('0') {
            return Err(bad("leading zeros are not allowed"));
        }
        let v = u64::from_str(s).map_err(|_| bad("out of range"))?;
        self.checked_elem(v)
            .ok_or_else(|| bad(&format!("not below the modulus {}", self.p)))
    }

    #[inline]
    pub fn zero(&self) -> Fp {
        Fp(0)
    }

    #[inline]
    pub fn one(&self) -> Fp {
        Fp(1)
    }

    #[inline]
    pub fn add(&self, x: Fp, y: Fp) -> Fp {
        let s = x.0 + y.0;
        Fp(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, x: Fp, y: Fp) -> Fp {
        Fp(if x.0 >= y.0 {
            x.0 - y.0
        } else {
            x.0 + self.p - y.0
        })
    }

    #[inline]
    pub fn neg(&self, x: Fp) -> Fp {
        Fp(if x.0 == 0 { 0 } else { self.p - x.0 })
    }

    #[inline]
    pub fn mul(&self, x: Fp, y: Fp) -> Fp {
        Fp(self.mont_mul(self.mont_mul(x.0, y.0), self.r2))
    }

    /// `x + y * z`
    #[inline]
    pub fn mul_add(&self, x: Fp, y: Fp, z: Fp) -> Fp {
        self.add(x, self.mul(y, z))
    }

    pub fn pow(&self, x: Fp, mut e: u64) -> Fp {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, x: Fp) -> Result<Fp> {
        if x.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i128, x.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(Fp(t0.rem_euclid(self.p as i128) as u64))
    }

    pub fn div(&self, x: Fp, y: Fp) -> Result<Fp> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Inverts every element with a single field inversion (Montgomery's trick).
    pub fn batch_inv(&self, xs: &[Fp]) -> Result<Vec<Fp>> {
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = self.one();
        for &x in xs {
            if x.is_zero() {
                return Err(Error::ZeroInverse);
            }
            prefix.push(acc);
            acc = self.mul(acc, x);
        }
        let mut inv_acc = self.inv(acc)?;
        let mut out = vec![Fp::ZERO; xs.len()];
        for i in (0..xs.len()).rev() {
            out[i] = self.mul(inv_acc, prefix[i]);
            inv_acc = self.mul(inv_acc, xs[i]);
        }
        Ok(out)
    }

    /// Primitive root of unity of the given power-of-two order.
    pub fn root_of_unity(&self, order: u64) -> Result<Fp> {
        let err = Error::UnsupportedRootOrder {
            order,
            max_log: self.two_adicity,
        };
        if order == 0 || !order.is_power_of_two() {
            return Err(err);
        }
        let log = order.trailing_zeros();
        if log > self.two_adicity {
            return Err(err);
        }
        let mut w = Fp(self.max_root);
        for _ in log..self.two_adicity {
            w = self.mul(w, w);
        }
        Ok(w)
    }

    // Montgomery helpers. Inputs below p, output canonical.

    #[inline]
    pub(crate) fn mont_mul(&self, a: u64, b: u64) -> u64 {
        self.mont_reduce(a as u128 * b as u128)
    }

    #[inline]
    pub(crate) fn mont_reduce(&self, t: u128) -> u64 {
        // m * p agrees with t in the low word, so t / 2^64 - m * p / 2^64 is
        // exact and lies in (-p, p). Needs t < p * 2^64.
        let m = (t as u64).wrapping_mul(self.mont_inv);
        let mp_hi = ((m as u128 * self.p as u128) >> 64) as u64;
        let (u, borrow) = ((t >> 64) as u64).overflowing_sub(mp_hi);
        if borrow {
            u.wrapping_add(self.p)
        } else {
            u
        }
    }

    /// `x * 2^64 mod p`
    #[inline]
    pub(crate) fn to_mont(self, x: u64) -> u64 {
        self.mont_mul(x, self.r2)
    }

    /// Reduces a lazily accumulated `u128` sum.
    #[inline]
    pub(crate) fn reduce_wide(&self, t: u128) -> Fp {
        Fp((t % self.p as u128) as u64)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
