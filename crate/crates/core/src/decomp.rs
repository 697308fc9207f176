//! Decomposition on an orthogonal basis through the moment series of the
//! linear form that makes the family orthogonal.
//!
//! With `G_i` the associated polynomials (same recurrence, indices shifted by
//! one), the moments `l_k = L(x^k)`, `k < 2n - 1`, are the first `2n - 1`
//! coefficients of `rev(G_{n-1}, n) / rev(F_n, n + 1)`. The Hankel matrix
//! `H_n = [l_{i+j}]` then satisfies `F_n^t H_n F_n = D_n` with
//! `D_n = diag(d_i)`, `d_i = (-1)^i c_2 ... c_{i+1} / a_{i+1}`, so
//! `F_n^{-1} = D_n^{-1} F_n^t H_n`: one Hankel product (a transposed
//! multiplication), one transposed expansion, one diagonal scaling.

use crate::error::{Error, Result};
use crate::expand::Expander;
use crate::field::{Fp, PrimeField};
use crate::poly::{self, DensePoly};
use crate::recurrence::{Recurrence, RecurrenceFamily};

/// `l_0, ..., l_{2n-2}` with `l_k = L(x^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSeries {
    moments: DensePoly,
    n: usize,
}

impl MomentSeries {
    /// The conversion size these moments support.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn as_poly(&self) -> &DensePoly {
        &self.moments
    }

    pub fn moments(&self) -> &[Fp] {
        self.moments.coeffs()
    }

    /// `L(p)` for `deg p <= 2n - 2`.
    pub fn apply(&self, field: &PrimeField, p: &DensePoly) -> Result<Fp> {
        if let Some(deg) = p.degree() {
            if deg >= self.moments.len() {
                return Err(Error::InvalidArgument(format!(
                    "moments known up to degree {}, polynomial has degree {deg}",
                    self.moments.len() as isize - 1
                )));
            }
        }
        Ok(p.coeffs()
            .iter()
            .zip(self.moments.coeffs())
            .fold(field.zero(), |acc, (&c, &l)| field.mul_add(acc, c, l)))
    }
}

/// `d_i = L(F_i^2)` for `0 <= i < n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationConstants {
    d: Vec<Fp>,
}

impl NormalizationConstants {
    pub fn values(&self) -> &[Fp] {
        &self.d
    }
}

/// `G_i` via the fast expansion of `x^i` under the shifted recurrence. Needs
/// the family defined up to index `i + 1`.
pub fn g_polynomial(field: &PrimeField, family: &RecurrenceFamily, i: usize) -> Result<DensePoly> {
    let rec = family.sample(field, i + 1)?;
    associated_poly(field, &rec, i)
}

fn associated_poly(field: &PrimeField, rec: &Recurrence, i: usize) -> Result<DensePoly> {
    let shifted = rec.shifted();
    let mut unit = vec![Fp::ZERO; i + 1];
    unit[i] = field.one();
    Expander::from_recurrence(field, &shifted.prefix(i), i + 1)?.expand(&unit)
}

/// `F_i` via the fast expansion of `x^i`.
fn basis_poly(field: &PrimeField, rec: &Recurrence, i: usize) -> Result<DensePoly> {
    let mut unit = vec![Fp::ZERO; i + 1];
    unit[i] = field.one();
    Expander::from_recurrence(field, rec, i + 1)?.expand(&unit)
}

/// Triples `1..=n`, with `(1, 0, 1)` appended where finite data runs out.
fn extended(field: &PrimeField, family: &RecurrenceFamily, n: usize) -> Result<Recurrence> {
    family.pad(n).sample(field, n)
}

fn moments_from(field: &PrimeField, rec: &Recurrence, n: usize) -> Result<MomentSeries> {
    debug_assert!(rec.len() >= n);
    let f = basis_poly(field, rec, n)?;
    let g = associated_poly(field, rec, n - 1)?;
    let len = 2 * n - 1;
    let denom_inv = poly::series_inv(field, &poly::rev(&f, n + 1)?, len)?;
    let moments = poly::mul_trunc(field, &poly::rev(&g, n)?, &denom_inv, len)?;
    Ok(MomentSeries { moments, n })
}

/// The first `2n - 1` moments of the orthogonalizing linear form.
pub fn moment_series(
    field: &PrimeField,
    family: &RecurrenceFamily,
    n: usize,
) -> Result<MomentSeries> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "moment series size must be positive".into(),
        ));
    }
    let rec = extended(field, family, n)?;
    moments_from(field, &rec, n)
}

fn normalization_from(
    field: &PrimeField,
    rec: &Recurrence,
    n: usize,
) -> Result<NormalizationConstants> {
    let inv_a = field.batch_inv(&rec.a_values()[..n])?;
    let mut d = Vec::with_capacity(n);
    let mut signed_gamma = field.one();
    for (i, &inv_ai) in inv_a.iter().enumerate() {
        if i > 0 {
            signed_gamma = field.neg(field.mul(signed_gamma, rec.c(i + 1)));
        }
        d.push(field.mul(signed_gamma, inv_ai));
    }
    Ok(NormalizationConstants { d })
}

/// `d_i = (-1)^i c_2 ... c_{i+1} / a_{i+1}` for `0 <= i < n`.
pub fn normalization(
    field: &PrimeField,
    family: &RecurrenceFamily,
    n: usize,
) -> Result<NormalizationConstants> {
    let rec = extended(field, family, n)?;
    normalization_from(field, &rec, n)
}

/// `[l_{i+j}]_{0 <= i, j < n}`. Quadratic size; meant for tests and small `n`.
pub fn hankel_matrix(
    field: &PrimeField,
    family: &RecurrenceFamily,
    n: usize,
) -> Result<Vec<Vec<Fp>>> {
    let m = moment_series(field, family, n)?;
    let l = m.moments();
    Ok((0..n).map(|i| l[i..i + n].to_vec()).collect())
}

/// Everything `decomp` needs for a fixed `(family, n)`: moments, normalization
/// and the transposed-expansion tree. Immutable after construction; share it
/// across calls and threads.
#[derive(Clone, Debug)]
pub struct Decomposer {
    field: PrimeField,
    n: usize,
    moments: Option<MomentSeries>,
    norms: NormalizationConstants,
    inv_d: Vec<Fp>,
    expander: Expander,
}

impl Decomposer {
    pub fn new(field: &PrimeField, family: &RecurrenceFamily, n: usize) -> Result<Decomposer> {
        if n == 0 {
            return Ok(Decomposer {
                field: *field,
                n,
                moments: None,
                norms: NormalizationConstants { d: Vec::new() },
                inv_d: Vec::new(),
                expander: Expander::new(field, family, 0)?,
            });
        }
        // One extended recurrence feeds the moments, the normalization and the
        // tree, so all three agree on the appended triple.
        let rec = extended(field, family, n)?;
        let moments = moments_from(field, &rec, n)?;
        let norms = normalization_from(field, &rec, n)?;
        let inv_d = field.batch_inv(&norms.d)?;
        let expander = Expander::from_recurrence(field, &rec, n)?;
        Ok(Decomposer {
            field: *field,
            n,
            moments: Some(moments),
            norms,
            inv_d,
            expander,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn moments(&self) -> Option<&MomentSeries> {
        self.moments.as_ref()
    }

    pub fn normalization(&self) -> &NormalizationConstants {
        &self.norms
    }

    pub fn expander(&self) -> &Expander {
        &self.expander
    }

    /// `H_n a` as the transposed product of the moment polynomial by `a`.
    pub fn hankel_apply(&self, a: &DensePoly) -> Result<DensePoly> {
        self.check_len(a.len())?;
        match &self.moments {
            None => Ok(DensePoly::default()),
            Some(m) => poly::mul_transposed(&self.field, m.as_poly(), a, self.n),
        }
    }

    /// Coefficients `alpha` with `sum alpha_i F_i = a`.
    pub fn decomp(&self, a: &DensePoly) -> Result<Vec<Fp>> {
        let v = self.hankel_apply(a)?;
        let w = self.expander.expand_transposed(v.coeffs())?;
        Ok(w.iter()
            .zip(&self.inv_d)
            .map(|(&wi, &inv)| self.field.mul(wi, inv))
            .collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected a polynomial of length {}, got {len}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Coefficients of `a` on the basis `F_0, ..., F_{n-1}`, `n = len(a)`.
pub fn decomp(field: &PrimeField, family: &RecurrenceFamily, a: &DensePoly) -> Result<Vec<Fp>> {
    Decomposer::new(field, family, a.len())?.decomp(a)
}
