//! Orthogonal families given by a three-term recurrence
//! `F_i = (a_i x + b_i) F_{i-1} + c_i F_{i-2}` with `F_{-1} = 0`, `F_0 = 1`,
//! together with the quadratic-time reference conversions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::poly::DensePoly;

/// Classical families. Rational coefficients are mapped into the field with
/// modular inverses, so sampling index `i` requires `i < p`.
///
/// `c_1` multiplies `F_{-1} = 0` and is set to 1 everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `T_1 = x`, `T_i = 2x T_{i-1} - T_{i-2}`.
    ChebyshevT,
    /// `U_1 = 2x`, `U_i = 2x U_{i-1} - U_{i-2}`.
    ChebyshevU,
    /// `i P_i = (2i - 1) x P_{i-1} - (i - 1) P_{i-2}`.
    Legendre,
    /// Physicists' Hermite: `H_i = 2x H_{i-1} - 2(i - 1) H_{i-2}`.
    Hermite,
    /// `i L_i = (2i - 1 - x) L_{i-1} - (i - 1) L_{i-2}`.
    Laguerre,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::ChebyshevT,
        Preset::ChebyshevU,
        Preset::Legendre,
        Preset::Hermite,
        Preset::Laguerre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::ChebyshevT => "chebyshev-t",
            Preset::ChebyshevU => "chebyshev-u",
            Preset::Legendre => "legendre",
            Preset::Hermite => "hermite",
            Preset::Laguerre => "laguerre",
        }
    }

    fn triple(self, field: &PrimeField, i: usize) -> Result<Triple> {
        debug_assert!(i >= 1);
        if i as u64 >= field.modulus() {
            return Err(Error::InvalidFamily {
                index: i,
                reason: format!(
                    "preset {} needs indices below the modulus {}",
                    self.name(),
                    field.modulus()
                ),
            });
        }
        let int = |v: i64| field.from_i64(v);
        let ii = i as i64;
        let inv_i = field.inv(field.elem(i as u64))?;
        let first = i == 1;
        let t = match self {
            Preset::ChebyshevT => Triple {
                a: int(if first { 1 } else { 2 }),
                b: int(0),
                c: int(if first { 1 } else { -1 }),
            },
            Preset::ChebyshevU => Triple {
                a: int(2),
                b: int(0),
                c: int(if first { 1 } else { -1 }),
            },
            Preset::Legendre => Triple {
                a: field.mul(int(2 * ii - 1), inv_i),
                b: int(0),
                c: if first {
                    int(1)
                } else {
                    field.mul(int(-(ii - 1)), inv_i)
                },
            },
            Preset::Hermite => Triple {
                a: int(2),
                b: int(0),
                c: int(if first { 1 } else { -2 * (ii - 1) }),
            },
            Preset::Laguerre => Triple {
                a: field.neg(inv_i),
                b: field.mul(int(2 * ii - 1), inv_i),
                c: if first {
                    int(1)
                } else {
                    field.mul(int(-(ii - 1)), inv_i)
                },
            },
        };
        Ok(t)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family preset {s:?}")))
    }
}

/// One recurrence step `(a_i, b_i, c_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triple {
    pub a: Fp,
    pub b: Fp,
    pub c: Fp,
}

impl Triple {
    /// The filler step appended past the end of finite data.
    pub fn padding(field: &PrimeField) -> Triple {
        Triple {
            a: field.one(),
            b: field.zero(),
            c: field.one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Source {
    Preset(Preset),
    Custom { a: Vec<Fp>, b: Vec<Fp>, c: Vec<Fp> },
}

/// A (possibly infinite) source of recurrence coefficients.
///
/// Custom families hold finitely many triples. [`RecurrenceFamily::pad`]
/// extends them with `(1, 0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceFamily {
    source: Source,
    padded_to: usize,
}

impl From<Preset> for RecurrenceFamily {
    fn from(p: Preset) -> Self {
        RecurrenceFamily::preset(p)
    }
}

impl RecurrenceFamily {
    pub fn preset(p: Preset) -> Self {
        RecurrenceFamily {
            source: Source::Preset(p),
            padded_to: 0,
        }
    }

    /// Custom family; `a[i - 1]` holds `a_i`. Validation is deferred to
    /// [`RecurrenceFamily::sample`].
    pub fn custom(a: Vec<Fp>, b: Vec<Fp>, c: Vec<Fp>) -> Result<Self> {
        if a.len() != b.len() || a.len() != c.len() {
            return Err(Error::InvalidArgument(format!(
                "coefficient arrays differ in length: a={}, b={}, c={}",
                a.len(),
                b.len(),
                c.len()
            )));
        }
        Ok(RecurrenceFamily {
            source: Source::Custom { a, b, c },
            padded_to: 0,
        })
    }

    /// Preset name, or `"custom"`.
    pub fn kind(&self) -> &'static str {
        match &self.source {
            Source::Preset(p) => p.name(),
            Source::Custom { .. } => "custom",
        }
    }

    pub fn as_preset(&self) -> Option<Preset> {
        match self.source {
            Source::Preset(p) => Some(p),
            Source::Custom { .. } => None,
        }
    }

    /// Largest index with defined coefficients; `None` when unbounded.
    pub fn available_length(&self) -> Option<usize> {
        match &self.source {
            Source::Preset(_) => None,
            Source::Custom { a, .. } => Some(a.len().max(self.padded_to)),
        }
    }

    /// Agrees with `self` wherever it is defined and yields `(1, 0, 1)` for the
    /// remaining indices up to `m`.
    pub fn pad(&self, m: usize) -> RecurrenceFamily {
        let mut out = self.clone();
        if let Source::Custom { a, .. } = &out.source {
            if m > a.len() {
                out.padded_to = out.padded_to.max(m);
            }
        }
        out
    }

    /// Unvalidated triple at index `i >= 1`.
    pub fn triple(&self, field: &PrimeField, i: usize) -> Result<Triple> {
        if i == 0 {
            return Err(Error::InvalidArgument(
                "recurrence indices start at 1".into(),
            ));
        }
        match &self.source {
            Source::Preset(p) => p.triple(field, i),
            Source::Custom { a, b, c } => {
                if i <= a.len() {
                    Ok(Triple {
                        a: a[i - 1],
                        b: b[i - 1],
                        c: c[i - 1],
                    })
                } else if i <= self.padded_to {
                    Ok(Triple::padding(field))
                } else {
                    Err(Error::FamilyTooShort {
                        needed: i,
                        available: a.len().max(self.padded_to),
                    })
                }
            }
        }
    }

    /// The first `m` triples, validated: `a_i != 0` for all `i`, `c_i != 0`
    /// for `i >= 2`. `c_1` is normalized to 1.
    pub fn sample(&self, field: &PrimeField, m: usize) -> Result<Recurrence> {
        let mut rec = Recurrence {
            a: Vec::with_capacity(m),
            b: Vec::with_capacity(m),
            c: Vec::with_capacity(m),
        };
        for i in 1..=m {
            let t = self.triple(field, i)?;
            if t.a.is_zero() {
                return Err(Error::InvalidFamily {
                    index: i,
                    reason: "a_i must be nonzero".into(),
                });
            }
            if i >= 2 && t.c.is_zero() {
                return Err(Error::InvalidFamily {
                    index: i,
                    reason: "c_i must be nonzero".into(),
                });
            }
            rec.a.push(t.a);
            rec.b.push(t.b);
            rec.c.push(if i == 1 { field.one() } else { t.c });
        }
        Ok(rec)
    }
}

/// Validated coefficients `(a_i, b_i, c_i)` for `1 <= i <= len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    a: Vec<Fp>,
    b: Vec<Fp>,
    c: Vec<Fp>,
}

impl Recurrence {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `a_i`, 1-indexed.
    #[inline]
    pub fn a(&self, i: usize) -> Fp {
        self.a[i - 1]
    }

    #[inline]
    pub fn b(&self, i: usize) -> Fp {
        self.b[i - 1]
    }

    #[inline]
    pub fn c(&self, i: usize) -> Fp {
        self.c[i - 1]
    }

    pub fn a_values(&self) -> &[Fp] {
        &self.a
    }

    pub fn b_values(&self) -> &[Fp] {
        &self.b
    }

    pub fn c_values(&self) -> &[Fp] {
        &self.c
    }

    /// The first `m` triples.
    pub fn prefix(&self, m: usize) -> Recurrence {
        let m = m.min(self.len());
        Recurrence {
            a: self.a[..m].to_vec(),
            b: self.b[..m].to_vec(),
            c: self.c[..m].to_vec(),
        }
    }

    /// Extends with `(1, 0, 1)` up to `m` triples.
    pub fn padded(&self, field: &PrimeField, m: usize) -> Recurrence {
        let mut out = self.clone();
        let t = Triple::padding(field);
        while out.a.len() < m {
            out.a.push(t.a);
            out.b.push(t.b);
            out.c.push(t.c);
        }
        out
    }

    /// The sequence `(a_{i+1}, b_{i+1}, c_{i+1})`, which defines the
    /// associated polynomials `G_i`.
    pub fn shifted(&self) -> Recurrence {
        Recurrence {
            a: self.a.iter().skip(1).copied().collect(),
            b: self.b.iter().skip(1).copied().collect(),
            c: self.c.iter().skip(1).copied().collect(),
        }
    }

    /// `F_0, ..., F_{count-1}` by running the recurrence directly;
    /// `F_i` has declared length `i + 1`.
    pub fn polys(&self, field: &PrimeField, count: usize) -> Vec<DensePoly> {
        assert!(
            count <= self.len() + 1,
            "recurrence too short for {count} polynomials"
        );
        let mut out: Vec<DensePoly> = Vec::with_capacity(count);
        for i in 0..count {
            let next = match i {
                0 => DensePoly::constant(field.one()),
                _ => {
                    let (a, b, c) = (self.a(i), self.b(i), self.c(i));
                    let cur = &out[i - 1];
                    let mut f = vec![Fp::ZERO; i + 1];
                    for (k, &x) in cur.coeffs().iter().enumerate() {
                        f[k] = field.mul_add(f[k], b, x);
                        f[k + 1] = field.mul_add(f[k + 1], a, x);
                    }
                    if i >= 2 {
                        for (k, &x) in out[i - 2].coeffs().iter().enumerate() {
                            f[k] = field.mul_add(f[k], c, x);
                        }
                    }
                    DensePoly::new(f)
                }
            };
            out.push(next);
        }
        out
    }
}

/// The upper-triangular matrix whose column `j` holds the monomial
/// coefficients of `F_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMatrix {
    n: usize,
    entries: Vec<Fp>,
}

impl BasisMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    /// Coefficient of `x^row` in `F_col`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Fp {
        self.entries[row * self.n + col]
    }

    pub fn column(&self, col: usize) -> Vec<Fp> {
        (0..self.n).map(|r| self.get(r, col)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Fp>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

pub fn basis_matrix(
    field: &PrimeField,
    family: &RecurrenceFamily,
    n: usize,
) -> Result<BasisMatrix> {
    let rec = family.sample(field, n.saturating_sub(1))?;
    let polys = rec.polys(field, n);
    let mut entries = vec![Fp::ZERO; n * n];
    for (j, f) in polys.iter().enumerate() {
        for (i, &c) in f.coeffs().iter().enumerate() {
            entries[i * n + j] = c;
        }
    }
    Ok(BasisMatrix { n, entries })
}

/// `sum alpha_i F_i` by running the recurrence and accumulating; `O(n^2)`.
pub fn naive_expand(
    field: &PrimeField,
    family: &RecurrenceFamily,
    alpha: &[Fp],
) -> Result<DensePoly> {
    let n = alpha.len();
    let rec = family.sample(field, n.saturating_sub(1))?;
    let mut acc = DensePoly::zeros(n);
    let (mut prev, mut cur) = (vec![Fp::ZERO; n], vec![Fp::ZERO; n]);
    if n > 0 {
        cur[0] = field.one();
    }
    for (i, &alpha_i) in alpha.iter().enumerate() {
        if i > 0 {
            let (a, b, c) = (rec.a(i), rec.b(i), rec.c(i));
            let mut next = vec![Fp::ZERO; n];
            for k in 0..i {
                next[k] = field.mul_add(next[k], b, cur[k]);
                next[k + 1] = field.mul_add(next[k + 1], a, cur[k]);
                next[k] = field.mul_add(next[k], c, prev[k]);
            }
            prev = std::mem::replace(&mut cur, next);
        }
        if !alpha_i.is_zero() {
            for (s, &x) in acc.coeffs_mut().iter_mut().zip(&cur[..=i]) {
                *s = field.mul_add(*s, alpha_i, x);
            }
        }
    }
    Ok(acc)
}

/// Coefficients `alpha` with `sum alpha_i F_i = A`, by back-substitution on
/// the basis matrix, highest index first; `O(n^2)`.
pub fn naive_decomp(
    field: &PrimeField,
    family: &RecurrenceFamily,
    a: &DensePoly,
) -> Result<Vec<Fp>> {
    let n = a.len();
    let basis = basis_matrix(field, family, n)?;
    let mut rest = a.coeffs().to_vec();
    let mut alpha = vec![Fp::ZERO; n];
    for j in (0..n).rev() {
        let coef = field.div(rest[j], basis.get(j, j))?;
        alpha[j] = coef;
        if coef.is_zero() {
            continue;
        }
        for (i, r) in rest.iter_mut().enumerate().take(j + 1) {
            *r = field.sub(*r, field.mul(coef, basis.get(i, j)));
        }
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::TEST_MODULUS;

    fn f() -> PrimeField {
        PrimeField::default()
    }

    fn vals(k: &PrimeField, xs: &[i64]) -> Vec<Fp> {
        xs.iter().map(|&x| k.from_i64(x)).collect()
    }

    fn unit(k: &PrimeField, n: usize, i: usize) -> Vec<Fp> {
        let mut v = vec![Fp::ZERO; n];
        v[i] = k.one();
        v
    }

    #[test]
    fn sample_chebyshev_and_legendre() {
        let k = f();
        let rec = RecurrenceFamily::preset(Preset::ChebyshevT)
            .sample(&k, 3)
            .unwrap();
        assert_eq!(rec.a_values(), vals(&k, &[1, 2, 2]));
        assert_eq!(rec.b_values(), vals(&k, &[0, 0, 0]));
        assert_eq!(rec.c_values(), vals(&k, &[1, -1, -1]));

        let half = k.inv(k.elem(2)).unwrap();
        let rec = RecurrenceFamily::preset(Preset::Legendre)
            .sample(&k, 2)
            .unwrap();
        assert_eq!(rec.a_values(), &[k.one(), k.mul(k.elem(3), half)]);
        assert_eq!(rec.b_values(), vals(&k, &[0, 0]));
        assert_eq!(rec.c_values(), &[k.one(), k.neg(half)]);
    }

    #[test]
    fn invalid_custom_families() {
        let k = f();
        let fam = RecurrenceFamily::custom(
            vals(&k, &[1, 0, 2]),
            vals(&k, &[0, 0, 0]),
            vals(&k, &[1, 1, 1]),
        )
        .unwrap();
        assert_eq!(
            fam.sample(&k, 3).unwrap_err(),
            Error::InvalidFamily {
                index: 2,
                reason: "a_i must be nonzero".into()
            }
        );
        let fam = RecurrenceFamily::custom(
            vals(&k, &[1, 1, 2]),
            vals(&k, &[0, 0, 0]),
            vals(&k, &[0, 1, 0]),
        )
        .unwrap();
        assert!(matches!(
            fam.sample(&k, 3),
            Err(Error::InvalidFamily { index: 3, .. })
        ));
        // c_1 = 0 is accepted and normalized.
        assert_eq!(fam.sample(&k, 2).unwrap().c(1), k.one());
        assert!(RecurrenceFamily::custom(vals(&k, &[1]), vec![], vec![]).is_err());
        let fam = RecurrenceFamily::custom(
            vals(&k, &[1, 1, 2]),
            vals(&k, &[0, 0, 0]),
            vals(&k, &[1, 1, 1]),
        )
        .unwrap();
        assert_eq!(
            fam.sample(&k, 4).unwrap_err(),
            Error::FamilyTooShort {
                needed: 4,
                available: 3
            }
        );
    }

    #[test]
    fn presets_reject_indices_past_the_modulus() {
        let k = PrimeField::new(TEST_MODULUS).unwrap();
        let fam = RecurrenceFamily::preset(Preset::Hermite);
        assert!(fam.sample(&k, 256).is_ok());
        assert!(matches!(
            fam.sample(&k, 257),
            Err(Error::InvalidFamily { index: 257, .. })
        ));
        // a_129 = 257 / 129 vanishes mod 257.
        let fam = RecurrenceFamily::preset(Preset::Legendre);
        assert!(fam.sample(&k, 128).is_ok());
        assert!(matches!(
            fam.sample(&k, 129),
            Err(Error::InvalidFamily { index: 129, .. })
        ));
    }

    #[test]
    fn padding() {
        let k = f();
        let preset = RecurrenceFamily::preset(Preset::Hermite);
        assert_eq!(preset.pad(10), preset);
        let fam = RecurrenceFamily::custom(
            vals(&k, &[3, 4, 5]),
            vals(&k, &[1, 1, 1]),
            vals(&k, &[2, 2, 2]),
        )
        .unwrap();
        let padded = fam.pad(5);
        assert_eq!(padded.available_length(), Some(5));
        assert_eq!(padded.triple(&k, 3).unwrap().a, k.elem(5));
        for i in [4, 5] {
            assert_eq!(padded.triple(&k, i).unwrap(), Triple::padding(&k));
        }
        assert!(padded.triple(&k, 6).is_err());
        assert_eq!(fam.pad(2), fam.pad(0));
    }

    #[test]
    fn chebyshev_expansions() {
        let k = f();
        let t = RecurrenceFamily::preset(Preset::ChebyshevT);
        let c = naive_expand(&k, &t, &[k.elem(7)]).unwrap();
        assert_eq!(c, DensePoly::constant(k.elem(7)));
        let t3 = naive_expand(&k, &t, &unit(&k, 4, 3)).unwrap();
        assert_eq!(t3, DensePoly::from_i64s(&k, &[0, -3, 0, 4]));
        let t5 = naive_expand(&k, &t, &unit(&k, 6, 5)).unwrap();
        assert_eq!(t5, DensePoly::from_i64s(&k, &[0, 5, 0, -20, 0, 16]));
    }

    #[test]
    fn classical_families_small_degree() {
        let k = f();
        let inv = |x: u64| k.inv(k.elem(x)).unwrap();
        let cases: [(Preset, usize, Vec<Fp>); 4] = [
            // U_3 = 8x^3 - 4x
            (Preset::ChebyshevU, 3, vals(&k, &[0, -4, 0, 8])),
            // H_4 = 16x^4 - 48x^2 + 12
            (Preset::Hermite, 4, vals(&k, &[12, 0, -48, 0, 16])),
            // P_3 = (5x^3 - 3x) / 2
            (
                Preset::Legendre,
                3,
                vec![
                    k.zero(),
                    k.mul(k.from_i64(-3), inv(2)),
                    k.zero(),
                    k.mul(k.elem(5), inv(2)),
                ],
            ),
            // L_3 = (-x^3 + 9x^2 - 18x + 6) / 6
            (
                Preset::Laguerre,
                3,
                vals(&k, &[6, -18, 9, -1])
                    .into_iter()
                    .map(|c| k.mul(c, inv(6)))
                    .collect(),
            ),
        ];
        for (preset, i, expect) in cases {
            let got = naive_expand(&k, &preset.into(), &unit(&k, i + 1, i)).unwrap();
            assert_eq!(got.coeffs(), &expect[..], "{preset}");
        }
    }

    #[test]
    fn naive_decomp_examples() {
        let k = f();
        let t = RecurrenceFamily::preset(Preset::ChebyshevT);
        let one = DensePoly::from_u64s(&k, &[1, 0, 0, 0, 0]);
        assert_eq!(naive_decomp(&k, &t, &one).unwrap(), unit(&k, 5, 0));
        let x3 = DensePoly::from_u64s(&k, &[0, 0, 0, 1]);
        let inv4 = k.inv(k.elem(4)).unwrap();
        let expect = vec![k.zero(), k.mul(k.elem(3), inv4), k.zero(), inv4];
        assert_eq!(naive_decomp(&k, &t, &x3).unwrap(), expect);
        assert_eq!(naive_expand(&k, &t, &expect).unwrap(), x3);
    }

    #[test]
    fn basis_matrix_shape() {
        let k = f();
        let fam = RecurrenceFamily::custom(vals(&k, &[3, 4]), vals(&k, &[5, 6]), vals(&k, &[1, 7]))
            .unwrap();
        let m1 = basis_matrix(&k, &fam, 1).unwrap();
        assert_eq!(m1.rows(), vec![vec![k.one()]]);
        let m2 = basis_matrix(&k, &fam, 2).unwrap();
        assert_eq!(m2.rows(), vec![vals(&k, &[1, 5]), vals(&k, &[0, 3])]);
        for preset in Preset::ALL {
            let m = basis_matrix(&k, &preset.into(), 64).unwrap();
            let rec = RecurrenceFamily::from(preset).sample(&k, 63).unwrap();
            let mut lead = k.one();
            for i in 0..64 {
                if i > 0 {
                    lead = k.mul(lead, rec.a(i));
                }
                assert_eq!(m.get(i, i), lead);
                assert!(!lead.is_zero());
                for j in 0..i {
                    assert!(m.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn preset_names_roundtrip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert_eq!("Chebyshev_T".parse::<Preset>().unwrap(), Preset::ChebyshevT);
        assert!("jacobi".parse::<Preset>().is_err());
    }
}
