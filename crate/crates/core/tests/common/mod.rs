//! Reference implementations used as test oracles. None of these touch the
//! subproduct tree, the NTT, series inversion or transposed products.

#![allow(dead_code)]

use orthoconv::{DensePoly, Fp, Preset, PrimeField, Recurrence, RecurrenceFamily};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_elem(field: &PrimeField, rng: &mut impl Rng) -> Fp {
    field.elem(rng.gen_range(0..field.modulus()))
}

pub fn random_nonzero(field: &PrimeField, rng: &mut impl Rng) -> Fp {
    field.elem(rng.gen_range(1..field.modulus()))
}

pub fn random_vec(field: &PrimeField, rng: &mut impl Rng, n: usize) -> Vec<Fp> {
    (0..n).map(|_| random_elem(field, rng)).collect()
}

/// Custom family with `len` random triples, `a_i` and `c_i` nonzero.
pub fn random_family(field: &PrimeField, rng: &mut impl Rng, len: usize) -> RecurrenceFamily {
    let a = (0..len).map(|_| random_nonzero(field, rng)).collect();
    let b = random_vec(field, rng, len);
    let c = (0..len).map(|_| random_nonzero(field, rng)).collect();
    RecurrenceFamily::custom(a, b, c).unwrap()
}

/// Random custom family most of the time, a preset otherwise.
pub fn random_any_family(field: &PrimeField, rng: &mut impl Rng, len: usize) -> RecurrenceFamily {
    if rng.gen_bool(0.2) {
        Preset::ALL[rng.gen_range(0..Preset::ALL.len())].into()
    } else {
        random_family(field, rng, len)
    }
}

pub fn dot(field: &PrimeField, a: &[Fp], b: &[Fp]) -> Fp {
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (&x, &y)| field.mul_add(acc, x, y))
}

pub fn naive_mul(field: &PrimeField, a: &[Fp], b: &[Fp]) -> Vec<Fp> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fp::default(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.mul_add(out[i + j], x, y);
        }
    }
    out
}

/// `F_0 .. F_{count-1}` by the plain recurrence.
pub fn direct_f(field: &PrimeField, rec: &Recurrence, count: usize) -> Vec<Vec<Fp>> {
    run_recurrence(field, |i| (rec.a(i), rec.b(i), rec.c(i)), count)
}

/// `G_0 .. G_{count-1}` by `G_i = (a_{i+1} x + b_{i+1}) G_{i-1} + c_{i+1} G_{i-2}`.
pub fn direct_g(field: &PrimeField, rec: &Recurrence, count: usize) -> Vec<Vec<Fp>> {
    run_recurrence(field, |i| (rec.a(i + 1), rec.b(i + 1), rec.c(i + 1)), count)
}

fn run_recurrence(
    field: &PrimeField,
    coeffs: impl Fn(usize) -> (Fp, Fp, Fp),
    count: usize,
) -> Vec<Vec<Fp>> {
    let mut out: Vec<Vec<Fp>> = Vec::with_capacity(count);
    for i in 0..count {
        if i == 0 {
            out.push(vec![field.one()]);
            continue;
        }
        let (a, b, c) = coeffs(i);
        let mut next = vec![field.zero(); i + 1];
        for (k, &x) in out[i - 1].iter().enumerate() {
            next[k] = field.add(next[k], field.mul(b, x));
            next[k + 1] = field.add(next[k + 1], field.mul(a, x));
        }
        if i >= 2 {
            for (k, &x) in out[i - 2].iter().enumerate() {
                next[k] = field.add(next[k], field.mul(c, x));
            }
        }
        out.push(next);
    }
    out
}

/// Moments `l_0 .. l_{2n-2}` from `l_0 = 1 / a_1` and the orthogonality
/// conditions `L(F_i x^j) = 0` for `j < i`, solved one unknown at a time.
/// Needs `rec.len() >= n`.
pub fn moments_by_orthogonality(field: &PrimeField, rec: &Recurrence, n: usize) -> Vec<Fp> {
    let f = direct_f(field, rec, n + 1);
    let mut l = vec![field.zero(); 2 * n - 1];
    l[0] = field.inv(rec.a(1)).unwrap();
    for k in 1..2 * n - 1 {
        let i = k / 2 + 1;
        let j = k - i;
        let mut s = field.zero();
        for t in 0..i {
            s = field.mul_add(s, f[i][t], l[t + j]);
        }
        l[k] = field.neg(field.div(s, f[i][i]).unwrap());
    }
    l
}

/// `L(p)` given moments.
pub fn apply_form(field: &PrimeField, moments: &[Fp], p: &[Fp]) -> Fp {
    assert!(p.len() <= moments.len());
    dot(field, p, moments)
}

/// `(-1)^i c_2 ... c_{i+1} / a_{i+1}`, evaluated term by term.
pub fn expected_norm(field: &PrimeField, rec: &Recurrence, i: usize) -> Fp {
    let mut num = field.one();
    for t in 2..=i + 1 {
        num = field.mul(num, rec.c(t));
    }
    if i % 2 == 1 {
        num = field.neg(num);
    }
    field.div(num, rec.a(i + 1)).unwrap()
}

pub fn mat_mul(field: &PrimeField, x: &[Vec<Fp>], y: &[Vec<Fp>]) -> Vec<Vec<Fp>> {
    let (r, m, c) = (x.len(), y.len(), y[0].len());
    let mut out = vec![vec![field.zero(); c]; r];
    for i in 0..r {
        for t in 0..m {
            let xi = x[i][t];
            if xi.is_zero() {
                continue;
            }
            for j in 0..c {
                out[i][j] = field.mul_add(out[i][j], xi, y[t][j]);
            }
        }
    }
    out
}

pub fn transpose(x: &[Vec<Fp>]) -> Vec<Vec<Fp>> {
    let (r, c) = (x.len(), x[0].len());
    (0..c).map(|j| (0..r).map(|i| x[i][j]).collect()).collect()
}

pub fn unit(field: &PrimeField, n: usize, i: usize) -> Vec<Fp> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub fn poly(values: Vec<Fp>) -> DensePoly {
    DensePoly::new(values)
}

pub fn trimmed(v: &[Fp]) -> Vec<Fp> {
    let end = v.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    v[..end].to_vec()
}

/// Power-series inverse by the schoolbook recurrence, independent of Newton
/// iteration.
pub fn naive_series_inv(field: &PrimeField, f: &[Fp], k: usize) -> Vec<Fp> {
    let inv0 = field.inv(f[0]).unwrap();
    let mut g = vec![field.zero(); k];
    g[0] = inv0;
    for t in 1..k {
        let mut s = field.zero();
        for i in 1..=t.min(f.len() - 1) {
            s = field.mul_add(s, f[i], g[t - i]);
        }
        g[t] = field.neg(field.mul(s, inv0));
    }
    g
}

/// `rev(p, m)` on raw coefficient vectors.
pub fn reversed(p: &[Fp], m: usize) -> Vec<Fp> {
    let mut v = p.to_vec();
    v.resize(m, Fp::default());
    v.reverse();
    v
}
