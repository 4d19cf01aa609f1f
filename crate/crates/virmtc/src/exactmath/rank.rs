use std::sync::LazyLock;

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::cyclo::{CycloNumber, Field};
use super::matrix::ExactMatrix;
use super::rational::denominator_lcm;
use crate::registry::{Named, Registry};

/// Singular values at or below this (relative to max(1, σ_max)) count as zero.
pub const FLOAT_RANK_TOL: f64 = 1e-8;

pub trait RankBackend: Named + Send + Sync {
    /// Whether the answer is a proof rather than a numerical estimate.
    fn is_exact(&self) -> bool;
    fn rank(&self, m: &ExactMatrix) -> usize;
}

pub static RANK_BACKENDS: LazyLock<Registry<dyn RankBackend>> = LazyLock::new(|| {
    Registry::<dyn RankBackend>::new("multimodular")
        .with(Box::new(MultiModular))
        .with(Box::new(Bareiss))
        .with(Box::new(FloatSvd))
});

/// Rank with the default (certified exact) backend.
pub fn exact_rank(m: &ExactMatrix) -> usize {
    RANK_BACKENDS.default_strategy().rank(m)
}

pub fn exact_rank_with(backend: &str, m: &ExactMatrix) -> usize {
    RANK_BACKENDS
        .resolve(backend)
        .unwrap_or_else(|e| panic!("{e}"))
        .rank(m)
}

// ---------------------------------------------------------------------------
// Bareiss over ℚ(ζ_N)

pub struct Bareiss;

impl Named for Bareiss {
    fn name(&self) -> &'static str {
        "bareiss"
    }
}

impl RankBackend for Bareiss {
    fn is_exact(&self) -> bool {
        true
    }

    fn rank(&self, m: &ExactMatrix) -> usize {
        let (rows, cols) = (m.rows(), m.cols());
        let mut a: Vec<Vec<CycloNumber>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
        let mut prev = CycloNumber::one().lift(m.modulus());
        let mut r = 0;
        for col in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(r, piv);
            for i in r + 1..rows {
                for j in col + 1..cols {
                    let num = &a[r][col] * &a[i][j] - &a[i][col] * &a[r][j];
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][col] = CycloNumber::zero().lift(m.modulus());
            }
            prev = a[r][col].clone();
            r += 1;
        }
        r
    }
}

// ---------------------------------------------------------------------------
// floating point

pub struct FloatSvd;

impl Named for FloatSvd {
    fn name(&self) -> &'static str {
        "float"
    }
}

impl RankBackend for FloatSvd {
    fn is_exact(&self) -> bool {
        false
    }

    fn rank(&self, m: &ExactMatrix) -> usize {
        if m.rows() == 0 || m.cols() == 0 {
            return 0;
        }
        let vals = m.to_float();
        let dm = DMatrix::from_fn(m.rows(), m.cols(), |i, j| Complex::new(vals[i][j].0, vals[i][j].1));
        float_rank(&dm)
    }
}

pub fn float_rank(dm: &DMatrix<Complex<f64>>) -> usize {
    let sv = dm.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(1.0f64, f64::max);
    sv.iter().filter(|&&s| s > FLOAT_RANK_TOL * top).count()
}

// ---------------------------------------------------------------------------
// certified multi-modular rank
//
// Every entry is scaled row-wise into ℤ[ζ_N]. For a prime ℓ ≡ 1 (mod N) the ring
// ℤ[ζ_N]/ℓ splits as ∏_j F_ℓ via ζ ↦ ω^j (ω of order N, gcd(j,N) = 1). A nonzero
// minor mod ℓ gives a lower bound. Once ∏ℓ exceeds a bound on the power-basis
// coefficients of every minor, "all minors vanish mod every ℓ" forces them to
// vanish in ℤ[ζ_N], so the largest rank seen is exact.

pub struct MultiModular;

impl Named for MultiModular {
    fn name(&self) -> &'static str {
        "multimodular"
    }
}

impl RankBackend for MultiModular {
    fn is_exact(&self) -> bool {
        true
    }

    fn rank(&self, m: &ExactMatrix) -> usize {
        let (rows, cols) = (m.rows(), m.cols());
        let cap = rows.min(cols);
        if cap == 0 {
            return 0;
        }
        let n = m.modulus();
        let field = Field::get(n);
        let int_rows = integerize(m);
        let bound = minor_bound(&int_rows, cap, field.power_norm);

        let units: Vec<u64> = (1..=n as u64).filter(|j| j.gcd(&(n as u64)) == 1).collect();
        let mut best = 0;
        let mut modulus_product = BigInt::one();
        for ell in primes_one_mod(n as u64) {
            let omega = root_of_unity(ell, n as u64);
            let pw: Vec<u64> = std::iter::successors(Some(1u64), |&x| Some(mulmod(x, omega, ell)))
                .take(n as usize)
                .collect();
            let reduced: Vec<Vec<Vec<u64>>> = int_rows
                .iter()
                .map(|row| row.iter().map(|e| e.iter().map(|c| bigmod(c, ell)).collect()).collect())
                .collect();
            for &j in &units {
                let mat: Vec<Vec<u64>> = reduced
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|coeffs| {
                                coeffs.iter().enumerate().fold(0u64, |acc, (k, &c)| {
                                    if c == 0 {
                                        acc
                                    } else {
                                        addmod(acc, mulmod(c, pw[(j as usize * k) % n as usize], ell), ell)
                                    }
                                })
                            })
                            .collect()
                    })
                    .collect();
                best = best.max(rank_mod(mat, ell));
                if best == cap {
                    return cap;
                }
            }
            modulus_product *= ell;
            if modulus_product > bound {
                return best;
            }
        }
        unreachable!("prime supply exhausted")
    }
}

fn integerize(m: &ExactMatrix) -> Vec<Vec<Vec<BigInt>>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = denominator_lcm(row.iter().flat_map(|x| x.coeffs()));
            row.iter()
                .map(|x| x.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect())
                .collect()
        })
        .collect()
}

/// k! · (product of the k largest row 1-norms) · C_N.
fn minor_bound(int_rows: &[Vec<Vec<BigInt>>], k: usize, power_norm: u64) -> BigInt {
    let mut norms: Vec<BigInt> = int_rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.iter().map(|c| c.abs()).sum::<BigInt>())
                .max()
                .unwrap_or_default()
                .max(BigInt::one())
        })
        .collect();
    norms.sort_by(|a, b| b.cmp(a));
    let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
    let prod: BigInt = norms.into_iter().take(k).product();
    fact * prod * BigInt::from(power_norm.max(1))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

fn bigmod(c: &BigInt, m: u64) -> u64 {
    c.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes ℓ ≡ 1 (mod n) below 2^62, largest first.
fn primes_one_mod(n: u64) -> impl Iterator<Item = u64> {
    let top = ((1u64 << 62) - 1) / n;
    (1..=top).rev().map(move |k| k * n + 1).filter(|&l| is_prime(l))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of exact order n in F_ℓ^×.
fn root_of_unity(ell: u64, n: u64) -> u64 {
    let factors = prime_factors(n);
    (2..ell)
        .map(|g| powmod(g, (ell - 1) / n, ell))
        .find(|&w| factors.iter().all(|&r| powmod(w, n / r, ell) != 1))
        .expect("ℓ ≡ 1 mod n has a primitive n-th root")
}

fn rank_mod(mut a: Vec<Vec<u64>>, ell: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = powmod(a[r][col], ell - 2, ell);
        for i in r + 1..rows {
            if a[i][col] == 0 {
                continue;
            }
            let f = mulmod(a[i][col], inv, ell);
            for j in col..cols {
                let t = mulmod(f, a[r][j], ell);
                a[i][j] = (a[i][j] + ell - t) % ell;
            }
        }
        r += 1;
    }
    r
}
