use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;

/// Precomputed data for ℚ(ζ_N): Φ_N and the table x^k mod Φ_N for 0 ≤ k < N.
#[derive(Debug)]
pub struct Field {
    pub n: u32,
    pub phi: usize,
    pub poly: Vec<i64>,
    pub powers: Vec<Vec<i64>>,
    /// max over k of the 1-norm of x^k mod Φ_N
    pub power_norm: u64,
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

fn cyclotomic_poly(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d, memo);
            num = poly_divexact(&num, &phi_d);
        }
    }
    memo.insert(n, num.clone());
    num
}

impl Field {
    fn build(n: u32) -> Field {
        let mut memo = HashMap::new();
        let poly = cyclotomic_poly(n, &mut memo);
        let phi = poly.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and fold the overflow coefficient back
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] = cur[i].checked_sub(top.checked_mul(poly[i]).expect("overflow")).expect("overflow");
                }
            }
        }
        let power_norm = powers
            .iter()
            .map(|v| v.iter().map(|c| c.unsigned_abs()).sum::<u64>())
            .max()
            .unwrap_or(1);
        Field { n, phi, poly, powers, power_norm }
    }

    pub fn get(n: u32) -> Arc<Field> {
        assert!(n >= 1, "cyclotomic modulus must be positive");
        static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
        let cell = FIELDS.get_or_init(Default::default);
        if let Some(f) = cell.read().unwrap().get(&n) {
            return f.clone();
        }
        let f = Arc::new(Field::build(n));
        cell.write().unwrap().entry(n).or_insert(f).clone()
    }
}

/// Σ c_k ζ_N^k, kept reduced modulo Φ_N (so `coeffs.len() == φ(N)`).
///
/// Values with different moduli compare and combine by lifting to the lcm.
#[derive(Clone)]
pub struct CycloNumber {
    n: u32,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    pub fn zero() -> Self {
        CycloNumber { n: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycloNumber { n: 1, coeffs: vec![r] }
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Builds Σ c·ζ_N^e from arbitrary integer exponents.
    pub fn from_terms(n: u32, terms: &[(i64, Rational)]) -> Self {
        let f = Field::get(n);
        let mut coeffs = vec![Rational::zero(); f.phi];
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let k = e.rem_euclid(n as i64) as usize;
            for (slot, &t) in coeffs.iter_mut().zip(&f.powers[k]) {
                if t != 0 {
                    *slot += &(c * &Rational::integer(t));
                }
            }
        }
        CycloNumber { n, coeffs }
    }

    pub fn zeta(n: u32, k: i64) -> Self {
        Self::from_terms(n, &[(k, Rational::one())])
    }

    /// sin(aπ/b) in ℚ(ζ_lcm(4,2b)).
    pub fn sin(a: i64, b: i64) -> Self {
        assert!(b >= 1, "sin denominator must be positive");
        let n = (4u32).lcm(&(2 * b as u32));
        Self::sin_in(a, b, n)
    }

    /// sin(aπ/b) written directly in ℚ(ζ_n); needs lcm(4,2b) | n.
    pub fn sin_in(a: i64, b: i64, n: u32) -> Self {
        assert!(n.is_multiple_of(4) && n as i64 % (2 * b) == 0, "modulus too small for sin");
        Self::from_terms(n, &sin_terms(a, b, n))
    }

    /// Embeds into ℚ(ζ_m) for a multiple m of the current modulus.
    pub fn lift(&self, m: u32) -> Self {
        if m == self.n {
            return self.clone();
        }
        assert!(m.is_multiple_of(self.n), "cannot lift modulus {} to {}", self.n, m);
        let step = (m / self.n) as i64;
        let terms: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64 * step, c.clone()))
            .collect();
        Self::from_terms(m, &terms)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloNumber { n: self.n, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Complex value (re, im).
    pub fn float_eval(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = c.to_f64();
            let ang = std::f64::consts::TAU * k as f64 / self.n as f64;
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re, im)
    }

    /// Sum of |c_k|; bounds |σ(x)| for every embedding σ.
    pub fn l1_bound(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs().to_f64()).sum()
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.n == b.n {
            return (a.clone(), b.clone());
        }
        let m = a.n.lcm(&b.n);
        (a.lift(m), b.lift(m))
    }

    fn add_impl(a: &Self, b: &Self, sign: bool) -> Self {
        if a.n != b.n {
            let (x, y) = Self::common(a, b);
            return Self::add_impl(&x, &y, sign);
        }
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| if sign { x + y } else { x - y })
            .collect();
        CycloNumber { n: a.n, coeffs }
    }

    fn mul_impl(a: &Self, b: &Self) -> Self {
        if a.n != b.n {
            let (x, y) = Self::common(a, b);
            return Self::mul_impl(&x, &y);
        }
        let f = Field::get(a.n);
        let phi = f.phi;
        let mut wide = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    wide[i + j] += &(x * y);
                }
            }
        }
        let mut coeffs: Vec<Rational> = wide[..phi].to_vec();
        for (k, c) in wide.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (slot, &t) in coeffs.iter_mut().zip(&f.powers[k % a.n as usize]) {
                if t != 0 {
                    *slot += &(c * &Rational::integer(t));
                }
            }
        }
        CycloNumber { n: a.n, coeffs }
    }

    /// Exact quotient self / d (d ≠ 0), by solving the φ×φ rational system of multiplication by d.
    ///
    /// Only the Bareiss backend needs this; it is a field inversion in disguise and costs O(φ³).
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (a, d) = Self::common(self, d);
        let n = a.n;
        let phi = Field::get(n).phi;
        // columns: d·x^j
        let cols: Vec<CycloNumber> = (0..phi)
            .map(|j| Self::mul_impl(&d, &Self::zeta(n, j as i64)))
            .collect();
        let mut m: Vec<Vec<Rational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<Rational> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
                row.push(a.coeffs[i].clone());
                row
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = Rational::one() / m[col][col].clone();
            for v in m[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..phi {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=phi {
                        let t = &m[col][c] * &f;
                        m[r][c] -= &t;
                    }
                }
            }
        }
        Some(CycloNumber { n, coeffs: m.into_iter().map(|row| row[phi].clone()).collect() })
    }
}

/// The four-term expansion of sin(aπ/b) as powers of ζ_n: (−½)(ζ^{n/4+A} − ζ^{n/4−A}).
pub fn sin_terms(a: i64, b: i64, n: u32) -> Vec<(i64, Rational)> {
    let big_a = a * (n as i64 / (2 * b));
    let q = n as i64 / 4;
    vec![(q + big_a, Rational::new(-1, 2)), (q - big_a, Rational::new(1, 2))]
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})ζ{}^{k}", self.n))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! cyclo_ops {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycloNumber> for &CycloNumber {
            type Output = CycloNumber;
            fn $m(self, o: &CycloNumber) -> CycloNumber {
                $body(self, o)
            }
        }
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, o: CycloNumber) -> CycloNumber {
                $body(&self, &o)
            }
        }
        impl $tr<&CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, o: &CycloNumber) -> CycloNumber {
                $body(&self, o)
            }
        }
    };
}

cyclo_ops!(Add, add, |a, b| CycloNumber::add_impl(a, b, true));
cyclo_ops!(Sub, sub, |a, b| CycloNumber::add_impl(a, b, false));
cyclo_ops!(Mul, mul, CycloNumber::mul_impl);

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { n: self.n, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -self.clone()
    }
}

#[derive(Deserialize)]
struct CycloJson {
    #[serde(rename = "N")]
    n: u32,
    coeffs: BTreeMap<String, Rational>,
}

impl Serialize for CycloNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // keys sort numerically in output because BTreeMap<String> would sort "10" < "2"
        use serde::ser::SerializeMap;
        struct Coeffs<'a>(&'a [Rational]);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(None)?;
                for (k, c) in self.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    m.serialize_entry(&k.to_string(), c)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("N", &self.n)?;
        m.serialize_entry("coeffs", &Coeffs(&self.coeffs))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CycloJson::deserialize(d)?;
        if raw.n == 0 {
            return Err(D::Error::custom("cyclotomic modulus must be positive"));
        }
        let terms = raw
            .coeffs
            .into_iter()
            .map(|(k, c)| k.parse::<i64>().map(|k| (k, c)).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycloNumber::from_terms(raw.n, &terms))
    }
}
