//! Kac-table data of the Virasoro minimal model C_{p,q}.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactmath::{CycloNumber, Rational};
use crate::Error;

/// Coprime pair 2 ≤ p < q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct MinimalModel {
    p: i64,
    q: i64,
}

#[derive(Deserialize)]
struct RawModel {
    p: i64,
    q: i64,
}

impl TryFrom<RawModel> for MinimalModel {
    type Error = Error;
    fn try_from(r: RawModel) -> Result<Self, Error> {
        MinimalModel::new(r.p, r.q)
    }
}

/// Canonical Kac label: the lexicographically smaller of (m,n) and (p−m,q−n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KacLabel {
    pub m: i64,
    pub n: i64,
}

impl MinimalModel {
    pub fn new(p: i64, q: i64) -> Result<Self, Error> {
        let (p, q) = if p > q { (q, p) } else { (p, q) };
        if p < 2 {
            return Err(Error::InvalidModel(format!("({p},{q}): need p,q ≥ 2")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidModel(format!("({p},{q}): p and q must be coprime, gcd = {}", p.gcd(&q))));
        }
        Ok(MinimalModel { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn rank(&self) -> usize {
        ((self.p - 1) * (self.q - 1) / 2) as usize
    }

    /// Common cyclotomic modulus lcm(4, 2p, 2q) for S-matrix entries.
    pub fn cyclo_modulus(&self) -> u32 {
        let n = 4i64.lcm(&(2 * self.p)).lcm(&(2 * self.q));
        n as u32
    }

    pub fn central_charge(&self) -> Rational {
        let (p, q) = (self.p, self.q);
        Rational::one() - Rational::new(6 * (p - q) * (p - q), p * q)
    }

    fn raw_canon(&self, m: i64, n: i64) -> KacLabel {
        let other = (self.p - m, self.q - n);
        let (m, n) = (m, n).min(other);
        KacLabel { m, n }
    }

    /// Validates a raw pair and returns its canonical class.
    pub fn label(&self, m: i64, n: i64) -> Result<KacLabel, Error> {
        if !(1..self.p).contains(&m) || !(1..self.q).contains(&n) {
            return Err(Error::InvalidLabel(format!(
                "({m},{n}) outside the Kac rectangle 0<m<{}, 0<n<{}",
                self.p, self.q
            )));
        }
        Ok(self.raw_canon(m, n))
    }

    pub fn unit(&self) -> KacLabel {
        KacLabel { m: 1, n: 1 }
    }

    /// h_{m,n} = ((mq − np)² − (p−q)²)/(4pq) on a raw pair.
    pub fn raw_weight(&self, m: i64, n: i64) -> Rational {
        let (p, q) = (self.p, self.q);
        let a = m * q - n * p;
        Rational::new(a * a - (p - q) * (p - q), 4 * p * q)
    }

    pub fn conformal_weight(&self, x: &KacLabel) -> Rational {
        self.raw_weight(x.m, x.n)
    }

    /// θ = exp(2πi·h) as ζ_D^k with D the denominator of h mod 1.
    pub fn twist(&self, x: &KacLabel) -> CycloNumber {
        root_of_unity(&self.conformal_weight(x))
    }

    pub fn simple_current(&self) -> KacLabel {
        self.raw_canon(1, self.q - 1)
    }

    /// σ(m,n) = (m, q−n) ~ (p−m, n).
    pub fn simple_current_act(&self, x: &KacLabel) -> KacLabel {
        self.raw_canon(x.m, self.q - x.n)
    }

    pub fn list_simples(&self) -> Vec<KacLabel> {
        let mut out: Vec<KacLabel> = (1..self.p)
            .flat_map(|m| (1..self.q).map(move |n| (m, n)))
            .map(|(m, n)| self.raw_canon(m, n))
            .filter(|x| (x.m, x.n) <= (self.p - x.m, self.q - x.n))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// exp(2πi·r) as an element of ℚ(ζ_den).
pub fn root_of_unity(r: &Rational) -> CycloNumber {
    let f = r.fract_pos();
    let d = f.denom_u64() as u32;
    let k: i64 = f.numer().try_into().expect("small numerator");
    CycloNumber::zeta(d, k)
}

impl fmt::Display for MinimalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl fmt::Display for KacLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.m, self.n)
    }
}

impl FromStr for KacLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidLabel(format!("expected \"m,n\", got {s:?}"));
        let (m, n) = s.trim().trim_matches(|c| c == '(' || c == ')').split_once(',').ok_or_else(bad)?;
        Ok(KacLabel { m: m.trim().parse().map_err(|_| bad())?, n: n.trim().parse().map_err(|_| bad())? })
    }
}

impl Serialize for KacLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KacLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
