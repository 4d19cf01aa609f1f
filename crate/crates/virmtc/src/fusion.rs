//! Fusion rings: the generic container plus the admissible-triple rule of C_{p,q}.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::minimal_model::{KacLabel, MinimalModel};
use crate::Error;

/// Residual target and iteration cap for the Perron–Frobenius power iteration.
pub const FPDIM_RESIDUAL: f64 = 1e-12;
pub const FPDIM_MAX_ITERS: usize = 100_000;

/// Commutative fusion ring with nonnegative integer structure constants.
///
/// Coefficients are keyed by (min(a,b), max(a,b), c); a dense product table is
/// derived once for fast iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    simples: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    coeffs: BTreeMap<(usize, usize, usize), u32>,
    table: Vec<Vec<Vec<(usize, u32)>>>,
}

impl FusionRing {
    pub fn new(
        simples: Vec<String>,
        unit: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, u32)>,
    ) -> Result<Self, Error> {
        let n = simples.len();
        if unit >= n {
            return Err(Error::InvalidInput(format!("unit index {unit} out of range")));
        }
        let mut coeffs = BTreeMap::new();
        for (a, b, c, v) in entries {
            if a >= n || b >= n || c >= n {
                return Err(Error::InvalidInput(format!("coefficient index out of range: ({a},{b},{c})")));
            }
            if v == 0 {
                continue;
            }
            let key = (a.min(b), a.max(b), c);
            if let Some(old) = coeffs.insert(key, v) {
                if old != v {
                    return Err(Error::InvalidInput(format!("N_({a},{b})^{c} given as both {old} and {v}")));
                }
            }
        }
        let mut table = vec![vec![Vec::new(); n]; n];
        for (&(a, b, c), &v) in &coeffs {
            table[a][b].push((c, v));
            if a != b {
                table[b][a].push((c, v));
            }
        }
        let mut dual = vec![usize::MAX; n];
        for a in 0..n {
            let hits: Vec<usize> = (0..n)
                .filter(|&b| table[a][b].iter().any(|&(c, _)| c == unit))
                .collect();
            match hits.as_slice() {
                [b] => dual[a] = *b,
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "simple {} has {} candidate duals",
                        simples[a],
                        hits.len()
                    )))
                }
            }
        }
        Ok(FusionRing { simples, unit, dual, coeffs, table })
    }

    pub fn len(&self) -> usize {
        self.simples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simples.is_empty()
    }

    pub fn simples(&self) -> &[String] {
        &self.simples
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn coeff(&self, a: usize, b: usize, c: usize) -> u32 {
        self.coeffs.get(&(a.min(b), a.max(b), c)).copied().unwrap_or(0)
    }

    /// Nonzero (c, N_ab^c), sorted by c.
    pub fn product(&self, a: usize, b: usize) -> &[(usize, u32)] {
        &self.table[a][b]
    }

    pub fn sparse_coeffs(&self) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        self.coeffs.iter().map(|(&(a, b, c), &v)| (a, b, c, v))
    }

    /// (N_a)_{bc} = N_{ab}^c.
    pub fn fusion_matrix(&self, a: usize) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut m = vec![vec![0; n]; n];
        for (b, row) in m.iter_mut().enumerate() {
            for &(c, v) in self.product(a, b) {
                row[c] = v;
            }
        }
        m
    }

    /// Unit, duality and associativity (commutativity holds by construction).
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.len();
        for b in 0..n {
            if self.product(self.unit, b) != [(b, 1)] {
                return Err(format!("unit does not act trivially on {}", self.simples[b]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let want = u32::from(b == self.dual[a]);
                if self.coeff(a, b, self.unit) != want {
                    return Err(format!("N_({},{})^1 ≠ {want}", self.simples[a], self.simples[b]));
                }
            }
        }
        self.check_associativity()
    }

    /// Σ_e N_ab^e N_ec^d = Σ_f N_bc^f N_af^d for all a,b,c,d.
    pub fn check_associativity(&self) -> Result<(), String> {
        let n = self.len();
        let mut left = vec![0u64; n];
        let mut right = vec![0u64; n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    left.iter_mut().for_each(|x| *x = 0);
                    right.iter_mut().for_each(|x| *x = 0);
                    for &(e, x) in self.product(a, b) {
                        for &(d, y) in self.product(e, c) {
                            left[d] += u64::from(x) * u64::from(y);
                        }
                    }
                    for &(f, x) in self.product(b, c) {
                        for &(d, y) in self.product(a, f) {
                            right[d] += u64::from(x) * u64::from(y);
                        }
                    }
                    if left != right {
                        return Err(format!(
                            "associativity fails for ({},{},{})",
                            self.simples[a], self.simples[b], self.simples[c]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Perron–Frobenius eigenvalue of N_a.
    ///
    /// Iterates on N_a + I from the all-ones vector: the shift keeps the Perron
    /// root strictly dominant even when N_a has eigenvalue −d (bipartite cases).
    pub fn fpdim_object(&self, a: usize) -> Result<f64, Error> {
        let n = self.len();
        let mut v = vec![1.0f64; n];
        let mut w = vec![0.0f64; n];
        let mut lambda = 0.0;
        for _ in 0..FPDIM_MAX_ITERS {
            for (b, slot) in w.iter_mut().enumerate() {
                *slot = v[b] + self.product(a, b).iter().map(|&(c, x)| f64::from(x) * v[c]).sum::<f64>();
            }
            let norm = w.iter().cloned().fold(0.0, f64::max);
            lambda = norm - 1.0;
            w.iter_mut().for_each(|x| *x /= norm);
            let resid = (0..n)
                .map(|b| {
                    let nv: f64 = self.product(a, b).iter().map(|&(c, x)| f64::from(x) * w[c]).sum();
                    (nv - lambda * w[b]).abs()
                })
                .fold(0.0, f64::max);
            std::mem::swap(&mut v, &mut w);
            if resid < FPDIM_RESIDUAL * lambda.max(1.0) {
                return Ok(lambda);
            }
        }
        Err(Error::Invariant(format!(
            "power iteration for {} did not converge (last estimate {lambda})",
            self.simples[a]
        )))
    }

    pub fn fpdims(&self) -> Result<Vec<f64>, Error> {
        (0..self.len()).map(|a| self.fpdim_object(a)).collect()
    }

    pub fn fpdim_category(&self) -> Result<f64, Error> {
        Ok(self.fpdims()?.iter().map(|d| d * d).sum())
    }

    /// Restriction to a fusion-closed index subset, reindexed in the given order.
    pub fn restrict(&self, members: &[usize]) -> Result<FusionRing, Error> {
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let unit = *pos
            .get(&self.unit)
            .ok_or_else(|| Error::InvalidInput("subset misses the unit".into()))?;
        let mut entries = Vec::new();
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate().skip(i) {
                for &(c, v) in self.product(a, b) {
                    let k = *pos
                        .get(&c)
                        .ok_or_else(|| Error::InvalidInput("subset is not fusion-closed".into()))?;
                    entries.push((i, j, k, v));
                }
            }
        }
        let names = members.iter().map(|&x| self.simples[x].clone()).collect();
        FusionRing::new(names, unit, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct RingJson {
    simples: Vec<String>,
    unit: usize,
    coeffs: Vec<[u64; 4]>,
}

impl Serialize for FusionRing {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RingJson {
            simples: self.simples.clone(),
            unit: self.unit,
            coeffs: self.sparse_coeffs().map(|(a, b, c, v)| [a as u64, b as u64, c as u64, u64::from(v)]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FusionRing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RingJson::deserialize(d)?;
        let entries = raw.coeffs.into_iter().map(|[a, b, c, v]| (a as usize, b as usize, c as usize, v as u32));
        FusionRing::new(raw.simples, raw.unit, entries).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// admissible triples

fn interval(a: i64, b: i64, k: i64) -> impl Iterator<Item = i64> {
    let lo = (a - b).abs() + 1;
    let hi = (a + b - 1).min(2 * k - 1 - a - b);
    (lo..=hi).step_by(2)
}

/// Full decomposition of a ⊠ b, each class listed with its multiplicity, sorted.
pub fn fuse(m: &MinimalModel, a: &KacLabel, b: &KacLabel) -> Vec<KacLabel> {
    let mut out: BTreeMap<KacLabel, u32> = BTreeMap::new();
    for m2 in interval(a.m, b.m, m.p()) {
        for n2 in interval(a.n, b.n, m.q()) {
            let c = m.label(m2, n2).expect("admissible interval stays inside the Kac rectangle");
            *out.entry(c).or_default() += 1;
        }
    }
    out.into_iter().flat_map(|(c, k)| std::iter::repeat_n(c, k as usize)).collect()
}

pub fn fusion_coeff(m: &MinimalModel, a: &KacLabel, b: &KacLabel, c: &KacLabel) -> u32 {
    fuse(m, a, b).iter().filter(|x| *x == c).count() as u32
}

/// pq / (8 sin²(π/p) sin²(π/q)).
pub fn fpdim_closed_form(m: &MinimalModel) -> f64 {
    let (p, q) = (m.p() as f64, m.q() as f64);
    p * q / (8.0 * (PI / p).sin().powi(2) * (PI / q).sin().powi(2))
}

/// [m]_p·[n]_q, the Frobenius–Perron dimension of (m,n) in closed form.
pub fn fpdim_label(m: &MinimalModel, x: &KacLabel) -> f64 {
    let (p, q) = (m.p() as f64, m.q() as f64);
    let qint = |k: i64, r: f64| (k as f64 * PI / r).sin() / (PI / r).sin();
    qint(x.m, p) * qint(x.n, q)
}

/// The fusion ring of C_{p,q}, indexed by `list_simples` order.
#[derive(Clone, Debug)]
pub struct MinimalRing {
    model: MinimalModel,
    labels: Vec<KacLabel>,
    index: HashMap<KacLabel, usize>,
    ring: FusionRing,
}

impl MinimalRing {
    pub fn build(m: &MinimalModel) -> Self {
        let labels = m.list_simples();
        let index: HashMap<KacLabel, usize> = labels.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut entries = Vec::new();
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate().skip(i) {
                let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
                for c in fuse(m, a, b) {
                    *counts.entry(index[&c]).or_default() += 1;
                }
                entries.extend(counts.into_iter().map(|(k, v)| (i, j, k, v)));
            }
        }
        let names = labels.iter().map(ToString::to_string).collect();
        let ring = FusionRing::new(names, 0, entries).expect("minimal-model fusion is well formed");
        MinimalRing { model: *m, labels, index, ring }
    }

    /// Wraps a ring loaded from disk; simples must be the canonical labels in order.
    pub fn from_ring(m: &MinimalModel, ring: FusionRing) -> Result<Self, Error> {
        let labels = m.list_simples();
        let names: Vec<String> = labels.iter().map(ToString::to_string).collect();
        if ring.simples() != names.as_slice() || ring.unit() != 0 {
            return Err(Error::InvalidInput(format!("fusion ring does not match the simples of {m}")));
        }
        let index = labels.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        Ok(MinimalRing { model: *m, labels, index, ring })
    }

    pub fn model(&self) -> &MinimalModel {
        &self.model
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn labels(&self) -> &[KacLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> KacLabel {
        self.labels[i]
    }

    pub fn index(&self, x: &KacLabel) -> usize {
        self.index[x]
    }

    /// Index of a raw (m,n), canonicalized first.
    pub fn index_raw(&self, m: i64, n: i64) -> Result<usize, Error> {
        Ok(self.index[&self.model.label(m, n)?])
    }
}
