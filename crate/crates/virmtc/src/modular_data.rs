//! S and T data of C_{p,q}: exact S kernel, normalized float S, twists, Verlinde numbers.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::Complex;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::exactmath::{CycloNumber, ExactMatrix, Rational};
use crate::fusion::{FusionRing, MinimalRing};
use crate::minimal_model::{root_of_unity, KacLabel, MinimalModel};
use crate::subcat::Ambient;
use crate::Error;

/// Largest accepted distance between a float Verlinde sum and its rounded value.
pub const VERLINDE_GATE: f64 = 1e-6;

/// (−1)^{1+mn'+nm'} sin(πqmm'/p) sin(πpnn'/q) on raw representatives, as an element of ℚ(ζ_N).
pub fn s_kernel_raw(model: &MinimalModel, m1: i64, n1: i64, m2: i64, n2: i64) -> CycloNumber {
    let (p, q) = (model.p(), model.q());
    let n = model.cyclo_modulus();
    let big_n = n as i64;
    let a = q * m1 * m2 * (big_n / (2 * p));
    let b = p * n1 * n2 * (big_n / (2 * q));
    let sign = if (1 + m1 * n2 + n1 * m2) % 2 == 0 { 1 } else { -1 };
    let c = Rational::new(-sign, 4);
    CycloNumber::from_terms(n, &[(a + b, c.clone()), (a - b, -&c), (b - a, -&c), (-a - b, c)])
}

fn s_kernel_f64(model: &MinimalModel, x: &KacLabel, y: &KacLabel) -> f64 {
    let (p, q) = (model.p(), model.q());
    let sign = if (1 + x.m * y.n + x.n * y.m) % 2 == 0 { 1.0 } else { -1.0 };
    let s1 = (PI * ((q * x.m * y.m) % (2 * p)) as f64 / p as f64).sin();
    let s2 = (PI * ((p * x.n * y.n) % (2 * q)) as f64 / q as f64).sin();
    sign * s1 * s2
}

#[derive(Clone, Debug)]
pub struct ModularData {
    model: MinimalModel,
    labels: Vec<KacLabel>,
    index: HashMap<KacLabel, usize>,
    s_kernel: ExactMatrix,
    s_kernel_float: Vec<Vec<f64>>,
    s_float: Vec<Vec<f64>>,
    weights: Vec<Rational>,
    min_weight: usize,
}

impl ModularData {
    pub fn build(model: &MinimalModel) -> Self {
        let labels = model.list_simples();
        let n = labels.len();
        let mut grid: Vec<Vec<Option<CycloNumber>>> = vec![vec![None; n]; n];
        for i in 0..n {
            for j in i..n {
                let (x, y) = (labels[i], labels[j]);
                let v = s_kernel_raw(model, x.m, x.n, y.m, y.n);
                grid[j][i] = Some(v.clone());
                grid[i][j] = Some(v);
            }
        }
        let s_kernel =
            ExactMatrix::from_rows(grid.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect())
                .expect("square");
        Self::assemble(model, labels, s_kernel)
    }

    /// Rebuilds from a previously computed exact kernel (e.g. a cache file).
    /// Only the shape and modulus are checked; the float data is recomputed.
    pub fn with_kernel(model: &MinimalModel, s_kernel: ExactMatrix) -> Result<Self, Error> {
        let labels = model.list_simples();
        let n = labels.len();
        if s_kernel.rows() != n || s_kernel.cols() != n || s_kernel.modulus() != model.cyclo_modulus() {
            return Err(Error::InvalidInput(format!("S kernel does not fit {model}")));
        }
        Ok(Self::assemble(model, labels, s_kernel))
    }

    fn assemble(model: &MinimalModel, labels: Vec<KacLabel>, s_kernel: ExactMatrix) -> Self {
        let n = labels.len();
        let index = labels.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        // exact zeros stay zero instead of sin(kπ) rounding noise
        let s_kernel_float: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if s_kernel.get(i, j).is_zero() { 0.0 } else { s_kernel_f64(model, &labels[i], &labels[j]) })
                    .collect()
            })
            .collect();
        let scale = (8.0 / (model.p() * model.q()) as f64).sqrt();
        let s_float = s_kernel_float.iter().map(|r| r.iter().map(|v| v * scale).collect()).collect();
        let weights: Vec<Rational> = labels.iter().map(|x| model.conformal_weight(x)).collect();
        let min_weight = (0..n).min_by(|&a, &b| weights[a].cmp(&weights[b])).unwrap_or(0);
        ModularData { model: *model, labels, index, s_kernel, s_kernel_float, s_float, weights, min_weight }
    }

    pub fn model(&self) -> &MinimalModel {
        &self.model
    }

    pub fn labels(&self) -> &[KacLabel] {
        &self.labels
    }

    pub fn index(&self, x: &KacLabel) -> usize {
        self.index[x]
    }

    pub fn s_kernel(&self) -> &ExactMatrix {
        &self.s_kernel
    }

    /// Float value of the kernel entry (no √(8/pq)).
    pub fn s_kernel_float(&self, a: usize, b: usize) -> f64 {
        self.s_kernel_float[a][b]
    }

    /// S with the √(8/pq) prefactor; S² = 1.
    pub fn s_float(&self) -> &[Vec<f64>] {
        &self.s_float
    }

    pub fn s_entry(&self, a: usize, b: usize) -> (&CycloNumber, f64) {
        (self.s_kernel.get(a, b), self.s_float[a][b])
    }

    pub fn weight(&self, a: usize) -> &Rational {
        &self.weights[a]
    }

    /// h_a mod 1, the exponent of θ_a.
    pub fn theta(&self, a: usize) -> Rational {
        self.weights[a].fract_pos()
    }

    pub fn theta_cyclo(&self, a: usize) -> CycloNumber {
        root_of_unity(&self.weights[a])
    }

    /// exp(2πi(h_a − c/24)).
    pub fn t_diagonal(&self) -> Vec<Complex<f64>> {
        let c24 = self.model.central_charge() / Rational::integer(24);
        self.weights
            .iter()
            .map(|h| {
                let x = (h - &c24).fract_pos().to_f64();
                Complex::from_polar(1.0, 2.0 * PI * x)
            })
            .collect()
    }

    /// Simple of minimal conformal weight; its S-row is single-signed.
    pub fn min_weight_index(&self) -> usize {
        self.min_weight
    }

    /// S(x0,a)/S(x0,1) with x0 the minimal-weight simple; equals FPdim(a).
    pub fn qdim(&self, a: usize) -> f64 {
        let row = &self.s_float[self.min_weight];
        row[a] / row[0]
    }

    pub fn global_dimension(&self) -> f64 {
        (0..self.labels.len()).map(|a| self.qdim(a).powi(2)).sum()
    }

    /// round(Σ_x S_ax S_bx S_cx / S_0x) with its rounding distance.
    pub fn verlinde_coeff(&self, a: usize, b: usize, c: usize) -> Result<(u32, f64), Error> {
        let s = &self.s_float;
        let v: f64 = (0..self.labels.len()).map(|x| s[a][x] * s[b][x] * s[c][x] / s[0][x]).sum();
        let r = v.round();
        let dist = (v - r).abs();
        if dist >= VERLINDE_GATE || r < 0.0 {
            return Err(Error::Invariant(format!(
                "Verlinde sum {v} for ({a},{b},{c}) is not a nonnegative integer"
            )));
        }
        Ok((r as u32, dist))
    }

    /// lcm of the denominators of h mod 1 over the subset.
    pub fn fsexp(&self, subset: &[usize]) -> u64 {
        subset.iter().fold(1u64, |acc, &a| acc.lcm(&self.theta(a).denom_u64()))
    }
}

/// x rounded to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().expect("formatted float parses")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportSimple {
    pub m: i64,
    pub n: i64,
    pub h: Rational,
}

/// Self-contained modular-data file. Floats carry 12 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularExport {
    pub p: i64,
    pub q: i64,
    pub c: Rational,
    pub simples: Vec<ExportSimple>,
    #[serde(rename = "S_float")]
    pub s_float: Vec<Vec<f64>>,
    /// h mod 1
    pub theta: Vec<Rational>,
    pub fusion: FusionRing,
}

impl ModularExport {
    pub fn from_model(m: &MinimalModel) -> Self {
        let md = ModularData::build(m);
        let ring = MinimalRing::build(m);
        Self::from_parts(&md, ring.ring())
    }

    pub fn from_parts(md: &ModularData, ring: &FusionRing) -> Self {
        let m = md.model();
        ModularExport {
            p: m.p(),
            q: m.q(),
            c: m.central_charge(),
            simples: md
                .labels()
                .iter()
                .zip(&md.weights)
                .map(|(x, h)| ExportSimple { m: x.m, n: x.n, h: h.clone() })
                .collect(),
            s_float: md.s_float.iter().map(|r| r.iter().map(|&v| round_sig(v, 12)).collect()).collect(),
            theta: (0..md.labels.len()).map(|a| md.theta(a)).collect(),
            fusion: ring.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("export serializes")
    }

    /// Parses and checks every exact field against a recomputation from (p, q).
    pub fn from_json(s: &str) -> Result<Self, Error> {
        let e: ModularExport = serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let m = MinimalModel::new(e.p, e.q)?;
        let want = Self::from_model(&m);
        let exact_ok = e.c == want.c && e.simples == want.simples && e.theta == want.theta && e.fusion == want.fusion;
        let float_ok = e.s_float.len() == want.s_float.len()
            && e.s_float.iter().zip(&want.s_float).all(|(r, w)| {
                r.len() == w.len() && r.iter().zip(w).all(|(a, b)| (a - b).abs() <= 1e-10)
            });
        if !exact_ok || !float_ok {
            return Err(Error::InvalidInput(format!("modular data file does not match {m}")));
        }
        Ok(e)
    }

    pub fn model(&self) -> Result<MinimalModel, Error> {
        MinimalModel::new(self.p, self.q)
    }

    pub fn to_ambient(&self) -> Result<Ambient, Error> {
        let m = self.model()?;
        Ambient::from_parts(MinimalRing::from_ring(&m, self.fusion.clone())?, ModularData::build(&m))
    }
}
