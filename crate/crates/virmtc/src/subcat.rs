//! Fusion subcategories of C_{p,q}: enumeration, naming, Müger centers,
//! modularity, primality and Deligne-factorization checks.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::LazyLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactmath::{ExactMatrix, RANK_BACKENDS};
use crate::fusion::{FusionRing, MinimalRing};
use crate::minimal_model::MinimalModel;
use crate::modular_data::ModularData;
use crate::registry::{Named, Registry};
use crate::Error;

/// A float S-criterion residual above this certifies non-transparency; below
/// it the identity is confirmed exactly.
pub const TRANSPARENCY_GATE: f64 = 1e-6;

/// Relative tolerance for FPdim(A) = FPdim(D)·FPdim(E).
pub const FPDIM_PRODUCT_TOL: f64 = 1e-7;

/// Smallest set of simples containing `seed` and the unit, closed under fusion.
/// Duals are automatic in C_{p,q} but are added for general rings.
pub fn closure(ring: &FusionRing, seed: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = seed.iter().copied().collect();
    set.insert(ring.unit());
    let mut work: Vec<usize> = set.iter().copied().collect();
    while let Some(a) = work.pop() {
        let d = ring.dual(a);
        if set.insert(d) {
            work.push(d);
        }
        let current: Vec<usize> = set.iter().copied().collect();
        for b in current {
            for &(c, _) in ring.product(a, b) {
                if set.insert(c) {
                    work.push(c);
                }
            }
        }
    }
    set.into_iter().collect()
}

fn is_closed(ring: &FusionRing, members: &[usize], mask: &[bool]) -> bool {
    members.iter().all(|&a| {
        mask[ring.dual(a)] && members.iter().all(|&b| ring.product(a, b).iter().all(|&(c, _)| mask[c]))
    })
}

fn canonical_order(mut v: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v.dedup();
    v
}

pub trait SubcatEnumerator: Named + Send + Sync {
    /// All fusion subcategories (trivial and full included), sorted by size then members.
    fn enumerate(&self, ring: &FusionRing) -> Vec<Vec<usize>>;
}

pub static ENUMERATORS: LazyLock<Registry<dyn SubcatEnumerator>> = LazyLock::new(|| {
    Registry::<dyn SubcatEnumerator>::new("join-closure")
        .with(Box::new(JoinClosure))
        .with(Box::new(BruteForce))
});

/// Every subcategory is the join of the singly generated ones it contains, so
/// closing the one-generator family under pairwise joins finds them all.
pub struct JoinClosure;

impl Named for JoinClosure {
    fn name(&self) -> &'static str {
        "join-closure"
    }
}

impl SubcatEnumerator for JoinClosure {
    fn enumerate(&self, ring: &FusionRing) -> Vec<Vec<usize>> {
        let singles: BTreeSet<Vec<usize>> = (0..ring.len()).into_par_iter().map(|x| closure(ring, &[x])).collect();
        let mut found: BTreeSet<Vec<usize>> = singles.clone();
        let mut frontier: Vec<Vec<usize>> = singles.iter().cloned().collect();
        while !frontier.is_empty() {
            let known: Vec<Vec<usize>> = found.iter().cloned().collect();
            let joins: BTreeSet<Vec<usize>> = frontier
                .par_iter()
                .flat_map_iter(|a| {
                    known.iter().map(move |b| {
                        let mut seed = a.clone();
                        seed.extend_from_slice(b);
                        closure(ring, &seed)
                    })
                })
                .collect();
            frontier = joins.into_iter().filter(|j| found.insert(j.clone())).collect();
        }
        canonical_order(found.into_iter().collect())
    }
}

/// Tests every subset containing the unit. Exponential; an oracle for small rings.
pub struct BruteForce;

impl Named for BruteForce {
    fn name(&self) -> &'static str {
        "brute-force"
    }
}

impl SubcatEnumerator for BruteForce {
    fn enumerate(&self, ring: &FusionRing) -> Vec<Vec<usize>> {
        brute_force_subcats(ring)
    }
}

pub fn brute_force_subcats(ring: &FusionRing) -> Vec<Vec<usize>> {
    let others: Vec<usize> = (0..ring.len()).filter(|&x| x != ring.unit()).collect();
    assert!(others.len() < 32, "brute force over {} simples is infeasible", others.len());
    let found: Vec<Vec<usize>> = (0u64..1 << others.len())
        .into_par_iter()
        .filter_map(|bits| {
            let mut members = vec![ring.unit()];
            members.extend(others.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &x)| x));
            members.sort_unstable();
            let mut mask = vec![false; ring.len()];
            members.iter().for_each(|&x| mask[x] = true);
            is_closed(ring, &members, &mask).then_some(members)
        })
        .collect();
    canonical_order(found)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SubcatName {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    #[serde(rename = "FULL")]
    Full,
    #[serde(rename = "TRIVIAL")]
    Trivial,
    #[serde(rename = "OTHER")]
    Other,
}

impl SubcatName {
    /// Checked in this order; the first pattern equal to a subcategory names it.
    pub const PRIORITY: [SubcatName; 6] =
        [SubcatName::C1, SubcatName::C2, SubcatName::C5, SubcatName::C3, SubcatName::C4, SubcatName::C6];

    pub fn is_pattern(self) -> bool {
        matches!(self, Self::C1 | Self::C2 | Self::C3 | Self::C4 | Self::C5 | Self::C6)
    }
}

impl fmt::Display for SubcatName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::C1 => "C1",
            Self::C2 => "C2",
            Self::C3 => "C3",
            Self::C4 => "C4",
            Self::C5 => "C5",
            Self::C6 => "C6",
            Self::Full => "FULL",
            Self::Trivial => "TRIVIAL",
            Self::Other => "OTHER",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SubcatName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "C1" => Self::C1,
            "C2" => Self::C2,
            "C3" => Self::C3,
            "C4" => Self::C4,
            "C5" => Self::C5,
            "C6" => Self::C6,
            "FULL" => Self::Full,
            "TRIVIAL" => Self::Trivial,
            _ => return Err(Error::InvalidInput(format!("unknown subcategory name {s:?} (C1..C6, FULL, TRIVIAL)"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subcategory {
    members: Vec<usize>,
    name: SubcatName,
    ambient_rank: usize,
}

impl Subcategory {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn name(&self) -> SubcatName {
        self.name
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Neither trivial nor the whole category.
    pub fn is_nontrivial(&self) -> bool {
        self.members.len() > 1 && self.members.len() < self.ambient_rank
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    /// Simples of D transparent to all of D (S-criterion).
    pub center: Vec<usize>,
    /// Simples x of D with h_z − h_x − h_y ∈ ℤ for every y ∈ D and z ⊂ x⊗y; contains the center.
    pub twist_candidates: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularityReport {
    pub center: Vec<usize>,
    pub twist_candidates: Vec<usize>,
    pub exact_rank: usize,
    pub rank_backend: &'static str,
    pub modular_by_rank: bool,
    pub modular_by_center: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubcatAnalysis {
    pub sub: Subcategory,
    pub report: ModularityReport,
    pub modular: bool,
    pub fsexp: u64,
    pub fpdim: f64,
}

/// C_{p,q} with its fusion ring, modular data and FP dimensions.
pub struct Ambient {
    ring: MinimalRing,
    md: ModularData,
    fpdims: Vec<f64>,
}

impl Ambient {
    pub fn new(model: MinimalModel) -> Self {
        let ring = MinimalRing::build(&model);
        let md = ModularData::build(&model);
        let fpdims = (0..ring.ring().len()).map(|a| md.qdim(a)).collect();
        Ambient { ring, md, fpdims }
    }

    pub fn from_parts(ring: MinimalRing, md: ModularData) -> Result<Self, Error> {
        if ring.model() != md.model() {
            return Err(Error::InvalidInput("fusion ring and modular data belong to different models".into()));
        }
        let fpdims = (0..ring.ring().len()).map(|a| md.qdim(a)).collect();
        Ok(Ambient { ring, md, fpdims })
    }

    pub fn model(&self) -> &MinimalModel {
        self.ring.model()
    }

    pub fn ring(&self) -> &MinimalRing {
        &self.ring
    }

    pub fn modular_data(&self) -> &ModularData {
        &self.md
    }

    pub fn len(&self) -> usize {
        self.fpdims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fpdims.is_empty()
    }

    /// Index of the simple labelled (m,n); panics on an inadmissible label.
    pub fn idx(&self, m: i64, n: i64) -> usize {
        self.ring.index_raw(m, n).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn fpdim(&self, a: usize) -> f64 {
        self.fpdims[a]
    }

    /// Σ d_x² over the members.
    pub fn fpdim_of(&self, members: &[usize]) -> f64 {
        members.iter().map(|&a| self.fpdims[a].powi(2)).sum()
    }

    pub fn named(&self, name: SubcatName) -> Option<Vec<usize>> {
        let ring = self.ring.ring();
        let gen = |m, n| self.ring.index_raw(m, n).ok();
        let (p, q) = (self.model().p(), self.model().q());
        match name {
            SubcatName::C1 => gen(1, 2).map(|x| closure(ring, &[x])),
            SubcatName::C2 => gen(1, 3).map(|x| closure(ring, &[x])),
            SubcatName::C3 => (p >= 3).then(|| gen(2, 1)).flatten().map(|x| closure(ring, &[x])),
            SubcatName::C4 => (p >= 4).then(|| gen(3, 1)).flatten().map(|x| closure(ring, &[x])),
            SubcatName::C5 => gen(1, q - 1).map(|x| closure(ring, &[x])),
            SubcatName::C6 => {
                let (c2, c4) = (self.named(SubcatName::C2)?, self.named(SubcatName::C4)?);
                Some(closure(ring, &[c2, c4].concat()))
            }
            SubcatName::Full => Some((0..self.len()).collect()),
            SubcatName::Trivial => Some(vec![ring.unit()]),
            SubcatName::Other => None,
        }
    }

    pub fn classify(&self, members: &[usize]) -> SubcatName {
        if members.len() == 1 {
            return SubcatName::Trivial;
        }
        if members.len() == self.len() {
            return SubcatName::Full;
        }
        SubcatName::PRIORITY
            .into_iter()
            .find(|&n| self.named(n).as_deref() == Some(members))
            .unwrap_or(SubcatName::Other)
    }

    fn subcategory(&self, members: Vec<usize>) -> Subcategory {
        let name = self.classify(&members);
        Subcategory { members, name, ambient_rank: self.len() }
    }

    /// Whether x and y centralize each other: S_xy S_00 = S_0x S_0y.
    pub fn transparent(&self, x: usize, y: usize) -> bool {
        let u = self.ring.ring().unit();
        let k = |a, b| self.md.s_kernel_float(a, b);
        if (k(x, y) * k(u, u) - k(u, x) * k(u, y)).abs() > TRANSPARENCY_GATE {
            return false;
        }
        let s = self.md.s_kernel();
        s.get(x, y) * s.get(u, u) == s.get(u, x) * s.get(u, y)
    }

    /// Simples of `within` centralizing every simple of `d`.
    pub fn centralizer(&self, d: &[usize], within: &[usize]) -> Vec<usize> {
        within.iter().copied().filter(|&x| d.iter().all(|&y| self.transparent(x, y))).collect()
    }

    pub fn mueger_center(&self, d: &[usize]) -> CenterReport {
        let center = self.centralizer(d, d);
        let ring = self.ring.ring();
        let twist_candidates = d
            .iter()
            .copied()
            .filter(|&x| {
                d.iter().all(|&y| {
                    ring.product(x, y).iter().all(|&(z, _)| {
                        (self.md.weight(z) - self.md.weight(x) - self.md.weight(y)).is_integer()
                    })
                })
            })
            .collect();
        CenterReport { center, twist_candidates }
    }

    pub fn restricted_kernel(&self, members: &[usize]) -> ExactMatrix {
        self.md.s_kernel().restrict(members, members)
    }

    pub fn restricted_rank(&self, members: &[usize], backend: &str) -> usize {
        let b = RANK_BACKENDS.resolve(backend).unwrap_or_else(|e| panic!("{e}"));
        b.rank(&self.restricted_kernel(members))
    }

    /// Modularity of D by both routes; they must agree.
    pub fn modularity(&self, d: &[usize], backend: &str) -> Result<ModularityReport, Error> {
        let b = RANK_BACKENDS.resolve(backend).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let CenterReport { center, twist_candidates } = self.mueger_center(d);
        let exact_rank = b.rank(&self.restricted_kernel(d));
        let modular_by_rank = exact_rank == d.len();
        let modular_by_center = center == [self.ring.ring().unit()];
        if modular_by_rank != modular_by_center {
            return Err(Error::Invariant(format!(
                "{}: S|D has rank {exact_rank} of {} but the Müger center has {} simples",
                self.model(),
                d.len(),
                center.len()
            )));
        }
        Ok(ModularityReport {
            center,
            twist_candidates,
            exact_rank,
            rank_backend: b.name(),
            modular_by_rank,
            modular_by_center,
        })
    }

    pub fn is_modular(&self, d: &[usize]) -> Result<bool, Error> {
        Ok(self.modularity(d, RANK_BACKENDS.default_name())?.modular_by_rank)
    }

    pub fn enumerate_with(&self, enumerator: &str) -> Result<Vec<Subcategory>, Error> {
        let e = ENUMERATORS.resolve(enumerator).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(e.enumerate(self.ring.ring()).into_iter().map(|m| self.subcategory(m)).collect())
    }

    pub fn analyze_all(&self) -> Result<Vec<SubcatAnalysis>, Error> {
        self.analyze_all_with(RANK_BACKENDS.default_name())
    }

    pub fn analyze_all_with(&self, backend: &str) -> Result<Vec<SubcatAnalysis>, Error> {
        self.analyze(enumerate_subcats(self), backend)
    }

    pub fn analyze(&self, subs: Vec<Subcategory>, backend: &str) -> Result<Vec<SubcatAnalysis>, Error> {
        subs.into_par_iter()
            .map(|sub| {
                let report = self.modularity(sub.members(), backend)?;
                Ok(SubcatAnalysis {
                    modular: report.modular_by_rank,
                    fsexp: self.md.fsexp(sub.members()),
                    fpdim: self.fpdim_of(sub.members()),
                    sub,
                    report,
                })
            })
            .collect()
    }

    /// A modular D is prime when no modular E with trivial ≠ E ≠ D lies inside it.
    /// Non-modular inputs are judged the same way.
    pub fn is_prime(&self, d: &[usize]) -> Result<bool, Error> {
        if d.len() <= 1 {
            return Ok(true);
        }
        let inside: Vec<Vec<usize>> = ENUMERATORS
            .default_strategy()
            .enumerate(self.ring.ring())
            .into_iter()
            .filter(|e| e.len() > 1 && e.len() < d.len() && e.iter().all(|x| d.contains(x)))
            .collect();
        for e in inside {
            if self.is_modular(&e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn enumerate_subcats(ambient: &Ambient) -> Vec<Subcategory> {
    ambient.enumerate_with(ENUMERATORS.default_name()).expect("default enumerator")
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DeligneReport {
    /// E is the centralizer of D inside A; `None` when no braiding data was consulted.
    pub centralizer: Option<bool>,
    /// (d,e) ↦ d⊗e is a bijection D×E → Irr(A) onto simples.
    pub bijection: bool,
    /// N^A factorizes as N^D·N^E under that bijection.
    pub fusion: bool,
    /// FPdim(A) = FPdim(D)·FPdim(E).
    pub fpdim: bool,
    pub notes: Vec<String>,
}

impl DeligneReport {
    pub fn passed(&self) -> bool {
        self.centralizer.unwrap_or(true) && self.bijection && self.fusion && self.fpdim
    }
}

/// Checks A ≃ D ⊠ E on the level of centralizers, fusion rules and dimensions.
pub fn deligne_factor_check(amb: &Ambient, d: &[usize], e: &[usize], a: &[usize]) -> DeligneReport {
    let dims: Vec<f64> = (0..amb.len()).map(|x| amb.fpdim(x)).collect();
    let mut r = ring_factor_check(amb.ring().ring(), &dims, d, e, a);
    let cent = amb.centralizer(d, a);
    r.centralizer = Some(cent == e);
    if cent != e {
        r.notes.push(format!("centralizer of D in A has {} simples, E has {}", cent.len(), e.len()));
    }
    r
}

/// The fusion-ring part of a Deligne factorization check: bijection, factorized
/// coefficients and dimensions (`dims` are per-simple FP dimensions).
pub fn ring_factor_check(ring: &FusionRing, dims: &[f64], d: &[usize], e: &[usize], a: &[usize]) -> DeligneReport {
    let mut r = DeligneReport::default();
    let mut image = vec![vec![usize::MAX; e.len()]; d.len()];
    let mut hit = vec![false; ring.len()];
    r.bijection = d.len() * e.len() == a.len();
    for (i, &x) in d.iter().enumerate() {
        for (j, &y) in e.iter().enumerate() {
            match ring.product(x, y) {
                [(z, 1)] if a.contains(z) && !hit[*z] => {
                    hit[*z] = true;
                    image[i][j] = *z;
                }
                _ => r.bijection = false,
            }
        }
    }
    if !r.bijection {
        r.notes.push("D×E → Irr(A) is not a bijection".into());
    }

    let pairs: Vec<(usize, usize)> = (0..d.len()).flat_map(|i| (0..e.len()).map(move |j| (i, j))).collect();
    r.fusion = r.bijection
        && pairs.iter().all(|&(i, j)| {
            pairs.iter().all(|&(i2, j2)| {
                pairs.iter().all(|&(i3, j3)| {
                    ring.coeff(image[i][j], image[i2][j2], image[i3][j3])
                        == ring.coeff(d[i], d[i2], d[i3]) * ring.coeff(e[j], e[j2], e[j3])
                })
            })
        });
    if r.bijection && !r.fusion {
        r.notes.push("fusion coefficients do not factorize".into());
    }

    let total = |xs: &[usize]| xs.iter().map(|&x| dims[x].powi(2)).sum::<f64>();
    let (fa, fd, fe) = (total(a), total(d), total(e));
    r.fpdim = ((fa - fd * fe) / fa).abs() < FPDIM_PRODUCT_TOL;
    if !r.fpdim {
        r.notes.push(format!("FPdim(A) = {fa} but FPdim(D)·FPdim(E) = {}", fd * fe));
    }
    r
}
