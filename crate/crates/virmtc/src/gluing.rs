//! Mirror-extension gluing candidates: fusion-ring isomorphisms between two
//! subcategories, filtered by integrality of h_X + h_{F(X)}.
//!
//! Integrality is a necessary condition only; nothing here asserts that a glued
//! vertex operator algebra exists.

use rayon::prelude::*;
use serde::Serialize;

use crate::exactmath::Rational;
use crate::fusion::FusionRing;
use crate::minimal_model::{root_of_unity, KacLabel, MinimalModel};
use crate::subcat::{Ambient, SubcatName};
use crate::Error;

pub const QDIM_MATCH_TOL: f64 = 1e-6;

/// One side of a gluing: a named subcategory of an ambient minimal model.
pub struct GlueSide<'a> {
    amb: &'a Ambient,
    name: SubcatName,
    members: Vec<usize>,
    ring: FusionRing,
    dims: Vec<f64>,
}

impl<'a> GlueSide<'a> {
    pub fn new(amb: &'a Ambient, name: SubcatName) -> Result<Self, Error> {
        let members = amb
            .named(name)
            .ok_or_else(|| Error::InvalidInput(format!("{name} is not defined for {}", amb.model())))?;
        Self::from_members(amb, name, members)
    }

    pub fn from_members(amb: &'a Ambient, name: SubcatName, members: Vec<usize>) -> Result<Self, Error> {
        let ring = amb.ring().ring().restrict(&members)?;
        let dims = members.iter().map(|&a| amb.fpdim(a)).collect();
        Ok(Self { amb, name, members, ring, dims })
    }

    pub fn ambient(&self) -> &Ambient {
        self.amb
    }

    pub fn name(&self) -> SubcatName {
        self.name
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn dims(&self) -> &[f64] {
        &self.dims
    }

    fn label(&self, i: usize) -> KacLabel {
        self.amb.ring().label(self.members[i])
    }

    fn weight(&self, i: usize) -> Rational {
        self.amb.model().conformal_weight(&self.label(i))
    }
}

/// All unit-preserving bijections F with N_{ab}^c = N_{F(a)F(b)}^{F(c)}, as
/// image vectors (`iso[a]` is the right index of left simple `a`). Sorted.
pub fn fusion_ring_isos(left: &FusionRing, ldims: &[f64], right: &FusionRing, rdims: &[f64]) -> Vec<Vec<usize>> {
    let n = left.len();
    if n != right.len() {
        return Vec::new();
    }
    // left simples in order: unit first, then by index
    let order: Vec<usize> = std::iter::once(left.unit()).chain((0..n).filter(|&a| a != left.unit())).collect();
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut out = Vec::new();
    img[left.unit()] = right.unit();
    used[right.unit()] = true;
    iso_search(left, ldims, right, rdims, &order, 1, &mut img, &mut used, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn iso_search(
    left: &FusionRing,
    ldims: &[f64],
    right: &FusionRing,
    rdims: &[f64],
    order: &[usize],
    depth: usize,
    img: &mut [usize],
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if depth == order.len() {
        out.push(img.to_vec());
        return;
    }
    let a = order[depth];
    for b in 0..right.len() {
        if used[b] || (ldims[a] - rdims[b]).abs() >= QDIM_MATCH_TOL {
            continue;
        }
        img[a] = b;
        used[b] = true;
        if consistent(left, right, &order[..=depth], img) {
            iso_search(left, ldims, right, rdims, order, depth + 1, img, used, out);
        }
        used[b] = false;
        img[a] = usize::MAX;
    }
}

/// Checks every triple among the assigned simples that involves the newest one.
fn consistent(left: &FusionRing, right: &FusionRing, assigned: &[usize], img: &[usize]) -> bool {
    let new = *assigned.last().unwrap();
    if img[left.dual(new)] != usize::MAX && img[left.dual(new)] != right.dual(img[new]) {
        return false;
    }
    for &x in assigned {
        for &y in assigned {
            for &z in assigned {
                if x != new && y != new && z != new {
                    continue;
                }
                if left.coeff(x, y, z) != right.coeff(img[x], img[y], img[z]) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueEnd {
    pub model: String,
    pub subcat: SubcatName,
}

#[derive(Clone, Debug, Serialize)]
pub struct GluingCandidate {
    pub left: GlueEnd,
    pub right: GlueEnd,
    pub bijection: Vec<(KacLabel, KacLabel)>,
    #[serde(rename = "weights")]
    pub weight_sums: Vec<Rational>,
    pub integral: bool,
    /// Present when the strict check θ_X·θ_{F(X)} = 1 was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_trivial: Option<bool>,
}

/// Every fusion isomorphism between the two sides, decorated with exact weight sums.
pub fn gluing_candidates(left: &GlueSide, right: &GlueSide, strict_theta: bool) -> Vec<GluingCandidate> {
    let isos = fusion_ring_isos(left.ring(), left.dims(), right.ring(), right.dims());
    isos.into_iter()
        .map(|iso| {
            let bijection: Vec<_> = iso.iter().enumerate().map(|(a, &b)| (left.label(a), right.label(b))).collect();
            let weight_sums: Vec<Rational> =
                iso.iter().enumerate().map(|(a, &b)| &left.weight(a) + &right.weight(b)).collect();
            let integral = weight_sums.iter().all(Rational::is_integer);
            let theta_trivial = strict_theta.then(|| {
                iso.iter().enumerate().all(|(a, &b)| theta_product_is_one(&left.weight(a), &right.weight(b)))
            });
            GluingCandidate {
                left: GlueEnd { model: left.amb.model().to_string(), subcat: left.name },
                right: GlueEnd { model: right.amb.model().to_string(), subcat: right.name },
                bijection,
                weight_sums,
                integral,
                theta_trivial,
            }
        })
        .collect()
}

/// θ_X·θ_Y == 1 multiplied out in a common cyclotomic field.
fn theta_product_is_one(hx: &Rational, hy: &Rational) -> bool {
    let (tx, ty) = (root_of_unity(hx), root_of_unity(hy));
    let l = num_integer::lcm(tx.modulus(), ty.modulus());
    let prod = &tx.lift(l) * &ty.lift(l);
    prod == crate::exactmath::CycloNumber::one().lift(l)
}

/// Independent re-verification of a candidate against the two ambient rings:
/// unit to unit, bijective, qdims agree and all |D|³ fusion coefficients match.
pub fn reverify(c: &GluingCandidate, left: &GlueSide, right: &GlueSide) -> bool {
    let (la, ra) = (left.amb, right.amb);
    let idx = |amb: &Ambient, x: &KacLabel| amb.ring().index(x);
    let pairs: Vec<(usize, usize)> = c.bijection.iter().map(|(x, y)| (idx(la, x), idx(ra, y))).collect();
    let mut ls: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let mut rs: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    ls.sort();
    rs.sort();
    let (mut lm, mut rm) = (left.members.clone(), right.members.clone());
    lm.sort();
    rm.sort();
    if ls != lm || rs != rm || ls.windows(2).any(|w| w[0] == w[1]) || rs.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let (lr, rr) = (la.ring().ring(), ra.ring().ring());
    if !pairs.contains(&(lr.unit(), rr.unit())) {
        return false;
    }
    if pairs.iter().any(|&(a, b)| (la.fpdim(a) - ra.fpdim(b)).abs() >= QDIM_MATCH_TOL) {
        return false;
    }
    pairs.iter().all(|&(a, fa)| {
        pairs
            .iter()
            .all(|&(b, fb)| pairs.iter().all(|&(c, fc)| lr.coeff(a, b, c) == rr.coeff(fa, fb, fc)))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: i64,
    pub left: String,
    pub right: String,
    pub rank: usize,
    pub isos: usize,
    /// Some isomorphism of the (C2, C4) pair has all sums integral.
    pub integral: bool,
    pub weights: Vec<Vec<Rational>>,
    pub left_modular: bool,
    pub right_modular: bool,
    pub expected_modular: bool,
    pub parity_ok: bool,
    /// The (C1, C3) pair on the same two models: one integrality verdict per isomorphism.
    pub companion_isos: usize,
    pub companion_integral: Vec<bool>,
}

fn pair(l: &Ambient, ln: SubcatName, r: &Ambient, rn: SubcatName) -> Result<Vec<GluingCandidate>, Error> {
    let (ls, rs) = (GlueSide::new(l, ln)?, GlueSide::new(r, rn)?);
    let cands = gluing_candidates(&ls, &rs, false);
    if let Some(bad) = cands.iter().find(|c| !reverify(c, &ls, &rs)) {
        return Err(Error::Invariant(format!("isomorphism failed re-verification: {:?}", bad.bijection)));
    }
    Ok(cands)
}

fn scan_row<F>(n: i64, load: &F) -> Result<ScanRow, Error>
where
    F: Fn(&MinimalModel) -> Result<Ambient, Error>,
{
    let l = load(&MinimalModel::new(n + 1, n + 2)?)?;
    let r = load(&MinimalModel::new(n + 2, n + 3)?)?;
    let cands = pair(&l, SubcatName::C2, &r, SubcatName::C4)?;
    let companion = pair(&l, SubcatName::C1, &r, SubcatName::C3)?;
    let lmem = l.named(SubcatName::C2).expect("C2 exists");
    let rmem = r.named(SubcatName::C4).expect("C4 exists");
    let left_modular = l.is_modular(&lmem)?;
    let right_modular = r.is_modular(&rmem)?;
    let expected_modular = (n + 2) % 2 == 1;
    Ok(ScanRow {
        n,
        left: l.model().to_string(),
        right: r.model().to_string(),
        rank: lmem.len(),
        isos: cands.len(),
        integral: cands.iter().any(|c| c.integral),
        weights: cands.iter().map(|c| c.weight_sums.clone()).collect(),
        left_modular,
        right_modular,
        expected_modular,
        parity_ok: left_modular == expected_modular && right_modular == expected_modular,
        companion_isos: companion.len(),
        companion_integral: companion.iter().map(|c| c.integral).collect(),
    })
}

/// The pairs (C2 of C_{n+1,n+2}, C4 of C_{n+2,n+3}) for n = 3..=nmax.
pub fn scan_unitary_chain(nmax: i64) -> Result<Vec<ScanRow>, Error> {
    scan_unitary_chain_with(nmax, |m| Ok(Ambient::new(*m)))
}

/// As [`scan_unitary_chain`], with the ambient categories supplied by `load`.
pub fn scan_unitary_chain_with<F>(nmax: i64, load: F) -> Result<Vec<ScanRow>, Error>
where
    F: Fn(&MinimalModel) -> Result<Ambient, Error> + Sync,
{
    if nmax < 3 {
        return Err(Error::InvalidInput(format!("nmax must be at least 3, got {nmax}")));
    }
    (3..=nmax).into_par_iter().map(|n| scan_row(n, &load)).collect()
}
