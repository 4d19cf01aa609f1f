//! Constraint solver for the split sector of C̃_p.
//!
//! Every coefficient with at least two split objects among (a, b, c) is unknown
//! up to a sign choice. They are parametrized by binary variables:
//!
//! * `b(F,G,y)`: whether F^ε ⊗ N_y → G^δ pairs equal or opposite signs;
//! * `u(T,o)`: for a triple T of fixed points with N_T ≠ 0, the relative sign of
//!   the distinct label `o` against the smallest label of T.
//!
//! Commutation of the fusion matrices of a generating set is imposed with forward
//! checking; every leaf is then verified as a full fusion ring.

use std::collections::HashMap;

use serde::Serialize;

use crate::fusion::FusionRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Gauge,
    Anchor,
    Forced,
    Branch,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum VarKey {
    B { f: usize, g: usize, y: usize },
    U { tri: [usize; 3], o: usize },
}

/// What the solver needs to know about one extension simple.
#[derive(Clone, Debug)]
pub(crate) struct Obj {
    pub split: bool,
    /// Ambient index of the representative (orbit minimum or fixed point).
    pub amb: usize,
    /// Ambient index of σ(representative).
    pub sigma_amb: usize,
    /// Index into the fixed-point list (split) or orbit list (induced).
    pub slot: usize,
    /// +1 / −1 for split objects.
    pub sign: i8,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Coef {
    vars: [u32; 2],
    nv: u8,
    table: [u8; 4],
    nonzero: bool,
}

impl Coef {
    fn constant(v: u8) -> Self {
        Coef { vars: [0; 2], nv: 0, table: [v; 4], nonzero: v != 0 }
    }

    #[inline]
    fn value(&self, val: &[i8]) -> Option<u8> {
        let mut idx = 0;
        for k in 0..self.nv as usize {
            let v = val[self.vars[k] as usize];
            if v < 0 {
                return None;
            }
            idx |= (v as usize) << k;
        }
        Some(self.table[idx])
    }

    pub fn deps(&self) -> &[u32] {
        &self.vars[..self.nv as usize]
    }
}

pub(crate) struct Problem {
    pub n: usize,
    pub objs: Vec<Obj>,
    pub vars: Vec<VarKey>,
    pub coefs: Vec<Coef>,
    gens: Vec<usize>,
    preset: Vec<(usize, u8, Source)>,
}

pub(crate) struct Outcome {
    /// Accepted assignments (at most two are searched for).
    pub solutions: Vec<(Vec<i8>, Vec<Source>)>,
    pub nodes: u64,
    pub rejected_leaves: u64,
}

pub(crate) struct Spec<'a> {
    pub ambient: &'a FusionRing,
    pub objs: Vec<Obj>,
    pub nfixed: usize,
    pub norbits: usize,
    /// +1 if every split object is self-dual, −1 if F^± are dual to each other.
    pub kappa: i8,
    /// Fixed-point slot of the anchor object F0.
    pub f0: usize,
    /// Orbit slots whose N objects join F0^± as commutation generators.
    pub generator_orbits: Vec<usize>,
    /// Anchor values b(F0,F0,y) = value.
    pub anchors: Vec<(usize, u8)>,
}

impl Problem {
    pub fn new(spec: Spec<'_>) -> Result<Self, String> {
        let Spec { ambient, objs, nfixed, norbits, kappa, f0, generator_orbits, anchors } = spec;
        let n = objs.len();
        let fixed_amb: Vec<usize> = {
            let mut v = vec![usize::MAX; nfixed];
            objs.iter().filter(|o| o.split).for_each(|o| v[o.slot] = o.amb);
            v
        };
        let orbit_amb: Vec<usize> = {
            let mut v = vec![usize::MAX; norbits];
            objs.iter().filter(|o| !o.split).for_each(|o| v[o.slot] = o.amb);
            v
        };
        let na = |a: usize, b: usize, c: usize| ambient.coeff(a, b, c) as u8;

        let mut vars = Vec::new();
        let mut index: HashMap<VarKey, usize> = HashMap::new();
        let mut add = |k: VarKey, vars: &mut Vec<VarKey>| {
            index.insert(k.clone(), vars.len());
            vars.push(k);
        };
        for f in 0..nfixed {
            for g in f..nfixed {
                for y in 0..norbits {
                    if na(fixed_amb[f], orbit_amb[y], fixed_amb[g]) != 0 {
                        add(VarKey::B { f, g, y }, &mut vars);
                    }
                }
            }
        }
        for f in 0..nfixed {
            for g in f..nfixed {
                for h in g..nfixed {
                    if na(fixed_amb[f], fixed_amb[g], fixed_amb[h]) == 0 {
                        continue;
                    }
                    let tri = [f, g, h];
                    let mut distinct = tri.to_vec();
                    distinct.dedup();
                    for &o in &distinct[1..] {
                        add(VarKey::U { tri, o }, &mut vars);
                    }
                }
            }
        }

        let dual_sign = |s: i8| if kappa == 1 { s } else { -s };
        // The coefficient N_ab^c as a function of the variables it reads.
        let raw = |a: usize, b: usize, c: usize, get: &mut dyn FnMut(usize) -> u8| -> u8 {
            let (oa, ob, oc) = (&objs[a], &objs[b], &objs[c]);
            match [oa, ob, oc].iter().filter(|o| o.split).count() {
                0 => na(oa.amb, ob.amb, oc.amb) + na(oa.amb, ob.amb, oc.sigma_amb),
                1 => na(oa.amb, ob.amb, oc.amb),
                2 => {
                    // M(A, N_y, B*) with M the symmetric dualized tensor
                    let (x, y, other_sign, other_slot) = if !oc.split {
                        (oa, oc, ob.sign, ob.slot)
                    } else if oa.split {
                        (oa, ob, dual_sign(oc.sign), oc.slot)
                    } else {
                        (ob, oa, dual_sign(oc.sign), oc.slot)
                    };
                    if na(fixed_amb[x.slot], y.amb, fixed_amb[other_slot]) == 0 {
                        return 0;
                    }
                    let t2 = dual_sign(other_sign);
                    let (f, g) = (x.slot.min(other_slot), x.slot.max(other_slot));
                    let v = get(index[&VarKey::B { f, g, y: y.slot }]);
                    let parallel = x.sign == t2;
                    u8::from(parallel != (v == 1))
                }
                _ => {
                    if na(oa.amb, ob.amb, oc.amb) == 0 {
                        return 0;
                    }
                    let mut tri = [oa.slot, ob.slot, oc.slot];
                    tri.sort_unstable();
                    let mut distinct = tri.to_vec();
                    distinct.dedup();
                    let mut u = HashMap::from([(distinct[0], 1i8)]);
                    for &o in &distinct[1..] {
                        let v = get(index[&VarKey::U { tri, o }]);
                        u.insert(o, if v == 0 { 1 } else { -1 });
                    }
                    let sg = [oa.sign * u[&oa.slot], ob.sign * u[&ob.slot], dual_sign(oc.sign) * u[&oc.slot]];
                    u8::from(sg[0] == sg[1] && sg[1] == sg[2])
                }
            }
        };

        let mut coefs = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut deps = Vec::new();
                    let probe = raw(a, b, c, &mut |v| {
                        deps.push(v);
                        0
                    });
                    if deps.is_empty() {
                        coefs.push(Coef::constant(probe));
                        continue;
                    }
                    deps.sort_unstable();
                    deps.dedup();
                    if deps.len() > 2 {
                        return Err(format!("coefficient ({a},{b},{c}) reads {} unknowns", deps.len()));
                    }
                    let mut table = [0u8; 4];
                    for (bits, slot) in table.iter_mut().enumerate().take(1 << deps.len()) {
                        *slot = raw(a, b, c, &mut |v| {
                            let k = deps.iter().position(|&d| d == v).unwrap();
                            (bits >> k & 1) as u8
                        });
                    }
                    let mut vs = [0u32; 2];
                    deps.iter().enumerate().for_each(|(k, &d)| vs[k] = d as u32);
                    let nonzero = table[..1 << deps.len()].iter().any(|&t| t != 0);
                    coefs.push(Coef { vars: vs, nv: deps.len() as u8, table, nonzero });
                }
            }
        }

        // gauge: each F ≠ F0 is attached to F0 through its first orbit
        let mut preset = Vec::new();
        for f in (0..nfixed).filter(|&f| f != f0) {
            let y = (0..norbits)
                .find(|&y| na(fixed_amb[f0], orbit_amb[y], fixed_amb[f]) != 0)
                .ok_or_else(|| format!("fixed point {f} is not reachable from the anchor"))?;
            let key = VarKey::B { f: f0.min(f), g: f0.max(f), y };
            preset.push((index[&key], 0, Source::Gauge));
        }
        for (y, value) in anchors {
            let key = VarKey::B { f: f0, g: f0, y };
            let v = *index.get(&key).ok_or_else(|| format!("anchor on orbit {y} has no unknown"))?;
            preset.push((v, value, Source::Anchor));
        }

        let mut gens: Vec<usize> = (0..n)
            .filter(|&i| {
                let o = &objs[i];
                if o.split {
                    o.slot == f0
                } else {
                    generator_orbits.contains(&o.slot)
                }
            })
            .collect();
        gens.sort_unstable();
        Ok(Problem { n, objs, vars, coefs, gens, preset })
    }

    #[inline]
    pub fn coef(&self, a: usize, b: usize, c: usize) -> &Coef {
        &self.coefs[(a * self.n + b) * self.n + c]
    }

    /// Dense coefficient table under a complete assignment.
    pub fn realize(&self, val: &[i8]) -> Vec<(usize, usize, usize, u32)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a..n {
                for c in 0..n {
                    let v = self.coef(a, b, c).value(val).expect("complete assignment");
                    if v != 0 {
                        out.push((a, b, c, u32::from(v)));
                    }
                }
            }
        }
        out
    }

    /// Searches for up to two assignments accepted by `accept`.
    pub fn solve(&self, accept: &mut dyn FnMut(&[i8]) -> bool) -> Result<Outcome, String> {
        let mut s = Search::new(self)?;
        for &(v, value, src) in &self.preset {
            s.val[v] = value as i8;
            s.src[v] = src;
        }
        let seeds: Vec<usize> = self.preset.iter().map(|p| p.0).collect();
        let mut trail = Vec::new();
        let mut out = Outcome { solutions: Vec::new(), nodes: 0, rejected_leaves: 0 };
        if s.check_constants() && s.propagate(seeds, &mut trail) {
            s.recurse(&mut out, accept);
        }
        Ok(out)
    }
}

struct Equation {
    a: u16,
    b: u16,
    c: u16,
    d: u16,
    vars: Box<[u32]>,
}

struct Search<'p> {
    pb: &'p Problem,
    eqs: Vec<Equation>,
    constant: Vec<(u16, u16, u16, u16)>,
    by_var: Vec<Vec<u32>>,
    val: Vec<i8>,
    src: Vec<Source>,
}

impl<'p> Search<'p> {
    fn new(pb: &'p Problem) -> Result<Self, String> {
        let n = pb.n;
        let mut eqs = Vec::new();
        let mut constant = Vec::new();
        let is_gen = |i: usize| pb.gens.binary_search(&i).is_ok();
        let mut deps: Vec<u32> = Vec::new();
        for &a in &pb.gens {
            for c in 0..n {
                if c == a || (is_gen(c) && c < a) {
                    continue;
                }
                for b in 0..n {
                    for d in 0..n {
                        if [a, b, c, d].iter().all(|&i| !pb.objs[i].split) {
                            continue;
                        }
                        deps.clear();
                        for e in 0..n {
                            for (x, y) in [(pb.coef(a, b, e), pb.coef(c, e, d)), (pb.coef(c, b, e), pb.coef(a, e, d))] {
                                if x.nonzero && y.nonzero {
                                    deps.extend_from_slice(x.deps());
                                    deps.extend_from_slice(y.deps());
                                }
                            }
                        }
                        let key = (a as u16, b as u16, c as u16, d as u16);
                        if deps.is_empty() {
                            constant.push(key);
                            continue;
                        }
                        deps.sort_unstable();
                        deps.dedup();
                        eqs.push(Equation { a: key.0, b: key.1, c: key.2, d: key.3, vars: deps.clone().into() });
                    }
                }
            }
        }
        let mut by_var = vec![Vec::new(); pb.vars.len()];
        for (i, eq) in eqs.iter().enumerate() {
            for &v in eq.vars.iter() {
                by_var[v as usize].push(i as u32);
            }
        }
        let nv = pb.vars.len();
        Ok(Search { pb, eqs, constant, by_var, val: vec![-1; nv], src: vec![Source::Branch; nv] })
    }

    fn holds(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let pb = self.pb;
        let (mut l, mut r) = (0u32, 0u32);
        for e in 0..pb.n {
            let (x, y) = (pb.coef(a, b, e), pb.coef(c, e, d));
            if x.nonzero && y.nonzero {
                l += u32::from(x.value(&self.val).unwrap()) * u32::from(y.value(&self.val).unwrap());
            }
            let (x, y) = (pb.coef(c, b, e), pb.coef(a, e, d));
            if x.nonzero && y.nonzero {
                r += u32::from(x.value(&self.val).unwrap()) * u32::from(y.value(&self.val).unwrap());
            }
        }
        l == r
    }

    fn eq_holds(&self, i: usize) -> bool {
        let e = &self.eqs[i];
        self.holds(e.a as usize, e.b as usize, e.c as usize, e.d as usize)
    }

    fn check_constants(&self) -> bool {
        self.constant.iter().all(|&(a, b, c, d)| self.holds(a as usize, b as usize, c as usize, d as usize))
    }

    /// Forward checking: equations with one open variable fix it or fail.
    fn propagate(&mut self, seeds: Vec<usize>, trail: &mut Vec<usize>) -> bool {
        let mut queue = seeds;
        while let Some(v) = queue.pop() {
            for k in 0..self.by_var[v].len() {
                let ei = self.by_var[v][k] as usize;
                let mut open = self.eqs[ei].vars.iter().filter(|&&w| self.val[w as usize] < 0);
                match (open.next(), open.next()) {
                    (None, _) => {
                        if !self.eq_holds(ei) {
                            return false;
                        }
                    }
                    (Some(&w), None) => {
                        let w = w as usize;
                        let mut ok = [false; 2];
                        for t in 0..2 {
                            self.val[w] = t as i8;
                            ok[t] = self.eq_holds(ei);
                        }
                        self.val[w] = -1;
                        match ok {
                            [false, false] => return false,
                            [true, true] => {}
                            [a, _] => {
                                self.val[w] = if a { 0 } else { 1 };
                                self.src[w] = Source::Forced;
                                trail.push(w);
                                queue.push(w);
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    /// Depth-first search in variable order; returns true once two solutions are found.
    fn recurse(&mut self, out: &mut Outcome, accept: &mut dyn FnMut(&[i8]) -> bool) -> bool {
        out.nodes += 1;
        let Some(v) = self.val.iter().position(|&x| x < 0) else {
            if accept(&self.val) {
                out.solutions.push((self.val.clone(), self.src.clone()));
            } else {
                out.rejected_leaves += 1;
            }
            return out.solutions.len() >= 2;
        };
        for t in 0..2 {
            self.val[v] = t;
            self.src[v] = Source::Branch;
            let mut trail = Vec::new();
            let ok = self.propagate(vec![v], &mut trail);
            if ok && self.recurse(out, accept) {
                return true;
            }
            for w in trail {
                self.val[w] = -1;
            }
            self.val[v] = -1;
        }
        false
    }
}
