use proptest::prelude::*;
use virmtc::minimal_model::MinimalModel;
use virmtc::subcat::{
    brute_force_subcats, closure, deligne_factor_check, enumerate_subcats, Ambient, SubcatName, ENUMERATORS,
};

fn amb(p: i64, q: i64) -> Ambient {
    Ambient::new(MinimalModel::new(p, q).unwrap())
}

fn labels(a: &Ambient, members: &[usize]) -> Vec<String> {
    members.iter().map(|&i| a.ring().label(i).to_string()).collect()
}

fn coprime_pairs(pmax: i64, qmax: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=pmax).flat_map(move |p| (p + 1..=qmax).map(move |q| (p, q))).filter(|&(p, q)| num_integer::gcd(p, q) == 1)
}

#[test]
fn closure_examples() {
    let a = amb(5, 6);
    let c1 = closure(a.ring().ring(), &[a.idx(1, 2)]);
    assert_eq!(labels(&a, &c1), ["1,1", "1,2", "1,3", "1,4", "1,5"]);
    assert_eq!(closure(a.ring().ring(), &[0]), vec![0]);
    assert_eq!(labels(&a, &closure(a.ring().ring(), &[a.idx(1, 5)])), ["1,1", "1,5"]);
}

#[test]
fn small_census() {
    let nontrivial = |p, q| enumerate_subcats(&amb(p, q)).iter().filter(|s| s.is_nontrivial()).count();
    assert_eq!(nontrivial(3, 4), 1);
    let ising = amb(3, 4);
    let only: Vec<_> = enumerate_subcats(&ising).into_iter().filter(|s| s.is_nontrivial()).collect();
    assert_eq!(labels(&ising, only[0].members()), ["1,1", "1,3"]);
    assert_eq!(nontrivial(5, 6), 6);
    // (1,3)⊠(1,3) ∋ (1,5) ~ (1,2) at (2,7): no proper fusion subring exists
    assert_eq!(nontrivial(2, 7), 0);
}

#[test]
fn census_by_p() {
    for (p, q) in coprime_pairs(8, 13) {
        let got = enumerate_subcats(&amb(p, q)).iter().filter(|s| s.is_nontrivial()).count();
        let want = match p {
            2 => 0,
            3 if q == 4 => 1,
            3 => 2,
            4 => 4,
            _ => 6,
        };
        assert_eq!(got, want, "({p},{q})");
    }
}

#[test]
fn join_closure_equals_brute_force() {
    for (p, q) in coprime_pairs(12, 26) {
        let a = amb(p, q);
        if a.ring().ring().len() > 12 {
            continue;
        }
        let fast: Vec<Vec<usize>> = enumerate_subcats(&a).iter().map(|s| s.members().to_vec()).collect();
        assert_eq!(fast, brute_force_subcats(a.ring().ring()), "({p},{q})");
        for name in ENUMERATORS.names() {
            assert_eq!(ENUMERATORS.get(name).unwrap().enumerate(a.ring().ring()), fast, "{name}");
        }
    }
}

#[test]
fn named_patterns() {
    let a = amb(5, 6);
    let by_name = |a: &Ambient, n: SubcatName| {
        let s = enumerate_subcats(a).into_iter().find(|s| s.name() == n).unwrap();
        labels(a, s.members())
    };
    assert_eq!(by_name(&a, SubcatName::C4), ["1,1", "2,5"]);
    assert_eq!(by_name(&a, SubcatName::C5), ["1,1", "1,5"]);
    assert_eq!(by_name(&a, SubcatName::C2), ["1,1", "1,3", "1,5"]);
    assert_eq!(enumerate_subcats(&a).last().unwrap().name(), SubcatName::Full);
    assert_eq!(enumerate_subcats(&a)[0].name(), SubcatName::Trivial);
    let a = amb(6, 7);
    let c6 = by_name(&a, SubcatName::C6);
    assert_eq!(c6, ["1,1", "1,2", "1,3", "1,4", "1,5", "1,6", "3,1", "3,2", "3,3"]);
    // every nontrivial subcategory gets one of the six names once p ≥ 5
    for (p, q) in coprime_pairs(9, 13).filter(|&(p, _)| p >= 5) {
        let names: Vec<SubcatName> =
            enumerate_subcats(&amb(p, q)).iter().filter(|s| s.is_nontrivial()).map(|s| s.name()).collect();
        assert_eq!(names.len(), 6);
        assert!(names.iter().all(|n| n.is_pattern()), "({p},{q}) {names:?}");
    }
}

#[test]
fn centers() {
    let a = amb(4, 5);
    let c1 = a.named(SubcatName::C1).unwrap();
    assert_eq!(labels(&a, &a.mueger_center(&c1).center), ["1,1", "1,4"]);
    assert_eq!(a.mueger_center(&[0]).center, vec![0]);
    let a = amb(5, 6);
    let c5 = a.named(SubcatName::C5).unwrap();
    assert_eq!(a.mueger_center(&c5).center, c5);
}

fn modular_names(p: i64, q: i64) -> Vec<SubcatName> {
    let a = amb(p, q);
    let mut out: Vec<SubcatName> = a
        .analyze_all()
        .unwrap()
        .into_iter()
        .filter(|s| s.sub.is_nontrivial() && s.modular)
        .map(|s| s.sub.name())
        .collect();
    out.sort();
    out
}

#[test]
fn modularity_verdicts() {
    use SubcatName::*;
    for (p, q) in [(4, 5), (4, 7), (6, 7)] {
        assert_eq!(modular_names(p, q), [C2, C3], "({p},{q})");
    }
    for (p, q) in [(5, 6), (7, 8), (5, 8)] {
        assert_eq!(modular_names(p, q), [C1, C4], "({p},{q})");
    }
    for (p, q) in [(5, 7), (5, 9), (7, 9)] {
        assert_eq!(modular_names(p, q), [C1, C2, C3, C4, C5, C6], "({p},{q})");
    }
}

#[test]
fn verdict_routes_agree_and_twist_bounds_center() {
    for (p, q) in coprime_pairs(10, 11) {
        let a = amb(p, q);
        for s in a.analyze_all().unwrap() {
            let r = &s.report;
            assert_eq!(r.modular_by_rank, r.modular_by_center);
            assert!(r.center.iter().all(|x| r.twist_candidates.contains(x)));
            // float rank of the restricted kernel agrees with the exact rank
            assert_eq!(a.restricted_rank(s.sub.members(), "float"), r.exact_rank, "({p},{q})");
            if s.modular {
                assert_ne!(s.fsexp, 2);
            }
        }
    }
}

#[test]
fn exact_backends_agree_on_small_restrictions() {
    for (p, q) in [(3, 4), (3, 8), (4, 5), (5, 6)] {
        let a = amb(p, q);
        for s in enumerate_subcats(&a).iter().filter(|s| s.members().len() <= 6) {
            let m = a.restricted_rank(s.members(), "multimodular");
            assert_eq!(a.restricted_rank(s.members(), "bareiss"), m, "({p},{q}) {:?}", s.members());
        }
    }
    // ⟨(1,3),(2,1)⟩ at (3,8) is the odd row, which carries a transparent fermion
    let a = amb(3, 8);
    let c4 = a.named(SubcatName::C4);
    assert!(c4.is_none());
    let c6 = closure(a.ring().ring(), &[a.idx(1, 3), a.idx(2, 1)]);
    assert!(a.restricted_rank(&c6, "multimodular") < c6.len());
}

#[test]
fn primality() {
    let a = amb(3, 4);
    let all: Vec<usize> = (0..3).collect();
    assert!(a.is_prime(&all).unwrap());
    let a = amb(5, 7);
    let all: Vec<usize> = (0..a.ring().ring().len()).collect();
    assert!(!a.is_prime(&all).unwrap());
    assert!(a.is_prime(&[0]).unwrap());
}

#[test]
fn deligne_factorizations() {
    let a = amb(5, 6);
    let full: Vec<usize> = (0..a.ring().ring().len()).collect();
    let r = deligne_factor_check(&a, &a.named(SubcatName::C1).unwrap(), &a.named(SubcatName::C4).unwrap(), &full);
    assert!(r.passed(), "{r:?}");
    let a = amb(4, 5);
    let full: Vec<usize> = (0..a.ring().ring().len()).collect();
    let r = deligne_factor_check(&a, &a.named(SubcatName::C2).unwrap(), &a.named(SubcatName::C3).unwrap(), &full);
    assert!(r.passed(), "{r:?}");
    // non-example: C1 and C2 overlap
    let r = deligne_factor_check(&a, &a.named(SubcatName::C1).unwrap(), &a.named(SubcatName::C2).unwrap(), &full);
    assert!(!r.passed());

    let a = amb(5, 7);
    let full: Vec<usize> = (0..a.ring().ring().len()).collect();
    let n = |x| a.named(x).unwrap();
    use SubcatName::*;
    assert!(deligne_factor_check(&a, &n(C2), &n(C3), &full).passed());
    assert!(deligne_factor_check(&a, &n(C2), &n(C5), &n(C1)).passed());
    assert!(deligne_factor_check(&a, &n(C4), &n(C5), &n(C3)).passed());
    assert!(deligne_factor_check(&a, &n(C1), &n(C4), &full).passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closure_is_a_closure_operator(
        (p, q) in prop_oneof![Just((4i64, 7i64)), Just((5, 6)), Just((5, 8)), Just((7, 9)), Just((3, 10))],
        seeds in proptest::collection::vec(0usize..1000, 1..4),
        extra in proptest::collection::vec(0usize..1000, 0..3),
    ) {
        let a = amb(p, q);
        let ring = a.ring().ring();
        let n = ring.len();
        let s: Vec<usize> = seeds.iter().map(|x| x % n).collect();
        let mut t = s.clone();
        t.extend(extra.iter().map(|x| x % n));
        let cs = closure(ring, &s);
        prop_assert!(s.iter().all(|x| cs.contains(x)));
        prop_assert_eq!(closure(ring, &cs), cs.clone());
        let ct = closure(ring, &t);
        prop_assert!(cs.iter().all(|x| ct.contains(x)));
    }
}
