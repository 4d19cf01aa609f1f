use virmtc::exactmath::Rational;
use virmtc::gluing::{fusion_ring_isos, gluing_candidates, reverify, scan_unitary_chain, GlueSide};
use virmtc::minimal_model::MinimalModel;
use virmtc::subcat::{Ambient, SubcatName};

fn amb(p: i64, q: i64) -> Ambient {
    Ambient::new(MinimalModel::new(p, q).unwrap())
}

fn sums(c: &virmtc::gluing::GluingCandidate) -> Vec<String> {
    c.weight_sums.iter().map(Rational::to_string).collect()
}

/// Images of the given raw labels under the candidate's bijection, as canonical strings.
fn maps(c: &virmtc::gluing::GluingCandidate, left: &Ambient, right: &Ambient, pairs: &[((i64, i64), (i64, i64))]) -> bool {
    pairs.iter().all(|&((a, b), (x, y))| {
        let l = left.model().label(a, b).unwrap();
        let r = right.model().label(x, y).unwrap();
        c.bijection.iter().any(|&(u, v)| u == l && v == r)
    })
}

#[test]
fn ising_pair() {
    let (l, r) = (amb(4, 5), amb(5, 6));
    let (ls, rs) = (GlueSide::new(&l, SubcatName::C2).unwrap(), GlueSide::new(&r, SubcatName::C4).unwrap());
    let cands = gluing_candidates(&ls, &rs, true);
    assert_eq!(cands.len(), 1);
    let c = &cands[0];
    assert!(maps(c, &l, &r, &[((1, 1), (1, 1)), ((1, 3), (3, 1))]));
    assert_eq!(sums(c), ["0/1", "2/1"]);
    assert!(c.integral);
    assert_eq!(c.theta_trivial, Some(true));
    assert!(reverify(c, &ls, &rs));
}

#[test]
fn self_isos_contain_identity() {
    for (p, q) in [(5, 6), (5, 7), (6, 7)] {
        let a = amb(p, q);
        for name in [SubcatName::C1, SubcatName::C2, SubcatName::C6] {
            let s = GlueSide::new(&a, name).unwrap();
            let isos = fusion_ring_isos(s.ring(), s.dims(), s.ring(), s.dims());
            let id: Vec<usize> = (0..s.ring().len()).collect();
            assert!(isos.contains(&id), "({p},{q}) {name}");
        }
    }
}

#[test]
fn rank_three_pair() {
    let (l, r) = (amb(6, 7), amb(7, 8));
    let (ls, rs) = (GlueSide::new(&l, SubcatName::C2).unwrap(), GlueSide::new(&r, SubcatName::C4).unwrap());
    let cands = gluing_candidates(&ls, &rs, false);
    let c = cands
        .iter()
        .find(|c| maps(c, &l, &r, &[((1, 3), (3, 1)), ((1, 5), (5, 1))]))
        .expect("the printed bijection is a fusion isomorphism");
    assert_eq!(sums(c), ["0/1", "2/1", "8/1"]);
    assert!(c.integral);
    assert_eq!(c.theta_trivial, None);
    assert!(cands.iter().all(|c| reverify(c, &ls, &rs)));
}

#[test]
fn non_integral_pair() {
    let (l, r) = (amb(5, 6), amb(6, 7));
    let (ls, rs) = (GlueSide::new(&l, SubcatName::C1).unwrap(), GlueSide::new(&r, SubcatName::C3).unwrap());
    let cands = gluing_candidates(&ls, &rs, true);
    let printed = [((1, 1), (1, 1)), ((1, 2), (2, 1)), ((1, 3), (3, 1)), ((1, 4), (4, 1)), ((1, 5), (5, 1))];
    let c = cands.iter().find(|c| maps(c, &l, &r, &printed)).unwrap();
    let mut s = sums(c);
    s.sort();
    let mut want = vec!["0/1", "1/2", "2/1", "9/2", "8/1"];
    want.sort();
    assert_eq!(s, want);
    assert!(!c.integral);
    assert_eq!(c.theta_trivial, Some(false));
    // the rank-5 ring also has the automorphism exchanging (1,2) and (1,4); under it every sum is integral
    assert_eq!(cands.len(), 2);
    let other = cands.iter().find(|x| !maps(x, &l, &r, &printed)).unwrap();
    assert!(maps(other, &l, &r, &[((1, 2), (4, 1)), ((1, 4), (2, 1))]));
    assert!(other.integral);
}

#[test]
fn unequal_ranks_have_no_isos() {
    let (l, r) = (amb(5, 6), amb(6, 7));
    let (ls, rs) = (GlueSide::new(&l, SubcatName::C2).unwrap(), GlueSide::new(&r, SubcatName::C3).unwrap());
    assert!(gluing_candidates(&ls, &rs, false).is_empty());
}

#[test]
fn unitary_chain_scan() {
    let rows = scan_unitary_chain(10).unwrap();
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), (3..=10).collect::<Vec<_>>());
    for r in &rows {
        assert!(r.isos >= 1, "n={}", r.n);
        assert!(r.integral, "n={}", r.n);
        assert_eq!(r.left_modular, r.expected_modular, "n={}", r.n);
        assert_eq!(r.right_modular, r.expected_modular, "n={}", r.n);
        assert_eq!(r.expected_modular, (r.n + 2) % 2 == 1);
    }
    // the companion pair at n = 4 is the printed non-integral gluing
    assert!(rows[1].companion_integral.contains(&false));
    let again = scan_unitary_chain(10).unwrap();
    assert_eq!(serde_json::to_string(&rows).unwrap(), serde_json::to_string(&again).unwrap());
}
