use virmtc::exactmath::{CycloNumber, Rational};
use virmtc::minimal_model::{KacLabel, MinimalModel};
use virmtc::Error;

fn mm(p: i64, q: i64) -> MinimalModel {
    MinimalModel::new(p, q).unwrap()
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn coprime_pairs(max: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=max).flat_map(move |p| (p + 1..=max + 1).map(move |q| (p, q))).filter(|&(p, q)| num_integer::gcd(p, q) == 1)
}

#[test]
fn central_charges() {
    assert_eq!(mm(3, 4).central_charge(), r(1, 2));
    assert_eq!(mm(2, 3).central_charge(), r(0, 1));
    assert_eq!(mm(5, 6).central_charge(), r(4, 5));
    assert_eq!(mm(2, 5).central_charge(), r(-22, 5));
}

#[test]
fn construction_validates_and_normalizes() {
    assert_eq!(mm(4, 3), mm(3, 4));
    assert!(matches!(MinimalModel::new(4, 6), Err(Error::InvalidModel(_))));
    assert!(matches!(MinimalModel::new(1, 3), Err(Error::InvalidModel(_))));
    assert!(matches!(mm(3, 4).label(3, 1), Err(Error::InvalidLabel(_))));
    assert!(matches!(mm(3, 4).label(1, 0), Err(Error::InvalidLabel(_))));
}

#[test]
fn ising_weights() {
    let m = mm(3, 4);
    let hs: Vec<Rational> = m.list_simples().iter().map(|x| m.conformal_weight(x)).collect();
    assert_eq!(hs, vec![r(0, 1), r(1, 16), r(1, 2)]);
    assert_eq!(m.conformal_weight(&m.label(1, 3).unwrap()), r(1, 2));
    assert_eq!(m.conformal_weight(&m.label(1, 2).unwrap()), r(1, 16));
}

#[test]
fn vacuum_and_current_weights() {
    for (p, q) in coprime_pairs(12) {
        let m = mm(p, q);
        assert_eq!(m.conformal_weight(&m.label(1, 1).unwrap()), Rational::zero());
        let cur = m.label(1, q - 1).unwrap();
        assert_eq!(m.conformal_weight(&cur), r((p - 2) * (q - 2), 4));
    }
}

#[test]
fn simples_lists() {
    let ising: Vec<String> = mm(3, 4).list_simples().iter().map(ToString::to_string).collect();
    assert_eq!(ising, ["1,1", "1,2", "1,3"]);
    assert_eq!(mm(2, 3).list_simples().len(), 1);
    assert_eq!(mm(4, 5).list_simples().len(), 6);
    for (p, q) in coprime_pairs(12) {
        let m = mm(p, q);
        let s = m.list_simples();
        assert_eq!(s.len() as i64, (p - 1) * (q - 1) / 2);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn weight_invariance_under_identification() {
    for (p, q) in coprime_pairs(12) {
        let m = mm(p, q);
        for a in 1..p {
            for b in 1..q {
                assert_eq!(m.raw_weight(a, b), m.raw_weight(p - a, q - b), "({p},{q}) ({a},{b})");
                let x = m.label(a, b).unwrap();
                assert_eq!(m.label(p - a, q - b).unwrap(), x);
                // idempotent
                assert_eq!(m.label(x.m, x.n).unwrap(), x);
            }
        }
    }
}

#[test]
fn twists() {
    let m = mm(5, 6);
    assert_eq!(m.twist(&m.label(1, 1).unwrap()), CycloNumber::one());
    assert_eq!(m.twist(&m.label(1, 3).unwrap()), CycloNumber::zeta(3, 2));
    assert_eq!(m.twist(&m.label(1, 5).unwrap()), CycloNumber::one());
    assert_eq!(m.conformal_weight(&m.label(1, 5).unwrap()), r(3, 1));
    // the paper's θ_(1,3) = exp(2πi·2p/q) holds under the corrected weights
    for (p, q) in coprime_pairs(12).filter(|&(_, q)| q > 3) {
        let m = mm(p, q);
        let h13 = m.conformal_weight(&m.label(1, 3).unwrap());
        assert_eq!((h13 - r(2 * p, q)).fract_pos(), Rational::zero());
    }
}

#[test]
fn simple_current() {
    let m = mm(5, 6);
    assert_eq!(m.simple_current_act(&m.label(1, 2).unwrap()), m.label(1, 4).unwrap());
    let m = mm(9, 10);
    assert_eq!(m.simple_current_act(&m.label(1, 5).unwrap()), m.label(1, 5).unwrap());
    for (p, q) in coprime_pairs(12) {
        let m = mm(p, q);
        assert_eq!(m.simple_current_act(&m.unit()), m.label(1, q - 1).unwrap());
        for x in m.list_simples() {
            assert_eq!(m.simple_current_act(&m.simple_current_act(&x)), x);
        }
    }
}

#[test]
fn twist_multiplicativity_on_first_column() {
    // θ_(1,q−i) = θ_(1,q−1)·θ_(1,i)  ⟺  (i−1)(p−2)/2 ∈ ℤ
    for (p, q) in coprime_pairs(12) {
        let m = mm(p, q);
        let cur = m.twist(&m.label(1, q - 1).unwrap());
        for i in 1..q {
            let lhs = m.twist(&m.label(1, q - i).unwrap());
            let rhs = &cur * &m.twist(&m.label(1, i).unwrap());
            assert_eq!(lhs == rhs, ((i - 1) * (p - 2)) % 2 == 0, "({p},{q}) i={i}");
        }
    }
}

#[test]
fn label_json() {
    let x = mm(5, 6).label(2, 3).unwrap();
    assert_eq!(serde_json::to_string(&x).unwrap(), "\"2,3\"");
    let y: KacLabel = serde_json::from_str("\"2,3\"").unwrap();
    assert_eq!(x, y);
    assert_eq!(serde_json::to_value(mm(5, 6)).unwrap(), serde_json::json!({"p": 5, "q": 6}));
}
