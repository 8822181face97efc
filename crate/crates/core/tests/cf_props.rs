use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use sailfrac::cf::{continuants, eval_cf, expand_rational, expand_real, CfSequence, Parity, ProjectiveRatio};
use sailfrac::scalar::{frac, int, ratio_to_f64, Ratio};

fn ratio() -> impl Strategy<Value = Ratio> {
    (-5i64..=5, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

/// Folds `[a_0, ..., a_n]` from the last element up as a projective pair.
fn fold(elems: &[Ratio]) -> (Ratio, Ratio) {
    let mut num = elems.last().unwrap().clone();
    let mut den = Ratio::one();
    for a in elems.iter().rev().skip(1) {
        // a + den/num = (a num + den) / num
        let n = a * &num + &den;
        den = num;
        num = n;
    }
    (num, den)
}

fn same_point(p: &ProjectiveRatio, (n, d): &(Ratio, Ratio)) -> bool {
    let p_r = Ratio::from_integer(p.p().clone());
    let q_r = Ratio::from_integer(p.q().clone());
    p_r * d == q_r * n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn value_matches_bottom_up_fold(elems in prop::collection::vec(ratio(), 1..12)) {
        let seq = CfSequence::new(elems.clone()).unwrap();
        let folded = fold(&elems);
        prop_assume!(!(folded.0.is_zero() && folded.1.is_zero()));
        prop_assert!(same_point(&eval_cf(&seq), &folded));
    }

    #[test]
    fn determinant_identity(elems in prop::collection::vec(ratio(), 1..12)) {
        let pairs = continuants(&elems);
        let (mut p_prev, mut q_prev) = (Ratio::one(), Ratio::zero());
        for (k, c) in pairs.iter().enumerate() {
            let det = &c.p * &q_prev - &p_prev * &c.q;
            let sign = if k % 2 == 0 { -1 } else { 1 };
            prop_assert_eq!(det, int(sign));
            p_prev = c.p.clone();
            q_prev = c.q.clone();
        }
    }

    #[test]
    fn expansion_round_trip(p in -400i64..400, q in 1i64..400, odd in any::<bool>()) {
        let x = frac(p, q);
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let seq = expand_rational(&x, parity);
        prop_assert_eq!(seq.len() % 2 == 1, odd);
        prop_assert!(seq.is_ordinary());
        prop_assert_eq!(eval_cf(&seq).to_ratio(), Some(x));
    }

    #[test]
    fn real_prefix_within_inverse_square(x in 1e-3f64..1e3, terms in 1usize..12) {
        let seq = expand_real(x, terms, 1e-12).unwrap();
        let v = eval_cf(&seq);
        let q: f64 = v.q().to_string().parse().unwrap();
        let p: f64 = v.p().to_string().parse().unwrap();
        prop_assert!((x - p / q).abs() <= 1.0 / (q * q) * (1.0 + 1e-9) + 1e-12 * x);
    }
}

#[test]
fn fold_passes_through_infinity() {
    // [1, 0, 0] = 1 + 1/(0 + 1/0) = 1 + 1/inf = 1
    let e = vec![int(1), int(0), int(0)];
    assert_eq!(eval_cf(&CfSequence::new(e).unwrap()).to_ratio(), Some(int(1)));
    let inf = eval_cf(&CfSequence::new(vec![int(1), int(0)]).unwrap());
    assert!(inf.is_infinite());
    assert_eq!(inf.to_string(), "1/0");
}

#[test]
fn worked_continuants() {
    let (a, b, c) = (frac(3, 2), frac(-2, 5), int(7));
    let last = continuants(&[a.clone(), b.clone(), c.clone()]).pop().unwrap();
    assert_eq!(last.p, &a * &b * &c + &a + &c);
    assert_eq!(last.q, &b * &c + int(1));
    let last = continuants(&[int(1), int(2), int(2)]).pop().unwrap();
    assert_eq!((last.p, last.q), (int(7), int(5)));
    let last = continuants(&[int(2), int(-1), int(3), int(-2), int(1)]).pop().unwrap();
    assert_eq!((last.p, last.q), (int(0), int(1)));
    let last = continuants(&[int(5)]).pop().unwrap();
    assert_eq!((last.p, last.q), (int(5), int(1)));
}

#[test]
fn figure_values() {
    let v = eval_cf(&CfSequence::parse("2,-1,3,-2,1").unwrap());
    assert_eq!(v.to_string(), "0/1");
    let v = eval_cf(&CfSequence::parse("1,-2,2,-1/2,-4").unwrap());
    assert_eq!(v.to_string(), "-1/1");
    let v = eval_cf(&CfSequence::parse("-3/4").unwrap());
    assert_eq!(v.to_ratio(), Some(frac(-3, 4)));
}

#[test]
fn rational_expansions() {
    let show = |x: Ratio, p| expand_rational(&x, p).to_string();
    assert_eq!(show(frac(7, 5), Parity::Odd), "[1,2,2]");
    assert_eq!(show(frac(7, 5), Parity::Even), "[1,2,1,1]");
    assert_eq!(show(int(1), Parity::Odd), "[1]");
    assert_eq!(show(int(1), Parity::Even), "[0,1]");
    assert_eq!(show(frac(-7, 5), Parity::Odd), "[-2,1,1,1,1]");
    assert_eq!(show(frac(-7, 5), Parity::Even), "[-2,1,1,2]");
}

#[test]
fn negative_rational_is_ordinary() {
    for p in [Parity::Odd, Parity::Even] {
        let s = expand_rational(&frac(-7, 5), p);
        assert!(s.is_ordinary());
        assert_eq!(eval_cf(&s).to_ratio(), Some(frac(-7, 5)));
    }
}

#[test]
fn real_expansions() {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert_eq!(expand_real(golden, 10, 1e-12).unwrap(), CfSequence::from_ints(&[1; 10]).unwrap());
    assert_eq!(expand_real(2f64.sqrt(), 5, 1e-12).unwrap(), CfSequence::from_ints(&[1, 2, 2, 2, 2]).unwrap());
    assert_eq!(expand_real(1.4, 20, 1e-9).unwrap(), expand_rational(&frac(7, 5), Parity::Odd));
    assert!(expand_real(f64::NAN, 5, 1e-9).is_err());
    assert!(expand_real(1.0, 0, 1e-9).is_err());
}

#[test]
fn continuant_has_unit_leading_coefficient() {
    for s in [1_000i64, 1_000_000] {
        for k in 0..6 {
            let elems = vec![int(s); k + 1];
            let p = continuants(&elems).pop().unwrap().p;
            let lead = Ratio::from_integer(BigInt::from(s).pow(k as u32 + 1));
            let rel = ratio_to_f64(&(p / lead - int(1)));
            assert!(rel.abs() < 1e-2, "s = {s}, k = {k}: {rel}");
        }
    }
}

#[test]
fn json_forms() {
    let seq = CfSequence::parse("1,-1/2").unwrap();
    assert_eq!(serde_json::to_string(&seq).unwrap(), r#"["1","-1/2"]"#);
    let back: CfSequence = serde_json::from_str(r#"["1","-1/2"]"#).unwrap();
    assert_eq!(back, seq);
    let v = eval_cf(&seq);
    assert_eq!(serde_json::to_value(&v).unwrap(), serde_json::json!({"p": "-1", "q": "1"}));
}
