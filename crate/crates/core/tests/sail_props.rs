use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sailfrac::cf::{eval_cf, expand_rational, CfSequence, Parity};
use sailfrac::error::Error;
use sailfrac::sail::{integer_length, integer_sine, lls_of_sail, sail, ConeSpec, LatticePoint};
use sailfrac::scalar::{frac, int};

fn lp(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(x, y)
}

/// Integer points strictly inside the segment, plus one.
fn counted_length(a: (i64, i64), b: (i64, i64)) -> i64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let steps = dx.abs().max(dy.abs());
    // every interior lattice point sits at a rational parameter k/steps
    let interior = (1..steps).filter(|k| (dx * k) % steps == 0 && (dy * k) % steps == 0).count();
    interior as i64 + 1
}

/// Index of the lattice spanned by `u` and `v`: bring the 2x2 matrix with
/// columns `u, v` to lower-triangular form by unimodular column operations.
fn sublattice_index(u: (i64, i64), v: (i64, i64)) -> i64 {
    let (mut c1, mut c2) = (u, v);
    while c2.0 != 0 {
        let q = Integer::div_floor(&c1.0, &c2.0);
        c1 = (c1.0 - q * c2.0, c1.1 - q * c2.1);
        std::mem::swap(&mut c1, &mut c2);
    }
    (c1.0 * c2.1).abs()
}

fn primitive(d: (i64, i64)) -> (i64, i64) {
    let g = d.0.gcd(&d.1);
    (d.0 / g, d.1 / g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn length_counts_lattice_points(ax in -50i64..=50, ay in -50i64..=50, bx in -50i64..=50, by in -50i64..=50) {
        prop_assume!((ax, ay) != (bx, by));
        let l = integer_length(&lp(ax, ay), &lp(bx, by)).unwrap();
        prop_assert_eq!(l.clone(), BigInt::from(counted_length((ax, ay), (bx, by))));
        prop_assert_eq!(l, integer_length(&lp(bx, by), &lp(ax, ay)).unwrap());
    }

    #[test]
    fn sine_is_sublattice_index(
        a in (-20i64..=20, -20i64..=20),
        b in (-20i64..=20, -20i64..=20),
        c in (-20i64..=20, -20i64..=20),
    ) {
        let (ba, bc) = ((a.0 - b.0, a.1 - b.1), (c.0 - b.0, c.1 - b.1));
        prop_assume!(ba != (0, 0) && bc != (0, 0) && ba.0 * bc.1 - ba.1 * bc.0 != 0);
        let s = integer_sine(&lp(a.0, a.1), &lp(b.0, b.1), &lp(c.0, c.1)).unwrap();
        prop_assert_eq!(s.clone(), BigInt::from(sublattice_index(primitive(ba), primitive(bc))));
        prop_assert_eq!(s, integer_sine(&lp(c.0, c.1), &lp(b.0, b.1), &lp(a.0, a.1)).unwrap());
    }
}

#[test]
fn collinear_angle_is_its_own_error() {
    let e = integer_sine(&lp(0, 0), &lp(1, 1), &lp(3, 3)).unwrap_err();
    assert!(matches!(e, Error::Collinear(_)), "{e:?}");
    assert!(integer_length(&lp(2, 2), &lp(2, 2)).is_err());
}

#[test]
fn worked_lengths_and_sines() {
    assert_eq!(integer_length(&lp(0, 0), &lp(2, 4)).unwrap(), 2.into());
    assert_eq!(integer_length(&lp(1, 1), &lp(5, 7)).unwrap(), 2.into());
    assert_eq!(integer_sine(&lp(1, 0), &lp(0, 0), &lp(0, 1)).unwrap(), 1.into());
    assert_eq!(integer_sine(&lp(1, 0), &lp(1, 1), &lp(5, 7)).unwrap(), 2.into());
    assert_eq!(integer_sine(&lp(2, 0), &lp(0, 0), &lp(0, 2)).unwrap(), 1.into());
}

fn as_pairs(v: &[LatticePoint]) -> Vec<(i64, i64)> {
    v.iter().map(|p| (p.x.to_string().parse().unwrap(), p.y.to_string().parse().unwrap())).collect()
}

#[test]
fn worked_sails() {
    let cases: [(i64, i64, &[(i64, i64)], &[i64]); 4] = [
        (7, 5, &[(1, 0), (1, 1), (5, 7)], &[1, 2, 2]),
        (2, 1, &[(1, 0), (1, 2)], &[2]),
        (1, 1, &[(1, 0), (1, 1)], &[1]),
        (3, 1, &[(1, 0), (1, 3)], &[3]),
    ];
    for (p, q, verts, lls) in cases {
        let s = sail(&ConeSpec::new(frac(p, q)).unwrap()).unwrap();
        assert_eq!(as_pairs(&s.vertices), verts, "alpha = {p}/{q}");
        assert_eq!(s.lls, CfSequence::from_ints(lls).unwrap());
        assert_eq!(lls_of_sail(&s).unwrap(), s.lls);
    }
    assert!(matches!(ConeSpec::new(frac(1, 2)), Err(Error::InvalidCone(_))));
}

/// Every nonzero lattice point of the cone within the box lies on the far
/// side of (or on) each sail edge, and sail vertices are cone points.
fn supporting_lines_hold(p: i64, q: i64) {
    let s = sail(&ConeSpec::new(frac(p, q)).unwrap()).unwrap();
    let v = as_pairs(&s.vertices);
    let in_cone = |x: i64, y: i64| y >= 0 && q * y <= p * x && (x, y) != (0, 0);
    for &(x, y) in &v {
        assert!(in_cone(x, y), "{p}/{q}: vertex ({x},{y}) outside the cone");
    }
    for w in v.windows(2) {
        let (a, b) = (w[0], w[1]);
        let side = |x: i64, y: i64| (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0);
        let origin_side = side(0, 0).signum();
        assert_ne!(origin_side, 0);
        for x in 0..=q.max(1) + 1 {
            for y in 0..=p + 1 {
                if in_cone(x, y) {
                    assert!(side(x, y) * origin_side <= 0, "{p}/{q}: ({x},{y}) beyond edge {a:?}-{b:?}");
                }
            }
        }
    }
    // strict convexity: no three consecutive vertices collinear
    for w in v.windows(3) {
        let d = (w[1].0 - w[0].0) * (w[2].1 - w[1].1) - (w[1].1 - w[0].1) * (w[2].0 - w[1].0);
        assert_ne!(d, 0, "{p}/{q}: collinear vertices {w:?}");
    }
}

#[test]
fn sails_are_hull_boundaries() {
    for q in 1..=12 {
        for p in q..=30 {
            if p.gcd(&q) == 1 {
                supporting_lines_hold(p, q);
            }
        }
    }
}

#[test]
fn lls_evaluates_to_alpha() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 200 {
        let q = rng.gen_range(1..=400i64);
        let p = rng.gen_range(q..=(20 * q - 1).min(400));
        if p < q {
            continue;
        }
        let alpha = frac(p, q);
        let s = sail(&ConeSpec::new(alpha.clone()).unwrap()).unwrap();
        assert_eq!(eval_cf(&s.lls).to_ratio(), Some(alpha.clone()));
        assert_eq!(s.lls, expand_rational(&alpha, Parity::Odd));
        done += 1;
    }
    assert_eq!(eval_cf(&CfSequence::from_ints(&[1]).unwrap()).to_ratio(), Some(int(1)));
}
