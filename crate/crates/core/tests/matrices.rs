mod common;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2census::gf::{make_field, FieldCtx};
use sl2census::mat::{eigen, enumerate_sl2, group_order, group_order_poly, hom_count, hom_count_poly, Eigenspaces, GroupFamily, Mat2};
use sl2census::poly::{CountPoly, Var};

#[test]
fn enumeration_matches_brute_count() {
    for (p, k, expect) in [(3u64, 1u32, 24u64), (5, 1, 120), (3, 2, 720), (7, 1, 336)] {
        let f = make_field(p, k).unwrap();
        let all = enumerate_sl2(&f).unwrap();
        assert_eq!(all.len() as u64, expect);
        assert_eq!(common::count_sl2(&f), expect);
        assert!(all.windows(2).all(|w| w[0] < w[1]), "canonical order");
        assert!(all.iter().all(|m| m.det(&f) == f.one()));
        assert_eq!(group_order(GroupFamily::Sl, 2, f.q() as i64), BigInt::from(expect));
    }
}

#[test]
fn group_orders() {
    // GL2(F3) by counting matrices with nonzero determinant
    let f = make_field(3, 1).unwrap();
    let els: Vec<_> = f.elements().collect();
    let mut gl = 0;
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    if !f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
                        gl += 1;
                    }
                }
            }
        }
    }
    assert_eq!(gl, 48);
    assert_eq!(group_order(GroupFamily::Gl, 2, 3), BigInt::from(48));
    assert_eq!(group_order(GroupFamily::Sl, 3, 2), BigInt::from(168));
    assert_eq!(group_order_poly(GroupFamily::Sl, 2), CountPoly::from_ints(Var::Q, &[0, -1, 0, 1]));
    assert_eq!(hom_count(GroupFamily::Sl, 2, 2, 3), BigInt::from(576));
    assert_eq!(hom_count_poly(GroupFamily::Gl, 1, 3), CountPoly::linear(Var::Q, -1).pow(3));
    for n in 2..5 {
        for r in 1..4 {
            for fam in [GroupFamily::Sl, GroupFamily::Gl] {
                assert_eq!(hom_count(fam, n, r, 1), BigInt::from(0));
            }
        }
    }
}

#[test]
fn matrix_identities() {
    let f = make_field(5, 1).unwrap();
    for m in enumerate_sl2(&f).unwrap() {
        assert_eq!(m.mul(&f, &m.inverse(&f)), Mat2::identity(&f));
        assert_eq!(m.conjugate_by(&f, &Mat2::identity(&f)), m);
        let adj = Mat2 { a: m.d, b: f.neg(m.b), c: f.neg(m.c), d: m.a };
        assert_eq!(m.inverse(&f), adj);
    }
    assert!(Mat2::from_ints(&f, 1, 1, 1, 1).is_err());
}

fn check_eigen(f: &FieldCtx, m: &Mat2) {
    let e = eigen(f, m);
    assert_eq!(f.ext_mul(e.eigenvalues[0], e.eigenvalues[1]), f.ext_one());
    assert_eq!(f.ext_add(e.eigenvalues[0], e.eigenvalues[1]), f.embed(m.trace(f)));
    let two = f.from_int(2);
    let pm2 = m.trace(f) == two || m.trace(f) == f.neg(two);
    assert_eq!(e.diagonalizable, !(pm2 && !m.is_central(f)));
    match &e.eigenspaces {
        Eigenspaces::All => assert!(m.is_central(f)),
        Eigenspaces::Lines(lines) => {
            assert!(lines.iter().all(|l| l.is_eigenline_of(f, m)));
            assert_eq!(lines.len(), if e.diagonalizable { 2 } else { 1 });
            if !e.rational {
                assert!(lines.iter().all(|l| !l.is_base()));
            }
        }
    }
}

#[test]
fn eigen_data_is_consistent() {
    for (p, k) in [(3, 1), (5, 1), (3, 2), (7, 1)] {
        let f = make_field(p, k).unwrap();
        for m in enumerate_sl2(&f).unwrap() {
            check_eigen(&f, &m);
        }
    }
}

#[test]
fn eigen_examples() {
    let f = make_field(3, 1).unwrap();
    let e = eigen(&f, &Mat2::identity(&f));
    assert_eq!(e.eigenspaces, Eigenspaces::All);
    assert_eq!(e.display_lines(&f).len(), 2);
    let rot = eigen(&f, &Mat2::from_ints(&f, 0, 1, -1, 0).unwrap());
    assert_eq!(rot.trace, f.zero());
    assert!(!rot.rational);
    let uni = eigen(&f, &Mat2::from_ints(&f, 1, 1, 0, 1).unwrap());
    assert!(!uni.diagonalizable);
    assert_eq!(uni.eigenvalues, [f.ext_one(); 2]);
    assert_eq!(uni.eigenspaces, Eigenspaces::Lines(vec![sl2census::mat::Line::e1(&f)]));
}

#[test]
fn conjugation_preserves_trace_and_rationality() {
    let f = make_field(3, 1).unwrap();
    let g3 = enumerate_sl2(&f).unwrap();
    for m in &g3 {
        for g in &g3 {
            let c = m.conjugate_by(&f, g);
            assert_eq!(c.trace(&f), m.trace(&f));
            assert_eq!(eigen(&f, &c).rational, eigen(&f, m).rational);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, k) in [(5, 1), (3, 2), (7, 1), (5, 2), (41, 1), (7, 2)] {
        let f = make_field(p, k).unwrap();
        let all = enumerate_sl2(&f).unwrap();
        for _ in 0..10_000 {
            let m = &all[rng.gen_range(0..all.len())];
            let g = &all[rng.gen_range(0..all.len())];
            let c = m.conjugate_by(&f, g);
            assert_eq!(c.trace(&f), m.trace(&f));
            assert_eq!(eigen(&f, &c).rational, eigen(&f, m).rational);
        }
    }
}
