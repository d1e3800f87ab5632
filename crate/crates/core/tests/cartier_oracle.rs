//! Normal-form arithmetic in E_n against composition and addition of the
//! operators it induces on Witt vectors.

use dkit_core::{CartierElement, Ring, RingElement, RingHom, WittVector};
use proptest::prelude::*;

/// `R = F_p[a, b]`, `S = R[t_0..t_{n-1}]/(t_i^{p^n})` and the generic vector
/// `(t_0, ..., t_{n-1})` of `W_n(S)`.
fn generic(p: u32, n: usize) -> (Ring, RingHom, WittVector) {
    let r = Ring::parse_spec(&format!("poly {p} vars=a,b")).unwrap();
    let bound = p.pow(n as u32);
    let names: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let bounds: Vec<String> = (0..n).map(|_| bound.to_string()).collect();
    let s = Ring::parse_spec(&format!("mq {p} vars=a,b,{} bounds=*,*,{}", names.join(","), bounds.join(","))).unwrap();
    let h = RingHom::by_names(&r, &s, &[]).unwrap();
    let x = WittVector::new(names.iter().map(|t| s.var(t).unwrap()).collect()).unwrap();
    (r, h, x)
}

#[test]
fn generic_monomial_products_and_sums() {
    for (p, n) in [(2, 1), (2, 2), (3, 2)] {
        let (r, h, x) = generic(p, n);
        let a = r.var("a").unwrap();
        let b = r.var("b").unwrap();
        for rr in 0..n {
            for s in 0..n as u32 {
                for t in 0..n {
                    for u in 0..n as u32 {
                        let m1 = CartierElement::monomial(n, rr, &a, s);
                        let m2 = CartierElement::monomial(n, t, &b, u);
                        let prod = m1.mul(&m2).unwrap();
                        let composed = m1.act(&h, &m2.act(&h, &x).unwrap()).unwrap();
                        assert_eq!(prod.act(&h, &x).unwrap(), composed, "p={p} n={n} {m1} * {m2}");
                        let sum = m1.add(&m2).unwrap();
                        let added = m1.act(&h, &x).unwrap().add(&m2.act(&h, &x).unwrap()).unwrap();
                        assert_eq!(sum.act(&h, &x).unwrap(), added, "p={p} n={n} {m1} + {m2}");
                    }
                }
            }
        }
    }
}

fn random_element(ring: &Ring, n: usize, seeds: &[(usize, u32, u128)]) -> CartierElement {
    let q = ring.cardinality().unwrap();
    let mut acc = CartierElement::zero(ring, n);
    for &(r, s, c) in seeds {
        let m = CartierElement::monomial(n, r % n, &ring.element_at(c % q).unwrap(), s % (n as u32 + 1));
        acc = acc.add(&m).unwrap();
    }
    acc
}

const SPECS: &[&str] = &["fp 2", "fp 3", "gf 2 d=2 mod=x^2+x+1", "mq 2 vars=e bounds=2", "gf 2 d=3 mod=x^3+x+1"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn ring_laws_match_operators(spec in 0..SPECS.len(), n in 1usize..=3,
                                 a in prop::collection::vec((0usize..3, 0u32..4, 0u128..64), 1..4),
                                 b in prop::collection::vec((0usize..3, 0u32..4, 0u128..64), 1..4),
                                 xs in prop::array::uniform3(0u128..64)) {
        let ring = Ring::parse_spec(SPECS[spec]).unwrap();
        let q = ring.cardinality().unwrap();
        let id = RingHom::identity(&ring);
        let (ea, eb) = (random_element(&ring, n, &a), random_element(&ring, n, &b));
        let x = WittVector::new(xs.iter().take(n).map(|&c| ring.element_at(c % q).unwrap()).collect()).unwrap();
        let composed = ea.act(&id, &eb.act(&id, &x).unwrap()).unwrap();
        prop_assert_eq!(ea.mul(&eb).unwrap().act(&id, &x).unwrap(), composed);
        let added = ea.act(&id, &x).unwrap().add(&eb.act(&id, &x).unwrap()).unwrap();
        prop_assert_eq!(ea.add(&eb).unwrap().act(&id, &x).unwrap(), added);
        prop_assert!(ea.sub(&ea).unwrap().is_zero());
        // associativity of the normal-form product
        let ec = random_element(&ring, n, &[(1, 1, xs[0])]);
        prop_assert_eq!(ea.mul(&eb).unwrap().mul(&ec).unwrap(), ea.mul(&eb.mul(&ec).unwrap()).unwrap());
    }

    #[test]
    fn parse_print_round_trip(spec in 0..SPECS.len(), n in 1usize..=3,
                              a in prop::collection::vec((0usize..3, 0u32..4, 0u128..64), 0..4)) {
        let ring = Ring::parse_spec(SPECS[spec]).unwrap();
        let e = random_element(&ring, n, &a);
        prop_assert_eq!(CartierElement::parse(&e.to_string(), &ring, n).unwrap(), e);
    }
}

#[test]
fn relations_fv_and_witt_scalars() {
    let r = Ring::parse_spec("poly 3 vars=l").unwrap();
    let n = 3;
    let f = CartierElement::f(&r, n);
    let v = CartierElement::v(&r, n);
    let three = CartierElement::from_witt(&WittVector::from_int(&r, n, 3).unwrap());
    assert_eq!(f.mul(&v).unwrap(), three);
    assert_eq!(v.mul(&f).unwrap(), three);
    let l: RingElement = r.var("l").unwrap();
    // F [l] = [l^p] F and [l] V = V [l^p]
    let tl = CartierElement::teichmuller(n, &l);
    assert_eq!(f.mul(&tl).unwrap(), CartierElement::monomial(n, 0, &l.pow(3), 1));
    assert_eq!(tl.mul(&v).unwrap(), CartierElement::monomial(n, 1, &l.pow(3), 0));
    // V^n = 0
    assert!(v.mul(&v).unwrap().mul(&v).unwrap().is_zero());
}
