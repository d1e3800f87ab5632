use dkit_core::witt::{ghost, structural_polynomials, IntPoly};
use dkit_core::{Ring, RingElement, WittVector};
use num_bigint::BigInt;
use proptest::prelude::*;

const SPECS: &[&str] = &["fp 2", "fp 3", "gf 2 d=2 mod=x^2+x+1", "mq 2 vars=e bounds=2", "mq 3 vars=t bounds=3"];

fn element(ring: &Ring, seed: u128) -> RingElement {
    let q = ring.cardinality().unwrap();
    ring.element_at(seed % q).unwrap()
}

fn vector(ring: &Ring, n: usize, seeds: &[u128]) -> WittVector {
    WittVector::new(seeds.iter().take(n).map(|&s| element(ring, s)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn witt_ring_axioms(spec in 0..SPECS.len(), n in 1usize..=3, a in prop::array::uniform3(0u128..1000),
                        b in prop::array::uniform3(0u128..1000), c in prop::array::uniform3(0u128..1000)) {
        let ring = Ring::parse_spec(SPECS[spec]).unwrap();
        let (x, y, z) = (vector(&ring, n, &a), vector(&ring, n, &b), vector(&ring, n, &c));
        let zero = WittVector::zero(&ring, n);
        let one = WittVector::one(&ring, n);
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.add(&x.neg().unwrap()).unwrap(), zero.clone());
        prop_assert_eq!(x.add(&zero).unwrap(), x.clone());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&one).unwrap(), x.clone());
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
    }

    #[test]
    fn frobenius_and_verschiebung(spec in 0..SPECS.len(), n in 1usize..=3, a in prop::array::uniform3(0u128..1000),
                                  b in prop::array::uniform3(0u128..1000)) {
        let ring = Ring::parse_spec(SPECS[spec]).unwrap();
        let (x, y) = (vector(&ring, n, &a), vector(&ring, n, &b));
        let p = WittVector::from_int(&ring, n, ring.p() as i64).unwrap();
        // FV = VF = p
        prop_assert_eq!(x.verschiebung().frobenius(), p.mul(&x).unwrap());
        prop_assert_eq!(x.frobenius().verschiebung(), p.mul(&x).unwrap());
        // F is a ring map, V is additive
        prop_assert_eq!(x.mul(&y).unwrap().frobenius(), x.frobenius().mul(&y.frobenius()).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().frobenius(), x.frobenius().add(&y.frobenius()).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().verschiebung(), x.verschiebung().add(&y.verschiebung()).unwrap());
        // projection formula V(x F y) = V(x) y
        prop_assert_eq!(
            x.mul(&y.frobenius()).unwrap().verschiebung(),
            x.verschiebung().mul(&y).unwrap()
        );
    }

    #[test]
    fn teichmuller_is_multiplicative(spec in 0..SPECS.len(), n in 1usize..=3, a in 0u128..1000, b in 0u128..1000) {
        let ring = Ring::parse_spec(SPECS[spec]).unwrap();
        let (s, t) = (element(&ring, a), element(&ring, b));
        let ts = WittVector::teichmuller(&s, n);
        prop_assert_eq!(ts.mul(&WittVector::teichmuller(&t, n)).unwrap(), WittVector::teichmuller(&s.mul(&t), n));
    }

    /// Over Z the ghost components of the structural polynomials evaluated
    /// at integer vectors are the sums, products and negatives of ghost
    /// components.
    #[test]
    fn integer_ghost_oracle(p in prop::sample::select(vec![2u32, 3, 5]), x in prop::array::uniform3(-20i64..20),
                            y in prop::array::uniform3(-20i64..20)) {
        let n = 3;
        let sp = structural_polynomials(p, n).unwrap();
        let point: Vec<BigInt> = x.iter().zip(&y).flat_map(|(a, b)| [BigInt::from(*a), BigInt::from(*b)]).collect();
        let xs: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        let ys: Vec<BigInt> = y.iter().map(|&b| BigInt::from(b)).collect();
        let eval_all = |polys: &[IntPoly], pt: &[BigInt]| -> Vec<BigInt> { polys.iter().map(|q| q.eval(pt)).collect() };
        let ghost_num = |v: &[BigInt], k: usize| -> BigInt {
            (0..=k).map(|i| BigInt::from(p).pow(i as u32) * v[i].pow(p.pow((k - i) as u32))).sum()
        };
        let s = eval_all(sp.sum(), &point);
        let m = eval_all(sp.prod(), &point);
        let neg = eval_all(sp.neg(), &xs);
        for k in 0..n {
            prop_assert_eq!(ghost_num(&s, k), ghost_num(&xs, k) + ghost_num(&ys, k));
            prop_assert_eq!(ghost_num(&m, k), ghost_num(&xs, k) * ghost_num(&ys, k));
            prop_assert_eq!(ghost_num(&neg, k), -ghost_num(&xs, k));
        }
    }
}

#[test]
fn ghost_identities_small() {
    for p in [2, 3, 5] {
        for n in 1..=3 {
            structural_polynomials(p, n).unwrap().check_ghost_identities().unwrap();
        }
    }
}

#[test]
fn symbolic_ghost_of_sum() {
    let sp = structural_polynomials(2, 2).unwrap();
    // variables interleave as X0, Y0, X1, Y1
    let xs: Vec<IntPoly> = (0..2).map(|i| IntPoly::var(4, 2 * i)).collect();
    let ys: Vec<IntPoly> = (0..2).map(|i| IntPoly::var(4, 2 * i + 1)).collect();
    for k in 0..2 {
        assert_eq!(ghost(2, sp.sum(), k), ghost(2, &xs, k).add(&ghost(2, &ys, k)));
    }
}

#[test]
fn examples_over_f2() {
    let f2 = Ring::prime_field(2).unwrap();
    let one = WittVector::parse("w(1;0)", &f2).unwrap();
    assert_eq!(one.add(&one).unwrap().short(), "w(0;1)");
    let four = WittVector::from_int(&f2, 3, 4).unwrap();
    assert_eq!(four.short(), "w(0;0;1)");
    assert!(WittVector::from_int(&f2, 2, 4).unwrap().is_zero());
    let minus_one = WittVector::from_int(&f2, 3, -1).unwrap();
    assert_eq!(minus_one.short(), "w(1;1;1)");
}
