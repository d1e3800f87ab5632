use dkit_core::config::Budgets;
use dkit_core::moduli::{
    are_isomorphic, census, enumerate_presentations, infinitesimal_lift, rank_one_level_one_orbits,
    truncation_surjectivity,
};
use dkit_core::{Presentation, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;

/// `|GL_r(F_q)| = prod_{i<r} (q^r - q^i)`.
fn gl_order(q: u64, r: u32) -> u64 {
    (0..r).map(|i| q.pow(r) - q.pow(i)).product()
}

#[test]
fn census_mass_and_orbit_stabilizer() {
    let budgets = Budgets::uniform(1 << 16);
    for (spec, q) in [("fp 2", 2u64), ("fp 3", 3), ("gf 2 d=2 mod=x^2+x+1", 4)] {
        let ring = Ring::parse_spec(spec).unwrap();
        for (n, r) in [(1, 1), (2, 1), (3, 1), (1, 2)] {
            if q.pow((n * r * r) as u32) > 1 << 12 {
                continue;
            }
            let report = census(&ring, n, r, &budgets).unwrap();
            assert!(report.orbit_stabilizer_holds(), "{report}");
            let orbit_total: usize = report.classes.iter().map(|c| c.orbit_size).sum();
            assert_eq!(orbit_total, report.total_presentations);
            assert_eq!(report.total_presentations as u64, q.pow((n * r * r) as u32));
            let mass = BigRational::new(BigInt::from(q.pow((r * r) as u32)), BigInt::from(gl_order(q, r as u32)));
            assert_eq!(report.mass(), mass, "{spec} n={n} r={r}");
        }
    }
}

#[test]
fn rank_one_level_one_matches_unit_orbits() {
    let budgets = Budgets::uniform(1 << 16);
    for spec in ["fp 2", "fp 3", "fp 5", "gf 2 d=2 mod=x^2+x+1", "gf 3 d=2 mod=x^2+1", "mq 2 vars=e bounds=2"] {
        let ring = Ring::parse_spec(spec).unwrap();
        let report = census(&ring, 1, 1, &budgets).unwrap();
        let mut predicted: Vec<usize> = rank_one_level_one_orbits(&ring).unwrap().iter().map(|o| o.len()).collect();
        let mut found: Vec<usize> = report.classes.iter().map(|c| c.orbit_size).collect();
        predicted.sort();
        found.sort();
        assert_eq!(found, predicted, "{spec}");
    }
}

#[test]
fn isomorphism_over_dual_numbers() {
    // u = 1 + e gives u^{p-1} = 1 + e over F_2[e]/(e^2)
    let ring = Ring::parse_spec("mq 2 vars=e bounds=2").unwrap();
    let a = Presentation::rank_one(&ring, vec![ring.one()]).unwrap();
    let b = Presentation::rank_one(&ring, vec![ring.parse("1+e").unwrap()]).unwrap();
    assert!(are_isomorphic(&a, &b, 1 << 12).unwrap());
    let z = Presentation::rank_one(&ring, vec![ring.zero()]).unwrap();
    assert!(!are_isomorphic(&a, &z, 1 << 12).unwrap());
}

#[test]
fn lifting_witnesses() {
    for spec in ["fp 2", "fp 3", "gf 2 d=2 mod=x^2+x+1"] {
        let ring = Ring::parse_spec(spec).unwrap();
        for (n, r) in [(1, 1), (2, 1), (1, 2)] {
            let report = truncation_surjectivity(enumerate_presentations(&ring, n, r, 1 << 12).unwrap()).unwrap();
            assert_eq!(report.coverage(), 1.0);
            assert!(report.failures.is_empty());
            for p in enumerate_presentations(&ring, n, r, 1 << 12).unwrap() {
                let (lifted, h) = infinitesimal_lift(&p).unwrap();
                assert_eq!(lifted.base_change(&h).unwrap(), p);
            }
        }
    }
}
