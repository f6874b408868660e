use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;

use kfree::correlation::{empirical_correlation, CorrelationSpec, EulerContext};
use kfree::literal::{parse_element_list, parse_ideal};
use kfree::sieve::{sieve, sieve_with_workers};
use kfree::spectral::{annihilator_points, squarefree_levels, weights, Phase};
use kfree::{Field, IdealHNF, NumberField, PrimeStream};

fn gaussian() -> Field {
    NumberField::from_i64(&[1, 0, 1]).unwrap()
}

fn density(g: &kfree::SieveGrid) -> f64 {
    let r = g.density();
    *r.numer() as f64 / *r.denom() as f64
}

#[test]
fn gaussian_grid_is_unit_invariant() {
    let s = PrimeStream::new(&gaussian()).unwrap();
    let g = sieve(&s, 2, 50).unwrap();
    for v in g.index().iter() {
        let b = g.bit(&v).unwrap();
        // multiplication by i, and by −1
        assert_eq!(g.bit(&[-v[1], v[0]]).unwrap(), b, "{v:?}");
        assert_eq!(g.bit(&[-v[0], -v[1]]).unwrap(), b, "{v:?}");
    }
}

#[test]
fn restriction_matches_smaller_sieve() {
    for poly in [&[1i64, 0, 1][..], &[-2, 0, 1], &[0, 1]] {
        let s = PrimeStream::new(&NumberField::from_i64(poly).unwrap()).unwrap();
        let big = sieve(&s, 2, 60).unwrap();
        let small = sieve(&s, 2, 25).unwrap();
        assert_eq!(big.restrict(25).unwrap().bits(), small.bits());
    }
}

#[test]
fn worker_count_does_not_change_bits() {
    let s = PrimeStream::new(&gaussian()).unwrap();
    let one = sieve_with_workers(&s, 2, 70, 1).unwrap();
    for w in [2, 3, 8] {
        assert_eq!(sieve_with_workers(&s, 2, 70, w).unwrap().bits(), one.bits());
    }
}

#[test]
fn gaussian_density_settles() {
    let s = PrimeStream::new(&gaussian()).unwrap();
    let target = 0.663_700_8;
    let errs: Vec<f64> = [40, 80, 160].iter().map(|&x| (density(&sieve(&s, 2, x).unwrap()) - target).abs()).collect();
    assert!(errs[2] < 0.01, "{errs:?}");
    assert!(errs[2] < errs[0], "{errs:?}");
}

#[test]
fn mobius_agrees_with_divisor_sum_up_to_norm_ten_thousand() {
    let f = gaussian();
    let s = PrimeStream::new(&f).unwrap();
    let ideals = s.ideals_up_to(10_000).unwrap();
    let powers: Vec<(IdealHNF, i32)> = s
        .ideals_up_to(100)
        .unwrap()
        .into_iter()
        .filter(|(_, mu)| *mu != 0)
        .map(|(b, mu)| (b.power(2).unwrap(), mu))
        .collect();
    for (a, _) in &ideals {
        let direct = s.mobius_mu_k(a, 2).unwrap();
        assert_eq!(PrimeStream::mobius_sum_crosscheck(a, &powers).unwrap(), direct, "{a:?}");
    }
}

#[test]
fn empirical_tracks_analytic() {
    let cases: [(&[i64], u32, &str, u64, u64); 4] = [
        (&[1, 0, 1], 2, "1", 150, 100_000),
        (&[1, 0, 1], 2, "1;2i", 150, 100_000),
        (&[-2, 0, 1], 2, "1;s", 150, 100_000),
        (&[0, 1], 3, "1;2", 200_000, 100_000),
    ];
    for (poly, k, shifts, radius, cutoff) in cases {
        let f = NumberField::from_i64(poly).unwrap();
        let ctx = EulerContext::new(Arc::new(PrimeStream::new(&f).unwrap()), k, cutoff).unwrap();
        let spec = CorrelationSpec::new(k, parse_element_list(&f, shifts).unwrap());
        let an = ctx.analytic_correlation(&spec).unwrap().value;
        let g = sieve(ctx.stream(), k, radius + 3).unwrap();
        let e = empirical_correlation(&g, &spec, radius).unwrap();
        let e = *e.numer() as f64 / *e.denom() as f64;
        assert!((e - an.value).abs() < 0.01, "{poly:?} {shifts}: {e} vs {}", an.value);
    }
}

#[test]
fn annihilators_are_groups_up_to_norm_400() {
    let s = PrimeStream::new(&gaussian()).unwrap();
    for (a, _) in s.ideals_up_to(400).unwrap() {
        let pts = annihilator_points(&a).unwrap();
        let n = a.norm_u64().unwrap() as usize;
        let set: HashSet<&Phase> = pts.iter().collect();
        assert_eq!(set.len(), n);
        for x in &pts {
            assert!(set.contains(&x.neg()));
            for y in &pts {
                assert!(set.contains(&x.add(y).unwrap()));
            }
        }
    }
}

#[test]
fn sigma_never_exceeds_sigma_of_the_unit_ideal() {
    let f = gaussian();
    let ctx = EulerContext::new(Arc::new(PrimeStream::new(&f).unwrap()), 2, 50_000).unwrap();
    let so = ctx.sigma_o();
    let inv = ctx.inverse_zeta(2);
    for (d, _) in squarefree_levels(ctx.stream(), 2, 100_000).unwrap() {
        let w = weights(&ctx, &d).unwrap();
        assert!(w.sigma.value > 0.0);
        assert!(w.sigma.value <= so.value * (1.0 + 1e-12));
        assert!(w.sigma.upper() < inv.lower());
    }
    let two = parse_ideal(&f, "1+i").unwrap();
    // N((1+i)^2) − 2 = 2
    assert!((weights(&ctx, &two).unwrap().sigma.value / so.value - 0.5).abs() < 1e-9);
}

proptest! {
    #[test]
    fn pairing_is_additive(n0 in 0i64..100, n1 in 0i64..100, den in 1i64..100, v in prop::array::uniform2(-500i64..500), w in prop::array::uniform2(-500i64..500)) {
        let y = Phase::new(&[n0 as i128, n1 as i128], den as i128).unwrap();
        let vw = [v[0] + w[0], v[1] + w[1]];
        prop_assert_eq!((y.pair(&v) + y.pair(&w)).rem_euclid(y.den()), y.pair(&vw));
    }

    #[test]
    fn phase_sum_pairs_as_sum(a in prop::array::uniform2(0i64..60), b in prop::array::uniform2(0i64..60), da in 1i64..60, db in 1i64..60, v in prop::array::uniform2(-99i64..99)) {
        let x = Phase::new(&[a[0] as i128, a[1] as i128], da as i128).unwrap();
        let y = Phase::new(&[b[0] as i128, b[1] as i128], db as i128).unwrap();
        let s = x.add(&y).unwrap();
        let lhs = s.pair(&v) as f64 / s.den() as f64;
        let rhs = (x.pair_f64(&v) + y.pair_f64(&v)).fract();
        prop_assert!((lhs - rhs).abs() < 1e-9 || (lhs - rhs).abs() > 1.0 - 1e-9);
    }
}
