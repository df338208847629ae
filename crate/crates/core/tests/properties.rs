//! Property suites over randomly sampled exact values: field axioms,
//! Galois functoriality, trace/norm transitivity, valuation laws, and the
//! series-level norm and preparation invariants.

use proptest::prelude::*;
use qg_core::arith::phi_lpow;
use qg_core::cyclotomic::{rat_frac, CyclotomicNumber, GaloisElement, Valuation};
use qg_core::series::{recompose, uniformizer, weierstrass_prepare, TruncatedSeries};

const L: u64 = 3;

fn arb_rational() -> impl Strategy<Value = qg_core::Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat_frac(n, d))
}

fn arb_cyclo(e: u32) -> impl Strategy<Value = CyclotomicNumber> {
    let len = phi_lpow(L, e) as usize;
    proptest::collection::vec(arb_rational(), len)
        .prop_map(move |coeffs| CyclotomicNumber::from_coeffs(L, e, coeffs))
}

fn arb_unit_exponent(e: u32) -> impl Strategy<Value = u64> {
    let m = L.pow(e);
    (1..m).prop_filter("unit", move |k| k % L != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in arb_cyclo(2), b in arb_cyclo(2), c in arb_cyclo(2)) {
        // associativity and distributivity, exactly
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        // multiplicative inverses
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert_eq!(a.mul(&inv), CyclotomicNumber::one(L, 2));
        }
    }

    #[test]
    fn galois_is_a_ring_homomorphism(
        a in arb_cyclo(2),
        b in arb_cyclo(2),
        k in arb_unit_exponent(2),
    ) {
        let s = GaloisElement::new(L, 2, k).unwrap();
        prop_assert_eq!(s.apply(&a.add(&b)), s.apply(&a).add(&s.apply(&b)));
        prop_assert_eq!(s.apply(&a.mul(&b)), s.apply(&a).mul(&s.apply(&b)));
    }

    #[test]
    fn galois_composition(
        a in arb_cyclo(2),
        k1 in arb_unit_exponent(2),
        k2 in arb_unit_exponent(2),
    ) {
        let s1 = GaloisElement::new(L, 2, k1).unwrap();
        let s2 = GaloisElement::new(L, 2, k2).unwrap();
        let composed = GaloisElement::new(L, 2, k1 * k2 % 9).unwrap();
        prop_assert_eq!(s1.apply(&s2.apply(&a)), composed.apply(&a));
    }

    #[test]
    fn trace_and_norm_transitivity(a in arb_cyclo(3)) {
        // through the chain e = 3 -> 2 -> 1 and straight to 1
        let via = a.rel_trace(2).unwrap().rel_trace(1).unwrap();
        prop_assert_eq!(via, a.rel_trace(1).unwrap());
        let via = a.rel_norm(2).unwrap().rel_norm(1).unwrap();
        prop_assert_eq!(via, a.rel_norm(1).unwrap());
        // down to Q as well
        let via = a.rel_trace(1).unwrap().rel_trace(0).unwrap();
        prop_assert_eq!(via, a.rel_trace(0).unwrap());
    }

    #[test]
    fn norm_of_subfield_element_is_power(a in arb_cyclo(1)) {
        // N_{e=2/e'=1}(x) = x^3 for x already at level 1
        let lifted = a.coerce_up(2);
        prop_assert_eq!(lifted.rel_norm(1).unwrap(), a.pow(3));
    }

    #[test]
    fn valuation_laws(a in arb_cyclo(2), b in arb_cyclo(2)) {
        let va = a.l_valuation();
        let vb = b.l_valuation();
        // v(ab) = v(a) + v(b)
        match (a.mul(&b).l_valuation(), va, vb) {
            (Valuation::Finite(vab), Valuation::Finite(x), Valuation::Finite(y)) => {
                prop_assert_eq!(vab, x + y)
            }
            (Valuation::Infinite, va, vb) => {
                prop_assert!(va == Valuation::Infinite || vb == Valuation::Infinite)
            }
            _ => prop_assert!(false, "product valuation finite but a factor vanished"),
        }
        // v(a+b) >= min(v(a), v(b))
        if let (Valuation::Finite(x), Valuation::Finite(y)) = (va, vb) {
            match a.add(&b).l_valuation() {
                Valuation::Finite(vs) => prop_assert!(vs >= x.min(y)),
                Valuation::Infinite => {}
            }
        }
    }

    #[test]
    fn series_norm_is_multiplicative(
        c0 in arb_cyclo(2), c1 in arb_cyclo(2), c2 in arb_cyclo(2),
        d0 in arb_cyclo(2), d1 in arb_cyclo(2), d2 in arb_cyclo(2),
    ) {
        // clear denominators into the valuation ring via scaling by 27^2
        let clear = |x: &CyclotomicNumber| x.scale(&rat_frac(729, 1));
        let f = TruncatedSeries::new(L, 2, vec![clear(&c0), clear(&c1), clear(&c2)]).unwrap();
        let g = TruncatedSeries::new(L, 2, vec![clear(&d0), clear(&d1), clear(&d2)]).unwrap();
        let lhs = f.mul(&g).unwrap().galois_norm(1).unwrap();
        let rhs = f.galois_norm(1).unwrap().mul(&g.galois_norm(1).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Deterministic generator for the Weierstrass round-trips: builds
/// `f = ℓ^mu · F · u` from a random distinguished `F` and a sparse random
/// unit `u`, so the valuation layout of every coefficient is controlled.
pub fn seeded_series(seed: u64, l: u64, e: u32, precision: usize) -> TruncatedSeries {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let ell = uniformizer(l, e);
    let phi = phi_lpow(l, e) as usize;
    let small = |rng: &mut rand_chacha::ChaCha8Rng| -> CyclotomicNumber {
        let ints: Vec<qg_core::Rational> = (0..phi)
            .map(|_| qg_core::cyclotomic::rat(rng.gen_range(-3i64..=3)))
            .collect();
        CyclotomicNumber::from_coeffs(l, e, ints)
    };
    let mu = rng.gen_range(0u64..3);
    let lambda = rng.gen_range(0usize..6);
    // distinguished polynomial: monic, lower coefficients in the maximal ideal
    let mut f_poly = vec![CyclotomicNumber::zero(l, e); precision];
    f_poly[lambda] = CyclotomicNumber::one(l, e);
    for c in f_poly.iter_mut().take(lambda) {
        *c = ell.mul(&small(&mut rng));
    }
    let f_series = TruncatedSeries::new(l, e, f_poly).unwrap();
    // sparse unit series
    let mut u_coeffs = vec![CyclotomicNumber::zero(l, e); precision];
    u_coeffs[0] = CyclotomicNumber::one(l, e).add(&ell.mul(&small(&mut rng)));
    for _ in 0..rng.gen_range(1usize..4) {
        let pos = rng.gen_range(1usize..precision);
        u_coeffs[pos] = small(&mut rng);
    }
    let u_series = TruncatedSeries::new(l, e, u_coeffs).unwrap();
    f_series
        .mul(&u_series)
        .unwrap()
        .scale(&ell.pow(mu))
}

fn check_preparation(f: &TruncatedSeries, e: u32, label: &str) {
    let prep = weierstrass_prepare(f).unwrap();
    assert_eq!(
        recompose(prep.mu, &prep.distinguished, &prep.unit).unwrap(),
        *f,
        "recomposition differs for {label}"
    );
    // F distinguished: monic, lower coefficients of positive valuation
    let lambda = prep.lambda();
    assert_eq!(prep.distinguished[lambda], CyclotomicNumber::one(L, e));
    for c in &prep.distinguished[..lambda] {
        match c.l_valuation() {
            Valuation::Finite(v) => assert!(v >= 1, "non-leading coefficient is a unit"),
            Valuation::Infinite => {}
        }
    }
    // unit really is a unit
    assert_eq!(prep.unit.coeff(0).l_valuation(), Valuation::Finite(0));
    // preparation is canonical: running it again yields the same result
    assert_eq!(weierstrass_prepare(f).unwrap(), prep);
}

#[test]
fn weierstrass_roundtrip_seeded() {
    for seed in 0..60u64 {
        for e in 0..=2u32 {
            let f = seeded_series(seed * 3 + e as u64, L, e, 16);
            check_preparation(&f, e, &format!("seed {seed}, e={e}"));
        }
    }
}

#[test]
fn weierstrass_roundtrip_dense_inputs() {
    // Dense unstructured coefficients drive the exact solver through its
    // worst case; keep the precision moderate.
    use rand::{Rng, SeedableRng};
    for e in 0..=2u32 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7 + e as u64);
        let ell = uniformizer(L, e);
        let phi = phi_lpow(L, e) as usize;
        let coeffs: Vec<CyclotomicNumber> = (0..10)
            .map(|_| {
                let ints: Vec<qg_core::Rational> = (0..phi)
                    .map(|_| qg_core::cyclotomic::rat(rng.gen_range(-4i64..=4)))
                    .collect();
                CyclotomicNumber::from_coeffs(L, e, ints)
                    .mul(&ell.pow(rng.gen_range(0u64..3)))
            })
            .collect();
        let f = TruncatedSeries::new(L, e, coeffs).unwrap();
        if !f.is_zero() {
            check_preparation(&f, e, &format!("dense e={e}"));
        }
    }
}
