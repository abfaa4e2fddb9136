use proptest::prelude::*;

use kangaroo_core::blowup::{transform_poly, weak_transform};
use kangaroo_core::kangaroo::ceiling_equivalence_check;
use kangaroo_core::zwickel::{compositions, upper_zwickel, y_star, ZwickelContext};
use kangaroo_core::{binom_mod_p, parse_in, shade, BlowupOutcome, BlowupStep, InseparableForm, Order, Poly, Prime, Ring, Shade, Substitution};

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn ring(p: u64) -> Ring {
    Ring::new(Prime::new(p).unwrap(), &["y", "z", "w"])
}

fn poly_in(r: Ring, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0..=max_exp, 0..=max_exp, 0..=max_exp), -20i64..20), 0..max_terms)
        .prop_map(move |ts| r.from_terms(ts.into_iter().map(|((a, b, c), v)| (vec![a, b, c], v))).unwrap())
}

fn prime_and_polys(n: usize) -> impl Strategy<Value = (u64, Vec<Poly>)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(move |p| (Just(p), prop::collection::vec(poly_in(ring(p), 6, 4), n)))
}

proptest! {
    #[test]
    fn ring_laws((_, v) in prime_and_polys(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a - a).is_zero());
        prop_assert_eq!(&(a + b) - b, a.clone());
    }

    #[test]
    fn substitution_is_a_homomorphism((_, v) in prime_and_polys(5)) {
        let r = v[0].ring().clone();
        let s = Substitution::new(&r, vec![v[2].clone(), v[3].clone(), v[4].clone()]).unwrap();
        let (a, b) = (&v[0], &v[1]);
        prop_assert_eq!((a * b).substitute(&s).unwrap(), &a.substitute(&s).unwrap() * &b.substitute(&s).unwrap());
        prop_assert_eq!((a + b).substitute(&s).unwrap(), &a.substitute(&s).unwrap() + &b.substitute(&s).unwrap());
    }

    #[test]
    fn strip_is_idempotent_and_reconstructs((p, v) in prime_and_polys(1), e in 1u32..3) {
        let c = p.pow(e);
        let f = &v[0];
        let (rest, w) = f.strip_c_power_monomials(c).unwrap();
        prop_assert_eq!(&(&rest + &w.pow(c)), f);
        let (again, w2) = rest.strip_c_power_monomials(c).unwrap();
        prop_assert_eq!(again, rest);
        prop_assert!(w2.is_zero());
    }

    #[test]
    fn order_is_additive((_, v) in prime_and_polys(2)) {
        let (a, b) = (&v[0], &v[1]);
        let want = match (a.order(), b.order()) {
            (Order::Finite(x), Order::Finite(y)) => Order::Finite(x + y),
            _ => Order::Infinite,
        };
        prop_assert_eq!((a * b).order(), want);
    }

    #[test]
    fn frobenius((p, v) in prime_and_polys(2)) {
        let (a, b) = (&v[0], &v[1]);
        prop_assert_eq!((a + b).pow(p), &a.pow(p) + &b.pow(p));
        // f^p has every exponent divisible by p
        prop_assert!(a.pow(p).terms().all(|(e, _)| e.iter().all(|&k| k as u64 % p == 0)));
    }

    #[test]
    fn pascal_rule(n in -40i64..40, k in 1u64..30, p in prop::sample::select(PRIMES.to_vec())) {
        let pr = Prime::new(p).unwrap();
        prop_assert_eq!(binom_mod_p(n, k, pr), (binom_mod_p(n - 1, k, pr) + binom_mod_p(n - 1, k - 1, pr)) % p);
    }

    #[test]
    fn display_round_trips((_, v) in prime_and_polys(1)) {
        let f = &v[0];
        prop_assert_eq!(&parse_in(&f.to_string(), f.ring()).unwrap(), f);
    }

    /// The shade witness realizes the coordinate change and the residual carries the divisor.
    #[test]
    fn shade_identities(p in prop::sample::select(vec![2u64, 3]), ts in prop::collection::vec(((0u32..6, 0u32..6), 1i64..5), 1..5), ry in 0u32..3, rz in 0u32..3) {
        let r2 = Ring::new(Prime::new(p).unwrap(), &["y", "z"]);
        let g = r2.from_terms(ts.into_iter().map(|((a, b), c)| (vec![a, b], c))).unwrap();
        let f = g.shift(&[ry, rz]);
        let Ok(form) = InseparableForm::new(1, f.clone(), vec![ry, rz]) else { return Ok(()) };
        let s = shade(&form).unwrap();
        prop_assert_eq!(&(&f - &s.witness.pow(p)), &s.normalized);
        if let Shade::Finite(k) = s.shade {
            prop_assert_eq!(s.residual.shift(&[ry, rz]), s.normalized.clone());
            prop_assert_eq!(s.normalized.order(), Order::Finite(k + (ry + rz) as u64));
        }
    }

    /// Equiconstant blowups keep the order and never raise the shade beyond p^(e-1).
    #[test]
    fn blowup_respects_bound(p in prop::sample::select(vec![2u64, 3]), ts in prop::collection::vec(((0u32..7, 0u32..7), 1i64..5), 1..5), t in 0u64..3, chart in 0usize..2) {
        let r2 = Ring::new(Prime::new(p).unwrap(), &["y", "z"]);
        let f = r2.from_terms(ts.into_iter().map(|((a, b), c)| (vec![a, b], c))).unwrap();
        let Ok(form) = InseparableForm::new(1, f, vec![0, 0]) else { return Ok(()) };
        let Shade::Finite(before) = shade(&form).unwrap().shade else { return Ok(()) };
        let mut tr = vec![t % p; 2];
        tr[chart] = 0;
        let step = BlowupStep::y(chart, tr).unwrap();
        if let BlowupOutcome::Equiconstant(g) = weak_transform(&form, &step).unwrap() {
            prop_assert_eq!(g.order(), Order::Finite(p));
            if let Shade::Finite(after) = shade(&g).unwrap().shade {
                prop_assert!(after <= before + 1);
            }
        }
        // the constant term is an x-translation and never survives
        prop_assert!(transform_poly(form.f(), p, &step).unwrap().constant_term().is_zero());
    }

    #[test]
    fn ceiling_equivalence_random(r in prop::collection::vec(0u32..100, 1..6), c in 2u64..12) {
        prop_assert!(ceiling_equivalence_check(&r, c).unwrap());
    }

    #[test]
    fn zwickel_slices_match(m in 1usize..4, c in 1u32..5, w in 1u32..4, j in 0usize..3, seed in 0u64..1000) {
        let deg = w * c;
        let j = j % m;
        let qs: Vec<Vec<u32>> = (0..=deg).flat_map(|s| compositions(s, m)).collect();
        let q = qs[(seed as usize) % qs.len()].clone();
        let h = vec![0; compositions(w, m).len()];
        let ctx = ZwickelContext::new(Prime::new(3).unwrap(), m, w, deg, q, j, h).unwrap();
        let (z, y) = (upper_zwickel(&ctx), y_star(&ctx));
        for k in 0..=c {
            prop_assert_eq!(z.iter().filter(|p| p.k == k).count(), y.iter().filter(|p| p.k == k).count());
        }
    }
}
