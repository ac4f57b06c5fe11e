use num_bigint::BigInt;
use proptest::prelude::*;

use pyramid_core::lattice::Parity;
use pyramid_core::pyramid::{apply_flip, empty_room, enumeration_window, increasing_flips, DimerConfig};
use pyramid_core::series::{Monomial, TruncatedSeries, Truncation, Vars};
use pyramid_core::shuffle::{delete_blocks, slide, unslide};

const D: u32 = 5;

fn series() -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec(((0i64..=5, 0i64..=5), -4i64..=4), 0..8).prop_map(|terms| {
        let terms = terms
            .into_iter()
            .filter(|((a, b), _)| a + b <= D as i64)
            .map(|((a, b), c)| (Monomial::new(a, b), BigInt::from(c)));
        TruncatedSeries::from_terms(Vars::Q0Q1, Truncation::TotalDegree(D), terms).unwrap()
    })
}

fn unit() -> impl Strategy<Value = TruncatedSeries> {
    (series(), prop_oneof![Just(1i64), Just(-1i64)]).prop_map(|(mut s, c)| {
        s.set_coeff(Monomial::ONE, BigInt::from(c)).unwrap();
        s
    })
}

/// A partition reached from the empty room by a random walk of increasing flips.
fn partition() -> impl Strategy<Value = DimerConfig> {
    (1u32..=3, proptest::collection::vec(any::<prop::sample::Index>(), 0..5)).prop_map(|(n, picks)| {
        let mut cfg = (*empty_room(n, enumeration_window(n, D)).unwrap()).clone();
        for pick in picks {
            let flips = increasing_flips(&cfg);
            if flips.is_empty() {
                break;
            }
            cfg = apply_flip(&cfg, flips[pick.index(flips.len())]);
        }
        cfg
    })
}

proptest! {
    #[test]
    fn multiplication_commutes_and_associates(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_by_a_unit_inverts_multiplication(a in series(), u in unit()) {
        prop_assert_eq!(a.mul(&u).unwrap().div_unit(&u).unwrap(), a.clone());
        prop_assert_eq!(a.div_unit(&u).unwrap().mul(&u).unwrap(), a);
    }

    #[test]
    fn sliding_twice_is_the_identity(cfg in partition()) {
        let def = delete_blocks(&cfg, Parity::Odd);
        let slid = slide(&def).unwrap();
        prop_assert_eq!(unslide(&slid).unwrap(), def.clone());
        prop_assert_eq!(def.missing_count(), slid.missing_count() + cfg.n() as usize);
    }

    #[test]
    fn config_json_round_trips(cfg in partition()) {
        let json = cfg.to_json().unwrap();
        let text = serde_json::to_string(&json).unwrap();
        let back = DimerConfig::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.canonical_key().unwrap(), cfg.canonical_key().unwrap());
        prop_assert_eq!(serde_json::to_string(&back.to_json().unwrap()).unwrap(), text);
    }
}
