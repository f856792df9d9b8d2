use proptest::collection::vec;
use proptest::prelude::*;

use compcodes::bch::{BchCode, BinaryCode};
use compcodes::bits::BitString;
use compcodes::channel::{corrupt, random_plan, ErrorPlan};
use compcodes::compositions::{distance, multi_compositions, normalize, prefix_suffix_compositions, CompositionMultiset};
use compcodes::dominance::{is_suffix_dominant, is_suffix_dominant_full, DominantCode, Realization};
use compcodes::grs::GrsParams;
use compcodes::multi::{dominance_chain_check, info_positions, multi_decode_free, phi_encode, PhiSpec};
use compcodes::single::{c3_decode, c3_encode, c4_decode, c4_encode, mass_diff_string, C3Params, C4Params};

fn bitstring(len: impl Into<proptest::collection::SizeRange>) -> impl Strategy<Value = BitString> {
    vec(0u8..=1, len).prop_map(|v| BitString::from_bits(v).unwrap())
}

fn tuple(h: usize, k: usize) -> impl Strategy<Value = Vec<BitString>> {
    vec(bitstring(k), h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn phi_chain_and_round_trip((h, k, zs) in (1usize..=4, 1usize..=40).prop_flat_map(|(h, k)| (Just(h), Just(k), tuple(h, k)))) {
        let spec = PhiSpec::new(h, k).unwrap();
        let cs = phi_encode(&zs, &spec).unwrap();
        prop_assert!(cs.iter().all(|c| c.len() == (h + 1) * k));
        prop_assert!(dominance_chain_check(&cs));
        let pos = info_positions(h, k);
        for (c, z) in cs.iter().zip(&zs) {
            let sampled: Vec<u8> = pos.iter().map(|&p| c.get(p)).collect();
            prop_assert_eq!(sampled.as_slice(), z.as_slice());
        }
        let x = multi_compositions(&cs).unwrap();
        prop_assert_eq!(multi_decode_free(&x, &spec).unwrap().messages, zs);
    }

    #[test]
    fn phi_of_identical_strings(h in 2usize..=4, z in bitstring(1usize..=30)) {
        let spec = PhiSpec::new(h, z.len()).unwrap();
        let zs = vec![z; h];
        let x = multi_compositions(&phi_encode(&zs, &spec).unwrap()).unwrap();
        prop_assert_eq!(multi_decode_free(&x, &spec).unwrap().messages, zs);
    }

    #[test]
    fn half_range_dominance_matches_full(c in bitstring(1usize..=64)) {
        prop_assert_eq!(is_suffix_dominant(&c), is_suffix_dominant_full(&c));
    }

    #[test]
    fn reversal_invariance_and_metric(a in bitstring(10), b in bitstring(10), c in bitstring(10)) {
        let [ma, mb, mc] = [&a, &b, &c].map(|s| prefix_suffix_compositions(s).unwrap());
        prop_assert_eq!(&ma, &prefix_suffix_compositions(&a.reversed()).unwrap());
        let ab = distance(&ma, &mb).unwrap();
        prop_assert_eq!(ab, distance(&mb, &ma).unwrap());
        prop_assert!(distance(&ma, &mc).unwrap() <= ab + distance(&mb, &mc).unwrap());
    }

    #[test]
    fn mass_difference_within_twice_the_errors(c in bitstring(1usize..=60).prop_filter("dominant", is_suffix_dominant), t in 0usize..=3, seed: u64) {
        let x = prefix_suffix_compositions(&c).unwrap();
        let plan = random_plan(&x, t.min(c.len()), seed).unwrap();
        let y = corrupt(&x, &plan).unwrap();
        prop_assert_eq!(distance(&x, &y).unwrap(), plan.len());
        let d = mass_diff_string(&normalize(&y, 1)).hamming_distance(&c);
        prop_assert!(d <= 2 * plan.len(), "{} bit errors from {} groups", d, plan.len());
    }

    #[test]
    fn normalized_view_has_2h_slots(c in bitstring(1usize..=30), h in 1usize..=3, seed: u64) {
        let cs = vec![c; h];
        let x = multi_compositions(&cs).unwrap();
        let y = corrupt(&x, &random_plan(&x, 2.min(x.len()), seed).unwrap()).unwrap();
        let view = normalize(&y, h);
        for j in 1..=y.len() {
            prop_assert_eq!(view.masses(j).len(), 2 * h);
            prop_assert!(view.masses(j).windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(view.is_erased(j), y.group(j).len() != 2 * h);
        }
        prop_assert_eq!(normalize(&view.to_multiset(), h).to_multiset(), view.to_multiset());
    }

    #[test]
    fn multiset_and_plan_text_round_trip(c in bitstring(1usize..=20), t in 0usize..=3, seed: u64) {
        let x = prefix_suffix_compositions(&c).unwrap();
        let plan = random_plan(&x, t.min(c.len()), seed).unwrap();
        let y = corrupt(&x, &plan).unwrap();
        prop_assert_eq!(&y.to_string().parse::<CompositionMultiset>().unwrap(), &y);
        prop_assert_eq!(&plan.to_string().parse::<ErrorPlan>().unwrap(), &plan);
    }

    #[test]
    fn enumerative_dominant_round_trip(n1 in 1usize..=100, seed: u64) {
        let code = DominantCode::new(n1, Realization::Enumerative).unwrap();
        let k = code.message_length();
        let m = BitString::from_bits((0..k).map(|i| ((seed >> (i % 64)) & 1) as u8 ^ (i % 3 == 0) as u8).collect()).unwrap();
        let c = code.encode(&m).unwrap();
        prop_assert_eq!(c.len(), n1);
        prop_assert!(is_suffix_dominant(&c));
        prop_assert_eq!(code.decode(&c).unwrap(), m);
    }

    #[test]
    fn interleave_dominant_round_trip(m in bitstring(1usize..=40)) {
        let code = DominantCode::new(2 * m.len(), Realization::Interleave).unwrap();
        let c = code.encode(&m).unwrap();
        prop_assert!(is_suffix_dominant(&c));
        prop_assert_eq!(code.decode(&c).unwrap(), m);
    }

    #[test]
    fn grs_corrects_errors_and_erasures(msg in vec(0u64..31, 26), errs in vec((0usize..30, 1u64..31), 0..=2), erase in vec(0usize..30, 0..=4)) {
        let params = GrsParams::standard(31, 30, 4).unwrap();
        let c = params.encode(&msg).unwrap();
        let mut y = c.clone();
        let mut erasures: Vec<usize> = erase;
        erasures.sort_unstable();
        erasures.dedup();
        let mut hit = std::collections::BTreeSet::new();
        for (i, e) in errs {
            if !erasures.contains(&i) {
                hit.insert(i);
                y[i] = (c[i] + e) % 31;
            }
        }
        for &i in &erasures {
            y[i] = (y[i] + 7) % 31;
        }
        prop_assume!(2 * hit.len() + erasures.len() <= 4);
        prop_assert_eq!(params.decode(&y, None, &erasures).unwrap().word, c);
    }

    #[test]
    fn bch_corrects_up_to_radius(m in 4u32..=7, t in 1usize..=3, seed: u64, flips in vec(0usize..127, 0..=3)) {
        let code = BchCode::build_relaxed(m, t).unwrap();
        let k = code.dimension();
        let msg = BitString::from_bits((0..k).map(|i| ((seed >> (i % 64)) & 1) as u8).collect()).unwrap();
        let c = code.encode(&msg).unwrap();
        prop_assert!(code.is_codeword(&c));
        let mut v = c.as_slice().to_vec();
        let mut flipped = std::collections::BTreeSet::new();
        for f in flips.into_iter().take(t) {
            flipped.insert(f % v.len());
        }
        for &f in &flipped {
            v[f] ^= 1;
        }
        let (got, back) = code.decode(&BitString::from_bits(v).unwrap()).unwrap();
        prop_assert_eq!(got, c);
        prop_assert_eq!(back, msg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn c4_recovers_within_budget(m in bitstring(64usize), seed: u64) {
        let params = C4Params::with_bch(5, 1, Realization::Enumerative).unwrap();
        let msg = m.prefix(params.message_length());
        let c = c4_encode(&msg, &params).unwrap();
        prop_assert!(is_suffix_dominant(&c));
        let x = prefix_suffix_compositions(&c).unwrap();
        let y = corrupt(&x, &random_plan(&x, 1, seed).unwrap()).unwrap();
        prop_assert_eq!(c4_decode(&y, &params).unwrap().message, msg);
    }

    #[test]
    fn c3_recovers_within_budget(bits in bitstring(28usize), t in 0usize..=2, seed: u64) {
        let params = C3Params::new(30, 63, 2, 31, Realization::Enumerative).unwrap();
        let c = c3_encode(&bits, &params).unwrap();
        prop_assert!(is_suffix_dominant(&c));
        let x = prefix_suffix_compositions(&c).unwrap();
        let y = corrupt(&x, &random_plan(&x, t, seed).unwrap()).unwrap();
        let r = c3_decode(&y, &params).unwrap();
        prop_assert_eq!(r.message, bits);
        prop_assert_eq!(r.codeword, c);
    }
}
