use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use compcodes::bch::{BchCode, BinaryCode};
use compcodes::bits::BitString;
use compcodes::channel::{corrupt, group_actions, random_plan, ErrorEvent, ErrorPlan};
use compcodes::compositions::{multi_compositions, prefix_suffix_compositions};
use compcodes::dominance::Realization;
use compcodes::grs::GrsParams;
use compcodes::multi::{phi_encode, PhiSpec};
use compcodes::oracle::{
    binary_codebook, brute_inverse_compositions, brute_nearest_codeword, grs_codebook, sweep, MessageMode,
    PlanMode, SweepMode,
};
use compcodes::single::{c4_decode, c4_encode, C2Params, C4Params};

#[test]
fn grs_agrees_with_nearest_codeword_within_radius() {
    let params = GrsParams::standard(5, 4, 2).unwrap();
    let book = grs_codebook(&params).unwrap();
    let mut checked = 0;
    for idx in 0..625u32 {
        let y: Vec<u64> = (0..4).map(|i| ((idx / 5u32.pow(i)) % 5) as u64).collect();
        let near = brute_nearest_codeword(&y, &book).unwrap();
        if near.distance <= 1 {
            assert_eq!(near.ties, 1);
            assert_eq!(params.decode(&y, None, &[]).unwrap().word, near.codeword);
            checked += 1;
        }
    }
    // 25 codewords, each with 1 + 4*4 words in its radius-1 ball
    assert_eq!(checked, 25 * 17);
}

#[test]
fn bch_agrees_with_nearest_codeword_on_random_words() {
    let code = BchCode::build(4, 2).unwrap();
    let book: Vec<Vec<u8>> = binary_codebook(&code).unwrap().into_iter().map(|c| c.into_vec()).collect();
    assert_eq!(book.len(), 128);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..1000 {
        let mut y = book[rng.random_range(0..book.len())].clone();
        for _ in 0..rng.random_range(0..=2) {
            let i = rng.random_range(0..15);
            y[i] ^= 1;
        }
        let near = brute_nearest_codeword(&y, &book).unwrap();
        let (got, _) = code.decode(&BitString::from_bits(y).unwrap()).unwrap();
        assert_eq!(got.as_slice(), near.codeword.as_slice());
    }
}

#[test]
fn c4_codeword_unique_among_inverses() {
    let params = C4Params::with_bch(3, 1, Realization::Enumerative).unwrap();
    let n = params.length();
    assert_eq!(n, 13);
    let code: Vec<BitString> = BitString::all(params.message_length())
        .map(|m| c4_encode(&m, &params).unwrap())
        .collect();
    for c in &code {
        let x = prefix_suffix_compositions(c).unwrap();
        for size in 1..=n {
            for action in group_actions(&x, size) {
                let y = corrupt(&x, &ErrorPlan::new(vec![ErrorEvent { size, action }])).unwrap();
                let inside: Vec<_> = brute_inverse_compositions(&y, n, 1, 1)
                    .unwrap()
                    .into_iter()
                    .filter(|t| code.contains(&t[0]))
                    .collect();
                assert_eq!(inside, vec![vec![c.clone()]]);
                assert_eq!(&c4_decode(&y, &params).unwrap().codeword, c);
            }
        }
    }
}

#[test]
fn phi_image_unique_among_inverses() {
    for (h, k) in [(2usize, 1usize), (2, 2), (2, 3), (3, 1)] {
        let spec = PhiSpec::new(h, k).unwrap();
        let n = spec.length();
        let images: HashSet<Vec<BitString>> = (0u64..1 << (h * k))
            .map(|v| {
                let zs: Vec<_> = (0..h)
                    .map(|i| BitString::from_uint(((v >> (i * k)) & ((1 << k) - 1)) as u128, k).unwrap())
                    .collect();
                phi_encode(&zs, &spec).unwrap()
            })
            .collect();
        assert_eq!(images.len(), 1 << (h * k), "φ injective at h={h} k={k}");
        for cs in &images {
            let x = multi_compositions(cs).unwrap();
            let found: Vec<_> = brute_inverse_compositions(&x, n, h, 0)
                .unwrap()
                .into_iter()
                .filter(|t| images.contains(t))
                .collect();
            assert_eq!(&found, &[cs.clone()], "h={h} k={k}");
        }
    }
}

#[test]
fn c2_exhaustive_sweep_recovers_everything() {
    let r = sweep(
        &C2Params::new(5, 4, 1).unwrap(),
        SweepMode {
            messages: MessageMode::All,
            plans: PlanMode::Exhaustive { max_events: 1 },
        },
    )
    .unwrap();
    assert_eq!(r.recovered, r.total);
    assert_eq!(r.total, r.recovered + r.failed + r.detected + r.silent);
}

#[test]
fn c4_budget_two_has_no_silent_mismatch() {
    let params = C4Params::with_bch(4, 1, Realization::Enumerative).unwrap();
    let r = sweep(
        &params,
        SweepMode {
            messages: MessageMode::All,
            plans: PlanMode::Random {
                count: 3000,
                max_events: 2,
                seed: 1,
            },
        },
    )
    .unwrap();
    assert_eq!(r.silent, 0, "{r}");
    assert_eq!(r.total, r.recovered + r.failed + r.detected);
    assert!(r.recovered > 0 && r.detected > 0);
}

#[test]
fn random_plans_replay_from_seed() {
    let c = BitString::from_uint(0b0010_1101_0111, 12).unwrap();
    let x = prefix_suffix_compositions(&c).unwrap();
    for seed in 0..50 {
        let a = random_plan(&x, 3, seed).unwrap();
        assert_eq!(a, random_plan(&x, 3, seed).unwrap());
        assert_eq!(a.len(), 3);
    }
}
