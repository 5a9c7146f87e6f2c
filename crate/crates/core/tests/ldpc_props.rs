use bpa_sat::engine::{EngineConfig, Pair};
use bpa_sat::graph::{FactorGraph, ParityMatrix};
use bpa_sat::ldpc::{brute_force_ml, decode, update_parity_to_var, xor_check_to_var, DecodeOutcome, ParityInstance};
use proptest::prelude::*;

/// P(bit at 0 / 1 leaves the check satisfied) by enumerating the others.
fn xor_oracle(others: &[f64]) -> Pair {
    let mut even = 0.0;
    for bits in 0u32..1 << others.len() {
        let w: f64 = others.iter().enumerate().map(|(k, &p)| if bits >> k & 1 == 1 { p } else { 1.0 - p }).product();
        if bits.count_ones() % 2 == 0 {
            even += w;
        }
    }
    [even, 1.0 - even]
}

fn parity_matrix() -> impl Strategy<Value = ParityMatrix> {
    (2usize..9, 1usize..6).prop_flat_map(|(cols, rows)| {
        prop::collection::vec(prop::collection::btree_set(0..cols, 1..=cols.min(4)), rows).prop_map(move |rows| {
            ParityMatrix::from_rows(cols, rows.into_iter().map(|r| r.into_iter().collect()).collect()).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn xor_rule_matches_enumeration(others in prop::collection::vec(0.0f64..=1.0, 0..10)) {
        let got = xor_check_to_var(others.iter().map(|&p| [1.0 - p, p]));
        let want = xor_oracle(&others);
        prop_assert!((got[0] - want[0]).abs() <= 1e-12);
        prop_assert!((got[1] - want[1]).abs() <= 1e-12);
    }

    #[test]
    fn graph_messages_match_enumeration(h in parity_matrix(), seed in any::<u64>()) {
        let g = FactorGraph::from_parity_matrix(&h).unwrap();
        let mut s = seed | 1;
        let q: Vec<Pair> = (0..g.num_edges())
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let p = (s >> 11) as f64 / (1u64 << 53) as f64;
                [1.0 - p, p]
            })
            .collect();
        let r = update_parity_to_var(&g, &q);
        for check in 0..g.num_checks() {
            let ids: Vec<usize> = g.check_edges(check).collect();
            for &id in &ids {
                let others: Vec<f64> = ids.iter().filter(|&&o| o != id).map(|&o| q[o][1]).collect();
                let want = xor_oracle(&others);
                prop_assert!((r[id][0] - want[0]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn decoded_words_are_codewords(h in parity_matrix(), priors_seed in prop::collection::vec(0.01f64..0.99, 8)) {
        let priors = priors_seed[..h.num_cols()].to_vec();
        let inst = ParityInstance::new(FactorGraph::from_parity_matrix(&h).unwrap(), priors.clone()).unwrap();
        if let DecodeOutcome::Codeword { bits, .. } = decode(&inst, &EngineConfig::default()).unwrap() {
            prop_assert!(h.is_codeword(&bits));
            prop_assert!(inst.satisfies_checks(&bits));
        }
        let ml = brute_force_ml(&h, &priors).unwrap();
        prop_assert!(h.is_codeword(&ml));
    }

    #[test]
    fn repetition_code_is_complement_symmetric(p in prop::collection::vec(0.02f64..0.98, 3)) {
        let h = ParityMatrix::from_rows(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let g = || FactorGraph::from_parity_matrix(&h).unwrap();
        let flipped: Vec<f64> = p.iter().map(|x| 1.0 - x).collect();
        let config = EngineConfig::default();
        let a = decode(&ParityInstance::new(g(), p.clone()).unwrap(), &config).unwrap();
        let b = decode(&ParityInstance::new(g(), flipped).unwrap(), &config).unwrap();
        match (a, b) {
            (DecodeOutcome::Codeword { bits: x, iterations: i }, DecodeOutcome::Codeword { bits: y, iterations: j }) => {
                prop_assert_eq!(i, j);
                // both words are 000 or 111; the complement maps one to the other
                // unless the posterior sits exactly on the tie
                let x_ones = x.iter().filter(|&&b| b).count();
                let y_ones = y.iter().filter(|&&b| b).count();
                prop_assert!(x_ones + y_ones == 3 || x_ones == y_ones);
            }
            (a, b) => prop_assert!(false, "repetition code should always decode: {:?} {:?}", a, b),
        }
    }
}
