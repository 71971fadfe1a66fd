use fci_sparse::coloring::{col_oracle, decompose, Colorer, Scheme};
use fci_sparse::config_space::{neighbors, rank, unrank, Configuration, Rank, SpaceParams};
use fci_sparse::evolve::{apply_one_sparse, pair_block, rotation_sequence, Polar, StateVector};
use fci_sparse::integrals::{synthetic_table, SyntheticKind};
use fci_sparse::slater::{build_ci_matrix, matrix_element, read_triplets, SignMode};
use num_complex::Complex64;
use proptest::prelude::*;

/// A space and a configuration occupying the first `n_e` orbitals of a shuffled order.
fn space_and_config(max_n: u32) -> impl Strategy<Value = (SpaceParams, Configuration)> {
    (1u32..=max_n).prop_flat_map(|n| {
        (0..=n, Just(n), any::<u64>()).prop_map(|(e, n, seed)| {
            let mut order: Vec<u32> = (0..n).collect();
            let mut s = seed;
            for i in (1..order.len()).rev() {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let bits = order[..e as usize].iter().fold(0u64, |b, &o| b | 1 << o);
            (SpaceParams::new(n, e).unwrap(), Configuration(bits))
        })
    })
}

proptest! {
    #[test]
    fn rank_unrank_round_trip((p, x) in space_and_config(40)) {
        let q = rank(x, p).unwrap();
        prop_assert!(q.0 < p.dimension().unwrap());
        prop_assert_eq!(unrank(q, p).unwrap(), x);
    }

    #[test]
    fn rank_is_monotone((p, x) in space_and_config(40), seed in any::<u64>()) {
        let dim = p.dimension().unwrap();
        let y = unrank(Rank(seed % dim), p).unwrap();
        prop_assert_eq!(x < y, rank(x, p).unwrap() < rank(y, p).unwrap());
    }

    #[test]
    fn hamiltonian_is_symmetric(seed in any::<u64>(), e in 0u32..=6, a in any::<u64>(), b in any::<u64>()) {
        let p = SpaceParams::new(6, e).unwrap();
        let t = synthetic_table(SyntheticKind::RandomSymmetric, seed, 6).unwrap();
        let dim = p.dimension().unwrap();
        let x = unrank(Rank(a % dim), p).unwrap();
        let y = unrank(Rank(b % dim), p).unwrap();
        for mode in [SignMode::Fermionic, SignMode::NoParity] {
            prop_assert_eq!(matrix_element(x, y, &t, mode).unwrap(), matrix_element(y, x, &t, mode).unwrap());
        }
    }

    #[test]
    fn integral_partners_agree(seed in any::<u64>(), idx in proptest::array::uniform4(1u32..=6)) {
        let t = synthetic_table(SyntheticKind::RandomSymmetric, seed, 6).unwrap();
        let [p, q, r, s] = idx;
        let v = t.two_electron(p, q, r, s).unwrap();
        for (a, b, c, d) in [(q, p, s, r), (r, s, p, q), (s, r, q, p), (r, q, p, s), (p, s, r, q), (s, p, q, r), (q, r, s, p)] {
            prop_assert_eq!(t.two_electron(a, b, c, d).unwrap(), v);
        }
    }

    #[test]
    fn col_oracle_is_an_involution((p, x) in space_and_config(10), pick in any::<usize>(), degree in 1u32..=2, by_descriptor in any::<bool>()) {
        let ys = neighbors(x, degree, p);
        prop_assume!(!ys.is_empty());
        let y = ys[pick % ys.len()];
        let scheme = if by_descriptor { Scheme::Descriptor } else { Scheme::PairLabel };
        let c = Colorer::new(p, scheme).color(x, y).unwrap();
        prop_assert_eq!(col_oracle(x, c, p).unwrap(), Some(y));
        prop_assert_eq!(col_oracle(y, c, p).unwrap(), Some(x));
    }

    #[test]
    fn rotation_matches_closed_form(h in 0.0f64..10.0, s in 0u8..=1, dt in -3.0f64..3.0) {
        let d = rotation_sequence(h, s, dt).distance_up_to_phase(&pair_block(Polar { sign: s, magnitude: h }, dt));
        prop_assert!(d < 1e-12, "deviation {d:e}");
    }

    #[test]
    fn one_sparse_steps_preserve_norm(seed in any::<u64>(), dt in -2.0f64..2.0, by_descriptor in any::<bool>()) {
        let t = synthetic_table(SyntheticKind::RandomSymmetric, seed, 6).unwrap();
        let h = build_ci_matrix(SpaceParams::new(6, 3).unwrap(), &t, SignMode::Fermionic).unwrap();
        let scheme = if by_descriptor { Scheme::Descriptor } else { Scheme::PairLabel };
        let mut psi = StateVector::random(20, seed);
        for term in decompose(&h, scheme).unwrap() {
            let before = psi.norm();
            apply_one_sparse(&term, dt, &mut psi).unwrap();
            prop_assert!((psi.norm() - before).abs() < 1e-12);
        }
    }

    #[test]
    fn state_text_round_trips(values in proptest::collection::vec((any::<f64>(), any::<f64>()), 1..40)) {
        prop_assume!(values.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
        let psi = StateVector::from_amplitudes(values.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
        let mut buf = Vec::new();
        psi.write(&mut buf).unwrap();
        prop_assert_eq!(StateVector::read(buf.as_slice(), psi.dim()).unwrap(), psi);
    }

    #[test]
    fn triplets_round_trip(seed in any::<u64>(), e in 0u32..=6) {
        let p = SpaceParams::new(6, e).unwrap();
        let t = synthetic_table(SyntheticKind::RandomSymmetric, seed, 6).unwrap();
        let h = build_ci_matrix(p, &t, SignMode::Fermionic).unwrap();
        let mut buf = Vec::new();
        h.write_triplets(&mut buf).unwrap();
        let back = read_triplets(buf.as_slice()).unwrap();
        prop_assert_eq!((back.n_orbitals, back.n_electrons, back.dimension), (6, e, p.dimension().unwrap()));
        prop_assert_eq!(back.entries.as_slice(), h.triplets());
    }
}
