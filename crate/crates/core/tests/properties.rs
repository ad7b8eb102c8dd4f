use kassign::completion::{complete_sequence, complete_sequence_with_report};
use kassign::instance::{self, generate, InstanceSpec, Objective};
use kassign::parametric::{self, GkState, PivotOutcome, RunOptions};
use kassign::{oracle, ssp, ExtReal, Rational, TermClass, WeightMatrix};
use proptest::prelude::*;

fn matrix(max_n: usize, lo: i64, hi: i64) -> impl Strategy<Value = WeightMatrix> {
    (1..=max_n, any::<u64>(), 0u8..=3).prop_map(move |(n, seed, d)| {
        generate(n, lo, hi, Rational::new(d as i128, 10), seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fullchar_is_canonical(w in matrix(7, -6, 6)) {
        prop_assert!(oracle::brute_force_fullchar(&w).unwrap().is_fcf());
    }

    #[test]
    fn oracle_sequence_is_concave(w in matrix(6, -6, 6)) {
        prop_assert!(oracle::solve_sequence(&w).unwrap().is_concave());
    }

    #[test]
    fn oracle_witnesses_can_be_nested(w in matrix(5, 0, 3)) {
        for k in 0..w.n() {
            prop_assert!(oracle::nested_witness_exists(&w, k).unwrap(), "k={}", k);
        }
    }

    #[test]
    fn ssp_matches_oracle(w in matrix(6, -5, 5)) {
        let seq = ssp::solve_sequence(&w, true).unwrap();
        prop_assert_eq!(&seq.omegas, &oracle::solve_sequence(&w).unwrap().omegas);
        seq.validate_matchings(&w).unwrap();
        prop_assert!(seq.is_concave());
    }

    #[test]
    fn ssp_witnesses_are_nested(w in matrix(30, -9, 9)) {
        let seq = ssp::solve_sequence(&w, true).unwrap();
        for k in 0..w.n() {
            if let (Some(a), Some(b)) = (&seq.matchings[k], &seq.matchings[k + 1]) {
                prop_assert!(a.differs_by_one_augmenting_path(b), "k={}", k);
            }
        }
    }

    #[test]
    fn gk_duality_and_events(w in matrix(6, -4, 4)) {
        let gk = parametric::run_with(&w, &RunOptions { trace: false, audit: true }).unwrap();
        let truth = oracle::brute_force_fullchar(&w).unwrap();
        let expected: Vec<ExtReal> = truth.canonicalize().roots().unwrap().expanded();
        let got: Vec<ExtReal> = gk
            .singular_values
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.value, s.multiplicity))
            .collect();
        let mut expected_desc = expected.clone();
        expected_desc.sort_by(|a, b| b.partial_cmp(a).unwrap());
        prop_assert_eq!(got, expected_desc);
        prop_assert_eq!(gk.singular_values.iter().map(|s| s.multiplicity).sum::<usize>(), w.n());
        prop_assert!(gk.events.windows(2).all(|e| e[0].value >= e[1].value));
        for (k, (omega, m)) in &gk.essential {
            prop_assert_eq!(*omega, truth.coeff_descending(*k));
            prop_assert_eq!(m.len(), *k);
            prop_assert_eq!(m.weight(&w), *omega);
        }
        let seq = oracle::solve_sequence(&w).unwrap();
        for (k, c) in seq.term_class.iter().enumerate() {
            if k > 0 && *c == TermClass::Essential && seq.omegas[k].is_finite() {
                prop_assert!(gk.essential.contains_key(&k), "essential k={} not reported", k);
            }
        }
    }

    #[test]
    fn gk_fill_matches_oracle(w in matrix(6, 0, 3)) {
        let gk = parametric::run(&w).unwrap();
        let (seq, rep) = complete_sequence_with_report(&w, &gk).unwrap();
        prop_assert_eq!(rep.violations(), 0);
        prop_assert_eq!(&seq.omegas, &oracle::solve_sequence(&w).unwrap().omegas);
        seq.validate_matchings(&w).unwrap();
    }

    #[test]
    fn parse_serialize_roundtrip(w in matrix(6, -50, 50), min in any::<bool>()) {
        let mut spec = instance::spec_from_matrix(&w);
        if min {
            spec.objective = Objective::Min;
        }
        let text = instance::serialize(&spec).unwrap();
        prop_assert_eq!(instance::parse(&text).unwrap(), spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gk_fill_matches_ssp_up_to_40(w in matrix(40, 0, 4)) {
        let a = complete_sequence(&w, &parametric::run(&w).unwrap()).unwrap();
        let b = ssp::solve_sequence(&w, false).unwrap();
        prop_assert_eq!(&a.omegas, &b.omegas);
        a.validate_matchings(&w).unwrap();
    }

    #[test]
    fn gk_tree_audit_every_step(w in matrix(12, -3, 3)) {
        let mut st = GkState::init(&w).unwrap();
        st.audit().unwrap();
        let mut last = None;
        loop {
            match st.pivot_step().unwrap() {
                PivotOutcome::Exhausted => break,
                PivotOutcome::TreeUpdated { key, .. } => {
                    prop_assert!(last.is_none_or(|b| key <= b));
                    last = Some(key);
                }
                PivotOutcome::CycleFound(c) => {
                    prop_assert!(last.is_none_or(|b| c.bound <= b));
                    last = Some(c.bound);
                    st.apply_cycle(&c).unwrap();
                }
            }
            st.audit().unwrap();
        }
    }

    #[test]
    fn min_transform_matches_direct_minimum(rows in 1usize..=5, cols in 1usize..=5, seed in any::<u64>()) {
        let w = generate(rows.max(cols), -5, 5, Rational::new(1, 5), seed).unwrap();
        let spec = InstanceSpec {
            rows,
            cols,
            objective: Objective::Min,
            entries: (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| w.get(i, j).finite()).collect(),
        };
        let (norm, t) = instance::normalize(&spec);
        let seq = oracle::solve_sequence(&norm).unwrap();
        for k in 0..=norm.n() {
            let direct = direct_min(&spec, k);
            prop_assert_eq!(t.report(seq.omegas[k]).to_string(), direct);
        }
    }
}

/// Minimum over k-matchings of the rectangular spec, by enumeration.
fn direct_min(spec: &InstanceSpec, k: usize) -> String {
    fn go(spec: &InstanceSpec, row: usize, k: usize, used: &mut Vec<bool>, acc: Rational, best: &mut Option<Rational>) {
        if k == 0 {
            if best.is_none_or(|b| acc < b) {
                *best = Some(acc);
            }
            return;
        }
        if row == spec.rows {
            return;
        }
        go(spec, row + 1, k, used, acc, best);
        for j in 0..spec.cols {
            if let (false, Some(v)) = (used[j], spec.get(row, j)) {
                used[j] = true;
                go(spec, row + 1, k - 1, used, acc + v, best);
                used[j] = false;
            }
        }
    }
    let mut best = None;
    go(spec, 0, k, &mut vec![false; spec.cols], Rational::from_integer(0), &mut best);
    best.map_or("inf".to_string(), |b| kassign::maxplus::fmt_rational(&b))
}

#[test]
fn zero_matrices_report_only_full_assignment() {
    for n in [1usize, 2, 3, 5, 8, 13, 30] {
        let w = WeightMatrix::zeros(n);
        let gk = parametric::run(&w).unwrap();
        assert_eq!(gk.essential.keys().copied().collect::<Vec<_>>(), vec![n]);
        let seq = complete_sequence(&w, &gk).unwrap();
        assert!(seq.omegas.iter().all(|o| *o == ExtReal::int(0)));
    }
}

#[test]
fn small_ranges_leave_gaps() {
    let w = generate(40, 0, 3, Rational::from_integer(0), 11).unwrap();
    let gk = parametric::run(&w).unwrap();
    assert!(gk.essential.len() < 20, "{} indices reported", gk.essential.len());
}
