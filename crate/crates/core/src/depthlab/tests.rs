use super::*;
use crate::circuit::dense::exact_distribution;
use crate::sim::{run, NoiseProfile};
use crate::spectroscopy::{estimate_ht, hoeffding_halfwidth, trace_oracle, Algorithm, StatePrep};
use crate::stats::fit_line;

fn effective(alg: &str, n: usize, prep: &StatePrep) -> u64 {
    effective_depth(&build_named(alg, n, prep).unwrap()).effective_depth
}

#[test]
fn effective_never_exceeds_depth() {
    let prep = StatePrep::theta(0.7);
    for row in depth_table(2..=5, &prep).unwrap() {
        assert!(row.effective_depth <= row.depth, "{row:?}");
    }
}

#[test]
fn reset_free_builders_have_effective_equal_depth() {
    let prep = StatePrep::theta(0.7);
    for n in 2..=5 {
        for alg in [Algorithm::Ht, Algorithm::Tct] {
            let r = effective_depth(&alg.build(n, &prep).unwrap());
            assert_eq!(r.effective_depth, r.depth, "{alg} n={n}");
        }
    }
}

#[test]
fn frozen_default_values() {
    // Evaluated once from the builders' schedules under the default durations.
    let prep = StatePrep::theta(0.7);
    assert_eq!(effective("tct", 4, &prep), 15);
    assert_eq!(effective("qe-tct-6k", 4, &prep), 32);
    assert_eq!(effective("qe-tct-4k", 4, &prep), 49);
    let row = |alg: &str, n| build_named(alg, n, &prep).unwrap().makespan();
    assert_eq!([row("ht", 2), row("ht", 3)], [51, 96]);
    assert_eq!([row("qe-ht-4k", 2), row("qe-ht-4k", 3)], [51, 107]);
    assert_eq!([row("qe-tct-6k", 2), row("qe-tct-6k", 3)], [32, 49]);
}

#[test]
fn two_copy_family_effective_depth_constant_in_n() {
    let prep = StatePrep::theta(0.7);
    for alg in ["tct", "qe-tct-6k", "qe-tct-4k"] {
        let e: Vec<u64> = (2..=6).map(|n| effective(alg, n, &prep)).collect();
        assert!(e.windows(2).all(|w| w[0] == w[1]), "{alg}: {e:?}");
    }
    let d: Vec<u64> = (2..=6)
        .map(|n| build_named("qe-tct-6k", n, &prep).unwrap().makespan())
        .collect();
    let steps: Vec<u64> = d.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(steps.iter().all(|&s| s == steps[0] && s > 0), "{d:?}");
}

#[test]
fn qe_ht_effective_equals_depth() {
    let prep = StatePrep::theta(0.7);
    for alg in ["qe-ht-4k", "qe-ht-3k"] {
        for n in 2..=5 {
            let r = effective_depth(&build_named(alg, n, &prep).unwrap());
            assert_eq!(r.effective_depth, r.depth, "{alg} n={n}");
        }
    }
}

#[test]
fn effective_depth_scales_with_preparation_time() {
    // Slope of effective depth against the preparation makespan counts how
    // many preparations lie on the longest path.
    for (alg, want) in [("tct", 1.0), ("qe-tct-6k", 2.0), ("qe-tct-4k", 3.0)] {
        let (mut xs, mut ys) = (vec![], vec![]);
        for extra in 0..6 {
            let prep = StatePrep::theta(0.7).lengthened(extra);
            xs.push(prep.makespan(&Default::default()) as f64);
            ys.push(effective(alg, 4, &prep) as f64);
        }
        let fit = fit_line(&xs, &ys).unwrap();
        assert!((fit.slope - want).abs() < 1e-9, "{alg}: {}", fit.slope);
    }
}

#[test]
fn contrived_circuit_hides_its_depth_from_the_naive_metric() {
    let prep = StatePrep::theta(0.7);
    let mut naive = vec![];
    let mut depths = vec![];
    for n in 2..=7 {
        let c = build_contrived_qe_ht(n, &prep).unwrap();
        assert_eq!(c.width(), 6);
        let r = effective_depth(&c);
        assert_eq!(r.effective_depth, r.depth, "n={n}");
        depths.push(r.depth);
        let per_qubit = max_time_between_resets(&c);
        naive.push(CONTRIVED_ANCILLAS.iter().map(|&q| per_qubit[q]).max().unwrap());
    }
    assert!(depths.windows(2).all(|w| w[1] > w[0]));
    // The ancilla pair's reset-to-reset stretch stops growing once the
    // shuttling has started.
    assert!(naive[2..].windows(2).all(|w| w[0] == w[1]), "{naive:?}");
    assert!(naive[5] < depths[5] / 3);
}

#[test]
fn contrived_circuit_still_estimates_the_trace() {
    let prep = StatePrep::theta(0.9);
    for n in 2..=4 {
        let c = build_contrived_qe_ht(n, &prep).unwrap();
        let dist = exact_distribution(&c);
        let raw = dist.get("0").copied().unwrap_or(0.0) - dist.get("1").copied().unwrap_or(0.0);
        assert!((raw - trace_oracle(0.9, n as u32)).abs() < 1e-9, "n={n}");
    }
    let c = build_contrived_qe_ht(4, &prep).unwrap();
    let est = estimate_ht(&run(&c, &NoiseProfile::noiseless(), 20_000, 3).unwrap()).unwrap();
    assert!((est.value - trace_oracle(0.9, 4)).abs() < 3.0 * hoeffding_halfwidth(20_000));
    assert!(build_contrived_qe_ht(1, &prep).is_err());
}

#[test]
fn witness_path_is_consistent() {
    let prep = StatePrep::theta(0.7);
    for name in builder_names() {
        let c = build_named(name, 3, &prep).unwrap();
        let r = effective_depth(&c);
        let path = &r.witness_path;
        let first = path.first().unwrap();
        let last = path.last().unwrap();
        assert_eq!(
            last.start + last.duration - first.start,
            r.effective_depth,
            "{name}"
        );
        for w in path.windows(2) {
            assert!(w[1].start >= w[0].start + w[0].duration);
            assert!(w[0].qubits.iter().any(|q| w[1].qubits.contains(q)));
        }
        assert!(path.iter().all(|s| s.gate != "reset" && s.gate != "id"));
    }
}

#[test]
fn depth_csv_layout() {
    let rows = depth_table([2, 3], &StatePrep::theta(0.7)).unwrap();
    assert_eq!(rows.len(), 2 * builder_names().len());
    let mut buf = Vec::new();
    write_depth_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("algorithm,n,k,width,depth,effective_depth"));
    assert_eq!(lines.next(), Some("ht,2,1,5,51,51"));
}

#[test]
fn reversing_cnots_keeps_effective_depth() {
    use crate::circuit::{Circuit, GateKind};
    let prep = StatePrep::theta(0.7);
    for name in builder_names() {
        let c = build_named(name, 3, &prep).unwrap();
        let flipped: Vec<_> = c
            .instructions()
            .iter()
            .cloned()
            .map(|mut i| {
                if i.kind == GateKind::Cnot {
                    i.qubits.reverse();
                }
                i
            })
            .collect();
        let f = Circuit::from_instructions(
            c.num_qubits(),
            c.num_clbits(),
            flipped,
            c.discarded().clone(),
            &Default::default(),
        )
        .unwrap();
        assert_eq!(
            effective_depth(&f).effective_depth,
            effective_depth(&c).effective_depth,
            "{name}"
        );
    }
}

#[test]
fn family_ordering_of_effective_depth() {
    let prep = StatePrep::theta(0.7);
    for n in 2..=6 {
        let tct = effective("tct", n, &prep);
        let six = effective("qe-tct-6k", n, &prep);
        let four = effective("qe-tct-4k", n, &prep);
        assert!(tct <= six && six <= four, "n={n}");
        if n >= 4 {
            for ht in ["ht", "qe-ht-4k", "qe-ht-3k"] {
                assert!(effective(ht, n, &prep) > 2 * four, "{ht} n={n}");
            }
        }
    }
}
