use hbtfisher_core::fisher::{
    dnormalized_event_distribution_dd, fisher_information, fisher_sweep,
    normalized_event_distribution,
};
use hbtfisher_core::quad::integrate;
use hbtfisher_core::{
    DetectionModel, Event, EventSet, ExperimentConfig, GaussianPsfPair, Routing, SweepAxis,
};
use proptest::prelude::*;

fn cfg(d: f64, eta: f64, set: EventSet, routing: Routing) -> ExperimentConfig {
    ExperimentConfig::new(
        GaussianPsfPair::new(1.0, d).unwrap(),
        DetectionModel::new(eta, set, routing).unwrap(),
        1,
    )
    .unwrap()
}

#[test]
fn distributions_sum_to_one() {
    for set in [EventSet::AB, EventSet::ABG] {
        for routing in [Routing::PaperModel, Routing::ClassicalRouting] {
            for (d, eta) in [(0.0, 1.0), (0.1, 0.1), (1.0, 0.5), (3.0, 0.9), (6.0, 0.01)] {
                let c = cfg(d, eta, set, routing);
                let (lo, hi) = c.pair.domain();
                let total: f64 = Event::ALL
                    .iter()
                    .map(|&ev| {
                        integrate(
                            |x| normalized_event_distribution(x, ev, &c).unwrap(),
                            lo,
                            hi,
                            1e-13,
                            500,
                        )
                        .value
                    })
                    .sum();
                assert!((total - 1.0).abs() < 1e-9, "{set:?} {routing:?} d={d} eta={eta}");
            }
        }
    }
}

#[test]
fn coincidences_never_hurt_and_efficiency_helps() {
    let etas: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    for d in [0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        let abg = fisher_sweep(&cfg(d, 1.0, EventSet::ABG, Routing::PaperModel), SweepAxis::Eta, &etas)
            .unwrap();
        let ab = fisher_sweep(&cfg(d, 1.0, EventSet::AB, Routing::PaperModel), SweepAxis::Eta, &etas)
            .unwrap();
        for ((_, g), (_, s)) in abg.iter().zip(&ab) {
            assert!(g.fisher >= s.fisher && s.fisher >= 0.0, "d={d}");
        }
        for rows in [&abg, &ab] {
            for w in rows.windows(2) {
                assert!(w[1].1.fisher >= w[0].1.fisher, "d={d} eta={}", w[1].0);
            }
        }
    }
}

#[test]
fn information_grows_with_separation() {
    let ds: Vec<f64> = (1..=30).map(|i| i as f64 / 10.0).collect();
    for set in [EventSet::AB, EventSet::ABG] {
        let rows = fisher_sweep(&cfg(1.0, 1.0, set, Routing::PaperModel), SweepAxis::D, &ds).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].1.fisher > w[0].1.fisher, "{set:?} d={}", w[1].0);
        }
    }
}

#[test]
fn sweep_rows_equal_single_calls() {
    let t = cfg(1.0, 0.6, EventSet::ABG, Routing::PaperModel);
    let rows = fisher_sweep(&t, SweepAxis::D, &[0.2, 1.7, 0.9]).unwrap();
    let order: Vec<f64> = rows.iter().map(|r| r.0).collect();
    assert_eq!(order, [0.2, 1.7, 0.9]);
    for (d, r) in rows {
        assert_eq!(r, fisher_information(&cfg(d, 0.6, EventSet::ABG, Routing::PaperModel)).unwrap());
    }
}

#[test]
fn near_blind_detectors_carry_no_information() {
    let low = fisher_information(&cfg(1.0, 1e-3, EventSet::ABG, Routing::PaperModel)).unwrap();
    let full = fisher_information(&cfg(1.0, 1.0, EventSet::ABG, Routing::PaperModel)).unwrap();
    assert!(low.fisher < 1e-2 * full.fisher);
}

proptest! {
    #[test]
    fn quotient_rule_matches_finite_differences(
        x in -3.0..5.0f64, d in 0.05..3.0f64, eta in 0.1..1.0f64, with_gamma in any::<bool>()
    ) {
        let set = if with_gamma { EventSet::ABG } else { EventSet::AB };
        let c = cfg(d, eta, set, Routing::PaperModel);
        for &ev in set.events() {
            let analytic = dnormalized_event_distribution_dd(x, ev, &c).unwrap();
            let at = |dd: f64| {
                normalized_event_distribution(x, ev, &cfg(dd, eta, set, Routing::PaperModel)).unwrap()
            };
            let h = 1e-5;
            let fd = (at(d + h) - at(d - h)) / (2.0 * h);
            prop_assert!((fd - analytic).abs() <= 1e-5 * analytic.abs().max(1e-5), "{:?} {} {}", ev, fd, analytic);
        }
    }
}
