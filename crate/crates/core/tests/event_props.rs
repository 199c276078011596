use hbtfisher_core::event::{event_flux, event_intensities};
use hbtfisher_core::quad::integrate;
use hbtfisher_core::{DetectionModel, Event, EventSet, GaussianPsfPair, Routing};
use proptest::prelude::*;

const ROUTINGS: [Routing; 2] = [Routing::PaperModel, Routing::ClassicalRouting];

fn model(eta: f64, routing: Routing) -> DetectionModel {
    DetectionModel::new(eta, EventSet::ABG, routing).unwrap()
}

#[test]
fn probabilities_stay_in_unit_interval() {
    for routing in ROUTINGS {
        for ei in 0..=10 {
            let eta = ei as f64 / 10.0;
            for di in 0..=10 {
                let pair = GaussianPsfPair::new(1.0, di as f64 * 0.5).unwrap();
                for xi in -40..=40 {
                    let x = xi as f64 * 0.25;
                    let e = event_intensities(x, &pair, &model(eta, routing)).unwrap();
                    for p in [e.p_alpha, e.p_beta, e.p_gamma] {
                        assert!((0.0..=1.0).contains(&p), "{routing:?} eta={eta} x={x}");
                    }
                    assert_eq!(e.p_alpha.to_bits(), e.p_beta.to_bits());
                }
            }
        }
    }
}

#[test]
fn intensities_grow_with_efficiency() {
    for routing in ROUTINGS {
        for di in 0..=10 {
            let pair = GaussianPsfPair::new(1.0, di as f64 * 0.5).unwrap();
            for xi in -12..=24 {
                let x = xi as f64 * 0.25;
                let at = |eta: f64| event_intensities(x, &pair, &model(eta, routing)).unwrap();
                for ei in 0..10 {
                    let (lo, hi) = (at(ei as f64 / 10.0), at((ei + 1) as f64 / 10.0));
                    assert!(hi.p_alpha > lo.p_alpha, "{routing:?} x={x} d={}", pair.d());
                    if pair.psf_a(x) * pair.psf_b(x) > 0.0 {
                        assert!(hi.p_gamma > lo.p_gamma);
                    }
                }
            }
        }
    }
}

#[test]
fn flux_matches_quadrature() {
    for routing in ROUTINGS {
        for (d, eta) in [(0.0, 1.0), (0.5, 0.3), (2.0, 0.8), (4.0, 0.05)] {
            let pair = GaussianPsfPair::new(1.0, d).unwrap();
            let m = model(eta, routing);
            let flux = event_flux(&pair, &m).unwrap();
            let (lo, hi) = pair.domain();
            for ev in Event::ALL {
                let q = integrate(
                    |x| event_intensities(x, &pair, &m).unwrap().probability(ev),
                    lo,
                    hi,
                    1e-13,
                    500,
                );
                assert!((q.value - flux.get(ev)).abs() < 1e-10, "{routing:?} {ev:?} d={d}");
            }
        }
    }
}

fn fd_in_d(x: f64, d: f64, sigma: f64, m: &DetectionModel, ev: Event) -> f64 {
    let p = |dd: f64| {
        event_intensities(x, &GaussianPsfPair::new(sigma, dd).unwrap(), m)
            .unwrap()
            .probability(ev)
    };
    let h = 1e-5;
    if d >= 2.0 * h {
        // Richardson-extrapolated central difference
        let c1 = (p(d + h) - p(d - h)) / (2.0 * h);
        let c2 = (p(d + 2.0 * h) - p(d - 2.0 * h)) / (4.0 * h);
        (4.0 * c1 - c2) / 3.0
    } else {
        (-3.0 * p(d) + 4.0 * p(d + h) - p(d + 2.0 * h)) / (2.0 * h)
    }
}

proptest! {
    #[test]
    fn derivatives_match_finite_differences(
        x in -4.0..6.0f64, d in 0.01..3.0f64, eta in 0.05..1.0f64, classical in any::<bool>()
    ) {
        let routing = if classical { Routing::ClassicalRouting } else { Routing::PaperModel };
        let m = model(eta, routing);
        let e = event_intensities(x, &GaussianPsfPair::new(1.0, d).unwrap(), &m).unwrap();
        for ev in Event::ALL {
            let analytic = e.derivative(ev);
            let fd = fd_in_d(x, d, 1.0, &m, ev);
            prop_assert!((fd - analytic).abs() <= 1e-6 * analytic.abs().max(1e-5), "{:?} {} {}", ev, fd, analytic);
        }
    }
}
