use bayes_ucb::model::PriorSampler;
use bayes_ucb::{clip_gap, sample_instance, ActionSet, PolicyConfig, Prior, RngStream};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn gaussian_prior() -> impl Strategy<Value = Prior> {
    (prop::collection::vec(-3.0f64..3.0, 1..8), 0.01f64..3.0).prop_map(|(m, s)| Prior::gaussian(m, s).unwrap())
}

fn beta_prior() -> impl Strategy<Value = Prior> {
    prop::collection::vec((0.2f64..5.0, 0.2f64..5.0), 1..8)
        .prop_map(|ab| Prior::beta(ab.iter().map(|p| p.0).collect(), ab.iter().map(|p| p.1).collect()).unwrap())
}

fn linear_prior(d: usize) -> impl Strategy<Value = Prior> {
    (prop::collection::vec(-2.0f64..2.0, d), prop::collection::vec(-1.0f64..1.0, d * d)).prop_map(move |(m, f)| {
        let f = DMatrix::from_vec(d, d, f);
        Prior::linear(DVector::from_vec(m), &f * f.transpose()).unwrap()
    })
}

proptest! {
    #[test]
    fn clip_gap_idempotent_and_monotone(d in 0.0f64..5.0, e in 1e-6f64..1.0, dd in 0.0f64..1.0, de in 0.0f64..1.0) {
        let once = clip_gap(d, e).unwrap();
        prop_assert_eq!(clip_gap(once, e).unwrap(), once);
        prop_assert!(clip_gap(d + dd, e).unwrap() >= once);
        prop_assert!(clip_gap(d, e + de).unwrap() >= once);
    }

    #[test]
    fn karmed_gaps_nonnegative(prior in prop_oneof![gaussian_prior(), beta_prior()], seed in any::<u64>()) {
        let k = prior.dim();
        let inst = sample_instance(&prior, &ActionSet::indexed(k).unwrap(), &RngStream::new(seed, 0)).unwrap();
        let profile = inst.gap_profile();
        prop_assert_eq!(profile.gaps[profile.optimal_index], 0.0);
        prop_assert!(profile.gaps.iter().all(|&g| g >= 0.0));
        if k > 1 {
            prop_assert!(profile.min_gap.is_finite());
        }
    }

    #[test]
    fn linear_gaps_nonnegative(prior in linear_prior(3), seed in any::<u64>()) {
        let actions = bayes_ucb::make_linear_action_set(7, 3, &RngStream::new(seed, 1)).unwrap();
        let inst = sample_instance(&prior, &actions, &RngStream::new(seed, 0)).unwrap();
        let profile = inst.gap_profile();
        prop_assert_eq!(profile.gaps[profile.optimal_index], 0.0);
        prop_assert!(profile.gaps.iter().all(|&g| g >= 0.0));
    }

    #[test]
    fn sampling_reproducible(prior in prop_oneof![gaussian_prior(), beta_prior()], seed in any::<u64>(), id in any::<u64>()) {
        let set = ActionSet::indexed(prior.dim()).unwrap();
        let a = sample_instance(&prior, &set, &RngStream::new(seed, id)).unwrap();
        let b = sample_instance(&prior, &set, &RngStream::new(seed, id)).unwrap();
        prop_assert!(a.theta().iter().zip(b.theta()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn widths_never_grow(rewards in prop::collection::vec(-5.0f64..5.0, 1..60), sigma0 in 0.05f64..5.0) {
        let prior = Prior::gaussian(vec![0.0, 0.0], sigma0).unwrap();
        let mut state = PolicyConfig::bayes_ucb(prior, 1.0, 0.01).unwrap().init(&ActionSet::indexed(2).unwrap()).unwrap();
        for y in rewards {
            let before = (state.width(0), state.width(1));
            state.update(0, y).unwrap();
            prop_assert!(state.width(0) <= before.0);
            prop_assert_eq!(state.width(1), before.1);
        }
    }

    #[test]
    fn shift_moves_every_index(shift in -10.0f64..10.0, history in prop::collection::vec((0usize..3, -3.0f64..3.0), 0..40)) {
        let base = vec![0.4, -0.1, 0.0];
        let set = ActionSet::indexed(3).unwrap();
        let mut a = PolicyConfig::bayes_ucb(Prior::gaussian(base.clone(), 0.7).unwrap(), 1.0, 0.05).unwrap().init(&set).unwrap();
        let shifted: Vec<f64> = base.iter().map(|m| m + shift).collect();
        let mut b = PolicyConfig::bayes_ucb(Prior::gaussian(shifted, 0.7).unwrap(), 1.0, 0.05).unwrap().init(&set).unwrap();
        for (arm, y) in history {
            a.update(arm, y).unwrap();
            b.update(arm, y + shift).unwrap();
        }
        for arm in 0..3 {
            let diff = b.ucb_index(arm).unwrap() - a.ucb_index(arm).unwrap();
            prop_assert!((diff - shift).abs() < 1e-9);
        }
        prop_assert_eq!(a.select_action(), b.select_action());
    }
}

/// Mean and variance of `xs` with standard errors of both.
fn moments(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    (mean, (m2 / n).sqrt(), m2, ((m4 - m2 * m2) / n).sqrt())
}

fn check_moments(draws: &[f64], mean: f64, var: f64) {
    let (m, m_se, v, v_se) = moments(draws);
    assert!((m - mean).abs() <= 4.0 * m_se, "mean {m} vs {mean}");
    assert!((v - var).abs() <= 4.0 * v_se, "variance {v} vs {var}");
}

#[test]
fn prior_moments_match_for_all_families() {
    const N: usize = 1_000_000;
    let gaussian = PriorSampler::new(&Prior::gaussian(vec![0.5, -1.0], 0.8).unwrap()).unwrap();
    let beta = PriorSampler::new(&Prior::beta(vec![1.0, 2.0], vec![1.0, 5.0]).unwrap()).unwrap();
    let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.6, 0.6, 0.5]);
    let linear = PriorSampler::new(&Prior::linear(DVector::from_vec(vec![1.0, -2.0]), cov.clone()).unwrap()).unwrap();
    let mut rng = RngStream::new(123, 0).rng();
    let mut cols: Vec<Vec<f64>> = (0..6).map(|_| Vec::with_capacity(N)).collect();
    let mut proj = Vec::with_capacity(N);
    for _ in 0..N {
        let g = gaussian.sample(&mut rng);
        let b = beta.sample(&mut rng);
        let l = linear.sample(&mut rng);
        for (c, v) in cols.iter_mut().zip(g.iter().chain(&b).chain(&l)) {
            c.push(*v);
        }
        proj.push(l[0] + l[1]);
    }
    check_moments(&cols[0], 0.5, 0.64);
    check_moments(&cols[1], -1.0, 0.64);
    check_moments(&cols[2], 0.5, 1.0 / 12.0);
    let (a, b) = (2.0, 5.0);
    check_moments(&cols[3], a / (a + b), a * b / ((a + b) * (a + b) * (a + b + 1.0)));
    check_moments(&cols[4], 1.0, 1.0);
    check_moments(&cols[5], -2.0, 0.5);
    // covariance enters through the variance of the sum
    check_moments(&proj, -1.0, 1.0 + 0.5 + 2.0 * 0.6);
}
