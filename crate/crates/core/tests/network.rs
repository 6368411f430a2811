use smu_core::activation::{ActivationKind, Preset, SmuParams, ACTIVATION_NAMES};
use smu_core::datasets::{make_spirals, make_two_moons, Dataset};
use smu_core::gradcheck::check_vector_gradient;
use smu_core::micronet::{softmax_cross_entropy, train, Layer, Network, OptimizerKind, Tensor2D, TrainConfig};

fn batch() -> (Tensor2D, Vec<usize>) {
    let x = Tensor2D::from_rows(&[vec![0.3, -1.2], vec![1.7, 0.4], vec![-0.8, 0.9], vec![0.05, 0.6], vec![-1.4, -0.3]])
        .unwrap();
    (x, vec![0, 2, 1, 1, 0])
}

fn loss_at(net: &Network, params: &[f64], x: &Tensor2D, y: &[usize]) -> f64 {
    let mut probe = net.clone();
    probe.set_params(params).unwrap();
    let logits = probe.infer(x).unwrap();
    softmax_cross_entropy(&logits, y).unwrap().0
}

fn gradcheck_network(kind: ActivationKind, seed: u64) {
    let mut net = Network::mlp(&[2, 4, 3], kind, seed).unwrap();
    assert!(net.param_count() <= 50);
    let (x, y) = batch();
    let (_, grads) = net.loss_and_grad(&x, &y).unwrap();
    let params = net.params();
    let reports = check_vector_gradient(|p| loss_at(&net, p, &x, &y), &params, &grads, 1e-5).unwrap();
    for r in &reports {
        assert!(r.passed, "{kind}: {r:?}");
    }
}

#[test]
fn whole_loss_gradients_match_finite_differences_for_every_kind() {
    for name in ACTIVATION_NAMES {
        let kind = ActivationKind::from_name(name, None, None, Preset::Classification).unwrap();
        gradcheck_network(kind, 11);
    }
    // alpha trainable as well, both presets
    for preset in [Preset::Classification, Preset::Detection] {
        gradcheck_network(ActivationKind::Smu(preset.smu_params().with_trainable(true, true)), 5);
        let mut p1 = preset.smu1_params().with_trainable(true, true);
        p1.mu = 0.7;
        gradcheck_network(ActivationKind::Smu1(p1), 5);
    }
}

#[test]
fn mu_gradient_is_sum_of_elementwise_products() {
    let kind = ActivationKind::Smu(SmuParams::new(0.25, 1.0));
    let mut net = Network::mlp(&[2, 4, 3], kind, 2).unwrap();
    let (x, y) = batch();
    net.loss_and_grad(&x, &y).unwrap();
    let grads = net.grads();
    // the single trainable mu comes right after the first dense layer's 8 + 4 values
    let Layer::Activation(a) = &net.layers()[1] else { unreachable!() };
    assert_eq!(grads[12], a.accumulated_grad_mu);
    assert!(a.accumulated_grad_mu != 0.0);
}

#[test]
fn frozen_mu_is_not_updated() {
    let kind = ActivationKind::Smu(SmuParams::frozen(0.25, 1.0));
    let ds = make_two_moons(64, 0.1, 1).unwrap();
    let mut net = Network::mlp(&[2, 8, 2], kind, 1).unwrap();
    let cfg = TrainConfig { epochs: 3, batch_size: 16, ..TrainConfig::default() };
    let log = train(&mut net, &ds, &cfg).unwrap();
    assert!(log.mu_trajectory().iter().all(|m| m == &vec![1.0]));
}

// layout: W1 (3x2 row-major), b1, mu, W2 (2x3), b2
fn hand_forward(p: &[f64], x: [f64; 2]) -> [f64; 2] {
    let (w1, rest) = p.split_at(6);
    let (b1, rest) = rest.split_at(3);
    let (mu, rest) = (rest[0], &rest[1..]);
    let (w2, b2) = rest.split_at(6);
    let alpha = 0.25;
    let h: Vec<f64> = (0..3)
        .map(|j| {
            let z = w1[2 * j] * x[0] + w1[2 * j + 1] * x[1] + b1[j];
            let u = (1.0 - alpha) * z;
            ((1.0 + alpha) * z + u * smu_testkit::erf_series_oracle(mu * u)) / 2.0
        })
        .collect();
    [0, 1].map(|k| (0..3).map(|j| w2[3 * k + j] * h[j]).sum::<f64>() + b2[k])
}

#[test]
fn golden_forward() {
    let kind = ActivationKind::Smu(Preset::Classification.smu_params());
    let mut net = Network::mlp(&[2, 3, 2], kind, 42).unwrap();
    let inputs = [[0.5, -1.0], [2.0, 0.25]];
    let x = Tensor2D::from_rows(&inputs.map(|r| r.to_vec())).unwrap();
    let out = net.forward(&x).unwrap();
    let params = net.params();
    assert_eq!(params.len(), 6 + 3 + 1 + 6 + 2);
    let hand: Vec<f64> = inputs.iter().flat_map(|&r| hand_forward(&params, r)).collect();
    for ((got, want), pinned) in out.data().iter().zip(&hand).zip(GOLDEN_FORWARD) {
        assert!((got - want).abs() < 1e-12, "{:?} vs {hand:?}", out.data());
        assert!((got - pinned).abs() < 1e-14, "{:?}", out.data());
    }
}

const GOLDEN_FORWARD: [f64; 4] = [-0.4004255143708322, -0.16044213663926687, 2.923510841844422, -1.181727239412401];

#[test]
fn zero_learning_rate_changes_nothing() {
    let ds = make_two_moons(40, 0.1, 3).unwrap();
    let kind = ActivationKind::Smu(Preset::Classification.smu_params().with_trainable(true, true));
    let mut net = Network::mlp(&[2, 6, 2], kind, 3).unwrap();
    let before = net.params();
    let cfg = TrainConfig { epochs: 5, batch_size: 8, learning_rate: 0.0, ..TrainConfig::default() };
    train(&mut net, &ds, &cfg).unwrap();
    assert_eq!(net.params(), before);
}

#[test]
fn golden_one_epoch_loss() {
    let ds = make_two_moons(4, 0.1, 8).unwrap();
    let kind = ActivationKind::Smu(Preset::Classification.smu_params());
    let mut net = Network::mlp(&[2, 4, 2], kind, 8).unwrap();
    let cfg = TrainConfig { epochs: 1, batch_size: 2, seed: 8, ..TrainConfig::default() };
    let log = train(&mut net, &ds, &cfg).unwrap();
    let loss = log.final_train().unwrap().loss;
    assert!((loss - GOLDEN_ONE_EPOCH_LOSS).abs() < 1e-14, "{loss:?}");
}

const GOLDEN_ONE_EPOCH_LOSS: f64 = 1.3072661523678302;

#[test]
fn gelu_swap_is_bitwise_identical() {
    let smu_kind = ActivationKind::Smu(SmuParams::frozen(0.0, std::f64::consts::FRAC_1_SQRT_2));
    let mut a = Network::mlp(&[2, 16, 16, 2], smu_kind, 9).unwrap();
    let mut b = Network::mlp(&[2, 16, 16, 2], ActivationKind::Gelu, 9).unwrap();
    assert_eq!(a.params(), b.params());
    let ds = make_two_moons(200, 0.2, 9).unwrap();
    let ya = a.forward(&ds.features).unwrap();
    let yb = b.forward(&ds.features).unwrap();
    for (u, v) in ya.data().iter().zip(yb.data()) {
        assert_eq!(u.to_bits(), v.to_bits());
    }
}

#[test]
fn training_is_deterministic() {
    let ds = make_two_moons(300, 0.1, 4).unwrap();
    let run = || {
        let kind = ActivationKind::Smu(Preset::Classification.smu_params());
        let mut net = Network::mlp(&[2, 8, 8, 2], kind, 4).unwrap();
        let cfg = TrainConfig {
            epochs: 5,
            seed: 4,
            optimizer: OptimizerKind::ADAM,
            learning_rate: 0.01,
            ..TrainConfig::default()
        };
        train(&mut net, &ds, &cfg).unwrap().to_csv()
    };
    assert_eq!(run(), run());
}

#[test]
fn divergence_is_reported_with_epoch() {
    let ds = make_two_moons(100, 0.1, 1).unwrap();
    let mut net = Network::mlp(&[2, 8, 2], ActivationKind::Relu, 1).unwrap();
    let cfg = TrainConfig { epochs: 50, learning_rate: 1e200, optimizer: OptimizerKind::Sgd, ..TrainConfig::default() };
    match train(&mut net, &ds, &cfg) {
        Err(smu_core::SmuError::Divergence { epoch, location }) => {
            assert!(epoch >= 1);
            assert!(!location.is_empty());
        }
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn invalid_configs_rejected() {
    let ds = make_two_moons(20, 0.1, 1).unwrap();
    let mut net = Network::mlp(&[2, 4, 2], ActivationKind::Relu, 1).unwrap();
    for cfg in [
        TrainConfig { epochs: 0, ..TrainConfig::default() },
        TrainConfig { batch_size: 0, ..TrainConfig::default() },
        TrainConfig { learning_rate: -1.0, ..TrainConfig::default() },
    ] {
        assert!(train(&mut net, &ds, &cfg).is_err());
    }
    let mut wrong = Network::mlp(&[3, 4, 2], ActivationKind::Relu, 1).unwrap();
    assert!(train(&mut wrong, &ds, &TrainConfig::default()).is_err());
}

fn fit(ds: &Dataset, sizes: &[usize], kind: ActivationKind, cfg: &TrainConfig) -> (f64, Vec<f64>, Vec<f64>) {
    let mut net = Network::mlp(sizes, kind, cfg.seed).unwrap();
    let log = train(&mut net, ds, cfg).unwrap();
    (log.final_train().unwrap().accuracy, log.initial_mus().to_vec(), log.final_mus().to_vec())
}

#[test]
fn two_moons_needs_a_nonlinear_model() {
    let ds = make_two_moons(1000, 0.05, 21).unwrap();
    let cfg = TrainConfig { epochs: 100, seed: 21, ..TrainConfig::default() };
    let (linear, _, _) = fit(&ds, &[2, 2], ActivationKind::Relu, &cfg);
    let (mlp, _, _) = fit(&ds, &[2, 32, 32, 2], ActivationKind::Smu(Preset::Classification.smu_params()), &cfg);
    assert!(linear < 0.95, "linear probe {linear}");
    assert!(mlp > 0.95, "mlp {mlp}");
}

#[test]
fn two_moons_smu_trains_mu() {
    let ds = make_two_moons(2000, 0.1, 0).unwrap();
    let cfg = TrainConfig::default();
    let (acc, mu0, mu1) = fit(&ds, &[2, 32, 32, 2], ActivationKind::Smu(Preset::Classification.smu_params()), &cfg);
    assert!(acc >= 0.95, "train accuracy {acc}");
    assert_eq!(mu0, vec![1.0, 1.0]);
    let moved = mu0.iter().zip(&mu1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(moved >= 1e-3, "mu {mu0:?} -> {mu1:?}");
}

#[test]
fn spirals_smu_reaches_ninety_percent() {
    let ds = make_spirals(600, 2.0, 0.02, 0).unwrap();
    let cfg = TrainConfig { epochs: 500, ..TrainConfig::default() };
    let (acc, _, _) = fit(&ds, &[2, 32, 32, 2], ActivationKind::Smu(Preset::Classification.smu_params()), &cfg);
    assert!(acc >= 0.9, "train accuracy {acc}");
}

#[test]
fn softmax_cross_entropy_matches_direct_formula() {
    let mut rng = smu_core::datasets::Rng::new(77);
    let rows: Vec<Vec<f64>> = (0..3).map(|_| (0..4).map(|_| rng.uniform_in(-3.0, 3.0)).collect()).collect();
    let labels = [2, 0, 3];
    let logits = Tensor2D::from_rows(&rows).unwrap();
    let (loss, grads) = softmax_cross_entropy(&logits, &labels).unwrap();
    let mut want = 0.0;
    for (r, (row, &y)) in rows.iter().zip(&labels).enumerate() {
        let z: f64 = row.iter().map(|v| v.exp()).sum();
        want -= (row[y].exp() / z).ln() / 3.0;
        for (c, v) in row.iter().enumerate() {
            let target = if c == y { 1.0 } else { 0.0 };
            assert!((grads.get(r, c) - (v.exp() / z - target) / 3.0).abs() < 1e-15);
        }
    }
    assert!((loss - want).abs() < 1e-14);
}
