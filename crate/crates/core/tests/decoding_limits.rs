use awcn_core::decoding::{
    fixed_pair_mc, nn_error_conditional, nn_error_limit, nn_two_codeword_error, ml_two_codeword_mc, Decoder,
    EnsembleKind,
};
use awcn_core::{EnsembleSpec, RandomStream};

fn spec(kind: EnsembleKind, power: f64, block_len: usize, pairs: usize) -> EnsembleSpec {
    EnsembleSpec {
        kind,
        power,
        block_len,
        pairs,
        rs: RandomStream::new(42, 7),
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn median_deviation(block_len: usize) -> f64 {
    let s = spec(EnsembleKind::Gaussian, 1.0, block_len, 100);
    let limit = nn_error_limit(EnsembleKind::Gaussian, 1.0, 1.0).unwrap();
    median(
        (0..100)
            .map(|i| (nn_two_codeword_error(&s.draw_pair(i), 1.0).unwrap() - limit).abs())
            .collect(),
    )
}

#[test]
fn exact_pair_error_concentrates_on_the_limit() {
    let devs: Vec<f64> = [100, 1_000, 10_000, 100_000].iter().map(|&n| median_deviation(n)).collect();
    for w in devs.windows(2) {
        assert!(w[1] < w[0], "{devs:?}");
    }
    assert!(devs[3] < 0.005, "{devs:?}");
}

#[test]
fn fixed_pairs_match_the_closed_form() {
    let s = spec(EnsembleKind::Gaussian, 1.0, 16, 20);
    let noise = RandomStream::new(42, 8);
    for i in 0..20 {
        let pair = s.draw_pair(i);
        let exact = nn_two_codeword_error(&pair, 1.0).unwrap();
        let mc = fixed_pair_mc(&pair, 1.0, Decoder::NearestNeighbor, 10_000, &noise.substream(i)).unwrap();
        assert!((mc.mean - exact).abs() < 3.0 * mc.std_error, "pair {i}: {mc:?} vs {exact}");
    }
}

#[test]
fn nearest_neighbor_error_does_not_vanish() {
    for gamma in [0.1, 1.0, 10.0] {
        let est = nn_error_conditional(&spec(EnsembleKind::Gaussian, gamma, 1_000_000, 20), 1.0).unwrap();
        let limit = nn_error_limit(EnsembleKind::Gaussian, gamma, 1.0).unwrap();
        assert!((est.mean - limit).abs() < 0.01, "P/λ² = {gamma}: {est:?} vs {limit}");
    }
}

#[test]
fn cauchy_ml_error_falls_with_block_length() {
    let rates: Vec<f64> = [2, 5, 10, 20, 100]
        .iter()
        .map(|&n| ml_two_codeword_mc(&spec(EnsembleKind::Antipodal, 1.0, n, 20_000), 1.0).unwrap().mean)
        .collect();
    for w in rates[..4].windows(2) {
        assert!(w[0] > w[1], "{rates:?}");
    }
    assert!(rates[4] < 1e-3, "{rates:?}");
}
