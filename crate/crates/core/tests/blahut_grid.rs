use awcn_core::blahut::{ba_capacity_at_power, discretize_awcn, mutual_information, BlahutArimoto, DEFAULT_TOL};
use awcn_core::bounds::{lb_epi, ub_cpuc, ub_genie};
use awcn_core::{ChannelParams, GridSpec};

fn solve(gamma: f64, grid: impl FnOnce(&mut GridSpec)) -> awcn_core::BaSolution {
    let cp = ChannelParams::new(1.0, gamma).unwrap();
    let mut spec = GridSpec::default_for(&cp);
    grid(&mut spec);
    let ch = discretize_awcn(&cp, &spec).unwrap();
    let sol = ba_capacity_at_power(&ch, gamma, DEFAULT_TOL).unwrap();
    assert!((mutual_information(&ch, &sol.input_dist) - sol.rate).abs() < 1e-10);
    assert!(sol.avg_cost <= gamma * (1.0 + 1e-12));
    sol
}

#[test]
fn rates_lie_between_the_bounds() {
    for gamma in [1.0, 10.0, 100.0] {
        let cp = ChannelParams::new(1.0, gamma).unwrap();
        let rate = solve(gamma, |_| {}).rate;
        let ub = ub_genie(&cp, 1e-9).unwrap().min(ub_cpuc(&cp));
        assert!(rate >= lb_epi(&cp) - 0.02 && rate <= ub, "γ = {gamma}: {rate}");
    }
}

#[test]
fn refining_the_grid_barely_moves_the_rate() {
    let base = solve(10.0, |_| {}).rate;
    let fine = solve(10.0, |g| {
        g.m_inputs = 2 * (g.m_inputs - 1) + 1;
        g.b_outputs *= 2;
    })
    .rate;
    assert!((fine - base).abs() < 5e-3, "{base} vs {fine}");
}

#[test]
fn wider_output_span_barely_moves_the_rate() {
    // bin width held fixed so only the tail coverage changes
    let narrow = solve(10.0, |g| g.output_span = 200.0).rate;
    let wide = solve(10.0, |g| {
        g.output_span = 400.0;
        g.b_outputs = 2 * g.b_outputs - 1;
    })
    .rate;
    assert!((wide - narrow).abs() < 1e-3, "{narrow} vs {wide}");
}

#[test]
fn plain_iteration_never_decreases_the_objective() {
    let cp = ChannelParams::new(1.0, 10.0).unwrap();
    let mut grid = GridSpec::default_for(&cp);
    grid.m_inputs = 41;
    grid.b_outputs = 401;
    let ch = discretize_awcn(&cp, &grid).unwrap();
    for s in [0.0, 0.01, 0.1] {
        let mut ba = BlahutArimoto::new(&ch, s, None).unwrap();
        let mut last = f64::NEG_INFINITY;
        for _ in 0..300 {
            let step = ba.step();
            assert!(step.objective >= last - 1e-12, "s = {s}");
            assert!(step.lower <= step.upper + 1e-12);
            last = step.objective;
        }
    }
}
