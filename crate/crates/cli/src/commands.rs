use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;

use qscode::ball::{ball_volume_exact, ball_volume_mc_parallel, g4_closed_form, g_integral, BallSpec};
use qscode::covering::{
    build_internal_covering, coverage_verify_parallel, covering_schedule, default_fail_streak, default_x,
    external_covering_lower_bound, internal_covering_bounds, Covering,
};
use qscode::encoding::{
    bit_length_bounds_deterministic, bit_length_bounds_probabilistic, deterministic_encode, octahedron_book,
    octahedron_delta, octahedron_demo, octahedron_epsilon, probabilistic_encode, rate, verify_minimax_with,
    MinimaxOptions, SolverOptions,
};
use qscode::state::{haar_sample, DensityMatrix, PureState, SeededSampler};

use crate::report::Report;
use crate::{Command, ExperimentConfig};

const FIG3_GRID: [f64; 9] = [0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95];
const HALVING_FAIL_STREAK: usize = 1_000_000;
const COVERAGE_THRESHOLD: f64 = 0.999;
const MINIMAX_TOL: f64 = 1e-3;

fn num(x: f64) -> Value {
    Value::from(x)
}

pub(crate) fn dispatch(c: &ExperimentConfig) -> Result<Report> {
    match c.command {
        Command::Volume => volume(c),
        Command::Fig3 => fig3(c),
        Command::CoveringBuild => covering_build(c),
        Command::CoveringVerify => covering_verify(c),
        Command::Encode => encode(c),
        Command::Minimax => minimax(c),
        Command::Octahedron => octahedron(c),
        Command::Halving => halving(c),
        Command::Bounds => bounds(c),
    }
}

fn sampler(c: &ExperimentConfig) -> SeededSampler {
    SeededSampler::new(c.seed, 0)
}

/// Targets for evaluating a code book come from their own stream so that
/// a book built with the same seed is not sampled back.
fn target_sampler(c: &ExperimentConfig) -> SeededSampler {
    SeededSampler::new(c.seed, 1)
}

pub(crate) fn load_book(path: &Path) -> Result<Covering> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing code book {}", path.display()))
}

fn book_or_octahedron(c: &ExperimentConfig) -> Result<Covering> {
    c.book.as_deref().map_or_else(|| Ok(octahedron_book()), load_book)
}

fn volume(c: &ExperimentConfig) -> Result<Report> {
    let mut r = Report::new(
        c,
        vec!["dim", "epsilon", "samples", "estimate", "std_error", "exact", "z_score", "pass"],
    );
    let center = PureState::basis(c.dim, 0)?.to_density();
    let spec = BallSpec::new(center, c.epsilon)?;
    let est = ball_volume_mc_parallel(&spec, c.samples, &mut sampler(c), c.workers)?;
    let exact = ball_volume_exact(c.epsilon, c.dim)?;
    let z = (est.point_estimate - exact) / est.std_error;
    let pass = est.within_sigmas(exact, 3.0);
    r.push(vec![
        c.dim.into(),
        num(c.epsilon),
        c.samples.into(),
        num(est.point_estimate),
        num(est.std_error),
        num(exact),
        num(z),
        pass.into(),
    ]);
    r.pass = Some(pass);
    Ok(r)
}

fn fig3(c: &ExperimentConfig) -> Result<Report> {
    if c.dim != 4 {
        bail!("fig3 runs in dimension 4, got --dim {}", c.dim);
    }
    let mut r = Report::new(
        c,
        vec!["p0", "estimate", "std_error", "g4_bound", "g_integral", "pass"],
    );
    let mut s = sampler(c);
    let mut all = true;
    for p0 in FIG3_GRID.into_iter().filter(|&p| p > 1.0 - c.epsilon) {
        let rho = DensityMatrix::diagonal(&[p0, 1.0 - p0, 0.0, 0.0])?;
        let est = ball_volume_mc_parallel(&BallSpec::new(rho, c.epsilon)?, c.samples, &mut s, c.workers)?;
        let bound = g4_closed_form(c.epsilon, p0)?;
        let integral = g_integral(4, c.epsilon, p0)?;
        let pass = est.point_estimate <= bound + 3.0 * est.std_error && (bound - integral).abs() < 1e-8;
        all &= pass;
        r.push(vec![
            num(p0),
            num(est.point_estimate),
            num(est.std_error),
            num(bound),
            num(integral),
            pass.into(),
        ]);
    }
    r.pass = Some(all);
    Ok(r)
}

fn covering_build(c: &ExperimentConfig) -> Result<Report> {
    let path = c.book.as_deref().context("covering-build needs --book")?;
    let x = c.x.unwrap_or_else(|| default_x(c.dim));
    let schedule = covering_schedule(c.dim, c.epsilon, x)?;
    let streak = c.fail_streak.unwrap_or_else(|| default_fail_streak(schedule.j_r));
    let book = build_internal_covering(c.dim, c.epsilon, x, streak, &mut sampler(c))?;
    let mut text = serde_json::to_string_pretty(&book)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;

    let upper = internal_covering_bounds(c.dim, c.epsilon)?.upper;
    let meta = book.meta().expect("built books carry metadata");
    let pass = book.len() as f64 <= upper;
    let mut r = Report::new(
        c,
        vec!["dim", "epsilon", "x", "epsilon_r", "epsilon_p", "j_r", "j_p", "fail_streak", "size", "upper_bound", "pass"],
    );
    r.push(vec![
        c.dim.into(),
        num(c.epsilon),
        num(x),
        num(meta.epsilon_r),
        num(meta.epsilon_p),
        meta.j_r.into(),
        meta.j_p.into(),
        streak.into(),
        book.len().into(),
        num(upper),
        pass.into(),
    ]);
    r.pass = Some(pass);
    Ok(r)
}

fn covering_verify(c: &ExperimentConfig) -> Result<Report> {
    let path = c.book.as_deref().context("covering-verify needs --book")?;
    let book = load_book(path)?;
    let eps = c.epsilon;
    let rep = coverage_verify_parallel(&book, eps, c.samples, &mut target_sampler(c), c.workers);
    let pass = rep.covered_fraction >= COVERAGE_THRESHOLD;
    let mut r = Report::new(
        c,
        vec!["dim", "size", "radius", "epsilon", "samples", "covered_fraction", "std_error", "worst_gap", "pass"],
    );
    r.push(vec![
        book.dim().into(),
        book.len().into(),
        num(book.radius()),
        num(eps),
        c.samples.into(),
        num(rep.covered_fraction),
        num(rep.std_error),
        num(rep.worst_gap),
        pass.into(),
    ]);
    r.pass = Some(pass);
    Ok(r)
}

fn encode(c: &ExperimentConfig) -> Result<Report> {
    let book = book_or_octahedron(c)?;
    let mut s = target_sampler(c);
    let mut r = Report::new(
        c,
        vec!["target", "det_label", "det_distance", "prob_distance", "duality_gap", "iterations", "support"],
    );
    for i in 0..c.samples {
        let phi = haar_sample(book.dim(), &mut s)?;
        let det = deterministic_encode(&phi, &book)?;
        let prob = probabilistic_encode(&phi, &book, c.tol, c.max_iter)?;
        r.push(vec![
            i.into(),
            det.label.into(),
            num(det.distance),
            num(prob.achieved_distance),
            num(prob.duality_gap),
            prob.iterations.into(),
            format_distribution(prob.distribution.iter()).into(),
        ]);
    }
    Ok(r)
}

fn format_distribution(it: impl Iterator<Item = (usize, f64)>) -> String {
    it.map(|(l, p)| format!("{l}:{p}")).collect::<Vec<_>>().join(";")
}

fn minimax(c: &ExperimentConfig) -> Result<Report> {
    let book = book_or_octahedron(c)?;
    let opts = MinimaxOptions {
        restarts: c.restarts,
        solver: SolverOptions {
            tol: c.tol,
            max_iter: c.max_iter,
            ..SolverOptions::default()
        },
        ..MinimaxOptions::default()
    };
    let rep = verify_minimax_with(&book, c.samples, &mut target_sampler(c), &opts)?;
    let pass = rep.defect() < MINIMAX_TOL;
    let mut r = Report::new(c, vec!["dim", "size", "samples", "lhs", "rhs", "defect", "pass"]);
    r.push(vec![
        book.dim().into(),
        book.len().into(),
        c.samples.into(),
        num(rep.lhs),
        num(rep.rhs),
        num(rep.defect()),
        pass.into(),
    ]);
    r.pass = Some(pass);
    Ok(r)
}

fn octahedron(c: &ExperimentConfig) -> Result<Report> {
    let rep = octahedron_demo()?;
    let pass = (rep.epsilon - octahedron_epsilon()).abs() < 1e-9
        && (rep.delta - octahedron_delta()).abs() < 1e-9
        && rep.delta_squared_minus_epsilon.abs() < 1e-9;
    let mut r = Report::new(
        c,
        vec!["epsilon", "delta", "delta_squared_minus_epsilon", "nearest_label", "distribution", "pass"],
    );
    r.push(vec![
        num(rep.epsilon),
        num(rep.delta),
        num(rep.delta_squared_minus_epsilon),
        rep.nearest_label.into(),
        format_distribution(rep.distribution.iter()).into(),
        pass.into(),
    ]);
    r.pass = Some(pass);
    Ok(r)
}

/// Builds a `sqrt(eps)`-covering and compares both encoders on shared
/// targets. For `eps > 1/2` the run is reported without a verdict.
fn halving(c: &ExperimentConfig) -> Result<Report> {
    let radius = c.epsilon.sqrt();
    let x = c.x.unwrap_or_else(|| default_x(c.dim));
    let streak = c.fail_streak.unwrap_or(HALVING_FAIL_STREAK);
    let mut s = sampler(c);
    let book = build_internal_covering(c.dim, radius, x, streak, &mut s)?;
    let (mut max_prob, mut max_det) = (0.0f64, 0.0f64);
    let mut fine_cover = true;
    for _ in 0..c.samples {
        let phi = haar_sample(c.dim, &mut s)?;
        let det = deterministic_encode(&phi, &book)?;
        let prob = probabilistic_encode(&phi, &book, c.tol, c.max_iter)?;
        max_prob = max_prob.max(prob.achieved_distance);
        max_det = max_det.max(det.distance);
        fine_cover &= det.distance < c.epsilon;
    }
    let exploratory = c.epsilon > 0.5;
    let pass = max_prob < c.epsilon && (max_det > c.epsilon || fine_cover);
    let mut r = Report::new(
        c,
        vec!["dim", "epsilon", "book_radius", "fail_streak", "size", "samples", "max_prob", "max_det", "fine_cover", "exploratory", "pass"],
    );
    r.push(vec![
        c.dim.into(),
        num(c.epsilon),
        num(radius),
        streak.into(),
        book.len().into(),
        c.samples.into(),
        num(max_prob),
        num(max_det),
        fine_cover.into(),
        exploratory.into(),
        if exploratory { Value::Null } else { pass.into() },
    ]);
    r.pass = (!exploratory).then_some(pass);
    Ok(r)
}

fn bounds(c: &ExperimentConfig) -> Result<Report> {
    let (d, eps) = (c.dim, c.epsilon);
    let det = bit_length_bounds_deterministic(d, eps).ok();
    let prob = bit_length_bounds_probabilistic(d, eps)?;
    let internal = internal_covering_bounds(d, eps)?;
    let external = external_covering_lower_bound(d, eps).ok();
    let opt = |v: Option<f64>| v.map_or(Value::Null, num);
    let mut r = Report::new(
        c,
        vec![
            "dim",
            "epsilon",
            "rate",
            "det_lower_bits",
            "det_upper_bits",
            "prob_lower_bits",
            "prob_upper_bits",
            "internal_lower",
            "internal_upper",
            "external_lower",
            "prob_upper_over_det_lower",
        ],
    );
    r.push(vec![
        d.into(),
        num(eps),
        num(rate(d, eps)),
        opt(det.map(|b| b.lower_bits)),
        opt(det.map(|b| b.upper_bits)),
        num(prob.lower_bits.max(0.0)),
        num(prob.upper_bits),
        num(internal.lower),
        num(internal.upper),
        opt(external),
        opt(det.map(|b| prob.upper_bits / b.lower_bits).filter(|v| v.is_finite())),
    ]);
    Ok(r)
}
