//! Sampling falsifiers for the structured tensor classes.
//!
//! * positive definite on X: `A x^m > 0` for every nonzero `x` in X;
//! * strictly positive definite on X: `<A x^{m-1} - A y^{m-1}, x - y> > 0`
//!   for distinct `x, y` in X (equivalently, `F` is strictly monotone on X);
//! * strong monotonicity: the pairing is bounded below by `c ||x - y||^2`.
//!
//! None of these can be certified by sampling. A [`Verdict::NotFalsified`]
//! only records how many points or pairs were tried; a
//! [`Verdict::Falsified`] carries a witness that replays exactly through
//! [`SquareTensor::form_value`] or [`SquareTensor::pairing`].
//!
//! On `X = R^n_+` positive definiteness is strict copositivity.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::TviProblem;
use crate::rng::{radial_sample, substream};
use crate::sets::FeasibleSet;
use crate::tensor::{norm, SquareTensor};

/// Values at or below this count as violating strict positivity.
pub const STRICTNESS_TOL: f64 = 1e-12;
/// Points closer than this to the origin (or pairs closer than this to each other) are skipped.
pub const DEGENERACY_FLOOR: f64 = 1e-9;

const BATCH_SIZE: usize = 4096;
const RADIUS_RANGE: (f64, f64) = (0.1, 10.0);
const LOCAL_RANGE: (f64, f64) = (1e-2, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Point { x: Vec<f64> },
    Pair { x: Vec<f64>, y: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Falsified {
        witness: Witness,
        value: f64,
        samples_tested: usize,
    },
    NotFalsified {
        samples_tested: usize,
    },
}

impl Verdict {
    pub fn is_falsified(&self) -> bool {
        matches!(self, Verdict::Falsified { .. })
    }

    pub fn samples_tested(&self) -> usize {
        match self {
            Verdict::Falsified { samples_tested, .. } | Verdict::NotFalsified { samples_tested } => {
                *samples_tested
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusEstimate {
    /// Smallest observed `pairing / ||x - y||^2`; any valid strong-monotonicity constant is at most this.
    pub c_hat: f64,
    pub argmin_pair: (Vec<f64>, Vec<f64>),
    pub samples_tested: usize,
}

/// `pairing(x, y) / ||x - y||^2`, the quantity minimised by [`estimate_strong_modulus`].
pub fn modulus_ratio(a: &SquareTensor, x: &[f64], y: &[f64]) -> Result<f64> {
    let pairing = a.pairing(x, y)?;
    Ok(pairing / squared_distance(x, y))
}

fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Running minimum over candidates; ties keep the earliest.
#[derive(Debug, Clone)]
struct Best<W> {
    value: f64,
    witness: W,
}

fn keep_min<W>(slot: &mut Option<Best<W>>, value: f64, witness: W) {
    if slot.as_ref().is_none_or(|b| value < b.value) {
        *slot = Some(Best { value, witness });
    }
}

/// Evaluates `n_samples` random draws in fixed-size batches, each with its own
/// substream, concurrently. The reduction runs in batch order, so the result
/// does not depend on scheduling.
fn sample_batches<W, F>(n_samples: usize, seed: u64, eval: F) -> Result<(usize, Option<Best<W>>)>
where
    W: Send,
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> Result<Option<(f64, W)>> + Sync,
{
    let n_batches = n_samples.div_ceil(BATCH_SIZE);
    let run_batch = |b: usize| -> Result<(usize, Option<Best<W>>)> {
        let mut rng = substream(seed, b as u64);
        let count = BATCH_SIZE.min(n_samples - b * BATCH_SIZE);
        let mut tested = 0;
        let mut best = None;
        for _ in 0..count {
            if let Some((value, w)) = eval(&mut rng)? {
                tested += 1;
                keep_min(&mut best, value, w);
            }
        }
        Ok((tested, best))
    };

    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(n_batches.max(1));
    let mut results: Vec<Option<Result<(usize, Option<Best<W>>)>>> =
        (0..n_batches).map(|_| None).collect();
    if workers <= 1 {
        for (b, slot) in results.iter_mut().enumerate() {
            *slot = Some(run_batch(b));
        }
    } else {
        let chunk = n_batches.div_ceil(workers);
        std::thread::scope(|s| {
            for (w, slots) in results.chunks_mut(chunk).enumerate() {
                let run_batch = &run_batch;
                s.spawn(move || {
                    for (i, slot) in slots.iter_mut().enumerate() {
                        *slot = Some(run_batch(w * chunk + i));
                    }
                });
            }
        });
    }

    let mut tested = 0;
    let mut best = None;
    for r in results {
        let (t, b) = r.expect("every batch is evaluated")?;
        tested += t;
        if let Some(b) = b {
            keep_min(&mut best, b.value, b.witness);
        }
    }
    Ok((tested, best))
}

fn check_dims(a: &SquareTensor, x: &FeasibleSet) -> Result<()> {
    if a.dim() != x.dim() {
        return Err(Error::dims(a.dim(), x.dim(), "tensor vs feasible set"));
    }
    Ok(())
}

/// Deterministic probe points: projections of `±s e_i` for `s` in {1, 10} and of `±(1, .., 1)`.
fn probe_points(x: &FeasibleSet) -> Result<Vec<Vec<f64>>> {
    let n = x.dim();
    let mut raw = Vec::new();
    for i in 0..n {
        for s in [1.0, -1.0, 10.0, -10.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            raw.push(e);
        }
    }
    raw.push(vec![1.0; n]);
    raw.push(vec![-1.0; n]);
    raw.iter().map(|z| x.project(z)).collect()
}

/// Known violating pairs for the planar quartic examples, tried whenever `n = 2`.
fn planar_witness_pairs() -> Vec<(Vec<f64>, Vec<f64>)> {
    vec![
        (vec![2.0, 3.0], vec![1.0, 3.0]),
        (vec![1.0, 1.0], vec![-0.5, 1.0]),
    ]
}

fn probe_pairs(x: &FeasibleSet) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let points = probe_points(x)?;
    let origin = x.project(&vec![0.0; x.dim()])?;
    let mut pairs = Vec::new();
    for p in &points {
        pairs.push((p.clone(), origin.clone()));
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            pairs.push((points[i].clone(), points[j].clone()));
        }
    }
    if x.dim() == 2 {
        for (u, v) in planar_witness_pairs() {
            pairs.push((x.project(&u)?, x.project(&v)?));
        }
    }
    Ok(pairs)
}

fn pd_candidate(a: &SquareTensor, x: Vec<f64>) -> Result<Option<(f64, Vec<f64>)>> {
    if norm(&x) <= DEGENERACY_FLOOR {
        return Ok(None);
    }
    Ok(Some((a.form_value(&x)?, x)))
}

/// Falsifier for positive definiteness on X.
pub fn check_pd_on(a: &SquareTensor, x: &FeasibleSet, n_samples: usize, seed: u64) -> Result<Verdict> {
    check_pd_on_with_probes(a, x, n_samples, seed, &[])
}

/// As [`check_pd_on`], additionally testing the caller's points (projected onto X).
pub fn check_pd_on_with_probes(
    a: &SquareTensor,
    set: &FeasibleSet,
    n_samples: usize,
    seed: u64,
    extra: &[Vec<f64>],
) -> Result<Verdict> {
    check_dims(a, set)?;
    let mut tested = 0;
    let mut best = None;
    let mut probes = Vec::with_capacity(extra.len());
    for p in extra {
        probes.push(set.project(p)?);
    }
    probes.extend(probe_points(set)?);
    for p in probes {
        if let Some((v, w)) = pd_candidate(a, p)? {
            tested += 1;
            keep_min(&mut best, v, w);
        }
    }
    let n = a.dim();
    let (t, sampled) = sample_batches(n_samples, seed, |rng| {
        let z = radial_sample(rng, n, RADIUS_RANGE.0, RADIUS_RANGE.1);
        pd_candidate(a, set.project(&z)?)
    })?;
    tested += t;
    if let Some(b) = sampled {
        keep_min(&mut best, b.value, b.witness);
    }
    Ok(match best {
        Some(b) if b.value <= STRICTNESS_TOL => Verdict::Falsified {
            witness: Witness::Point { x: b.witness },
            value: b.value,
            samples_tested: tested,
        },
        _ => Verdict::NotFalsified {
            samples_tested: tested,
        },
    })
}

fn random_pair<R: Rng>(rng: &mut R, set: &FeasibleSet) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = set.dim();
    let x = set.project(&radial_sample(rng, n, RADIUS_RANGE.0, RADIUS_RANGE.1))?;
    let y = if rng.gen::<bool>() {
        set.project(&radial_sample(rng, n, RADIUS_RANGE.0, RADIUS_RANGE.1))?
    } else {
        let d = radial_sample(rng, n, LOCAL_RANGE.0, LOCAL_RANGE.1);
        let z: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
        set.project(&z)?
    };
    Ok((x, y))
}

type Pair = (Vec<f64>, Vec<f64>);

fn pair_candidate<F>(pair: Pair, score: &F) -> Result<Option<(f64, Pair)>>
where
    F: Fn(&[f64], &[f64]) -> Result<f64>,
{
    if squared_distance(&pair.0, &pair.1).sqrt() < DEGENERACY_FLOOR {
        return Ok(None);
    }
    let v = score(&pair.0, &pair.1)?;
    Ok(Some((v, pair)))
}

fn minimise_over_pairs<F>(
    set: &FeasibleSet,
    n_samples: usize,
    seed: u64,
    extra: &[Pair],
    score: F,
) -> Result<(usize, Option<Best<Pair>>)>
where
    F: Fn(&[f64], &[f64]) -> Result<f64> + Sync,
{
    let mut tested = 0;
    let mut best = None;
    let mut probes = Vec::with_capacity(extra.len());
    for (u, v) in extra {
        probes.push((set.project(u)?, set.project(v)?));
    }
    probes.extend(probe_pairs(set)?);
    for pair in probes {
        if let Some((v, w)) = pair_candidate(pair, &score)? {
            tested += 1;
            keep_min(&mut best, v, w);
        }
    }
    let (t, sampled) = sample_batches(n_samples, seed, |rng| {
        pair_candidate(random_pair(rng, set)?, &score)
    })?;
    tested += t;
    if let Some(b) = sampled {
        keep_min(&mut best, b.value, b.witness);
    }
    Ok((tested, best))
}

/// Falsifier for strict positive definiteness on X.
pub fn check_spd_on(a: &SquareTensor, x: &FeasibleSet, n_samples: usize, seed: u64) -> Result<Verdict> {
    check_spd_on_with_probes(a, x, n_samples, seed, &[])
}

/// As [`check_spd_on`], additionally testing the caller's pairs (projected onto X).
pub fn check_spd_on_with_probes(
    a: &SquareTensor,
    set: &FeasibleSet,
    n_samples: usize,
    seed: u64,
    extra: &[Pair],
) -> Result<Verdict> {
    check_dims(a, set)?;
    let (tested, best) = minimise_over_pairs(set, n_samples, seed, extra, |x, y| a.pairing(x, y))?;
    Ok(match best {
        Some(b) if b.value <= STRICTNESS_TOL => {
            let (x, y) = b.witness;
            Verdict::Falsified {
                witness: Witness::Pair { x, y },
                value: b.value,
                samples_tested: tested,
            }
        }
        _ => Verdict::NotFalsified {
            samples_tested: tested,
        },
    })
}

/// Smallest sampled `pairing / ||x - y||^2` over feasible pairs of `p`.
pub fn estimate_strong_modulus(p: &TviProblem, n_samples: usize, seed: u64) -> Result<ModulusEstimate> {
    estimate_strong_modulus_with_probes(p, n_samples, seed, &[])
}

pub fn estimate_strong_modulus_with_probes(
    p: &TviProblem,
    n_samples: usize,
    seed: u64,
    extra: &[Pair],
) -> Result<ModulusEstimate> {
    let a = p.tensor();
    let (tested, best) =
        minimise_over_pairs(p.set(), n_samples, seed, extra, |x, y| modulus_ratio(a, x, y))?;
    let best = best.ok_or_else(|| {
        Error::Precondition("no pair of distinct feasible points was sampled".into())
    })?;
    Ok(ModulusEstimate {
        c_hat: best.value,
        argmin_pair: best.witness,
        samples_tested: tested,
    })
}

/// `A (t d)^m / ||t d||^2` for `t = 2^{-k}`, `k = 0..steps`.
///
/// With `0` in X and `m > 2` these ratios tend to zero, so no positive
/// constant can bound the pairing against `y = 0` from below.
pub fn no_strong_monotonicity_trace(p: &TviProblem, direction: &[f64], steps: usize) -> Result<Vec<f64>> {
    if p.order() <= 2 {
        return Err(Error::OrderRequirement {
            required: "> 2",
            actual: p.order(),
        });
    }
    if direction.len() != p.dim() {
        return Err(Error::dims(p.dim(), direction.len(), "direction"));
    }
    if norm(direction) == 0.0 {
        return Err(Error::Precondition("direction must be nonzero".into()));
    }
    if !p.set().contains_origin() {
        return Err(Error::Precondition("feasible set must contain the origin".into()));
    }
    let mut out = Vec::with_capacity(steps);
    let mut t = 1.0;
    for _ in 0..steps {
        let x: Vec<f64> = direction.iter().map(|d| t * d).collect();
        if !p.set().contains(&x, crate::sets::DEFAULT_TOL) {
            return Err(Error::Precondition(format!(
                "scaled direction at t = {t} leaves the feasible set"
            )));
        }
        let nx = norm(&x);
        out.push(p.tensor().form_value(&x)? / (nx * nx));
        t *= 0.5;
    }
    Ok(out)
}
