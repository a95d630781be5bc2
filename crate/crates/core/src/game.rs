//! Multi-player polynomial games and their reduction to a TVI.
//!
//! Player `k` chooses `x^k` in a closed convex set `X_k` of dimension `r_k`
//! and pays
//!
//! ```text
//! f_k(x) = sum a^k[i_1, .., i_m] x^1[i_1] .. x^m[i_m]
//! ```
//!
//! Since `f_k` is linear in `x^k`, its gradient with respect to `x^k` is the
//! contraction of `A^k` against every block except the k-th. Stacking those
//! gradients gives a homogeneous map of degree `m - 1` on `R^n`,
//! `n = r_1 + .. + r_m`, realised by one m-order tensor built in
//! [`GameSpec::assemble`]. Nash equilibria are exactly the solutions of the
//! resulting TVI with `q = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::TviProblem;
use crate::sets::FeasibleSet;
use crate::tensor::{distance, DenseTensor, MultiIndex, SquareTensor};

#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    dims: Vec<usize>,
    payoffs: Vec<DenseTensor>,
    sets: Vec<FeasibleSet>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NashReport {
    pub is_equilibrium: bool,
    pub per_player_residuals: Vec<f64>,
    pub feasible: bool,
    pub tol: f64,
}

impl GameSpec {
    pub fn new(payoffs: Vec<DenseTensor>, sets: Vec<FeasibleSet>) -> Result<Self> {
        let m = payoffs.len();
        if m < 2 {
            return Err(Error::Precondition(format!("a game needs at least 2 players, got {m}")));
        }
        if sets.len() != m {
            return Err(Error::dims(m, sets.len(), "number of strategy sets"));
        }
        let dims = payoffs[0].dims().to_vec();
        if dims.len() != m {
            return Err(Error::dims(m, dims.len(), "payoff tensor order"));
        }
        for t in &payoffs[1..] {
            if t.dims() != dims.as_slice() {
                return Err(Error::Precondition(format!(
                    "payoff tensors disagree on dims: {:?} vs {:?}",
                    dims,
                    t.dims()
                )));
            }
        }
        for (k, s) in sets.iter().enumerate() {
            s.validate()?;
            if s.dim() != dims[k] {
                return Err(Error::dims(dims[k], s.dim(), "strategy set dimension"));
            }
        }
        Ok(Self {
            dims,
            payoffs,
            sets,
        })
    }

    pub fn players(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn payoff(&self, k: usize) -> &DenseTensor {
        &self.payoffs[k]
    }

    pub fn payoffs(&self) -> &[DenseTensor] {
        &self.payoffs
    }

    pub fn strategy_set(&self, k: usize) -> &FeasibleSet {
        &self.sets[k]
    }

    pub fn strategy_sets(&self) -> &[FeasibleSet] {
        &self.sets
    }

    /// Total dimension `r_1 + .. + r_m`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Start offset of each player's block in the stacked vector.
    pub fn offsets(&self) -> Vec<usize> {
        self.dims
            .iter()
            .scan(0, |acc, &r| {
                let start = *acc;
                *acc += r;
                Some(start)
            })
            .collect()
    }

    /// Splits a stacked strategy profile into per-player blocks.
    pub fn blocks<'a>(&self, x: &'a [f64]) -> Result<Vec<&'a [f64]>> {
        if x.len() != self.total_dim() {
            return Err(Error::dims(self.total_dim(), x.len(), "strategy profile length"));
        }
        Ok(self
            .offsets()
            .into_iter()
            .zip(&self.dims)
            .map(|(o, &r)| &x[o..o + r])
            .collect())
    }

    fn check_player(&self, k: usize) -> Result<()> {
        if k >= self.players() {
            return Err(Error::Precondition(format!(
                "player {k} out of range for a {}-player game",
                self.players()
            )));
        }
        Ok(())
    }

    /// Player `k`'s cost `f_k(x)`.
    pub fn cost(&self, k: usize, x: &[f64]) -> Result<f64> {
        self.check_player(k)?;
        let blocks = self.blocks(x)?;
        self.payoffs[k].contract_all(&blocks)
    }

    /// Gradient of `f_k` with respect to `x^k`.
    pub fn player_gradient(&self, k: usize, x: &[f64]) -> Result<Vec<f64>> {
        self.check_player(k)?;
        let blocks = self.blocks(x)?;
        self.payoffs[k].contract_except(k, &blocks)
    }

    /// Concatenation of every player's gradient.
    pub fn stacked_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.total_dim());
        for k in 0..self.players() {
            out.extend(self.player_gradient(k, x)?);
        }
        Ok(out)
    }

    /// The m-order tensor `A` on `R^n` with `A x^{m-1}` equal to the stacked gradient.
    ///
    /// Entry `a^k[i_1, .., i_m]` is written at the position whose first index
    /// is `i_k` in block k and whose remaining indices are `i_j` in block j for
    /// the other players in increasing order. All other entries are zero.
    pub fn assemble(&self) -> Result<SquareTensor> {
        let m = self.players();
        let n = self.total_dim();
        let offsets = self.offsets();
        let mut a = DenseTensor::zeros(vec![n; m])?;
        let mut target = vec![0; m];
        for (k, payoff) in self.payoffs.iter().enumerate() {
            for (idx, v) in MultiIndex::new(&self.dims).zip(payoff.entries()) {
                if *v == 0.0 {
                    continue;
                }
                target[0] = offsets[k] + idx[k];
                let mut slot = 1;
                for j in (0..m).filter(|&j| j != k) {
                    target[slot] = offsets[j] + idx[j];
                    slot += 1;
                }
                a.set(&target, *v)?;
            }
        }
        SquareTensor::new(a)
    }

    /// `TVI(prod X_k, A, 0)` with `A` from [`GameSpec::assemble`].
    pub fn to_tvi(&self) -> Result<TviProblem> {
        let set = FeasibleSet::product(self.sets.clone())?;
        TviProblem::new(self.assemble()?, vec![0.0; self.total_dim()], set)
    }

    /// Per-player natural residuals `||x^k - P_k(x^k - grad_k f_k(x))||`.
    pub fn verify_nash(&self, x: &[f64], tol: f64) -> Result<NashReport> {
        let blocks = self.blocks(x)?;
        let mut residuals = Vec::with_capacity(self.players());
        let mut feasible = true;
        for k in 0..self.players() {
            let g = self.player_gradient(k, x)?;
            let xk = blocks[k];
            feasible &= self.sets[k].contains(xk, tol);
            let z: Vec<f64> = xk.iter().zip(&g).map(|(a, b)| a - b).collect();
            residuals.push(distance(xk, &self.sets[k].project(&z)?));
        }
        let worst = residuals.iter().cloned().fold(0.0, f64::max);
        Ok(NashReport {
            is_equilibrium: feasible && worst <= tol,
            per_player_residuals: residuals,
            feasible,
            tol,
        })
    }

    /// Grid search for player `k`'s best response with the other blocks of `x` fixed.
    ///
    /// Boxes (finite bounds only) use `grid_points` evenly spaced values per
    /// coordinate; simplices use every point whose coordinates are multiples
    /// of `1 / (grid_points - 1)`. Points are visited in lexicographic order
    /// and the first minimiser wins.
    pub fn best_response_grid(&self, k: usize, x: &[f64], grid_points: usize) -> Result<Vec<f64>> {
        self.check_player(k)?;
        if grid_points < 2 {
            return Err(Error::Precondition("grid needs at least 2 points per dimension".into()));
        }
        let grid = strategy_grid(&self.sets[k], grid_points)?;
        let mut best: Option<(f64, Vec<f64>)> = None;
        for y in grid {
            let c = self.cost(k, &self.with_block(x, k, &y)?)?;
            if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                best = Some((c, y));
            }
        }
        Ok(best.expect("grid is nonempty").1)
    }

    /// Replaces player `k`'s block of `x` with `y`.
    pub fn with_block(&self, x: &[f64], k: usize, y: &[f64]) -> Result<Vec<f64>> {
        self.check_player(k)?;
        self.blocks(x)?;
        if y.len() != self.dims[k] {
            return Err(Error::dims(self.dims[k], y.len(), "replacement block"));
        }
        let mut out = x.to_vec();
        let o = self.offsets()[k];
        out[o..o + y.len()].copy_from_slice(y);
        Ok(out)
    }
}

fn strategy_grid(set: &FeasibleSet, g: usize) -> Result<Vec<Vec<f64>>> {
    match set {
        FeasibleSet::Box { lower, upper } => {
            if lower.iter().chain(upper).any(|b| !b.is_finite()) {
                return Err(Error::UnsupportedSet("grid search needs finite box bounds"));
            }
            let axes: Vec<Vec<f64>> = lower
                .iter()
                .zip(upper)
                .map(|(l, u)| {
                    (0..g)
                        .map(|i| l + (u - l) * i as f64 / (g - 1) as f64)
                        .collect()
                })
                .collect();
            Ok(MultiIndex::new(&vec![g; axes.len()])
                .map(|idx| idx.iter().zip(&axes).map(|(&i, axis)| axis[i]).collect())
                .collect())
        }
        FeasibleSet::Simplex { dim } => {
            let steps = g - 1;
            Ok(MultiIndex::new(&vec![g; *dim])
                .filter(|idx| idx.iter().sum::<usize>() == steps)
                .map(|idx| idx.iter().map(|&i| i as f64 / steps as f64).collect())
                .collect())
        }
        _ => Err(Error::UnsupportedSet("grid search supports Box and Simplex only")),
    }
}
