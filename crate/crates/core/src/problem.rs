//! The tensor variational inequality TVI(X, A, q): find `x*` in `X` with
//! `<y - x*, A x*^{m-1} + q> >= 0` for every `y` in `X`.
//!
//! Solutions are recognised through the natural residual
//! `||x - P_X(x - F(x))||`, which vanishes exactly at solutions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::FeasibleSet;
use crate::tensor::{distance, SquareTensor};

#[derive(Debug, Clone, PartialEq)]
pub struct TviProblem {
    tensor: SquareTensor,
    q: Vec<f64>,
    set: FeasibleSet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub is_solution: bool,
    pub feasible: bool,
    pub residual: f64,
    pub map_value: Vec<f64>,
    pub tol: f64,
}

impl TviProblem {
    pub fn new(tensor: SquareTensor, q: Vec<f64>, set: FeasibleSet) -> Result<Self> {
        if tensor.order() < 2 {
            return Err(Error::OrderRequirement {
                required: ">= 2",
                actual: tensor.order(),
            });
        }
        let n = tensor.dim();
        if q.len() != n {
            return Err(Error::dims(n, q.len(), "q length"));
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("q".into()));
        }
        if set.dim() != n {
            return Err(Error::dims(n, set.dim(), "feasible set dimension"));
        }
        set.validate()?;
        Ok(Self { tensor, q, set })
    }

    pub fn tensor(&self) -> &SquareTensor {
        &self.tensor
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    pub fn order(&self) -> usize {
        self.tensor.order()
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    /// Same tensor and set with a different constant term.
    pub fn with_q(&self, q: Vec<f64>) -> Result<Self> {
        Self::new(self.tensor.clone(), q, self.set.clone())
    }

    /// `F(x) = A x^{m-1} + q`.
    pub fn eval_map(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut f = self.tensor.apply_power(x)?;
        for (fi, qi) in f.iter_mut().zip(&self.q) {
            *fi += qi;
        }
        Ok(f)
    }

    pub fn natural_residual(&self, x: &[f64]) -> Result<f64> {
        let f = self.eval_map(x)?;
        self.residual_with_map(x, &f)
    }

    pub(crate) fn residual_with_map(&self, x: &[f64], f: &[f64]) -> Result<f64> {
        let step: Vec<f64> = x.iter().zip(f).map(|(xi, fi)| xi - fi).collect();
        let p = self.set.project(&step)?;
        Ok(distance(x, &p))
    }

    /// Feasibility and residual are both tested against `tol`.
    pub fn verify_solution(&self, x: &[f64], tol: f64) -> VerificationReport {
        let map_value = self.eval_map(x).unwrap_or_default();
        let residual = if map_value.is_empty() {
            f64::INFINITY
        } else {
            self.residual_with_map(x, &map_value)
                .unwrap_or(f64::INFINITY)
        };
        let feasible = self.set.contains(x, tol);
        VerificationReport {
            is_solution: feasible && residual <= tol,
            feasible,
            residual,
            map_value,
            tol,
        }
    }

    /// `<F(x) - F(y), x - y>`, evaluated without `q` so that it is exactly independent of it.
    pub fn pairing(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.tensor.pairing(x, y)
    }

    /// For order 2, the matrix `M` and vector `q` with `F(x) = M x + q`.
    pub fn as_affine(&self) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        Ok((self.tensor.to_matrix()?, self.q.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_41() -> SquareTensor {
        SquareTensor::from_entries(4, 2, &[(vec![0, 0, 0, 0], 1.0), (vec![1, 1, 1, 1], 1.0)])
            .unwrap()
    }

    fn example_42() -> SquareTensor {
        SquareTensor::from_entries(
            4,
            2,
            &[
                (vec![0, 0, 0, 0], 1.0),
                (vec![1, 1, 1, 1], 1.0),
                (vec![1, 0, 0, 1], 1.0),
                (vec![0, 0, 1, 1], -1.0),
            ],
        )
        .unwrap()
    }

    fn orthant_problem(q: [f64; 2]) -> TviProblem {
        TviProblem::new(example_41(), q.to_vec(), FeasibleSet::nonnegative_orthant(2)).unwrap()
    }

    #[test]
    fn eval_map_example() {
        let p = TviProblem::new(example_42(), vec![0.0, 0.0], FeasibleSet::whole_space(2)).unwrap();
        assert_eq!(p.eval_map(&[2.0, 3.0]).unwrap(), vec![-10.0, 39.0]);
    }

    #[test]
    fn eval_map_at_origin_is_q() {
        let p = orthant_problem([0.25, -3.5]);
        assert_eq!(p.eval_map(&[0.0, 0.0]).unwrap(), vec![0.25, -3.5]);
    }

    #[test]
    fn residual_examples() {
        assert_eq!(orthant_problem([1.0, 1.0]).natural_residual(&[0.0, 0.0]).unwrap(), 0.0);
        let r = orthant_problem([-1.0, -1.0]).natural_residual(&[0.0, 0.0]).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn verify_examples() {
        let p = orthant_problem([-1.0, -1.0]);
        assert!(p.verify_solution(&[1.0, 1.0], 1e-8).is_solution);
        let rep = p.verify_solution(&[0.0, 0.0], 1e-8);
        assert!(!rep.is_solution);
        assert!(rep.feasible);
        // Outside the orthant by more than tol.
        let rep = p.verify_solution(&[-1e-3, 1.0], 1e-8);
        assert!(!rep.feasible && !rep.is_solution);
    }

    #[test]
    fn verify_wrong_length_is_not_solution() {
        let rep = orthant_problem([1.0, 1.0]).verify_solution(&[0.0], 1e-8);
        assert!(!rep.is_solution);
        assert!(rep.residual.is_infinite());
    }

    #[test]
    fn pairing_examples() {
        let p = TviProblem::new(example_42(), vec![0.0, 0.0], FeasibleSet::whole_space(2)).unwrap();
        assert_eq!(p.pairing(&[2.0, 3.0], &[1.0, 3.0]).unwrap(), -2.0);
        assert_eq!(p.pairing(&[2.0, 3.0], &[2.0, 3.0]).unwrap(), 0.0);
        let p = orthant_problem([0.0, 0.0]);
        assert_eq!(p.pairing(&[1.0, 1.0], &[-0.5, 1.0]).unwrap(), 27.0 / 16.0);
    }

    #[test]
    fn affine_view() {
        let p = TviProblem::new(
            SquareTensor::identity_matrix(2),
            vec![3.0, -1.0],
            FeasibleSet::whole_space(2),
        )
        .unwrap();
        let (m, q) = p.as_affine().unwrap();
        assert_eq!(m, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(q, vec![3.0, -1.0]);
        assert!(matches!(
            orthant_problem([0.0, 0.0]).as_affine(),
            Err(Error::OrderRequirement { .. })
        ));
    }

    #[test]
    fn construction_checks_dimensions() {
        assert!(TviProblem::new(example_41(), vec![0.0], FeasibleSet::whole_space(2)).is_err());
        assert!(TviProblem::new(example_41(), vec![0.0; 2], FeasibleSet::whole_space(3)).is_err());
        let order_one = SquareTensor::zeros(1, 2).unwrap();
        assert!(TviProblem::new(order_one, vec![0.0; 2], FeasibleSet::whole_space(2)).is_err());
    }
}
