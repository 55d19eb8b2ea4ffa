use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Differentials raise the position.
    Cochain,
    /// Differentials lower the position.
    Chain,
}

/// A finite complex stored in arrow order: `differentials[i]` maps component `i` to
/// component `i + 1`. Component `i` sits at position `first_position + i` for cochain
/// complexes and `first_position - i` for chain complexes.
#[derive(Clone, Debug)]
pub struct FiniteComplex<F: Field> {
    field: F,
    direction: Direction,
    first_position: i64,
    dims: Vec<usize>,
    differentials: Vec<Matrix<F>>,
    label: String,
}

impl<F: Field> FiniteComplex<F> {
    pub fn new(
        field: &F,
        direction: Direction,
        first_position: i64,
        dims: Vec<usize>,
        differentials: Vec<Matrix<F>>,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Internal("complex with no components".into()));
        }
        if differentials.len() + 1 != dims.len() {
            return Err(Error::Internal("need one differential between each pair of components".into()));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.shape() != (dims[i + 1], dims[i]) {
                return Err(Error::Internal(format!(
                    "differential {i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        Ok(FiniteComplex {
            field: field.clone(),
            direction,
            first_position,
            dims,
            differentials,
            label: String::from("complex"),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn direction(&self) -> Direction {
        self.direction
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    /// Component dimensions in arrow order.
    pub fn component_dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn differentials(&self) -> &[Matrix<F>] {
        &self.differentials
    }

    pub fn position(&self, index: usize) -> i64 {
        match self.direction {
            Direction::Cochain => self.first_position + index as i64,
            Direction::Chain => self.first_position - index as i64,
        }
    }

    pub fn positions(&self) -> Vec<i64> {
        (0..self.dims.len()).map(|i| self.position(i)).collect()
    }

    /// Position of the first failure of `d ∘ d = 0`, if any.
    pub fn square_zero_violation(&self) -> Option<i64> {
        self.differentials
            .windows(2)
            .enumerate()
            .find(|(_, w)| !w[1].mul(&w[0]).is_zero())
            .map(|(i, _)| self.position(i))
    }

    pub fn check_square_zero(&self, degree: usize) -> Result<()> {
        match self.square_zero_violation() {
            None => Ok(()),
            Some(position) => Err(Error::NotAComplex { what: self.label.clone(), degree, position }),
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.differentials.iter().map(|d| d.rank()).collect()
    }

    /// Homology dimensions in arrow order; assumes `d ∘ d = 0`.
    pub fn homology_from_ranks(&self, ranks: &[usize]) -> Vec<usize> {
        (0..self.dims.len())
            .map(|i| {
                let out = if i < ranks.len() { ranks[i] } else { 0 };
                let inc = if i > 0 { ranks[i - 1] } else { 0 };
                self.dims[i] - out - inc
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if self.position(i).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Homology dimension at each component, in arrow order.
pub fn homology_dims<F: Field>(c: &FiniteComplex<F>) -> Result<Vec<usize>> {
    if let Some(position) = c.square_zero_violation() {
        return Err(Error::NotAComplex { what: c.label.clone(), degree: 0, position });
    }
    Ok(c.homology_from_ranks(&c.ranks()))
}

pub fn is_exact<F: Field>(c: &FiniteComplex<F>) -> Result<bool> {
    Ok(homology_dims(c)?.iter().all(|&h| h == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn identity_complex_is_exact() {
        let f = Rationals;
        let c = FiniteComplex::new(&f, Direction::Cochain, 0, vec![1, 1], vec![Matrix::identity(&f, 1)]).unwrap();
        assert_eq!(homology_dims(&c).unwrap(), vec![0, 0]);
        assert!(is_exact(&c).unwrap());
    }

    #[test]
    fn euler_obstruction() {
        let f = Rationals;
        let c = FiniteComplex::new(
            &f,
            Direction::Cochain,
            0,
            vec![0, 4, 3],
            vec![Matrix::zeros(&f, 4, 0), Matrix::zeros(&f, 3, 4)],
        )
        .unwrap();
        assert_eq!(c.euler_characteristic(), -1);
        assert!(!is_exact(&c).unwrap());
        assert_eq!(homology_dims(&c).unwrap(), vec![0, 4, 3]);
    }

    #[test]
    fn non_complex_is_rejected() {
        let f = Rationals;
        let id = Matrix::identity(&f, 1);
        let c = FiniteComplex::new(&f, Direction::Chain, 2, vec![1, 1, 1], vec![id.clone(), id]).unwrap();
        assert!(matches!(homology_dims(&c), Err(Error::NotAComplex { position: 2, .. })));
    }

    #[test]
    fn shapes_are_validated() {
        let f = Rationals;
        assert!(FiniteComplex::new(&f, Direction::Chain, 0, vec![1, 2], vec![Matrix::identity(&f, 1)]).is_err());
    }
}
