use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::Ring;
use crate::scalar::GaussianRational;

/// An associative `Q(i)`-algebra that polynomials can be evaluated in.
///
/// Operations are fallible because some carriers (bounded free-algebra
/// elements, matrices of mismatched size) reject certain products.
pub trait Algebra: Clone {
    fn add(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn scale(&self, c: &GaussianRational) -> Self;

    fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-GaussianRational::from_int(1)))
    }
}

impl<R: Ring> Algebra for Matrix<R> {
    fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows(), self.cols()) != (other.rows(), other.cols()) {
            return Err(Error::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(self.clone() + other.clone())
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(self.matmul(other))
    }

    fn scale(&self, c: &GaussianRational) -> Self {
        let c = R::from_scalar(c);
        self.map(|e| e.clone() * c.clone())
    }
}
