use crate::scalar::Scalar;

/// A polynomial `sum a_k x^k` in the power basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialPolyOf<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> MonomialPolyOf<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    /// Product of linear factors `lead * prod (x - r)`.
    pub fn from_roots(lead: T, roots: &[T]) -> Self {
        let mut p = Self::new(vec![lead]);
        for r in roots {
            p = p.mul(&Self::new(vec![-r.clone(), T::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, a| acc * x.clone() + a.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![T::zero()]);
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, a)| a.clone() * T::from_int(k as i64)).collect())
    }
}
