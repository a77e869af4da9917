//! Reduced rational functions num/den with monic denominator.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Coeff;

#[derive(Clone, PartialEq)]
pub struct RatFunc<T> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Coeff> RatFunc<T> {
    /// Reduces by the gcd and normalises the denominator to be monic.
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let lead = den.leading().expect("nonzero").clone();
        let num = Poly::new(
            num.coeffs()
                .iter()
                .map(|c| c.clone() / lead.clone())
                .collect(),
        );
        Ok(RatFunc {
            num,
            den: den.monic(),
        })
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Degree as a self-map of ℙ¹: max(deg num, deg den) of the reduced form.
    pub fn map_degree(&self) -> usize {
        self.num.deg_or_zero().max(self.den.deg_or_zero())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    /// Maps coefficients into another scalar, preserving the num/den split.
    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U + Copy) -> RatFunc<U> {
        RatFunc {
            num: self.num.map(f),
            den: self.den.map(f),
        }
    }

    pub fn to_string_var(&self, var: &str) -> String
    where
        T: fmt::Display,
    {
        if self.den.is_constant() {
            self.num.to_string_var(var)
        } else {
            format!(
                "({})/({})",
                self.num.to_string_var(var),
                self.den.to_string_var(var)
            )
        }
    }
}

impl<T: Coeff> fmt::Debug for RatFunc<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({:?} / {:?})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use crate::{QPoly, QRatFunc};

    #[test]
    fn reduces_common_factor() {
        // (t^2 - 1)/(t - 1) -> t + 1
        let f = QRatFunc::new(QPoly::from_i64(&[-1, 0, 1]), QPoly::from_i64(&[-1, 1])).unwrap();
        assert_eq!(f.num(), &QPoly::from_i64(&[1, 1]));
        assert_eq!(f.den(), &QPoly::one());
        assert_eq!(f.map_degree(), 1);
    }

    #[test]
    fn monic_denominator() {
        // t/(2t + 2) -> (1/2 t)/(t + 1)
        let f = QRatFunc::new(QPoly::from_i64(&[0, 1]), QPoly::from_i64(&[2, 2])).unwrap();
        assert_eq!(f.den(), &QPoly::from_i64(&[1, 1]));
        assert_eq!(f.num(), &QPoly::from_i64(&[0, 1]).scale(&crate::scalar::rat(1, 2)));
    }

    #[test]
    fn zero_numerator_normalises() {
        let f = QRatFunc::new(QPoly::zero(), QPoly::from_i64(&[3, 1])).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.den(), &QPoly::one());
        assert_eq!(f.map_degree(), 0);
    }
}
