//! Bivariate polynomials in (t, s): polynomials in `s` whose coefficients
//! are polynomials in `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::poly::Poly;
use crate::scalar::Coeff;

/// `coeffs[k]` is the `t`-polynomial coefficient of `s^k`; trailing zero
/// coefficients are trimmed.
#[derive(Clone, PartialEq)]
pub struct BiPoly<T> {
    coeffs: Vec<Poly<T>>,
}

impl<T: Coeff> BiPoly<T> {
    pub fn new(mut coeffs: Vec<Poly<T>>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    pub fn zero() -> Self {
        BiPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        BiPoly::new(vec![Poly::constant(c)])
    }

    /// Embeds a polynomial in `t`.
    pub fn from_t(p: Poly<T>) -> Self {
        BiPoly::new(vec![p])
    }

    /// The variable `s`.
    pub fn var_s() -> Self {
        BiPoly::new(vec![Poly::zero(), Poly::one()])
    }

    /// The variable `t`.
    pub fn var_t() -> Self {
        BiPoly::from_t(Poly::var())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Poly<T>] {
        &self.coeffs
    }

    pub fn deg_s(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg_t(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(Poly::deg).max()
    }

    /// Substitutes `t = t0` in every coefficient, leaving a polynomial in `s`.
    pub fn specialize(&self, t0: &T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| c.eval(t0)).collect())
    }

    /// The underlying `t`-polynomial when no `s` appears.
    pub fn as_poly_t(&self) -> Option<&Poly<T>> {
        match self.coeffs.len() {
            0 => None, // zero: caller treats separately
            1 => Some(&self.coeffs[0]),
            _ => None,
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        BiPoly::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BiPoly::constant(T::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_string_vars(&self) -> String
    where
        T: fmt::Display,
    {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string_var("t");
            let part = match k {
                0 => cs,
                _ => {
                    let head = if cs == "1" {
                        String::new()
                    } else {
                        format!("({cs})*")
                    };
                    if k == 1 {
                        format!("{head}s")
                    } else {
                        format!("{head}s^{k}")
                    }
                }
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

impl<T: Coeff> fmt::Debug for BiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({:?})", self.coeffs)
    }
}

impl<T: Coeff> Add for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn add(self, rhs: &BiPoly<T>) -> BiPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Poly::zero();
        BiPoly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl<T: Coeff> Sub for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn sub(self, rhs: &BiPoly<T>) -> BiPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Poly::zero();
        BiPoly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).unwrap_or(&zero) - rhs.coeffs.get(k).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl<T: Coeff> Mul for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn mul(self, rhs: &BiPoly<T>) -> BiPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly::new(out)
    }
}

impl<T: Coeff> Neg for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn neg(self) -> BiPoly<T> {
        BiPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use crate::scalar::rat_i64;
    use crate::{QBiPoly, QPoly};

    #[test]
    fn specialize_substitutes_t() {
        // t*s + 1 at t = 2 -> 2s + 1
        let b = &(&QBiPoly::var_t() * &QBiPoly::var_s()) + &QBiPoly::constant(rat_i64(1));
        let s = b.specialize(&rat_i64(2));
        assert_eq!(s, QPoly::from_i64(&[1, 2]));
    }

    #[test]
    fn specialize_constant_in_t_is_identity() {
        // s^2 + 3, no t anywhere
        let b = &QBiPoly::var_s().pow(2) + &QBiPoly::constant(rat_i64(3));
        assert_eq!(b.specialize(&rat_i64(0)), b.specialize(&rat_i64(9)));
        assert_eq!(b.specialize(&rat_i64(5)), QPoly::from_i64(&[3, 0, 1]));
    }

    #[test]
    fn degenerate_slice_is_zero() {
        // (t^2 - 1)*s^2 at t = 1 -> 0
        let t2m1 = QBiPoly::from_t(QPoly::from_i64(&[-1, 0, 1]));
        let b = &t2m1 * &QBiPoly::var_s().pow(2);
        assert!(b.specialize(&rat_i64(1)).is_zero());
        assert!(!b.specialize(&rat_i64(2)).is_zero());
    }
}
