//! Places of ℙ¹ over ℚ and vanishing orders.
//!
//! A finite place bundles the roots of a monic squarefree polynomial; the
//! infinite place carries the weighted-degree convention
//! `ord_∞(p) = bound − deg p`. Splittings are gcd-refined so that every
//! polynomial of interest has a single well-defined vanishing order on each
//! place — no root extraction ever happens.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Coeff;
use crate::{QPoly, Rat};

#[derive(Clone, PartialEq, Eq)]
pub enum Place {
    /// Roots of a monic squarefree polynomial, weighted by its degree.
    Finite(QPoly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(p) => p.deg().expect("nonconstant") as u32,
            Place::Infinity => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn min_poly(&self) -> Option<&QPoly> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        }
    }

    pub fn name(&self) -> String {
        self.name_var('t')
    }

    pub fn name_var(&self, var: char) -> String {
        match self {
            Place::Finite(p) => p.to_string_var(&var.to_string()),
            Place::Infinity => "infinity".to_string(),
        }
    }

    fn sort_key(&self) -> (bool, usize, Vec<Rat>) {
        match self {
            Place::Finite(p) => (false, p.deg_or_zero(), p.coeffs().to_vec()),
            Place::Infinity => (true, 0, Vec::new()),
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({})", self.name())
    }
}

/// Yun's squarefree decomposition: returns monic pairwise-coprime squarefree
/// factors with their multiplicities, lowest multiplicity first. Constants
/// decompose to the empty list.
pub fn squarefree_decompose<T: Coeff>(p: &Poly<T>) -> Result<Vec<(Poly<T>, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let f = p.monic();
    let g = f.gcd(&f.derivative());
    if g.is_constant() {
        return Ok(vec![(f, 1)]);
    }
    let mut c = f.exact_div(&g).expect("gcd divides");
    let mut d = &f.derivative().exact_div(&g).expect("gcd divides") - &c.derivative();
    let mut out = Vec::new();
    let mut i = 1u32;
    while !c.is_constant() {
        let a = c.gcd(&d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        c = c.exact_div(&a).expect("gcd divides");
        d = &d.exact_div(&a).expect("gcd divides") - &c.derivative();
        i += 1;
    }
    Ok(out)
}

/// Refines a set of monic squarefree polynomials into a pairwise-coprime
/// basis with the same root set (a gcd-free basis). Every input is a product
/// of basis elements up to a constant.
fn coprime_basis(inputs: Vec<QPoly>) -> Vec<QPoly> {
    let mut basis: Vec<QPoly> = Vec::new();
    'inputs: for mut f in inputs {
        let mut i = 0;
        while i < basis.len() {
            let g = basis[i].clone();
            let d = f.gcd(&g);
            if d.is_constant() {
                i += 1;
                continue;
            }
            if d == g {
                // all roots of g occur in f; strip them
                f = f.exact_div(&d).expect("gcd divides");
            } else {
                // split g into d and g/d (coprime since g is squarefree)
                basis[i] = d.clone();
                basis.push(g.exact_div(&d).expect("gcd divides"));
                f = f.exact_div(&d).expect("gcd divides");
                i = 0;
            }
            if f.is_constant() {
                continue 'inputs;
            }
        }
        if !f.is_constant() {
            basis.push(f);
        }
    }
    basis
}

/// Splits the joint zero locus of `ps` into finite [`Place`]s on which every
/// input has a constant vanishing order. Achieved by refining the union of
/// Yun factors of all inputs into a gcd-free basis.
pub fn compatible_splitting(ps: &[QPoly]) -> Result<Vec<Place>> {
    let mut factors = Vec::new();
    for p in ps {
        for (f, _) in squarefree_decompose(p)? {
            factors.push(f);
        }
    }
    let mut basis = coprime_basis(factors);
    basis.sort_by(|a, b| Place::Finite(a.clone()).cmp(&Place::Finite(b.clone())));
    basis.dedup();
    Ok(basis.into_iter().map(Place::Finite).collect())
}

/// Vanishing order of `p` at a place. At `Infinity` this is
/// `weighted_degree_bound − deg p`; at a finite place the multiplicity of the
/// place's minimal polynomial.
pub fn ord_at(p: &QPoly, place: &Place, weighted_degree_bound: u32) -> Result<u32> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match place {
        Place::Finite(min_poly) => p.multiplicity_of(min_poly),
        Place::Infinity => {
            let d = p.deg_or_zero();
            if d > weighted_degree_bound as usize {
                return Err(Error::BoundViolation {
                    degree: d,
                    bound: weighted_degree_bound,
                });
            }
            Ok(weighted_degree_bound - d as u32)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_i64;

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_i64(cs)
    }

    /// Oracle: reassemble the decomposition and compare to the monic input,
    /// and confirm each factor is squarefree via gcd(f, f') = 1.
    fn check_squarefree_oracle(input: &QPoly, decomp: &[(QPoly, u32)]) {
        let mut prod = QPoly::one();
        for (f, m) in decomp {
            assert!(f.gcd(&f.derivative()).is_constant(), "factor not squarefree");
            assert_eq!(f, &f.monic(), "factor not monic");
            prod = &prod * &f.pow(*m);
        }
        for (i, (a, _)) in decomp.iter().enumerate() {
            for (b, _) in &decomp[i + 1..] {
                assert!(a.gcd(b).is_constant(), "factors not coprime");
            }
        }
        assert_eq!(prod, input.monic());
    }

    #[test]
    fn squarefree_t3_minus_27() {
        let f = p(&[-27, 0, 0, 1]);
        let d = squarefree_decompose(&f).unwrap();
        assert_eq!(d, vec![(f.clone(), 1)]);
        check_squarefree_oracle(&f, &d);
    }

    #[test]
    fn squarefree_with_multiplicities() {
        // 27 t^4 (t^2 - 1)
        let f = &p(&[0, 0, 0, 0, 27]) * &p(&[-1, 0, 1]);
        let d = squarefree_decompose(&f).unwrap();
        assert_eq!(d, vec![(p(&[-1, 0, 1]), 1), (p(&[0, 1]), 4)]);
        check_squarefree_oracle(&f, &d);
    }

    #[test]
    fn squarefree_constant_and_zero() {
        assert_eq!(squarefree_decompose(&p(&[5])).unwrap(), vec![]);
        assert_eq!(
            squarefree_decompose(&QPoly::zero()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn splitting_singleton() {
        let f = p(&[-27, 0, 0, 1]);
        let places = compatible_splitting(std::slice::from_ref(&f)).unwrap();
        assert_eq!(places, vec![Place::Finite(f.monic())]);
    }

    #[test]
    fn splitting_by_multiplicity() {
        // [t^2 (t-1), t (t-1)^2] must split {t} from {t-1}: orders (2,1) vs (1,2)
        let p1 = &p(&[0, 0, 1]) * &p(&[-1, 1]);
        let p2 = &p(&[0, 1]) * &p(&[-1, 1]).pow(2);
        let places = compatible_splitting(&[p1.clone(), p2.clone()]).unwrap();
        assert_eq!(
            places,
            vec![Place::Finite(p(&[-1, 1])), Place::Finite(p(&[0, 1]))]
        );
        // brute-force oracle over the rational roots 0 and 1
        let orders = |poly: &QPoly, root: i64| {
            let lin = p(&[-root, 1]);
            poly.multiplicity_of(&lin).unwrap()
        };
        assert_eq!((orders(&p1, 0), orders(&p2, 0)), (2, 1));
        assert_eq!((orders(&p1, 1), orders(&p2, 1)), (1, 2));
        for place in &places {
            for input in [&p1, &p2] {
                // every root of the place has one order in each input
                let m = input.multiplicity_of(place.min_poly().unwrap()).unwrap();
                assert!(m >= 1);
            }
        }
    }

    #[test]
    fn splitting_of_constants_is_empty() {
        assert_eq!(compatible_splitting(&[p(&[7])]).unwrap(), vec![]);
    }

    #[test]
    fn splitting_is_pairwise_coprime_and_divides() {
        let inputs = [
            &p(&[0, 1]).pow(2) * &p(&[-1, 0, 1]),
            &p(&[0, 1]) * &p(&[-4, 0, 1]).pow(3),
            p(&[2, 3, 1]), // (t+1)(t+2)
        ];
        let places = compatible_splitting(&inputs).unwrap();
        for (i, a) in places.iter().enumerate() {
            for b in &places[i + 1..] {
                assert!(a
                    .min_poly()
                    .unwrap()
                    .gcd(b.min_poly().unwrap())
                    .is_constant());
            }
        }
        // product of place polys to their recorded orders divides each input exactly
        for input in &inputs {
            let mut rebuilt = QPoly::one();
            for place in &places {
                let m = ord_at(input, place, 0).unwrap();
                rebuilt = &rebuilt * &place.min_poly().unwrap().pow(m);
            }
            assert!(input.exact_div(&rebuilt).is_some());
        }
    }

    #[test]
    fn ord_at_finite_and_infinity() {
        let f = p(&[-27, 0, 0, 1]);
        let place = Place::Finite(f.clone());
        assert_eq!(ord_at(&f, &place, 0).unwrap(), 1);
        assert_eq!(ord_at(&f, &Place::Infinity, 12).unwrap(), 9);
        assert_eq!(ord_at(&p(&[5]), &place, 0).unwrap(), 0);
        assert_eq!(
            ord_at(&f, &Place::Infinity, 2),
            Err(Error::BoundViolation {
                degree: 3,
                bound: 2
            })
        );
    }

    #[test]
    fn ord_additivity_including_infinity() {
        let a = &p(&[0, 1]).pow(2) * &p(&[1, 1]);
        let b = &p(&[0, 1]) * &p(&[-1, 1]);
        let prod = &a * &b;
        let places = compatible_splitting(&[a.clone(), b.clone(), prod.clone()]).unwrap();
        for place in places.iter().chain([&Place::Infinity]) {
            let (ba, bb) = (6u32, 4u32);
            assert_eq!(
                ord_at(&prod, place, ba + bb).unwrap(),
                ord_at(&a, place, ba).unwrap() + ord_at(&b, place, bb).unwrap()
            );
        }
    }

    #[test]
    fn weighted_orders_sum_to_bound() {
        // Σ ord(p, place)·deg(place) over all places incl. infinity = bound
        let f = &(&p(&[0, 1]).pow(3) * &p(&[-2, 0, 1])) * &p(&[1, 1, 1]);
        let places = compatible_splitting(std::slice::from_ref(&f)).unwrap();
        let bound = 12u32;
        let mut total = 0u32;
        for place in places.iter().chain([&Place::Infinity]) {
            total += ord_at(&f, place, bound).unwrap() * place.degree();
        }
        assert_eq!(total, bound);
        let _ = rat_i64(0);
    }
}
