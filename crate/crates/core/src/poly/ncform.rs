//! Normal forms in a free algebra modulo a two-sided ideal, truncated at a
//! fixed word length.
//!
//! Every product `u·g·v` of a relation with words that stays within the cap is
//! put into a fully reduced echelon form keyed by largest word. Reducing an
//! element against it gives the unique representative with zero coefficient
//! on every leading word.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::One;

use super::free::{FreePoly, Word};
use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

/// Generator names `xi1, …, xi4` of the conifold algebra.
pub fn xi_generators() -> Vec<String> {
    (1..=4).map(|k| format!("xi{k}")).collect()
}

/// The products `ξ₁ξ₃, ξ₂ξ₄, ξ₁ξ₄, ξ₂ξ₃` that the four conifold coordinates
/// map to.
pub fn xi_products() -> Vec<FreePoly> {
    let g = xi_generators();
    let x = |i| FreePoly::var(&g, 4, i);
    [(0, 2), (1, 3), (0, 3), (1, 2)].iter().map(|&(a, b)| x(a).mul(&x(b)).expect("degree two within cap")).collect()
}

/// The six commutators of the four products, in pair order (1,2), (1,3), …,
/// (3,4).
pub fn xi_relations() -> Vec<FreePoly> {
    let p = xi_products();
    let mut out = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            out.push(FreePoly::commutator(&p[a], &p[b]).expect("degree four within cap"));
        }
    }
    out
}

/// Truncated two-sided ideal spanned by `u·g·v` for the given relations.
#[derive(Clone, Debug)]
pub struct TruncatedIdeal {
    generators: Vec<String>,
    cap: usize,
    /// Leading word mapped to the basis element with that word as its
    /// largest term (coefficient one, no other leading word present).
    rows: BTreeMap<Word, FreePoly>,
}

impl TruncatedIdeal {
    pub fn new(generators: &[String], relations: &[FreePoly], cap: usize) -> Result<Self> {
        let mut ideal = Self { generators: generators.to_vec(), cap, rows: BTreeMap::new() };
        let n = generators.len();
        for g in relations {
            let Some(d) = g.degree() else { continue };
            if d > cap {
                return Err(Error::DegreeCapExceeded { degree: d, cap });
            }
            let g = g.with_cap(cap)?;
            for left in 0..=cap - d {
                for right in 0..=cap - d - left {
                    for u in Word::all_of_length(n, left) {
                        let gu = FreePoly::word(generators, cap, u, GaussianRational::one())?.mul(&g)?;
                        for v in Word::all_of_length(n, right) {
                            let elem = gu.mul(&FreePoly::word(generators, cap, v, GaussianRational::one())?)?;
                            ideal.insert(elem);
                        }
                    }
                }
            }
        }
        Ok(ideal)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Dimension of the truncated ideal as a vector space.
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    fn reduce_against(&self, elem: &FreePoly) -> FreePoly {
        let mut out = elem.clone();
        for (w, c) in elem.terms() {
            if let Some(row) = self.rows.get(w) {
                out = out.sub(&row.scale(c));
            }
        }
        out
    }

    fn insert(&mut self, elem: FreePoly) {
        let r = self.reduce_against(&elem);
        let Some((lead, c)) = r.terms().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
            return;
        };
        let row = r.scale(&c.inv().expect("nonzero leading coefficient"));
        for other in self.rows.values_mut() {
            let k = other.coefficient(&lead);
            if !num_traits::Zero::is_zero(&k) {
                *other = other.sub(&row.scale(&k));
            }
        }
        self.rows.insert(lead, row);
    }

    /// Canonical representative of `elem`; zero iff `elem` lies in the
    /// truncated ideal.
    pub fn normal_form(&self, elem: &FreePoly) -> Result<FreePoly> {
        if elem.generators() != self.generators.as_slice() {
            return Err(Error::Shape(format!(
                "element over {:?}, ideal over {:?}",
                elem.generators(),
                self.generators
            )));
        }
        if let Some(d) = elem.degree().filter(|&d| d > self.cap) {
            return Err(Error::DegreeCapExceeded { degree: d, cap: self.cap });
        }
        Ok(self.reduce_against(&elem.with_cap(self.cap)?))
    }
}

fn xi_ideal() -> &'static TruncatedIdeal {
    static IDEAL: OnceLock<TruncatedIdeal> = OnceLock::new();
    IDEAL.get_or_init(|| TruncatedIdeal::new(&xi_generators(), &xi_relations(), 4).expect("relations have degree four"))
}

/// Normal form of an element of `Q(i)⟨ξ₁,…,ξ₄⟩` of degree at most four modulo
/// the conifold-algebra relations.
pub fn nc_normal_form_degree4(elem: &FreePoly) -> Result<FreePoly> {
    xi_ideal().normal_form(elem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_free;

    fn xi(text: &str) -> FreePoly {
        parse_free(text, &xi_generators(), 4).unwrap()
    }

    #[test]
    fn generators_reduce_to_zero() {
        for r in xi_relations() {
            assert!(nc_normal_form_degree4(&r).unwrap().is_zero());
        }
        assert!(nc_normal_form_degree4(&xi("[xi1*xi3, xi2*xi4]")).unwrap().is_zero());
        // No overlaps at degree four: the six relations are independent.
        assert_eq!(xi_ideal().dimension(), 6);
    }

    #[test]
    fn low_degree_untouched() {
        let e = xi("xi1*xi2");
        assert_eq!(nc_normal_form_degree4(&e).unwrap(), e);
    }

    #[test]
    fn conifold_pullback_is_not_in_the_ideal() {
        let e = xi("xi1*xi3*xi2*xi4 - xi1*xi4*xi2*xi3");
        let nf = nc_normal_form_degree4(&e).unwrap();
        assert!(!nf.is_zero());
        assert_eq!(nc_normal_form_degree4(&nf).unwrap(), nf);
    }

    #[test]
    fn above_cap_rejected() {
        let g = xi_generators();
        let e = parse_free("xi1^5", &g, 5).unwrap();
        assert!(matches!(nc_normal_form_degree4(&e), Err(Error::DegreeCapExceeded { degree: 5, cap: 4 })));
    }
}
