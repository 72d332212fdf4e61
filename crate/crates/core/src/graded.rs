//! Objects of `D^b(C)` for the hereditary heart `C`, stored up to isomorphism.
//!
//! Every object splits as `⊕_n x_n[n]` with `x_n` in the heart, so an object is
//! a finitely supported map from shift degree to heart class.
//!
//! Shift convention: `Hom_D(x[n], y[m]) = Ext^{m−n}(x, y)`, which for a
//! hereditary heart is nonzero only when `m − n ∈ {0, 1}`. As complexes,
//! `x[n]` is `x` placed in cohomological degree `−n`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::heart::{Heart, IsoClass};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedObject {
    components: BTreeMap<i64, IsoClass>,
}

impl GradedObject {
    pub fn zero() -> Self {
        GradedObject::default()
    }

    /// `x[n]` for a heart class `x`.
    pub fn shifted(x: IsoClass, n: i64) -> Self {
        let mut g = GradedObject::zero();
        g.insert(n, x);
        g
    }

    /// `x[0]`.
    pub fn heart(x: IsoClass) -> Self {
        Self::shifted(x, 0)
    }

    pub fn from_components(components: impl IntoIterator<Item = (i64, IsoClass)>) -> Self {
        let mut g = GradedObject::zero();
        for (n, x) in components {
            g.insert(n, x);
        }
        g
    }

    /// Adds `x[n]` as a direct summand.
    pub fn insert(&mut self, n: i64, x: IsoClass) {
        if x.is_zero() {
            return;
        }
        let merged = match self.components.get(&n) {
            Some(existing) => existing.direct_sum(&x),
            None => x,
        };
        self.components.insert(n, merged);
    }

    pub fn component(&self, n: i64) -> IsoClass {
        self.components.get(&n).cloned().unwrap_or_default()
    }

    /// Nonzero components in ascending degree.
    pub fn components(&self) -> impl DoubleEndedIterator<Item = (i64, &IsoClass)> {
        self.components.iter().map(|(&n, x)| (n, x))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.components.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Whether the object lies in the heart (degree 0 only).
    pub fn is_heart(&self) -> bool {
        self.components.keys().all(|&n| n == 0)
    }

    pub fn shift(&self, by: i64) -> GradedObject {
        GradedObject {
            components: self.components.iter().map(|(&n, x)| (n + by, x.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &GradedObject) -> GradedObject {
        let mut out = self.clone();
        for (n, x) in other.components() {
            out.insert(n, x.clone());
        }
        out
    }
}

/// `dim Hom_D(x, z[i])`.
///
/// `Hom_D(x_n[n], z_m[m+i]) = Ext^{m+i−n}(x_n, z_m)`, so only `m = n − i`
/// (Hom) and `m = n − i + 1` (Ext¹) contribute.
pub fn derived_hom_dim(heart: &Heart, x: &GradedObject, z: &GradedObject, i: i64) -> usize {
    x.components()
        .map(|(n, xn)| {
            heart.hom_dim(xn, &z.component(n - i)) + heart.ext1_dim(xn, &z.component(n - i + 1))
        })
        .sum()
}

/// `|Aut_D(x)| = ∏_n |Aut(x_n)| · ∏_n p^{dim Ext¹(x_n, x_{n+1})}`.
///
/// `End_D(⊕ x_n[n])` is triangular: `End(x_n)` on the diagonal and
/// `Hom(x_n[n], x_{n+1}[n+1]) = Ext¹(x_n, x_{n+1})` just off it. Units are
/// exactly the elements with invertible diagonal.
pub fn graded_aut_order(heart: &Heart, x: &GradedObject) -> BigUint {
    let p = BigUint::from(heart.p());
    x.components().fold(BigUint::one(), |acc, (n, xn)| {
        let off_diagonal = heart.ext1_dim(xn, &x.component(n + 1));
        acc * heart.aut_order(xn) * Pow::pow(&p, off_diagonal)
    })
}

/// Every graded object supported in `degrees` whose components have total
/// dimension at most `max_dim` each.
pub fn graded_objects(heart: &Heart, degrees: std::ops::RangeInclusive<i64>, max_dim: usize) -> Vec<GradedObject> {
    let per_degree = heart.classes_up_to(max_dim);
    let mut out = vec![GradedObject::zero()];
    for n in degrees {
        out = out
            .into_iter()
            .flat_map(|g| {
                per_degree.iter().map(move |x| {
                    let mut next = g.clone();
                    next.insert(n, x.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// Candidate middle terms `z` of triangles `x → z → y → x[1]`.
///
/// The long exact cohomology sequence `H^i(x) → H^i(z) → H^i(y)` bounds each
/// component of `z` by the sum of those of `x` and `y`, degree by degree.
pub fn middle_term_candidates(heart: &Heart, x: &GradedObject, y: &GradedObject) -> Vec<GradedObject> {
    let degrees: Vec<i64> = {
        let mut d: Vec<i64> = x.degrees().chain(y.degrees()).collect();
        d.sort_unstable();
        d.dedup();
        d
    };
    let mut out = vec![GradedObject::zero()];
    for n in degrees {
        let bound: Vec<usize> = heart
            .dims(&x.component(n))
            .iter()
            .zip(heart.dims(&y.component(n)))
            .map(|(a, b)| a + b)
            .collect();
        let options: Vec<IsoClass> = Heart::dims_below(&bound)
            .iter()
            .flat_map(|d| heart.classes_with_dims(d))
            .collect();
        out = out
            .into_iter()
            .flat_map(|g| {
                options.iter().map(move |c| {
                    let mut next = g.clone();
                    next.insert(n, c.clone());
                    next
                })
            })
            .collect();
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_hom_examples() {
        let a1 = Heart::linear_a(1, 2).unwrap();
        let s = IsoClass::indecomposable(0);
        let s0 = GradedObject::shifted(s.clone(), 0);
        let s1 = GradedObject::shifted(s.clone(), 1);
        assert_eq!(derived_hom_dim(&a1, &s0, &s1, 0), 0);
        assert_eq!(derived_hom_dim(&a1, &s0, &s0, 0), 1);
        // Hom(S, S[1][-1]) = Hom(S, S).
        assert_eq!(derived_hom_dim(&a1, &s0, &s1, -1), 1);

        let a2 = Heart::linear_a(2, 2).unwrap();
        let x = GradedObject::shifted(IsoClass::indecomposable(0), 0);
        let z = GradedObject::shifted(IsoClass::indecomposable(1), 1);
        assert_eq!(derived_hom_dim(&a2, &x, &z, 0), 1);
    }

    #[test]
    fn graded_aut_examples() {
        let a1 = Heart::linear_a(1, 2).unwrap();
        let s = IsoClass::indecomposable(0);
        let x = GradedObject::from_components([(0, s.clone()), (1, s.clone())]);
        assert_eq!(graded_aut_order(&a1, &x), BigUint::from(1u32));
        assert_eq!(graded_aut_order(&a1, &GradedObject::heart(s)), BigUint::from(1u32));

        let a2 = Heart::linear_a(2, 2).unwrap();
        let x = GradedObject::from_components([(0, IsoClass::indecomposable(0)), (1, IsoClass::indecomposable(1))]);
        assert_eq!(graded_aut_order(&a2, &x), BigUint::from(2u32));
    }

    #[test]
    fn family_sizes() {
        let a1 = Heart::linear_a(1, 2).unwrap();
        assert_eq!(graded_objects(&a1, 0..=1, 1).len(), 4);
        let a2 = Heart::linear_a(2, 2).unwrap();
        assert_eq!(graded_objects(&a2, 0..=1, 1).len(), 9);
    }

    #[test]
    fn shift_and_sum() {
        let s = IsoClass::indecomposable(0);
        let x = GradedObject::shifted(s.clone(), 0);
        assert_eq!(x.shift(2), GradedObject::shifted(s.clone(), 2));
        let sum = x.direct_sum(&x);
        assert_eq!(sum.component(0), IsoClass::from_parts([(0, 2)]));
        assert!(sum.is_heart());
        assert!(!x.shift(1).is_heart());
    }
}
