//! Finite formal linear combinations of basis labels with exact rational
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `Σ c_x χ_x` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HallElement<L: Ord> {
    terms: BTreeMap<L, BigRational>,
}

impl<L: Ord + Clone> HallElement<L> {
    pub fn zero() -> Self {
        HallElement { terms: BTreeMap::new() }
    }

    /// The basis element `χ_label`.
    pub fn basis(label: L) -> Self {
        Self::term(label, BigRational::one())
    }

    pub fn term(label: L, coeff: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(label, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, label: &L) -> BigRational {
        self.terms.get(label).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, label: L, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(label) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &HallElement<L>, scale: &BigRational) {
        for (label, c) in &other.terms {
            self.add_term(label.clone(), c * scale);
        }
    }

    pub fn add(&self, other: &HallElement<L>) -> HallElement<L> {
        let mut out = self.clone();
        out.add_scaled(other, &BigRational::one());
        out
    }

    pub fn scale(&self, s: &BigRational) -> HallElement<L> {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &BigRational)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.terms.keys()
    }

    /// Applies `f` to every label, summing coefficients that collide.
    pub fn map_labels<M: Ord + Clone>(&self, mut f: impl FnMut(&L) -> M) -> HallElement<M> {
        let mut out = HallElement::zero();
        for (label, c) in &self.terms {
            out.add_term(f(label), c.clone());
        }
        out
    }

    /// Bilinear extension of a product on basis elements.
    pub fn bilinear<M: Ord + Clone, E>(
        &self,
        other: &HallElement<L>,
        mut basis_product: impl FnMut(&L, &L) -> Result<HallElement<M>, E>,
    ) -> Result<HallElement<M>, E> {
        let mut out = HallElement::zero();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                out.add_scaled(&basis_product(x, y)?, &(cx * cy));
            }
        }
        Ok(out)
    }
}

impl<L: Ord + Clone> Default for HallElement<L> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<L: Ord + fmt::Debug> fmt::Debug for HallElement<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (label, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{label:?}")?;
        }
        Ok(())
    }
}

/// `p^e` for a possibly negative exponent.
pub fn prime_power(p: u32, e: i64) -> BigRational {
    let base = BigInt::from(p);
    let magnitude = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(magnitude)
    } else {
        BigRational::new(BigInt::one(), magnitude)
    }
}

/// Reduced `a/b` with `b ≥ 1`.
pub fn fraction_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_fraction(s: &str) -> Option<BigRational> {
    let (n, d) = s.trim().split_once('/')?;
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    if d <= BigInt::zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}
