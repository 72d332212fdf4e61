//! The classical Hall algebra `H(C)` of the heart.
//!
//! Structure constants `g_{x,y}^z` count subrepresentations `x' ⊆ z` with
//! `x' ≅ x` and `z/x' ≅ y`. They are computed by enumerating every
//! subrepresentation of a representative of `z` once and tallying the
//! (sub, quotient) class pairs; the tally is memoized per `z`.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::element::HallElement;
use crate::error::Result;
use crate::heart::{Heart, IsoClass};
use crate::homotopy::{pushforward_l1, FnFinSupp, LFMap, LFType};
use crate::rep::{self, RepMorphism};

pub type HeartElement = HallElement<IsoClass>;

type SubTally = HashMap<(IsoClass, IsoClass), u64>;

pub struct ClassicalHall {
    heart: Arc<Heart>,
    tallies: RwLock<HashMap<IsoClass, Arc<SubTally>>>,
}

impl ClassicalHall {
    pub fn new(heart: Arc<Heart>) -> Self {
        ClassicalHall {
            heart,
            tallies: RwLock::new(HashMap::new()),
        }
    }

    pub fn heart(&self) -> &Arc<Heart> {
        &self.heart
    }

    pub fn unit(&self) -> HeartElement {
        HallElement::basis(IsoClass::zero())
    }

    fn tally(&self, z: &IsoClass) -> Result<Arc<SubTally>> {
        if let Some(t) = self.tallies.read().expect("tally cache").get(z) {
            return Ok(t.clone());
        }
        let h = &self.heart;
        let mut tally = SubTally::new();
        for s in rep::subreps(&h.rep(z), None, h.limits().subrep_bounds())? {
            let key = (h.decompose(&s.sub)?, h.decompose(&s.quotient)?);
            *tally.entry(key).or_default() += 1;
        }
        let tally = Arc::new(tally);
        self.tallies
            .write()
            .expect("tally cache")
            .insert(z.clone(), tally.clone());
        Ok(tally)
    }

    /// `g_{x,y}^z`: the number of subobjects `x' ⊆ z` with `x' ≅ x`, `z/x' ≅ y`.
    pub fn hall_number(&self, x: &IsoClass, y: &IsoClass, z: &IsoClass) -> Result<u64> {
        let h = &self.heart;
        let (dx, dy, dz) = (h.dims(x), h.dims(y), h.dims(z));
        if dx.iter().zip(&dy).zip(&dz).any(|((a, b), c)| a + b != *c) {
            return Ok(0);
        }
        Ok(self.tally(z)?.get(&(x.clone(), y.clone())).copied().unwrap_or(0))
    }

    /// `χ_x · χ_y = Σ_z g_{x,y}^z χ_z`.
    pub fn basis_product(&self, x: &IsoClass, y: &IsoClass) -> Result<HeartElement> {
        let h = &self.heart;
        if x.is_zero() {
            return Ok(HallElement::basis(y.clone()));
        }
        if y.is_zero() {
            return Ok(HallElement::basis(x.clone()));
        }
        let dz: Vec<usize> = h.dims(x).iter().zip(h.dims(y)).map(|(a, b)| a + b).collect();
        let mut out = HallElement::zero();
        for z in h.classes_with_dims(&dz) {
            let g = self.hall_number(x, y, &z)?;
            if g > 0 {
                out.add_term(z, BigRational::from_integer(BigInt::from(g)));
            }
        }
        Ok(out)
    }

    pub fn hall_product(&self, a: &HeartElement, b: &HeartElement) -> Result<HeartElement> {
        a.bilinear(b, |x, y| self.basis_product(x, y))
    }

    /// The orbit-sum form of `g_{x,y}^z`: enumerate `[x,z]_y` (monomorphisms
    /// with cokernel `≅ y`), let `Aut(x)` act by precomposition, and sum
    /// `|Stab(f)|⁻¹` over orbits. The sum is the pushforward of `1` along the
    /// action groupoid's map to a point. Negative Ext groups vanish between
    /// heart objects, so no further factors appear.
    pub fn orbit_check(&self, x: &IsoClass, y: &IsoClass, z: &IsoClass) -> Result<BigRational> {
        let h = &self.heart;
        let limit = h.limits().max_enumeration;
        let (rx, rz) = (h.rep(x), h.rep(z));
        let hom = rep::hom_basis(&rx, &rz)?;
        let mut admissible: Vec<RepMorphism> = Vec::new();
        for f in rep::enumerate_span(&hom, &rx, &rz, limit)? {
            if f.is_injective() && h.decompose(&rz.quotient(&f.image()))? == *y {
                admissible.push(f);
            }
        }
        let end = rep::hom_basis(&rx, &rx)?;
        let auts: Vec<RepMorphism> = rep::enumerate_span(&end, &rx, &rx, limit)?
            .filter(RepMorphism::is_invertible)
            .collect();

        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut stabilizers = Vec::new();
        for f in &admissible {
            if seen.contains(&f.flatten()) {
                continue;
            }
            let mut stab = 0u64;
            for g in &auts {
                let moved = f.compose(g);
                if moved == *f {
                    stab += 1;
                }
                seen.insert(moved.flatten());
            }
            stabilizers.push(stab);
        }
        let groupoid = LFType::groupoid(&stabilizers)?;
        let total = pushforward_l1(&LFMap::to_point(&groupoid), &FnFinSupp::ones(&groupoid))?;
        Ok(total.get(0))
    }
}
