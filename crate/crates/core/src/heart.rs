//! The heart `rep_{F_p}(Q)` of a finite-type quiver up to isomorphism.
//!
//! A [`Heart`] owns the quiver, the field, the enumeration bounds and the
//! list of indecomposables; isomorphism classes are multisets over that list
//! (Krull–Schmidt). Derived invariants of classes are memoized here and shared
//! read-only by the Hall algebra engines.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FpMatrix, PrimeField};
use crate::quiver::{DimVector, Quiver};
use crate::rep::{self, Rep, SubrepBounds};

/// Enumeration bounds. Exceeding any of them is a [`Error::Resource`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest endomorphism ring (or Hom space) that may be enumerated.
    pub max_enumeration: u64,
    /// Largest total dimension whose subrepresentations may be enumerated.
    pub max_subrep_dim: usize,
    /// Largest number of candidate subspace tuples per subrepresentation search.
    pub max_candidates: u64,
    /// Largest number of arrow-matrix tuples tried per indecomposable search.
    pub max_rep_search: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enumeration: 1 << 16,
            max_subrep_dim: 6,
            max_candidates: 1 << 20,
            max_rep_search: 1 << 16,
        }
    }
}

impl Limits {
    pub fn subrep_bounds(&self) -> SubrepBounds {
        SubrepBounds {
            max_total_dim: self.max_subrep_dim,
            max_candidates: self.max_candidates,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Indecomposable {
    pub name: String,
    pub dims: DimVector,
    pub rep: Rep,
}

/// An isomorphism class: a multiset of indecomposable indices, kept sorted
/// by index with no zero multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClass {
    parts: Vec<(usize, u32)>,
}

impl IsoClass {
    pub fn zero() -> Self {
        IsoClass { parts: vec![] }
    }

    pub fn indecomposable(index: usize) -> Self {
        IsoClass { parts: vec![(index, 1)] }
    }

    pub fn from_parts(parts: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut acc: Vec<(usize, u32)> = Vec::new();
        for (i, m) in parts {
            if m == 0 {
                continue;
            }
            match acc.binary_search_by_key(&i, |&(j, _)| j) {
                Ok(pos) => acc[pos].1 += m,
                Err(pos) => acc.insert(pos, (i, m)),
            }
        }
        IsoClass { parts: acc }
    }

    pub fn parts(&self) -> &[(usize, u32)] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, index: usize) -> u32 {
        self.parts
            .binary_search_by_key(&index, |&(j, _)| j)
            .map_or(0, |pos| self.parts[pos].1)
    }

    /// Multiset union, i.e. the class of the direct sum.
    pub fn direct_sum(&self, other: &IsoClass) -> IsoClass {
        IsoClass::from_parts(self.parts.iter().chain(&other.parts).copied())
    }
}

type PairKey = (IsoClass, IsoClass);

pub struct Heart {
    name: String,
    quiver: Arc<Quiver>,
    field: PrimeField,
    limits: Limits,
    indecomposables: Vec<Indecomposable>,
    by_dims: HashMap<DimVector, usize>,
    reps: RwLock<HashMap<IsoClass, Rep>>,
    hom_ext: RwLock<HashMap<PairKey, (usize, usize)>>,
    auts: RwLock<HashMap<IsoClass, BigUint>>,
}

impl std::fmt::Debug for Heart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Heart")
            .field("name", &self.name)
            .field("field", &self.field)
            .field("indecomposables", &self.indecomposables.len())
            .finish()
    }
}

impl Heart {
    pub fn new(name: impl Into<String>, quiver: Quiver, field: PrimeField, limits: Limits) -> Result<Self> {
        let quiver = Arc::new(quiver);
        let indecomposables = find_indecomposables(&quiver, field, &limits)?;
        let by_dims = indecomposables
            .iter()
            .enumerate()
            .map(|(i, ind)| (ind.dims.clone(), i))
            .collect();
        Ok(Heart {
            name: name.into(),
            quiver,
            field,
            limits,
            indecomposables,
            by_dims,
            reps: RwLock::new(HashMap::new()),
            hom_ext: RwLock::new(HashMap::new()),
            auts: RwLock::new(HashMap::new()),
        })
    }

    /// Linearly oriented `A_n` with default limits.
    pub fn linear_a(n: usize, p: u32) -> Result<Self> {
        Self::new(format!("A{n}"), Quiver::linear_a(n)?, PrimeField::new(p)?, Limits::default())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn indecomposables(&self) -> &[Indecomposable] {
        &self.indecomposables
    }

    pub fn dims(&self, x: &IsoClass) -> DimVector {
        let mut d = vec![0; self.quiver.vertex_count()];
        for &(i, m) in x.parts() {
            for (acc, &e) in d.iter_mut().zip(&self.indecomposables[i].dims) {
                *acc += m as usize * e;
            }
        }
        d
    }

    pub fn total_dim(&self, x: &IsoClass) -> usize {
        self.dims(x).iter().sum()
    }

    /// A representative: the direct sum of the chosen indecomposables.
    pub fn rep(&self, x: &IsoClass) -> Rep {
        if let Some(r) = self.reps.read().expect("rep cache").get(x) {
            return r.clone();
        }
        let parts: Vec<&Rep> = x
            .parts()
            .iter()
            .flat_map(|&(i, m)| std::iter::repeat_n(&self.indecomposables[i].rep, m as usize))
            .collect();
        let r = Rep::direct_sum_all(self.quiver.clone(), self.field, parts);
        self.reps.write().expect("rep cache").insert(x.clone(), r.clone());
        r
    }

    fn check_rep(&self, m: &Rep) -> Result<()> {
        if m.field() != self.field || **m.quiver() != *self.quiver {
            return Err(Error::Mismatch(format!("representation does not belong to heart {}", self.name)));
        }
        Ok(())
    }

    /// Krull–Schmidt decomposition by repeated idempotent splitting.
    pub fn decompose(&self, m: &Rep) -> Result<IsoClass> {
        self.check_rep(m)?;
        let mut parts = Vec::new();
        let mut stack = vec![m.clone()];
        while let Some(r) = stack.pop() {
            if r.is_zero() {
                continue;
            }
            match rep::split(&r, self.limits.max_enumeration)? {
                Some((a, b)) => {
                    stack.push(r.restrict(&a));
                    stack.push(r.restrict(&b));
                }
                None => {
                    // Local endomorphism ring; over a Dynkin quiver the
                    // dimension vector names the indecomposable.
                    let idx = self.by_dims.get(r.dims()).copied().ok_or_else(|| {
                        Error::NotFiniteType(format!(
                            "indecomposable summand with dimension vector {:?} is not a positive root",
                            r.dims()
                        ))
                    })?;
                    parts.push((idx, 1));
                }
            }
        }
        Ok(IsoClass::from_parts(parts))
    }

    pub fn iso_test(&self, m: &Rep, n: &Rep) -> Result<bool> {
        m.same_category(n)?;
        if m.dims() != n.dims() {
            return Ok(false);
        }
        Ok(self.decompose(m)? == self.decompose(n)?)
    }

    fn hom_ext(&self, x: &IsoClass, y: &IsoClass) -> (usize, usize) {
        let key = (x.clone(), y.clone());
        if let Some(&v) = self.hom_ext.read().expect("hom cache").get(&key) {
            return v;
        }
        // Hom and Ext are additive, so work summand by summand.
        let mut hom = 0;
        let mut ext = 0;
        for &(i, mi) in x.parts() {
            for &(j, mj) in y.parts() {
                let a = &self.indecomposables[i].rep;
                let b = &self.indecomposables[j].rep;
                let mult = (mi * mj) as usize;
                hom += mult * rep::hom_dim(a, b).expect("same heart");
                ext += mult * rep::ext1_dim(a, b).expect("same heart");
            }
        }
        self.hom_ext.write().expect("hom cache").insert(key, (hom, ext));
        (hom, ext)
    }

    pub fn hom_dim(&self, x: &IsoClass, y: &IsoClass) -> usize {
        self.hom_ext(x, y).0
    }

    pub fn ext1_dim(&self, x: &IsoClass, y: &IsoClass) -> usize {
        self.hom_ext(x, y).1
    }

    pub fn euler_form(&self, x: &IsoClass, y: &IsoClass) -> i64 {
        let (h, e) = self.hom_ext(x, y);
        h as i64 - e as i64
    }

    /// `|Aut(x)|`.
    ///
    /// Counts invertible endomorphisms when `End(x)` is small enough to
    /// enumerate; otherwise uses `End(I) = F_p` for every indecomposable, which
    /// gives `|Aut| = p^{dim End − Σ m_j²} · ∏ |GL_{m_j}(F_p)|`.
    pub fn aut_order(&self, x: &IsoClass) -> BigUint {
        if let Some(v) = self.auts.read().expect("aut cache").get(x) {
            return v.clone();
        }
        let end_dim = self.hom_dim(x, x);
        let p = self.p();
        let enumerable = self.field.checked_pow(end_dim).is_some_and(|s| s <= self.limits.max_enumeration);
        let order = if enumerable {
            BigUint::from(rep::aut_order_by_enumeration(&self.rep(x), self.limits.max_enumeration).expect("bounded"))
        } else {
            aut_order_from_multiplicities(p, end_dim, x)
        };
        self.auts.write().expect("aut cache").insert(x.clone(), order.clone());
        order
    }

    /// All classes with dimension vector exactly `d`, in canonical order.
    pub fn classes_with_dims(&self, d: &[usize]) -> Vec<IsoClass> {
        let mut out = Vec::new();
        let mut parts = Vec::new();
        self.fill_dims(0, d.to_vec(), &mut parts, &mut out);
        out.sort();
        out
    }

    fn fill_dims(&self, start: usize, remaining: DimVector, parts: &mut Vec<(usize, u32)>, out: &mut Vec<IsoClass>) {
        if remaining.iter().all(|&r| r == 0) {
            out.push(IsoClass::from_parts(parts.iter().copied()));
            return;
        }
        for i in start..self.indecomposables.len() {
            let dims = &self.indecomposables[i].dims;
            let mut rem = remaining.clone();
            let mut m = 0;
            while rem.iter().zip(dims).all(|(&r, &e)| r >= e) {
                for (r, &e) in rem.iter_mut().zip(dims) {
                    *r -= e;
                }
                m += 1;
                parts.push((i, m));
                self.fill_dims(i + 1, rem.clone(), parts, out);
                parts.pop();
            }
        }
    }

    /// All classes of total dimension at most `max_total`, ordered by total
    /// dimension and then canonically.
    pub fn classes_up_to(&self, max_total: usize) -> Vec<IsoClass> {
        let mut out = Vec::new();
        let mut parts = Vec::new();
        self.fill_total(0, max_total, &mut parts, &mut out);
        out.sort_by_key(|x| (self.total_dim(x), x.clone()));
        out
    }

    fn fill_total(&self, start: usize, budget: usize, parts: &mut Vec<(usize, u32)>, out: &mut Vec<IsoClass>) {
        out.push(IsoClass::from_parts(parts.iter().copied()));
        for i in start..self.indecomposables.len() {
            let size: usize = self.indecomposables[i].dims.iter().sum();
            let mut m = 0;
            while size * (m as usize + 1) <= budget {
                m += 1;
                parts.push((i, m));
                self.fill_total(i + 1, budget - size * m as usize, parts, out);
                parts.pop();
            }
        }
    }

    /// Dimension vectors `e ≤ d` componentwise.
    pub fn dims_below(d: &[usize]) -> Vec<DimVector> {
        let mut out = vec![vec![]];
        for &bound in d {
            out = out
                .into_iter()
                .flat_map(|prefix: DimVector| {
                    (0..=bound).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        out
    }
}

fn gl_order(p: u32, m: u32) -> BigUint {
    let pb = BigUint::from(p);
    let pm: BigUint = Pow::pow(&pb, m);
    (0..m).fold(BigUint::one(), |acc, i| acc * (&pm - Pow::pow(&pb, i)))
}

fn aut_order_from_multiplicities(p: u32, end_dim: usize, x: &IsoClass) -> BigUint {
    let semisimple: usize = x.parts().iter().map(|&(_, m)| (m * m) as usize).sum();
    let radical = Pow::pow(&BigUint::from(p), (end_dim - semisimple) as u32);
    x.parts().iter().fold(radical, |acc, &(_, m)| acc * gl_order(p, m))
}

fn indecomposable_name(dims: &[usize]) -> String {
    let support: Vec<usize> = (0..dims.len()).filter(|&v| dims[v] > 0).collect();
    if support.len() == 1 && dims[support[0]] == 1 {
        return format!("S{}", support[0] + 1);
    }
    let thin = dims.iter().all(|&d| d <= 1);
    if thin && dims.len() <= 9 {
        let digits: String = support.iter().map(|v| (v + 1).to_string()).collect();
        return format!("X{digits}");
    }
    let body: Vec<String> = dims.iter().map(usize::to_string).collect();
    format!("X({})", body.join(","))
}

/// Finds one indecomposable per positive root. Candidate representations are
/// drawn from a fixed-seed generator, then enumerated exhaustively; the first
/// one certified indecomposable by idempotent enumeration is kept.
fn find_indecomposables(quiver: &Arc<Quiver>, field: PrimeField, limits: &Limits) -> Result<Vec<Indecomposable>> {
    let mut roots = quiver.positive_roots()?;
    // Ascending total dimension; within one total, S1 before S2 and so on.
    roots.sort_by(|a, b| {
        let ta: usize = a.iter().sum();
        let tb: usize = b.iter().sum();
        ta.cmp(&tb).then_with(|| b.cmp(a))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_4a11);
    roots
        .into_iter()
        .map(|dims| {
            let rep = search_indecomposable(quiver, field, &dims, limits, &mut rng)?;
            Ok(Indecomposable {
                name: indecomposable_name(&dims),
                dims,
                rep,
            })
        })
        .collect()
}

fn search_indecomposable(
    quiver: &Arc<Quiver>,
    field: PrimeField,
    dims: &[usize],
    limits: &Limits,
    rng: &mut ChaCha8Rng,
) -> Result<Rep> {
    let shapes: Vec<(usize, usize)> = quiver.arrows().iter().map(|&(s, t)| (dims[t], dims[s])).collect();
    let entries: usize = shapes.iter().map(|&(r, c)| r * c).sum();
    let build = |flat: &[u32]| -> Result<Rep> {
        let mut offset = 0;
        let maps = shapes
            .iter()
            .map(|&(r, c)| {
                let m = FpMatrix::new(field, r, c, flat[offset..offset + r * c].to_vec());
                offset += r * c;
                m
            })
            .collect::<Result<Vec<_>>>()?;
        Rep::new(quiver.clone(), field, dims.to_vec(), maps)
    };
    let certified = |r: &Rep| -> bool { rep::is_indecomposable(r, limits.max_enumeration).unwrap_or(false) };

    let mut tried = 0u64;
    for _ in 0..64 {
        let flat: Vec<u32> = (0..entries).map(|_| rng.gen_range(0..field.p())).collect();
        let r = build(&flat)?;
        tried += 1;
        if certified(&r) {
            return Ok(r);
        }
    }
    for flat in crate::field::VectorIter::new(field, entries) {
        if tried >= limits.max_rep_search {
            break;
        }
        tried += 1;
        let r = build(&flat)?;
        if certified(&r) {
            return Ok(r);
        }
    }
    Err(Error::resource(
        format!("search for an indecomposable of dimension vector {dims:?}"),
        format!("more than {tried} candidates"),
        limits.max_rep_search,
    ))
}
