//! Finitely supported rational functions on locally finite homotopy types.
//!
//! A homotopy type is recorded as its set of components together with the
//! orders of the homotopy groups at each component; group structure never
//! enters the counting formulas, only orders do. On such data we provide the
//! pushforward `f_!` (both the direct formula over source components and the
//! homotopy-fiber formula), the pullback `f^*` along proper maps, and
//! generators for product maps and product squares, where fibers and
//! homotopy pullbacks are known by construction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Orders of `π_1, π_2, …` at one component. Trailing ones are insignificant.
pub type PiOrders = Vec<u64>;

fn trimmed(mut orders: PiOrders) -> PiOrders {
    while orders.last() == Some(&1) {
        orders.pop();
    }
    orders
}

fn validate_orders(orders: &[u64]) -> Result<()> {
    if orders.contains(&0) {
        return Err(Error::Malformed("homotopy group orders must be at least 1".into()));
    }
    Ok(())
}

/// `∏_{i>0} |π_i|^{(-1)^i}`.
pub fn alternating_weight(orders: &[u64]) -> BigRational {
    orders.iter().enumerate().fold(BigRational::one(), |acc, (k, &order)| {
        let order = BigRational::from_integer(BigInt::from(order));
        // Index k holds π_{k+1}: odd homotopy degrees divide.
        if k % 2 == 0 {
            acc / order
        } else {
            acc * order
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LFType {
    components: Vec<PiOrders>,
}

impl LFType {
    pub fn new(components: Vec<PiOrders>) -> Result<Self> {
        for c in &components {
            validate_orders(c)?;
        }
        Ok(LFType {
            components: components.into_iter().map(trimmed).collect(),
        })
    }

    /// One contractible component.
    pub fn point() -> Self {
        LFType { components: vec![vec![]] }
    }

    /// Components of a groupoid: component `c` has `π_1` of order `orders[c]`.
    pub fn groupoid(automorphism_orders: &[u64]) -> Result<Self> {
        Self::new(automorphism_orders.iter().map(|&o| vec![o]).collect())
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn pi_orders(&self, c: usize) -> &[u64] {
        &self.components[c]
    }

    /// `∏_{i>0} |π_i(X, c)|^{(-1)^i}`.
    pub fn weight(&self, c: usize) -> BigRational {
        alternating_weight(&self.components[c])
    }

    /// `F × Y`, with component `(a, b)` stored at index `a · |π_0 Y| + b`.
    pub fn product(&self, other: &LFType) -> LFType {
        let mut components = Vec::with_capacity(self.components.len() * other.components.len());
        for a in &self.components {
            for b in &other.components {
                let len = a.len().max(b.len());
                let orders = (0..len)
                    .map(|i| a.get(i).copied().unwrap_or(1) * b.get(i).copied().unwrap_or(1))
                    .collect();
                components.push(trimmed(orders));
            }
        }
        LFType { components }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LFMap {
    source: LFType,
    target: LFType,
    component_map: Vec<usize>,
}

impl LFMap {
    pub fn new(source: LFType, target: LFType, component_map: Vec<usize>) -> Result<Self> {
        if component_map.len() != source.component_count() {
            return Err(Error::Malformed(format!(
                "component map covers {} of {} source components",
                component_map.len(),
                source.component_count()
            )));
        }
        if let Some(&bad) = component_map.iter().find(|&&y| y >= target.component_count()) {
            return Err(Error::Malformed(format!("component map hits missing target component {bad}")));
        }
        Ok(LFMap {
            source,
            target,
            component_map,
        })
    }

    pub fn identity(x: &LFType) -> Self {
        LFMap {
            source: x.clone(),
            target: x.clone(),
            component_map: (0..x.component_count()).collect(),
        }
    }

    /// The map to a point.
    pub fn to_point(x: &LFType) -> Self {
        LFMap {
            source: x.clone(),
            target: LFType::point(),
            component_map: vec![0; x.component_count()],
        }
    }

    pub fn source(&self) -> &LFType {
        &self.source
    }

    pub fn target(&self) -> &LFType {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.component_map[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LFMap) -> Result<LFMap> {
        if self.target != next.source {
            return Err(Error::Mismatch("maps are not composable".into()));
        }
        Ok(LFMap {
            source: self.source.clone(),
            target: next.target.clone(),
            component_map: self.component_map.iter().map(|&y| next.component_map[y]).collect(),
        })
    }

    /// Projection `F × Y → Y`.
    pub fn projection(fiber: &LFType, base: &LFType) -> LFMap {
        let n = base.component_count();
        LFMap {
            source: fiber.product(base),
            target: base.clone(),
            component_map: (0..fiber.component_count() * n).map(|c| c % n).collect(),
        }
    }

    /// `id_F × u : F × Y' → F × Y`.
    pub fn product_with(fiber: &LFType, u: &LFMap) -> LFMap {
        let (n_src, n_tgt) = (u.source.component_count(), u.target.component_count());
        let component_map = (0..fiber.component_count())
            .flat_map(|a| u.component_map.iter().map(move |&b| a * n_tgt + b))
            .collect::<Vec<_>>();
        debug_assert_eq!(component_map.len(), fiber.component_count() * n_src);
        LFMap {
            source: fiber.product(&u.source),
            target: fiber.product(&u.target),
            component_map,
        }
    }
}

/// Whether every target component has finitely many preimage components.
///
/// Component lists are finite, so this always holds; it is kept as the guard
/// that pullback checks.
pub fn is_proper(f: &LFMap) -> bool {
    let mut counts = vec![0usize; f.target.component_count()];
    for &y in &f.component_map {
        counts[y] += 1;
    }
    counts.iter().all(|&c| c <= f.source.component_count())
}

/// One component of a homotopy fiber, with its homotopy group orders and the
/// source component it maps to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberComponent {
    pub pi_orders: PiOrders,
    pub attached_to: usize,
}

/// Homotopy fibers of a map over each target component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPresentation {
    source: LFType,
    target: LFType,
    fibers: Vec<Vec<FiberComponent>>,
}

impl FiberPresentation {
    pub fn new(source: LFType, target: LFType, fibers: Vec<Vec<FiberComponent>>) -> Result<Self> {
        if fibers.len() != target.component_count() {
            return Err(Error::Malformed(format!(
                "{} fibers given for {} target components",
                fibers.len(),
                target.component_count()
            )));
        }
        for fc in fibers.iter().flatten() {
            validate_orders(&fc.pi_orders)?;
            if fc.attached_to >= source.component_count() {
                return Err(Error::Malformed(format!(
                    "fiber component attached to missing source component {}",
                    fc.attached_to
                )));
            }
        }
        Ok(FiberPresentation { source, target, fibers })
    }

    /// Fibers of the projection `F × Y → Y`: a copy of `F` over each `y`.
    pub fn of_projection(fiber: &LFType, base: &LFType) -> FiberPresentation {
        let n = base.component_count();
        let fibers = (0..n)
            .map(|y| {
                (0..fiber.component_count())
                    .map(|a| FiberComponent {
                        pi_orders: fiber.components[a].clone(),
                        attached_to: a * n + y,
                    })
                    .collect()
            })
            .collect();
        FiberPresentation {
            source: fiber.product(base),
            target: base.clone(),
            fibers,
        }
    }

    pub fn source(&self) -> &LFType {
        &self.source
    }

    pub fn target(&self) -> &LFType {
        &self.target
    }
}

/// A rational function with finite support on the components of `domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnFinSupp {
    domain: LFType,
    values: BTreeMap<usize, BigRational>,
}

impl FnFinSupp {
    pub fn zero(domain: &LFType) -> Self {
        FnFinSupp {
            domain: domain.clone(),
            values: BTreeMap::new(),
        }
    }

    /// The constant function 1 on every component.
    pub fn ones(domain: &LFType) -> Self {
        let mut f = Self::zero(domain);
        for c in 0..domain.component_count() {
            f.set(c, BigRational::one());
        }
        f
    }

    pub fn from_values(domain: &LFType, values: impl IntoIterator<Item = (usize, BigRational)>) -> Result<Self> {
        let mut f = Self::zero(domain);
        for (c, v) in values {
            if c >= domain.component_count() {
                return Err(Error::Malformed(format!("component {c} outside the domain")));
            }
            f.add_at(c, v);
        }
        Ok(f)
    }

    pub fn domain(&self) -> &LFType {
        &self.domain
    }

    pub fn get(&self, c: usize) -> BigRational {
        self.values.get(&c).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, c: usize, v: BigRational) {
        if v.is_zero() {
            self.values.remove(&c);
        } else {
            self.values.insert(c, v);
        }
    }

    fn add_at(&mut self, c: usize, v: BigRational) {
        let sum = self.get(c) + v;
        self.set(c, sum);
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.values.iter().map(|(&c, v)| (c, v))
    }

    pub fn add(&self, other: &FnFinSupp) -> Result<FnFinSupp> {
        if self.domain != other.domain {
            return Err(Error::Mismatch("functions on different homotopy types".into()));
        }
        let mut out = self.clone();
        for (c, v) in other.support() {
            out.add_at(c, v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> FnFinSupp {
        let mut out = FnFinSupp::zero(&self.domain);
        for (c, v) in self.support() {
            out.set(c, v * s);
        }
        out
    }
}

fn check_domain(alpha: &FnFinSupp, expected: &LFType) -> Result<()> {
    if alpha.domain != *expected {
        return Err(Error::Mismatch("function is defined on a different homotopy type".into()));
    }
    Ok(())
}

/// `f_!(α)(y) = Σ_{f(x)=y} α(x) · ∏_{i>0} |π_i(X,x)|^{(-1)^i} |π_i(Y,y)|^{(-1)^{i+1}}`.
pub fn pushforward_l1(f: &LFMap, alpha: &FnFinSupp) -> Result<FnFinSupp> {
    check_domain(alpha, &f.source)?;
    let mut out = FnFinSupp::zero(&f.target);
    for (x, v) in alpha.support() {
        let y = f.component_map[x];
        out.add_at(y, v * f.source.weight(x) / f.target.weight(y));
    }
    Ok(out)
}

/// `f_!(α)(y) = Σ_{z ∈ π_0(F_y)} α(i(z)) · ∏_{i>0} |π_i(F_y, z)|^{(-1)^i}`.
pub fn pushforward_fibers(fp: &FiberPresentation, alpha: &FnFinSupp) -> Result<FnFinSupp> {
    check_domain(alpha, &fp.source)?;
    let mut out = FnFinSupp::zero(&fp.target);
    for (y, fiber) in fp.fibers.iter().enumerate() {
        for fc in fiber {
            let a = alpha.get(fc.attached_to);
            if !a.is_zero() {
                out.add_at(y, a * alternating_weight(&fc.pi_orders));
            }
        }
    }
    Ok(out)
}

/// `f^*(α)(x) = α(f(x))`.
pub fn pullback(f: &LFMap, alpha: &FnFinSupp) -> Result<FnFinSupp> {
    if !is_proper(f) {
        return Err(Error::Malformed("pullback along a non-proper map".into()));
    }
    check_domain(alpha, &f.target)?;
    let mut out = FnFinSupp::zero(&f.source);
    for (x, &y) in f.component_map.iter().enumerate() {
        out.set(x, alpha.get(y));
    }
    Ok(out)
}

/// Random generators for property checks.
pub mod gen {
    use super::*;

    /// Up to `max_components` components, homotopy orders drawn from `1..=max_order`
    /// in degrees `1..=max_degree`.
    pub fn lf_type<R: Rng>(rng: &mut R, max_components: usize, max_degree: usize, max_order: u64) -> LFType {
        let n = rng.gen_range(1..=max_components);
        let components = (0..n)
            .map(|_| {
                let deg = rng.gen_range(0..=max_degree);
                (0..deg).map(|_| rng.gen_range(1..=max_order)).collect()
            })
            .collect();
        LFType::new(components).expect("orders are positive")
    }

    pub fn lf_map<R: Rng>(rng: &mut R, source: &LFType, target: &LFType) -> LFMap {
        let component_map = (0..source.component_count())
            .map(|_| rng.gen_range(0..target.component_count()))
            .collect();
        LFMap::new(source.clone(), target.clone(), component_map).expect("in range")
    }

    pub fn function<R: Rng>(rng: &mut R, domain: &LFType) -> FnFinSupp {
        let values = (0..domain.component_count()).filter_map(|c| {
            let num: i64 = rng.gen_range(-6..=6);
            let den: i64 = rng.gen_range(1..=4);
            (num != 0).then(|| (c, BigRational::new(num.into(), den.into())))
        });
        FnFinSupp::from_values(domain, values).expect("in range")
    }
}
