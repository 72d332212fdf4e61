//! Bounded complexes of representations, chain maps up to homotopy, mapping
//! cones and cohomology.
//!
//! This is the brute-force side of the derived Hall computations. A graded
//! object `x` is replaced by a bounded complex of projectives `P(x)`, the
//! target `z` by its zero-differential model, and `Hom_D(x, z)` is computed as
//! chain maps modulo null-homotopic ones. Each class is then classified by
//! the cohomology of its cone.
//!
//! Cohomological convention: `d^i : C^i → C^{i+1}`, and `x[n]` sits in degree
//! `−n`. The cone of `f : A → B` has `Cone^i = A^{i+1} ⊕ B^i` with
//! differential `(a, b) ↦ (−d_A a, f a + d_B b)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{complement_rows, FpMatrix, PrimeField, VectorIter};
use crate::graded::GradedObject;
use crate::heart::{Heart, IsoClass};
use crate::quiver::Quiver;
use crate::rep::{self, Rep, RepMorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    quiver: Arc<Quiver>,
    field: PrimeField,
    /// Nonzero terms by cohomological degree.
    terms: BTreeMap<i64, Rep>,
    /// `d^i`, stored only where both ends are nonzero.
    differentials: BTreeMap<i64, RepMorphism>,
}

impl Complex {
    /// Builds a complex, checking that each `d^i` is a morphism of
    /// representations `C^i → C^{i+1}` and that `d^{i+1} ∘ d^i = 0`.
    pub fn new(
        quiver: Arc<Quiver>,
        field: PrimeField,
        terms: BTreeMap<i64, Rep>,
        differentials: BTreeMap<i64, RepMorphism>,
    ) -> Result<Self> {
        let mut c = Complex {
            quiver,
            field,
            terms: BTreeMap::new(),
            differentials: BTreeMap::new(),
        };
        for (i, t) in terms {
            if t.field() != c.field || **t.quiver() != *c.quiver {
                return Err(Error::Mismatch(format!("term in degree {i} belongs to another category")));
            }
            if !t.is_zero() {
                c.terms.insert(i, t);
            }
        }
        for (i, d) in differentials {
            let (src, tgt) = (c.term(i), c.term(i + 1));
            if !d.intertwines(&src, &tgt) {
                return Err(Error::Malformed(format!("d^{i} is not a morphism C^{i} → C^{}", i + 1)));
            }
            if !d.is_zero() {
                c.differentials.insert(i, d);
            }
        }
        for (&i, d) in &c.differentials {
            if let Some(next) = c.differentials.get(&(i + 1)) {
                if !next.compose(d).is_zero() {
                    return Err(Error::Malformed(format!("d^{} ∘ d^{i} ≠ 0", i + 1)));
                }
            }
        }
        Ok(c)
    }

    /// `⊕ z_n` placed in degree `−n`, with zero differential.
    pub fn zero_differential(heart: &Heart, z: &GradedObject) -> Complex {
        Complex {
            quiver: heart.quiver().clone(),
            field: heart.field(),
            terms: z.components().map(|(n, zn)| (-n, heart.rep(zn))).filter(|(_, r)| !r.is_zero()).collect(),
            differentials: BTreeMap::new(),
        }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn term(&self, i: i64) -> Rep {
        self.terms
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Rep::zero(self.quiver.clone(), self.field))
    }

    pub fn differential(&self, i: i64) -> RepMorphism {
        self.differentials
            .get(&i)
            .cloned()
            .unwrap_or_else(|| RepMorphism::zero(&self.term(i), &self.term(i + 1)))
    }

    /// Smallest and largest degrees with nonzero terms, if any.
    pub fn range(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn shift(&self, by: i64) -> Complex {
        // Shifting by n moves C^i to degree i − n and negates d when n is odd.
        let sign = if by.rem_euclid(2) == 1 { self.field.p() - 1 } else { 1 };
        Complex {
            quiver: self.quiver.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(&i, t)| (i - by, t.clone())).collect(),
            differentials: self.differentials.iter().map(|(&i, d)| (i - by, d.scale(sign))).collect(),
        }
    }
}

/// A chain map between two complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    components: BTreeMap<i64, RepMorphism>,
}

impl ChainMap {
    /// Checks each component is a morphism and `d_B f^i = f^{i+1} d_A`.
    pub fn new(source: Complex, target: Complex, components: BTreeMap<i64, RepMorphism>) -> Result<Self> {
        let f = ChainMap {
            source,
            target,
            components: components.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        };
        for (&i, c) in &f.components {
            if !c.intertwines(&f.source.term(i), &f.target.term(i)) {
                return Err(Error::Malformed(format!("chain map component in degree {i} is not a morphism")));
            }
        }
        for i in degree_span(&f.source, &f.target) {
            let lhs = f.target.differential(i).compose(&f.component(i));
            let rhs = f.component(i + 1).compose(&f.source.differential(i));
            if lhs != rhs {
                return Err(Error::Malformed(format!("chain map does not commute with d in degree {i}")));
            }
        }
        Ok(f)
    }

    pub fn component(&self, i: i64) -> RepMorphism {
        self.components
            .get(&i)
            .cloned()
            .unwrap_or_else(|| RepMorphism::zero(&self.source.term(i), &self.target.term(i)))
    }

    pub fn identity(c: &Complex) -> ChainMap {
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components: c.terms.iter().map(|(&i, t)| (i, RepMorphism::identity(t))).collect(),
        }
    }

    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            components: BTreeMap::new(),
        }
    }

    /// `f[n]`; components move with the terms and keep their sign.
    pub fn shift(&self, by: i64) -> ChainMap {
        ChainMap {
            source: self.source.shift(by),
            target: self.target.shift(by),
            components: self.components.iter().map(|(&i, c)| (i - by, c.clone())).collect(),
        }
    }
}

/// Degrees where a map or homotopy between `a` and `b` can be nonzero, padded
/// by one on each side.
fn degree_span(a: &Complex, b: &Complex) -> std::ops::RangeInclusive<i64> {
    let ends: Vec<i64> = [a.range(), b.range()]
        .into_iter()
        .flatten()
        .flat_map(|(lo, hi)| [lo, hi])
        .collect();
    match (ends.iter().min(), ends.iter().max()) {
        (Some(&lo), Some(&hi)) => lo - 1..=hi + 1,
        #[allow(clippy::reversed_empty_ranges)]
        _ => 1..=0,
    }
}

/// Block morphism `⊕_j sources_j → ⊕_i targets_i` with `blocks[i][j]`.
fn block_morphism(sources: &[&Rep], targets: &[&Rep], blocks: &[Vec<Option<RepMorphism>>], field: PrimeField) -> RepMorphism {
    let vertices = sources.first().or(targets.first()).map_or(0, |r| r.dims().len());
    let components = (0..vertices)
        .map(|v| {
            let rows: usize = targets.iter().map(|t| t.dims()[v]).sum();
            let cols: usize = sources.iter().map(|s| s.dims()[v]).sum();
            let mut m = FpMatrix::zeros(field, rows, cols);
            let mut r0 = 0;
            for (i, t) in targets.iter().enumerate() {
                let mut c0 = 0;
                for (j, s) in sources.iter().enumerate() {
                    if let Some(b) = &blocks[i][j] {
                        m.set_block(r0, c0, &b.components[v]);
                    }
                    c0 += s.dims()[v];
                }
                r0 += t.dims()[v];
            }
            m
        })
        .collect();
    RepMorphism { components }
}

/// Mapping cone of `f : A → B`.
pub fn cone(f: &ChainMap) -> Complex {
    let (a, b) = (&f.source, &f.target);
    let quiver = a.quiver.clone();
    let field = a.field;
    let mut terms = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for i in degree_span(a, b) {
        let (a1, b0) = (a.term(i + 1), b.term(i));
        let (a2, b1) = (a.term(i + 2), b.term(i + 1));
        terms.insert(i, Rep::direct_sum_all(quiver.clone(), field, [&a1, &b0]));
        let d = block_morphism(
            &[&a1, &b0],
            &[&a2, &b1],
            &[
                vec![Some(a.differential(i + 1).scale(field.p() - 1)), None],
                vec![Some(f.component(i + 1)), Some(b.differential(i))],
            ],
            field,
        );
        differentials.insert(i, d);
    }
    Complex::new(quiver, field, terms, differentials).expect("mapping cone of a chain map is a complex")
}

/// Cohomology representations `H^i = ker d^i / im d^{i−1}`, by degree.
pub fn cohomology_reps(c: &Complex) -> BTreeMap<i64, Rep> {
    let mut out = BTreeMap::new();
    let Some((lo, hi)) = c.range() else {
        return out;
    };
    for i in lo..=hi {
        let term = c.term(i);
        let kernel = c.differential(i).kernel();
        let image = c.differential(i - 1).image();
        let (h, _) = term.subquotient(&kernel, &image);
        if !h.is_zero() {
            out.insert(i, h);
        }
    }
    out
}

/// The isomorphism class of a complex in `D^b`: its cohomology, with `H^i`
/// placed in shift degree `−i`.
pub fn cohomology(heart: &Heart, c: &Complex) -> Result<GradedObject> {
    let mut g = GradedObject::zero();
    for (i, h) in cohomology_reps(c) {
        g.insert(-i, heart.decompose(&h)?);
    }
    Ok(g)
}

pub fn is_acyclic(c: &Complex) -> bool {
    cohomology_reps(c).is_empty()
}

pub fn cone_class(heart: &Heart, f: &ChainMap) -> Result<GradedObject> {
    cohomology(heart, &cone(f))
}

/// The standard two-term projective resolution `P^{-1} → P^0` of `m`:
/// `P^0 = ⊕_i P_i ⊗ m_i`, `P^{-1} = ⊕_a P_{t(a)} ⊗ m_{s(a)}`, with
/// `e_{t(a)} ⊗ u ↦ a ⊗ u − e_{t(a)} ⊗ m_a(u)`.
pub fn projective_resolution(m: &Rep) -> (Rep, Rep, RepMorphism) {
    let quiver = m.quiver().clone();
    let field = m.field();
    let n = quiver.vertex_count();
    let projectives: Vec<Rep> = (0..n).map(|v| Rep::projective(quiver.clone(), field, v)).collect();

    // Summands of P^0: (vertex i, basis index k of m_i).
    let p0_parts: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m.dims()[i]).map(move |k| (i, k))).collect();
    let p0 = Rep::direct_sum_all(quiver.clone(), field, p0_parts.iter().map(|&(i, _)| &projectives[i]));
    // Summands of P^{-1}: (arrow a, basis index k of m_{s(a)}).
    let p1_parts: Vec<(usize, usize)> = quiver
        .arrows()
        .iter()
        .enumerate()
        .flat_map(|(ai, &(s, _))| (0..m.dims()[s]).map(move |k| (ai, k)))
        .collect();
    let p1 = Rep::direct_sum_all(
        quiver.clone(),
        field,
        p1_parts.iter().map(|&(ai, _)| &projectives[quiver.arrows()[ai].1]),
    );

    // Offset of each P^0 summand inside P^0_w, per vertex w.
    let offsets = |w: usize| -> Vec<usize> {
        let mut acc = 0;
        p0_parts
            .iter()
            .map(|&(i, _)| {
                let o = acc;
                acc += projectives[i].dims()[w];
                o
            })
            .collect()
    };

    let mut columns: Vec<RepMorphism> = Vec::with_capacity(p1_parts.len());
    for &(ai, k) in &p1_parts {
        let (s, t) = quiver.arrows()[ai];
        let offs = offsets(t);
        let mut element = vec![0u32; p0.dims()[t]];
        // a ⊗ u_k: the path `a` inside the copy of P_s indexed by (s, k).
        let src_idx = p0_parts.iter().position(|&(i, kk)| i == s && kk == k).expect("summand");
        let paths = quiver.paths_from(s);
        let path_pos = paths
            .iter()
            .filter(|p| p.end == t)
            .position(|p| p.arrows == [ai])
            .expect("arrow is a path");
        element[offs[src_idx] + path_pos] = 1;
        // − e_t ⊗ m_a(u_k): trivial paths in the copies of P_t.
        let image = m.maps()[ai].mul_vec(&unit(m.dims()[s], k));
        for (kk, &coeff) in image.iter().enumerate() {
            if coeff != 0 {
                let idx = p0_parts.iter().position(|&(i, j)| i == t && j == kk).expect("summand");
                let trivial = 0; // the trivial path is first among paths ending at t
                element[offs[idx] + trivial] = field.sub(element[offs[idx] + trivial], coeff);
            }
        }
        columns.push(rep::from_projective(t, &p0, &element));
    }
    let parts: Vec<&Rep> = p1_parts.iter().map(|&(ai, _)| &projectives[quiver.arrows()[ai].1]).collect();
    let blocks: Vec<Vec<Option<RepMorphism>>> = vec![columns.into_iter().map(Some).collect()];
    let d = block_morphism(&parts, &[&p0], &blocks, field);
    (p1, p0, d)
}

fn unit(len: usize, k: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    v[k] = 1;
    v
}

/// A bounded complex of projectives quasi-isomorphic to `⊕ x_n[n]`.
///
/// Each `x_n` is resolved by `P^{-1} → P^0` placed in degrees `−n−1, −n`, so
/// the term in degree `i` is `P^0(x_{−i}) ⊕ P^{−1}(x_{−i−1})`.
pub fn projective_model(heart: &Heart, x: &GradedObject) -> Complex {
    let quiver = heart.quiver().clone();
    let field = heart.field();
    let resolutions: BTreeMap<i64, (Rep, Rep, RepMorphism)> =
        x.components().map(|(n, xn)| (n, projective_resolution(&heart.rep(xn)))).collect();
    let zero = Rep::zero(quiver.clone(), field);
    let p0 = |n: i64| resolutions.get(&n).map_or(&zero, |r| &r.1);
    let p1 = |n: i64| resolutions.get(&n).map_or(&zero, |r| &r.0);

    let mut terms = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    let Some((lo, hi)) = x.degrees().next().zip(x.degrees().last()) else {
        return Complex::new(quiver, field, terms, differentials).expect("empty complex");
    };
    for i in (-hi - 1)..=(-lo) {
        terms.insert(i, Rep::direct_sum_all(quiver.clone(), field, [p0(-i), p1(-i - 1)]));
        let rho = resolutions.get(&(-i - 1)).map(|r| r.2.clone());
        let d = block_morphism(
            &[p0(-i), p1(-i - 1)],
            &[p0(-i - 1), p1(-i - 2)],
            &[vec![None, rho], vec![None, None]],
            field,
        );
        differentials.insert(i, d);
    }
    Complex::new(quiver, field, terms, differentials).expect("assembled resolutions form a complex")
}

/// `Hom_K(A, B)`: chain maps modulo null-homotopic maps, in flattened
/// coordinates (degree by degree, vertex by vertex, row-major).
pub struct HomotopyClasses {
    source: Complex,
    target: Complex,
    degrees: Vec<i64>,
    /// Representatives of a basis of the quotient space.
    representatives: FpMatrix,
    /// Basis of the null-homotopic maps.
    null_homotopic: FpMatrix,
}

impl HomotopyClasses {
    pub fn compute(source: &Complex, target: &Complex) -> Result<HomotopyClasses> {
        if source.field != target.field || source.quiver != target.quiver {
            return Err(Error::Mismatch("complexes over different categories".into()));
        }
        let field = source.field;
        let degrees: Vec<i64> = degree_span(source, target).collect();
        let layout = Layout::new(source, target, &degrees);

        // Constraints: intertwining in each degree, then commutation with d.
        let mut constraint_cols: Vec<Vec<u32>> = Vec::with_capacity(layout.total);
        for col in 0..layout.total {
            let mut e = vec![0; layout.total];
            e[col] = 1;
            let f = layout.unflatten(&e);
            let mut rows = Vec::new();
            for &i in &degrees {
                let (a, b) = (source.term(i), target.term(i));
                let fi = &f[&i];
                for (ai, &(s, t)) in source.quiver.arrows().iter().enumerate() {
                    let diff = b.maps()[ai].mul(&fi.components[s]).sub(&fi.components[t].mul(&a.maps()[ai]));
                    rows.extend_from_slice(diff.entries());
                }
                if let Some(next) = f.get(&(i + 1)) {
                    let lhs = target.differential(i).compose(fi);
                    let rhs = next.compose(&source.differential(i));
                    for (l, r) in lhs.components.iter().zip(&rhs.components) {
                        rows.extend_from_slice(l.sub(r).entries());
                    }
                }
            }
            constraint_cols.push(rows);
        }
        let n_rows = constraint_cols.first().map_or(0, Vec::len);
        let mut constraints = FpMatrix::zeros(field, n_rows, layout.total);
        for (c, col) in constraint_cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                constraints.set(r, c, v);
            }
        }
        let chain_maps = constraints.kernel_basis();

        // Null-homotopic maps: f^i = d_B^{i−1} h^i + h^{i+1} d_A^i.
        let mut null_rows: Vec<Vec<u32>> = Vec::new();
        for &i in &degrees {
            let (a, b) = (source.term(i), target.term(i - 1));
            for h in rep::hom_basis(&a, &b)? {
                let mut f: BTreeMap<i64, RepMorphism> = BTreeMap::new();
                f.insert(i, target.differential(i - 1).compose(&h));
                f.insert(i - 1, h.compose(&source.differential(i - 1)));
                null_rows.push(layout.flatten(&f));
            }
        }
        let null_homotopic = if null_rows.is_empty() {
            FpMatrix::empty(field, layout.total)
        } else {
            FpMatrix::from_rows(field, &null_rows)?.row_basis()
        };
        let representatives = complement_rows(&null_homotopic, &chain_maps);
        Ok(HomotopyClasses {
            source: source.clone(),
            target: target.clone(),
            degrees,
            representatives,
            null_homotopic,
        })
    }

    /// `dim_{F_p} Hom_K(A, B)`.
    pub fn dim(&self) -> usize {
        self.representatives.rows()
    }

    fn layout(&self) -> Layout {
        Layout::new(&self.source, &self.target, &self.degrees)
    }

    fn chain_map(&self, layout: &Layout, flat: &[u32]) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: layout.unflatten(flat).into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    fn span_sum(&self, basis: &FpMatrix, coeffs: &[u32], start: Vec<u32>) -> Vec<u32> {
        let field = self.source.field;
        let mut acc = start;
        for (r, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (slot, &e) in acc.iter_mut().zip(basis.row(r)) {
                *slot = field.add(*slot, field.mul(c, e));
            }
        }
        acc
    }

    /// One representative per homotopy class; errors if there are more than `limit`.
    pub fn enumerate(&self, limit: u64) -> Result<Vec<ChainMap>> {
        let field = self.source.field;
        let size = field.checked_pow(self.dim());
        if size.is_none_or(|s| s > limit) {
            return Err(Error::resource(
                "homotopy class enumeration",
                format!("{}^{}", field.p(), self.dim()),
                limit,
            ));
        }
        let layout = self.layout();
        Ok(VectorIter::new(field, self.dim())
            .map(|c| {
                let flat = self.span_sum(&self.representatives, &c, vec![0; layout.total]);
                self.chain_map(&layout, &flat)
            })
            .collect())
    }

    /// Every chain map homotopic to `f`; errors if there are more than `limit`.
    pub fn homotopy_class(&self, f: &ChainMap, limit: u64) -> Result<Vec<ChainMap>> {
        let field = self.source.field;
        let k = self.null_homotopic.rows();
        if field.checked_pow(k).is_none_or(|s| s > limit) {
            return Err(Error::resource("homotopy class", format!("{}^{k}", field.p()), limit));
        }
        let layout = self.layout();
        let base = layout.flatten(&f.components);
        Ok(VectorIter::new(field, k)
            .map(|c| {
                let flat = self.span_sum(&self.null_homotopic, &c, base.clone());
                self.chain_map(&layout, &flat)
            })
            .collect())
    }
}

/// Coordinates for families of per-degree morphisms `A^i → B^i`.
struct Layout {
    blocks: Vec<(i64, Rep, Rep, usize)>,
    total: usize,
}

impl Layout {
    fn new(source: &Complex, target: &Complex, degrees: &[i64]) -> Layout {
        let mut blocks = Vec::new();
        let mut total = 0;
        for &i in degrees {
            let (a, b) = (source.term(i), target.term(i));
            let size: usize = a.dims().iter().zip(b.dims()).map(|(d, e)| d * e).sum();
            blocks.push((i, a, b, total));
            total += size;
        }
        Layout { blocks, total }
    }

    fn unflatten(&self, flat: &[u32]) -> BTreeMap<i64, RepMorphism> {
        self.blocks
            .iter()
            .map(|(i, a, b, off)| {
                let mut pos = *off;
                let components = a
                    .dims()
                    .iter()
                    .zip(b.dims())
                    .map(|(&d, &e)| {
                        let m = FpMatrix::new(a.field(), e, d, flat[pos..pos + d * e].to_vec()).expect("residues");
                        pos += d * e;
                        m
                    })
                    .collect();
                (*i, RepMorphism { components })
            })
            .collect()
    }

    fn flatten(&self, f: &BTreeMap<i64, RepMorphism>) -> Vec<u32> {
        let mut out = vec![0; self.total];
        for (i, a, b, off) in &self.blocks {
            if let Some(m) = f.get(i) {
                let flat = m.flatten();
                debug_assert_eq!(flat.len(), a.dims().iter().zip(b.dims()).map(|(d, e)| d * e).sum::<usize>());
                out[*off..*off + flat.len()].copy_from_slice(&flat);
            }
        }
        out
    }
}

/// `|[x, z]_y|`: morphisms `x → z` in `D^b` whose cone is isomorphic to `y`,
/// counted by enumerating homotopy classes of chain maps `P(x) → z`.
pub fn count_morphisms_with_cone(heart: &Heart, x: &GradedObject, z: &GradedObject, y: &GradedObject) -> Result<u64> {
    Ok(cone_tally(heart, x, z)?.get(y).copied().unwrap_or(0))
}

/// For fixed `x`, `z`: the number of morphisms `x → z` with each cone class.
pub fn cone_tally(heart: &Heart, x: &GradedObject, z: &GradedObject) -> Result<BTreeMap<GradedObject, u64>> {
    let px = projective_model(heart, x);
    let mz = Complex::zero_differential(heart, z);
    let classes = HomotopyClasses::compute(&px, &mz)?;
    let mut tally = BTreeMap::new();
    for f in classes.enumerate(heart.limits().max_enumeration)? {
        *tally.entry(cone_class(heart, &f)?).or_insert(0u64) += 1;
    }
    Ok(tally)
}

/// `|Aut_D(x)|` by brute force: homotopy classes of self-maps of `P(x)` whose
/// cone is acyclic.
pub fn aut_order_by_enumeration(heart: &Heart, x: &GradedObject) -> Result<u64> {
    let px = projective_model(heart, x);
    let classes = HomotopyClasses::compute(&px, &px)?;
    Ok(classes
        .enumerate(heart.limits().max_enumeration)?
        .iter()
        .filter(|f| is_acyclic(&cone(f)))
        .count() as u64)
}

/// Convenience: the heart class of a single representation as a graded object.
pub fn heart_object(x: IsoClass) -> GradedObject {
    GradedObject::heart(x)
}
