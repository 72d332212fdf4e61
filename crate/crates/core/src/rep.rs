//! Representations of a quiver over `F_p` and their morphism spaces.
//!
//! A representation assigns `F_p^{d_i}` to vertex `i` and a `d_t × d_s`
//! matrix to each arrow `s → t`, acting on column vectors. Hom and Ext¹ come
//! from the intertwiner map
//!
//! ```text
//! Φ : ⊕_i Hom(M_i, N_i) → ⊕_a Hom(M_{s(a)}, N_{t(a)}),   φ ↦ (N_a φ_s − φ_t M_a)_a
//! ```
//!
//! whose kernel is `Hom(M, N)` and whose cokernel is `Ext¹(M, N)` (path
//! algebras are hereditary, so nothing higher survives).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{complement_rows, coordinates, FpMatrix, PrimeField, VectorIter};
use crate::quiver::{DimVector, Quiver};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rep {
    quiver: Arc<Quiver>,
    field: PrimeField,
    dims: DimVector,
    maps: Vec<FpMatrix>,
}

/// A morphism of representations: one matrix per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepMorphism {
    pub components: Vec<FpMatrix>,
}

impl Rep {
    pub fn new(quiver: Arc<Quiver>, field: PrimeField, dims: DimVector, maps: Vec<FpMatrix>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::Malformed(format!(
                "dimension vector has {} entries, quiver has {} vertices",
                dims.len(),
                quiver.vertex_count()
            )));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::Malformed(format!(
                "{} arrow maps given, quiver has {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (ai, (&(s, t), m)) in quiver.arrows().iter().zip(&maps).enumerate() {
            if m.shape() != (dims[t], dims[s]) {
                return Err(Error::Malformed(format!(
                    "arrow {ai} map is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[t],
                    dims[s]
                )));
            }
            if m.field() != field {
                return Err(Error::Mismatch(format!("arrow {ai} map lives over {}", m.field())));
            }
        }
        Ok(Rep { quiver, field, dims, maps })
    }

    pub fn zero(quiver: Arc<Quiver>, field: PrimeField) -> Self {
        let dims = vec![0; quiver.vertex_count()];
        let maps = quiver.arrows().iter().map(|_| FpMatrix::zeros(field, 0, 0)).collect();
        Rep { quiver, field, dims, maps }
    }

    /// The simple representation at vertex `v`.
    pub fn simple(quiver: Arc<Quiver>, field: PrimeField, v: usize) -> Self {
        let mut dims = vec![0; quiver.vertex_count()];
        dims[v] = 1;
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| FpMatrix::zeros(field, dims[t], dims[s]))
            .collect();
        Rep { quiver, field, dims, maps }
    }

    /// The indecomposable projective at vertex `v`: paths out of `v`, with
    /// arrows acting by post-composition.
    pub fn projective(quiver: Arc<Quiver>, field: PrimeField, v: usize) -> Self {
        let paths = quiver.paths_from(v);
        let n = quiver.vertex_count();
        let by_vertex: Vec<Vec<usize>> = (0..n)
            .map(|w| (0..paths.len()).filter(|&i| paths[i].end == w).collect())
            .collect();
        let dims: DimVector = by_vertex.iter().map(Vec::len).collect();
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, &(s, t))| {
                let mut m = FpMatrix::zeros(field, dims[t], dims[s]);
                for (col, &pi) in by_vertex[s].iter().enumerate() {
                    let mut extended = paths[pi].arrows.clone();
                    extended.push(ai);
                    let row = by_vertex[t]
                        .iter()
                        .position(|&qi| paths[qi].arrows == extended)
                        .expect("extended path is a path out of v");
                    m.set(row, col, 1);
                }
                m
            })
            .collect();
        Rep { quiver, field, dims, maps }
    }

    #[inline]
    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn maps(&self) -> &[FpMatrix] {
        &self.maps
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn same_category(&self, other: &Rep) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Mismatch(format!("fields {} and {}", self.field, other.field)));
        }
        if self.quiver != other.quiver {
            return Err(Error::Mismatch("representations of different quivers".into()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Rep) -> Result<Rep> {
        self.same_category(other)?;
        Ok(Rep::direct_sum_all(self.quiver.clone(), self.field, [self, other]))
    }

    pub fn direct_sum_all<'a>(
        quiver: Arc<Quiver>,
        field: PrimeField,
        parts: impl IntoIterator<Item = &'a Rep>,
    ) -> Rep {
        let mut acc = Rep::zero(quiver, field);
        for part in parts {
            let dims: DimVector = acc.dims.iter().zip(&part.dims).map(|(a, b)| a + b).collect();
            let maps = acc
                .quiver
                .arrows()
                .iter()
                .enumerate()
                .map(|(ai, &(s, t))| {
                    let mut m = FpMatrix::zeros(field, dims[t], dims[s]);
                    m.set_block(0, 0, &acc.maps[ai]);
                    m.set_block(acc.dims[t], acc.dims[s], &part.maps[ai]);
                    m
                })
                .collect();
            acc = Rep {
                quiver: acc.quiver.clone(),
                field,
                dims,
                maps,
            };
        }
        acc
    }

    /// The same representation after a change of basis `g_v` at each vertex:
    /// arrow maps become `g_t M_a g_s⁻¹`.
    pub fn conjugate(&self, change: &[FpMatrix]) -> Result<Rep> {
        let mut inverses = Vec::with_capacity(change.len());
        for (v, g) in change.iter().enumerate() {
            if g.shape() != (self.dims[v], self.dims[v]) || !g.is_invertible() {
                return Err(Error::Malformed(format!("change of basis at vertex {} is not invertible", v + 1)));
            }
            inverses.push(invert(g));
        }
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(&(s, t), m)| change[t].mul(m).mul(&inverses[s]))
            .collect();
        Rep::new(self.quiver.clone(), self.field, self.dims.clone(), maps)
    }

    /// The subquotient `K / I` where `inner_v ⊆ outer_v ⊆ M_v` are given by row
    /// bases and both families are closed under the arrow maps. Also returns,
    /// per vertex, rows of `outer` spanning a complement of `inner`.
    pub fn subquotient(&self, outer: &[FpMatrix], inner: &[FpMatrix]) -> (Rep, Vec<FpMatrix>) {
        let complements: Vec<FpMatrix> = (0..self.dims.len())
            .map(|v| complement_rows(&inner[v], &outer[v]))
            .collect();
        let dims: DimVector = complements.iter().map(FpMatrix::rows).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, &(s, t))| {
                let frame = inner[t].vstack(&complements[t]);
                let skip = inner[t].rows();
                let mut m = FpMatrix::zeros(self.field, dims[t], dims[s]);
                for j in 0..dims[s] {
                    let image = self.maps[ai].mul_vec(complements[s].row(j));
                    let coords = coordinates(&frame, &image)
                        .expect("subquotient data is closed under arrow maps");
                    for i in 0..dims[t] {
                        m.set(i, j, coords[skip + i]);
                    }
                }
                m
            })
            .collect();
        let rep = Rep {
            quiver: self.quiver.clone(),
            field: self.field,
            dims,
            maps,
        };
        (rep, complements)
    }

    /// Restriction to the subrepresentation spanned by `basis_v` at each vertex.
    pub fn restrict(&self, basis: &[FpMatrix]) -> Rep {
        let zero: Vec<FpMatrix> = self.dims.iter().map(|&d| FpMatrix::empty(self.field, d)).collect();
        self.subquotient(basis, &zero).0
    }

    /// Quotient by the subrepresentation spanned by `basis_v` at each vertex.
    pub fn quotient(&self, basis: &[FpMatrix]) -> Rep {
        let full: Vec<FpMatrix> = self.dims.iter().map(|&d| FpMatrix::identity(self.field, d)).collect();
        self.subquotient(&full, basis).0
    }

    /// Whether the per-vertex subspaces are closed under every arrow map.
    pub fn is_closed(&self, basis: &[FpMatrix]) -> bool {
        self.quiver.arrows().iter().enumerate().all(|(ai, &(s, t))| {
            let target_rank = basis[t].rows();
            (0..basis[s].rows()).all(|j| {
                let image = self.maps[ai].mul_vec(basis[s].row(j));
                let row = FpMatrix::new(self.field, 1, image.len(), image).expect("residues");
                basis[t].vstack(&row).rank() == target_rank
            })
        })
    }
}

/// The morphism `P_v → target` sending the trivial path at `v` to `element`
/// (an element of `target_v`); every path `π` then maps to `target_π(element)`.
pub fn from_projective(v: usize, target: &Rep, element: &[u32]) -> RepMorphism {
    let quiver = target.quiver();
    let paths = quiver.paths_from(v);
    let components = (0..quiver.vertex_count())
        .map(|w| {
            let columns: Vec<&crate::quiver::Path> = paths.iter().filter(|p| p.end == w).collect();
            let mut m = FpMatrix::zeros(target.field, target.dims[w], columns.len());
            for (c, path) in columns.iter().enumerate() {
                let mut value = element.to_vec();
                for &ai in &path.arrows {
                    value = target.maps[ai].mul_vec(&value);
                }
                for (r, &e) in value.iter().enumerate() {
                    m.set(r, c, e);
                }
            }
            m
        })
        .collect();
    RepMorphism { components }
}

pub(crate) fn invert(g: &FpMatrix) -> FpMatrix {
    let n = g.rows();
    let (r, _) = g.hstack(&FpMatrix::identity(g.field(), n)).rref();
    r.block(0, n, n, n)
}

impl RepMorphism {
    pub fn zero(source: &Rep, target: &Rep) -> Self {
        RepMorphism {
            components: source
                .dims
                .iter()
                .zip(&target.dims)
                .map(|(&d, &e)| FpMatrix::zeros(source.field, e, d))
                .collect(),
        }
    }

    pub fn identity(m: &Rep) -> Self {
        RepMorphism {
            components: m.dims.iter().map(|&d| FpMatrix::identity(m.field, d)).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &RepMorphism) -> RepMorphism {
        RepMorphism {
            components: self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn add(&self, other: &RepMorphism) -> RepMorphism {
        RepMorphism {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: u32) -> RepMorphism {
        RepMorphism {
            components: self.components.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(FpMatrix::is_zero)
    }

    pub fn is_invertible(&self) -> bool {
        self.components.iter().all(FpMatrix::is_invertible)
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.rows())
    }

    /// Checks `N_a φ_s = φ_t M_a` for every arrow, plus component shapes.
    pub fn intertwines(&self, source: &Rep, target: &Rep) -> bool {
        let shapes_ok = self.components.len() == source.dims.len()
            && self
                .components
                .iter()
                .enumerate()
                .all(|(v, c)| c.shape() == (target.dims[v], source.dims[v]));
        shapes_ok
            && source.quiver.arrows().iter().enumerate().all(|(ai, &(s, t))| {
                target.maps[ai].mul(&self.components[s]) == self.components[t].mul(&source.maps[ai])
            })
    }

    /// Flattened entries, vertex by vertex.
    pub fn flatten(&self) -> Vec<u32> {
        self.components.iter().flat_map(|c| c.entries().iter().copied()).collect()
    }

    /// Row bases of the kernel at each vertex.
    pub fn kernel(&self) -> Vec<FpMatrix> {
        self.components.iter().map(FpMatrix::kernel_basis).collect()
    }

    /// Row bases of the image at each vertex.
    pub fn image(&self) -> Vec<FpMatrix> {
        self.components.iter().map(FpMatrix::image_basis).collect()
    }
}

/// Shapes of `Hom(M_v, N_v)` blocks and their offsets in flattened coordinates.
fn vertex_layout(m: &Rep, n: &Rep) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(m.dims.len());
    let mut total = 0;
    for (d, e) in m.dims.iter().zip(&n.dims) {
        offsets.push(total);
        total += d * e;
    }
    (offsets, total)
}

fn unflatten(m: &Rep, n: &Rep, coords: &[u32]) -> RepMorphism {
    let (offsets, _) = vertex_layout(m, n);
    RepMorphism {
        components: m
            .dims
            .iter()
            .zip(&n.dims)
            .zip(&offsets)
            .map(|((&d, &e), &off)| {
                FpMatrix::new(m.field, e, d, coords[off..off + d * e].to_vec()).expect("residues")
            })
            .collect(),
    }
}

/// Matrix of the intertwiner map `Φ` in flattened coordinates.
fn intertwiner_matrix(m: &Rep, n: &Rep) -> FpMatrix {
    let f = m.field;
    let (_, domain) = vertex_layout(m, n);
    let codomain: usize = m.quiver.arrows().iter().map(|&(s, t)| m.dims[s] * n.dims[t]).sum();
    let mut phi = FpMatrix::zeros(f, codomain, domain);
    for col in 0..domain {
        let mut unit = vec![0; domain];
        unit[col] = 1;
        let g = unflatten(m, n, &unit);
        let mut row = 0;
        for (ai, &(s, t)) in m.quiver.arrows().iter().enumerate() {
            let diff = n.maps[ai].mul(&g.components[s]).sub(&g.components[t].mul(&m.maps[ai]));
            for &e in diff.entries() {
                phi.set(row, col, e);
                row += 1;
            }
        }
    }
    phi
}

/// A basis of `Hom(m, n)`.
pub fn hom_basis(m: &Rep, n: &Rep) -> Result<Vec<RepMorphism>> {
    m.same_category(n)?;
    let kernel = intertwiner_matrix(m, n).kernel_basis();
    Ok(kernel.row_vecs().map(|row| unflatten(m, n, row)).collect())
}

pub fn hom_dim(m: &Rep, n: &Rep) -> Result<usize> {
    m.same_category(n)?;
    let phi = intertwiner_matrix(m, n);
    Ok(phi.cols() - phi.rank())
}

/// `dim Ext¹(m, n)`, the cokernel dimension of `Φ`.
pub fn ext1_dim(m: &Rep, n: &Rep) -> Result<usize> {
    m.same_category(n)?;
    let phi = intertwiner_matrix(m, n);
    Ok(phi.rows() - phi.rank())
}

/// `⟨m, n⟩ = dim Hom(m, n) − dim Ext¹(m, n)`.
pub fn euler_form(m: &Rep, n: &Rep) -> Result<i64> {
    Ok(hom_dim(m, n)? as i64 - ext1_dim(m, n)? as i64)
}

/// The element `Σ c_i basis_i`.
pub fn combine(basis: &[RepMorphism], coeffs: &[u32], source: &Rep, target: &Rep) -> RepMorphism {
    let mut acc = RepMorphism::zero(source, target);
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// Every element of the span of `basis`, or a resource error if there are
/// more than `limit` of them.
pub fn enumerate_span(
    basis: &[RepMorphism],
    source: &Rep,
    target: &Rep,
    limit: u64,
) -> Result<impl Iterator<Item = RepMorphism>> {
    let field = source.field;
    let size = field.checked_pow(basis.len());
    if size.is_none_or(|s| s > limit) {
        return Err(Error::resource(
            "morphism space enumeration",
            format!("{}^{}", field.p(), basis.len()),
            limit,
        ));
    }
    let (basis, source, target) = (basis.to_vec(), source.clone(), target.clone());
    Ok(VectorIter::new(field, basis.len()).map(move |c| combine(&basis, &c, &source, &target)))
}

/// `|Aut(m)|` by counting invertible elements of `End(m)`.
pub fn aut_order_by_enumeration(m: &Rep, limit: u64) -> Result<u64> {
    let basis = hom_basis(m, m)?;
    Ok(enumerate_span(&basis, m, m, limit)?.filter(RepMorphism::is_invertible).count() as u64)
}

/// Indecomposability by idempotent enumeration: `m ≠ 0` and the only
/// idempotents of `End(m)` are 0 and 1.
pub fn is_indecomposable(m: &Rep, limit: u64) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    let basis = hom_basis(m, m)?;
    if basis.len() == 1 {
        // End(m) = F_p · id.
        return Ok(true);
    }
    let idempotents = enumerate_span(&basis, m, m, limit)?
        .filter(|e| e.compose(e) == *e)
        .count();
    Ok(idempotents == 2)
}

/// A splitting `m = A ⊕ B` into nonzero subrepresentations, as row bases of
/// `A_v` and `B_v`, or `None` when `End(m)` is local.
///
/// The splitting comes from an endomorphism `φ` that is neither nilpotent nor
/// invertible: for `N ≥ dim`, `m = im φ^N ⊕ ker φ^N` (Fitting), which is the
/// decomposition cut out by a nontrivial idempotent.
pub fn split(m: &Rep, limit: u64) -> Result<Option<(Vec<FpMatrix>, Vec<FpMatrix>)>> {
    let basis = hom_basis(m, m)?;
    if m.is_zero() || basis.len() <= 1 {
        return Ok(None);
    }
    let power = m.dims.iter().copied().max().unwrap_or(0).max(1) as u32;
    let try_split = |phi: &RepMorphism| -> Option<(Vec<FpMatrix>, Vec<FpMatrix>)> {
        let stable: Vec<FpMatrix> = phi.components.iter().map(|c| c.pow(power)).collect();
        let image_dim: usize = stable.iter().map(FpMatrix::rank).sum();
        if image_dim == 0 || image_dim == m.total_dim() {
            return None;
        }
        Some((
            stable.iter().map(FpMatrix::image_basis).collect(),
            stable.iter().map(FpMatrix::kernel_basis).collect(),
        ))
    };
    for b in &basis {
        if let Some(found) = try_split(b) {
            return Ok(Some(found));
        }
    }
    let field = m.field;
    let total = field.checked_pow(basis.len());
    for (tried, coeffs) in (0u64..).zip(VectorIter::new(field, basis.len())) {
        if tried >= limit {
            return Err(Error::resource(
                "endomorphism search for a splitting idempotent",
                format!("{}^{}", field.p(), basis.len()),
                limit,
            ));
        }
        if let Some(found) = try_split(&combine(&basis, &coeffs, m, m)) {
            return Ok(Some(found));
        }
    }
    debug_assert!(total.is_some_and(|t| t <= limit));
    Ok(None)
}

/// All subspaces of `F_p^n` of dimension `k`, as row bases in RREF.
pub fn subspaces_of_dim(field: PrimeField, n: usize, k: usize) -> Vec<FpMatrix> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(field, n, k, 0, &mut pivots, &mut out);
    out
}

/// All subspaces of `F_p^n`.
pub fn subspaces(field: PrimeField, n: usize) -> Vec<FpMatrix> {
    (0..=n).flat_map(|k| subspaces_of_dim(field, n, k)).collect()
}

fn choose_pivots(
    field: PrimeField,
    n: usize,
    k: usize,
    from: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<FpMatrix>,
) {
    if pivots.len() == k {
        // Free slots: row r, columns after pivot r that are not pivots.
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = pivots[r];
                let piv = pivots.clone();
                (pv + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        for values in VectorIter::new(field, free.len()) {
            let mut m = FpMatrix::zeros(field, k, n);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, 1);
            }
            for (&(r, c), &v) in free.iter().zip(&values) {
                m.set(r, c, v);
            }
            out.push(m);
        }
        return;
    }
    for c in from..n {
        pivots.push(c);
        choose_pivots(field, n, k, c + 1, pivots, out);
        pivots.pop();
    }
}

/// A subrepresentation together with the induced representations.
#[derive(Clone, Debug)]
pub struct SubRep {
    /// Row basis of the subspace at each vertex.
    pub basis: Vec<FpMatrix>,
    pub sub: Rep,
    pub quotient: Rep,
}

/// Bounds for subrepresentation enumeration.
#[derive(Clone, Copy, Debug)]
pub struct SubrepBounds {
    pub max_total_dim: usize,
    pub max_candidates: u64,
}

/// Every subrepresentation of `z` (optionally of a fixed dimension vector),
/// with sub and quotient representations.
pub fn subreps(z: &Rep, dim_filter: Option<&[usize]>, bounds: SubrepBounds) -> Result<Vec<SubRep>> {
    if z.total_dim() > bounds.max_total_dim {
        return Err(Error::resource("subrepresentation enumeration (total dimension)", z.total_dim(), bounds.max_total_dim));
    }
    let field = z.field;
    let candidates: Vec<Vec<FpMatrix>> = z
        .dims
        .iter()
        .enumerate()
        .map(|(v, &d)| match dim_filter {
            Some(filter) => subspaces_of_dim(field, d, filter[v]),
            None => subspaces(field, d),
        })
        .collect();
    let count = candidates
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
    if count.is_none_or(|c| c > bounds.max_candidates) {
        return Err(Error::resource(
            "subrepresentation enumeration (candidate subspace tuples)",
            count.map_or("overflow".to_string(), |c| c.to_string()),
            bounds.max_candidates,
        ));
    }
    let mut out = Vec::new();
    let mut chosen: Vec<Option<FpMatrix>> = vec![None; z.dims.len()];
    let order = z.quiver.topological_order().to_vec();
    search_subreps(z, &candidates, &order, 0, &mut chosen, &mut out);
    Ok(out)
}

fn search_subreps(
    z: &Rep,
    candidates: &[Vec<FpMatrix>],
    order: &[usize],
    depth: usize,
    chosen: &mut Vec<Option<FpMatrix>>,
    out: &mut Vec<SubRep>,
) {
    if depth == order.len() {
        let basis: Vec<FpMatrix> = chosen.iter().map(|c| c.clone().expect("all chosen")).collect();
        out.push(SubRep {
            sub: z.restrict(&basis),
            quotient: z.quotient(&basis),
            basis,
        });
        return;
    }
    let v = order[depth];
    for cand in &candidates[v] {
        chosen[v] = Some(cand.clone());
        // Check every arrow whose endpoints are both assigned and touch v.
        let ok = z.quiver.arrows().iter().enumerate().all(|(ai, &(s, t))| {
            if s != v && t != v {
                return true;
            }
            match (&chosen[s], &chosen[t]) {
                (Some(bs), Some(bt)) => (0..bs.rows()).all(|j| {
                    let image = z.maps[ai].mul_vec(bs.row(j));
                    let row = FpMatrix::new(z.field, 1, image.len(), image).expect("residues");
                    bt.vstack(&row).rank() == bt.rows()
                }),
                _ => true,
            }
        });
        if ok {
            search_subreps(z, candidates, order, depth + 1, chosen, out);
        }
    }
    chosen[v] = None;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: usize) -> Arc<Quiver> {
        Arc::new(Quiver::linear_a(n).unwrap())
    }

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    /// `X = (k, k, id)` over `1 → 2`.
    fn x12(q: &Arc<Quiver>) -> Rep {
        Rep::new(q.clone(), f2(), vec![1, 1], vec![FpMatrix::identity(f2(), 1)]).unwrap()
    }

    const BOUNDS: SubrepBounds = SubrepBounds {
        max_total_dim: 6,
        max_candidates: 1 << 20,
    };

    #[test]
    fn hom_dims_a2() {
        let q = a(2);
        let s1 = Rep::simple(q.clone(), f2(), 0);
        let s2 = Rep::simple(q.clone(), f2(), 1);
        let x = x12(&q);
        assert_eq!(hom_basis(&s1, &s2).unwrap().len(), 0);
        assert_eq!(hom_basis(&x, &s1).unwrap().len(), 1);
        assert_eq!(hom_basis(&x, &s2).unwrap().len(), 0);
        let s = Rep::simple(a(1), f2(), 0);
        assert_eq!(hom_basis(&s, &s).unwrap().len(), 1);
        for phi in hom_basis(&x, &s1).unwrap() {
            assert!(phi.intertwines(&x, &s1));
        }
    }

    #[test]
    fn ext_and_euler_a2() {
        let q = a(2);
        let s1 = Rep::simple(q.clone(), f2(), 0);
        let s2 = Rep::simple(q.clone(), f2(), 1);
        let x = x12(&q);
        assert_eq!(ext1_dim(&s1, &s2).unwrap(), 1);
        assert_eq!(ext1_dim(&s2, &s1).unwrap(), 0);
        let s = Rep::simple(a(1), f2(), 0);
        assert_eq!(ext1_dim(&s, &s).unwrap(), 0);
        assert_eq!(euler_form(&s1, &s2).unwrap(), -1);
        assert_eq!(euler_form(&s, &s).unwrap(), 1);
        assert_eq!(euler_form(&x, &x).unwrap(), 1);
    }

    #[test]
    fn mismatch_is_an_error() {
        let s = Rep::simple(a(1), f2(), 0);
        let t = Rep::simple(a(2), f2(), 0);
        assert!(matches!(hom_basis(&s, &t), Err(Error::Mismatch(_))));
        let s3 = Rep::simple(a(1), PrimeField::new(3).unwrap(), 0);
        assert!(matches!(ext1_dim(&s, &s3), Err(Error::Mismatch(_))));
    }

    #[test]
    fn aut_orders() {
        let s = Rep::simple(a(1), f2(), 0);
        assert_eq!(aut_order_by_enumeration(&s, 1 << 16).unwrap(), 1);
        let ss = s.direct_sum(&s).unwrap();
        assert_eq!(aut_order_by_enumeration(&ss, 1 << 16).unwrap(), 6);
        assert_eq!(aut_order_by_enumeration(&x12(&a(2)), 1 << 16).unwrap(), 1);
    }

    #[test]
    fn subrep_examples() {
        let s = Rep::simple(a(1), f2(), 0);
        let ss = s.direct_sum(&s).unwrap();
        assert_eq!(subreps(&ss, Some(&[1]), BOUNDS).unwrap().len(), 3);
        let x = x12(&a(2));
        assert_eq!(subreps(&x, Some(&[0, 1]), BOUNDS).unwrap().len(), 1);
        assert_eq!(subreps(&x, Some(&[1, 0]), BOUNDS).unwrap().len(), 0);
        let zero = Rep::zero(a(2), f2());
        assert_eq!(subreps(&zero, None, BOUNDS).unwrap().len(), 1);
    }

    #[test]
    fn subrep_bound_is_loud() {
        let s = Rep::simple(a(1), f2(), 0);
        let mut big = s.clone();
        for _ in 0..6 {
            big = big.direct_sum(&s).unwrap();
        }
        assert!(subreps(&big, None, BOUNDS).unwrap_err().is_resource());
    }

    #[test]
    fn subspace_counts() {
        // Gaussian binomials: [4 choose 2]_2 = 35, [3 choose 1]_3 = 13.
        assert_eq!(subspaces_of_dim(f2(), 4, 2).len(), 35);
        assert_eq!(subspaces_of_dim(PrimeField::new(3).unwrap(), 3, 1).len(), 13);
        assert_eq!(subspaces(f2(), 3).len(), 16);
    }

    #[test]
    fn projectives_of_a2() {
        let q = a(2);
        assert_eq!(Rep::projective(q.clone(), f2(), 0), x12(&q));
        assert_eq!(Rep::projective(q.clone(), f2(), 1), Rep::simple(q, f2(), 1));
    }

    #[test]
    fn indecomposability_and_split() {
        let q = a(2);
        let x = x12(&q);
        assert!(is_indecomposable(&x, 1 << 16).unwrap());
        assert!(split(&x, 1 << 16).unwrap().is_none());
        let zero_map = Rep::new(q.clone(), f2(), vec![1, 1], vec![FpMatrix::zeros(f2(), 1, 1)]).unwrap();
        assert!(!is_indecomposable(&zero_map, 1 << 16).unwrap());
        let (left, right) = split(&zero_map, 1 << 16).unwrap().unwrap();
        let dl: usize = left.iter().map(FpMatrix::rows).sum();
        let dr: usize = right.iter().map(FpMatrix::rows).sum();
        assert_eq!((dl, dr), (1, 1));
        assert!(zero_map.is_closed(&left) && zero_map.is_closed(&right));
    }
}
