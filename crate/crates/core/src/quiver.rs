//! Finite acyclic quivers, their Tits form and positive roots.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Dimension vector: one entry per vertex.
pub type DimVector = Vec<usize>;

/// A finite quiver without oriented cycles. Vertices are `0..vertex_count`;
/// user-facing names are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<(usize, usize)>,
    /// Topological order of vertices (sources first).
    topo: Vec<usize>,
}

/// A path, as the sequence of arrow indices traversed from `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub arrows: Vec<usize>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Malformed("quiver needs at least one vertex".into()));
        }
        for &(s, t) in &arrows {
            if s >= vertex_count || t >= vertex_count {
                return Err(Error::Malformed(format!(
                    "arrow {}->{} references a vertex outside 1..={vertex_count}",
                    s + 1,
                    t + 1
                )));
            }
        }
        // Kahn's algorithm doubles as the acyclicity check.
        let mut indeg = vec![0usize; vertex_count];
        for &(_, t) in &arrows {
            indeg[t] += 1;
        }
        let mut queue: VecDeque<usize> = (0..vertex_count).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(vertex_count);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &(s, t) in &arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        queue.push_back(t);
                    }
                }
            }
        }
        if topo.len() != vertex_count {
            return Err(Error::Malformed("quiver has an oriented cycle".into()));
        }
        Ok(Quiver { vertex_count, arrows, topo })
    }

    /// Linearly oriented `A_n`: `1 → 2 → … → n`.
    pub fn linear_a(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Tits form `q(d) = Σ d_i² − Σ_a d_{s(a)} d_{t(a)}`.
    pub fn tits_form(&self, d: &[usize]) -> i64 {
        let sq: i64 = d.iter().map(|&x| (x * x) as i64).sum();
        let cross: i64 = self.arrows.iter().map(|&(s, t)| (d[s] * d[t]) as i64).sum();
        sq - cross
    }

    /// Bilinear form `Σ d_i e_i − Σ_a d_{s(a)} e_{t(a)}` on dimension vectors.
    pub fn euler_bilinear(&self, d: &[usize], e: &[usize]) -> i64 {
        let diag: i64 = d.iter().zip(e).map(|(&a, &b)| (a * b) as i64).sum();
        let cross: i64 = self.arrows.iter().map(|&(s, t)| (d[s] * e[t]) as i64).sum();
        diag - cross
    }

    /// Finite representation type, i.e. every connected component of the
    /// underlying graph is simply laced Dynkin. Equivalent to the symmetrized
    /// Tits form being positive definite, checked by leading principal minors.
    pub fn is_finite_type(&self) -> bool {
        let n = self.vertex_count;
        let mut sym = vec![vec![0i128; n]; n];
        for (i, row) in sym.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(s, t) in &self.arrows {
            sym[s][t] -= 1;
            sym[t][s] -= 1;
        }
        (1..=n).all(|k| {
            let minor: Vec<Vec<i128>> = sym[..k].iter().map(|r| r[..k].to_vec()).collect();
            bareiss_det(minor) > 0
        })
    }

    pub fn require_finite_type(&self) -> Result<()> {
        if self.is_finite_type() {
            Ok(())
        } else {
            Err(Error::NotFiniteType(format!(
                "{} vertices, arrows {:?}: Tits form is not positive definite",
                self.vertex_count,
                self.arrows.iter().map(|&(s, t)| (s + 1, t + 1)).collect::<Vec<_>>()
            )))
        }
    }

    /// Positive roots of a finite-type quiver: the `d ≥ 0` with `q(d) = 1`.
    ///
    /// Every non-simple positive root is a positive root plus a simple root,
    /// so a breadth-first closure from the simple roots finds all of them.
    pub fn positive_roots(&self) -> Result<Vec<DimVector>> {
        self.require_finite_type()?;
        let n = self.vertex_count;
        let mut seen: BTreeSet<DimVector> = BTreeSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(root) = queue.pop_front() {
            for i in 0..n {
                let mut next = root.clone();
                next[i] += 1;
                if self.tits_form(&next) == 1 && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// All paths starting at `start`, including the trivial one.
    pub fn paths_from(&self, start: usize) -> Vec<Path> {
        let mut out = vec![Path {
            start,
            end: start,
            arrows: vec![],
        }];
        let mut frontier = 0;
        while frontier < out.len() {
            let path = out[frontier].clone();
            for (ai, &(s, t)) in self.arrows.iter().enumerate() {
                if s == path.end {
                    let mut arrows = path.arrows.clone();
                    arrows.push(ai);
                    out.push(Path { start, end: t, arrows });
                }
            }
            frontier += 1;
        }
        out
    }
}

fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_cycles_and_bad_vertices() {
        assert!(Quiver::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(Quiver::new(1, vec![(0, 0)]).is_err());
        assert!(Quiver::new(2, vec![(0, 2)]).is_err());
        assert!(Quiver::new(0, vec![]).is_err());
    }

    #[test]
    fn root_counts_match_dynkin() {
        assert_eq!(Quiver::linear_a(1).unwrap().positive_roots().unwrap().len(), 1);
        assert_eq!(Quiver::linear_a(2).unwrap().positive_roots().unwrap().len(), 3);
        assert_eq!(Quiver::linear_a(3).unwrap().positive_roots().unwrap().len(), 6);
        assert_eq!(Quiver::linear_a(4).unwrap().positive_roots().unwrap().len(), 10);
        let d4 = Quiver::new(4, vec![(0, 1), (2, 1), (3, 1)]).unwrap();
        assert_eq!(d4.positive_roots().unwrap().len(), 12);
        let e6 = Quiver::new(6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (5, 2)]).unwrap();
        assert_eq!(e6.positive_roots().unwrap().len(), 36);
    }

    #[test]
    fn non_dynkin_rejected() {
        let kronecker = Quiver::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(!kronecker.is_finite_type());
        assert!(kronecker.positive_roots().is_err());
        let d4_tilde = Quiver::new(5, vec![(0, 4), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert!(!d4_tilde.is_finite_type());
    }

    #[test]
    fn paths_in_a3() {
        let q = Quiver::linear_a(3).unwrap();
        assert_eq!(q.paths_from(0).len(), 3);
        assert_eq!(q.paths_from(2).len(), 1);
    }
}
