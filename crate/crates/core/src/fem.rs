//! P1 conforming and Crouzeix-Raviart nonconforming assembly of the Dirichlet
//! Laplacian, plus the a priori projection constant C_h.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::SparseSym;
use crate::mesh::{DomainKind, DomainSpec, Triangulation};

/// Stiffness/mass pair over the free degrees of freedom, after eliminating
/// Dirichlet rows and columns. `dof_map[entity]` is the free index of a
/// vertex (P1) or edge (CR); `free[k]` is its inverse.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub k: SparseSym,
    pub m: SparseSym,
    pub dof_map: Vec<Option<usize>>,
    pub free: Vec<usize>,
    pub ch: Option<f64>,
}

impl AssembledSystem {
    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn with_ch(mut self, ch: f64) -> Self {
        self.ch = Some(ch);
        self
    }
}

/// Geometry of one triangle needed for linear elements: area and the
/// barycentric gradients grad(lambda_i) = (b_i, c_i) / (2A).
fn element_geometry(t: &Triangulation, tri: [usize; 3]) -> (f64, [f64; 3], [f64; 3]) {
    let p: Vec<[f64; 2]> = tri.iter().map(|&v| t.vertices[v]).collect();
    let mut b = [0.0; 3];
    let mut c = [0.0; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        b[i] = p[j][1] - p[k][1];
        c[i] = p[k][0] - p[j][0];
    }
    // Signed area; triangles are CCW so this is positive.
    let a2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
    debug_assert!(a2 > 0.0);
    (0.5 * a2, b, c)
}

/// Unconstrained P1 matrices over all vertices: exact element integrals,
/// consistent (not lumped) mass.
pub fn assemble_p1_raw(t: &Triangulation) -> (SparseSym, SparseSym) {
    let n = t.num_vertices();
    let mut kt = Vec::with_capacity(9 * t.num_triangles());
    let mut mt = Vec::with_capacity(9 * t.num_triangles());
    for tri in &t.triangles {
        let (area, b, c) = element_geometry(t, *tri);
        for i in 0..3 {
            for j in 0..3 {
                let kij = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
                let mij = if i == j { area / 6.0 } else { area / 12.0 };
                kt.push((tri[i], tri[j], kij));
                mt.push((tri[i], tri[j], mij));
            }
        }
    }
    (SparseSym::from_triplets(n, kt), SparseSym::from_triplets(n, mt))
}

fn eliminate(
    k_full: &SparseSym,
    m_full: &SparseSym,
    constrained: &[bool],
) -> Result<AssembledSystem> {
    let n = constrained.len();
    let mut dof_map = vec![None; n];
    let mut free = Vec::new();
    for v in 0..n {
        if !constrained[v] {
            dof_map[v] = Some(free.len());
            free.push(v);
        }
    }
    if free.is_empty() {
        return Err(Error::EmptySystem);
    }
    let restrict = |s: &SparseSym| {
        let triplets: Vec<_> = free
            .iter()
            .enumerate()
            .flat_map(|(fi, &v)| {
                s.row(v)
                    .filter_map(|(c, val)| dof_map[c].map(|fc| (fi, fc, val)))
                    .collect::<Vec<_>>()
            })
            .collect();
        SparseSym::from_triplets(free.len(), triplets)
    };
    Ok(AssembledSystem {
        k: restrict(k_full),
        m: restrict(m_full),
        dof_map,
        free,
        ch: None,
    })
}

/// P1 system with Dirichlet vertices eliminated by row/column deletion.
pub fn assemble_p1(t: &Triangulation) -> Result<AssembledSystem> {
    t.validate()?;
    let (k_full, m_full) = assemble_p1_raw(t);
    eliminate(&k_full, &m_full, &t.boundary)
}

/// Deterministic edge numbering: sorted (min, max) vertex pairs.
pub fn edge_index(t: &Triangulation) -> BTreeMap<(usize, usize), usize> {
    t.edge_counts().keys().copied().enumerate().map(|(i, e)| (e, i)).collect()
}

/// Unconstrained Crouzeix-Raviart matrices over all edges. The basis function
/// of the edge opposite vertex i is 1 - 2 lambda_i; the element mass matrix is
/// exactly (area/3) I.
pub fn assemble_cr_raw(t: &Triangulation) -> (SparseSym, SparseSym, BTreeMap<(usize, usize), usize>) {
    let edges = edge_index(t);
    let n = edges.len();
    let mut kt = Vec::with_capacity(9 * t.num_triangles());
    let mut mt = Vec::with_capacity(3 * t.num_triangles());
    let ekey = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    for tri in &t.triangles {
        let (area, b, c) = element_geometry(t, *tri);
        // Local DOF i sits on the edge opposite local vertex i.
        let dofs = [
            edges[&ekey(tri[1], tri[2])],
            edges[&ekey(tri[2], tri[0])],
            edges[&ekey(tri[0], tri[1])],
        ];
        for i in 0..3 {
            for j in 0..3 {
                let kij = (b[i] * b[j] + c[i] * c[j]) / area;
                kt.push((dofs[i], dofs[j], kij));
            }
            mt.push((dofs[i], dofs[i], area / 3.0));
        }
    }
    (SparseSym::from_triplets(n, kt), SparseSym::from_triplets(n, mt), edges)
}

/// CR system with Dirichlet boundary-edge DOFs eliminated.
pub fn assemble_cr(t: &Triangulation) -> Result<AssembledSystem> {
    t.validate()?;
    let (k_full, m_full, edges) = assemble_cr_raw(t);
    let counts = t.edge_counts();
    let mut constrained = vec![false; edges.len()];
    for (e, &idx) in &edges {
        if counts[e] == 1 {
            constrained[idx] = true;
        }
    }
    eliminate(&k_full, &m_full, &constrained)
}

/// Load vector (f, phi_i) for constant f over the free P1 DOFs.
pub fn p1_constant_load(t: &Triangulation, sys: &AssembledSystem, f: f64) -> DVector<f64> {
    let mut b = DVector::zeros(sys.dim());
    for tri in &t.triangles {
        let (area, _, _) = element_geometry(t, *tri);
        for &v in tri {
            if let Some(fi) = sys.dof_map[v] {
                b[fi] += f * area / 3.0;
            }
        }
    }
    b
}

/// Lookup table for C_h keyed by refinement level.
#[derive(Debug, Clone, Default)]
pub struct ChTable {
    values: BTreeMap<u32, f64>,
}

impl ChTable {
    pub fn new(values: impl IntoIterator<Item = (u32, f64)>) -> Self {
        ChTable { values: values.into_iter().collect() }
    }

    /// Parse lines `level value`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let level: u32 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse { line: lno + 1, msg: "expected refinement level".into() })?;
            let value: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse { line: lno + 1, msg: "expected C_h value".into() })?;
            values.insert(level, value);
        }
        Ok(ChTable { values })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn lookup(&self, level: u32) -> Result<f64> {
        self.values.get(&level).copied().ok_or_else(|| {
            Error::MissingConstant(format!(
                "no C_h entry for refinement level {level}; bounds must not degrade silently"
            ))
        })
    }
}

/// A priori constant with ||grad(u - P_h u)|| <= C_h ||f||.
///
/// A supplied table is authoritative (fail-closed on missing levels); the
/// 0.493 h formula applies only to the uniform right-triangle family on the
/// unit square.
pub fn compute_ch(
    t: &Triangulation,
    domain: &DomainSpec,
    level: u32,
    table: Option<&ChTable>,
) -> Result<f64> {
    if let Some(table) = table {
        return table.lookup(level);
    }
    match domain.kind {
        DomainKind::UnitSquare => Ok(0.493 * t.h),
        DomainKind::Dumbbell | DomainKind::Polygon => Err(Error::MissingConstant(
            "C_h on non-convex domains must come from a lookup table".into(),
        )),
    }
}
