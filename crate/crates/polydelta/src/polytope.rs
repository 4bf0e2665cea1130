//! Lattice polytopes: vertex and halfspace representations, exact lattice
//! point enumeration of dilates and their interiors, Minkowski sums of point
//! sets, and unimodular canonical forms.
//!
//! Facets are found by exhaustive search over vertex subsets and lattice
//! points by a bounding-box scan filtered with the scaled facet inequalities.
//! Both are deliberately simple: inputs are desk-scale and exactness is the
//! point.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{int, Int, IntMatrix, LatticePoint};

/// A deduplicated set of lattice points of a fixed ambient dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointSet {
    dim: usize,
    points: BTreeSet<LatticePoint>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        PointSet {
            dim,
            points: BTreeSet::new(),
        }
    }

    pub fn from_points<I: IntoIterator<Item = LatticePoint>>(dim: usize, iter: I) -> Result<Self> {
        let mut set = PointSet::new(dim);
        for p in iter {
            set.insert(p)?;
        }
        Ok(set)
    }

    pub fn from_i64(dim: usize, pts: &[&[i64]]) -> Self {
        PointSet::from_points(dim, pts.iter().map(|p| LatticePoint::from_i64(p))).unwrap()
    }

    pub fn insert(&mut self, p: LatticePoint) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, p.dim()));
        }
        self.points.insert(p);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.points.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LatticePoint> {
        self.points.iter()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.is_subset(&other.points)
    }

    /// First point of `self` missing from `other`, in sorted order.
    pub fn first_difference(&self, other: &PointSet) -> Option<LatticePoint> {
        self.points.difference(&other.points).next().cloned()
    }
}

/// `{a+b : a in lhs, b in rhs}`, deduplicated.
pub fn minkowski_sum(lhs: &PointSet, rhs: &PointSet) -> Result<PointSet> {
    if lhs.dim() != rhs.dim() {
        return Err(Error::DimensionMismatch(lhs.dim(), rhs.dim()));
    }
    let mut out = PointSet::new(lhs.dim());
    for a in lhs.iter() {
        for b in rhs.iter() {
            out.points.insert(a.add(b));
        }
    }
    Ok(out)
}

/// A facet inequality `normal . x <= offset` with primitive normal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Facet {
    pub normal: LatticePoint,
    pub offset: Int,
}

/// The complete, irredundant primitive facet list of a polytope.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HalfspaceRep {
    pub facets: Vec<Facet>,
}

/// A full-dimensional lattice polytope in vertex representation.
///
/// The vertex list is exact and irredundant; the facet list is computed at
/// construction and kept alongside.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticePoint>,
    halfspaces: HalfspaceRep,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}
impl Eq for LatticePolytope {}

impl LatticePolytope {
    /// Convex hull of a nonempty point set. The input may contain redundant
    /// points; the result's vertex set is irredundant. Errors if the points do
    /// not span the ambient dimension.
    pub fn from_points(points: &PointSet) -> Result<LatticePolytope> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if points.dim() == 0 {
            return Err(Error::DegenerateInput);
        }
        let dim = points.dim();
        let pts: Vec<&LatticePoint> = points.iter().collect();
        let p0 = pts[0];
        let diffs = IntMatrix::from_rows(pts.iter().skip(1).map(|p| p.sub(p0).coords().to_vec()).collect());
        let arank = if pts.len() == 1 { 0 } else { diffs.rank() };
        if arank < dim {
            return Err(Error::NotFullDimensional {
                found: arank,
                expected: dim,
            });
        }

        let facets = supporting_facets(&pts, dim);
        let mut vertices = Vec::new();
        for p in &pts {
            let tight: Vec<Vec<Int>> = facets
                .iter()
                .filter(|f| f.normal.dot(p) == f.offset)
                .map(|f| f.normal.coords().to_vec())
                .collect();
            if tight.len() >= dim && IntMatrix::from_rows(tight).rank() == dim {
                vertices.push((*p).clone());
            }
        }
        vertices.sort();
        debug_assert!(facet_vertex_incidence_ok(&vertices, &facets, dim));
        Ok(LatticePolytope {
            dim,
            vertices,
            halfspaces: HalfspaceRep { facets },
        })
    }

    pub fn from_vertices_i64(dim: usize, pts: &[&[i64]]) -> Result<LatticePolytope> {
        LatticePolytope::from_points(&PointSet::from_i64(dim, pts))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    /// Complete primitive facet list.
    pub fn halfspaces(&self) -> &HalfspaceRep {
        &self.halfspaces
    }

    /// All lattice points of the dilate `kP`, `k >= 0`. `0P` is the origin.
    pub fn lattice_points(&self, k: u64) -> PointSet {
        let pts = scan::points(self, &int(k as i64), false);
        PointSet {
            dim: self.dim,
            points: pts.into_iter().collect(),
        }
    }

    /// All interior lattice points of `kP`, `k >= 1`.
    pub fn interior_lattice_points(&self, k: u64) -> PointSet {
        assert!(k >= 1, "interior of a dilate needs k >= 1");
        let pts = scan::points(self, &int(k as i64), true);
        PointSet {
            dim: self.dim,
            points: pts.into_iter().collect(),
        }
    }

    /// `#((kP) \cap M)` without materializing the points.
    pub fn count_lattice_points(&self, k: u64) -> Int {
        scan::count(self, &int(k as i64), false)
    }

    /// `#(int(kP) \cap M)`, `k >= 1`.
    pub fn count_interior_lattice_points(&self, k: u64) -> Int {
        assert!(k >= 1, "interior of a dilate needs k >= 1");
        scan::count(self, &int(k as i64), true)
    }

    /// Image under the affine-unimodular map `x -> U x + t`.
    pub fn apply_affine(&self, u: &IntMatrix, t: &LatticePoint) -> Result<LatticePolytope> {
        assert!(u.is_unimodular(), "transform matrix must be unimodular");
        let mapped = PointSet::from_points(
            self.dim,
            self.vertices.iter().map(|v| u.map_point(v).add(t)),
        )?;
        LatticePolytope::from_points(&mapped)
    }

    pub fn translate(&self, t: &LatticePoint) -> LatticePolytope {
        self.apply_affine(&IntMatrix::identity(self.dim), t)
            .expect("translation preserves validity")
    }
}

fn facet_vertex_incidence_ok(vertices: &[LatticePoint], facets: &[Facet], dim: usize) -> bool {
    // every facet supports >= dim affinely independent vertices and every
    // vertex lies on >= dim facets
    for f in facets {
        let tight: Vec<&LatticePoint> = vertices
            .iter()
            .filter(|v| f.normal.dot(v) == f.offset)
            .collect();
        if tight.len() < dim {
            return false;
        }
        if dim >= 2 {
            let d = IntMatrix::from_rows(
                tight[1..]
                    .iter()
                    .map(|v| v.sub(tight[0]).coords().to_vec())
                    .collect(),
            );
            if d.rank() != dim - 1 {
                return false;
            }
        }
    }
    vertices
        .iter()
        .all(|v| facets.iter().filter(|f| f.normal.dot(v) == f.offset).count() >= dim)
}

/// Exhaustive facet search: every supporting hyperplane spanned by `dim`
/// affinely independent input points, oriented and made primitive.
fn supporting_facets(pts: &[&LatticePoint], dim: usize) -> Vec<Facet> {
    let mut found: BTreeSet<(LatticePoint, Int)> = BTreeSet::new();
    for subset in (0..pts.len()).combinations(dim) {
        let base = pts[subset[0]];
        let rows: Vec<Vec<Int>> = subset[1..]
            .iter()
            .map(|&i| pts[i].sub(base).coords().to_vec())
            .collect();
        let normal = cross_normal(&rows, dim);
        if normal.is_zero() {
            continue;
        }
        let offset = normal.dot(base);
        let mut above = false;
        let mut below = false;
        for p in pts {
            let v = normal.dot(p);
            if v > offset {
                above = true;
            } else if v < offset {
                below = true;
            }
            if above && below {
                break;
            }
        }
        if above && below {
            continue;
        }
        let (normal, offset) = if above {
            (normal.neg(), -offset)
        } else {
            (normal, offset)
        };
        let g = normal.content();
        debug_assert!(!g.is_zero());
        let normal = normal.primitive();
        let offset = offset / g;
        found.insert((normal, offset));
    }
    found
        .into_iter()
        .map(|(normal, offset)| Facet { normal, offset })
        .collect()
}

/// Generalized cross product: the vector of signed maximal minors of the
/// `(dim-1) x dim` matrix of row vectors. Zero iff the rows are dependent.
fn cross_normal(rows: &[Vec<Int>], dim: usize) -> LatticePoint {
    debug_assert_eq!(rows.len(), dim - 1);
    let mut coords = Vec::with_capacity(dim);
    for j in 0..dim {
        let minor = IntMatrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect::<Vec<_>>(),
        );
        let det = if dim == 1 {
            Int::one()
        } else {
            minor.determinant().expect("minor is square")
        };
        coords.push(if j % 2 == 0 { det } else { -det });
    }
    LatticePoint::new(coords)
}

/// The affine-unimodular change of coordinates recorded by
/// [`normalize_full_dimensional`]: `p -> first r coords of (p - base) * V`
/// (row-vector convention), a bijection between the lattice points of the
/// input's affine span and `Z^r`.
#[derive(Clone, Debug)]
pub struct LatticeProjection {
    pub base: LatticePoint,
    pub matrix: IntMatrix,
    pub rank: usize,
}

impl LatticeProjection {
    pub fn identity(dim: usize) -> Self {
        LatticeProjection {
            base: LatticePoint::zero(dim),
            matrix: IntMatrix::identity(dim),
            rank: dim,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rank == self.matrix.rows() && self.base.is_zero() && self.matrix == IntMatrix::identity(self.rank)
    }

    pub fn apply(&self, p: &LatticePoint) -> LatticePoint {
        let d = p.sub(&self.base);
        let mut out = Vec::with_capacity(self.rank);
        for j in 0..self.rank {
            let mut acc = Int::zero();
            for i in 0..self.matrix.rows() {
                acc += d.coord(i) * self.matrix.get(i, j);
            }
            out.push(acc);
        }
        LatticePoint::new(out)
    }
}

/// Re-coordinatize a (possibly lower-dimensional) point set onto the lattice
/// of its affine span, so the result is full-dimensional. Lattice point counts
/// are preserved: the recorded transform is a bijection between `Z^n` points
/// of the affine span and `Z^r`.
pub fn normalize_full_dimensional(points: &PointSet) -> Result<(LatticePolytope, LatticeProjection)> {
    if points.len() < 2 {
        return Err(Error::DegenerateInput);
    }
    let dim = points.dim();
    let pts: Vec<&LatticePoint> = points.iter().collect();
    let base = pts[0].clone();
    let diffs = IntMatrix::from_rows(pts.iter().skip(1).map(|p| p.sub(&base).coords().to_vec()).collect());
    let rank = diffs.rank();
    if rank == 0 {
        return Err(Error::DegenerateInput);
    }
    if rank == dim {
        return Ok((
            LatticePolytope::from_points(points)?,
            LatticeProjection::identity(dim),
        ));
    }
    // rows of diffs span the affine lattice; SNF gives coordinates on its
    // saturation: with S = U D V, the map p -> first r coords of (p - base) V
    // is a lattice bijection from span(D) cap Z^n onto Z^r.
    let (_, _, v) = diffs.smith_normal_form();
    let proj = LatticeProjection {
        base,
        matrix: v,
        rank,
    };
    let reduced = PointSet::from_points(rank, points.iter().map(|p| proj.apply(p)))?;
    let poly = LatticePolytope::from_points(&reduced)?;
    Ok((poly, proj))
}

// ---------------------------------------------------------------------------
// canonical forms

/// Canonical form under affine-unimodular equivalence. Supported classes:
/// simplices of any dimension and arbitrary polytopes of dimension <= 2.
///
/// The form is the lexicographically least column-style HNF of the matrix of
/// vertex differences (rows), minimized over all admissible vertex orderings:
/// all orderings for simplices, boundary-walk rotations and reflections for
/// polygons. Two supported polytopes are equivalent iff their forms are equal.
pub fn canonical_form(poly: &LatticePolytope) -> Result<IntMatrix> {
    if poly.dim() == 2 {
        return Ok(polygon_canonical_form(poly));
    }
    if poly.is_simplex() {
        return Ok(simplex_canonical_form(poly));
    }
    Err(Error::UnsupportedClass)
}

/// True iff the canonical forms agree. Errors outside the supported classes.
pub fn is_equivalent(a: &LatticePolytope, b: &LatticePolytope) -> Result<bool> {
    if a.dim() != b.dim() || a.vertex_count() != b.vertex_count() {
        // still insist both are within the supported classes
        canonical_form(a)?;
        canonical_form(b)?;
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

fn simplex_canonical_form(poly: &LatticePolytope) -> IntMatrix {
    let verts = poly.vertices();
    let n = poly.dim();
    let mut best: Option<IntMatrix> = None;
    for base in 0..verts.len() {
        let others: Vec<&LatticePoint> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != base)
            .map(|(_, v)| v)
            .collect();
        for perm in (0..n).permutations(n) {
            let rows: Vec<Vec<Int>> = perm
                .iter()
                .map(|&i| others[i].sub(&verts[base]).coords().to_vec())
                .collect();
            let (h, _) = IntMatrix::from_rows(rows)
                .hermite_normal_form()
                .expect("simplex edge matrix has full column rank");
            if best.as_ref().map_or(true, |b| h < *b) {
                best = Some(h);
            }
        }
    }
    best.expect("simplex has vertices")
}

fn polygon_canonical_form(poly: &LatticePolytope) -> IntMatrix {
    let cycle = boundary_cycle(poly.vertices());
    let m = cycle.len();
    let mut best: Option<IntMatrix> = None;
    for start in 0..m {
        for dir in [1isize, -1] {
            let walk: Vec<&LatticePoint> = (0..m)
                .map(|i| {
                    let idx = (start as isize + dir * i as isize).rem_euclid(m as isize) as usize;
                    &cycle[idx]
                })
                .collect();
            let rows: Vec<Vec<Int>> = walk[1..]
                .iter()
                .map(|p| p.sub(walk[0]).coords().to_vec())
                .collect();
            let (h, _) = IntMatrix::from_rows(rows)
                .hermite_normal_form()
                .expect("polygon difference matrix has full column rank");
            if best.as_ref().map_or(true, |b| h < *b) {
                best = Some(h);
            }
        }
    }
    best.expect("polygon has vertices")
}

/// Vertices of a polygon in counterclockwise boundary order, via exact
/// angular sort around the vertex centroid.
fn boundary_cycle(vertices: &[LatticePoint]) -> Vec<LatticePoint> {
    let m = int(vertices.len() as i64);
    let mut center = LatticePoint::zero(2);
    for v in vertices {
        center = center.add(v);
    }
    let mut cyc: Vec<LatticePoint> = vertices.to_vec();
    let half = |p: &LatticePoint| -> u8 {
        // 0 for angle in [0, pi), 1 for [pi, 2pi)
        if p.coord(1).is_positive() || (p.coord(1).is_zero() && p.coord(0).is_positive()) {
            0
        } else {
            1
        }
    };
    cyc.sort_by(|a, b| {
        let ra = a.scaled(&m).sub(&center);
        let rb = b.scaled(&m).sub(&center);
        let (ha, hb) = (half(&ra), half(&rb));
        if ha != hb {
            return ha.cmp(&hb);
        }
        let cross = ra.coord(0) * rb.coord(1) - ra.coord(1) * rb.coord(0);
        // counterclockwise: a before b iff cross(ra, rb) > 0
        Int::zero().cmp(&cross)
    });
    cyc
}

// ---------------------------------------------------------------------------
// random affine-unimodular transforms (fuzzing support)

/// A random unimodular matrix built as a product of elementary shears, swaps
/// and sign flips. `steps` controls how wild the result gets.
pub fn random_unimodular<R: rand::Rng>(dim: usize, steps: usize, rng: &mut R) -> IntMatrix {
    let mut u = IntMatrix::identity(dim);
    if dim == 1 {
        if rng.gen_bool(0.5) {
            u.set(0, 0, int(-1));
        }
        return u;
    }
    for _ in 0..steps {
        match rng.gen_range(0..3u8) {
            0 => {
                // row_i += c * row_j
                let i = rng.gen_range(0..dim);
                let mut j = rng.gen_range(0..dim);
                while j == i {
                    j = rng.gen_range(0..dim);
                }
                let c = int(rng.gen_range(-2..=2i64));
                for col in 0..dim {
                    let v = u.get(i, col) + &c * u.get(j, col);
                    u.set(i, col, v);
                }
            }
            1 => {
                let i = rng.gen_range(0..dim);
                let mut j = rng.gen_range(0..dim);
                while j == i {
                    j = rng.gen_range(0..dim);
                }
                for col in 0..dim {
                    let a = u.get(i, col).clone();
                    let b = u.get(j, col).clone();
                    u.set(i, col, b);
                    u.set(j, col, a);
                }
            }
            _ => {
                let i = rng.gen_range(0..dim);
                for col in 0..dim {
                    let v = -u.get(i, col).clone();
                    u.set(i, col, v);
                }
            }
        }
    }
    debug_assert!(u.is_unimodular());
    u
}

pub fn random_translation<R: rand::Rng>(dim: usize, bound: i64, rng: &mut R) -> LatticePoint {
    LatticePoint::new((0..dim).map(|_| int(rng.gen_range(-bound..=bound))).collect())
}

// ---------------------------------------------------------------------------
// the scan engine

mod scan {
    //! Bounding-box scan of `kP` with facet filtering. The scan fixes one
    //! coordinate per level; at each level the feasible interval is refined
    //! with interval arithmetic over the remaining axes, and at the last level
    //! it is exact, so whole columns are counted without visiting points.
    //!
    //! The hot loop runs in `i128` when the instance provably fits (checked at
    //! build time with wide margins) and falls back to big integers otherwise,
    //! so results are exact in all cases.

    use super::*;

    pub(super) trait ScanNum: Clone + Ord + Sized {
        fn from_int(v: &Int) -> Option<Self>;
        fn to_int(&self) -> Int;
        fn zero() -> Self;
        fn one() -> Self;
        fn add(&self, o: &Self) -> Self;
        fn sub(&self, o: &Self) -> Self;
        fn mul(&self, o: &Self) -> Self;
        fn div_floor(&self, o: &Self) -> Self;
        fn div_ceil(&self, o: &Self) -> Self;
        fn is_neg(&self) -> bool;
        /// Magnitude guard used at build time; `None` means "never overflows".
        fn fits_margin(&self) -> bool;
    }

    impl ScanNum for i128 {
        fn from_int(v: &Int) -> Option<Self> {
            i128::try_from(v).ok()
        }
        fn to_int(&self) -> Int {
            Int::from(*self)
        }
        fn zero() -> Self {
            0
        }
        fn one() -> Self {
            1
        }
        fn add(&self, o: &Self) -> Self {
            self + o
        }
        fn sub(&self, o: &Self) -> Self {
            self - o
        }
        fn mul(&self, o: &Self) -> Self {
            self * o
        }
        fn div_floor(&self, o: &Self) -> Self {
            Integer::div_floor(self, o)
        }
        fn div_ceil(&self, o: &Self) -> Self {
            Integer::div_ceil(self, o)
        }
        fn is_neg(&self) -> bool {
            *self < 0
        }
        fn fits_margin(&self) -> bool {
            self.unsigned_abs() < (i128::MAX as u128) >> 3
        }
    }

    impl ScanNum for Int {
        fn from_int(v: &Int) -> Option<Self> {
            Some(v.clone())
        }
        fn to_int(&self) -> Int {
            self.clone()
        }
        fn zero() -> Self {
            <Int as Zero>::zero()
        }
        fn one() -> Self {
            <Int as One>::one()
        }
        fn add(&self, o: &Self) -> Self {
            self + o
        }
        fn sub(&self, o: &Self) -> Self {
            self - o
        }
        fn mul(&self, o: &Self) -> Self {
            self * o
        }
        fn div_floor(&self, o: &Self) -> Self {
            Integer::div_floor(self, o)
        }
        fn div_ceil(&self, o: &Self) -> Self {
            Integer::div_ceil(self, o)
        }
        fn is_neg(&self) -> bool {
            self.is_negative()
        }
        fn fits_margin(&self) -> bool {
            true
        }
    }

    struct ScanData<T> {
        dim: usize,
        normals: Vec<Vec<T>>,
        rhs: Vec<T>,
        lo: Vec<T>,
        hi: Vec<T>,
        /// per facet f and level j: min over the box of `sum_{i>=j} a_i x_i`
        suffmin: Vec<Vec<T>>,
    }

    fn build<T: ScanNum>(poly: &LatticePolytope, k: &Int, strict: bool) -> Option<ScanData<T>> {
        let n = poly.dim();
        let k_t = T::from_int(k)?;
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for j in 0..n {
            let mut cmin: Option<T> = None;
            let mut cmax: Option<T> = None;
            for v in poly.vertices() {
                let c = T::from_int(v.coord(j))?;
                cmin = Some(cmin.map_or(c.clone(), |m: T| m.min(c.clone())));
                cmax = Some(cmax.map_or(c.clone(), |m: T| m.max(c)));
            }
            let l = k_t.mul(&cmin?);
            let h = k_t.mul(&cmax?);
            if !l.fits_margin() || !h.fits_margin() {
                return None;
            }
            lo.push(l);
            hi.push(h);
        }
        let facets = &poly.halfspaces().facets;
        let mut normals = Vec::with_capacity(facets.len());
        let mut rhs = Vec::with_capacity(facets.len());
        let mut suffmin = Vec::with_capacity(facets.len());
        for f in facets {
            let a: Vec<T> = f
                .normal
                .coords()
                .iter()
                .map(T::from_int)
                .collect::<Option<_>>()?;
            let mut r = k_t.mul(&T::from_int(&f.offset)?);
            if strict {
                r = r.sub(&T::one());
            }
            // suffix minima, with a magnitude guard covering every partial sum
            let mut sm = vec![T::zero(); n + 1];
            let mut guard = if r.is_neg() { T::zero().sub(&r) } else { r.clone() };
            for j in (0..n).rev() {
                let p1 = a[j].mul(&lo[j]);
                let p2 = a[j].mul(&hi[j]);
                if !p1.fits_margin() || !p2.fits_margin() {
                    return None;
                }
                let hi_abs = p1.clone().max(p2.clone());
                let lo_neg = T::zero().sub(&p1.clone().min(p2.clone()));
                guard = guard.add(&hi_abs.max(lo_neg).max(T::zero()));
                sm[j] = sm[j + 1].add(&p1.min(p2));
            }
            if !guard.fits_margin() {
                return None;
            }
            normals.push(a);
            rhs.push(r);
            suffmin.push(sm);
        }
        Some(ScanData {
            dim: n,
            normals,
            rhs,
            lo,
            hi,
            suffmin,
        })
    }

    enum Mode<'a, T> {
        Count(&'a mut Int),
        Points(&'a mut Vec<LatticePoint>, Vec<T>),
    }

    fn recurse<T: ScanNum>(d: &ScanData<T>, level: usize, partial: &mut [T], mode: &mut Mode<T>) {
        let mut xlo = d.lo[level].clone();
        let mut xhi = d.hi[level].clone();
        for (f, a) in d.normals.iter().enumerate() {
            let rem = d.rhs[f].sub(&partial[f]).sub(&d.suffmin[f][level + 1]);
            let c = &a[level];
            if *c == T::zero() {
                if rem.is_neg() {
                    return;
                }
            } else if c.is_neg() {
                xlo = xlo.max(rem.div_ceil(c));
            } else {
                xhi = xhi.min(rem.div_floor(c));
            }
        }
        if xlo > xhi {
            return;
        }
        if level + 1 == d.dim {
            match mode {
                Mode::Count(total) => {
                    **total += xhi.sub(&xlo).add(&T::one()).to_int();
                }
                Mode::Points(out, prefix) => {
                    let mut x = xlo;
                    loop {
                        let mut coords: Vec<Int> = prefix.iter().map(|c| c.to_int()).collect();
                        coords.push(x.to_int());
                        out.push(LatticePoint::new(coords));
                        if x == xhi {
                            break;
                        }
                        x = x.add(&T::one());
                    }
                }
            }
            return;
        }
        // enter the column at x = xlo, stepping partial sums incrementally
        for (f, a) in d.normals.iter().enumerate() {
            partial[f] = partial[f].add(&a[level].mul(&xlo));
        }
        let mut x = xlo;
        loop {
            if let Mode::Points(_, prefix) = mode {
                prefix.push(x.clone());
            }
            recurse(d, level + 1, partial, mode);
            if let Mode::Points(_, prefix) = mode {
                prefix.pop();
            }
            if x == xhi {
                break;
            }
            x = x.add(&T::one());
            for (f, a) in d.normals.iter().enumerate() {
                partial[f] = partial[f].add(&a[level]);
            }
        }
        // restore the partial sums for this subtree
        for (f, a) in d.normals.iter().enumerate() {
            partial[f] = partial[f].sub(&a[level].mul(&x));
        }
    }

    fn run<T: ScanNum>(poly: &LatticePolytope, k: &Int, strict: bool, want_points: bool) -> Option<(Int, Vec<LatticePoint>)> {
        let d = build::<T>(poly, k, strict)?;
        let mut partial = vec![T::zero(); d.normals.len()];
        if want_points {
            let mut pts = Vec::new();
            let mut mode = Mode::Points(&mut pts, Vec::new());
            recurse(&d, 0, &mut partial, &mut mode);
            let n = int(pts.len() as i64);
            Some((n, pts))
        } else {
            let mut total = <Int as Zero>::zero();
            let mut mode: Mode<T> = Mode::Count(&mut total);
            recurse(&d, 0, &mut partial, &mut mode);
            Some((total, Vec::new()))
        }
    }

    pub(super) fn count(poly: &LatticePolytope, k: &Int, strict: bool) -> Int {
        assert!(!k.is_negative());
        if let Some((c, _)) = run::<i128>(poly, k, strict, false) {
            return c;
        }
        run::<Int>(poly, k, strict, false).expect("big-integer scan cannot fail").0
    }

    pub(super) fn points(poly: &LatticePolytope, k: &Int, strict: bool) -> Vec<LatticePoint> {
        assert!(!k.is_negative());
        if let Some((_, p)) = run::<i128>(poly, k, strict, true) {
            return p;
        }
        run::<Int>(poly, k, strict, true).expect("big-integer scan cannot fail").1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub fn delta_star(n: usize) -> LatticePolytope {
        let mut pts = Vec::new();
        for i in 0..n {
            let mut c = vec![0i64; n];
            c[i] = 1;
            pts.push(LatticePoint::from_i64(&c));
        }
        pts.push(LatticePoint::from_i64(&vec![-1i64; n]));
        LatticePolytope::from_points(&PointSet::from_points(n, pts).unwrap()).unwrap()
    }

    pub fn basic_simplex(n: usize) -> LatticePolytope {
        let mut pts = vec![LatticePoint::zero(n)];
        for i in 0..n {
            let mut c = vec![0i64; n];
            c[i] = 1;
            pts.push(LatticePoint::from_i64(&c));
        }
        LatticePolytope::from_points(&PointSet::from_points(n, pts).unwrap()).unwrap()
    }

    pub fn delta2(n: usize) -> LatticePolytope {
        assert!(n >= 3);
        let mut pts = vec![vec![0i64; n]];
        for i in 0..n {
            if i == 2 {
                continue;
            }
            let mut c = vec![0i64; n];
            c[i] = 1;
            pts.push(c);
        }
        let mut w = vec![0i64; n];
        w[0] = 1;
        w[1] = 1;
        w[2] = 2;
        pts.push(w);
        let refs: Vec<&[i64]> = pts.iter().map(|v| v.as_slice()).collect();
        LatticePolytope::from_vertices_i64(n, &refs).unwrap()
    }

    fn unit_square() -> LatticePolytope {
        LatticePolytope::from_vertices_i64(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn from_points_drops_redundant() {
        let p = LatticePolytope::from_vertices_i64(
            2,
            &[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[1, 0]],
        )
        .unwrap();
        assert_eq!(p.vertex_count(), 4);
    }

    #[test]
    fn from_points_boundary_point_not_a_vertex() {
        // (1,1) is the midpoint of the edge (2,0)-(0,2)
        let p =
            LatticePolytope::from_vertices_i64(2, &[&[0, 0], &[2, 0], &[0, 2], &[1, 1]]).unwrap();
        assert_eq!(p.vertex_count(), 3);
    }

    #[test]
    fn from_points_rejects_lower_dimensional() {
        let err = LatticePolytope::from_vertices_i64(2, &[&[0, 0], &[1, 0], &[2, 0]]).unwrap_err();
        assert_eq!(
            err,
            Error::NotFullDimensional {
                found: 1,
                expected: 2
            }
        );
    }

    #[test]
    fn from_points_delta_star_vertices_come_back() {
        let p = delta_star(3);
        assert_eq!(p.vertex_count(), 4);
        assert!(p
            .vertices()
            .iter()
            .any(|v| v == &LatticePoint::from_i64(&[-1, -1, -1])));
    }

    #[test]
    fn facets_basic_two_simplex() {
        let p = basic_simplex(2);
        let want: BTreeSet<(LatticePoint, Int)> = [
            (LatticePoint::from_i64(&[-1, 0]), int(0)),
            (LatticePoint::from_i64(&[0, -1]), int(0)),
            (LatticePoint::from_i64(&[1, 1]), int(1)),
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<(LatticePoint, Int)> = p
            .halfspaces()
            .facets
            .iter()
            .map(|f| (f.normal.clone(), f.offset.clone()))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn facets_delta_star_is_reflexive() {
        let p = delta_star(3);
        assert_eq!(p.halfspaces().facets.len(), 4);
        for f in &p.halfspaces().facets {
            assert_eq!(f.offset, int(1), "{f:?}");
        }
    }

    #[test]
    fn facets_unit_square() {
        assert_eq!(unit_square().halfspaces().facets.len(), 4);
    }

    #[test]
    fn lattice_point_counts_basic_simplex() {
        use crate::lattice::binomial;
        for n in 1..=4usize {
            let p = basic_simplex(n);
            for k in 0..=(2 * n as u64 + 1) {
                assert_eq!(
                    p.count_lattice_points(k),
                    binomial(k + n as u64, n as u64),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn lattice_points_twice_dilated_triangle() {
        let p = LatticePolytope::from_vertices_i64(2, &[&[0, 0], &[0, 2], &[2, 0]]).unwrap();
        let pts = p.lattice_points(2);
        assert_eq!(pts.len(), 15);
        // brute-force oracle over the bounding box [0,4]^2
        let mut oracle = 0usize;
        for x in 0..=4i64 {
            for y in 0..=4i64 {
                if x + y <= 4 {
                    oracle += 1;
                    assert!(pts.contains(&LatticePoint::from_i64(&[x, y])));
                }
            }
        }
        assert_eq!(oracle, 15);
    }

    #[test]
    fn lattice_points_delta_star() {
        let p = delta_star(3);
        let pts = p.lattice_points(1);
        assert_eq!(pts.len(), 5);
        assert!(pts.contains(&LatticePoint::zero(3)));
    }

    #[test]
    fn zero_dilate_is_origin() {
        let p = delta2(3);
        let pts = p.lattice_points(0);
        assert_eq!(pts.len(), 1);
        assert!(pts.contains(&LatticePoint::zero(3)));
    }

    #[test]
    fn interior_points_basic_three_simplex() {
        let p = basic_simplex(3);
        assert!(p.interior_lattice_points(3).is_empty());
        let int4 = p.interior_lattice_points(4);
        assert_eq!(int4.len(), 1);
        assert!(int4.contains(&LatticePoint::from_i64(&[1, 1, 1])));
    }

    #[test]
    fn interior_points_delta_star() {
        let p = delta_star(3);
        let i = p.interior_lattice_points(1);
        assert_eq!(i.len(), 1);
        assert!(i.contains(&LatticePoint::zero(3)));
    }

    #[test]
    fn minkowski_identity_and_square() {
        let sq = unit_square();
        let pts = sq.lattice_points(1);
        let zero = PointSet::from_i64(2, &[&[0, 0]]);
        assert_eq!(minkowski_sum(&pts, &zero).unwrap(), pts);
        let double = minkowski_sum(&pts, &pts).unwrap();
        assert_eq!(double.len(), 9);
        assert_eq!(double, sq.lattice_points(2));
    }

    #[test]
    fn minkowski_dimension_mismatch() {
        let a = PointSet::from_i64(2, &[&[0, 0]]);
        let b = PointSet::from_i64(3, &[&[0, 0, 0]]);
        assert!(matches!(
            minkowski_sum(&a, &b),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn minkowski_delta2_misses_a_point() {
        let p = delta2(3);
        let single = p.lattice_points(1);
        let double = p.lattice_points(2);
        let sums = minkowski_sum(&single, &single).unwrap();
        assert!(sums.is_subset(&double));
        let witness = double.first_difference(&sums).expect("not 2-normal");
        assert_eq!(witness, LatticePoint::from_i64(&[1, 1, 1]));
    }

    #[test]
    fn counts_monotone_and_contain_vertices() {
        let p = delta_star(3);
        let mut prev = Int::zero();
        for k in 0..=6u64 {
            let c = p.count_lattice_points(k);
            assert!(c >= prev);
            prev = c;
        }
        let pts = p.lattice_points(1);
        for v in p.vertices() {
            assert!(pts.contains(v));
        }
    }

    #[test]
    fn minkowski_step_inclusion() {
        let p = delta2(3);
        for k in 1..=3u64 {
            let s = minkowski_sum(&p.lattice_points(k), &p.lattice_points(1)).unwrap();
            assert!(s.is_subset(&p.lattice_points(k + 1)));
        }
    }

    #[test]
    fn normalize_segment_in_three_space() {
        let pts = PointSet::from_i64(3, &[&[0, 0, 0], &[3, 0, 0]]);
        let (p, t) = normalize_full_dimensional(&pts).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.count_lattice_points(1), int(4));
        assert!(!t.is_identity());
    }

    #[test]
    fn normalize_diagonal_segment_counts_lattice_length() {
        let pts = PointSet::from_i64(2, &[&[0, 0], &[1, 1], &[2, 2]]);
        let (p, _) = normalize_full_dimensional(&pts).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.count_lattice_points(1), int(3));
    }

    #[test]
    fn normalize_full_dimensional_input_is_identity() {
        let pts = PointSet::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let (p, t) = normalize_full_dimensional(&pts).unwrap();
        assert_eq!(p.dim(), 2);
        assert!(t.is_identity());
    }

    #[test]
    fn normalize_single_point_is_degenerate() {
        let pts = PointSet::from_i64(3, &[&[1, 2, 3]]);
        assert_eq!(
            normalize_full_dimensional(&pts).unwrap_err(),
            Error::DegenerateInput
        );
    }

    #[test]
    fn canonical_form_translation_invariant() {
        let p = delta_star(3);
        let q = p.translate(&LatticePoint::from_i64(&[5, -7, 11]));
        assert_eq!(canonical_form(&p).unwrap(), canonical_form(&q).unwrap());
    }

    #[test]
    fn canonical_form_unimodular_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let p = delta_star(3);
        let cf = canonical_form(&p).unwrap();
        for _ in 0..100 {
            let u = random_unimodular(3, 4, &mut rng);
            let t = random_translation(3, 3, &mut rng);
            let q = p.apply_affine(&u, &t).unwrap();
            assert_eq!(canonical_form(&q).unwrap(), cf);
        }
    }

    /// Exhaustive small-map equivalence oracle for 2d polytopes: search all
    /// unimodular 2x2 matrices with entries in [-bound, bound] and match
    /// vertex sets up to translation.
    fn oracle_equivalent_2d(a: &LatticePolytope, b: &LatticePolytope, bound: i64) -> bool {
        if a.vertex_count() != b.vertex_count() {
            return false;
        }
        let bverts: BTreeSet<LatticePoint> = b.vertices().iter().cloned().collect();
        for m00 in -bound..=bound {
            for m01 in -bound..=bound {
                for m10 in -bound..=bound {
                    for m11 in -bound..=bound {
                        if (m00 * m11 - m01 * m10).abs() != 1 {
                            continue;
                        }
                        let u = IntMatrix::from_i64_rows(&[&[m00, m01], &[m10, m11]]);
                        let imgs: Vec<LatticePoint> =
                            a.vertices().iter().map(|v| u.map_point(v)).collect();
                        // translation aligning the lexicographic minima
                        let amin = imgs.iter().min().unwrap();
                        let bmin = bverts.iter().next().unwrap();
                        let t = bmin.sub(amin);
                        let shifted: BTreeSet<LatticePoint> =
                            imgs.iter().map(|p| p.add(&t)).collect();
                        if shifted == bverts {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn canonical_form_regression_pair() {
        let a = LatticePolytope::from_vertices_i64(2, &[&[0, 0], &[2, 0], &[0, 1]]).unwrap();
        let b = LatticePolytope::from_vertices_i64(2, &[&[0, 0], &[1, 0], &[1, 2]]).unwrap();
        let oracle = oracle_equivalent_2d(&a, &b, 3);
        assert!(oracle, "oracle: equivalent via [[0,-1],[1,0]] + (1,0)");
        assert_eq!(is_equivalent(&a, &b).unwrap(), oracle);
    }

    #[test]
    fn is_equivalent_examples() {
        let p = delta_star(3);
        assert!(is_equivalent(&p, &p).unwrap());
        let sq = unit_square();
        let moved = sq.translate(&LatticePoint::from_i64(&[4, -2]));
        assert!(is_equivalent(&sq, &moved).unwrap());
        let basic = basic_simplex(2);
        let big = LatticePolytope::from_vertices_i64(2, &[&[0, 0], &[2, 0], &[0, 2]]).unwrap();
        assert!(!is_equivalent(&basic, &big).unwrap());
    }

    #[test]
    fn canonical_form_unsupported_class() {
        // triangular bipyramid: dimension 3, 5 vertices, not a simplex
        let p = LatticePolytope::from_vertices_i64(
            3,
            &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 1], &[1, 1, -1]],
        )
        .unwrap();
        assert_eq!(canonical_form(&p).unwrap_err(), Error::UnsupportedClass);
    }

    #[test]
    fn counts_invariant_under_unimodular_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for poly in [delta2(3), delta_star(3), unit_square()] {
            let n = poly.dim();
            for _ in 0..20 {
                let u = random_unimodular(n, 3, &mut rng);
                let t = random_translation(n, 4, &mut rng);
                let q = poly.apply_affine(&u, &t).unwrap();
                for k in 0..=3u64 {
                    assert_eq!(poly.count_lattice_points(k), q.count_lattice_points(k));
                    if k >= 1 {
                        assert_eq!(
                            poly.count_interior_lattice_points(k),
                            q.count_interior_lattice_points(k)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn big_coordinate_scan_falls_back_exactly() {
        // shear the square far out so i128 margins trip on the suffix guard
        let shift = "9000000000000000000000000000000000000";
        let s: Int = shift.parse().unwrap();
        let sq = unit_square();
        let t = LatticePoint::new(vec![s.clone(), s]);
        let moved = sq.translate(&t);
        assert_eq!(moved.count_lattice_points(1), int(4));
        assert_eq!(moved.count_lattice_points(2), int(9));
    }
}
