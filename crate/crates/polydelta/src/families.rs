//! Constructors for the named polytope families and the classifier for the
//! two degree-one families (Lawrence prisms and the exceptional simplices).
//!
//! Constructors keep the textbook vertex coordinates (first vertex at the
//! origin where applicable) rather than re-normalizing, so printed vertices
//! match the usual presentations.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{int, Int, IntMatrix, LatticePoint};
use crate::polytope::{canonical_form, LatticePolytope, PointSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Basic,
    Delta2,
    Delta2N,
    Delta25,
    DeltaStar,
    LawrencePrism,
    Exceptional,
    KoelmanQuad,
    FanoPyramid,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Basic => "basic",
            Family::Delta2 => "delta2",
            Family::Delta2N => "delta2n",
            Family::Delta25 => "delta25",
            Family::DeltaStar => "delta_star",
            Family::LawrencePrism => "lawrence_prism",
            Family::Exceptional => "exceptional",
            Family::KoelmanQuad => "koelman_quad",
            Family::FanoPyramid => "fano_pyramid",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Some(match name {
            "basic" => Family::Basic,
            "delta2" => Family::Delta2,
            "delta2n" => Family::Delta2N,
            "delta25" => Family::Delta25,
            "delta_star" => Family::DeltaStar,
            "lawrence_prism" | "lawrence" => Family::LawrencePrism,
            "exceptional" => Family::Exceptional,
            "koelman_quad" | "koelman" => Family::KoelmanQuad,
            "fano_pyramid" => Family::FanoPyramid,
            _ => return None,
        })
    }
}

/// A family name plus the parameters needed to build a member.
///
/// Parameter conventions: `lawrence_prism` takes the heights `a_1..a_n`
/// (`dim = n`); `koelman_quad` takes `[a, b]`; `fano_pyramid` takes the base
/// polygon's vertices flattened as `[x1, y1, x2, y2, ...]`; the remaining
/// families are determined by `dim` alone.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilySpec {
    pub family: Family,
    pub dim: usize,
    pub params: Vec<Int>,
}

fn bad(family: &'static str, constraint: impl Into<String>) -> Error {
    Error::BadParams {
        family,
        constraint: constraint.into(),
    }
}

fn unit(n: usize, i: usize) -> Vec<Int> {
    let mut c = vec![Int::zero(); n];
    c[i] = Int::one();
    c
}

fn hull(dim: usize, pts: Vec<Vec<Int>>) -> LatticePolytope {
    let set = PointSet::from_points(dim, pts.into_iter().map(LatticePoint::new))
        .expect("family vertices have the right dimension");
    LatticePolytope::from_points(&set).expect("family polytopes are full-dimensional")
}

/// `conv{0, e_1, ..., e_n}`.
pub fn basic_simplex(n: usize) -> Result<LatticePolytope> {
    if n < 1 {
        return Err(bad("basic", "n >= 1"));
    }
    let mut pts = vec![vec![Int::zero(); n]];
    pts.extend((0..n).map(|i| unit(n, i)));
    Ok(hull(n, pts))
}

/// `conv{0, e1, e2, e1+e2+2e3, e4, ..., en}`, an empty non-normal simplex.
pub fn delta2(n: usize) -> Result<LatticePolytope> {
    if n < 3 {
        return Err(bad("delta2", "n >= 3"));
    }
    let mut pts = vec![vec![Int::zero(); n], unit(n, 0), unit(n, 1)];
    let mut w = vec![Int::zero(); n];
    w[0] = Int::one();
    w[1] = Int::one();
    w[2] = int(2);
    pts.push(w);
    pts.extend((3..n).map(|i| unit(n, i)));
    Ok(hull(n, pts))
}

/// `conv{0, e1, ..., e_{n-1}, e1+...+e_{n-1}+2en}`.
pub fn delta2n(n: usize) -> Result<LatticePolytope> {
    if n < 4 {
        return Err(bad("delta2n", "n >= 4"));
    }
    let mut pts = vec![vec![Int::zero(); n]];
    pts.extend((0..n - 1).map(|i| unit(n, i)));
    let mut w = vec![Int::one(); n];
    w[n - 1] = int(2);
    pts.push(w);
    Ok(hull(n, pts))
}

/// `conv{0, e1, ..., e4, e1+...+e4+2e5, e6, ..., en}`, the counterexample
/// family in dimension >= 5.
pub fn delta25(n: usize) -> Result<LatticePolytope> {
    if n < 5 {
        return Err(bad("delta25", "n >= 5"));
    }
    let mut pts = vec![vec![Int::zero(); n]];
    pts.extend((0..4).map(|i| unit(n, i)));
    let mut w = vec![Int::zero(); n];
    for c in w.iter_mut().take(4) {
        *c = Int::one();
    }
    w[4] = int(2);
    pts.push(w);
    pts.extend((5..n).map(|i| unit(n, i)));
    Ok(hull(n, pts))
}

/// `conv{e1, ..., en, -e1-...-en}`, the reflexive simplex with the origin as
/// its unique interior lattice point.
pub fn delta_star(n: usize) -> Result<LatticePolytope> {
    if n < 1 {
        return Err(bad("delta_star", "n >= 1"));
    }
    let mut pts: Vec<Vec<Int>> = (0..n).map(|i| unit(n, i)).collect();
    pts.push(vec![-Int::one(); n]);
    Ok(hull(n, pts))
}

/// `conv{0, e_i, e_i + a_i*en (i < n), a_n*en}` with
/// `a_1 >= ... >= a_{n-1} >= 0`, `a_n >= 1` and `sum a_i >= 2`.
pub fn lawrence_prism(heights: &[Int]) -> Result<LatticePolytope> {
    let n = heights.len();
    if n < 2 {
        return Err(bad("lawrence_prism", "n >= 2 heights"));
    }
    for w in heights[..n - 1].windows(2) {
        if w[0] < w[1] {
            return Err(bad("lawrence_prism", "a_1 >= ... >= a_{n-1}"));
        }
    }
    if heights[n - 2].is_negative() {
        return Err(bad("lawrence_prism", "a_i >= 0"));
    }
    if heights[n - 1] < Int::one() {
        return Err(bad("lawrence_prism", "a_n >= 1"));
    }
    if heights.iter().sum::<Int>() < int(2) {
        return Err(bad("lawrence_prism", "a_1 + ... + a_n >= 2"));
    }
    let mut pts = vec![vec![Int::zero(); n]];
    for i in 0..n - 1 {
        pts.push(unit(n, i));
        let mut top = unit(n, i);
        top[n - 1] = heights[i].clone();
        pts.push(top);
    }
    let mut apex = vec![Int::zero(); n];
    apex[n - 1] = heights[n - 1].clone();
    pts.push(apex);
    Ok(hull(n, pts))
}

/// `conv{0, 2e1, 2e2, e3, ..., en}`.
pub fn exceptional(n: usize) -> Result<LatticePolytope> {
    if n < 3 {
        return Err(bad("exceptional", "n >= 3"));
    }
    Ok(exceptional_unchecked(n))
}

/// The same vertex list without the dimension guard; in dimension two it is
/// the triangle `conv{0, (2,0), (0,2)}` from the Koelman classification.
fn exceptional_unchecked(n: usize) -> LatticePolytope {
    let mut pts = vec![vec![Int::zero(); n]];
    let mut v1 = unit(n, 0);
    v1[0] = int(2);
    let mut v2 = unit(n, 1);
    v2[1] = int(2);
    pts.push(v1);
    pts.push(v2);
    pts.extend((2..n).map(|i| unit(n, i)));
    hull(n, pts)
}

/// `conv{0, (1,0), (0,a), (1,b)}` with `a >= 1`, `b >= 0`, `a + b >= 2`.
pub fn koelman_quad(a: &Int, b: &Int) -> Result<LatticePolytope> {
    if a < &Int::one() {
        return Err(bad("koelman_quad", "a >= 1"));
    }
    if b.is_negative() {
        return Err(bad("koelman_quad", "b >= 0"));
    }
    if a + b < int(2) {
        return Err(bad("koelman_quad", "a + b >= 2"));
    }
    Ok(hull(
        2,
        vec![
            vec![Int::zero(), Int::zero()],
            vec![Int::one(), Int::zero()],
            vec![Int::zero(), a.clone()],
            vec![Int::one(), b.clone()],
        ],
    ))
}

/// Height-one pyramid with apex at the origin over a polygon with exactly one
/// interior lattice point: `conv({0} union F x {1})`.
pub fn fano_pyramid(base: &LatticePolytope) -> Result<LatticePolytope> {
    if base.dim() != 2 {
        return Err(bad("fano_pyramid", "a two-dimensional base"));
    }
    if base.count_interior_lattice_points(1) != Int::one() {
        return Err(bad(
            "fano_pyramid",
            "a base with exactly one interior lattice point",
        ));
    }
    let mut pts = vec![vec![Int::zero(); 3]];
    for v in base.vertices() {
        pts.push(vec![v.coord(0).clone(), v.coord(1).clone(), Int::one()]);
    }
    Ok(hull(3, pts))
}

/// Build a family member from a spec, validating the parameter constraints.
pub fn build(spec: &FamilySpec) -> Result<LatticePolytope> {
    let want_no_params = |family: &'static str| -> Result<()> {
        if spec.params.is_empty() {
            Ok(())
        } else {
            Err(bad(family, "no parameters besides the dimension"))
        }
    };
    match spec.family {
        Family::Basic => {
            want_no_params("basic")?;
            basic_simplex(spec.dim)
        }
        Family::Delta2 => {
            want_no_params("delta2")?;
            delta2(spec.dim)
        }
        Family::Delta2N => {
            want_no_params("delta2n")?;
            delta2n(spec.dim)
        }
        Family::Delta25 => {
            want_no_params("delta25")?;
            delta25(spec.dim)
        }
        Family::DeltaStar => {
            want_no_params("delta_star")?;
            delta_star(spec.dim)
        }
        Family::Exceptional => {
            want_no_params("exceptional")?;
            exceptional(spec.dim)
        }
        Family::LawrencePrism => {
            if spec.params.len() != spec.dim {
                return Err(bad("lawrence_prism", "exactly n heights"));
            }
            lawrence_prism(&spec.params)
        }
        Family::KoelmanQuad => {
            if spec.dim != 2 {
                return Err(bad("koelman_quad", "dimension 2"));
            }
            if spec.params.len() != 2 {
                return Err(bad("koelman_quad", "exactly two parameters a, b"));
            }
            koelman_quad(&spec.params[0], &spec.params[1])
        }
        Family::FanoPyramid => {
            if spec.dim != 3 {
                return Err(bad("fano_pyramid", "dimension 3"));
            }
            if spec.params.len() < 6 || spec.params.len() % 2 != 0 {
                return Err(bad(
                    "fano_pyramid",
                    "an even list of at least six base coordinates",
                ));
            }
            let pts: Vec<LatticePoint> = spec
                .params
                .chunks(2)
                .map(|c| LatticePoint::new(c.to_vec()))
                .collect();
            let base = LatticePolytope::from_points(&PointSet::from_points(2, pts)?)?;
            fano_pyramid(&base)
        }
    }
}

// ---------------------------------------------------------------------------
// degree-one classification

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DegreeOneClass {
    /// Heights in constraint order: `a_1 >= ... >= a_{n-1} >= 0`, then `a_n`.
    LawrencePrism(Vec<Int>),
    Exceptional,
    NotDegreeOne,
}

/// Sorted-descending height multiset; prism parameter lists are equivalent
/// iff these agree.
pub fn normalized_prism_params(params: &[Int]) -> Vec<Int> {
    let mut v = params.to_vec();
    v.sort();
    v.reverse();
    v
}

/// Decide which degree-one family a polytope belongs to and recover the
/// parameters. Prisms are certified constructively (a lattice projection onto
/// a basic simplex with segment fibers); the exceptional simplex is matched by
/// canonical form. Refuses rather than guesses when neither certificate is
/// available.
pub fn classify_degree_one(poly: &LatticePolytope) -> Result<DegreeOneClass> {
    if crate::ehrhart::degree(poly) != 1 {
        return Ok(DegreeOneClass::NotDegreeOne);
    }
    if let Some(heights) = find_prism_structure(poly) {
        return Ok(DegreeOneClass::LawrencePrism(heights));
    }
    if poly.dim() == 2 || poly.is_simplex() {
        let model = exceptional_unchecked(poly.dim());
        if canonical_form(poly)? == canonical_form(&model)? {
            return Ok(DegreeOneClass::Exceptional);
        }
    }
    Err(Error::UnsupportedClass)
}

/// Search for a Lawrence-prism structure: a primitive direction `d` such that
/// projecting `d` out maps the vertices of `P` onto the vertices of a basic
/// `(n-1)`-simplex with fibers that are lattice segments. Any hit certifies
/// equivalence (offsets shear away over a basic base), so the recovered
/// heights rebuild an equivalent prism by construction.
fn find_prism_structure(poly: &LatticePolytope) -> Option<Vec<Int>> {
    let n = poly.dim();
    if n < 2 {
        return None;
    }
    let verts = poly.vertices();
    let mut candidates: Vec<LatticePoint> = Vec::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let mut d = verts[j].sub(&verts[i]).primitive();
            // fix orientation so +-d are not tried twice
            if let Some(first) = d.coords().iter().find(|c| !c.is_zero()) {
                if first.is_negative() {
                    d = d.neg();
                }
            }
            if !candidates.contains(&d) {
                candidates.push(d);
            }
        }
    }
    candidates.sort();
    for d in &candidates {
        if let Some(heights) = try_prism_direction(poly, d) {
            return Some(heights);
        }
    }
    None
}

fn try_prism_direction(poly: &LatticePolytope, dir: &LatticePoint) -> Option<Vec<Int>> {
    let n = poly.dim();
    let dcol = IntMatrix::from_rows(dir.coords().iter().map(|c| vec![c.clone()]).collect());
    let (_, u, _) = dcol.smith_normal_form();
    // rows 1..n of u annihilate dir and present the quotient lattice Z^{n-1}
    let project = |p: &LatticePoint| -> LatticePoint {
        let full = u.map_point(p);
        LatticePoint::new(full.coords()[1..].to_vec())
    };
    let images: Vec<LatticePoint> = poly.vertices().iter().map(|v| project(v)).collect();
    let image_set = PointSet::from_points(n - 1, images.iter().cloned()).ok()?;
    let base = LatticePolytope::from_points(&image_set).ok()?;
    if !base.is_simplex() {
        return None;
    }
    // basic base: unimodular edge matrix
    let b0 = &base.vertices()[0];
    let edges = IntMatrix::from_rows(
        base.vertices()[1..]
            .iter()
            .map(|v| v.sub(b0).coords().to_vec())
            .collect(),
    );
    if !edges.determinant().ok()?.abs().is_one() {
        return None;
    }
    // group the vertices of P by image; every image must be a base vertex
    let mut heights = Vec::with_capacity(n);
    for q in base.vertices() {
        let fiber: Vec<&LatticePoint> = poly
            .vertices()
            .iter()
            .zip(&images)
            .filter(|(_, img)| *img == q)
            .map(|(v, _)| v)
            .collect();
        match fiber.len() {
            1 => heights.push(Int::zero()),
            2 => {
                let diff = fiber[1].sub(fiber[0]);
                let i = dir.coords().iter().position(|c| !c.is_zero())?;
                let c = diff.coord(i).div_floor(dir.coord(i));
                if diff != dir.scaled(&c) {
                    return None;
                }
                heights.push(c.abs());
            }
            _ => return None,
        }
    }
    if poly.vertex_count() != heights.iter().filter(|h| !h.is_zero()).count() + n {
        return None;
    }
    // arrange as a_1 >= ... >= a_{n-1} >= 0 with a_n the least positive height
    let apex = heights.iter().filter(|h| h.is_positive()).min().cloned()?;
    let mut rest = heights.clone();
    let pos = rest.iter().position(|h| *h == apex).unwrap();
    rest.remove(pos);
    rest.sort();
    rest.reverse();
    rest.push(apex);
    Some(rest)
}
