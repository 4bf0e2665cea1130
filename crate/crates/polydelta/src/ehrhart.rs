//! Ehrhart data of a full-dimensional lattice polytope: the counting function
//! `k -> #((kP) cap M)`, the h*-vector, normalized volume, degree, empty
//! depth, and reciprocity checks.
//!
//! The h*-vector is computed from exactly the `n+1` counts `L(0..n)` by the
//! closed-form binomial transform; reciprocity and out-of-sample extrapolation
//! then serve as independent validation. Internal cross-checks that tie two
//! exact computation routes together panic on mismatch: that is a bug signal,
//! never a property of the input.

use num_traits::{One, Signed, Zero};

use crate::lattice::{binomial, binomial_int, int, Int};
use crate::polytope::LatticePolytope;

/// Coefficients `h*_0 .. h*_n` of the Ehrhart series numerator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HStarVector {
    dim: usize,
    coeffs: Vec<Int>,
}

impl HStarVector {
    fn new(dim: usize, coeffs: Vec<Int>) -> Self {
        assert_eq!(coeffs.len(), dim + 1);
        assert!(coeffs[0].is_one(), "h*_0 must be 1, got {:?}", coeffs[0]);
        assert!(
            coeffs.iter().all(|c| !c.is_negative()),
            "negative h* coefficient ({coeffs:?}): geometry bug"
        );
        HStarVector { dim, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Int {
        &self.coeffs[i]
    }

    /// Top nonzero index.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .expect("h*_0 = 1")
    }

    /// `v(P) = h*_0 + ... + h*_n`.
    pub fn volume(&self) -> Int {
        self.coeffs.iter().sum()
    }
}

/// The dilate counts `L(0), ..., L(kmax)` and interior counts
/// `L°(1), ..., L°(kmax)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EhrhartProfile {
    pub counts: Vec<Int>,
    pub interior_counts: Vec<Int>,
}

pub fn profile(poly: &LatticePolytope, kmax: u64) -> EhrhartProfile {
    let counts = (0..=kmax).map(|k| poly.count_lattice_points(k)).collect();
    let interior_counts = (1..=kmax)
        .map(|k| poly.count_interior_lattice_points(k))
        .collect();
    EhrhartProfile {
        counts,
        interior_counts,
    }
}

/// `h*_i = sum_j (-1)^j C(n+1, j) L(i-j)` from the counts `L(0..n)`.
pub fn h_star(poly: &LatticePolytope) -> HStarVector {
    let counts: Vec<Int> = (0..=poly.dim() as u64)
        .map(|k| poly.count_lattice_points(k))
        .collect();
    h_star_from_counts(poly.dim(), &counts)
}

pub(crate) fn h_star_from_counts(dim: usize, counts: &[Int]) -> HStarVector {
    assert!(counts.len() >= dim + 1);
    let n = dim as u64;
    let mut coeffs = Vec::with_capacity(dim + 1);
    for i in 0..=n {
        let mut acc = Int::zero();
        for j in 0..=i {
            let term = binomial(n + 1, j) * &counts[(i - j) as usize];
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        coeffs.push(acc);
    }
    HStarVector::new(dim, coeffs)
}

/// Normalized volume `v(P) = n! vol(P)`, computed as the h* coefficient sum
/// and cross-checked against the n-th finite difference of the counting
/// function. The two exact routes must agree.
pub fn normalized_volume(poly: &LatticePolytope) -> Int {
    let counts: Vec<Int> = (0..=poly.dim() as u64)
        .map(|k| poly.count_lattice_points(k))
        .collect();
    let h = h_star_from_counts(poly.dim(), &counts);
    let from_h = h.volume();
    let n = poly.dim() as u64;
    let mut diff = Int::zero();
    for j in 0..=n {
        let term = binomial(n, j) * &counts[j as usize];
        if (n - j) % 2 == 0 {
            diff += term;
        } else {
            diff -= term;
        }
    }
    assert_eq!(
        from_h, diff,
        "h* sum and finite-difference volume disagree: geometry bug"
    );
    from_h
}

/// Top nonzero index of the h*-vector.
pub fn degree(poly: &LatticePolytope) -> usize {
    h_star(poly).degree()
}

/// Empty depth `e(P)`: the largest `k >= 1` with `int(kP)` lattice-point
/// free, or 0 when `P` itself has an interior lattice point. Computed by
/// direct interior scans and cross-checked against `n - deg P`.
pub fn empty_depth(poly: &LatticePolytope) -> usize {
    empty_depth_with_h_star(poly, &h_star(poly))
}

pub(crate) fn empty_depth_with_h_star(poly: &LatticePolytope, h: &HStarVector) -> usize {
    let n = poly.dim();
    let mut e = None;
    for k in 1..=(n as u64 + 1) {
        if !poly.count_interior_lattice_points(k).is_zero() {
            e = Some((k - 1) as usize);
            break;
        }
    }
    let e = e.expect("int((n+1)P) always contains a lattice point");
    assert_eq!(
        e,
        n - h.degree(),
        "direct empty depth disagrees with n - deg P: geometry bug"
    );
    e
}

/// Count of `(kP) cap M` predicted by the h*-vector:
/// `sum_i h*_i C(k - i + n, n)`.
pub fn predicted_count(h: &HStarVector, k: u64) -> Int {
    let n = h.dim() as u64;
    let mut acc = Int::zero();
    for (i, c) in h.coeffs().iter().enumerate() {
        acc += c * binomial_int(&(int(k as i64) - int(i as i64) + int(n as i64)), n);
    }
    acc
}

/// Interior count of `kP` predicted by reciprocity:
/// `sum_j h*_{n+1-j} C(k - j + n, n)` for `j = 1..=n+1`.
pub fn predicted_interior_count(h: &HStarVector, k: u64) -> Int {
    let n = h.dim() as u64;
    let mut acc = Int::zero();
    for j in 1..=(n + 1) {
        let c = h.coeff((n + 1 - j) as usize);
        acc += c * binomial_int(&(int(k as i64) - int(j as i64) + int(n as i64)), n);
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReciprocityReport {
    pub kmax: u64,
    pub holds: bool,
    /// `(k, predicted, counted)` for the first disagreeing dilate.
    pub first_mismatch: Option<(u64, Int, Int)>,
}

pub fn default_reciprocity_kmax(dim: usize) -> u64 {
    2 * dim as u64 + 2
}

/// Expand the reciprocity series to order `kmax` and compare against directly
/// counted interior points, coefficient by coefficient. `kmax >= n+1` so the
/// comparison covers both low-order specializations (`h*_n = #(int P cap M)`
/// at `k = 1` and the `#(int 2P)` identity at `k = 2`).
pub fn reciprocity_check(poly: &LatticePolytope, kmax: u64) -> ReciprocityReport {
    assert!(kmax >= poly.dim() as u64 + 1, "kmax must be at least n+1");
    let h = h_star(poly);
    let mut first_mismatch = None;
    for k in 1..=kmax {
        let predicted = predicted_interior_count(&h, k);
        let counted = poly.count_interior_lattice_points(k);
        if predicted != counted {
            first_mismatch = Some((k, predicted, counted));
            break;
        }
    }
    ReciprocityReport {
        kmax,
        holds: first_mismatch.is_none(),
        first_mismatch,
    }
}
