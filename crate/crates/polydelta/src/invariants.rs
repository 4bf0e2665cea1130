//! The headline invariants of a polarized toric polytope presentation:
//! delta-genus, the adjoint threshold lambda, the normality threshold kappa,
//! Castelnuovo-Mumford regularity, and every named inequality and equality
//! test, each returning a witness-bearing report.

use num_traits::{One, Signed, Zero};

use crate::ehrhart::{self, HStarVector};
use crate::error::{Error, Result};
use crate::lattice::{int, Int, LatticePoint};
use crate::polytope::{canonical_form, minkowski_sum, LatticePolytope, PointSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckOutcome {
    Holds,
    Fails,
    NotApplicable,
}

/// A named pass/fail result, with the compared quantities and a witness for
/// existential failures.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckReport {
    pub name: &'static str,
    pub outcome: CheckOutcome,
    pub lhs: Option<Int>,
    pub rhs: Option<Int>,
    pub equality: Option<bool>,
    pub witness: Option<LatticePoint>,
}

impl CheckReport {
    fn comparison(name: &'static str, holds: bool, lhs: Int, rhs: Int) -> Self {
        CheckReport {
            name,
            outcome: if holds {
                CheckOutcome::Holds
            } else {
                CheckOutcome::Fails
            },
            equality: Some(lhs == rhs),
            lhs: Some(lhs),
            rhs: Some(rhs),
            witness: None,
        }
    }

    fn plain(name: &'static str, holds: bool) -> Self {
        CheckReport {
            name,
            outcome: if holds {
                CheckOutcome::Holds
            } else {
                CheckOutcome::Fails
            },
            lhs: None,
            rhs: None,
            equality: None,
            witness: None,
        }
    }

    fn not_applicable(name: &'static str) -> Self {
        CheckReport {
            name,
            outcome: CheckOutcome::NotApplicable,
            lhs: None,
            rhs: None,
            equality: None,
            witness: None,
        }
    }

    /// True unless the check ran and failed.
    pub fn passed(&self) -> bool {
        self.outcome != CheckOutcome::Fails
    }

    pub fn is_equality(&self) -> bool {
        self.equality == Some(true)
    }
}

/// `Delta(P) = dim P + v(P) - #(P cap M)`.
pub fn delta_genus(poly: &LatticePolytope) -> Int {
    let v = ehrhart::normalized_volume(poly);
    let count = poly.count_lattice_points(1);
    int(poly.dim() as i64) + v - count
}

/// First dilate with an interior lattice point: `lambda = e(P) + 1`.
pub fn lambda(poly: &LatticePolytope) -> usize {
    ehrhart::empty_depth(poly) + 1
}

/// The threshold `kappa`, computed through the step maps: the Minkowski sum
/// `((kP) cap M) + (P cap M)` fills `((k+1)P) cap M` for every `k` past the
/// last failure. Checking up to `cap = n - 1` suffices by the standard
/// stabilization theorem (steps at `k >= n-1` always hold for an
/// n-dimensional lattice polytope); the cap stays configurable so that
/// theorem can be audited rather than assumed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kappa {
    Value(usize),
    /// The step check still failed at `k = cap`, so the true value is not
    /// certified; never silently reported as a number.
    ExceedsCap { cap: usize },
}

impl Kappa {
    pub fn value(self) -> Option<usize> {
        match self {
            Kappa::Value(v) => Some(v),
            Kappa::ExceedsCap { .. } => None,
        }
    }
}

pub fn default_cap(dim: usize) -> usize {
    (dim.saturating_sub(1)).max(1)
}

pub fn kappa(poly: &LatticePolytope, cap: usize) -> Kappa {
    assert!(cap >= 1, "kappa cap must be at least 1");
    let base = poly.lattice_points(1);
    let mut kp = base.clone();
    let mut last_fail = 0usize;
    for k in 1..=cap {
        let next = poly.lattice_points(k as u64 + 1);
        let step = minkowski_sum(&kp, &base).expect("same ambient dimension");
        if step != next {
            last_fail = k;
        }
        kp = next;
    }
    if last_fail == cap {
        Kappa::ExceedsCap { cap }
    } else {
        Kappa::Value(1 + last_fail)
    }
}

/// Is the k-fold Minkowski sum of `P cap M` all of `(kP) cap M`? On failure
/// the witness is the first missing point.
pub fn is_k_normal(poly: &LatticePolytope, k: usize) -> CheckReport {
    assert!(k >= 1);
    let base = poly.lattice_points(1);
    let mut fold = base.clone();
    for _ in 1..k {
        fold = minkowski_sum(&fold, &base).expect("same ambient dimension");
    }
    let target = poly.lattice_points(k as u64);
    let witness = target.first_difference(&fold);
    CheckReport {
        name: "k_normal",
        outcome: if witness.is_none() {
            CheckOutcome::Holds
        } else {
            CheckOutcome::Fails
        },
        lhs: Some(int(fold.len() as i64)),
        rhs: Some(int(target.len() as i64)),
        equality: Some(witness.is_none()),
        witness,
    }
}

/// Normality up to the stabilization cap `n - 1`: a failure of (1.6) cannot
/// first appear at `k >= n`.
pub fn is_normal(poly: &LatticePolytope) -> bool {
    is_normal_capped(poly, default_cap(poly.dim()))
}

pub fn is_normal_capped(poly: &LatticePolytope, cap: usize) -> bool {
    let base = poly.lattice_points(1);
    let mut fold = base.clone();
    for k in 2..=cap {
        fold = minkowski_sum(&fold, &base).expect("same ambient dimension");
        if fold != poly.lattice_points(k as u64) {
            return false;
        }
    }
    true
}

/// `reg(X) = max(kappa + 1, n + 2 - lambda)`. Propagates an uncertified
/// kappa rather than guessing.
pub fn regularity(poly: &LatticePolytope, cap: usize) -> Result<usize> {
    match kappa(poly, cap) {
        Kappa::Value(k) => Ok((k + 1).max(poly.dim() + 2 - lambda(poly))),
        Kappa::ExceedsCap { cap } => Err(Error::KappaExceedsCap { cap }),
    }
}

/// The main inequality: `#(P cap M) - v(P) <= e(P) + 1`.
pub fn main_inequality(poly: &LatticePolytope) -> CheckReport {
    let count = poly.count_lattice_points(1);
    let v = ehrhart::normalized_volume(poly);
    let e = ehrhart::empty_depth(poly);
    let lhs = count - v;
    let rhs = int(e as i64 + 1);
    let mut report = CheckReport::comparison("main_inequality", lhs <= rhs, lhs, rhs);
    report.name = "main_inequality";
    report
}

/// `P` is a basic (unimodular) simplex.
pub fn is_basic_simplex(poly: &LatticePolytope) -> bool {
    poly.is_simplex() && ehrhart::normalized_volume(poly).is_one()
}

/// The bundled identities: the degree-one coefficient identity, the two
/// reciprocity specializations, the coefficient inequality `h*_1 >= h*_n`,
/// Pick's formula (dimension two only), the Bruns-Herzog partial sums, Hibi's
/// lower bound (interior point required), and the equivalence
/// `#(P cap M) = v(P) + n <=> deg P <= 1`.
pub fn identity_suite(poly: &LatticePolytope) -> Vec<CheckReport> {
    let n = poly.dim();
    let h = ehrhart::h_star(poly);
    let count = poly.count_lattice_points(1);
    let interior = poly.count_interior_lattice_points(1);
    let v = h.volume();
    let mut out = Vec::new();

    out.push(CheckReport::comparison(
        "point_count_eq_5_1",
        count == h.coeff(1) + int(n as i64 + 1),
        count.clone(),
        h.coeff(1) + int(n as i64 + 1),
    ));

    let int2 = poly.count_interior_lattice_points(2);
    let predicted2 = h.coeff(n - 1) + int(n as i64 + 1) * h.coeff(n);
    out.push(CheckReport::comparison(
        "interior_2p_eq_5_2",
        int2 == predicted2,
        int2,
        predicted2,
    ));

    out.push(CheckReport::comparison(
        "h1_ge_hn_eq_5_3",
        h.coeff(1) >= h.coeff(n),
        h.coeff(1).clone(),
        h.coeff(n).clone(),
    ));

    if n == 2 {
        let boundary = &count - &interior;
        let lhs = v.clone();
        let rhs = int(2) * &count - boundary - int(2);
        out.push(CheckReport::comparison("pick", lhs == rhs, lhs, rhs));
    } else {
        out.push(CheckReport::not_applicable("pick"));
    }

    // Bruns-Herzog: sum_{i<=l} h*_{d-i} >= sum_{i<=l} h*_i for l <= d/2,
    // with d = n - e the degree
    let d = h.degree();
    let mut bh_holds = true;
    let mut top = Int::zero();
    let mut bottom = Int::zero();
    for l in 0..=(d / 2) {
        top += h.coeff(d - l);
        bottom += h.coeff(l);
        if top < bottom {
            bh_holds = false;
            break;
        }
    }
    out.push(CheckReport::plain("bruns_herzog", bh_holds));

    if interior.is_positive() {
        let hibi = (2..n).all(|i| h.coeff(i) >= h.coeff(1));
        out.push(CheckReport::plain("hibi_lower_bound", hibi));
    } else {
        out.push(CheckReport::not_applicable("hibi_lower_bound"));
    }

    let bn1_count = count == &v + int(n as i64);
    let bn1_deg = h.degree() <= 1;
    out.push(CheckReport::plain("bn1_equivalence", bn1_count == bn1_deg));

    out
}

/// Equality-case classification of the main inequality.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EqualityCase {
    /// `e >= n-1`: the degree <= 1 regime.
    DegreeAtMostOne,
    /// `e = n-2`, `n >= 3`, with exactly one interior point in `(n-1)P`.
    DelPezzoCase,
    /// `e = 0`, `n >= 3`, equivalent to the reflexive simplex with all-ones
    /// h*-vector.
    FanoCase,
    Other,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecisionMethod {
    Direct,
    CanonicalForm,
    Fingerprint,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EqualityClassification {
    pub case: EqualityCase,
    pub method: DecisionMethod,
}

/// Classify an equality case of the main inequality. Errors if the polytope
/// is not an equality case.
pub fn classify_equality_case(poly: &LatticePolytope) -> Result<EqualityClassification> {
    let mi = main_inequality(poly);
    if !mi.is_equality() {
        return Err(Error::NotAnEqualityCase);
    }
    let n = poly.dim();
    let h = ehrhart::h_star(poly);
    let e = ehrhart::empty_depth_with_h_star(poly, &h);
    if e >= n - 1 {
        return Ok(EqualityClassification {
            case: EqualityCase::DegreeAtMostOne,
            method: DecisionMethod::Direct,
        });
    }
    if n >= 3 && e == n - 2 {
        let case = if poly.count_interior_lattice_points(n as u64 - 1).is_one() {
            EqualityCase::DelPezzoCase
        } else {
            EqualityCase::Other
        };
        return Ok(EqualityClassification {
            case,
            method: DecisionMethod::Direct,
        });
    }
    if n >= 3 && e == 0 {
        if poly.is_simplex() {
            let model = crate::families::delta_star(n)?;
            let case = if canonical_form(poly)? == canonical_form(&model)? {
                EqualityCase::FanoCase
            } else {
                EqualityCase::Other
            };
            return Ok(EqualityClassification {
                case,
                method: DecisionMethod::CanonicalForm,
            });
        }
        let all_ones = h.coeffs().iter().all(|c| c.is_one());
        let case = if all_ones && poly.count_lattice_points(1) == int(n as i64 + 2) {
            EqualityCase::FanoCase
        } else {
            EqualityCase::Other
        };
        return Ok(EqualityClassification {
            case,
            method: DecisionMethod::Fingerprint,
        });
    }
    Ok(EqualityClassification {
        case: EqualityCase::Other,
        method: DecisionMethod::Direct,
    })
}

/// Which optional (more expensive) invariants to compute.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct InvariantOptions {
    pub with_kappa: bool,
    pub with_normality: bool,
    /// Step/normality cap; defaults to `n - 1`.
    pub cap: Option<usize>,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            with_kappa: true,
            with_normality: true,
            cap: None,
        }
    }
}

impl InvariantOptions {
    /// Skip the Minkowski-sum invariants; used by large campaigns.
    pub fn fast() -> Self {
        InvariantOptions {
            with_kappa: false,
            with_normality: false,
            cap: None,
        }
    }
}

/// Every invariant of one polytope in a single report.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantReport {
    pub dim: usize,
    pub point_count: Int,
    pub interior_count: Int,
    pub volume: Int,
    pub h_star: HStarVector,
    pub empty_depth: usize,
    pub degree: usize,
    pub delta_genus: Int,
    pub lambda: usize,
    pub kappa: Option<Kappa>,
    pub regularity: Option<usize>,
    pub is_normal: Option<bool>,
}

pub fn invariant_report(poly: &LatticePolytope, opts: &InvariantOptions) -> InvariantReport {
    let n = poly.dim();
    let h = ehrhart::h_star(poly);
    let volume = ehrhart::normalized_volume(poly);
    debug_assert_eq!(volume, h.volume());
    let point_count = poly.count_lattice_points(1);
    let interior_count = poly.count_interior_lattice_points(1);
    let empty_depth = ehrhart::empty_depth_with_h_star(poly, &h);
    let degree = h.degree();
    let delta_genus = int(n as i64) + &volume - &point_count;
    let lambda = empty_depth + 1;
    let cap = opts.cap.unwrap_or_else(|| default_cap(n));
    let kappa_value = opts.with_kappa.then(|| kappa(poly, cap));
    let regularity = kappa_value.and_then(|k| k.value()).map(|k| (k + 1).max(n + 2 - lambda));
    let normal = opts.with_normality.then(|| is_normal_capped(poly, cap));
    InvariantReport {
        dim: n,
        point_count,
        interior_count,
        volume,
        h_star: h,
        empty_depth,
        degree,
        delta_genus,
        lambda,
        kappa: kappa_value,
        regularity,
        is_normal: normal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{
        basic_simplex, delta2, delta25, delta_star, koelman_quad, lawrence_prism,
    };

    fn unit_square() -> LatticePolytope {
        lawrence_prism(&[int(1), int(1)]).unwrap()
    }

    fn triangle_0_02_20() -> LatticePolytope {
        LatticePolytope::from_vertices_i64(2, &[&[0, 0], &[0, 2], &[2, 0]]).unwrap()
    }

    #[test]
    fn delta_genus_examples() {
        assert_eq!(delta_genus(&delta_star(3).unwrap()), int(2));
        for n in 1..=4 {
            assert_eq!(delta_genus(&basic_simplex(n).unwrap()), int(0));
        }
        assert_eq!(delta_genus(&delta2(3).unwrap()), int(1));
    }

    #[test]
    fn lambda_examples() {
        for n in 2..=4 {
            assert_eq!(lambda(&delta_star(n).unwrap()), 1);
            assert_eq!(lambda(&basic_simplex(n).unwrap()), n + 1);
        }
        assert_eq!(lambda(&delta2(4).unwrap()), 3);
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&basic_simplex(3).unwrap(), 2), Kappa::Value(1));
        assert_eq!(kappa(&unit_square(), 1), Kappa::Value(1));
        assert_eq!(kappa(&delta2(3).unwrap(), 2), Kappa::Value(2));
    }

    #[test]
    fn kappa_matches_step_oracle_on_delta2() {
        // oracle: direct Minkowski comparisons of the two steps
        let p = delta2(3).unwrap();
        let base = p.lattice_points(1);
        let step1 = minkowski_sum(&base, &base).unwrap();
        assert_ne!(step1, p.lattice_points(2));
        let step2 = minkowski_sum(&p.lattice_points(2), &base).unwrap();
        assert_eq!(step2, p.lattice_points(3));
        assert_eq!(kappa(&p, 2), Kappa::Value(2));
    }

    #[test]
    fn k_normality_examples() {
        assert!(is_k_normal(&delta2(3).unwrap(), 1).passed());
        let fail = is_k_normal(&delta2(3).unwrap(), 2);
        assert!(!fail.passed());
        assert_eq!(fail.witness, Some(LatticePoint::from_i64(&[1, 1, 1])));
        assert!(is_k_normal(&unit_square(), 7).passed());
    }

    #[test]
    fn normality_examples() {
        assert!(is_normal(&unit_square()));
        assert!(is_normal(&koelman_quad(&int(3), &int(1)).unwrap()));
        assert!(is_normal(&basic_simplex(4).unwrap()));
        assert!(!is_normal(&delta2(3).unwrap()));
        assert!(!is_normal(&delta2(4).unwrap()));
        // paranoid cap beyond the theorem-backed default
        assert!(is_normal_capped(&delta_star(3).unwrap(), 5));
    }

    #[test]
    fn regularity_examples() {
        for n in 2..=4 {
            assert_eq!(regularity(&basic_simplex(n).unwrap(), default_cap(n)).unwrap(), 2);
        }
        assert_eq!(regularity(&unit_square(), 1).unwrap(), 2);
        // delta*^3: kappa from the step oracle below is 1, so reg = max(2, 4)
        let p = delta_star(3).unwrap();
        let base = p.lattice_points(1);
        let mut kappa_oracle = 1;
        for k in 1..=2u64 {
            let step = minkowski_sum(&p.lattice_points(k), &base).unwrap();
            if step != p.lattice_points(k + 1) {
                kappa_oracle = k as usize + 1;
            }
        }
        assert_eq!(kappa_oracle, 1);
        assert_eq!(regularity(&p, 2).unwrap(), 4);
    }

    #[test]
    fn main_inequality_examples() {
        let r = main_inequality(&delta2(3).unwrap());
        assert!(r.passed() && r.is_equality());
        assert_eq!((r.lhs.unwrap(), r.rhs.unwrap()), (int(2), int(2)));

        let r = main_inequality(&delta25(5).unwrap());
        assert!(!r.passed());
        assert_eq!((r.lhs.unwrap(), r.rhs.unwrap()), (int(4), int(3)));

        let r = main_inequality(&koelman_quad(&int(1), &int(1)).unwrap());
        assert!(r.passed() && r.is_equality());
        assert_eq!((r.lhs.unwrap(), r.rhs.unwrap()), (int(2), int(2)));
    }

    #[test]
    fn identity_suite_examples() {
        for poly in [delta_star(3).unwrap(), basic_simplex(3).unwrap()] {
            for check in identity_suite(&poly) {
                assert!(check.passed(), "{check:?}");
            }
        }
        let reports = identity_suite(&triangle_0_02_20());
        for check in &reports {
            assert!(check.passed(), "{check:?}");
        }
        let pick = reports.iter().find(|c| c.name == "pick").unwrap();
        assert_eq!(pick.outcome, CheckOutcome::Holds);
        assert_eq!((pick.lhs.clone().unwrap(), pick.rhs.clone().unwrap()), (int(4), int(4)));
        // pick is not applicable away from dimension two
        let pick3 = identity_suite(&delta_star(3).unwrap())
            .into_iter()
            .find(|c| c.name == "pick")
            .unwrap();
        assert_eq!(pick3.outcome, CheckOutcome::NotApplicable);
    }

    #[test]
    fn basic_simplex_recognition() {
        assert!(is_basic_simplex(&basic_simplex(3).unwrap()));
        assert!(!is_basic_simplex(&delta2(3).unwrap()));
        assert!(!is_basic_simplex(&unit_square()));
    }

    #[test]
    fn equality_classification_examples() {
        let c = classify_equality_case(&delta2(3).unwrap()).unwrap();
        assert_eq!(c.case, EqualityCase::DelPezzoCase);

        let c = classify_equality_case(&delta_star(3).unwrap()).unwrap();
        assert_eq!(c.case, EqualityCase::FanoCase);
        assert_eq!(c.method, DecisionMethod::CanonicalForm);

        let c = classify_equality_case(&triangle_0_02_20()).unwrap();
        assert_eq!(c.case, EqualityCase::DegreeAtMostOne);

        assert_eq!(
            classify_equality_case(&basic_simplex(3).unwrap()).unwrap_err(),
            Error::NotAnEqualityCase
        );
    }

    #[test]
    fn octahedron_is_not_an_equality_case() {
        // e = 0 but the inequality is strict (count 7, v 8)
        let oct = LatticePolytope::from_vertices_i64(
            3,
            &[
                &[1, 0, 0],
                &[-1, 0, 0],
                &[0, 1, 0],
                &[0, -1, 0],
                &[0, 0, 1],
                &[0, 0, -1],
            ],
        )
        .unwrap();
        assert_eq!(
            classify_equality_case(&oct).unwrap_err(),
            Error::NotAnEqualityCase
        );
    }

    #[test]
    fn invariant_report_consistency() {
        let p = delta2(3).unwrap();
        let r = invariant_report(&p, &InvariantOptions::default());
        assert_eq!(r.dim, 3);
        assert_eq!(r.point_count, int(4));
        assert_eq!(r.volume, int(2));
        assert_eq!(r.delta_genus, int(3) + &r.volume - &r.point_count);
        assert_eq!(r.lambda, r.empty_depth + 1);
        assert_eq!(r.kappa, Some(Kappa::Value(2)));
        assert_eq!(r.is_normal, Some(false));
        assert_eq!(r.regularity, Some(3));

        let fast = invariant_report(&p, &InvariantOptions::fast());
        assert_eq!(fast.kappa, None);
        assert_eq!(fast.is_normal, None);
        assert_eq!(fast.regularity, None);
    }
}
