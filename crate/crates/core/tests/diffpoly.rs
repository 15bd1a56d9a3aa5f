use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use pihier_core::diffpoly::*;
use proptest::prelude::*;

fn fixture(m: u32) -> DiffPoly {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "fixtures",
        &format!("hierarchy_m{m}.json"),
    ]
    .iter()
    .collect();
    DiffPoly::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn c(n: i64) -> DiffPoly {
    DiffPoly::from_int(n)
}

#[test]
fn generated_equations_match_the_transcribed_displays() {
    for m in 0..=4 {
        let eq = generate_equation(m, EquationOptions::with_times().allow_odd()).unwrap();
        assert_eq!(eq.paper_normalized, fixture(m), "m = {m}");
        assert_eq!(
            eq.paper_normalized,
            eq.canonical.scale(&normalization_factor(m))
        );
    }
}

#[test]
fn odd_orders_need_the_override() {
    for m in [1, 3, 5] {
        assert_eq!(
            generate_equation(m, EquationOptions::with_times()).unwrap_err(),
            DiffPolyError::OddOrderRequested(m)
        );
    }
}

#[test]
fn first_lenard_densities() {
    let seq = lenard_sequence(2).unwrap();
    let q = DiffPoly::q(0);
    assert_eq!(seq[0], &c(-4) * &q);
    assert_eq!(seq[1], &(&c(6) * &(&q * &q)) - &DiffPoly::q(2));
    let expected = &(&(&DiffPoly::q(4).scale(&r(-1, 4)) + &(&c(5) * &(&q * &DiffPoly::q(2))))
        + &(&DiffPoly::q(1) * &DiffPoly::q(1)).scale(&r(5, 2)))
        - &(&c(10) * &(&q * &(&q * &q)));
    assert_eq!(seq[2], expected);
}

#[test]
fn recursion_holds_through_order_eight() {
    let seq = lenard_sequence(8).unwrap();
    for k in 0..=7 {
        assert_eq!(
            seq[k + 1].total_derivative(),
            apply_lenard_operator(&seq[k]),
            "k = {k}"
        );
    }
}

#[test]
fn lenard_densities_are_graded() {
    let seq = lenard_sequence(8).unwrap();
    for (k, l) in seq.iter().enumerate() {
        assert_eq!(l.homogeneous_weight(), Some(2 * k as u32 + 2));
        assert_eq!(l.max_derivative_order(), Some(2 * k as u32));
    }
}

#[test]
fn lax_identities_hold_symbolically() {
    for m in [2, 4, 6] {
        let report = verify_lax_identities(m).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }
}

#[test]
fn paper_normalization_has_unit_top_derivative() {
    for m in 1..=4 {
        let eq = generate_equation(m, EquationOptions::with_times().allow_odd()).unwrap();
        let top = Monomial::var(Var::Q(2 * m));
        assert_eq!(eq.paper_normalized.coefficient(&top), r(-1, 1), "m = {m}");
    }
}

#[test]
fn canonical_is_a_quarter_of_the_m2_display() {
    let eq = generate_equation(2, EquationOptions::with_times()).unwrap();
    let point = Point::new(
        Some(r(3, 7)),
        vec![r(-2, 5)],
        vec![r(1, 2), r(-1, 3), r(2, 1), r(5, 4), r(-7, 9)],
    );
    let canonical = eq.canonical.evaluate_exact(&point).unwrap();
    let display = fixture(2).evaluate_exact(&point).unwrap();
    assert_eq!(canonical * r(4, 1), display);
    // independent hand evaluation of s + L_2 + t_1 L_0
    let (s, t1) = (r(3, 7), r(-2, 5));
    let (q, q1, q2, q4) = (r(1, 2), r(-1, 3), r(2, 1), r(-7, 9));
    let l2 = -q4 / r(4, 1) + r(5, 1) * &q * &q2 + r(5, 2) * &q1 * &q1 - r(10, 1) * &q * &q * &q;
    let by_hand = s + l2 + t1 * r(-4, 1) * q;
    assert_eq!(eq.canonical.evaluate_exact(&point).unwrap(), by_hand);
}

#[test]
fn kdv_flow_rhs() {
    let f = generate_kdv_flow(1).unwrap();
    let q = DiffPoly::q(0);
    let expected = (&(&c(12) * &(&q * &DiffPoly::q(1))) - &DiffPoly::q(3)).scale(&r(-1, 3));
    assert_eq!(f.rhs, expected);
    assert!(matches!(
        generate_kdv_flow(0),
        Err(DiffPolyError::InvalidOrder(_))
    ));
}

#[test]
fn integration_inverts_differentiation() {
    let seq = lenard_sequence(5).unwrap();
    for l in &seq {
        assert_eq!(
            &integrate_total_derivative(&l.total_derivative()).unwrap(),
            l
        );
    }
    // q q'' is not a total derivative
    let p = &DiffPoly::q(0) * &DiffPoly::q(2);
    assert_eq!(
        integrate_total_derivative(&p),
        Err(DiffPolyError::NotATotalDerivative)
    );
}

#[test]
fn json_round_trip_and_schema() {
    for l in lenard_sequence(7).unwrap() {
        assert_eq!(DiffPoly::from_json(&l.to_json()).unwrap(), l);
        assert_eq!(DiffPoly::from_json(&l.to_json_pretty()).unwrap(), l);
    }
    let eq = generate_equation(4, EquationOptions::with_times()).unwrap();
    assert_eq!(
        DiffPoly::from_json(&eq.paper_normalized.to_json()).unwrap(),
        eq.paper_normalized
    );
    assert!(matches!(
        DiffPoly::from_json(
            "{\"vars\":[\"q\"],\"terms\":[{\"exp\":[1,2],\"num\":\"1\",\"den\":\"1\"}]}"
        ),
        Err(DiffPolyError::Schema(_))
    ));
}

#[test]
fn missing_assignment_is_reported() {
    let p = &DiffPoly::s() + &DiffPoly::q(3);
    let point = Point::new(Some(1.0), vec![], vec![0.0, 1.0]);
    assert_eq!(
        p.evaluate_f64(&point),
        Err(DiffPolyError::MissingAssignment("q3".into()))
    );
}

/// Exact jet of `q(s) = sum a_i s^i` at `s`.
fn poly_jet(a: &[BigRational], s: &BigRational, order: usize) -> Vec<BigRational> {
    let mut coeffs = a.to_vec();
    let mut jet = Vec::new();
    for _ in 0..=order {
        jet.push(
            coeffs
                .iter()
                .rev()
                .fold(BigRational::zero(), |acc, c| acc * s + c),
        );
        coeffs = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * r(i as i64, 1))
            .collect();
    }
    jet
}

#[test]
fn total_derivative_matches_derivative_along_a_curve() {
    // along q(s) = polynomial, P(s, jet(s)) is a polynomial in s whose derivative is
    // recovered exactly from enough samples; compare with (DP)(s, jet(s))
    let a = vec![r(1, 3), r(-2, 1), r(1, 2), r(3, 5), r(-1, 7)];
    let p = &(&(&DiffPoly::s() * &DiffPoly::q(2))
        + &(&DiffPoly::q(1) * &(&DiffPoly::q(0) * &DiffPoly::q(0))))
        + &(&c(3) * &(&DiffPoly::q(3) * &DiffPoly::q(1)));
    let dp = p.total_derivative();
    let eval_at = |poly: &DiffPoly, s: &BigRational| {
        let jet = poly_jet(&a, s, 5);
        poly.evaluate_exact(&Point::new(Some(s.clone()), vec![], jet))
            .unwrap()
    };
    // P along the curve has degree at most 11; its derivative at s0 follows exactly from
    // Lagrange interpolation on 15 rational nodes
    let nodes: Vec<BigRational> = (0..15).map(|i| r(i - 7, 3)).collect();
    let vals: Vec<BigRational> = nodes.iter().map(|x| eval_at(&p, x)).collect();
    let s0 = r(1, 5);
    let mut derivative = BigRational::zero();
    for (i, xi) in nodes.iter().enumerate() {
        // d/ds of the i-th Lagrange basis polynomial at s0
        let mut denom = BigRational::from_integer(1.into());
        for (j, xj) in nodes.iter().enumerate() {
            if j != i {
                denom *= xi - xj;
            }
        }
        let mut dl = BigRational::zero();
        for k in 0..nodes.len() {
            if k == i {
                continue;
            }
            let mut prod = BigRational::from_integer(1.into());
            for (j, xj) in nodes.iter().enumerate() {
                if j != i && j != k {
                    prod *= &s0 - xj;
                }
            }
            dl += prod;
        }
        derivative += &vals[i] * dl / denom;
    }
    assert_eq!(derivative, eval_at(&dp, &s0));
}

fn small_poly() -> impl Strategy<Value = DiffPoly> {
    let var = prop_oneof![
        (0u32..4).prop_map(Var::Q),
        Just(Var::S),
        (1u32..3).prop_map(Var::T),
    ];
    let term = (
        prop::collection::vec((var, 1u32..3), 0..3),
        -5i64..6,
        1i64..4,
    );
    prop::collection::vec(term, 0..4).prop_map(|terms| {
        let mut p = DiffPoly::zero();
        for (factors, n, d) in terms {
            p.add_term(Monomial::from_factors(factors), r(n, d));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_and_derivation_laws(a in small_poly(), b in small_poly(), d in small_poly()) {
        prop_assert_eq!(&a * &(&b + &d), &(&a * &b) + &(&a * &d));
        prop_assert_eq!(&(&a * &b) * &d, &a * &(&b * &d));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        let ab = &a * &b;
        prop_assert_eq!(
            ab.total_derivative(),
            &(&a.total_derivative() * &b) + &(&a * &b.total_derivative())
        );
        prop_assert_eq!(
            ab.partial(Var::Q(1)),
            &(&a.partial(Var::Q(1)) * &b) + &(&a * &b.partial(Var::Q(1)))
        );
        prop_assert_eq!(DiffPoly::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in small_poly(), b in small_poly(), x in -3i64..4) {
        let point = Point::new(Some(r(x, 2)), vec![r(1, 3), r(-2, 1)], vec![r(x, 1), r(1, 2), r(-1, 5), r(2, 3)]);
        let ea = a.evaluate_exact(&point).unwrap();
        let eb = b.evaluate_exact(&point).unwrap();
        prop_assert_eq!((&a * &b).evaluate_exact(&point).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).evaluate_exact(&point).unwrap(), ea + eb);
    }
}
