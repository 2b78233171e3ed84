//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weylform::calculus::{
    self, antisymmetrize, build_quad_algebra, build_quar_algebra, canonical_theta, curvature, h1,
    in_quadratic_kernel, psi_word, quad_relations, quartic_relations_b, TensorVector, ThetaClass,
};
use weylform::connections::{
    self, check_conjecture, g2_eta, g2_relation_list, theta_family, theta_general, theta_i,
    twisted_derivation, verify_identity, weyl_action, ConjectureId, Identity,
};
use weylform::linalg::{kernel_basis, rank, rat, Eliminator, SparseMatrix};
use weylform::ncalg::{AlgebraHandle, GenIdx, Monomial, NCPoly, ResourceCaps};
use weylform::{RootSystem, RootSystemType};

fn rs(kind: RootSystemType, rank: usize) -> Arc<RootSystem> {
    Arc::new(RootSystem::build(kind, rank).unwrap())
}

fn caps(max: u64) -> ResourceCaps {
    ResourceCaps { max_monomials: max }
}

fn quad(kind: RootSystemType, rank: usize) -> AlgebraHandle {
    build_quad_algebra(rs(kind, rank), caps(1 << 21)).unwrap()
}

fn report(criterion: usize, pass: bool, detail: &str) {
    println!(
        "criterion {:>2}: {} - {}",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
}

/// Coefficients of (1+t)^a (1+t^2)^b.
fn expand_poly(a: usize, b: usize) -> Vec<usize> {
    let mut coeffs = vec![1usize];
    for _ in 0..a {
        let mut next = vec![0; coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
        }
        coeffs = next;
    }
    for _ in 0..b {
        let mut next = vec![0; coeffs.len() + 2];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 2] += c;
        }
        coeffs = next;
    }
    coeffs
}

#[test]
fn criterion_01_hilbert_quad_b2() {
    let h = quad(RootSystemType::B, 2);
    let dims = h.hilbert_dims(8).unwrap();
    let expected = vec![1, 4, 8, 12, 16, 20, 24, 28, 32];
    let pass = dims == expected;
    report(
        1,
        pass,
        &format!("quad(B2) dims through degree 8: {:?}", dims),
    );
    assert_eq!(dims, expected);
}

#[test]
fn criterion_02_hilbert_quar_b2() {
    let h = build_quar_algebra(rs(RootSystemType::B, 2), caps(1 << 21)).unwrap();
    let dims = h.hilbert_dims(10).unwrap();
    let mut expected = expand_poly(4, 2);
    assert_eq!(expected, vec![1, 4, 8, 12, 14, 12, 8, 4, 1]);
    assert_eq!(expected.iter().sum::<usize>(), 64);
    expected.resize(11, 0);
    let pass = dims == expected;
    report(
        2,
        pass,
        &format!(
            "quar(B2) dims through degree 10: {:?} (total 64, zero from degree 9)",
            dims
        ),
    );
    assert_eq!(dims, expected);
}

#[test]
fn criterion_03_anticommutative_quotient_b2() {
    let h = quad(RootSystemType::B, 2);
    let q = h.anticommutative_quotient().unwrap();
    let dims = q.hilbert_dims(6).unwrap();
    let expected = vec![1, 4, 5, 2, 0, 0, 0];
    let pass = dims == expected;
    report(
        3,
        pass,
        &format!("anticommutative quotient dims: {:?}", dims),
    );
    assert_eq!(dims, expected);
}

/// The explicit quadratic relation list for B_n: squares, disjoint-support
/// anticommutators, short/short and mixed commutation, cyclic triples,
/// barred cyclic triples, and the four-term mixed relation.
fn handwritten_relations_b(r: &RootSystem) -> Vec<NCPoly> {
    let n = r.rank();
    let g = |i: usize| NCPoly::generator(i as GenIdx);
    let pair = |i: usize, j: usize| g(r.pair_index(i, j).unwrap());
    let barred = |i: usize, j: usize| g(r.barred_index(i, j).unwrap());
    let short = |i: usize| g(r.short_index(i).unwrap());
    let anti = |x: &NCPoly, y: &NCPoly| &(x * y) + &(y * x);
    let mut rels = Vec::new();
    for a in 0..r.reflection_count() {
        rels.push(&g(a) * &g(a));
    }
    // disjoint supports
    for i in 1..=n {
        for j in (i + 1)..=n {
            for k in 1..=n {
                for l in (k + 1)..=n {
                    if i != k && i != l && j != k && j != l {
                        rels.push(anti(&pair(i, j), &pair(k, l)));
                        rels.push(anti(&pair(i, j), &barred(k, l)));
                        rels.push(anti(&barred(i, j), &barred(k, l)));
                    }
                }
            }
        }
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            rels.push(anti(&short(i), &short(j)));
            rels.push(anti(&pair(i, j), &barred(i, j)));
            for k in 1..=n {
                if k != i && k != j {
                    rels.push(anti(&pair(i, j), &short(k)));
                    rels.push(anti(&barred(i, j), &short(k)));
                }
            }
        }
    }
    // cyclic and barred cyclic triples, over ordered distinct (i, j, k)
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                let c = &(&(&pair(i, j) * &pair(j, k)) + &(&pair(j, k) * &pair(i, k)))
                    + &(&pair(i, k) * &pair(i, j));
                rels.push(c);
                let b = &(&(&barred(i, k) * &pair(i, j)) + &(&pair(i, j) * &barred(j, k)))
                    + &(&barred(j, k) * &barred(i, k));
                rels.push(b);
            }
        }
    }
    // mixed four-term relation, ordered pairs
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let m = &(&(&(&pair(i, j) * &short(i)) + &(&short(j) * &pair(i, j)))
                + &(&short(i) * &barred(i, j)))
                + &(&barred(i, j) * &short(j));
            rels.push(m);
        }
    }
    rels
}

#[test]
fn criterion_04_b_relations_match_the_explicit_list() {
    let mut pass = true;
    let mut detail = String::new();
    for n in [2usize, 3] {
        let r = rs(RootSystemType::B, n);
        let g = r.reflection_count();
        let computed = quad_relations(&r);
        let handwritten = handwritten_relations_b(&r);
        let mut elim_c = Eliminator::new(g * g);
        for p in &computed {
            elim_c.insert(p.to_coords(2, g));
        }
        let mut elim_h = Eliminator::new(g * g);
        for p in &handwritten {
            elim_h.insert(p.to_coords(2, g));
        }
        let ranks_equal = elim_c.rank() == elim_h.rank();
        let h_in_c = handwritten
            .iter()
            .all(|p| elim_c.reduce(p.to_coords(2, g)).is_empty());
        let c_in_h = computed
            .iter()
            .all(|p| elim_h.reduce(p.to_coords(2, g)).is_empty());
        pass &= ranks_equal && h_in_c && c_in_h;
        detail.push_str(&format!(
            "B{}: span dim {} (match={}) ",
            n,
            elim_c.rank(),
            ranks_equal && h_in_c && c_in_h
        ));
    }
    report(4, pass, &detail);
    assert!(pass);
}

#[test]
fn criterion_05_quartic_relations() {
    let r = rs(RootSystemType::B, 2);
    let h = quad(RootSystemType::B, 2);
    let quartics = quartic_relations_b(&r).unwrap();
    let mut pass = quartics.len() == 2;
    for q in &quartics {
        pass &= !h.is_zero_in_quotient(q).unwrap();
        let v = TensorVector::from_poly(q).unwrap();
        pass &= antisymmetrize(&r, &v).is_zero();
    }
    report(
        5,
        pass,
        "quartics: nonzero in quad(B2), annihilated by the degree-4 antisymmetrizer",
    );
    assert!(pass);
}

#[test]
fn criterion_06_h1_dimensions_and_bases() {
    let cases = [
        (RootSystemType::A, 2, 1usize),
        (RootSystemType::A, 3, 1),
        (RootSystemType::D, 3, 1),
        (RootSystemType::B, 2, 2),
        (RootSystemType::B, 3, 2),
        (RootSystemType::G2, 2, 2),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (kind, r, expected) in cases {
        let rsys = rs(kind, r);
        let (dim, basis) = h1(Arc::clone(&rsys), caps(1 << 20)).unwrap();
        let mut ok = dim == expected;
        // expected basis: class sums
        let g = rsys.reflection_count();
        let mut elim = Eliminator::new(g);
        for b in &basis {
            elim.insert(b.to_coords(1, g));
        }
        let expected_basis: Vec<NCPoly> = if rsys.kind().is_simply_laced() {
            vec![canonical_theta(&rsys, ThetaClass::All).unwrap()]
        } else {
            vec![
                canonical_theta(&rsys, ThetaClass::Long).unwrap(),
                canonical_theta(&rsys, ThetaClass::Short).unwrap(),
            ]
        };
        for p in &expected_basis {
            ok &= elim.reduce(p.to_coords(1, g)).is_empty();
        }
        if kind == RootSystemType::G2 {
            // Example basis e1+e3+e5 and e2+e4+e6 recovered up to scalars.
            for labels in [[1usize, 3, 5], [2, 4, 6]] {
                let p = NCPoly::from_terms(
                    labels
                        .iter()
                        .map(|&i| (Monomial::generator((i - 1) as GenIdx), rat(1))),
                );
                ok &= elim.reduce(p.to_coords(1, g)).is_empty();
            }
        }
        pass &= ok;
        detail.push_str(&format!("{}:{} ", rsys.label(), dim));
    }
    report(6, pass, &format!("H^1 dims {}", detail));
    assert!(pass);
}

#[test]
fn criterion_07_g2_example() {
    let r = rs(RootSystemType::G2, 2);
    let h = quad(RootSystemType::G2, 2);
    let mut pass = true;
    for rel in g2_relation_list(&r).unwrap() {
        pass &= in_quadratic_kernel(&r, &rel).unwrap();
    }
    for which in [1, 2] {
        let eta = g2_eta(&r, which).unwrap();
        pass &= curvature(&h, &eta).unwrap().is_zero();
    }
    let e1 = g2_eta(&r, 1).unwrap();
    let e2 = g2_eta(&r, 2).unwrap();
    pass &= h
        .is_zero_in_quotient(&(&(&e1 * &e2) + &(&e2 * &e1)))
        .unwrap();
    report(
        7,
        pass,
        "G2: relations in ker(id - Psi); F(eta1) = F(eta2) = 0; eta1 eta2 + eta2 eta1 = 0",
    );
    assert!(pass);
}

#[test]
fn criterion_08_identity_suites() {
    let mut failures: Vec<String> = Vec::new();
    let mut run = |h: &AlgebraHandle, ident: Identity| {
        let r = verify_identity(h, &ident).unwrap();
        if !r.passed() {
            failures.push(format!(
                "{} [{}]: {}",
                r.name,
                r.params,
                r.witness.clone().unwrap_or_default()
            ));
        }
    };

    // anticommutativity and flatness of -theta_i
    for (kind, rank) in [
        (RootSystemType::A, 2),
        (RootSystemType::A, 3),
        (RootSystemType::B, 2),
        (RootSystemType::B, 3),
        (RootSystemType::D, 3),
    ] {
        let h = quad(kind, rank);
        let n = theta_family(h.root_system().unwrap()).unwrap().len();
        for i in 1..=n {
            for j in (i + 1)..=n {
                run(&h, Identity::Anticomm { i, j });
            }
            run(&h, Identity::Flat { i });
        }
    }

    let a2 = quad(RootSystemType::A, 2);
    let a3 = quad(RootSystemType::A, 3);
    let a4 = quad(RootSystemType::A, 4);

    // Lemma 5.1 instances: k = 3 and k = 4, verbatim letter choices
    run(
        &a2,
        Identity::Cyclic {
            letters: vec![1, 2, 3],
        },
    );
    run(
        &a3,
        Identity::Cyclic {
            letters: vec![1, 2, 3],
        },
    );
    run(
        &a3,
        Identity::Cyclic {
            letters: vec![2, 3, 4],
        },
    );
    run(
        &a3,
        Identity::Cyclic {
            letters: vec![1, 2, 3, 4],
        },
    );
    run(
        &a3,
        Identity::Cyclic {
            letters: vec![3, 1, 4, 2],
        },
    );

    // Lemma 5.2: k = 3, 4
    run(
        &a3,
        Identity::Chain {
            letters: vec![1, 2, 3, 4],
        },
    );
    run(
        &a4,
        Identity::Chain {
            letters: vec![1, 2, 3, 4, 5],
        },
    );

    // Lemma 5.3 and 5.4 for n = 3, 4
    run(&a2, Identity::TopProduct);
    run(&a3, Identity::TopProduct);
    for k in 1..=3 {
        run(&a2, Identity::HatExpansion { k });
    }
    for k in 1..=4 {
        run(&a3, Identity::HatExpansion { k });
    }

    // Lemma 5.5 for m = 3, 4 (worked-example letter sets)
    run(
        &a2,
        Identity::Telescoping {
            letters: vec![1, 2, 3],
        },
    );
    run(
        &a3,
        Identity::Telescoping {
            letters: vec![1, 2, 3, 4],
        },
    );
    run(
        &a3,
        Identity::Telescoping {
            letters: vec![2, 1, 4, 3],
        },
    );

    // Corollary 5.1 for (n, m) in {(3,1), (3,2), (4,1)}
    run(&a2, Identity::PowerSum { m: 1 });
    run(&a2, Identity::PowerSum { m: 2 });
    run(&a3, Identity::PowerSum { m: 1 });

    // Theorem 5.1 complete for n = 3 and n = 4 (k = 4 reaches degree 8)
    for k in 1..=3 {
        run(&a2, Identity::Elementary { k });
    }
    run(&a2, Identity::HatSum);
    for k in 1..=4 {
        run(&a3, Identity::Elementary { k });
    }
    run(&a3, Identity::HatSum);

    // the square remark for n = 3, 4
    run(&a2, Identity::SquareRemark);
    run(&a3, Identity::SquareRemark);

    // Prop 5.1 embedding and Corollary 5.2 for D3; D4 within caps
    let d3 = quad(RootSystemType::D, 3);
    let d4 = quad(RootSystemType::D, 4);
    for h in [&d3, &d4] {
        run(h, Identity::DEmbeddingRelations);
        run(h, Identity::DEmbeddingIota);
        run(h, Identity::DEmbeddingPi);
    }
    for k in 1..=3 {
        run(&d3, Identity::Elementary { k });
    }
    run(&d3, Identity::TopProduct);
    run(&d3, Identity::HatSum);
    for k in 1..=2 {
        run(&d4, Identity::Elementary { k });
    }
    run(&d4, Identity::TopProduct);
    run(&d4, Identity::HatSum);

    // Conjecture 5.1(2) relation checks in quar(B_n), n <= 3
    let qb2 = build_quar_algebra(rs(RootSystemType::B, 2), caps(1 << 21)).unwrap();
    let qb3 = build_quar_algebra(rs(RootSystemType::B, 3), caps(1 << 21)).unwrap();
    run(&qb2, Identity::Anticomm { i: 1, j: 2 });
    for k in 1..=2 {
        run(&qb2, Identity::Elementary { k });
    }
    for i in 1..=3 {
        for j in (i + 1)..=3 {
            run(&qb3, Identity::Anticomm { i, j });
        }
    }
    for k in 1..=3 {
        run(&qb3, Identity::Elementary { k });
    }

    let pass = failures.is_empty();
    report(
        8,
        pass,
        &if pass {
            "all identity suites verified with exact zero normal forms".to_string()
        } else {
            format!("failing instances: {:?}", failures)
        },
    );
    if !pass
        && failures
            .iter()
            .all(|f| f.starts_with("elementary [B3 quar; k=3]"))
    {
        // Diagnose the single failing instance: the element is annihilated
        // by the degree-6 antisymmetrizer, so it vanishes in the Woronowicz
        // algebra even though it is not in the quartic ideal; the two
        // algebras first differ at degree 6.
        let b3 = rs(RootSystemType::B, 3);
        let eps3 = connections::elementary_element(&b3, 3).unwrap();
        let killed = antisymmetrize(&b3, &TensorVector::from_poly(&eps3).unwrap()).is_zero();
        println!(
            "criterion  8: note - eps_3 of the squared connections for B3 is {} by the degree-6 antisymmetrizer",
            if killed { "annihilated" } else { "NOT annihilated" }
        );
        let wor =
            calculus::build_woronowicz_handle(rs(RootSystemType::B, 3), caps(1 << 24)).unwrap();
        let quar = build_quar_algebra(rs(RootSystemType::B, 3), caps(1 << 24)).unwrap();
        println!(
            "criterion  8: note - woronowicz(B3) dims 0..5 = {:?}, quar(B3) dims 0..5 = {:?}",
            wor.hilbert_dims(5).unwrap(),
            quar.hilbert_dims(5).unwrap()
        );
    }
    assert!(pass, "failing instances: {:#?}", failures);
}

#[test]
fn criterion_09_property_suites() {
    let mut pass = true;

    // braid relation, exhaustive at degree 3 for A2 and B2
    for (kind, r) in [(RootSystemType::A, 2), (RootSystemType::B, 2)] {
        let rsys = rs(kind, r);
        let g = rsys.reflection_count();
        for idx in 0..g * g * g {
            let v = TensorVector::basis(Monomial::decode(idx, 3, g).0);
            pass &= psi_word(&rsys, &v, &[1, 2, 1]).unwrap()
                == psi_word(&rsys, &v, &[2, 1, 2]).unwrap();
        }
    }

    // reduced-word independence for the longest elements of S3 and S4
    let a3 = rs(RootSystemType::A, 3);
    let g = a3.reflection_count();
    for idx in 0..g * g * g {
        let v = TensorVector::basis(Monomial::decode(idx, 3, g).0);
        pass &= psi_word(&a3, &v, &[1, 2, 1]).unwrap() == psi_word(&a3, &v, &[2, 1, 2]).unwrap();
    }
    for idx in 0..g * g * g * g {
        let v = TensorVector::basis(Monomial::decode(idx, 4, g).0);
        pass &= psi_word(&a3, &v, &[1, 2, 1, 3, 2, 1]).unwrap()
            == psi_word(&a3, &v, &[3, 2, 3, 1, 2, 3]).unwrap();
    }

    // twisted Leibniz rule on >= 100 random homogeneous pairs per system
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (kind, r) in [
        (RootSystemType::A, 2),
        (RootSystemType::A, 3),
        (RootSystemType::B, 2),
        (RootSystemType::B, 3),
        (RootSystemType::D, 3),
    ] {
        let rsys = rs(kind, r);
        let g = rsys.reflection_count();
        let mut random_poly = |rng: &mut ChaCha8Rng, deg: usize| -> NCPoly {
            let mut p = NCPoly::zero();
            for _ in 0..rng.gen_range(1..4) {
                let word: Vec<GenIdx> = (0..deg).map(|_| rng.gen_range(0..g) as GenIdx).collect();
                p.add_term(Monomial(word), rat(rng.gen_range(-3..=3)));
            }
            p
        };
        for _ in 0..100 {
            let dx = rng.gen_range(1..=2);
            let dy = rng.gen_range(1..=2);
            let x = random_poly(&mut rng, dx);
            let y = random_poly(&mut rng, dy);
            let gamma = rng.gen_range(0..g);
            let s = rsys.reflection_element(gamma);
            let lhs = twisted_derivation(&rsys, gamma, &(&x * &y));
            let sign = rat(if dx % 2 == 0 { 1 } else { -1 });
            let rhs = &(&twisted_derivation(&rsys, gamma, &x) * &y)
                + &(&weyl_action(&rsys, &s, &x) * &twisted_derivation(&rsys, gamma, &y))
                    .scale(&sign);
            pass &= lhs == rhs;
        }
    }

    // ideal stability of the twisted derivations on all quadratic relations
    for (kind, r) in [
        (RootSystemType::A, 2),
        (RootSystemType::A, 3),
        (RootSystemType::B, 2),
        (RootSystemType::B, 3),
        (RootSystemType::D, 3),
    ] {
        let h = quad(kind, r);
        let rsys = h.root_system().unwrap().clone();
        for gamma in 0..rsys.reflection_count() {
            for rel in h.relations() {
                pass &= h
                    .is_zero_in_quotient(&twisted_derivation(&rsys, gamma, rel))
                    .unwrap();
            }
        }
    }

    // theta_general agrees with the explicit family
    for (kind, r) in [
        (RootSystemType::A, 2),
        (RootSystemType::A, 3),
        (RootSystemType::D, 3),
        (RootSystemType::B, 2),
        (RootSystemType::B, 3),
    ] {
        let rsys = rs(kind, r);
        for alpha in 1..=rsys.rank() {
            pass &= theta_general(&rsys, alpha).unwrap() == theta_i(&rsys, alpha).unwrap();
        }
    }

    // rank-nullity is asserted inside kernel_basis on every call; exercise it
    let m = SparseMatrix::from_entries(2, 3, vec![(0, 0, rat(1)), (1, 2, rat(2))]).unwrap();
    let k = kernel_basis(&m);
    pass &= rank(&m) + k.len() == 3;

    report(
        9,
        pass,
        "braid/word-independence/Leibniz/stability/theta/rank-nullity",
    );
    assert!(pass);
}

#[test]
fn criterion_10_conjecture_tables() {
    let mut pass = true;
    let mut detail = String::new();

    let t21 = check_conjecture(
        rs(RootSystemType::A, 2),
        ConjectureId::QuadComplete,
        4,
        caps(1 << 20),
    )
    .unwrap();
    pass &= t21.notes.is_empty();
    detail.push_str(&format!("2.1 A2 agree={} ", t21.all_agree()));

    let t22 = check_conjecture(
        rs(RootSystemType::B, 2),
        ConjectureId::QuarComplete,
        4,
        caps(1 << 20),
    )
    .unwrap();
    pass &= t22.notes.is_empty();
    detail.push_str(&format!("2.2 B2 agree={} ", t22.all_agree()));

    for (kind, r) in [(RootSystemType::A, 3), (RootSystemType::D, 3)] {
        let t51 =
            check_conjecture(rs(kind, r), ConjectureId::ThetaComplete, 6, caps(1 << 20)).unwrap();
        pass &= t51.notes.is_empty();
        // internal consistency: the subalgebra is a quotient of the model,
        // so degreewise the subalgebra dims cannot exceed the model's.
        for row in &t51.rows {
            pass &= row.lhs <= row.rhs;
        }
        detail.push_str(&format!("5.1 {}{} agree={} ", kind, r, t51.all_agree()));
    }

    report(10, pass, &detail);
    assert!(pass);
}
