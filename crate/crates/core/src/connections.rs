//! Flat Dunkl-type connections, the twisted group action and derivations,
//! and the verification machinery for the identities among the connections.

use std::sync::Arc;
use std::time::Instant;

use num::One;

use crate::calculus::{self, curvature, ConnectionForm};
use crate::linalg::{rat, Rational};
use crate::ncalg::{
    AlgebraError, AlgebraHandle, AlgebraKind, GenIdx, Generators, Monomial, NCPoly, ResourceCaps,
};
use crate::report::{ConjectureReport, ConjectureRow, VerificationReport};
use crate::weyl::{orthogonalize_weights, pairing, GroupElement, RootSystem, RootSystemType};

/// The explicit connection theta_i, 1-based index i:
/// type A: sum of (ij) over j != i;
/// type D: sum of (ij) + (ij)~;
/// type B: sum of (ij) + (ij)~ plus 2 (i).
pub fn theta_i(rs: &RootSystem, i: usize) -> Result<ConnectionForm, AlgebraError> {
    let n = match rs.kind() {
        RootSystemType::A => rs.rank() + 1,
        RootSystemType::B | RootSystemType::D => rs.rank(),
        RootSystemType::G2 => {
            return Err(AlgebraError::IdentityNotApplicable(
                "theta_i is not defined for G2".into(),
            ))
        }
    };
    if i < 1 || i > n {
        return Err(AlgebraError::PositionOutOfRange {
            position: i,
            degree: n,
        });
    }
    let mut p = NCPoly::zero();
    for j in 1..=n {
        if j == i {
            continue;
        }
        p.add_term(
            Monomial::generator(rs.pair_index(i, j).unwrap() as GenIdx),
            Rational::one(),
        );
        if rs.kind() != RootSystemType::A {
            p.add_term(
                Monomial::generator(rs.barred_index(i, j).unwrap() as GenIdx),
                Rational::one(),
            );
        }
    }
    if rs.kind() == RootSystemType::B {
        p.add_term(
            Monomial::generator(rs.short_index(i).unwrap() as GenIdx),
            rat(2),
        );
    }
    Ok(p)
}

/// All theta_i of the family, in index order.
pub fn theta_family(rs: &RootSystem) -> Result<Vec<ConnectionForm>, AlgebraError> {
    let n = match rs.kind() {
        RootSystemType::A => rs.rank() + 1,
        _ => rs.rank(),
    };
    (1..=n).map(|i| theta_i(rs, i)).collect()
}

/// The weight-orthogonalization construction: sum over all roots gamma with
/// <nu_alpha, gamma> > 0 of <nu_alpha, gamma^vee> e_{s_gamma}. Each
/// reflection occurs once since s_gamma = s_{-gamma}.
pub fn theta_general(rs: &RootSystem, alpha: usize) -> Result<ConnectionForm, AlgebraError> {
    let weights = orthogonalize_weights(rs)?;
    if alpha < 1 || alpha > weights.len() {
        return Err(AlgebraError::PositionOutOfRange {
            position: alpha,
            degree: weights.len(),
        });
    }
    let nu = &weights[alpha - 1].nu;
    let mut p = NCPoly::zero();
    for gamma in rs.roots() {
        let pr = pairing(nu, &gamma);
        if pr > Rational::from_integer(0.into()) {
            let coeff = pairing(nu, &rs.coroot(&gamma));
            let idx = rs.reflection_of_root(&gamma)?;
            p.add_term(Monomial::generator(idx as GenIdx), coeff);
        }
    }
    Ok(p)
}

/// Algebra map induced by a group element: on generators
/// e_{s_gamma} maps to det(w) e_{s_{w(gamma)}}, extended multiplicatively
/// over words and linearly over terms.
pub fn weyl_action(rs: &RootSystem, w: &GroupElement, x: &NCPoly) -> NCPoly {
    let det = w.determinant();
    let image: Vec<GenIdx> = (0..rs.reflection_count())
        .map(|b| rs.conjugate_reflection_by(w, b) as GenIdx)
        .collect();
    let mut out = NCPoly::zero();
    for (m, c) in x.terms() {
        let word: Vec<GenIdx> = m.0.iter().map(|&a| image[a as usize]).collect();
        let sign = if det == -1 && m.degree() % 2 == 1 {
            -c.clone()
        } else {
            c.clone()
        };
        out.add_term(Monomial(word), sign);
    }
    out
}

/// Twisted derivation D_gamma(x) = e_gamma x - (-1)^{deg x} s_gamma(x)
/// e_gamma, extended linearly over homogeneous components. Not reduced.
pub fn twisted_derivation(rs: &RootSystem, gamma: usize, x: &NCPoly) -> NCPoly {
    let e = NCPoly::generator(gamma as GenIdx);
    let s = rs.reflection_element(gamma);
    let mut out = NCPoly::zero();
    for k in x.degrees() {
        let comp = x.homogeneous_component(k);
        let sx = weyl_action(rs, &s, &comp);
        let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
        let term = &(&e * &comp) - &(&sx * &e).scale(&sign);
        out = &out + &term;
    }
    out
}

fn pair_gen(rs: &RootSystem, i: usize, j: usize) -> NCPoly {
    NCPoly::generator(rs.pair_index(i, j).unwrap() as GenIdx)
}

/// Lemma-style cyclic element: sum over i = 2..=k, sign (-1)^{k(i-1)}, of
/// (a1 ai)(a1 a_{i+1})...(a1 ak)(a1 a2)...(a1 ai).
pub fn cyclic_element(rs: &RootSystem, letters: &[usize]) -> NCPoly {
    let k = letters.len();
    let a1 = letters[0];
    let mut out = NCPoly::zero();
    for i in 2..=k {
        let mut prod = NCPoly::one();
        for t in i..=k {
            prod = &prod * &pair_gen(rs, a1, letters[t - 1]);
        }
        for t in 2..=i {
            prod = &prod * &pair_gen(rs, a1, letters[t - 1]);
        }
        let sign = if (k * (i - 1)) % 2 == 0 { 1 } else { -1 };
        out = &out + &prod.scale(&rat(sign));
    }
    out
}

/// Four-term chain element on k+1 letters.
pub fn chain_element(rs: &RootSystem, letters: &[usize]) -> NCPoly {
    let k = letters.len() - 1;
    let a = |t: usize| letters[t - 1];
    let prod_range = |from: usize, to: usize| {
        let mut p = NCPoly::one();
        for j in from..=to {
            p = &p * &pair_gen(rs, a(1), a(j));
        }
        p
    };
    let sign = rat(if (k + 1) % 2 == 0 { 1 } else { -1 });
    let t1 = &(&prod_range(2, k) * &pair_gen(rs, a(1), a(2))) * &pair_gen(rs, a(1), a(k + 1));
    let t2 = (&(&pair_gen(rs, a(1), a(k + 1)) * &prod_range(2, k)) * &pair_gen(rs, a(1), a(2)))
        .scale(&sign);
    let t3 = &prod_range(2, k + 1) * &pair_gen(rs, a(2), a(k + 1));
    let t4 = (&(&(&pair_gen(rs, a(2), a(k + 1)) * &pair_gen(rs, a(1), a(k + 1)))
        * &prod_range(3, k))
        * &pair_gen(rs, a(1), a(2)))
        .scale(&sign);
    &(&(&t1 + &t2) + &t3) + &t4
}

/// Telescoping element on m letters: sum over k, sign (-1)^{(m-1)(k-1)}, of
/// prod_{j>k} (ak aj) prod_{j<k} (aj ak).
pub fn telescoping_element(rs: &RootSystem, letters: &[usize]) -> NCPoly {
    let m = letters.len();
    let a = |t: usize| letters[t - 1];
    let mut out = NCPoly::zero();
    for k in 1..=m {
        let mut prod = NCPoly::one();
        for j in (k + 1)..=m {
            prod = &prod * &pair_gen(rs, a(k), a(j));
        }
        for j in 1..k {
            prod = &prod * &pair_gen(rs, a(j), a(k));
        }
        let sign = if ((m - 1) * (k - 1)) % 2 == 0 { 1 } else { -1 };
        out = &out + &prod.scale(&rat(sign));
    }
    out
}

/// Sum of theta_i^{2m} over the family.
pub fn power_sum_element(rs: &RootSystem, m: usize) -> Result<NCPoly, AlgebraError> {
    let thetas = theta_family(rs)?;
    let mut out = NCPoly::zero();
    for t in &thetas {
        let mut p = NCPoly::one();
        for _ in 0..2 * m {
            p = &p * t;
        }
        out = &out + &p;
    }
    Ok(out)
}

/// theta_1 ... theta_n.
pub fn top_product_element(rs: &RootSystem) -> Result<NCPoly, AlgebraError> {
    let thetas = theta_family(rs)?;
    Ok(thetas.iter().fold(NCPoly::one(), |acc, t| &acc * t))
}

fn inversions(perm: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Hat-expansion element for index k: prod_{j != k} theta_j minus the signed
/// sum over permutations sigma of the remaining letters of
/// prod_{j != k} (sigma(j), k).
pub fn hat_expansion_element(rs: &RootSystem, k: usize) -> Result<NCPoly, AlgebraError> {
    if rs.kind() != RootSystemType::A {
        return Err(AlgebraError::IdentityNotApplicable(
            "hat expansion is stated for type A".into(),
        ));
    }
    let n = rs.rank() + 1;
    let thetas = theta_family(rs)?;
    let mut lhs = NCPoly::one();
    for (j, t) in thetas.iter().enumerate() {
        if j + 1 != k {
            lhs = &lhs * t;
        }
    }
    let others: Vec<usize> = (1..=n).filter(|&j| j != k).collect();
    let mut rhs = NCPoly::zero();
    for sigma in permutations(&others) {
        // sigma as a map others[t] -> sigma[t]; product in increasing j.
        let mut prod = NCPoly::one();
        for &s in &sigma {
            prod = &prod * &pair_gen(rs, s, k);
        }
        // length of sigma relative to the natural order of `others`
        let positions: Vec<usize> = sigma
            .iter()
            .map(|x| others.iter().position(|y| y == x).unwrap())
            .collect();
        let sign = if inversions(&positions) % 2 == 0 {
            1
        } else {
            -1
        };
        rhs = &rhs + &prod.scale(&rat(sign));
    }
    Ok(&lhs - &rhs)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Elementary symmetric element eps_k(theta_1^2, ..., theta_n^2), expanded
/// with the squares in increasing index order.
pub fn elementary_element(rs: &RootSystem, k: usize) -> Result<NCPoly, AlgebraError> {
    let thetas = theta_family(rs)?;
    let squares: Vec<NCPoly> = thetas.iter().map(|t| t * t).collect();
    elementary_of(&squares, k)
}

fn elementary_of(squares: &[NCPoly], k: usize) -> Result<NCPoly, AlgebraError> {
    let n = squares.len();
    if k < 1 || k > n {
        return Err(AlgebraError::PositionOutOfRange {
            position: k,
            degree: n,
        });
    }
    let mut out = NCPoly::zero();
    for subset in k_subsets(n, k) {
        let mut prod = NCPoly::one();
        for i in subset {
            prod = &prod * &squares[i];
        }
        out = &out + &prod;
    }
    Ok(out)
}

/// Alternating sum of the hat products theta_1 ... theta_i-hat ... theta_n.
pub fn hat_sum_element(rs: &RootSystem) -> Result<NCPoly, AlgebraError> {
    let thetas = theta_family(rs)?;
    let n = thetas.len();
    let mut out = NCPoly::zero();
    for i in 1..=n {
        let mut prod = NCPoly::one();
        for (j, t) in thetas.iter().enumerate() {
            if j + 1 != i {
                prod = &prod * t;
            }
        }
        let sign = if i % 2 == 1 { 1 } else { -1 };
        out = &out + &prod.scale(&rat(sign));
    }
    Ok(out)
}

/// One checkable identity instance. The algebra it is checked in comes from
/// the handle passed to `verify_identity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identity {
    /// Cyclic relation on the given letters (Lemma-style, k = letters.len()).
    Cyclic { letters: Vec<usize> },
    /// Chain relation on k+1 letters.
    Chain { letters: Vec<usize> },
    /// Telescoping relation on m letters.
    Telescoping { letters: Vec<usize> },
    /// Sum of theta_i^{2m} vanishes.
    PowerSum { m: usize },
    /// Product of the whole theta family vanishes.
    TopProduct,
    /// Hat product equals its signed permutation expansion.
    HatExpansion { k: usize },
    /// eps_k of the squared thetas vanishes.
    Elementary { k: usize },
    /// Alternating hat sum vanishes.
    HatSum,
    /// eps_{n-1} equals the square of the hat sum.
    SquareRemark,
    /// theta_i theta_j + theta_j theta_i vanishes.
    Anticomm { i: usize, j: usize },
    /// F(-theta_i) = 0.
    Flat { i: usize },
    /// The E_{(ij)} = e_{(ij)} + e_{(ij)~} satisfy the type-A quadratic
    /// relations (squares, disjoint anticommutators, cyclic triples).
    DEmbeddingRelations,
    /// Every quadratic relation of the type-A algebra maps to zero under
    /// e_{(ij)} -> E_{(ij)}.
    DEmbeddingIota,
    /// The projection killing the barred generators maps every quadratic
    /// relation of D to a relation of A, and the composite fixes the
    /// unbarred generators.
    DEmbeddingPi,
    /// The two quartic elements of a pair are nonzero in the quadratic
    /// algebra, annihilated by the degree-4 antisymmetrizer, and zero in the
    /// quartic algebra.
    QuarticSeparates { i: usize, j: usize },
    /// The explicit degree-2 relations of the G2 calculus lie in
    /// ker(id - Psi).
    G2KernelRelations,
    /// F(eta) = 0 for one of the two explicit flat G2 connections.
    G2EtaFlat { which: usize },
    /// eta_1 eta_2 + eta_2 eta_1 = 0.
    G2EtaAnticomm,
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::Cyclic { .. } => "cyclic",
            Identity::Chain { .. } => "chain",
            Identity::Telescoping { .. } => "telescoping",
            Identity::PowerSum { .. } => "power_sum",
            Identity::TopProduct => "top_product",
            Identity::HatExpansion { .. } => "hat_expansion",
            Identity::Elementary { .. } => "elementary",
            Identity::HatSum => "hat_sum",
            Identity::SquareRemark => "square_remark",
            Identity::Anticomm { .. } => "anticomm",
            Identity::Flat { .. } => "flat",
            Identity::DEmbeddingRelations => "d_embedding_relations",
            Identity::DEmbeddingIota => "d_embedding_iota",
            Identity::DEmbeddingPi => "d_embedding_pi",
            Identity::QuarticSeparates { .. } => "quartic_separates",
            Identity::G2KernelRelations => "g2_relations",
            Identity::G2EtaFlat { .. } => "g2_eta_flat",
            Identity::G2EtaAnticomm => "g2_eta_anticomm",
        }
    }

    fn params_string(&self, h: &AlgebraHandle) -> String {
        let sys = h.root_system().map(|rs| rs.label()).unwrap_or_default();
        let kind = h.kind();
        let extra = match self {
            Identity::Cyclic { letters }
            | Identity::Chain { letters }
            | Identity::Telescoping { letters } => format!(
                "; letters={}",
                letters
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            Identity::PowerSum { m } => format!("; m={}", m),
            Identity::HatExpansion { k } | Identity::Elementary { k } => format!("; k={}", k),
            Identity::Anticomm { i, j } | Identity::QuarticSeparates { i, j } => {
                format!("; i={}, j={}", i, j)
            }
            Identity::Flat { i } => format!("; i={}", i),
            Identity::G2EtaFlat { which } => format!("; eta={}", which),
            _ => String::new(),
        };
        format!("{} {}{}", sys, kind, extra)
    }
}

/// The two explicit flat G2 connections (1-based labels of the positive
/// roots in angular order): eta_1 = -(2e1+e2+e3+e5+e6),
/// eta_2 = -(e2+e3+2e4+e5+e6).
pub fn g2_eta(rs: &RootSystem, which: usize) -> Result<ConnectionForm, AlgebraError> {
    if rs.kind() != RootSystemType::G2 {
        return Err(AlgebraError::IdentityNotApplicable("g2 eta".into()));
    }
    let e = |i: usize| NCPoly::generator((i - 1) as GenIdx);
    let eta = match which {
        1 => &(&(&(&e(1).scale(&rat(2)) + &e(2)) + &e(3)) + &e(5)) + &e(6),
        2 => &(&(&(&e(2) + &e(3)) + &e(4).scale(&rat(2))) + &e(5)) + &e(6),
        _ => {
            return Err(AlgebraError::PositionOutOfRange {
                position: which,
                degree: 2,
            })
        }
    };
    Ok(eta.scale(&rat(-1)))
}

/// The degree-2 relations of the G2 calculus: squares, the three orthogonal
/// anticommutators, two cyclic triples in each root length, and the two
/// six-term sums over adjacent labels.
pub fn g2_relation_list(rs: &RootSystem) -> Result<Vec<NCPoly>, AlgebraError> {
    if rs.kind() != RootSystemType::G2 {
        return Err(AlgebraError::IdentityNotApplicable("g2 relations".into()));
    }
    let m =
        |w: &[usize]| NCPoly::monomial(Monomial(w.iter().map(|&i| (i - 1) as GenIdx).collect()));
    let mut rels = Vec::new();
    for i in 1..=6 {
        rels.push(m(&[i, i]));
    }
    for (i, j) in [(1, 4), (2, 5), (3, 6)] {
        rels.push(&m(&[i, j]) + &m(&[j, i]));
    }
    rels.push(&(&m(&[1, 3]) + &m(&[3, 5])) + &m(&[5, 1]));
    rels.push(&(&m(&[3, 1]) + &m(&[5, 3])) + &m(&[1, 5]));
    rels.push(&(&m(&[2, 4]) + &m(&[4, 6])) + &m(&[6, 2]));
    rels.push(&(&m(&[4, 2]) + &m(&[6, 4])) + &m(&[2, 6]));
    let mut s1 = NCPoly::zero();
    let mut s2 = NCPoly::zero();
    for i in 1..=6 {
        let j = i % 6 + 1;
        s1 = &s1 + &m(&[i, j]);
        s2 = &s2 + &m(&[j, i]);
    }
    rels.push(s1);
    rels.push(s2);
    Ok(rels)
}

fn witness_string(h: &AlgebraHandle, nf: &NCPoly) -> Option<String> {
    if nf.is_zero() {
        None
    } else {
        let full = nf.display(h.generators().names());
        let mut s: String = full.chars().take(160).collect();
        if full.len() > s.len() {
            s.push_str(" ...");
        }
        Some(format!("nonzero normal form: {}", s))
    }
}

/// Check one identity in the given algebra. The report passes exactly when
/// the relevant normal form is zero.
pub fn verify_identity(
    h: &AlgebraHandle,
    ident: &Identity,
) -> Result<VerificationReport, AlgebraError> {
    let start = Instant::now();
    let rs = h
        .root_system()
        .ok_or(AlgebraError::NotReflectionGenerated)?;
    let witness: Option<String> = match ident {
        Identity::Cyclic { letters } => {
            let nf = h.normal_form(&cyclic_element(rs, letters))?;
            witness_string(h, &nf)
        }
        Identity::Chain { letters } => {
            let nf = h.normal_form(&chain_element(rs, letters))?;
            witness_string(h, &nf)
        }
        Identity::Telescoping { letters } => {
            let nf = h.normal_form(&telescoping_element(rs, letters))?;
            witness_string(h, &nf)
        }
        Identity::PowerSum { m } => {
            let nf = h.normal_form(&power_sum_element(rs, *m)?)?;
            witness_string(h, &nf)
        }
        Identity::TopProduct => {
            let nf = h.normal_form(&top_product_element(rs)?)?;
            witness_string(h, &nf)
        }
        Identity::HatExpansion { k } => {
            let nf = h.normal_form(&hat_expansion_element(rs, *k)?)?;
            witness_string(h, &nf)
        }
        Identity::Elementary { k } => {
            let nf = h.normal_form(&elementary_element(rs, *k)?)?;
            witness_string(h, &nf)
        }
        Identity::HatSum => {
            let nf = h.normal_form(&hat_sum_element(rs)?)?;
            witness_string(h, &nf)
        }
        Identity::SquareRemark => {
            let thetas = theta_family(rs)?;
            let eps = elementary_element(rs, thetas.len() - 1)?;
            let hat = hat_sum_element(rs)?;
            let nf = h.normal_form(&(&eps - &(&hat * &hat)))?;
            witness_string(h, &nf)
        }
        Identity::Anticomm { i, j } => {
            let ti = theta_i(rs, *i)?;
            let tj = theta_i(rs, *j)?;
            let nf = h.normal_form(&(&(&ti * &tj) + &(&tj * &ti)))?;
            witness_string(h, &nf)
        }
        Identity::Flat { i } => {
            let ti = theta_i(rs, *i)?;
            let f = curvature(h, &ti.scale(&rat(-1)))?;
            witness_string(h, &f)
        }
        Identity::DEmbeddingRelations => verify_d_embedding_relations(h, rs)?,
        Identity::DEmbeddingIota => verify_d_embedding_iota(h, rs)?,
        Identity::DEmbeddingPi => verify_d_embedding_pi(h, rs)?,
        Identity::QuarticSeparates { i, j } => verify_quartic_separates(h, rs, *i, *j)?,
        Identity::G2KernelRelations => {
            let mut w = None;
            for (k, rel) in g2_relation_list(rs)?.iter().enumerate() {
                if !calculus::in_quadratic_kernel(rs, rel)? {
                    w = Some(format!(
                        "relation {} not in ker(id - Psi): {}",
                        k,
                        rel.display(h.generators().names())
                    ));
                    break;
                }
            }
            w
        }
        Identity::G2EtaFlat { which } => {
            let f = curvature(h, &g2_eta(rs, *which)?)?;
            witness_string(h, &f)
        }
        Identity::G2EtaAnticomm => {
            let e1 = g2_eta(rs, 1)?;
            let e2 = g2_eta(rs, 2)?;
            let nf = h.normal_form(&(&(&e1 * &e2) + &(&e2 * &e1)))?;
            witness_string(h, &nf)
        }
    };
    Ok(VerificationReport::new(
        ident.name(),
        ident.params_string(h),
        witness,
        start.elapsed().as_millis() as u64,
    ))
}

/// E_{(ij)} = e_{(ij)} + e_{(ij)~} in a type-D algebra.
pub fn d_capital_e(rs: &RootSystem, i: usize, j: usize) -> NCPoly {
    let p = NCPoly::generator(rs.pair_index(i, j).unwrap() as GenIdx);
    let b = NCPoly::generator(rs.barred_index(i, j).unwrap() as GenIdx);
    &p + &b
}

fn verify_d_embedding_relations(
    h: &AlgebraHandle,
    rs: &RootSystem,
) -> Result<Option<String>, AlgebraError> {
    if rs.kind() != RootSystemType::D {
        return Err(AlgebraError::IdentityNotApplicable("d_embedding".into()));
    }
    let n = rs.rank();
    let e = |i: usize, j: usize| d_capital_e(rs, i, j);
    // squares
    for i in 1..=n {
        for j in (i + 1)..=n {
            let sq = &e(i, j) * &e(i, j);
            if !h.is_zero_in_quotient(&sq)? {
                return Ok(Some(format!("E({},{})^2 != 0", i, j)));
            }
        }
    }
    // disjoint anticommutators
    for i in 1..=n {
        for j in (i + 1)..=n {
            for k in 1..=n {
                for l in (k + 1)..=n {
                    if i != k && i != l && j != k && j != l {
                        let x = &(&e(i, j) * &e(k, l)) + &(&e(k, l) * &e(i, j));
                        if !h.is_zero_in_quotient(&x)? {
                            return Ok(Some(format!(
                                "E({},{})E({},{}) anticommutator != 0",
                                i, j, k, l
                            )));
                        }
                    }
                }
            }
        }
    }
    // cyclic triples
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                let x = &(&(&e(i, j) * &e(j, k)) + &(&e(j, k) * &e(k, i))) + &(&e(k, i) * &e(i, j));
                if !h.is_zero_in_quotient(&x)? {
                    return Ok(Some(format!("E cyclic triple ({},{},{}) != 0", i, j, k)));
                }
            }
        }
    }
    Ok(None)
}

fn verify_d_embedding_iota(
    h: &AlgebraHandle,
    rs: &RootSystem,
) -> Result<Option<String>, AlgebraError> {
    if rs.kind() != RootSystemType::D {
        return Err(AlgebraError::IdentityNotApplicable("d_embedding".into()));
    }
    let a = RootSystem::build(RootSystemType::A, rs.rank() - 1)?;
    // iota: e_{(ij)} in A maps to E_{(ij)} in D; relations of A must die.
    for rel in calculus::quad_relations(&a) {
        let mut image = NCPoly::zero();
        for (m, c) in rel.terms() {
            let mut prod = NCPoly::one();
            for &g in &m.0 {
                let name = &a.reflections()[g as usize].name;
                let (i, j) = parse_pair_name(name).expect("type A generator name");
                prod = &prod * &d_capital_e(rs, i, j);
            }
            image.add_assign_scaled(&prod, c);
        }
        if !h.is_zero_in_quotient(&image)? {
            return Ok(Some(format!(
                "iota image of a quadratic relation is nonzero: {}",
                rel.display(
                    &a.reflections()
                        .iter()
                        .map(|r| r.name.clone())
                        .collect::<Vec<_>>()
                )
            )));
        }
    }
    Ok(None)
}

fn verify_d_embedding_pi(
    h: &AlgebraHandle,
    rs: &RootSystem,
) -> Result<Option<String>, AlgebraError> {
    if rs.kind() != RootSystemType::D {
        return Err(AlgebraError::IdentityNotApplicable("d_embedding".into()));
    }
    let a = Arc::new(RootSystem::build(RootSystemType::A, rs.rank() - 1)?);
    let ha = calculus::build_quad_algebra(Arc::clone(&a), h.caps())?;
    let npairs = rs.rank() * (rs.rank() - 1) / 2;
    // pi kills barred generators and renames (ij); relations of D must map
    // into the relation ideal of A.
    let project = |x: &NCPoly| -> NCPoly {
        let mut out = NCPoly::zero();
        'terms: for (m, c) in x.terms() {
            let mut word = Vec::new();
            for &g in &m.0 {
                let g = g as usize;
                if g >= npairs {
                    continue 'terms;
                }
                word.push(g as GenIdx);
            }
            out.add_term(Monomial(word), c.clone());
        }
        out
    };
    for rel in h.relations() {
        let image = project(rel);
        if !ha.is_zero_in_quotient(&image)? {
            return Ok(Some(
                "projection of a quadratic relation is not a relation".into(),
            ));
        }
    }
    // pi(iota(e_{(ij)})) = e_{(ij)} on the nose
    for i in 1..=rs.rank() {
        for j in (i + 1)..=rs.rank() {
            let image = project(&d_capital_e(rs, i, j));
            let expected = NCPoly::generator(a.pair_index(i, j).unwrap() as GenIdx);
            if image != expected {
                return Ok(Some(format!("pi(iota(e({},{}))) != e({},{})", i, j, i, j)));
            }
        }
    }
    Ok(None)
}

fn verify_quartic_separates(
    h: &AlgebraHandle,
    rs: &RootSystem,
    i: usize,
    j: usize,
) -> Result<Option<String>, AlgebraError> {
    if rs.kind() != RootSystemType::B {
        return Err(AlgebraError::IdentityNotApplicable(
            "quartic_separates".into(),
        ));
    }
    let quartics = calculus::quartic_relations_b(rs)?;
    let pos = rs
        .pair_index(i, j)
        .ok_or(AlgebraError::PositionOutOfRange {
            position: j,
            degree: rs.rank(),
        })?;
    let pair_quartics = &quartics[2 * pos..2 * pos + 2];
    let quar = calculus::build_quar_algebra(Arc::new(rs.clone()), h.caps())?;
    for (t, q) in pair_quartics.iter().enumerate() {
        if h.is_zero_in_quotient(q)? {
            return Ok(Some(format!(
                "quartic {} for pair ({},{}) already vanishes in the quadratic algebra",
                t, i, j
            )));
        }
        let v = calculus::TensorVector::from_poly(q)?;
        if !calculus::antisymmetrize(rs, &v).is_zero() {
            return Ok(Some(format!(
                "quartic {} for pair ({},{}) is not annihilated by the antisymmetrizer",
                t, i, j
            )));
        }
        if !quar.is_zero_in_quotient(q)? {
            return Ok(Some(format!(
                "quartic {} for pair ({},{}) is nonzero in the quartic algebra",
                t, i, j
            )));
        }
    }
    Ok(None)
}

fn parse_pair_name(name: &str) -> Option<(usize, usize)> {
    let inner = name.strip_prefix('(')?.strip_suffix(')')?;
    if let Some((a, b)) = inner.split_once(',') {
        Some((a.parse().ok()?, b.parse().ok()?))
    } else if inner.len() == 2 {
        let mut ch = inner.chars();
        let a = ch.next()?.to_digit(10)? as usize;
        let b = ch.next()?.to_digit(10)? as usize;
        Some((a, b))
    } else {
        None
    }
}

/// Conjectured-complete model algebra for the theta family: abstract
/// generators t_1..t_n, anticommutators, all eps_k of the squares, and for
/// the simply-laced families also the top product and the hat sum.
pub fn model_algebra(
    kind: RootSystemType,
    n: usize,
    caps: ResourceCaps,
) -> Result<AlgebraHandle, AlgebraError> {
    let gens = Generators::abstract_named((1..=n).map(|i| format!("t{}", i)).collect());
    let t = |i: usize| NCPoly::generator((i - 1) as GenIdx);
    let mut rels = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            rels.push(&(&t(i) * &t(j)) + &(&t(j) * &t(i)));
        }
    }
    let squares: Vec<NCPoly> = (1..=n).map(|i| &t(i) * &t(i)).collect();
    for k in 1..=n {
        rels.push(elementary_of(&squares, k)?);
    }
    if kind != RootSystemType::B {
        let mut top = NCPoly::one();
        for i in 1..=n {
            top = &top * &t(i);
        }
        rels.push(top);
        let mut hat = NCPoly::zero();
        for i in 1..=n {
            let mut prod = NCPoly::one();
            for j in 1..=n {
                if j != i {
                    prod = &prod * &t(j);
                }
            }
            let sign = if i % 2 == 1 { 1 } else { -1 };
            hat = &hat + &prod.scale(&rat(sign));
        }
        rels.push(hat);
    }
    AlgebraHandle::new(gens, AlgebraKind::Model, rels).map(|h| h.with_caps(caps))
}

/// Which conjecture a comparison table is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjectureId {
    /// Woronowicz dims against the quadratic algebra (simply-laced).
    QuadComplete,
    /// Woronowicz dims against the quartic algebra (type B).
    QuarComplete,
    /// Theta-subalgebra dims against the conjectured model relations.
    ThetaComplete,
}

impl std::fmt::Display for ConjectureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConjectureId::QuadComplete => write!(f, "2.1"),
            ConjectureId::QuarComplete => write!(f, "2.2"),
            ConjectureId::ThetaComplete => write!(f, "5.1"),
        }
    }
}

impl std::str::FromStr for ConjectureId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "2.1" => Ok(ConjectureId::QuadComplete),
            "2.2" => Ok(ConjectureId::QuarComplete),
            "5.1" => Ok(ConjectureId::ThetaComplete),
            _ => Err(format!(
                "unknown conjecture `{}` (expected 2.1, 2.2 or 5.1)",
                s
            )),
        }
    }
}

/// Degree-by-degree comparison for one conjecture. Both series are computed
/// honestly; the table reports agreement and never asserts it.
pub fn check_conjecture(
    rs: Arc<RootSystem>,
    which: ConjectureId,
    d_max: usize,
    caps: ResourceCaps,
) -> Result<ConjectureReport, AlgebraError> {
    let system = rs.label();
    let (lhs_label, rhs_label, lhs, rhs, notes) = match which {
        ConjectureId::QuadComplete => {
            let wor = calculus::build_woronowicz_handle(Arc::clone(&rs), caps)?;
            let quad = calculus::build_quad_algebra(Arc::clone(&rs), caps)?;
            let l = wor.hilbert_dims(d_max)?;
            let r = quad.hilbert_dims(d_max)?;
            let mut notes = Vec::new();
            if l.iter().zip(&r).any(|(a, b)| a > b) {
                notes.push("inconsistency: woronowicz dims exceed quadratic dims".into());
            }
            ("woronowicz".to_string(), "quad".to_string(), l, r, notes)
        }
        ConjectureId::QuarComplete => {
            if rs.kind() != RootSystemType::B {
                return Err(AlgebraError::IdentityNotApplicable(
                    "conjecture 2.2 is about type B".into(),
                ));
            }
            let wor = calculus::build_woronowicz_handle(Arc::clone(&rs), caps)?;
            let quar = calculus::build_quar_algebra(Arc::clone(&rs), caps)?;
            let quad = calculus::build_quad_algebra(Arc::clone(&rs), caps)?;
            let l = wor.hilbert_dims(d_max)?;
            let r = quar.hilbert_dims(d_max)?;
            let q = quad.hilbert_dims(d_max)?;
            let mut notes = Vec::new();
            for d in 0..=d_max {
                if r[d] > q[d] {
                    notes.push(format!("inconsistency: quar > quad at degree {}", d));
                }
                if l[d] > r[d] {
                    notes.push(format!("woronowicz exceeds quar at degree {}", d));
                }
            }
            ("woronowicz".to_string(), "quar".to_string(), l, r, notes)
        }
        ConjectureId::ThetaComplete => {
            let (h, label) = match rs.kind() {
                RootSystemType::B => (
                    calculus::build_quar_algebra(Arc::clone(&rs), caps)?,
                    "theta-subalgebra(quar)",
                ),
                _ => (
                    calculus::build_quad_algebra(Arc::clone(&rs), caps)?,
                    "theta-subalgebra(quad)",
                ),
            };
            let thetas = theta_family(&rs)?;
            let l = h.subalgebra_dims(&thetas, d_max)?;
            let model = model_algebra(rs.kind(), thetas.len(), caps)?;
            let r = model.hilbert_dims(d_max)?;
            let mut notes = Vec::new();
            if l.iter().zip(&r).any(|(a, b)| a > b) {
                notes.push("inconsistency: subalgebra dims exceed the model quotient dims".into());
            }
            (label.to_string(), "model".to_string(), l, r, notes)
        }
    };
    let rows = (0..=d_max)
        .map(|degree| ConjectureRow {
            degree,
            lhs: lhs[degree],
            rhs: rhs[degree],
            agree: lhs[degree] == rhs[degree],
        })
        .collect();
    Ok(ConjectureReport {
        which: which.to_string(),
        system,
        lhs_label,
        rhs_label,
        rows,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::build_quad_algebra;

    fn root_system(kind: RootSystemType, rank: usize) -> Arc<RootSystem> {
        Arc::new(RootSystem::build(kind, rank).unwrap())
    }

    fn quad(kind: RootSystemType, rank: usize) -> AlgebraHandle {
        build_quad_algebra(root_system(kind, rank), ResourceCaps::default()).unwrap()
    }

    #[test]
    fn theta_examples() {
        let a2 = root_system(RootSystemType::A, 2);
        let t1 = theta_i(&a2, 1).unwrap();
        let expected = &NCPoly::generator(a2.pair_index(1, 2).unwrap() as GenIdx)
            + &NCPoly::generator(a2.pair_index(1, 3).unwrap() as GenIdx);
        assert_eq!(t1, expected);

        let b2 = root_system(RootSystemType::B, 2);
        let t1 = theta_i(&b2, 1).unwrap();
        let mut expected = &NCPoly::generator(b2.pair_index(1, 2).unwrap() as GenIdx)
            + &NCPoly::generator(b2.barred_index(1, 2).unwrap() as GenIdx);
        expected =
            &expected + &NCPoly::generator(b2.short_index(1).unwrap() as GenIdx).scale(&rat(2));
        assert_eq!(t1, expected);

        // sum of theta_i = 2 theta for type B
        let sum = theta_family(&b2)
            .unwrap()
            .iter()
            .fold(NCPoly::zero(), |acc, t| &acc + t);
        let theta = calculus::canonical_theta(&b2, calculus::ThetaClass::All)
            .unwrap()
            .scale(&rat(2));
        assert_eq!(sum, theta);

        assert!(theta_i(&root_system(RootSystemType::G2, 2), 1).is_err());
    }

    #[test]
    fn theta_general_matches_theta_i() {
        for (kind, rank) in [
            (RootSystemType::A, 2),
            (RootSystemType::A, 3),
            (RootSystemType::D, 3),
            (RootSystemType::D, 4),
            (RootSystemType::B, 2),
            (RootSystemType::B, 3),
        ] {
            let rs = root_system(kind, rank);
            for alpha in 1..=rs.rank() {
                assert_eq!(
                    theta_general(&rs, alpha).unwrap(),
                    theta_i(&rs, alpha).unwrap(),
                    "{}{} alpha={}",
                    kind,
                    rank,
                    alpha
                );
            }
        }
    }

    #[test]
    fn weyl_action_examples() {
        let a2 = root_system(RootSystemType::A, 2);
        let id = a2.identity_element();
        let x = &NCPoly::generator(0) * &NCPoly::generator(1);
        assert_eq!(weyl_action(&a2, &id, &x), x);

        let r12 = a2.pair_index(1, 2).unwrap();
        let r13 = a2.pair_index(1, 3).unwrap();
        let r23 = a2.pair_index(2, 3).unwrap();
        let s = a2.reflection_element(r12);
        assert_eq!(
            weyl_action(&a2, &s, &NCPoly::generator(r12 as GenIdx)),
            NCPoly::generator(r12 as GenIdx).scale(&rat(-1))
        );
        assert_eq!(
            weyl_action(&a2, &s, &NCPoly::generator(r13 as GenIdx)),
            NCPoly::generator(r23 as GenIdx).scale(&rat(-1))
        );
    }

    #[test]
    fn weyl_action_is_multiplicative_and_composes() {
        for (kind, rank) in [(RootSystemType::A, 2), (RootSystemType::B, 2)] {
            let rs = root_system(kind, rank);
            let g = rs.reflection_count();
            for a in 0..g {
                for b in 0..g {
                    let wa = rs.reflection_element(a);
                    let wb = rs.reflection_element(b);
                    let x = NCPoly::generator(a as GenIdx);
                    let y = NCPoly::generator(b as GenIdx);
                    let lhs = weyl_action(&rs, &wa, &(&x * &y));
                    let rhs = &weyl_action(&rs, &wa, &x) * &weyl_action(&rs, &wa, &y);
                    assert_eq!(lhs, rhs);
                    let lhs2 = weyl_action(&rs, &wa.compose(&wb), &x);
                    let rhs2 = weyl_action(&rs, &wa, &weyl_action(&rs, &wb, &x));
                    assert_eq!(lhs2, rhs2);
                }
            }
        }
    }

    #[test]
    fn twisted_derivation_examples() {
        let a2 = root_system(RootSystemType::A, 2);
        let gamma = 0;
        assert!(twisted_derivation(&a2, gamma, &NCPoly::one()).is_zero());
        let e = NCPoly::generator(gamma as GenIdx);
        assert!(twisted_derivation(&a2, gamma, &e).is_zero());
    }

    #[test]
    fn twisted_leibniz_is_exact_on_samples() {
        let a2 = root_system(RootSystemType::A, 2);
        let polys = [
            NCPoly::generator(0),
            &NCPoly::generator(1) * &NCPoly::generator(2),
            &(&NCPoly::generator(0) * &NCPoly::generator(1))
                + &(&NCPoly::generator(2) * &NCPoly::generator(2)).scale(&rat(3)),
        ];
        for gamma in 0..3 {
            let s = a2.reflection_element(gamma);
            for x in &polys {
                for y in &polys {
                    let k = x.homogeneous_degree().unwrap();
                    let lhs = twisted_derivation(&a2, gamma, &(x * y));
                    let sign = rat(if k % 2 == 0 { 1 } else { -1 });
                    let rhs = &(&twisted_derivation(&a2, gamma, x) * y)
                        + &(&weyl_action(&a2, &s, x) * &twisted_derivation(&a2, gamma, y))
                            .scale(&sign);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn derivations_preserve_the_relation_ideal() {
        for (kind, rank) in [
            (RootSystemType::A, 2),
            (RootSystemType::B, 2),
            (RootSystemType::D, 3),
        ] {
            let h = quad(kind, rank);
            let rs = h.root_system().unwrap();
            for gamma in 0..rs.reflection_count() {
                for rel in h.relations() {
                    let image = twisted_derivation(rs, gamma, rel);
                    assert!(
                        h.is_zero_in_quotient(&image).unwrap(),
                        "D_{} of a relation leaves the ideal in {}{}",
                        gamma,
                        kind,
                        rank
                    );
                }
            }
        }
    }

    #[test]
    fn cyclic_matches_worked_examples() {
        let a3 = root_system(RootSystemType::A, 3);
        // k=3: (a1a2)(a1a3)(a1a2) - (a1a3)(a1a2)(a1a3), up to overall sign
        let c = cyclic_element(&a3, &[1, 2, 3]);
        let m = |i: usize, j: usize| NCPoly::generator(a3.pair_index(i, j).unwrap() as GenIdx);
        let direct = &(&(&m(1, 2) * &m(1, 3)) * &m(1, 2)) - &(&(&m(1, 3) * &m(1, 2)) * &m(1, 3));
        assert!((&c + &direct).is_zero() || (&c - &direct).is_zero());

        // k=4: all signs positive
        let c4 = cyclic_element(&a3, &[1, 2, 3, 4]);
        let t1 = &(&(&m(1, 2) * &m(1, 3)) * &m(1, 4)) * &m(1, 2);
        let t2 = &(&(&m(1, 3) * &m(1, 4)) * &m(1, 2)) * &m(1, 3);
        let t3 = &(&(&m(1, 4) * &m(1, 2)) * &m(1, 3)) * &m(1, 4);
        assert_eq!(c4, &(&t1 + &t2) + &t3);
    }

    #[test]
    fn telescoping_matches_worked_examples() {
        let a3 = root_system(RootSystemType::A, 3);
        let m = |i: usize, j: usize| NCPoly::generator(a3.pair_index(i, j).unwrap() as GenIdx);
        let t3 = telescoping_element(&a3, &[1, 2, 3]);
        let direct = &(&(&m(1, 2) * &m(1, 3)) + &(&m(2, 3) * &m(1, 2))) + &(&m(1, 3) * &m(2, 3));
        assert_eq!(t3, direct);

        let t4 = telescoping_element(&a3, &[1, 2, 3, 4]);
        let p1 = &(&m(1, 2) * &m(1, 3)) * &m(1, 4);
        let p2 = &(&m(2, 3) * &m(2, 4)) * &m(1, 2);
        let p3 = &(&m(3, 4) * &m(1, 3)) * &m(2, 3);
        let p4 = &(&m(1, 4) * &m(2, 4)) * &m(3, 4);
        assert_eq!(t4, &(&(&p1 - &p2) + &p3) - &p4);
    }

    #[test]
    fn lemma_identities_hold_in_small_ranks() {
        let h2 = quad(RootSystemType::A, 2);
        let h3 = quad(RootSystemType::A, 3);
        for (h, ident) in [
            (
                &h2,
                Identity::Cyclic {
                    letters: vec![1, 2, 3],
                },
            ),
            (
                &h3,
                Identity::Cyclic {
                    letters: vec![1, 2, 3, 4],
                },
            ),
            (
                &h3,
                Identity::Cyclic {
                    letters: vec![2, 4, 3],
                },
            ),
            (
                &h3,
                Identity::Chain {
                    letters: vec![1, 2, 3, 4],
                },
            ),
            (
                &h2,
                Identity::Telescoping {
                    letters: vec![1, 2, 3],
                },
            ),
            (
                &h3,
                Identity::Telescoping {
                    letters: vec![1, 2, 3, 4],
                },
            ),
            (
                &h3,
                Identity::Telescoping {
                    letters: vec![4, 1, 3, 2],
                },
            ),
            (&h2, Identity::TopProduct),
            (&h3, Identity::TopProduct),
            (&h2, Identity::HatSum),
            (&h3, Identity::HatSum),
            (&h2, Identity::PowerSum { m: 1 }),
            (&h2, Identity::HatExpansion { k: 1 }),
            (&h2, Identity::HatExpansion { k: 2 }),
            (&h2, Identity::HatExpansion { k: 3 }),
        ] {
            let report = verify_identity(h, &ident).unwrap();
            assert!(report.passed(), "{} {:?}", report.name, report.witness);
        }
    }

    #[test]
    fn cyclic_via_derivation_chain() {
        // Lemma-style derivation route: applying D_{a2 a3} to (a1 a2)^2
        // stays in the ideal, as does the directly built cyclic element.
        let h = quad(RootSystemType::A, 2);
        let rs = h.root_system().unwrap();
        let r12 = rs.pair_index(1, 2).unwrap();
        let r23 = rs.pair_index(2, 3).unwrap();
        let sq = &NCPoly::generator(r12 as GenIdx) * &NCPoly::generator(r12 as GenIdx);
        let derived = twisted_derivation(rs, r23, &sq);
        assert!(!derived.is_zero());
        assert!(h.is_zero_in_quotient(&derived).unwrap());
        let direct = cyclic_element(rs, &[1, 2, 3]);
        assert!(h.is_zero_in_quotient(&direct).unwrap());
        assert!(h.is_zero_in_quotient(&(&derived - &direct)).unwrap());

        // k=4 route in A_3: D_{a3 a4} D_{a2 a3} applied to (a1 a2)^2.
        let h4 = quad(RootSystemType::A, 3);
        let rs4 = h4.root_system().unwrap();
        let r12 = rs4.pair_index(1, 2).unwrap();
        let r23 = rs4.pair_index(2, 3).unwrap();
        let r34 = rs4.pair_index(3, 4).unwrap();
        let sq = &NCPoly::generator(r12 as GenIdx) * &NCPoly::generator(r12 as GenIdx);
        let derived = twisted_derivation(rs4, r34, &twisted_derivation(rs4, r23, &sq));
        assert!(!derived.is_zero());
        assert!(h4.is_zero_in_quotient(&derived).unwrap());
    }

    #[test]
    fn anticommutativity_and_flatness() {
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
                    let r = verify_identity(&h, &Identity::Anticomm { i, j }).unwrap();
                    assert!(r.passed(), "anticomm {}{} ({},{})", kind, rank, i, j);
                }
                let r = verify_identity(&h, &Identity::Flat { i }).unwrap();
                assert!(r.passed(), "flat {}{} i={}", kind, rank, i);
            }
        }
    }

    #[test]
    fn g2_identities() {
        let h = quad(RootSystemType::G2, 2);
        for ident in [
            Identity::G2KernelRelations,
            Identity::G2EtaFlat { which: 1 },
            Identity::G2EtaFlat { which: 2 },
            Identity::G2EtaAnticomm,
        ] {
            let r = verify_identity(&h, &ident).unwrap();
            assert!(r.passed(), "{}", r.name);
        }
    }

    #[test]
    fn d_embedding_for_d3_and_d4() {
        for rank in [3, 4] {
            let h = quad(RootSystemType::D, rank);
            for ident in [
                Identity::DEmbeddingRelations,
                Identity::DEmbeddingIota,
                Identity::DEmbeddingPi,
            ] {
                let r = verify_identity(&h, &ident).unwrap();
                assert!(r.passed(), "D{} {}: {:?}", rank, r.name, r.witness);
            }
        }
    }

    #[test]
    fn failing_identity_reports_a_witness() {
        // eps_2 of the squared thetas needs the quartic relations: it is
        // nonzero in the quadratic algebra of B2.
        let h = quad(RootSystemType::B, 2);
        let r = verify_identity(&h, &Identity::Elementary { k: 2 }).unwrap();
        assert!(!r.passed());
        assert!(r.witness.is_some());
    }

    #[test]
    fn subalgebra_dims_match_model_for_a2() {
        let h = quad(RootSystemType::A, 2);
        let rs = h.root_system().unwrap();
        let thetas = theta_family(rs).unwrap();
        let dims = h.subalgebra_dims(&thetas, 5).unwrap();
        assert_eq!(dims, vec![1, 3, 4, 3, 1, 0]);
        let report = check_conjecture(
            root_system(RootSystemType::A, 2),
            ConjectureId::ThetaComplete,
            5,
            ResourceCaps::default(),
        )
        .unwrap();
        assert!(report.all_agree());
    }

    #[test]
    fn theta_subalgebra_of_a1_realization() {
        let rs = root_system(RootSystemType::A, 1);
        let h = quad(RootSystemType::A, 1);
        let thetas = theta_family(&rs).unwrap();
        assert_eq!(thetas.len(), 2);
        assert_eq!(thetas[0], thetas[1]);
        let dims = h.subalgebra_dims(&thetas, 4).unwrap();
        assert_eq!(dims, vec![1, 1, 0, 0, 0]);
    }

    #[test]
    fn conjecture_tables_are_consistent() {
        let r21 = check_conjecture(
            root_system(RootSystemType::A, 2),
            ConjectureId::QuadComplete,
            4,
            ResourceCaps::default(),
        )
        .unwrap();
        assert!(r21.notes.is_empty());
        assert!(r21.all_agree());

        let r22 = check_conjecture(
            root_system(RootSystemType::B, 2),
            ConjectureId::QuarComplete,
            4,
            ResourceCaps::default(),
        )
        .unwrap();
        assert!(r22.notes.is_empty());
        assert!(r22.all_agree());
    }
}
