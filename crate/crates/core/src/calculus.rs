//! The braided calculus on the left-invariant forms: braiding, the
//! antisymmetrizer, the relation sets presenting the quadratic/quartic/
//! Woronowicz algebras, the differential, curvature and first cohomology.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};

use crate::braid;
use crate::linalg::{kernel_basis, rat, Eliminator, Rational, SparseMatrix};
use crate::ncalg::{
    AlgebraError, AlgebraHandle, AlgebraKind, GenIdx, Generators, Monomial, NCPoly, ResourceCaps,
};
use crate::weyl::{ReflectionClass, RootSystem, RootSystemType};

/// A 1-form: an NCPoly supported in degree 1.
pub type ConnectionForm = NCPoly;

/// A homogeneous tensor-degree element, used when applying the braiding and
/// the antisymmetrizer at fixed positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorVector {
    degree: usize,
    coords: BTreeMap<Vec<GenIdx>, Rational>,
}

impl TensorVector {
    pub fn from_poly(p: &NCPoly) -> Result<Self, AlgebraError> {
        let degree = p
            .homogeneous_degree()
            .ok_or(AlgebraError::InhomogeneousInput)?;
        let coords = p.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect();
        Ok(TensorVector { degree, coords })
    }

    pub fn basis(word: Vec<GenIdx>) -> Self {
        let degree = word.len();
        let mut coords = BTreeMap::new();
        coords.insert(word, Rational::one());
        TensorVector { degree, coords }
    }

    pub fn to_poly(&self) -> NCPoly {
        NCPoly::from_terms(
            self.coords
                .iter()
                .map(|(w, c)| (Monomial(w.clone()), c.clone())),
        )
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

/// The braiding on basis 1-forms: e_a (x) e_b maps to e_{aba^{-1}} (x) e_a.
/// Returns the pair of reflection indices (a b a^{-1}, a).
pub fn braiding(rs: &RootSystem, a: usize, b: usize) -> (usize, usize) {
    (rs.conjugate_reflection(a, b), a)
}

/// Psi_i acting on the i-th and (i+1)-st tensor components, 1 <= i <= d-1.
pub fn psi_i(rs: &RootSystem, v: &TensorVector, i: usize) -> Result<TensorVector, AlgebraError> {
    let d = v.degree();
    if i < 1 || i + 1 > d {
        return Err(AlgebraError::PositionOutOfRange {
            position: i,
            degree: d,
        });
    }
    let conj = conj_table(rs);
    let mut coords = BTreeMap::new();
    for (w, c) in &v.coords {
        let mut word = w.clone();
        braid::apply_psi(&conj, &mut word, i);
        coords.insert(word, c.clone());
    }
    Ok(TensorVector { degree: d, coords })
}

/// Psi(w) for an explicit reduced word (positions, leftmost factor applied
/// last).
pub fn psi_word(
    rs: &RootSystem,
    v: &TensorVector,
    positions: &[usize],
) -> Result<TensorVector, AlgebraError> {
    let mut out = v.clone();
    for &i in positions.iter().rev() {
        out = psi_i(rs, &out, i)?;
    }
    Ok(out)
}

/// The antisymmetrizer A_d, with d the degree of the input.
pub fn antisymmetrize(rs: &RootSystem, v: &TensorVector) -> TensorVector {
    let d = v.degree();
    let conj = conj_table(rs);
    let group = braid::symmetric_group_words(d);
    let mut coords: BTreeMap<Vec<GenIdx>, Rational> = BTreeMap::new();
    for (w, c) in &v.coords {
        for (word, mult) in braid::antisymmetrize_word(&conj, w, &group) {
            let e = coords.entry(word).or_insert_with(Rational::zero);
            *e += c * rat(mult);
        }
    }
    coords.retain(|_, x| !x.is_zero());
    TensorVector { degree: d, coords }
}

fn conj_table(rs: &RootSystem) -> Vec<Vec<usize>> {
    let n = rs.reflection_count();
    let mut conj = vec![vec![0usize; n]; n];
    for (a, row) in conj.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            *entry = rs.conjugate_reflection(a, b);
        }
    }
    conj
}

/// Echelonized basis of ker(id - Psi) on the tensor square, as degree-2
/// polynomials. These are the defining relations of the quadratic algebra.
pub fn quad_relations(rs: &RootSystem) -> Vec<NCPoly> {
    let g = rs.reflection_count();
    let total = g * g;
    // id - P, P the permutation (a,b) -> (aba^{-1}, a) on pair indices.
    let mut entries = Vec::new();
    for a in 0..g {
        for b in 0..g {
            let src = a * g + b;
            let dst = rs.conjugate_reflection(a, b) * g + a;
            if src != dst {
                entries.push((src, src, Rational::one()));
                entries.push((dst, src, -Rational::one()));
            }
        }
    }
    let m = SparseMatrix::from_entries(total, total, entries).expect("well-formed Psi matrix");
    let kernel = kernel_basis(&m);
    let mut elim = Eliminator::new(total);
    for v in kernel {
        elim.insert(v);
    }
    elim.into_rref_rows()
        .into_iter()
        .map(|row| NCPoly::from_coords(&row, 2, g))
        .collect()
}

/// The two quartic elements of each pair i < j that hold in the Woronowicz
/// algebra of B_n but not in its quadratic version.
pub fn quartic_relations_b(rs: &RootSystem) -> Result<Vec<NCPoly>, AlgebraError> {
    if rs.kind() != RootSystemType::B {
        return Err(AlgebraError::IdentityNotApplicable(
            "quartic relations".into(),
        ));
    }
    let n = rs.rank();
    let word =
        |idx: &[usize]| NCPoly::monomial(Monomial(idx.iter().map(|&k| k as GenIdx).collect()));
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let p = rs.pair_index(i, j).unwrap();
            let b = rs.barred_index(i, j).unwrap();
            let s = rs.short_index(i).unwrap();
            let r1 = &(&word(&[b, s, p, s]) + &word(&[s, p, s, b]))
                + &(&word(&[p, s, b, s]) + &word(&[s, b, s, p]));
            let r2 = &word(&[p, s, p, s]) + &word(&[s, p, s, p]);
            out.push(r1);
            out.push(r2);
        }
    }
    Ok(out)
}

/// Quadratic algebra of a root system.
pub fn build_quad_algebra(
    rs: Arc<RootSystem>,
    caps: ResourceCaps,
) -> Result<AlgebraHandle, AlgebraError> {
    let gens = Generators::from_root_system(&rs);
    let relations = quad_relations(&rs);
    Ok(AlgebraHandle::new(gens, AlgebraKind::Quad, relations)?
        .with_caps(caps)
        .with_root_system(rs))
}

/// Quartic algebra of B_n: the quadratic relations plus the quartic ones.
pub fn build_quar_algebra(
    rs: Arc<RootSystem>,
    caps: ResourceCaps,
) -> Result<AlgebraHandle, AlgebraError> {
    let mut relations = quad_relations(&rs);
    relations.extend(quartic_relations_b(&rs)?);
    let gens = Generators::from_root_system(&rs);
    Ok(AlgebraHandle::new(gens, AlgebraKind::Quar, relations)?
        .with_caps(caps)
        .with_root_system(rs))
}

/// Handle whose graded dimensions are the antisymmetrizer ranks.
pub fn build_woronowicz_handle(
    rs: Arc<RootSystem>,
    caps: ResourceCaps,
) -> Result<AlgebraHandle, AlgebraError> {
    let gens = Generators::from_root_system(&rs);
    Ok(
        AlgebraHandle::new(gens, AlgebraKind::Woronowicz, Vec::new())?
            .with_caps(caps)
            .with_root_system(rs),
    )
}

/// Graded dimensions of the Woronowicz exterior algebra: rank of A_d per
/// degree.
pub fn woronowicz_dims(
    rs: &RootSystem,
    d_max: usize,
    caps: ResourceCaps,
) -> Result<Vec<usize>, AlgebraError> {
    let h = build_woronowicz_handle(Arc::new(rs.clone()), caps)?;
    h.hilbert_dims(d_max)
}

/// Which reflections a canonical connection sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaClass {
    All,
    Long,
    Short,
}

impl std::fmt::Display for ThetaClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThetaClass::All => write!(f, "all"),
            ThetaClass::Long => write!(f, "long"),
            ThetaClass::Short => write!(f, "short"),
        }
    }
}

/// theta = sum of e_a over a class of reflections, coefficient 1.
pub fn canonical_theta(rs: &RootSystem, class: ThetaClass) -> Result<ConnectionForm, AlgebraError> {
    if class != ThetaClass::All && rs.kind().is_simply_laced() {
        return Err(AlgebraError::InvalidThetaClass {
            kind: rs.kind().to_string(),
            class: class.to_string(),
        });
    }
    let wanted = match class {
        ThetaClass::All => None,
        ThetaClass::Long => Some(ReflectionClass::Long),
        ThetaClass::Short => Some(ReflectionClass::Short),
    };
    Ok(NCPoly::from_terms(rs.reflections().iter().filter_map(
        |r| match wanted {
            Some(c) if r.class != c => None,
            _ => Some((Monomial::generator(r.index as GenIdx), Rational::one())),
        },
    )))
}

/// The differential d x = theta x - (-1)^k x theta on a degree-k component,
/// extended linearly, reduced to normal form in the handle's quotient.
pub fn differential(h: &AlgebraHandle, x: &NCPoly) -> Result<NCPoly, AlgebraError> {
    let rs = h
        .root_system()
        .ok_or(AlgebraError::NotReflectionGenerated)?;
    let theta = canonical_theta(rs, ThetaClass::All)?;
    let mut out = NCPoly::zero();
    for k in x.degrees() {
        let comp = x.homogeneous_component(k);
        let mut dx =
            &(&theta * &comp) - &(&comp * &theta).scale(&rat(if k % 2 == 0 { 1 } else { -1 }));
        dx = h.normal_form(&dx)?;
        out = &out + &dx;
    }
    Ok(out)
}

/// Covariant curvature F(eta) = d eta + eta eta, in normal form.
pub fn curvature(h: &AlgebraHandle, eta: &ConnectionForm) -> Result<NCPoly, AlgebraError> {
    if !eta.is_zero() && eta.homogeneous_degree() != Some(1) {
        return Err(AlgebraError::InhomogeneousInput);
    }
    let d_eta = differential(h, eta)?;
    h.normal_form(&(&d_eta + &(eta * eta)))
}

/// First cohomology: closed 1-forms (exact 1-forms vanish since d kills
/// constants). Returns the dimension and a canonical basis.
pub fn h1(
    rs: Arc<RootSystem>,
    caps: ResourceCaps,
) -> Result<(usize, Vec<ConnectionForm>), AlgebraError> {
    let h = build_quad_algebra(Arc::clone(&rs), caps)?;
    let g = rs.reflection_count();
    let standard = h.standard_monomials(2)?;
    let pos: BTreeMap<&Monomial, usize> = standard.iter().zip(0..).collect();
    let mut entries = Vec::new();
    for a in 0..g {
        let e_a = NCPoly::generator(a as GenIdx);
        let de = differential(&h, &e_a)?;
        for (m, c) in de.terms() {
            entries.push((pos[m], a, c.clone()));
        }
    }
    let m = SparseMatrix::from_entries(standard.len(), g, entries).expect("well-formed d matrix");
    let kernel = kernel_basis(&m);
    let basis: Vec<ConnectionForm> = kernel
        .iter()
        .map(|v| {
            NCPoly::from_terms(
                v.iter()
                    .map(|(a, c)| (Monomial::generator(*a as GenIdx), c.clone())),
            )
        })
        .collect();
    Ok((basis.len(), basis))
}

/// Whether theta^2 is central at low degree: d^2 x = theta^2 x - x theta^2,
/// so this is the obstruction to d squaring to zero. Checked on the
/// standard-monomial basis up to `max_degree`.
pub fn theta_squared_central(h: &AlgebraHandle, max_degree: usize) -> Result<bool, AlgebraError> {
    let rs = h
        .root_system()
        .ok_or(AlgebraError::NotReflectionGenerated)?;
    let theta = canonical_theta(rs, ThetaClass::All)?;
    let theta2 = &theta * &theta;
    for d in 1..=max_degree {
        for w in h.standard_monomials(d)? {
            let x = NCPoly::monomial(w);
            let lhs = &(&theta2 * &x) - &(&x * &theta2);
            if !h.is_zero_in_quotient(&lhs)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Membership of a degree-2 element in ker(id - Psi).
pub fn in_quadratic_kernel(rs: &RootSystem, p: &NCPoly) -> Result<bool, AlgebraError> {
    if p.is_zero() {
        return Ok(true);
    }
    if p.homogeneous_degree() != Some(2) {
        return Err(AlgebraError::InhomogeneousInput);
    }
    let v = TensorVector::from_poly(p)?;
    let psi = psi_i(rs, &v, 1)?;
    let diff = &v.to_poly() - &psi.to_poly();
    Ok(diff.is_zero())
}

/// Sparse coordinates of A_d applied to a coordinate vector, for kernel
/// cross-checks.
pub fn antisymmetrizer_matrix(rs: &RootSystem, d: usize) -> SparseMatrix {
    let g = rs.reflection_count();
    let conj = conj_table(rs);
    let group = braid::symmetric_group_words(d);
    let total = (0..d).fold(1usize, |acc, _| acc * g);
    let mut entries = Vec::new();
    for idx in 0..total {
        let word = Monomial::decode(idx, d, g);
        for (w, mult) in braid::antisymmetrize_word(&conj, &word.0, &group) {
            let enc = w.iter().fold(0usize, |acc, &a| acc * g + a as usize);
            entries.push((enc, idx, rat(mult)));
        }
    }
    SparseMatrix::from_entries(total, total, entries).expect("antisymmetrizer is well-formed")
}
