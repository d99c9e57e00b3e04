//! Integer matrix representation of strong arbitrages.
//!
//! Ensembles map to row vectors `v = (n1, n4, n6, n2, n5, n3)` (the three
//! code coordinates first, then the dependent ones). Each strong
//! arbitrage `k` acts as right multiplication by a 6x6 integer matrix:
//! `v(apply_strong(k, n)) = v(n) * B_k`.
//!
//! A unimodular change of basis `w = v * Qinv` separates the balance
//! defects: `w4..w6` vanish exactly on balanced vectors. In the new
//! coordinates every generator becomes block triangular,
//! `D_k = [[I, 0], [F_k, G_k]]`, so chain products are governed by the
//! 3x3 blocks `G_k` acting on the defect coordinates.
//!
//! Everything here is exact: `i64` matrices, `i128` characteristic
//! polynomials, fraction-free rank computation.

use serde::Serialize;

use crate::arbitrage::{apply_strong, strong_rule, StrongId};
use crate::rates::{exponents_of, BalancedCode};
use crate::{reference, Error, ExponentEnsemble, Result};

/// A 3x3 integer matrix, row major.
pub type Mat3 = [[i64; 3]; 3];
/// A 6x6 integer matrix, row major.
pub type Mat6 = [[i64; 6]; 6];
/// The row-vector image of an ensemble: `(n1, n4, n6, n2, n5, n3)`.
pub type VVector = [i64; 6];

/// Positions of `(n1, n4, n6, n2, n5, n3)` inside `(n1..n6)`.
const V_PERMUTATION: [usize; 6] = [0, 3, 5, 1, 4, 2];

/// The 6x6 identity.
#[must_use]
pub fn identity6() -> Mat6 {
    let mut m = [[0i64; 6]; 6];
    for (d, row) in m.iter_mut().enumerate() {
        row[d] = 1;
    }
    m
}

/// The 3x3 identity.
#[must_use]
pub fn identity3() -> Mat3 {
    let mut m = [[0i64; 3]; 3];
    for (d, row) in m.iter_mut().enumerate() {
        row[d] = 1;
    }
    m
}

/// Exact product of 6x6 matrices.
#[must_use]
pub fn mat6_mul(a: &Mat6, b: &Mat6) -> Mat6 {
    let mut out = [[0i64; 6]; 6];
    for i in 0..6 {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik != 0 {
                for j in 0..6 {
                    out[i][j] += aik * b[k][j];
                }
            }
        }
    }
    out
}

/// Exact product of 3x3 matrices.
#[must_use]
pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik != 0 {
                for j in 0..3 {
                    out[i][j] += aik * b[k][j];
                }
            }
        }
    }
    out
}

/// Row vector times 6x6 matrix.
#[must_use]
pub fn vec6_mul(v: &VVector, m: &Mat6) -> VVector {
    let mut out = [0i64; 6];
    for (k, &vk) in v.iter().enumerate() {
        if vk != 0 {
            for j in 0..6 {
                out[j] += vk * m[k][j];
            }
        }
    }
    out
}

/// Row vector times 3x3 matrix.
#[must_use]
pub fn vec3_mul(v: &[i64; 3], m: &Mat3) -> [i64; 3] {
    let mut out = [0i64; 3];
    for (k, &vk) in v.iter().enumerate() {
        if vk != 0 {
            for j in 0..3 {
                out[j] += vk * m[k][j];
            }
        }
    }
    out
}

/// Whether every entry is zero.
#[must_use]
pub fn mat3_is_zero(m: &Mat3) -> bool {
    m.iter().all(|row| row.iter().all(|&x| x == 0))
}

/// The row-vector image of an exponent vector.
#[must_use]
pub fn v_of(n: &ExponentEnsemble) -> VVector {
    let exps = n.exponents();
    std::array::from_fn(|i| exps[V_PERMUTATION[i]])
}

/// Inverse of [`v_of`].
#[must_use]
pub fn state_of_v(v: &VVector) -> ExponentEnsemble {
    let mut exps = [0i64; 6];
    for (i, &p) in V_PERMUTATION.iter().enumerate() {
        exps[p] = v[i];
    }
    ExponentEnsemble::new(exps)
}

/// Construct the action matrix of a strong arbitrage from its
/// reassignment rule: the identity with the target's column replaced by
/// the signed incidence of the mediated value.
#[must_use]
pub fn build_b(k: StrongId) -> Mat6 {
    let rule = strong_rule(k);
    let vpos = |coord: usize| {
        V_PERMUTATION
            .iter()
            .position(|&p| p == coord)
            .expect("permutation covers all coordinates")
    };
    let t = vpos(rule.target);
    let mut m = identity6();
    m[t][t] = 0;
    for &(coord, sign) in &rule.terms {
        m[vpos(coord)][t] += rule.target_sign * sign;
    }
    m
}

/// Check the action identity `v(apply_strong(k, n)) = v(n) * B_k` at one
/// state.
#[must_use]
pub fn verify_action(k: StrongId, n: &ExponentEnsemble) -> bool {
    let lhs = v_of(&apply_strong(k, *n));
    let rhs = vec6_mul(&v_of(n), &build_b(k));
    lhs == rhs
}

/// Construct the change of basis separating balance defects, returning
/// `(Q, Qinv)`.
///
/// `Q = [[I, C], [0, I]]` where `C[i][t] = 1` exactly when code
/// coordinate `i` contributes to dependent coordinate `t`; the incidence
/// is read off the partial-sum form of balanced vectors, so the
/// construction is tied to the balance identities rather than copied
/// numbers.
#[must_use]
pub fn build_q() -> (Mat6, Mat6) {
    let mut q = identity6();
    let mut qinv = identity6();
    for i in 0..3 {
        // Unit code in direction i: i -> (1,0,0), j -> (0,1,0), k -> (0,0,1).
        let code = BalancedCode::new(
            i64::from(i == 0),
            i64::from(i == 1),
            i64::from(i == 2),
        );
        let v = v_of(&exponents_of(code));
        for t in 0..3 {
            let c = v[3 + t];
            q[i][3 + t] = c;
            qinv[i][3 + t] = -c;
        }
    }
    (q, qinv)
}

/// The defect coordinates of a state: `w = v * Qinv`; the last three
/// components vanish exactly on balanced vectors.
#[must_use]
pub fn w_of(n: &ExponentEnsemble) -> VVector {
    let (_, qinv) = build_q();
    vec6_mul(&v_of(n), &qinv)
}

/// Which side the conjugation is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConjugationDirection {
    /// `D = Q * B * Qinv`.
    QbQinv,
    /// `D = Qinv * B * Q`.
    QinvBq,
}

/// The block decomposition of one strong generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    /// 1-based generator id.
    pub generator: u8,
    /// Action matrix on `v` coordinates.
    pub b: Mat6,
    /// Conjugated matrix on `w` coordinates.
    pub d: Mat6,
    /// Which conjugation produced `d`.
    pub direction: ConjugationDirection,
    /// South-west 3x3 block of `d`.
    pub f: Mat3,
    /// South-east 3x3 block of `d`.
    pub g: Mat3,
    /// Whether `d` equals the bundled reference matrix entry for entry.
    pub matches_reference: bool,
}

fn has_block_form(d: &Mat6) -> bool {
    for i in 0..3 {
        for j in 0..3 {
            if d[i][j] != i64::from(i == j) {
                return false;
            }
        }
        for j in 3..6 {
            if d[i][j] != 0 {
                return false;
            }
        }
    }
    true
}

fn split_blocks(d: &Mat6) -> (Mat3, Mat3) {
    let mut f = [[0i64; 3]; 3];
    let mut g = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            f[i][j] = d[3 + i][j];
            g[i][j] = d[3 + i][3 + j];
        }
    }
    (f, g)
}

/// Conjugate the action matrix of generator `k` into defect coordinates.
///
/// Both conjugation directions are computed; the adopted one must have
/// the block-triangular form (identity north-west, zero north-east).
/// Preference goes to a direction that also reproduces the bundled
/// reference matrix exactly, and `matches_reference` records whether one
/// did.
///
/// # Errors
///
/// [`Error::NoConjugationMatch`] when neither direction is block
/// triangular.
pub fn decompose(k: StrongId) -> Result<BlockDecomposition> {
    let b = build_b(k);
    let (q, qinv) = build_q();
    let candidates = [
        (ConjugationDirection::QbQinv, mat6_mul(&mat6_mul(&q, &b), &qinv)),
        (ConjugationDirection::QinvBq, mat6_mul(&mat6_mul(&qinv, &b), &q)),
    ];
    let reference_d = reference::REFERENCE_D[k.pos()];
    let pick = candidates
        .iter()
        .find(|(_, d)| has_block_form(d) && *d == reference_d)
        .or_else(|| candidates.iter().find(|(_, d)| has_block_form(d)));
    match pick {
        None => Err(Error::NoConjugationMatch { generator: k.get() }),
        Some(&(direction, d)) => {
            let (f, g) = split_blocks(&d);
            Ok(BlockDecomposition {
                generator: k.get(),
                b,
                d,
                direction,
                f,
                g,
                matches_reference: d == reference_d,
            })
        }
    }
}

/// All twelve block decompositions in generator order.
pub fn decompose_all() -> Result<Vec<BlockDecomposition>> {
    StrongId::all().map(decompose).collect()
}

/// Monic characteristic polynomial of a 3x3 matrix, coefficients in
/// descending degree: `[1, c2, c1, c0]` for
/// `x^3 + c2 x^2 + c1 x + c0`.
#[must_use]
pub fn char_poly3(m: &Mat3) -> [i128; 4] {
    let a = |i: usize, j: usize| i128::from(m[i][j]);
    let trace = a(0, 0) + a(1, 1) + a(2, 2);
    let minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2)
        - a(0, 2) * a(2, 0)
        + a(1, 1) * a(2, 2)
        - a(1, 2) * a(2, 1);
    let det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
        - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    [1, -trace, minors, -det]
}

/// Monic characteristic polynomial of a 6x6 matrix, coefficients in
/// descending degree, computed by the Faddeev-LeVerrier recurrence (all
/// divisions are exact).
#[must_use]
pub fn char_poly6(m: &Mat6) -> [i128; 7] {
    let n = 6usize;
    let a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mul = |x: &Vec<Vec<i128>>, y: &Vec<Vec<i128>>| -> Vec<Vec<i128>> {
        let mut out = vec![vec![0i128; n]; n];
        for i in 0..n {
            for k in 0..n {
                if x[i][k] != 0 {
                    for j in 0..n {
                        out[i][j] += x[i][k] * y[k][j];
                    }
                }
            }
        }
        out
    };
    let mut coeffs = [0i128; 7];
    coeffs[0] = 1;
    let mut mk = a.clone();
    for step in 1..=n {
        let trace: i128 = (0..n).map(|i| mk[i][i]).sum();
        let c = -trace / (step as i128);
        debug_assert_eq!(-trace % (step as i128), 0, "exact division in recurrence");
        coeffs[step] = c;
        if step < n {
            let mut shifted = mk.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] += c;
            }
            mk = mul(&a, &shifted);
        }
    }
    coeffs
}

/// How a characteristic polynomial factors over the claimed spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SpectrumFactorization {
    /// `x^zeros * (x - 1)^ones`, the claimed form.
    ZeroOne {
        /// Multiplicity of eigenvalue 0.
        zeros: usize,
        /// Multiplicity of eigenvalue 1.
        ones: usize,
    },
    /// Some other factor remains after dividing out `x^a (x-1)^b`.
    Other {
        /// The leftover polynomial, descending coefficients.
        leftover: Vec<i128>,
    },
}

/// Factor a monic polynomial as `x^a (x-1)^b` if possible; otherwise
/// report the leftover after dividing out every such root.
#[must_use]
pub fn factor_zero_one(coeffs: &[i128]) -> SpectrumFactorization {
    let mut poly: Vec<i128> = coeffs.to_vec();
    // Roots at zero: trailing zero coefficients.
    let mut zeros = 0usize;
    while poly.len() > 1 && *poly.last().expect("nonempty") == 0 {
        poly.pop();
        zeros += 1;
    }
    // Roots at one: synthetic division while the coefficient sum vanishes.
    let mut ones = 0usize;
    while poly.len() > 1 && poly.iter().sum::<i128>() == 0 {
        let mut quotient = Vec::with_capacity(poly.len() - 1);
        let mut acc = 0i128;
        for &c in &poly[..poly.len() - 1] {
            acc += c;
            quotient.push(acc);
        }
        poly = quotient;
        ones += 1;
    }
    if poly == [1] {
        SpectrumFactorization::ZeroOne { zeros, ones }
    } else {
        SpectrumFactorization::Other { leftover: poly }
    }
}

/// Rank of an integer matrix, exact (cross-multiplication elimination in
/// `i128`).
#[must_use]
pub fn rank_int(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(pivot) = (row..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pivot);
        let p = m[row][col];
        for r in row + 1..nrows {
            let q = m[r][col];
            if q != 0 {
                for c in col..ncols {
                    m[r][c] = m[r][c] * p - m[row][c] * q;
                }
                // Keep entries small; the row is only used for rank.
                let g = m[r][col..]
                    .iter()
                    .fold(0i128, |acc, &x| gcd_i128(acc, x));
                if g > 1 {
                    for c in col..ncols {
                        m[r][c] /= g;
                    }
                }
            }
        }
        row += 1;
        rank += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rank of a 6x6 `i64` matrix.
#[must_use]
pub fn rank6(m: &Mat6) -> usize {
    let rows: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    rank_int(&rows)
}

/// Subtract the identity in place: `M - I`.
#[must_use]
pub fn mat6_minus_identity(m: &Mat6) -> Mat6 {
    let mut out = *m;
    for (d, row) in out.iter_mut().enumerate() {
        row[d] -= 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arbitrage::Chain;
    use crate::rates::code_of;
    use crate::START;

    fn probe_states() -> Vec<ExponentEnsemble> {
        let vals = [-2i64, 0, 1, 3];
        let mut out = Vec::new();
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        for e in vals {
                            for f in vals {
                                out.push(ExponentEnsemble::new([a, b, c, d, e, f]));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn v_permutation_round_trips() {
        for s in probe_states().iter().step_by(11) {
            assert_eq!(state_of_v(&v_of(s)), *s);
        }
        assert_eq!(v_of(&START), [1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn action_identity_holds_on_probe_grid() {
        for s in probe_states().iter().step_by(5) {
            for k in StrongId::all() {
                assert!(verify_action(k, s), "action failed for {} at {s}", k.get());
            }
        }
    }

    #[test]
    fn built_b_matrices_equal_reference() {
        for k in StrongId::all() {
            assert_eq!(
                build_b(k),
                reference::REFERENCE_B[k.pos()],
                "B_{} differs from reference",
                k.get()
            );
        }
    }

    #[test]
    fn q_times_qinv_is_identity() {
        let (q, qinv) = build_q();
        assert_eq!(mat6_mul(&q, &qinv), identity6());
        assert_eq!(mat6_mul(&qinv, &q), identity6());
        assert_eq!(q, reference::REFERENCE_Q);
        assert_eq!(qinv, reference::REFERENCE_Q_INV);
    }

    #[test]
    fn defect_coordinates_vanish_exactly_on_balanced_states() {
        for s in probe_states().iter().step_by(3) {
            let w = w_of(s);
            let balanced = w[3] == 0 && w[4] == 0 && w[5] == 0;
            assert_eq!(balanced, s.is_balanced(), "defect split at {s}");
            assert_eq!([w[0], w[1], w[2]], [v_of(s)[0], v_of(s)[1], v_of(s)[2]]);
        }
    }

    #[test]
    fn start_state_defects_are_minus_s1() {
        // w(START) = (1,0,0,-1,0,-1): the defect part is -(1,0,1).
        assert_eq!(w_of(&START), [1, 0, 0, -1, 0, -1]);
    }

    #[test]
    fn decomposition_matches_reference_for_all_generators() {
        for dec in decompose_all().unwrap() {
            assert!(dec.matches_reference, "D_{} mismatch", dec.generator);
            assert_eq!(dec.direction, ConjugationDirection::QbQinv);
            assert_eq!(dec.g, reference::REFERENCE_G[usize::from(dec.generator) - 1]);
        }
    }

    #[test]
    fn conjugation_direction_is_discriminating() {
        // The two directions differ for every generator with a nonzero F
        // block, so adopting by reference match is meaningful.
        let (q, qinv) = build_q();
        let b = build_b(StrongId::new(1).unwrap());
        let d_good = mat6_mul(&mat6_mul(&q, &b), &qinv);
        let d_bad = mat6_mul(&mat6_mul(&qinv, &b), &q);
        assert_ne!(d_good, d_bad);
        assert!(has_block_form(&d_good));
        assert!(!has_block_form(&d_bad));
    }

    #[test]
    fn w_dynamics_follow_the_blocks() {
        // w' = (w123 + w456*F, w456*G) for every generator and state.
        let decs = decompose_all().unwrap();
        for s in probe_states().iter().step_by(7) {
            let w = w_of(s);
            let (w123, w456) = ([w[0], w[1], w[2]], [w[3], w[4], w[5]]);
            for dec in &decs {
                let k = StrongId::new(dec.generator).unwrap();
                let next = w_of(&apply_strong(k, *s));
                let fw = vec3_mul(&w456, &dec.f);
                let gw = vec3_mul(&w456, &dec.g);
                assert_eq!(
                    next,
                    [
                        w123[0] + fw[0],
                        w123[1] + fw[1],
                        w123[2] + fw[2],
                        gw[0],
                        gw[1],
                        gw[2]
                    ],
                    "block dynamics for {} at {s}",
                    dec.generator
                );
            }
        }
    }

    #[test]
    fn char_poly3_known_values() {
        assert_eq!(char_poly3(&identity3()), [1, -3, 3, -1]);
        assert_eq!(char_poly3(&[[0; 3]; 3]), [1, 0, 0, 0]);
        // Companion matrix of x^3 - 2x - 5 (row convention does not matter
        // for the characteristic polynomial).
        let c = [[0, 1, 0], [0, 0, 1], [5, 2, 0]];
        assert_eq!(char_poly3(&c), [1, 0, -2, -5]);
    }

    #[test]
    fn char_poly6_known_values() {
        assert_eq!(char_poly6(&identity6()), [1, -6, 15, -20, 15, -6, 1]);
        let mut diag = [[0i64; 6]; 6];
        for (i, row) in diag.iter_mut().enumerate() {
            row[i] = i as i64;
        }
        // Eigenvalues 0..5: x(x-1)(x-2)(x-3)(x-4)(x-5)
        // = x^6 - 15x^5 + 85x^4 - 225x^3 + 274x^2 - 120x.
        assert_eq!(char_poly6(&diag), [1, -15, 85, -225, 274, -120, 0]);
    }

    #[test]
    fn char_poly_multiplicative_on_g_products() {
        // Characteristic polynomial of D equals (x-1)^3 times that of G.
        let decs = decompose_all().unwrap();
        for dec in &decs {
            let chi_d = char_poly6(&dec.d);
            let chi_g = char_poly3(&dec.g);
            // Multiply chi_g by (x-1)^3 = x^3 - 3x^2 + 3x - 1.
            let cube = [1i128, -3, 3, -1];
            let mut product = [0i128; 7];
            for (i, &a) in chi_g.iter().enumerate() {
                for (j, &b) in cube.iter().enumerate() {
                    product[i + j] += a * b;
                }
            }
            assert_eq!(chi_d, product, "block spectrum for {}", dec.generator);
        }
    }

    #[test]
    fn factor_zero_one_classifies_correctly() {
        assert_eq!(
            factor_zero_one(&[1, 0, 0, 0]),
            SpectrumFactorization::ZeroOne { zeros: 3, ones: 0 }
        );
        assert_eq!(
            factor_zero_one(&[1, -3, 3, -1]),
            SpectrumFactorization::ZeroOne { zeros: 0, ones: 3 }
        );
        assert_eq!(
            factor_zero_one(&[1, -1, 0, 0]),
            SpectrumFactorization::ZeroOne { zeros: 2, ones: 1 }
        );
        // x^2 + 1 is irreducible over the claimed roots.
        assert_eq!(
            factor_zero_one(&[1, 0, 1]),
            SpectrumFactorization::Other {
                leftover: vec![1, 0, 1]
            }
        );
        // x(x-1)(x+1) leaves x+1.
        assert_eq!(
            factor_zero_one(&[1, 0, -1, 0]),
            SpectrumFactorization::Other {
                leftover: vec![1, 1]
            }
        );
    }

    #[test]
    fn rank_known_values() {
        assert_eq!(rank6(&identity6()), 6);
        assert_eq!(rank6(&[[0; 6]; 6]), 0);
        let ones = [[1i64; 6]; 6];
        assert_eq!(rank6(&ones), 1);
        let (q, _) = build_q();
        assert_eq!(rank6(&q), 6);
    }

    #[test]
    fn matrix_route_agrees_with_state_route_on_chains() {
        let chains: [&[u8]; 3] = [&[7, 10], &[5, 7, 12], &[9, 1, 5, 10, 2, 7, 12]];
        for ids in chains {
            let chain = Chain::strong(ids).unwrap();
            let (end, _) = crate::arbitrage::apply_chain(&chain, START);
            let mut product = identity6();
            for &id in ids {
                product = mat6_mul(&product, &build_b(StrongId::new(id).unwrap()));
            }
            assert_eq!(v_of(&end), vec6_mul(&v_of(&START), &product));
        }
        // Sanity: the last chain lands on the balanced code (-1, 1, -1).
        let chain = Chain::strong(&[9, 1, 5, 10, 2, 7, 12]).unwrap();
        let (end, _) = crate::arbitrage::apply_chain(&chain, START);
        assert_eq!(code_of(&end), Some(BalancedCode::new(-1, 1, -1)));
    }
}
