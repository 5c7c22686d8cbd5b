//! Generator matrices of the two-step LRC construction.
//!
//! The message `x ∈ F^k` (over the extension field) is first encoded with an
//! `(m, k)` Reed–Solomon code evaluated at base-field points `α_1..α_m`, i.e.
//! multiplied by the `k × m` Vandermonde matrix `V`. The `m` outputs are then
//! cut into `m / r` groups of `r` and each group is re-encoded by the same
//! `r × (r+δ-1)` local generator `A` whose entries are powers of `ω`. The
//! resulting generator is `G = (V_1·A, V_2·A, ..., V_{m/r}·A)`.
//!
//! Columns `i·g .. (i+1)·g` (0-based, `g = r+δ-1`) form repair group `i`.

mod dump;
mod local;

pub use dump::{parse_matrix_text, write_matrix_text, DumpError};
pub use local::{
    build_local_code, build_local_code_general, verify_monic_permanents, verify_pattern_permanents, LocalCode,
    LocalCodeKind, PermanentVerdict,
};

use crate::field::{linalg, BaseField, ExtElem, ExtField, Field, FieldError, Matrix};
use std::collections::HashSet;
use std::ops::Range;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("r = 1 is not supported: replicate each symbol of an (n/2, k) MDS code twice instead")]
    LocalityOne,
    #[error("r = {r} >= k = {k} is not supported: a plain (n, k) MDS code is already optimal for r = k")]
    LocalityNotBelowK { r: usize, k: usize },
    #[error("r must be at least 1")]
    LocalityZero,
    #[error("delta must be at least 2, got {0}")]
    DeltaTooSmall(usize),
    #[error("group size r + delta - 1 = {g} does not divide n = {n}")]
    GroupSizeDoesNotDivide { n: usize, g: usize },
    #[error("k = {k} exceeds the Reed-Solomon length m = {m}")]
    DimensionExceedsM { k: usize, m: usize },
    #[error("base field {base} has {order} elements, fewer than m = {m}")]
    FieldTooSmall { base: String, order: u32, m: usize },
    #[error("evaluation points: {0}")]
    Alphas(String),
    #[error("local code: {0}")]
    LocalCode(String),
    #[error("extension degree a*k+1 overflows")]
    ExtensionOverflow,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// How the `m` evaluation points are chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum AlphaPolicy {
    /// The first `m` base-field elements in canonical order `0, 1, 2, ...`.
    #[default]
    Canonical,
    Explicit(Vec<u32>),
}

/// Validated `(n, k, r, δ)` parameters plus the field and local code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParams {
    n: usize,
    k: usize,
    base: BaseField,
    alphas: Vec<u32>,
    local: LocalCode,
}

impl CodeParams {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.local.r()
    }

    pub fn delta(&self) -> usize {
        self.local.delta()
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn alphas(&self) -> &[u32] {
        &self.alphas
    }

    pub fn local_code(&self) -> &LocalCode {
        &self.local
    }

    /// `g = r + δ - 1`, the number of symbols in each repair group.
    pub fn group_size(&self) -> usize {
        self.local.group_size()
    }

    /// Reed–Solomon length `m = n·r / g`.
    pub fn m(&self) -> usize {
        self.n * self.r() / self.group_size()
    }

    pub fn groups(&self) -> usize {
        self.n / self.group_size()
    }

    /// `e = a·k + 1` where `a` is the largest exponent in the local code
    /// (`a = 1` for the standard bidiagonal code, giving `e = k + 1`).
    pub fn ext_degree(&self) -> usize {
        self.local.max_exponent() as usize * self.k + 1
    }

    pub fn group_of(&self, index: usize) -> usize {
        index / self.group_size()
    }

    pub fn group_range(&self, group: usize) -> Range<usize> {
        let g = self.group_size();
        group * g..(group + 1) * g
    }

    /// Singleton-like bound met with equality by the construction:
    /// `n - k - ((⌈k/r⌉ - 1)(δ - 1) + 1) + 2`.
    pub fn optimal_distance(&self) -> usize {
        let ceil = self.k.div_ceil(self.r());
        self.n + 2 - self.k - ((ceil - 1) * (self.delta() - 1) + 1)
    }

    /// Builds parameters around an explicit local code. The code must pass
    /// [`verify_monic_permanents`].
    pub fn with_local_code(
        n: usize,
        k: usize,
        base: BaseField,
        alpha_policy: AlphaPolicy,
        local: LocalCode,
    ) -> Result<Self, ParamError> {
        let r = local.r();
        check_locality(k, r)?;
        let g = local.group_size();
        if n == 0 || !n.is_multiple_of(g) {
            return Err(ParamError::GroupSizeDoesNotDivide { n, g });
        }
        let m = n * r / g;
        if k > m {
            return Err(ParamError::DimensionExceedsM { k, m });
        }
        if (base.size() as usize) < m {
            return Err(ParamError::FieldTooSmall { base: base.to_string(), order: base.size(), m });
        }
        if let PermanentVerdict::Violation { columns, reason, .. } = verify_monic_permanents(&local) {
            return Err(ParamError::LocalCode(format!("columns {columns:?}: {reason}")));
        }
        local
            .max_exponent()
            .checked_mul(k as u64)
            .and_then(|x| x.checked_add(1))
            .filter(|&e| e <= u32::MAX as u64)
            .ok_or(ParamError::ExtensionOverflow)?;
        let alphas = match alpha_policy {
            AlphaPolicy::Canonical => base.elements().take(m).collect(),
            AlphaPolicy::Explicit(a) => {
                if a.len() != m {
                    return Err(ParamError::Alphas(format!("expected {m} points, got {}", a.len())));
                }
                if let Some(x) = a.iter().find(|&&x| !base.contains(x)) {
                    return Err(ParamError::Alphas(format!("{x} is not an element of {base}")));
                }
                let distinct: HashSet<_> = a.iter().collect();
                if distinct.len() != a.len() {
                    return Err(ParamError::Alphas("points must be pairwise distinct".into()));
                }
                a
            }
        };
        Ok(CodeParams { n, k, base, alphas, local })
    }
}

fn check_locality(k: usize, r: usize) -> Result<(), ParamError> {
    match r {
        0 => Err(ParamError::LocalityZero),
        1 => Err(ParamError::LocalityOne),
        _ if r >= k => Err(ParamError::LocalityNotBelowK { r, k }),
        _ => Ok(()),
    }
}

/// Validates `(n, k, r, δ)` and selects the local code: the bidiagonal code
/// for `δ = 2`, the `ω^((i-1)·r^j)` code otherwise.
pub fn make_params(
    n: usize,
    k: usize,
    r: usize,
    delta: usize,
    base: BaseField,
    alpha_policy: AlphaPolicy,
) -> Result<CodeParams, ParamError> {
    if delta < 2 {
        return Err(ParamError::DeltaTooSmall(delta));
    }
    check_locality(k, r)?;
    let local = if delta == 2 { build_local_code(r)? } else { build_local_code_general(r, delta)? };
    CodeParams::with_local_code(n, k, base, alpha_policy, local)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorForm {
    /// `G = V·(I ⊗ A)` as constructed.
    Construction,
    /// `G_k⁻¹·G` with an identity at the given columns.
    Systematic { pivots: Vec<usize> },
}

/// A `k × n` generator over the extension field together with the pieces it
/// was built from.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    params: CodeParams,
    field: ExtField,
    matrix: Matrix<ExtElem>,
    local: Matrix<ExtElem>,
    form: GeneratorForm,
}

impl GeneratorMatrix {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn matrix(&self) -> &Matrix<ExtElem> {
        &self.matrix
    }

    /// The local generator `A` with its `ω` powers instantiated.
    pub fn local_matrix(&self) -> &Matrix<ExtElem> {
        &self.local
    }

    pub fn form(&self) -> &GeneratorForm {
        &self.form
    }

    /// Columns of repair group `group` (the product `V_group · A` for a
    /// construction-form generator).
    pub fn block(&self, group: usize) -> Matrix<ExtElem> {
        let cols: Vec<usize> = self.params.group_range(group).collect();
        self.matrix.select_columns(&cols)
    }

    /// The `k × m` Vandermonde matrix `V` lifted into the extension field.
    pub fn vandermonde(&self) -> Matrix<ExtElem> {
        vandermonde(&self.field, self.params.alphas(), self.params.k())
    }
}

fn vandermonde(field: &ExtField, alphas: &[u32], k: usize) -> Matrix<ExtElem> {
    let base = field.base();
    Matrix::from_fn(k, alphas.len(), |i, j| field.from_base(base.pow(&alphas[j], i as u64)))
}

fn instantiate_local(field: &ExtField, local: &LocalCode) -> Matrix<ExtElem> {
    let p = local.pattern();
    Matrix::from_fn(p.rows(), p.cols(), |i, j| match p.get(i, j) {
        Some(e) => field.omega_pow(e),
        None => field.zero(),
    })
}

/// Assembles `G = (V_1·A, ..., V_{m/r}·A)` over the extension of degree
/// `e = a·k + 1` whose modulus is the first irreducible in scan order.
pub fn build_generator(params: &CodeParams) -> Result<GeneratorMatrix, ParamError> {
    let field = ExtField::with_degree(params.base().clone(), params.ext_degree());
    build_generator_in(params, field)
}

/// [`build_generator`] over a caller-supplied extension field (for example
/// one read back from a manifest).
pub fn build_generator_in(params: &CodeParams, field: ExtField) -> Result<GeneratorMatrix, ParamError> {
    if field.base() != params.base() || field.degree() != params.ext_degree() {
        return Err(ParamError::Field(FieldError::Mismatch(format!(
            "extension {:?} does not match base {} and degree {}",
            field,
            params.base(),
            params.ext_degree()
        ))));
    }
    let (k, r, g) = (params.k(), params.r(), params.group_size());
    let local = instantiate_local(&field, params.local_code());
    let v = vandermonde(&field, params.alphas(), k);
    let mut matrix = Matrix::filled(k, params.n(), field.zero());
    for grp in 0..params.groups() {
        let vi_cols: Vec<usize> = (grp * r..(grp + 1) * r).collect();
        let block = linalg::mul(&field, &v.select_columns(&vi_cols), &local);
        for i in 0..k {
            for j in 0..g {
                matrix.set(i, grp * g + j, block.get(i, j).clone());
            }
        }
    }
    Ok(GeneratorMatrix { params: params.clone(), field, matrix, local, form: GeneratorForm::Construction })
}

/// Rewrites `G` as `G_k⁻¹·G`, where `G_k` holds the first `k` linearly
/// independent columns scanning left to right. Returns the new generator
/// and those pivot columns, at which the result is the identity.
pub fn to_systematic(gm: &GeneratorMatrix) -> (GeneratorMatrix, Vec<usize>) {
    let f = &gm.field;
    let k = gm.params.k();
    let all: Vec<usize> = (0..gm.params.n()).collect();
    let pivots = linalg::greedy_independent_columns(f, &gm.matrix, &all, k);
    assert_eq!(pivots.len(), k, "construction generators have full row rank");
    let gk = gm.matrix.select_columns(&pivots);
    let inv = linalg::inverse(f, &gk).expect("pivot columns are independent");
    let matrix = linalg::mul(f, &inv, &gm.matrix);
    let out = GeneratorMatrix {
        params: gm.params.clone(),
        field: gm.field.clone(),
        matrix,
        local: gm.local.clone(),
        form: GeneratorForm::Systematic { pivots: pivots.clone() },
    };
    (out, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn p7() -> BaseField {
        BaseField::prime(7).unwrap()
    }

    #[test]
    fn derived_parameters() {
        let p = make_params(9, 3, 2, 2, p7(), AlphaPolicy::Canonical).unwrap();
        assert_eq!((p.m(), p.group_size(), p.ext_degree()), (6, 3, 4));
        assert_eq!(p.alphas(), &[0, 1, 2, 3, 4, 5]);
        let p = make_params(8, 4, 3, 2, p7(), AlphaPolicy::Canonical).unwrap();
        assert_eq!((p.m(), p.group_size(), p.ext_degree()), (6, 4, 5));
        let p = make_params(8, 3, 2, 3, p7(), AlphaPolicy::Canonical).unwrap();
        assert_eq!((p.m(), p.group_size(), p.ext_degree()), (4, 4, 49));
        assert_eq!(p.optimal_distance(), 4);
    }

    #[test]
    fn parameter_errors() {
        let p5 = BaseField::prime(5).unwrap();
        assert_eq!(
            make_params(8, 4, 3, 2, p5, AlphaPolicy::Canonical),
            Err(ParamError::FieldTooSmall { base: "prime:5".into(), order: 5, m: 6 })
        );
        assert_eq!(
            make_params(9, 1, 2, 2, p7(), AlphaPolicy::Canonical),
            Err(ParamError::LocalityNotBelowK { r: 2, k: 1 })
        );
        assert_eq!(make_params(8, 4, 1, 2, p7(), AlphaPolicy::Canonical), Err(ParamError::LocalityOne));
        assert_eq!(
            make_params(8, 3, 3, 2, p7(), AlphaPolicy::Canonical),
            Err(ParamError::LocalityNotBelowK { r: 3, k: 3 })
        );
        assert_eq!(
            make_params(10, 3, 2, 2, p7(), AlphaPolicy::Canonical),
            Err(ParamError::GroupSizeDoesNotDivide { n: 10, g: 3 })
        );
        assert_eq!(make_params(9, 3, 2, 1, p7(), AlphaPolicy::Canonical), Err(ParamError::DeltaTooSmall(1)));
        assert_eq!(
            make_params(6, 5, 2, 2, p7(), AlphaPolicy::Canonical),
            Err(ParamError::DimensionExceedsM { k: 5, m: 4 })
        );
        assert!(matches!(
            make_params(9, 3, 2, 2, p7(), AlphaPolicy::Explicit(vec![0, 1, 2, 3, 4, 4])),
            Err(ParamError::Alphas(_))
        ));
        assert!(matches!(
            make_params(9, 3, 2, 2, p7(), AlphaPolicy::Explicit(vec![0, 1, 2, 3, 4, 7])),
            Err(ParamError::Alphas(_))
        ));
        let msg = ParamError::LocalityOne.to_string();
        assert!(msg.contains("replicate"), "{msg}");
    }

    #[test]
    fn first_columns_follow_the_block_expansion() {
        let params = make_params(9, 3, 2, 2, p7(), AlphaPolicy::Explicit(vec![1, 2, 3, 4, 5, 6])).unwrap();
        let gm = build_generator(&params).unwrap();
        let f = gm.field();
        let b = f.base();
        let alpha_bar = |a: u32| -> Vec<ExtElem> { (0..3).map(|i| f.from_base(b.pow(&a, i))).collect() };
        let w = f.generator();
        assert_eq!(gm.matrix().column(0), alpha_bar(1));
        let expected: Vec<ExtElem> =
            alpha_bar(1).iter().zip(alpha_bar(2)).map(|(a1, a2)| f.add(&f.mul(&w, a1), &a2)).collect();
        assert_eq!(gm.matrix().column(1), expected);
        // column 3 is ω·ᾱ₂ alone, the last column of the first block
        let third: Vec<ExtElem> = alpha_bar(2).iter().map(|a| f.mul(&w, a)).collect();
        assert_eq!(gm.matrix().column(2), third);
    }

    /// Every k-subset with at most r columns per group is invertible.
    #[test]
    fn admissible_k_subsets_are_invertible() {
        let cases = [(9, 3, 2, 2), (6, 3, 2, 2), (8, 4, 3, 2), (8, 5, 3, 2), (10, 5, 4, 2), (8, 3, 2, 3)];
        for (n, k, r, d) in cases {
            let params = make_params(n, k, r, d, BaseField::prime(13).unwrap(), AlphaPolicy::Canonical).unwrap();
            let gm = build_generator(&params).unwrap();
            for s in (0..n).combinations(k) {
                let admissible =
                    (0..params.groups()).all(|grp| s.iter().filter(|&&c| params.group_of(c) == grp).count() <= r);
                if admissible {
                    assert_eq!(linalg::rank_of(gm.field(), gm.matrix(), &s), k, "{s:?} in ({n},{k},{r},{d})");
                }
            }
        }
    }

    /// Any r+1 columns of one group are dependent while every r of them are
    /// independent.
    #[test]
    fn groups_carry_circuits_of_size_r_plus_one() {
        for (n, k, r, d) in [(9, 3, 2, 2), (8, 4, 3, 2), (8, 3, 2, 3)] {
            let params = make_params(n, k, r, d, BaseField::prime(13).unwrap(), AlphaPolicy::Canonical).unwrap();
            let gm = build_generator(&params).unwrap();
            for grp in 0..params.groups() {
                for c in params.group_range(grp).combinations(r + 1) {
                    assert_eq!(linalg::rank_of(gm.field(), gm.matrix(), &c), r);
                    for sub in c.iter().copied().combinations(r) {
                        assert_eq!(linalg::rank_of(gm.field(), gm.matrix(), &sub), r);
                    }
                }
            }
        }
    }

    #[test]
    fn systematic_form_spans_the_same_rows() {
        for (n, k, r) in [(8, 4, 3), (9, 3, 2)] {
            let params = make_params(n, k, r, 2, p7(), AlphaPolicy::Canonical).unwrap();
            let gm = build_generator(&params).unwrap();
            let (sys, pivots) = to_systematic(&gm);
            let f = gm.field();
            assert_eq!(sys.matrix().select_columns(&pivots), linalg::identity(f, k));
            assert_eq!(*sys.form(), GeneratorForm::Systematic { pivots: pivots.clone() });
            // stacking either generator under the other keeps rank k
            let stacked = |a: &Matrix<ExtElem>, b: &Matrix<ExtElem>| {
                let rows = (0..k).map(|i| a.row(i).to_vec()).chain((0..k).map(|i| b.row(i).to_vec())).collect();
                linalg::rank(f, &Matrix::from_rows(rows))
            };
            assert_eq!(stacked(gm.matrix(), sys.matrix()), k);
            // idempotent on an already systematic matrix
            let (again, p2) = to_systematic(&sys);
            assert_eq!(again.matrix(), sys.matrix());
            assert_eq!(p2, pivots);
        }
    }
}
