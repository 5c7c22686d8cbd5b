//! Encoding, local repair and global erasure decoding.
//!
//! Erasures are identified by index (a missing storage node); there is no
//! error correction. Within a repair group the symbols satisfy
//! `y_group = u · A` for some local message `u ∈ F^r`, where `A` is the local
//! generator. Since `A` generates an MDS code, `u` is determined by any `r`
//! surviving symbols of the group, and that is all local repair reads.

use crate::construction::{GeneratorForm, GeneratorMatrix};
use crate::field::{linalg, BaseField, ExtElem, ExtField, Field, FieldError, Matrix};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("group {group} out of range ({groups} groups)")]
    GroupOutOfRange { group: usize, groups: usize },
    #[error("index {index} is not in repair group {group}")]
    NotInGroup { index: usize, group: usize },
    #[error("group {group} has {erased} erasures, local repair tolerates {tolerated}")]
    TooManyLocalErasures { group: usize, erased: usize, tolerated: usize },
    #[error("available symbols {available:?} have rank {rank} < k = {k}")]
    RankDeficient { rank: usize, k: usize, available: Vec<usize> },
    #[error("expected {expected} stripes, got {got}")]
    StripeCount { expected: usize, got: usize },
    #[error("stripe bundle: {0}")]
    Stripes(String),
    #[error("stripe encoding needs a construction-form generator")]
    NotConstructionForm,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The `k` information symbols `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message(Vec<ExtElem>);

impl Message {
    pub fn new(gm: &GeneratorMatrix, symbols: Vec<ExtElem>) -> Result<Self, CodecError> {
        check_len(gm.params().k(), symbols.len())?;
        Ok(Message(symbols))
    }

    pub fn symbols(&self) -> &[ExtElem] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<ExtElem> {
        self.0
    }
}

/// The `n` coded symbols `y = x·G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword(Vec<ExtElem>);

impl Codeword {
    pub fn symbols(&self) -> &[ExtElem] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<ExtElem> {
        self.0
    }

    /// `(index, symbol)` pairs for every index not in `pattern`.
    pub fn surviving(&self, pattern: &ErasurePattern) -> Vec<(usize, ExtElem)> {
        self.0.iter().enumerate().filter(|(i, _)| !pattern.contains(*i)).map(|(i, s)| (i, s.clone())).collect()
    }
}

/// A set of erased positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErasurePattern {
    erased: BTreeSet<usize>,
}

impl ErasurePattern {
    pub fn new(n: usize, erased: impl IntoIterator<Item = usize>) -> Result<Self, CodecError> {
        let erased: BTreeSet<usize> = erased.into_iter().collect();
        if let Some(&index) = erased.iter().find(|&&i| i >= n) {
            return Err(CodecError::IndexOutOfRange { index, n });
        }
        Ok(ErasurePattern { erased })
    }

    pub fn contains(&self, index: usize) -> bool {
        self.erased.contains(&index)
    }

    pub fn erased(&self) -> impl Iterator<Item = usize> + '_ {
        self.erased.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }
}

fn check_len(expected: usize, got: usize) -> Result<(), CodecError> {
    if expected == got {
        Ok(())
    } else {
        Err(CodecError::LengthMismatch { expected, got })
    }
}

pub fn encode(gm: &GeneratorMatrix, msg: &Message) -> Result<Codeword, CodecError> {
    check_len(gm.params().k(), msg.0.len())?;
    Ok(Codeword(linalg::vec_mul(gm.field(), &msg.0, gm.matrix())))
}

/// Rebuilds the erased symbols of one repair group.
///
/// `erased` lists the positions to rebuild (global indices inside the
/// group). `read` fetches a surviving symbol and is called only for indices
/// of this group, at most `r` times with a `Some` answer. A `None` answer
/// marks that position as erased too. Returns the rebuilt `(index, symbol)`
/// pairs in the order of `erased`.
pub fn repair_local(
    gm: &GeneratorMatrix,
    group: usize,
    erased: &[usize],
    mut read: impl FnMut(usize) -> Option<ExtElem>,
) -> Result<Vec<(usize, ExtElem)>, CodecError> {
    let params = gm.params();
    let f = gm.field();
    if group >= params.groups() {
        return Err(CodecError::GroupOutOfRange { group, groups: params.groups() });
    }
    let range = params.group_range(group);
    if let Some(&index) = erased.iter().find(|i| !range.contains(i)) {
        return Err(CodecError::NotInGroup { index, group });
    }
    let r = params.r();
    let tolerated = params.delta() - 1;
    let mut lost: BTreeSet<usize> = erased.iter().copied().collect();
    let too_many = |erased: usize| CodecError::TooManyLocalErasures { group, erased, tolerated };
    if lost.len() > tolerated {
        return Err(too_many(lost.len()));
    }

    // local column positions and values of r survivors
    let mut positions = Vec::with_capacity(r);
    let mut values = Vec::with_capacity(r);
    for idx in range.clone() {
        if positions.len() == r {
            break;
        }
        if lost.contains(&idx) {
            continue;
        }
        match read(idx) {
            Some(v) => {
                positions.push(idx - range.start);
                values.push(v);
            }
            None => {
                lost.insert(idx);
                if lost.len() > tolerated {
                    return Err(too_many(lost.len()));
                }
            }
        }
    }
    debug_assert_eq!(positions.len(), r);

    // u · A_P = y_P, i.e. A_Pᵀ · uᵀ = y_Pᵀ
    let a = gm.local_matrix();
    let a_p = a.select_columns(&positions);
    let u = linalg::solve_square(f, &a_p.transpose(), &values)?;
    let rebuilt = erased
        .iter()
        .map(|&idx| {
            let col = a.column(idx - range.start);
            let v = u.iter().zip(&col).fold(f.zero(), |acc, (ui, ai)| f.add(&acc, &f.mul(ui, ai)));
            (idx, v)
        })
        .collect();
    Ok(rebuilt)
}

/// Local repair for a fixed group and erasure set, prepared once and applied
/// to many codewords: each rebuilt symbol is a fixed linear combination of
/// the `r` survivors listed in [`reads`](Self::reads).
#[derive(Debug, Clone)]
pub struct LocalRepairPlan {
    field: ExtField,
    reads: Vec<usize>,
    targets: Vec<usize>,
    // (A_P)⁻¹ · A_T
    coeffs: Matrix<ExtElem>,
}

impl LocalRepairPlan {
    /// `available(i)` tells whether position `i` of the group can be read.
    /// Positions in `targets` are never read. The survivors read are the
    /// first `r` available ones in ascending order.
    pub fn new(
        gm: &GeneratorMatrix,
        group: usize,
        targets: &[usize],
        available: impl Fn(usize) -> bool,
    ) -> Result<Self, CodecError> {
        let params = gm.params();
        if group >= params.groups() {
            return Err(CodecError::GroupOutOfRange { group, groups: params.groups() });
        }
        let range = params.group_range(group);
        if let Some(&index) = targets.iter().find(|i| !range.contains(i)) {
            return Err(CodecError::NotInGroup { index, group });
        }
        let survivors: Vec<usize> = range.clone().filter(|i| !targets.contains(i) && available(*i)).collect();
        let tolerated = params.delta() - 1;
        let erased = range.len() - survivors.len();
        if erased > tolerated {
            return Err(CodecError::TooManyLocalErasures { group, erased, tolerated });
        }
        let reads: Vec<usize> = survivors[..params.r()].to_vec();
        let f = gm.field();
        let a = gm.local_matrix();
        let local_cols = |idx: &[usize]| idx.iter().map(|i| i - range.start).collect::<Vec<_>>();
        let inv = linalg::inverse(f, &a.select_columns(&local_cols(&reads)))?;
        let coeffs = linalg::mul(f, &inv, &a.select_columns(&local_cols(targets)));
        Ok(LocalRepairPlan { field: f.clone(), reads, targets: targets.to_vec(), coeffs })
    }

    pub fn reads(&self) -> &[usize] {
        &self.reads
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// `values[j]` is the symbol at `reads()[j]`; returns the symbols at
    /// `targets()` in order.
    pub fn apply(&self, values: &[ExtElem]) -> Vec<ExtElem> {
        linalg::vec_mul(&self.field, values, &self.coeffs)
    }
}

/// Global decoder for a fixed set of available positions. The pivot
/// selection and matrix inverse are computed once and reused for every
/// stripe.
#[derive(Debug, Clone)]
pub struct Decoder {
    field: ExtField,
    pivots: Vec<usize>,
    // (G_S)⁻¹, so that x = y_S · (G_S)⁻¹
    inverse: Matrix<ExtElem>,
}

impl Decoder {
    /// Scans `available` in ascending order, keeping each column that raises
    /// the rank, until `k` columns are kept.
    pub fn new(gm: &GeneratorMatrix, available: &[usize]) -> Result<Self, CodecError> {
        let n = gm.params().n();
        let k = gm.params().k();
        let mut sorted: Vec<usize> = available.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&index) = sorted.iter().find(|&&i| i >= n) {
            return Err(CodecError::IndexOutOfRange { index, n });
        }
        let pivots = linalg::greedy_independent_columns(gm.field(), gm.matrix(), &sorted, k);
        if pivots.len() < k {
            return Err(CodecError::RankDeficient { rank: pivots.len(), k, available: sorted });
        }
        let inverse = linalg::inverse(gm.field(), &gm.matrix().select_columns(&pivots))?;
        Ok(Decoder { field: gm.field().clone(), pivots, inverse })
    }

    /// Positions whose symbols the decoder reads.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `symbol_at(i)` must return the symbol at pivot position `i`.
    pub fn decode_with(&self, mut symbol_at: impl FnMut(usize) -> ExtElem) -> Message {
        let y: Vec<ExtElem> = self.pivots.iter().map(|&i| symbol_at(i)).collect();
        Message(linalg::vec_mul(&self.field, &y, &self.inverse))
    }
}

/// Recovers the message from `(index, symbol)` pairs.
pub fn decode(gm: &GeneratorMatrix, available: &[(usize, ExtElem)]) -> Result<Message, CodecError> {
    let indices: Vec<usize> = available.iter().map(|(i, _)| *i).collect();
    let dec = Decoder::new(gm, &indices)?;
    Ok(dec
        .decode_with(|i| available.iter().find(|(j, _)| *j == i).map(|(_, s)| s.clone()).expect("pivot is available")))
}

/// Whether the positions outside `pattern` still span the message space.
pub fn decodable(gm: &GeneratorMatrix, pattern: &ErasurePattern) -> bool {
    let surviving: Vec<usize> = (0..gm.params().n()).filter(|i| !pattern.contains(*i)).collect();
    linalg::rank_of(gm.field(), gm.matrix(), &surviving) == gm.params().k()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairPath {
    /// Rebuilt inside the repair group.
    Local,
    /// The group lost more than `δ - 1` symbols; the message was decoded
    /// from the whole codeword and re-encoded.
    Global,
}

/// Rebuilds every position in `pattern`, locally where each group allows it
/// and otherwise through a global decode. Locality is forfeited only for the
/// groups that exceed their local erasure budget.
pub fn restore(
    gm: &GeneratorMatrix,
    pattern: &ErasurePattern,
    mut read: impl FnMut(usize) -> Option<ExtElem>,
) -> Result<Vec<(usize, ExtElem, RepairPath)>, CodecError> {
    let params = gm.params();
    let mut out = Vec::new();
    let mut global_groups = Vec::new();
    for group in 0..params.groups() {
        let erased: Vec<usize> = params.group_range(group).filter(|i| pattern.contains(*i)).collect();
        if erased.is_empty() {
            continue;
        }
        match repair_local(gm, group, &erased, &mut read) {
            Ok(symbols) => out.extend(symbols.into_iter().map(|(i, s)| (i, s, RepairPath::Local))),
            Err(CodecError::TooManyLocalErasures { .. }) => global_groups.push(erased),
            Err(e) => return Err(e),
        }
    }
    if !global_groups.is_empty() {
        let available: Vec<(usize, ExtElem)> =
            (0..params.n()).filter(|i| !pattern.contains(*i)).filter_map(|i| read(i).map(|s| (i, s))).collect();
        let msg = decode(gm, &available)?;
        let cw = encode(gm, &msg)?;
        for i in global_groups.into_iter().flatten() {
            out.push((i, cw.0[i].clone(), RepairPath::Global));
        }
    }
    out.sort_by_key(|(i, _, _)| *i);
    Ok(out)
}

/// `e` Reed–Solomon codewords over the base field, all evaluated at the same
/// points: `stripes[j][i] = g_j(points[i])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripeBundle {
    points: Vec<u32>,
    stripes: Vec<Vec<u32>>,
}

impl StripeBundle {
    pub fn new(points: Vec<u32>, stripes: Vec<Vec<u32>>) -> Result<Self, CodecError> {
        if let Some(s) = stripes.iter().find(|s| s.len() != points.len()) {
            return Err(CodecError::Stripes(format!(
                "stripe of length {} evaluated at {} points",
                s.len(),
                points.len()
            )));
        }
        Ok(StripeBundle { points, stripes })
    }

    /// Evaluates each base-field message `(c_0, ..., c_{k-1})` as the
    /// polynomial `Σ c_i x^i` at every point.
    pub fn from_messages(base: &BaseField, points: &[u32], messages: &[Vec<u32>]) -> Self {
        let stripes = messages
            .iter()
            .map(|msg| {
                points.iter().map(|a| msg.iter().rev().fold(0u32, |acc, c| base.add(&base.mul(&acc, a), c))).collect()
            })
            .collect();
        StripeBundle { points: points.to_vec(), stripes }
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn stripes(&self) -> &[Vec<u32>] {
        &self.stripes
    }
}

/// Packs the column `(g_0(α_i), ..., g_{e-1}(α_i))` of the bundle into the
/// coefficient vector of one extension symbol, for each point `α_i`.
pub fn group_stripes(field: &ExtField, bundle: &StripeBundle) -> Result<Vec<ExtElem>, CodecError> {
    let e = field.degree();
    if bundle.stripes.len() != e {
        return Err(CodecError::StripeCount { expected: e, got: bundle.stripes.len() });
    }
    (0..bundle.points.len()).map(|i| Ok(field.elem(bundle.stripes.iter().map(|s| s[i]).collect())?)).collect()
}

/// Second encoding step only: groups the stripes into `m` Reed–Solomon
/// symbols over the extension and re-encodes each run of `r` with `A`.
pub fn encode_from_stripes(gm: &GeneratorMatrix, bundle: &StripeBundle) -> Result<Codeword, CodecError> {
    if *gm.form() != GeneratorForm::Construction {
        return Err(CodecError::NotConstructionForm);
    }
    let params = gm.params();
    if bundle.points != params.alphas() {
        return Err(CodecError::Stripes("evaluation points differ from the code's".into()));
    }
    let grouped = group_stripes(gm.field(), bundle)?;
    let r = params.r();
    let mut out = Vec::with_capacity(params.n());
    for chunk in grouped.chunks(r) {
        out.extend(linalg::vec_mul(gm.field(), chunk, gm.local_matrix()));
    }
    Ok(Codeword(out))
}

/// Recovers the extension-field message behind a bundle: each stripe is
/// interpolated back to its `k` base-field coefficients and the `e` results
/// are combined as `β_i = Σ_j β_{i,j} ω^j`.
pub fn bundle_message(gm: &GeneratorMatrix, bundle: &StripeBundle) -> Result<Message, CodecError> {
    let field = gm.field();
    let base = field.base();
    let k = gm.params().k();
    let e = field.degree();
    if bundle.stripes.len() != e {
        return Err(CodecError::StripeCount { expected: e, got: bundle.stripes.len() });
    }
    if bundle.points.len() < k {
        return Err(CodecError::Stripes(format!("need at least {k} points to interpolate")));
    }
    // Vandermonde system on the first k points: V[i][l] = α_i^l
    let v = Matrix::from_fn(k, k, |i, l| base.pow(&bundle.points[i], l as u64));
    let mut coeffs = vec![vec![0u32; e]; k];
    for (j, stripe) in bundle.stripes.iter().enumerate() {
        let c = linalg::solve_square(base, &v, &stripe[..k])?;
        for (i, ci) in c.into_iter().enumerate() {
            coeffs[i][j] = ci;
        }
    }
    let symbols = coeffs.into_iter().map(|c| field.elem(c)).collect::<Result<Vec<_>, _>>()?;
    Message::new(gm, symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_generator, make_params, to_systematic, AlphaPolicy};
    use itertools::Itertools;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gen(n: usize, k: usize, r: usize, d: usize) -> GeneratorMatrix {
        let params = make_params(n, k, r, d, BaseField::prime(13).unwrap(), AlphaPolicy::Canonical).unwrap();
        build_generator(&params).unwrap()
    }

    fn random_message(gm: &GeneratorMatrix, rng: &mut ChaCha8Rng) -> Message {
        let f = gm.field();
        Message::new(gm, (0..gm.params().k()).map(|_| f.random(rng)).collect()).unwrap()
    }

    #[test]
    fn encode_basics() {
        let gm = gen(9, 3, 2, 2);
        let f = gm.field();
        let zero = Message::new(&gm, vec![f.zero(); 3]).unwrap();
        assert!(encode(&gm, &zero).unwrap().symbols().iter().all(|s| f.is_zero(s)));
        let e1 = Message::new(&gm, vec![f.one(), f.zero(), f.zero()]).unwrap();
        assert_eq!(encode(&gm, &e1).unwrap().symbols(), gm.matrix().row(0));
        assert_eq!(Message::new(&gm, vec![f.one()]), Err(CodecError::LengthMismatch { expected: 3, got: 1 }));
    }

    #[test]
    fn codeword_groups_are_local_codewords() {
        let gm = gen(9, 3, 2, 2);
        let f = gm.field();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = gm.vandermonde();
        for _ in 0..20 {
            let msg = random_message(&gm, &mut rng);
            let cw = encode(&gm, &msg).unwrap();
            let rs = linalg::vec_mul(f, msg.symbols(), &v);
            for grp in 0..3 {
                let local = linalg::vec_mul(f, &rs[2 * grp..2 * grp + 2], gm.local_matrix());
                assert_eq!(&cw.symbols()[3 * grp..3 * grp + 3], local.as_slice());
            }
        }
    }

    #[test]
    fn single_erasure_repair_reads_r_group_symbols() {
        let gm = gen(9, 3, 2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cw = encode(&gm, &random_message(&gm, &mut rng)).unwrap();
        for lost in 0..9 {
            let group = lost / 3;
            let mut reads = Vec::new();
            let out = repair_local(&gm, group, &[lost], |i| {
                reads.push(i);
                (i != lost).then(|| cw.symbols()[i].clone())
            })
            .unwrap();
            assert_eq!(out, vec![(lost, cw.symbols()[lost].clone())]);
            assert_eq!(reads.len(), 2);
            assert!(reads.iter().all(|&i| i / 3 == group && i != lost));
        }
    }

    #[test]
    fn generalized_repairs_every_pair() {
        let gm = gen(8, 3, 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cw = encode(&gm, &random_message(&gm, &mut rng)).unwrap();
        for group in 0..2 {
            for pair in gm.params().group_range(group).combinations(2) {
                let out = repair_local(&gm, group, &pair, |i| Some(cw.symbols()[i].clone())).unwrap();
                for (i, s) in out {
                    assert_eq!(s, cw.symbols()[i]);
                }
            }
        }
    }

    #[test]
    fn repair_plan_matches_per_codeword_repair() {
        let gm = gen(8, 3, 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let plan = LocalRepairPlan::new(&gm, 1, &[5], |i| i != 4).unwrap();
        assert_eq!(plan.reads(), &[6, 7]);
        for _ in 0..10 {
            let cw = encode(&gm, &random_message(&gm, &mut rng)).unwrap();
            let vals: Vec<ExtElem> = plan.reads().iter().map(|&i| cw.symbols()[i].clone()).collect();
            assert_eq!(plan.apply(&vals), vec![cw.symbols()[5].clone()]);
        }
        let err = LocalRepairPlan::new(&gm, 1, &[5], |i| i == 7).unwrap_err();
        assert_eq!(err, CodecError::TooManyLocalErasures { group: 1, erased: 3, tolerated: 2 });
    }

    #[test]
    fn too_many_local_erasures() {
        let gm = gen(9, 3, 2, 2);
        let err = repair_local(&gm, 0, &[0, 1], |_| None).unwrap_err();
        assert_eq!(err, CodecError::TooManyLocalErasures { group: 0, erased: 2, tolerated: 1 });
        // a survivor that turns out to be missing counts as well
        let err = repair_local(&gm, 0, &[0], |_| None).unwrap_err();
        assert_eq!(err, CodecError::TooManyLocalErasures { group: 0, erased: 2, tolerated: 1 });
        assert!(matches!(repair_local(&gm, 0, &[3], |_| None), Err(CodecError::NotInGroup { index: 3, group: 0 })));
        assert!(matches!(repair_local(&gm, 3, &[], |_| None), Err(CodecError::GroupOutOfRange { .. })));
    }

    #[test]
    fn repair_works_on_systematic_generators() {
        let (gm, _) = to_systematic(&gen(8, 4, 3, 2));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cw = encode(&gm, &random_message(&gm, &mut rng)).unwrap();
        for lost in 0..8 {
            let out = repair_local(&gm, lost / 4, &[lost], |i| Some(cw.symbols()[i].clone())).unwrap();
            assert_eq!(out[0].1, cw.symbols()[lost]);
        }
    }

    #[test]
    fn decode_cases() {
        let gm = gen(9, 3, 2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let msg = random_message(&gm, &mut rng);
        let cw = encode(&gm, &msg).unwrap();
        let all = cw.surviving(&ErasurePattern::default());
        assert_eq!(decode(&gm, &all).unwrap(), msg);
        let no_group0 = ErasurePattern::new(9, 0..3).unwrap();
        assert!(decodable(&gm, &no_group0));
        assert_eq!(decode(&gm, &cw.surviving(&no_group0)).unwrap(), msg);
        // one group alone has rank r = 2 < k
        let only_group0 = ErasurePattern::new(9, 3..9).unwrap();
        assert!(!decodable(&gm, &only_group0));
        assert_eq!(
            decode(&gm, &cw.surviving(&only_group0)),
            Err(CodecError::RankDeficient { rank: 2, k: 3, available: vec![0, 1, 2] })
        );
        assert!(ErasurePattern::new(9, [9]).is_err());
    }

    #[test]
    fn every_d_minus_one_erasure_pattern_decodes() {
        for (n, k, r, d) in [(8, 4, 3, 2), (9, 3, 2, 2), (8, 3, 2, 3)] {
            let gm = gen(n, k, r, d);
            let dist = gm.params().optimal_distance();
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            let msg = random_message(&gm, &mut rng);
            let cw = encode(&gm, &msg).unwrap();
            for erased in (0..n).combinations(dist - 1) {
                let p = ErasurePattern::new(n, erased.clone()).unwrap();
                assert!(decodable(&gm, &p), "{erased:?}");
                assert_eq!(decode(&gm, &cw.surviving(&p)).unwrap(), msg);
            }
            // and some d-erasure pattern is fatal
            let witness =
                (0..n).combinations(dist).find(|e| !decodable(&gm, &ErasurePattern::new(n, e.clone()).unwrap()));
            assert!(witness.is_some(), "({n},{k},{r},{d})");
        }
    }

    #[test]
    fn restore_falls_back_to_global() {
        let gm = gen(9, 3, 2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cw = encode(&gm, &random_message(&gm, &mut rng)).unwrap();
        let p = ErasurePattern::new(9, [0, 1, 4]).unwrap();
        let out = restore(&gm, &p, |i| (!p.contains(i)).then(|| cw.symbols()[i].clone())).unwrap();
        let paths: Vec<(usize, RepairPath)> = out.iter().map(|(i, _, p)| (*i, *p)).collect();
        assert_eq!(paths, vec![(0, RepairPath::Global), (1, RepairPath::Global), (4, RepairPath::Local)]);
        for (i, s, _) in out {
            assert_eq!(s, cw.symbols()[i]);
        }
    }

    #[test]
    fn stripes_match_direct_encoding() {
        for (n, k, r) in [(9, 3, 2), (8, 4, 3)] {
            let params = make_params(n, k, r, 2, BaseField::prime(7).unwrap(), AlphaPolicy::Canonical).unwrap();
            let gm = build_generator(&params).unwrap();
            let base = gm.field().base().clone();
            let e = gm.field().degree();
            let mut rng = ChaCha8Rng::seed_from_u64(8);
            for _ in 0..20 {
                let messages: Vec<Vec<u32>> = (0..e).map(|_| (0..k).map(|_| base.random(&mut rng)).collect()).collect();
                let bundle = StripeBundle::from_messages(&base, params.alphas(), &messages);
                let msg = bundle_message(&gm, &bundle).unwrap();
                // message symbol i has ω-coefficients messages[.][i]
                for (i, s) in msg.symbols().iter().enumerate() {
                    let expected: Vec<u32> = messages.iter().map(|m| m[i]).collect();
                    assert_eq!(s.coeffs(), expected.as_slice());
                }
                assert_eq!(encode_from_stripes(&gm, &bundle).unwrap(), encode(&gm, &msg).unwrap());
                // grouped symbols equal RS evaluation over the extension
                let grouped = group_stripes(gm.field(), &bundle).unwrap();
                assert_eq!(grouped, linalg::vec_mul(gm.field(), msg.symbols(), &gm.vandermonde()));
            }
        }
    }

    #[test]
    fn stripe_edge_cases() {
        let gm = gen(9, 3, 2, 2);
        let f = gm.field();
        let pts = gm.params().alphas().to_vec();
        let zero = StripeBundle::new(pts.clone(), vec![vec![0; 6]; 4]).unwrap();
        assert!(encode_from_stripes(&gm, &zero).unwrap().symbols().iter().all(|s| f.is_zero(s)));
        let unit =
            StripeBundle::new(pts.clone(), (0..4).map(|j| (0..6).map(|i| u32::from(i == j)).collect()).collect())
                .unwrap();
        let grouped = group_stripes(f, &unit).unwrap();
        for (i, s) in grouped.iter().enumerate() {
            let col: Vec<u32> = (0..4).map(|j| u32::from(i == j)).collect();
            assert_eq!(s.coeffs(), col.as_slice());
        }
        let short = StripeBundle::new(pts.clone(), vec![vec![0; 6]; 3]).unwrap();
        assert_eq!(group_stripes(f, &short), Err(CodecError::StripeCount { expected: 4, got: 3 }));
        assert!(StripeBundle::new(pts, vec![vec![0; 5]]).is_err());
        let (sys, _) = to_systematic(&gm);
        assert_eq!(encode_from_stripes(&sys, &zero), Err(CodecError::NotConstructionForm));
    }
}
