//! Industrialization of a selected solution.
//!
//! A permutation chosen at bid stage is refined into technical components:
//! each 1 at `(i, P(i))` becomes a bistochastic block of order `d_i`. The
//! assembled matrix stays bistochastic, so its Birkhoff decomposition exists,
//! and every term of it is itself block-shaped. Cost and information
//! eigenvalues are split over the components, and the sign of the split
//! products exposes defaults and externalities.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::bid::{
    birkhoff_decompose, BirkhoffDecomposition, BistochasticMatrix, Permutation, SupportMatrix, SUM_TOLERANCE,
};
use crate::{Error, Result};

/// Relative tolerance on split conservation.
pub const SPLIT_TOLERANCE: f64 = 1e-9;

/// Relative tolerance under which two metric values count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Layout of the expanded matrix `Π↑`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPattern {
    base: Permutation,
    block_orders: Vec<usize>,
}

impl BlockPattern {
    /// `block_orders[i]` is the order of the block placed at `(i, P(i))`.
    pub fn new(base: Permutation, block_orders: Vec<usize>) -> Result<Self> {
        if block_orders.len() != base.order() {
            return Err(Error::DimensionMismatch {
                expected: base.order(),
                found: block_orders.len(),
            });
        }
        if block_orders.contains(&0) {
            return Err(Error::Domain("block orders must be at least 1"));
        }
        Ok(Self { base, block_orders })
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    pub fn block_orders(&self) -> &[usize] {
        &self.block_orders
    }

    /// Number of functions `m_F`.
    pub fn functions(&self) -> usize {
        self.base.order()
    }

    /// Order `N_β = Σ d` of the expanded matrix.
    pub fn expanded_order(&self) -> usize {
        self.block_orders.iter().sum()
    }

    /// Component count of each row group.
    pub fn row_widths(&self) -> &[usize] {
        &self.block_orders
    }

    /// Component count of each column group; column `P(i)` inherits `d_i`.
    pub fn col_widths(&self) -> Vec<usize> {
        let mut widths = vec![0; self.functions()];
        for (i, &d) in self.block_orders.iter().enumerate() {
            widths[self.base.image(i)] = d;
        }
        widths
    }

    pub fn row_offsets(&self) -> Vec<usize> {
        offsets(&self.block_orders)
    }

    pub fn col_offsets(&self) -> Vec<usize> {
        offsets(&self.col_widths())
    }

    /// Whether expanded cell `(r, c)` lies inside one of the blocks.
    pub fn contains(&self, r: usize, c: usize) -> bool {
        let (rows, cols) = (self.row_offsets(), self.col_offsets());
        let i = group_of(&rows, r);
        let l = group_of(&cols, c);
        self.base.image(i) == l
    }
}

fn offsets(widths: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(widths.len());
    let mut acc = 0;
    for &w in widths {
        out.push(acc);
        acc += w;
    }
    out
}

fn group_of(offsets: &[usize], idx: usize) -> usize {
    offsets.partition_point(|&o| o <= idx) - 1
}

/// A block pattern filled with its bistochastic blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    pattern: BlockPattern,
    /// Block of row group `i`, placed at `(i, P(i))`.
    blocks: Vec<BistochasticMatrix>,
}

impl BlockMatrix {
    pub fn pattern(&self) -> &BlockPattern {
        &self.pattern
    }

    pub fn block(&self, i: usize) -> &BistochasticMatrix {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[BistochasticMatrix] {
        &self.blocks
    }

    /// The `N_β × N_β` matrix `Π↑`.
    pub fn assemble(&self) -> BistochasticMatrix {
        let n = self.pattern.expanded_order();
        let rows = self.pattern.row_offsets();
        let cols = self.pattern.col_offsets();
        let mut entries = vec![0.0; n * n];
        for (i, block) in self.blocks.iter().enumerate() {
            let (r0, c0) = (rows[i], cols[self.pattern.base.image(i)]);
            let d = block.order();
            for a in 0..d {
                for b in 0..d {
                    entries[(r0 + a) * n + c0 + b] = block.get(a, b);
                }
            }
        }
        BistochasticMatrix::from_row_major(n, entries, SUM_TOLERANCE)
            .expect("blocks are bistochastic and tile a permutation pattern")
    }
}

/// Places each block at its base position. Keys are `(i, l)` with `l = P(i)`.
pub fn block_expand(
    pattern: BlockPattern,
    blocks: BTreeMap<(usize, usize), BistochasticMatrix>,
) -> Result<BlockMatrix> {
    for &(row, col) in blocks.keys() {
        if row >= pattern.functions() || pattern.base.image(row) != col {
            return Err(Error::UnexpectedBlock { row, col });
        }
    }
    let mut ordered = Vec::with_capacity(pattern.functions());
    for i in 0..pattern.functions() {
        let block = blocks
            .get(&(i, pattern.base.image(i)))
            .ok_or(Error::MissingBlock { row: i })?;
        if block.order() != pattern.block_orders[i] {
            return Err(Error::OrderMismatch {
                row: i,
                expected: pattern.block_orders[i],
                found: block.order(),
            });
        }
        ordered.push(block.clone());
    }
    Ok(BlockMatrix {
        pattern,
        blocks: ordered,
    })
}

/// Decomposition of `Π↑` with each term cut back into its blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub decomposition: BirkhoffDecomposition,
    /// `block_terms[α][i]` is the permutation `π^α` of order `d_i` that term
    /// `α` places in block `(i, P(i))`.
    pub block_terms: Vec<Vec<Permutation>>,
}

impl BlockDecomposition {
    /// `Σ_α W_α π^α_{i,P(i)}`, row-major.
    pub fn reconstruct_block(&self, i: usize) -> Vec<f64> {
        let d = self.block_terms.first().map_or(0, |t| t[i].order());
        let mut out = vec![0.0; d * d];
        for (term, perms) in self.decomposition.terms().iter().zip(&self.block_terms) {
            for (a, &b) in perms[i].mapping().iter().enumerate() {
                out[a * d + b] += term.weight;
            }
        }
        out
    }

    /// Largest entry-wise error of the per-block reconstruction.
    pub fn block_reconstruction_error(&self, b: &BlockMatrix) -> f64 {
        (0..b.blocks.len())
            .map(|i| {
                self.reconstruct_block(i)
                    .iter()
                    .zip(b.blocks[i].entries())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Birkhoff decomposition of the assembled matrix; every term is checked to
/// stay inside the block pattern and is restricted to each block.
pub fn block_birkhoff(b: &BlockMatrix) -> Result<BlockDecomposition> {
    let pattern = &b.pattern;
    let decomposition = birkhoff_decompose(&b.assemble())?;
    let rows = pattern.row_offsets();
    let cols = pattern.col_offsets();
    let mut block_terms = Vec::with_capacity(decomposition.len());
    for term in decomposition.terms() {
        let mut perms = Vec::with_capacity(pattern.functions());
        for i in 0..pattern.functions() {
            let (r0, c0) = (rows[i], cols[pattern.base.image(i)]);
            let d = pattern.block_orders[i];
            let mut local = Vec::with_capacity(d);
            for a in 0..d {
                let c = term.permutation.image(r0 + a);
                if c < c0 || c >= c0 + d {
                    return Err(Error::UnexpectedBlock { row: r0 + a, col: c });
                }
                local.push(c - c0);
            }
            perms.push(Permutation::from_mapping(local)?);
        }
        block_terms.push(perms);
    }
    Ok(BlockDecomposition {
        decomposition,
        block_terms,
    })
}

/// Component-level splits of the cost and information eigenvalues. Signs
/// are free: negative parts are how defaults show up.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitOperators {
    /// `e_split[i][k] = E_{i,k}`.
    pub e_split: Vec<Vec<f64>>,
    /// `i_split[l][j] = I_{l,j}`.
    pub i_split: Vec<Vec<f64>>,
}

fn check_conservation(split: &[Vec<f64>], parents: &[f64]) -> Result<()> {
    if split.len() != parents.len() {
        return Err(Error::DimensionMismatch {
            expected: parents.len(),
            found: split.len(),
        });
    }
    for (index, (parts, &parent)) in split.iter().zip(parents).enumerate() {
        let found: f64 = parts.iter().sum();
        let scale = if parent == 0.0 { 1.0 } else { parent.abs() };
        if (found - parent).abs() > SPLIT_TOLERANCE * scale {
            return Err(Error::SplitNotConserved {
                index,
                expected: parent,
                found,
            });
        }
    }
    Ok(())
}

fn check_widths(split: &[Vec<f64>], widths: &[usize]) -> Result<()> {
    if split.len() != widths.len() {
        return Err(Error::DimensionMismatch {
            expected: widths.len(),
            found: split.len(),
        });
    }
    for (parts, &w) in split.iter().zip(widths) {
        if parts.len() != w {
            return Err(Error::DimensionMismatch {
                expected: w,
                found: parts.len(),
            });
        }
    }
    Ok(())
}

impl SplitOperators {
    /// Checks that the splits sum back to `e` and `i`.
    pub fn new(e_split: Vec<Vec<f64>>, i_split: Vec<Vec<f64>>, e: &[f64], i: &[f64]) -> Result<Self> {
        check_conservation(&e_split, e)?;
        check_conservation(&i_split, i)?;
        Ok(Self { e_split, i_split })
    }

    /// Equal shares `E_i/d` and `I_l/d` per component.
    pub fn uniform(e: &[f64], i: &[f64], pattern: &BlockPattern) -> Result<Self> {
        let n = pattern.functions();
        for len in [e.len(), i.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        let share = |v: f64, d: usize| vec![v / d as f64; d];
        Ok(Self {
            e_split: e.iter().zip(pattern.row_widths()).map(|(&v, &d)| share(v, d)).collect(),
            i_split: i.iter().zip(pattern.col_widths()).map(|(&v, d)| share(v, d)).collect(),
        })
    }

    /// Checks the split lengths against the component counts of `pattern`.
    pub fn check_pattern(&self, pattern: &BlockPattern) -> Result<()> {
        check_widths(&self.e_split, pattern.row_widths())?;
        check_widths(&self.i_split, &pattern.col_widths())
    }

    pub fn block_budget(&self, i: usize, l: usize, pi: &Permutation) -> Result<f64> {
        let e = self.e_split.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.e_split.len(),
        })?;
        let info = self.i_split.get(l).ok_or(Error::IndexOutOfRange {
            index: l,
            len: self.i_split.len(),
        })?;
        block_budget(e, info, pi)
    }
}

/// `Σ_k E_{i,k} I_{l,π(k)}` for one block.
pub fn block_budget(e_split: &[f64], i_split: &[f64], pi: &Permutation) -> Result<f64> {
    for len in [e_split.len(), i_split.len()] {
        if len != pi.order() {
            return Err(Error::DimensionMismatch {
                expected: pi.order(),
                found: len,
            });
        }
    }
    Ok(e_split.iter().enumerate().map(|(k, e)| e * i_split[pi.image(k)]).sum())
}

/// Technical policy `T^A`: the OR of the chosen component permutations.
pub fn technical_select(terms: &[Permutation], chosen: &[usize]) -> Result<SupportMatrix> {
    let (&first, rest) = chosen.split_first().ok_or(Error::EmptySelection)?;
    let pick = |a: usize| {
        terms.get(a).ok_or(Error::IndexOutOfRange {
            index: a,
            len: terms.len(),
        })
    };
    let mut out = pick(first)?.to_support();
    for &a in rest {
        out.union_with(&pick(a)?.to_support())?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExternalityClass {
    Clean,
    /// A negative cell, but `H > 0`.
    MinorDefault,
    /// `H < 0`.
    MajorDefault,
    /// Every cost part negative while all information used is positive.
    ExplicitExternality,
}

/// Reading of one `(E, I)` cell from its signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellSemantics {
    /// `I = 0`.
    Ignorance,
    /// `E > 0`, `I > 0`.
    EfficientKnowledge,
    /// `E < 0`, `I > 0`.
    Negligence,
    /// `E > 0`, `I < 0`.
    MaliciousThinking,
    /// `E < 0`, `I < 0`: a twisted component put to profitable use.
    CounterintuitiveCorrection,
    /// `E = 0`.
    Inert,
}

pub fn cell_semantics(e: f64, i: f64) -> CellSemantics {
    if i == 0.0 {
        CellSemantics::Ignorance
    } else if e == 0.0 {
        CellSemantics::Inert
    } else {
        match (e > 0.0, i > 0.0) {
            (true, true) => CellSemantics::EfficientKnowledge,
            (false, true) => CellSemantics::Negligence,
            (true, false) => CellSemantics::MaliciousThinking,
            (false, false) => CellSemantics::CounterintuitiveCorrection,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeTerm {
    pub k: usize,
    pub l: usize,
    pub product: f64,
    pub semantics: CellSemantics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalityReport {
    pub h: f64,
    pub classification: ExternalityClass,
    pub negative_terms: Vec<NegativeTerm>,
}

/// `H = Σ_k Σ_l E_{i,k} t_{k,l} I_{j,l}` and its default class.
pub fn externality_metric(e_split: &[f64], i_split: &[f64], t: &SupportMatrix) -> Result<ExternalityReport> {
    let d = t.order();
    for len in [e_split.len(), i_split.len()] {
        if len != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: len,
            });
        }
    }
    let mut h = 0.0;
    let mut negative_terms = Vec::new();
    let mut used = vec![false; d];
    for (k, &e) in e_split.iter().enumerate() {
        for l in 0..d {
            if !t.get(k, l) {
                continue;
            }
            used[l] = true;
            let product = e * i_split[l];
            h += product;
            if product < 0.0 {
                negative_terms.push(NegativeTerm {
                    k,
                    l,
                    product,
                    semantics: cell_semantics(e_split[k], i_split[l]),
                });
            }
        }
    }
    let any_used = used.iter().any(|&u| u);
    let explicit =
        any_used && e_split.iter().all(|&e| e < 0.0) && used.iter().zip(i_split).all(|(&u, &i)| !u || i > 0.0);
    let classification = if explicit {
        ExternalityClass::ExplicitExternality
    } else if h < 0.0 {
        ExternalityClass::MajorDefault
    } else if !negative_terms.is_empty() && h > 0.0 {
        ExternalityClass::MinorDefault
    } else {
        ExternalityClass::Clean
    };
    Ok(ExternalityReport {
        h,
        classification,
        negative_terms,
    })
}

/// Candidate element of solution `T^β` for a given `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub beta: usize,
    pub e_split: Vec<f64>,
    pub i_split: Vec<f64>,
    pub selection: SupportMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageChoice {
    pub beta: usize,
    pub h: f64,
    /// Another candidate reaches the same minimum.
    pub tie: bool,
    /// `(β, report)` for every candidate, sorted by `β`.
    pub reports: Vec<(usize, ExternalityReport)>,
}

/// Picks the candidate with the smallest `H`; ties go to the lowest `β`.
pub fn comparative_advantage(candidates: &[Candidate]) -> Result<AdvantageChoice> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidateSet);
    }
    let mut reports = candidates
        .iter()
        .map(|c| Ok((c.beta, externality_metric(&c.e_split, &c.i_split, &c.selection)?)))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by_key(|(beta, _)| *beta);
    let h_min = reports.iter().map(|(_, r)| r.h).fold(f64::INFINITY, f64::min);
    let tol = TIE_TOLERANCE * h_min.abs().max(1.0);
    let mut at_min = reports.iter().filter(|(_, r)| r.h - h_min <= tol);
    let (beta, best) = at_min.next().expect("minimum is attained");
    let (beta, h) = (*beta, best.h);
    let tie = at_min.next().is_some();
    Ok(AdvantageChoice { beta, h, tie, reports })
}

/// Scheduled obsolescence: from `time` on, cost part `index` turns negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObsolescenceEvent {
    pub time: f64,
    pub index: usize,
}

/// Cost split as seen at time `t`, with every due event applied.
pub fn apply_obsolescence(e_split: &[f64], events: &[ObsolescenceEvent], t: f64) -> Result<Vec<f64>> {
    let mut out = e_split.to_vec();
    for ev in events.iter().filter(|ev| ev.time <= t) {
        let cell = out.get_mut(ev.index).ok_or(Error::IndexOutOfRange {
            index: ev.index,
            len: e_split.len(),
        })?;
        *cell = -cell.abs();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bid::validate_bistochastic;

    fn seven_functions() -> Permutation {
        Permutation::from_mapping(vec![1, 3, 5, 2, 6, 0, 4]).unwrap()
    }

    fn blocks_for(
        pattern: &BlockPattern,
        f: impl Fn(usize) -> BistochasticMatrix,
    ) -> BTreeMap<(usize, usize), BistochasticMatrix> {
        (0..pattern.functions())
            .map(|i| ((i, pattern.base().image(i)), f(i)))
            .collect()
    }

    #[test]
    fn expand_identity_of_scalars() {
        let p = BlockPattern::new(Permutation::identity(2), vec![1, 1]).unwrap();
        let b = block_expand(p.clone(), blocks_for(&p, |_| BistochasticMatrix::identity(1))).unwrap();
        assert_eq!(b.assemble(), BistochasticMatrix::identity(2));
    }

    #[test]
    fn expand_seven_functions_with_uniform_blocks() {
        let p = BlockPattern::new(seven_functions(), vec![2; 7]).unwrap();
        let b = block_expand(p.clone(), blocks_for(&p, |_| BistochasticMatrix::uniform(2))).unwrap();
        let m = b.assemble();
        assert_eq!(m.order(), 14);
        assert!(validate_bistochastic(&m.rows(), 1e-12).is_ok());
        // row group 0 sits over column group 1
        assert_eq!(m.get(0, 2), 0.5);
        assert_eq!(m.get(0, 0), 0.0);
    }

    #[test]
    fn expand_errors() {
        let p = BlockPattern::new(Permutation::identity(2), vec![1, 2]).unwrap();
        let mut blocks = blocks_for(&p, |_| BistochasticMatrix::identity(1));
        assert!(matches!(
            block_expand(p.clone(), blocks.clone()),
            Err(Error::OrderMismatch {
                row: 1,
                expected: 2,
                found: 1
            })
        ));
        blocks.remove(&(1, 1));
        assert!(matches!(
            block_expand(p.clone(), blocks.clone()),
            Err(Error::MissingBlock { row: 1 })
        ));
        blocks.insert((0, 1), BistochasticMatrix::identity(2));
        assert!(matches!(
            block_expand(p, blocks),
            Err(Error::UnexpectedBlock { row: 0, col: 1 })
        ));
    }

    #[test]
    fn unequal_orders_follow_the_permutation() {
        let p = BlockPattern::new(Permutation::reversal(2), vec![1, 3]).unwrap();
        assert_eq!(p.col_widths(), vec![3, 1]);
        assert_eq!(p.col_offsets(), vec![0, 3]);
        let b = block_expand(
            p.clone(),
            blocks_for(&p, |i| BistochasticMatrix::uniform(p.block_orders()[i])),
        )
        .unwrap();
        let m = b.assemble();
        assert_eq!(m.get(0, 3), 1.0);
        assert!(p.contains(1, 0) && !p.contains(0, 0));
    }

    #[test]
    fn block_birkhoff_identity_blocks() {
        let p = BlockPattern::new(seven_functions(), vec![2, 1, 3, 1, 2, 2, 1]).unwrap();
        let b = block_expand(
            p.clone(),
            blocks_for(&p, |i| BistochasticMatrix::identity(p.block_orders()[i])),
        )
        .unwrap();
        let d = block_birkhoff(&b).unwrap();
        assert_eq!(d.decomposition.len(), 1);
        assert_eq!(d.decomposition.terms()[0].weight, 1.0);
    }

    #[test]
    fn block_birkhoff_one_uniform_block() {
        let p = BlockPattern::new(Permutation::identity(3), vec![1, 2, 1]).unwrap();
        let b = block_expand(
            p.clone(),
            blocks_for(&p, |i| {
                if i == 1 {
                    BistochasticMatrix::uniform(2)
                } else {
                    BistochasticMatrix::identity(1)
                }
            }),
        )
        .unwrap();
        let d = block_birkhoff(&b).unwrap();
        let w: Vec<f64> = d.decomposition.terms().iter().map(|t| t.weight).collect();
        assert_eq!(w, vec![0.5, 0.5]);
        assert_eq!(d.block_reconstruction_error(&b), 0.0);
    }

    #[test]
    fn block_budget_examples() {
        let (e, i) = ([1.0, 2.0], [3.0, 4.0]);
        assert_eq!(block_budget(&e, &i, &Permutation::identity(2)).unwrap(), 11.0);
        assert_eq!(block_budget(&e, &i, &Permutation::reversal(2)).unwrap(), 10.0);
        assert_eq!(block_budget(&[0.0, 0.0], &i, &Permutation::identity(2)).unwrap(), 0.0);
        assert!(block_budget(&e, &[1.0], &Permutation::identity(2)).is_err());
    }

    #[test]
    fn splits_must_sum_to_parents() {
        assert!(SplitOperators::new(vec![vec![1.0, 2.0]], vec![vec![3.0, 4.0]], &[3.0], &[7.0]).is_ok());
        assert!(matches!(
            SplitOperators::new(vec![vec![1.0, 2.5]], vec![vec![3.0, 4.0]], &[3.0], &[7.0]),
            Err(Error::SplitNotConserved { index: 0, .. })
        ));
        // signs are free as long as the sum holds
        assert!(SplitOperators::new(vec![vec![4.0, -1.0]], vec![vec![3.0, 4.0]], &[3.0], &[7.0]).is_ok());
    }

    #[test]
    fn uniform_split_conserves() {
        let p = BlockPattern::new(Permutation::reversal(2), vec![2, 3]).unwrap();
        let s = SplitOperators::uniform(&[1.0, 3.0], &[2.0, 5.0], &p).unwrap();
        s.check_pattern(&p).unwrap();
        assert_eq!(s.e_split[1], vec![1.0; 3]);
        assert_eq!(s.i_split[0].len(), 3);
        assert!(SplitOperators::new(s.e_split.clone(), s.i_split.clone(), &[1.0, 3.0], &[2.0, 5.0]).is_ok());
    }

    #[test]
    fn technical_select_examples() {
        let a = Permutation::from_mapping(vec![0, 1, 2]).unwrap();
        let b = Permutation::from_mapping(vec![1, 2, 0]).unwrap();
        let terms = vec![a.clone(), b];
        assert_eq!(technical_select(&terms, &[0]).unwrap(), a.to_support());
        assert_eq!(technical_select(&terms, &[0, 1]).unwrap().ones(), 6);
        assert!(matches!(technical_select(&terms, &[]), Err(Error::EmptySelection)));
        assert!(technical_select(&terms, &[2]).is_err());
    }

    #[test]
    fn externality_examples() {
        let id = Permutation::identity(2).to_support();
        let r = externality_metric(&[1.0, 2.0], &[3.0, 4.0], &id).unwrap();
        assert_eq!((r.h, r.classification), (11.0, ExternalityClass::Clean));

        let r = externality_metric(&[-1.0, 4.0], &[3.0, 4.0], &id).unwrap();
        assert_eq!((r.h, r.classification), (13.0, ExternalityClass::MinorDefault));
        assert_eq!(r.negative_terms.len(), 1);
        assert_eq!(r.negative_terms[0].semantics, CellSemantics::Negligence);

        let r = externality_metric(&[-1.0, -2.0], &[1.0, 1.0], &id).unwrap();
        assert_eq!((r.h, r.classification), (-3.0, ExternalityClass::ExplicitExternality));

        let r = externality_metric(&[-3.0, 1.0], &[3.0, 4.0], &id).unwrap();
        assert_eq!((r.h, r.classification), (-5.0, ExternalityClass::MajorDefault));

        let r = externality_metric(&[2.0, 1.0], &[-1.0, 4.0], &id).unwrap();
        assert_eq!(r.negative_terms[0].semantics, CellSemantics::MaliciousThinking);
    }

    #[test]
    fn semantics_cover_every_sign() {
        assert_eq!(cell_semantics(1.0, 0.0), CellSemantics::Ignorance);
        assert_eq!(cell_semantics(0.0, 1.0), CellSemantics::Inert);
        assert_eq!(cell_semantics(-1.0, -1.0), CellSemantics::CounterintuitiveCorrection);
        assert_eq!(cell_semantics(1.0, 1.0), CellSemantics::EfficientKnowledge);
    }

    fn candidate(beta: usize, e: [f64; 2]) -> Candidate {
        Candidate {
            beta,
            e_split: e.to_vec(),
            i_split: vec![1.0, 1.0],
            selection: Permutation::identity(2).to_support(),
        }
    }

    #[test]
    fn comparative_advantage_examples() {
        let single = comparative_advantage(&[candidate(4, [1.0, 1.0])]).unwrap();
        assert_eq!((single.beta, single.tie), (4, false));

        let c = [
            candidate(1, [2.0, 3.0]),
            candidate(2, [1.0, 2.0]),
            candidate(3, [2.0, 1.0]),
        ];
        let r = comparative_advantage(&c).unwrap();
        assert_eq!((r.beta, r.h, r.tie), (2, 3.0, true));

        let mut rev = c.to_vec();
        rev.reverse();
        assert_eq!(comparative_advantage(&rev).unwrap().beta, 2);

        let mixed = [
            candidate(1, [1.0, 1.0]),
            candidate(2, [-2.0, 1.0]),
            candidate(3, [-1.0, 0.5]),
        ];
        let r = comparative_advantage(&mixed).unwrap();
        assert_eq!((r.beta, r.h, r.tie), (2, -1.0, false));

        assert!(matches!(comparative_advantage(&[]), Err(Error::EmptyCandidateSet)));
    }

    #[test]
    fn obsolescence_flips_due_parts() {
        let events = [ObsolescenceEvent { time: 2.0, index: 1 }];
        assert_eq!(apply_obsolescence(&[1.0, 2.0], &events, 1.0).unwrap(), vec![1.0, 2.0]);
        assert_eq!(apply_obsolescence(&[1.0, 2.0], &events, 2.0).unwrap(), vec![1.0, -2.0]);
        let id = Permutation::identity(2).to_support();
        let aged = apply_obsolescence(&[1.0, 2.0], &events, 3.0).unwrap();
        let r = externality_metric(&aged, &[1.0, 1.0], &id).unwrap();
        assert_eq!(r.classification, ExternalityClass::MajorDefault);
    }
}
