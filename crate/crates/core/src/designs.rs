//! Weighted subspace designs and the criteria that produce them from
//! q-polymatroids and rank-metric codes.
//!
//! Every design handed out by this module has been checked by
//! [`verify_design`], whatever produced it.
//!
//! ```
//! use qpoly::designs::{verify_design, Verification, WeightedDesign};
//! use qpoly::lattice::AmbientSpace;
//!
//! let e = AmbientSpace::binary(3);
//! let lines = e.enumerate_subspaces(2, &Default::default()).unwrap();
//! let d = WeightedDesign::unweighted(e, 1, 2, lines).unwrap();
//! // every point of the Fano plane lies on three of its lines
//! assert_eq!(verify_design(&d).unwrap(), Verification::Verified { lambda: 3.into() });
//! ```

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::charpoly::{weight_enumerator, ContractionTable};
use crate::codes::{Code, CodeError};
use crate::duality::{dual_weight_distribution, DualityError};
use crate::field::GaloisField;
use crate::gaussian::qbin;
use crate::lattice::{shared_catalog, shared_index, AmbientSpace, LatticeError, LatticeIndex, Subspace, DEFAULT_CEILING};
use crate::poly::{bigint_json, IntPoly};
use crate::qpm::{shared_chart, QPolymatroid, QpmError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Qpm(#[from] QpmError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("bad indices: {0}")]
    BadIndices(String),
    #[error("{0} is not an integer")]
    NonIntegralValue(String),
    #[error("dual design needs k <= n - t, got k = {k}, n = {n}, t = {t}")]
    DualConditionViolated { n: usize, k: usize, t: usize },
    #[error("t = {t} is not below d_M = {d_m}")]
    TNotLessThanDM { t: usize, d_m: usize },
    #[error("t = {t} is not below the minimum distance {d}")]
    TNotLessThanD { t: usize, d: usize },
    #[error("t must be positive")]
    TNotPositive,
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),
    #[error("theta^{0} = 1")]
    ThetaIsRootOfUnityRange(u32),
    #[error("rank function is not that of a q-matroid")]
    NotAQMatroid,
    #[error("block {0} does not have dimension k")]
    BlockDimension(usize),
    #[error("block {0} appears twice")]
    DuplicateBlock(usize),
    #[error("malformed design: {0}")]
    Malformed(String),
}

/// Blocks of dimension `k` in an ambient space, with integer weights.
#[derive(Debug, Clone)]
pub struct WeightedDesign {
    ambient: Arc<AmbientSpace>,
    t: usize,
    k: usize,
    blocks: Vec<Subspace>,
    weights: Vec<BigInt>,
}

impl WeightedDesign {
    pub fn new(ambient: Arc<AmbientSpace>, t: usize, k: usize, blocks: Vec<Subspace>, weights: Vec<BigInt>) -> Result<Self, DesignError> {
        if blocks.len() != weights.len() {
            return Err(DesignError::Malformed(format!("{} blocks but {} weights", blocks.len(), weights.len())));
        }
        if t > k || k > ambient.n() {
            return Err(DesignError::BadIndices(format!("need t <= k <= n, got t = {t}, k = {k}, n = {}", ambient.n())));
        }
        let mut seen = HashSet::with_capacity(blocks.len());
        for (i, b) in blocks.iter().enumerate() {
            ambient.check(b)?;
            if b.dim() != k {
                return Err(DesignError::BlockDimension(i));
            }
            if !seen.insert(b) {
                return Err(DesignError::DuplicateBlock(i));
            }
        }
        Ok(WeightedDesign { ambient, t, k, blocks, weights })
    }

    /// All weights equal to one.
    pub fn unweighted(ambient: Arc<AmbientSpace>, t: usize, k: usize, blocks: Vec<Subspace>) -> Result<Self, DesignError> {
        let weights = vec![BigInt::one(); blocks.len()];
        Self::new(ambient, t, k, blocks, weights)
    }

    /// Every `k`-space as a block, with weight one.
    pub fn complete(ambient: Arc<AmbientSpace>, t: usize, k: usize) -> Result<Self, DesignError> {
        let blocks = ambient.enumerate_subspaces(k, &Default::default())?;
        Self::unweighted(ambient, t, k, blocks)
    }

    #[must_use]
    pub fn ambient(&self) -> &Arc<AmbientSpace> {
        &self.ambient
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.ambient.n()
    }

    #[must_use]
    pub fn q(&self) -> u32 {
        self.ambient.q()
    }

    #[must_use]
    pub fn t(&self) -> usize {
        self.t
    }

    #[must_use]
    pub fn k(&self) -> usize {
        self.k
    }

    #[must_use]
    pub fn blocks(&self) -> &[Subspace] {
        &self.blocks
    }

    #[must_use]
    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The same blocks and weights read as an `i`-design.
    pub fn with_t(&self, i: usize) -> Result<Self, DesignError> {
        if i > self.k {
            return Err(DesignError::BadIndices(format!("t = {i} exceeds k = {}", self.k)));
        }
        Ok(WeightedDesign { t: i, ..self.clone() })
    }

    /// Blocks are all of the `k`-spaces.
    #[must_use]
    pub fn is_complete(&self) -> bool {
        BigInt::from(self.blocks.len()) == qbin(self.n(), self.k, u64::from(self.q()))
    }

    /// Weight of the block equal to `b`, if any.
    #[must_use]
    pub fn weight_of(&self, b: &Subspace) -> Option<&BigInt> {
        self.blocks.iter().position(|x| x == b).map(|i| &self.weights[i])
    }

    /// `{n, q, t, k, blocks, weights}`.
    #[must_use]
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "q": self.q(),
            "t": self.t,
            "k": self.k,
            "blocks": self.blocks.iter().map(|b| self.ambient.format_subspace(b)).collect::<Vec<_>>(),
            "weights": self.weights.iter().map(bigint_json).collect::<Vec<_>>(),
        })
    }

    /// Reads the layout written by [`Self::to_json`]. Missing weights default to one;
    /// weights may be JSON integers or decimal strings.
    pub fn from_json(v: &Value) -> Result<Self, DesignError> {
        let field_usize = |name: &str| -> Result<usize, DesignError> {
            v.get(name)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| DesignError::Malformed(format!("missing integer field {name:?}")))
        };
        let n = field_usize("n")?;
        let q = field_usize("q")? as u64;
        let t = field_usize("t")?;
        let k = field_usize("k")?;
        let field = GaloisField::gf(q).map_err(|e| DesignError::Malformed(e.to_string()))?;
        let ambient = AmbientSpace::new(field, n)?;
        let raw_blocks = v.get("blocks").and_then(Value::as_array).ok_or_else(|| DesignError::Malformed("missing blocks".into()))?;
        let mut blocks = Vec::with_capacity(raw_blocks.len());
        for b in raw_blocks {
            let rows: Vec<String> = b
                .as_array()
                .ok_or_else(|| DesignError::Malformed("block is not a list of rows".into()))?
                .iter()
                .map(|r| r.as_str().map(str::to_owned).ok_or_else(|| DesignError::Malformed("row is not a string".into())))
                .collect::<Result<_, _>>()?;
            blocks.push(ambient.parse_subspace(&rows)?);
        }
        let weights = match v.get("weights") {
            None | Some(Value::Null) => vec![BigInt::one(); blocks.len()],
            Some(Value::Array(ws)) => ws.iter().map(parse_bigint).collect::<Result<_, _>>()?,
            Some(_) => return Err(DesignError::Malformed("weights is not a list".into())),
        };
        Self::new(ambient, t, k, blocks, weights)
    }
}

fn parse_bigint(v: &Value) -> Result<BigInt, DesignError> {
    match v {
        Value::Number(x) => x.as_i64().map(BigInt::from).ok_or_else(|| DesignError::Malformed(format!("weight {x} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| DesignError::Malformed(format!("weight {s:?} is not an integer"))),
        other => Err(DesignError::Malformed(format!("weight {other} is not an integer"))),
    }
}

/// Outcome of [`verify_design`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Verified { lambda: BigInt },
    /// The first `t`-space, in lattice order, whose block sum differs from that of the first `t`-space.
    Counterexample { witness: Subspace, sum: BigInt, expected: BigInt },
}

impl Verification {
    #[must_use]
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified { .. })
    }

    #[must_use]
    pub fn lambda(&self) -> Option<&BigInt> {
        match self {
            Verification::Verified { lambda } => Some(lambda),
            Verification::Counterexample { .. } => None,
        }
    }

    #[must_use]
    pub fn to_json(&self, ambient: &AmbientSpace) -> Value {
        match self {
            Verification::Verified { lambda } => json!({ "verified": true, "lambda": bigint_json(lambda) }),
            Verification::Counterexample { witness, sum, expected } => json!({
                "verified": false,
                "witness": ambient.format_subspace(witness),
                "sum": bigint_json(sum),
                "expected": bigint_json(expected),
            }),
        }
    }
}

/// Images of the `j`-subspaces of `F_q^{dim b}` inside `b`.
fn subspaces_of<'a>(e: &'a AmbientSpace, b: &'a Subspace, j: usize) -> Result<impl Iterator<Item = Subspace> + 'a, LatticeError> {
    let k = b.dim();
    let cat = shared_catalog(e.q(), k)?;
    let coeff = shared_chart(e.q(), k);
    let layer: Vec<Subspace> = cat.get(j).cloned().unwrap_or_default();
    Ok(layer.into_iter().map(move |c| e.map_through(&coeff, &c, b)))
}

fn design_index(d: &WeightedDesign) -> Result<Arc<LatticeIndex>, LatticeError> {
    shared_index(d.q(), d.n(), DEFAULT_CEILING)
}

/// Sums `f(B)` over the blocks above each `t`-space and checks they agree.
pub fn verify_design(d: &WeightedDesign) -> Result<Verification, DesignError> {
    let idx = design_index(d)?;
    let range = idx.dim_range(d.t);
    let width = (range.end - range.start) as usize;
    const CHUNK: usize = 512;
    let e = d.ambient.as_ref();
    let sums = d
        .blocks
        .par_chunks(CHUNK)
        .zip(d.weights.par_chunks(CHUNK))
        .try_fold(
            || vec![BigInt::zero(); width],
            |mut acc, (bs, ws)| -> Result<Vec<BigInt>, DesignError> {
                for (b, w) in bs.iter().zip(ws) {
                    if w.is_zero() {
                        continue;
                    }
                    for s in subspaces_of(e, b, d.t)? {
                        acc[(idx.index(&s) - range.start) as usize] += w;
                    }
                }
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![BigInt::zero(); width],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    let expected = sums[0].clone();
    match sums.iter().position(|s| s != &expected) {
        None => Ok(Verification::Verified { lambda: expected }),
        Some(i) => Ok(Verification::Counterexample {
            witness: idx.unrank(range.start + i as u64),
            sum: sums[i].clone(),
            expected,
        }),
    }
}

fn exact_div(num: BigInt, den: &BigInt, what: &str) -> Result<BigInt, DesignError> {
    if den.is_zero() {
        return Err(DesignError::NonIntegralValue(format!("{what}: division by zero")));
    }
    let (quot, rem) = num.div_rem(den);
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(DesignError::NonIntegralValue(format!("{what} = {num}/{den}")))
    }
}

/// `λ_{i,j} = q^{(k-i)j} [n-i-j, k-i]_q / [n-t, k-t]_q · λ`.
pub fn intersection_number(d: &WeightedDesign, lambda: &BigInt, i: usize, j: usize) -> Result<BigInt, DesignError> {
    if i + j > d.t {
        return Err(DesignError::BadIndices(format!("i + j = {} exceeds t = {}", i + j, d.t)));
    }
    let (n, k, t, q) = (d.n(), d.k, d.t, u64::from(d.q()));
    let num = BigInt::from(q).pow((k - i) * j) * qbin(n - i - j, k - i, q) * lambda;
    exact_div(num, &qbin(n - t, k - t, q), "intersection number")
}

/// `Σ f(B)` over blocks with `I <= B` and `B ∩ J = 0`, counted block by block.
pub fn intersection_sum(d: &WeightedDesign, i_space: &Subspace, j_space: &Subspace) -> Result<BigInt, DesignError> {
    let e = &d.ambient;
    e.check(i_space)?;
    e.check(j_space)?;
    if e.sum_dim(i_space, j_space) != i_space.dim() + j_space.dim() {
        return Err(DesignError::BadIndices("I and J meet nontrivially".into()));
    }
    let mut acc = BigInt::zero();
    for (b, w) in d.blocks.iter().zip(&d.weights) {
        if e.contains(b, i_space) && e.sum_dim(b, j_space) == b.dim() + j_space.dim() {
            acc += w;
        }
    }
    Ok(acc)
}

/// `λ_i = [n-i, k-i]_q / [n-t, k-t]_q · λ`, the parameter of the design read as an `i`-design.
pub fn derived_design_lambda(d: &WeightedDesign, lambda: &BigInt, i: usize) -> Result<BigInt, DesignError> {
    if i > d.t {
        return Err(DesignError::BadIndices(format!("i = {i} exceeds t = {}", d.t)));
    }
    let (n, k, t, q) = (d.n(), d.k, d.t, u64::from(d.q()));
    exact_div(qbin(n - i, k - i, q) * lambda, &qbin(n - t, k - t, q), "derived parameter")
}

/// `λ^⊥ = [n-k, t]_q / [k, t]_q · λ`.
pub fn dual_design_lambda(d: &WeightedDesign, lambda: &BigInt) -> Result<BigInt, DesignError> {
    let (n, k, t, q) = (d.n(), d.k, d.t, u64::from(d.q()));
    if k + t > n {
        return Err(DesignError::DualConditionViolated { n, k, t });
    }
    exact_div(qbin(n - k, t, q) * lambda, &qbin(k, t, q), "dual parameter")
}

/// Blocks `B^⊥` with `f^⊥(B^⊥) = f(B)`.
pub fn dual_design(d: &WeightedDesign) -> Result<WeightedDesign, DesignError> {
    let (n, k, t) = (d.n(), d.k, d.t);
    if k + t > n {
        return Err(DesignError::DualConditionViolated { n, k, t });
    }
    let blocks = d.blocks.iter().map(|b| d.ambient.perp(b)).collect();
    WeightedDesign::new(d.ambient.clone(), t, n - k, blocks, d.weights.clone())
}

/// An evaluation point for `z`, or `z` kept as an indeterminate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Theta {
    Value(BigInt),
    Symbolic,
}

impl Theta {
    /// Rejects values with `θ^s = 1` for some `1 <= s <= r`.
    pub fn check_admissible(&self, r: u32) -> Result<(), DesignError> {
        if let Theta::Value(v) = self {
            let mut power = BigInt::one();
            for s in 1..=r {
                power *= v;
                if power.is_one() {
                    return Err(DesignError::ThetaIsRootOfUnityRange(s));
                }
            }
        }
        Ok(())
    }

    fn nonzero(&self, row: &[i128]) -> bool {
        match self {
            Theta::Symbolic => row.iter().any(|&c| c != 0),
            Theta::Value(v) => !eval_row(row, v).is_zero(),
        }
    }

    fn poly_nonzero(&self, p: &IntPoly) -> bool {
        match self {
            Theta::Symbolic => !p.is_zero(),
            Theta::Value(v) => !p.eval(v).is_zero(),
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Value(v) => write!(f, "{v}"),
            Theta::Symbolic => f.write_str("z"),
        }
    }
}

impl FromStr for Theta {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "z" | "symbolic" => Ok(Theta::Symbolic),
            other => other.parse().map(Theta::Value).map_err(|_| format!("theta must be an integer or \"z\", got {other:?}")),
        }
    }
}

impl Serialize for Theta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Theta::Value(v) => bigint_json(v).serialize(s),
            Theta::Symbolic => s.serialize_str("z"),
        }
    }
}

fn eval_row(row: &[i128], theta: &BigInt) -> BigInt {
    row.iter().rev().fold(BigInt::zero(), |acc, &c| acc * theta + c)
}

/// Which source produced a certified design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// `D_M(dim; θ)` weighted by `p(M.X; θ)`.
    ContractionBlocks { dim: usize },
    /// `D_{M*}(dim; θ)` weighted by `p(M*.X; θ)`.
    DualContractionBlocks { dim: usize },
    /// Cocircuits of one dimension, unweighted.
    Cocircuits { dim: usize },
    /// Circuits of one dimension, unweighted.
    Circuits { dim: usize },
    /// Hyperplanes of `M` of one dimension, unweighted.
    Hyperplanes { dim: usize },
    /// Hyperplanes of `M*` of one dimension, unweighted.
    DualHyperplanes { dim: usize },
    /// Supports of codewords of `C` of one rank, weighted by their number of codewords.
    CodewordSupports { dim: usize },
    /// The same for `C^⊥`.
    DualCodewordSupports { dim: usize },
    /// Supports of minimum-rank codewords of `C`, unweighted.
    MinimumWeightSupports { dim: usize },
    /// Supports of minimum-rank codewords of `C^⊥`, unweighted.
    DualMinimumWeightSupports { dim: usize },
    /// Supports of minimal codewords of `C` of one rank, unweighted.
    MinimalCodewordSupports { dim: usize },
    /// Supports of minimal codewords of `C^⊥` of one rank, unweighted.
    DualMinimalCodewordSupports { dim: usize },
}

/// A design together with where it came from and its direct verification.
#[derive(Debug, Clone)]
pub struct DesignCertificate {
    pub provenance: Provenance,
    /// Point at which the weights were evaluated.
    pub theta: BigInt,
    pub design: WeightedDesign,
    pub verification: Verification,
    /// Blocks are all subspaces of their dimension.
    pub complete: bool,
}

impl DesignCertificate {
    fn certify(provenance: Provenance, theta: BigInt, design: WeightedDesign) -> Result<Self, DesignError> {
        let verification = verify_design(&design)?;
        let complete = design.is_complete();
        Ok(DesignCertificate { provenance, theta, design, verification, complete })
    }

    #[must_use]
    pub fn lambda(&self) -> Option<&BigInt> {
        self.verification.lambda()
    }

    #[must_use]
    pub fn is_verified(&self) -> bool {
        self.verification.is_verified()
    }

    #[must_use]
    pub fn to_json(&self) -> Value {
        json!({
            "provenance": self.provenance,
            "theta": bigint_json(&self.theta),
            "blocks": self.design.len(),
            "complete": self.complete,
            "verification": self.verification.to_json(&self.design.ambient),
            "design": self.design.to_json(),
        })
    }
}

/// A `t`-space at which the vanishing transfer fails, with the offending index.
#[derive(Debug, Clone, Serialize)]
pub struct TransferFailure {
    pub space: Vec<String>,
    pub j: usize,
}

/// Outcome of checking the design criteria on a q-polymatroid.
#[derive(Debug, Clone, Serialize)]
pub struct AmReport {
    pub n: usize,
    pub q: u32,
    pub r: u32,
    pub t: usize,
    pub theta: Theta,
    pub d_m: usize,
    /// Indices `1 <= j <= n - t` with `A_{M*}(j; θ) != 0`.
    pub r_set: Vec<usize>,
    pub sigma_star: usize,
    pub sigma_condition: bool,
    /// Number of `t`-spaces examined.
    pub transfer_checked: u64,
    /// `t`-spaces where some `j <= n - t` has `A_{M*}(j) = 0` but `A_{M*/T}(j) != 0`.
    pub transfer_failures: u64,
    /// The same, restricted to `d_M <= j <= n - t`.
    pub transfer_failures_in_range: u64,
    pub first_failure: Option<TransferFailure>,
    /// `D_M(d_M; θ)` carries a weighted design, and so does `D_{M*}(j; θ)` for every admissible `j`.
    pub weighted_design_applies: bool,
    /// `D_M(j; θ)` carries a weighted design for every `d_M <= j <= n - t`.
    pub range_applies: bool,
}

/// The parameters attached to `M`, `t` and `θ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignParameters {
    pub d_m: usize,
    pub r_set: Vec<usize>,
    pub sigma_star: usize,
}

/// Which contraction polynomials select blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `p(M.X)`.
    Primal,
    /// `p(M*.X)`.
    Dual,
}

/// Contraction tables of `M` and `M*`, shared by the criteria and the certificate builders.
///
/// Designs live on the chart of `M`: blocks are chart subspaces of `F_q^{dim M}`.
pub struct DesignAnalysis {
    m: QPolymatroid,
    dual: QPolymatroid,
    table: ContractionTable,
    dual_table: ContractionTable,
}

impl DesignAnalysis {
    pub fn new(m: &QPolymatroid) -> Result<Self, DesignError> {
        let dual = m.dual();
        let table = ContractionTable::new(m)?;
        let dual_table = ContractionTable::new(&dual)?;
        Ok(DesignAnalysis { m: m.clone(), dual, table, dual_table })
    }

    #[must_use]
    pub fn qpm(&self) -> &QPolymatroid {
        &self.m
    }

    fn n(&self) -> usize {
        self.m.dim()
    }

    fn side(&self, side: Side) -> (&QPolymatroid, &ContractionTable) {
        match side {
            Side::Primal => (&self.m, &self.table),
            Side::Dual => (&self.dual, &self.dual_table),
        }
    }

    /// Smallest dimension of a cocircuit of `M` (`Primal`) or of `M*` (`Dual`).
    pub fn min_cocircuit_dim(&self, side: Side) -> Result<usize, DesignError> {
        let other = match side {
            Side::Primal => &self.dual,
            Side::Dual => &self.m,
        };
        let idx = self.table.index();
        let first = other.circuit_indices()?.first().copied().ok_or(QpmError::NoCocircuits)?;
        Ok(idx.dim_of(u64::from(first)))
    }

    /// `A_{M*}(j; z)` for `0 <= j <= n`.
    #[must_use]
    pub fn dual_enumerator(&self) -> Vec<IntPoly> {
        self.dual_table.weight_enumerator().entries
    }

    pub fn d_and_r(&self, t: usize, theta: &Theta) -> Result<DesignParameters, DesignError> {
        theta.check_admissible(self.m.r())?;
        let d_m = self.min_cocircuit_dim(Side::Primal)?;
        let a_dual = self.dual_enumerator();
        let top = self.n().saturating_sub(t);
        let r_set: Vec<usize> = (1..=top).filter(|&j| theta.poly_nonzero(&a_dual[j])).collect();
        Ok(DesignParameters { d_m, sigma_star: r_set.len(), r_set })
    }

    /// `D_M(i; θ)` (or `D_{M*}(i; θ)`) in chart coordinates, with each `p(·.X; z)` as coefficients.
    pub fn blocks_at(&self, i: usize, theta: &Theta, side: Side) -> Result<Vec<(Subspace, IntPoly)>, DesignError> {
        theta.check_admissible(self.m.r())?;
        let (_, table) = self.side(side);
        let idx = table.index();
        Ok(idx
            .dim_range(i)
            .filter_map(|x| {
                let row = table.dot_row(x);
                theta.nonzero(row).then(|| (idx.unrank(x), IntPoly::from_i128(row)))
            })
            .collect())
    }

    /// Checks `σ* <= d_M - t` and the vanishing transfer at every `t`-space.
    pub fn am_check(&self, t: usize, theta: &Theta) -> Result<AmReport, DesignError> {
        if t == 0 {
            return Err(DesignError::TNotPositive);
        }
        let params = self.d_and_r(t, theta)?;
        let d_m = params.d_m;
        if t >= d_m {
            return Err(DesignError::TNotLessThanDM { t, d_m });
        }
        let n = self.n();
        let a_dual = self.dual_enumerator();
        let vanishing: Vec<usize> = (1..=n - t).filter(|&j| !theta.poly_nonzero(&a_dual[j])).collect();
        let idx = self.table.index().clone();
        let chart = self.m.chart().clone();
        // Per t-space: the smallest failing j overall, and whether some failing j lies in d_M..=n-t.
        let outcomes: Vec<(u64, usize, bool)> = idx
            .dim_range(t)
            .into_par_iter()
            .map(|ti| -> Result<Option<(u64, usize, bool)>, DesignError> {
                let space = idx.unrank(ti);
                let local = self.dual_table.contraction_enumerator(&self.dual, &space)?;
                let bad: Vec<usize> = vanishing.iter().copied().filter(|&j| theta.poly_nonzero(&local.get(j))).collect();
                Ok(bad.first().map(|&j| (ti, j, bad.iter().any(|&j| j >= d_m))))
            })
            .filter_map(Result::transpose)
            .collect::<Result<_, _>>()?;
        let range = idx.dim_range(t);
        let transfer_failures = outcomes.len() as u64;
        let transfer_failures_in_range = outcomes.iter().filter(|o| o.2).count() as u64;
        let first_failure = outcomes.first().map(|&(ti, j, _)| TransferFailure { space: chart.format_subspace(&idx.unrank(ti)), j });
        let sigma_condition = params.sigma_star + t <= d_m;
        Ok(AmReport {
            n,
            q: self.m.q(),
            r: self.m.r(),
            t,
            theta: theta.clone(),
            d_m,
            r_set: params.r_set,
            sigma_star: params.sigma_star,
            sigma_condition,
            transfer_checked: range.end - range.start,
            transfer_failures,
            transfer_failures_in_range,
            first_failure,
            weighted_design_applies: sigma_condition && transfer_failures == 0,
            range_applies: sigma_condition && transfer_failures_in_range == 0,
        })
    }

    /// Where weights are evaluated: `θ` itself, or `q^r` for an indeterminate.
    fn evaluation_point(&self, theta: &Theta) -> BigInt {
        match theta {
            Theta::Value(v) => v.clone(),
            Theta::Symbolic => BigInt::from(self.m.q()).pow(self.m.r()),
        }
    }

    fn weighted_certificate(&self, side: Side, dim: usize, t: usize, theta: &Theta) -> Result<DesignCertificate, DesignError> {
        let at = self.evaluation_point(theta);
        let (blocks, weights): (Vec<Subspace>, Vec<BigInt>) = self.blocks_at(dim, theta, side)?.into_iter().map(|(x, p)| (x, p.eval(&at))).unzip();
        let design = WeightedDesign::new(self.m.chart().clone(), t, dim, blocks, weights)?;
        let provenance = match side {
            Side::Primal => Provenance::ContractionBlocks { dim },
            Side::Dual => Provenance::DualContractionBlocks { dim },
        };
        DesignCertificate::certify(provenance, at, design)
    }

    /// Weighted designs `D_M(j; θ)` for `d_M <= j <= n - t`, and `D_{M*}(j; θ)` for
    /// `d_{M*} <= j <= n - t` when the transfer holds for every `j`.
    ///
    /// With an indeterminate `θ`, blocks are the spaces whose contraction polynomial is
    /// nonzero and weights are evaluated at `q^r`.
    pub fn designs(&self, t: usize, theta: &Theta) -> Result<(AmReport, Vec<DesignCertificate>), DesignError> {
        let report = self.am_check(t, theta)?;
        if !report.range_applies {
            return Err(DesignError::HypothesisNotSatisfied(describe_failure(&report)));
        }
        let n = self.n();
        let mut out = Vec::new();
        for j in report.d_m..=n - t {
            out.push(self.weighted_certificate(Side::Primal, j, t, theta)?);
        }
        if report.weighted_design_applies {
            if let Ok(d_dual) = self.min_cocircuit_dim(Side::Dual) {
                for j in d_dual..=n - t {
                    out.push(self.weighted_certificate(Side::Dual, j, t, theta)?);
                }
            }
        }
        Ok((report, out))
    }

    /// Sides of the sum behind the main design criterion at one `t`-space `T` (chart coordinates):
    /// `Σ p(M.X; θ)` over `X ∈ D_M(d_M; θ)` with `T <= X`, and `A_{(M*/T)*}(d_M - t; θ)`
    /// computed from the quotient q-polymatroid itself.
    pub fn criterion_sum_sides(&self, space: &Subspace, theta: &BigInt) -> Result<(BigInt, BigInt), DesignError> {
        let t = space.dim();
        let d_m = self.min_cocircuit_dim(Side::Primal)?;
        let chart = self.m.chart();
        let lhs = self
            .blocks_at(d_m, &Theta::Value(theta.clone()), Side::Primal)?
            .iter()
            .filter(|(x, _)| chart.contains(x, space))
            .map(|(_, p)| p.eval(theta))
            .sum();
        let quotient = self.dual.contract(&self.m.frame().from_chart(space))?.dual();
        let rhs = weight_enumerator(&quotient)?.get(d_m.saturating_sub(t)).eval(theta);
        Ok((lhs, rhs))
    }
}

fn describe_failure(r: &AmReport) -> String {
    if !r.sigma_condition {
        format!("sigma* = {} exceeds d_M - t = {}", r.sigma_star, r.d_m - r.t)
    } else {
        match &r.first_failure {
            Some(f) => format!("vanishing transfer fails at {:?}, j = {}", f.space, f.j),
            None => "vanishing transfer fails".into(),
        }
    }
}

/// Largest `p` such that no subspace of dimension at most `p` contains two of `spaces`,
/// or `n` when that never happens. `spaces` must form an antichain.
#[must_use]
pub fn unique_containment_bound(e: &AmbientSpace, spaces: &[Subspace]) -> usize {
    let mut sorted: Vec<&Subspace> = spaces.iter().collect();
    sorted.sort_by_key(|s| s.dim());
    let mut best = e.n() + 1;
    for (j, b) in sorted.iter().enumerate() {
        // the join of two incomparable spaces is strictly above the larger one
        if b.dim() + 1 >= best {
            break;
        }
        for a in &sorted[..j] {
            best = best.min(e.sum_dim(a, b));
        }
    }
    best - 1
}

/// Check of the design criteria followed by every certificate it licenses.
pub fn designs_from_qpm(m: &QPolymatroid, t: usize, theta: &Theta) -> Result<(AmReport, Vec<DesignCertificate>), DesignError> {
    DesignAnalysis::new(m)?.designs(t, theta)
}

pub fn am_check(m: &QPolymatroid, t: usize, theta: &Theta) -> Result<AmReport, DesignError> {
    DesignAnalysis::new(m)?.am_check(t, theta)
}

/// Unweighted designs of a q-matroid: cocircuits and circuits of one dimension up to the
/// unique-containment bound, and the hyperplanes of `M` and `M*` of the complementary dimension.
pub fn unweighted_designs_from_qmatroid(m: &QPolymatroid, t: usize, theta: &Theta) -> Result<Vec<DesignCertificate>, DesignError> {
    if !m.is_q_matroid() {
        return Err(DesignError::NotAQMatroid);
    }
    let analysis = DesignAnalysis::new(m)?;
    let report = analysis.am_check(t, theta)?;
    if !report.weighted_design_applies {
        return Err(DesignError::HypothesisNotSatisfied(describe_failure(&report)));
    }
    let idx = analysis.table.index().clone();
    let chart = m.chart().clone();
    let n = m.dim();
    let dual = m.dual();
    let circuits: Vec<Subspace> = m.circuit_indices()?.iter().map(|&i| idx.unrank(u64::from(i))).collect();
    let cocircuits: Vec<Subspace> = dual.circuit_indices()?.iter().map(|&i| idx.unrank(u64::from(i))).collect();
    if circuits.is_empty() || cocircuits.is_empty() {
        return Err(DesignError::HypothesisNotSatisfied("needs at least one circuit and one cocircuit".into()));
    }
    let one = BigInt::one();
    let mut out = Vec::new();
    let sides: [(&[Subspace], &QPolymatroid, bool); 2] = [(&cocircuits, m, true), (&circuits, &dual, false)];
    for (spaces, hyper_of, primal) in sides {
        let low = spaces.iter().map(Subspace::dim).min().unwrap_or(0);
        let bound = unique_containment_bound(&chart, spaces);
        let mut dims: Vec<usize> = (low..=bound).map(|i| i.min(n - t)).collect();
        dims.dedup();
        if dims.is_empty() {
            continue;
        }
        let hyperplanes: Vec<Subspace> = hyper_of.hyperplanes()?.spaces.iter().map(|h| hyper_of.frame().to_chart(h)).collect::<Result<_, _>>()?;
        for dim in dims {
            let blocks: Vec<Subspace> = spaces.iter().filter(|s| s.dim() == dim).cloned().collect();
            let provenance = if primal { Provenance::Cocircuits { dim } } else { Provenance::Circuits { dim } };
            out.push(DesignCertificate::certify(provenance, one.clone(), WeightedDesign::unweighted(chart.clone(), t, dim, blocks)?)?);
            let hyper_blocks: Vec<Subspace> = hyperplanes.iter().filter(|h| h.dim() == n - dim).cloned().collect();
            let provenance = if primal { Provenance::Hyperplanes { dim: n - dim } } else { Provenance::DualHyperplanes { dim: n - dim } };
            out.push(DesignCertificate::certify(provenance, one.clone(), WeightedDesign::unweighted(chart.clone(), t, n - dim, hyper_blocks)?)?);
        }
    }
    Ok(out)
}

/// Nonzero indices `1 <= j <= n - t` of a weight distribution.
#[must_use]
pub fn weights_in_range(w: &[BigInt], n: usize, t: usize) -> Vec<usize> {
    (1..=n.saturating_sub(t)).filter(|&j| w.get(j).is_some_and(|x| !x.is_zero())).collect()
}

/// Criteria and certificates for a code and its dual.
#[derive(Debug, Clone)]
pub struct CodeReport {
    pub n: usize,
    pub t: usize,
    pub theta: BigInt,
    pub d: usize,
    pub dual_d: Option<usize>,
    pub weights: Vec<BigInt>,
    /// Obtained from `weights` through the MacWilliams transform.
    pub dual_weights: Vec<BigInt>,
    /// Ranks of nonzero dual codewords within `1..=n-t`.
    pub dual_weights_in_range: Vec<usize>,
    pub criterion_holds: bool,
    pub mrd: bool,
    pub certificates: Vec<DesignCertificate>,
}

impl CodeReport {
    #[must_use]
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "t": self.t,
            "theta": bigint_json(&self.theta),
            "d": self.d,
            "dual_d": self.dual_d,
            "weights": self.weights.iter().map(bigint_json).collect::<Vec<_>>(),
            "dual_weights": self.dual_weights.iter().map(bigint_json).collect::<Vec<_>>(),
            "dual_weights_in_range": self.dual_weights_in_range,
            "criterion_holds": self.criterion_holds,
            "mrd": self.mrd,
            "trivial": self.mrd,
            "certificates": self.certificates.iter().map(DesignCertificate::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `(q, r, rank)` of the MacWilliams transform for this kind of code.
fn transform_params(c: &Code) -> (u64, u32, i64) {
    match c {
        Code::Matrix(m) => (u64::from(m.q()), m.m() as u32, m.k() as i64),
        Code::Vector(v) => (u64::from(v.q()), 1, v.k() as i64),
    }
}

/// Support designs of a code as in [`Provenance::CodewordSupports`], one per dimension in `dims`.
fn support_certificates(
    code: &Code,
    t: usize,
    dims: impl Iterator<Item = usize>,
    make: impl Fn(usize) -> Provenance,
    theta: &BigInt,
) -> Result<Vec<DesignCertificate>, DesignError> {
    let counts = code.support_counts()?;
    let e = code.ambient().clone();
    let idx = shared_index(e.q(), e.n(), DEFAULT_CEILING)?;
    let mut by_index: Vec<(u64, &Subspace, u64)> = counts.iter().map(|(s, &c)| (idx.index(s), s, c)).collect();
    by_index.sort_unstable_by_key(|x| x.0);
    dims.map(|dim| {
        let (blocks, weights) = by_index.iter().filter(|x| x.1.dim() == dim).map(|x| (x.1.clone(), BigInt::from(x.2))).unzip();
        DesignCertificate::certify(make(dim), theta.clone(), WeightedDesign::new(e.clone(), t, dim, blocks, weights)?)
    })
    .collect()
}

/// Unweighted designs on the supports of the minimal codewords of a vector code,
/// one per dimension in `min(i, n - t)` for `d <= i <= p`; dimension `d` is the minimum-weight design.
fn minimal_support_certificates(code: &crate::codes::VectorCode, t: usize, d: usize, dual: bool) -> Result<Vec<DesignCertificate>, DesignError> {
    let n = code.n();
    let p = code.minimal_rank_bound()?;
    let mut dims: Vec<usize> = (d..=p.max(d)).map(|i| i.min(n - t)).filter(|&i| i >= d).collect();
    dims.dedup();
    let idx = shared_index(code.q(), n, DEFAULT_CEILING)?;
    let mut supports: Vec<(u64, Subspace)> = code
        .minimal_codewords(p.max(d).min(n))?
        .iter()
        .map(|x| code.support(x))
        .map(|s| (idx.index(&s), s))
        .collect();
    supports.sort_unstable_by_key(|x| x.0);
    supports.dedup_by_key(|x| x.0);
    let e = code.ambient().clone();
    let mut out = Vec::new();
    for dim in dims {
        let provenance = match (dim == d, dual) {
            (true, false) => Provenance::MinimumWeightSupports { dim },
            (true, true) => Provenance::DualMinimumWeightSupports { dim },
            (false, false) => Provenance::MinimalCodewordSupports { dim },
            (false, true) => Provenance::DualMinimalCodewordSupports { dim },
        };
        // minimum-rank words are always minimal, so that design needs no bound on p
        if dim > p && dim != d {
            continue;
        }
        let blocks: Vec<Subspace> = supports.iter().filter(|x| x.1.dim() == dim).map(|x| x.1.clone()).collect();
        out.push(DesignCertificate::certify(provenance, BigInt::one(), WeightedDesign::unweighted(e.clone(), t, dim, blocks)?)?);
    }
    Ok(out)
}

/// Screens a code by the number of distinct dual weights and, when the screen passes,
/// certifies the support designs of the code and of its dual.
pub fn am_check_code(code: &Code, t: usize) -> Result<CodeReport, DesignError> {
    if t == 0 {
        return Err(DesignError::TNotPositive);
    }
    let n = code.n();
    let d = code.minimum_distance()?.unwrap_or(0);
    if t >= d {
        return Err(DesignError::TNotLessThanD { t, d });
    }
    let theta = code.theta();
    let weights = code.weight_distribution()?;
    let (q, r, rank) = transform_params(code);
    let dual_weights = dual_weight_distribution(&weights, q, r, rank, &theta)?;
    let dual_d = (1..=n).find(|&j| !dual_weights[j].is_zero());
    let dual_weights_in_range = weights_in_range(&dual_weights, n, t);
    let criterion_holds = dual_weights_in_range.len() + t <= d;
    let mrd = code.is_mrd()?;
    let mut certificates = Vec::new();
    if criterion_holds {
        certificates.extend(support_certificates(code, t, d..=n - t, |dim| Provenance::CodewordSupports { dim }, &theta)?);
        if let Some(dd) = dual_d {
            certificates.extend(support_certificates(&code.dual(), t, dd..=n - t, |dim| Provenance::DualCodewordSupports { dim }, &theta)?);
        }
        if let Code::Vector(v) = code {
            certificates.extend(minimal_support_certificates(v, t, d, false)?);
            if let Some(dd) = dual_d.filter(|&dd| dd > t) {
                certificates.extend(minimal_support_certificates(&v.dual(), t, dd, true)?);
            }
        }
    }
    Ok(CodeReport { n, t, theta, d, dual_d, weights, dual_weights, dual_weights_in_range, criterion_holds, mrd, certificates })
}
