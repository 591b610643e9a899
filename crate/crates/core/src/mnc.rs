//! Measures of non-compactness on symbolic subsets of `c₀`.
//!
//! Finite sets are always compact, so the interesting values come from
//! infinite families. Sets are therefore carried as descriptors
//! ([`SetFamily`]) and measured structurally. The Hausdorff measure uses
//!
//! ```text
//! χ(X) = lim_k sup_{x∈X} sup_{l≥k} |x_l|
//! ```
//!
//! and the sup-norm measure `μ(X) = sup_{x∈X} ‖x‖` is kept as the example of
//! a sublinear measure without the singleton property.

use std::fmt;

use serde::Serialize;

use crate::error::{FracError, Result};
use crate::frac::{rl_integral, FracOrder, SampledPath, StateVec};

const CHECK_TOL: f64 = 1e-12;

/// Closed-form coefficient rule `c_j`, `j ≥ 1`, for a scaled basis family.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffRule {
    /// `c_j = c`
    Constant(f64),
    /// `c_j = scale / j^exponent`, `exponent > 0`
    InversePower { scale: f64, exponent: f64 },
    /// `c_j = scale · ratio^{j−1}`, `|ratio| ≤ 1`
    Geometric { scale: f64, ratio: f64 },
    /// `c_j = pattern[(j−1) mod len]`
    Periodic(Vec<f64>),
}

impl CoeffRule {
    fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        let ok = match self {
            CoeffRule::Constant(c) => finite(*c),
            CoeffRule::InversePower { scale, exponent } => finite(*scale) && *exponent > 0.0,
            CoeffRule::Geometric { scale, ratio } => finite(*scale) && ratio.abs() <= 1.0,
            CoeffRule::Periodic(p) => !p.is_empty() && p.iter().all(|v| finite(*v)),
        };
        if ok {
            Ok(())
        } else {
            Err(FracError::Domain(format!(
                "coefficient rule {self:?} does not describe a bounded sequence"
            )))
        }
    }

    pub fn value(&self, j: usize) -> f64 {
        assert!(j >= 1, "coefficients are 1-based");
        match self {
            CoeffRule::Constant(c) => *c,
            CoeffRule::InversePower { scale, exponent } => scale / (j as f64).powf(*exponent),
            CoeffRule::Geometric { scale, ratio } => scale * ratio.powi(j as i32 - 1),
            CoeffRule::Periodic(p) => p[(j - 1) % p.len()],
        }
    }

    /// `limsup_j |c_j|`.
    pub fn limsup_abs(&self) -> f64 {
        match self {
            CoeffRule::Constant(c) => c.abs(),
            CoeffRule::InversePower { .. } => 0.0,
            CoeffRule::Geometric { scale, ratio } => {
                if ratio.abs() < 1.0 {
                    0.0
                } else {
                    scale.abs()
                }
            }
            CoeffRule::Periodic(p) => p.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    /// `sup_j |c_j|`.
    pub fn sup_abs(&self) -> f64 {
        match self {
            CoeffRule::Constant(c) => c.abs(),
            CoeffRule::InversePower { scale, .. } | CoeffRule::Geometric { scale, .. } => {
                scale.abs()
            }
            CoeffRule::Periodic(p) => p.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}

impl fmt::Display for CoeffRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRule::Constant(c) => write!(f, "{c}"),
            CoeffRule::InversePower { scale, exponent } => write!(f, "{scale}/j^{exponent}"),
            CoeffRule::Geometric { scale, ratio } => write!(f, "{scale}*({ratio})^(j-1)"),
            CoeffRule::Periodic(p) => write!(f, "periodic{p:?}"),
        }
    }
}

/// A non-empty bounded subset of `c₀` given by a descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum SetFamily {
    Finite(Vec<StateVec>),
    Singleton(StateVec),
    /// `{c_j·e_j : j ≥ 1}`
    ScaledBasis(CoeffRule),
    /// `X + v`
    Translate(Box<SetFamily>, StateVec),
    /// `λX`
    Scale(Box<SetFamily>, f64),
    /// `X + Y`
    MinkowskiSum(Box<SetFamily>, Box<SetFamily>),
    /// `λX + (1−λ)Y`, `λ ∈ [0, 1]`
    ConvexPair {
        lambda: f64,
        x: Box<SetFamily>,
        y: Box<SetFamily>,
    },
}

impl SetFamily {
    pub fn finite(members: Vec<StateVec>) -> Result<Self> {
        if members.is_empty() {
            return Err(FracError::Domain("a set family must be non-empty".into()));
        }
        Ok(SetFamily::Finite(members))
    }

    pub fn singleton(x: StateVec) -> Self {
        SetFamily::Singleton(x)
    }

    pub fn scaled_basis(rule: CoeffRule) -> Result<Self> {
        rule.validate()?;
        Ok(SetFamily::ScaledBasis(rule))
    }

    /// The unit basis `{e_j}`.
    pub fn unit_basis() -> Self {
        SetFamily::ScaledBasis(CoeffRule::Constant(1.0))
    }

    pub fn translate(self, offset: StateVec) -> Self {
        SetFamily::Translate(Box::new(self), offset)
    }

    pub fn scale(self, factor: f64) -> Self {
        SetFamily::Scale(Box::new(self), factor)
    }

    pub fn sum(self, other: SetFamily) -> Self {
        SetFamily::MinkowskiSum(Box::new(self), Box::new(other))
    }

    pub fn convex_pair(lambda: f64, x: SetFamily, y: SetFamily) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(FracError::Domain(format!(
                "convex weight must lie in [0,1], got {lambda}"
            )));
        }
        Ok(SetFamily::ConvexPair {
            lambda,
            x: Box::new(x),
            y: Box::new(y),
        })
    }

    /// Explicit members, when the family is finite.
    pub fn members(&self) -> Option<Vec<StateVec>> {
        match self {
            SetFamily::Finite(m) => Some(m.clone()),
            SetFamily::Singleton(x) => Some(vec![x.clone()]),
            SetFamily::Translate(b, v) => {
                Some(b.members()?.into_iter().map(|x| x.plus(v)).collect())
            }
            SetFamily::Scale(b, l) => Some(b.members()?.into_iter().map(|x| x.scaled(*l)).collect()),
            SetFamily::MinkowskiSum(x, y) => {
                let (xs, ys) = (x.members()?, y.members()?);
                Some(
                    xs.iter()
                        .flat_map(|a| ys.iter().map(move |b| a.plus(b)))
                        .collect(),
                )
            }
            SetFamily::ConvexPair { lambda, x, y } => {
                let (xs, ys) = (x.members()?, y.members()?);
                Some(
                    xs.iter()
                        .flat_map(|a| ys.iter().map(move |b| a.scaled(*lambda).plus(&b.scaled(1.0 - lambda))))
                        .collect(),
                )
            }
            SetFamily::ScaledBasis(_) => None,
        }
    }

    /// Structural relative compactness.
    pub fn is_relatively_compact(&self) -> bool {
        match self {
            SetFamily::Finite(_) | SetFamily::Singleton(_) => true,
            SetFamily::ScaledBasis(rule) => rule.limsup_abs() == 0.0,
            SetFamily::Translate(b, _) => b.is_relatively_compact(),
            SetFamily::Scale(b, l) => *l == 0.0 || b.is_relatively_compact(),
            SetFamily::MinkowskiSum(x, y) => x.is_relatively_compact() && y.is_relatively_compact(),
            SetFamily::ConvexPair { lambda, x, y } => {
                (*lambda == 0.0 || x.is_relatively_compact())
                    && (*lambda == 1.0 || y.is_relatively_compact())
            }
        }
    }

    /// Whether `x ∈ self` can be decided from the descriptor.
    pub fn contains_point(&self, x: &StateVec) -> Option<bool> {
        match self {
            SetFamily::Finite(m) => Some(m.iter().any(|y| y.same_sequence(x))),
            SetFamily::Singleton(y) => Some(y.same_sequence(x)),
            SetFamily::ScaledBasis(rule) => {
                if x.tail_env() != 0.0 {
                    return Some(false);
                }
                let nonzero: Vec<usize> = x
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(i, _)| i + 1)
                    .collect();
                match nonzero.as_slice() {
                    [j] => Some(rule.value(*j) == x.component(*j)),
                    // the zero vector is a member iff some c_j vanishes; undecided in general
                    [] => None,
                    _ => Some(false),
                }
            }
            SetFamily::Translate(b, v) => b.contains_point(&x.minus(v)),
            SetFamily::Scale(b, l) => {
                if *l == 0.0 {
                    Some(x.sup_norm() == 0.0)
                } else {
                    b.contains_point(&x.scaled(1.0 / l))
                }
            }
            SetFamily::MinkowskiSum(..) | SetFamily::ConvexPair { .. } => None,
        }
    }

    /// `self ⊆ other`, when the descriptors make it evident.
    pub fn structurally_included_in(&self, other: &SetFamily) -> bool {
        if self == other {
            return true;
        }
        if let Some(members) = self.members() {
            if members
                .iter()
                .all(|x| other.contains_point(x) == Some(true))
            {
                return true;
            }
        }
        let zero = StateVec::zeros(1);
        match (self, other) {
            (_, SetFamily::MinkowskiSum(a, b)) => {
                (self.structurally_included_in(a) && b.contains_point(&zero) == Some(true))
                    || (self.structurally_included_in(b) && a.contains_point(&zero) == Some(true))
            }
            (SetFamily::Translate(a, v), SetFamily::Translate(b, w)) => {
                v.same_sequence(w) && a.structurally_included_in(b)
            }
            (SetFamily::Scale(a, l), SetFamily::Scale(b, m)) => l == m && a.structurally_included_in(b),
            _ => false,
        }
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vec = |v: &StateVec| format!("{:?}", v.entries());
        match self {
            SetFamily::Finite(m) => {
                let items: Vec<String> = m.iter().map(vec).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
            SetFamily::Singleton(x) => write!(f, "{{{}}}", vec(x)),
            SetFamily::ScaledBasis(r) => write!(f, "{{c_j e_j : c_j = {r}}}"),
            SetFamily::Translate(b, v) => write!(f, "({b} + {})", vec(v)),
            SetFamily::Scale(b, l) => write!(f, "{l}*{b}"),
            SetFamily::MinkowskiSum(x, y) => write!(f, "({x} + {y})"),
            SetFamily::ConvexPair { lambda, x, y } => {
                write!(f, "({lambda}*{x} + {}*{y})", 1.0 - lambda)
            }
        }
    }
}

/// A measured value; `upper_bound` marks results that only bound the measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureValue {
    pub value: f64,
    pub upper_bound: bool,
}

impl MeasureValue {
    fn exact(value: f64) -> Self {
        Self {
            value,
            upper_bound: false,
        }
    }

    fn is_exact_zero(&self) -> bool {
        self.value == 0.0 && !self.upper_bound
    }
}

pub trait SetMeasure: Sync {
    fn name(&self) -> &'static str;
    fn measure(&self, x: &SetFamily) -> Result<MeasureValue>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HausdorffC0;

#[derive(Debug, Clone, Copy, Default)]
pub struct SupNormMeasure;

fn require_c0(x: &StateVec) -> Result<()> {
    if x.tail_vanishes() {
        Ok(())
    } else {
        Err(FracError::NotInC0(format!(
            "element {:?} does not declare a vanishing tail",
            x.entries()
        )))
    }
}

impl SetMeasure for HausdorffC0 {
    fn name(&self) -> &'static str {
        "hausdorff_c0"
    }

    fn measure(&self, x: &SetFamily) -> Result<MeasureValue> {
        hausdorff_c0(x)
    }
}

impl SetMeasure for SupNormMeasure {
    fn name(&self) -> &'static str {
        "sup_norm_measure"
    }

    fn measure(&self, x: &SetFamily) -> Result<MeasureValue> {
        Ok(sup_norm_measure(x))
    }
}

/// Hausdorff measure of non-compactness in `c₀`, evaluated structurally.
///
/// Minkowski sums of two non-compact parts are only bounded (subadditivity);
/// the result is then flagged `upper_bound`.
pub fn hausdorff_c0(x: &SetFamily) -> Result<MeasureValue> {
    Ok(match x {
        SetFamily::Finite(m) => {
            for v in m {
                require_c0(v)?;
            }
            MeasureValue::exact(0.0)
        }
        SetFamily::Singleton(v) => {
            require_c0(v)?;
            MeasureValue::exact(0.0)
        }
        SetFamily::ScaledBasis(rule) => MeasureValue::exact(rule.limsup_abs()),
        SetFamily::Translate(b, v) => {
            require_c0(v)?;
            hausdorff_c0(b)?
        }
        SetFamily::Scale(b, l) => {
            let m = hausdorff_c0(b)?;
            if *l == 0.0 {
                MeasureValue::exact(0.0)
            } else {
                MeasureValue {
                    value: l.abs() * m.value,
                    upper_bound: m.upper_bound,
                }
            }
        }
        SetFamily::MinkowskiSum(a, b) => combine_sum(hausdorff_c0(a)?, hausdorff_c0(b)?),
        SetFamily::ConvexPair { lambda, x, y } => hausdorff_c0(&convex_as_sum(*lambda, x, y))?,
    })
}

// χ(X + K) = χ(X) for compact K; otherwise only subadditivity is available
fn combine_sum(a: MeasureValue, b: MeasureValue) -> MeasureValue {
    if a.is_exact_zero() {
        b
    } else if b.is_exact_zero() {
        a
    } else {
        MeasureValue {
            value: a.value + b.value,
            upper_bound: true,
        }
    }
}

fn convex_as_sum(lambda: f64, x: &SetFamily, y: &SetFamily) -> SetFamily {
    x.clone().scale(lambda).sum(y.clone().scale(1.0 - lambda))
}

/// `sup_{x∈X} ‖x‖`.
pub fn sup_norm_measure(x: &SetFamily) -> MeasureValue {
    if let Some(members) = x.members() {
        return MeasureValue::exact(members.iter().fold(0.0, |m, v| m.max(v.sup_norm())));
    }
    match x {
        SetFamily::ScaledBasis(rule) => MeasureValue::exact(rule.sup_abs()),
        SetFamily::Translate(b, v) => {
            let m = sup_norm_measure(b);
            if v.sup_norm() == 0.0 {
                m
            } else {
                MeasureValue {
                    value: m.value + v.sup_norm(),
                    upper_bound: true,
                }
            }
        }
        SetFamily::Scale(b, l) => {
            let m = sup_norm_measure(b);
            if *l == 0.0 {
                MeasureValue::exact(0.0)
            } else {
                MeasureValue {
                    value: l.abs() * m.value,
                    upper_bound: m.upper_bound,
                }
            }
        }
        SetFamily::MinkowskiSum(a, b) => combine_sum(sup_norm_measure(a), sup_norm_measure(b)),
        SetFamily::ConvexPair { lambda, x, y } => sup_norm_measure(&convex_as_sum(*lambda, x, y)),
        SetFamily::Finite(_) | SetFamily::Singleton(_) => unreachable!("handled via members"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// kernel non-empty and made of relatively compact sets
    Kernel,
    /// `X ⊆ Y ⇒ μ(X) ≤ μ(Y)`
    Monotonicity,
    /// `μ(λX + (1−λ)Y) ≤ λμ(X) + (1−λ)μ(Y)`
    Convexity,
    /// `μ(λX) = |λ|μ(X)`
    Homogeneity,
    /// `μ(X + Y) ≤ μ(X) + μ(Y)`
    Subadditivity,
    /// `μ({x}) = 0`
    Singleton,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub passed: bool,
    pub checks: usize,
    /// Comparisons left undecided because an operand was only an upper bound.
    pub skipped: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub measure: String,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn result(&self, axiom: Axiom) -> &AxiomResult {
        self.results
            .iter()
            .find(|r| r.axiom == axiom)
            .expect("every axiom is reported")
    }

    pub fn failed(&self) -> Vec<Axiom> {
        self.results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.axiom)
            .collect()
    }
}

struct Tally {
    axiom: Axiom,
    checks: usize,
    skipped: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(axiom: Axiom) -> Self {
        Self {
            axiom,
            checks: 0,
            skipped: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> AxiomResult {
        AxiomResult {
            axiom: self.axiom,
            passed: self.witness.is_none(),
            checks: self.checks,
            skipped: self.skipped,
            witness: self.witness,
        }
    }
}

const CONVEX_WEIGHTS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const SCALARS: [f64; 5] = [-2.0, -0.5, 0.0, 0.5, 3.0];

/// Checks monotonicity, convexity, homogeneity, subadditivity, the singleton
/// property and the kernel axiom over every applicable combination of the
/// supplied families. Evaluation errors count as failures.
pub fn axiom_suite(measure: &dyn SetMeasure, families: &[SetFamily]) -> Result<AxiomReport> {
    if families.is_empty() {
        return Err(FracError::Domain("axiom suite needs at least one family".into()));
    }
    let mu = |x: &SetFamily| measure.measure(x);
    let values: Vec<MeasureValue> = families.iter().map(&mu).collect::<Result<_>>()?;

    let mut kernel = Tally::new(Axiom::Kernel);
    let kernel_members: Vec<&SetFamily> = families
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_exact_zero())
        .map(|(f, _)| f)
        .collect();
    kernel.record(!kernel_members.is_empty(), || "kernel is empty".into());
    for f in &kernel_members {
        kernel.record(f.is_relatively_compact(), || {
            format!("{f} has measure 0 but is not relatively compact")
        });
    }

    let mut mono = Tally::new(Axiom::Monotonicity);
    let pad = SetFamily::Finite(vec![StateVec::zeros(1), StateVec::basis(1, 1)]);
    for (i, x) in families.iter().enumerate() {
        let mut supersets: Vec<SetFamily> = families
            .iter()
            .enumerate()
            .filter(|(j, y)| *j != i && x.structurally_included_in(y))
            .map(|(_, y)| y.clone())
            .collect();
        supersets.push(x.clone().sum(pad.clone()));
        for y in supersets {
            let (mx, my) = (values[i], mu(&y)?);
            if mx.upper_bound {
                mono.skipped += 1;
                continue;
            }
            mono.record(mx.value <= my.value + CHECK_TOL, || {
                format!("{x} ⊆ {y} but {} > {}", mx.value, my.value)
            });
        }
    }

    let mut convex = Tally::new(Axiom::Convexity);
    let mut subadd = Tally::new(Axiom::Subadditivity);
    for (i, x) in families.iter().enumerate() {
        for (j, y) in families.iter().enumerate() {
            let (mx, my) = (values[i], values[j]);
            let rhs_exact = !mx.upper_bound && !my.upper_bound;
            for &lambda in &CONVEX_WEIGHTS {
                let lhs = mu(&SetFamily::convex_pair(lambda, x.clone(), y.clone())?)?;
                let rhs = lambda * mx.value + (1.0 - lambda) * my.value;
                if !rhs_exact || (lhs.upper_bound && lhs.value > rhs + CHECK_TOL) {
                    convex.skipped += 1;
                    continue;
                }
                convex.record(lhs.value <= rhs + CHECK_TOL, || {
                    format!("lambda = {lambda}: mu({lambda}X + (1-lambda)Y) = {} > {rhs} for X = {x}, Y = {y}", lhs.value)
                });
            }
            let lhs = mu(&x.clone().sum(y.clone()))?;
            let rhs = mx.value + my.value;
            if !rhs_exact || (lhs.upper_bound && lhs.value > rhs + CHECK_TOL) {
                subadd.skipped += 1;
                continue;
            }
            subadd.record(lhs.value <= rhs + CHECK_TOL, || {
                format!("mu(X + Y) = {} > {rhs} for X = {x}, Y = {y}", lhs.value)
            });
        }
    }

    let mut homog = Tally::new(Axiom::Homogeneity);
    for (x, mx) in families.iter().zip(&values) {
        for &l in &SCALARS {
            let lhs = mu(&x.clone().scale(l))?;
            let rhs = l.abs() * mx.value;
            homog.record((lhs.value - rhs).abs() <= CHECK_TOL * (1.0 + rhs), || {
                format!("mu({l}X) = {} but |{l}|mu(X) = {rhs} for X = {x}", lhs.value)
            });
        }
    }

    let mut single = Tally::new(Axiom::Singleton);
    let mut points: Vec<StateVec> = Vec::new();
    for f in families {
        match f {
            SetFamily::Singleton(x) => points.push(x.clone()),
            SetFamily::Finite(m) => points.extend(m.iter().cloned()),
            _ => {}
        }
    }
    for x in points {
        let s = SetFamily::Singleton(x);
        let m = mu(&s)?;
        single.record(m.value == 0.0, || format!("mu({s}) = {} != 0", m.value));
    }

    Ok(AxiomReport {
        measure: measure.name().to_string(),
        results: vec![
            kernel.finish(),
            mono.finish(),
            convex.finish(),
            homog.finish(),
            subadd.finish(),
            single.finish(),
        ],
    })
}

/// Ten representative families: finite sets, singletons, scaled bases with
/// every coefficient rule, and their translates, scalings and sums.
pub fn stock_corpus() -> Vec<SetFamily> {
    let e = |j: usize| StateVec::basis(j, 1);
    vec![
        SetFamily::Singleton(StateVec::new(vec![3.0, -1.0, 0.5])),
        SetFamily::Finite(vec![StateVec::zeros(1)]),
        SetFamily::Finite(vec![e(1), e(2), e(5)]),
        SetFamily::unit_basis(),
        SetFamily::ScaledBasis(CoeffRule::InversePower {
            scale: 1.0,
            exponent: 1.0,
        }),
        SetFamily::ScaledBasis(CoeffRule::Geometric {
            scale: 2.0,
            ratio: 0.5,
        }),
        SetFamily::ScaledBasis(CoeffRule::Periodic(vec![1.0, -3.0])),
        SetFamily::unit_basis().translate(StateVec::new(vec![1.0, 2.0])),
        SetFamily::unit_basis().scale(-2.5),
        SetFamily::unit_basis().sum(SetFamily::Finite(vec![
            StateVec::zeros(1),
            StateVec::new(vec![0.5, 0.25]),
        ])),
    ]
}

/// Bounded family of continuous paths sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub enum PathFamily {
    /// `{g(·)·x : x ∈ set}` for a scalar path `g`.
    Parametric { g: SampledPath, set: SetFamily },
    Explicit(Vec<SampledPath>),
}

impl PathFamily {
    pub fn parametric(g: SampledPath, set: SetFamily) -> Result<Self> {
        if g.dim() != 1 {
            return Err(FracError::Contract(
                "parametric families need a scalar profile g".into(),
            ));
        }
        Ok(PathFamily::Parametric { g, set })
    }

    pub fn explicit(members: Vec<SampledPath>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| FracError::Domain("a path family must be non-empty".into()))?;
        for m in &members[1..] {
            first.ensure_same_grid(m)?;
        }
        Ok(PathFamily::Explicit(members))
    }

    fn grid_len(&self) -> usize {
        match self {
            PathFamily::Parametric { g, .. } => g.grid().len(),
            PathFamily::Explicit(m) => m[0].grid().len(),
        }
    }

    /// The section `X(t_j)` as a set family.
    pub fn section(&self, j: usize) -> SetFamily {
        match self {
            PathFamily::Parametric { g, set } => set.clone().scale(g.values()[j].first()),
            PathFamily::Explicit(m) => SetFamily::Finite(m.iter().map(|p| p.values()[j].clone()).collect()),
        }
    }

    // sup over members and node pairs at most `k` steps apart of ‖x(t) − x(s)‖
    fn modulus(&self, k: usize) -> f64 {
        match self {
            PathFamily::Parametric { g, set } => {
                let gv = g.scalar_values();
                let mut w: f64 = 0.0;
                for d in 1..=k {
                    for j in d..gv.len() {
                        w = w.max((gv[j] - gv[j - d]).abs());
                    }
                }
                w * sup_norm_measure(set).value
            }
            PathFamily::Explicit(members) => {
                let mut w: f64 = 0.0;
                for p in members {
                    let v = p.values();
                    for d in 1..=k {
                        for j in d..v.len() {
                            w = w.max(v[j].dist(&v[j - d]));
                        }
                    }
                }
                w
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathMeasure {
    /// Equicontinuity modulus extrapolated to zero scale.
    pub modulus: f64,
    /// `sup_t μ(X(t))` over the nodes.
    pub section_sup: f64,
    pub value: f64,
}

/// Discrete analogue of `lim_ε sup_x ω(x, ε) + sup_t μ(X(t))`.
///
/// The modulus is measured at one and two grid steps and extrapolated
/// linearly to zero, clamped at 0.
pub fn path_mnc(x: &PathFamily, base: &dyn SetMeasure) -> Result<PathMeasure> {
    let n = x.grid_len();
    if n < 3 {
        return Err(FracError::GridTooSmall {
            nodes: n,
            required: 3,
        });
    }
    let (w1, w2) = (x.modulus(1), x.modulus(2));
    let modulus = (2.0 * w1 - w2).max(0.0);
    let mut section_sup: f64 = 0.0;
    for j in 0..n {
        section_sup = section_sup.max(base.measure(&x.section(j))?.value);
    }
    Ok(PathMeasure {
        modulus,
        section_sup,
        value: modulus + section_sup,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub const KERNEL_CHECK_TOL: f64 = 1e-9;

/// Both sides of the singular-kernel inequality for a parametric family at
/// node `t`, with the kernel normalized by `1/Γ(α)` (both sides scale alike):
///
/// ```text
/// lhs = χ({J^α u(t) : u ∈ X}) = |J^α g(t)|·χ(S)
/// rhs = J^α[χ(X(·))](t)       = J^α|g|(t)·χ(S)
/// ```
pub fn kernel_integral_check(x: &PathFamily, alpha: FracOrder, t: f64) -> Result<KernelCheck> {
    let PathFamily::Parametric { g, set } = x else {
        return Err(FracError::Refused(
            "kernel inequality is only computable for parametric families g(t)·S".into(),
        ));
    };
    let grid = g.grid();
    let pos = (t - grid.start()) / grid.step();
    let j = pos.round();
    if (pos - j).abs() > 1e-9 || j < 0.0 || j as usize > grid.n_steps() {
        return Err(FracError::Contract(format!("t = {t} is not a grid node")));
    }
    let j = j as usize;
    let chi = hausdorff_c0(set)?.value;
    let jg = rl_integral(g, alpha).values()[j].first();
    let abs_g = g.map(|_, v| StateVec::scalar(v.first().abs()));
    let jabs = rl_integral(&abs_g, alpha).values()[j].first();
    let lhs = jg.abs() * chi;
    let rhs = jabs * chi;
    Ok(KernelCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + KERNEL_CHECK_TOL,
    })
}
