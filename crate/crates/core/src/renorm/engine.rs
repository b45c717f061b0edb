//! Order-by-order expansion, secular-term extraction and the
//! renormalization equations `DA(m) = eps G(A, m)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ampseq::{monomial_value, AmpSeq, Monomial, Series};
use crate::error::{Error, Result};
use crate::lindiff::{char_roots, particular_with_roots, LinearRecurrence, RootSet};
use crate::seqalg::{ExpBinomSeq, Scalar};

/// Largest amplitude magnitude tolerated while iterating a nonlinear system.
pub const AMPLITUDE_GUARD: f64 = 1e6;

/// An integration constant attached to one homogeneous mode `mode^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplitude<S> {
    pub name: String,
    pub mode: S,
    /// Index of the amplitude constrained to be this one's conjugate.
    pub conjugate: Option<usize>,
}

/// `M` in `N(y) = eps M(y)`, acting on truncated series.
pub type ForcingFn<S> = Box<dyn Fn(&Series<S>) -> Result<Series<S>> + Send + Sync>;

/// `N(y) = eps M(y)` with `N` linear, constant-coefficient and `M` given as
/// a series map. For homotopy problems `eps` is set to 1 on assembly.
pub struct PerturbationProblem<S> {
    operator: LinearRecurrence<S>,
    roots: RootSet<S>,
    amplitudes: Vec<Amplitude<S>>,
    forcing: ForcingFn<S>,
    homotopy: bool,
}

impl<S: Scalar> std::fmt::Debug for PerturbationProblem<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PerturbationProblem")
            .field("operator", &self.operator)
            .field("amplitudes", &self.amplitudes)
            .field("homotopy", &self.homotopy)
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> PerturbationProblem<S> {
    /// Every characteristic root of `operator` must be simple and carry
    /// exactly one named amplitude.
    pub fn new(
        operator: LinearRecurrence<S>,
        amplitudes: Vec<(&str, S)>,
        forcing: ForcingFn<S>,
    ) -> Result<Self> {
        let roots = char_roots(&operator)?;
        if let Some((r, _)) = roots.roots.iter().find(|(_, mu)| *mu > 1) {
            return Err(Error::NotAHomogeneousMode {
                mode: format!("{:?}", r.to_c64()),
            });
        }
        for (_, mode) in &amplitudes {
            if roots.multiplicity_of(mode) != 1 {
                return Err(Error::NotAHomogeneousMode {
                    mode: format!("{:?}", mode.to_c64()),
                });
            }
        }
        if amplitudes.len() != roots.roots.len() {
            return Err(Error::Unsupported(format!(
                "{} amplitudes for {} characteristic roots",
                amplitudes.len(),
                roots.roots.len()
            )));
        }
        Ok(PerturbationProblem {
            operator,
            roots,
            amplitudes: amplitudes
                .into_iter()
                .map(|(name, mode)| Amplitude {
                    name: name.to_string(),
                    mode,
                    conjugate: None,
                })
                .collect(),
            forcing,
            homotopy: false,
        })
    }

    /// Links amplitudes `i` and `j` as a conjugate pair.
    pub fn with_conjugates(mut self, i: usize, j: usize) -> Self {
        self.amplitudes[i].conjugate = Some(j);
        self.amplitudes[j].conjugate = Some(i);
        self
    }

    pub fn homotopic(mut self) -> Self {
        self.homotopy = true;
        self
    }

    pub fn operator(&self) -> &LinearRecurrence<S> {
        &self.operator
    }

    pub fn amplitudes(&self) -> &[Amplitude<S>] {
        &self.amplitudes
    }

    pub fn is_homotopy(&self) -> bool {
        self.homotopy
    }

    pub fn forcing(&self, y: &Series<S>) -> Result<Series<S>> {
        (self.forcing)(y)
    }
}

/// Applies a constant-coefficient operator to every order of a series.
pub fn apply_operator<S: Scalar>(op: &LinearRecurrence<S>, y: &Series<S>) -> Result<Series<S>> {
    let mut out = y.scale(op.coeff_at_shift(0));
    for j in 1..=op.order() {
        out = out.add(&y.shift(j as i64).scale(op.coeff_at_shift(j)))?;
    }
    Ok(out)
}

/// Per-order solutions `y_0, ..., y_K` about anchor `m`, with the secular
/// terms retained.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSolution<S> {
    pub anchor: i64,
    pub orders: Vec<AmpSeq<S>>,
    /// `forcings[k-1]` is the right-hand side of the order-`k` equation.
    pub forcings: Vec<AmpSeq<S>>,
    pub amplitudes: Vec<Amplitude<S>>,
    /// First-order operator coefficient `c_1` when the operator has order 1.
    first_order_lead: Option<S>,
    pub homotopy: bool,
}

impl<S: Scalar> PerturbationSolution<S> {
    pub fn order(&self) -> usize {
        self.orders.len() - 1
    }

    /// Parameter value used when summing orders: 1 for homotopy problems.
    pub fn effective_epsilon(&self, eps: &S) -> S {
        if self.homotopy {
            S::one()
        } else {
            eps.clone()
        }
    }
}

/// Solves `N(y_0) = 0` with symbolic amplitudes, then
/// `N(y_k) = [eps^(k-1)] M(y_0 + ... )` for `k = 1..=order`. Homogeneous
/// constants of orders `k >= 1` are set to zero.
pub fn perturb_expand<S: Scalar>(
    problem: &PerturbationProblem<S>,
    order: usize,
    anchor: i64,
) -> Result<PerturbationSolution<S>> {
    if order == 0 {
        return Err(Error::Unsupported("expansion order must be at least 1".into()));
    }
    let arity = problem.amplitudes.len();
    let mut y0 = AmpSeq::zero(arity, anchor);
    for (j, amp) in problem.amplitudes.iter().enumerate() {
        y0 = y0.add(&AmpSeq::amplitude(arity, j, amp.mode.clone(), anchor)?)?;
    }
    let mut orders = vec![y0];
    let mut forcings = Vec::with_capacity(order);
    for k in 1..=order {
        let rhs = problem.forcing(&Series::new(orders.clone()))?;
        let f = rhs
            .order(k - 1)
            .cloned()
            .ok_or_else(|| Error::Unsupported("forcing map shortened the series".into()))?;
        let mut yk = AmpSeq::zero(arity, anchor);
        for (mono, seq) in f.terms() {
            let p = particular_with_roots(&problem.operator, &problem.roots, seq)?;
            yk = yk.add(&AmpSeq::from_seq(arity, mono.clone(), p))?;
        }
        orders.push(yk);
        forcings.push(f);
    }
    let first_order_lead =
        (problem.operator.order() == 1).then(|| problem.operator.coeffs()[0].clone());
    Ok(PerturbationSolution {
        anchor,
        orders,
        forcings,
        amplitudes: problem.amplitudes.clone(),
        first_order_lead,
        homotopy: problem.homotopy,
    })
}

/// `Y_0 = sum_k eps^k y_k` and `Y_1 = sum_k eps^k D y_k`, as amplitude
/// polynomials in `n` anchored at `m`; their values at `n = m` are the
/// Newton coefficients of the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectedY<S> {
    pub y0: AmpSeq<S>,
    pub y1: AmpSeq<S>,
}

impl<S: Scalar> CollectedY<S> {
    /// `(Y_0(m), Y_1(m))` at the anchor for numeric amplitudes.
    pub fn at_anchor(&self, amps: &[S]) -> (S, S) {
        let m = self.y0.anchor();
        (self.y0.eval(m, amps), self.y1.eval(m, amps))
    }
}

pub fn collect_y<S: Scalar>(sol: &PerturbationSolution<S>, eps: &S) -> Result<CollectedY<S>> {
    let e = sol.effective_epsilon(eps);
    let arity = sol.amplitudes.len();
    let mut y0 = AmpSeq::zero(arity, sol.anchor);
    let mut y1 = AmpSeq::zero(arity, sol.anchor);
    for (k, yk) in sol.orders.iter().enumerate() {
        let w = e.ipow(k as i64);
        y0 = y0.add(&yk.scale(&w))?;
        y1 = y1.add(&yk.delta().scale(&w))?;
    }
    Ok(CollectedY { y0, y1 })
}

/// A secular coefficient: `coeff * A^monomial` multiplying
/// `eps^order mode^n C(n - m, degree)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularTerm<S> {
    pub amplitude: usize,
    pub order: usize,
    pub degree: u32,
    pub monomial: Monomial,
    pub coeff: S,
}

/// All terms of degree >= 1 in `y_1, ..., y_K`, each matched to the
/// amplitude whose mode it sits on.
pub fn secular_terms<S: Scalar>(sol: &PerturbationSolution<S>) -> Result<Vec<SecularTerm<S>>> {
    let mut out = Vec::new();
    for (k, yk) in sol.orders.iter().enumerate().skip(1) {
        for (mono, seq) in yk.terms() {
            for t in seq.terms().iter().filter(|t| t.degree >= 1) {
                let j = sol
                    .amplitudes
                    .iter()
                    .position(|a| a.mode.same_base(&t.base))
                    .ok_or_else(|| Error::UnmatchedSecularMode {
                        base: format!("{:?}", t.base.to_c64()),
                    })?;
                out.push(SecularTerm {
                    amplitude: j,
                    order: k,
                    degree: t.degree,
                    monomial: mono.clone(),
                    coeff: t.coeff.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Which parts of the secular coefficients enter the update equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Closure {
    /// Only the term proportional to the amplitude itself.
    #[default]
    Linear,
    /// Every amplitude monomial, plus frozen non-resonant contributions for
    /// first-order operators.
    Full,
}

impl std::str::FromStr for Closure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Closure::Linear),
            "full" => Ok(Closure::Full),
            other => Err(Error::Unsupported(format!("unknown closure {other:?}"))),
        }
    }
}

/// `coeff eps^eps_power A^monomial rate^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateTerm<S> {
    pub coeff: S,
    pub eps_power: u32,
    pub monomial: Monomial,
    pub rate: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    LinearDiagonal,
    Nonlinear,
}

/// `DA_j(m) = sum of updates[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenormSystem<S> {
    pub amplitudes: Vec<Amplitude<S>>,
    pub updates: Vec<Vec<UpdateTerm<S>>>,
    pub kind: SystemKind,
    pub homotopy: bool,
}

impl<S: Scalar> RenormSystem<S> {
    pub fn new(
        amplitudes: Vec<Amplitude<S>>,
        updates: Vec<Vec<UpdateTerm<S>>>,
        homotopy: bool,
    ) -> Self {
        let diagonal = updates.iter().enumerate().all(|(j, terms)| {
            terms
                .iter()
                .all(|t| is_unit(&t.monomial, j) && t.rate.same_base(&S::one()))
        });
        RenormSystem {
            amplitudes,
            updates,
            kind: if diagonal {
                SystemKind::LinearDiagonal
            } else {
                SystemKind::Nonlinear
            },
            homotopy,
        }
    }

    fn effective_epsilon(&self, eps: &S) -> S {
        if self.homotopy {
            S::one()
        } else {
            eps.clone()
        }
    }

    /// `c_j` in `DA_j = c_j A_j`, for linear-diagonal systems.
    pub fn diagonal_rate(&self, j: usize, eps: &S) -> Option<S> {
        (self.kind == SystemKind::LinearDiagonal).then(|| {
            let e = self.effective_epsilon(eps);
            self.updates[j].iter().fold(S::zero(), |acc, t| {
                acc + t.coeff.clone() * e.ipow(t.eps_power as i64)
            })
        })
    }

    /// `DA(m)` at amplitudes `amps`.
    pub fn increment(&self, m: i64, amps: &[S], eps: &S) -> Vec<S> {
        let e = self.effective_epsilon(eps);
        self.updates
            .iter()
            .map(|terms| {
                terms.iter().fold(S::zero(), |acc, t| {
                    acc + t.coeff.clone()
                        * e.ipow(t.eps_power as i64)
                        * monomial_value(&t.monomial, amps)
                        * t.rate.ipow(m)
                })
            })
            .collect()
    }
}

fn is_unit(mono: &[u32], j: usize) -> bool {
    mono.iter()
        .enumerate()
        .all(|(i, &e)| e == u32::from(i == j))
}

/// Builds one update per amplitude from the degree-1 secular coefficients.
/// The value of `D[r^n C(n - m, 1)]` at `n = m` is `r^(m+1)`, which matches
/// `r^(m+1) DA` in `D(A r^m)`, so the coefficient itself is the rate.
pub fn form_renorm_system<S: Scalar>(
    sol: &PerturbationSolution<S>,
    closure: Closure,
) -> Result<RenormSystem<S>> {
    let arity = sol.amplitudes.len();
    let mut updates: Vec<Vec<UpdateTerm<S>>> = vec![Vec::new(); arity];
    for st in secular_terms(sol)?.into_iter().filter(|s| s.degree == 1) {
        if closure == Closure::Linear && !is_unit(&st.monomial, st.amplitude) {
            continue;
        }
        updates[st.amplitude].push(UpdateTerm {
            coeff: st.coeff,
            eps_power: st.order as u32,
            monomial: st.monomial,
            rate: S::one(),
        });
    }
    if closure == Closure::Full {
        if let Some(lead) = &sol.first_order_lead {
            let mode = sol.amplitudes[0].mode.clone();
            // frozen forcing: the solution of c_1 y(n+1) - c_1 r y(n) = f(n)
            // grows by f(m) / (c_1 r) per step near n = m
            for (k, f) in sol.forcings.iter().enumerate() {
                for (mono, seq) in f.terms() {
                    for t in seq.terms() {
                        if t.degree != 0 || t.base.same_base(&mode) {
                            continue;
                        }
                        updates[0].push(UpdateTerm {
                            coeff: t.coeff.clone() / (lead.clone() * mode.clone()),
                            eps_power: (k + 1) as u32,
                            monomial: mono.clone(),
                            rate: t.base.clone() / mode.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(RenormSystem::new(sol.amplitudes.clone(), updates, sol.homotopy))
}

/// Solved amplitude sequence `A(m)`.
#[derive(Debug, Clone, PartialEq)]
pub enum AmplitudePath<S> {
    /// `initial * factor^m`, with `factor = 1 + rate` and the asymptotic
    /// identification `factor^m ~ exp(rate m)`.
    Geometric { initial: S, factor: S, rate: S },
    /// Forward iteration of a nonlinear system, `A(0), ..., A(n_max)`.
    Tabulated(Vec<Complex64>),
}

impl<S: Scalar> AmplitudePath<S> {
    /// Power form; tabulated paths return NaN beyond their horizon.
    pub fn at(&self, m: i64) -> Complex64 {
        match self {
            AmplitudePath::Geometric {
                initial, factor, ..
            } => (initial.clone() * factor.ipow(m)).to_c64(),
            AmplitudePath::Tabulated(t) => usize::try_from(m)
                .ok()
                .and_then(|i| t.get(i).copied())
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }

    /// `A(m)` in the path's own scalar; exact for geometric paths.
    pub fn value_at(&self, m: i64) -> S {
        match self {
            AmplitudePath::Geometric {
                initial, factor, ..
            } => initial.clone() * factor.ipow(m),
            AmplitudePath::Tabulated(_) => S::from_c64(self.at(m)),
        }
    }
}

/// Linear-diagonal systems solve in closed form; nonlinear systems are
/// iterated forward for `m = 0..n_max` in double precision.
pub fn solve_renorm<S: Scalar>(
    sys: &RenormSystem<S>,
    eps: &S,
    initial: &[S],
    n_max: usize,
) -> Result<Vec<AmplitudePath<S>>> {
    if initial.len() != sys.amplitudes.len() {
        return Err(Error::BoundaryCount {
            expected: sys.amplitudes.len(),
            got: initial.len(),
        });
    }
    if sys.kind == SystemKind::LinearDiagonal {
        return Ok((0..initial.len())
            .map(|j| {
                let rate = sys.diagonal_rate(j, eps).expect("diagonal system");
                AmplitudePath::Geometric {
                    initial: initial[j].clone(),
                    factor: S::one() + rate.clone(),
                    rate,
                }
            })
            .collect());
    }
    let fsys = to_float(sys);
    let e = eps.to_c64();
    let mut state: Vec<Complex64> = initial.iter().map(|a| a.to_c64()).collect();
    let mut tables: Vec<Vec<Complex64>> = state.iter().map(|a| vec![*a]).collect();
    for m in 0..n_max {
        let inc = fsys.increment(m as i64, &state, &e);
        for (j, d) in inc.into_iter().enumerate() {
            state[j] += d;
            if !(state[j].norm() <= AMPLITUDE_GUARD) {
                return Err(Error::Divergence {
                    n: m + 1,
                    value: state[j].norm(),
                });
            }
            tables[j].push(state[j]);
        }
    }
    Ok(tables.into_iter().map(AmplitudePath::Tabulated).collect())
}

fn to_float<S: Scalar>(sys: &RenormSystem<S>) -> RenormSystem<Complex64> {
    RenormSystem {
        amplitudes: sys
            .amplitudes
            .iter()
            .map(|a| Amplitude {
                name: a.name.clone(),
                mode: a.mode.to_c64(),
                conjugate: a.conjugate,
            })
            .collect(),
        updates: sys
            .updates
            .iter()
            .map(|ts| {
                ts.iter()
                    .map(|t| UpdateTerm {
                        coeff: t.coeff.to_c64(),
                        eps_power: t.eps_power,
                        monomial: t.monomial.clone(),
                        rate: t.rate.to_c64(),
                    })
                    .collect()
            })
            .collect(),
        kind: sys.kind,
        homotopy: sys.homotopy,
    }
}

/// `Y_0(m+1; A(m+1)) - Y_0(m; A(m)) - Y_1(m; A(m))` for each `m` in `ms`,
/// using the expansion relabelled to anchor `m` (its coefficients do not
/// depend on the anchor).
pub fn consistency_residuals<S: Scalar>(
    sol: &PerturbationSolution<S>,
    paths: &[AmplitudePath<S>],
    eps: &S,
    ms: std::ops::Range<i64>,
) -> Result<Vec<Complex64>> {
    let collected = collect_y(sol, eps)?;
    let amps_at = |m: i64| -> Vec<S> { paths.iter().map(|p| p.value_at(m)).collect() };
    ms.map(|m| {
        let here = CollectedY {
            y0: collected.y0.with_anchor(m),
            y1: collected.y1.with_anchor(m),
        };
        let next = collected.y0.with_anchor(m + 1);
        let (y0, y1) = here.at_anchor(&amps_at(m));
        let y0_next = next.eval(m + 1, &amps_at(m + 1));
        Ok((y0_next - y0 - y1).to_c64())
    })
    .collect()
}

/// The constant-rate part of the secular coefficient on one mode, as an
/// exponential-binomial sequence: used to expose `Y_1` per mode.
pub fn mode_component<S: Scalar>(y: &AmpSeq<S>, monomial: &[u32], mode: &S) -> ExpBinomSeq<S> {
    let seq = y.coeff(monomial);
    ExpBinomSeq::from_terms(
        seq.anchor(),
        seq.terms()
            .iter()
            .filter(|t| t.base.same_base(mode))
            .cloned()
            .collect(),
    )
}
