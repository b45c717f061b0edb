//! The `--dump-solution` document: samples of the global solution, its
//! exponential-binomial terms where they exist, and the residual scan.

use num_complex::Complex64;
use serde::Serialize;

use renorm_core::cases::CaseSolution;
use renorm_core::renorm::{residual_scan, Basis, GlobalSolution, Growth, Identification};
use renorm_core::seqalg::TermRecord;

#[derive(Debug, Serialize)]
pub struct Sample {
    pub n: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize)]
pub struct ResidualDump {
    pub n: Vec<i64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub sup: f64,
}

#[derive(Debug, Serialize)]
pub struct SolutionDump {
    pub case: serde_json::Value,
    pub order: usize,
    pub form: Identification,
    pub window: usize,
    pub samples: Vec<Sample>,
    /// Components of the form `c r^n`, anchored at zero.
    pub terms: Vec<TermRecord>,
    /// Components with tabulated amplitudes or a non-geometric basis.
    pub other_components: Vec<String>,
    pub residual: ResidualDump,
}

fn term(coeff: Complex64, base: Complex64) -> TermRecord {
    TermRecord {
        coeff_re: coeff.re,
        coeff_im: coeff.im,
        base_re: base.re,
        base_im: base.im,
        anchor: 0,
        degree: 0,
    }
}

fn split_terms(global: &GlobalSolution) -> (Vec<TermRecord>, Vec<String>) {
    let mut terms = Vec::new();
    let mut other = Vec::new();
    for c in &global.components {
        let coeff = c.weight * c.value;
        match (&c.basis, &c.growth) {
            (Basis::Power(r), Growth::Constant) => terms.push(term(coeff, *r)),
            (Basis::Power(r), Growth::Geometric { factor, rate }) => {
                let step = match global.form {
                    Identification::Power => *factor,
                    Identification::Exponential => rate.exp(),
                };
                terms.push(term(coeff, r * step));
            }
            _ => other.push(c.name.clone()),
        }
    }
    (terms, other)
}

pub fn solution_dump(sol: &CaseSolution, order: usize, window: usize) -> SolutionDump {
    let g = &sol.global;
    let samples = (0..=window as i64)
        .map(|n| {
            let v = g.evaluate(n);
            Sample { n, re: v.re, im: v.im }
        })
        .collect();
    let case = &sol.case;
    let scan = residual_scan(g, &|y, n| case.residual(y, n), 0..=window as i64);
    let (terms, other_components) = split_terms(g);
    SolutionDump {
        case: serde_json::to_value(case).expect("case serializes"),
        order,
        form: g.form,
        window,
        samples,
        terms,
        other_components,
        residual: ResidualDump {
            re: scan.values.iter().map(|v| v.re).collect(),
            im: scan.values.iter().map(|v| v.im).collect(),
            n: scan.n,
            sup: scan.sup,
        },
    }
}
